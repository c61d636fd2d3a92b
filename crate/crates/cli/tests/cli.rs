use std::path::Path;
use std::process::{Command, Output};

use zrp_cli::Table;

fn zrp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zrp")).args(args).output().expect("run zrp")
}

fn ok(args: &[&str]) -> String {
    let out = zrp(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn csv(text: &str) -> Table {
    Table::read_csv(text.as_bytes()).unwrap()
}

const YX4: &str = "\
# YX4 with D = 2.76
 1.593486  1.593486  1.593486  0.33
 1.593486 -1.593486 -1.593486  0.33
-1.593486  1.593486 -1.593486  0.33
-1.593486 -1.593486  1.593486  0.33
 0 0 0 0.41
";

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn single_preset_tan_column() {
    let t = csv(&ok(&["phases", "--preset", "single", "--alpha", "0.33", "--unit", "ha", "--emin", "0.01", "--emax", "1", "--n", "7"]));
    assert_eq!(t.columns, ["E_Ha", "k_au", "tan_eta_1", "mult_1"]);
    let (k, x) = (t.column("k_au").unwrap(), t.column("tan_eta_1").unwrap());
    for (k, x) in k.iter().zip(&x) {
        assert!((x + k / 0.33).abs() < 1e-14);
    }
}

#[test]
fn x4_preset_two_phase_columns() {
    let k = 0.25f64;
    let e = (0.5 * k * k).to_string();
    let t = csv(&ok(&["phases", "--preset", "x4", "--r", "4.51", "--alpha", "0.33", "--unit", "ha", "--emin", &e, "--emax", &e, "--n", "2"]));
    assert_eq!(t.columns.len(), 6);
    let mut m = vec![t.column("mult_1").unwrap()[0], t.column("mult_2").unwrap()[0]];
    m.sort_by(f64::total_cmp);
    assert_eq!(m, [1.0, 3.0]);
}

#[test]
fn verify_flag_reports_agreement() {
    let out = zrp(&["phases", "--preset", "yx4", "--verify", "--n", "20"]);
    assert!(out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    let dev: f64 = err.split("eta = ").nth(1).unwrap().split_whitespace().next().unwrap().parse().unwrap();
    assert!(dev < 1e-10, "{err}");
    assert!(err.contains("agree"));
}

#[test]
fn verify_subcommand_exit_codes() {
    assert!(zrp(&["verify", "--preset", "x3", "--n", "30"]).status.success());
    let out = zrp(&["verify", "--preset", "silane-dressed", "--b", "0.1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn geometry_file_matches_preset() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "yx4.txt", YX4);
    let a = csv(&ok(&["ics", "--geometry", &path, "--n", "5"]));
    let b = csv(&ok(&["ics", "--preset", "silane", "--n", "5"]));
    for (x, y) in a.column("sigma_au").unwrap().iter().zip(b.column("sigma_au").unwrap()) {
        assert!(((x - y) / y).abs() < 1e-5, "{x} {y}");
    }
}

#[test]
fn malformed_geometry_names_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "bad.txt", "0 0 0 0.3\n# ok\n1 2 three 0.3\n");
    let out = zrp(&["phases", "--geometry", &path]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bad.txt:3:"), "{err}");
    let path = write(dir.path(), "dup.txt", "0 0 0 0.3\n0 0 0 0.4\n");
    let err = String::from_utf8(zrp(&["phases", "--geometry", &path]).stderr).unwrap();
    assert!(err.contains("dup.txt:2:") && err.contains("duplicate"), "{err}");
}

#[test]
fn json_output_round_trips_and_echoes_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ics.json");
    let csv_text = ok(&["ics", "--preset", "silane", "--n", "9", "--log"]);
    ok(&["ics", "--preset", "silane", "--n", "9", "--log", "--format", "json", "--out", out.to_str().unwrap()]);
    let (config, table) = Table::read_json(std::fs::File::open(&out).unwrap()).unwrap();
    let p = &config["source"]["preset"];
    assert_eq!((p["alpha"].as_f64(), p["beta"].as_f64()), (Some(0.33), Some(0.41)));
    assert_eq!((p["r"].as_f64(), p["d"].as_f64()), (Some(4.51), Some(2.76)));
    let from_csv = csv(&csv_text);
    for c in &table.columns {
        let (a, b) = (table.column(c).unwrap(), from_csv.column(c).unwrap());
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() <= 1e-15 * y.abs(), "{c}: {x} {y}");
        }
    }
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for p in [&a, &b] {
        ok(&["ics", "--preset", "silane-dressed", "--b", "0.1", "--n", "40", "--out", p.to_str().unwrap()]);
    }
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn silane_dressed_echo_and_requirements() {
    let out = zrp(&["ics", "--preset", "silane-dressed"]);
    assert_eq!(out.status.code(), Some(2));
    let text = ok(&["ics", "--preset", "silane-dressed", "--b", "0.05", "--n", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let p = &v["config"]["source"]["preset"];
    assert_eq!((p["alpha"].as_f64(), p["beta"].as_f64()), (Some(0.35), Some(0.38)));
}

#[test]
fn reference_fit_picks_b() {
    let dir = tempfile::tempdir().unwrap();
    let reference = dir.path().join("ref.csv");
    ok(&["ics", "--preset", "silane-dressed", "--b", "0.1", "--emin", "0.1", "--emax", "2", "--n", "12", "--out", reference.to_str().unwrap()]);
    let out = zrp(&["ics", "--preset", "silane-dressed", "--reference", reference.to_str().unwrap(), "--n", "3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let err = String::from_utf8(out.stderr).unwrap();
    let b: f64 = err.split("b = ").nth(1).unwrap().split_whitespace().next().unwrap().parse().unwrap();
    assert!((b - 0.1).abs() < 0.02, "{err}");
}

#[test]
fn dress_flag_and_missing_site() {
    let t = csv(&ok(&["ics", "--preset", "yx4", "--alpha", "0.35", "--beta", "0.38", "--dress", "0:0.1", "--n", "3"]));
    assert!(t.column("sigma_au").unwrap().iter().all(|s| s.is_finite() && *s > 0.0));
    let out = zrp(&["ics", "--preset", "yx4", "--dress", "7:0.1"]);
    assert!(String::from_utf8(out.stderr).unwrap().contains("site 7"));
}

#[test]
fn poles_table() {
    let t = csv(&ok(&["poles", "--l", "0", "--alpha", "0.33"]));
    let e = t.column("E_re_Ha").unwrap()[0];
    assert!((e + 0.05445).abs() < 1e-12);
    assert!((t.column("E_re_eV").unwrap()[0] + 1.4816).abs() < 1e-4);
    let anti = ok(&["poles", "--alpha", "-0.2"]);
    assert!(anti.contains("antibound"));
    let l1 = ok(&["poles", "--l", "1", "--alpha", "-8"]);
    assert_eq!(l1.matches("resonance").count(), 2);
    assert_eq!(l1.matches("bound").count(), 1);
}
