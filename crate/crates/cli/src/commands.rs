//! Subcommand bodies. Each returns a [`Table`]; scans run through the
//! data-parallel map and rows are assembled in grid order.

use zrp_core::geometry::tetrahedron_edge;
use zrp_core::gzrp::{resonance_poles, tan_phase, ImaginaryPole};
use zrp_core::multicenter::{cross_sections, solve, MERGE_TOL};
use zrp_core::presets::fit_dressing;
use zrp_core::scan::{map, try_map};
use zrp_core::structures::{xn_phases, yxn_phases};
use zrp_core::units::hartree_to_ev;
use zrp_core::{Alpha, Channel, Wavenumber};

use crate::config::{Mode, PresetName, RunConfig, Source};
use crate::error::{CliError, Result};
use crate::table::{Cell, Table};

/// Distinct `tan eta` values with multiplicities, ascending.
pub type Modes = Vec<(f64, usize)>;

fn merge(mut roots: Vec<(f64, usize)>) -> Modes {
    roots.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Modes = Vec::new();
    for (x, m) in roots {
        match out.last_mut() {
            Some(last) if (last.0 - x).abs() < MERGE_TOL * (1.0 + x.abs().min(last.0.abs())) || last.0 == x => {
                last.1 += m
            }
            _ => out.push((x, m)),
        }
    }
    out
}

/// Closed-form phases when the configuration is an undressed preset that
/// has one.
pub fn closed_form(config: &RunConfig, k: Wavenumber) -> Option<Result<Modes>> {
    let p = config.preset()?;
    if !config.dress.is_empty() {
        return None;
    }
    let kk = k.get();
    let modes = match p.name {
        PresetName::Single => Ok(vec![(tan_phase(Channel::new(p.l, p.alpha), k), 1)]),
        PresetName::X2 | PresetName::X3 | PresetName::X4 => {
            let n = p.xn_count().expect("xn preset");
            xn_phases(n, p.r, p.alpha, kk).map(|x| merge(vec![(x.tan_eta_1, 1), (x.tan_eta_deg, n - 1)]))
        }
        PresetName::Yx4 | PresetName::Silane => yxn_phases(4, tetrahedron_edge(p.d), p.d, p.alpha, p.beta, kk)
            .map(|y| merge(vec![(y.tan_eta_12.0, 1), (y.tan_eta_12.1, 1), (y.tan_eta_deg, 3)])),
        PresetName::SilaneDressed => return None,
    };
    Some(modes.map_err(CliError::from))
}

pub fn solver_modes(geometry: &zrp_core::Geometry, k: Wavenumber) -> Result<Modes> {
    let sol = solve(geometry, k)?;
    Ok(sol.modes.iter().map(|m| (m.tan_eta, m.multiplicity())).collect())
}

/// Largest phase difference between two mode lists expanded by
/// multiplicity, matching roots greedily on the circle (`eta = +-pi/2` are
/// the same phase); infinite if the root counts differ.
pub fn deviation(a: &Modes, b: &Modes) -> f64 {
    let expand = |m: &Modes| -> Vec<f64> { m.iter().flat_map(|&(x, n)| std::iter::repeat_n(x.atan(), n)).collect() };
    let (ea, mut eb) = (expand(a), expand(b));
    if ea.len() != eb.len() {
        return f64::INFINITY;
    }
    let dist = |x: f64, y: f64| {
        let d = (x - y).abs();
        d.min(std::f64::consts::PI - d)
    };
    let mut worst = 0.0f64;
    for x in ea {
        let (j, d) = eb
            .iter()
            .enumerate()
            .map(|(j, &y)| (j, dist(x, y)))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .expect("equal lengths");
        eb.swap_remove(j);
        worst = worst.max(d);
    }
    worst
}

fn width(rows: &[Modes]) -> usize {
    rows.iter().map(Vec::len).max().unwrap_or(0)
}

/// Rows `(E, k, tan eta_1.., mult_1..)`.
pub fn cmd_phases(config: &RunConfig) -> Result<Table> {
    let ks = config.grid.wavenumbers()?;
    let rows: Vec<Modes> = if closed_form(config, ks[0]).is_some() {
        map(&ks, |&k| closed_form(config, k).expect("closed form available")).into_iter().collect::<Result<_>>()?
    } else {
        let g = config.geometry()?;
        map(&ks, |&k| solver_modes(&g, k)).into_iter().collect::<Result<_>>()?
    };
    let m = width(&rows);
    let mut columns = vec![config.grid.unit.column().to_string(), "k_au".to_string()];
    columns.extend((1..=m).map(|i| format!("tan_eta_{i}")));
    columns.extend((1..=m).map(|i| format!("mult_{i}")));
    let mut table = Table::new(columns);
    for ((e, k), modes) in config.grid.grid()?.points().into_iter().zip(&ks).zip(&rows) {
        let mut row = vec![e, k.get()];
        row.extend((0..m).map(|i| modes.get(i).map_or(f64::NAN, |x| x.0)));
        row.extend((0..m).map(|i| modes.get(i).map_or(f64::NAN, |x| x.1 as f64)));
        table.push_numbers(&row);
    }
    Ok(table)
}

/// Closed form against the generalized solver on the configured grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyReport {
    pub points: usize,
    pub max_deviation: f64,
    pub worst_k: f64,
    pub multiplicities_agree: bool,
}

pub fn cmd_verify(config: &RunConfig) -> Result<VerifyReport> {
    let ks = config.grid.wavenumbers()?;
    if closed_form(config, ks[0]).is_none() {
        return Err(CliError::Config("verify needs an undressed preset with a closed form (single, x2, x3, x4, yx4, silane)".into()));
    }
    let g = config.geometry()?;
    let pairs = map(&ks, |&k| -> Result<(Modes, Modes)> {
        Ok((closed_form(config, k).expect("checked above")?, solver_modes(&g, k)?))
    });
    let mut report = VerifyReport { points: ks.len(), max_deviation: 0.0, worst_k: ks[0].get(), multiplicities_agree: true };
    for (k, pair) in ks.iter().zip(pairs) {
        let (cf, sv) = pair?;
        let mut mc: Vec<usize> = cf.iter().map(|m| m.1).collect();
        let mut ms: Vec<usize> = sv.iter().map(|m| m.1).collect();
        mc.sort_unstable();
        ms.sort_unstable();
        report.multiplicities_agree &= mc == ms;
        let d = deviation(&cf, &sv);
        if d > report.max_deviation || d.is_nan() {
            report.max_deviation = d;
            report.worst_k = k.get();
        }
    }
    Ok(report)
}

/// Rows `(E, k, sigma, sigma_1.., mult_1..)` with `sigma` the
/// orientation-averaged integral cross section in a0^2.
pub fn cmd_ics(config: &RunConfig) -> Result<Table> {
    let ks = config.grid.wavenumbers()?;
    let g = config.geometry()?;
    let rows = try_map(&ks, |&k| {
        let sol = solve(&g, k)?;
        let cs = cross_sections(&sol);
        let mults: Vec<usize> = sol.modes.iter().map(|m| m.multiplicity()).collect();
        Ok((cs, mults))
    })?;
    let m = rows.iter().map(|r| r.1.len()).max().unwrap_or(0);
    let mut columns = vec![config.grid.unit.column().to_string(), "k_au".to_string(), "sigma_au".to_string()];
    columns.extend((1..=m).map(|i| format!("sigma_{i}")));
    columns.extend((1..=m).map(|i| format!("mult_{i}")));
    let mut table = Table::new(columns);
    for ((e, k), (cs, mults)) in config.grid.grid()?.points().into_iter().zip(&ks).zip(&rows) {
        let mut row = vec![e, k.get(), cs.averaged];
        row.extend((0..m).map(|i| cs.partial.get(i).copied().unwrap_or(f64::NAN)));
        row.extend((0..m).map(|i| mults.get(i).map_or(f64::NAN, |&x| x as f64)));
        table.push_numbers(&row);
    }
    Ok(table)
}

/// Coarse b scan used when `silane-dressed` is given a reference curve.
pub fn dressing_candidates() -> Vec<f64> {
    (0..=40).map(|i| 0.01 * 300f64.powf(i as f64 / 40.0)).collect()
}

/// Pick b for `silane-dressed` from a reference ICS (`E_eV`, `sigma` in a0^2).
pub fn fit_dressing_b(reference: &[(f64, f64)], mode: Mode) -> Result<(f64, f64)> {
    Ok(fit_dressing(reference, &dressing_candidates(), mode.into())?)
}

/// Reference curve from a CSV: energies (eV) in the first column, cross
/// sections (a0^2) in `sigma_au` if present, else the second column.
pub fn read_reference(path: &std::path::Path) -> Result<Vec<(f64, f64)>> {
    let table = Table::read_csv(std::fs::File::open(path)?)?;
    if table.columns.len() < 2 {
        return Err(CliError::Config(format!("{}: reference needs two columns (E_eV, sigma)", path.display())));
    }
    let j = table.columns.iter().position(|c| c == "sigma_au").unwrap_or(1);
    table
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| match (r[0].as_f64(), r[j].as_f64()) {
            (Some(e), Some(s)) if e.is_finite() && s.is_finite() => Ok((e, s)),
            _ => Err(CliError::Parse { path: path.display().to_string(), line: i + 2, message: "non-numeric value".into() }),
        })
        .collect()
}

/// Bound, antibound and resonance poles of one channel.
pub fn cmd_poles(l: u32, alpha: f64) -> Result<Table> {
    if !alpha.is_finite() {
        return Err(CliError::Config(format!("alpha must be finite, got {alpha}")));
    }
    let set = resonance_poles(Channel::new(l, Alpha::Finite(alpha)));
    let mut table = Table::new(
        ["kind", "k_re", "k_im", "E_re_Ha", "E_im_Ha", "E_re_eV", "E_im_eV"].map(String::from).to_vec(),
    );
    let mut push = |kind: &str, k: num_complex::Complex64| {
        let e = k * k * 0.5;
        table.push(vec![
            Cell::Text(kind.into()),
            Cell::Num(k.re),
            Cell::Num(k.im),
            Cell::Num(e.re),
            Cell::Num(e.im),
            Cell::Num(hartree_to_ev(e.re)),
            Cell::Num(hartree_to_ev(e.im)),
        ]);
    };
    match set.imaginary {
        Some(p @ ImaginaryPole::Bound { .. }) => push("bound", p.k()),
        Some(p @ ImaginaryPole::Antibound { .. }) => push("antibound", p.k()),
        None => {}
    }
    for &k in &set.resonances {
        push("resonance", k);
    }
    Ok(table)
}

pub fn source_label(config: &RunConfig) -> String {
    match &config.source {
        Source::Preset(p) => format!("{:?}", p.name).to_lowercase(),
        Source::File(path) => path.display().to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_combines_close_roots() {
        let m = merge(vec![(1.0, 1), (0.5, 1), (1.0 + 1e-12, 2)]);
        assert_eq!(m, vec![(0.5, 1), (1.0, 3)]);
    }

    #[test]
    fn deviation_handles_half_pi() {
        let a = vec![(f64::INFINITY, 1), (0.1, 2)];
        let b = vec![(0.1, 2), (-1e17, 1)];
        assert!(deviation(&a, &b) < 1e-15);
        assert!(deviation(&a, &vec![(0.1, 3)]) > 1.0);
        assert_eq!(deviation(&a, &vec![(0.1, 1)]), f64::INFINITY);
    }

    #[test]
    fn poles_l1() {
        let t = cmd_poles(1, -8.0).unwrap();
        let kinds: Vec<String> = t.rows.iter().map(|r| match &r[0] {
            Cell::Text(s) => s.clone(),
            _ => unreachable!(),
        }).collect();
        assert_eq!(kinds, ["bound", "resonance", "resonance"]);
        assert!((t.column("k_im").unwrap()[0] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn candidates_span_range() {
        let c = dressing_candidates();
        assert!((c[0] - 0.01).abs() < 1e-15 && (c[40] - 3.0).abs() < 1e-12);
    }
}
