use std::f64::consts::PI;
use std::time::Duration;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zrp_core::darboux::{dressed_tan_phase0, DressingStep};
use zrp_core::geometry::{build_xn, build_yxn, tetrahedron_edge};
use zrp_core::greens::{dressed_kernels, free_kernels};
use zrp_core::gzrp::{bound_state, s_matrix_element, tan_phase, ImaginaryPole};
use zrp_core::multicenter::{cross_sections, scattering_amplitude, solve, solve_phases, PhaseSolution};
use zrp_core::oracle::det_scan::{det_scan, expanded};
use zrp_core::oracle::quadrature::{SphereRule, DEFAULT_ORDER};
use zrp_core::oracle::{integrate_phase, Boundary, RadialGrid};
use zrp_core::presets::{self, DressingMode};
use zrp_core::scan::{cross_section_curve, local_minima, map, EnergyUnit, Grid, Spacing};
use zrp_core::structures::{xn_phases, yxn_phases};
use zrp_core::{Alpha, Channel, Wavenumber, HARTREE_EV};

use crate::{timed, Outcome};

fn wn(k: f64) -> Wavenumber {
    Wavenumber::new(k).expect("positive wavenumber")
}

/// Phase-scale distance between two `tan eta` values (`eta = +-pi/2` coincide).
fn phase_distance(a: f64, b: f64) -> f64 {
    let d = (a.atan() - b.atan()).abs();
    d.min(PI - d)
}

fn expanded_modes(sol: &PhaseSolution) -> (Vec<f64>, Vec<usize>) {
    let xs = sol.modes.iter().flat_map(|m| std::iter::repeat_n(m.tan_eta, m.multiplicity())).collect();
    let mut mult: Vec<usize> = sol.multiplicities();
    mult.sort_unstable();
    (xs, mult)
}

/// tan eta = -k/alpha, sigma = 4 pi/(k^2 + alpha^2), |S| = 1.
pub fn single_center() -> Outcome {
    timed(1, "single-center exactness", Some(Duration::from_secs(1)), || {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (mut dt, mut ds, mut du) = (0.0f64, 0.0f64, 0.0f64);
        for _ in 0..1000 {
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let alpha = sign * rng.gen_range(0.05..2.0);
            let k = rng.gen_range(0.02..3.0);
            let tan = tan_phase(Channel::s_wave(alpha), wn(k));
            let expect = -k / alpha;
            dt = dt.max((tan - expect).abs() / expect.abs().max(1.0));
            let g = presets::single(alpha).expect("single site");
            let sigma = cross_sections(&solve(&g, wn(k)).expect("1x1 pencil")).total;
            let sref = 4.0 * PI / (k * k + alpha * alpha);
            ds = ds.max((sigma - sref).abs() / sref);
            du = du.max((s_matrix_element(Channel::s_wave(alpha), wn(k)).value.norm() - 1.0).abs());
        }
        let ok = dt < 1e-12 && ds < 1e-12 && du < 1e-14;
        (ok, format!("max rel err tan {dt:.1e}, sigma {ds:.1e}; max ||S|-1| {du:.1e}"))
    })
}

/// X2, X3, X4 and YX4 closed forms against the generalized solver.
pub fn closed_form_vs_solver() -> Outcome {
    timed(2, "closed form vs pencil solver", Some(Duration::from_secs(5)), || {
        let (alpha, beta, r, d) = (presets::SILANE_ALPHA, presets::SILANE_BETA, presets::SILANE_R, presets::SILANE_D);
        let ks: Vec<f64> = (0..200).map(|i| 0.02 + (2.0 - 0.02) * i as f64 / 199.0).collect();
        let mut worst = 0.0f64;
        let mut bad_mult = Vec::new();
        let mut errors = Vec::new();
        for n in [2usize, 3, 4, 5] {
            let (g, expect_mult) = if n < 5 {
                (build_xn(n, r, alpha).expect("xn"), vec![1, n - 1])
            } else {
                (build_yxn(4, d, alpha, beta).expect("yx4"), vec![1, 1, 3])
            };
            let rows = map(&ks, |&k| -> Result<(f64, Vec<usize>), String> {
                let mut cf = if n < 5 {
                    let x = xn_phases(n, r, alpha, k).map_err(|e| e.to_string())?;
                    let mut v = vec![x.tan_eta_1];
                    v.extend(std::iter::repeat_n(x.tan_eta_deg, n - 1));
                    v
                } else {
                    let y = yxn_phases(4, tetrahedron_edge(d), d, alpha, beta, k).map_err(|e| e.to_string())?;
                    vec![y.tan_eta_12.0, y.tan_eta_12.1, y.tan_eta_deg, y.tan_eta_deg, y.tan_eta_deg]
                };
                let sol = solve(&g, wn(k)).map_err(|e| e.to_string())?;
                let (mut sv, mult) = expanded_modes(&sol);
                cf.sort_by(|a, b| a.atan().total_cmp(&b.atan()));
                sv.sort_by(|a, b| a.atan().total_cmp(&b.atan()));
                let dev = cf.iter().zip(&sv).map(|(a, b)| phase_distance(*a, *b)).fold(0.0, f64::max);
                Ok((if cf.len() == sv.len() { dev } else { f64::INFINITY }, mult))
            });
            for (k, row) in ks.iter().zip(rows) {
                match row {
                    Ok((dev, mult)) => {
                        worst = worst.max(dev);
                        if mult != expect_mult {
                            bad_mult.push(format!("n={n} k={k}: {mult:?}"));
                        }
                    }
                    Err(e) => errors.push(format!("n={n} k={k}: {e}")),
                }
            }
        }
        let ok = worst < 1e-10 && bad_mult.is_empty() && errors.is_empty();
        let mut detail = format!("max |d eta| {worst:.1e} over 4 structures x 200 k");
        if let Some(m) = bad_mult.first() {
            detail += &format!("; multiplicity mismatch ({} points, e.g. {m})", bad_mult.len());
        }
        if let Some(e) = errors.first() {
            detail += &format!("; {} solver errors, e.g. {e}", errors.len());
        }
        (ok, detail)
    })
}

/// A far central site decouples: the YX3 quadratic roots approach the X3
/// nondegenerate root and the isolated Y root `-k/beta`.
pub fn far_site_limits() -> Outcome {
    timed(3, "far-site limits", None, || {
        let (n, r, alpha, beta, k) = (3, presets::SILANE_R, presets::SILANE_ALPHA, presets::SILANE_BETA, 0.3);
        let x1 = xn_phases(n, r, alpha, k).expect("x3").tan_eta_1;
        let x2 = -k / beta;
        let mut devs = Vec::new();
        for d in [1e2, 1e3, 1e4] {
            let y = yxn_phases(n, r, d, alpha, beta, k).expect("yx3");
            let (p, q) = y.tan_eta_12;
            let near1 = if (p - x1).abs() < (q - x1).abs() { p } else { q };
            let near2 = if near1 == p { q } else { p };
            devs.push((d, (near1 - x1).abs(), (near2 - x2).abs()));
        }
        let at_1e3 = devs[1];
        let decays = devs.windows(2).all(|w| w[1].1 * w[1].0 <= w[0].1 * w[0].0 * (1.0 + 1e-9) && w[1].2 * w[1].0 <= w[0].2 * w[0].0 * (1.0 + 1e-9));
        let ok = at_1e3.1 < 1e-2 && at_1e3.2 < 1e-2 && decays;
        let list: Vec<String> = devs.iter().map(|(d, a, b)| format!("D={d:.0e}: {a:.1e}/{b:.1e}")).collect();
        (ok, format!("|x1 - tan eta1(X3)| / |x2 + k/beta|: {}", list.join(", ")))
    })
}

/// The printed dressed phase `(e-b)k/(be+k^2)` against radial integration of
/// the dressed potential.
pub fn darboux_vs_ode() -> Outcome {
    timed(4, "Darboux phase vs radial ODE", Some(Duration::from_secs(10)), || {
        let ks: Vec<f64> = (0..20).map(|i| 0.05 + (2.0 - 0.05) * i as f64 / 19.0).collect();
        let mut notes = Vec::new();
        let mut ok = true;
        for (e, b) in [(0.35, 0.1), (1.0, 0.5), (-0.5, 0.2)] {
            let step = DressingStep::new(b, e).expect("finite parameters");
            if let Err(err) = step.dressed_potential(1.0) {
                ok = false;
                notes.push(format!("(e,b)=({e},{b}): {err}"));
                continue;
            }
            // the potential decays like exp(-2|b|r)
            let range = 30.0 / b.abs();
            let rows = map(&ks, |&k| -> Result<(f64, f64), String> {
                let grid = RadialGrid::for_wavenumber(k, range).map_err(|e| e.to_string())?;
                let v = |r: f64| step.dressed_potential(r).unwrap_or(f64::NAN);
                let ode = integrate_phase(v, 0, k, &grid, Boundary::Regular).map_err(|e| e.to_string())?;
                let branch = step.dressed_tan_phase(Alpha::Finite(e), k);
                Ok(((ode - dressed_tan_phase0(e, b, k)).abs(), (ode - branch).abs()))
            });
            let (mut worst, mut worst_branch) = (0.0f64, 0.0f64);
            for row in rows {
                match row {
                    Ok((d, db)) => {
                        worst = worst.max(d);
                        worst_branch = worst_branch.max(db);
                    }
                    Err(err) => {
                        worst = f64::INFINITY;
                        notes.push(format!("(e,b)=({e},{b}): {err}"));
                        break;
                    }
                }
            }
            ok &= worst < 1e-6;
            notes.push(format!(
                "(e,b)=({e},{b}): max |d tan| {worst:.1e} (vs decaying-branch form {worst_branch:.1e})"
            ));
        }
        (ok, notes.join("; "))
    })
}

/// Kernels dressed with a large-b background reduce to the free ones.
pub fn dressed_green_limit() -> Outcome {
    timed(5, "dressed Green function limit", None, || {
        let k = wn(0.5);
        let b = 100.0;
        let g = build_yxn(4, presets::SILANE_D, presets::SILANE_ALPHA, presets::SILANE_BETA).expect("yx4");
        let free = free_kernels(&g, k);
        let dressed = match presets::dress(g, b, DressingMode::DressedKernels).and_then(|g| dressed_kernels(&g, k)) {
            Ok(d) => d,
            Err(e) => return (false, e.to_string()),
        };
        let diff = dressed.max_difference(&free);
        let shift = dressed
            .delta_alpha
            .iter()
            .zip(&dressed.delta_k)
            .map(|(a, k)| a.abs() + k.abs())
            .fold(0.0, f64::max);
        (diff < 1e-6 && shift < 1e-6, format!("b={b}: max kernel diff {diff:.2e}, max |d alpha|+|d k| {shift:.2e}"))
    })
}

/// Orientation-averaged forward amplitude against the averaged cross section.
pub fn optical_theorem() -> Outcome {
    timed(6, "optical theorem", None, || {
        let g = presets::silane().expect("silane");
        let rule = SphereRule::new(DEFAULT_ORDER);
        let mut worst = 0.0f64;
        for i in 0..10 {
            let k = 0.1 + 0.15 * i as f64;
            let sol = match solve(&g, wn(k)) {
                Ok(s) => s,
                Err(e) => return (false, format!("k={k}: {e}")),
            };
            let sigma = cross_sections(&sol).averaged;
            let amp = match scattering_amplitude(&sol, &g) {
                Ok(a) => a,
                Err(e) => return (false, format!("k={k}: {e}")),
            };
            let forward = amp.averaged_forward_cross_section(&rule);
            worst = worst.max((forward - sigma).abs() / sigma);
        }
        (worst < 1e-8, format!("max rel err {worst:.1e} at 10 k in [0.1, 1.45], order {DEFAULT_ORDER}"))
    })
}

pub fn silane_geometry() -> Outcome {
    timed(7, "YX4 geometry from D", None, || {
        let g = build_yxn(4, 2.76, 0.33, 0.41).expect("yx4");
        let r = g.distance(0, 1);
        let spread = (0..4)
            .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
            .map(|(i, j)| (g.distance(i, j) - r).abs())
            .fold(0.0, f64::max);
        ((r - 4.5071).abs() <= 1e-4 && spread < 1e-12, format!("R = {r:.6}"))
    })
}

fn sig4(x: f64) -> String {
    let digits = 3 - x.abs().log10().floor() as i32;
    format!("{:.*}", digits.max(0) as usize, x)
}

pub fn bound_state_energy() -> Outcome {
    timed(8, "s-wave bound state", None, || match bound_state(Channel::s_wave(0.33)) {
        Some(ImaginaryPole::Bound { binding_energy, .. }) => {
            let ev = binding_energy * HARTREE_EV;
            let ok = sig4(binding_energy) == "0.05445" && sig4(ev) == "1.482";
            (ok, format!("E_b = {binding_energy:.6} Ha = {ev:.4} eV"))
        }
        other => (false, format!("no bound state: {other:?}")),
    })
}

fn ics(geometry: &zrp_core::Geometry, ks: &[Wavenumber]) -> Result<Vec<f64>, String> {
    cross_section_curve(geometry, ks).map(|c| c.iter().map(|x| x.averaged).collect()).map_err(|e| e.to_string())
}

/// Silane ICS without dressing has no deep low-energy minimum; some
/// dressing strength produces one in [0.1, 1] eV.
pub fn silane_minimum() -> Outcome {
    timed(9, "silane ICS minimum", Some(Duration::from_secs(30)), || {
        let grid = Grid::new(0.1, 12.0, 400, Spacing::Log).expect("grid");
        let energies = grid.points();
        let ks = grid.wavenumbers(EnergyUnit::Ev).expect("positive energies");
        let plain = match ics(&presets::silane().expect("silane"), &ks) {
            Ok(c) => c,
            Err(e) => return (false, e),
        };
        let positive = plain.iter().all(|s| s.is_finite() && *s > 0.0);
        let smooth = plain.windows(2).all(|w| (w[1] / w[0] - 1.0).abs() < 0.05);
        let at_1ev = cross_section_curve(&presets::silane().expect("silane"), &[Wavenumber::from_ev(1.0).expect("1 eV")])
            .expect("1 eV point")[0]
            .averaged;
        let deep = local_minima(&plain)
            .into_iter()
            .filter(|&i| energies[i] < 1.0 && plain[i] < 0.8 * at_1ev)
            .map(|i| energies[i])
            .collect::<Vec<_>>();

        let candidates: Vec<f64> = (0..=30).map(|i| 0.01 * 100f64.powf(i as f64 / 30.0)).collect();
        let found = map(&candidates, |&b| -> Option<(f64, f64)> {
            let g = presets::silane_dressed(b, DressingMode::EffectiveAlpha).ok()?;
            let curve = ics(&g, &ks).ok()?;
            local_minima(&curve).into_iter().map(|i| energies[i]).find(|&e| (0.1..=1.0).contains(&e)).map(|e| (b, e))
        });
        let hit = found.into_iter().flatten().next();
        let ok = positive && smooth && deep.is_empty() && hit.is_some();
        let mut detail = format!(
            "undressed: positive {positive}, smooth {smooth}, deep minima below 1 eV {}",
            deep.len()
        );
        match hit {
            Some((b, e)) => detail += &format!("; dressed b={b:.4} has a minimum at {e:.3} eV"),
            None => detail += "; no dressing strength in [0.01, 1] gives a minimum in [0.1, 1] eV",
        }
        (ok, detail)
    })
}

/// Random pencils `Ms = V^T V`, `Mc = V^T diag(mu) V` with roots `-1/mu`.
pub fn pencil_robustness() -> Outcome {
    timed(10, "pencil solver vs det scan", None, || {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let mut worst = 0.0f64;
        let mut failures = Vec::new();
        for case in 0..100 {
            let n = rng.gen_range(1..=8);
            let v = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0)) + DMatrix::identity(n, n) * 1.5;
            let mu = DVector::from_fn(n, |_, _| {
                let m: f64 = rng.gen_range(0.2..3.0);
                if rng.gen_bool(0.5) { m } else { -m }
            });
            let ms = v.transpose() * &v;
            let mc = v.transpose() * DMatrix::from_diagonal(&mu) * &v;
            let (ms, mc) = ((&ms + ms.transpose()) * 0.5, (&mc + mc.transpose()) * 0.5);
            let solver = match solve_phases(&ms, &mc, wn(1.0)) {
                Ok(s) => expanded_modes(&s).0,
                Err(e) => {
                    failures.push(format!("case {case}: solver {e}"));
                    continue;
                }
            };
            let scan = match det_scan(&ms, &mc, 512, true) {
                Ok(r) => expanded(&r),
                Err(e) => {
                    failures.push(format!("case {case}: scan {e}"));
                    continue;
                }
            };
            if solver.len() != scan.len() {
                failures.push(format!("case {case}: {} vs {} roots", solver.len(), scan.len()));
                continue;
            }
            for (a, b) in solver.iter().zip(&scan) {
                worst = worst.max((a - b).abs() / (1.0 + a.abs()));
            }
        }
        let ok = worst < 1e-8 && failures.is_empty();
        let mut detail = format!("100 pencils, n <= 8: max rel root diff {worst:.1e}");
        if let Some(f) = failures.first() {
            detail += &format!("; {} failures, e.g. {f}", failures.len());
        }
        (ok, detail)
    })
}

pub fn all() -> Vec<fn() -> Outcome> {
    vec![
        single_center,
        closed_form_vs_solver,
        far_site_limits,
        darboux_vs_ode,
        dressed_green_limit,
        optical_theorem,
        silane_geometry,
        bound_state_energy,
        silane_minimum,
        pencil_robustness,
    ]
}
