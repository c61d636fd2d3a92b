//! End-to-end properties of the scattering pipeline.

use std::f64::consts::PI;

use nalgebra::{Rotation3, Vector3};
use proptest::prelude::*;
use zrp_core::geometry::{build_xn, build_yxn, tetrahedron_edge};
use zrp_core::multicenter::{cross_sections, scattering_amplitude, solve};
use zrp_core::oracle::quadrature::{SphereRule, DEFAULT_ORDER};
use zrp_core::presets::{self, DressingMode};
use zrp_core::scan::{cross_section_curve, map, map_sequential, EnergyUnit, Grid, Spacing};
use zrp_core::structures::{xn_cross_section, xn_phases, yxn_phases};
use zrp_core::{Geometry, Point, Wavenumber};

fn wn(k: f64) -> Wavenumber {
    Wavenumber::new(k).unwrap()
}

fn tan_etas(g: &Geometry, k: f64) -> Vec<f64> {
    solve(g, wn(k)).unwrap().modes.iter().flat_map(|m| std::iter::repeat_n(m.tan_eta, m.multiplicity())).collect()
}

#[test]
fn parallel_and_sequential_scans_agree_bitwise() {
    let g = presets::silane_dressed(0.05, DressingMode::DressedKernels).unwrap();
    let ks = Grid::new(0.1, 12.0, 64, Spacing::Log).unwrap().wavenumbers(EnergyUnit::Ev).unwrap();
    let f = |k: &Wavenumber| cross_sections(&solve(&g, *k).unwrap()).averaged;
    let a = map(&ks, f);
    let b = map_sequential(&ks, f);
    assert_eq!(a, b);
}

#[test]
fn xn_cross_section_matches_solver() {
    for n in 2..=4 {
        let g = build_xn(n, 4.51, 0.33).unwrap();
        for k in [0.05, 0.4, 1.1] {
            let cf = xn_cross_section(&xn_phases(n, 4.51, 0.33, k).unwrap());
            let sv = cross_sections(&solve(&g, wn(k)).unwrap());
            assert!(((cf.total - sv.total) / sv.total).abs() < 1e-10, "n={n} k={k}");
        }
    }
}

#[test]
fn dressed_silane_optical_theorem() {
    let rule = SphereRule::new(DEFAULT_ORDER);
    for mode in [DressingMode::EffectiveAlpha, DressingMode::DressedKernels] {
        let g = presets::silane_dressed(0.3, mode).unwrap();
        for k in [0.2, 0.7] {
            let sol = solve(&g, wn(k)).unwrap();
            let sigma = cross_sections(&sol).averaged;
            let f = scattering_amplitude(&sol, &g).unwrap().averaged_forward_cross_section(&rule);
            assert!(((f - sigma) / sigma).abs() < 1e-8, "{mode:?} k={k}: {f} vs {sigma}");
        }
    }
}

#[test]
fn large_dressing_strength_approaches_undressed_curve() {
    let ks: Vec<Wavenumber> = [0.2, 0.5, 0.9].into_iter().map(wn).collect();
    let base = build_yxn(4, presets::SILANE_D, presets::SILANE_DRESSED_ALPHA, presets::SILANE_DRESSED_BETA).unwrap();
    let plain = cross_section_curve(&base, &ks).unwrap();
    let mut prev = f64::INFINITY;
    for b in [10.0, 100.0, 1000.0] {
        let g = presets::silane_dressed(b, DressingMode::DressedKernels).unwrap();
        let curve = cross_section_curve(&g, &ks).unwrap();
        let dev = curve.iter().zip(&plain).map(|(c, p)| ((c.averaged - p.averaged) / p.averaged).abs()).fold(0.0, f64::max);
        assert!(dev < prev, "b={b}: {dev}");
        prev = dev;
    }
    assert!(prev < 1e-2);
}

#[test]
fn ics_is_positive_and_bounded_by_unitarity() {
    let g = presets::silane().unwrap();
    let ks = Grid::new(0.1, 12.0, 50, Spacing::Linear).unwrap().wavenumbers(EnergyUnit::Ev).unwrap();
    for (k, cs) in ks.iter().zip(cross_section_curve(&g, &ks).unwrap()) {
        let cap = 4.0 * PI / (k.get() * k.get()) * g.len() as f64;
        assert!(cs.averaged > 0.0 && cs.averaged <= cap * (1.0 + 1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn phases_invariant_under_rigid_motion(
        axis in (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0),
        angle in 0.0f64..6.2,
        shift in (-5.0f64..5.0, -5.0f64..5.0, -5.0f64..5.0),
        k in 0.05f64..2.0,
    ) {
        let axis = Vector3::new(axis.0, axis.1, axis.2);
        prop_assume!(axis.norm() > 1e-3);
        let g = presets::silane().unwrap();
        let rot = Rotation3::from_axis_angle(&nalgebra::Unit::new_normalize(axis), angle);
        let moved = g.rotated(&rot).translated(&Point::new(shift.0, shift.1, shift.2));
        let (a, b) = (tan_etas(&g, k), tan_etas(&moved, k));
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-9 * (1.0 + x * x), "{} {}", x, y);
        }
    }

    #[test]
    fn yx4_closed_form_roots_solve_the_system(
        d in 1.5f64..5.0, alpha in -0.5f64..1.0, beta in -0.5f64..1.0, k in 0.02f64..2.0,
    ) {
        let Ok(y) = yxn_phases(4, tetrahedron_edge(d), d, alpha, beta, k) else { return Ok(()) };
        let mut cf = [y.tan_eta_12.0, y.tan_eta_12.1, y.tan_eta_deg, y.tan_eta_deg, y.tan_eta_deg];
        cf.sort_by(f64::total_cmp);
        let sv = tan_etas(&build_yxn(4, d, alpha, beta).unwrap(), k);
        prop_assert_eq!(sv.len(), 5);
        for (x, y) in cf.iter().zip(&sv) {
            prop_assert!((x - y).abs() <= 1e-10 * (1.0 + x * x), "{} {}", x, y);
        }
    }
}
