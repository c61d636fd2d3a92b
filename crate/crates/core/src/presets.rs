//! Parameter sets for silane modeled as YX4, and the dressing variants used
//! for the low-energy cross section.

use crate::darboux::{DressingStep, Sign};
use crate::error::{Error, Result};
use crate::geometry::{build_xn, build_yxn, Background, Geometry, Point, Site};
use crate::scan::{cross_section_curve, local_minima};
use crate::units::Wavenumber;

pub const SILANE_ALPHA: f64 = 0.33;
pub const SILANE_BETA: f64 = 0.41;
/// X–X distance as quoted (rounded); the geometry built from D gives 4.5071.
pub const SILANE_R: f64 = 4.51;
pub const SILANE_D: f64 = 2.76;
pub const SILANE_DRESSED_ALPHA: f64 = 0.35;
pub const SILANE_DRESSED_BETA: f64 = 0.38;

/// How a dressing enters the multi-center system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DressingMode {
    /// Trivial step `e = -b` on each X site, entering as an energy-dependent
    /// alpha with free kernels.
    EffectiveAlpha,
    /// `e = inf` background centered on Y; the X sites see dressed kernels
    /// and Y keeps free couplings.
    DressedKernels,
}

impl DressingMode {
    pub fn label(self) -> &'static str {
        match self {
            DressingMode::EffectiveAlpha => "effective-alpha",
            DressingMode::DressedKernels => "dressed-kernels",
        }
    }
}

pub fn single(alpha: f64) -> Result<Geometry> {
    Geometry::new(vec![Site::new(Point::zeros(), alpha)])
}

pub fn xn(n: usize, r: f64, alpha: f64) -> Result<Geometry> {
    build_xn(n, r, alpha)
}

pub fn silane() -> Result<Geometry> {
    build_yxn(4, SILANE_D, SILANE_ALPHA, SILANE_BETA)
}

/// Silane with dressing strength `b` applied in `mode`.
pub fn silane_dressed(b: f64, mode: DressingMode) -> Result<Geometry> {
    let g = build_yxn(4, SILANE_D, SILANE_DRESSED_ALPHA, SILANE_DRESSED_BETA)?;
    dress(g, b, mode)
}

/// Apply a dressing of strength `b` to the X sites (all but the last) of a
/// YXn geometry.
pub fn dress(mut g: Geometry, b: f64, mode: DressingMode) -> Result<Geometry> {
    match mode {
        DressingMode::EffectiveAlpha => {
            let step = DressingStep::trivial(b, Sign::Minus)?;
            let n = g.len();
            for s in &mut g.sites_mut()[..n - 1] {
                s.dressing = Some(step);
            }
            Ok(g)
        }
        DressingMode::DressedKernels => {
            let center = g.sites().last().map(|s| s.position).unwrap_or_else(Point::zeros);
            Ok(g.with_background(Background { center, step: DressingStep::background(b)? }))
        }
    }
}

/// Energies (eV) of interior local minima of the ICS over `energies_ev`.
pub fn ics_minima(geometry: &Geometry, energies_ev: &[f64]) -> Result<Vec<(f64, f64)>> {
    let ks = energies_ev.iter().map(|&e| Wavenumber::from_ev(e)).collect::<Result<Vec<_>>>()?;
    let curve: Vec<f64> = cross_section_curve(geometry, &ks)?.iter().map(|c| c.averaged).collect();
    Ok(local_minima(&curve).into_iter().map(|i| (energies_ev[i], curve[i])).collect())
}

/// Dressing strength from `candidates` whose ICS best matches `reference`
/// (pairs of eV and a0^2) in the least-squares sense on log values.
pub fn fit_dressing(reference: &[(f64, f64)], candidates: &[f64], mode: DressingMode) -> Result<(f64, f64)> {
    if reference.is_empty() || candidates.is_empty() {
        return Err(Error::Domain("dressing fit needs a reference curve and candidate b values".into()));
    }
    if reference.iter().any(|&(e, s)| !(e > 0.0 && s > 0.0)) {
        return Err(Error::Domain("reference curve needs positive energies and cross sections".into()));
    }
    let ks = reference.iter().map(|&(e, _)| Wavenumber::from_ev(e)).collect::<Result<Vec<_>>>()?;
    let mut best: Option<(f64, f64)> = None;
    for &b in candidates {
        let Ok(g) = silane_dressed(b, mode) else { continue };
        let Ok(curve) = cross_section_curve(&g, &ks) else { continue };
        let cost: f64 = curve
            .iter()
            .zip(reference)
            .map(|(c, &(_, s))| (c.averaged.ln() - s.ln()).powi(2))
            .sum();
        if best.is_none_or(|(_, c)| cost < c) {
            best = Some((b, cost));
        }
    }
    best.ok_or_else(|| Error::Domain("no candidate b produced a valid curve".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::tetrahedron_edge;
    use crate::scan::{Grid, Spacing};

    #[test]
    fn silane_parameters() {
        let g = silane().unwrap();
        assert_eq!(g.len(), 5);
        assert!((g.distance(0, 1) - 4.5071).abs() < 1e-4);
        assert!((g.distance(0, 4) - SILANE_D).abs() < 1e-12);
        assert!((tetrahedron_edge(SILANE_D) - SILANE_R).abs() < 0.01);
        assert_eq!(g.sites()[0].channel.alpha, 0.33.into());
        assert_eq!(g.sites()[4].channel.alpha, 0.41.into());
    }

    #[test]
    fn dressed_modes() {
        let a = silane_dressed(0.1, DressingMode::EffectiveAlpha).unwrap();
        assert!(a.sites()[..4].iter().all(|s| s.dressing.is_some()));
        assert!(a.sites()[4].dressing.is_none());
        let k = silane_dressed(0.5, DressingMode::DressedKernels).unwrap();
        assert!(k.background().is_some());
        assert!(silane_dressed(0.0, DressingMode::EffectiveAlpha).is_err());
    }

    #[test]
    fn undressed_silane_has_no_minimum_below_one_ev() {
        let es = Grid::new(0.1, 1.0, 60, Spacing::Linear).unwrap().points();
        assert!(ics_minima(&silane().unwrap(), &es).unwrap().is_empty());
    }

    #[test]
    fn fit_recovers_generating_b() {
        let es = [0.2, 0.4, 0.8, 1.5, 3.0];
        let g = silane_dressed(0.1, DressingMode::EffectiveAlpha).unwrap();
        let ks: Vec<_> = es.iter().map(|&e| Wavenumber::from_ev(e).unwrap()).collect();
        let reference: Vec<(f64, f64)> =
            es.iter().zip(cross_section_curve(&g, &ks).unwrap()).map(|(&e, c)| (e, c.averaged)).collect();
        let (b, cost) = fit_dressing(&reference, &[0.02, 0.05, 0.1, 0.2], DressingMode::EffectiveAlpha).unwrap();
        assert_eq!(b, 0.1);
        assert!(cost < 1e-20);
    }
}
