//! Grids and the data-parallel map used by energy scans. With the `parallel`
//! feature the map runs on the rayon pool; without it, sequentially. Output
//! order always follows input order.

use crate::error::{Error, Result};
use crate::geometry::Geometry;
use crate::multicenter::{cross_sections, solve, CrossSections, PhaseSolution};
use crate::units::{ev_to_hartree, Wavenumber};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyUnit {
    Hartree,
    Ev,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl Grid {
    pub fn new(min: f64, max: f64, count: usize, spacing: Spacing) -> Result<Self> {
        if !(min > 0.0 && min.is_finite()) {
            return Err(Error::NonPositive { quantity: "grid minimum", value: min });
        }
        if !(max >= min && max.is_finite()) {
            return Err(Error::Domain(format!("grid maximum {max} below minimum {min}")));
        }
        if count < 2 {
            return Err(Error::Domain(format!("grid needs at least 2 points, got {count}")));
        }
        Ok(Grid { min, max, count, spacing })
    }

    pub fn linear(min: f64, max: f64, count: usize) -> Result<Self> {
        Self::new(min, max, count, Spacing::Linear)
    }

    pub fn points(&self) -> Vec<f64> {
        let m = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                let t = i as f64 / m;
                let v = match self.spacing {
                    Spacing::Linear => self.min + (self.max - self.min) * t,
                    Spacing::Log => (self.min.ln() + (self.max.ln() - self.min.ln()) * t).exp(),
                };
                if i + 1 == self.count {
                    self.max
                } else {
                    v
                }
            })
            .collect()
    }

    /// Wavenumbers for grid values read as energies in `unit`.
    pub fn wavenumbers(&self, unit: EnergyUnit) -> Result<Vec<Wavenumber>> {
        self.points()
            .into_iter()
            .map(|e| match unit {
                EnergyUnit::Hartree => Wavenumber::from_energy(e),
                EnergyUnit::Ev => Wavenumber::from_energy(ev_to_hartree(e)),
            })
            .collect()
    }
}

#[cfg(feature = "parallel")]
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// Sequential map, always available; the reference for [`map`].
pub fn map_sequential<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// `map` over a fallible function, returning the first error in input order.
pub fn try_map<T, R, F>(items: &[T], f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R> + Sync + Send,
{
    map(items, f).into_iter().collect()
}

/// Phase solutions over a set of wavenumbers, in input order.
pub fn phase_curve(geometry: &Geometry, ks: &[Wavenumber]) -> Result<Vec<PhaseSolution>> {
    try_map(ks, |&k| solve(geometry, k))
}

/// Cross sections over a set of wavenumbers, in input order.
pub fn cross_section_curve(geometry: &Geometry, ks: &[Wavenumber]) -> Result<Vec<CrossSections>> {
    try_map(ks, |&k| solve(geometry, k).map(|s| cross_sections(&s)))
}

/// Interior strict local minima of `ys`.
pub fn local_minima(ys: &[f64]) -> Vec<usize> {
    (1..ys.len().saturating_sub(1))
        .filter(|&i| ys[i] < ys[i - 1] && ys[i] <= ys[i + 1])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints_and_spacing() {
        let g = Grid::linear(0.1, 1.0, 10).unwrap().points();
        assert_eq!(g.len(), 10);
        assert_eq!(g[0], 0.1);
        assert_eq!(g[9], 1.0);
        let l = Grid::new(0.01, 100.0, 5, Spacing::Log).unwrap().points();
        for w in l.windows(2) {
            assert!((w[1] / w[0] - 10.0).abs() < 1e-12);
        }
    }

    #[test]
    fn grid_rejects_bad_input() {
        assert!(Grid::linear(0.0, 1.0, 3).is_err());
        assert!(Grid::linear(1.0, 0.5, 3).is_err());
        assert!(Grid::linear(0.1, 1.0, 1).is_err());
    }

    #[test]
    fn map_preserves_order_and_matches_sequential() {
        let xs: Vec<f64> = (1..500).map(|i| i as f64 * 0.01).collect();
        let f = |x: &f64| (x * 3.0).sin() / x;
        assert_eq!(map(&xs, f), map_sequential(&xs, f));
    }

    #[test]
    fn local_minima_interior_only() {
        assert_eq!(local_minima(&[3.0, 1.0, 2.0, 0.5, 0.7, 0.1]), vec![1, 3]);
        assert!(local_minima(&[1.0, 2.0, 3.0]).is_empty());
    }

    #[test]
    fn curve_matches_pointwise_solve() {
        let g = crate::geometry::build_xn(3, 4.51, 0.33).unwrap();
        let ks = Grid::linear(0.1, 1.5, 17).unwrap().wavenumbers(EnergyUnit::Hartree).unwrap();
        let curve = cross_section_curve(&g, &ks).unwrap();
        for (k, cs) in ks.iter().zip(&curve) {
            assert_eq!(cs, &cross_sections(&solve(&g, *k).unwrap()));
        }
    }

    #[test]
    fn try_map_reports_first_error() {
        let xs = [1.0, -1.0, -2.0];
        let r = try_map(&xs, |&x| if x > 0.0 { Ok(x) } else { Err(Error::Domain(format!("{x}"))) });
        assert_eq!(r, Err(Error::Domain("-1".into())));
    }
}
