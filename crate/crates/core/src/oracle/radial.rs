//! Outward RK4 integration of `-u'' + (2 V(r) + l(l+1)/r^2) u = k^2 u` and a
//! least-squares fit of the tail to `A j_l(kr) + B n_l(kr)` (Riccati–Bessel),
//! giving `tan eta = B / A`.

use nalgebra::{Matrix2, Vector2};

use crate::error::{Error, Result};
use crate::special::riccati_bessel;

/// Graded grid: steps of `h r` below `r = 1` and `h` above, from `r_min` to
/// `r_max`. No adaptivity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub h: f64,
}

/// Condition at `r_min`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Boundary {
    /// `u ~ r^lambda` with `lambda` from the local `1/r^2` strength.
    Regular,
    /// `u'/u = -alpha` (s-wave zero-range boundary).
    ZeroRange(f64),
}

pub const R_MIN: f64 = 1e-4;

impl RadialGrid {
    pub fn new(r_min: f64, r_max: f64, h: f64) -> Result<Self> {
        if !(r_min > 0.0) {
            return Err(Error::NonPositive { quantity: "r_min", value: r_min });
        }
        if !(h > 0.0) {
            return Err(Error::NonPositive { quantity: "step", value: h });
        }
        if !(r_max > r_min) {
            return Err(Error::Domain(format!("r_max = {r_max} must exceed r_min = {r_min}")));
        }
        Ok(RadialGrid { r_min, r_max, h })
    }

    /// Grid for wavenumber `k` whose last quarter lies beyond `range` (where
    /// the potential is negligible) and spans four oscillations.
    pub fn for_wavenumber(k: f64, range: f64) -> Result<Self> {
        if !(k > 0.0) {
            return Err(Error::NonPositive { quantity: "k", value: k });
        }
        let tail = 4.0 * std::f64::consts::TAU / k;
        let r_max = (4.0 * tail).max(range + tail).max(4.0 * range / 3.0 + tail);
        RadialGrid::new(R_MIN, r_max, 4e-3)
    }

    pub fn halved(&self) -> Self {
        RadialGrid { h: self.h / 2.0, ..*self }
    }

    pub fn nodes(&self) -> Vec<f64> {
        let mut r = vec![self.r_min];
        let mut x = self.r_min;
        while x < self.r_max {
            let step = if x < 1.0 { (self.h * x).min(1.0 - x).max(self.h * self.r_min) } else { self.h };
            x = (x + step).min(self.r_max);
            r.push(x);
        }
        r
    }
}

fn check_potential(v: &impl Fn(f64) -> f64, grid: &RadialGrid, nodes: &[f64]) -> Result<()> {
    for &r in nodes {
        let x = v(r);
        if !x.is_finite() {
            return Err(Error::Domain(format!("potential is singular at r = {r:.6}")));
        }
    }
    let half = 0.5 * grid.r_max;
    for r in [half, 0.75 * grid.r_max, grid.r_max] {
        if (r * r * v(r)).abs() > 1e-9 {
            return Err(Error::Domain(format!(
                "potential does not decay faster than 1/r^2 beyond r = {half:.3} (r^2 V = {:.3e} at r = {r:.3})",
                r * r * v(r)
            )));
        }
    }
    Ok(())
}

/// Phase shift `tan eta` of partial wave `l` in potential `v` (hartree).
pub fn integrate_phase(v: impl Fn(f64) -> f64, l: u32, k: f64, grid: &RadialGrid, boundary: Boundary) -> Result<f64> {
    let nodes = grid.nodes();
    check_potential(&v, grid, &nodes)?;
    let cent = (l * (l + 1)) as f64;
    let q = |r: f64| 2.0 * v(r) + cent / (r * r) - k * k;
    let r0 = grid.r_min;
    let (mut u, mut du) = match boundary {
        Boundary::Regular => {
            let strength = (q(r0) + k * k) * r0 * r0;
            let lambda = 0.5 * (1.0 + (1.0 + 4.0 * strength).max(0.0).sqrt());
            (r0.powf(lambda), lambda * r0.powf(lambda - 1.0))
        }
        Boundary::ZeroRange(alpha) => {
            if l != 0 {
                return Err(Error::Domain("zero-range start is defined for l = 0".into()));
            }
            // Taylor start from u(0) = 1, u'(0) = -alpha, u'' = q u
            let q0 = q(r0);
            (1.0 - alpha * r0 + 0.5 * q0 * r0 * r0, -alpha + q0 * r0)
        }
    };
    let tail_start = grid.r_min + 0.75 * (grid.r_max - grid.r_min);
    let mut ata = Matrix2::zeros();
    let mut atb = Vector2::zeros();
    let mut samples: Vec<(f64, f64, f64, f64)> = Vec::new();
    for w in nodes.windows(2) {
        let (r, h) = (w[0], w[1] - w[0]);
        let f = |r: f64, u: f64, du: f64| (du, q(r) * u);
        let (k1u, k1d) = f(r, u, du);
        let (k2u, k2d) = f(r + 0.5 * h, u + 0.5 * h * k1u, du + 0.5 * h * k1d);
        let (k3u, k3d) = f(r + 0.5 * h, u + 0.5 * h * k2u, du + 0.5 * h * k2d);
        let (k4u, k4d) = f(r + h, u + h * k3u, du + h * k3d);
        u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        du += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
        let rr = w[1];
        if rr >= tail_start {
            let (j, n) = riccati_bessel(l, k * rr)?;
            let a = Vector2::new(j, n);
            ata += a * a.transpose();
            atb += a * u;
            samples.push((rr, j, n, u));
        }
    }
    let sol = ata
        .try_inverse()
        .ok_or_else(|| Error::Oracle("tail fit is singular; extend the grid".into()))?
        * atb;
    let (a, b) = (sol[0], sol[1]);
    let amp = a.hypot(b);
    let rms = (samples.iter().map(|&(_, j, n, u)| (a * j + b * n - u).powi(2)).sum::<f64>() / samples.len() as f64).sqrt();
    if rms > 1e-6 * amp {
        return Err(Error::Oracle(format!("tail fit residual {:.2e} relative to amplitude", rms / amp)));
    }
    Ok(b / a)
}

/// Residual of `-u'' + (2V + l(l+1)/r^2 - k^2) u` by central differences.
pub fn radial_residual(v: impl Fn(f64) -> f64, u: impl Fn(f64) -> f64, l: u32, k: f64, r: f64, h: f64) -> f64 {
    let d2 = (u(r + h) - 2.0 * u(r) + u(r - h)) / (h * h);
    -d2 + (2.0 * v(r) + (l * (l + 1)) as f64 / (r * r) - k * k) * u(r)
}
