//! Outgoing Green functions (source `4 pi delta`) and the interaction kernels
//! of the multi-center system.
//!
//! Near a site, `g+(r, r_i) ~ 1/|r - r_i| + delta_alpha_i + i (k + delta_k_i)`.
//! For the free kernel both corrections vanish. The dressed background (prop
//! function `sinh(b r)` about a center) changes only the s-wave part of the
//! single-center expansion:
//!
//! `g+ = e^{ik|r-r'|}/|r-r'| + [psi1(r<) f1(r>) - sin(k r<) e^{ik r>}] / (k r r')`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::darboux::{dressed_outgoing_wave, dressed_regular_wave, DressingStep};
use crate::error::{Error, Result};
use crate::geometry::{Alpha, Geometry, Point};
use crate::units::Wavenumber;

#[derive(Debug, Clone, PartialEq)]
pub struct KernelSet {
    pub k: Wavenumber,
    /// Off-diagonal `Im g+(r_i, r_j)`; the diagonal is unused (zero).
    pub s: DMatrix<f64>,
    /// Off-diagonal `Re g+(r_i, r_j)`; the diagonal is unused (zero).
    pub c: DMatrix<f64>,
    pub delta_alpha: Vec<f64>,
    pub delta_k: Vec<f64>,
}

impl KernelSet {
    pub fn n(&self) -> usize {
        self.delta_alpha.len()
    }

    pub fn max_asymmetry(&self) -> f64 {
        let n = self.n();
        let mut m: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                m = m.max((self.s[(i, j)] - self.s[(j, i)]).abs());
                m = m.max((self.c[(i, j)] - self.c[(j, i)]).abs());
            }
        }
        m
    }

    /// Largest entrywise difference over `s`, `c`, `delta_alpha`, `delta_k`.
    pub fn max_difference(&self, other: &KernelSet) -> f64 {
        let mat = (&self.s - &other.s).amax().max((&self.c - &other.c).amax());
        let diag = self
            .delta_alpha
            .iter()
            .zip(&other.delta_alpha)
            .chain(self.delta_k.iter().zip(&other.delta_k))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        mat.max(diag)
    }
}

pub fn free_green(k: f64, r: &Point, rp: &Point) -> Result<Complex64> {
    let d = (r - rp).norm();
    if d == 0.0 {
        return Err(Error::Coincident);
    }
    Ok(Complex64::from_polar(1.0 / d, k * d))
}

/// Ingoing Green function, the complex conjugate of the outgoing one.
pub fn free_green_in(k: f64, r: &Point, rp: &Point) -> Result<Complex64> {
    free_green(k, r, rp).map(|g| g.conj())
}

pub fn free_kernels(geometry: &Geometry, k: Wavenumber) -> KernelSet {
    let n = geometry.len();
    let kk = k.get();
    let mut s = DMatrix::zeros(n, n);
    let mut c = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let d = geometry.distance(i, j);
            let (sn, cs) = (kk * d).sin_cos();
            s[(i, j)] = sn / d;
            s[(j, i)] = sn / d;
            c[(i, j)] = cs / d;
            c[(j, i)] = cs / d;
        }
    }
    KernelSet { k, s, c, delta_alpha: vec![0.0; n], delta_k: vec![0.0; n] }
}

fn background_b(step: &DressingStep) -> Result<f64> {
    match step.e {
        Alpha::Infinite => Ok(step.b.abs()),
        Alpha::Finite(_) => Err(Error::UnsupportedDressing(
            "the dressed Green function is available for the e = inf background only".into(),
        )),
    }
}

/// Non-singular s-wave correction `Delta g(r, r')` for radii measured from
/// the dressing center. Symmetric; continuous at `r = r'`.
pub fn green_correction(k: f64, b: f64, r: f64, rp: f64) -> Result<Complex64> {
    if r <= 0.0 || rp <= 0.0 {
        return Err(Error::CenterSingularity);
    }
    let (lo, hi) = if r <= rp { (r, rp) } else { (rp, r) };
    let dressed = dressed_regular_wave(b, k, lo) * dressed_outgoing_wave(b, k, hi);
    let free = (k * lo).sin() * Complex64::from_polar(1.0, k * hi);
    Ok((dressed - free) / (k * lo * hi))
}

/// Outgoing Green function in the dressed background centered at `center`.
pub fn dressed_green(k: f64, step: &DressingStep, center: &Point, r: &Point, rp: &Point) -> Result<Complex64> {
    let b = background_b(step)?;
    let (ra, rb) = ((r - center).norm(), (rp - center).norm());
    let corr = green_correction(k, b, ra, rb)?;
    Ok(free_green(k, r, rp)? + corr)
}

/// `(delta_alpha, delta_k)` of a site at distance `site_radius` from the
/// dressing center: real and imaginary parts of `Delta g(r_i, r_i)`.
pub fn coincidence_corrections(k: f64, step: &DressingStep, site_radius: f64) -> Result<(f64, f64)> {
    let b = background_b(step)?;
    let d = green_correction(k, b, site_radius, site_radius)?;
    Ok((d.re, d.im))
}

/// Kernels in the dressed background. Sites on the dressing center stay
/// plain: their couplings use the free kernel and carry no corrections.
pub fn dressed_kernels(geometry: &Geometry, k: Wavenumber) -> Result<KernelSet> {
    let bg = geometry
        .background()
        .ok_or_else(|| Error::UnsupportedDressing("geometry carries no background dressing".into()))?;
    let b = background_b(&bg.step)?;
    let kk = k.get();
    let mut ks = free_kernels(geometry, k);
    let radii: Vec<f64> = geometry.sites().iter().map(|s| (s.position - bg.center).norm()).collect();
    let scale = radii.iter().cloned().fold(0.0, f64::max).max(1.0);
    let plain: Vec<bool> = radii.iter().map(|&r| r < 1e-12 * scale).collect();
    let n = geometry.len();
    for i in 0..n {
        if plain[i] {
            continue;
        }
        let d = green_correction(kk, b, radii[i], radii[i])?;
        ks.delta_alpha[i] = d.re;
        ks.delta_k[i] = d.im;
        for j in (i + 1)..n {
            if plain[j] {
                continue;
            }
            let d = green_correction(kk, b, radii[i], radii[j])?;
            ks.c[(i, j)] += d.re;
            ks.c[(j, i)] += d.re;
            ks.s[(i, j)] += d.im;
            ks.s[(j, i)] += d.im;
        }
    }
    Ok(ks)
}

/// Kernels for the geometry: dressed when a background is present.
pub fn kernels(geometry: &Geometry, k: Wavenumber) -> Result<KernelSet> {
    if geometry.background().is_some() {
        dressed_kernels(geometry, k)
    } else {
        Ok(free_kernels(geometry, k))
    }
}
