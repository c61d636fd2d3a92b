//! Closed forms for the equidistant clusters Xn (n = 2, 3, 4) and YXn
//! (Y equidistant from all X at distance D).

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gzrp::sin2_from_tan;
use crate::multicenter::{partial_cross_section, CrossSections};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XnResult {
    pub n: usize,
    pub r: f64,
    pub alpha: f64,
    pub k: f64,
    pub tan_eta_1: f64,
    /// The `(n-1)`-fold root.
    pub tan_eta_deg: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YxnResult {
    pub n: usize,
    pub r: f64,
    pub d: f64,
    pub alpha: f64,
    pub beta: f64,
    pub k: f64,
    /// Roots of the quadratic, ascending.
    pub tan_eta_12: (f64, f64),
    pub tan_eta_deg: f64,
    /// Coefficients `(a2, a1, a0)` of `a2 x^2 + a1 x + a0 = 0`.
    pub quadratic: (f64, f64, f64),
}

impl YxnResult {
    /// Residual of `x` in the quadratic, relative to the coefficient scale.
    pub fn residual(&self, x: f64) -> f64 {
        let (a2, a1, a0) = self.quadratic;
        let scale = a2.abs() * x * x + a1.abs() * x.abs() + a0.abs();
        (a2 * x * x + a1 * x + a0).abs() / scale.max(f64::MIN_POSITIVE)
    }
}

fn check(n: usize, r: f64, k: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain(format!("Xn needs n >= 2, got {n}")));
    }
    if !(r > 0.0) {
        return Err(Error::NonPositive { quantity: "R", value: r });
    }
    if !(k > 0.0) {
        return Err(Error::NonPositive { quantity: "k", value: k });
    }
    Ok(())
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        f64::INFINITY
    } else {
        num / den
    }
}

/// `tan eta1 = -(kR + (n-1) sin kR)/(alpha R + (n-1) cos kR)`,
/// `tan eta_deg = -(kR - sin kR)/(alpha R - cos kR)`.
pub fn xn_phases(n: usize, r: f64, alpha: f64, k: f64) -> Result<XnResult> {
    check(n, r, k)?;
    let m = (n - 1) as f64;
    let (s, c) = (k * r).sin_cos();
    Ok(XnResult {
        n,
        r,
        alpha,
        k,
        tan_eta_1: -ratio(k * r + m * s, alpha * r + m * c),
        tan_eta_deg: -ratio(k * r - s, alpha * r - c),
    })
}

/// Phases of Xn plus a central Y (inverse scattering length `beta`) at
/// distance `d` from every X. The two totally symmetric modes solve
/// `(k + beta x)(Q x + P) = (n R / D^2)(sin kD + x cos kD)^2` with
/// `Q = alpha R + (n-1) cos kR`, `P = kR + (n-1) sin kR`; the remaining
/// `n-1` modes are those of Xn.
pub fn yxn_phases(n: usize, r: f64, d: f64, alpha: f64, beta: f64, k: f64) -> Result<YxnResult> {
    check(n, r, k)?;
    if !(d > 0.0) {
        return Err(Error::NonPositive { quantity: "D", value: d });
    }
    let m = (n - 1) as f64;
    let (s, c) = (k * r).sin_cos();
    let (sd, cd) = (k * d).sin_cos();
    let q = alpha * r + m * c;
    let p = k * r + m * s;
    let w = n as f64 * r / (d * d);
    let a2 = beta * q - w * cd * cd;
    let a1 = k * q + beta * p - 2.0 * w * sd * cd;
    let a0 = k * p - w * sd * sd;
    let disc = a1 * a1 - 4.0 * a2 * a0;
    if disc < 0.0 {
        return Err(Error::ComplexRoots { discriminant: disc });
    }
    let roots = if a2 == 0.0 {
        // one root at infinity
        (-a0 / a1, f64::INFINITY)
    } else {
        let qq = -0.5 * (a1 + a1.signum() * disc.sqrt());
        let (x1, x2) = if qq == 0.0 { (0.0, 0.0) } else { (qq / a2, a0 / qq) };
        if x1 <= x2 {
            (x1, x2)
        } else {
            (x2, x1)
        }
    };
    Ok(YxnResult {
        n,
        r,
        d,
        alpha,
        beta,
        k,
        tan_eta_12: roots,
        tan_eta_deg: -ratio(k * r - s, alpha * r - c),
        quadratic: (a2, a1, a0),
    })
}

/// `sigma = sigma_1 + (n-1) sigma_n`.
pub fn xn_cross_section(result: &XnResult) -> CrossSections {
    let s1 = partial_cross_section(result.tan_eta_1, result.k);
    let sd = partial_cross_section(result.tan_eta_deg, result.k);
    let total = s1 + (result.n - 1) as f64 * sd;
    CrossSections { partial: vec![s1, sd], total, averaged: total }
}

/// `sigma = sigma_1 + sigma_2 + (n-1) sigma_deg`.
pub fn yxn_cross_section(result: &YxnResult) -> CrossSections {
    let f = 4.0 * PI / (result.k * result.k);
    let p = [result.tan_eta_12.0, result.tan_eta_12.1, result.tan_eta_deg].map(|t| f * sin2_from_tan(t));
    let total = p[0] + p[1] + (result.n - 1) as f64 * p[2];
    CrossSections { partial: p.to_vec(), total, averaged: total }
}
