//! First-order Darboux dressing of s-wave zero-range potentials and of the
//! free background.
//!
//! A step is fixed by the prop function `phi(r) = sinh(br) - (b/e) cosh(br)`,
//! the solution at `k = ib` obeying the ZRP condition with `alpha = e`
//! (`e = inf` leaves `sinh(br)`). With `s = phi'/phi` the dressed potential is
//! `u1 = u - s'` and a wave maps to `(s - D) psi / sqrt(k^2 + b^2)`.
//!
//! Every dressed quantity depends on `b` only through `|b|`: flipping the sign
//! of `b` flips the sign of `phi` and leaves `s` unchanged.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Alpha, Channel};
use crate::gzrp::s_matrix_element;
use crate::special::{double_factorial, factorial, modified_riccati_bessel};
use crate::units::Wavenumber;

const TRIVIAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DressingStep {
    pub b: f64,
    pub e: Alpha,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl DressingStep {
    pub fn new(b: f64, e: impl Into<Alpha>) -> Result<Self> {
        if !b.is_finite() || b == 0.0 {
            return Err(Error::Domain(format!("dressing parameter b must be finite and nonzero, got {b}")));
        }
        let e = e.into();
        if let Alpha::Finite(v) = e {
            if !v.is_finite() {
                return Err(Error::Domain(format!("dressing parameter e must be finite or inf, got {v}")));
            }
        }
        Ok(Self { b, e })
    }

    /// Background dressing with prop function `sinh(br)`.
    pub fn background(b: f64) -> Result<Self> {
        Self::new(b, Alpha::Infinite)
    }

    /// `e = +-b`: the dressed potential vanishes identically.
    pub fn trivial(b: f64, sign: Sign) -> Result<Self> {
        Self::new(b, sign.value() * b)
    }

    pub fn is_trivial(&self) -> bool {
        match self.e {
            Alpha::Finite(e) => (e.abs() - self.b.abs()).abs() <= TRIVIAL_TOL * self.b.abs(),
            Alpha::Infinite => false,
        }
    }

    /// `b/e` as printed in the regularity rule (zero for `e = inf`).
    pub fn ratio(&self) -> f64 {
        match self.e {
            Alpha::Finite(e) => self.b / e,
            Alpha::Infinite => 0.0,
        }
    }

    /// The prop function has a node on `(0, inf)` iff `tanh(|b| r) = |b|/e`
    /// has a root, i.e. iff `e > |b|`. For `b > 0` this is `b/e` in `(0, 1)`.
    pub fn check_regular(&self) -> Result<()> {
        match self.e {
            Alpha::Finite(e) if !self.is_trivial() && e > self.b.abs() => {
                Err(Error::IrregularDressing { b: self.b, e })
            }
            _ => Ok(()),
        }
    }

    /// Location of the prop-function node, if any.
    pub fn node(&self) -> Option<f64> {
        match self.e {
            Alpha::Finite(e) if !self.is_trivial() && e > self.b.abs() => {
                Some((self.b.abs() / e).atanh() / self.b.abs())
            }
            _ => None,
        }
    }

    pub fn prop(&self, r: f64) -> f64 {
        let br = self.b * r;
        br.sinh() - self.ratio() * br.cosh()
    }

    /// `s(r) = phi'(r)/phi(r)`.
    pub fn log_derivative(&self, r: f64) -> Result<f64> {
        let b = self.b;
        let t = (b * r).tanh();
        match self.e {
            Alpha::Infinite => {
                if t == 0.0 {
                    return Err(Error::PropNode { r });
                }
                Ok(b / t)
            }
            Alpha::Finite(_) => {
                let q = self.ratio();
                let den = t - q;
                if den.abs() <= 1e-14 * (1.0 + q.abs()) {
                    return Err(Error::PropNode { r });
                }
                Ok(b * (1.0 - q * t) / den)
            }
        }
    }

    /// `lim_{r -> inf} s(r)`: `+|b|` when `phi` grows, `-|b|` when the
    /// growing exponential cancels (`e = |b|`).
    pub fn asymptotic_log_derivative(&self) -> f64 {
        let ab = self.b.abs();
        match self.e {
            Alpha::Finite(e) if (e - ab).abs() <= TRIVIAL_TOL * ab => -ab,
            _ => ab,
        }
    }

    /// Dressed s-wave potential `u1 = -s'`.
    pub fn dressed_potential(&self, r: f64) -> Result<f64> {
        self.check_regular()?;
        Ok(self.potential_unchecked(r))
    }

    fn potential_unchecked(&self, r: f64) -> f64 {
        let b = self.b;
        match self.e {
            Alpha::Infinite => {
                let sh = (b * r).sinh();
                b * b / (sh * sh)
            }
            Alpha::Finite(e) => {
                if self.is_trivial() {
                    return 0.0;
                }
                // -b^2 (b^2 - e^2) / (b cosh - e sinh)^2, divided through by cosh^2
                let t = (b * r).tanh();
                let den = b - e * t;
                -b * b * (b * b - e * e) * (1.0 - t * t) / (den * den)
            }
        }
    }

    /// Inverse scattering length seen at the origin after dressing a ZRP
    /// `alpha` with this step: `(b^2 + k^2)/(e - alpha) - e`. Exact for
    /// trivial steps; otherwise the dressed potential is nonzero as well.
    pub fn effective_alpha(&self, alpha: Alpha, k: f64) -> Result<f64> {
        let e = match self.e {
            Alpha::Finite(e) => e,
            Alpha::Infinite => {
                return Err(Error::UnsupportedDressing(
                    "e = inf changes the order of the boundary condition; no effective alpha".into(),
                ))
            }
        };
        match alpha {
            Alpha::Infinite => Ok(-e),
            Alpha::Finite(a) => {
                if (a - e).abs() <= 1e-14 * (1.0 + e.abs()) {
                    return Err(Error::SubstitutionPole { alpha: a, e });
                }
                Ok((self.b * self.b + k * k) / (e - a) - e)
            }
        }
    }

    /// Asymptotic factor multiplying the S-matrix element:
    /// `(s_inf - ik)/(s_inf + ik)`.
    pub fn s_matrix_factor(&self, k: f64) -> Complex64 {
        let s = self.asymptotic_log_derivative();
        Complex64::new(s, -k) / Complex64::new(s, k)
    }

    /// `tan` of the phase of the dressed wave built from a ZRP solution with
    /// inverse scattering length `alpha`: `eta_alpha - atan(k / s_inf)`.
    pub fn dressed_tan_phase(&self, alpha: Alpha, k: f64) -> f64 {
        let s = self.asymptotic_log_derivative();
        match alpha {
            Alpha::Infinite => -k / s,
            Alpha::Finite(a) => -k * (a + s) / (a * s - k * k),
        }
    }
}

/// Prop function in channel `l`: `i_l(|b| r) - (|b|^(2l+1)/e) k_l(|b| r)` in
/// modified Riccati–Bessel functions (reduces to the s-wave form for `l = 0`
/// up to the overall sign of `b`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropFunction {
    pub l: u32,
    pub step: DressingStep,
}

impl PropFunction {
    pub fn new(l: u32, step: DressingStep) -> Self {
        Self { l, step }
    }

    fn weight(&self) -> f64 {
        match self.step.e {
            Alpha::Infinite => 0.0,
            Alpha::Finite(e) => self.step.b.abs().powi(2 * self.l as i32 + 1) / e,
        }
    }

    pub fn value(&self, r: f64) -> Result<f64> {
        let p = modified_riccati_bessel(self.l, self.step.b.abs() * r)?;
        Ok(p.regular - self.weight() * p.irregular)
    }

    pub fn log_derivative(&self, r: f64) -> Result<f64> {
        let b = self.step.b.abs();
        let p = modified_riccati_bessel(self.l, b * r)?;
        let w = self.weight();
        let v = p.regular - w * p.irregular;
        if v == 0.0 {
            return Err(Error::PropNode { r });
        }
        Ok(b * (p.d_regular - w * p.d_irregular) / v)
    }
}

/// Background dressing with the e = inf step keeps a single Darboux step;
/// chains are rejected until the prop-function choice for later steps is
/// fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct DressingChain {
    steps: Vec<DressingStep>,
}

impl DressingChain {
    pub fn new(steps: Vec<DressingStep>) -> Result<Self> {
        if steps.len() > 1 {
            return Err(Error::UnsupportedDressing(format!(
                "chains of {} Darboux steps; only a single step is implemented",
                steps.len()
            )));
        }
        Ok(Self { steps })
    }

    pub fn steps(&self) -> &[DressingStep] {
        &self.steps
    }
}

/// Background phase of the `e = inf` dressing, `-atan(k/|b|)`.
pub fn background_phase(k: f64, b: f64) -> f64 {
    -(k / b.abs()).atan()
}

/// A ZRP channel together with a dressing step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedChannel {
    pub base: Channel,
    pub step: DressingStep,
    /// Background phase `-atan(k/|b|)` (zero when the step dresses a site).
    pub delta: f64,
}

impl DressedChannel {
    pub fn background(step: DressingStep, k: Wavenumber) -> Result<Self> {
        if !step.e.is_infinite() {
            return Err(Error::UnsupportedDressing("background dressing needs e = inf".into()));
        }
        Ok(Self {
            base: Channel::s_wave(Alpha::Infinite),
            step,
            delta: background_phase(k.get(), step.b),
        })
    }

    pub fn site(base: Channel, step: DressingStep) -> Self {
        Self { base, step, delta: 0.0 }
    }
}

pub fn prop_function(step: &DressingStep, r: f64) -> f64 {
    step.prop(r)
}

pub fn log_derivative(step: &DressingStep, r: f64) -> Result<f64> {
    step.log_derivative(r)
}

pub fn dressed_potential_u0(step: &DressingStep, r: f64) -> Result<f64> {
    step.dressed_potential(r)
}

/// `(s(r) psi(r) - psi'(r)) / sqrt(k^2 + b^2)`.
pub fn dress_wavefunction(
    psi: impl Fn(f64) -> f64,
    dpsi: impl Fn(f64) -> f64,
    step: &DressingStep,
    k: f64,
    r: f64,
) -> Result<f64> {
    let s = step.log_derivative(r)?;
    Ok((s * psi(r) - dpsi(r)) / (k * k + step.b * step.b).sqrt())
}

/// Regular dressed wave for the background step:
/// `(b coth(br) sin(kr) - k cos(kr)) / sqrt(k^2 + b^2)`.
pub fn dressed_regular_wave(b: f64, k: f64, r: f64) -> f64 {
    let bc = b / (b * r).tanh();
    (bc * (k * r).sin() - k * (k * r).cos()) / (k * k + b * b).sqrt()
}

/// Outgoing dressed wave for the background step:
/// `(b coth(br) - ik) e^(ikr) / sqrt(k^2 + b^2)`.
pub fn dressed_outgoing_wave(b: f64, k: f64, r: f64) -> Complex64 {
    let bc = b / (b * r).tanh();
    Complex64::new(bc, -k) * Complex64::from_polar(1.0, k * r) / (k * k + b * b).sqrt()
}

/// Closed-form `tan eta0` for the `e = alpha` dressing of a ZRP,
/// `(e - b) k / (b e + k^2)`. The value is the phase of the dressed wave when
/// `b` stands for `-s_inf`, i.e. for the prop-function branch that decays at
/// infinity; see [`DressingStep::dressed_tan_phase`] for the branch-aware form.
/// A vanishing denominator returns a signed infinity.
pub fn dressed_tan_phase0(e: f64, b: f64, k: f64) -> f64 {
    (e - b) * k / (b * e + k * k)
}

/// Effective inverse scattering length for a ZRP dressed by the trivial step
/// `e = sign * b`. The free wave (`alpha = inf`) turns into a ZRP with
/// `alpha = -e`.
pub fn effective_alpha(alpha: Alpha, b: f64, sign: Sign, k: f64) -> Result<f64> {
    let e = sign.value() * b;
    match alpha {
        Alpha::Infinite => Ok(-e),
        Alpha::Finite(a) => {
            if (a - e).abs() <= 1e-14 * (1.0 + e.abs()) {
                return Err(Error::SubstitutionPole { alpha: a, e });
            }
            Ok((b * b + k * k) / (e - a) - e)
        }
    }
}

/// Dressed GZRP element `S_l(alpha, k) (b - ik)/(b + ik)`.
pub fn dressed_zrp_smatrix(ch: Channel, b: f64, k: Wavenumber) -> Complex64 {
    let kk = k.get();
    s_matrix_element(ch, k).value * (Complex64::new(b, -kk) / Complex64::new(b, kk))
}

/// Order and coefficient of the boundary condition on a dressed channel-`l`
/// wave: for finite `e` and `l > 0`,
/// `D^(2l-1)(r^(l-1) psi) = c (r^(l-1) psi)` with
/// `c = -alpha (2l-1)! / ((k^2-b^2)(2l+1)!!(2l-3)!!)`; for `e = inf`,
/// `D^(2l+3)(r^(l+1) psi) = c (r^(l+1) psi)` with
/// `c = -alpha (2l+3)! / ((k^2-b^2)(2l+3)!!(2l-1)!!)`. Uses `(-1)!! = 1`.
pub fn dressed_boundary_coefficient(ch: Channel, step: &DressingStep, k: f64) -> Result<(u32, f64)> {
    let alpha = ch
        .alpha
        .finite()
        .ok_or_else(|| Error::Domain("dressed boundary condition needs a finite alpha".into()))?;
    let b = step.b;
    let gap = k * k - b * b;
    if gap.abs() <= 1e-14 * (k * k).max(b * b) {
        return Err(Error::SingularCoefficient { k, b });
    }
    let l = ch.l as i64;
    match step.e {
        Alpha::Finite(_) => {
            if l == 0 {
                return Err(Error::Domain(
                    "finite-e dressed boundary condition is defined for l > 0; use effective_alpha for l = 0".into(),
                ));
            }
            let c = -alpha * factorial((2 * l - 1) as u32)
                / (gap * double_factorial(2 * l + 1) * double_factorial(2 * l - 3));
            Ok((2 * ch.l - 1, c))
        }
        Alpha::Infinite => {
            let c = -alpha * factorial((2 * l + 3) as u32)
                / (gap * double_factorial(2 * l + 3) * double_factorial(2 * l - 1));
            Ok((2 * ch.l + 3, c))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn step(b: f64, e: impl Into<Alpha>) -> DressingStep {
        DressingStep::new(b, e).unwrap()
    }

    #[test]
    fn prop_function_examples() {
        assert_relative_eq!(prop_function(&step(1.0, Alpha::Infinite), 1.0), 1f64.sinh(), epsilon = 1e-15);
        assert_relative_eq!(prop_function(&step(1.0, 1.0), 0.0), -1.0, epsilon = 1e-15);
        // sinh(1) + 2 cosh(1), cross-checked against the exponential series
        let v = prop_function(&step(0.5, -0.25), 2.0);
        let series: f64 = (0..30)
            .map(|n| {
                let t = 1.0 / crate::special::factorial(n);
                if n % 2 == 1 { t } else { 2.0 * t }
            })
            .sum();
        assert_relative_eq!(v, series, epsilon = 1e-13);
        assert!((v - 4.261362).abs() < 1e-6);
    }

    #[test]
    fn log_derivative_examples() {
        let s = step(1.0, Alpha::Infinite);
        assert!((log_derivative(&s, 40.0).unwrap() - 1.0).abs() < 1e-15);
        let v = log_derivative(&step(2.0, Alpha::Infinite), 1.0).unwrap();
        assert_relative_eq!(v, 2.0 / 2f64.tanh(), epsilon = 1e-14);
        assert!((v - 2.074630).abs() < 1e-6);
        let trivial = step(0.7, 0.7);
        for r in [0.0, 0.3, 2.0, 15.0] {
            assert_relative_eq!(log_derivative(&trivial, r).unwrap(), -0.7, epsilon = 1e-14);
        }
        assert!(matches!(log_derivative(&step(1.0, Alpha::Infinite), 0.0), Err(Error::PropNode { .. })));
    }

    #[test]
    fn log_derivative_near_origin() {
        // s ~ -e + (b^2 - e^2) r for small r
        let st = step(0.4, -0.9);
        let r = 1e-4;
        let s = log_derivative(&st, r).unwrap();
        let lin = 0.9 + (0.16 - 0.81) * r;
        assert!((s - lin).abs() < 1e-7, "{s} {lin}");
    }

    #[test]
    fn node_is_reported() {
        let st = step(0.1, 0.35);
        let r0 = st.node().unwrap();
        assert!(st.prop(r0).abs() < 1e-14);
        assert!(matches!(st.dressed_potential(1.0), Err(Error::IrregularDressing { .. })));
        assert!(st.log_derivative(r0).is_err());
        assert!(step(0.2, -0.5).check_regular().is_ok());
        assert!(step(0.5, 0.3).check_regular().is_ok());
        assert!(step(1.0, Alpha::Infinite).check_regular().is_ok());
    }

    #[test]
    fn dressed_potential_examples() {
        for r in [0.1, 1.0, 3.0] {
            assert_eq!(dressed_potential_u0(&step(0.6, 0.6), r).unwrap(), 0.0);
            assert_eq!(dressed_potential_u0(&step(0.6, -0.6), r).unwrap(), 0.0);
        }
        let u = dressed_potential_u0(&step(1.0, Alpha::Infinite), 1.0).unwrap();
        assert!((u - 0.724062).abs() < 1e-6, "{u}");
        // -D s by central differences
        let st = step(1.0, Alpha::Infinite);
        let h = 1e-4;
        let ds = (st.log_derivative(1.0 + h).unwrap() - st.log_derivative(1.0 - h).unwrap()) / (2.0 * h);
        assert!((u + ds).abs() < 1e-7);
    }

    #[test]
    fn dressed_potential_matches_minus_ds_finite_e() {
        let st = step(0.3, -0.8);
        for r in [0.05, 0.7, 4.0, 11.0] {
            let h = 1e-4;
            let ds = (st.log_derivative(r + h).unwrap() - st.log_derivative(r - h).unwrap()) / (2.0 * h);
            assert!((st.dressed_potential(r).unwrap() + ds).abs() < 1e-8);
        }
    }

    #[test]
    fn small_b_long_range_profile() {
        // b -> 0: u ~ -(-e^2) b^2 / (b (1 - e r))^2 = e^2/(1 - e r)^2
        let e = -1.0;
        let st = step(1e-4, e);
        let r = 3.0;
        let u = st.dressed_potential(r).unwrap();
        let limit = e * e / (1.0 - e * r).powi(2);
        assert!(((u - limit) / limit).abs() < 1e-4, "{u} vs {limit}");
    }

    #[test]
    fn dressed_wave_of_free_sine() {
        let (b, k) = (1.3, 0.8);
        let st = step(b, Alpha::Infinite);
        for r in [0.2, 1.0, 5.0] {
            let v = dress_wavefunction(|x| (k * x).sin(), |x| k * (k * x).cos(), &st, k, r).unwrap();
            assert_relative_eq!(v, dressed_regular_wave(b, k, r), epsilon = 1e-14);
        }
    }

    #[test]
    fn prop_function_is_in_the_kernel() {
        // psi = phi at k = ib: (s phi - phi') = 0
        let st = step(0.5, -2.0);
        for r in [0.1, 1.0, 3.0] {
            let h = 1e-6;
            let dphi = (st.prop(r + h) - st.prop(r - h)) / (2.0 * h);
            let s = st.log_derivative(r).unwrap();
            assert!((s * st.prop(r) - dphi).abs() < 1e-8);
        }
    }

    #[test]
    fn dressed_wave_asymptotic_phase() {
        let (b, k) = (1.0, 1.0);
        let delta = background_phase(k, b);
        assert_relative_eq!(delta, -PI / 4.0, epsilon = 1e-15);
        for r in [40.0, 41.3, 57.9] {
            assert!((dressed_regular_wave(b, k, r) - (k * r + delta).sin()).abs() < 1e-8);
        }
    }

    #[test]
    fn dressed_tan_phase0_examples() {
        for k in [0.1, 0.5, 2.0] {
            assert_eq!(dressed_tan_phase0(0.4, 0.4, k), 0.0);
        }
        assert_relative_eq!(dressed_tan_phase0(0.35, 0.1, 0.2), 0.25 * 0.2 / 0.075, epsilon = 1e-14);
        let k = 1e-6;
        assert_relative_eq!(dressed_tan_phase0(0.35, 0.1, k) / k, 0.25 / 0.035, max_relative = 1e-9);
    }

    #[test]
    fn closed_form_equals_branch_aware_phase_for_decaying_branch() {
        // b standing for -s_inf
        for (e, b) in [(-0.5, 0.2), (1.0, 0.5), (0.35, 0.1)] {
            let st = step(b, e);
            let s_inf = st.asymptotic_log_derivative();
            for k in [0.1, 0.7, 1.9] {
                let lhs = dressed_tan_phase0(e, -s_inf, k);
                let rhs = st.dressed_tan_phase(Alpha::Finite(e), k);
                assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn effective_alpha_examples() {
        assert_eq!(effective_alpha(Alpha::Infinite, 0.3, Sign::Plus, 0.5).unwrap(), -0.3);
        assert_eq!(effective_alpha(Alpha::Infinite, 0.3, Sign::Minus, 0.5).unwrap(), 0.3);
        let v = effective_alpha(Alpha::Finite(0.35), 0.1, Sign::Plus, 0.0).unwrap();
        assert_relative_eq!(v, -0.14, epsilon = 1e-15);
        // b = 0 collapses to -k^2/alpha
        assert_relative_eq!(effective_alpha(Alpha::Finite(0.5), 0.0, Sign::Plus, 0.3).unwrap(), -0.18, epsilon = 1e-15);
        assert!(matches!(
            effective_alpha(Alpha::Finite(0.3), 0.3, Sign::Plus, 1.0),
            Err(Error::SubstitutionPole { .. })
        ));
    }

    #[test]
    fn dressed_smatrix_examples() {
        let k = Wavenumber::new(1.0).unwrap();
        let v = dressed_zrp_smatrix(Channel::s_wave(Alpha::Infinite), 1.0, k);
        assert!((v - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        assert_relative_eq!(0.5 * v.arg(), background_phase(1.0, 1.0), epsilon = 1e-15);

        let base = s_matrix_element(Channel::s_wave(0.33), k).value;
        assert!((dressed_zrp_smatrix(Channel::s_wave(0.33), 1e9, k) - base).norm() < 1e-8);

        let k = Wavenumber::new(0.1).unwrap();
        let v = dressed_zrp_smatrix(Channel::s_wave(0.33), 0.2, k);
        let eta0 = (-0.1f64 / 0.33).atan();
        let expect = eta0 - (0.1f64 / 0.2).atan();
        assert!((crate::gzrp::fold_phase(0.5 * v.arg()) - expect).abs() < 1e-12);
    }

    #[test]
    fn boundary_coefficient_examples() {
        let (o, c) = dressed_boundary_coefficient(Channel::new(1, 1.0), &step(0.5, 2.0), 1.0).unwrap();
        assert_eq!(o, 1);
        assert_relative_eq!(c, -1.0 / (0.75 * 3.0), epsilon = 1e-15);
        let (o, c) = dressed_boundary_coefficient(Channel::s_wave(1.0), &step(1.0, Alpha::Infinite), 2.0).unwrap();
        assert_eq!(o, 3);
        assert_relative_eq!(c, -6.0 / 9.0, epsilon = 1e-15);
        assert!(matches!(
            dressed_boundary_coefficient(Channel::new(1, 1.0), &step(1.0, 2.0), 1.0),
            Err(Error::SingularCoefficient { .. })
        ));
    }

    #[test]
    fn chains_limited_to_one_step() {
        let s = step(0.5, Alpha::Infinite);
        assert!(DressingChain::new(vec![s]).is_ok());
        assert!(DressingChain::new(vec![]).is_ok());
        assert!(matches!(DressingChain::new(vec![s, s]), Err(Error::UnsupportedDressing(_))));
    }

    #[test]
    fn schrodinger_covariance_background() {
        // -psi'' + 2 u psi = k^2 psi for the dressed sine
        for b in [0.5, 1.0, 2.0] {
            let st = step(b, Alpha::Infinite);
            for k in [0.1, 0.5, 1.0, 2.0] {
                let h = 1e-3;
                let mut r = 0.1;
                while r <= 20.0 {
                    let f = |x: f64| dressed_regular_wave(b, k, x);
                    let d2 = (-f(r + 2.0 * h) + 16.0 * f(r + h) - 30.0 * f(r) + 16.0 * f(r - h) - f(r - 2.0 * h))
                        / (12.0 * h * h);
                    let res = -d2 + 2.0 * st.dressed_potential(r).unwrap() * f(r) - k * k * f(r);
                    assert!(res.abs() < 1e-6, "b={b} k={k} r={r} res={res}");
                    r += 0.37;
                }
            }
        }
    }

    #[test]
    fn small_r_asymptotics_of_channel_log_derivative() {
        // r s_l -> -l (finite e, l > 0) or l + 1 (e = inf); next term
        // -b^2 r/(2l-1) or +b^2 r/(2l+3)
        let b = 0.8;
        for l in 0..3u32 {
            let inf = PropFunction::new(l, step(b, Alpha::Infinite));
            let r = 1e-4;
            let s = inf.log_derivative(r).unwrap();
            let lead = (l + 1) as f64 / r;
            assert!((r * s - (l + 1) as f64).abs() < 1e-4);
            let next = (s - lead) / r;
            assert!((next - b * b / (2 * l + 3) as f64).abs() < 1e-4, "l={l} next={next}");
            if l > 0 {
                let fin = PropFunction::new(l, step(b, -1.5));
                let s = fin.log_derivative(r).unwrap();
                assert!((r * s + l as f64).abs() < 1e-4);
                let next = (s + l as f64 / r) / r;
                assert!((next + b * b / (2 * l - 1) as f64).abs() < 1e-3, "l={l} next={next}");
            }
        }
        // l = 0 reproduces the closed-form prop function up to sign
        let st = step(0.6, -0.9);
        let pf = PropFunction::new(0, st);
        for r in [0.2, 1.5] {
            assert_relative_eq!(pf.value(r).unwrap(), st.prop(r), max_relative = 1e-13);
        }
    }

    proptest! {
        #[test]
        fn trivial_step_identity(alpha in -3.0f64..3.0, b in 0.05f64..3.0, k in 0.01f64..3.0, plus in any::<bool>()) {
            let sign = if plus { Sign::Plus } else { Sign::Minus };
            let e = sign.value() * b;
            prop_assume!((alpha - e).abs() > 1e-3);
            let st = DressingStep::trivial(b, sign).unwrap();
            prop_assert_eq!(st.dressed_potential(1.0).unwrap(), 0.0);
            let a_eff = effective_alpha(Alpha::Finite(alpha), b, sign, k).unwrap();
            prop_assert!((st.effective_alpha(Alpha::Finite(alpha), k).unwrap() - a_eff).abs() < 1e-12 * (1.0 + a_eff.abs()));
            // dressed GZRP element with the asymptotic log-derivative (= -e)
            let kw = Wavenumber::new(k).unwrap();
            let s = dressed_zrp_smatrix(Channel::s_wave(alpha), st.asymptotic_log_derivative(), kw);
            let from_eff = Complex64::from_polar(1.0, 2.0 * (-k / a_eff).atan());
            prop_assert!((s - from_eff).norm() < 1e-12);
        }

        #[test]
        fn dressed_unitarity(alpha in -5.0f64..5.0, b in -5.0f64..5.0, k in 0.001f64..10.0, l in 0u32..3) {
            prop_assume!(b.abs() > 1e-6);
            let s = dressed_zrp_smatrix(Channel::new(l, alpha), b, Wavenumber::new(k).unwrap());
            prop_assert!((s.norm() - 1.0).abs() < 1e-14);
        }

        #[test]
        fn dressing_even_in_b(b in 0.05f64..3.0, e in -3.0f64..3.0, r in 0.01f64..10.0) {
            let p = DressingStep::new(b, e).unwrap();
            let m = DressingStep::new(-b, e).unwrap();
            prop_assume!(p.check_regular().is_ok() && m.check_regular().is_ok());
            let (sp, sm) = (p.log_derivative(r).unwrap(), m.log_derivative(r).unwrap());
            prop_assert!((sp - sm).abs() < 1e-10 * (1.0 + sp.abs()));
        }
    }
}
