//! Single-center generalized zero-range potential in channel `l`.
//!
//! The boundary condition at the origin with inverse scattering length
//! `alpha_l` gives `S_l = (alpha_l - i k^(2l+1)) / (alpha_l + i k^(2l+1))`,
//! so `tan eta_l = -k^(2l+1) / alpha_l`. Poles sit at the roots of
//! `alpha_l + i k^(2l+1) = 0`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::Result;
use crate::geometry::{Alpha, Channel};
use crate::special::riccati_bessel;
use crate::units::Wavenumber;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SMatrixElement {
    pub value: Complex64,
    pub channel: Channel,
    pub k: Wavenumber,
}

impl SMatrixElement {
    /// Phase shift on the branch `(-pi/2, pi/2]`.
    pub fn phase(&self) -> f64 {
        fold_phase(0.5 * self.value.arg())
    }
}

/// Map any angle onto `(-pi/2, pi/2]`.
pub fn fold_phase(eta: f64) -> f64 {
    let mut e = eta % PI;
    if e > PI / 2.0 {
        e -= PI;
    } else if e <= -PI / 2.0 {
        e += PI;
    }
    e
}

/// `eta = atan(t)` with `t = +-inf` mapped to `pi/2`.
pub fn phase_from_tan(t: f64) -> f64 {
    if t.is_infinite() {
        PI / 2.0
    } else {
        t.atan()
    }
}

/// `sin^2 eta` from `tan eta`; infinite tangent gives 1.
pub fn sin2_from_tan(t: f64) -> f64 {
    if t.is_infinite() {
        1.0
    } else {
        t * t / (1.0 + t * t)
    }
}

fn k_power(l: u32, k: f64) -> f64 {
    k.powi(2 * l as i32 + 1)
}

pub fn s_matrix_element(ch: Channel, k: Wavenumber) -> SMatrixElement {
    let value = match ch.alpha {
        Alpha::Infinite => Complex64::new(1.0, 0.0),
        Alpha::Finite(a) => {
            let kp = k_power(ch.l, k.get());
            Complex64::new(a, -kp) / Complex64::new(a, kp)
        }
    };
    SMatrixElement { value, channel: ch, k }
}

/// `tan eta_l = -k^(2l+1)/alpha_l`. `alpha_l = 0` gives a signed infinity
/// (`eta = pi/2` on the reported branch); the free wave gives zero.
pub fn tan_phase(ch: Channel, k: Wavenumber) -> f64 {
    match ch.alpha {
        Alpha::Infinite => 0.0,
        Alpha::Finite(a) => -k_power(ch.l, k.get()) / a,
    }
}

/// Pole on the imaginary k axis, `k = i b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ImaginaryPole {
    /// `b > 0`; `binding_energy = b^2/2` (the state sits at `E = -b^2/2`).
    Bound { b: f64, binding_energy: f64 },
    /// `b < 0`, on the unphysical sheet.
    Antibound { b: f64 },
}

impl ImaginaryPole {
    pub fn k(&self) -> Complex64 {
        match *self {
            ImaginaryPole::Bound { b, .. } | ImaginaryPole::Antibound { b } => Complex64::new(0.0, b),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoleSet {
    pub channel: Channel,
    pub imaginary: Option<ImaginaryPole>,
    /// The `2l` off-axis roots, sorted by real part.
    pub resonances: Vec<Complex64>,
}

impl PoleSet {
    pub fn bound(&self) -> Option<(f64, f64)> {
        match self.imaginary {
            Some(ImaginaryPole::Bound { b, binding_energy }) => Some((b, binding_energy)),
            _ => None,
        }
    }

    pub fn all(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.imaginary.iter().map(|p| p.k()).chain(self.resonances.iter().copied())
    }
}

/// Bound (`(-1)^l alpha > 0`) or antibound state of the channel.
/// `None` for `alpha = 0` or the free wave.
pub fn bound_state(ch: Channel) -> Option<ImaginaryPole> {
    let a = ch.alpha.finite()?;
    if a == 0.0 {
        return None;
    }
    let signed = if ch.l.is_multiple_of(2) { a } else { -a };
    let mag = signed.abs().powf(1.0 / (2 * ch.l + 1) as f64);
    if signed > 0.0 {
        Some(ImaginaryPole::Bound { b: mag, binding_energy: 0.5 * mag * mag })
    } else {
        Some(ImaginaryPole::Antibound { b: -mag })
    }
}

/// All `2l+1` roots of `alpha + i k^(2l+1) = 0`, i.e. `k^(2l+1) = i alpha`.
pub fn resonance_poles(ch: Channel) -> PoleSet {
    let imaginary = bound_state(ch);
    let a = match ch.alpha.finite() {
        Some(a) if a != 0.0 => a,
        _ => return PoleSet { channel: ch, imaginary, resonances: Vec::new() },
    };
    let order = 2 * ch.l + 1;
    let mag = a.abs().powf(1.0 / order as f64);
    let base = if a > 0.0 { PI / 2.0 } else { -PI / 2.0 };
    let axis = imaginary.map(|p| p.k()).unwrap_or_default();
    let mut resonances: Vec<Complex64> = (0..order)
        .map(|m| {
            let theta = (base + 2.0 * PI * m as f64) / order as f64;
            Complex64::from_polar(mag, theta)
        })
        .filter(|z| (z - axis).norm() > 1e-9 * mag)
        .collect();
    resonances.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    PoleSet { channel: ch, imaginary, resonances }
}

/// Free-space partial wave `cos(eta) j_l(kr) + sin(eta) n_l(kr)` for the
/// channel's phase.
pub fn partial_wave(ch: Channel, k: Wavenumber, r: f64) -> Result<f64> {
    let eta = phase_from_tan(tan_phase(ch, k));
    let (j, n) = riccati_bessel(ch.l, k.get() * r)?;
    Ok(eta.cos() * j + eta.sin() * n)
}
