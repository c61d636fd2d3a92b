//! Atomic units and the single energy conversion used at the edges.
//!
//! Everything inside the crate works in Hartree atomic units
//! (hbar = m = e = 1, lengths in Bohr radii). Energies are `E = k^2 / 2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// 1 Hartree in electron-volts.
pub const HARTREE_EV: f64 = 27.2114;

/// Scattering wavenumber in inverse Bohr radii. Always finite and positive.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Wavenumber(f64);

impl Wavenumber {
    pub fn new(k: f64) -> Result<Self> {
        if k.is_finite() && k > 0.0 {
            Ok(Self(k))
        } else {
            Err(Error::NonPositive { quantity: "wavenumber", value: k })
        }
    }

    /// `k = sqrt(2 E)` for an energy in Hartree.
    pub fn from_energy(energy: f64) -> Result<Self> {
        if energy.is_finite() && energy > 0.0 {
            Ok(Self((2.0 * energy).sqrt()))
        } else {
            Err(Error::NonPositive { quantity: "energy", value: energy })
        }
    }

    pub fn from_ev(energy_ev: f64) -> Result<Self> {
        Self::from_energy(energy_ev / HARTREE_EV)
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// Energy in Hartree.
    #[inline]
    pub fn energy(self) -> f64 {
        0.5 * self.0 * self.0
    }

    #[inline]
    pub fn energy_ev(self) -> f64 {
        self.energy() * HARTREE_EV
    }
}

pub fn energy_to_wavenumber(energy: f64) -> Result<Wavenumber> {
    Wavenumber::from_energy(energy)
}

pub fn hartree_to_ev(e: f64) -> f64 {
    e * HARTREE_EV
}

pub fn ev_to_hartree(e: f64) -> f64 {
    e / HARTREE_EV
}
