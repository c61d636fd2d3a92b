//! Zero-range potential (ZRP) scattering by clusters of point centers, with
//! Darboux dressing of single-center channels and of a spherical background.
//!
//! Atomic units throughout (lengths in bohr, energies in hartree); eV only at
//! the edges via [`units`].

// NaN must fail range checks, so `!(x > 0.0)` is intended.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod darboux;
pub mod error;
pub mod geometry;
pub mod greens;
pub mod gzrp;
pub mod multicenter;
pub mod oracle;
pub mod presets;
pub mod scan;
pub mod special;
pub mod structures;
pub mod units;

pub use error::{Error, Result};
pub use geometry::{Alpha, Background, Channel, Geometry, Point, Site};
pub use units::{Wavenumber, HARTREE_EV};
