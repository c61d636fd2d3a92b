//! Independent numerical checks: radial integration for phase shifts, an
//! inertia scan for pencil roots, and quadrature on the sphere.

pub mod det_scan;
pub mod quadrature;
pub mod radial;

pub use det_scan::{det_scan, ScanRoot};
pub use quadrature::{sphere_quadrature, SphereRule};
pub use radial::{integrate_phase, Boundary, RadialGrid};
