//! Scatterer channels, sites and the equidistant X_n / YX_n builders.

use nalgebra::{Rotation3, Vector3};
use serde::{Deserialize, Serialize};

use crate::darboux::DressingStep;
use crate::error::{Error, Result};

pub type Point = Vector3<f64>;

/// Inverse scattering length. `Infinite` is the free wave (no scatterer).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Alpha {
    Finite(f64),
    Infinite,
}

impl Alpha {
    pub fn finite(self) -> Option<f64> {
        match self {
            Alpha::Finite(a) => Some(a),
            Alpha::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Alpha::Infinite)
    }
}

impl From<f64> for Alpha {
    fn from(a: f64) -> Self {
        Alpha::Finite(a)
    }
}

impl std::fmt::Display for Alpha {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Alpha::Finite(a) => write!(f, "{a}"),
            Alpha::Infinite => write!(f, "inf"),
        }
    }
}

/// One partial-wave channel: angular momentum `l` and inverse scattering
/// length `alpha`, in units of a0^-(2l+1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Channel {
    pub l: u32,
    pub alpha: Alpha,
}

impl Channel {
    pub fn new(l: u32, alpha: impl Into<Alpha>) -> Self {
        Self { l, alpha: alpha.into() }
    }

    pub fn s_wave(alpha: impl Into<Alpha>) -> Self {
        Self::new(0, alpha)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Site {
    pub position: Point,
    pub channel: Channel,
    pub dressing: Option<DressingStep>,
}

impl Site {
    pub fn new(position: Point, alpha: impl Into<Alpha>) -> Self {
        Self { position, channel: Channel::s_wave(alpha), dressing: None }
    }

    pub fn with_dressing(mut self, step: DressingStep) -> Self {
        self.dressing = Some(step);
        self
    }
}

/// Background dressing of the free space around `center` (the dressed Green
/// function is a single-center expansion about this point).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Background {
    pub center: Point,
    pub step: DressingStep,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Geometry {
    sites: Vec<Site>,
    background: Option<Background>,
}

const COINCIDENCE: f64 = 1e-10;

impl Geometry {
    pub fn new(sites: Vec<Site>) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::Geometry("no sites".into()));
        }
        for (i, a) in sites.iter().enumerate() {
            if !a.position.iter().all(|x| x.is_finite()) {
                return Err(Error::Geometry(format!("site {i} has a non-finite coordinate")));
            }
            for (j, b) in sites.iter().enumerate().skip(i + 1) {
                if (a.position - b.position).norm() < COINCIDENCE {
                    return Err(Error::DuplicateSite(i, j));
                }
            }
        }
        Ok(Self { sites, background: None })
    }

    pub fn with_background(mut self, background: Background) -> Self {
        self.background = Some(background);
        self
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn sites_mut(&mut self) -> &mut [Site] {
        &mut self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn background(&self) -> Option<&Background> {
        self.background.as_ref()
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        (self.sites[i].position - self.sites[j].position).norm()
    }

    /// Rigid rotation about the origin; background center rotates along.
    pub fn rotated(&self, rotation: &Rotation3<f64>) -> Self {
        let sites = self
            .sites
            .iter()
            .map(|s| Site { position: rotation * s.position, ..s.clone() })
            .collect();
        let background = self
            .background
            .map(|b| Background { center: rotation * b.center, ..b });
        Self { sites, background }
    }

    pub fn translated(&self, shift: &Point) -> Self {
        let sites = self
            .sites
            .iter()
            .map(|s| Site { position: s.position + shift, ..s.clone() })
            .collect();
        let background = self
            .background
            .map(|b| Background { center: b.center + shift, ..b });
        Self { sites, background }
    }

    pub fn centroid(&self) -> Point {
        self.sites.iter().map(|s| s.position).sum::<Point>() / self.sites.len() as f64
    }
}

/// Canonical embedding of the equidistant structures with edge `r`:
/// X2 on the z-axis, X3 in the xy-plane, X4 inscribed in a cube.
/// All are centered on the origin.
pub fn xn_positions(n: usize, r: f64) -> Result<Vec<Point>> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::NonPositive { quantity: "R", value: r });
    }
    let pts = match n {
        2 => vec![Point::new(0.0, 0.0, 0.5 * r), Point::new(0.0, 0.0, -0.5 * r)],
        3 => {
            let rho = r / 3f64.sqrt();
            (0..3)
                .map(|m| {
                    let phi = 2.0 * std::f64::consts::PI * m as f64 / 3.0;
                    Point::new(rho * phi.cos(), rho * phi.sin(), 0.0)
                })
                .collect()
        }
        4 => {
            let a = r / (2.0 * 2f64.sqrt());
            vec![
                Point::new(a, a, a),
                Point::new(a, -a, -a),
                Point::new(-a, a, -a),
                Point::new(-a, -a, a),
            ]
        }
        _ => return Err(Error::UnsupportedStructure(n)),
    };
    Ok(pts)
}

/// Distance from the centroid of X_n to each vertex.
pub fn circumradius(n: usize, r: f64) -> Result<f64> {
    match n {
        2 => Ok(0.5 * r),
        3 => Ok(r / 3f64.sqrt()),
        4 => Ok(r * (3.0f64 / 8.0).sqrt()),
        _ => Err(Error::UnsupportedStructure(n)),
    }
}

/// Edge of the regular tetrahedron whose centroid sits at distance `d`
/// from every vertex: `R = 2 sqrt(2/3) D`.
pub fn tetrahedron_edge(d: f64) -> f64 {
    2.0 * (2.0f64 / 3.0).sqrt() * d
}

pub fn build_xn(n: usize, r: f64, alpha: impl Into<Alpha>) -> Result<Geometry> {
    let alpha = alpha.into();
    let sites = xn_positions(n, r)?
        .into_iter()
        .map(|p| Site::new(p, alpha))
        .collect();
    Geometry::new(sites)
}

/// YX4 with Y at the tetrahedron centroid (the origin). X sites come first,
/// Y is the last site.
pub fn build_yxn(n: usize, d: f64, alpha: impl Into<Alpha>, beta: impl Into<Alpha>) -> Result<Geometry> {
    if n != 4 {
        return Err(Error::Geometry(format!(
            "YX{n}: the Y position is fixed by D only for n = 4; use build_yxn_with"
        )));
    }
    if !(d.is_finite() && d > 0.0) {
        return Err(Error::NonPositive { quantity: "D", value: d });
    }
    build_yxn_with(n, tetrahedron_edge(d), Point::zeros(), alpha, beta)
}

/// YX_n with an explicit Y position. The X_n frame is the canonical one
/// centered at the origin; Y must be equidistant from every X. For n = 4
/// that forces Y onto the centroid.
pub fn build_yxn_with(
    n: usize,
    r: f64,
    y: Point,
    alpha: impl Into<Alpha>,
    beta: impl Into<Alpha>,
) -> Result<Geometry> {
    let alpha = alpha.into();
    let xs = xn_positions(n, r)?;
    let tol = 1e-9 * r;
    if n == 4 && y.norm() > tol {
        return Err(Error::Geometry(format!(
            "YX4: Y must sit on the tetrahedron centroid, got offset {:.3e}",
            y.norm()
        )));
    }
    let d0 = (xs[0] - y).norm();
    for (i, x) in xs.iter().enumerate() {
        let d = (x - y).norm();
        if (d - d0).abs() > tol {
            return Err(Error::Geometry(format!(
                "Y is not equidistant from the X sites ({d} vs {d0} at site {i})"
            )));
        }
    }
    let mut sites: Vec<Site> = xs.into_iter().map(|p| Site::new(p, alpha)).collect();
    sites.push(Site::new(y, beta));
    Geometry::new(sites)
}

/// Y position on the symmetry axis of X2/X3 at distance `d` from every X.
pub fn yxn_axis_position(n: usize, r: f64, d: f64) -> Result<Point> {
    let rho = circumradius(n, r)?;
    if d < rho {
        return Err(Error::Geometry(format!("D = {d} is shorter than the circumradius {rho}")));
    }
    let h = (d * d - rho * rho).sqrt();
    match n {
        2 => Ok(Point::new(h, 0.0, 0.0)),
        3 => Ok(Point::new(0.0, 0.0, h)),
        4 if h < 1e-9 * r => Ok(Point::zeros()),
        _ => Err(Error::Geometry(format!("YX{n}: no equidistant axis position for D = {d}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn assert_equidistant(g: &Geometry, r: f64) {
        for i in 0..g.len() {
            for j in (i + 1)..g.len() {
                assert!((g.distance(i, j) - r).abs() < 1e-12 * r, "{i}{j}: {}", g.distance(i, j));
            }
        }
    }

    #[test]
    fn xn_pairwise_distances() {
        assert_equidistant(&build_xn(2, 1.0, 0.3).unwrap(), 1.0);
        assert_equidistant(&build_xn(3, 2.0, 0.3).unwrap(), 2.0);
        let x4 = build_xn(4, 4.51, 0.33).unwrap();
        assert_eq!(x4.len(), 4);
        assert_equidistant(&x4, 4.51);
    }

    #[test]
    fn xn_unsupported() {
        assert_eq!(build_xn(5, 1.0, 0.3).unwrap_err(), Error::UnsupportedStructure(5));
        assert_eq!(build_xn(1, 1.0, 0.3).unwrap_err(), Error::UnsupportedStructure(1));
        assert!(build_xn(3, -1.0, 0.3).is_err());
    }

    #[test]
    fn yx4_silane_geometry() {
        let g = build_yxn(4, 2.76, 0.33, 0.41).unwrap();
        assert_eq!(g.len(), 5);
        let r = g.distance(0, 1);
        assert!((r - 4.507062).abs() < 1e-6, "{r}");
        for i in 0..4 {
            assert!((g.distance(i, 4) - 2.76).abs() < 1e-12 * 2.76);
        }
        assert_relative_eq!(r / 2.76, 2.0 * (2.0f64 / 3.0).sqrt(), max_relative = 1e-12);
        let unit = build_yxn(4, 1.0, 0.3, 0.3).unwrap();
        assert!((unit.distance(0, 1) - 1.632993).abs() < 1e-6);
    }

    #[test]
    fn yx4_rejects_offset_y() {
        let err = build_yxn_with(4, 4.5, Point::new(0.1, 0.0, 0.0), 0.3, 0.4).unwrap_err();
        assert!(matches!(err, Error::Geometry(_)));
    }

    #[test]
    fn yxn_axis_positions_equidistant() {
        for n in [2, 3] {
            let y = yxn_axis_position(n, 2.0, 3.0).unwrap();
            let g = build_yxn_with(n, 2.0, y, 0.3, 0.4).unwrap();
            for i in 0..n {
                assert!((g.distance(i, n) - 3.0).abs() < 1e-12);
            }
        }
        assert!(yxn_axis_position(3, 2.0, 0.5).is_err());
    }

    #[test]
    fn duplicate_sites_rejected() {
        let p = Point::new(1.0, 2.0, 3.0);
        let err = Geometry::new(vec![Site::new(p, 0.3), Site::new(p, 0.4)]).unwrap_err();
        assert_eq!(err, Error::DuplicateSite(0, 1));
    }

    #[test]
    fn rotation_preserves_distances() {
        let g = build_yxn(4, 2.76, 0.33, 0.41).unwrap();
        let rot = Rotation3::from_euler_angles(0.3, -1.1, 2.0);
        let h = g.rotated(&rot);
        for i in 0..5 {
            for j in 0..5 {
                assert!((g.distance(i, j) - h.distance(i, j)).abs() < 1e-12);
            }
        }
    }
}
