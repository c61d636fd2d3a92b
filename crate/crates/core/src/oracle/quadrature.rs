//! Product rule on the unit sphere: Gauss–Legendre in `cos(theta)` times the
//! trapezoid rule in `phi`. Exact for spherical harmonics of degree below
//! `order` (and `phi` frequencies below `2 order`).

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;

use crate::geometry::Point;

/// Order used when a caller does not pick one.
pub const DEFAULT_ORDER: usize = 48;

#[derive(Debug, Clone)]
pub struct SphereRule {
    directions: Vec<Point>,
    weights: Vec<f64>,
}

impl SphereRule {
    pub fn new(order: usize) -> Self {
        let order = order.max(1);
        let gl = GaussLegendre::new(NonZeroUsize::new(order).expect("order >= 1"));
        let nphi = 2 * order;
        let dphi = 2.0 * PI / nphi as f64;
        let mut directions = Vec::with_capacity(order * nphi);
        let mut weights = Vec::with_capacity(order * nphi);
        for &(x, w) in gl.as_node_weight_pairs() {
            let st = (1.0 - x * x).max(0.0).sqrt();
            for j in 0..nphi {
                let (sp, cp) = (j as f64 * dphi).sin_cos();
                directions.push(Point::new(st * cp, st * sp, x));
                weights.push(w * dphi);
            }
        }
        SphereRule { directions, weights }
    }

    /// Rule resolving plane waves `e^{i k n.d}` with `|k d| <= bandwidth`
    /// to near machine precision.
    pub fn for_bandwidth(bandwidth: f64) -> Self {
        let need = (1.5 * bandwidth.abs()).ceil() as usize + 24;
        SphereRule::new(need.max(DEFAULT_ORDER))
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&Point, f64)> {
        self.directions.iter().zip(self.weights.iter().copied())
    }

    pub fn integrate<F: FnMut(&Point) -> f64>(&self, mut f: F) -> f64 {
        self.nodes().map(|(n, w)| w * f(n)).sum()
    }
}

/// `integral f dOmega` with a rule of the given order.
pub fn sphere_quadrature<F: FnMut(&Point) -> f64>(f: F, order: usize) -> f64 {
    SphereRule::new(order).integrate(f)
}
