//! Roots of `det(Ms + x Mc) = 0` by scanning the inertia of
//! `f(t) = cos(t) Ms + sin(t) Mc` over `t` in `[t0, t0 + pi]` (every real `x`
//! and `x = inf` once). A jump of `m` in the count of negative eigenvalues
//! marks a root of multiplicity `m`; the jump is located by bisection and
//! `x = tan(t)`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRoot {
    /// `tan(t)`; `inf` when `t` is within roundoff of `pi/2`.
    pub x: f64,
    pub multiplicity: usize,
}

const T0: f64 = -PI / 2.0 + 1.234_567e-3;

fn negative_count(ms: &DMatrix<f64>, mc: &DMatrix<f64>, t: f64) -> usize {
    let f = ms * t.cos() + mc * t.sin();
    SymmetricEigen::new(f).eigenvalues.iter().filter(|&&l| l < 0.0).count()
}

fn locate(
    ms: &DMatrix<f64>,
    mc: &DMatrix<f64>,
    (a, ca): (f64, usize),
    (b, cb): (f64, usize),
    out: &mut Vec<(f64, usize)>,
) {
    if ca == cb {
        return;
    }
    if b - a < 1e-15 * (1.0 + a.abs()) {
        out.push((0.5 * (a + b), ca.abs_diff(cb)));
        return;
    }
    let m = 0.5 * (a + b);
    let cm = negative_count(ms, mc, m);
    locate(ms, mc, (a, ca), (m, cm), out);
    locate(ms, mc, (m, cm), (b, cb), out);
}

/// All real roots (with multiplicity) found with `samples` scan intervals.
/// Roots closer than the scan resolution whose inertia jumps cancel are not
/// resolved; the total multiplicity is then below `n` and an error reports it
/// when `expect_all` is set.
pub fn det_scan(ms: &DMatrix<f64>, mc: &DMatrix<f64>, samples: usize, expect_all: bool) -> Result<Vec<ScanRoot>> {
    let n = ms.nrows();
    if ms.ncols() != n || mc.shape() != (n, n) {
        return Err(Error::DimensionMismatch("pencil matrices differ in shape".into()));
    }
    let samples = samples.max(8);
    let dt = PI / samples as f64;
    let mut found = Vec::new();
    let start = negative_count(ms, mc, T0);
    let mut prev = (T0, start);
    for j in 1..=samples {
        let t = T0 + dt * j as f64;
        let c = if j == samples {
            // f(t0 + pi) = -f(t0)
            n - start - (n - start).min(nullity(ms, mc, T0))
        } else {
            negative_count(ms, mc, t)
        };
        locate(ms, mc, prev, (t, c), &mut found);
        prev = (t, c);
    }
    let mut roots: Vec<ScanRoot> = Vec::with_capacity(found.len());
    for (t, m) in found {
        let x = if (t - PI / 2.0).abs() < 1e-12 { f64::INFINITY } else { t.tan() };
        match roots.last_mut() {
            Some(r) if (r.x - x).abs() < 1e-9 * (1.0 + x.abs()) => r.multiplicity += m,
            _ => roots.push(ScanRoot { x, multiplicity: m }),
        }
    }
    roots.sort_by(|a, b| a.x.total_cmp(&b.x));
    let total: usize = roots.iter().map(|r| r.multiplicity).sum();
    if expect_all && total != n {
        return Err(Error::Oracle(format!(
            "inertia scan resolved {total} of {n} roots; unresolved or complex pairs remain"
        )));
    }
    Ok(roots)
}

fn nullity(ms: &DMatrix<f64>, mc: &DMatrix<f64>, t: f64) -> usize {
    let f = ms * t.cos() + mc * t.sin();
    let scale = f.norm().max(f64::MIN_POSITIVE);
    SymmetricEigen::new(f).eigenvalues.iter().filter(|&&l| l.abs() < 1e-14 * scale).count()
}

/// Roots expanded by multiplicity, ascending.
pub fn expanded(roots: &[ScanRoot]) -> Vec<f64> {
    roots.iter().flat_map(|r| std::iter::repeat_n(r.x, r.multiplicity)).collect()
}
