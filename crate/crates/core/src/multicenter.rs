//! The multi-center compatibility system `(Ms + x Mc) c = 0`, `x = tan eta`,
//! its solution as a symmetric pencil, and the amplitudes and cross sections
//! built from the modes.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::darboux::{background_phase, dressed_regular_wave};
use crate::error::{Error, Result};
use crate::geometry::{Alpha, Geometry, Point, Site};
use crate::greens::{kernels, KernelSet};
use crate::gzrp::{fold_phase, sin2_from_tan};
use crate::oracle::quadrature::SphereRule;
use crate::units::Wavenumber;

/// Relative tolerance under which two roots of the pencil are one mode.
pub const MERGE_TOL: f64 = 1e-8;

/// One root of the pencil with an orthonormal basis of its nullspace.
#[derive(Debug, Clone, PartialEq)]
pub struct Mode {
    pub tan_eta: f64,
    pub eta: f64,
    pub coeffs: Vec<DVector<f64>>,
}

impl Mode {
    pub fn multiplicity(&self) -> usize {
        self.coeffs.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSolution {
    pub k: Wavenumber,
    /// Sorted by `tan_eta`; infinite tangents last.
    pub modes: Vec<Mode>,
    /// Phase of the dressed background; 0 when undressed.
    pub background_delta: f64,
}

impl PhaseSolution {
    pub fn mode_count(&self) -> usize {
        self.modes.iter().map(Mode::multiplicity).sum()
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.modes.iter().map(Mode::multiplicity).collect()
    }

    /// All tangents, each repeated by its multiplicity.
    pub fn tan_etas(&self) -> Vec<f64> {
        self.modes
            .iter()
            .flat_map(|m| std::iter::repeat_n(m.tan_eta, m.multiplicity()))
            .collect()
    }
}

/// Inverse scattering length entering the diagonal of `Mc` for a site.
/// A dressed site contributes its energy-dependent effective value.
pub fn site_alpha(site: &Site, k: f64) -> Result<f64> {
    if site.channel.l != 0 {
        return Err(Error::Domain(format!(
            "the multi-center system couples s-wave sites only (site has l = {})",
            site.channel.l
        )));
    }
    match (&site.dressing, site.channel.alpha) {
        (Some(step), alpha) => {
            if !step.is_trivial() {
                return Err(Error::UnsupportedDressing(format!(
                    "site dressing needs a trivial step e = +-b to act as an effective alpha (b = {}, e = {})",
                    step.b, step.e
                )));
            }
            step.effective_alpha(alpha, k)
        }
        (None, Alpha::Finite(a)) => Ok(a),
        (None, Alpha::Infinite) => Err(Error::Domain("a site with alpha = inf does not scatter".into())),
    }
}

pub fn assemble_system(geometry: &Geometry, ks: &KernelSet, k: Wavenumber) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let n = geometry.len();
    if ks.n() != n || ks.s.nrows() != n || ks.c.nrows() != n {
        return Err(Error::DimensionMismatch(format!("{} sites but kernels for {}", n, ks.n())));
    }
    if ks.k != k {
        return Err(Error::DimensionMismatch(format!(
            "kernels at k = {} used at k = {}",
            ks.k.get(),
            k.get()
        )));
    }
    let kk = k.get();
    let mut ms = ks.s.clone();
    let mut mc = ks.c.clone();
    for (i, site) in geometry.sites().iter().enumerate() {
        ms[(i, i)] = kk + ks.delta_k[i];
        mc[(i, i)] = site_alpha(site, kk)? + ks.delta_alpha[i];
    }
    Ok((ms, mc))
}

struct Root {
    x: f64,
    v: DVector<f64>,
}

fn unit_with_sign(mut v: DVector<f64>) -> DVector<f64> {
    let norm = v.norm();
    if norm > 0.0 {
        v /= norm;
    }
    let (imax, _) = v.iter().enumerate().fold((0, 0.0), |acc, (i, &x)| if x.abs() > acc.1 + 1e-12 { (i, x.abs()) } else { acc });
    if v[imax] < 0.0 {
        v = -v;
    }
    v
}

/// Roots via a definite combination `P = cos(t) Ms + sin(t) Mc`.
/// With `Q = -sin(t) Ms + cos(t) Mc` and `Q v = mu P v`, the root is
/// `eta = t + atan(mu) - pi/2`.
fn definite_roots(ms: &DMatrix<f64>, mc: &DMatrix<f64>) -> Option<Vec<Root>> {
    const STEPS: usize = 64;
    let mut order: Vec<usize> = vec![0, STEPS / 4, STEPS / 2, 3 * STEPS / 4];
    order.extend((0..STEPS).filter(|j| j % (STEPS / 4) != 0));
    let mut best: Option<(f64, f64)> = None;
    for j in order {
        let t = 2.0 * PI * j as f64 / STEPS as f64;
        let p = ms * t.cos() + mc * t.sin();
        let ev = SymmetricEigen::new(p.clone()).eigenvalues;
        let (lo, hi) = ev.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &x| (lo.min(x), hi.max(x.abs())));
        let ratio = if hi > 0.0 { lo / hi } else { -1.0 };
        if ratio > 1e-3 {
            best = Some((t, ratio));
            break;
        }
        if ratio > 0.0 && best.is_none_or(|(_, r)| ratio > r) {
            best = Some((t, ratio));
        }
    }
    let (t, ratio) = best?;
    if ratio < 1e-12 {
        return None;
    }
    let (s, c) = t.sin_cos();
    let p = ms * c + mc * s;
    let q = ms * (-s) + mc * c;
    let chol = p.cholesky()?;
    let l = chol.l();
    let linv = l.clone().try_inverse()?;
    let mut red = &linv * q * linv.transpose();
    red = (&red + red.transpose()) * 0.5;
    let eig = SymmetricEigen::new(red);
    let lt_inv = linv.transpose();
    let roots = (0..eig.eigenvalues.len())
        .map(|i| {
            let mu = eig.eigenvalues[i];
            let den = s + c * mu;
            let x = if den == 0.0 { f64::INFINITY } else { (s * mu - c) / den };
            let eta = fold_phase(t + mu.atan() - PI / 2.0);
            let x = if eta == PI / 2.0 { f64::INFINITY } else { x };
            let v = &lt_inv * eig.eigenvectors.column(i);
            Root { x, v: v.into_owned() }
        })
        .collect();
    Some(roots)
}

/// General pencil: eigenvalues of `P^{-1} Q` for a well-conditioned rotation
/// `P = cos(t) Ms + sin(t) Mc`, nullspaces by SVD.
fn general_roots(ms: &DMatrix<f64>, mc: &DMatrix<f64>) -> Result<Vec<Root>> {
    const STEPS: usize = 16;
    let n = ms.nrows();
    let rcond = |m: &DMatrix<f64>| {
        let sv = m.clone().singular_values();
        let max = sv.max();
        if max == 0.0 {
            0.0
        } else {
            sv.min() / max
        }
    };
    let mut angles: Vec<(f64, f64)> = (0..STEPS)
        .map(|j| {
            let t = PI * j as f64 / STEPS as f64;
            (t, rcond(&(ms * t.cos() + mc * t.sin())))
        })
        .collect();
    angles.sort_by(|a, b| b.1.total_cmp(&a.1));
    if angles[0].1 < 1e-13 {
        return Err(Error::Pencil("singular pencil: Ms and Mc share no invertible combination".into()));
    }
    let mut xs = None;
    for &(t, rc) in angles.iter().take(4) {
        if rc < 1e-13 {
            break;
        }
        let (s, c) = t.sin_cos();
        let p = ms * c + mc * s;
        let q = ms * (-s) + mc * c;
        let Some(pinv) = p.try_inverse() else { continue };
        let Some(schur) = nalgebra::linalg::Schur::try_new(pinv * q, f64::EPSILON, 10_000) else {
            continue;
        };
        let mut out = Vec::with_capacity(n);
        for z in schur.complex_eigenvalues().iter() {
            if z.im.abs() > 1e-8 * (1.0 + z.norm()) {
                return Err(Error::Pencil(format!(
                    "complex root of det(Ms + x Mc) (eigenvalue {z} of the rotated pencil); \
                     the system has no real phase for this mode"
                )));
            }
            let mu = z.re;
            let eta = fold_phase(t + mu.atan() - PI / 2.0);
            out.push(if eta == PI / 2.0 { f64::INFINITY } else { eta.tan() });
        }
        xs = Some(out);
        break;
    }
    let mut xs = xs.ok_or_else(|| Error::Pencil("Schur iteration did not converge".into()))?;
    sort_x(&mut xs);
    let (nms, nmc) = (ms.norm(), mc.norm());
    let mut out = Vec::with_capacity(n);
    let mut i = 0;
    while i < xs.len() {
        let mut j = i + 1;
        while j < xs.len() && same_root(xs[i], xs[j]) {
            j += 1;
        }
        let x = xs[i];
        let m = j - i;
        let pencil = if x.is_infinite() { mc.clone() } else { ms + mc * x };
        let scale = if x.is_infinite() { nmc } else { nms + x.abs() * nmc };
        let svd = pencil.svd(false, true);
        let vt = svd.v_t.expect("v_t requested");
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
        let null: Vec<usize> = idx.iter().copied().filter(|&q| svd.singular_values[q] <= 1e-7 * scale).collect();
        if null.len() != m {
            return Err(Error::Pencil(format!(
                "root x = {x} of multiplicity {m} has a nullspace of dimension {}",
                null.len()
            )));
        }
        for q in null {
            out.push(Root { x, v: vt.row(q).transpose() });
        }
        i = j;
    }
    Ok(out)
}

/// One step of block inverse iteration followed by a Rayleigh–Ritz solve of
/// the projected pencil. The Rayleigh quotient is stationary at a root, so
/// this recovers digits the reduction loses when `Ms` is nearly singular.
fn refine_cluster(ms: &DMatrix<f64>, mc: &DMatrix<f64>, cluster: Vec<Root>) -> Vec<Root> {
    let m = cluster.len();
    let x0 = cluster.iter().map(|r| r.x).sum::<f64>() / m as f64;
    if !x0.is_finite() {
        return cluster;
    }
    let mut basis = DMatrix::from_columns(&cluster.iter().map(|r| r.v.clone()).collect::<Vec<_>>());
    for _ in 0..2 {
        let shift = x0 + 1e-12 * (1.0 + x0.abs());
        let lu = (ms + mc * shift).lu();
        let Some(w) = lu.solve(&(mc * &basis)) else { return cluster };
        if w.iter().any(|x| !x.is_finite()) {
            return cluster;
        }
        let qr = w.qr();
        basis = qr.q();
    }
    let a = basis.transpose() * ms * &basis;
    let b = basis.transpose() * mc * &basis;
    let a = (&a + a.transpose()) * 0.5;
    let b = (&b + b.transpose()) * 0.5;
    let (xs, vecs) = if m == 1 {
        if b[(0, 0)] == 0.0 {
            return cluster;
        }
        (vec![-a[(0, 0)] / b[(0, 0)]], DMatrix::identity(1, 1))
    } else {
        let sign = if b.trace() < 0.0 { -1.0 } else { 1.0 };
        let Some(chol) = (&b * sign).cholesky() else { return cluster };
        let Some(linv) = chol.l().try_inverse() else { return cluster };
        let red = &linv * &a * linv.transpose() * (-sign);
        let eig = SymmetricEigen::new((&red + red.transpose()) * 0.5);
        (eig.eigenvalues.iter().copied().collect(), linv.transpose() * eig.eigenvectors)
    };
    let tol = 1e-5 * (1.0 + x0.abs());
    if xs.iter().any(|x| !x.is_finite() || (x - x0).abs() > tol) {
        return cluster;
    }
    let full = basis * vecs;
    xs.into_iter()
        .enumerate()
        .map(|(i, x)| Root { x, v: full.column(i).into_owned() })
        .collect()
}

fn refine(ms: &DMatrix<f64>, mc: &DMatrix<f64>, mut roots: Vec<Root>) -> Vec<Root> {
    roots.sort_by(|a, b| a.x.total_cmp(&b.x));
    let mut out = Vec::with_capacity(roots.len());
    let mut cluster: Vec<Root> = Vec::new();
    for r in roots {
        if let Some(last) = cluster.last() {
            if !same_root(last.x, r.x) {
                out.extend(refine_cluster(ms, mc, std::mem::take(&mut cluster)));
            }
        }
        cluster.push(r);
    }
    out.extend(refine_cluster(ms, mc, cluster));
    out
}

fn sort_x(xs: &mut [f64]) {
    xs.sort_by(|a, b| a.total_cmp(b));
}

fn same_root(a: f64, b: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a.is_infinite() && b.is_infinite();
    }
    (a - b).abs() < MERGE_TOL * (1.0 + a.abs().min(b.abs()))
}

fn group(mut roots: Vec<Root>) -> Vec<Mode> {
    // +inf and -inf are the same root (eta = pi/2)
    for r in roots.iter_mut() {
        if r.x.is_infinite() {
            r.x = f64::INFINITY;
        }
    }
    roots.sort_by(|a, b| a.x.total_cmp(&b.x));
    let mut modes: Vec<Mode> = Vec::new();
    let mut members: Vec<Root> = Vec::new();
    let flush = |members: &mut Vec<Root>, modes: &mut Vec<Mode>| {
        if members.is_empty() {
            return;
        }
        let m = members.len() as f64;
        let x = if members[0].x.is_infinite() {
            f64::INFINITY
        } else {
            members.iter().map(|r| r.x).sum::<f64>() / m
        };
        let eta = if x.is_infinite() { PI / 2.0 } else { x.atan() };
        let basis = orthonormal_basis(members.drain(..).map(|r| r.v).collect());
        modes.push(Mode { tan_eta: x, eta, coeffs: basis });
    };
    for r in roots {
        if let Some(last) = members.last() {
            if !same_root(last.x, r.x) {
                flush(&mut members, &mut modes);
            }
        }
        members.push(r);
    }
    flush(&mut members, &mut modes);
    modes
}

fn orthonormal_basis(vs: Vec<DVector<f64>>) -> Vec<DVector<f64>> {
    if vs.len() == 1 {
        return vec![unit_with_sign(vs.into_iter().next().expect("one vector"))];
    }
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(vs.len());
    for v in vs {
        let mut w = v;
        for u in &out {
            let p = u.dot(&w);
            w -= u * p;
        }
        out.push(unit_with_sign(w));
    }
    out
}

/// All real roots of `det(Ms + x Mc) = 0` with their nullspaces.
pub fn solve_phases(ms: &DMatrix<f64>, mc: &DMatrix<f64>, k: Wavenumber) -> Result<PhaseSolution> {
    let n = ms.nrows();
    if ms.ncols() != n || mc.nrows() != n || mc.ncols() != n || n == 0 {
        return Err(Error::DimensionMismatch(format!(
            "pencil shapes {}x{} and {}x{}",
            ms.nrows(),
            ms.ncols(),
            mc.nrows(),
            mc.ncols()
        )));
    }
    if ms.iter().chain(mc.iter()).any(|x| !x.is_finite()) {
        return Err(Error::Pencil("non-finite pencil entry".into()));
    }
    let roots = match definite_roots(ms, mc) {
        Some(r) => r,
        None => general_roots(ms, mc)?,
    };
    let roots = refine(ms, mc, roots);
    Ok(PhaseSolution { k, modes: group(roots), background_delta: 0.0 })
}

/// Kernels, system and solution for a geometry at one wavenumber.
pub fn solve(geometry: &Geometry, k: Wavenumber) -> Result<PhaseSolution> {
    let ks = kernels(geometry, k)?;
    let (ms, mc) = assemble_system(geometry, &ks, k)?;
    let mut sol = solve_phases(&ms, &mc, k)?;
    if let Some(bg) = geometry.background() {
        sol.background_delta = background_phase(k.get(), bg.step.b);
    }
    Ok(sol)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossSections {
    /// One entry per mode (per member of a degenerate set).
    pub partial: Vec<f64>,
    /// Sum over modes counted with multiplicity.
    pub total: f64,
    /// `total` plus the background s-wave term.
    pub averaged: f64,
}

pub fn partial_cross_section(tan_eta: f64, k: f64) -> f64 {
    4.0 * PI / (k * k) * sin2_from_tan(tan_eta)
}

pub fn cross_sections(solution: &PhaseSolution) -> CrossSections {
    let k = solution.k.get();
    let partial: Vec<f64> = solution.modes.iter().map(|m| partial_cross_section(m.tan_eta, k)).collect();
    let total = solution
        .modes
        .iter()
        .zip(&partial)
        .map(|(m, s)| m.multiplicity() as f64 * s)
        .sum::<f64>();
    let bg = 4.0 * PI / (k * k) * solution.background_delta.sin().powi(2);
    CrossSections { partial, total, averaged: total + bg }
}

/// Factor multiplying `A(n) A*(n0)` in the amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AmplitudeConvention {
    /// `(e^{2 i eta} - 1)`, consistent with the cross sections.
    #[default]
    Unitary,
    /// `(e^{i eta} - 1)`, kept for comparison.
    Printed,
}

/// Mode amplitudes orthonormalized over the sphere and the full scattering
/// amplitude `F(n, n0)`.
#[derive(Debug, Clone)]
pub struct ScatteringAmplitude {
    k: f64,
    background_delta: f64,
    positions: Vec<Point>,
    /// Constant s-wave distortion of each site wave in the dressed background.
    distortion: Vec<Complex64>,
    /// `(eta, normalized complex coefficient vectors)` per mode.
    modes: Vec<(f64, Vec<DVector<Complex64>>)>,
    pub convention: AmplitudeConvention,
}

impl ScatteringAmplitude {
    pub fn new(solution: &PhaseSolution, geometry: &Geometry) -> Result<Self> {
        let k = solution.k.get();
        let positions: Vec<Point> = geometry.sites().iter().map(|s| s.position).collect();
        let distortion = site_distortions(geometry, k, solution.background_delta);
        let extent = positions
            .iter()
            .flat_map(|a| positions.iter().map(move |b| (a - b).norm()))
            .fold(0.0, f64::max);
        let rule = SphereRule::for_bandwidth(k * extent);
        let mut amp = ScatteringAmplitude {
            k,
            background_delta: solution.background_delta,
            positions,
            distortion,
            modes: Vec::new(),
            convention: AmplitudeConvention::Unitary,
        };
        let gram = amp.site_gram(&rule);
        for mode in &solution.modes {
            let mut basis: Vec<DVector<Complex64>> = Vec::with_capacity(mode.multiplicity());
            for c in &mode.coeffs {
                let mut w: DVector<Complex64> = c.map(|x| Complex64::new(x, 0.0));
                for u in &basis {
                    let p = inner(&gram, u, &w);
                    w -= u * p;
                }
                let norm = inner(&gram, &w, &w).re;
                if norm <= 0.0 {
                    return Err(Error::Pencil("mode amplitude vanishes on the sphere".into()));
                }
                basis.push(w / Complex64::new(norm.sqrt(), 0.0));
            }
            amp.modes.push((mode.eta, basis));
        }
        Ok(amp)
    }

    pub fn with_convention(mut self, convention: AmplitudeConvention) -> Self {
        self.convention = convention;
        self
    }

    /// Site wave `Psi(r_i, -k n)`.
    pub fn site_wave(&self, i: usize, n: &Point) -> Complex64 {
        Complex64::from_polar(1.0, -self.k * n.dot(&self.positions[i])) + self.distortion[i]
    }

    fn waves(&self, n: &Point) -> DVector<Complex64> {
        DVector::from_iterator(self.positions.len(), (0..self.positions.len()).map(|i| self.site_wave(i, n)))
    }

    /// `G_ij = int Psi_i Psi_j* dOmega` by quadrature.
    fn site_gram(&self, rule: &SphereRule) -> DMatrix<Complex64> {
        let n = self.positions.len();
        let mut g = DMatrix::zeros(n, n);
        for (dir, w) in rule.nodes() {
            let psi = self.waves(dir);
            for i in 0..n {
                for j in 0..n {
                    g[(i, j)] += psi[i] * psi[j].conj() * w;
                }
            }
        }
        g
    }

    pub fn mode_count(&self) -> usize {
        self.modes.iter().map(|(_, b)| b.len()).sum()
    }

    /// `A_{lambda, member}(n)`, modes in solution order.
    pub fn partial(&self, mode: usize, member: usize, n: &Point) -> Complex64 {
        let c = &self.modes[mode].1[member];
        self.waves(n).iter().zip(c.iter()).map(|(p, c)| p * c).sum()
    }

    fn factor(&self, eta: f64) -> Complex64 {
        let e = match self.convention {
            AmplitudeConvention::Unitary => Complex64::from_polar(1.0, 2.0 * eta),
            AmplitudeConvention::Printed => Complex64::from_polar(1.0, eta),
        };
        (e - 1.0) * 4.0 * PI / Complex64::new(0.0, 2.0 * self.k)
    }

    /// Isotropic background amplitude `(e^{2 i delta} - 1)/(2 i k)`.
    pub fn background(&self) -> Complex64 {
        (Complex64::from_polar(1.0, 2.0 * self.background_delta) - 1.0) / Complex64::new(0.0, 2.0 * self.k)
    }

    /// `F(n, n0)` for outgoing direction `n` and incidence `n0`.
    pub fn eval(&self, n: &Point, n0: &Point) -> Complex64 {
        let (a, b) = (self.waves(n), self.waves(n0));
        let mut f = self.background();
        for (eta, basis) in &self.modes {
            let fac = self.factor(*eta);
            for c in basis {
                let an: Complex64 = a.iter().zip(c.iter()).map(|(p, c)| p * c).sum();
                let an0: Complex64 = b.iter().zip(c.iter()).map(|(p, c)| p * c).sum();
                f += fac * an * an0.conj();
            }
        }
        f
    }

    /// `(4 pi / k) Im F(n0, n0)` averaged over incidence directions.
    pub fn averaged_forward_cross_section(&self, rule: &SphereRule) -> f64 {
        let avg = rule.integrate(|n0| self.eval(n0, n0).im) / (4.0 * PI);
        4.0 * PI / self.k * avg
    }
}

fn inner(g: &DMatrix<Complex64>, u: &DVector<Complex64>, v: &DVector<Complex64>) -> Complex64 {
    // <u, v> = int (sum u_i Psi_i)* (sum v_j Psi_j) = sum u_i* G_ji v_j
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..u.len() {
        for j in 0..v.len() {
            s += u[i].conj() * g[(j, i)] * v[j];
        }
    }
    s
}

/// Extra s-wave term of each site wave in the dressed background:
/// `(e^{i delta} psi1(rho) - sin(k rho)) / (k rho)`; zero for plain sites.
fn site_distortions(geometry: &Geometry, k: f64, delta: f64) -> Vec<Complex64> {
    let n = geometry.len();
    match geometry.background() {
        None => vec![Complex64::new(0.0, 0.0); n],
        Some(bg) => geometry
            .sites()
            .iter()
            .map(|s| {
                let rho = (s.position - bg.center).norm();
                if rho < 1e-12 {
                    return Complex64::new(0.0, 0.0);
                }
                let psi1 = dressed_regular_wave(bg.step.b.abs(), k, rho);
                (Complex64::from_polar(psi1, delta) - (k * rho).sin()) / (k * rho)
            })
            .collect(),
    }
}

/// Single-site amplitude `A(n)` of mode `mode`, member `member`.
pub fn partial_amplitude(amplitude: &ScatteringAmplitude, mode: usize, member: usize, n: &Point) -> Complex64 {
    amplitude.partial(mode, member, n)
}

pub fn scattering_amplitude(solution: &PhaseSolution, geometry: &Geometry) -> Result<ScatteringAmplitude> {
    ScatteringAmplitude::new(solution, geometry)
}
