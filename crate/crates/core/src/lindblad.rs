//! Density matrices and the Lindblad master equation
//!
//! ```text
//! dρ/dt = i(ρH − Hρ) + Σ_c [2 c ρ c† − c†c ρ − ρ c†c] / 2
//! ```
//!
//! with `H` in rad/μs and time in μs.
//!
//! Two integrators are provided. `Method::Propagator` (the default, needs the
//! `std` feature) builds the `d² × d²` Liouvillian once and advances the
//! vectorized state with its matrix exponential, so every sample is exact up
//! to round-off regardless of how stiff the coherent part is.
//! [`Method::DormandPrince`] is an adaptive explicit 5(4) pair with dense
//! output, controlled by `rel_tol`/`abs_tol`. Without `std` it is the default.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::format;
#[cfg(test)]
use alloc::vec;

#[cfg(feature = "std")]
use nalgebra::DVector;
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::{CMatrix, CVector, Error, IntegrationFailure, Result};

mod dopri;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Invariant tolerances for density matrices.
pub const HERMITICITY_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-9;
pub const POSITIVITY_TOL: f64 = 1e-8;

/// A Hermitian, positive, unit-trace state.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    m: CMatrix,
}

impl DensityMatrix {
    /// `|ψ⟩⟨ψ|` for a normalized `ψ`.
    pub fn from_pure(psi: &CVector) -> Result<Self> {
        let norm = psi.norm();
        if (norm - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("state vector has norm {norm}")));
        }
        Ok(DensityMatrix { m: psi * psi.adjoint() })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let w = Complex64::new(1.0 / dim as f64, 0.0);
        DensityMatrix { m: CMatrix::identity(dim, dim) * w }
    }

    /// Validates and wraps an arbitrary matrix.
    pub fn from_matrix(m: CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch { expected: m.nrows(), got: m.ncols() });
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState("non-finite entry".to_string()));
        }
        let herm = hermiticity_error(&m);
        if herm > HERMITICITY_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {herm:e})")));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}")));
        }
        let rho = DensityMatrix { m };
        let min = rho.min_eigenvalue();
        if min < -POSITIVITY_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(rho)
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        self.m.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn hermiticity_error(&self) -> f64 {
        hermiticity_error(&self.m)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.m)
    }

    /// `(ρ + ρ†) / 2`.
    pub fn symmetrized(&self) -> Self {
        DensityMatrix { m: symmetrize(&self.m) }
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.m[(i, j)]
    }
}

fn hermiticity_error(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..=j {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn symmetrize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

fn min_eigenvalue(m: &CMatrix) -> f64 {
    SymmetricEigen::new(symmetrize(m))
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Sparse jump operator `c = Σ aₖ |toₖ⟩⟨fromₖ|`.
#[derive(Clone, Debug, PartialEq)]
pub struct JumpOperator {
    terms: Vec<(Complex64, usize, usize)>,
}

impl JumpOperator {
    /// Terms are `(amplitude, from, to)`.
    pub fn new(terms: Vec<(Complex64, usize, usize)>) -> Self {
        JumpOperator { terms }
    }

    pub fn terms(&self) -> &[(Complex64, usize, usize)] {
        &self.terms
    }

    fn max_index(&self) -> Option<usize> {
        self.terms.iter().map(|&(_, f, t)| f.max(t)).max()
    }

    pub fn to_dense(&self, dim: usize) -> CMatrix {
        let mut c = CMatrix::zeros(dim, dim);
        for &(a, from, to) in &self.terms {
            c[(to, from)] += a;
        }
        c
    }
}

/// Converts a real Hamiltonian into the complex form used by the integrator.
pub fn complexify(h: &DMatrix<f64>) -> CMatrix {
    h.map(|x| Complex64::new(x, 0.0))
}

/// Precomputed pieces of the generator: `H_eff = H − (i/2) Σ c†c` and the
/// jump terms.
#[derive(Clone, Debug)]
struct Generator {
    h_eff: CMatrix,
    h_eff_adj: CMatrix,
    jumps: Vec<JumpOperator>,
}

impl Generator {
    fn new(h: &CMatrix, cs: &[JumpOperator]) -> Result<Self> {
        if !h.is_square() {
            return Err(Error::DimensionMismatch { expected: h.nrows(), got: h.ncols() });
        }
        let d = h.nrows();
        for c in cs {
            if let Some(k) = c.max_index() {
                if k >= d {
                    return Err(Error::DimensionMismatch { expected: d, got: k + 1 });
                }
            }
        }
        let mut h_eff = h.clone();
        for c in cs {
            let dense = c.to_dense(d);
            h_eff -= (dense.adjoint() * dense) * Complex64::new(0.0, 0.5);
        }
        let h_eff_adj = h_eff.adjoint();
        Ok(Generator { h_eff, h_eff_adj, jumps: cs.to_vec() })
    }

    fn dim(&self) -> usize {
        self.h_eff.nrows()
    }

    fn apply(&self, rho: &CMatrix, out: &mut CMatrix) {
        out.gemm(-I, &self.h_eff, rho, Complex64::new(0.0, 0.0));
        out.gemm(I, rho, &self.h_eff_adj, Complex64::new(1.0, 0.0));
        for c in &self.jumps {
            for &(ak, fk, tk) in &c.terms {
                for &(al, fl, tl) in &c.terms {
                    out[(tk, tl)] += ak * al.conj() * rho[(fk, fl)];
                }
            }
        }
    }

    fn superoperator(&self) -> CMatrix {
        let d = self.dim();
        let n = d * d;
        let mut l = CMatrix::zeros(n, n);
        let mut basis = CMatrix::zeros(d, d);
        let mut out = CMatrix::zeros(d, d);
        for col in 0..n {
            basis[(col % d, col / d)] = Complex64::new(1.0, 0.0);
            self.apply(&basis, &mut out);
            l.column_mut(col).copy_from_slice(out.as_slice());
            basis[(col % d, col / d)] = Complex64::new(0.0, 0.0);
        }
        l
    }
}

/// Right-hand side of the master equation for a (not necessarily valid)
/// matrix `rho`.
pub fn liouvillian_apply(h: &CMatrix, cs: &[JumpOperator], rho: &CMatrix) -> Result<CMatrix> {
    let g = Generator::new(h, cs)?;
    if rho.nrows() != g.dim() || rho.ncols() != g.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), got: rho.nrows() });
    }
    let mut out = CMatrix::zeros(g.dim(), g.dim());
    g.apply(rho, &mut out);
    Ok(out)
}

/// The Liouvillian acting on column-major `vec(ρ)`.
pub fn superoperator(h: &CMatrix, cs: &[JumpOperator]) -> Result<CMatrix> {
    Ok(Generator::new(h, cs)?.superoperator())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Method {
    /// Matrix exponential of the Liouvillian over substeps of at most
    /// `max_step`.
    #[cfg(feature = "std")]
    Propagator,
    /// Adaptive Dormand–Prince 5(4) with dense output.
    DormandPrince,
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// μs.
    pub max_step: f64,
    pub method: Method,
    /// Keep the density matrix at every sample time.
    pub store_states: bool,
}

impl Default for Method {
    #[cfg(feature = "std")]
    fn default() -> Self {
        Method::Propagator
    }

    #[cfg(not(feature = "std"))]
    fn default() -> Self {
        Method::DormandPrince
    }
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            max_step: 0.05,
            method: Method::default(),
            store_states: false,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("rel_tol", self.rel_tol),
            ("abs_tol", self.abs_tol),
            ("max_step", self.max_step),
        ] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::InvalidParameter { name, value, reason: "must be positive" });
            }
        }
        Ok(())
    }
}

/// A named real quantity recorded along a trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    pub name: String,
    pub kind: ObservableKind,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ObservableKind {
    /// `⟨ψ|ρ|ψ⟩`.
    Projector(CVector),
    /// Total population of a set of basis indices.
    Subspace(Vec<usize>),
}

impl Observable {
    pub fn projector(name: impl Into<String>, psi: CVector) -> Self {
        Observable { name: name.into(), kind: ObservableKind::Projector(psi) }
    }

    pub fn subspace(name: impl Into<String>, indices: Vec<usize>) -> Self {
        Observable { name: name.into(), kind: ObservableKind::Subspace(indices) }
    }

    pub fn measure(&self, rho: &DensityMatrix) -> f64 {
        match &self.kind {
            ObservableKind::Projector(psi) => population(rho, psi),
            ObservableKind::Subspace(idx) => {
                idx.iter().map(|&k| rho.entry(k, k).re).sum::<f64>().clamp(0.0, 1.0)
            }
        }
    }
}

/// Sampled output of [`evolve`].
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub series: Vec<(String, Vec<f64>)>,
    pub states: Option<Vec<DensityMatrix>>,
    pub invariants: InvariantReport,
}

/// Worst invariant values seen at the samples of one or more runs.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InvariantReport {
    pub max_trace_drift: f64,
    pub max_hermiticity_error: f64,
    pub min_eigenvalue: f64,
}

impl Default for InvariantReport {
    fn default() -> Self {
        InvariantReport {
            max_trace_drift: 0.0,
            max_hermiticity_error: 0.0,
            min_eigenvalue: f64::INFINITY,
        }
    }
}

impl InvariantReport {
    pub fn merge(&mut self, other: &InvariantReport) {
        self.max_trace_drift = self.max_trace_drift.max(other.max_trace_drift);
        self.max_hermiticity_error = self.max_hermiticity_error.max(other.max_hermiticity_error);
        self.min_eigenvalue = self.min_eigenvalue.min(other.min_eigenvalue);
    }
}

impl Trajectory {
    pub fn series(&self, name: &str) -> Option<&[f64]> {
        self.series.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_slice())
    }

    pub fn last(&self, name: &str) -> Option<f64> {
        self.series(name).and_then(|v| v.last().copied())
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Value of a series at the sample closest to `t`.
    pub fn at(&self, name: &str, t: f64) -> Option<f64> {
        let v = self.series(name)?;
        let k = self
            .times
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - t).abs().total_cmp(&(b.1 - t).abs()))?
            .0;
        v.get(k).copied()
    }
}

/// `⟨ψ|ρ|ψ⟩` clipped to `[0, 1]`.
pub fn population(rho: &DensityMatrix, psi: &CVector) -> f64 {
    let m = rho.matrix();
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..psi.len() {
        if psi[j] == Complex64::new(0.0, 0.0) {
            continue;
        }
        for i in 0..psi.len() {
            acc += psi[i].conj() * m[(i, j)] * psi[j];
        }
    }
    acc.re.clamp(0.0, 1.0)
}

/// Uniform grid of `samples` points on `[0, t_final]`.
pub fn uniform_grid(t_final: f64, samples: usize) -> Result<Vec<f64>> {
    if samples < 2 {
        return Err(Error::InvalidTimeGrid("need at least two samples"));
    }
    if !(t_final > 0.0) || !t_final.is_finite() {
        return Err(Error::InvalidTimeGrid("final time must be positive"));
    }
    let n = (samples - 1) as f64;
    Ok((0..samples).map(|k| t_final * k as f64 / n).collect())
}

fn check_grid(t: &[f64]) -> Result<()> {
    if t.is_empty() {
        return Err(Error::InvalidTimeGrid("empty"));
    }
    if t.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidTimeGrid("non-finite time"));
    }
    if t.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidTimeGrid("times must be strictly increasing"));
    }
    Ok(())
}

struct Recorder<'a> {
    observables: &'a [Observable],
    trajectory: Trajectory,
    trace0: Complex64,
}

impl<'a> Recorder<'a> {
    fn new(observables: &'a [Observable], t_grid: &[f64], trace0: Complex64, store: bool) -> Self {
        Recorder {
            observables,
            trajectory: Trajectory {
                times: Vec::with_capacity(t_grid.len()),
                series: observables
                    .iter()
                    .map(|o| (o.name.clone(), Vec::with_capacity(t_grid.len())))
                    .collect(),
                states: if store { Some(Vec::with_capacity(t_grid.len())) } else { None },
                invariants: InvariantReport::default(),
            },
            trace0,
        }
    }

    fn record(&mut self, t: f64, raw: &CMatrix) -> Result<()> {
        let fail = |reason| Error::Integration { t, reason };
        if raw.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(fail(IntegrationFailure::NonFinite));
        }
        let herm = hermiticity_error(raw);
        if herm > 10.0 * HERMITICITY_TOL {
            return Err(fail(IntegrationFailure::NonHermitian { deviation: herm }));
        }
        let drift = (raw.trace() - self.trace0).norm();
        if drift > 10.0 * TRACE_TOL {
            return Err(fail(IntegrationFailure::TraceDrift { drift }));
        }
        let rho = DensityMatrix { m: symmetrize(raw) };
        let min = rho.min_eigenvalue();
        if min < -10.0 * POSITIVITY_TOL {
            return Err(fail(IntegrationFailure::NotPositive { min_eigenvalue: min }));
        }
        let tr = &mut self.trajectory;
        tr.invariants.merge(&InvariantReport {
            max_trace_drift: drift,
            max_hermiticity_error: herm,
            min_eigenvalue: min,
        });
        tr.times.push(t);
        for (o, (_, v)) in self.observables.iter().zip(tr.series.iter_mut()) {
            v.push(o.measure(&rho));
        }
        if let Some(states) = tr.states.as_mut() {
            states.push(rho);
        }
        Ok(())
    }
}

/// Integrates from `rho0` at `t_grid[0]` and samples at every grid time.
pub fn evolve(
    rho0: &DensityMatrix,
    h: &CMatrix,
    cs: &[JumpOperator],
    t_grid: &[f64],
    observables: &[Observable],
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    check_grid(t_grid)?;
    let g = Generator::new(h, cs)?;
    if rho0.dim() != g.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), got: rho0.dim() });
    }
    for o in observables {
        let ok = match &o.kind {
            ObservableKind::Projector(psi) => psi.len() == g.dim(),
            ObservableKind::Subspace(idx) => idx.iter().all(|&k| k < g.dim()),
        };
        if !ok {
            return Err(Error::DimensionMismatch { expected: g.dim(), got: 0 });
        }
    }
    let mut rec = Recorder::new(observables, t_grid, rho0.trace(), cfg.store_states);
    rec.record(t_grid[0], rho0.matrix())?;
    match cfg.method {
        #[cfg(feature = "std")]
        Method::Propagator => propagate(&g, rho0.matrix(), t_grid, cfg, &mut rec)?,
        Method::DormandPrince => {
            let rhs = |y: &CMatrix, out: &mut CMatrix| g.apply(y, out);
            dopri::integrate(rhs, rho0.matrix().clone(), t_grid, cfg, |t, y| rec.record(t, y))?
        }
    }
    Ok(rec.trajectory)
}

#[cfg(feature = "std")]
fn propagate(
    g: &Generator,
    rho0: &CMatrix,
    t_grid: &[f64],
    cfg: &IntegratorConfig,
    rec: &mut Recorder<'_>,
) -> Result<()> {
    let d = g.dim();
    let l = g.superoperator();
    let mut cache: Vec<(f64, CMatrix)> = Vec::new();
    let mut v = DVector::from_column_slice(rho0.as_slice());
    let mut scratch = DVector::<Complex64>::zeros(d * d);
    for w in t_grid.windows(2) {
        let dt = w[1] - w[0];
        let n = (dt / cfg.max_step).ceil().max(1.0);
        let h = dt / n;
        let pos = match cache.iter().position(|(hc, _)| (hc - h).abs() <= 1e-12 * h) {
            Some(p) => p,
            None => {
                let p = (&l * Complex64::new(h, 0.0)).exp();
                if p.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                    return Err(Error::Integration { t: w[0], reason: IntegrationFailure::NonFinite });
                }
                cache.push((h, p));
                cache.len() - 1
            }
        };
        let p = &cache[pos].1;
        for _ in 0..n as usize {
            scratch.gemv(Complex64::new(1.0, 0.0), p, &v, Complex64::new(0.0, 0.0));
            core::mem::swap(&mut v, &mut scratch);
        }
        let rho = CMatrix::from_column_slice(d, d, v.as_slice());
        rec.record(w[1], &rho)?;
    }
    Ok(())
}
