//! Dressed-state diagnostics, Ω_pd balancing and cooling runs.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::angmom::HalfInt;
use crate::hyperfine::{hf_element, HyperfineConstants, SpinSpace};
use crate::lindblad::{
    complexify, evolve, uniform_grid, DensityMatrix, IntegratorConfig, InvariantReport, Observable,
    Trajectory,
};
use crate::roots::brent;
use crate::srmodel::{
    hamiltonian, jump_operators, qubit_vectors, with_polarization_impurity, BasisState,
    ImpurityChannel, ModelParams, DIM,
};
use crate::{angular_to_mhz, CVector, Error, Result};

/// Largest `|e_up − e_down|` (MHz) accepted as balanced.
pub const BALANCE_TOL: f64 = 1e-4;

/// Full eigen-decomposition of the excited-manifold Hamiltonian.
#[derive(Clone, Debug, PartialEq)]
pub struct DressedSpectrum {
    /// Eigenvalues in MHz.
    pub energies: Vec<f64>,
    /// Orthonormal eigenvectors as columns.
    pub vectors: DMatrix<f64>,
}

impl DressedSpectrum {
    /// `V diag(E) Vᵀ` in rad/μs.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.energies.len(),
            self.energies.iter().map(|e| crate::mhz_to_angular(*e)),
        ));
        &self.vectors * d * self.vectors.transpose()
    }
}

/// Diagonalizes the model Hamiltonian with `Ω_eff = 0`.
pub fn dressed_spectrum(p: &ModelParams) -> Result<DressedSpectrum> {
    p.validate()?;
    let q = ModelParams { omega_eff: 0.0, ..*p };
    let eig = SymmetricEigen::new(hamiltonian(&q));
    Ok(DressedSpectrum {
        energies: eig.eigenvalues.iter().map(|w| angular_to_mhz(*w)).collect(),
        vectors: eig.eigenvectors,
    })
}

/// The two dressed states closest to `|¹P₁ −1,↑⟩` and `|¹P₁ −1,↓⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct DressedPair {
    pub e_up: CVector,
    pub e_down: CVector,
    /// MHz.
    pub energy_up: f64,
    pub energy_down: f64,
    pub overlap_up: f64,
    pub overlap_down: f64,
}

impl DressedPair {
    /// `energy_up − energy_down`, MHz.
    pub fn splitting(&self) -> f64 {
        self.energy_up - self.energy_down
    }
}

fn select(s: &DressedSpectrum, target: BasisState, label: &'static str) -> Result<(usize, f64)> {
    let k = target.index();
    let mut best = (usize::MAX, -1.0);
    let mut runner_up = -1.0;
    for col in 0..s.vectors.ncols() {
        let o = s.vectors[(k, col)].abs();
        if o > best.1 {
            runner_up = best.1;
            best = (col, o);
        } else if o > runner_up {
            runner_up = o;
        }
    }
    if best.1 - runner_up < 1e-9 {
        return Err(Error::AmbiguousOverlap { target: label, best: best.1, runner_up });
    }
    Ok(best)
}

pub fn dressed_pair(p: &ModelParams) -> Result<DressedPair> {
    let s = dressed_spectrum(p)?;
    let (iu, ou) = select(&s, BasisState::PMinusUp, "1P1(-1,up)")?;
    let (id, od) = select(&s, BasisState::PMinusDown, "1P1(-1,dn)")?;
    let col = |c: usize| {
        CVector::from_iterator(DIM, s.vectors.column(c).iter().map(|x| Complex64::new(*x, 0.0)))
    };
    Ok(DressedPair {
        e_up: col(iu),
        e_down: col(id),
        energy_up: s.energies[iu],
        energy_down: s.energies[id],
        overlap_up: ou.min(1.0),
        overlap_down: od.min(1.0),
    })
}

/// Common dressed energy at `Δ = 0`, MHz. Resonant driving uses `Δ = −ν`.
pub fn compute_nu(p: &ModelParams) -> Result<f64> {
    let pair = dressed_pair(&ModelParams { delta: 0.0, ..*p })?;
    let imbalance = pair.splitting();
    if imbalance.abs() > BALANCE_TOL {
        return Err(Error::Unbalanced { imbalance });
    }
    Ok(0.5 * (pair.energy_up + pair.energy_down))
}

/// Finds `Ω_pd` in `[lo, hi]` (MHz) that makes the two dressed energies equal.
pub fn balance_omega_pd(p: &ModelParams, lo: f64, hi: f64) -> Result<f64> {
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
        return Err(Error::InvalidParameter { name: "bracket", value: hi - lo, reason: "need lo < hi" });
    }
    let f = |w: f64| dressed_pair(&ModelParams { omega_pd: w, ..*p }).map(|d| d.splitting());
    brent(f, lo, hi, 1e-9, 200)
}

/// Outcome of a cooling run.
#[derive(Clone, Debug, PartialEq)]
pub struct CoolingResult {
    /// `⟨ψ_f|ρ(t)|ψ_f⟩` at the final time.
    pub fidelity: f64,
    pub pop_perp: f64,
    pub pop_reservoir: f64,
    /// Total `³P₀` population.
    pub pop_residual_clock: f64,
    /// Population still in `¹P₁`, `¹D₂` and `5s6s`.
    pub pop_transient: f64,
    pub trajectory: Trajectory,
}

impl CoolingResult {
    /// Sum of all reported populations, which should be 1.
    pub fn population_sum(&self) -> f64 {
        self.fidelity + self.pop_perp + self.pop_reservoir + self.pop_residual_clock + self.pop_transient
    }

    /// Sample closest to `t`.
    pub fn checkpoint(&self, t: f64) -> Checkpoint {
        let at = |n: &str| self.trajectory.at(n, t).unwrap_or(f64::NAN);
        let t_actual = self
            .trajectory
            .times
            .iter()
            .copied()
            .min_by(|a, b| (a - t).abs().total_cmp(&(b - t).abs()))
            .unwrap_or(f64::NAN);
        let transient = at("pop_1P1_total") + at("pop_1D2_total") + at("pop_6s");
        Checkpoint {
            t: t_actual,
            fidelity: at("pop_psif"),
            pop_perp: at("pop_perp"),
            pop_reservoir: at("pop_reservoir"),
            pop_clock: at("pop_clock_total"),
            population_sum: at("pop_psif")
                + at("pop_perp")
                + at("pop_reservoir")
                + at("pop_clock_total")
                + transient,
        }
    }
}

/// Populations at one sample time.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Checkpoint {
    pub t: f64,
    pub fidelity: f64,
    pub pop_perp: f64,
    pub pop_reservoir: f64,
    pub pop_clock: f64,
    pub population_sum: f64,
}

/// Names of the recorded series, in order.
pub const SERIES: [&str; 9] = [
    "pop_psi0",
    "pop_psif",
    "pop_perp",
    "pop_reservoir",
    "pop_1P1_total",
    "pop_1D2_total",
    "pop_6s",
    "pop_clock_total",
    "pop_ground_total",
];

fn observables(psi0: CVector, psi_f: CVector, psi_perp: CVector) -> Vec<Observable> {
    use BasisState::*;
    let idx = |s: &[BasisState]| s.iter().map(|b| b.index()).collect::<Vec<_>>();
    vec![
        Observable::projector(SERIES[0], psi0),
        Observable::projector(SERIES[1], psi_f),
        Observable::projector(SERIES[2], psi_perp),
        Observable::subspace(SERIES[3], idx(&[Reservoir])),
        Observable::subspace(SERIES[4], idx(&BasisState::P1_STATES)),
        Observable::subspace(SERIES[5], idx(&BasisState::D2_STATES)),
        Observable::subspace(SERIES[6], idx(&[S6Down])),
        Observable::subspace(SERIES[7], idx(&[ClockUp, ClockDown])),
        Observable::subspace(SERIES[8], idx(&[GroundUp, GroundDown])),
    ]
}

/// Cooling run with the default integrator.
pub fn cool(
    alpha: Complex64,
    beta: Complex64,
    p: &ModelParams,
    t_final: f64,
    samples: usize,
) -> Result<CoolingResult> {
    cool_with(alpha, beta, p, t_final, samples, &IntegratorConfig::default())
}

/// Evolves `|ψ₀⟩ = α|³P₀ ↑⟩ + β|³P₀ ↓⟩` under the full model.
pub fn cool_with(
    alpha: Complex64,
    beta: Complex64,
    p: &ModelParams,
    t_final: f64,
    samples: usize,
    cfg: &IntegratorConfig,
) -> Result<CoolingResult> {
    p.validate()?;
    let q = qubit_vectors(alpha, beta)?;
    let grid = uniform_grid(t_final, samples)?;
    let rho0 = DensityMatrix::from_pure(&q.psi0)?;
    let h = complexify(&hamiltonian(p));
    let cs = jump_operators(p);
    let obs = observables(q.psi0, q.psi_f, q.psi_perp);
    let trajectory = evolve(&rho0, &h, &cs, &grid, &obs, cfg)?;
    let last = |n: &str| trajectory.last(n).unwrap_or(f64::NAN);
    Ok(CoolingResult {
        fidelity: last("pop_psif"),
        pop_perp: last("pop_perp"),
        pop_reservoir: last("pop_reservoir"),
        pop_residual_clock: last("pop_clock_total"),
        pop_transient: last("pop_1P1_total") + last("pop_1D2_total") + last("pop_6s"),
        trajectory,
    })
}

/// Samples per μs used by the canned runs.
pub const SAMPLES_PER_US: usize = 10;

fn samples_for(t_final: f64) -> usize {
    (t_final * SAMPLES_PER_US as f64).round() as usize + 1
}

fn equal_superposition() -> (Complex64, Complex64) {
    (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))
}

/// `α/β` ratios of the qubit-state sweep.
pub const TABLE1_RATIOS: [f64; 6] = [0.1, 1.0 / 3.0, 0.5, 2.0, 3.0, 10.0];

/// Fidelity after `t_final` μs for `α = ratio`, `β = 1` (normalized).
pub fn ratio_fidelity(p: &ModelParams, ratio: f64, t_final: f64, cfg: &IntegratorConfig) -> Result<CoolingResult> {
    if !ratio.is_finite() || ratio < 0.0 {
        return Err(Error::InvalidParameter { name: "ratio", value: ratio, reason: "must be non-negative" });
    }
    cool_with(Complex64::new(ratio, 0.0), Complex64::new(1.0, 0.0), p, t_final, samples_for(t_final), cfg)
}

/// One parameter perturbation of the robustness study.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub params: ModelParams,
    pub t_final: f64,
    pub checkpoints: Vec<f64>,
}

/// Result row of [`sensitivity_suite`].
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SensitivityRow {
    pub name: String,
    /// `e_up − e_down` at `Δ = 0`, MHz.
    pub splitting: f64,
    pub checkpoints: Vec<Checkpoint>,
    pub invariants: InvariantReport,
}

/// The baseline plus six single-parameter perturbations of `p`.
pub fn sensitivity_scenarios(p: &ModelParams) -> Vec<Scenario> {
    let s = |name: &str, params: ModelParams, t_final: f64, checkpoints: &[f64]| Scenario {
        name: name.into(),
        params,
        t_final,
        checkpoints: checkpoints.to_vec(),
    };
    vec![
        s("baseline", *p, 20.0, &[20.0]),
        s("omega_eff=2", ModelParams { omega_eff: 2.0, ..*p }, 20.0, &[5.0, 20.0]),
        s("delta=0", ModelParams { delta: 0.0, ..*p }, 26.0, &[20.0, 26.0]),
        s("omega_ps=250", ModelParams { omega_ps: 250.0, ..*p }, 20.0, &[20.0]),
        s("delta_ps_extra=10", ModelParams { delta_ps_extra: 10.0, ..*p }, 20.0, &[20.0]),
        s("omega_pd=140", ModelParams { omega_pd: 140.0, ..*p }, 30.0, &[20.0, 30.0]),
        s("delta_pd=-1750", ModelParams { delta_pd: -1750.0, ..*p }, 20.0, &[20.0]),
    ]
}

pub fn run_scenario(s: &Scenario, cfg: &IntegratorConfig) -> Result<SensitivityRow> {
    let (a, b) = equal_superposition();
    let r = cool_with(a, b, &s.params, s.t_final, samples_for(s.t_final), cfg)?;
    let pair = dressed_pair(&ModelParams { delta: 0.0, ..s.params })?;
    Ok(SensitivityRow {
        name: s.name.clone(),
        splitting: pair.splitting(),
        checkpoints: s.checkpoints.iter().map(|&t| r.checkpoint(t)).collect(),
        invariants: r.trajectory.invariants,
    })
}

pub fn sensitivity_suite(p: &ModelParams) -> Result<Vec<SensitivityRow>> {
    let cfg = IntegratorConfig::default();
    sensitivity_scenarios(p).iter().map(|s| run_scenario(s, &cfg)).collect()
}

/// Result row of [`impurity_sweep`].
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ImpurityRow {
    pub chi: f64,
    pub fidelity: f64,
    pub pop_perp: f64,
    pub pop_reservoir: f64,
    pub invariants: InvariantReport,
}

pub fn impurity_point(p: &ModelParams, chi: f64, t_final: f64, cfg: &IntegratorConfig) -> Result<ImpurityRow> {
    let q = with_polarization_impurity(p, chi, ImpurityChannel::Dressing)?;
    let (a, b) = equal_superposition();
    let r = cool_with(a, b, &q, t_final, samples_for(t_final), cfg)?;
    Ok(ImpurityRow {
        chi,
        fidelity: r.fidelity,
        pop_perp: r.pop_perp,
        pop_reservoir: r.pop_reservoir,
        invariants: r.trajectory.invariants,
    })
}

/// Dressing-laser impurity sweep at 20 μs.
pub fn impurity_sweep(p: &ModelParams, chis: &[f64]) -> Result<Vec<ImpurityRow>> {
    let cfg = IntegratorConfig::default();
    chis.iter().map(|&chi| impurity_point(p, chi, 20.0, &cfg)).collect()
}

/// Dressed overlaps with `¹P₁` hyperfine constants multiplied by `scale`.
pub fn scaled_constants_overlaps(scale: f64) -> Result<(f64, f64)> {
    let p = ModelParams {
        hf_1p1: HyperfineConstants::SR87_1P1.scaled(scale),
        ..ModelParams::default()
    };
    let d = dressed_pair(&p)?;
    Ok((d.overlap_up, d.overlap_down))
}

/// Nuclear spin and `¹P₁` hyperfine constants of a candidate species.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IsotopePreset {
    pub name: &'static str,
    pub i: HalfInt,
    pub a: f64,
    pub q: f64,
}

pub const ISOTOPES: [IsotopePreset; 6] = [
    IsotopePreset { name: "Sr87", i: HalfInt::from_twice(9), a: -3.4, q: 39.0 },
    IsotopePreset { name: "Yb171", i: HalfInt::from_twice(1), a: -213.0, q: 0.0 },
    IsotopePreset { name: "Yb173", i: HalfInt::from_twice(5), a: 60.0, q: 600.0 },
    IsotopePreset { name: "Ca43", i: HalfInt::from_twice(7), a: -15.46, q: -9.7 },
    IsotopePreset { name: "Ca41", i: HalfInt::from_twice(7), a: -18.84, q: -9.2 },
    IsotopePreset { name: "Zn67", i: HalfInt::from_twice(5), a: 17.7, q: 20.0 },
];

/// Default upper limit for the `Ω_ps` search, MHz.
pub const OMEGA_PS_CAP: f64 = 20_000.0;

/// Overlap `|⟨−1, 1−I|e⟩|` of the best-matching eigenstate of the reduced
/// three-state model at dressing strength `omega_ps` (MHz).
pub fn reduced_overlap(i: HalfInt, c: HyperfineConstants, omega_ps: f64) -> Result<f64> {
    let s = SpinSpace::new(i, HalfInt::ONE)?;
    let mi_lo = -i;
    let mi_hi = mi_lo + HalfInt::ONE;
    let m1 = HalfInt::integer(-1);
    let z = HalfInt::ZERO;
    let mut h = DMatrix::<f64>::zeros(3, 3);
    h[(0, 0)] = hf_element(c, s, m1, mi_hi, m1, mi_hi);
    h[(1, 1)] = hf_element(c, s, z, mi_lo, z, mi_lo);
    let x = hf_element(c, s, m1, mi_hi, z, mi_lo);
    h[(0, 1)] = x;
    h[(1, 0)] = x;
    h[(1, 2)] = 0.5 * omega_ps;
    h[(2, 1)] = 0.5 * omega_ps;
    let eig = SymmetricEigen::new(h);
    Ok(eig.eigenvectors.row(0).iter().fold(0.0f64, |m, v| m.max(v.abs())))
}

/// Smallest `Ω_ps` (MHz) above which the reduced-model overlap stays at or
/// above `threshold`.
pub fn min_omega_ps(i: HalfInt, a: f64, q: f64, threshold: f64) -> Result<f64> {
    min_omega_ps_capped(i, a, q, threshold, OMEGA_PS_CAP)
}

pub fn min_omega_ps_capped(i: HalfInt, a: f64, q: f64, threshold: f64, cap: f64) -> Result<f64> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::InvalidParameter { name: "threshold", value: threshold, reason: "must be in (0, 1)" });
    }
    if !(cap > 0.0) || !cap.is_finite() {
        return Err(Error::InvalidParameter { name: "cap", value: cap, reason: "must be positive" });
    }
    let c = HyperfineConstants::new(a, q);
    let ok = |w: f64| reduced_overlap(i, c, w).map(|o| o >= threshold);
    const N: usize = 4000;
    let lo_grid = 1e-3;
    let point = |k: usize| lo_grid * (cap / lo_grid).powf(k as f64 / (N - 1) as f64);
    let mut last_bad = None;
    let mut best = 0.0f64;
    for k in 0..N {
        let w = point(k);
        let o = reduced_overlap(i, c, w)?;
        best = best.max(o);
        if o < threshold {
            last_bad = Some(k);
        }
    }
    let k = match last_bad {
        None => return Ok(0.0),
        Some(k) if k == N - 1 => return Err(Error::Saturated { threshold, cap, best }),
        Some(k) => k,
    };
    let (mut lo, mut hi) = (point(k), point(k + 1));
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if ok(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-9 * hi {
            break;
        }
    }
    Ok(hi)
}
