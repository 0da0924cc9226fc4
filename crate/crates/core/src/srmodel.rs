//! The 13-state ⁸⁷Sr cooling model.
//!
//! Qubit labels: `↑` is `mI = -7/2`, `↓` is `mI = -9/2` (the two lowest
//! nuclear Zeeman substates of I = 9/2).
//!
//! Decay channels are taken literally from the model definition: each `¹P₁`
//! source decays with rate `Γp/3` through its single listed channel, and the
//! `5s6s ¹S₀` state drains through three channels of rate `Γs` each (total
//! `3Γs`).

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::angmom::{xi_factors, HalfInt, XiFactors};
use crate::constants::SR87_NUCLEAR_MOMENT;
use crate::hyperfine::{hf_element, zeeman_diag, HyperfineConstants, SpinSpace, ZeemanParams};
use crate::lindblad::JumpOperator;
use crate::{mhz_to_angular, CVector, Error, Result};

/// The 13 model states in matrix-index order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum BasisState {
    /// `|5s15d ¹D₂, F=13/2, mF=-13/2⟩`
    D13Stretched,
    /// `|5s15d ¹D₂, F=13/2, mF=-11/2⟩`
    D13,
    /// `|5s15d ¹D₂, F=11/2, mF=-11/2⟩`
    D11,
    /// `|5s6s ¹S₀, 0, ↓⟩`
    S6Down,
    /// `|5s5p ¹P₁, mJ=0, ↓⟩`
    P0Down,
    /// `|5s5p ¹P₁, mJ=-1, ↑⟩`
    PMinusUp,
    /// `|5s5p ¹P₁, mJ=-1, ↓⟩`
    PMinusDown,
    /// `|5s5p ³P₀, ↑⟩`
    ClockUp,
    /// `|5s5p ³P₀, ↓⟩`
    ClockDown,
    /// `|5s² ¹S₀, ↑⟩`
    GroundUp,
    /// `|5s² ¹S₀, ↓⟩`
    GroundDown,
    /// Absorbing reservoir `|𝒜⟩` fed by `¹D₂` decay.
    Reservoir,
    /// `|5s5p ¹P₁, mJ=+1, ↓⟩`
    PPlusDown,
}

pub const DIM: usize = 13;

impl BasisState {
    pub const ALL: [BasisState; DIM] = [
        BasisState::D13Stretched,
        BasisState::D13,
        BasisState::D11,
        BasisState::S6Down,
        BasisState::P0Down,
        BasisState::PMinusUp,
        BasisState::PMinusDown,
        BasisState::ClockUp,
        BasisState::ClockDown,
        BasisState::GroundUp,
        BasisState::GroundDown,
        BasisState::Reservoir,
        BasisState::PPlusDown,
    ];

    pub const D2_STATES: [BasisState; 3] =
        [BasisState::D13Stretched, BasisState::D13, BasisState::D11];

    pub const P1_STATES: [BasisState; 4] = [
        BasisState::P0Down,
        BasisState::PMinusUp,
        BasisState::PMinusDown,
        BasisState::PPlusDown,
    ];

    #[inline]
    pub const fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(k: usize) -> Option<Self> {
        Self::ALL.get(k).copied()
    }

    /// Short ASCII label.
    pub const fn label(self) -> &'static str {
        match self {
            BasisState::D13Stretched => "1D2(F=13/2,mF=-13/2)",
            BasisState::D13 => "1D2(F=13/2,mF=-11/2)",
            BasisState::D11 => "1D2(F=11/2,mF=-11/2)",
            BasisState::S6Down => "6s1S0(0,dn)",
            BasisState::P0Down => "1P1(0,dn)",
            BasisState::PMinusUp => "1P1(-1,up)",
            BasisState::PMinusDown => "1P1(-1,dn)",
            BasisState::ClockUp => "3P0(0,up)",
            BasisState::ClockDown => "3P0(0,dn)",
            BasisState::GroundUp => "1S0(0,up)",
            BasisState::GroundDown => "1S0(0,dn)",
            BasisState::Reservoir => "reservoir",
            BasisState::PPlusDown => "1P1(1,dn)",
        }
    }

    /// `(mJ, mI)` for the `¹P₁` states.
    pub fn p1_quantum_numbers(self) -> Option<(HalfInt, HalfInt)> {
        let up = HalfInt::from_twice(-7);
        let down = HalfInt::from_twice(-9);
        match self {
            BasisState::P0Down => Some((HalfInt::ZERO, down)),
            BasisState::PMinusUp => Some((HalfInt::integer(-1), up)),
            BasisState::PMinusDown => Some((HalfInt::integer(-1), down)),
            BasisState::PPlusDown => Some((HalfInt::ONE, down)),
            _ => None,
        }
    }
}

/// Parameters of the cooling model. Frequencies are cyclic, in MHz.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModelParams {
    /// Two-photon Rabi frequency `³P₀ → ¹P₁`.
    pub omega_eff: f64,
    /// Rabi frequency of the `¹P₁ → 5s6s ¹S₀` laser.
    pub omega_ps: f64,
    /// Rabi frequency of the stretched `¹P₁ → 5s15d ¹D₂` coupling.
    pub omega_pd: f64,
    /// Two-photon detuning of the clock → `¹P₁` excitation.
    pub delta: f64,
    /// Detuning of the `¹D₂` dressing laser from `F = 13/2`.
    pub delta_pd: f64,
    /// Extra detuning of the `¹P₁ → 6s` laser.
    pub delta_ps_extra: f64,
    /// Linewidths, MHz.
    pub gamma_p: f64,
    pub gamma_s: f64,
    pub gamma_d: f64,
    /// Magnetic field, gauss.
    pub b_gauss: f64,
    pub g_j: f64,
    /// Nuclear moment in μ_N.
    pub mu_nuclear: f64,
    /// Hyperfine constants of `¹P₁`.
    pub hf_1p1: HyperfineConstants,
    /// `F = 11/2` minus `F = 13/2` energy in `¹D₂`.
    pub e_hf: f64,
    pub xi: XiFactors,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            omega_eff: 1.0,
            omega_ps: 300.0,
            omega_pd: 144.27,
            delta: 3.8826,
            delta_pd: -1700.0,
            delta_ps_extra: 0.0,
            gamma_p: 32.0,
            gamma_s: 3.0,
            gamma_d: 0.47,
            b_gauss: 1.0,
            g_j: 1.0,
            mu_nuclear: SR87_NUCLEAR_MOMENT,
            hf_1p1: HyperfineConstants::SR87_1P1,
            e_hf: 1300.0,
            xi: xi_factors(),
        }
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        let finite: [(&'static str, f64); 19] = [
            ("omega_eff", self.omega_eff),
            ("omega_ps", self.omega_ps),
            ("omega_pd", self.omega_pd),
            ("delta", self.delta),
            ("delta_pd", self.delta_pd),
            ("delta_ps_extra", self.delta_ps_extra),
            ("gamma_p", self.gamma_p),
            ("gamma_s", self.gamma_s),
            ("gamma_d", self.gamma_d),
            ("b_field", self.b_gauss),
            ("g_j", self.g_j),
            ("mu_nuclear", self.mu_nuclear),
            ("a_1p1", self.hf_1p1.a),
            ("q_1p1", self.hf_1p1.q),
            ("e_hf", self.e_hf),
            ("xi0", self.xi.xi0),
            ("xi1", self.xi.xi1),
            ("xi2", self.xi.xi2),
            ("xi3", self.xi.xi3),
        ];
        for (name, value) in finite {
            if !value.is_finite() {
                return Err(Error::InvalidParameter { name, value, reason: "must be finite" });
            }
        }
        for (name, value) in [
            ("gamma_p", self.gamma_p),
            ("gamma_s", self.gamma_s),
            ("gamma_d", self.gamma_d),
        ] {
            if value < 0.0 {
                return Err(Error::InvalidParameter { name, value, reason: "must be non-negative" });
            }
        }
        Ok(())
    }

    fn zeeman(&self) -> ZeemanParams {
        ZeemanParams {
            b_gauss: self.b_gauss,
            g_j: self.g_j,
            mu_nuclear: self.mu_nuclear,
        }
    }

    /// Hyperfine + Zeeman energy of a `¹P₁` basis state, MHz.
    pub fn p1_energy(&self, state: BasisState) -> Option<f64> {
        let (mj, mi) = state.p1_quantum_numbers()?;
        let s = SpinSpace::SR87_1P1;
        Some(hf_element(self.hf_1p1, s, mj, mi, mj, mi) + zeeman_diag(self.zeeman(), s.i(), mj, mi))
    }

    /// Hyperfine coupling `⟨¹P₁ 0,↓| ĥ |¹P₁ -1,↑⟩`, MHz.
    pub fn p1_spin_flip_coupling(&self) -> f64 {
        let s = SpinSpace::SR87_1P1;
        hf_element(
            self.hf_1p1,
            s,
            HalfInt::ZERO,
            HalfInt::from_twice(-9),
            HalfInt::integer(-1),
            HalfInt::from_twice(-7),
        )
    }
}

/// Hamiltonian in the rotating frame, rad/μs. Real symmetric.
pub fn hamiltonian(p: &ModelParams) -> DMatrix<f64> {
    use BasisState::*;
    let mut h = DMatrix::<f64>::zeros(DIM, DIM);
    let mut set = |a: BasisState, b: BasisState, v: f64| {
        h[(a.index(), b.index())] += v;
        if a != b {
            h[(b.index(), a.index())] += v;
        }
    };

    // atom–laser part, MHz
    set(D13Stretched, D13Stretched, p.delta_pd + p.delta);
    set(D13, D13, p.delta_pd + p.delta);
    set(D11, D11, p.delta_pd + p.e_hf + p.delta);
    set(S6Down, S6Down, p.delta + p.delta_ps_extra);
    set(P0Down, P0Down, p.delta);
    set(PMinusUp, PMinusUp, p.delta);
    set(PMinusDown, PMinusDown, p.delta);

    let half_pd = 0.5 * p.omega_pd;
    set(D13Stretched, PMinusDown, half_pd);
    set(D13, P0Down, p.xi.xi0 * half_pd);
    set(D13, PMinusUp, p.xi.xi1 * half_pd);
    set(D11, P0Down, p.xi.xi2 * half_pd);
    set(D11, PMinusUp, p.xi.xi3 * half_pd);
    set(S6Down, P0Down, 0.5 * p.omega_ps);
    set(PMinusUp, ClockUp, 0.5 * p.omega_eff);
    set(PMinusDown, ClockDown, 0.5 * p.omega_eff);

    // ¹P₁ hyperfine + Zeeman
    for s in BasisState::P1_STATES {
        set(s, s, p.p1_energy(s).unwrap_or(0.0));
    }
    set(P0Down, PMinusUp, p.p1_spin_flip_coupling());

    h * mhz_to_angular(1.0)
}

/// One `amplitude · |to⟩⟨from|` piece of a collapse operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayTerm {
    /// √(rad/μs), signed.
    pub amplitude: f64,
    pub from: BasisState,
    pub to: BasisState,
}

/// A collapse operator: a sum of [`DecayTerm`]s.
#[derive(Clone, Debug, PartialEq)]
pub struct CollapseOp {
    pub label: &'static str,
    pub terms: Vec<DecayTerm>,
}

impl CollapseOp {
    fn single(label: &'static str, amplitude: f64, from: BasisState, to: BasisState) -> Self {
        CollapseOp { label, terms: vec![DecayTerm { amplitude, from, to }] }
    }

    pub fn to_jump(&self) -> JumpOperator {
        JumpOperator::new(
            self.terms
                .iter()
                .map(|t| (Complex64::new(t.amplitude, 0.0), t.from.index(), t.to.index()))
                .collect(),
        )
    }
}

/// The nine decay channels.
pub fn collapse_ops(p: &ModelParams) -> Vec<CollapseOp> {
    use BasisState::*;
    let amp = |gamma: f64| mhz_to_angular(gamma.max(0.0)).sqrt();
    let p3 = amp(p.gamma_p / 3.0);
    let s = amp(p.gamma_s);
    let d = amp(p.gamma_d);
    vec![
        CollapseOp {
            label: "c0",
            terms: vec![
                DecayTerm { amplitude: p3, from: PMinusUp, to: GroundUp },
                DecayTerm { amplitude: p3, from: PMinusDown, to: GroundDown },
            ],
        },
        CollapseOp::single("c1", -p3, P0Down, GroundDown),
        CollapseOp::single("c2", p3, PPlusDown, GroundDown),
        CollapseOp::single("c3", s, S6Down, P0Down),
        CollapseOp::single("c4", s, S6Down, PPlusDown),
        CollapseOp::single("c5", s, S6Down, PMinusDown),
        CollapseOp::single("c6", d, D13Stretched, Reservoir),
        CollapseOp::single("c7", d, D13, Reservoir),
        CollapseOp::single("c8", d, D11, Reservoir),
    ]
}

pub fn jump_operators(p: &ModelParams) -> Vec<JumpOperator> {
    collapse_ops(p).iter().map(CollapseOp::to_jump).collect()
}

/// Which laser carries the polarization impurity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ImpurityChannel {
    /// Two-photon clock → `¹P₁` excitation: `Ω_eff → (1 - χ) Ω_eff`.
    Raman,
    /// `¹D₂` dressing laser: every dressing coupling scales by `1 - √χ`.
    Dressing,
}

/// Applies a polarization intensity impurity `chi ∈ [0, 1)`.
///
/// For the dressing channel the reduction is applied to `omega_pd`, which
/// scales the stretched coupling together with the four ξ-weighted ones.
pub fn with_polarization_impurity(
    p: &ModelParams,
    chi: f64,
    channel: ImpurityChannel,
) -> Result<ModelParams> {
    if !(0.0..1.0).contains(&chi) {
        return Err(Error::InvalidParameter { name: "chi", value: chi, reason: "must be in [0, 1)" });
    }
    let mut q = *p;
    match channel {
        ImpurityChannel::Raman => q.omega_eff *= 1.0 - chi,
        ImpurityChannel::Dressing => q.omega_pd *= 1.0 - chi.sqrt(),
    }
    Ok(q)
}

/// Rough upper estimate `sin²(2.4 π χ)` of the fidelity lost to wrongly
/// polarized Raman light.
pub fn impurity_loss_estimate(chi: f64) -> f64 {
    let s = (2.4 * PI * chi).sin();
    s * s
}

/// Initial clock-manifold state, target ground state and its orthogonal
/// complement inside the ground qubit plane.
#[derive(Clone, Debug, PartialEq)]
pub struct QubitStates {
    pub psi0: CVector,
    pub psi_f: CVector,
    pub psi_perp: CVector,
}

pub fn qubit_vectors(alpha: Complex64, beta: Complex64) -> Result<QubitStates> {
    let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::ZeroQubitVector);
    }
    let (a, b) = (alpha / norm, beta / norm);
    let mut psi0 = CVector::zeros(DIM);
    let mut psi_f = CVector::zeros(DIM);
    let mut psi_perp = CVector::zeros(DIM);
    psi0[BasisState::ClockUp.index()] = a;
    psi0[BasisState::ClockDown.index()] = b;
    psi_f[BasisState::GroundUp.index()] = a;
    psi_f[BasisState::GroundDown.index()] = b;
    psi_perp[BasisState::GroundUp.index()] = b.conj();
    psi_perp[BasisState::GroundDown.index()] = -a.conj();
    Ok(QubitStates { psi0, psi_f, psi_perp })
}
