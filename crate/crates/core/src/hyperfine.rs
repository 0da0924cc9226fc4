//! Hyperfine and Zeeman energies in the uncoupled `|mJ, mI⟩` basis.
//!
//! All energies are cyclic frequencies in MHz.

use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::angmom::{ladder_a, ladder_b, HalfInt};
use crate::constants::{BOHR_MAGNETON_MHZ_PER_G, NUCLEAR_MAGNETON_MHZ_PER_G};
use crate::{Error, Result};

/// Magnetic-dipole (`A`) and electric-quadrupole (`Q`) hyperfine constants, MHz.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HyperfineConstants {
    pub a: f64,
    pub q: f64,
}

impl HyperfineConstants {
    pub const fn new(a: f64, q: f64) -> Self {
        HyperfineConstants { a, q }
    }

    /// ⁸⁷Sr `5s5p ¹P₁`.
    pub const SR87_1P1: HyperfineConstants = HyperfineConstants::new(-3.4, 39.0);
    /// ⁸⁷Sr `5s15d ¹D₂`.
    pub const SR87_15D_1D2: HyperfineConstants = HyperfineConstants::new(-194.0, -75.0);

    pub fn scaled(self, s: f64) -> Self {
        HyperfineConstants::new(s * self.a, s * self.q)
    }
}

/// Nuclear spin `I` and electronic angular momentum `J` of one level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpinSpace {
    i: HalfInt,
    j: HalfInt,
}

impl SpinSpace {
    pub fn new(i: HalfInt, j: HalfInt) -> Result<Self> {
        for x in [i, j] {
            if x.twice() < 0 {
                return Err(Error::NegativeAngularMomentum(x));
            }
        }
        Ok(SpinSpace { i, j })
    }

    /// `I = 9/2`, `J = 1`: the ⁸⁷Sr `¹P₁` level.
    pub const SR87_1P1: SpinSpace = SpinSpace {
        i: HalfInt::from_twice(9),
        j: HalfInt::ONE,
    };

    /// `I = 9/2`, `J = 2`: the ⁸⁷Sr `¹D₂` level.
    pub const SR87_1D2: SpinSpace = SpinSpace {
        i: HalfInt::from_twice(9),
        j: HalfInt::integer(2),
    };

    pub fn i(&self) -> HalfInt {
        self.i
    }

    pub fn j(&self) -> HalfInt {
        self.j
    }

    pub fn dim(&self) -> usize {
        self.i.multiplicity() * self.j.multiplicity()
    }

    /// Basis states `(mJ, mI)` in lexicographic order: `mJ` ascending, then
    /// `mI` ascending.
    pub fn states(&self) -> Vec<(HalfInt, HalfInt)> {
        let i = self.i;
        self.j
            .projections()
            .flat_map(|mj| i.projections().map(move |mi| (mj, mi)))
            .collect()
    }

    /// Index of `(mJ, mI)` in [`SpinSpace::states`].
    pub fn index_of(&self, mj: HalfInt, mi: HalfInt) -> Option<usize> {
        if !self.j.admits_projection(mj) || !self.i.admits_projection(mi) {
            return None;
        }
        let row = ((mj.twice() + self.j.twice()) / 2) as usize;
        let col = ((mi.twice() + self.i.twice()) / 2) as usize;
        Some(row * self.i.multiplicity() + col)
    }

    /// `2IJ(2I-1)(2J-1)`, the quadrupole normalization. Zero when `I < 1` or
    /// `J < 1`, in which case the quadrupole term is absent.
    fn quadrupole_denominator(&self) -> f64 {
        let (ti, tj) = (self.i.twice(), self.j.twice());
        if ti < 2 || tj < 2 {
            return 0.0;
        }
        // 2IJ(2I-1)(2J-1) = ti tj (ti-1)(tj-1) / 2
        f64::from(ti) * f64::from(tj) * f64::from(ti - 1) * f64::from(tj - 1) / 2.0
    }
}

/// Magnetic-field parameters of the Zeeman term.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ZeemanParams {
    /// Field strength, gauss.
    pub b_gauss: f64,
    /// Electronic g-factor.
    pub g_j: f64,
    /// Nuclear magnetic moment in units of μ_N (signed).
    pub mu_nuclear: f64,
}

#[inline]
fn step(x: i32) -> f64 {
    if x > 0 {
        1.0
    } else {
        0.0
    }
}

/// `⟨mJ′, mI′| ĥ |mJ, mI⟩` for `ĥ = A I·J + Q [3(I·J)² + 1.5 I·J - I(I+1)J(J+1)] / [2IJ(2I-1)(2J-1)]`.
///
/// Nonzero only when `mJ′ + mI′ = mJ + mI` and `|ΔmJ| ≤ 2`.
pub fn hf_element(
    c: HyperfineConstants,
    s: SpinSpace,
    mj_p: HalfInt,
    mi_p: HalfInt,
    mj: HalfInt,
    mi: HalfInt,
) -> f64 {
    let (i, j) = (s.i, s.j);
    if !(j.admits_projection(mj)
        && j.admits_projection(mj_p)
        && i.admits_projection(mi)
        && i.admits_projection(mi_p))
    {
        return 0.0;
    }
    if mj_p + mi_p != mj + mi {
        return 0.0;
    }

    let den = s.quadrupole_denominator();
    let q = if den == 0.0 { 0.0 } else { c.q / den };
    let (fi, fj) = (i.to_f64(), j.to_f64());
    let (fmi, fmj) = (mi.to_f64(), mj.to_f64());
    let d_mj = mj_p.twice() - mj.twice();

    match d_mj {
        0 => {
            let (ti, tj, tmi, tmj) = (i.twice(), j.twice(), mi.twice(), mj.twice());
            let raise_j = (fi + fmi) * (fi - fmi + 1.0) * (fj - fmj) * (fj + fmj + 1.0);
            let lower_j = (fi - fmi) * (fi + fmi + 1.0) * (fj + fmj) * (fj - fmj + 1.0);
            c.a * fmi * fmj
                + q * (3.0 * fmi * fmi * fmj * fmj + 1.5 * fmi * fmj - fi * fj * (fi + 1.0) * (fj + 1.0))
                + q * 0.75 * raise_j * step(tj - tmj) * step(tmi + ti)
                + q * 0.75 * lower_j * step(tj + tmj) * step(ti - tmi)
        }
        -2 => {
            // mJ′ = mJ - 1, mI′ = mI + 1
            let a = ladder_a(i, j, mj, mi);
            0.5 * c.a * a + q * (1.5 * (fmi * fmj + (fmi + 1.0) * (fmj - 1.0)) * a + 0.75 * a)
        }
        2 => {
            let b = ladder_b(i, j, mj, mi);
            0.5 * c.a * b + q * (1.5 * (fmi * fmj + (fmi - 1.0) * (fmj + 1.0)) * b + 0.75 * b)
        }
        -4 => {
            let a1 = ladder_a(i, j, mj, mi);
            let a2 = ladder_a(i, j, mj - HalfInt::ONE, mi + HalfInt::ONE);
            q * 0.75 * a1 * a2
        }
        4 => {
            let b1 = ladder_b(i, j, mj, mi);
            let b2 = ladder_b(i, j, mj + HalfInt::ONE, mi - HalfInt::ONE);
            q * 0.75 * b1 * b2
        }
        _ => 0.0,
    }
}

/// Hyperfine matrix over [`SpinSpace::states`]. Block diagonal in `mJ + mI`.
pub fn hf_matrix(c: HyperfineConstants, s: SpinSpace) -> DMatrix<f64> {
    let states = s.states();
    let n = states.len();
    DMatrix::from_fn(n, n, |r, k| {
        let (mj_p, mi_p) = states[r];
        let (mj, mi) = states[k];
        hf_element(c, s, mj_p, mi_p, mj, mi)
    })
}

/// Energy of hyperfine level `F`:
/// `A K/2 + Q [1.5 K(K+1) - 2I(I+1)J(J+1)] / [2I(2I-1) 2J(2J-1)]` with
/// `K = F(F+1) - I(I+1) - J(J+1)`.
pub fn f_level_energy(c: HyperfineConstants, i: HalfInt, j: HalfInt, f: HalfInt) -> Result<f64> {
    let s = SpinSpace::new(i, j)?;
    let (ti, tj, tf) = (i.twice(), j.twice(), f.twice());
    if tf < (ti - tj).abs() || tf > ti + tj || (ti + tj - tf) % 2 != 0 {
        return Err(Error::FOutOfRange { f, i, j });
    }
    let (fi, fj, ff) = (i.to_f64(), j.to_f64(), f.to_f64());
    let ii = fi * (fi + 1.0);
    let jj = fj * (fj + 1.0);
    let k = ff * (ff + 1.0) - ii - jj;
    let den = s.quadrupole_denominator();
    let quad = if den == 0.0 {
        0.0
    } else {
        // 2I(2I-1)2J(2J-1) = 2 · 2IJ(2I-1)(2J-1)
        c.q * (1.5 * k * (k + 1.0) - 2.0 * ii * jj) / (2.0 * den)
    };
    Ok(0.5 * c.a * k + quad)
}

/// `E(F2) - E(F1)`.
pub fn f_splitting(
    c: HyperfineConstants,
    i: HalfInt,
    j: HalfInt,
    f1: HalfInt,
    f2: HalfInt,
) -> Result<f64> {
    Ok(f_level_energy(c, i, j, f2)? - f_level_energy(c, i, j, f1)?)
}

/// Zeeman energy `gJ μB B mJ - (μ/I) μN B mI` in MHz.
///
/// The nuclear moment is spread over the nuclear spin: `μ/I` acts as the
/// nuclear g-factor in units of μ_N. The nuclear term is dropped when `I = 0`.
pub fn zeeman_diag(z: ZeemanParams, i: HalfInt, mj: HalfInt, mi: HalfInt) -> f64 {
    let electronic = z.g_j * BOHR_MAGNETON_MHZ_PER_G * z.b_gauss * mj.to_f64();
    let nuclear = if i.twice() > 0 {
        (z.mu_nuclear / i.to_f64()) * NUCLEAR_MAGNETON_MHZ_PER_G * z.b_gauss * mi.to_f64()
    } else {
        0.0
    };
    electronic - nuclear
}
