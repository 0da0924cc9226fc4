//! Exact angular-momentum algebra.
//!
//! Quantum numbers are stored as twice their value so that half-integers are
//! represented exactly; floating point only appears in returned coefficients.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Neg, Sub};

#[cfg(not(feature = "std"))]
use num_traits::Float;

/// An integer or half-integer angular-momentum quantum number.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HalfInt {
    twice: i32,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };
    pub const HALF: HalfInt = HalfInt { twice: 1 };
    pub const ONE: HalfInt = HalfInt { twice: 2 };

    /// The quantum number `twice / 2`.
    #[inline]
    pub const fn from_twice(twice: i32) -> Self {
        HalfInt { twice }
    }

    #[inline]
    pub const fn integer(n: i32) -> Self {
        HalfInt { twice: 2 * n }
    }

    #[inline]
    pub const fn twice(self) -> i32 {
        self.twice
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        f64::from(self.twice) / 2.0
    }

    #[inline]
    pub const fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    /// True if `m` is an allowed projection of `self`: `|m| <= j` and `j - m`
    /// is an integer.
    #[inline]
    pub const fn admits_projection(self, m: HalfInt) -> bool {
        self.twice >= 0
            && m.twice <= self.twice
            && m.twice >= -self.twice
            && (self.twice - m.twice) % 2 == 0
    }

    /// All projections `-j, -j + 1, ..., j` in ascending order.
    pub fn projections(self) -> impl Iterator<Item = HalfInt> + Clone {
        let j = self.twice.max(-1);
        (-j..=j).step_by(2).map(HalfInt::from_twice)
    }

    /// `2j + 1`, the number of projections.
    #[inline]
    pub fn multiplicity(self) -> usize {
        (self.twice + 1).max(0) as usize
    }

    #[inline]
    pub fn abs(self) -> Self {
        HalfInt { twice: self.twice.abs() }
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    #[inline]
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice + rhs.twice }
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    #[inline]
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice - rhs.twice }
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    #[inline]
    fn neg(self) -> HalfInt {
        HalfInt { twice: -self.twice }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl fmt::Debug for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// ---------------------------------------------------------------------------
// Clebsch–Gordan coefficients

/// Primes up to and including `n`.
fn primes_up_to(n: usize) -> Vec<u32> {
    if n < 2 {
        return Vec::new();
    }
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut p = 2;
    while p * p <= n {
        if sieve[p] {
            let mut k = p * p;
            while k <= n {
                sieve[k] = false;
                k += p;
            }
        }
        p += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter(|(_, &is_prime)| is_prime)
        .map(|(k, _)| k as u32)
        .collect()
}

/// Prime-exponent representation of a product of factorials over a fixed
/// prime table.
#[derive(Clone)]
struct PrimeExponents<'a> {
    primes: &'a [u32],
    exps: Vec<i32>,
}

impl<'a> PrimeExponents<'a> {
    fn one(primes: &'a [u32]) -> Self {
        PrimeExponents { primes, exps: vec![0; primes.len()] }
    }

    /// Multiplies by `n!` (`sign = 1`) or divides by it (`sign = -1`).
    fn factorial(&mut self, n: u32, sign: i32) {
        for (e, &p) in self.exps.iter_mut().zip(self.primes) {
            if p > n {
                break;
            }
            // Legendre: exponent of p in n!
            let mut q = n / p;
            let mut count = 0;
            while q > 0 {
                count += q as i32;
                q /= p;
            }
            *e += sign * count;
        }
    }

    fn integer(&mut self, mut n: u32) {
        for (e, &p) in self.exps.iter_mut().zip(self.primes) {
            while n.is_multiple_of(p) {
                n /= p;
                *e += 1;
            }
            if n == 1 {
                break;
            }
        }
        debug_assert_eq!(n, 1, "prime table too short");
    }

    fn as_i128(&self) -> Option<i128> {
        let mut acc: i128 = 1;
        for (&e, &p) in self.exps.iter().zip(self.primes) {
            debug_assert!(e >= 0);
            for _ in 0..e {
                acc = acc.checked_mul(i128::from(p))?;
            }
        }
        Some(acc)
    }

    fn as_f64(&self) -> f64 {
        self.exps
            .iter()
            .zip(self.primes)
            .map(|(&e, &p)| f64::from(p).powi(e))
            .product()
    }
}

/// Clebsch–Gordan coefficient `⟨j1 m1; j2 m2 | J M⟩` in the Condon–Shortley
/// phase convention.
///
/// Returns 0 for any coupling that is not allowed (projection out of range,
/// `M ≠ m1 + m2`, triangle rule violated). The alternating sum is carried out
/// over a common denominator with exact integer numerators; only the final
/// square root of the prefactor is taken in floating point.
///
/// Panics if any of `j1`, `j2`, `J` is negative.
pub fn clebsch_gordan(
    j1: HalfInt,
    m1: HalfInt,
    j2: HalfInt,
    m2: HalfInt,
    j: HalfInt,
    m: HalfInt,
) -> f64 {
    assert!(
        j1.twice >= 0 && j2.twice >= 0 && j.twice >= 0,
        "clebsch_gordan: negative angular momentum ({j1}, {j2}, {j})"
    );
    if !(j1.admits_projection(m1) && j2.admits_projection(m2) && j.admits_projection(m)) {
        return 0.0;
    }
    if m1 + m2 != m {
        return 0.0;
    }
    let (tj1, tj2, tj) = (j1.twice, j2.twice, j.twice);
    if tj > tj1 + tj2 || tj < (tj1 - tj2).abs() || (tj1 + tj2 + tj) % 2 != 0 {
        return 0.0;
    }

    // All factorial arguments below are non-negative integers.
    let half = |t: i32| -> i32 { t / 2 };
    let a = half(tj1 + tj2 - tj);
    let b = half(tj1 - tj2 + tj);
    let c = half(-tj1 + tj2 + tj);
    let d = half(tj1 + tj2 + tj) + 1;
    let (tm1, tm2, tm) = (m1.twice, m2.twice, m.twice);
    let e1 = half(tj1 + tm1);
    let f1 = half(tj1 - tm1);
    let e2 = half(tj2 + tm2);
    let f2 = half(tj2 - tm2);
    let e3 = half(tj + tm);
    let f3 = half(tj - tm);
    let s1 = half(tj - tj2 + tm1);
    let s2 = half(tj - tj1 - tm2);

    let k_min = 0.max(-s1).max(-s2);
    let k_max = a.min(f1).min(e2);
    if k_min > k_max {
        return 0.0;
    }

    let primes = primes_up_to(d as usize);

    let mut prefactor = PrimeExponents::one(&primes);
    prefactor.integer((tj + 1) as u32);
    for n in [a, b, c, e1, f1, e2, f2, e3, f3] {
        prefactor.factorial(n as u32, 1);
    }
    prefactor.factorial(d as u32, -1);

    // Denominator of each term and their common multiple.
    let denominators: Vec<PrimeExponents<'_>> = (k_min..=k_max)
        .map(|k| {
            let mut den = PrimeExponents::one(&primes);
            for n in [k, a - k, f1 - k, e2 - k, s1 + k, s2 + k] {
                den.factorial(n as u32, 1);
            }
            den
        })
        .collect();
    let mut common = PrimeExponents::one(&primes);
    for den in &denominators {
        for (c, &e) in common.exps.iter_mut().zip(&den.exps) {
            *c = (*c).max(e);
        }
    }

    let cofactor = |den: &PrimeExponents<'_>| {
        let mut q = common.clone();
        for (e, &de) in q.exps.iter_mut().zip(&den.exps) {
            *e -= de;
        }
        q
    };

    let exact_sum: Option<i128> = denominators.iter().zip(k_min..).try_fold(0i128, |acc, (den, k)| {
        let term = cofactor(den).as_i128()?;
        if k % 2 == 0 {
            acc.checked_add(term)
        } else {
            acc.checked_sub(term)
        }
    });
    let numerator = match exact_sum {
        Some(0) => return 0.0,
        Some(n) => n as f64,
        None => denominators
            .iter()
            .zip(k_min..)
            .map(|(den, k)| {
                let t = cofactor(den).as_f64();
                if k % 2 == 0 {
                    t
                } else {
                    -t
                }
            })
            .sum(),
    };

    // |result| = |numerator| * sqrt(prefactor) / common
    let mut scale = prefactor;
    for (e, &ce) in scale.exps.iter_mut().zip(&common.exps) {
        *e -= 2 * ce;
    }
    let (mut even, mut odd) = (1.0f64, 1.0f64);
    for (&e, &p) in scale.exps.iter().zip(&primes) {
        let p = f64::from(p);
        even *= p.powi(e.div_euclid(2));
        if e.rem_euclid(2) == 1 {
            odd *= p;
        }
    }
    numerator * even * odd.sqrt()
}

// ---------------------------------------------------------------------------
// Hyperfine ladder factors

/// Matrix element of `I₊J₋`: `⟨mJ-1, mI+1| I₊J₋ |mJ, mI⟩`
/// `= √((I-mI)(I+mI+1)) · √((J+mJ)(J-mJ+1))`.
pub fn ladder_a(i: HalfInt, j: HalfInt, mj: HalfInt, mi: HalfInt) -> f64 {
    let nuclear = i64::from(i.twice - mi.twice) * i64::from(i.twice + mi.twice + 2);
    let electronic = i64::from(j.twice + mj.twice) * i64::from(j.twice - mj.twice + 2);
    if nuclear <= 0 || electronic <= 0 {
        return 0.0;
    }
    ((nuclear * electronic) as f64).sqrt() / 4.0
}

/// Matrix element of `I₋J₊`: `⟨mJ+1, mI-1| I₋J₊ |mJ, mI⟩`
/// `= √((I+mI)(I-mI+1)) · √((J-mJ)(J+mJ+1))`.
pub fn ladder_b(i: HalfInt, j: HalfInt, mj: HalfInt, mi: HalfInt) -> f64 {
    let nuclear = i64::from(i.twice + mi.twice) * i64::from(i.twice - mi.twice + 2);
    let electronic = i64::from(j.twice - mj.twice) * i64::from(j.twice + mj.twice + 2);
    if nuclear <= 0 || electronic <= 0 {
        return 0.0;
    }
    ((nuclear * electronic) as f64).sqrt() / 4.0
}

// ---------------------------------------------------------------------------
// Dressing-laser angular factors

/// Relative σ⁻ coupling strengths between `¹P₁` (J = 1) hyperfine-uncoupled
/// states and the `F = 13/2, 11/2` hyperfine levels of a J′ = 2 state for
/// I = 9/2.
///
/// The stretched coupling `|F=13/2, mF=-13/2⟩ ↔ |mJ=-1, mI=-9/2⟩` is the
/// unit of strength.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct XiFactors {
    /// `|13/2, -11/2⟩ ↔ |0, -9/2⟩`
    pub xi0: f64,
    /// `|13/2, -11/2⟩ ↔ |-1, -7/2⟩`
    pub xi1: f64,
    /// `|11/2, -11/2⟩ ↔ |0, -9/2⟩`
    pub xi2: f64,
    /// `|11/2, -11/2⟩ ↔ |-1, -7/2⟩`
    pub xi3: f64,
}

impl XiFactors {
    pub fn scaled(self, s: f64) -> Self {
        XiFactors {
            xi0: s * self.xi0,
            xi1: s * self.xi1,
            xi2: s * self.xi2,
            xi3: s * self.xi3,
        }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.xi0, self.xi1, self.xi2, self.xi3]
    }
}

impl Default for XiFactors {
    fn default() -> Self {
        xi_factors()
    }
}

/// Unnormalized amplitude for driving `|J mJ; I mI⟩ → |(J′ I) F mF⟩` with a
/// photon of helicity `q`: `Σ_{mJ′} ⟨J mJ; 1 q|J′ mJ′⟩⟨J′ mJ′; I mI|F mF⟩`.
pub fn dipole_amplitude(
    i: HalfInt,
    j: HalfInt,
    mj: HalfInt,
    mi: HalfInt,
    q: HalfInt,
    j_upper: HalfInt,
    f: HalfInt,
    mf: HalfInt,
) -> f64 {
    j_upper
        .projections()
        .map(|mjp| {
            clebsch_gordan(j, mj, HalfInt::ONE, q, j_upper, mjp)
                * clebsch_gordan(j_upper, mjp, i, mi, f, mf)
        })
        .sum()
}

/// The four σ⁻ dressing factors for ⁸⁷Sr `5s5p ¹P₁ → 5s15d ¹D₂`.
pub fn xi_factors() -> XiFactors {
    let i = HalfInt::from_twice(9);
    let j = HalfInt::ONE;
    let j_upper = HalfInt::integer(2);
    let q = HalfInt::integer(-1);
    let up = HalfInt::from_twice(-7);
    let down = HalfInt::from_twice(-9);
    let f13 = HalfInt::from_twice(13);
    let f11 = HalfInt::from_twice(11);
    let amp = |mj: i32, mi: HalfInt, f: HalfInt, mf: i32| {
        dipole_amplitude(i, j, HalfInt::integer(mj), mi, q, j_upper, f, HalfInt::from_twice(mf))
    };
    let unit = amp(-1, down, f13, -13);
    XiFactors {
        xi0: amp(0, down, f13, -11) / unit,
        xi1: amp(-1, up, f13, -11) / unit,
        xi2: amp(0, down, f11, -11) / unit,
        xi3: amp(-1, up, f11, -11) / unit,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(twice: i32) -> HalfInt {
        HalfInt::from_twice(twice)
    }

    #[test]
    fn halfint_arithmetic_is_exact() {
        assert_eq!(h(9) - h(2), h(7));
        assert_eq!(-h(9) + h(2), h(-7));
        assert!(h(3) < h(4));
        assert_eq!(h(-7).abs(), h(7));
        assert_eq!(alloc::format!("{}", h(-9)), "-9/2");
        assert_eq!(alloc::format!("{}", h(4)), "2");
        assert_eq!(h(9).projections().count(), 10);
        assert_eq!(h(9).projections().next(), Some(h(-9)));
    }

    #[test]
    fn projections_must_match_parity() {
        assert!(h(9).admits_projection(h(-9)));
        assert!(!h(9).admits_projection(h(-11)));
        assert!(!h(9).admits_projection(h(2)));
        assert!(h(2).admits_projection(h(0)));
    }

    #[test]
    fn stretched_and_forbidden_couplings() {
        let cg = clebsch_gordan(h(2), h(2), h(1), h(1), h(3), h(3));
        assert!((cg - 1.0).abs() < 1e-15);
        assert_eq!(clebsch_gordan(h(2), h(0), h(2), h(2), h(4), h(0)), 0.0);
        let cg = clebsch_gordan(h(2), h(-2), h(2), h(-2), h(4), h(-4));
        assert!((cg - 1.0).abs() < 1e-15);
        // triangle rule
        assert_eq!(clebsch_gordan(h(1), h(1), h(1), h(-1), h(4), h(0)), 0.0);
    }

    #[test]
    fn known_values() {
        // ⟨1/2 1/2; 1/2 -1/2 | 0 0⟩ = 1/√2
        let cg = clebsch_gordan(h(1), h(1), h(1), h(-1), h(0), h(0));
        assert!((cg - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        // ⟨1/2 -1/2; 1/2 1/2 | 0 0⟩ = -1/√2
        let cg = clebsch_gordan(h(1), h(-1), h(1), h(1), h(0), h(0));
        assert!((cg + core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        // ⟨1 0; 1 0 | 1 0⟩ = 0
        assert_eq!(clebsch_gordan(h(2), h(0), h(2), h(0), h(2), h(0)), 0.0);
        // ⟨1 1; 1 -1 | 2 0⟩ = 1/√6
        let cg = clebsch_gordan(h(2), h(2), h(2), h(-2), h(4), h(0));
        assert!((cg - (1.0f64 / 6.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    #[should_panic]
    fn negative_j_is_rejected() {
        clebsch_gordan(h(-2), h(0), h(2), h(0), h(2), h(0));
    }

    #[test]
    fn ladder_boundaries() {
        let i = h(9);
        let j = h(2);
        assert_eq!(ladder_a(i, j, h(-2), h(9)), 0.0);
        assert!((ladder_a(i, j, h(0), h(-9)) - 3.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!((ladder_a(h(1), h(1), h(1), h(-1)) - 1.0).abs() < 1e-15);
        assert_eq!(ladder_b(i, j, h(2), h(-9)), 0.0);
        assert!((ladder_b(i, j, h(-2), h(-7)) - 3.0 * 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(ladder_a(i, j, h(-2), h(3)), 0.0);
        assert_eq!(ladder_b(i, j, h(0), h(-9)), 0.0);
    }

    #[test]
    fn ladder_exchange_symmetry() {
        for ti in 0..=9 {
            for tj in 0..=4 {
                let (i, j) = (h(ti), h(tj));
                for mi in i.projections() {
                    for mj in j.projections() {
                        assert_eq!(ladder_b(i, j, mj, mi), ladder_a(j, i, mi, mj));
                    }
                }
            }
        }
    }

    #[test]
    fn xi_values() {
        let xi = xi_factors();
        assert!((xi.xi0 - (2.0f64 / 13.0).sqrt()).abs() < 1e-12);
        assert!((xi.xi1 - 3.0 / 13f64.sqrt()).abs() < 1e-12);
        assert!((xi.xi2 - 3.0 / 26f64.sqrt()).abs() < 1e-12);
        assert!((xi.xi3 + 2.0 / 13f64.sqrt()).abs() < 1e-12);
        assert!(xi.xi3 < 0.0);
    }
}
