//! Reference implementations used as test oracles.
#![allow(dead_code)]

use nalgebra::DMatrix;
use nscool::{CMatrix, Complex64};

fn fact(n: i64) -> f64 {
    assert!(n >= 0);
    (1..=n).map(|k| k as f64).product()
}

/// Racah's closed form in plain floating point. Arguments are twice the
/// quantum numbers.
pub fn cg_racah(tj1: i64, tm1: i64, tj2: i64, tm2: i64, tj: i64, tm: i64) -> f64 {
    if tm1 + tm2 != tm || tj < (tj1 - tj2).abs() || tj > tj1 + tj2 {
        return 0.0;
    }
    if tm1.abs() > tj1 || tm2.abs() > tj2 || tm.abs() > tj {
        return 0.0;
    }
    if (tj1 + tm1) % 2 != 0 || (tj2 + tm2) % 2 != 0 || (tj + tm) % 2 != 0 || (tj1 + tj2 + tj) % 2 != 0 {
        return 0.0;
    }
    let h = |x: i64| x / 2;
    let pre = ((tj + 1) as f64 * fact(h(tj1 + tj2 - tj)) * fact(h(tj1 - tj2 + tj)) * fact(h(-tj1 + tj2 + tj))
        / fact(h(tj1 + tj2 + tj) + 1))
    .sqrt();
    let pre2 = (fact(h(tj1 + tm1))
        * fact(h(tj1 - tm1))
        * fact(h(tj2 + tm2))
        * fact(h(tj2 - tm2))
        * fact(h(tj + tm))
        * fact(h(tj - tm)))
    .sqrt();
    let mut sum = 0.0;
    for k in 0..=(tj1 + tj2 + tj) {
        let args = [
            h(tj1 + tj2 - tj) - k,
            h(tj1 - tm1) - k,
            h(tj2 + tm2) - k,
            h(tj - tj2 + tm1) + k,
            h(tj - tj1 - tm2) + k,
        ];
        if args.iter().any(|&a| a < 0) {
            continue;
        }
        let d: f64 = fact(k) * args.iter().map(|&a| fact(a)).product::<f64>();
        sum += if k % 2 == 0 { 1.0 } else { -1.0 } / d;
    }
    pre * pre2 * sum
}

/// Spin operators `(Jz, J+, J-)` for angular momentum `tj/2` in the basis
/// `m = -j .. j` ascending.
pub fn spin_ops(tj: i64) -> (DMatrix<f64>, DMatrix<f64>, DMatrix<f64>) {
    let n = (tj + 1) as usize;
    let j = tj as f64 / 2.0;
    let m = |k: usize| -j + k as f64;
    let jz = DMatrix::from_fn(n, n, |r, c| if r == c { m(c) } else { 0.0 });
    let jp = DMatrix::from_fn(n, n, |r, c| {
        if r == c + 1 {
            (j * (j + 1.0) - m(c) * (m(c) + 1.0)).sqrt()
        } else {
            0.0
        }
    });
    let jm = jp.transpose();
    (jz, jp, jm)
}

/// `A I·J + Q [3(I·J)² + 1.5 I·J − I(I+1)J(J+1)] / [2IJ(2I−1)(2J−1)]`
/// built from spin matrices, in the product basis `|mJ⟩ ⊗ |mI⟩`
/// (mJ outer, both ascending).
pub fn hf_operator(ti: i64, tj: i64, a: f64, q: f64) -> DMatrix<f64> {
    let (iz, ip, im) = spin_ops(ti);
    let (jz, jp, jm) = spin_ops(tj);
    let k = |jop: &DMatrix<f64>, iop: &DMatrix<f64>| jop.kronecker(iop);
    let idot = k(&jz, &iz) + (k(&jp, &im) + k(&jm, &ip)) * 0.5;
    let (fi, fj) = (ti as f64 / 2.0, tj as f64 / 2.0);
    let n = idot.nrows();
    let mut h = &idot * a;
    if ti >= 2 && tj >= 2 {
        let den = 2.0 * fi * fj * (2.0 * fi - 1.0) * (2.0 * fj - 1.0);
        let c = fi * (fi + 1.0) * fj * (fj + 1.0);
        let quad = &idot * &idot * 3.0 + &idot * 1.5 - DMatrix::<f64>::identity(n, n) * c;
        h += quad * (q / den);
    }
    h
}

/// Column-major Liouvillian built from Kronecker products:
/// `vec(AXB) = (Bᵀ ⊗ A) vec(X)`.
pub fn liouvillian_kron(h: &CMatrix, cs: &[CMatrix]) -> CMatrix {
    let d = h.nrows();
    let id = CMatrix::identity(d, d);
    let i = Complex64::new(0.0, 1.0);
    let mut l = (id.kronecker(h) * (-i)) + (h.transpose().kronecker(&id) * i);
    for c in cs {
        let k = c.adjoint() * c;
        l += c.conjugate().kronecker(c);
        l -= id.kronecker(&k) * Complex64::new(0.5, 0.0);
        l -= k.transpose().kronecker(&id) * Complex64::new(0.5, 0.0);
    }
    l
}
