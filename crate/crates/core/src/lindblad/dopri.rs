//! Dormand–Prince 5(4) with Hairer's continuous extension.

use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::IntegratorConfig;
use crate::{CMatrix, Error, IntegrationFailure, Result};

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const MAX_STEPS: usize = 10_000_000;

fn axpy(out: &mut CMatrix, a: f64, x: &CMatrix) {
    for (o, v) in out.as_mut_slice().iter_mut().zip(x.as_slice()) {
        *o += v * a;
    }
}

/// `out = y + h Σ aᵢ kᵢ`.
fn combine(out: &mut CMatrix, y: &CMatrix, h: f64, terms: &[(f64, &CMatrix)]) {
    out.copy_from(y);
    for &(a, k) in terms {
        if a != 0.0 {
            axpy(out, h * a, k);
        }
    }
}

fn rms_norm(v: &CMatrix, scale: impl Fn(usize) -> f64) -> f64 {
    let n = v.len() as f64;
    (v.iter().enumerate().map(|(i, z)| (z.norm() / scale(i)).powi(2)).sum::<f64>() / n).sqrt()
}

fn initial_step<F>(f: &mut F, y0: &CMatrix, f0: &CMatrix, cfg: &IntegratorConfig) -> f64
where
    F: FnMut(&CMatrix, &mut CMatrix),
{
    let sc = |i: usize| cfg.abs_tol + cfg.rel_tol * y0[i].norm();
    let d0 = rms_norm(y0, sc);
    let d1 = rms_norm(f0, sc);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let h0 = h0.min(cfg.max_step);
    let mut y1 = y0.clone();
    combine(&mut y1, y0, h0, &[(1.0, f0)]);
    let mut f1 = CMatrix::zeros(y0.nrows(), y0.ncols());
    f(&y1, &mut f1);
    let d2 = rms_norm(&(&f1 - f0), sc) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(cfg.max_step)
}

/// Integrates `y' = f(y)` from `t_out[0]` and calls `sample(t, y)` at each
/// later output time.
pub(super) fn integrate<F, S>(
    mut f: F,
    y0: CMatrix,
    t_out: &[f64],
    cfg: &IntegratorConfig,
    mut sample: S,
) -> Result<()>
where
    F: FnMut(&CMatrix, &mut CMatrix),
    S: FnMut(f64, &CMatrix) -> Result<()>,
{
    let (r, c) = y0.shape();
    let zeros = || CMatrix::zeros(r, c);
    let t_end = *t_out.last().expect("non-empty grid");
    let mut t = t_out[0];
    let mut y = y0;
    let mut k1 = zeros();
    f(&y, &mut k1);
    let (mut k2, mut k3, mut k4, mut k5, mut k6, mut k7) =
        (zeros(), zeros(), zeros(), zeros(), zeros(), zeros());
    let mut ys = zeros();
    let mut y1 = zeros();
    let mut err = zeros();
    let mut h = initial_step(&mut f, &y, &k1, cfg);
    let mut next = 1;
    let mut rejected_last = false;

    for _ in 0..MAX_STEPS {
        if next >= t_out.len() {
            return Ok(());
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }
        if h <= 1e-14 * t.abs().max(1.0) {
            return Err(Error::Integration { t, reason: IntegrationFailure::StepUnderflow { h } });
        }

        combine(&mut ys, &y, h, &[(A21, &k1)]);
        f(&ys, &mut k2);
        combine(&mut ys, &y, h, &[(A31, &k1), (A32, &k2)]);
        f(&ys, &mut k3);
        combine(&mut ys, &y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]);
        f(&ys, &mut k4);
        combine(&mut ys, &y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]);
        f(&ys, &mut k5);
        combine(&mut ys, &y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]);
        f(&ys, &mut k6);
        combine(&mut y1, &y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        f(&y1, &mut k7);

        err.fill(Complex64::new(0.0, 0.0));
        for (e, k) in [(E1, &k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)] {
            axpy(&mut err, h * e, k);
        }
        let en = rms_norm(&err, |i| cfg.abs_tol + cfg.rel_tol * y[i].norm().max(y1[i].norm()));
        if !en.is_finite() {
            return Err(Error::Integration { t, reason: IntegrationFailure::NonFinite });
        }

        if en <= 1.0 {
            let t_new = if last { t_end } else { t + h };
            if next < t_out.len() && t_out[next] <= t_new {
                let r2 = &y1 - &y;
                let r3 = &k1 * Complex64::new(h, 0.0) - &r2;
                let r4 = &r2 - &k7 * Complex64::new(h, 0.0) - &r3;
                let mut r5 = zeros();
                for (dc, k) in [(D1, &k1), (D3, &k3), (D4, &k4), (D5, &k5), (D6, &k6), (D7, &k7)] {
                    axpy(&mut r5, h * dc, k);
                }
                while next < t_out.len() && t_out[next] <= t_new {
                    let tn = t_out[next];
                    if tn == t_new {
                        sample(tn, &y1)?;
                    } else {
                        let th = (tn - t) / h;
                        let th1 = 1.0 - th;
                        let inner = &r4 + &r5 * Complex64::new(th1, 0.0);
                        let inner = &r3 + inner * Complex64::new(th, 0.0);
                        let inner = &r2 + inner * Complex64::new(th1, 0.0);
                        let yi = &y + inner * Complex64::new(th, 0.0);
                        sample(tn, &yi)?;
                    }
                    next += 1;
                }
            }
            core::mem::swap(&mut y, &mut y1);
            core::mem::swap(&mut k1, &mut k7);
            t = t_new;
            let mut fac = SAFETY * en.max(1e-10).powf(-0.2);
            fac = fac.clamp(FAC_MIN, FAC_MAX);
            if rejected_last {
                fac = fac.min(1.0);
            }
            rejected_last = false;
            h = (h * fac).min(cfg.max_step);
        } else {
            rejected_last = true;
            h *= (SAFETY * en.powf(-0.2)).max(FAC_MIN);
        }
    }
    Err(Error::Integration { t, reason: IntegrationFailure::StepUnderflow { h } })
}
