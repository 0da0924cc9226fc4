//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

mod common;

use std::process::ExitCode;

use nscool::analysis::{
    balance_omega_pd, compute_nu, cool, dressed_pair, impurity_point, min_omega_ps, ratio_fidelity,
    run_scenario, scaled_constants_overlaps, sensitivity_scenarios, ISOTOPES,
};
use nscool::angmom::{clebsch_gordan, xi_factors, HalfInt};
use nscool::hyperfine::{
    f_level_energy, hf_element, hf_matrix, zeeman_diag, HyperfineConstants, SpinSpace, ZeemanParams,
};
use nscool::lasercalc::{
    field_for_rabi, intensity_from_field, omega_from_wavelength_nm, power_from_intensity,
    rdme_from_linewidth, BeamSpec, Multiplicity,
};
use nscool::lindblad::{
    evolve, uniform_grid, DensityMatrix, IntegratorConfig, InvariantReport, JumpOperator, Observable,
};
use nscool::srmodel::ModelParams;
use nscool::{CMatrix, CVector, Complex64};

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, id: usize, title: &str, checks: &[(String, bool)]) {
        let ok = checks.iter().all(|(_, ok)| *ok);
        if !ok {
            self.failures += 1;
        }
        let detail: Vec<String> = checks
            .iter()
            .map(|(d, ok)| if *ok { d.clone() } else { format!("{d} <-- FAIL") })
            .collect();
        println!("[{}] {:>2}. {}: {}", if ok { "PASS" } else { "FAIL" }, id, title, detail.join("; "));
    }
}

fn within(label: &str, got: f64, want: f64, tol: f64) -> (String, bool) {
    let t = if tol < 1e-4 { format!("{tol:e}") } else { format!("{tol}") };
    (format!("{label} = {got:.6} (want {want} ± {t})"), (got - want).abs() <= tol)
}

fn within_rel(label: &str, got: f64, want: f64, rel: f64) -> (String, bool) {
    (
        format!("{label} = {got:.4e} (want {want:.3e} ± {:.0}%)", rel * 100.0),
        ((got - want) / want).abs() <= rel,
    )
}

fn h(t: i32) -> HalfInt {
    HalfInt::from_twice(t)
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

struct Invariants {
    worst: InvariantReport,
    runs: usize,
}

impl Invariants {
    fn add(&mut self, r: &InvariantReport) {
        self.worst.merge(r);
        self.runs += 1;
    }
}

fn main() -> ExitCode {
    let mut rep = Report { failures: 0 };
    let mut inv = Invariants { worst: InvariantReport::default(), runs: 0 };
    let p = ModelParams::default();
    let cfg = IntegratorConfig::default();

    // 1
    let c = HyperfineConstants::SR87_1P1;
    let s = SpinSpace::SR87_1P1;
    let m1 = HalfInt::integer(-1);
    let up = hf_element(c, s, m1, h(-7), m1, h(-7));
    let down = hf_element(c, s, m1, h(-9), m1, h(-9));
    let z = ZeemanParams { b_gauss: 1.0, g_j: 1.0, mu_nuclear: -1.0924 };
    rep.line(1, "1P1 hyperfine diagonal elements (MHz)", &[
        within("h(-1,up)", up, -8.65, 0.01),
        within("h(-1,dn)", down, -5.55, 0.01),
        within("h+Z(-1,up)", up + zeeman_diag(z, h(9), m1, h(-7)), -10.05, 0.01),
        within("h+Z(-1,dn)", down + zeeman_diag(z, h(9), m1, h(-9)), -6.95, 0.01),
    ]);

    // 2
    let d = HyperfineConstants::SR87_15D_1D2;
    let e = |tf: i32| f_level_energy(d, h(9), h(4), h(tf)).unwrap();
    rep.line(2, "5s15d 1D2 F-level energies (MHz)", &[
        within("F=13/2", e(13), -1765.0, 1.0),
        within("F=11/2", e(11), -463.0, 1.0),
        within("F=9/2", e(9), 604.0, 1.0),
        within("F=7/2", e(7), 1453.0, 1.0),
        within("F=5/2", e(5), 2100.0, 1.0),
        within("E(11/2)-E(13/2)", e(11) - e(13), 1300.0, 50.0),
        within("E(9/2)-E(11/2)", e(9) - e(11), 1100.0, 50.0),
    ]);

    // 3
    let xi = xi_factors().as_array();
    let want = [(2.0f64 / 13.0).sqrt(), 3.0 / 13f64.sqrt(), 3.0 / 26f64.sqrt(), -2.0 / 13f64.sqrt()];
    let checks: Vec<_> = (0..4).map(|k| within(&format!("xi{k}"), xi[k], want[k], 1e-12)).collect();
    rep.line(3, "sigma- dressing factors", &checks);

    // 4
    let pair = dressed_pair(&p).unwrap();
    let nu = compute_nu(&p).unwrap();
    rep.line(4, "dressed-state overlaps and common energy", &[
        within("overlap_up", pair.overlap_up, 0.99409, 5e-4),
        within("overlap_down", pair.overlap_down, 0.99910, 5e-4),
        within("nu (MHz)", nu, -3.8826, 0.01),
    ]);

    // 5
    let w = balance_omega_pd(&p, 50.0, 300.0).unwrap();
    rep.line(5, "balanced Omega_pd at Delta_pd = -1700 MHz", &[within("Omega_pd (MHz)", w, 144.27, 0.05)]);

    // 6
    let fig3 = cool(one(), one(), &p, 20.0, 201).unwrap();
    inv.add(&fig3.trajectory.invariants);
    let clock_ratio = fig3.pop_residual_clock / 7e-6;
    rep.line(6, "cooling endpoint at 20 us, alpha = beta", &[
        within("fidelity", fig3.fidelity, 0.9996, 3e-4),
        within_rel("pop_perp", fig3.pop_perp, 1.0e-4, 0.3),
        within_rel("pop_reservoir", fig3.pop_reservoir, 2.9e-4, 0.3),
        (
            format!("pop_clock = {:.3e} (want 7e-6 within x10)", fig3.pop_residual_clock),
            (0.1..=10.0).contains(&clock_ratio),
        ),
    ]);

    // 7
    let table = [(0.1, 0.9999), (1.0 / 3.0, 0.9999), (0.5, 0.9998), (2.0, 0.9993), (3.0, 0.9992), (10.0, 0.9991), (100.0, 0.99909)];
    let mut checks = Vec::new();
    for (ratio, want) in table {
        let r = ratio_fidelity(&p, ratio, 20.0, &cfg).unwrap();
        inv.add(&r.trajectory.invariants);
        checks.push(within(&format!("a/b={ratio:.3}"), r.fidelity, want, 2e-4));
    }
    rep.line(7, "qubit-state sweep at 20 us", &checks);

    // 8
    let mut checks = Vec::new();
    for sc in sensitivity_scenarios(&p).iter().skip(1) {
        let row = run_scenario(sc, &cfg).unwrap();
        inv.add(&row.invariants);
        let cp = |t: f64| *row.checkpoints.iter().find(|c| (c.t - t).abs() < 1e-9).unwrap();
        let n = row.name.as_str();
        match n {
            "omega_eff=2" => {
                let f = cp(5.0).fidelity;
                checks.push((format!("{n} F(5us) = {f:.6} (want >= 0.9995)"), f >= 0.9995));
            }
            "delta=0" => {
                checks.push(within(&format!("{n} F(20us)"), cp(20.0).fidelity, 0.9991, 3e-4));
                checks.push(within(&format!("{n} F(26us)"), cp(26.0).fidelity, 0.9996, 3e-4));
            }
            "omega_ps=250" | "delta_ps_extra=10" => {
                checks.push(within(&format!("{n} F(20us)"), cp(20.0).fidelity, 0.9996, 3e-4));
            }
            "omega_pd=140" => {
                checks.push(within(&format!("{n} F(20us)"), cp(20.0).fidelity, 0.99946, 3e-4));
                checks.push(within(&format!("{n} F(30us)"), cp(30.0).fidelity, 0.99947, 3e-4));
                checks.push(within_rel(&format!("{n} perp(20us)"), cp(20.0).pop_perp, 2.6e-4, 0.3));
            }
            "delta_pd=-1750" => {
                checks.push(within(&format!("{n} F(20us)"), cp(20.0).fidelity, 0.9988, 3e-4));
                checks.push(within(&format!("{n} |splitting| (MHz)"), row.splitting.abs(), 0.42, 0.02));
                checks.push(within_rel(&format!("{n} perp(20us)"), cp(20.0).pop_perp, 9.2e-4, 0.3));
            }
            _ => {}
        }
        for c in &row.checkpoints {
            checks.push((format!("{n} sum(t={}) = 1", c.t), (c.population_sum - 1.0).abs() < 1e-6));
        }
    }
    rep.line(8, "parameter sensitivity", &checks);

    // 9
    let i1 = impurity_point(&p, 0.01, 20.0, &cfg).unwrap();
    let i10 = impurity_point(&p, 0.1, 20.0, &cfg).unwrap();
    inv.add(&i1.invariants);
    inv.add(&i10.invariants);
    rep.line(9, "dressing-laser polarization impurity", &[
        within("chi=0.01", i1.fidelity, 0.9981, 5e-4),
        within("chi=0.1", i10.fidelity, 0.9878, 1e-3),
    ]);

    // 10
    let (u, dn) = scaled_constants_overlaps(4.0).unwrap();
    rep.line(10, "overlaps with 4x hyperfine constants", &[
        within("overlap_up", u, 0.984, 0.002),
        within("overlap_down", dn, 0.999, 0.002),
    ]);

    // 11
    let targets = [("Yb171", 2150.0), ("Yb173", 5400.0), ("Ca43", 490.0), ("Ca41", 580.0), ("Zn67", 535.0)];
    let checks: Vec<_> = targets
        .iter()
        .map(|(name, want)| {
            let iso = ISOTOPES.iter().find(|x| x.name == *name).unwrap();
            let got = min_omega_ps(iso.i, iso.a, iso.q, 0.99).unwrap();
            within_rel(&format!("{name} (MHz)"), got, *want, 0.15)
        })
        .collect();
    rep.line(11, "minimum Omega_ps for other species", &checks);

    // 12
    let d1 = rdme_from_linewidth(2.0e8, 2.0 * std::f64::consts::PI * 6.51e14, Multiplicity::Nine).unwrap();
    let d2 = rdme_from_linewidth(1.86e7, omega_from_wavelength_nm(1124.232).unwrap(), Multiplicity::One).unwrap();
    let beam = BeamSpec::new(20.0).unwrap();
    let e_ps = field_for_rabi(300.0, d2).unwrap();
    let i_ps = intensity_from_field(e_ps).unwrap();
    let p_ps = power_from_intensity(i_ps, beam).unwrap();
    let e_pd = field_for_rabi(144.27, 0.092).unwrap();
    let p_pd = power_from_intensity(intensity_from_field(e_pd).unwrap(), beam).unwrap();
    rep.line(12, "laser requirement chain", &[
        within_rel("d(1P1) e a0", d1, 5.38, 0.02),
        within_rel("d(6s) e a0", d2, 2.09, 0.02),
        within_rel("E_ps V/m", e_ps, 1.12e4, 0.02),
        within_rel("I_ps W/cm2", i_ps * 1e-4, 16.7, 0.02),
        within_rel("P_ps mW", p_ps * 1e3, 0.21, 0.02),
        within_rel("E_pd V/m", e_pd, 1.23e5, 0.02),
        within_rel("P_pd mW", p_pd * 1e3, 25.1, 0.02),
    ]);

    // 13
    let cg_err = cg_oracle_error();
    let hf_err = hf_oracle_error();
    let decay_err = two_level_decay_error();
    let rerun = cool(one(), one(), &p, 20.0, 201).unwrap();
    let deterministic = rerun.trajectory == fig3.trajectory
        && rerun.fidelity.to_bits() == fig3.fidelity.to_bits();
    rep.line(13, "property suites", &[
        (format!("trace drift {:.1e} <= 1e-8 over {} runs", inv.worst.max_trace_drift, inv.runs), inv.worst.max_trace_drift <= 1e-8),
        (format!("hermiticity {:.1e} <= 1e-9", inv.worst.max_hermiticity_error), inv.worst.max_hermiticity_error <= 1e-9),
        (format!("min eigenvalue {:.1e} >= -1e-8", inv.worst.min_eigenvalue), inv.worst.min_eigenvalue >= -1e-8),
        (format!("CG vs oracle {cg_err:.1e} <= 1e-12"), cg_err <= 1e-12),
        (format!("hf vs oracle {hf_err:.1e} <= 1e-9 MHz"), hf_err <= 1e-9),
        (format!("two-level decay rel. error {decay_err:.1e} <= 1e-6"), decay_err <= 1e-6),
        ("rerun bitwise identical".to_string(), deterministic),
    ]);

    if rep.failures == 0 {
        println!("acceptance: all 13 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} criteria failed", rep.failures);
        ExitCode::FAILURE
    }
}

fn cg_oracle_error() -> f64 {
    let mut worst = 0.0f64;
    for tj1 in 0..=10i64 {
        for tj2 in 0..=10i64 {
            for tj in ((tj1 - tj2).abs()..=tj1 + tj2).step_by(2) {
                for tm1 in (-tj1..=tj1).step_by(2) {
                    for tm2 in (-tj2..=tj2).step_by(2) {
                        let tm = tm1 + tm2;
                        let hh = |t: i64| HalfInt::from_twice(t as i32);
                        let got = clebsch_gordan(hh(tj1), hh(tm1), hh(tj2), hh(tm2), hh(tj), hh(tm));
                        let want = common::cg_racah(tj1, tm1, tj2, tm2, tj, tm);
                        worst = worst.max((got - want).abs());
                    }
                }
            }
        }
    }
    worst
}

fn hf_oracle_error() -> f64 {
    let mut worst = 0.0f64;
    for (ti, tj, c) in [
        (9, 2, HyperfineConstants::SR87_1P1),
        (9, 4, HyperfineConstants::SR87_15D_1D2),
        (5, 2, HyperfineConstants::new(60.0, 600.0)),
        (7, 2, HyperfineConstants::new(-15.46, -9.7)),
        (1, 2, HyperfineConstants::new(-213.0, 0.0)),
    ] {
        let s = SpinSpace::new(h(ti), h(tj)).unwrap();
        let got = hf_matrix(c, s);
        let want = common::hf_operator(ti as i64, tj as i64, c.a, c.q);
        let ni = (ti + 1) as usize;
        let nj = (tj + 1) as usize;
        for r in 0..nj * ni {
            for k in 0..nj * ni {
                let gi = s.index_of(h(-tj + 2 * (r / ni) as i32), h(-ti + 2 * (r % ni) as i32)).unwrap();
                let gk = s.index_of(h(-tj + 2 * (k / ni) as i32), h(-ti + 2 * (k % ni) as i32)).unwrap();
                worst = worst.max((got[(gi, gk)] - want[(r, k)]).abs());
            }
        }
    }
    worst
}

fn two_level_decay_error() -> f64 {
    let gamma: f64 = 2.0;
    let h = CMatrix::zeros(2, 2);
    let cs = [JumpOperator::new(vec![(Complex64::new(gamma.sqrt(), 0.0), 1, 0)])];
    let psi = CVector::from_vec(vec![Complex64::new(0.0, 0.0), one()]);
    let rho = DensityMatrix::from_pure(&psi).unwrap();
    let grid = uniform_grid(5.0, 51).unwrap();
    let obs = [Observable::subspace("e", vec![1])];
    let tr = evolve(&rho, &h, &cs, &grid, &obs, &IntegratorConfig::default()).unwrap();
    tr.times
        .iter()
        .zip(tr.series("e").unwrap())
        .map(|(t, p)| ((p - (-gamma * t).exp()) / (-gamma * t).exp()).abs())
        .fold(0.0, f64::max)
}
