use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use nscool::analysis::{
    balance_omega_pd, compute_nu, cool_with, dressed_pair, dressed_spectrum, impurity_point,
    min_omega_ps_capped, ratio_fidelity, run_scenario, scaled_constants_overlaps, sensitivity_scenarios,
    CoolingResult, ISOTOPES, TABLE1_RATIOS,
};
use nscool::angmom::HalfInt;
use nscool::hyperfine::{f_level_energy, HyperfineConstants, SpinSpace};
use nscool::lasercalc::{
    laser_requirement, rdme_from_linewidth, BeamSpec, LaserRequirement, Multiplicity, TransitionSpec,
};
use nscool::lindblad::InvariantReport;
use nscool::srmodel::{impurity_loss_estimate, BasisState, ModelParams};
use nscool::Error;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::output::{Bundle, Cell, Csv};
use crate::svg;

/// Failure of a command, classified by exit code.
#[derive(Debug)]
pub enum Failure {
    /// Exit 2.
    Config(String),
    /// Exit 3.
    Numerical(String),
    /// Exit 1.
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Config(_) => 2,
            Failure::Numerical(_) => 3,
            Failure::Io(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Numerical(m) | Failure::Io(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter { .. }
            | Error::ZeroQubitVector
            | Error::InvalidTimeGrid(_)
            | Error::NegativeAngularMomentum(_)
            | Error::FOutOfRange { .. } => Failure::Config(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type Result<T> = std::result::Result<T, Failure>;

/// Shared command context.
pub struct Ctx<'a> {
    pub cfg: &'a RunConfig,
    pub out: &'a Path,
    pub svg: bool,
    pub jobs: usize,
}

impl Ctx<'_> {
    fn parallel<T, R, F>(&self, items: &[T], f: F) -> Result<Vec<R>>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> Result<R> + Sync + Send,
    {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs)
            .build()
            .map_err(|e| Failure::Io(e.to_string()))?;
        pool.install(|| items.par_iter().map(&f).collect())
    }

    fn finish(&self, bundle: Bundle) -> Result<()> {
        for p in bundle.commit(self.out)? {
            println!("wrote {}", p.display());
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct Populations {
    psi0: f64,
    psif: f64,
    perp: f64,
    reservoir: f64,
    p1_total: f64,
    d2_total: f64,
    s6: f64,
    clock_total: f64,
    ground_total: f64,
}

#[derive(Serialize)]
struct DressedSummary {
    overlap_up: f64,
    overlap_down: f64,
    energy_up_mhz: f64,
    energy_down_mhz: f64,
    splitting_mhz: f64,
}

fn dressed_summary(p: &ModelParams) -> Result<DressedSummary> {
    let d = dressed_pair(&ModelParams { delta: 0.0, ..*p })?;
    Ok(DressedSummary {
        overlap_up: d.overlap_up,
        overlap_down: d.overlap_down,
        energy_up_mhz: d.energy_up,
        energy_down_mhz: d.energy_down,
        splitting_mhz: d.splitting(),
    })
}

/// Self-contained record of one cooling run.
#[derive(Serialize)]
struct SummaryRecord {
    tool: &'static str,
    version: &'static str,
    config_hash: String,
    input: BTreeMap<String, String>,
    t_final_us: f64,
    fidelity: f64,
    final_populations: Populations,
    dressed: DressedSummary,
    /// `None` when the dressed pair is not balanced.
    nu_mhz: Option<f64>,
    invariants: InvariantReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_clock_s: Option<f64>,
}

fn summary(cfg: &RunConfig, r: &CoolingResult, wall: Option<f64>) -> Result<SummaryRecord> {
    let last = |n: &str| r.trajectory.last(n).unwrap_or(f64::NAN);
    Ok(SummaryRecord {
        tool: "nscool",
        version: env!("CARGO_PKG_VERSION"),
        config_hash: cfg.hash(),
        input: cfg.echo(),
        t_final_us: cfg.t_final,
        fidelity: r.fidelity,
        final_populations: Populations {
            psi0: last("pop_psi0"),
            psif: last("pop_psif"),
            perp: last("pop_perp"),
            reservoir: last("pop_reservoir"),
            p1_total: last("pop_1P1_total"),
            d2_total: last("pop_1D2_total"),
            s6: last("pop_6s"),
            clock_total: last("pop_clock_total"),
            ground_total: last("pop_ground_total"),
        },
        dressed: dressed_summary(&cfg.params)?,
        nu_mhz: compute_nu(&cfg.params).ok(),
        invariants: r.trajectory.invariants,
        wall_clock_s: wall,
    })
}

/// Columns of the trajectory CSV.
pub const TRAJECTORY_COLUMNS: [&str; 8] = [
    "t_us",
    "pop_psi0",
    "pop_psif",
    "pop_perp",
    "pop_reservoir",
    "pop_1P1_total",
    "pop_1D2_total",
    "pop_6s",
];

fn trajectory_csv(cfg: &RunConfig, r: &CoolingResult) -> Vec<u8> {
    let tr = &r.trajectory;
    let cols: Vec<&[f64]> =
        TRAJECTORY_COLUMNS[1..].iter().map(|n| tr.series(n).expect("recorded series")).collect();
    let mut csv = Csv::new("trajectory", &cfg.hash(), &TRAJECTORY_COLUMNS);
    for (k, &t) in tr.times.iter().enumerate() {
        let mut row: Vec<Cell> = vec![t.into()];
        row.extend(cols.iter().map(|c| Cell::Num(c[k])));
        csv.row(&row);
    }
    csv.into_bytes()
}

fn trajectory_svg(r: &CoolingResult) -> String {
    let tr = &r.trajectory;
    let s = |name: &'static str| svg::Series { name, y: tr.series(name).expect("recorded series") };
    svg::render(
        &tr.times,
        &[
            svg::Panel { title: "qubit populations", log10: false, series: vec![s("pop_psi0"), s("pop_psif")] },
            svg::Panel {
                title: "loss and transient populations (log10)",
                log10: true,
                series: vec![s("pop_perp"), s("pop_reservoir"), s("pop_1P1_total"), s("pop_1D2_total"), s("pop_6s")],
            },
        ],
    )
}

fn run_cooling(cfg: &RunConfig) -> Result<CoolingResult> {
    Ok(cool_with(cfg.alpha, cfg.beta, &cfg.params, cfg.t_final, cfg.samples, &cfg.integrator)?)
}

fn cooling_bundle(ctx: &Ctx, stem: &str, r: &CoolingResult, wall: Option<f64>) -> Result<Bundle> {
    let mut b = Bundle::default();
    b.add(format!("{stem}.csv"), trajectory_csv(ctx.cfg, r));
    b.add_json(format!("{stem}_summary.json"), &summary(ctx.cfg, r, wall)?);
    if ctx.svg {
        b.add(format!("{stem}.svg"), trajectory_svg(r).into_bytes());
    }
    Ok(b)
}

pub fn simulate(ctx: &Ctx) -> Result<()> {
    let start = Instant::now();
    let r = run_cooling(ctx.cfg)?;
    let wall = start.elapsed().as_secs_f64();
    println!("fidelity = {:.6} after {} us", r.fidelity, ctx.cfg.t_final);
    ctx.finish(cooling_bundle(ctx, "trajectory", &r, Some(wall))?)
}

#[derive(Serialize)]
struct BalanceRecord {
    config_hash: String,
    delta_pd_mhz: f64,
    bracket_mhz: [f64; 2],
    /// Dressed splitting at the configured `omega_pd`.
    configured_omega_pd_mhz: f64,
    configured_imbalance_mhz: f64,
    balanced_omega_pd_mhz: Option<f64>,
    nu_mhz: Option<f64>,
    recommended_delta_mhz: Option<f64>,
    note: Option<String>,
}

pub fn balance(ctx: &Ctx) -> Result<()> {
    let cfg = ctx.cfg;
    let (lo, hi) = (cfg.balance_lo, cfg.balance_hi);
    if !(lo > 0.0 && lo < hi) {
        return Err(Failure::Config(format!(
            "malformed bracket [{lo}, {hi}]: need 0 < balance_lo < balance_hi"
        )));
    }
    let p = cfg.params;
    let here = dressed_pair(&ModelParams { delta: 0.0, ..p })?;
    let (balanced, note) = match balance_omega_pd(&p, lo, hi) {
        Ok(w) => (Some(w), None),
        Err(e @ Error::NoSignChange { .. }) => (None, Some(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    let nu = balanced.map(|w| compute_nu(&ModelParams { omega_pd: w, ..p })).transpose()?;
    let rec = BalanceRecord {
        config_hash: cfg.hash(),
        delta_pd_mhz: p.delta_pd,
        bracket_mhz: [lo, hi],
        configured_omega_pd_mhz: p.omega_pd,
        configured_imbalance_mhz: here.splitting(),
        balanced_omega_pd_mhz: balanced,
        nu_mhz: nu,
        recommended_delta_mhz: nu.map(|v| -v),
        note,
    };
    println!("imbalance at omega_pd = {} MHz: {:.6} MHz", p.omega_pd, rec.configured_imbalance_mhz);
    match (balanced, nu) {
        (Some(w), Some(nu)) => {
            println!("balanced omega_pd = {w:.6} MHz");
            println!("nu = {nu:.6} MHz, use delta = {:.6} MHz", -nu);
        }
        _ => println!("no balancing omega_pd in [{lo}, {hi}] MHz"),
    }
    let mut b = Bundle::default();
    b.add_json("balance.json", &rec);
    ctx.finish(b)
}

#[derive(Serialize)]
struct DressedLevel {
    energy_mhz: f64,
    dominant_state: &'static str,
    dominant_weight: f64,
}

#[derive(Serialize)]
struct DressedRecord {
    config_hash: String,
    pair: DressedSummary,
    nu_mhz: Option<f64>,
    spectrum: Vec<DressedLevel>,
}

pub fn dressed(ctx: &Ctx) -> Result<()> {
    let p = ModelParams { delta: 0.0, ..ctx.cfg.params };
    let spec = dressed_spectrum(&p)?;
    let spectrum = (0..spec.energies.len())
        .map(|c| {
            let col = spec.vectors.column(c);
            let k = col.iamax();
            DressedLevel {
                energy_mhz: spec.energies[c],
                dominant_state: BasisState::from_index(k).map_or("?", BasisState::label),
                dominant_weight: col[k] * col[k],
            }
        })
        .collect();
    let rec = DressedRecord {
        config_hash: ctx.cfg.hash(),
        pair: dressed_summary(&p)?,
        nu_mhz: compute_nu(&p).ok(),
        spectrum,
    };
    println!(
        "overlaps: up {:.6}, down {:.6}; splitting {:.6} MHz",
        rec.pair.overlap_up, rec.pair.overlap_down, rec.pair.splitting_mhz
    );
    if let Some(nu) = rec.nu_mhz {
        println!("nu = {nu:.6} MHz");
    }
    let mut b = Bundle::default();
    b.add_json("dressed.json", &rec);
    ctx.finish(b)
}

/// Manifold, F and energy in MHz.
type LevelRow = (String, String, f64);

fn levels_csv(cfg: &RunConfig) -> Result<(Vec<u8>, Vec<LevelRow>)> {
    let mut rows = Vec::new();
    for (name, space, c) in [
        ("5s15d 1D2", SpinSpace::SR87_1D2, HyperfineConstants::SR87_15D_1D2),
        ("5s5p 1P1", SpinSpace::SR87_1P1, cfg.params.hf_1p1),
    ] {
        let (i, j) = (space.i(), space.j());
        let f_lo = (i - j).abs().twice();
        let f_hi = (i + j).twice();
        for tf in (f_lo..=f_hi).rev().step_by(2) {
            let f = HalfInt::from_twice(tf);
            rows.push((name.to_string(), f.to_string(), f_level_energy(c, i, j, f)?));
        }
    }
    let mut csv = Csv::new("levels", &cfg.hash(), &["manifold", "F", "energy_mhz"]);
    for (m, f, e) in &rows {
        csv.row(&[m.as_str().into(), f.as_str().into(), (*e).into()]);
    }
    Ok((csv.into_bytes(), rows))
}

pub fn levels(ctx: &Ctx) -> Result<()> {
    let (bytes, rows) = levels_csv(ctx.cfg)?;
    for (m, f, e) in &rows {
        println!("{m:10}  F = {f:>4}  {e:10.3} MHz");
    }
    let mut b = Bundle::default();
    b.add("levels.csv", bytes);
    ctx.finish(b)
}

/// Source of the dipole moment for `lasercalc`.
pub enum DipoleSource {
    Direct(f64),
    Linewidth { gamma: f64, transition: TransitionInput, multiplicity: Multiplicity },
}

pub enum TransitionInput {
    WavelengthNm(f64),
    FrequencyHz(f64),
}

#[derive(Serialize)]
struct LaserRecord {
    inputs: BTreeMap<&'static str, f64>,
    requirement: LaserRequirement,
    intensity_w_per_m2: f64,
    power_mw: f64,
}

pub fn lasercalc(ctx: &Ctx, rabi_mhz: f64, dipole: DipoleSource, spot_um: f64) -> Result<()> {
    let beam = BeamSpec::new(spot_um)?;
    let mut inputs = BTreeMap::from([("rabi_mhz", rabi_mhz), ("spot_radius_um", spot_um)]);
    let d = match dipole {
        DipoleSource::Direct(d) => d,
        DipoleSource::Linewidth { gamma, transition, multiplicity } => {
            let t = match transition {
                TransitionInput::WavelengthNm(l) => {
                    inputs.insert("wavelength_nm", l);
                    TransitionSpec::from_wavelength_nm(l, gamma, multiplicity)?
                }
                TransitionInput::FrequencyHz(f) => {
                    inputs.insert("frequency_hz", f);
                    TransitionSpec::from_frequency_hz(f, gamma, multiplicity)?
                }
            };
            inputs.insert("linewidth_per_s", gamma);
            inputs.insert("multiplicity", multiplicity.factor());
            t.reduced_dipole()?
        }
    };
    let req = laser_requirement(rabi_mhz, d, beam)?;
    println!("dipole    = {:.6} e a0", req.dipole_ea0);
    println!("field     = {:.6e} V/m", req.field_v_per_m);
    println!("intensity = {:.6} W/cm^2", req.intensity_w_per_cm2);
    println!("power     = {:.6} mW", req.power_w * 1e3);
    let rec = LaserRecord {
        inputs,
        intensity_w_per_m2: req.intensity_w_per_cm2 * 1e4,
        power_mw: req.power_w * 1e3,
        requirement: req,
    };
    let mut b = Bundle::default();
    b.add_json("lasercalc.json", &rec);
    ctx.finish(b)
}

/// Targets of `reproduce`.
pub const TARGETS: [&str; 7] = ["fig3", "table1", "sensitivity", "impurity", "appendixA", "levels", "isotopes"];

pub fn reproduce(ctx: &Ctx, target: &str) -> Result<()> {
    let bundle = match target {
        "fig3" => {
            let r = run_cooling(ctx.cfg)?;
            println!("fidelity = {:.6}", r.fidelity);
            cooling_bundle(ctx, "fig3", &r, None)?
        }
        "table1" => table1(ctx)?,
        "sensitivity" => sensitivity(ctx)?,
        "impurity" => impurity(ctx)?,
        "appendixA" => appendix_a(ctx)?,
        "levels" => {
            let mut b = Bundle::default();
            b.add("levels.csv", levels_csv(ctx.cfg)?.0);
            b
        }
        "isotopes" => isotopes(ctx)?,
        other => {
            return Err(Failure::Config(format!(
                "unknown reproduce target `{other}`; expected one of {}",
                TARGETS.join(", ")
            )))
        }
    };
    ctx.finish(bundle)
}

#[derive(Serialize)]
struct Table<R> {
    config_hash: String,
    rows: Vec<R>,
}

#[derive(Serialize)]
struct RatioRow {
    alpha_over_beta: f64,
    fidelity: f64,
    pop_perp: f64,
    pop_reservoir: f64,
    pop_clock: f64,
    invariants: InvariantReport,
}

fn table1(ctx: &Ctx) -> Result<Bundle> {
    let cfg = ctx.cfg;
    let ratios: Vec<f64> = TABLE1_RATIOS.iter().copied().chain([100.0]).collect();
    let rows = ctx.parallel(&ratios, |&ratio| {
        let r = ratio_fidelity(&cfg.params, ratio, cfg.t_final, &cfg.integrator)?;
        Ok(RatioRow {
            alpha_over_beta: ratio,
            fidelity: r.fidelity,
            pop_perp: r.pop_perp,
            pop_reservoir: r.pop_reservoir,
            pop_clock: r.pop_residual_clock,
            invariants: r.trajectory.invariants,
        })
    })?;
    let mut csv = Csv::new(
        "table1",
        &cfg.hash(),
        &["alpha_over_beta", "fidelity", "pop_perp", "pop_reservoir", "pop_clock"],
    );
    for r in &rows {
        println!("alpha/beta = {:<8.4} fidelity = {:.6}", r.alpha_over_beta, r.fidelity);
        csv.row(&[r.alpha_over_beta.into(), r.fidelity.into(), r.pop_perp.into(), r.pop_reservoir.into(), r.pop_clock.into()]);
    }
    let mut b = Bundle::default();
    b.add("table1.csv", csv.into_bytes());
    b.add_json("table1.json", &Table { config_hash: cfg.hash(), rows });
    Ok(b)
}

fn sensitivity(ctx: &Ctx) -> Result<Bundle> {
    let cfg = ctx.cfg;
    let scenarios = sensitivity_scenarios(&cfg.params);
    let rows = ctx.parallel(&scenarios, |s| Ok(run_scenario(s, &cfg.integrator)?))?;
    let mut csv = Csv::new(
        "sensitivity",
        &cfg.hash(),
        &["scenario", "splitting_mhz", "t_us", "fidelity", "pop_perp", "pop_reservoir", "pop_clock"],
    );
    for r in &rows {
        for c in &r.checkpoints {
            println!("{:<18} t = {:>4} us  fidelity = {:.6}", r.name, c.t, c.fidelity);
            csv.row(&[
                r.name.as_str().into(),
                r.splitting.into(),
                c.t.into(),
                c.fidelity.into(),
                c.pop_perp.into(),
                c.pop_reservoir.into(),
                c.pop_clock.into(),
            ]);
        }
    }
    let mut b = Bundle::default();
    b.add("sensitivity.csv", csv.into_bytes());
    b.add_json("sensitivity.json", &Table { config_hash: cfg.hash(), rows });
    Ok(b)
}

#[derive(Serialize)]
struct ImpurityOut {
    #[serde(flatten)]
    row: nscool::analysis::ImpurityRow,
    loss_estimate: f64,
}

fn impurity(ctx: &Ctx) -> Result<Bundle> {
    let cfg = ctx.cfg;
    let chis = [0.0, 0.01, 0.1];
    let rows = ctx.parallel(&chis, |&chi| {
        let row = impurity_point(&cfg.params, chi, cfg.t_final, &cfg.integrator)?;
        Ok(ImpurityOut { row, loss_estimate: impurity_loss_estimate(chi) })
    })?;
    let mut csv = Csv::new(
        "impurity",
        &cfg.hash(),
        &["chi", "fidelity", "pop_perp", "pop_reservoir", "loss_estimate"],
    );
    for r in &rows {
        println!("chi = {:<5} fidelity = {:.6}", r.row.chi, r.row.fidelity);
        csv.row(&[r.row.chi.into(), r.row.fidelity.into(), r.row.pop_perp.into(), r.row.pop_reservoir.into(), r.loss_estimate.into()]);
    }
    let mut b = Bundle::default();
    b.add("impurity.csv", csv.into_bytes());
    b.add_json("impurity.json", &Table { config_hash: cfg.hash(), rows });
    Ok(b)
}

/// Published inputs of the conversion chain.
const GAMMA_P_PER_S: f64 = 2.0e8;
const P1_FREQUENCY_HZ: f64 = 6.51e14;
const GAMMA_6S_PER_S: f64 = 1.86e7;
const PS_WAVELENGTH_NM: f64 = 1124.232;
const PD_DIPOLE_EA0: f64 = 0.092;
const SPOT_UM: f64 = 20.0;

fn appendix_a(ctx: &Ctx) -> Result<Bundle> {
    let p = &ctx.cfg.params;
    let beam = BeamSpec::new(SPOT_UM)?;
    let p1 = TransitionSpec::from_frequency_hz(P1_FREQUENCY_HZ, GAMMA_P_PER_S, Multiplicity::Nine)?;
    let ps = TransitionSpec::from_wavelength_nm(PS_WAVELENGTH_NM, GAMMA_6S_PER_S, Multiplicity::One)?;
    let d_p1 = p1.reduced_dipole()?;
    let d_ps = rdme_from_linewidth(ps.linewidth, ps.omega0, ps.multiplicity)?;
    let ps_req = laser_requirement(p.omega_ps, d_ps, beam)?;
    let pd_req = laser_requirement(p.omega_pd, PD_DIPOLE_EA0, beam)?;
    let rows: [(&str, f64, &str); 9] = [
        ("d_1S0_1P1", d_p1, "e a0"),
        ("d_1P1_6s", d_ps, "e a0"),
        ("field_ps", ps_req.field_v_per_m, "V/m"),
        ("intensity_ps", ps_req.intensity_w_per_cm2, "W/cm^2"),
        ("power_ps", ps_req.power_w * 1e3, "mW"),
        ("d_1P1_1D2", PD_DIPOLE_EA0, "e a0"),
        ("field_pd", pd_req.field_v_per_m, "V/m"),
        ("intensity_pd", pd_req.intensity_w_per_cm2, "W/cm^2"),
        ("power_pd", pd_req.power_w * 1e3, "mW"),
    ];
    let mut csv = Csv::new("appendixA", &ctx.cfg.hash(), &["quantity", "value", "unit"]);
    for (q, v, u) in rows {
        println!("{q:<14} {v:>14.6e} {u}");
        csv.row(&[q.into(), v.into(), u.into()]);
    }
    let mut b = Bundle::default();
    b.add("appendixA.csv", csv.into_bytes());
    Ok(b)
}

#[derive(Serialize)]
struct IsotopeRow {
    name: &'static str,
    nuclear_spin: String,
    a_mhz: f64,
    q_mhz: f64,
    threshold: f64,
    min_omega_ps_mhz: Option<f64>,
    note: Option<String>,
}

#[derive(Serialize)]
struct ScaledRow {
    scale: f64,
    overlap_up: f64,
    overlap_down: f64,
}

#[derive(Serialize)]
struct IsotopeRecord {
    config_hash: String,
    rows: Vec<IsotopeRow>,
    scaled_sr87: Vec<ScaledRow>,
}

fn isotopes(ctx: &Ctx) -> Result<Bundle> {
    let cfg = ctx.cfg;
    let rows = ctx.parallel(&ISOTOPES, |iso| {
        let (min, note) = match min_omega_ps_capped(iso.i, iso.a, iso.q, cfg.threshold, cfg.omega_ps_cap) {
            Ok(w) => (Some(w), None),
            Err(e @ Error::Saturated { .. }) => (None, Some(e.to_string())),
            Err(e) => return Err(e.into()),
        };
        Ok(IsotopeRow {
            name: iso.name,
            nuclear_spin: iso.i.to_string(),
            a_mhz: iso.a,
            q_mhz: iso.q,
            threshold: cfg.threshold,
            min_omega_ps_mhz: min,
            note,
        })
    })?;
    let scaled_sr87 = [1.0, 2.0, 4.0]
        .into_iter()
        .map(|s| {
            let (u, d) = scaled_constants_overlaps(s)?;
            Ok(ScaledRow { scale: s, overlap_up: u, overlap_down: d })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut csv = Csv::new(
        "isotopes",
        &cfg.hash(),
        &["isotope", "I", "A_mhz", "Q_mhz", "threshold", "min_omega_ps_mhz"],
    );
    for r in &rows {
        match r.min_omega_ps_mhz {
            Some(w) => println!("{:<6} min omega_ps = {w:.1} MHz", r.name),
            None => println!("{:<6} threshold not reached", r.name),
        }
        csv.row(&[
            r.name.into(),
            r.nuclear_spin.as_str().into(),
            r.a_mhz.into(),
            r.q_mhz.into(),
            r.threshold.into(),
            r.min_omega_ps_mhz.unwrap_or(f64::NAN).into(),
        ]);
    }
    let mut b = Bundle::default();
    b.add("isotopes.csv", csv.into_bytes());
    b.add_json("isotopes.json", &IsotopeRecord { config_hash: cfg.hash(), rows, scaled_sr87 });
    Ok(b)
}

