//! Command-line front end: coefficient tables with reference checks, energy
//! records, the rescaled-energy scan and Gaussian scattering curves, as JSON
//! or CSV.

mod output;

use crate::coeffs::{
    alpha2_1, alpha2_12, alpha3_2_analytic, alpha3_3, alpha4_1_sum, alpha4_2_sum, alpha4_3_analytic, alpha5_3_analytic,
    beta2_2, beta2_2_asymptotic, beta2_3_direct, beta2_3_factorized, beta3_3_direct, beta3_3_factorized, grid_with_max,
    ConvergentSet, RegulatorSpec, Scheme, DEFAULT_GRID,
};
use crate::energies::{
    coefficient_table, counterterm, interaction_energies, rescaled_u, TrapContext, ATOMIC_MASS_UNIT,
};
use crate::error::{Error, Result};
use crate::scatter::{default_k_grid, fit_effective_range, tune_depth};
use crate::wick::third_order_prefactors;
use clap::{Parser, Subcommand, ValueEnum};
use output::{num, Cell, Report};
use rayon::prelude::*;
use serde_json::{json, Value};
use std::ffi::OsString;
use std::path::PathBuf;

/// Version tag written into every JSON document.
pub const SCHEMA_VERSION: &str = "1.0";

/// Exit status: success.
pub const EXIT_OK: i32 = 0;
/// Exit status: internal or numerical failure.
pub const EXIT_INTERNAL: i32 = 1;
/// Exit status: a computed value missed its reference tolerance.
pub const EXIT_TOLERANCE: i32 = 2;
/// Exit status: invalid command line.
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Hard,
    Exponential,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Hard => Scheme::HardCutoff,
            SchemeArg::Exponential => Scheme::Exponential,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "mbtrap", version, about = "Effective multi-body interactions of trapped bosons")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Output format; tables and scans default to csv, records to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Significant digits in CSV output.
    #[arg(long, global = true, default_value_t = 17, value_parser = clap::value_parser!(u8).range(1..=17))]
    pub precision: u8,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coefficients c_m^(n) of the effective interactions at omega0 = 0.
    Table1 {
        /// Recompute alpha3_3 on the default cutoff grid instead of using the stored value.
        #[arg(long)]
        recompute_alpha33: bool,
    },
    /// The alpha and beta coefficients.
    Table2 {
        /// Largest cutoff omega_c/omega of the alpha3_3 extrapolation grid.
        #[arg(long)]
        cutoff_max: Option<f64>,
        /// Exponential cutoff omega_c/omega at which the beta sums are shown.
        #[arg(long, default_value_t = 200.0)]
        beta_cutoff: f64,
    },
    /// U2, U3, U4 and the N-boson energy at one trap frequency.
    Energies {
        /// omega/omega0; "inf" for omega0 = 0.
        #[arg(long, default_value_t = f64::INFINITY)]
        omega_ratio: f64,
        /// a_t(omega0)/sigma(omega).
        #[arg(long, allow_hyphen_values = true)]
        xi: Option<f64>,
        /// r_eff/sigma(omega).
        #[arg(long, allow_hyphen_values = true)]
        reff_ratio: Option<f64>,
        /// Number of bosons.
        #[arg(long = "N", visible_alias = "n", default_value_t = 3)]
        n: u64,
        /// Regulator used for the counterterm.
        #[arg(long, value_enum, default_value_t = SchemeArg::Exponential)]
        scheme: SchemeArg,
        /// Regulator cutoff omega_c/omega.
        #[arg(long, default_value_t = 200.0)]
        cutoff: f64,
        /// Use 87Rb (a_t = 5.3 nm, r_eff = 7.9 nm) and report energies in Hz.
        #[arg(long)]
        rubidium87: bool,
        /// Trap frequency omega/2pi in Hz; only with --rubidium87.
        #[arg(long)]
        trap_hz: Option<f64>,
    },
    /// Rescaled energies against omega/omega_s for fixed a_t(0) and r_eff = 0.
    ScanFig1 {
        /// Explicit comma-separated omega/omega_s values.
        #[arg(long, value_delimiter = ',', conflicts_with_all = ["w_max", "points"])]
        grid: Option<Vec<f64>>,
        /// Largest omega/omega_s of the uniform grid starting at 0.
        #[arg(long, default_value_t = 0.01)]
        w_max: f64,
        /// Number of intervals of the uniform grid.
        #[arg(long, default_value_t = 100)]
        points: usize,
    },
    /// Tuned Gaussian potentials and their effective ranges; lengths in sigma.
    Scatter {
        /// Gaussian width r0/sigma.
        #[arg(long, default_value_t = 0.01)]
        r0: f64,
        /// Target scattering lengths: "start:stop:count" or a comma-separated list.
        #[arg(long, default_value = "-0.02:0.02:11", allow_hyphen_values = true)]
        a_grid: String,
    },
    /// Exact integer prefactors of every coefficient in U_m through third order.
    Prefactors,
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit status.
pub fn run<I: IntoIterator<Item = OsString>>(args: I) -> i32 {
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cfg) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            EXIT_INTERNAL
        }
    }
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

fn execute(cfg: &RunConfig) -> std::result::Result<i32, Failure> {
    let (report, pass) = match &cfg.command {
        Command::Table1 { recompute_alpha33 } => table1(*recompute_alpha33)?,
        Command::Table2 { cutoff_max, beta_cutoff } => table2(*cutoff_max, *beta_cutoff)?,
        Command::Energies { omega_ratio, xi, reff_ratio, n, scheme, cutoff, rubidium87, trap_hz } => {
            let inputs = EnergyInputs {
                omega_ratio: *omega_ratio,
                xi: *xi,
                reff_ratio: *reff_ratio,
                n: *n,
                scheme: (*scheme).into(),
                cutoff: *cutoff,
                rubidium87: *rubidium87,
                trap_hz: *trap_hz,
            };
            (energies(&inputs)?, true)
        }
        Command::ScanFig1 { grid, w_max, points } => {
            let grid = match grid {
                Some(g) => g.clone(),
                None => uniform(0.0, *w_max, *points + 1).map_err(Failure::Usage)?,
            };
            (scan_fig1(&grid)?, true)
        }
        Command::Scatter { r0, a_grid } => {
            let grid = parse_grid(a_grid).map_err(Failure::Usage)?;
            (scatter(*r0, &grid)?, true)
        }
        Command::Prefactors => (prefactors()?, true),
    };
    let format = cfg.format.unwrap_or(report.default_format);
    let text = match format {
        Format::Json => report.to_json().map_err(|e| e.to_string()),
        Format::Csv => report.to_csv(cfg.precision as usize).map_err(|e| e.to_string()),
    }
    .map_err(Failure::Internal)?;
    match &cfg.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Internal(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(if pass { EXIT_OK } else { EXIT_TOLERANCE })
}

fn uniform(start: f64, stop: f64, count: usize) -> std::result::Result<Vec<f64>, String> {
    if count < 2 || !start.is_finite() || !stop.is_finite() {
        return Err("a uniform grid needs finite ends and at least two points".into());
    }
    let d = (count - 1) as f64;
    Ok((0..count).map(|i| start * ((count - 1 - i) as f64 / d) + stop * (i as f64 / d)).collect())
}

/// "start:stop:count" or "x1,x2,...".
pub fn parse_grid(s: &str) -> std::result::Result<Vec<f64>, String> {
    let bad = |p: &str| format!("cannot parse grid value {p:?}");
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("grid {s:?} must be start:stop:count"));
        }
        let start: f64 = parts[0].trim().parse().map_err(|_| bad(parts[0]))?;
        let stop: f64 = parts[1].trim().parse().map_err(|_| bad(parts[1]))?;
        let count: usize = parts[2].trim().parse().map_err(|_| bad(parts[2]))?;
        uniform(start, stop, count)
    } else {
        s.split(',').map(|p| p.trim().parse::<f64>().map_err(|_| bad(p))).collect()
    }
}

// ---------------------------------------------------------------------------
// Coefficient tables

struct CheckRow {
    name: &'static str,
    value: f64,
    uncertainty: f64,
    method: &'static str,
    reference: f64,
    /// NaN marks an informational row without a pass criterion.
    tolerance: f64,
}

impl CheckRow {
    fn status(&self) -> &'static str {
        if self.tolerance.is_nan() {
            "INFO"
        } else if (self.value - self.reference).abs() <= self.tolerance {
            "PASS"
        } else {
            "FAIL"
        }
    }
}

fn check_report(command: &'static str, rows: &[CheckRow], extra: Value) -> (Report, bool) {
    let pass = rows.iter().all(|r| r.status() != "FAIL");
    let json_rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "name": r.name,
                "value": num(r.value),
                "uncertainty": num(r.uncertainty),
                "method": r.method,
                "reference": num(r.reference),
                "tolerance": num(r.tolerance),
                "status": r.status(),
            })
        })
        .collect();
    let mut body = json!({ "rows": json_rows, "pass": pass });
    if let (Value::Object(b), Value::Object(e)) = (&mut body, extra) {
        b.extend(e);
    }
    let header = ["name", "value", "uncertainty", "method", "reference", "tolerance", "status"];
    let csv_rows = rows
        .iter()
        .map(|r| {
            vec![
                Cell::Text(r.name.into()),
                Cell::Num(r.value),
                Cell::Num(r.uncertainty),
                Cell::Text(r.method.into()),
                Cell::Num(r.reference),
                Cell::Num(r.tolerance),
                Cell::Text(r.status().into()),
            ]
        })
        .collect();
    (Report::new(command, Format::Csv, body, &header, csv_rows), pass)
}

fn table1(recompute: bool) -> Result<(Report, bool)> {
    let (set, source) = if recompute {
        (ConvergentSet::evaluate(&alpha3_3(&DEFAULT_GRID)?.coefficient)?, "recomputed")
    } else {
        (ConvergentSet::reference()?, "stored")
    };
    let t = coefficient_table(1.0, 0.0, &set)?;
    let equal = coefficient_table(1.0, 1.0, &set)?;
    let row = |name, value, uncertainty, method, reference, tolerance| CheckRow {
        name,
        value,
        uncertainty,
        method,
        reference,
        tolerance,
    };
    let rows = [
        row("c2_1", t.c2_1, 0.0, "analytic", 0.79788, 1e-5),
        row("c2_2", t.c2_2, 0.0, "analytic", 0.19535, 1e-5),
        row("c2_3", t.c2_3, 0.0, "analytic", -0.39112, 1e-5),
        row("d2_12", t.d2_12, 0.0, "analytic", 0.59841, 1e-5),
        row("c3_2", t.c3_2, 0.0, "analytic", -0.85576, 1e-5),
        row("c3_3", t.c3_3, t.c3_3_uncertainty, "extrapolated", 2.7921, 2e-4),
        row("c4_3", t.c4_3, 0.0, "direct_sum", 2.43317, 1e-4),
        row("c3_3(omega,omega)", equal.c3_3, equal.c3_3_uncertainty, "extrapolated", 3.2112, 2e-4),
    ];
    Ok(check_report("table1", &rows, json!({ "alpha3_3_source": source })))
}

fn table2(cutoff_max: Option<f64>, beta_cutoff: f64) -> Result<(Report, bool)> {
    let grid = match cutoff_max {
        Some(r) => grid_with_max(r)?,
        None => DEFAULT_GRID.to_vec(),
    };
    let a33 = alpha3_3(&grid)?;
    let hard80 = RegulatorSpec::hard(80.0)?;
    let exp = RegulatorSpec::exponential(beta_cutoff)?;
    let b23 = beta2_3_factorized(&exp);
    let b33 = beta3_3_factorized(&exp);
    let row = |name, value, uncertainty, method, reference, tolerance| CheckRow {
        name,
        value,
        uncertainty,
        method,
        reference,
        tolerance,
    };
    let c = &a33.coefficient;
    let rows = [
        row("alpha2_1", alpha2_1(), 0.0, "analytic", 0.797885, 1e-6),
        row("alpha3_2", alpha3_2_analytic(), 0.0, "analytic", 0.142626, 1e-6),
        row("alpha3_3", c.value, c.uncertainty, "extrapolated", 0.56494, 1e-5 + c.uncertainty),
        row("alpha4_1", alpha4_1_sum(&hard80), 0.0, "direct_sum", 0.077465, 1e-6),
        row("alpha4_2", alpha4_2_sum(&hard80), 0.0, "direct_sum", 0.051099, 1e-6),
        row("alpha4_3", alpha4_3_analytic(), 0.0, "analytic", 0.438946, 1e-6),
        row("alpha5_3", alpha5_3_analytic()?, 0.0, "analytic", 0.051916, 1e-6),
        row("alpha2_12", alpha2_12(), 0.0, "analytic", 0.598413, 1e-6),
        row(
            "alpha4_3(extrapolated)",
            a33.extrapolation.calibration_fit.intercept,
            0.0,
            "extrapolated",
            alpha4_3_analytic(),
            1e-4,
        ),
        row("beta2_2", beta2_2(&exp), 0.0, "direct_sum", beta2_2_asymptotic(beta_cutoff), f64::NAN),
        row("beta2_3", beta2_3_direct(&exp), 0.0, "direct_sum", b23, 1e-10 * b23.abs()),
        row("beta3_3", beta3_3_direct(&exp), 0.0, "direct_sum", b33, 1e-10 * b33.abs()),
    ];
    let extra = json!({
        "alpha3_3_grid": a33.grid.iter().map(|&x| num(x)).collect::<Vec<_>>(),
        "alpha3_3_partial_sums": a33.partial_sums.iter().map(|&x| num(x)).collect::<Vec<_>>(),
        "beta_regulator": regulator_json(&exp),
    });
    Ok(check_report("table2", &rows, extra))
}

fn regulator_json(r: &RegulatorSpec) -> Value {
    let scheme = match r.scheme {
        Scheme::HardCutoff => "hard",
        Scheme::Exponential => "exponential",
    };
    json!({ "scheme": scheme, "cutoff_ratio": num(r.cutoff_ratio) })
}

// ---------------------------------------------------------------------------
// Energies

/// 87Rb preset: mass in u, scattering length and effective range in m.
const RB87_MASS_U: f64 = 86.909_180_5;
const RB87_A: f64 = 5.3e-9;
const RB87_REFF: f64 = 7.9e-9;

struct EnergyInputs {
    omega_ratio: f64,
    xi: Option<f64>,
    reff_ratio: Option<f64>,
    n: u64,
    scheme: Scheme,
    cutoff: f64,
    rubidium87: bool,
    trap_hz: Option<f64>,
}

fn breakdown_json(b: &crate::energies::OrderBreakdown) -> Value {
    json!({
        "first": num(b.first),
        "second": num(b.second),
        "third": num(b.third),
        "effective_range": num(b.effective_range),
        "total": num(b.total()),
    })
}

fn energies(inp: &EnergyInputs) -> std::result::Result<Report, Failure> {
    if !(inp.omega_ratio > 0.0) {
        return Err(Failure::Usage(format!("--omega-ratio must be positive, got {}", inp.omega_ratio)));
    }
    let reg = RegulatorSpec::new(inp.scheme, inp.cutoff).map_err(|e| Failure::Usage(e.to_string()))?;
    let set = ConvergentSet::reference()?;
    let ctx = if inp.rubidium87 {
        if inp.xi.is_some() || inp.reff_ratio.is_some() {
            return Err(Failure::Usage("--rubidium87 fixes --xi and --reff-ratio; omit them".into()));
        }
        let hz = inp.trap_hz.unwrap_or(1e4);
        if !(hz > 0.0) || !hz.is_finite() {
            return Err(Failure::Usage(format!("--trap-hz must be positive, got {hz}")));
        }
        let omega = 2.0 * std::f64::consts::PI * hz;
        TrapContext::new(omega, omega / inp.omega_ratio, RB87_A, RB87_REFF, RB87_MASS_U * ATOMIC_MASS_UNIT, reg, set)?
    } else {
        if inp.trap_hz.is_some() {
            return Err(Failure::Usage("--trap-hz needs --rubidium87".into()));
        }
        TrapContext::dimensionless(inp.omega_ratio, inp.xi.unwrap_or(0.05), inp.reff_ratio.unwrap_or(0.0), reg, set)?
    };
    let e = interaction_energies(&ctx)?;
    let table = coefficient_table(ctx.omega, ctx.omega0, &ctx.coefficients)?;
    let (u2, u3, u4) = (e.u2.total(), e.u3.total(), e.u4.total());
    let total = crate::energies::energy_from_u(inp.n, u2, u3, u4);
    let ct = if ctx.omega0 > 0.0 {
        let scale = (ctx.omega / ctx.omega0).sqrt();
        let c = counterterm(ctx.xi() / scale, ctx.reff_ratio() / scale, 3, &reg.rescaled(ctx.omega0_ratio())?, &set)?;
        json!({
            "order": c.order,
            "units": "sigma(omega0)",
            "value": num(c.value),
            "second_order": num(c.second_order),
            "a_bare": num(c.a_bare),
        })
    } else {
        Value::Null
    };
    let physical = if inp.rubidium87 {
        let hz = ctx.omega / (2.0 * std::f64::consts::PI);
        json!({
            "trap_hz": num(hz),
            "omega_s_hz": num(ctx.omega_s()? / (2.0 * std::f64::consts::PI)),
            "u2_hz": num(u2 * hz),
            "u3_hz": num(u3 * hz),
            "u4_hz": num(u4 * hz),
            "energy_hz": num(total * hz),
        })
    } else {
        Value::Null
    };
    let body = json!({
        "inputs": {
            "omega_ratio": num(inp.omega_ratio),
            "xi": num(ctx.xi()),
            "reff_ratio": num(ctx.reff_ratio()),
            "n": inp.n,
            "preset": if inp.rubidium87 { "rubidium87" } else { "dimensionless" },
        },
        "regulator": regulator_json(&reg),
        "coefficients": {
            "c2_1": num(table.c2_1),
            "c2_2": num(table.c2_2),
            "c2_3": num(table.c2_3),
            "d2_12": num(table.d2_12),
            "c3_2": num(table.c3_2),
            "c3_3": num(table.c3_3),
            "c3_3_uncertainty": num(table.c3_3_uncertainty),
            "c4_3": num(table.c4_3),
        },
        "u2": breakdown_json(&e.u2),
        "u3": breakdown_json(&e.u3),
        "u4": breakdown_json(&e.u4),
        "total_energy": num(total),
        "interaction_energy": num(total - 1.5 * inp.n as f64),
        "counterterm": ct,
        "physical": physical,
        "warnings": e.warnings,
    });
    let header = ["quantity", "value"];
    let mut rows = vec![
        vec![Cell::Text("xi".into()), Cell::Num(ctx.xi())],
        vec![Cell::Text("reff_ratio".into()), Cell::Num(ctx.reff_ratio())],
    ];
    for (name, b) in [("u2", &e.u2), ("u3", &e.u3), ("u4", &e.u4)] {
        for (part, v) in [
            ("first", b.first),
            ("second", b.second),
            ("third", b.third),
            ("effective_range", b.effective_range),
            ("total", b.total()),
        ] {
            rows.push(vec![Cell::Text(format!("{name}.{part}")), Cell::Num(v)]);
        }
    }
    rows.push(vec![Cell::Text("total_energy".into()), Cell::Num(total)]);
    Ok(Report::new("energies", Format::Json, body, &header, rows))
}

// ---------------------------------------------------------------------------
// Scans

fn scan_fig1(grid: &[f64]) -> Result<Report> {
    let set = ConvergentSet::reference()?;
    let ctx = TrapContext::dimensionless(f64::INFINITY, 1.0, 0.0, RegulatorSpec::exponential(200.0)?, set)?;
    let r = rescaled_u(&ctx)?;
    let points: Vec<_> = grid.iter().map(|&w| r.at(w)).collect::<Result<_>>()?;
    let header = ["omega_over_omegas", "U2t_1", "U2t_23", "U3t_2", "U3t_23", "U4t_3", "U2exact_minus_U2t1"];
    let rows: Vec<Vec<Cell>> = points
        .iter()
        .map(|p| {
            [p.omega_over_omegas, p.u2t_1, p.u2t_23, p.u3t_2, p.u3t_23, p.u4t_3, p.u2exact_minus_u2t1]
                .into_iter()
                .map(Cell::Num)
                .collect()
        })
        .collect();
    let body = json!({
        "rubidium87_omega_s_hz": num(crate::energies::rubidium87_omega_s() / (2.0 * std::f64::consts::PI)),
    });
    Ok(Report::new("scan-fig1", Format::Csv, body, &header, rows).with_table_in_json())
}

fn scatter(r0: f64, a_grid: &[f64]) -> std::result::Result<Report, Failure> {
    if !(r0 > 0.0) || !r0.is_finite() {
        return Err(Failure::Usage(format!("--r0 must be positive, got {r0}")));
    }
    let rows: Vec<Vec<Cell>> = a_grid
        .par_iter()
        .map(|&a| {
            let res = tune_depth(a, r0).and_then(|p| fit_effective_range(&p, &default_k_grid(r0, a)).map(|e| (p, e)));
            match res {
                Ok((p, e)) => vec![
                    Cell::Num(a),
                    Cell::Num(e.a0),
                    Cell::Num(p.v0),
                    Cell::Num(e.r_eff),
                    Cell::Num(e.volume),
                    Cell::Text("ok".into()),
                ],
                Err(err) => {
                    let mut row = vec![Cell::Num(a)];
                    row.extend((0..4).map(|_| Cell::Num(f64::NAN)));
                    row.push(Cell::Text(err.to_string()));
                    row
                }
            }
        })
        .collect();
    let header = ["a_target", "a0", "V0", "r_eff", "volume", "status"];
    let body = json!({ "r0": num(r0), "units": "lengths in sigma, V0 in hbar*omega" });
    Ok(Report::new("scatter", Format::Csv, body, &header, rows).with_table_in_json())
}

fn prefactors() -> Result<Report> {
    let t = third_order_prefactors()?;
    let header = ["contribution", "coefficient", "factor", "m", "prefactor", "wick_terms"];
    let rows = t
        .entries
        .iter()
        .map(|e| {
            vec![
                Cell::Text(
                    serde_json::to_value(e.contribution)
                        .ok()
                        .and_then(|v| v.as_str().map(String::from))
                        .unwrap_or_default(),
                ),
                Cell::Text(e.coefficient.clone()),
                Cell::Text(e.factor.into()),
                Cell::Text(e.m.to_string()),
                Cell::Text(e.prefactor.to_string()),
                Cell::Text(e.wick_terms.to_string()),
            ]
        })
        .collect();
    Ok(Report::new("prefactors", Format::Json, json!({}), &header, rows).with_table_in_json())
}
