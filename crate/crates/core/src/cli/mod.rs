//! Command-line front end. [`run`] takes the arguments and output streams
//! so it can be driven from tests; the binary is a thin wrapper.
//!
//! Exit codes: 0 success, 1 computational failure, 2 usage error.

pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::dynamics::{
    estimate_growth_rate, estimate_spectrum, integrate_truncated, linear_window, max_residual, propagate_exact,
    residual_eom, DynamicsError, ExactConfig, SeedHistory, Trajectory, TrajectoryMeta,
};
use crate::model::{electron_size, lorentz_gamma, KinematicState, ModelScales, PhysicalConstants, CONSTANTS_ENV};
use crate::potential::{duffing_energy_scale, duffing_force, duffing_potential, sample, self_potential_partial_sums};
use crate::roots::{find_roots, real_unstable_root, render_domain_coloring, CharEq, Region};
use crate::series::verify_identities;

#[derive(Debug, Parser)]
#[command(name = "zitterlab", version, about = "Numerics for the extended-charge dumbbell electron (units c = d = 1)")]
#[command(after_help = format!("Physical constants come from --constants or the file named by {CONSTANTS_ENV}; CODATA 2018 otherwise."))]
pub struct Cli {
    /// Constants file (key = value lines: c, hbar, alpha, eps0, m_electron, d_override).
    #[arg(long, global = true, value_name = "FILE")]
    pub constants: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Roots of the characteristic equation in a rectangle, as CSV re,im,residual.
    Roots(RootsArgs),
    /// Domain-coloring image of the characteristic function (binary PPM).
    Render(RenderArgs),
    /// Propagate the equation of motion from a seed history.
    Simulate(SimulateArgs),
    /// Check the series coefficient identities in exact arithmetic.
    SeriesVerify,
    /// Self-potential at a state, or the conservative double-well curve.
    Potential(PotentialArgs),
    /// Run every reproduction check and print JSON lines.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct RootsArgs {
    /// Velocity in units of c.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub beta: f64,
    /// Search rectangle x0,x1,y0,y1.
    #[arg(long, default_value = "-1,3,-1,1", allow_hyphen_values = true, value_parser = parse_region)]
    pub region: Region,
    /// Newton seeds per unit length along each axis.
    #[arg(long, default_value_t = 10.0)]
    pub grid: f64,
    /// Output file (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub beta: f64,
    /// Rectangle x0,x1,y0,y1.
    #[arg(long, default_value = "-10,10,-100,100", allow_hyphen_values = true, value_parser = parse_region)]
    pub region: Region,
    /// Image size WxH in pixels.
    #[arg(long, default_value = "400x800", value_parser = parse_size)]
    pub size: (usize, usize),
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeedArg {
    /// Rest with an acceleration bump in the last unit of history.
    #[value(name = "rest_kick")]
    RestKick,
    /// Rest with a kick along the real growing mode.
    #[value(name = "mode_kick")]
    ModeKick,
    /// Uniform motion at --beta, kicked along its growing mode by --amp.
    Uniform,
    /// History read from --table (CSV t,x,beta,beta_dot on the --dt grid).
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IntegratorArg {
    /// The full delay equation.
    Exact,
    /// Fourth-order Runge-Kutta on the truncated third-order model, from
    /// beta = --beta, beta_dot = --amp.
    Truncated,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value_t = SeedArg::RestKick)]
    pub seed: SeedArg,
    /// Kick amplitude.
    #[arg(long, default_value_t = 1e-6, allow_negative_numbers = true)]
    pub amp: f64,
    /// Velocity of the uniform seed.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub beta: f64,
    /// End time in d/c.
    #[arg(long, default_value_t = 100.0)]
    pub tend: f64,
    /// Grid step in d/c.
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    /// Gaussian width in d/c of the local fits giving velocity and acceleration.
    #[arg(long, default_value_t = 0.05)]
    pub smoothing: f64,
    /// Polynomial degree of those fits.
    #[arg(long, default_value_t = 4)]
    pub fit_degree: usize,
    /// Stop when the equation-of-motion residual exceeds this (0 disables the audit).
    #[arg(long, default_value_t = 1e-6)]
    pub residual_tol: f64,
    #[arg(long, value_enum, default_value_t = IntegratorArg::Exact)]
    pub integrator: IntegratorArg,
    /// History table for --seed table.
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Trajectory CSV t,x,beta,beta_dot,residual (stdout when absent and no --report).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print JSON-line summaries: growth rate, saturation amplitude, spectral peaks.
    #[arg(long)]
    pub report: bool,
}

#[derive(Debug, Args)]
pub struct PotentialArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub beta: f64,
    /// Acceleration in c²/d.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub betadot: f64,
    /// Number of series partial sums to list (needs y < 1).
    #[arg(long)]
    pub series: Option<u32>,
    /// Energies in joules (lengths in metres for --duffing).
    #[arg(long)]
    pub si: bool,
    /// Tabulate the conservative double-well potential instead.
    #[arg(long)]
    pub duffing: bool,
    /// Range a,b of x in units of d for --duffing.
    #[arg(long, default_value = "-1.5,1.5", allow_hyphen_values = true, value_parser = parse_range)]
    pub range: (f64, f64),
    /// Number of samples for --duffing.
    #[arg(long, default_value_t = 301)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Only checks whose id starts with this prefix.
    #[arg(long)]
    pub only: Option<String>,
}

fn parse_list(s: &str, n: usize) -> Result<Vec<f64>, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    if v.len() != n {
        return Err(format!("expected {n} comma-separated numbers, got {}", v.len()));
    }
    Ok(v)
}

fn parse_region(s: &str) -> Result<Region, String> {
    let v = parse_list(s, 4)?;
    Region::new(v[0], v[1], v[2], v[3]).map_err(|e| e.to_string())
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let v = parse_list(s, 2)?;
    if !(v[0] < v[1]) {
        return Err("range must satisfy a < b".into());
    }
    Ok((v[0], v[1]))
}

fn parse_size(s: &str) -> Result<(usize, usize), String> {
    let (w, h) = s.split_once(['x', 'X']).ok_or("expected WxH")?;
    let w: usize = w.parse().map_err(|e| format!("width: {e}"))?;
    let h: usize = h.parse().map_err(|e| format!("height: {e}"))?;
    if w == 0 || h == 0 {
        return Err("size must be positive".into());
    }
    Ok((w, h))
}

/// 17 significant digits, `nan`/`inf` when not finite. Negative zero
/// prints as zero.
pub fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        format!("{:.16e}", x + 0.0)
    } else {
        format!("{x}").to_lowercase()
    }
}

/// As [`fmt_float`], with JSON `null` for non-finite values.
pub fn json_number(x: f64) -> String {
    if x.is_finite() {
        format!("{:.16e}", x + 0.0)
    } else {
        "null".into()
    }
}

fn json_str(s: &str) -> String {
    serde_json::Value::from(s).to_string()
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

fn constants(cli: &Cli) -> Result<PhysicalConstants, Failure> {
    Ok(match &cli.constants {
        Some(p) => PhysicalConstants::from_file(p)?,
        None => PhysicalConstants::from_env()?,
    })
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match &cli.command {
        Command::Roots(a) => cmd_roots(a, out),
        Command::Render(a) => cmd_render(a),
        Command::Simulate(a) => cmd_simulate(a, out, err),
        Command::SeriesVerify => cmd_series_verify(out),
        Command::Potential(a) => cmd_potential(a, &constants(cli)?, out),
        Command::Report(a) => cmd_report(a, &constants(cli)?, out, err),
    }
}

fn write_to(path: Option<&Path>, out: &mut dyn Write, bytes: &[u8]) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| Failure(format!("{}: {e}", p.display()))),
        None => Ok(out.write_all(bytes)?),
    }
}

fn cmd_roots(a: &RootsArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let eq = CharEq::new(a.beta)?;
    let set = find_roots(&eq, &a.region, a.grid)?;
    let mut s = String::from("re,im,residual\n");
    for r in &set.roots {
        s += &format!("{},{},{}\n", fmt_float(r.value.re), fmt_float(r.value.im), fmt_float(r.residual));
    }
    write_to(a.out.as_deref(), out, s.as_bytes())?;
    Ok(0)
}

fn cmd_render(a: &RenderArgs) -> Result<i32, Failure> {
    let eq = CharEq::new(a.beta)?;
    let img = render_domain_coloring(&eq, &a.region, a.size.0, a.size.1)?;
    write_to(Some(&a.out), &mut std::io::sink(), &img.to_ppm())?;
    Ok(0)
}

fn cmd_series_verify(out: &mut dyn Write) -> Result<i32, Failure> {
    let checks = verify_identities()?;
    for c in &checks {
        writeln!(out, "{} {} {}", if c.pass { "PASS" } else { "FAIL" }, c.id, c.coefficient)?;
    }
    Ok(if checks.iter().all(|c| c.pass) { 0 } else { 1 })
}

fn cmd_report(a: &ReportArgs, k: &PhysicalConstants, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let records = report::run_checks(k, a.only.as_deref());
    if records.is_empty() {
        return Err(Failure(format!("no check id starts with {:?}", a.only.as_deref().unwrap_or(""))));
    }
    for r in &records {
        writeln!(out, "{}", r.to_json_line())?;
        if let Some(e) = &r.error {
            writeln!(err, "{}: {e}", r.check_id)?;
        }
    }
    Ok(if records.iter().all(|r| r.pass) { 0 } else { 1 })
}

fn cmd_potential(a: &PotentialArgs, k: &PhysicalConstants, out: &mut dyn Write) -> Result<i32, Failure> {
    if a.duffing {
        if a.samples < 2 {
            return Err(Failure("--samples must be at least 2".into()));
        }
        let (xs, es) = if a.si { (electron_size(k), duffing_energy_scale(k)) } else { (1.0, 1.0) };
        let mut s = String::from("x,Qc,force\n");
        for i in 0..a.samples {
            let x = a.range.0 + (a.range.1 - a.range.0) * i as f64 / (a.samples - 1) as f64;
            s += &format!(
                "{},{},{}\n",
                fmt_float(x * xs),
                fmt_float(duffing_potential(x) * es),
                fmt_float(duffing_force(x) * es / xs)
            );
        }
        out.write_all(s.as_bytes())?;
        return Ok(0);
    }
    let st = KinematicState::moving(a.beta, a.betadot)?;
    let p = sample(&st)?;
    let scale = if a.si { ModelScales::new(k)?.rest_energy(k) } else { 1.0 };
    let sums = match a.series {
        Some(n) => self_potential_partial_sums(&st, n)?,
        None => Vec::new(),
    };
    let sums: Vec<String> = sums.iter().map(|v| json_number(v * scale)).collect();
    writeln!(
        out,
        "{{\"U\":{},\"Q\":{},\"gamma\":{},\"y\":{},\"partial_sums\":[{}],\"units\":{}}}",
        json_number(p.u * scale),
        json_number(p.q * scale),
        json_number(p.gamma),
        json_number(p.y),
        sums.join(","),
        json_str(if a.si { "J" } else { "m_e c^2" })
    )?;
    Ok(0)
}

fn read_table(path: &Path, dt: f64) -> Result<Trajectory, Failure> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?;
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.len() < 4 {
            return Err(Failure(format!("{} row {}: need t,x,beta,beta_dot", path.display(), i + 2)));
        }
        let mut row = [0.0; 4];
        for (k, v) in row.iter_mut().enumerate() {
            *v = rec[k].parse().map_err(|e| Failure(format!("{} row {}: {e}", path.display(), i + 2)))?;
        }
        rows.push(row);
    }
    let meta = TrajectoryMeta { integrator: "table".into(), step: dt, seed: path.display().to_string(), base_velocity: 0.0 };
    Ok(Trajectory::from_rows(&rows, meta)?)
}

fn cmd_simulate(a: &SimulateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let result = match a.integrator {
        IntegratorArg::Truncated => {
            let s0 = KinematicState::moving(a.beta, a.amp)?;
            integrate_truncated(&s0, a.tend, a.dt)
        }
        IntegratorArg::Exact => {
            let seed = match a.seed {
                SeedArg::RestKick => SeedHistory::rest_kick(a.amp),
                SeedArg::ModeKick => SeedHistory::mode_kick(a.amp),
                SeedArg::Uniform => SeedHistory::uniform(a.beta, a.amp),
                SeedArg::Table => {
                    let p = a.table.as_deref().ok_or(Failure("--seed table needs --table".into()))?;
                    SeedHistory::table(read_table(p, a.dt)?)
                }
            };
            let cfg = ExactConfig {
                dt: a.dt,
                t_end: a.tend,
                smoothing: a.smoothing,
                fit_degree: a.fit_degree,
                residual_tolerance: if a.residual_tol > 0.0 { a.residual_tol } else { f64::INFINITY },
            };
            propagate_exact(&seed, &cfg)
        }
    };
    let (traj, failure) = match result {
        Ok(t) => (t, None),
        Err(e) => match e.partial() {
            Some(p) => (p.clone(), Some(e)),
            None => return Err(e.into()),
        },
    };

    if a.out.is_some() || !a.report {
        let exact = a.integrator == IntegratorArg::Exact;
        write_to(a.out.as_deref(), out, trajectory_csv(&traj, exact).as_bytes())?;
    }
    if a.report {
        for line in simulate_report(&traj, a, failure.as_ref()) {
            writeln!(out, "{line}")?;
        }
    }
    match failure {
        Some(e) => {
            writeln!(err, "error: {e}; output stops at t = {}", fmt_float(traj.end()))?;
            Ok(1)
        }
        None => Ok(0),
    }
}

/// CSV with header; the residual column is empty where the light-cone
/// history is too short or the model is not the exact one.
pub fn trajectory_csv(traj: &Trajectory, residuals: bool) -> String {
    let mut s = String::with_capacity(traj.len() * 100);
    s.push_str("t,x,beta,beta_dot,residual\n");
    for i in 0..traj.len() {
        let t = traj.time(i);
        let r = if residuals { residual_eom(traj, t).ok() } else { None };
        s += &format!(
            "{},{},{},{},{}\n",
            fmt_float(t),
            fmt_float(traj.xs()[i]),
            fmt_float(traj.betas()[i]),
            fmt_float(traj.beta_dots()[i]),
            r.map(fmt_float).unwrap_or_default()
        );
    }
    s
}

fn simulate_report(traj: &Trajectory, a: &SimulateArgs, failure: Option<&DynamicsError>) -> Vec<String> {
    let mut lines = Vec::new();
    let (status, t_break) = match failure {
        None => ("completed", f64::NAN),
        Some(DynamicsError::ArrivalFold { t, .. }) => ("arrival_fold", *t),
        Some(DynamicsError::LightBarrier { t, .. }) => ("light_barrier", *t),
        Some(DynamicsError::ResidualExceeded { t, .. }) => ("residual_exceeded", *t),
        Some(_) => ("failed", f64::NAN),
    };
    lines.push(format!(
        "{{\"record\":\"run\",\"integrator\":{},\"seed\":{},\"status\":{},\"t_end\":{},\"t_reached\":{},\"breakdown_t\":{}}}",
        json_str(&traj.meta().integrator),
        json_str(&traj.meta().seed),
        json_str(status),
        json_number(a.tend),
        json_number(traj.end()),
        json_number(t_break)
    ));

    let kick = if a.amp != 0.0 { a.amp } else { 1e-6 };
    let predicted = lorentz_gamma(traj.base_velocity())
        .ok()
        .zip(real_unstable_root(0.0).ok())
        .map(|(g, l)| l / g)
        .unwrap_or(f64::NAN);
    let growth = linear_window(traj, kick).and_then(|w| estimate_growth_rate(traj, w).map(|g| (w, g)));
    lines.push(match growth {
        Ok((w, g)) => format!(
            "{{\"record\":\"growth_rate\",\"rate\":{},\"stderr\":{},\"window\":[{},{}],\"oscillatory\":{},\"rest_rate_over_gamma\":{}}}",
            json_number(g.rate),
            json_number(g.stderr),
            json_number(w.0),
            json_number(w.1),
            g.oscillatory,
            json_number(predicted)
        ),
        Err(e) => format!("{{\"record\":\"growth_rate\",\"error\":{}}}", json_str(&e.to_string())),
    });

    // Last quarter of the run (at least up to 20 d/c of it).
    let span = (traj.end() - traj.start().max(0.0)).max(0.0);
    let from = traj.end() - (0.25 * span).max(span.min(20.0));
    let base = traj.base_velocity();
    match traj.window(from, traj.end()) {
        Ok(w) => {
            let amp = w.betas().iter().map(|b| (b - base).abs()).fold(0.0, f64::max);
            lines.push(format!(
                "{{\"record\":\"saturation_amplitude\",\"value\":{},\"window\":[{},{}]}}",
                json_number(amp),
                json_number(w.start()),
                json_number(w.end())
            ));
            lines.push(match estimate_spectrum(traj, (w.start(), w.end())) {
                Ok(p) => format!(
                    "{{\"record\":\"peak_frequencies\",\"window\":[{},{}],\"peaks\":[{}]}}",
                    json_number(w.start()),
                    json_number(w.end()),
                    p.iter()
                        .map(|p| format!(
                            "{{\"frequency\":{},\"angular\":{},\"magnitude\":{}}}",
                            json_number(p.frequency),
                            json_number(p.angular),
                            json_number(p.magnitude)
                        ))
                        .collect::<Vec<_>>()
                        .join(",")
                ),
                Err(e) => format!("{{\"record\":\"peak_frequencies\",\"error\":{}}}", json_str(&e.to_string())),
            });
        }
        Err(e) => lines.push(format!("{{\"record\":\"saturation_amplitude\",\"error\":{}}}", json_str(&e.to_string()))),
    }
    if a.integrator == IntegratorArg::Exact {
        let r = max_residual(traj, traj.start() + 2.0 * lorentz_gamma(base).unwrap_or(1.0), 10);
        lines.push(match r {
            Ok(v) => format!("{{\"record\":\"max_residual\",\"value\":{},\"stride\":10}}", json_number(v)),
            Err(e) => format!("{{\"record\":\"max_residual\",\"error\":{}}}", json_str(&e.to_string())),
        });
    }
    lines
}
