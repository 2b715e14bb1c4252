//! `homodyne` command-line front end.
//!
//! Exit codes: 0 ok, 2 configuration error, 3 numerical budget exhausted,
//! 4 a convergence diagnostic failed.

use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use homodyne::convergence::{calibrate, characteristic_function, empirical_cf, lattice_counterexample};
use homodyne::homodyne::homodyne_distribution;
use homodyne::moments::{moment_report, DEFAULT_KMAX};
use homodyne::{HdError, SignalStateSpec, C64};
use serde::Serialize;

const CONVENTION: &str = "\
Outcomes are photon-count differences k = n_aux - n_signal (oscillator arm \
minus signal arm) after a balanced beam splitter, reported on the scaled \
axis x_k = k / (sqrt(2) r) where r is the oscillator amplitude. States are \
JSON: {\"type\":\"coherent\",\"beta\":[re,im]}, {\"type\":\"fock\",\"n\":k}, \
{\"type\":\"vector\",\"amps\":[[re,im],...]} or \
{\"type\":\"mixture\",\"components\":[{\"weight\":w,\"state\":...},...]}. \
HD_MAX_DIM caps the truncation dimension (default 4096).";

#[derive(Parser)]
#[command(name = "homodyne", version, about = "Balanced homodyne detection statistics and their high-amplitude limit", long_about = CONVENTION)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Outcome distribution of one state; prints a JSON summary.
    Simulate(SimulateArgs),
    /// Detector moments against quadrature moments.
    Moments(MomentsArgs),
    /// Convergence diagnostics for one state along an amplitude sweep.
    Converge(ConvergeArgs),
    /// Full calibration over a file of states; exits 4 unless every check passes.
    Calibrate(CalibrateArgs),
    /// Characteristic function of a coherent state, closed form against the lattice sum, as CSV.
    Charfunc(CharfuncArgs),
    /// Lattice mass under the detector and under the limit law.
    Counterexample(CounterexampleArgs),
}

#[derive(Args)]
struct Common {
    /// Oscillator phase in radians, reduced to [0, 2pi).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    theta: f64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct Kmax {
    /// Highest moment order.
    #[arg(long)]
    kmax: Option<u32>,
    /// Permit kmax above 8.
    #[arg(long)]
    allow_large_kmax: bool,
}

impl Kmax {
    fn resolve(&self, default: u32) -> Result<u32, Failure> {
        let k = self.kmax.unwrap_or(default);
        if k == 0 {
            return Err(Failure::config("kmax must be at least 1"));
        }
        if k > DEFAULT_KMAX && !self.allow_large_kmax {
            return Err(Failure::config(format!(
                "kmax {k} exceeds {DEFAULT_KMAX}; pass --allow-large-kmax to override"
            )));
        }
        Ok(k)
    }
}

#[derive(Args)]
struct SimulateArgs {
    /// Inline JSON state, or a path to a JSON file.
    #[arg(long)]
    state: String,
    /// Oscillator amplitude.
    #[arg(long)]
    r: f64,
    /// Also write the distribution as CSV (k,x,p) to this path.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct MomentsArgs {
    #[arg(long)]
    state: String,
    #[arg(long)]
    r: f64,
    #[command(flatten)]
    kmax: Kmax,
    /// Check the exponential moment bound at this exponent (coherent states only).
    #[arg(long)]
    exp_a: Option<f64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ConvergeArgs {
    #[arg(long)]
    state: String,
    /// Increasing amplitudes, comma separated (at least three).
    #[arg(long, default_value = "2,4,8")]
    r_list: String,
    #[command(flatten)]
    kmax: Kmax,
    /// Also write the moment table as CSV.
    #[arg(long)]
    moments_csv: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct CalibrateArgs {
    /// JSON file holding one state or an array of states.
    #[arg(long)]
    states: PathBuf,
    #[arg(long, default_value = "2,4,8")]
    r_list: String,
    #[command(flatten)]
    kmax: Kmax,
    #[arg(long)]
    moments_csv: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct CharfuncArgs {
    /// Coherent amplitude as re,im.
    #[arg(long, allow_hyphen_values = true)]
    beta: String,
    #[arg(long)]
    r: f64,
    /// Comma-separated arguments t.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "t_range")]
    t: Option<String>,
    /// Evenly spaced arguments as lo,hi,count.
    #[arg(long, allow_hyphen_values = true)]
    t_range: Option<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct CounterexampleArgs {
    /// One amplitude or a comma-separated sweep.
    #[arg(long)]
    r: String,
    /// State to measure; defaults to the vacuum.
    #[arg(long)]
    state: Option<String>,
    #[command(flatten)]
    common: Common,
}

/// Exit status and message for a failed run.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<HdError> for Failure {
    fn from(e: HdError) -> Self {
        let code = if e.is_budget() || matches!(e.root(), HdError::GridTooNarrow { .. }) { 3 } else { 2 };
        Failure { code, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Simulate(a) => simulate(a),
        Command::Moments(a) => moments(a),
        Command::Converge(a) => converge(a),
        Command::Calibrate(a) => calibrate_cmd(a),
        Command::Charfunc(a) => charfunc(a),
        Command::Counterexample(a) => counterexample(a),
    }
}

fn theta(c: &Common) -> Result<f64, Failure> {
    if !c.theta.is_finite() {
        return Err(Failure::config("theta must be finite"));
    }
    Ok(c.theta.rem_euclid(TAU))
}

fn amplitude(r: f64) -> Result<f64, Failure> {
    if r.is_finite() && r > 0.0 {
        Ok(r)
    } else {
        Err(Failure::config(format!("r must be positive, got {r}")))
    }
}

fn parse_list(text: &str, what: &str) -> Result<Vec<f64>, Failure> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Failure::config(format!("{what}: cannot parse {s:?} as a number")))
        })
        .collect()
}

fn parse_complex(text: &str) -> Result<C64, Failure> {
    match parse_list(text, "complex value")?.as_slice() {
        [re, im] => Ok(C64::new(*re, *im)),
        _ => Err(Failure::config(format!("complex value {text:?} must be re,im"))),
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::config(format!("{}: {e}", path.display())))
}

/// Inline JSON when the argument opens an object, otherwise a file path.
fn load_state(arg: &str) -> Result<SignalStateSpec, Failure> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        read_text(Path::new(arg))?
    };
    Ok(SignalStateSpec::from_json(&text)?)
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(p) => write_file(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure { code: 1, message: format!("{}: {e}", path.display()) })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct SimulateSummary {
    state: String,
    r: f64,
    theta: f64,
    spacing: f64,
    kmin: i64,
    kmax: i64,
    mean: f64,
    variance: f64,
    total_mass: f64,
    deficit: f64,
}

fn simulate(a: SimulateArgs) -> Result<u8, Failure> {
    let state = load_state(&a.state)?;
    let theta = theta(&a.common)?;
    let dist = homodyne_distribution(&state, amplitude(a.r)?, theta)?;
    if let Some(p) = &a.csv {
        write_file(p, &dist.to_csv())?;
    }
    let summary = SimulateSummary {
        state: state.to_string(),
        r: dist.r,
        theta,
        spacing: dist.spacing,
        kmin: dist.kmin,
        kmax: dist.kmax,
        mean: dist.mean(),
        variance: dist.variance(),
        total_mass: dist.total_mass(),
        deficit: dist.deficit,
    };
    emit(&to_json(&summary), a.common.output.as_deref())?;
    Ok(0)
}

fn moments(a: MomentsArgs) -> Result<u8, Failure> {
    let state = load_state(&a.state)?;
    let kmax = a.kmax.resolve(4)?;
    if let Some(x) = a.exp_a {
        if !(x.is_finite() && x > 0.0) {
            return Err(Failure::config(format!("--exp-a must be positive, got {x}")));
        }
        if state.coherent_amplitude().is_none() {
            return Err(Failure::config("--exp-a needs a coherent state"));
        }
    }
    let report = moment_report(&state, amplitude(a.r)?, theta(&a.common)?, kmax, a.exp_a)?;
    emit(&to_json(&report), a.common.output.as_deref())?;
    Ok(0)
}

fn r_list(text: &str) -> Result<Vec<f64>, Failure> {
    let list = parse_list(text, "r list")?;
    for &r in &list {
        amplitude(r)?;
    }
    Ok(list)
}

fn sweep(states: &[SignalStateSpec], r_text: &str, kmax: &Kmax, common: &Common, csv: Option<&Path>) -> Result<u8, Failure> {
    let report = calibrate(states, theta(common)?, &r_list(r_text)?, kmax.resolve(6)?)?;
    if let Some(p) = csv {
        write_file(p, &report.moment_csv())?;
    }
    emit(&to_json(&report), common.output.as_deref())?;
    if !report.all_pass {
        eprintln!("diagnostics did not all pass");
        return Ok(4);
    }
    Ok(0)
}

fn converge(a: ConvergeArgs) -> Result<u8, Failure> {
    let state = load_state(&a.state)?;
    sweep(&[state], &a.r_list, &a.kmax, &a.common, a.moments_csv.as_deref())
}

fn calibrate_cmd(a: CalibrateArgs) -> Result<u8, Failure> {
    let states = SignalStateSpec::list_from_json(&read_text(&a.states)?)?;
    sweep(&states, &a.r_list, &a.kmax, &a.common, a.moments_csv.as_deref())
}

fn charfunc(a: CharfuncArgs) -> Result<u8, Failure> {
    let beta = parse_complex(&a.beta)?;
    let r = amplitude(a.r)?;
    let theta = theta(&a.common)?;
    let ts = match (&a.t, &a.t_range) {
        (Some(t), None) => parse_list(t, "t")?,
        (None, Some(range)) => match parse_list(range, "t range")?.as_slice() {
            &[lo, hi, n] if n >= 2.0 && n.fract() == 0.0 && lo < hi => {
                let n = n as usize;
                (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
            }
            _ => return Err(Failure::config("--t-range must be lo,hi,count with lo < hi and count >= 2")),
        },
        _ => return Err(Failure::config("give --t or --t-range")),
    };
    if ts.iter().any(|t| !t.is_finite()) {
        return Err(Failure::config("t values must be finite"));
    }
    let dist = homodyne_distribution(&SignalStateSpec::coherent(beta)?, r, theta)?;
    let mut out = String::from("t,re_closed,im_closed,re_empirical,im_empirical\n");
    for t in ts {
        let c = characteristic_function(beta, r, theta, t);
        let e = empirical_cf(&dist, t);
        let _ = writeln!(out, "{t},{},{},{},{}", c.re, c.im, e.re, e.im);
    }
    emit(&out, a.common.output.as_deref())?;
    Ok(0)
}

#[derive(Serialize)]
struct SingleCounterexample {
    state: String,
    r: f64,
    #[serde(rename = "lattice_mass_E")]
    lattice_mass_e: f64,
    #[serde(rename = "lattice_mass_Q")]
    lattice_mass_q: f64,
    converges_on_lattice: bool,
}

fn counterexample(a: CounterexampleArgs) -> Result<u8, Failure> {
    let state = match &a.state {
        Some(s) => load_state(s)?,
        None => SignalStateSpec::fock(0)?,
    };
    let rs = r_list(&a.r)?;
    let c = lattice_counterexample(&state, theta(&a.common)?, &rs)?;
    let text = if rs.len() == 1 {
        to_json(&SingleCounterexample {
            state: state.to_string(),
            r: rs[0],
            lattice_mass_e: c.lattice_mass_e[0],
            lattice_mass_q: c.lattice_mass_q[0],
            converges_on_lattice: c.converges_on_lattice,
        })
    } else {
        to_json(&c)
    };
    emit(&text, a.common.output.as_deref())?;
    Ok(0)
}
