//! Command-line front end.
//!
//! Every subcommand flag may also come from a JSON config file
//! (`--config path`); flags given on the command line win. The config is
//! either a flat object of flag names, or an object keyed by subcommand.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::estimator::{
    reconstruct, EstimateOptions, DEFAULT_CONFIDENCE, DEFAULT_JACKKNIFE_BLOCKS, DEFAULT_RESAMPLES, DEFAULT_TOLERANCE_SIGMAS,
};
use crate::fock::{
    build_single, build_single_auto, build_two_mode, build_two_mode_auto, g2_oracle, ModePartition, TruncatedState,
};
use crate::g2::{
    alpha_min_pi, alpha_threshold, alpha_threshold_two_mode_symmetric, g2_single_closed_form, g2_single_state,
    g2_two_mode_state, G2Result,
};
use crate::gaussian::{normalize_angle, SingleModeState, SqueezingParam, TwoModeState};
use crate::homodyne::{simulate_trace, HomodyneTrace, PhaseSchedule, PhaseSetting, DEFAULT_SAMPLES_PER_PHASE};
use crate::scan::{run_scan, ScanMode, ScanSpec, Sweep};

const SUBCOMMANDS: [&str; 6] = ["g2", "threshold", "scan", "simulate", "estimate", "oracle"];

#[derive(Debug, Parser)]
#[command(name = "homodyne-g2", version, about = "g2(0) of Gaussian states from covariance matrices and homodyne data")]
pub struct Cli {
    /// JSON file with default flag values
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// g2(0) from the closed form and from the moment pipeline
    G2(G2Args),
    /// Coherent-amplitude threshold for g2(0) = 1
    Threshold(ThresholdArgs),
    /// Sweep parameters and write a CSV table
    Scan(ScanArgs),
    /// Simulate a homodyne trace
    Simulate(SimulateArgs),
    /// Reconstruct moments and g2(0) from a trace
    Estimate(EstimateArgs),
    /// Compare closed forms with a truncated Fock-space computation
    Oracle(OracleArgs),
}

/// Parses a real number or a multiple of pi: `pi`, `-pi/4`, `3pi/4`, `0.5*pi`.
pub fn parse_angle(text: &str) -> std::result::Result<f64, String> {
    let s = text.trim().to_ascii_lowercase();
    let Some(pos) = s.find("pi") else {
        return parse_real(&s);
    };
    let (head, tail) = (&s[..pos], &s[pos + 2..]);
    let head = head.strip_suffix('*').unwrap_or(head);
    let coef = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => parse_real(h)?,
    };
    let divisor = match tail {
        "" => 1.0,
        t => match t.strip_prefix('/') {
            Some(d) => parse_real(d)?,
            None => return Err(format!("cannot parse angle '{text}'")),
        },
    };
    if divisor == 0.0 {
        return Err(format!("division by zero in angle '{text}'"));
    }
    Ok(coef * std::f64::consts::PI / divisor)
}

fn parse_real(text: &str) -> std::result::Result<f64, String> {
    let v: f64 = text.trim().parse().map_err(|_| format!("'{text}' is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{text}' is not finite"))
    }
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    /// Real part of the coherent amplitude
    #[arg(long, default_value = "0", value_parser = parse_angle, allow_hyphen_values = true)]
    pub alpha: f64,
    /// Imaginary part of the coherent amplitude
    #[arg(long, default_value = "0", value_parser = parse_angle, allow_hyphen_values = true)]
    pub alpha_im: f64,
    /// Squeezing magnitude r
    #[arg(long, default_value = "0", value_parser = parse_angle, allow_hyphen_values = true)]
    pub r: f64,
    /// Squeezing phase (radians or multiples of pi)
    #[arg(long, default_value = "0", value_parser = parse_angle, allow_hyphen_values = true)]
    pub psi: f64,
    /// Thermal photon number
    #[arg(long, default_value = "0", value_parser = parse_angle, allow_hyphen_values = true)]
    pub nth: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SecondModeArgs {
    /// Treat the state as a two-mode squeezed thermal state
    #[arg(long)]
    pub two_mode: bool,
    /// Real part of the second-mode amplitude (defaults to alpha)
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Imaginary part of the second-mode amplitude (defaults to alpha-im)
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    pub beta_im: Option<f64>,
    /// Second-mode thermal photon number (defaults to nth)
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    pub nth2: Option<f64>,
}

impl StateArgs {
    fn single(&self) -> Result<SingleModeState> {
        SingleModeState::new(Complex64::new(self.alpha, self.alpha_im), SqueezingParam::new(self.r, self.psi)?, self.nth)
    }

    fn two_mode(&self, second: &SecondModeArgs) -> Result<TwoModeState> {
        TwoModeState::new(
            Complex64::new(self.alpha, self.alpha_im),
            Complex64::new(second.beta.unwrap_or(self.alpha), second.beta_im.unwrap_or(self.alpha_im)),
            SqueezingParam::new(self.r, self.psi)?,
            self.nth,
            second.nth2.unwrap_or(self.nth),
        )
    }
}

#[derive(Debug, Args)]
pub struct G2Args {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub second: SecondModeArgs,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    pub r: f64,
    #[arg(long, default_value = "pi", value_parser = parse_angle, allow_hyphen_values = true)]
    pub psi: f64,
    #[arg(long, default_value = "0", value_parser = parse_angle, allow_hyphen_values = true)]
    pub nth: f64,
    /// Symmetric two-mode threshold (alpha = beta, equal thermal noise)
    #[arg(long)]
    pub two_mode_symmetric: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ScanModeArg {
    Single,
    TwoMode,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, value_enum, default_value = "single")]
    pub mode: ScanModeArg,
    /// Swept parameter: `name=min:max:steps` or `name=v1,v2,...`
    #[arg(long, value_name = "SPEC", allow_hyphen_values = true)]
    pub sweep: Vec<String>,
    /// Fixed parameter: `name=value`
    #[arg(long, value_name = "NAME=VALUE", allow_hyphen_values = true)]
    pub set: Vec<String>,
    /// Output CSV (stdout if absent)
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Samples per phase
    #[arg(long, default_value_t = DEFAULT_SAMPLES_PER_PHASE)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated phases (default: 0,pi/2,pi/4,-pi/4)
    #[arg(long, allow_hyphen_values = true)]
    pub phases: Option<String>,
    /// Trace CSV to write
    #[arg(long)]
    pub output: PathBuf,
    /// Metadata JSON to write (default: trace path with .json extension)
    #[arg(long)]
    pub metadata: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Trace CSV
    #[arg(long)]
    pub trace: PathBuf,
    /// Metadata JSON (default: trace path with .json extension, if present)
    #[arg(long)]
    pub metadata: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_RESAMPLES)]
    pub resamples: usize,
    /// Bootstrap seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_CONFIDENCE)]
    pub level: f64,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE_SIGMAS)]
    pub kurtosis_sigmas: f64,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE_SIGMAS)]
    pub skew_sigmas: f64,
    /// Groups for the jackknife bias correction of the point estimate
    #[arg(long, default_value_t = DEFAULT_JACKKNIFE_BLOCKS)]
    pub jackknife_blocks: usize,
    /// Report JSON (stdout if absent)
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub second: SecondModeArgs,
    /// Truncation per mode (automatic if absent)
    #[arg(long)]
    pub dim: Option<usize>,
    /// Run the benchmark grid and emit a comparison CSV
    #[arg(long)]
    pub grid: bool,
    /// Output file (stdout if absent)
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Splices config-file flags in after the subcommand, skipping any flag that
/// already appears on the command line.
pub fn apply_config(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let strings: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let mut config_path = None;
    for (i, a) in strings.iter().enumerate() {
        if a == "--config" {
            config_path = strings.get(i + 1).cloned();
        } else if let Some(p) = a.strip_prefix("--config=") {
            config_path = Some(p.to_string());
        }
    }
    let Some(path) = config_path else {
        return Ok(args);
    };
    let Some(sub_pos) = strings.iter().position(|a| SUBCOMMANDS.contains(&a.as_str())) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path)?;
    let root: Value = serde_json::from_str(&text).map_err(|e| Error::Format {
        path: path.clone(),
        row: e.line(),
        message: e.to_string(),
    })?;
    let Value::Object(root) = root else {
        return Err(Error::validation(format!("config {path} must be a JSON object")));
    };
    let section = match root.get(&strings[sub_pos]) {
        Some(Value::Object(s)) => s.clone(),
        _ => root.into_iter().filter(|(k, _)| !SUBCOMMANDS.contains(&k.as_str())).collect(),
    };
    let present = |flag: &str| strings.iter().any(|a| a == flag || a.starts_with(&format!("{flag}=")));
    let mut injected = Vec::new();
    for (key, value) in section {
        let flag = format!("--{}", key.replace('_', "-"));
        if flag == "--config" || present(&flag) {
            continue;
        }
        let items = match value {
            Value::Array(items) => items,
            other => vec![other],
        };
        for item in items {
            match item {
                Value::Bool(true) => injected.push(flag.clone()),
                Value::Bool(false) | Value::Null => {}
                Value::Number(n) => injected.push(format!("{flag}={n}")),
                Value::String(s) => injected.push(format!("{flag}={s}")),
                _ => return Err(Error::validation(format!("config key '{key}' has an unsupported value"))),
            }
        }
    }
    let mut out = args;
    for (i, tok) in injected.into_iter().enumerate() {
        out.insert(sub_pos + 1 + i, tok.into());
    }
    Ok(out)
}

/// Runs `f` against the file at `path`, or against `out` if there is none.
fn with_output(path: Option<&Path>, out: &mut dyn Write, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let mut file = BufWriter::new(File::create(p)?);
            f(&mut file)?;
            file.flush()?;
            Ok(())
        }
        None => f(out),
    }
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
struct G2Report {
    mode: &'static str,
    closed_form: Option<G2Result>,
    closed_form_note: Option<String>,
    pipeline: G2Result,
    difference: Option<f64>,
}

fn cmd_g2(args: &G2Args, out: &mut dyn Write) -> Result<()> {
    let report = if args.second.two_mode {
        let state = args.state.two_mode(&args.second)?;
        G2Report {
            mode: "two-mode",
            closed_form: None,
            closed_form_note: None,
            pipeline: g2_two_mode_state(&state)?,
            difference: None,
        }
    } else {
        let state = args.state.single()?;
        let pipeline = g2_single_state(&state)?;
        let (closed_form, note) = match g2_single_closed_form(&state) {
            Ok(g) => (Some(g), None),
            Err(Error::Validation(m)) => (None, Some(m)),
            Err(e) => return Err(e),
        };
        G2Report {
            mode: "single",
            difference: closed_form.map(|c| c.value - pipeline.value),
            closed_form,
            closed_form_note: note,
            pipeline,
        }
    };
    write_json(out, &report)
}

#[derive(Serialize)]
struct ThresholdReport {
    kind: &'static str,
    r: f64,
    psi: f64,
    nth: f64,
    exists: bool,
    alpha_th: Option<f64>,
    denominator: f64,
    alpha_min: Option<f64>,
}

fn cmd_threshold(args: &ThresholdArgs, out: &mut dyn Write) -> Result<()> {
    let (kind, t) = if args.two_mode_symmetric {
        ("two-mode-symmetric", alpha_threshold_two_mode_symmetric(args.r, args.psi, args.nth)?)
    } else {
        ("single", alpha_threshold(args.r, args.psi, args.nth)?)
    };
    let at_pi = (normalize_angle(args.psi) - std::f64::consts::PI).abs() < 1e-12;
    let alpha_min = if at_pi && !args.two_mode_symmetric { alpha_min_pi(args.r, args.nth)? } else { None };
    write_json(
        out,
        &ThresholdReport {
            kind,
            r: args.r,
            psi: args.psi,
            nth: args.nth,
            exists: t.exists,
            alpha_th: t.alpha_th,
            denominator: t.denominator,
            alpha_min,
        },
    )
}

/// Parses `name=min:max:steps` or `name=v1,v2,...`.
pub fn parse_sweep(text: &str) -> Result<Sweep> {
    let (name, body) = text
        .split_once('=')
        .ok_or_else(|| Error::validation(format!("sweep '{text}' must look like name=min:max:steps")))?;
    let name = name.trim();
    let parts: Vec<&str> = body.split(':').collect();
    if parts.len() == 3 {
        let min = parse_angle(parts[0]).map_err(Error::Validation)?;
        let max = parse_angle(parts[1]).map_err(Error::Validation)?;
        let steps: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| Error::validation(format!("sweep '{text}': steps must be a positive integer")))?;
        return Sweep::range(name, min, max, steps);
    }
    if parts.len() != 1 {
        return Err(Error::validation(format!("sweep '{text}' must look like name=min:max:steps")));
    }
    let values = body.split(',').map(parse_angle).collect::<std::result::Result<Vec<f64>, String>>();
    Sweep::list(name, values.map_err(Error::Validation)?)
}

fn cmd_scan(args: &ScanArgs, out: &mut dyn Write) -> Result<()> {
    let sweeps = args.sweep.iter().map(|s| parse_sweep(s)).collect::<Result<Vec<_>>>()?;
    let mut fixed = BTreeMap::new();
    for s in &args.set {
        let (name, value) = s
            .split_once('=')
            .ok_or_else(|| Error::validation(format!("'{s}' must look like name=value")))?;
        let v = parse_angle(value).map_err(Error::Validation)?;
        if fixed.insert(name.trim().to_string(), v).is_some() {
            return Err(Error::validation(format!("parameter '{name}' set twice")));
        }
    }
    let mode = match args.mode {
        ScanModeArg::Single => ScanMode::Single,
        ScanModeArg::TwoMode => ScanMode::TwoMode,
    };
    let table = run_scan(&ScanSpec::new(mode, sweeps, fixed)?)?;
    with_output(args.output.as_deref(), out, |w| table.write_csv(w))
}

fn cmd_simulate(args: &SimulateArgs, out: &mut dyn Write) -> Result<()> {
    let state = args.state.single()?;
    let schedule = match &args.phases {
        None => PhaseSchedule::standard(args.samples)?,
        Some(list) => PhaseSchedule::new(
            list.split(',')
                .map(|t| parse_angle(t).map(|theta| PhaseSetting { theta, n_samples: args.samples }))
                .collect::<std::result::Result<Vec<_>, String>>()
                .map_err(Error::Validation)?,
        )?,
    };
    let trace = simulate_trace(&state, &schedule, args.seed)?;
    let meta_path = args.metadata.clone().unwrap_or_else(|| args.output.with_extension("json"));
    trace.write_csv(&args.output)?;
    trace.write_metadata(&meta_path)?;
    write_json(
        out,
        &serde_json::json!({
            "trace": args.output.display().to_string(),
            "metadata": meta_path.display().to_string(),
            "samples": trace.len(),
        }),
    )
}

fn cmd_estimate(args: &EstimateArgs, out: &mut dyn Write) -> Result<()> {
    let meta = match &args.metadata {
        Some(p) => Some(p.clone()),
        None => Some(args.trace.with_extension("json")).filter(|p| p.exists() && *p != args.trace),
    };
    let trace = HomodyneTrace::read(&args.trace, meta.as_deref())?;
    let options = EstimateOptions {
        resamples: args.resamples,
        seed: args.seed,
        level: args.level,
        skewness_sigmas: args.skew_sigmas,
        kurtosis_sigmas: args.kurtosis_sigmas,
        jackknife_blocks: args.jackknife_blocks,
    };
    let report = reconstruct(&trace, &options)?.report(args.seed);
    with_output(args.output.as_deref(), out, |w| write_json(w, &report))
}

#[derive(Serialize)]
struct OracleReport {
    mode: &'static str,
    dim: usize,
    tail_mass: f64,
    unitarity_defect: f64,
    oracle: G2Result,
    reference: G2Result,
    relative_difference: f64,
}

/// Deterministic grid of single-mode states with `r ≤ 1`, `α ≤ 3`,
/// `N_th ≤ 0.5`, used by `oracle --grid`.
pub fn benchmark_states() -> Vec<SingleModeState> {
    use std::f64::consts::PI;
    let phases = [0.0, 0.5 * PI, PI, 1.5 * PI, 0.25 * PI];
    let mut out = Vec::new();
    for (i, alpha) in [0.5, 1.0, 1.5, 2.5, 3.0].into_iter().enumerate() {
        for (j, r) in [0.1, 0.3, 0.5, 0.75, 1.0].into_iter().enumerate() {
            for (k, nth) in [0.0, 0.5].into_iter().enumerate() {
                let psi = phases[(i + j + k) % phases.len()];
                out.push(SingleModeState::real(alpha, r, psi, nth).expect("benchmark parameters are valid"));
            }
        }
    }
    out
}

fn oracle_single(state: &SingleModeState, dim: Option<usize>) -> Result<(TruncatedState, G2Result, G2Result)> {
    let ts = match dim {
        Some(d) => build_single(state, d)?,
        None => build_single_auto(state)?,
    };
    let oracle = g2_oracle(&ts, ModePartition::Whole)?;
    let reference = g2_single_state(state)?;
    Ok((ts, oracle, reference))
}

fn cmd_oracle(args: &OracleArgs, out: &mut dyn Write) -> Result<()> {
    if args.grid {
        return with_output(args.output.as_deref(), out, |w| {
            writeln!(w, "alpha,r,psi,nth,dim,tail_mass,g2_oracle,g2_reference,relative_difference")?;
            for s in benchmark_states() {
                let (ts, oracle, reference) = oracle_single(&s, args.dim)?;
                writeln!(
                    w,
                    "{:?},{:?},{:?},{:?},{},{:?},{:?},{:?},{:?}",
                    s.alpha().re,
                    s.r(),
                    s.psi(),
                    s.n_th(),
                    ts.dim(),
                    ts.tail_mass(),
                    oracle.value,
                    reference.value,
                    (oracle.value - reference.value) / reference.value
                )?;
            }
            Ok(())
        });
    }
    let report = if args.second.two_mode {
        let state = args.state.two_mode(&args.second)?;
        let ts = match args.dim {
            Some(d) => build_two_mode(&state, d)?,
            None => build_two_mode_auto(&state)?,
        };
        let oracle = g2_oracle(&ts, ModePartition::Whole)?;
        let reference = g2_two_mode_state(&state)?;
        OracleReport {
            mode: "two-mode",
            dim: ts.mode_dims()[0],
            tail_mass: ts.tail_mass(),
            unitarity_defect: ts.unitarity_defect(),
            relative_difference: (oracle.value - reference.value) / reference.value,
            oracle,
            reference,
        }
    } else {
        let (ts, oracle, reference) = oracle_single(&args.state.single()?, args.dim)?;
        OracleReport {
            mode: "single",
            dim: ts.dim(),
            tail_mass: ts.tail_mass(),
            unitarity_defect: ts.unitarity_defect(),
            relative_difference: (oracle.value - reference.value) / reference.value,
            oracle,
            reference,
        }
    };
    with_output(args.output.as_deref(), out, |w| write_json(w, &report))
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::G2(a) => cmd_g2(a, out),
        Command::Threshold(a) => cmd_threshold(a, out),
        Command::Scan(a) => cmd_scan(a, out),
        Command::Simulate(a) => cmd_simulate(a, out),
        Command::Estimate(a) => cmd_estimate(a, out),
        Command::Oracle(a) => cmd_oracle(a, out),
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn main_with_args(args: Vec<OsString>) -> i32 {
    let args = match apply_config(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match execute(&cli, &mut out).and_then(|_| out.flush().map_err(Error::from)) {
        Ok(()) => 0,
        // reader went away, e.g. `| head`
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("-pi/4").unwrap(), -PI / 4.0);
        assert_eq!(parse_angle("3pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_angle("0.5*pi").unwrap(), 0.5 * PI);
        assert_eq!(parse_angle(" 1.25 ").unwrap(), 1.25);
        assert_eq!(parse_angle("-2").unwrap(), -2.0);
        assert!(parse_angle("pix").is_err());
        assert!(parse_angle("pi/0").is_err());
        assert!(parse_angle("abc").is_err());
        assert!(parse_angle("inf").is_err());
    }

    #[test]
    fn sweeps() {
        let s = parse_sweep("r=0:1:3").unwrap();
        assert_eq!(s.values, vec![0.0, 0.5, 1.0]);
        let s = parse_sweep("psi=0,pi/2,pi").unwrap();
        assert_eq!(s.values, vec![0.0, PI / 2.0, PI]);
        assert!(parse_sweep("r=1:0:3").is_err());
        assert!(parse_sweep("r0:1:3").is_err());
        assert!(parse_sweep("r=0:1").is_err());
    }

    #[test]
    fn config_injection_respects_explicit_flags() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("c.json");
        std::fs::write(&cfg, r#"{"alpha": 2, "psi": "pi", "two_mode": false, "scan": {"sweep": ["r=0:1:2"]}}"#).unwrap();
        let args: Vec<OsString> = ["prog", "--config", cfg.to_str().unwrap(), "g2", "--alpha", "1"]
            .iter()
            .map(OsString::from)
            .collect();
        let out: Vec<String> = apply_config(args).unwrap().iter().map(|a| a.to_string_lossy().into_owned()).collect();
        assert!(out.contains(&"--psi=pi".to_string()));
        assert!(!out.iter().any(|a| a.starts_with("--alpha=")));
        assert!(!out.iter().any(|a| a.starts_with("--sweep")));
        let cli = Cli::try_parse_from(out).unwrap();
        match cli.command {
            Command::G2(a) => {
                assert_eq!(a.state.alpha, 1.0);
                assert_eq!(a.state.psi, PI);
            }
            _ => panic!("wrong subcommand"),
        }
    }

    #[test]
    fn benchmark_grid_size() {
        let g = benchmark_states();
        assert_eq!(g.len(), 50);
        assert!(g.iter().all(|s| s.r() <= 1.0 && s.alpha().re <= 3.0 && s.n_th() <= 0.5));
    }
}
