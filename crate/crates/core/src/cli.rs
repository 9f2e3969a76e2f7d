//! Command-line front end.
//!
//! Exit codes: 0 success, 1 input error, 2 verification failure,
//! 3 infeasible location or value.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::de::{self, Deserializer};
use serde::Deserialize;

use crate::constraints::{classify, normalize_config, ConstraintConfig, Interval, PrivacyParams};
use crate::error::Error;
use crate::laplace::{laplace_pdf, LaplaceParams};
use crate::mechanism::TruncatedLaplace;
use crate::plan::{FixedScale, ScaleSchedule, SigmaPlan};
use crate::uniform::DEFAULT_PRECISION;
use crate::verifier::{verify_grid, GuaranteeEvaluation};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "range-laplace",
    version,
    about = "Range-adherent Laplace mechanism"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the configuration class.
    Classify { config: PathBuf },
    /// Print the scale for a configuration.
    Sigma {
        config: PathBuf,
        /// True response; required for a single infinite constraint.
        #[arg(long, allow_negative_numbers = true)]
        location: Option<f64>,
        /// Decimal digits of the uniform scale search.
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: u32,
        #[arg(long)]
        json: bool,
    },
    /// Draw noisy responses.
    Sample {
        config: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        true_value: f64,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check the guarantee on a grid of locations and outputs.
    Verify {
        config: PathBuf,
        /// Use dF/eps at every location.
        #[arg(long)]
        naive: bool,
        #[arg(long, default_value_t = 50)]
        locations: usize,
        #[arg(long, default_value_t = 200)]
        outputs: usize,
        #[arg(long, default_value_t = 10.0)]
        max_i: f64,
    },
    /// Write the original and truncated densities as CSV.
    Curve {
        config: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        location: f64,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long, default_value_t = 1001)]
        points: usize,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parsed config file.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub epsilon: f64,
    pub delta_f: f64,
    #[serde(default)]
    pub constraints: Vec<ConstraintEntry>,
}

/// One constraint, as `[left, right]` or `{"left": .., "right": ..}`.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum ConstraintEntry {
    Pair(Bound, Bound),
    Object(ConstraintObject),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintObject {
    pub left: Bound,
    pub right: Bound,
}

/// A finite number or one of the strings `"-inf"` and `"+inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bound(pub f64);

impl<'de> Deserialize<'de> for Bound {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Bound(v)),
            Raw::Str(s) => match s.as_str() {
                "-inf" => Ok(Bound(f64::NEG_INFINITY)),
                "+inf" => Ok(Bound(f64::INFINITY)),
                other => Err(de::Error::custom(format!(
                    "unknown bound \"{other}\", expected a number, \"-inf\" or \"+inf\""
                ))),
            },
        }
    }
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    pub fn into_parts(self) -> crate::Result<(PrivacyParams, ConstraintConfig)> {
        let params = PrivacyParams::new(self.epsilon, self.delta_f)?;
        let intervals = self
            .constraints
            .into_iter()
            .map(|c| match c {
                ConstraintEntry::Pair(l, r) => Interval::new(l.0, r.0),
                ConstraintEntry::Object(o) => Interval::new(o.left.0, o.right.0),
            })
            .collect::<crate::Result<Vec<_>>>()?;
        Ok((params, normalize_config(intervals)?))
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InfeasibleLocation(_) => EXIT_INFEASIBLE,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::input(e.to_string())
    }
}

type CmdResult = Result<i32, Failure>;

fn load(path: &Path) -> Result<(PrivacyParams, ConstraintConfig), Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    let file = ConfigFile::parse(&text)
        .map_err(|e| Failure::input(format!("invalid config {}: {e}", path.display())))?;
    Ok(file.into_parts()?)
}

/// Runs the parsed command, writing results to `out` and diagnostics to
/// `err`. Returns the process exit code.
pub fn run_cli(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Classify { config } => classify_cmd(&config, out),
        Command::Sigma {
            config,
            location,
            precision,
            json,
        } => sigma_cmd(&config, location, precision, json, out),
        Command::Sample {
            config,
            true_value,
            n,
            seed,
        } => sample_cmd(&config, true_value, n, seed, out),
        Command::Verify {
            config,
            naive,
            locations,
            outputs,
            max_i,
        } => verify_cmd(&config, naive, locations, outputs, max_i, out),
        Command::Curve {
            config,
            location,
            from,
            to,
            points,
            out: path,
        } => curve_cmd(&config, location, from, to, points, path.as_deref(), out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run_cli(cli, out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            code
        }
    }
}

fn classify_cmd(path: &Path, out: &mut dyn Write) -> CmdResult {
    let (_, config) = load(path)?;
    writeln!(out, "{}", classify(&config).name())?;
    Ok(EXIT_OK)
}

fn sigma_cmd(
    path: &Path,
    location: Option<f64>,
    precision: u32,
    json: bool,
    out: &mut dyn Write,
) -> CmdResult {
    let (params, config) = load(path)?;
    let class = classify(&config);
    if let Some(loc) = location.filter(|&l| !config.is_feasible(l)) {
        return Err(Error::InfeasibleLocation(loc).into());
    }
    let plan = SigmaPlan::compute(&config, params, precision)?;
    let sigma = match (plan.uniform_sigma(), location) {
        (Some(s), _) => s,
        (None, Some(loc)) => plan.sigma_for(loc)?,
        (None, None) => {
            return Err(Failure::input(
                "--location is required for a single infinite constraint",
            ))
        }
    };
    let normalization = match location {
        Some(loc) => Some(TruncatedLaplace::with_sigma(&config, loc, sigma)?.normalization()),
        None => None,
    };
    if json {
        let record = serde_json::json!({
            "class": class.name(),
            "sigma": sigma,
            "normalization": normalization,
            "epsilon": params.epsilon(),
            "delta_f": params.delta_f(),
        });
        writeln!(out, "{record}")?;
    } else {
        writeln!(out, "class={}", class.name())?;
        writeln!(out, "sigma={sigma:.16e}")?;
        if let Some(n) = normalization {
            writeln!(out, "normalization={n:.16e}")?;
        }
        writeln!(out, "epsilon={:.16e}", params.epsilon())?;
        writeln!(out, "delta_f={:.16e}", params.delta_f())?;
    }
    Ok(EXIT_OK)
}

fn sample_cmd(path: &Path, true_value: f64, n: usize, seed: u64, out: &mut dyn Write) -> CmdResult {
    let (params, config) = load(path)?;
    if n == 0 {
        return Err(Failure::input("n must be at least 1"));
    }
    let mechanism = TruncatedLaplace::build(&config, params, true_value)?;
    let mut buf = std::io::BufWriter::new(out);
    for x in mechanism.sample_seeded(seed, n) {
        writeln!(buf, "{x:.16e}")?;
    }
    buf.flush()?;
    Ok(EXIT_OK)
}

fn write_evaluation(out: &mut dyn Write, e: &GuaranteeEvaluation) -> std::io::Result<()> {
    writeln!(out, "worst_f1={:.16e}", e.f1)?;
    writeln!(out, "worst_f2={:.16e}", e.f2)?;
    writeln!(out, "worst_i={:.16e}", e.i)?;
    writeln!(out, "worst_x={:.16e}", e.x)?;
    writeln!(out, "worst_ratio_forward={:.16e}", e.ratio_forward)?;
    writeln!(out, "worst_ratio_backward={:.16e}", e.ratio_backward)?;
    writeln!(out, "worst_bound={:.16e}", e.bound)
}

fn verify_cmd(
    path: &Path,
    naive: bool,
    locations: usize,
    outputs: usize,
    max_i: f64,
    out: &mut dyn Write,
) -> CmdResult {
    let (params, config) = load(path)?;
    let report = if naive {
        let schedule = FixedScale(params.standard_scale());
        verify_grid(&config, params, &schedule, locations, outputs, max_i)?
    } else {
        let plan = SigmaPlan::compute(&config, params, DEFAULT_PRECISION)?;
        verify_grid(&config, params, &plan, locations, outputs, max_i)?
    };
    writeln!(out, "checks={}", report.total_checks)?;
    writeln!(out, "failures={}", report.failures.len())?;
    writeln!(
        out,
        "max_ratio_over_bound={:.16e}",
        report.max_ratio_over_bound
    )?;
    match report.worst_failure() {
        None => Ok(EXIT_OK),
        Some(worst) => {
            write_evaluation(out, worst)?;
            Ok(EXIT_VERIFY)
        }
    }
}

fn curve_cmd(
    path: &Path,
    location: f64,
    from: f64,
    to: f64,
    points: usize,
    out_path: Option<&Path>,
    out: &mut dyn Write,
) -> CmdResult {
    let (params, config) = load(path)?;
    if points < 2 {
        return Err(Failure::input("points must be at least 2"));
    }
    if !(from.is_finite() && to.is_finite() && from < to) {
        return Err(Failure::input("need finite from < to"));
    }
    let mechanism = TruncatedLaplace::build(&config, params, location)?;
    let original = LaplaceParams::new(location, mechanism.sigma())?;
    let mut text = String::from("x,density_original,density_truncated_normalized\n");
    for k in 0..points {
        let x = from + (to - from) * k as f64 / (points - 1) as f64;
        text.push_str(&format!(
            "{x:.16e},{:.16e},{:.16e}\n",
            laplace_pdf(x, original),
            mechanism.pdf(x)
        ));
    }
    match out_path {
        Some(p) => fs::write(p, text)
            .map_err(|e| Failure::input(format!("cannot write {}: {e}", p.display())))?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(EXIT_OK)
}
