//! Run configuration: command-line flags merged over an optional flat
//! key=value config file, validated before any work starts.

use std::collections::HashMap;
use std::fs;
use std::path::PathBuf;

use eda_queue::rational::{parse_rational, to_f64};
use eda_queue::Rational;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    fn parse(s: &str) -> Result<Self, CliError> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(CliError::Config(format!(
                "format must be csv or json, got `{other}`"
            ))),
        }
    }
}

/// Fully resolved configuration. `rho`/`q` keep their exact values for the
/// solver; the floating mirrors feed the simulator.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub rho: Rational,
    pub rho_f: f64,
    pub q: Rational,
    pub q_f: f64,
    pub order: usize,
    pub steps: u64,
    pub burn_in: u64,
    pub seed: u64,
    pub n_max: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
}

/// Raw option set as it arrives from clap; everything optional so config
/// files can fill the gaps.
#[derive(Clone, Debug, Default, clap::Args)]
pub struct ModeArgs {
    /// Flat key=value config file; command-line flags override it
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Retention probability rho, as a fraction "a/b" or a decimal
    #[arg(long)]
    pub rho: Option<String>,
    /// Stay probability q, as a fraction "a/b" or a decimal [default: 0]
    #[arg(long)]
    pub q: Option<String>,
    /// Truncation order of the power series [default: 8]
    #[arg(long)]
    pub order: Option<usize>,
    /// Chain steps counted after burn-in [default: 1000000]
    #[arg(long)]
    pub steps: Option<u64>,
    /// Chain steps discarded before counting [default: 10000]
    #[arg(long = "burn-in")]
    pub burn_in: Option<u64>,
    /// 64-bit seed for the chacha8 generator [default: 42]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Largest queue length reported [default: order + 1]
    #[arg(long = "n-max")]
    pub n_max: Option<usize>,
    /// Output file; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format: csv or json [default: json]
    #[arg(long)]
    pub format: Option<String>,
}

fn parse_config_file(path: &PathBuf) -> Result<HashMap<String, String>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut map = HashMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Config(format!(
                "{}:{}: expected key=value, got `{line}`",
                path.display(),
                lineno + 1
            )));
        };
        map.insert(key.trim().replace('-', "_"), value.trim().to_string());
    }
    Ok(map)
}

/// Flag value if present, else the config-file value, else the default.
fn pick<T: std::str::FromStr>(
    flag: Option<T>,
    map: &HashMap<String, String>,
    key: &str,
    default: T,
) -> Result<T, CliError> {
    if let Some(v) = flag {
        return Ok(v);
    }
    match map.get(key) {
        None => Ok(default),
        Some(raw) => raw
            .parse()
            .map_err(|_| CliError::Config(format!("config key {key}: cannot parse `{raw}`"))),
    }
}

impl RunConfig {
    /// Applies precedence (flags over file over defaults) and validates.
    pub fn resolve(args: &ModeArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => parse_config_file(path)?,
            None => HashMap::new(),
        };
        let rho_raw = args
            .rho
            .clone()
            .or_else(|| file.get("rho").cloned())
            .ok_or_else(|| CliError::Config("missing required parameter --rho".into()))?;
        let q_raw = args
            .q
            .clone()
            .or_else(|| file.get("q").cloned())
            .unwrap_or_else(|| "0".to_string());
        let rho = parse_rational(&rho_raw).map_err(|e| CliError::Config(e.to_string()))?;
        let q = parse_rational(&q_raw).map_err(|e| CliError::Config(e.to_string()))?;
        let order = pick(args.order, &file, "order", 8)?;
        let steps = pick(args.steps, &file, "steps", 1_000_000)?;
        let burn_in = pick(args.burn_in, &file, "burn_in", 10_000)?;
        let seed = pick(args.seed, &file, "seed", 42)?;
        let n_max = pick(args.n_max, &file, "n_max", order + 1)?;
        let out = args.out.clone().or_else(|| file.get("out").map(PathBuf::from));
        let format = match args.format.clone().or_else(|| file.get("format").cloned()) {
            Some(raw) => Format::parse(&raw)?,
            None => Format::Json,
        };
        if steps == 0 {
            return Err(CliError::Config("steps must be positive".into()));
        }
        Ok(RunConfig {
            rho_f: to_f64(&rho),
            rho,
            q_f: to_f64(&q),
            q,
            order,
            steps,
            burn_in,
            seed,
            n_max,
            out,
            format,
        })
    }
}
