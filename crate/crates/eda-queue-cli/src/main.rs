//! `edaq` — command-line front end for the exponentially-delayed-arrivals
//! queue laboratory: exact series solve, seeded simulation, and the
//! comparison between them, all emitting machine-readable CSV/JSON.

mod config;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_traits::Zero;
use serde_json::{json, Value};

use eda_queue::marginals::{marginal_l_series, pochhammer_expand};
use eda_queue::rational::to_f64;
use eda_queue::simulator::{EmpiricalDist, RNG_NAME};
use eda_queue::solver::{
    build_tables, check_boundary_identities, mean_queue_length, queue_pmf, sparsity_profile,
    CoeffTables,
};
use eda_queue::validation::{end_to_end_compare, radius_bound};
use eda_queue::{ModelParamsExact, ModelParamsFloat, Poly};

use config::{Format, ModeArgs, RunConfig};

#[derive(Parser)]
#[command(
    name = "edaq",
    version,
    about = "Discrete-time queue with exponentially delayed arrivals: exact power-series solver and seeded Monte Carlo simulator",
    after_help = "Numeric parameters accept exact fractions (\"1/2\") or decimals (\"0.5\"); \
                  the solver always works on the exact value. Exit codes: 0 success, \
                  2 configuration error, 3 I/O failure."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for the queue-length pmf via the exact truncated power series
    Solve(ModeArgs),
    /// Run the seeded Monte Carlo chain and report joint and marginal counts
    Simulate(ModeArgs),
    /// Simulate and solve, then compare the two pmfs (writes <out>.json and <out>.csv)
    Compare(ModeArgs),
    /// Dump the exact coefficient tables as JSON (ignores --format)
    Tables(ModeArgs),
    /// Cross-check the late-customer marginal: partition expansion vs product vs solver
    Marginal(ModeArgs),
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "{msg}"),
            CliError::Io(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<eda_queue::Error> for CliError {
    fn from(e: eda_queue::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Solve(args) => RunConfig::resolve(args).and_then(cmd_solve),
        Command::Simulate(args) => RunConfig::resolve(args).and_then(cmd_simulate),
        Command::Compare(args) => RunConfig::resolve(args).and_then(cmd_compare),
        Command::Tables(args) => RunConfig::resolve(args).and_then(cmd_tables),
        Command::Marginal(args) => RunConfig::resolve(args).and_then(cmd_marginal),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Writes `content` to the output path, or to stdout when none is set.
/// The human summary only appears when the machine output went to a file.
fn emit(out: Option<&Path>, content: &str, summary: Option<String>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            fs::write(path, content)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            if let Some(line) = summary {
                println!("{line}");
            }
            Ok(())
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn pretty(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON serialization");
    text.push('\n');
    text
}

fn exact_params(cfg: &RunConfig) -> Result<ModelParamsExact, CliError> {
    Ok(ModelParamsExact::new(cfg.rho.clone(), cfg.q.clone())?)
}

fn params_json(cfg: &RunConfig) -> Value {
    json!({
        "rho": cfg.rho.to_string(),
        "rho_float": cfg.rho_f,
        "q": cfg.q.to_string(),
        "q_float": cfg.q_f,
    })
}

fn poly_json(p: &Poly) -> Value {
    Value::from(p.coeff_strings())
}

fn cmd_solve(cfg: RunConfig) -> Result<(), CliError> {
    let params = exact_params(&cfg)?;
    let tables = build_tables(&params, cfg.order);
    let pmf = queue_pmf(&tables, &cfg.q, cfg.n_max);
    let mean = mean_queue_length(&tables, &cfg.q);
    let boundary = check_boundary_identities(&tables);
    let sparsity = sparsity_profile(&tables);
    let (growth, radius) = radius_bound(cfg.rho_f)?;

    let mut warnings = Vec::new();
    if cfg.order == 0 && !cfg.q.is_zero() {
        warnings.push("truncation order 0: the reported pmf is the q = 0 closed form".to_string());
    }
    if cfg.q_f > radius {
        warnings.push(format!(
            "q = {} exceeds the certified analyticity radius {:.6}; series values are uncertified",
            cfg.q_f, radius
        ));
    }
    for w in &warnings {
        eprintln!("warning: {w}");
    }

    let content = match cfg.format {
        Format::Csv => {
            let mut text = String::from("n,P_n_exact,P_n_float\n");
            for (n, p) in pmf.iter().enumerate() {
                text.push_str(&format!("{n},{p},{}\n", to_f64(p)));
            }
            text
        }
        Format::Json => pretty(&json!({
            "mode": "solve",
            "params": params_json(&cfg),
            "order": cfg.order,
            "pmf": pmf.iter().enumerate().map(|(n, p)| json!({
                "n": n,
                "exact": p.to_string(),
                "float": to_f64(p),
            })).collect::<Vec<_>>(),
            "mean_queue_length": {
                "exact": mean.to_string(),
                "float": to_f64(&mean),
            },
            "boundary_identities": {
                "all_pass": boundary.all_pass(),
                "checks": serde_json::to_value(&boundary.checks).expect("JSON"),
            },
            "sparsity_profile": sparsity.iter().map(|(k, d)| json!({
                "order": k,
                "y_degree": d,
            })).collect::<Vec<_>>(),
            "radius": {
                "growth_constant": growth,
                "radius": radius,
                "q_inside_radius": cfg.q_f <= radius,
            },
            "warnings": warnings,
        })),
    };
    let passed = boundary.checks.iter().filter(|c| c.pass).count();
    let summary = format!(
        "solve: pmf over n = 0..={}, mean queue length {} (~{:.6}), boundary identities {passed}/{} pass",
        cfg.n_max,
        mean,
        to_f64(&mean),
        boundary.checks.len()
    );
    emit(cfg.out.as_deref(), &content, Some(summary))
}

fn cmd_simulate(cfg: RunConfig) -> Result<(), CliError> {
    let params = ModelParamsFloat::new(cfg.rho_f, cfg.q_f)?;
    let dist = EmpiricalDist::run(&params, cfg.steps, cfg.burn_in, cfg.seed);
    let total = dist.total() as f64;

    // marginal counts, aggregated here so the outputs carry exact integers
    let mut by_n = std::collections::BTreeMap::<u32, u64>::new();
    let mut by_l = std::collections::BTreeMap::<u32, u64>::new();
    for (&(n, l), &c) in dist.counts() {
        *by_n.entry(n).or_insert(0) += c;
        *by_l.entry(l).or_insert(0) += c;
    }

    let content = match cfg.format {
        Format::Csv => {
            let mut text = String::from("kind,n,l,count,prob\n");
            for (&(n, l), &c) in dist.counts() {
                text.push_str(&format!("joint,{n},{l},{c},{}\n", c as f64 / total));
            }
            for (&n, &c) in &by_n {
                text.push_str(&format!("marginal_n,{n},,{c},{}\n", c as f64 / total));
            }
            for (&l, &c) in &by_l {
                text.push_str(&format!("marginal_l,,{l},{c},{}\n", c as f64 / total));
            }
            text
        }
        Format::Json => pretty(&json!({
            "mode": "simulate",
            "params": {"rho": params.rho, "q": params.q, "p": params.p},
            "rng": RNG_NAME,
            "seed": cfg.seed,
            "steps": cfg.steps,
            "burn_in": cfg.burn_in,
            "joint": dist.counts().iter().map(|(&(n, l), &c)| json!({
                "n": n, "l": l, "count": c, "prob": c as f64 / total,
            })).collect::<Vec<_>>(),
            "marginal_n": by_n.iter().map(|(&n, &c)| json!({
                "n": n, "count": c, "prob": c as f64 / total,
            })).collect::<Vec<_>>(),
            "marginal_l": by_l.iter().map(|(&l, &c)| json!({
                "l": l, "count": c, "prob": c as f64 / total,
            })).collect::<Vec<_>>(),
        })),
    };
    let p0 = by_n.get(&0).map_or(0.0, |&c| c as f64 / total);
    let summary = format!(
        "simulate: {} steps (burn-in {}), {} joint states, empirical P(n=0) = {p0:.6}",
        cfg.steps,
        cfg.burn_in,
        dist.counts().len()
    );
    emit(cfg.out.as_deref(), &content, Some(summary))
}

fn cmd_compare(cfg: RunConfig) -> Result<(), CliError> {
    let exact = exact_params(&cfg)?;
    let float = exact.to_float();
    let report = end_to_end_compare(&exact, &float, cfg.order, cfg.steps, cfg.burn_in, cfg.seed)?;
    if !report.radius.q_inside_radius {
        eprintln!(
            "warning: q = {} lies outside the certified radius {:.6}; comparison is informational",
            report.params.q, report.radius.radius
        );
    }
    if report.slow_convergence_warning {
        eprintln!(
            "warning: rho = {} is close to 1; series truncation converges slowly there",
            report.params.rho
        );
    }

    let mut value = serde_json::to_value(&report).expect("JSON");
    value["mode"] = Value::from("compare");
    let json_text = pretty(&value);
    let mut csv_text = String::from("n,empirical,theoretical\n");
    for row in &report.per_state {
        csv_text.push_str(&format!("{},{},{}\n", row.n, row.empirical, row.theoretical));
    }

    match &cfg.out {
        Some(base) => {
            let json_path = with_suffix(base, "json");
            let csv_path = with_suffix(base, "csv");
            fs::write(&json_path, json_text)
                .map_err(|e| CliError::Io(format!("{}: {e}", json_path.display())))?;
            fs::write(&csv_path, csv_text)
                .map_err(|e| CliError::Io(format!("{}: {e}", csv_path.display())))?;
            println!(
                "compare: TV = {:.6} over {} states; wrote {} and {}",
                report.tv,
                report.per_state.len(),
                json_path.display(),
                csv_path.display()
            );
            Ok(())
        }
        None => {
            print!("{json_text}");
            Ok(())
        }
    }
}

/// `base` + `.ext`, replacing an existing matching extension rather than
/// stacking it.
fn with_suffix(base: &Path, ext: &str) -> PathBuf {
    let mut path = base.to_path_buf();
    if path.extension().map(|e| e == "json" || e == "csv") == Some(true) {
        path.set_extension(ext);
    } else {
        path.set_extension(
            path.extension()
                .map(|e| format!("{}.{ext}", e.to_string_lossy()))
                .unwrap_or_else(|| ext.to_string()),
        );
    }
    path
}

fn tables_json(tables: &CoeffTables) -> Value {
    let order = tables.order();
    let coeffs: Vec<Value> = (0..=order)
        .map(|k| {
            json!({
                "k": k,
                "rows": tables.series_coeff(k).coeff_strings(),
            })
        })
        .collect();
    let mut weights = Vec::new();
    let mut diag = Vec::new();
    for k in 0..=order {
        for j in 0..=k {
            weights.push(json!({
                "k": k, "j": j,
                "coeffs": tables.taylor_weight(k, j).coeff_strings(),
            }));
            diag.push(json!({
                "k": k, "j": j,
                "coeffs": tables.diag_deriv(k, j).coeff_strings(),
            }));
        }
    }
    json!({
        "legend": {
            "P": "series coefficients in (z, y); rows index powers of z, columns powers of y",
            "A": "Taylor weights of (y-z)^j/j! per order k; coefficients in powers of z",
            "a": "diagonal y-derivatives of the deflated coefficients; coefficients in powers of z",
        },
        "P": coeffs,
        "A": weights,
        "a": diag,
    })
}

fn cmd_tables(cfg: RunConfig) -> Result<(), CliError> {
    let params = exact_params(&cfg)?;
    let tables = build_tables(&params, cfg.order);
    let mut value = tables_json(&tables);
    value["mode"] = Value::from("tables");
    value["params"] = params_json(&cfg);
    value["order"] = Value::from(cfg.order);
    let summary = format!("tables: dumped orders 0..={} for rho = {}", cfg.order, cfg.rho);
    emit(cfg.out.as_deref(), &pretty(&value), Some(summary))
}

fn cmd_marginal(cfg: RunConfig) -> Result<(), CliError> {
    let params = exact_params(&cfg)?;
    let tables = build_tables(&params, cfg.order);
    let partition_route = marginal_l_series(&cfg.rho, cfg.order);
    let product_route = pochhammer_expand(&cfg.rho, cfg.order);
    let solver_route: Vec<Poly> = (0..=cfg.order).map(|k| tables.coeff_at_z1(k)).collect();
    let agree: Vec<bool> = (0..=cfg.order)
        .map(|k| partition_route[k] == product_route[k] && product_route[k] == solver_route[k])
        .collect();
    let all_agree = agree.iter().all(|&a| a);

    let content = match cfg.format {
        Format::Csv => {
            let mut text = String::from("k,agree,partition_route,product_route,solver_route\n");
            for k in 0..=cfg.order {
                text.push_str(&format!(
                    "{k},{},\"{}\",\"{}\",\"{}\"\n",
                    agree[k],
                    partition_route[k].coeff_strings().join(";"),
                    product_route[k].coeff_strings().join(";"),
                    solver_route[k].coeff_strings().join(";"),
                ));
            }
            text
        }
        Format::Json => pretty(&json!({
            "mode": "marginal",
            "params": params_json(&cfg),
            "order": cfg.order,
            "orders": (0..=cfg.order).map(|k| json!({
                "k": k,
                "partition_route": poly_json(&partition_route[k]),
                "product_route": poly_json(&product_route[k]),
                "solver_route": poly_json(&solver_route[k]),
                "agree": agree[k],
            })).collect::<Vec<_>>(),
            "all_agree": all_agree,
        })),
    };
    let summary = format!(
        "marginal: {} of {} orders agree across all three routes",
        agree.iter().filter(|&&a| a).count(),
        cfg.order + 1
    );
    emit(cfg.out.as_deref(), &content, Some(summary))
}
