//! The `superclt` command line: config loading, the four subcommands and
//! their exit codes.

mod config;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

pub use config::{CltConfig, ExperimentConfig, FunctionEntry, OutputConfig, TestsConfig};

use crate::cltlab::{verify_all, VerificationReport};
use crate::error::{Error, Result};
use crate::moments::{beta2, eta2, limit_decomposition, rho2, sigma2, ACoefficient, Normalization};
use crate::simulator::{run_ensemble, run_ensemble_with_threads, Ensemble};
use crate::spectral::{classify, eigenvalue, multiplicity, LevelClass, SuperOUConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_VERIFICATION: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "superclt", version, about = "Spectral CLT limits and Monte Carlo checks for super-OU processes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues, multiplicities and regimes of the spectral levels.
    Spectral(CommonArgs),
    /// Limit constants of the configured functions.
    Limits(CommonArgs),
    /// Run the ensemble and write per-replica readouts as CSV.
    Simulate(CommonArgs),
    /// Run the ensemble and all verification suites; writes a JSON report.
    Verify(CommonArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Output file; defaults to the config's output section, then stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Overrides sim.master_seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Overrides sim.replicas.
    #[arg(long)]
    pub replicas: Option<u64>,
    #[arg(long, env = "SUPERCLT_THREADS")]
    pub threads: Option<usize>,
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_validation() {
        EXIT_VALIDATION
    } else if e.is_resource() {
        EXIT_RESOURCE
    } else if matches!(e, Error::InsufficientData(_)) {
        EXIT_VERIFICATION
    } else {
        EXIT_OTHER
    }
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("superclt: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    let (args, which) = match &cli.command {
        Command::Spectral(a) => (a, "spectral"),
        Command::Limits(a) => (a, "limits"),
        Command::Simulate(a) => (a, "simulate"),
        Command::Verify(a) => (a, "verify"),
    };
    let cfg = load_with_overrides(args)?;
    let (text, code) = match cli.command {
        Command::Spectral(_) => (cmd_spectral(&cfg)?, EXIT_OK),
        Command::Limits(_) => (cmd_limits(&cfg)?, EXIT_OK),
        Command::Simulate(_) => (cmd_simulate(&cfg, args.threads)?, EXIT_OK),
        Command::Verify(_) => {
            let report = cmd_verify(&cfg, args.threads)?;
            let code = if report.passed() { EXIT_OK } else { EXIT_VERIFICATION };
            (serde_json::to_string_pretty(&report)? + "\n", code)
        }
    };
    let target = args.out.clone().or_else(|| match which {
        "spectral" => cfg.output.spectral.clone(),
        "limits" => cfg.output.limits.clone(),
        "simulate" => cfg.output.simulate.clone(),
        _ => cfg.output.verify.clone(),
    });
    emit(target.as_deref(), &text)?;
    Ok(code)
}

/// Loads the config and applies `--seed` and `--replicas`.
pub fn load_with_overrides(args: &CommonArgs) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::load(&args.config)?;
    if args.seed.is_some() || args.replicas.is_some() {
        let plan = cfg
            .sim
            .as_mut()
            .ok_or_else(|| Error::Config("--seed and --replicas need a \"sim\" section".into()))?;
        if let Some(s) = args.seed {
            plan.master_seed = s;
        }
        if let Some(r) = args.replicas {
            plan.replicas = r;
        }
        cfg.validate()?;
    }
    Ok(cfg)
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

/// Floats with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn digest_line(cfg: &ExperimentConfig) -> String {
    format!("# config_digest: {}\n", cfg.digest())
}

fn csv_text(header: &[String], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn class_name(c: LevelClass) -> &'static str {
    match c {
        LevelClass::Large => "large",
        LevelClass::Critical => "critical",
        LevelClass::Small => "small",
    }
}

/// One row (k, λ_k, n_k, regime) per eigen-level up to the configured order.
pub fn cmd_spectral(cfg: &ExperimentConfig) -> Result<String> {
    let model = &cfg.model;
    let header = ["k", "lambda_k", "multiplicity", "regime"].map(String::from);
    let rows = (1..=model.max_level())
        .map(|k| {
            Ok(vec![
                k.to_string(),
                fmt_f64(eigenvalue(model, k)?),
                multiplicity(model, k)?.to_string(),
                class_name(model.class_of_order(k - 1)).to_string(),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = digest_line(cfg);
    out += &format!(
        "# lambda_1 = {}; level k is large if 2 lambda_k < lambda_1, critical if equal, small otherwise\n",
        fmt_f64(model.lambda1())
    );
    out += &csv_text(&header, &rows)?;
    Ok(out)
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// Limit constants of every configured function: σ² of its small part, ρ²
/// of its critical part, β² of its large part, η² at the origin when the
/// leading level is large, and the variance of the dominant limit law.
pub fn cmd_limits(cfg: &ExperimentConfig) -> Result<String> {
    let model = &cfg.model;
    let a = ACoefficient::from_model(model);
    let origin = vec![0.0; model.dimension()];
    let header = [
        "function_id",
        "regime",
        "gamma",
        "sigma2",
        "rho2",
        "beta2",
        "eta2_at_origin",
        "normalization",
        "limit_variance",
    ]
    .map(String::from);
    let mut rows = Vec::new();
    for nf in cfg.named_functions() {
        let f = &nf.function;
        let c = classify(f, model);
        let leading_large = c
            .gamma
            .finite()
            .is_some_and(|g| model.class_of_order(g - 1) == LevelClass::Large);
        let eta = if leading_large { Some(eta2(f, &origin, model, &a)?.value) } else { None };
        let law = limit_decomposition(f, model, &a)?;
        rows.push(vec![
            nf.name.clone(),
            c.regime.to_string(),
            c.gamma.to_string(),
            fmt_f64(sigma2(&c.small, model, &a)?.value),
            fmt_f64(rho2(&c.critical, model, &a)?.value),
            fmt_f64(beta2(&c.large, model, &a)?.value),
            opt(eta),
            match law.normalization {
                Normalization::SqrtMass => "sqrt_mass".into(),
                Normalization::SqrtTimeMass => "sqrt_time_mass".into(),
            },
            fmt_f64(law.variance),
        ]);
    }
    Ok(digest_line(cfg) + &csv_text(&header, &rows)?)
}

fn simulate(cfg: &ExperimentConfig, threads: Option<usize>) -> Result<Ensemble> {
    let plan = cfg.plan()?;
    let functions = cfg.named_functions();
    match threads {
        Some(n) if n > 0 => run_ensemble_with_threads(plan, &cfg.model, &functions, n),
        _ => run_ensemble(plan, &cfg.model, &functions),
    }
}

/// Ensemble CSV: one row per replica and checkpoint.
pub fn ensemble_csv(cfg: &ExperimentConfig, ens: &Ensemble) -> Result<String> {
    let mut header: Vec<String> = ["replica_id", "t", "survival"].map(String::from).to_vec();
    header.extend(ens.functions.iter().map(|f| f.name.clone()));
    header.push("W_inf_hat".into());
    header.extend(ens.large_indices.iter().map(|idx| {
        let (k, j) = idx.label();
        format!("H_inf_hat_{k}_{j}")
    }));
    let mut rows = Vec::with_capacity(ens.records.len() * ens.plan.checkpoints.len());
    for r in &ens.records {
        for c in &r.checkpoints {
            let mut row = vec![r.replica_id.to_string(), fmt_f64(c.t), u8::from(c.survived).to_string()];
            row.extend(c.readouts.iter().map(|&v| fmt_f64(v)));
            row.push(fmt_f64(r.horizon.w_inf_hat));
            row.extend(r.horizon.h_inf_hat.iter().map(|&v| fmt_f64(v)));
            rows.push(row);
        }
    }
    Ok(digest_line(cfg) + &csv_text(&header, &rows)?)
}

pub fn cmd_simulate(cfg: &ExperimentConfig, threads: Option<usize>) -> Result<String> {
    let ens = simulate(cfg, threads)?;
    ensemble_csv(cfg, &ens)
}

pub fn cmd_verify(cfg: &ExperimentConfig, threads: Option<usize>) -> Result<VerificationReport> {
    let ens = simulate(cfg, threads)?;
    let model: &SuperOUConfig = &cfg.model;
    let a = ACoefficient::from_model(model);
    let clt = cfg.clt_check()?;
    let pairs = cfg.covariance_pairs()?;
    let mut report = verify_all(&ens, clt.as_ref(), &pairs, model, &a, &cfg.tests.settings())?;
    report.config_digest = cfg.digest();
    Ok(report)
}
