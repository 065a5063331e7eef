use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dqrr::fedosov::{extract_theta, fedosov_recursion, FormalForm, ScalarFormJson};
use dqrr::harness::{emit, env_seed, run_suite, SuiteConfig, SuiteName};
use dqrr::scalars::{series_expand, SeriesName};

#[derive(Parser)]
#[command(name = "dqrr", version, about = "Exact verification of the algebraic index identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and print its report.
    Verify {
        /// complexes, weyl, koszul, brodzki, fundamental, liecw, fedosov or all
        suite: String,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        cap: Option<usize>,
        /// Truncation order M of the fundamental class.
        #[arg(long)]
        order: Option<u32>,
        #[arg(long)]
        trials: Option<usize>,
        /// Defaults to DQRR_SEED, then 7.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        format: Option<String>,
        /// Golden file for the fundamental-class table.
        #[arg(long)]
        golden: Option<PathBuf>,
        /// Plain key=value configuration, applied before the flags.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Include wall-clock timing in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Print the coefficients of a named series as exact rationals.
    Series {
        /// AHAT, SINH_RATIO, EXP or AHAT_INV_ETHETA_FACTOR
        name: String,
        #[arg(long)]
        order: u32,
    },
    /// Run the Fedosov recursion for a closed scalar 2-form given as JSON.
    Fedosov {
        #[arg(long)]
        theta: PathBuf,
        #[arg(long)]
        depth: usize,
    },
}

fn verify(args: Command) -> Result<bool, String> {
    let Command::Verify { suite, d, cap, order, trials, seed, format, golden, config, timing } = args else {
        unreachable!()
    };
    let suite: SuiteName = suite.parse().map_err(|e| format!("{e}"))?;
    let mut cfg = SuiteConfig::with_seed(suite, env_seed().map_err(|e| e.to_string())?);
    if let Some(path) = config {
        let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        cfg.apply_file(&text).map_err(|e| e.to_string())?;
        cfg.suite = suite;
    }
    let mut set = |k: &str, v: Option<String>| v.map_or(Ok(()), |v| cfg.set(k, &v).map_err(|e| e.to_string()));
    set("d", d.map(|x| x.to_string()))?;
    set("order", order.map(|x| x.to_string()))?;
    set("cap", cap.map(|x| x.to_string()))?;
    set("trials", trials.map(|x| x.to_string()))?;
    set("seed", seed.map(|x| x.to_string()))?;
    set("format", format)?;
    set("golden", golden.map(|p| p.display().to_string()))?;
    if timing {
        cfg.timing = true;
    }
    let report = run_suite(&cfg).map_err(|e| e.to_string())?;
    print!("{}", emit(&report, cfg.format));
    Ok(report.passed())
}

fn series(name: &str, order: u32) -> Result<bool, String> {
    let name: SeriesName = name.parse().map_err(|e| format!("{e}"))?;
    let s = series_expand(name, order);
    for (&(i, j), q) in s.terms() {
        if name == SeriesName::AhatInvEthetaFactor {
            println!("z^{i} theta^{j}\t{q}");
        } else {
            println!("z^{i}\t{q}");
        }
    }
    Ok(true)
}

fn fedosov(theta: &PathBuf, depth: usize) -> Result<bool, String> {
    let text = std::fs::read_to_string(theta).map_err(|e| format!("{}: {e}", theta.display()))?;
    let table: ScalarFormJson = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let form = FormalForm::from_scalar_table(&table, depth).map_err(|e| e.to_string())?;
    let a = fedosov_recursion(&form).map_err(|e| e.to_string())?;
    let back = extract_theta(&a).map_err(|e| e.to_string())?;
    let out = serde_json::json!({
        "depth": depth,
        "flat": a.is_fedosov(),
        "theta_recovered": back == form,
        "residual_weights": a.residual_weights,
        "connection": a.lift().to_json(),
    });
    println!("{}", serde_json::to_string_pretty(&out).map_err(|e| e.to_string())?);
    Ok(a.is_fedosov() && back == form)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        c @ Command::Verify { .. } => verify(c),
        Command::Series { name, order } => series(&name, order),
        Command::Fedosov { theta, depth } => fedosov(&theta, depth),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
