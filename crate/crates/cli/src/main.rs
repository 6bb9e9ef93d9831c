use clap::{Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use xdlab_core::certify::{series_rows, specfun_rows};
use xdlab_runner::acceptance::Suite;
use xdlab_runner::config::load_validation;
use xdlab_runner::{run, CliError, Overrides};

#[derive(Parser)]
#[command(name = "xdlab", version = xdlab_runner::VERSION, about = "X-duplex relay performance sweeps and validation")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Monte-Carlo trials per point, overriding the config.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    trials: Option<u64>,
    /// RNG seed, overriding the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,
    /// Multiplier on every tolerance.
    #[arg(long, global = true, allow_negative_numbers = true)]
    tol_scale: Option<f64>,
    /// Relative bias on K1 in the analytic CDF (sensitivity check for validate).
    #[arg(long, global = true, hide = true, default_value_t = 0.0)]
    k1_bias: f64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a sweep and write CSVs plus a manifest.
    Run { config: PathBuf },
    /// Run the acceptance suite.
    Validate { config: PathBuf },
    /// Print special functions next to their quadrature oracles.
    SpecfunCheck,
}

// Worker count from `XDLAB_THREADS`; `None` leaves rayon's default.
fn thread_count(var: Option<String>) -> Result<Option<usize>, CliError> {
    let Some(v) = var else {
        return Ok(None);
    };
    v.parse()
        .ok()
        .filter(|&n| n > 0)
        .map(Some)
        .ok_or_else(|| CliError::Config(format!("XDLAB_THREADS: expected a positive integer, got {v:?}")))
}

fn init_threads() -> Result<(), CliError> {
    let Some(n) = thread_count(std::env::var("XDLAB_THREADS").ok())? else {
        return Ok(());
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::io("thread pool", e))
}

fn specfun_table() -> Result<String, CliError> {
    let mut rows = specfun_rows().map_err(|e| CliError::Numeric {
        context: "special-function oracle".into(),
        source: e,
    })?;
    rows.extend(series_rows().map_err(|e| CliError::Numeric {
        context: "series oracle".into(),
        source: e,
    })?);
    let mut out = format!(
        "{:<24} {:<36} {:>24} {:>24} {:>10}\n",
        "function", "args", "value", "oracle", "rel_err"
    );
    for r in &rows {
        out += &format!(
            "{:<24} {:<36} {:>24.16e} {:>24.16e} {:>10.2e}\n",
            r.function,
            r.args,
            r.value,
            r.oracle,
            r.rel_err()
        );
    }
    Ok(out)
}

fn validate(cli: &Cli, config: &Path) -> Result<bool, CliError> {
    let mut spec = load_validation(config)?;
    if let Some(t) = cli.trials {
        spec.trials = t;
    }
    if let Some(s) = cli.seed {
        spec.seed = s;
    }
    if let Some(s) = cli.tol_scale {
        spec.tol_scale = s;
    }
    if !(spec.tol_scale > 0.0 && spec.tol_scale.is_finite()) {
        return Err(CliError::Config(format!(
            "--tol-scale: must be positive, got {}",
            spec.tol_scale
        )));
    }
    let suite = Suite {
        trials: spec.trials,
        seed: spec.seed,
        tol_scale: spec.tol_scale,
        k1_bias: cli.k1_bias,
        exe: std::env::current_exe().ok(),
        work_dir: cli.out_dir.clone(),
    };
    println!(
        "validation: {} trials, seed {}, tol_scale {}, k1_bias {}",
        suite.trials, suite.seed, suite.tol_scale, suite.k1_bias
    );
    let mut report = Vec::new();
    let mut all = true;
    for outcome in suite.run_all() {
        let c = outcome?;
        println!("{c}");
        all &= c.pass;
        report.push(c);
    }
    let path = cli.out_dir.join("validation.json");
    let text = serde_json::json!({
        "version": xdlab_runner::VERSION,
        "config": spec,
        "k1_bias": suite.k1_bias,
        "pass": all,
        "criteria": report,
    });
    std::fs::create_dir_all(&cli.out_dir).map_err(|e| CliError::io(cli.out_dir.display(), e))?;
    std::fs::write(
        &path,
        serde_json::to_string_pretty(&text).expect("report serializes") + "\n",
    )
    .map_err(|e| CliError::io(path.display(), e))?;
    Ok(all)
}

fn dispatch(cli: &Cli) -> Result<bool, CliError> {
    match &cli.command {
        Cmd::Run { config } => {
            if let Some(s) = cli.tol_scale {
                if !(s > 0.0 && s.is_finite()) {
                    return Err(CliError::Config(format!("--tol-scale: must be positive, got {s}")));
                }
            }
            let overrides = Overrides {
                trials: cli.trials,
                seed: cli.seed,
                tol_scale: cli.tol_scale,
            };
            let out = run(config, &overrides, &cli.out_dir)?;
            for p in &out.csv {
                println!("{}", p.display());
            }
            println!("{}", out.manifest.display());
            Ok(true)
        }
        Cmd::Validate { config } => validate(cli, config),
        Cmd::SpecfunCheck => {
            print!("{}", specfun_table()?);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match init_threads().and_then(|()| dispatch(&cli)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

#[cfg(test)]
mod tests;
