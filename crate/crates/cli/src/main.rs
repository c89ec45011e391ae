use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use bicmb::analysis::{diversity_report, slope_of_points, zeta_min};
use bicmb::pstbc::PerfectCodeParams;
use bicmb::selftest::{self, SelfTestOptions};
use bicmb::sim::{read_csv, snr_range, write_csv, Manifest, Simulator, SystemConfig};
use clap::{Args, Parser, Subcommand};

/// BICMB-PC link-level simulator.
#[derive(Parser)]
#[command(name = "bicmb", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a BER sweep and write `ber.csv` and `manifest.json`.
    Sweep(SweepArgs),
    /// Print the predicted diversity gain, optionally against a simulated CSV.
    Analyze(AnalyzeArgs),
    /// Run the fast internal consistency checks.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Replaces `master_seed` from the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, allow_hyphen_values = true)]
    snr_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    snr_max: Option<f64>,
    #[arg(long)]
    snr_step: Option<f64>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    config: PathBuf,
    /// BER CSV from a previous sweep.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Compare even when the CSV was produced by a different config.
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, hide = true)]
    corrupt_generator: bool,
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn runtime(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

fn load_config(path: &Path) -> Result<SystemConfig, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
    SystemConfig::from_text(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn apply_overrides(cfg: &mut SystemConfig, args: &SweepArgs) -> Result<(), Failure> {
    if let Some(seed) = args.seed {
        cfg.master_seed = seed;
    }
    if args.snr_min.is_some() || args.snr_max.is_some() || args.snr_step.is_some() {
        let grid = &cfg.snr_grid_db;
        let min = args.snr_min.unwrap_or(grid[0]);
        let max = args.snr_max.unwrap_or(grid[grid.len() - 1]);
        let step = args
            .snr_step
            .unwrap_or(if grid.len() > 1 { grid[1] - grid[0] } else { 1.0 });
        cfg.snr_grid_db = snr_range(min, step, max).map_err(usage)?;
    }
    cfg.validate().map_err(|e| usage(e.to_string()))
}

fn sweep(args: SweepArgs) -> Result<(), Failure> {
    let mut cfg = load_config(&args.config)?;
    apply_overrides(&mut cfg, &args)?;
    let sim = Simulator::new(&cfg, args.workers).map_err(|e| usage(e.to_string()))?;
    std::fs::create_dir_all(&args.out)
        .map_err(|e| runtime(format!("cannot create {}: {e}", args.out.display())))?;

    println!("config hash {}", cfg.hash());
    println!("{:>8} {:>8} {:>12} {:>12} {:>8}", "snr_db", "frames", "bit_errors", "ber", "slope");
    let mut prev: Option<(f64, f64)> = None;
    let curve = sim
        .run_sweep_with(|p| {
            let slope = match prev {
                Some((s0, b0)) if b0 > 0.0 && p.ber > 0.0 => {
                    format!("{:.2}", -(p.ber.log10() - b0.log10()) / ((p.snr_db - s0) / 10.0))
                }
                _ => "-".into(),
            };
            println!("{:>8} {:>8} {:>12} {:>12.4e} {:>8}", p.snr_db, p.frames, p.bit_errors, p.ber, slope);
            prev = Some((p.snr_db, p.ber));
        })
        .map_err(|e| runtime(e.to_string()))?;

    let csv = args.out.join("ber.csv");
    let manifest = args.out.join("manifest.json");
    write_csv(&curve, &csv).map_err(|e| runtime(format!("{}: {e}", csv.display())))?;
    Manifest::new(&cfg, &curve, args.workers)
        .write(&manifest)
        .map_err(|e| runtime(format!("{}: {e}", manifest.display())))?;
    println!("predicted diversity gain {:.4}", curve.diversity.kappa);
    println!("wrote {} and {}", csv.display(), manifest.display());
    Ok(())
}

fn analyze(args: AnalyzeArgs) -> Result<(), Failure> {
    let cfg = load_config(&args.config)?;
    let report = diversity_report(&cfg).map_err(|e| usage(e.to_string()))?;
    println!("kappa = {}", report.kappa);
    println!("theta = {:e}", report.theta_scale);
    println!("L_t = {}", report.l_total);
    let params = PerfectCodeParams::build(cfg.d).map_err(|e| runtime(e.to_string()))?;
    let spectrum = zeta_min(&params, &cfg.modulation.constellation());
    println!(
        "zeta_min = {:e}{}",
        spectrum.zeta_min,
        if spectrum.exact { "" } else { " (sampled estimate)" }
    );

    let Some(path) = args.csv else { return Ok(()) };
    let table = read_csv(&path).map_err(|e| runtime(format!("{}: {e}", path.display())))?;
    match &table.config_hash {
        Some(h) if *h != cfg.hash() && !args.force => {
            return Err(usage(format!(
                "{} was produced by config {h}, not {}; pass --force to compare anyway",
                path.display(),
                cfg.hash()
            )))
        }
        Some(_) => {}
        None => eprintln!("warning: {} carries no config hash", path.display()),
    }
    let slope = slope_of_points(&table.snr_ber_pairs(), None).map_err(|e| runtime(e.to_string()))?;
    println!("empirical slope = {slope:.4}");
    println!("slope / kappa = {:.2}", slope / report.kappa);
    Ok(())
}

fn run_selftest(args: SelftestArgs) -> Result<(), Failure> {
    let start = Instant::now();
    let results = selftest::run(SelfTestOptions {
        corrupt_generator: args.corrupt_generator,
    });
    for r in &results {
        println!("{} {}: {}", if r.passed { "ok  " } else { "FAIL" }, r.name, r.detail);
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed > 60.0 {
        eprintln!("warning: selftest took {elapsed:.1} s");
    }
    let failed: Vec<&str> = results.iter().filter(|r| !r.passed).map(|r| r.name.as_str()).collect();
    if failed.is_empty() {
        println!("all {} checks passed in {elapsed:.1} s", results.len());
        Ok(())
    } else {
        Err(runtime(format!("failed checks: {}", failed.join(", "))))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep(a) => sweep(a),
        Command::Analyze(a) => analyze(a),
        Command::Selftest(a) => run_selftest(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
