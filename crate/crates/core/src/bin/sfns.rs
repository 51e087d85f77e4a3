use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use sfns::catalog::{Family, PolyCoeffs};
use sfns::config::{load_json, run_verify, write_json, EvolveConfig, EvolveKind, VerifyConfig};
use sfns::evolve::{evolve_heat_run, evolve_hm2d, evolve_ns3d_registered, RunRecord};
use sfns::symmetry::{run_symmetry_experiment, ExperimentConfig, Verdict};
use sfns::Error;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_ABORT: u8 = 3;
const EXIT_INCONCLUSIVE: u8 = 4;

#[derive(Parser)]
#[command(name = "sfns", version, about = "Exact incompressible-flow solutions, residual checks and symmetry experiments")]
struct Cli {
    /// Run FFT line transforms on the thread pool (last-bit differences possible).
    #[arg(long, global = true)]
    parallel: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a catalog solution pointwise at random points.
    Verify(VerifyArgs),
    /// Run a pseudo-spectral solver.
    Evolve {
        #[arg(value_enum)]
        kind: KindArg,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a radial persistence/breaking experiment.
    Symmetry {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Hm2d,
    Ns3d,
    Heat,
}

#[derive(Args)]
struct VerifyArgs {
    /// beltrami, poly12perp, poly11, poly22, bump2d, periodic2d, heat2d, radialpair12
    #[arg(long)]
    family: Option<String>,
    /// JSON verify config; flags given on the command line override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Polynomial coefficients, e.g. `f2=1,g4=0.5`.
    #[arg(long)]
    coeffs: Option<String>,
    #[arg(long = "Ra")]
    ra: Option<f64>,
    #[arg(long)]
    amplitude: Option<f64>,
    #[arg(long)]
    nu: Option<f64>,
    /// Comma-separated times.
    #[arg(long, value_delimiter = ',')]
    times: Option<Vec<f64>>,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

fn parse_coeffs(s: &str) -> Result<PolyCoeffs, Error> {
    let mut c = PolyCoeffs::default();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("coefficient `{part}` is not name=value")))?;
        let v: f64 = v.trim().parse().map_err(|_| Error::Config(format!("bad number in `{part}`")))?;
        let slot = match k.trim() {
            "f0" => &mut c.f0,
            "f2" => &mut c.f2,
            "f4" => &mut c.f4,
            "g0" => &mut c.g0,
            "g2" => &mut c.g2,
            "g4" => &mut c.g4,
            other => return Err(Error::Config(format!("unknown coefficient `{other}`"))),
        };
        *slot = v;
    }
    Ok(c)
}

fn resolve_verify(args: &VerifyArgs) -> Result<VerifyConfig, Error> {
    let mut cfg = match (&args.config, &args.family) {
        (Some(p), _) => load_json::<VerifyConfig>(p)?,
        (None, Some(f)) => VerifyConfig::new(f.parse::<Family>()?),
        (None, None) => return Err(Error::Config("--family or --config is required".into())),
    };
    if let (Some(_), Some(f)) = (&args.config, &args.family) {
        cfg.family = f.parse()?;
    }
    macro_rules! set {
        ($($field:ident),*) => {$(
            if let Some(v) = args.$field.clone() {
                cfg.$field = v;
            }
        )*};
    }
    set!(lambda, alpha, beta, ra, amplitude, nu, times, points, seed, tol);
    if let Some(c) = &args.coeffs {
        cfg.coeffs = parse_coeffs(c)?;
    }
    Ok(cfg)
}

fn config_echo_path(out: &Path, name: &str) -> PathBuf {
    out.parent().unwrap_or(Path::new(".")).join(name)
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, Error> {
    let cfg = resolve_verify(&args)?;
    write_json(&config_echo_path(&args.out, "verify_config.json"), &cfg)?;
    let reports = run_verify(&cfg)?;
    write_json(&args.out, &reports)?;
    for r in &reports {
        log::info!("{}: {:.3e} relative (tol {:.1e}) {}", r.check, r.relative(), r.tol, if r.passed { "ok" } else { "FAIL" });
    }
    Ok(if reports.iter().all(|r| r.passed) { 0 } else { EXIT_FAIL })
}

fn finish_run(run: &RunRecord, out: &Path) -> Result<u8, Error> {
    run.write(out)?;
    if let Some(a) = run.abort {
        log::error!("CFL abort at t = {}; {} snapshots kept", a.t, run.snapshots.len());
        return Ok(EXIT_ABORT);
    }
    Ok(0)
}

fn cmd_evolve(kind: KindArg, config: &Path, out: &Path) -> Result<u8, Error> {
    let cfg: EvolveConfig = load_json(config)?;
    std::fs::create_dir_all(out)?;
    write_json(&out.join("config.json"), &cfg)?;
    let kind = match kind {
        KindArg::Hm2d => EvolveKind::Hm2d,
        KindArg::Ns3d => EvolveKind::Ns3d,
        KindArg::Heat => EvolveKind::Heat,
    };
    let base = config.parent().unwrap_or(Path::new("."));
    let f0 = cfg.initial_field(kind, base)?;
    let run = match kind {
        EvolveKind::Hm2d => evolve_hm2d(&f0, &cfg.solver)?,
        EvolveKind::Ns3d => evolve_ns3d_registered(&f0, &cfg.solver, cfg.frames)?,
        EvolveKind::Heat => evolve_heat_run(&f0, &cfg.solver)?,
    };
    log::info!("energy imbalance {:.3e}", run.energy_report().max_relative_imbalance());
    finish_run(&run, out)
}

fn cmd_symmetry(config: &Path, out: &Path) -> Result<u8, Error> {
    let cfg: ExperimentConfig = load_json(config)?;
    std::fs::create_dir_all(out)?;
    write_json(&out.join("config.json"), &cfg)?;
    let outcome = run_symmetry_experiment(&cfg)?;
    write_json(&out.join("prediction.json"), &outcome.prediction)?;
    write_json(&out.join("verdict.json"), &outcome.summary())?;
    std::fs::write(out.join("anisotropy.csv"), outcome.to_csv())?;
    outcome.run.write(&out.join("run"))?;
    println!("{}", json!({"verdict": outcome.verdict, "predicted": outcome.prediction.predicted}));
    if outcome.run.abort.is_some() {
        return Ok(EXIT_ABORT);
    }
    Ok(match outcome.verdict {
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
        _ => 0,
    })
}

fn exit_for(err: &Error) -> u8 {
    match err {
        Error::Cfl { .. } => EXIT_ABORT,
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("SFNS_LOG", "error")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    sfns::grid::fft::set_parallel(cli.parallel);
    let result = match cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::Evolve { kind, config, out } => cmd_evolve(kind, &config, &out),
        Command::Symmetry { config, out } => cmd_symmetry(&config, &out),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}
