//! Command-line front end.
//!
//! Exit codes: 0 success, 1 configuration error, 2 runtime error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cv2x_mec::engine::{Component, SimulationPlan};
use cv2x_mec_sim::{
    emit_csv, emit_plot, parse_config, run_sweep, ConfigOverrides, Runner, SimError,
    SweepParameter, SweepResult, SweepSpec,
};

#[derive(Parser)]
#[command(
    name = "cv2x-mec",
    version,
    about = "VRU-safety latency: distant cloud vs MEC"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// JSON config file; defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Replications per sweep point.
    #[arg(long, global = true)]
    replications: Option<u64>,
    /// Parameter profile: figure-calibrated or table-literal.
    #[arg(long, global = true)]
    profile: Option<String>,
    /// Output directory for CSV and SVG files.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured scenario once and print the latency summary.
    Run,
    /// Sweep the number of VRUs.
    SweepVru(SweepArgs),
    /// Sweep the vehicle intensity [vehicles/m].
    SweepDensity(SweepArgs),
    /// Sweep the vehicle cluster size.
    SweepCluster(SweepArgs),
    /// Run all three reference sweeps and write their CSV and SVG files.
    ReproducePaper,
}

#[derive(Args)]
struct SweepArgs {
    /// Comma-separated sweep values (default: the reference values).
    #[arg(long, value_delimiter = ',')]
    values: Option<Vec<f64>>,
}

fn output_stem(p: SweepParameter) -> &'static str {
    match p {
        SweepParameter::VruCount => "vru_sweep",
        SweepParameter::VehicleIntensity => "density_sweep",
        SweepParameter::ClusterSize => "cluster_sweep",
    }
}

fn load_plan(g: &Global) -> Result<SimulationPlan, SimError> {
    let overrides = ConfigOverrides {
        profile: g.profile.clone(),
        seed: g.seed,
        replications: g.replications,
    };
    let (text, origin) = match &g.config {
        Some(path) => (
            fs::read_to_string(path).map_err(|source| cv2x_mec_sim::ConfigError::Read {
                path: path.clone(),
                source,
            })?,
            path.display().to_string(),
        ),
        None => (String::new(), "<defaults>".to_string()),
    };
    Ok(parse_config(&text, &origin, &overrides)?)
}

fn print_summary(plan: &SimulationPlan, runner: &Runner) -> Result<(), SimError> {
    let stats = runner.run(plan)?;
    println!("{:<10} {:>12} {:>12}", "component", "mean_ms", "ci95_ms");
    for c in Component::ALL {
        let s = stats.get(c);
        println!(
            "{:<10} {:>12.4} {:>12.4}",
            c.name(),
            s.mean * 1e3,
            s.ci95_half_width * 1e3
        );
    }
    println!("gain_pct   {:>12.2}", stats.gain_percent());
    println!("samples    {:>12}", stats.ul.count);
    Ok(())
}

fn write_outputs(result: &SweepResult, out_dir: &Path) -> Result<(), SimError> {
    fs::create_dir_all(out_dir).map_err(|source| SimError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let stem = output_stem(result.parameter);
    let csv = out_dir.join(format!("{stem}.csv"));
    let svg = out_dir.join(format!("{stem}.svg"));
    emit_csv(result, &csv)?;
    emit_plot(result, &svg)?;
    eprintln!("wrote {} and {}", csv.display(), svg.display());
    Ok(())
}

/// Reports failed points; returns the exit code they imply, if any.
fn failure_code(result: &SweepResult) -> Option<u8> {
    let mut code = None;
    for (value, e) in result.failures() {
        eprintln!("{} = {value}: {}", result.parameter, e.message);
        let c = if e.is_config { 1 } else { 2 };
        code = Some(code.map_or(c, |prev: u8| prev.max(c)));
    }
    code
}

fn sweep(
    parameter: SweepParameter,
    values: Option<Vec<f64>>,
    base: SimulationPlan,
    runner: &Runner,
    out_dir: &Path,
) -> Result<Option<u8>, SimError> {
    let spec = match values {
        Some(v) => SweepSpec::new(parameter, v, base)?,
        None => SweepSpec::reference(parameter, base),
    };
    let result = run_sweep(&spec, runner)?;
    write_outputs(&result, out_dir)?;
    Ok(failure_code(&result))
}

fn run(cli: Cli) -> Result<u8, SimError> {
    let plan = load_plan(&cli.global)?;
    let runner = Runner::new(cli.global.workers)?;
    let out = &cli.global.out_dir;
    let code = match cli.command {
        Command::Run => {
            print_summary(&plan, &runner)?;
            None
        }
        Command::SweepVru(a) => sweep(SweepParameter::VruCount, a.values, plan, &runner, out)?,
        Command::SweepDensity(a) => sweep(
            SweepParameter::VehicleIntensity,
            a.values,
            plan,
            &runner,
            out,
        )?,
        Command::SweepCluster(a) => {
            sweep(SweepParameter::ClusterSize, a.values, plan, &runner, out)?
        }
        Command::ReproducePaper => {
            let mut code = None;
            for p in [
                SweepParameter::VruCount,
                SweepParameter::VehicleIntensity,
                SweepParameter::ClusterSize,
            ] {
                if let Some(c) = sweep(p, None, plan, &runner, out)? {
                    code = Some(code.map_or(c, |prev: u8| prev.max(c)));
                }
            }
            code
        }
    };
    Ok(code.unwrap_or(0))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // bad arguments are configuration errors; --help/--version are not
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
