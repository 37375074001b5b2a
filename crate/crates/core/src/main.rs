use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use kinefault::harness::{
    parse_config, render_config, run_scenario, write_traces, Scenario, PRESETS,
};
use kinefault::Error;

#[derive(Parser)]
#[command(
    name = "kinefault",
    version,
    about = "Sensor fault detection from kinematic consistency residuals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a scenario, run the detector and write traces.
    Run(RunArgs),
    /// Built-in scenarios.
    Presets {
        #[command(subcommand)]
        action: PresetAction,
    },
    /// Check a scenario file without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false, id = "source")]
struct Source {
    /// Scenario file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in scenario name.
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    source: Source,
    /// Overrides the noise seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the output directory.
    #[arg(long)]
    output_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum PresetAction {
    /// Print preset names.
    List,
    /// Print a preset as a scenario file.
    Show { name: String },
}

// A closed pipe (`kinefault presets list | head -1`) is not an error.
macro_rules! out {
    ($($arg:tt)*) => {{
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io { .. } => 3,
        Error::Parse { .. }
        | Error::Validation { .. }
        | Error::InvalidConfig(_)
        | Error::InvalidArgument(_) => 2,
        _ => 1,
    }
}

fn describe(name: &str) -> &'static str {
    match name {
        "example1" => "z-gyro bias of 1 rad/s from t = 40 s",
        "example2" => "x-accelerometer drift of 0.05 g/s from t = 40 s",
        "healthy" => "no fault",
        _ => "",
    }
}

fn run(args: RunArgs) -> Result<bool, Error> {
    let mut scenario = match (&args.source.config, &args.source.preset) {
        (Some(path), _) => parse_config(path)?,
        (None, Some(name)) => Scenario::preset(name)?,
        (None, None) => unreachable!("clap enforces one source"),
    };
    if let Some(seed) = args.seed {
        scenario.noise.seed = seed;
    }
    if let Some(dir) = args.output_dir {
        scenario.output_dir = dir;
    }
    let started = Instant::now();
    let out = run_scenario(&scenario)?;
    let elapsed = started.elapsed();
    let written = write_traces(&out, &scenario.output_dir)?;

    let s = &out.summary;
    out!("scenario {} (seed {})", s.scenario, s.seed);
    match &s.aborted {
        Some(a) => out!("aborted at step {}: {}", a.step, a.reason),
        None => out!(
            "completed {} steps in {:.2} s",
            s.steps_completed,
            elapsed.as_secs_f64()
        ),
    }
    match &s.alarm {
        Some(v) => out!(
            "first alarm: {} (onset step {}, confirmed step {})",
            v.verdict,
            v.onset,
            v.confirmed
        ),
        None => out!("first alarm: none"),
    }
    match &s.settled {
        Some(v) => out!("settled verdict: {} (since step {})", v.verdict, v.onset),
        None => out!(
            "settled verdict: none (last verdict held fewer than {} steps)",
            scenario.latch_steps
        ),
    }
    out!("traces in {}", scenario.output_dir.display());
    for p in written {
        log_path(&p);
    }
    Ok(s.aborted.is_none())
}

fn log_path(p: &std::path::Path) {
    if let Some(name) = p.file_name() {
        out!("  {}", name.to_string_lossy());
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Presets { action } => match action {
            PresetAction::List => {
                for name in PRESETS {
                    out!("{name:<10} {}", describe(name));
                }
                Ok(true)
            }
            PresetAction::Show { name } => Scenario::preset(&name).map(|s| {
                let _ = write!(std::io::stdout().lock(), "{}", render_config(&s));
                true
            }),
        },
        Command::Validate { config } => parse_config(&config).map(|s| {
            out!(
                "{}: ok ({} steps, {})",
                config.display(),
                s.trajectory.steps(),
                match s.fault() {
                    Some(f) => format!("{} {} fault", f.sensor.name(), f.kind.name()),
                    None => "no fault".into(),
                }
            );
            true
        }),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
