use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use expoly_cli::error::{CliError, CliResult};
use expoly_cli::examples::{self, Method, Outcome, DEFAULT_SEED};
use expoly_cli::output::{write_stream, ErrorReport, Format, PointRecord};
use expoly_cli::scene::{self, Job};
use expoly_cli::{bench, table2};

#[derive(Parser)]
#[command(name = "expoly", version, about = "Dynamic evaluation of exponential-polynomial curves and surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Basis,
    Taylor,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExampleName {
    Ex1,
    Ex2,
    Ex3,
    Ex4,
    Ex5,
}

#[derive(clap::Args)]
struct StreamArgs {
    /// Write the point stream here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Append the lifted coordinates to every record.
    #[arg(long)]
    lifted: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a scene file.
    Eval {
        scene: PathBuf,
        #[command(flatten)]
        stream: StreamArgs,
    },
    /// Run one of the built-in examples and report its deviation from the reference.
    Example {
        #[arg(value_enum)]
        name: ExampleName,
        /// Number of steps (ex1 only).
        #[arg(long, default_value_t = 2000)]
        points: usize,
        /// Stepping method (ex1 only).
        #[arg(long, value_enum, default_value = "basis")]
        method: MethodArg,
        /// Seed for the random control nets of ex2 and ex3.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        stream: StreamArgs,
    },
    /// Endpoint deviations of ex1 for both methods over a range of step counts.
    Table2 {
        #[arg(long)]
        csv: bool,
    },
    /// Dynamic evaluation throughput against a per-point reference.
    Bench {
        /// Scene to time; defaults to a seeded degree-8 Bezier curve.
        scene: Option<PathBuf>,
        #[arg(long, default_value_t = 5)]
        repetitions: usize,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Eval { scene, stream } => cmd_eval(&scene, &stream),
        Command::Example { name, points, method, seed, stream } => {
            let method = match method {
                MethodArg::Basis => Method::Basis,
                MethodArg::Taylor => Method::Taylor,
            };
            cmd_example(name, points, method, seed, &stream)
        }
        Command::Table2 { csv } => cmd_table2(csv),
        Command::Bench { scene, repetitions, points, seed } => cmd_bench(scene.as_deref(), repetitions, points, seed),
    }
}

fn io_error(path: &str) -> impl Fn(io::Error) -> CliError + '_ {
    move |error| CliError::Io { path: path.into(), error }
}

fn format_of(f: FormatArg) -> Format {
    match f {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    }
}

fn emit(records: &[PointRecord], stream: &StreamArgs) -> CliResult<()> {
    let format = format_of(stream.format);
    match &stream.output {
        Some(path) => {
            let name = path.display().to_string();
            let file = File::create(path).map_err(io_error(&name))?;
            let mut out = BufWriter::new(file);
            write_stream(&mut out, records, format).map_err(io_error(&name))?;
            out.flush().map_err(io_error(&name))
        }
        None => {
            let mut out = BufWriter::new(io::stdout().lock());
            write_stream(&mut out, records, format).map_err(io_error("stdout"))?;
            out.flush().map_err(io_error("stdout"))
        }
    }
}

/// The report goes to stdout when the stream went to a file, else to stderr.
fn emit_report(value: &serde_json::Value, stream: &StreamArgs) {
    let text = serde_json::to_string_pretty(value).expect("report serializes");
    if stream.output.is_some() {
        println!("{text}");
    } else {
        eprintln!("{text}");
    }
}

fn cmd_eval(path: &Path, stream: &StreamArgs) -> CliResult<()> {
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(io_error(&name))?;
    let job = scene::load(&name, &text)?;
    let records: Vec<PointRecord> = match &job {
        Job::Curve(c) => c.curve.run(&c.run)?.iter().map(|s| PointRecord::from_curve(s, stream.lifted)).collect(),
        Job::Surface(s) => s
            .surface
            .run_schedule(s.start[0], s.start[1], s.start_point.as_deref(), &s.segments)?
            .iter()
            .map(|x| PointRecord::from_surface(x, stream.lifted))
            .collect(),
    };
    emit(&records, stream)
}

fn cmd_example(name: ExampleName, points: usize, method: Method, seed: u64, stream: &StreamArgs) -> CliResult<()> {
    let lifted = stream.lifted;
    let outcome: Outcome = match name {
        ExampleName::Ex1 => examples::example1(points, method, lifted)?,
        ExampleName::Ex2 => examples::example2(seed, lifted)?,
        ExampleName::Ex3 => examples::example3(seed, lifted)?,
        ExampleName::Ex4 => examples::example4(lifted)?,
        ExampleName::Ex5 => examples::example5(lifted)?,
    };
    emit(&outcome.records, stream)?;
    let ErrorReport { max_deviation, runtime_ms, points, method } = outcome.report;
    let mut report = serde_json::json!({
        "max_deviation": max_deviation,
        "runtime_ms": runtime_ms,
        "points": points,
        "method": method,
    });
    for (k, v) in outcome.extra {
        report[k] = v.into();
    }
    emit_report(&report, stream);
    Ok(())
}

fn cmd_table2(csv: bool) -> CliResult<()> {
    let started = Instant::now();
    let rows = table2::compute()?;
    let mut out = io::stdout().lock();
    table2::write(&mut out, &rows, csv).map_err(io_error("stdout"))?;
    if !csv {
        eprintln!("computed in {:.1} ms", started.elapsed().as_secs_f64() * 1e3);
    }
    Ok(())
}

fn cmd_bench(scene_path: Option<&Path>, repetitions: usize, points: Option<usize>, seed: u64) -> CliResult<()> {
    let report = match scene_path {
        None => bench::bezier(seed, points.unwrap_or(bench::DEFAULT_POINTS), repetitions)?,
        Some(path) => {
            let name = path.display().to_string();
            let text = std::fs::read_to_string(path).map_err(io_error(&name))?;
            bench::scene(&scene::load(&name, &text)?, points, repetitions)?
        }
    };
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    Ok(())
}
