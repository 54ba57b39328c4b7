//! `prefrules`: mine label ranking and pairwise association rules from CSV
//! data, predict with a mined model, and run cross-validated evaluations.

mod config;

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use prefrules_core::harness::{
    evaluate_cv, parse_grid, sweep, train_model, write_report_csv, write_sweep_csv, SweepAxis,
};
use prefrules_core::lrar::{Aggregation, LrarModel};
use prefrules_core::par::{mine_par, write_par_jsonl};
use prefrules_core::{Dataset, Error};
use serde_json::json;

use config::{CvArgs, DataArgs, LrarArgs, MinConfArg, ParArgs};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Core(e.into())
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(e) => match e {
                Error::Argument(_) => 2,
                Error::Parse { .. }
                | Error::Schema(_)
                | Error::UnsupportedTarget { .. }
                | Error::InvalidRanking(_)
                | Error::InvalidOrder(_)
                | Error::EmptyInput(_)
                | Error::Io(_) => 3,
                Error::ModelMismatch(_) => 4,
                _ => 1,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Config(m) => format!("configuration: {m}"),
            CliError::Core(e) => e.to_string(),
        }
    }
}

#[derive(Parser)]
#[command(name = "prefrules", version, about = "Preference-rule mining")]
struct Cli {
    /// Worker threads [default: all cores]. Output does not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mine label ranking association rules into a JSON-lines model.
    MineLrar {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        lrar: LrarArgs,
        /// Model output [default: stdout].
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write the JSON summary here.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Mine pairwise association rules into JSON lines, sorted by lift.
    MinePar {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        par: ParArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Predict one ranking per input row with a mined model.
    Predict {
        /// Model written by mine-lrar.
        #[arg(short, long)]
        model: PathBuf,
        /// Input CSV; the target column is not needed.
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, default_value = "average")]
        aggregation: Aggregation,
        /// Break ties so every prediction is a strict order.
        #[arg(long)]
        strict: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Cross-validated mean Kendall tau.
    Evaluate {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        lrar: LrarArgs,
        #[command(flatten)]
        cv: CvArgs,
        /// JSON report [default: stdout].
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Per-fold CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Evaluate over a grid of theta or minsup values.
    Sweep {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        lrar: LrarArgs,
        #[command(flatten)]
        cv: CvArgs,
        /// Parameter to vary: theta or minsup.
        #[arg(long = "sweep")]
        axis: SweepAxis,
        /// `lo:hi:step` (inclusive) or a comma-separated list.
        #[arg(long)]
        grid: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// One CSV row per grid point.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Dataset statistics (n, m, k, proportion of distinct rankings).
    Stats {
        #[command(flatten)]
        data: DataArgs,
    },
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn load(data: &config::Data) -> Result<Dataset, CliError> {
    let file = File::open(&data.input)
        .map_err(|e| Error::Io(format!("{}: {e}", data.input.display())))?;
    Ok(Dataset::parse_csv(BufReader::new(file), &data.target)?)
}

fn discretized(ds: Dataset, bins: usize) -> Result<Dataset, CliError> {
    Ok(if ds.is_categorical() {
        ds
    } else {
        ds.equal_width_discretize(bins)?
    })
}

fn emit_summary(summary: serde_json::Value, path: Option<&Path>) -> Result<(), CliError> {
    let text = serde_json::to_string(&summary).expect("summary serializes");
    eprintln!("{text}");
    if let Some(p) = path {
        std::fs::write(p, text + "\n")?;
    }
    Ok(())
}

fn write_json<T: serde::Serialize>(value: &T, path: Option<&Path>) -> Result<(), CliError> {
    let mut out = open_output(path)?;
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(CliError::Config("--jobs must be positive".to_string()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    match cli.command {
        Command::MineLrar {
            data,
            lrar,
            output,
            summary,
        } => {
            let file = data.file()?;
            let data = data.resolve(&file)?;
            let (params, minconf) = lrar.resolve(&file, MinConfArg::Fixed(0.5))?;
            let ds = load(&data)?;
            let model = train_model(&ds, &params, minconf, data.bins)?;
            let mut out = open_output(output.as_deref())?;
            model.write_jsonl(&mut out)?;
            out.flush()?;
            emit_summary(
                json!({
                    "n_rules": model.rules.len(),
                    "coverage": model.training_coverage().unwrap_or(0.0),
                    "minconf_used": model.params.minconf,
                    "default_ranking": model.default_ranking.to_text(&model.label_names),
                }),
                summary.as_deref(),
            )
        }
        Command::MinePar {
            data,
            par,
            output,
            summary,
        } => {
            let file = data.file()?;
            let data = data.resolve(&file)?;
            let params = par.resolve(&file)?;
            let ds = discretized(load(&data)?, data.bins)?;
            let rules = mine_par(&ds, &params)?;
            let mut out = open_output(output.as_deref())?;
            write_par_jsonl(&rules, ds.schema(), ds.label_names(), &mut out)?;
            out.flush()?;
            emit_summary(
                json!({
                    "n_rules": rules.len(),
                    "max_lift": rules.first().map(|r| r.lift),
                }),
                summary.as_deref(),
            )
        }
        Command::Predict {
            model,
            input,
            aggregation,
            strict,
            output,
        } => {
            let model_file = File::open(&model)
                .map_err(|e| Error::Io(format!("{}: {e}", model.display())))?;
            let model = LrarModel::read_jsonl(BufReader::new(model_file))?;
            let mut rdr = csv::ReaderBuilder::new()
                .trim(csv::Trim::All)
                .from_path(&input)
                .map_err(|e| Error::Io(format!("{}: {e}", input.display())))?;
            let header: Vec<String> = rdr
                .headers()
                .map_err(|e| Error::Parse { row: 0, message: e.to_string() })?
                .iter()
                .map(str::to_string)
                .collect();
            let mut records = Vec::new();
            for (i, rec) in rdr.records().enumerate() {
                let rec = rec.map_err(|e| Error::Parse { row: i + 1, message: e.to_string() })?;
                records.push(rec.iter().map(str::to_string).collect());
            }
            let encoded = model.encode_records(&header, &records)?;
            let mut w = csv::Writer::from_writer(open_output(output.as_deref())?);
            let csv_err = |e: csv::Error| Error::Io(e.to_string());
            w.write_record(["prediction"]).map_err(csv_err)?;
            for x in &encoded {
                let p = model.predict(x, aggregation, strict);
                w.write_record([p.to_text(&model.label_names)]).map_err(csv_err)?;
            }
            w.flush()?;
            Ok(())
        }
        Command::Evaluate {
            data,
            lrar,
            cv,
            output,
            csv,
        } => {
            let file = data.file()?;
            let data = data.resolve(&file)?;
            let (params, minconf) = lrar.resolve(&file, MinConfArg::Auto)?;
            let cfg = cv.resolve(&file, params, minconf, data.bins)?;
            let ds = load(&data)?;
            let report = evaluate_cv(&ds, &cfg)?;
            write_json(&report, output.as_deref())?;
            if let Some(p) = csv {
                write_report_csv(&report, File::create(p)?)?;
            }
            Ok(())
        }
        Command::Sweep {
            data,
            lrar,
            cv,
            axis,
            grid,
            output,
            csv,
        } => {
            let file = data.file()?;
            let data = data.resolve(&file)?;
            let (params, minconf) = lrar.resolve(&file, MinConfArg::Auto)?;
            let cfg = cv.resolve(&file, params, minconf, data.bins)?;
            let grid = parse_grid(&grid).map_err(|e| CliError::Config(e.to_string()))?;
            let ds = load(&data)?;
            let result = sweep(&ds, axis, &grid, &cfg).map_err(|e| match e {
                Error::Argument(m) => CliError::Config(m),
                other => CliError::Core(other),
            })?;
            write_json(&result, output.as_deref())?;
            if let Some(p) = csv {
                write_sweep_csv(&result, File::create(p)?)?;
            }
            Ok(())
        }
        Command::Stats { data } => {
            let file = data.file()?;
            let data = data.resolve(&file)?;
            let stats = load(&data)?.stats()?;
            write_json(&stats, None)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
