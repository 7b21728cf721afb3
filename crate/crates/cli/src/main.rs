use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use qsvm_lab::experiment::{
    emit_report, parse_shots, run_experiment, DatasetKind, ExperimentConfig, LayerRange, Method,
    Preprocess, ReportFormat,
};
use qsvm_lab::qsvm::Shots;
use qsvm_lab::{Error, ErrorClass};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DatasetArg {
    SixNine,
    Banknote,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Qsvm,
    Innerprod,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PreprocessArg {
    Averages,
    Kmeans,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

fn parse_switch(s: &str) -> Result<bool, String> {
    match s.to_ascii_lowercase().as_str() {
        "on" | "true" | "yes" | "1" => Ok(true),
        "off" | "false" | "no" | "0" => Ok(false),
        _ => Err(format!("{s:?} is not on/off")),
    }
}

/// Run QSVM and overlap-classifier experiments on the 6/9 and banknote tasks.
#[derive(Debug, Parser)]
#[command(name = "qsvm-lab", version)]
struct Args {
    #[arg(long, value_enum)]
    dataset: DatasetArg,

    /// Directory with train.csv/test.csv (six-nine) or the banknote CSV file.
    #[arg(long)]
    data_path: Option<PathBuf>,

    #[arg(long, value_enum)]
    method: MethodArg,

    /// Training-vector selection for banknote runs.
    #[arg(long, value_enum)]
    preprocess: Option<PreprocessArg>,

    #[arg(long, default_value_t = ExperimentConfig::DEFAULT_GAMMA)]
    gamma: f64,

    /// Layer count `L` or inclusive range `A..B` (innerprod only).
    #[arg(long, default_value = "1", value_parser = |s: &str| s.parse::<LayerRange>())]
    layers: LayerRange,

    /// Shot count, or `exact` for exact probabilities.
    #[arg(long, default_value = "exact", value_parser = parse_shots)]
    shots: Shots,

    /// Condition the inversion on its success pattern (`on`/`off`).
    #[arg(long, default_value = "on", value_parser = parse_switch)]
    post_select: bool,

    #[arg(long, default_value_t = ExperimentConfig::DEFAULT_SEED)]
    seed: u64,

    /// Banknote test-set size.
    #[arg(long, default_value_t = ExperimentConfig::DEFAULT_N_TEST)]
    n_test: usize,

    /// Report destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
}

impl Args {
    fn config(self) -> ExperimentConfig {
        ExperimentConfig {
            dataset: match self.dataset {
                DatasetArg::SixNine => DatasetKind::SixNine,
                DatasetArg::Banknote => DatasetKind::Banknote,
            },
            data_path: self.data_path,
            method: match self.method {
                MethodArg::Qsvm => Method::Qsvm,
                MethodArg::Innerprod => Method::Innerprod,
            },
            preprocess: self.preprocess.map(|p| match p {
                PreprocessArg::Averages => Preprocess::Averages,
                PreprocessArg::Kmeans => Preprocess::Kmeans,
            }),
            gamma: self.gamma,
            layers: self.layers,
            shots: self.shots,
            post_select: self.post_select,
            seed: self.seed,
            n_test: self.n_test,
            out: self.out,
            format: match self.format {
                FormatArg::Json => ReportFormat::Json,
                FormatArg::Csv => ReportFormat::Csv,
            },
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e.class() {
        ErrorClass::Config => 2,
        ErrorClass::Data => 3,
        ErrorClass::Numerical => 4,
    }
}

fn run(cfg: &ExperimentConfig) -> Result<(), Error> {
    let report = run_experiment(cfg)?;
    match &cfg.out {
        Some(path) => {
            for f in emit_report(&report, cfg.format, path)? {
                eprintln!("wrote {}", f.display());
            }
        }
        None => match cfg.format {
            ReportFormat::Json => println!("{}", report.to_json()?),
            ReportFormat::Csv => {
                print!("{}", report.points_csv()?);
                if !report.series.is_empty() {
                    println!();
                    print!("{}", report.series_csv()?);
                }
            }
        },
    }
    match report.accuracy {
        Some(acc) => eprintln!(
            "accuracy {}/{} ({:.1}%)",
            report.correct,
            report.total,
            100.0 * acc
        ),
        None => eprintln!("no test points"),
    }
    if let Some(p) = report.peak {
        eprintln!("peak {}/{} at layer {}", p.correct, p.total, p.layers);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cfg = Args::parse().config();
    match run(&cfg) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
