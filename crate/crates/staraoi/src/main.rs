use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use staraoi::bench::{parse_bench_file, run_bench};
use staraoi::classic::UnionMode;
use staraoi::error::{Error, Result};
use staraoi::task::{
    emit_task_sql, export_dimensions, parse_delimiter, parse_task_file, run_task, OutputFormat,
    Overrides, PathChoice,
};

#[derive(Parser)]
#[command(
    name = "staraoi",
    version,
    about = "Attribute-oriented induction: classic thresholds and star-schema group-by, side by side"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a task file through the chosen induction path(s)
    Run {
        task: PathBuf,
        #[command(flatten)]
        flags: RunFlags,
    },
    /// Dimension-table utilities
    Dims {
        #[command(subcommand)]
        command: DimsCommand,
    },
    /// Print the star path's equivalent join/group-by SQL for a task
    EmitSql { task: PathBuf },
    /// Time both paths on the bundled instance and synthetic sweeps
    Bench { bench: PathBuf },
}

#[derive(Subcommand)]
enum DimsCommand {
    /// Write each dimension table as delimited text
    Export {
        task: PathBuf,
        /// Output directory
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct RunFlags {
    /// Generalization threshold (classic path)
    #[arg(long)]
    threshold: Option<usize>,
    /// Attribute threshold, defaults to the generalization threshold
    #[arg(long)]
    attr_threshold: Option<usize>,
    /// Star-path level selection, e.g. --level Birthplace=1
    #[arg(long, value_name = "ATTR=K")]
    level: Vec<String>,
    /// Further-generalize this attribute (classic path, repeatable)
    #[arg(long, value_name = "ATTR")]
    further: Vec<String>,
    /// Union on this attribute (repeatable)
    #[arg(long, value_name = "ATTR")]
    union: Vec<String>,
    #[arg(long, value_enum)]
    union_mode: Option<UnionModeArg>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long, value_enum)]
    path: Option<PathArg>,
    /// Field delimiter for the data file (a single character, or "tab")
    #[arg(long)]
    delimiter: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum UnionModeArg {
    Drop,
    MergeSet,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Records,
}

#[derive(Clone, Copy, ValueEnum)]
enum PathArg {
    Classic,
    Star,
    Both,
}

fn overrides_from(flags: &RunFlags) -> Result<Overrides> {
    let mut levels = Vec::new();
    for spec in &flags.level {
        let (attr, level) = spec
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected --level ATTR=K, got {spec:?}")))?;
        let level = level
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::Config(format!("cannot parse level {:?}", level.trim())))?;
        levels.push((attr.trim().to_string(), level));
    }
    let delimiter = match &flags.delimiter {
        Some(d) => Some(parse_delimiter(d).map_err(Error::Config)?),
        None => None,
    };
    Ok(Overrides {
        threshold: flags.threshold,
        attr_threshold: flags.attr_threshold,
        levels,
        further: flags.further.clone(),
        unions: flags.union.clone(),
        union_mode: flags.union_mode.map(|m| match m {
            UnionModeArg::Drop => UnionMode::Drop,
            UnionModeArg::MergeSet => UnionMode::MergeSet,
        }),
        format: flags.format.map(|f| match f {
            FormatArg::Text => OutputFormat::Text,
            FormatArg::Records => OutputFormat::Records,
        }),
        path: flags.path.map(|p| match p {
            PathArg::Classic => PathChoice::Classic,
            PathArg::Star => PathChoice::Star,
            PathArg::Both => PathChoice::Both,
        }),
        delimiter,
    })
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { task, flags } => {
            let mut task = parse_task_file(&task)?;
            task.apply(&overrides_from(&flags)?);
            let outcome = run_task(&task)?;
            print!("{}", outcome.report);
        }
        Command::Dims { command } => match command {
            DimsCommand::Export { task, out } => {
                let task = parse_task_file(&task)?;
                for path in export_dimensions(&task, &out)? {
                    println!("wrote {}", path.display());
                }
            }
        },
        Command::EmitSql { task } => {
            let task = parse_task_file(&task)?;
            print!("{}", emit_task_sql(&task)?);
        }
        Command::Bench { bench } => {
            let cfg = parse_bench_file(&bench)?;
            let report = run_bench(&cfg)?;
            print!("{}", report.text);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
