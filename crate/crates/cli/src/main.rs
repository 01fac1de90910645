use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use fixedloci_cli::{
    cmd_grassmann, cmd_kempf, cmd_quiver, cmd_toric, parse_list, parse_matrix, render, run, to_json, CliError,
    ProblemFile, Report, RunOptions,
};

#[derive(Parser)]
#[command(name = "fixedloci", version, about = "Torus fixed loci of GIT quotients")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Seed for the random search over finite fields.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Prime for the finite-field stability search.
    #[arg(long, global = true)]
    prime: Option<u32>,

    /// Random representations tried per candidate.
    #[arg(long, global = true)]
    trials: Option<usize>,

    /// Radius of the cube of grades searched for covers.
    #[arg(long, global = true, allow_negative_numbers = true)]
    window: Option<i64>,

    /// Inner product on cocharacters, rows separated by ';' (e.g. "1,0;0,4").
    #[arg(long, global = true)]
    inner_product: Option<String>,

    /// List every torus orbit of a toric quotient, not only the fixed points.
    #[arg(long, global = true)]
    orbits: bool,

    /// Add wall-clock time to the report (reports are then no longer reproducible).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Dispatch on the `kind` field of the file.
    Run { file: PathBuf },
    Toric { file: PathBuf },
    Quiver { file: PathBuf },
    Grassmann { file: PathBuf },
    /// Stability and the adapted one-parameter subgroup of a support.
    Kempf {
        file: PathBuf,
        /// Coordinates in the support, e.g. "0,2,3".
        #[arg(long)]
        support: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
    Dot,
}

fn configure_threads() {
    if let Some(n) = std::env::var("FIXEDLOCI_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let mut opts = RunOptions {
        seed: cli.seed,
        prime: cli.prime,
        trials: cli.trials,
        window: cli.window,
        inner_product: cli.inner_product.as_deref().map(parse_matrix).transpose()?,
        support: None,
        orbits: cli.orbits,
        timing: cli.timing,
    };
    let (file, cmd): (&PathBuf, fn(&ProblemFile, &RunOptions) -> Result<Report, CliError>) = match &cli.command {
        Command::Run { file } => (file, run),
        Command::Toric { file } => (file, cmd_toric),
        Command::Quiver { file } => (file, cmd_quiver),
        Command::Grassmann { file } => (file, cmd_grassmann),
        Command::Kempf { file, support } => {
            opts.support = support.as_deref().map(parse_list::<usize>).transpose()?;
            (file, cmd_kempf)
        }
    };
    let text = std::fs::read_to_string(file).map_err(|e| CliError::Io(format!("{}: {e}", file.display())))?;
    let problem = ProblemFile::parse(&text)?;
    let report = cmd(&problem, &opts)?;
    let rendered = match cli.format {
        Format::Json => to_json(&report),
        Format::Table => render::table(&report),
        Format::Dot => render::dot(&report)?,
    };
    match &cli.out {
        Some(path) => std::fs::write(path, rendered).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fixedloci: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
