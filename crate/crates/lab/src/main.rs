use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wva_lab::checks::{self, VERIFY_IDS};
use wva_lab::{find, registry, LabError, Result};

#[derive(Parser)]
#[command(
    name = "wva-lab",
    version,
    about = "Dual-pointer weak-value amplification scenarios"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its CSV table.
    Run {
        scenario: String,
        /// Flat `key = value` file applied over the scenario defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override one parameter, applied after --config.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        /// Output path, `<scenario>.csv` by default.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List scenarios with the figure each reproduces.
    List {
        /// Also print every parameter and its default.
        #[arg(long)]
        params: bool,
    },
    /// Run the oracle and invariant checks.
    Verify,
}

fn run(
    scenario: &str,
    config: Option<PathBuf>,
    set: &[String],
    out: Option<PathBuf>,
) -> Result<()> {
    let scenario = find(scenario)?;
    let mut cfg = scenario.default_config();
    if let Some(path) = config {
        let text = std::fs::read_to_string(&path).map_err(|source| LabError::Io {
            path: path.display().to_string(),
            source,
        })?;
        cfg.apply_file(&text)?;
    }
    for pair in set {
        cfg.set_pair(pair)?;
    }
    let outcome = scenario.run(&cfg)?;
    let path = out.unwrap_or_else(|| PathBuf::from(format!("{}.csv", scenario.id)));
    std::fs::write(&path, scenario.render(&cfg, &outcome)).map_err(|source| LabError::Io {
        path: path.display().to_string(),
        source,
    })?;
    println!("scenario={}", scenario.id);
    println!("table={}", path.display());
    println!("rows={}", outcome.table.rows().len());
    for line in outcome.summary.lines() {
        println!("{line}");
    }
    Ok(())
}

fn list(params: bool) {
    for s in registry() {
        println!("{:<22} {:<12} {}", s.id, s.reproduces, s.description);
        if params {
            for p in s.params {
                println!("    {} = {}    # {}", p.key, p.default, p.help);
            }
        }
    }
}

fn verify() -> bool {
    let mut all = true;
    for &id in VERIFY_IDS {
        let r = checks::run(id);
        println!("{}", r.line());
        all &= r.passed;
    }
    all
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Run {
            scenario,
            config,
            set,
            out,
        } => match run(&scenario, config, &set, out) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("wva-lab: {e}");
                ExitCode::from(e.exit_code())
            }
        },
        Command::List { params } => {
            list(params);
            ExitCode::SUCCESS
        }
        Command::Verify => {
            if verify() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
    }
}
