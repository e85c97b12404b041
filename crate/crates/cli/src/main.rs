use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fairdiv::adversarial::SweepOptions;
use fairdiv::algorithms::Algorithm;
use fairdiv::DEFAULT_TOL;
use fairdiv_cli::commands;
use fairdiv_cli::{
    generate, parse_algorithm, parse_allocation, parse_instance_document, CliError, Format,
    NamedInstance, EXIT_INVALID, EXIT_VIOLATION,
};

#[derive(Parser)]
#[command(
    name = "fairdiv",
    version,
    about = "Online fair division: runs, audits, and worst-case analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Sources {
    /// Instance file (repeatable).
    #[arg(long = "instance")]
    instances: Vec<String>,
    /// Built-in instance: two-round-symmetric:v, three-round-cp:v11,v21[,eps],
    /// fair-share-violation:p, lb-pair, multi-agent:n (repeatable).
    #[arg(long = "generator")]
    generators: Vec<String>,
}

#[derive(Args)]
struct Output {
    /// Report format: csv or json.
    #[arg(long, default_value = "csv")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Run algorithms on instances and audit the outcome.
    Run {
        #[command(flatten)]
        sources: Sources,
        /// equal-split, proportional, quadratic, greedy, poly, or guarded (repeatable).
        #[arg(long = "algorithm", required = true)]
        algorithms: Vec<String>,
        /// Exponent for poly and guarded; `inf` is accepted by poly.
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Audit a supplied allocation; exits with 3 if fair share fails.
    Verify {
        #[arg(long)]
        instance: String,
        #[arg(long)]
        allocation: String,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Worst-case ratio with and without a critical point for each p in [2, 3].
    Sweep {
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        p: Vec<f64>,
        /// Grid step along the symmetric two-round family.
        #[arg(long, default_value_t = 1e-3)]
        grid_step: f64,
        /// Grid step over the critical-point family.
        #[arg(long, default_value_t = 1e-2)]
        cp_step: f64,
        #[arg(long, default_value_t = 1e-9)]
        refine_tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Minimize a closed-form or simulated ratio objective.
    Search {
        /// proportional, poly-two-round, poly-diagonal, guarded-case1,
        /// guarded-case2-mixed, guarded-case2-above, guarded-cp.
        #[arg(long)]
        objective: String,
        #[arg(long)]
        p: Option<f64>,
        /// Residual mass for guarded-cp.
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long, default_value_t = 1e-3)]
        grid_step: f64,
        #[arg(long, default_value_t = 1e-9)]
        refine_tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Replay the two-instance lower bound; all built-ins when no algorithm is given.
    #[command(name = "replay-lb")]
    ReplayLb {
        #[arg(long = "algorithm")]
        algorithms: Vec<String>,
        #[arg(long)]
        p: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Per-round doomsday compatibility of a run.
    Doomsday {
        #[command(flatten)]
        sources: Sources,
        #[arg(long)]
        algorithm: String,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
}

fn read(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_string(),
        source,
    })
}

fn load_file(path: &str) -> Result<NamedInstance, CliError> {
    let doc = parse_instance_document(&read(path)?).map_err(|e| match e {
        CliError::Syntax { line, message } => CliError::Syntax {
            line,
            message: format!("{path}: {message}"),
        },
        other => other,
    })?;
    Ok(NamedInstance {
        name: doc.name.unwrap_or_else(|| path.to_string()),
        instance: doc.instance,
    })
}

fn load(sources: &Sources) -> Result<Vec<NamedInstance>, CliError> {
    let mut out = Vec::new();
    for path in &sources.instances {
        out.push(load_file(path)?);
    }
    for spec in &sources.generators {
        out.extend(generate(spec)?);
    }
    if out.is_empty() {
        return Err(CliError::Usage(
            "give at least one --instance or --generator".into(),
        ));
    }
    Ok(out)
}

fn algorithms(names: &[String], p: Option<f64>) -> Result<Vec<Algorithm>, CliError> {
    names.iter().map(|n| parse_algorithm(n, p)).collect()
}

fn execute(command: Command) -> Result<(String, bool), CliError> {
    let plain = |text: String| (text, false);
    match command {
        Command::Run {
            sources,
            algorithms: names,
            p,
            tol,
            output,
        } => commands::run(
            &load(&sources)?,
            &algorithms(&names, p)?,
            tol,
            output.format,
        )
        .map(plain),
        Command::Verify {
            instance,
            allocation,
            tol,
            output,
        } => {
            let src = load_file(&instance)?;
            let alloc = parse_allocation(&read(&allocation)?)?;
            commands::verify(&src, &alloc, tol, output.format)
        }
        Command::Sweep {
            p,
            grid_step,
            cp_step,
            refine_tol,
            output,
        } => {
            let options = SweepOptions {
                diagonal_step: grid_step,
                cp_step,
                refine_tol,
                ..SweepOptions::default()
            };
            commands::sweep(&p, &options, output.format).map(plain)
        }
        Command::Search {
            objective,
            p,
            eps,
            grid_step,
            refine_tol,
            output,
        } => {
            let obj = commands::objective(&objective, p, eps)?;
            commands::search(&obj, grid_step, refine_tol, output.format).map(plain)
        }
        Command::ReplayLb {
            algorithms: names,
            p,
            output,
        } => {
            let algs = if names.is_empty() {
                Algorithm::builtins()
            } else {
                algorithms(&names, p)?
            };
            commands::replay_lb(&algs, output.format).map(plain)
        }
        Command::Doomsday {
            sources,
            algorithm,
            p,
            tol,
            output,
        } => {
            let alg = parse_algorithm(&algorithm, p)?;
            commands::doomsday(&load(&sources)?, &alg, tol, output.format).map(plain)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok((text, violated)) => {
            print!("{text}");
            if violated {
                ExitCode::from(EXIT_VIOLATION)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}
