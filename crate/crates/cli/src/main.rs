use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dng_core::audit::{self, Family, Solver, WinFilter, DEFAULT_AUDIT_BUDGET};
use dng_core::game::DEFAULT_SUM_BUDGET;
use dng_core::instance::{Instance, InstanceError};
use dng_core::structure::{emit_dot, solve_types, IntersectionLattice};
use dng_core::GameSpec;

mod report;

use report::{solve_report, Method};

/// Avoidance games on finite convex geometries.
#[derive(Parser)]
#[command(name = "dng", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance with one or more methods.
    Solve {
        file: PathBuf,
        /// Comma-separated subset of brute, quotient, formula.
        #[arg(long, value_delimiter = ',', default_values = ["brute", "quotient", "formula"])]
        method: Vec<Method>,
        /// Also write the structure diagram here.
        #[arg(long)]
        dot_out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
        /// Include wall-clock timings (output is then not reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Print the structure diagram as Graphviz DOT.
    Diagram {
        file: PathBuf,
        #[arg(long)]
        dot_out: Option<PathBuf>,
    },
    /// Audit every closed form over a corpus and print the errata report.
    Verify {
        #[arg(long)]
        family: String,
        #[arg(long)]
        max_n: usize,
        #[arg(long, default_value_t = DEFAULT_AUDIT_BUDGET)]
        budget: u128,
        #[arg(long)]
        json: bool,
    },
    /// Nim number of a sum of games.
    Sum {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Also expand the sum directly and compare.
        #[arg(long)]
        check: bool,
        #[arg(long, default_value_t = DEFAULT_SUM_BUDGET)]
        budget: u128,
        #[arg(long)]
        json: bool,
    },
    /// Nim values attained over a corpus, with a smallest witness each.
    Spectrum {
        #[arg(long)]
        family: String,
        #[arg(long)]
        max_n: usize,
        #[arg(long, value_enum, default_value_t = ScanMethod::Brute)]
        method: ScanMethod,
        /// Only winning sets whose closure lies in Ex(S).
        #[arg(long)]
        extreme_only: bool,
        #[arg(long, default_value_t = DEFAULT_AUDIT_BUDGET)]
        budget: u128,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ScanMethod {
    Brute,
    Quotient,
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<InstanceError> for Failure {
    fn from(e: InstanceError) -> Self {
        Failure {
            code: if e.is_axiom_violation() { 2 } else { 1 },
            message: e.to_string(),
        }
    }
}

fn load(path: &Path) -> Result<(Instance, GameSpec), Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let inst = Instance::parse(&text).map_err(|e| prefixed(path, e.into()))?;
    let spec = inst.build().map_err(|e| prefixed(path, e.into()))?;
    Ok((inst, spec))
}

fn prefixed(path: &Path, f: Failure) -> Failure {
    Failure {
        code: f.code,
        message: format!("{}: {}", path.display(), f.message),
    }
}

fn diagram_dot(spec: &GameSpec) -> Result<String, Failure> {
    if spec.is_degenerate() {
        return Err(Failure::usage("degenerate game: the start position already generates W"));
    }
    let lattice = IntersectionLattice::for_game(spec).map_err(|e| Failure::usage(e.to_string()))?;
    let diagram = solve_types(&lattice, spec).map_err(|e| Failure::usage(e.to_string()))?;
    Ok(emit_dot(&diagram, spec.geometry().ground()))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn family(name: &str) -> Result<Family, Failure> {
    name.parse().map_err(|e: audit::AuditError| Failure::usage(e.to_string()))
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Solve {
            file,
            method,
            dot_out,
            json,
            timing,
        } => {
            let (inst, spec) = load(&file)?;
            let mut report = solve_report(&inst, &spec, &method, timing);
            if let Some(path) = dot_out {
                let dot = diagram_dot(&spec)?;
                write_file(&path, &dot)?;
                report.dot = Some(dot);
            }
            if json {
                println!("{}", to_json(&report));
            } else {
                print!("{}", report.render());
            }
            Ok(if report.all_agree() { 0 } else { 3 })
        }
        Command::Diagram { file, dot_out } => {
            let (_, spec) = load(&file)?;
            let dot = diagram_dot(&spec)?;
            match dot_out {
                Some(path) => write_file(&path, &dot)?,
                None => print!("{dot}"),
            }
            Ok(0)
        }
        Command::Verify {
            family: name,
            max_n,
            budget,
            json,
        } => {
            let report = audit::verify(family(&name)?, max_n, budget).map_err(|e| Failure::usage(e.to_string()))?;
            if json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.render());
            }
            Ok(if report.unexplained() == 0 { 0 } else { 3 })
        }
        Command::Sum {
            files,
            check,
            budget,
            json,
        } => {
            let mut games = Vec::new();
            for f in &files {
                games.push(load(f)?);
            }
            let report = report::sum_report(&files, &games, check, budget).map_err(|e| Failure::usage(e.to_string()))?;
            if json {
                println!("{}", to_json(&report));
            } else {
                print!("{}", report.render());
            }
            Ok(if report.check_passed != Some(false) { 0 } else { 3 })
        }
        Command::Spectrum {
            family: name,
            max_n,
            method,
            extreme_only,
            budget,
            json,
        } => {
            let solver = match method {
                ScanMethod::Brute => Solver::Brute,
                ScanMethod::Quotient => Solver::Quotient,
            };
            let filter = if extreme_only {
                WinFilter::ClosureWithinExtremes
            } else {
                WinFilter::All
            };
            let spectrum = audit::spectrum_scan(family(&name)?, max_n, solver, filter, budget)
                .map_err(|e| Failure::usage(e.to_string()))?;
            if json {
                println!("{}", to_json(&spectrum));
            } else {
                print!("{}", spectrum.render());
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
