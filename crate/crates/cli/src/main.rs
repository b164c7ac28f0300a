//! `wnucsp`: decide CSP instance files, generate instances, and compare the
//! solver against exhaustive search.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use csp_core::algebra::{Algebra, Operation};
use csp_core::harness::{
    analyze, brute_force_solve, diff_run, format_outcome, generate_instance, named_operation, parse_instance,
    write_instance, GeneratorConfig, InstanceFile, DEFAULT_ORACLE_CAP, NAMED_OPERATIONS,
};
use csp_core::solver::Solver;
use csp_core::Error;

#[derive(Parser)]
#[command(name = "wnucsp", version, about = "CSP solver for languages with a weak near-unanimity polymorphism")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide an instance file and print a solution if there is one.
    Solve {
        file: PathBuf,
        /// Write solver counters as JSON to this path.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Also run exhaustive search and fail on disagreement.
        #[arg(long)]
        oracle_check: bool,
    },
    /// Decide an instance file by exhaustive search.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
        cap: u128,
    },
    /// Print a random instance file.
    Gen(GenArgs),
    /// Compare solver and exhaustive search on generated instances.
    Diff {
        #[arg(long)]
        runs: usize,
        /// Directory for mismatching instances and their shrunk versions.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        gen: GenArgs,
    },
    /// Describe the domains, congruences and relations of an instance file.
    Analyze { file: PathBuf },
}

#[derive(Args, Clone)]
struct GenArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    vars: usize,
    #[arg(long, default_value_t = 6)]
    constraints: usize,
    /// Must match the universe of the operation.
    #[arg(long)]
    domain_size: Option<usize>,
    /// A built-in operation name, or `file:<path>` to take the algebra of an
    /// instance file.
    #[arg(long, default_value = "maj3")]
    wnu: String,
    #[arg(long, default_value_t = 0.25)]
    density: f64,
    #[arg(long, default_value_t = 3)]
    max_arity: usize,
    /// Chance that a variable starts on a proper subuniverse.
    #[arg(long, default_value_t = 0.0)]
    restrict: f64,
}

impl GenArgs {
    fn config(&self) -> GeneratorConfig {
        GeneratorConfig {
            seed: self.seed,
            vars: self.vars,
            constraints: self.constraints,
            max_arity: self.max_arity,
            density: self.density,
            restrict: self.restrict,
        }
    }

    /// The declared operation, which generated relations are closed under,
    /// and the special WNU the solver runs with.
    fn operations(&self) -> Result<(Operation, Operation), Error> {
        let (declared, special) = match self.wnu.strip_prefix("file:") {
            Some(path) => {
                let f = load(Path::new(path))?;
                (f.declared, f.operation)
            }
            None => {
                let w = named_operation(&self.wnu).ok_or_else(|| {
                    Error::Input(format!("unknown operation `{}`; expected one of {NAMED_OPERATIONS:?} or file:<path>", self.wnu))
                })?;
                (w.clone(), w)
            }
        };
        if let Some(n) = self.domain_size {
            if n != declared.size() {
                return Err(Error::Input(format!("operation `{}` lives on {} elements, not {n}", self.wnu, declared.size())));
            }
        }
        Ok((declared, special))
    }
}

fn load(path: &Path) -> Result<InstanceFile, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    parse_instance(&text)
}

fn write_file(path: &Path, text: &str) -> Result<(), Error> {
    std::fs::write(path, text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

/// Exit code 1 is reserved for disagreements and internal errors.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Input(_) | Error::Usage(_) => 2,
        Error::Resource(_) => 3,
        Error::Invariant(_) => 1,
    }
}

fn solve(file: &Path, trace: Option<&Path>, oracle_check: bool) -> Result<u8, Error> {
    let f = load(file)?;
    let alg = Algebra::new(f.operation.clone());
    let mut solver = Solver::new(&alg);
    let solution = solver.solve(&f.instance)?;
    if let Some(path) = trace {
        let doc = serde_json::json!({
            "sat": solution.is_some(),
            "solution": solution,
            "stats": solver.stats(),
        });
        write_file(path, &serde_json::to_string_pretty(&doc).expect("stats serialize"))?;
    }
    print!("{}", format_outcome(&f.var_names, solution.as_deref()));
    if oracle_check {
        let truth = brute_force_solve(&f.instance, DEFAULT_ORACLE_CAP)?.is_some();
        if truth != solution.is_some() {
            eprintln!("oracle disagrees: exhaustive search says {}", if truth { "SAT" } else { "UNSAT" });
            return Ok(1);
        }
        eprintln!("oracle agrees");
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Solve { file, trace, oracle_check } => solve(&file, trace.as_deref(), oracle_check),
        Command::Oracle { file, cap } => {
            let f = load(&file)?;
            let solution = brute_force_solve(&f.instance, cap)?;
            print!("{}", format_outcome(&f.var_names, solution.as_deref()));
            Ok(0)
        }
        Command::Gen(args) => {
            let (declared, _) = args.operations()?;
            let inst = generate_instance(&Algebra::new(declared.clone()), &args.config())?;
            print!("{}", write_instance(&declared, &inst));
            Ok(0)
        }
        Command::Diff { runs, out, gen } => {
            let (declared, special) = gen.operations()?;
            if declared != special {
                return Err(Error::Input("diff needs a special WNU; the file's operation is not one".into()));
            }
            let report = diff_run(&Algebra::new(special), &gen.config(), runs, DEFAULT_ORACLE_CAP)?;
            println!(
                "runs {} sat {} unsat {} mismatches {} max depth {:?}",
                report.runs,
                report.sat,
                report.unsat,
                report.mismatches.len(),
                report.max_depth
            );
            for m in &report.mismatches {
                println!("seed {}: solver {} oracle {}", m.seed, m.solver, if m.oracle_sat { "SAT" } else { "UNSAT" });
                if let Some(dir) = &out {
                    std::fs::create_dir_all(dir).map_err(|e| Error::Input(format!("{}: {e}", dir.display())))?;
                    write_file(&dir.join(format!("seed-{}.csp", m.seed)), &m.instance)?;
                    write_file(&dir.join(format!("seed-{}.min.csp", m.seed)), &m.minimized)?;
                }
            }
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Analyze { file } => {
            print!("{}", analyze(&load(&file)?)?);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
