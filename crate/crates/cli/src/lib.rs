//! Command-line front end. [`run`] does all the work and returns the
//! captured output, so the binary is a thin wrapper and tests can call it
//! in-process.

use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nestcount::formula::parse_dimacs;
use nestcount::gen::{
    gen_hardps, gen_interval_cnf, gen_interval_wcsp, BaseGraph, HardPsSpec, IntervalSpec,
    WeightSpec,
};
use nestcount::hypergraph::beta_elimination_order;
use nestcount::wcspd::{parse_wcspd, serialize_wcspd};
use nestcount::{count_models, max_sat, solve, Error, EvalMode, Hypergraph};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_CYCLIC: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "nestcount",
    version,
    about = "Exact counting for beta-acyclic CNF and weighted CSP"
)]
pub struct Cli {
    /// Worker threads when several input files are given.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count models of DIMACS CNF formulas.
    Count {
        /// Model-counting-competition style output.
        #[arg(long)]
        mcc: bool,
        #[arg(default_value = "-")]
        files: Vec<PathBuf>,
    },
    /// Maximum number of simultaneously satisfiable clauses.
    Maxsat {
        #[arg(default_value = "-")]
        files: Vec<PathBuf>,
    },
    /// Evaluate a `.wcspd` instance.
    Csp {
        #[arg(long, value_enum, default_value_t = Mode::Sum)]
        mode: Mode,
        #[arg(default_value = "-")]
        files: Vec<PathBuf>,
    },
    /// Print a beta-elimination order, one variable per line.
    Order {
        #[arg(default_value = "-")]
        files: Vec<PathBuf>,
    },
    /// Report whether the instance hypergraph is beta-acyclic.
    Check {
        #[arg(default_value = "-")]
        files: Vec<PathBuf>,
    },
    /// Generate an instance on stdout.
    #[command(subcommand)]
    Gen(GenCommand),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Sum,
    Max,
}

#[derive(Subcommand, Debug)]
enum GenCommand {
    /// Interval-scoped beta-acyclic formula or weighted instance.
    Interval(IntervalArgs),
    /// Monotone formula from the chordal bipartite expansion of a random graph.
    Hardps(HardPsArgs),
}

#[derive(Args, Debug)]
struct IntervalArgs {
    #[arg(long, default_value_t = 10)]
    vars: u32,
    /// Number of clauses (or constraints with --wcsp).
    #[arg(long, default_value_t = 15)]
    clauses: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    min_arity: usize,
    /// Defaults to min(3, vars).
    #[arg(long)]
    max_arity: Option<usize>,
    /// Allow overlapping intervals instead of a laminar family.
    #[arg(long)]
    free: bool,
    /// Emit a weighted `.wcspd` instance instead of DIMACS.
    #[arg(long)]
    wcsp: bool,
    #[arg(long, default_value_t = 2)]
    domain: u32,
    #[arg(long, default_value_t = 20)]
    max_num: u64,
    #[arg(long, default_value_t = 20)]
    max_den: u64,
    #[arg(long, default_value_t = 4)]
    max_support: usize,
}

#[derive(Args, Debug)]
struct HardPsArgs {
    #[arg(long, default_value_t = 8)]
    base_vertices: usize,
    /// Erdős–Rényi edge probability.
    #[arg(long, default_value_t = 0.5, conflicts_with = "degree")]
    edge_prob: f64,
    /// Sample a random regular base graph of this degree instead.
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Expand the base graph without subdividing its edges first.
    #[arg(long)]
    no_subdivide: bool,
}

/// Captured result of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            stderr: String::new(),
            code: EXIT_OK,
        }
    }

    fn fail(code: i32, stderr: String) -> Self {
        Outcome {
            stdout: String::new(),
            stderr,
            code,
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::InvalidSpec(_) | Error::Precondition(_) => EXIT_INPUT,
        Error::NotBetaAcyclic { .. } => EXIT_CYCLIC,
        _ => EXIT_INTERNAL,
    }
}

fn render_witness(witness: &std::collections::BTreeSet<nestcount::Var>) -> String {
    witness
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn from_error(e: Error) -> Outcome {
    let msg = match &e {
        Error::NotBetaAcyclic { witness } => {
            format!(
                "error: not beta-acyclic\nwitness: {}\n",
                render_witness(witness)
            )
        }
        other => format!("error: {other}\n"),
    };
    Outcome::fail(exit_code(&e), msg)
}

enum Input {
    Cnf(nestcount::CnfFormula),
    Wcsp(nestcount::WcspInstance),
}

impl Input {
    fn hypergraph(&self) -> Hypergraph {
        match self {
            Input::Cnf(f) => f.hypergraph(),
            Input::Wcsp(i) => i.hypergraph(),
        }
    }
}

/// Picks the format from the problem line.
fn sniff(text: &str) -> nestcount::Result<Input> {
    let is_wcspd = text
        .lines()
        .map(str::trim)
        .find(|l| l.starts_with("p ") || l.starts_with("p\t"))
        .is_some_and(|l| l.split_whitespace().nth(1) == Some("wcspd"));
    if is_wcspd {
        parse_wcspd(text).map(Input::Wcsp)
    } else {
        parse_dimacs(text).map(Input::Cnf)
    }
}

fn cmd_count(text: &str, mcc: bool) -> nestcount::Result<String> {
    let f = parse_dimacs(text)?;
    let n = count_models(&f)?;
    Ok(if mcc {
        format!("c s type mc\ns mc {n}\n")
    } else {
        format!("{n}\n")
    })
}

fn cmd_maxsat(text: &str) -> nestcount::Result<String> {
    let f = parse_dimacs(text)?;
    Ok(format!("{}\n", max_sat(&f)?))
}

fn cmd_csp(text: &str, mode: Mode) -> nestcount::Result<String> {
    let inst = parse_wcspd(text)?;
    let mode = match mode {
        Mode::Sum => EvalMode::Sum,
        Mode::Max => EvalMode::Max,
    };
    Ok(format!("{}\n", solve(&inst, mode)?))
}

fn cmd_order(text: &str) -> nestcount::Result<String> {
    let order = beta_elimination_order(&sniff(text)?.hypergraph())?;
    let mut out = String::new();
    for v in order.iter() {
        let _ = writeln!(out, "{v}");
    }
    Ok(out)
}

fn cmd_check(text: &str) -> nestcount::Result<String> {
    match beta_elimination_order(&sniff(text)?.hypergraph()) {
        Ok(_) => Ok("beta-acyclic: yes\n".into()),
        Err(Error::NotBetaAcyclic { witness }) => Ok(format!(
            "beta-acyclic: no\nwitness: {}\n",
            render_witness(&witness)
        )),
        Err(e) => Err(e),
    }
}

fn cmd_gen(cmd: &GenCommand) -> nestcount::Result<String> {
    match cmd {
        GenCommand::Interval(a) => {
            let spec = IntervalSpec {
                seed: a.seed,
                num_vars: a.vars,
                num_scopes: a.clauses,
                min_arity: a.min_arity,
                max_arity: a
                    .max_arity
                    .unwrap_or_else(|| (a.vars as usize).min(3).max(a.min_arity)),
                laminar: !a.free,
            };
            if a.wcsp {
                let w = WeightSpec {
                    domain_size: a.domain,
                    max_numer: a.max_num,
                    max_denom: a.max_den,
                    max_support: a.max_support,
                };
                Ok(serialize_wcspd(&gen_interval_wcsp(&spec, &w)?))
            } else {
                Ok(gen_interval_cnf(&spec)?.to_dimacs())
            }
        }
        GenCommand::Hardps(a) => {
            let base = match a.degree {
                Some(degree) => BaseGraph::Regular {
                    vertices: a.base_vertices,
                    degree,
                },
                None => BaseGraph::ErdosRenyi {
                    vertices: a.base_vertices,
                    edge_prob: a.edge_prob,
                },
            };
            let spec = HardPsSpec {
                seed: a.seed,
                base,
                subdivide: !a.no_subdivide,
            };
            Ok(gen_hardps(&spec)?.to_dimacs())
        }
    }
}

fn read_input(path: &PathBuf, stdin: &str) -> Result<String, Outcome> {
    if path.as_os_str() == "-" {
        return Ok(stdin.to_string());
    }
    std::fs::read_to_string(path)
        .map_err(|e| Outcome::fail(EXIT_INPUT, format!("error: {}: {e}\n", path.display())))
}

/// Runs `op` over every file, in parallel when `jobs > 1`, and joins the
/// outputs in input order.
fn over_files(
    files: &[PathBuf],
    jobs: usize,
    stdin: &mut dyn Read,
    op: &(dyn Fn(&str) -> nestcount::Result<String> + Sync),
) -> Outcome {
    let stdin_text = if files.iter().any(|f| f.as_os_str() == "-") {
        let mut s = String::new();
        if let Err(e) = stdin.read_to_string(&mut s) {
            return Outcome::fail(EXIT_INPUT, format!("error: reading stdin: {e}\n"));
        }
        s
    } else {
        String::new()
    };

    let one = |path: &PathBuf| -> Outcome {
        match read_input(path, &stdin_text) {
            Ok(text) => op(&text).map(Outcome::ok).unwrap_or_else(from_error),
            Err(o) => o,
        }
    };

    let results: Vec<Outcome> = if jobs <= 1 || files.len() <= 1 {
        files.iter().map(one).collect()
    } else {
        let chunk = files.len().div_ceil(jobs);
        std::thread::scope(|s| {
            let handles: Vec<_> = files
                .chunks(chunk)
                .map(|part| s.spawn(move || part.iter().map(one).collect::<Vec<_>>()))
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("worker panicked"))
                .collect()
        })
    };

    if files.len() == 1 {
        return results.into_iter().next().expect("one result");
    }
    let mut merged = Outcome::default();
    for (path, r) in files.iter().zip(results) {
        let _ = writeln!(merged.stdout, "c file {}", path.display());
        merged.stdout.push_str(&r.stdout);
        if !r.stderr.is_empty() {
            let _ = write!(merged.stderr, "{}: {}", path.display(), r.stderr);
        }
        merged.code = merged.code.max(r.code);
    }
    merged
}

/// Parses `args` (including the program name) and executes the command.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::fail(EXIT_INPUT, text)
            } else {
                Outcome::ok(text)
            };
        }
    };
    let jobs = cli.jobs.max(1);
    match &cli.command {
        Command::Count { mcc, files } => over_files(files, jobs, stdin, &|t| cmd_count(t, *mcc)),
        Command::Maxsat { files } => over_files(files, jobs, stdin, &cmd_maxsat),
        Command::Csp { mode, files } => over_files(files, jobs, stdin, &|t| cmd_csp(t, *mode)),
        Command::Order { files } => over_files(files, jobs, stdin, &cmd_order),
        Command::Check { files } => over_files(files, jobs, stdin, &cmd_check),
        Command::Gen(g) => cmd_gen(g).map(Outcome::ok).unwrap_or_else(from_error),
    }
}

/// Convenience wrapper for a single invocation with in-memory stdin.
pub fn run_with_input(args: &[&str], stdin: &str) -> Outcome {
    let argv = std::iter::once("nestcount").chain(args.iter().copied());
    run(argv, &mut stdin.as_bytes())
}
