//! The `nimgeo` command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 bad input, 3 budget
//! exceeded.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::corpus::{gen_dag, gen_kayles, gen_nim, CorpusCaps};
use crate::error::Result;
use crate::files::GameFile;
use crate::game::{nimber_of, Budget};
use crate::geography::max_nimber_sweep;
use crate::primality::{canonical_form, is_prime_game, PrimeVerdict};
use crate::reduction::{encode_xor, reduce_to_geography, OracleMode, Reduction};
use crate::rng::SplitMix64;
use crate::verify::{run_verify, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "nimgeo",
    version,
    about = "Nimbers of impartial games and their compilation into Generalized Geography"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Maximum number of positions (or tree nodes) a computation may touch.
    #[arg(long, global = true, default_value_t = Budget::DEFAULT_NODES)]
    budget_nodes: usize,

    /// Wall-clock limit in seconds.
    #[arg(long, global = true)]
    budget_seconds: Option<f64>,

    /// Oracle mode for compiled Q_i gadgets.
    #[arg(long, global = true, default_value = "product")]
    mode: OracleMode,

    /// Seed for `gen` and `verify`.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Also write a Graphviz rendering of the compiled graph here.
    #[arg(long, global = true)]
    dot: Option<PathBuf>,

    /// Format of the main output for graph-producing commands.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the nimber of a game file (`-` reads stdin).
    Nimber { input: PathBuf },
    /// Compile a game into one Geography graph with the same nimber.
    Reduce { input: PathBuf },
    /// Compile two games into one Geography graph valued at their xor.
    EncodeXor { left: PathBuf, right: PathBuf },
    /// Build the disjunctive sum of two games and print component nimbers.
    Sum { left: PathBuf, right: PathBuf },
    /// Check the compiler against brute force on a seeded random corpus.
    Verify(VerifyArgs),
    /// Decide whether a game is prime under the tree sum.
    PrimeCheck { input: PathBuf },
    /// Generate a random game file.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Largest vertex-Geography nimber over all small bounded-degree graphs.
    Sweep {
        #[arg(long, default_value_t = 5)]
        vertices: usize,
        /// Degree bound; omit for no bound.
        #[arg(long)]
        max_degree: Option<usize>,
        /// Graph count limit.
        #[arg(long, default_value_t = 50_000_000)]
        max_graphs: usize,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value_t = 200)]
    count: usize,
    /// Check one mode only (default: both).
    #[arg(long)]
    only: Option<OracleMode>,
    #[arg(long, default_value_t = 4)]
    nim_piles: usize,
    #[arg(long, default_value_t = 4)]
    nim_stones: u32,
    #[arg(long, default_value_t = 7)]
    kayles_vertices: u32,
    #[arg(long, default_value_t = 60)]
    dag_nodes: usize,
    #[arg(long, default_value_t = 0.05)]
    dag_edge_prob: f64,
    /// Include per-instance wall-clock times (reports stop being reproducible).
    #[arg(long)]
    timings: bool,
    /// Write each failing instance here as a replayable game file.
    #[arg(long)]
    replay_dir: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum GenKind {
    Nim {
        #[arg(long, default_value_t = 3)]
        piles: usize,
        #[arg(long, default_value_t = 4)]
        max_stones: u32,
    },
    Kayles {
        #[arg(long, default_value_t = 6)]
        vertices: u32,
        #[arg(long, default_value_t = 0.4)]
        edge_prob: f64,
    },
    Dag {
        #[arg(long, default_value_t = 40)]
        nodes: usize,
        #[arg(long, default_value_t = 0.05)]
        edge_prob: f64,
    },
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(stderr, "{}", e.render())
            } else {
                write!(stdout, "{}", e.render())
            };
            return code;
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_budget() {
                EXIT_BUDGET
            } else {
                EXIT_INPUT
            }
        }
    }
}

impl Cli {
    fn budget(&self) -> Budget {
        let b = Budget::nodes(self.budget_nodes);
        match self.budget_seconds {
            Some(s) => b.with_seconds(s),
            None => b,
        }
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

fn load(path: &Path) -> Result<GameFile> {
    GameFile::from_json(&read_input(path)?)
}

/// Writes `text` to `--out` if given, else to stdout.
fn emit(cli: &Cli, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match &cli.out {
        Some(p) => std::fs::write(p, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn emit_reduction(
    cli: &Cli,
    red: &Reduction,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<()> {
    let text = match cli.format {
        Format::Json => red.graph.to_json(),
        Format::Dot => red.graph.to_dot(),
    };
    emit(cli, &text, stdout)?;
    if let Some(p) = &cli.dot {
        std::fs::write(p, red.graph.to_dot())?;
    }
    let summary = format!(
        "vertices {} edges {} bound {} g {} mode {}\n",
        red.graph.vertices().len(),
        red.graph.edges().len(),
        red.size_bound,
        red.g,
        red.mode.name()
    );
    // Keep stdout clean for the graph itself when no output file is given.
    if cli.out.is_some() {
        stdout.write_all(summary.as_bytes())?;
    } else {
        stderr.write_all(summary.as_bytes())?;
    }
    Ok(())
}

fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let budget = cli.budget();
    match &cli.command {
        Command::Nimber { input } => {
            let game = load(input)?.to_game()?;
            writeln!(stdout, "{}", nimber_of(&game, &budget)?)?;
        }
        Command::Reduce { input } => {
            let game = load(input)?.to_game()?;
            let red = reduce_to_geography(&game, cli.mode, &budget)?;
            emit_reduction(cli, &red, stdout, stderr)?;
        }
        Command::EncodeXor { left, right } => {
            let (a, b) = (load(left)?.to_game()?, load(right)?.to_game()?);
            let red = encode_xor(&a, &b, cli.mode, &budget)?;
            emit_reduction(cli, &red, stdout, stderr)?;
        }
        Command::Sum { left, right } => {
            let file = GameFile::sum(load(left)?, load(right)?);
            let crate::files::GameSpec::Sum(pair) = &file.game else {
                unreachable!("constructed as a sum")
            };
            let l = nimber_of(&pair.0.to_game()?, &budget)?;
            let r = nimber_of(&pair.1.to_game()?, &budget)?;
            let s = nimber_of(&file.to_game()?, &budget)?;
            if let Some(p) = &cli.out {
                std::fs::write(p, file.to_json())?;
            }
            writeln!(stdout, "left {l}\nright {r}\nsum {s}")?;
        }
        Command::Verify(args) => return verify(cli, args, stdout, stderr),
        Command::PrimeCheck { input } => {
            let game = load(input)?.to_game()?;
            let verdict = is_prime_game(&game, &budget)?;
            writeln!(stdout, "{}", verdict.kind())?;
            match verdict {
                PrimeVerdict::Composite { a, b } => {
                    let unlimited = Budget::unlimited();
                    writeln!(stdout, "a {}", canonical_form(&a, &unlimited)?.canonical)?;
                    writeln!(stdout, "b {}", canonical_form(&b, &unlimited)?.canonical)?;
                }
                PrimeVerdict::BudgetExceeded(msg) => {
                    writeln!(stderr, "error: budget exceeded: {msg}")?;
                    return Ok(EXIT_BUDGET);
                }
                PrimeVerdict::Prime => {}
            }
        }
        Command::Gen { kind } => {
            let mut rng = SplitMix64::new(cli.seed);
            let file = match kind {
                GenKind::Nim { piles, max_stones } => gen_nim(&mut rng, *piles, *max_stones),
                GenKind::Kayles {
                    vertices,
                    edge_prob,
                } => gen_kayles(&mut rng, *vertices, *edge_prob)?,
                GenKind::Dag { nodes, edge_prob } => gen_dag(&mut rng, *nodes, *edge_prob)?,
            };
            emit(cli, &file.with_seed(cli.seed).to_json(), stdout)?;
        }
        Command::Sweep {
            vertices,
            max_degree,
            max_graphs,
        } => {
            let b = Budget::nodes(*max_graphs);
            let b = match cli.budget_seconds {
                Some(s) => b.with_seconds(s),
                None => b,
            };
            let report = max_nimber_sweep(*vertices, *max_degree, &b)?;
            let mut text = serde_json::to_string_pretty(&report)?;
            text.push('\n');
            emit(cli, &text, stdout)?;
            if cli.out.is_some() {
                for r in &report.results {
                    writeln!(
                        stdout,
                        "{:?} degree: {} graphs, max nimber {}",
                        r.notion, r.graphs, r.max_nimber
                    )?;
                }
            }
        }
    }
    Ok(EXIT_OK)
}

fn verify(
    cli: &Cli,
    args: &VerifyArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32> {
    let config = VerifyConfig {
        count: args.count,
        seed: cli.seed,
        caps: CorpusCaps {
            nim_piles: args.nim_piles,
            nim_stones: args.nim_stones,
            kayles_vertices: args.kayles_vertices,
            dag_nodes: args.dag_nodes,
            dag_extra_edges: args.dag_edge_prob,
        },
        modes: match args.only {
            Some(m) => vec![m],
            None => OracleMode::ALL.to_vec(),
        },
        budget_nodes: cli.budget_nodes,
        timings: args.timings,
    };
    let report = run_verify(&config)?;
    if let Some(dir) = &args.replay_dir {
        std::fs::create_dir_all(dir)?;
        for r in report.failures() {
            if let Some(file) = &r.replay {
                std::fs::write(
                    dir.join(format!("{}-{}.json", r.name, r.mode.name())),
                    file.to_json(),
                )?;
            }
        }
    }
    emit(cli, &report.to_json(), stdout)?;
    let s = &report.summary;
    let line = format!(
        "instances {} checks {} passed {} failed {} max discrepancy {}\n",
        s.instances, s.checks, s.passed, s.failed, s.max_discrepancy
    );
    if cli.out.is_some() {
        stdout.write_all(line.as_bytes())?;
    }
    for r in report.failures() {
        writeln!(
            stderr,
            "FAILED {} ({}): {}",
            r.name,
            r.mode.name(),
            r.failures.join("; ")
        )?;
        if let Some(file) = &r.replay {
            stderr.write_all(file.to_json().as_bytes())?;
        }
    }
    Ok(if report.all_passed() {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}
