//! `hodl`: check, run and inspect higher-order Datalog programs, compile
//! Turing machines into them and cross-check the result.
//!
//! Exit codes: 0 accept or clean, 1 reject, 2 step budget exhausted,
//! 3 any other error.

mod crosscheck;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use hodl_core::codegen::{compile_tm_first_order, compile_tm_higher_order};
use hodl_core::encode::{encode_input, merge};
use hodl_core::engines::{decide_traced, EngineConfig, EngineKind, DEFAULT_STEP_BUDGET};
use hodl_core::semantics::{dump_model, least_model_naive, DEFAULT_DOMAIN_CAP};
use hodl_core::syntax::parse_and_desugar;
use hodl_core::tm::{parse_named_tm, tm_run, TuringMachine, Verdict, DEFAULT_HORIZON};
use hodl_core::{check, Error, Program};

pub const EXIT_OK: u8 = 0;
pub const EXIT_REJECT: u8 = 1;
pub const EXIT_BUDGET: u8 = 2;
pub const EXIT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "hodl", version, about = "Higher-order Datalog toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct EngineOpts {
    /// Evaluation engine: naive, seminaive or demand.
    #[arg(long, default_value_t = EngineKind::Demand)]
    engine: EngineKind,
    /// Step budget for the seminaive and demand engines.
    #[arg(long, default_value_t = DEFAULT_STEP_BUDGET)]
    budget: u64,
    /// Largest semantic domain the naive engine may enumerate.
    #[arg(long, default_value_t = DEFAULT_DOMAIN_CAP)]
    cap: u64,
}

impl EngineOpts {
    fn config(self, trace: bool) -> EngineConfig {
        EngineConfig { engine: self.engine, step_budget: self.budget, domain_cap: self.cap, trace }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse, type-check and validate a program.
    Check { file: PathBuf },
    /// Decide whether a program accepts an input string.
    Run {
        file: PathBuf,
        /// Input string over {a, b}.
        #[arg(long, default_value = "")]
        input: String,
        #[command(flatten)]
        engine: EngineOpts,
        /// Print evaluation trace lines to stderr.
        #[arg(long)]
        trace: bool,
    },
    /// Print the minimum model computed by the naive engine.
    Model {
        file: PathBuf,
        /// Add the encoding of this string before evaluating.
        #[arg(long)]
        input: Option<String>,
        #[arg(long, default_value_t = DEFAULT_DOMAIN_CAP)]
        cap: u64,
    },
    /// Compile a Turing machine into a program of the given order.
    CompileTm {
        machine: PathBuf,
        /// Target order; 1 gives the first-order simulator.
        #[arg(long = "order", default_value_t = 1)]
        order: usize,
        /// Tuple width.
        #[arg(long, default_value_t = 1)]
        d: usize,
        /// Write the program here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a Turing machine directly.
    TmRun {
        machine: PathBuf,
        #[arg(long, default_value = "")]
        input: String,
        /// Maximum number of transitions.
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        budget: u64,
    },
    /// Compare a compiled machine with direct simulation on all short strings.
    Crosscheck {
        machine: PathBuf,
        #[arg(long = "order", default_value_t = 1)]
        order: usize,
        #[arg(long, default_value_t = 1)]
        d: usize,
        /// Longest input string tested.
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        /// Defaults to seminaive at order 1 and demand above.
        #[arg(long)]
        engine: Option<EngineKind>,
        #[arg(long, default_value_t = DEFAULT_STEP_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = DEFAULT_DOMAIN_CAP)]
        cap: u64,
        /// Also write the rows as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let code = match e.downcast_ref::<Error>() {
                Some(Error::BudgetExhausted { .. }) => {
                    println!("unknown");
                    EXIT_BUDGET
                }
                _ => EXIT_ERROR,
            };
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}

fn run(cmd: Command) -> Result<u8> {
    match cmd {
        Command::Check { file } => cmd_check(&file),
        Command::Run { file, input, engine, trace } => {
            let prog = load_program(&file)?;
            let mut sink = |line: String| eprintln!("{line}");
            let d = decide_traced(&prog, &input, &engine.config(trace), &mut sink).map_err(|e| describe(&file, e))?;
            println!("{}", if d.accept { "accept" } else { "reject" });
            eprintln!("steps: {}", d.steps);
            Ok(if d.accept { EXIT_OK } else { EXIT_REJECT })
        }
        Command::Model { file, input, cap } => {
            let mut prog = load_program(&file)?;
            if let Some(w) = input {
                prog = merge(&prog, &encode_input(&w)?)?;
            }
            let tp = check(&prog).map_err(|e| describe(&file, e))?;
            let m = least_model_naive(&tp, cap)?;
            print!("{}", dump_model(&m.interp, &tp.universe));
            eprintln!("iterations: {}", m.iterations);
            Ok(EXIT_OK)
        }
        Command::CompileTm { machine, order, d, out } => {
            let m = load_machine(&machine)?;
            let g = compile(&m, order, d)?;
            match out {
                Some(path) => fs::write(&path, &g.text).with_context(|| format!("writing {}", path.display()))?,
                None => std::io::stdout().write_all(g.text.as_bytes())?,
            }
            Ok(EXIT_OK)
        }
        Command::TmRun { machine, input, budget } => {
            let m = load_machine(&machine)?;
            let r = tm_run(&m, &input, budget)?;
            println!("verdict: {}", r.verdict);
            println!("steps: {}", r.steps_used);
            println!("state: {}", r.final_state);
            Ok(match r.verdict {
                Verdict::Accepted => EXIT_OK,
                Verdict::Rejected => EXIT_REJECT,
                Verdict::OutOfSteps => EXIT_BUDGET,
                Verdict::LeftEdgeViolation => EXIT_ERROR,
            })
        }
        Command::Crosscheck { machine, order, d, max_len, engine, budget, cap, out } => {
            let m = load_machine(&machine)?;
            let engine = engine.unwrap_or(if order == 1 { EngineKind::Seminaive } else { EngineKind::Demand });
            let cfg = EngineConfig { engine, step_budget: budget, domain_cap: cap, trace: false };
            let report = crosscheck::run(&m, order, d, max_len, &cfg)?;
            print!("{}", report.table());
            if let Some(path) = out {
                report.write_csv(&path).with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(report.exit_code())
        }
    }
}

fn cmd_check(file: &Path) -> Result<u8> {
    let name = file.display().to_string();
    let text = read(file)?;
    let prog = match parse_and_desugar(&text) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{name}:{e}");
            return Ok(EXIT_ERROR);
        }
    };
    match check(&prog) {
        Ok(tp) => {
            println!("order: {}", tp.order);
            for (p, ty) in &tp.program.signatures {
                println!("{p} : {ty}");
            }
            Ok(EXIT_OK)
        }
        Err(Error::Invalid(diags)) => {
            for d in diags {
                eprintln!("{}", d.render(&name));
            }
            Ok(EXIT_ERROR)
        }
        Err(e) => Err(e.into()),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_program(path: &Path) -> Result<Program> {
    let text = read(path)?;
    parse_and_desugar(&text).map_err(|e| describe(path, e))
}

/// Attaches the file name and renders validation diagnostics in full.
fn describe(path: &Path, e: Error) -> anyhow::Error {
    match e {
        Error::Invalid(ds) => {
            let lines: Vec<String> = ds.iter().map(|d| d.render(&path.display().to_string())).collect();
            anyhow::anyhow!("{}", lines.join("\n"))
        }
        Error::Syntax { .. } => anyhow::anyhow!("{}:{e}", path.display()),
        other => other.into(),
    }
}

fn load_machine(path: &Path) -> Result<TuringMachine> {
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "machine".into());
    parse_named_tm(&name, &read(path)?).with_context(|| format!("in {}", path.display()))
}

pub(crate) fn compile(m: &TuringMachine, order: usize, d: usize) -> Result<hodl_core::codegen::Generated> {
    Ok(match order {
        0 => anyhow::bail!("order must be at least 1"),
        1 => compile_tm_first_order(m, d)?,
        k => compile_tm_higher_order(m, k, d)?,
    })
}
