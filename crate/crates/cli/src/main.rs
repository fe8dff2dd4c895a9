use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use lrbound::nfa::{random_nfa, render_nfa, Layout};
use lrbound::{
    is_universal, nfa_to_program, parse_nfa, parse_program, reachable_stores, render_pretty, Analysis, AnalysisConfig,
    AnalysisError, ExecLimits, Mode, Nfa, Program, Store, Var,
};
use rand::rngs::StdRng;
use rand::SeedableRng;

mod report;

use report::Report;

#[derive(Parser, Debug)]
#[command(name = "lrbound", version, about = "Growth-rate analysis for bounded-loop programs")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Decide which variables are polynomially (or linearly) bounded.
    Analyze(AnalyzeArgs),
    /// Enumerate every execution on one input store.
    Run(RunArgs),
    /// Emit, check or difftest the NFA universality reduction.
    Nfa(NfaArgs),
}

#[derive(clap::Args, Debug)]
struct AnalyzeArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::Poly)]
    mode: ModeArg,
    /// Print a derivation for every unbounded variable.
    #[arg(long)]
    witness: bool,
    /// Use every derivable loop judgement as a correction premise.
    #[arg(long)]
    full_l2_fixpoint: bool,
    /// Allow shrinking post-contexts (experimental).
    #[arg(long)]
    post_weakening: bool,
    /// Report only this variable (1-based index).
    #[arg(long, value_name = "J")]
    var: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, default_value_t = AnalysisConfig::default().max_memo_entries)]
    max_memo_entries: usize,
    #[arg(long, default_value_t = AnalysisConfig::default().max_contexts_per_node)]
    max_contexts_per_node: usize,
}

#[derive(clap::Args, Debug)]
struct RunArgs {
    file: PathBuf,
    /// Initial values of X1..Xn, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    inputs: Vec<u64>,
    #[arg(long, default_value_t = ExecLimits::default().max_stores)]
    max_stores: usize,
    #[arg(long, default_value_t = ExecLimits::default().max_value)]
    max_value: u64,
    /// Fail when the enumeration hits a limit.
    #[arg(long)]
    strict: bool,
}

#[derive(clap::Args, Debug)]
struct NfaArgs {
    #[arg(value_enum)]
    action: NfaAction,
    /// Automaton file; omit with `difftest --random`.
    file: Option<PathBuf>,
    /// Difftest this many seeded random automata instead of a file.
    #[arg(long, value_name = "COUNT")]
    random: Option<usize>,
    #[arg(long, default_value_t = 3)]
    states: u32,
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ModeArg {
    Poly,
    Lin,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Poly => Mode::Poly,
            ModeArg::Lin => Mode::Lin,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum NfaAction {
    Emit,
    Check,
    Difftest,
}

/// An error with its process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Failure {
        Failure {
            code,
            message: message.into(),
        }
    }
}

const EXIT_IO: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_TRUNCATED: u8 = 4;
const EXIT_DISAGREE: u8 = 5;

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Failure {
        let code = match e {
            AnalysisError::TooManyVariables(_) => EXIT_PARSE,
            _ => EXIT_RESOURCE,
        };
        Failure::new(code, e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))
}

fn load_program(path: &Path) -> Result<Program, Failure> {
    parse_program(&read(path)?).map_err(|e| Failure::new(EXIT_PARSE, format!("{}:{e}", path.display())))
}

fn load_nfa(path: &Path) -> Result<Nfa, Failure> {
    parse_nfa(&read(path)?).map_err(|e| Failure::new(EXIT_PARSE, format!("{}:{e}", path.display())))
}

fn analyze(args: &AnalyzeArgs) -> Result<(), Failure> {
    let program = load_program(&args.file)?;
    let cfg = AnalysisConfig {
        mode: args.mode.into(),
        full_l2_fixpoint: args.full_l2_fixpoint,
        post_weakening: args.post_weakening,
        max_memo_entries: args.max_memo_entries,
        max_contexts_per_node: args.max_contexts_per_node,
    };
    let vars: Vec<Var> = match args.var {
        Some(j) if j == 0 || j > program.n() => {
            return Err(Failure::new(
                EXIT_PARSE,
                format!("--var {j} is not a variable of this program"),
            ))
        }
        Some(j) => vec![Var::new(j)],
        None => program.vars().collect(),
    };
    let start = Instant::now();
    let mut analysis = Analysis::new(&program, cfg)?;
    let verdicts = vars
        .iter()
        .map(|&v| analysis.verdict(v))
        .collect::<Result<Vec<_>, _>>()?;
    let report = Report::new(cfg.mode, &verdicts, analysis.stats(), start.elapsed(), args.witness);
    match args.format {
        Format::Text => print!("{}", report.to_text()),
        Format::Json => println!("{}", serde_json::to_string_pretty(&report).expect("report serializes")),
    }
    Ok(())
}

fn run(args: &RunArgs) -> Result<(), Failure> {
    let program = load_program(&args.file)?;
    if args.inputs.len() != program.n() as usize {
        return Err(Failure::new(
            EXIT_PARSE,
            format!(
                "program has {} variables but {} inputs were given",
                program.n(),
                args.inputs.len()
            ),
        ));
    }
    let lim = ExecLimits {
        max_stores: args.max_stores,
        max_value: args.max_value,
    };
    let r = reachable_stores(program.root(), &Store(args.inputs.clone()), lim)
        .map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))?;
    println!("reachable stores: {}", r.final_stores.len());
    for (j, m) in r.max_per_var.iter().enumerate() {
        println!("max X{} = {m}", j + 1);
    }
    println!("max steps: {}", r.max_step_count);
    println!("truncated: {}", if r.truncated { "yes" } else { "no" });
    if r.truncated && args.strict {
        return Err(Failure::new(EXIT_TRUNCATED, "enumeration truncated by limits"));
    }
    Ok(())
}

/// Analyzer and oracle results for one automaton.
fn difftest_one(a: &Nfa) -> Result<(bool, String), Failure> {
    let program = nfa_to_program(a);
    let z = Layout { n_states: a.n_states() }.output();
    let v = Analysis::new(&program, AnalysisConfig::new(Mode::Lin))?.verdict(z)?;
    let oracle = is_universal(a);
    let agree = v.bounded == oracle;
    let tag = if agree { "AGREE" } else { "DISAGREE" };
    Ok((agree, format!("{tag} (Z {}, oracle {oracle})", v.label())))
}

fn nfa(args: &NfaArgs) -> Result<(), Failure> {
    if let Some(count) = args.random {
        if !matches!(args.action, NfaAction::Difftest) {
            return Err(Failure::new(EXIT_PARSE, "--random only applies to difftest"));
        }
        if args.states == 0 || args.states > lrbound::nfa::MAX_STATES {
            return Err(Failure::new(
                EXIT_PARSE,
                format!("--states must be in 1..={}", lrbound::nfa::MAX_STATES),
            ));
        }
        if !(0.0..=1.0).contains(&args.density) {
            return Err(Failure::new(EXIT_PARSE, "--density must be in [0, 1]"));
        }
        let mut rng = StdRng::seed_from_u64(args.seed);
        let mut disagreements = 0;
        for k in 0..count {
            let a = random_nfa(&mut rng, args.states, args.density);
            let (agree, line) = difftest_one(&a)?;
            println!("#{k}: {line}");
            if !agree {
                disagreements += 1;
                print!("{}", render_nfa(&a));
            }
        }
        println!(
            "{count} automata: {} AGREE, {disagreements} DISAGREE",
            count - disagreements
        );
        if disagreements > 0 {
            return Err(Failure::new(EXIT_DISAGREE, "analyzer and oracle disagree"));
        }
        return Ok(());
    }
    let Some(path) = &args.file else {
        return Err(Failure::new(EXIT_PARSE, "an automaton file is required"));
    };
    let a = load_nfa(path)?;
    match args.action {
        NfaAction::Emit => print!("{}", render_pretty(&nfa_to_program(&a))),
        NfaAction::Check => println!("{}", if is_universal(&a) { "UNIVERSAL" } else { "NOT-UNIVERSAL" }),
        NfaAction::Difftest => {
            let (agree, line) = difftest_one(&a)?;
            println!("{line}");
            if !agree {
                return Err(Failure::new(EXIT_DISAGREE, "analyzer and oracle disagree"));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Cmd::Analyze(a) => analyze(a),
        Cmd::Run(r) => run(r),
        Cmd::Nfa(n) => nfa(n),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
