//! Reference programs and a seeded random program generator, used by the
//! test suites and the CLI's batch commands.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::ast::{Command, Expr, Program, Var};
use crate::parse::parse_program;

/// Named reference programs in the text format.
pub const EXAMPLES: &[(&str, &str)] = &[
    (
        "growing_sum",
        "loop X4 { X3 := X1 + X2 ; choose { X1 := X3 } or { X2 := X3 } }",
    ),
    (
        "bounded_sum",
        "loop X4 { X3 := X1 + X2 ; choose { X1 := X3 } or { X2 := 0 } }",
    ),
    ("copy_double", "loop X4 { loop X3 { X1 := X2 } ; X2 := X1 + X2 }"),
    (
        "copy_double_reset",
        "loop X4 { loop X3 { X1 := X2 } ; X2 := X1 + X2 ; X3 := 0 }",
    ),
    ("reset_then_product", "X2 := 0 ; loop X3 { X1 := X2 * X1 ; X2 := X1 }"),
    (
        "reset_then_product_swapped",
        "X2 := 0 ; loop X3 { X2 := X1 ; X1 := X2 * X1 }",
    ),
    ("guarded_sum", "loop X3 { X1 := X2 + X3 }"),
    ("square_accumulate", "X3 := X2 * X2 ; X1 := X1 + X3"),
    ("double_accumulate", "X3 := X2 + X2 ; X1 := X1 + X3"),
    ("accumulate", "X1 := X1 + X2"),
    ("square", "X1 := X2 * X2"),
    ("identity", "vars 2\nskip"),
    ("doubling", "loop X2 { X1 := X1 + X1 }"),
    ("additive_loop", "loop X3 { X1 := X1 + X2 }"),
];

pub fn example(name: &str) -> Option<Program> {
    EXAMPLES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| parse_program(text).expect("reference program parses"))
}

pub fn examples() -> Vec<(&'static str, Program)> {
    EXAMPLES
        .iter()
        .map(|&(name, text)| (name, parse_program(text).expect("reference program parses")))
        .collect()
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct GenConfig {
    /// Variable count is drawn from `2..=max_vars`.
    pub max_vars: u32,
    /// Maximum nesting depth of composite commands.
    pub max_depth: u32,
    /// Probability that an assignment is a reset.
    pub reset_prob: f64,
    /// Probability that a composite position becomes a leaf early.
    pub leaf_prob: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_vars: 5,
            max_depth: 4,
            reset_prob: 0.2,
            leaf_prob: 0.3,
        }
    }
}

/// A random valid program.
pub fn random_program<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig) -> Program {
    let n = rng.gen_range(2..=cfg.max_vars.max(2));
    let mut bounds = Vec::new();
    let root = gen_command(rng, cfg, n, cfg.max_depth, &mut bounds);
    Program::new(n, root).expect("generator respects loop bounds")
}

fn gen_command<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig, n: u32, depth: u32, bounds: &mut Vec<Var>) -> Command {
    if depth == 0 || rng.gen_bool(cfg.leaf_prob) {
        return gen_atomic(rng, cfg, n, bounds);
    }
    match rng.gen_range(0..3) {
        0 => Command::seq(
            gen_command(rng, cfg, n, depth - 1, bounds),
            gen_command(rng, cfg, n, depth - 1, bounds),
        ),
        1 => Command::choose(
            gen_command(rng, cfg, n, depth - 1, bounds),
            gen_command(rng, cfg, n, depth - 1, bounds),
        ),
        _ => {
            let bound = Var::new(rng.gen_range(1..=n));
            bounds.push(bound);
            let body = gen_command(rng, cfg, n, depth - 1, bounds);
            bounds.pop();
            Command::looped(bound, body)
        }
    }
}

fn gen_atomic<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig, n: u32, bounds: &[Var]) -> Command {
    let free: Vec<Var> = (1..=n).map(Var::new).filter(|v| !bounds.contains(v)).collect();
    let Some(&lhs) = free.choose(rng) else {
        return Command::Skip;
    };
    if rng.gen_bool(0.1) {
        return Command::Skip;
    }
    if rng.gen_bool(cfg.reset_prob) {
        return Command::assign(lhs, Expr::Zero);
    }
    let mut pick = || Var::new(rng.gen_range(1..=n));
    let (r, s) = (pick(), pick());
    let rhs = match rng.gen_range(0..3) {
        0 => Expr::Var(r),
        1 => Expr::Add(r, s),
        _ => Expr::Mul(r, s),
    };
    Command::assign(lhs, rhs)
}
