//! Decides which outputs of a bounded-loop imperative program can grow
//! faster than a polynomial (or a linear function) of its inputs.
//!
//! The language has `skip`, assignments `X := 0 | Y | Y + Z | Y * Z`,
//! sequencing, nondeterministic `choose` and `loop X { ... }`, which runs its
//! body at most `X` times. The analysis in [`analyze`] is a context-sensitive
//! proof system over dependence facts ([`deps`]); [`interp`] enumerates the
//! concrete semantics on small inputs, and [`nfa`] reduces NFA universality
//! to the linear-bound problem.
//!
//! ```
//! use lrbound::{parse_program, Analysis, AnalysisConfig, Mode};
//!
//! let p = parse_program("loop X2 { X1 := X1 + X1 }").unwrap();
//! let mut a = Analysis::new(&p, AnalysisConfig::new(Mode::Poly)).unwrap();
//! let v = a.verdicts().unwrap();
//! assert!(!v[0].bounded); // X1 doubles X2 times
//! assert!(v[1].bounded);
//! ```

pub mod analyze;
pub mod ast;
pub mod corpus;
pub mod deps;
pub mod interp;
pub mod nfa;
pub mod parse;

pub use analyze::{
    atomic_judgements, Analysis, AnalysisConfig, AnalysisError, Context, JudgementSet, Stats, Verdict, Witness,
};
pub use ast::{validate, vars_of, Command, Expr, Program, Var, Violation};
pub use deps::{compose, compose_all, loop_correct, Dep, DepType, Mode};
pub use interp::{growth_probe, max_outputs, reachable_stores, ExecLimits, ExecResult, Store};
pub use nfa::{is_universal, nfa_to_program, parse_nfa, Nfa};
pub use parse::{parse_program, render, render_pretty, ParseError};
