//! Exhaustive relational semantics.
//!
//! Every command denotes a relation between stores. [`reachable_stores`]
//! enumerates the image of a single initial store by breadth-first set
//! saturation, recording for each distinct store the largest step count of
//! an execution that reaches it. Assignments store the exact value of their
//! right-hand side; a loop runs its body any number of times from 0 up to
//! the entry value of its bound.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::ast::{Command, Expr, Program, Var};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Store(pub Vec<u64>);

impl Store {
    pub fn uniform(n: u32, value: u64) -> Store {
        Store(vec![value; n as usize])
    }

    pub fn get(&self, v: Var) -> u64 {
        self.0[v.slot()]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Pointwise `self <= other`.
    pub fn le(&self, other: &Store) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl From<Vec<u64>> for Store {
    fn from(v: Vec<u64>) -> Store {
        Store(v)
    }
}

impl fmt::Display for Store {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct ExecLimits {
    /// Cap on the number of distinct stores held at any point.
    pub max_stores: usize,
    /// Any computed value above this aborts that execution path.
    pub max_value: u64,
}

impl Default for ExecLimits {
    fn default() -> Self {
        ExecLimits {
            max_stores: 1_000_000,
            max_value: 1_000_000_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExecResult {
    pub final_stores: BTreeSet<Store>,
    pub max_per_var: Vec<u64>,
    pub max_step_count: u64,
    /// Set when a limit cut enumeration short; the store set is then partial.
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum InterpError {
    #[error("{var} is used but the store has only {len} entries")]
    VarOutOfRange { var: Var, len: usize },
}

/// Store -> largest step count of an execution reaching it.
type States = HashMap<Store, u64>;

struct Exec {
    lim: ExecLimits,
    truncated: bool,
}

impl Exec {
    fn add(&mut self, states: &mut States, store: Store, steps: u64) {
        if let Some(s) = states.get_mut(&store) {
            *s = (*s).max(steps);
        } else if states.len() >= self.lim.max_stores {
            self.truncated = true;
        } else {
            states.insert(store, steps);
        }
    }

    fn merge(&mut self, into: &mut States, from: States) {
        for (store, steps) in from {
            self.add(into, store, steps);
        }
    }

    fn run(&mut self, c: &Command, input: States) -> States {
        match c {
            Command::Skip => input.into_iter().map(|(s, k)| (s, k + 1)).collect(),
            Command::Assign(l, e) => {
                let mut out = States::with_capacity(input.len());
                for (mut s, k) in input {
                    let value = match *e {
                        Expr::Zero => Some(0),
                        Expr::Var(r) => Some(s.get(r)),
                        Expr::Add(r, t) => s.get(r).checked_add(s.get(t)),
                        Expr::Mul(r, t) => s.get(r).checked_mul(s.get(t)),
                    };
                    match value.filter(|&v| v <= self.lim.max_value) {
                        Some(v) => {
                            s.0[l.slot()] = v;
                            self.add(&mut out, s, k + 1);
                        }
                        None => self.truncated = true,
                    }
                }
                out
            }
            Command::Seq(a, b) => {
                let mid = self.run(a, input);
                self.run(b, mid)
            }
            Command::Choose(a, b) => {
                let mut left = self.run(a, input.clone());
                let right = self.run(b, input);
                self.merge(&mut left, right);
                left
            }
            Command::Loop(l, body) => {
                let mut result = input.clone();
                let mut frontier = input;
                let mut done = 0u64;
                loop {
                    frontier.retain(|s, _| s.get(*l) > done);
                    if frontier.is_empty() {
                        break;
                    }
                    frontier = self.run(body, frontier);
                    done += 1;
                    self.merge(&mut result, frontier.clone());
                }
                result
            }
        }
    }
}

/// All final stores of `c` started in `s0`, with per-variable maxima and the
/// maximum step count. Atomic commands cost one step; `choose` and the loop
/// header cost nothing.
pub fn reachable_stores(c: &Command, s0: &Store, lim: ExecLimits) -> Result<ExecResult, InterpError> {
    if let Some(var) = c.max_var().filter(|v| v.slot() >= s0.len()) {
        return Err(InterpError::VarOutOfRange { var, len: s0.len() });
    }
    let mut exec = Exec { lim, truncated: false };
    let states = exec.run(c, HashMap::from([(s0.clone(), 0)]));
    let mut max_per_var = vec![0; s0.len()];
    let mut max_step_count = 0;
    for (s, &k) in &states {
        for (m, &v) in max_per_var.iter_mut().zip(&s.0) {
            *m = (*m).max(v);
        }
        max_step_count = max_step_count.max(k);
    }
    Ok(ExecResult {
        final_stores: states.into_keys().collect(),
        max_per_var,
        max_step_count,
        truncated: exec.truncated,
    })
}

/// Per-variable maxima over all final stores, with the truncation flag.
pub fn max_outputs(c: &Command, s0: &Store, lim: ExecLimits) -> Result<(Vec<u64>, bool), InterpError> {
    reachable_stores(c, s0, lim).map(|r| (r.max_per_var, r.truncated))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeRow {
    pub input: u64,
    pub max_per_var: Vec<u64>,
    pub truncated: bool,
}

/// Runs `p` on the uniform inputs `(N, ..., N)` for each probe value `N`.
pub fn growth_probe(p: &Program, probes: &[u64], lim: ExecLimits) -> Vec<ProbeRow> {
    probes
        .iter()
        .map(|&input| {
            let r = reachable_stores(p.root(), &Store::uniform(p.n(), input), lim)
                .expect("validated program fits its own store");
            ProbeRow {
                input,
                max_per_var: r.max_per_var,
                truncated: r.truncated,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_program;

    fn run(text: &str, s0: &[u64]) -> ExecResult {
        let p = parse_program(text).unwrap();
        reachable_stores(p.root(), &Store(s0.to_vec()), ExecLimits::default()).unwrap()
    }

    #[test]
    fn skip_is_identity_with_one_step() {
        let r = run("vars 2\nskip", &[5, 7]);
        assert_eq!(r.final_stores, [Store(vec![5, 7])].into());
        assert_eq!(r.max_step_count, 1);
        assert!(!r.truncated);
    }

    #[test]
    fn doubling_loop_enumerates_each_iteration_count() {
        let r = run("loop X2 { X1 := X1 + X1 }", &[1, 3]);
        let x1: BTreeSet<u64> = r.final_stores.iter().map(|s| s.0[0]).collect();
        assert_eq!(x1, [1, 2, 4, 8].into());
        assert_eq!(r.max_per_var, vec![8, 3]);
        assert_eq!(r.max_step_count, 3);
    }

    #[test]
    fn single_assignment_and_choice() {
        let r = run("X1 := X2 * X3", &[0, 4, 5]);
        assert_eq!(r.max_per_var, vec![20, 4, 5]);
        let r = run("choose { X1 := X2 } or { X1 := X3 }", &[0, 4, 5]);
        assert_eq!(r.max_per_var, vec![5, 4, 5]);
        assert_eq!(r.final_stores.len(), 2);
    }

    #[test]
    fn zero_bound_skips_the_loop() {
        let r = run("loop X2 { X1 := X1 + X1 }", &[3, 0]);
        assert_eq!(r.final_stores, [Store(vec![3, 0])].into());
        assert_eq!(r.max_step_count, 0);
    }

    #[test]
    fn value_cap_truncates() {
        let p = parse_program("loop X2 { X1 := X1 * X1 }").unwrap();
        let lim = ExecLimits {
            max_stores: 100,
            max_value: 1000,
        };
        let r = reachable_stores(p.root(), &Store(vec![10, 5]), lim).unwrap();
        assert!(r.truncated);
        assert_eq!(r.max_per_var[0], 100);
    }

    #[test]
    fn store_cap_truncates() {
        let p = parse_program("loop X2 { choose { X1 := X1 + X3 } or { X3 := X1 + X3 } }").unwrap();
        let lim = ExecLimits {
            max_stores: 10,
            max_value: u64::MAX,
        };
        let r = reachable_stores(p.root(), &Store(vec![1, 8, 1]), lim).unwrap();
        assert!(r.truncated);
        assert!(r.final_stores.len() <= 10);
    }

    #[test]
    fn short_store_is_an_error() {
        let p = parse_program("X3 := X1").unwrap();
        assert_eq!(
            reachable_stores(p.root(), &Store(vec![1, 2]), ExecLimits::default()),
            Err(InterpError::VarOutOfRange {
                var: Var::new(3),
                len: 2
            })
        );
    }

    #[test]
    fn growth_probe_doubling() {
        let p = parse_program("loop X2 { X1 := X1 + X1 }").unwrap();
        let rows = growth_probe(&p, &[1, 2, 3], ExecLimits::default());
        let x1: Vec<u64> = rows.iter().map(|r| r.max_per_var[0]).collect();
        assert_eq!(x1, vec![2, 8, 24]);
    }
}
