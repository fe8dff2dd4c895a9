//! NFA universality and its reduction to the linear-bound problem.
//!
//! [`nfa_to_program`] builds a program whose output `Z` is linearly bounded
//! exactly when the automaton accepts every word over `{0, 1}`; variable
//! `X_q` is zero after reading a word iff state `q` is reachable on it.
//! [`is_universal`] decides universality directly by subset construction, so
//! the two can be checked against each other.
//!
//! File format, one directive per line, `#` comments:
//!
//! ```text
//! states 2
//! start 1
//! accept 1 2
//! trans 1 0 2
//! trans 2 1 2
//! ```

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt::Write as _;

use rand::Rng;
use thiserror::Error;

use crate::ast::{Command, Expr, Program, Var};
use crate::parse::{ParseError, Pos};

/// Largest state count, so that generated programs stay within the
/// analyzer's variable limit.
pub const MAX_STATES: u32 = 31;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum NfaError {
    #[error("state count must be between 1 and {MAX_STATES}, found {0}")]
    BadStateCount(u32),
    #[error("state {state} is out of range 1..={n}")]
    StateOutOfRange { state: u32, n: u32 },
    #[error("the accepting set must be non-empty")]
    NoAcceptingStates,
}

/// Automaton over the alphabet `{0, 1}` with states `1..=n_states`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nfa {
    n_states: u32,
    start: u32,
    accepting: BTreeSet<u32>,
    transitions: BTreeSet<(u32, u8, u32)>,
}

impl Nfa {
    pub fn new(
        n_states: u32,
        start: u32,
        accepting: BTreeSet<u32>,
        transitions: BTreeSet<(u32, u8, u32)>,
    ) -> Result<Nfa, NfaError> {
        if n_states == 0 || n_states > MAX_STATES {
            return Err(NfaError::BadStateCount(n_states));
        }
        let check = |state: u32| {
            if (1..=n_states).contains(&state) {
                Ok(())
            } else {
                Err(NfaError::StateOutOfRange { state, n: n_states })
            }
        };
        check(start)?;
        if accepting.is_empty() {
            return Err(NfaError::NoAcceptingStates);
        }
        for &q in &accepting {
            check(q)?;
        }
        for &(p, a, q) in &transitions {
            debug_assert!(a <= 1);
            check(p)?;
            check(q)?;
        }
        Ok(Nfa {
            n_states,
            start,
            accepting,
            transitions,
        })
    }

    pub fn n_states(&self) -> u32 {
        self.n_states
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn accepting(&self) -> &BTreeSet<u32> {
        &self.accepting
    }

    pub fn transitions(&self) -> &BTreeSet<(u32, u8, u32)> {
        &self.transitions
    }

    /// States with an `a`-transition into `q`, ascending.
    pub fn predecessors(&self, q: u32, a: u8) -> Vec<u32> {
        self.transitions
            .iter()
            .filter(|&&(_, b, r)| b == a && r == q)
            .map(|&(p, _, _)| p)
            .collect()
    }
}

/// Parses the line-oriented NFA format.
pub fn parse_nfa(text: &str) -> Result<Nfa, ParseError> {
    let mut states: Option<u32> = None;
    let mut start: Option<u32> = None;
    let mut accepting: Option<BTreeSet<u32>> = None;
    let mut transitions = BTreeSet::new();
    let mut last = Pos { line: 1, column: 1 };
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let words: Vec<(usize, &str)> = words_with_columns(content);
        let Some(&(col, directive)) = words.first() else {
            continue;
        };
        last = Pos { line, column: col };
        let number = |k: usize| -> Result<u32, ParseError> {
            let &(c, w) = words.get(k).ok_or_else(|| {
                Pos {
                    line,
                    column: content.chars().count() + 1,
                }
                .error(format!("`{directive}` is missing an argument"))
            })?;
            w.parse()
                .map_err(|_| Pos { line, column: c }.error(format!("expected a number, found `{w}`")))
        };
        let arity = |k: usize| -> Result<(), ParseError> {
            match words.get(k) {
                Some(&(c, w)) => Err(Pos { line, column: c }.error(format!("unexpected `{w}`"))),
                None => Ok(()),
            }
        };
        let here = Pos { line, column: col };
        match directive {
            "states" => {
                if states.is_some() {
                    return Err(here.error("duplicate `states`"));
                }
                states = Some(number(1)?);
                arity(2)?;
            }
            "start" => {
                if start.is_some() {
                    return Err(here.error("duplicate `start`"));
                }
                start = Some(number(1)?);
                arity(2)?;
            }
            "accept" => {
                let set = accepting.get_or_insert_with(BTreeSet::new);
                for k in 1..words.len() {
                    set.insert(number(k)?);
                }
            }
            "trans" => {
                let p = number(1)?;
                let a = number(2)?;
                if a > 1 {
                    let column = words[2].0;
                    return Err(Pos { line, column }.error("symbols must be 0 or 1"));
                }
                let q = number(3)?;
                arity(4)?;
                transitions.insert((p, a as u8, q));
            }
            other => return Err(here.error(format!("unknown directive `{other}`"))),
        }
    }
    let states = states.ok_or_else(|| last.error("missing `states`"))?;
    let start = start.ok_or_else(|| last.error("missing `start`"))?;
    let accepting = accepting.unwrap_or_default();
    Nfa::new(states, start, accepting, transitions).map_err(|e| last.error(e.to_string()))
}

fn words_with_columns(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut word: Option<(usize, usize)> = None;
    for (k, (b, c)) in line.char_indices().enumerate() {
        if c.is_whitespace() {
            if let Some((s, col)) = word.take() {
                out.push((col, &line[s..b]));
            }
        } else if word.is_none() {
            word = Some((b, k + 1));
        }
    }
    if let Some((s, col)) = word {
        out.push((col, &line[s..]));
    }
    out
}

/// Text in the format accepted by [`parse_nfa`].
pub fn render_nfa(a: &Nfa) -> String {
    let mut out = format!("states {}\nstart {}\naccept", a.n_states, a.start);
    for q in &a.accepting {
        let _ = write!(out, " {q}");
    }
    out.push('\n');
    for (p, s, q) in &a.transitions {
        let _ = writeln!(out, "trans {p} {s} {q}");
    }
    out
}

/// Variable layout of generated programs: `X_q = q`, `X'_q = n + q`,
/// `Y = 2n + 1`, `Z = 2n + 2`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    pub n_states: u32,
}

impl Layout {
    pub fn state(self, q: u32) -> Var {
        Var::new(q)
    }

    pub fn shadow(self, q: u32) -> Var {
        Var::new(self.n_states + q)
    }

    pub fn bound(self) -> Var {
        Var::new(2 * self.n_states + 1)
    }

    pub fn output(self) -> Var {
        Var::new(2 * self.n_states + 2)
    }

    pub fn var_count(self) -> u32 {
        2 * self.n_states + 2
    }
}

/// `target := target * X_p` for every `p`, left to right.
fn multiply_into(target: Var, factors: &[u32], layout: Layout) -> Vec<Command> {
    factors
        .iter()
        .map(|&p| Command::assign(target, Expr::Mul(target, layout.state(p))))
        .collect()
}

/// Builds `X_start := 0; loop Y { choose { C_0 } or { C_1 } }; Fin`.
pub fn nfa_to_program(a: &Nfa) -> Program {
    let layout = Layout { n_states: a.n_states };
    let z = layout.output();
    let letter = |sym: u8| {
        let mut cmds = Vec::new();
        for q in 1..=a.n_states {
            let shadow = layout.shadow(q);
            cmds.push(Command::assign(shadow, Expr::Var(z)));
            cmds.extend(multiply_into(shadow, &a.predecessors(q, sym), layout));
        }
        for q in 1..=a.n_states {
            cmds.push(Command::assign(layout.state(q), Expr::Var(layout.shadow(q))));
        }
        Command::seq_all(cmds)
    };
    let mut top = vec![
        Command::assign(layout.state(a.start), Expr::Zero),
        Command::looped(layout.bound(), Command::choose(letter(0), letter(1))),
    ];
    let accepting: Vec<u32> = a.accepting.iter().copied().collect();
    top.extend(multiply_into(z, &accepting, layout));
    Program::new(layout.var_count(), Command::seq_all(top)).expect("construction never assigns Y")
}

/// Whether every word over `{0, 1}` is accepted, by breadth-first search over
/// reachable state subsets (the empty subset rejects).
pub fn is_universal(a: &Nfa) -> bool {
    let bit = |q: u32| 1u64 << (q - 1);
    let accept_mask = a.accepting.iter().fold(0, |m, &q| m | bit(q));
    let mut succ = vec![[0u64; 2]; a.n_states as usize + 1];
    for &(p, s, q) in &a.transitions {
        succ[p as usize][s as usize] |= bit(q);
    }
    let first = bit(a.start);
    let mut seen = HashSet::from([first]);
    let mut queue = VecDeque::from([first]);
    while let Some(set) = queue.pop_front() {
        if set & accept_mask == 0 {
            return false;
        }
        for sym in [0, 1] {
            let next = (1..=a.n_states)
                .filter(|&q| set & bit(q) != 0)
                .fold(0, |m, q| m | succ[q as usize][sym]);
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    true
}

/// A random automaton: each possible transition is present with
/// probability `density`; the start state and a non-empty accepting set are
/// uniform.
pub fn random_nfa<R: Rng + ?Sized>(rng: &mut R, n_states: u32, density: f64) -> Nfa {
    let mut transitions = BTreeSet::new();
    for p in 1..=n_states {
        for s in 0..2u8 {
            for q in 1..=n_states {
                if rng.gen_bool(density) {
                    transitions.insert((p, s, q));
                }
            }
        }
    }
    let mask = rng.gen_range(1..1u64 << n_states);
    let accepting = (1..=n_states).filter(|q| mask & (1 << (q - 1)) != 0).collect();
    let start = rng.gen_range(1..=n_states);
    Nfa::new(n_states, start, accepting, transitions).expect("generated automaton is valid")
}

/// Every automaton with `n_states` states: all transition subsets, all
/// non-empty accepting sets and all start states. Only practical for
/// `n_states <= 2`.
pub fn enumerate_nfas(n_states: u32) -> impl Iterator<Item = Nfa> {
    let all: Vec<(u32, u8, u32)> = (1..=n_states)
        .flat_map(|p| (0..2u8).flat_map(move |s| (1..=n_states).map(move |q| (p, s, q))))
        .collect();
    let subsets = 1u64 << all.len();
    (0..subsets).flat_map(move |tmask| {
        let transitions: BTreeSet<_> = all
            .iter()
            .enumerate()
            .filter(|(k, _)| tmask & (1 << k) != 0)
            .map(|(_, t)| *t)
            .collect();
        (1..1u64 << n_states).flat_map(move |amask| {
            let accepting: BTreeSet<u32> = (1..=n_states).filter(|q| amask & (1 << (q - 1)) != 0).collect();
            let transitions = transitions.clone();
            (1..=n_states).map(move |start| {
                Nfa::new(n_states, start, accepting.clone(), transitions.clone())
                    .expect("enumerated automaton is valid")
            })
        })
    })
}
