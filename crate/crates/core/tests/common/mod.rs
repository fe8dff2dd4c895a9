#![allow(dead_code)]

use std::collections::BTreeSet;

use lrbound::{Command, Expr, Program};

/// Reachable (store, steps) pairs by direct recursion over the syntax.
/// Loops are unrolled explicitly: k = 0..=bound iterations.
pub fn outcomes(c: &Command, s: &[u64]) -> BTreeSet<(Vec<u64>, u64)> {
    match c {
        Command::Skip => BTreeSet::from([(s.to_vec(), 1)]),
        Command::Assign(x, e) => {
            let val = |v: lrbound::Var| s[v.index() as usize - 1];
            let value = match *e {
                Expr::Zero => 0,
                Expr::Var(y) => val(y),
                Expr::Add(y, z) => val(y) + val(z),
                Expr::Mul(y, z) => val(y) * val(z),
            };
            let mut t = s.to_vec();
            t[x.index() as usize - 1] = value;
            BTreeSet::from([(t, 1)])
        }
        Command::Seq(a, b) => {
            let mut out = BTreeSet::new();
            for (t, k) in outcomes(a, s) {
                for (u, m) in outcomes(b, &t) {
                    out.insert((u, k + m));
                }
            }
            out
        }
        Command::Choose(a, b) => {
            let mut out = outcomes(a, s);
            out.extend(outcomes(b, s));
            out
        }
        Command::Loop(x, body) => {
            let bound = s[x.index() as usize - 1];
            let mut frontier = BTreeSet::from([(s.to_vec(), 0)]);
            let mut out = frontier.clone();
            for _ in 0..bound {
                let mut next = BTreeSet::new();
                for (t, k) in &frontier {
                    for (u, m) in outcomes(body, t) {
                        next.insert((u, k + m));
                    }
                }
                out.extend(next.iter().cloned());
                frontier = next;
            }
            out
        }
    }
}

/// Per-variable maxima and the maximal step count over all outcomes.
pub fn maxima(p: &Program, s: &[u64]) -> (Vec<u64>, u64) {
    let all = outcomes(p.root(), s);
    let mut best = vec![0; s.len()];
    let mut steps = 0;
    for (t, k) in &all {
        for (b, v) in best.iter_mut().zip(t) {
            *b = (*b).max(*v);
        }
        steps = steps.max(*k);
    }
    (best, steps)
}

pub fn final_stores(p: &Program, s: &[u64]) -> BTreeSet<Vec<u64>> {
    outcomes(p.root(), s).into_iter().map(|(t, _)| t).collect()
}
