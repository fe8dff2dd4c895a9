//! Inference rules for `skip` and assignments.

use crate::ast::{Command, Expr, Var};
use crate::deps::{Dep, DepType, Mode};

use super::Context;

/// Post-context of an atomic command: the variables guaranteed zero after it.
pub(crate) fn atomic_post(cmd: &Command, pre: Context) -> Context {
    let Command::Assign(l, e) = cmd else {
        return pre;
    };
    let zero = match *e {
        Expr::Zero => true,
        Expr::Var(r) => pre.contains(r),
        Expr::Mul(r, s) => pre.contains(r) || pre.contains(s),
        Expr::Add(r, s) => pre.contains(r) && pre.contains(s),
    };
    let rest = pre.without(*l);
    if zero {
        rest.with(*l)
    } else {
        rest
    }
}

fn mul_type(mode: Mode) -> DepType {
    match mode {
        Mode::Poly => DepType::Multiplicative,
        Mode::Lin => DepType::Exponential,
    }
}

/// Every fact derivable for an atomic command at `pre`, and the single
/// post-context they share. Binary facts follow the unary ones.
pub(crate) fn atomic_facts(mode: Mode, cmd: &Command, pre: Context, n: u32) -> (Context, Vec<Dep>) {
    debug_assert!(cmd.is_atomic());
    let post = atomic_post(cmd, pre);
    let target = match cmd {
        Command::Assign(l, _) => Some(*l),
        _ => None,
    };
    let mut facts: Vec<Dep> = (1..=n)
        .map(Var::new)
        .filter(|&i| !pre.contains(i) && Some(i) != target)
        .map(|i| Dep::unary(i, DepType::Identity, i))
        .collect();
    if let Command::Assign(l, e) = cmd {
        let l = *l;
        let live = |v: Var| !pre.contains(v);
        match *e {
            Expr::Zero => {}
            Expr::Var(r) => {
                if live(r) {
                    facts.push(Dep::unary(r, DepType::Identity, l));
                }
            }
            Expr::Mul(r, s) => {
                if live(r) && live(s) {
                    facts.push(Dep::unary(r, mul_type(mode), l));
                    if s != r {
                        facts.push(Dep::unary(s, mul_type(mode), l));
                    }
                }
            }
            // X + X doubles its operand: a multiplicative dependence in both modes.
            Expr::Add(r, s) if r == s => {
                if live(r) {
                    facts.push(Dep::unary(r, DepType::Multiplicative, l));
                }
            }
            Expr::Add(r, s) => match (live(r), live(s)) {
                (true, false) => facts.push(Dep::unary(r, DepType::Identity, l)),
                (false, true) => facts.push(Dep::unary(s, DepType::Identity, l)),
                (true, true) => {
                    facts.push(Dep::unary(r, DepType::Additive, l));
                    facts.push(Dep::unary(s, DepType::Additive, l));
                }
                (false, false) => {}
            },
        }
    }
    let near: Vec<(Var, Var)> = facts
        .iter()
        .filter_map(|d| match *d {
            Dep::Unary { src, ty, dst } if ty.is_near_identity() && !post.contains(dst) => Some((src, dst)),
            _ => None,
        })
        .collect();
    for (a, &(i, j)) in near.iter().enumerate() {
        for &(i2, j2) in &near[a + 1..] {
            facts.extend(Dep::binary(i, i2, j, j2));
        }
    }
    (post, facts)
}

/// Decides whether `cmd, pre ⊢ dep, post` follows from a single atomic rule,
/// checking each rule's side conditions directly.
pub(crate) fn check_atomic(mode: Mode, cmd: &Command, pre: Context, dep: Dep, post: Context, n: u32) -> bool {
    if !cmd.is_atomic() || post != expected_post(cmd, pre) {
        return false;
    }
    let in_range = |v: Var| v.index() <= n;
    let unary_ok = |src: Var, ty: DepType, dst: Var| -> bool {
        if !in_range(src) || !in_range(dst) || pre.contains(src) {
            return false;
        }
        let Command::Assign(l, e) = cmd else {
            return ty == DepType::Identity && src == dst;
        };
        if dst != *l {
            return ty == DepType::Identity && src == dst;
        }
        match *e {
            Expr::Zero => false,
            Expr::Var(r) => src == r && ty == DepType::Identity,
            Expr::Mul(r, s) => (src == r || src == s) && !pre.contains(r) && !pre.contains(s) && ty == mul_type(mode),
            Expr::Add(r, s) if r == s => src == r && ty == DepType::Multiplicative,
            Expr::Add(r, s) => {
                let other = if src == r {
                    s
                } else if src == s {
                    r
                } else {
                    return false;
                };
                if pre.contains(other) {
                    ty == DepType::Identity
                } else {
                    ty == DepType::Additive
                }
            }
        }
    };
    match dep {
        Dep::Unary { src, ty, dst } => unary_ok(src, ty, dst),
        Dep::Binary { src, dst } => {
            dep.is_canonical()
                && (0..2).all(|h| {
                    !post.contains(dst[h])
                        && [DepType::Identity, DepType::Additive]
                            .into_iter()
                            .any(|ty| unary_ok(src[h], ty, dst[h]))
                })
        }
    }
}

fn expected_post(cmd: &Command, pre: Context) -> Context {
    match cmd {
        Command::Assign(l, e) => {
            let mut zeros: Vec<Var> = pre.iter().filter(|v| v != l).collect();
            let becomes_zero = match e {
                Expr::Zero => true,
                Expr::Var(r) => pre.contains(*r),
                Expr::Mul(r, s) => [r, s].iter().any(|v| pre.contains(**v)),
                Expr::Add(r, s) => [r, s].iter().all(|v| pre.contains(**v)),
            };
            if becomes_zero {
                zeros.push(*l);
            }
            Context::from_vars(zeros)
        }
        _ => pre,
    }
}

/// Name of the atomic rule concluding `dep` for `cmd`.
pub(crate) fn atomic_rule_name(cmd: &Command, dep: &Dep) -> &'static str {
    match (cmd, dep) {
        (_, Dep::Binary { .. }) => "binary",
        (Command::Skip, _) => "skip",
        (Command::Assign(l, e), Dep::Unary { dst, .. }) => {
            if dst != l {
                return "frame";
            }
            match e {
                Expr::Zero => "reset",
                Expr::Var(_) => "copy",
                Expr::Add(r, s) if r == s => "double",
                Expr::Add(..) => "add",
                Expr::Mul(..) => "mul",
            }
        }
        _ => "atomic",
    }
}
