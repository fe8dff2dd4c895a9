//! Derivation trees for unbounded verdicts, with an independent replay check.

use std::fmt;

use thiserror::Error;

use crate::ast::{Command, Program};
use crate::deps::{compose_all, loop_correct, Dep, Mode};

use super::rules::check_atomic;
use super::{describe, flatten, Context, Node};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    /// A rule for `skip` or an assignment, by name (`copy`, `mul`, `binary`, ...).
    Atomic(&'static str),
    Choose,
    Seq,
    /// The loop body runs zero times.
    ZeroIterations,
    /// A chain of one or more body iterations.
    Iterations,
    /// Loop correction of an iterable premise between a preamble and a postamble.
    Correction,
    Weaken,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Atomic(name) => f.write_str(name),
            Rule::Choose => f.write_str("C"),
            Rule::Seq => f.write_str("S"),
            Rule::ZeroIterations => f.write_str("L0"),
            Rule::Iterations => f.write_str("L1"),
            Rule::Correction => f.write_str("L2"),
            Rule::Weaken => f.write_str("weaken"),
        }
    }
}

/// One rule application concluding `node, pre ⊢ dep, post`. `node` is the
/// preorder index of the command in the program tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub rule: Rule,
    pub node: usize,
    pub pre: Context,
    pub dep: Dep,
    pub post: Context,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.premises.iter().map(Derivation::depth).max().unwrap_or(0)
    }

    /// Every node of the tree, in preorder.
    pub fn walk(&self) -> Vec<&Derivation> {
        let mut out = vec![self];
        for p in &self.premises {
            out.extend(p.walk());
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub mode: Mode,
    pub program: Program,
    pub root: Derivation,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("replay failed at [{rule}] node {node} ({pre} |- {dep}, {post}): {reason}")]
pub struct ReplayError {
    pub rule: Rule,
    pub node: usize,
    pub pre: Context,
    pub dep: Dep,
    pub post: Context,
    pub reason: String,
}

impl Witness {
    /// One rule application per line, indented by depth.
    pub fn render(&self) -> String {
        let nodes = flatten(self.program.root());
        let mut out = String::new();
        render_into(&self.root, &nodes, 0, &mut out);
        out
    }

    /// Re-checks every rule application in the tree.
    pub fn replay(&self) -> Result<(), ReplayError> {
        let nodes = flatten(self.program.root());
        replay_node(&self.root, &nodes, self.mode, self.program.n())
    }
}

fn render_into(d: &Derivation, nodes: &[Node<'_>], depth: usize, out: &mut String) {
    let cmd = nodes
        .get(d.node)
        .map_or_else(|| "?".to_string(), |n| describe(n.cmd, 48));
    out.push_str(&format!(
        "{:indent$}[{}] {} | {} |- {}, {}\n",
        "",
        d.rule,
        cmd,
        d.pre,
        d.dep,
        d.post,
        indent = depth * 2
    ));
    for p in &d.premises {
        render_into(p, nodes, depth + 1, out);
    }
}

fn replay_node(d: &Derivation, nodes: &[Node<'_>], mode: Mode, n: u32) -> Result<(), ReplayError> {
    let fail = |reason: &str| ReplayError {
        rule: d.rule,
        node: d.node,
        pre: d.pre,
        dep: d.dep,
        post: d.post,
        reason: reason.to_string(),
    };
    let node = nodes.get(d.node).ok_or_else(|| fail("no such command node"))?;
    let ps = &d.premises;
    let arity = |k: usize| {
        if ps.len() == k {
            Ok(())
        } else {
            Err(fail(&format!("expected {k} premises, found {}", ps.len())))
        }
    };
    match d.rule {
        Rule::Atomic(_) => {
            arity(0)?;
            if !check_atomic(mode, node.cmd, d.pre, d.dep, d.post, n) {
                return Err(fail("no atomic rule concludes this judgement"));
            }
        }
        Rule::ZeroIterations => {
            arity(0)?;
            if !matches!(node.cmd, Command::Loop(..)) {
                return Err(fail("not a loop"));
            }
            if d.pre != d.post || !check_atomic(mode, &Command::Skip, d.pre, d.dep, d.post, n) {
                return Err(fail("not a skip judgement"));
            }
        }
        Rule::Choose => {
            arity(1)?;
            let p = &ps[0];
            if !matches!(node.cmd, Command::Choose(..)) || !node.children.contains(&p.node) {
                return Err(fail("premise is not a branch of a choice"));
            }
            if (p.pre, p.dep, p.post) != (d.pre, d.dep, d.post) {
                return Err(fail("premise differs from conclusion"));
            }
        }
        Rule::Seq => {
            arity(2)?;
            let (a, b) = (&ps[0], &ps[1]);
            if !matches!(node.cmd, Command::Seq(..)) || node.children != [a.node, b.node] {
                return Err(fail("premises are not the two halves of a sequence"));
            }
            if a.pre != d.pre || b.pre != a.post || b.post != d.post {
                return Err(fail("contexts do not chain"));
            }
            if !compose_all(a.dep, b.dep).any(|x| x == d.dep) {
                return Err(fail("conclusion is not a composition of the premises"));
            }
        }
        Rule::Iterations => {
            let Command::Loop(bound, _) = node.cmd else {
                return Err(fail("not a loop"));
            };
            if ps.is_empty() {
                return Err(fail("no iterations"));
            }
            if d.pre.contains(*bound) {
                return Err(fail("loop bound is presumed zero"));
            }
            let body = node.children[0];
            let mut ctx = d.pre;
            let mut reachable: Vec<Dep> = Vec::new();
            for (k, p) in ps.iter().enumerate() {
                if p.node != body || p.pre != ctx {
                    return Err(fail(&format!("iteration {k} does not continue the chain")));
                }
                reachable = if k == 0 {
                    vec![p.dep]
                } else {
                    let mut next: Vec<Dep> = reachable.iter().flat_map(|&r| compose_all(r, p.dep)).collect();
                    next.sort();
                    next.dedup();
                    next
                };
                ctx = p.post;
            }
            if ctx != d.post || !reachable.contains(&d.dep) {
                return Err(fail("chain does not compose to the conclusion"));
            }
        }
        Rule::Correction => {
            arity(3)?;
            let Command::Loop(bound, _) = node.cmd else {
                return Err(fail("not a loop"));
            };
            if d.pre.contains(*bound) {
                return Err(fail("loop bound is presumed zero"));
            }
            let (a, b, c) = (&ps[0], &ps[1], &ps[2]);
            if [a.node, b.node, c.node].iter().any(|&x| x != d.node) {
                return Err(fail("premises must be judgements about the same loop"));
            }
            let mid = a.post;
            if a.pre != d.pre || b.pre != mid || b.post != mid || c.pre != mid || c.post != d.post {
                return Err(fail("contexts do not match"));
            }
            let corrected = loop_correct(mode, *bound, b.dep).ok_or_else(|| fail("middle premise is not iterable"))?;
            let ok = compose_all(a.dep, corrected).any(|x| compose_all(x, c.dep).any(|y| y == d.dep));
            if !ok {
                return Err(fail("conclusion is not preamble · LC(middle) · postamble"));
            }
        }
        Rule::Weaken => {
            arity(1)?;
            let p = &ps[0];
            if p.node != d.node || p.pre != d.pre || p.dep != d.dep || !d.post.is_subset(p.post) {
                return Err(fail("not a weakening of the premise"));
            }
        }
    }
    for p in ps {
        replay_node(p, nodes, mode, n)?;
    }
    Ok(())
}
