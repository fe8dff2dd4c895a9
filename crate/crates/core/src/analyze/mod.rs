//! The judgement engine.
//!
//! For a command node and a pre-context `P` (variables presumed zero), the
//! engine computes every pair `(D, Q)` such that `C, P ⊢ D, Q` is derivable:
//! dependence `D` can be realized and the variables in `Q` are then
//! guaranteed zero. Results are memoized per `(node, P)`. An output `Xj`
//! is unbounded (non-polynomial, or non-linear in [`Mode::Lin`]) exactly when
//! some `i -3-> j` is derivable from the empty pre-context.
//!
//! Loops combine three rules: zero iterations (the `skip` facts), any
//! positive number of iterations (chains of body facts, computed as a
//! left-fold fixpoint), and loop correction of an iterable self-dependence,
//! sandwiched between a preamble and a postamble drawn from the first two
//! rules. With [`AnalysisConfig::full_l2_fixpoint`] the correction rule may
//! also draw on its own conclusions.

mod rules;
mod witness;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::rc::Rc;

use indexmap::{IndexMap, IndexSet};
use thiserror::Error;

use crate::ast::{Command, Program, Var};
use crate::deps::{compose_all, loop_correct, Dep, DepType, Mode};
use crate::parse::render_command;

pub use witness::{Derivation, ReplayError, Rule, Witness};

/// Largest variable count the analyzer accepts (contexts are 64-bit sets).
pub const MAX_VARS: u32 = 64;

/// A set of variables presumed or guaranteed to be zero.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Context(u64);

impl Context {
    pub const EMPTY: Context = Context(0);

    fn bit(v: Var) -> u64 {
        debug_assert!(v.index() <= MAX_VARS);
        1u64 << (v.index() - 1)
    }

    pub fn from_vars<I: IntoIterator<Item = Var>>(vars: I) -> Context {
        Context(vars.into_iter().fold(0, |acc, v| acc | Context::bit(v)))
    }

    pub fn contains(self, v: Var) -> bool {
        v.index() <= MAX_VARS && self.0 & Context::bit(v) != 0
    }

    pub fn with(self, v: Var) -> Context {
        Context(self.0 | Context::bit(v))
    }

    pub fn without(self, v: Var) -> Context {
        Context(self.0 & !Context::bit(v))
    }

    pub fn is_subset(self, other: Context) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Var> {
        (0..64u32)
            .filter(move |b| self.0 & (1 << b) != 0)
            .map(|b| Var::new(b + 1))
    }

    /// Every subset, including `self` and the empty set.
    fn subsets(self) -> impl Iterator<Item = Context> {
        let full = self.0;
        let mut next = Some(full);
        std::iter::from_fn(move || {
            let cur = next?;
            next = (cur != 0).then(|| (cur - 1) & full);
            Some(Context(cur))
        })
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, v) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", v.index())?;
        }
        f.write_str("}")
    }
}

/// All `(dependence, post-context)` pairs derivable for one command and
/// pre-context.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct JudgementSet {
    pub entries: BTreeSet<(Dep, Context)>,
}

impl JudgementSet {
    pub fn contains(&self, dep: Dep, post: Context) -> bool {
        self.entries.contains(&(dep, post))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Dep, Context)> {
        self.entries.iter()
    }

    /// The `i -3-> j` facts, as `(i, j)`.
    pub fn exponential(&self) -> BTreeSet<(Var, Var)> {
        self.entries
            .iter()
            .filter_map(|(d, _)| match *d {
                Dep::Unary {
                    src,
                    ty: DepType::Exponential,
                    dst,
                } => Some((src, dst)),
                _ => None,
            })
            .collect()
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct AnalysisConfig {
    pub mode: Mode,
    /// Let loop correction use premises derived by loop correction.
    pub full_l2_fixpoint: bool,
    /// Experimental: from `(D, Q)` also derive `(D, Q')` for every `Q' ⊆ Q`.
    pub post_weakening: bool,
    pub max_memo_entries: usize,
    pub max_contexts_per_node: usize,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            mode: Mode::Poly,
            full_l2_fixpoint: false,
            post_weakening: false,
            max_memo_entries: 1 << 20,
            max_contexts_per_node: 1 << 16,
        }
    }
}

impl AnalysisConfig {
    pub fn new(mode: Mode) -> Self {
        AnalysisConfig {
            mode,
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("program has {0} variables; the analyzer supports at most {MAX_VARS}")]
    TooManyVariables(u32),
    #[error("memo table exceeded {limit} entries while analyzing {node}")]
    MemoLimit { limit: usize, node: String },
    #[error("more than {limit} pre-contexts explored for {node}")]
    ContextLimit { limit: usize, node: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub var: Var,
    pub bounded: bool,
    pub mode: Mode,
    /// Present exactly when `bounded` is false.
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match (self.mode, self.bounded) {
            (Mode::Poly, true) => "POLY",
            (Mode::Poly, false) => "NOT-POLY",
            (Mode::Lin, true) => "LIN",
            (Mode::Lin, false) => "NOT-LIN",
        }
    }
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    /// Distinct pre-contexts seen at any node.
    pub distinct_contexts: usize,
    pub max_contexts_per_node: usize,
    pub memo_entries: usize,
    /// Judgements stored across all memo tables.
    pub judgements: usize,
}

pub(crate) type Key = (Dep, Context);

/// How an entry was first derived.
#[derive(Copy, Clone, Debug)]
pub(crate) enum Why {
    Atomic,
    Choose(usize),
    Seq {
        first: Key,
        second: Key,
    },
    L0,
    /// Entry of the chain table for the same loop and pre-context.
    L1,
    L2 {
        pre: Key,
        iter: Key,
        post: Key,
    },
    Weaken {
        from: Context,
    },
}

#[derive(Copy, Clone, Debug)]
pub(crate) enum Step {
    Seed,
    Extend { prev: Key, step: Key },
}

/// Where a dependence can be continued: the source side of a fact.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
enum Port {
    One(Var),
    Two(Var, Var),
}

fn source_port(d: &Dep) -> Port {
    match *d {
        Dep::Unary { src, .. } => Port::One(src),
        Dep::Binary { src, .. } => Port::Two(src[0], src[1]),
    }
}

/// Source ports of facts that may compose after `d`.
fn target_ports(d: &Dep) -> ([Option<Port>; 2], usize) {
    match *d {
        Dep::Unary { ty, dst, .. } => {
            if ty.is_near_identity() {
                ([Some(Port::One(dst)), Some(Port::Two(dst, dst))], 2)
            } else {
                ([Some(Port::One(dst)), None], 1)
            }
        }
        Dep::Binary { dst, .. } if dst[0] == dst[1] => ([Some(Port::One(dst[0])), Some(Port::Two(dst[0], dst[0]))], 2),
        Dep::Binary { dst, .. } => {
            let (a, b) = (dst[0].min(dst[1]), dst[0].max(dst[1]));
            ([Some(Port::Two(a, b)), None], 1)
        }
    }
}

#[derive(Clone, Debug, Default)]
pub(crate) struct Table {
    entries: IndexMap<Key, Why>,
    by_source: HashMap<Port, Vec<usize>>,
}

impl Table {
    fn insert(&mut self, key: Key, why: Why) -> bool {
        if self.entries.contains_key(&key) {
            return false;
        }
        let (at, _) = self.entries.insert_full(key, why);
        self.by_source.entry(source_port(&key.0)).or_default().push(at);
        true
    }

    pub(crate) fn get(&self, key: &Key) -> Option<&Why> {
        self.entries.get(key)
    }

    fn contains(&self, key: &Key) -> bool {
        self.entries.contains_key(key)
    }

    fn keys(&self) -> impl Iterator<Item = &Key> {
        self.entries.keys()
    }

    fn len(&self) -> usize {
        self.entries.len()
    }

    /// Entries whose dependence might compose after `d`.
    fn after(&self, d: &Dep) -> impl Iterator<Item = Key> + '_ {
        let (ports, count) = target_ports(d);
        ports
            .into_iter()
            .take(count)
            .flatten()
            .flat_map(move |p| self.by_source.get(&p).into_iter().flatten())
            .map(move |&at| *self.entries.get_index(at).expect("indexed entry").0)
    }

    fn to_set(&self) -> JudgementSet {
        JudgementSet {
            entries: self.entries.keys().copied().collect(),
        }
    }

    /// Closes the table under post-context weakening.
    fn weaken(&mut self) {
        let mut at = 0;
        while at < self.entries.len() {
            let (dep, post) = *self.entries.get_index(at).expect("in range").0;
            for smaller in post.subsets() {
                self.insert((dep, smaller), Why::Weaken { from: post });
            }
            at += 1;
        }
    }
}

pub(crate) struct Node<'p> {
    pub cmd: &'p Command,
    pub children: Vec<usize>,
    pub path: Vec<usize>,
}

/// Preorder arena of a command tree; node 0 is the root.
pub(crate) fn flatten(root: &Command) -> Vec<Node<'_>> {
    fn walk<'p>(c: &'p Command, path: Vec<usize>, out: &mut Vec<Node<'p>>) -> usize {
        let id = out.len();
        out.push(Node {
            cmd: c,
            children: Vec::new(),
            path: path.clone(),
        });
        let mut kids = Vec::new();
        for (i, child) in c.children().into_iter().enumerate() {
            let mut p = path.clone();
            p.push(i);
            kids.push(walk(child, p, out));
        }
        out[id].children = kids;
        id
    }
    let mut out = Vec::new();
    walk(root, Vec::new(), &mut out);
    out
}

pub(crate) fn describe(cmd: &Command, max: usize) -> String {
    let text = render_command(cmd);
    if text.chars().count() <= max {
        text
    } else {
        let cut: String = text.chars().take(max.saturating_sub(3)).collect();
        format!("{cut}...")
    }
}

/// Which table a derivation is looked up in.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Source {
    Memo,
    /// Zero-or-more-iteration facts of a loop.
    Unit,
    Full,
}

/// Memoized analysis of one program.
pub struct Analysis<'p> {
    program: &'p Program,
    cfg: AnalysisConfig,
    nodes: Vec<Node<'p>>,
    memo: HashMap<(usize, Context), Rc<Table>>,
    chains: HashMap<(usize, Context), Rc<IndexMap<Key, Step>>>,
    units: HashMap<(usize, Context), Rc<Table>>,
    full: HashMap<(usize, Context), Rc<Table>>,
    seen: Vec<BTreeSet<Context>>,
}

impl<'p> Analysis<'p> {
    pub fn new(program: &'p Program, cfg: AnalysisConfig) -> Result<Analysis<'p>, AnalysisError> {
        if program.n() > MAX_VARS {
            return Err(AnalysisError::TooManyVariables(program.n()));
        }
        let nodes = flatten(program.root());
        let seen = vec![BTreeSet::new(); nodes.len()];
        Ok(Analysis {
            program,
            cfg,
            nodes,
            memo: HashMap::new(),
            chains: HashMap::new(),
            units: HashMap::new(),
            full: HashMap::new(),
            seen,
        })
    }

    pub fn config(&self) -> &AnalysisConfig {
        &self.cfg
    }

    pub fn program(&self) -> &'p Program {
        self.program
    }

    /// All judgements for the whole program at pre-context `pre`.
    pub fn judgements(&mut self, pre: Context) -> Result<JudgementSet, AnalysisError> {
        Ok(self.table(0, pre)?.to_set())
    }

    /// Verdict for output `var` from the empty pre-context, with a witness
    /// derivation when unbounded.
    pub fn verdict(&mut self, var: Var) -> Result<Verdict, AnalysisError> {
        let root = self.table(0, Context::EMPTY)?;
        let found = root
            .keys()
            .copied()
            .find(|(d, _)| matches!(*d, Dep::Unary { ty: DepType::Exponential, dst, .. } if dst == var));
        let witness = found.map(|key| Witness {
            mode: self.cfg.mode,
            program: self.program.clone(),
            root: self.derive(0, Context::EMPTY, key, Source::Memo),
        });
        Ok(Verdict {
            var,
            bounded: witness.is_none(),
            mode: self.cfg.mode,
            witness,
        })
    }

    /// Verdicts for `X1..Xn` in order.
    pub fn verdicts(&mut self) -> Result<Vec<Verdict>, AnalysisError> {
        self.program.vars().map(|v| self.verdict(v)).collect()
    }

    pub fn stats(&self) -> Stats {
        let all: BTreeSet<Context> = self.seen.iter().flatten().copied().collect();
        Stats {
            distinct_contexts: all.len(),
            max_contexts_per_node: self.seen.iter().map(BTreeSet::len).max().unwrap_or(0),
            memo_entries: self.memo.len(),
            judgements: self.memo.values().map(|t| t.len()).sum(),
        }
    }

    /// Judgement sets computed so far for loop nodes, keyed by node path and
    /// pre-context.
    pub fn loop_judgements(&self) -> BTreeMap<(Vec<usize>, Context), JudgementSet> {
        self.memo
            .iter()
            .filter(|((id, _), _)| matches!(self.nodes[*id].cmd, Command::Loop(..)))
            .map(|(&(id, pre), t)| ((self.nodes[id].path.clone(), pre), t.to_set()))
            .collect()
    }

    fn node_label(&self, id: usize) -> String {
        format!("node {:?} `{}`", self.nodes[id].path, describe(self.nodes[id].cmd, 40))
    }

    fn note_context(&mut self, id: usize, pre: Context) -> Result<(), AnalysisError> {
        if self.memo.len() >= self.cfg.max_memo_entries {
            return Err(AnalysisError::MemoLimit {
                limit: self.cfg.max_memo_entries,
                node: self.node_label(id),
            });
        }
        self.seen[id].insert(pre);
        if self.seen[id].len() > self.cfg.max_contexts_per_node {
            return Err(AnalysisError::ContextLimit {
                limit: self.cfg.max_contexts_per_node,
                node: self.node_label(id),
            });
        }
        Ok(())
    }

    fn table(&mut self, id: usize, pre: Context) -> Result<Rc<Table>, AnalysisError> {
        if let Some(t) = self.memo.get(&(id, pre)) {
            return Ok(Rc::clone(t));
        }
        self.note_context(id, pre)?;
        let node = &self.nodes[id];
        let (cmd, kids) = (node.cmd, node.children.clone());
        let mut table = match cmd {
            Command::Skip | Command::Assign(..) => self.atomic_table(cmd, pre),
            Command::Choose(..) => {
                let mut t = Table::default();
                for (branch, &kid) in kids.iter().enumerate() {
                    for &key in self.table(kid, pre)?.keys() {
                        t.insert(key, Why::Choose(branch));
                    }
                }
                t
            }
            Command::Seq(..) => self.seq_table(kids[0], kids[1], pre)?,
            Command::Loop(bound, _) => self.loop_table(id, *bound, pre)?,
        };
        if self.cfg.post_weakening {
            table.weaken();
        }
        let table = Rc::new(table);
        self.memo.insert((id, pre), Rc::clone(&table));
        Ok(table)
    }

    fn atomic_table(&self, cmd: &Command, pre: Context) -> Table {
        let (post, facts) = rules::atomic_facts(self.cfg.mode, cmd, pre, self.program.n());
        let mut t = Table::default();
        for d in facts {
            t.insert((d, post), Why::Atomic);
        }
        t
    }

    fn seq_table(&mut self, first: usize, second: usize, pre: Context) -> Result<Table, AnalysisError> {
        let head = self.table(first, pre)?;
        let mut tails: IndexMap<Context, Rc<Table>> = IndexMap::new();
        for &(_, mid) in head.keys() {
            if !tails.contains_key(&mid) {
                let t = self.table(second, mid)?;
                tails.insert(mid, t);
            }
        }
        let mut t = Table::default();
        for &k1 in head.keys() {
            let tail = &tails[&k1.1];
            for k2 in tail.after(&k1.0) {
                for d in compose_all(k1.0, k2.0) {
                    t.insert((d, k2.1), Why::Seq { first: k1, second: k2 });
                }
            }
        }
        Ok(t)
    }

    fn zero_iterations(&self, pre: Context) -> Table {
        let (post, facts) = rules::atomic_facts(self.cfg.mode, &Command::Skip, pre, self.program.n());
        let mut t = Table::default();
        for d in facts {
            t.insert((d, post), Why::L0);
        }
        t
    }

    /// Facts for one or more iterations of the loop body, from `pre`.
    fn chain(&mut self, id: usize, pre: Context) -> Result<Rc<IndexMap<Key, Step>>, AnalysisError> {
        if let Some(c) = self.chains.get(&(id, pre)) {
            return Ok(Rc::clone(c));
        }
        let body = self.nodes[id].children[0];
        let mut chain: IndexMap<Key, Step> = IndexMap::new();
        for &key in self.table(body, pre)?.keys() {
            chain.insert(key, Step::Seed);
        }
        let mut at = 0;
        while at < chain.len() {
            let (prev, _) = chain.get_index(at).map(|(k, s)| (*k, *s)).expect("in range");
            let next = self.table(body, prev.1)?;
            for step in next.after(&prev.0) {
                for d in compose_all(prev.0, step.0) {
                    chain.entry((d, step.1)).or_insert(Step::Extend { prev, step });
                }
            }
            at += 1;
        }
        let chain = Rc::new(chain);
        self.chains.insert((id, pre), Rc::clone(&chain));
        Ok(chain)
    }

    /// Zero-iteration and iteration-chain facts of a loop at `pre`.
    fn unit(&mut self, id: usize, pre: Context) -> Result<Rc<Table>, AnalysisError> {
        if let Some(t) = self.units.get(&(id, pre)) {
            return Ok(Rc::clone(t));
        }
        let Command::Loop(bound, _) = self.nodes[id].cmd else {
            unreachable!("unit tables exist only for loops");
        };
        let mut t = self.zero_iterations(pre);
        if !pre.contains(*bound) {
            for &key in self.chain(id, pre)?.keys() {
                t.insert(key, Why::L1);
            }
        }
        if self.cfg.post_weakening {
            t.weaken();
        }
        let t = Rc::new(t);
        self.units.insert((id, pre), Rc::clone(&t));
        Ok(t)
    }

    fn loop_table(&mut self, id: usize, bound: Var, pre: Context) -> Result<Table, AnalysisError> {
        if pre.contains(bound) {
            return Ok(self.zero_iterations(pre));
        }
        if self.cfg.full_l2_fixpoint {
            return Ok((*self.full_loop(id, bound, pre)?).clone());
        }
        let here = self.unit(id, pre)?;
        let mut out = (*here).clone();
        for &k1 in here.keys() {
            if !matches!(k1.0, Dep::Unary { dst, .. } if dst == bound) {
                continue;
            }
            let mid = self.unit(id, k1.1)?;
            for k in correction_steps(self.cfg.mode, bound, k1, &mid, &mid) {
                out.insert(k.0, k.1);
            }
        }
        Ok(out)
    }

    /// Loop facts where correction premises may themselves come from
    /// correction; computed jointly for every context reachable from `pre`.
    fn full_loop(&mut self, id: usize, bound: Var, pre: Context) -> Result<Rc<Table>, AnalysisError> {
        if let Some(t) = self.full.get(&(id, pre)) {
            return Ok(Rc::clone(t));
        }
        let mut contexts: IndexSet<Context> = IndexSet::from([pre]);
        let mut at = 0;
        while at < contexts.len() {
            let u = self.unit(id, contexts[at])?;
            contexts.extend(u.keys().map(|k| k.1));
            at += 1;
        }
        let mut tables: IndexMap<Context, Table> = IndexMap::new();
        for &c in &contexts {
            tables.insert(c, (*self.unit(id, c)?).clone());
        }
        loop {
            let mut grew = false;
            for &c in &contexts {
                if c.contains(bound) {
                    continue;
                }
                let mut found = Vec::new();
                let here = &tables[&c];
                for &k1 in here.keys() {
                    if !matches!(k1.0, Dep::Unary { dst, .. } if dst == bound) {
                        continue;
                    }
                    let mid = &tables[&k1.1];
                    found.extend(
                        correction_steps(self.cfg.mode, bound, k1, mid, mid)
                            .into_iter()
                            .filter(|(k, _)| !here.contains(k)),
                    );
                }
                let t = tables.get_mut(&c).expect("context present");
                for (k, why) in found {
                    grew |= t.insert(k, why);
                }
                if self.cfg.post_weakening {
                    let before = t.len();
                    t.weaken();
                    grew |= t.len() != before;
                }
            }
            if !grew {
                break;
            }
        }
        for (c, t) in tables {
            self.full.insert((id, c), Rc::new(t));
        }
        Ok(Rc::clone(&self.full[&(id, pre)]))
    }

    fn derive(&self, id: usize, pre: Context, key: Key, source: Source) -> Derivation {
        let table = match source {
            Source::Memo => &self.memo[&(id, pre)],
            Source::Unit => &self.units[&(id, pre)],
            Source::Full => &self.full[&(id, pre)],
        };
        let why = *table.get(&key).expect("derivation source holds the entry");
        let node = &self.nodes[id];
        let leaf = |rule: Rule| Derivation {
            rule,
            node: id,
            pre,
            dep: key.0,
            post: key.1,
            premises: Vec::new(),
        };
        let premise_source = if self.cfg.full_l2_fixpoint {
            Source::Full
        } else {
            Source::Unit
        };
        let (rule, premises) = match why {
            Why::Atomic => return leaf(Rule::Atomic(rules::atomic_rule_name(node.cmd, &key.0))),
            Why::L0 => return leaf(Rule::ZeroIterations),
            Why::Choose(branch) => (
                Rule::Choose,
                vec![self.derive(node.children[branch], pre, key, Source::Memo)],
            ),
            Why::Seq { first, second } => (
                Rule::Seq,
                vec![
                    self.derive(node.children[0], pre, first, Source::Memo),
                    self.derive(node.children[1], first.1, second, Source::Memo),
                ],
            ),
            Why::L1 => {
                let chain = &self.chains[&(id, pre)];
                let mut steps = Vec::new();
                let mut cur = key;
                loop {
                    match chain[&cur] {
                        Step::Seed => {
                            steps.push((pre, cur));
                            break;
                        }
                        Step::Extend { prev, step } => {
                            steps.push((prev.1, step));
                            cur = prev;
                        }
                    }
                }
                steps.reverse();
                let body = node.children[0];
                (
                    Rule::Iterations,
                    steps
                        .into_iter()
                        .map(|(p, k)| self.derive(body, p, k, Source::Memo))
                        .collect(),
                )
            }
            Why::L2 { pre: k1, iter, post } => (
                Rule::Correction,
                vec![
                    self.derive(id, pre, k1, premise_source),
                    self.derive(id, k1.1, iter, premise_source),
                    self.derive(id, k1.1, post, premise_source),
                ],
            ),
            Why::Weaken { from } => (Rule::Weaken, vec![self.derive(id, pre, (key.0, from), source)]),
        };
        Derivation {
            rule,
            node: id,
            pre,
            dep: key.0,
            post: key.1,
            premises,
        }
    }
}

/// Conclusions `D1 · LC(D2) · D3` for a fixed preamble `k1 = (D1, P1)`, with
/// `D2` iterable at `P1` (from `iterable`) and `D3` drawn from `tail`, both
/// being loop facts at pre-context `P1`.
fn correction_steps(mode: Mode, bound: Var, k1: Key, iterable: &Table, tail: &Table) -> Vec<(Key, Why)> {
    let p1 = k1.1;
    let mut out = Vec::new();
    for &k2 in iterable.keys() {
        if k2.1 != p1 {
            continue;
        }
        let Some(corrected) = loop_correct(mode, bound, k2.0) else {
            continue;
        };
        for d12 in compose_all(k1.0, corrected) {
            for k3 in tail.after(&d12) {
                for d in compose_all(d12, k3.0) {
                    out.push((
                        (d, k3.1),
                        Why::L2 {
                            pre: k1,
                            iter: k2,
                            post: k3,
                        },
                    ));
                }
            }
        }
    }
    out
}

/// Atomic judgements for `skip` or an assignment over `X1..Xn`.
pub fn atomic_judgements(mode: Mode, cmd: &Command, pre: Context, n: u32) -> JudgementSet {
    assert!(cmd.is_atomic(), "atomic_judgements needs skip or an assignment");
    let (post, facts) = rules::atomic_facts(mode, cmd, pre, n);
    JudgementSet {
        entries: facts.into_iter().map(|d| (d, post)).collect(),
    }
}

/// All judgements for `program` at pre-context `pre`.
pub fn analyze(mode: Mode, program: &Program, pre: Context) -> Result<JudgementSet, AnalysisError> {
    Analysis::new(program, AnalysisConfig::new(mode))?.judgements(pre)
}

/// Growth verdict for one output variable.
pub fn verdict(mode: Mode, program: &Program, var: Var) -> Result<Verdict, AnalysisError> {
    Analysis::new(program, AnalysisConfig::new(mode))?.verdict(var)
}
