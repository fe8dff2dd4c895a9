//! Abstract syntax of the core language: bounded loops, nondeterministic
//! choice, addition, multiplication and reset-to-zero over nonnegative
//! integer variables `X1..Xn`.

use std::collections::BTreeSet;
use std::fmt;
use std::num::NonZeroU32;

/// A program variable `X<index>`. Indices start at 1.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(NonZeroU32);

impl Var {
    /// Panics if `index` is 0.
    pub fn new(index: u32) -> Var {
        Var(NonZeroU32::new(index).expect("variable indices start at 1"))
    }

    pub fn try_new(index: u32) -> Option<Var> {
        NonZeroU32::new(index).map(Var)
    }

    #[inline]
    pub fn index(self) -> u32 {
        self.0.get()
    }

    /// Zero-based position, for indexing stores.
    #[inline]
    pub fn slot(self) -> usize {
        self.0.get() as usize - 1
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X{}", self.0)
    }
}

/// Right-hand side of an assignment. Operands are always variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Zero,
    Var(Var),
    Add(Var, Var),
    Mul(Var, Var),
}

impl Expr {
    pub fn operands(&self) -> impl Iterator<Item = Var> {
        let (a, b) = match *self {
            Expr::Zero => (None, None),
            Expr::Var(r) => (Some(r), None),
            Expr::Add(r, s) | Expr::Mul(r, s) => (Some(r), Some(s)),
        };
        a.into_iter().chain(b)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Zero => f.write_str("0"),
            Expr::Var(r) => write!(f, "{r}"),
            Expr::Add(r, s) => write!(f, "{r} + {s}"),
            Expr::Mul(r, s) => write!(f, "{r} * {s}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Command {
    Skip,
    Assign(Var, Expr),
    Seq(Box<Command>, Box<Command>),
    /// `loop X { body }`: runs `body` at most X times (X read on entry).
    Loop(Var, Box<Command>),
    Choose(Box<Command>, Box<Command>),
}

impl Command {
    pub fn assign(lhs: Var, rhs: Expr) -> Command {
        Command::Assign(lhs, rhs)
    }

    pub fn seq(first: Command, second: Command) -> Command {
        Command::Seq(Box::new(first), Box::new(second))
    }

    pub fn looped(bound: Var, body: Command) -> Command {
        Command::Loop(bound, Box::new(body))
    }

    pub fn choose(left: Command, right: Command) -> Command {
        Command::Choose(Box::new(left), Box::new(right))
    }

    /// Right-nested sequence of `cmds`; `skip` when empty.
    pub fn seq_all<I>(cmds: I) -> Command
    where
        I: IntoIterator<Item = Command>,
        I::IntoIter: DoubleEndedIterator,
    {
        let mut iter = cmds.into_iter().rev();
        let Some(last) = iter.next() else {
            return Command::Skip;
        };
        iter.fold(last, |acc, c| Command::seq(c, acc))
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Command::Skip | Command::Assign(..))
    }

    /// Immediate sub-commands, in order.
    pub fn children(&self) -> Vec<&Command> {
        match self {
            Command::Skip | Command::Assign(..) => Vec::new(),
            Command::Loop(_, body) => vec![body],
            Command::Seq(a, b) | Command::Choose(a, b) => vec![a, b],
        }
    }

    /// Sub-command reached by following `path` (child positions).
    pub fn at_path(&self, path: &[usize]) -> Option<&Command> {
        let mut cur = self;
        for &i in path {
            cur = *cur.children().get(i)?;
        }
        Some(cur)
    }

    /// Whether some assignment `X := 0` occurs.
    pub fn has_reset(&self) -> bool {
        match self {
            Command::Skip => false,
            Command::Assign(_, e) => *e == Expr::Zero,
            Command::Loop(_, body) => body.has_reset(),
            Command::Seq(a, b) | Command::Choose(a, b) => a.has_reset() || b.has_reset(),
        }
    }

    pub fn max_var(&self) -> Option<Var> {
        vars_of(self).into_iter().next_back()
    }
}

/// Every variable occurring in `c`, on either side of an assignment or in a
/// loop header.
pub fn vars_of(c: &Command) -> BTreeSet<Var> {
    fn walk(c: &Command, out: &mut BTreeSet<Var>) {
        match c {
            Command::Skip => {}
            Command::Assign(l, e) => {
                out.insert(*l);
                out.extend(e.operands());
            }
            Command::Loop(l, body) => {
                out.insert(*l);
                walk(body, out);
            }
            Command::Seq(a, b) | Command::Choose(a, b) => {
                walk(a, out);
                walk(b, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    walk(c, &mut out);
    out
}

/// Variables that appear on the left of some assignment in `c`.
pub fn assigned_vars(c: &Command) -> BTreeSet<Var> {
    fn walk(c: &Command, out: &mut BTreeSet<Var>) {
        match c {
            Command::Skip => {}
            Command::Assign(l, _) => {
                out.insert(*l);
            }
            Command::Loop(_, body) => walk(body, out),
            Command::Seq(a, b) | Command::Choose(a, b) => {
                walk(a, out);
                walk(b, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    walk(c, &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// The loop bound is assigned somewhere inside its own body.
    LoopVarAssigned {
        var: Var,
    },
    VarOutOfRange {
        var: Var,
        n: u32,
    },
}

/// A well-formedness fault, located by the child-position path from the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub path: Vec<usize>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ViolationKind::LoopVarAssigned { var } => write!(f, "{var} is assigned inside loop {var}")?,
            ViolationKind::VarOutOfRange { var, n } => {
                write!(f, "{var} is out of range for a program with {n} variables")?
            }
        }
        write!(f, " (at node path {:?})", self.path)
    }
}

/// Collects every well-formedness violation in `root` for a program over
/// `X1..Xn`. An empty result means the command is valid.
pub fn validate(root: &Command, n: u32) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    let mut active = Vec::new();
    check(root, n, &mut path, &mut active, &mut out);
    out
}

fn check(c: &Command, n: u32, path: &mut Vec<usize>, active: &mut Vec<Var>, out: &mut Vec<Violation>) {
    let mut range = |v: Var, path: &[usize]| {
        if v.index() > n {
            out.push(Violation {
                kind: ViolationKind::VarOutOfRange { var: v, n },
                path: path.to_vec(),
            });
        }
    };
    match c {
        Command::Skip => {}
        Command::Assign(l, e) => {
            range(*l, path);
            for v in e.operands() {
                range(v, path);
            }
            if active.contains(l) {
                out.push(Violation {
                    kind: ViolationKind::LoopVarAssigned { var: *l },
                    path: path.clone(),
                });
            }
        }
        Command::Loop(l, body) => {
            range(*l, path);
            active.push(*l);
            path.push(0);
            check(body, n, path, active, out);
            path.pop();
            active.pop();
        }
        Command::Seq(a, b) | Command::Choose(a, b) => {
            for (i, child) in [a, b].into_iter().enumerate() {
                path.push(i);
                check(child, n, path, active, out);
                path.pop();
            }
        }
    }
}

/// A validated command together with its variable count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    n: u32,
    root: Command,
}

impl Program {
    pub fn new(n: u32, root: Command) -> Result<Program, Vec<Violation>> {
        let violations = validate(&root, n);
        if violations.is_empty() {
            Ok(Program { n, root })
        } else {
            Err(violations)
        }
    }

    /// Uses the largest variable index mentioned as the variable count.
    pub fn from_command(root: Command) -> Result<Program, Vec<Violation>> {
        let n = root.max_var().map_or(0, Var::index);
        Program::new(n, root)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn root(&self) -> &Command {
        &self.root
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> {
        (1..=self.n).map(Var::new)
    }
}
