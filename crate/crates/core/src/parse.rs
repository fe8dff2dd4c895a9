//! Text format for programs.
//!
//! ```text
//! vars 4                      # optional; otherwise n = largest index used
//! loop X4 {
//!   X3 := X1 + X2 ;
//!   choose { X1 := X3 } or { X2 := 0 }
//! }
//! ```
//!
//! `;` separates commands (a trailing `;` is allowed), `#` starts a comment
//! and whitespace is insignificant. A braced block `{ ... }` may stand for a
//! command; the renderer only emits one for a sequence nested on the left.

use std::fmt;

use thiserror::Error;

use crate::ast::{Command, Expr, Program, Var};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub(crate) struct Pos {
    pub line: usize,
    pub column: usize,
}

impl Pos {
    pub(crate) fn error(self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Var(u32),
    Num(u64),
    Assign,
    Plus,
    Star,
    Semi,
    LBrace,
    RBrace,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) => write!(f, "`{w}`"),
            Tok::Var(i) => write!(f, "`X{i}`"),
            Tok::Num(v) => write!(f, "`{v}`"),
            Tok::Assign => f.write_str("`:=`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else if c.is_some() {
                column += 1;
            }
            c
        }};
    }
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, column };
        match c {
            c if c.is_whitespace() => {
                bump!();
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    bump!();
                }
            }
            ':' => {
                bump!();
                if chars.peek() == Some(&'=') {
                    bump!();
                    out.push((Tok::Assign, pos));
                } else {
                    return Err(pos.error("expected `:=`"));
                }
            }
            '+' | '*' | ';' | '{' | '}' => {
                bump!();
                let tok = match c {
                    '+' => Tok::Plus,
                    '*' => Tok::Star,
                    ';' => Tok::Semi,
                    '{' => Tok::LBrace,
                    _ => Tok::RBrace,
                };
                out.push((tok, pos));
            }
            c if c.is_ascii_digit() => {
                let mut digits = String::new();
                while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    digits.push(d);
                    bump!();
                }
                let value = digits
                    .parse()
                    .map_err(|_| pos.error(format!("number `{digits}` is too large")))?;
                out.push((Tok::Num(value), pos));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut word = String::new();
                while let Some(&d) = chars.peek().filter(|d| d.is_ascii_alphanumeric() || **d == '_') {
                    word.push(d);
                    bump!();
                }
                out.push((word_token(&word, pos)?, pos));
            }
            other => return Err(pos.error(format!("unexpected character `{other}`"))),
        }
    }
    out.push((Tok::Eof, Pos { line, column }));
    Ok(out)
}

fn word_token(word: &str, pos: Pos) -> Result<Tok, ParseError> {
    if let Some(digits) = word.strip_prefix('X') {
        if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
            return match digits.parse::<u32>() {
                Ok(0) => Err(pos.error("variable indices start at 1")),
                Ok(i) => Ok(Tok::Var(i)),
                Err(_) => Err(pos.error(format!("variable index in `{word}` is too large"))),
            };
        }
    }
    Ok(Tok::Word(word.to_string()))
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    declared: Option<u32>,
    /// Loop bounds enclosing the current position.
    active: Vec<Var>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn next(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Word(s) if s == w)
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        let (tok, pos) = self.next();
        if tok == want {
            Ok(())
        } else {
            Err(pos.error(format!("expected {want}, found {tok}")))
        }
    }

    fn expect_word(&mut self, w: &str) -> Result<(), ParseError> {
        let (tok, pos) = self.next();
        match tok {
            Tok::Word(ref s) if s == w => Ok(()),
            _ => Err(pos.error(format!("expected `{w}`, found {tok}"))),
        }
    }

    fn var(&mut self) -> Result<Var, ParseError> {
        let (tok, pos) = self.next();
        let Tok::Var(i) = tok else {
            return Err(pos.error(format!("expected a variable, found {tok}")));
        };
        if let Some(n) = self.declared {
            if i > n {
                return Err(pos.error(format!("X{i} exceeds the declared variable count {n}")));
            }
        }
        Ok(Var::new(i))
    }

    fn program(&mut self) -> Result<Program, ParseError> {
        if self.is_word("vars") {
            self.next();
            let (tok, pos) = self.next();
            match tok {
                Tok::Num(n) => {
                    let n = u32::try_from(n).map_err(|_| pos.error("variable count is too large"))?;
                    self.declared = Some(n);
                }
                other => return Err(pos.error(format!("expected a variable count, found {other}"))),
            }
        }
        let root = self.sequence()?;
        let (tok, pos) = self.next();
        if tok != Tok::Eof {
            return Err(pos.error(format!("expected `;` or end of input, found {tok}")));
        }
        let result = match self.declared {
            Some(n) => Program::new(n, root),
            None => Program::from_command(root),
        };
        result.map_err(|violations| Pos { line: 1, column: 1 }.error(violations[0].to_string()))
    }

    fn sequence(&mut self) -> Result<Command, ParseError> {
        let mut items = vec![self.command()?];
        while *self.peek() == Tok::Semi {
            self.next();
            if matches!(self.peek(), Tok::RBrace | Tok::Eof) {
                break;
            }
            items.push(self.command()?);
        }
        Ok(Command::seq_all(items))
    }

    fn braced(&mut self) -> Result<Command, ParseError> {
        self.expect(Tok::LBrace)?;
        let body = self.sequence()?;
        self.expect(Tok::RBrace)?;
        Ok(body)
    }

    fn command(&mut self) -> Result<Command, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Word(w) if w == "skip" => {
                self.next();
                Ok(Command::Skip)
            }
            Tok::Word(w) if w == "loop" => {
                self.next();
                let bound = self.var()?;
                self.active.push(bound);
                let body = self.braced();
                self.active.pop();
                Ok(Command::looped(bound, body?))
            }
            Tok::Word(w) if w == "choose" => {
                self.next();
                let left = self.braced()?;
                self.expect_word("or")?;
                let right = self.braced()?;
                Ok(Command::choose(left, right))
            }
            Tok::LBrace => self.braced(),
            Tok::Var(_) => {
                let lhs = self.var()?;
                if self.active.contains(&lhs) {
                    return Err(pos.error(format!("{lhs} is assigned inside loop {lhs}")));
                }
                self.expect(Tok::Assign)?;
                let rhs = self.rhs()?;
                Ok(Command::assign(lhs, rhs))
            }
            other => Err(pos.error(format!("expected a command, found {other}"))),
        }
    }

    fn rhs(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        if let Tok::Num(v) = *self.peek() {
            self.next();
            return if v == 0 {
                Ok(Expr::Zero)
            } else {
                Err(pos.error(format!("only the constant 0 is allowed, found {v}")))
            };
        }
        let r = self.var()?;
        let op = self.peek().clone();
        match op {
            Tok::Plus | Tok::Star => {
                self.next();
                let s = self.var()?;
                Ok(if op == Tok::Plus {
                    Expr::Add(r, s)
                } else {
                    Expr::Mul(r, s)
                })
            }
            _ => Ok(Expr::Var(r)),
        }
    }
}

/// Parses and validates a program.
pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        declared: None,
        active: Vec::new(),
    };
    p.program()
}

fn header(p: &Program) -> Option<String> {
    let used = p.root().max_var().map_or(0, Var::index);
    (used != p.n()).then(|| format!("vars {}\n", p.n()))
}

/// Canonical single-line text. A `vars` header is emitted only when the
/// variable count differs from the largest index used.
pub fn render(p: &Program) -> String {
    let mut out = header(p).unwrap_or_default();
    render_cmd(p.root(), &mut out);
    out
}

/// Indented multi-line text, always with a `vars` header.
pub fn render_pretty(p: &Program) -> String {
    let mut out = format!("vars {}\n", p.n());
    pretty_seq(p.root(), 0, &mut out);
    out.push('\n');
    out
}

/// Single-line text of a bare command.
pub fn render_command(c: &Command) -> String {
    let mut out = String::new();
    render_cmd(c, &mut out);
    out
}

fn render_cmd(c: &Command, out: &mut String) {
    match c {
        Command::Skip => out.push_str("skip"),
        Command::Assign(l, e) => out.push_str(&format!("{l} := {e}")),
        Command::Seq(a, b) => {
            if matches!(**a, Command::Seq(..)) {
                out.push_str("{ ");
                render_cmd(a, out);
                out.push_str(" }");
            } else {
                render_cmd(a, out);
            }
            out.push_str(" ; ");
            render_cmd(b, out);
        }
        Command::Loop(l, body) => {
            out.push_str(&format!("loop {l} {{ "));
            render_cmd(body, out);
            out.push_str(" }");
        }
        Command::Choose(a, b) => {
            out.push_str("choose { ");
            render_cmd(a, out);
            out.push_str(" } or { ");
            render_cmd(b, out);
            out.push_str(" }");
        }
    }
}

fn indent(depth: usize, out: &mut String) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

fn pretty_seq(c: &Command, depth: usize, out: &mut String) {
    let mut items = Vec::new();
    let mut cur = c;
    while let Command::Seq(a, b) = cur {
        items.push(&**a);
        cur = b;
    }
    items.push(cur);
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            out.push_str(" ;\n");
        }
        indent(depth, out);
        match item {
            Command::Seq(..) => {
                out.push_str("{\n");
                pretty_seq(item, depth + 1, out);
                out.push('\n');
                indent(depth, out);
                out.push('}');
            }
            other => pretty_single(other, depth, out),
        }
    }
}

fn pretty_single(c: &Command, depth: usize, out: &mut String) {
    match c {
        Command::Loop(l, body) => {
            out.push_str(&format!("loop {l} {{\n"));
            pretty_seq(body, depth + 1, out);
            out.push('\n');
            indent(depth, out);
            out.push('}');
        }
        Command::Choose(a, b) => {
            out.push_str("choose {\n");
            pretty_seq(a, depth + 1, out);
            out.push('\n');
            indent(depth, out);
            out.push_str("} or {\n");
            pretty_seq(b, depth + 1, out);
            out.push('\n');
            indent(depth, out);
            out.push('}');
        }
        other => render_cmd(other, out),
    }
}
