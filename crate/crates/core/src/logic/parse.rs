//! Surface syntax:
//!
//! ```text
//! formula  := quant | implies
//! quant    := ("E" | "A") IDENT "in" interval "." formula
//! implies  := or ("->" formula)?
//! or       := and ("||" and)*
//! and      := unary ("&&" unary)*
//! unary    := "!" unary | quant | "(" formula ")" | compare
//! compare  := side ("<" | "<=" | ">" | ">=" | "==") side
//! side     := "|" term "|" | term
//! term     := addend (("+" | "-") addend)*
//! addend   := "-" addend | NUMBER | IDENT "(" term ")" | IDENT | "(" term ")"
//! interval := ("[" | "(") bound "," bound ("]" | ")")
//! bound    := "-"? (NUMBER | "inf")
//! ```
//!
//! Quantifier bodies extend as far to the right as possible. A variable is
//! a time variable if it is named `t` or occurs inside some signal-access
//! argument; every other variable is a value variable.

use std::collections::HashSet;
use std::fmt;

use super::{Formula, Interval, Kind, Term};
use crate::polyhedra::Var;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: scoping error: {msg}")]
    Scope { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: kind error: {msg}")]
    Kind { line: usize, col: usize, msg: String },
}

impl ParseError {
    fn position(&self) -> (usize, usize) {
        match self {
            ParseError::Syntax { line, col, .. }
            | ParseError::Scope { line, col, .. }
            | ParseError::Kind { line, col, .. } => (*line, *col),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(Rational),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Dot,
    Pipe,
    Plus,
    Minus,
    Lt,
    Le,
    Gt,
    Ge,
    EqEq,
    Bang,
    OrOr,
    AndAnd,
    Arrow,
    Exists,
    Forall,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Num(n) => write!(f, "`{n}`"),
            Tok::Eof => write!(f, "end of input"),
            other => {
                let s = match other {
                    Tok::LParen => "(",
                    Tok::RParen => ")",
                    Tok::LBrack => "[",
                    Tok::RBrack => "]",
                    Tok::Comma => ",",
                    Tok::Dot => ".",
                    Tok::Pipe => "|",
                    Tok::Plus => "+",
                    Tok::Minus => "-",
                    Tok::Lt => "<",
                    Tok::Le => "<=",
                    Tok::Gt => ">",
                    Tok::Ge => ">=",
                    Tok::EqEq => "==",
                    Tok::Bang => "!",
                    Tok::OrOr => "||",
                    Tok::AndAnd => "&&",
                    Tok::Arrow => "->",
                    Tok::Exists => "E",
                    Tok::Forall => "A",
                    _ => unreachable!(),
                };
                write!(f, "`{s}`")
            }
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut i, &mut col);
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let tok2 = match two.as_str() {
            "<=" => Some(Tok::Le),
            ">=" => Some(Tok::Ge),
            "==" => Some(Tok::EqEq),
            "||" => Some(Tok::OrOr),
            "&&" => Some(Tok::AndAnd),
            "->" => Some(Tok::Arrow),
            _ => None,
        };
        if let Some(tok) = tok2 {
            out.push(Spanned { tok, line: l0, col: c0 });
            advance(2, &mut i, &mut col);
            continue;
        }
        let tok1 = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBrack),
            ']' => Some(Tok::RBrack),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            '|' => Some(Tok::Pipe),
            '+' => Some(Tok::Plus),
            '-' | '−' => Some(Tok::Minus),
            '<' => Some(Tok::Lt),
            '>' => Some(Tok::Gt),
            '!' | '¬' => Some(Tok::Bang),
            '≤' => Some(Tok::Le),
            '≥' => Some(Tok::Ge),
            '∨' => Some(Tok::OrOr),
            '∧' => Some(Tok::AndAnd),
            '→' => Some(Tok::Arrow),
            '∃' => Some(Tok::Exists),
            '∀' => Some(Tok::Forall),
            _ => None,
        };
        if let Some(tok) = tok1 {
            out.push(Spanned { tok, line: l0, col: c0 });
            advance(1, &mut i, &mut col);
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            let digits = |i: &mut usize| {
                while *i < chars.len() && chars[*i].is_ascii_digit() {
                    *i += 1;
                }
            };
            digits(&mut i);
            if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                i += 1;
                digits(&mut i);
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    digits(&mut i);
                }
            }
            if i + 1 < chars.len() && chars[i] == '/' && chars[i + 1].is_ascii_digit() {
                i += 1;
                digits(&mut i);
            }
            let lit: String = chars[start..i].iter().collect();
            let n: Rational = lit.parse().map_err(|_| ParseError::Syntax {
                line: l0,
                col: c0,
                msg: format!("malformed number `{lit}`"),
            })?;
            col += i - start;
            out.push(Spanned { tok: Tok::Num(n), line: l0, col: c0 });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            let tok = match word.as_str() {
                "E" => Tok::Exists,
                "A" => Tok::Forall,
                _ => Tok::Ident(word),
            };
            out.push(Spanned { tok, line: l0, col: c0 });
            continue;
        }
        return Err(ParseError::Syntax {
            line: l0,
            col: c0,
            msg: format!("unexpected character `{c}`"),
        });
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

/// Names used as time variables: `t` plus every identifier that occurs
/// inside the argument of a signal access.
fn time_names(toks: &[Spanned]) -> HashSet<String> {
    let mut names: HashSet<String> = HashSet::from(["t".to_string()]);
    // Stack of paren kinds: true when the paren opens an access argument.
    let mut stack: Vec<bool> = Vec::new();
    let mut inside = 0usize;
    let mut interval = false;
    for (i, s) in toks.iter().enumerate() {
        // Interval bounds after `in` mix brackets and parens; skip them whole.
        if interval {
            if matches!(s.tok, Tok::RParen | Tok::RBrack) {
                interval = false;
            }
            continue;
        }
        match &s.tok {
            Tok::Ident(name) if name == "in" => interval = true,
            Tok::LParen => {
                let is_access = i > 0 && matches!(toks[i - 1].tok, Tok::Ident(_));
                stack.push(is_access);
                if is_access {
                    inside += 1;
                }
            }
            Tok::RParen => {
                if stack.pop() == Some(true) {
                    inside -= 1;
                }
            }
            Tok::Ident(name) if inside > 0 => {
                let is_call = matches!(toks.get(i + 1).map(|s| &s.tok), Some(Tok::LParen));
                if !is_call {
                    names.insert(name.clone());
                }
            }
            _ => {}
        }
    }
    names
}

#[derive(Clone, Copy, Default)]
struct TermInfo {
    time: bool,
    value: bool,
}

impl TermInfo {
    fn join(self, o: TermInfo) -> TermInfo {
        TermInfo {
            time: self.time || o.time,
            value: self.value || o.value,
        }
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    time_names: HashSet<String>,
    scope: Vec<String>,
    binders: Vec<(String, usize, usize)>,
    free: HashSet<String>,
    /// Deepest error seen while backtracking, reported when all attempts fail.
    furthest: Option<(usize, ParseError)>,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> (usize, usize) {
        let s = &self.toks[self.pos];
        (s.line, s.col)
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> PResult<T> {
        let (line, col) = self.here();
        Err(ParseError::Syntax {
            line,
            col,
            msg: msg.into(),
        })
    }

    fn expect(&mut self, want: Tok) -> PResult<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            self.syntax(format!("expected {want}, found {}", self.peek()))
        }
    }

    fn record(&mut self, e: ParseError) {
        let reach = self.pos;
        if self.furthest.as_ref().is_none_or(|(p, _)| reach >= *p) {
            self.furthest = Some((reach, e));
        }
    }

    fn formula(&mut self) -> PResult<Formula> {
        if matches!(self.peek(), Tok::Exists | Tok::Forall) {
            return self.quantifier();
        }
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn quantifier(&mut self) -> PResult<Formula> {
        let universal = self.bump() == Tok::Forall;
        let (line, col) = self.here();
        let name = match self.bump() {
            Tok::Ident(n) => n,
            other => {
                self.pos -= 1;
                return self.syntax(format!("expected a variable name, found {other}"));
            }
        };
        if name == "t" {
            return Err(ParseError::Scope {
                line,
                col,
                msg: "`t` is the free reference time and cannot be bound".into(),
            });
        }
        if self.scope.contains(&name) {
            return Err(ParseError::Scope {
                line,
                col,
                msg: format!("`{name}` is already bound in an enclosing scope"),
            });
        }
        match self.peek() {
            Tok::Ident(w) if w == "in" => {
                self.bump();
            }
            other => return self.syntax(format!("expected `in`, found {other}")),
        }
        let domain = self.interval()?;
        self.expect(Tok::Dot)?;
        self.scope.push(name.clone());
        self.binders.push((name.clone(), line, col));
        let body = self.formula();
        self.scope.pop();
        let body = body?;
        let kind = if self.time_names.contains(&name) {
            Kind::Time
        } else {
            Kind::Value
        };
        let var = Var::new(&name);
        Ok(if universal {
            Formula::forall(var, kind, domain, body)
        } else {
            Formula::exists(var, kind, domain, body)
        })
    }

    fn interval(&mut self) -> PResult<Interval> {
        let (line, col) = self.here();
        let lo_strict = match self.bump() {
            Tok::LBrack => false,
            Tok::LParen => true,
            other => {
                self.pos -= 1;
                return self.syntax(format!("expected `[` or `(` to open an interval, found {other}"));
            }
        };
        let lo = self.bound()?;
        self.expect(Tok::Comma)?;
        let hi = self.bound()?;
        let hi_strict = match self.bump() {
            Tok::RBrack => false,
            Tok::RParen => true,
            other => {
                self.pos -= 1;
                return self.syntax(format!("expected `]` or `)` to close an interval, found {other}"));
            }
        };
        let finite = |b: Bound, side: &str| -> PResult<Option<Rational>> {
            match b {
                Bound::Finite(r) => Ok(Some(r)),
                Bound::PlusInf if side == "hi" => Ok(None),
                Bound::MinusInf if side == "lo" => Ok(None),
                _ => Err(ParseError::Syntax {
                    line,
                    col,
                    msg: format!("infinite {side} endpoint has the wrong sign"),
                }),
            }
        };
        let lo = finite(lo, "lo")?;
        let hi = finite(hi, "hi")?;
        Interval::new(lo, lo_strict, hi, hi_strict).map_err(|msg| ParseError::Syntax { line, col, msg })
    }

    fn bound(&mut self) -> PResult<Bound> {
        let neg = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        match self.bump() {
            Tok::Num(n) => Ok(Bound::Finite(if neg { -n } else { n })),
            Tok::Ident(w) if w == "inf" => Ok(if neg { Bound::MinusInf } else { Bound::PlusInf }),
            other => {
                self.pos -= 1;
                self.syntax(format!("expected a number or `inf`, found {other}"))
            }
        }
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::OrOr {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::AndAnd {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Formula> {
        match self.peek() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Exists | Tok::Forall => self.quantifier(),
            Tok::LParen => {
                let save = (self.pos, self.free.clone(), self.binders.len());
                let attempt = self.bump_then(|p| {
                    let f = p.formula()?;
                    p.expect(Tok::RParen)?;
                    Ok(f)
                });
                match attempt {
                    Ok(f) => Ok(f),
                    Err(e @ (ParseError::Scope { .. } | ParseError::Kind { .. })) => Err(e),
                    Err(e) => {
                        self.record(e);
                        self.pos = save.0;
                        self.free = save.1;
                        self.binders.truncate(save.2);
                        self.comparison()
                    }
                }
            }
            _ => self.comparison(),
        }
    }

    fn bump_then<T>(&mut self, f: impl FnOnce(&mut Self) -> PResult<T>) -> PResult<T> {
        self.bump();
        f(self)
    }

    fn comparison(&mut self) -> PResult<Formula> {
        let lhs = self.side()?;
        let op = self.peek().clone();
        if !matches!(op, Tok::Lt | Tok::Le | Tok::Gt | Tok::Ge | Tok::EqEq) {
            return self.syntax(format!("expected a comparison operator, found {op}"));
        }
        self.bump();
        let rhs = self.side()?;
        match (lhs, rhs) {
            (Side::Abs(_), Side::Abs(_)) => self.syntax("absolute value allowed on one side only"),
            (Side::Plain(a), Side::Plain(b)) => Ok(compare(&op, a, b)),
            (Side::Abs(a), Side::Plain(c)) => Ok(abs_compare(&op, a, c)),
            (Side::Plain(c), Side::Abs(a)) => Ok(abs_compare(&flip(&op), a, c)),
        }
    }

    fn side(&mut self) -> PResult<Side> {
        if *self.peek() == Tok::Pipe {
            self.bump();
            let (t, _) = self.term(false)?;
            self.expect(Tok::Pipe)?;
            Ok(Side::Abs(t))
        } else {
            Ok(Side::Plain(self.term(false)?.0))
        }
    }

    fn term(&mut self, in_access: bool) -> PResult<(Term, TermInfo)> {
        let (mut lhs, mut info) = self.addend(in_access)?;
        loop {
            let plus = match self.peek() {
                Tok::Plus => true,
                Tok::Minus => false,
                _ => break,
            };
            let (line, col) = self.here();
            self.bump();
            let (rhs, rinfo) = self.addend(in_access)?;
            if (info.time && rinfo.value) || (info.value && rinfo.time) {
                return Err(ParseError::Kind {
                    line,
                    col,
                    msg: "cannot combine a time term with a value term".into(),
                });
            }
            info = info.join(rinfo);
            lhs = if plus { Term::add(lhs, rhs) } else { Term::sub(lhs, rhs) };
        }
        Ok((lhs, info))
    }

    fn addend(&mut self, in_access: bool) -> PResult<(Term, TermInfo)> {
        let (line, col) = self.here();
        match self.bump() {
            Tok::Minus => {
                let (t, info) = self.addend(in_access)?;
                Ok((Term::neg(t), info))
            }
            Tok::Num(n) => Ok((Term::Const(n), TermInfo::default())),
            Tok::LParen => {
                let inner = self.term(in_access)?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Ident(name) if *self.peek() == Tok::LParen => {
                if in_access {
                    return Err(ParseError::Kind {
                        line,
                        col,
                        msg: format!("signal access `{name}(…)` inside a time term"),
                    });
                }
                self.bump();
                let (arg, _) = self.term(true)?;
                self.expect(Tok::RParen)?;
                Ok((
                    Term::access(&name, arg),
                    TermInfo {
                        time: false,
                        value: true,
                    },
                ))
            }
            Tok::Ident(name) => {
                if name == "inf" || name == "in" {
                    return Err(ParseError::Syntax {
                        line,
                        col,
                        msg: format!("`{name}` is reserved"),
                    });
                }
                if !self.scope.contains(&name) {
                    self.free.insert(name.clone());
                }
                let kind = if self.time_names.contains(&name) {
                    Kind::Time
                } else {
                    Kind::Value
                };
                let info = TermInfo {
                    time: kind == Kind::Time,
                    value: kind == Kind::Value,
                };
                Ok((Term::Var(Var::new(&name), kind), info))
            }
            other => {
                self.pos -= 1;
                self.syntax(format!("expected a term, found {other}"))
            }
        }
    }
}

enum Bound {
    Finite(Rational),
    PlusInf,
    MinusInf,
}

enum Side {
    Plain(Term),
    Abs(Term),
}

fn flip(op: &Tok) -> Tok {
    match op {
        Tok::Lt => Tok::Gt,
        Tok::Gt => Tok::Lt,
        Tok::Le => Tok::Ge,
        Tok::Ge => Tok::Le,
        other => other.clone(),
    }
}

fn compare(op: &Tok, a: Term, b: Term) -> Formula {
    match op {
        Tok::Lt => Formula::atom(a, b),
        Tok::Gt => Formula::atom(b, a),
        Tok::Le => Formula::le(a, b),
        Tok::Ge => Formula::le(b, a),
        Tok::EqEq => Formula::and(Formula::le(a.clone(), b.clone()), Formula::le(b, a)),
        _ => unreachable!("not a comparison operator"),
    }
}

/// `|a| ⋈ c`, expanded to the two-sided comparison.
fn abs_compare(op: &Tok, a: Term, c: Term) -> Formula {
    let neg_c = Term::neg(c.clone());
    match op {
        Tok::Lt | Tok::Le => Formula::and(compare(op, a.clone(), c), compare(op, neg_c, a)),
        Tok::Gt | Tok::Ge => Formula::or(compare(op, a.clone(), c), compare(op, neg_c, a)),
        Tok::EqEq => Formula::and(abs_compare(&Tok::Le, a.clone(), c.clone()), abs_compare(&Tok::Ge, a, c)),
        _ => unreachable!("not a comparison operator"),
    }
}

/// Parse a formula, expanding all derived connectives.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let time_names = time_names(&toks);
    let mut p = Parser {
        toks,
        pos: 0,
        time_names,
        scope: Vec::new(),
        binders: Vec::new(),
        free: HashSet::new(),
        furthest: None,
    };
    let result = p.formula().and_then(|f| {
        if *p.peek() != Tok::Eof {
            p.syntax(format!("unexpected {} after the formula", p.peek()))
        } else {
            Ok(f)
        }
    });
    let f = match result {
        Ok(f) => f,
        Err(e) => {
            // Prefer the error that got furthest into the input.
            return Err(match p.furthest.take() {
                Some((_, deeper)) if matches!(e, ParseError::Syntax { .. }) && deeper.position() > e.position() => {
                    deeper
                }
                _ => e,
            });
        }
    };
    for (name, line, col) in &p.binders {
        if p.free.contains(name) {
            return Err(ParseError::Scope {
                line: *line,
                col: *col,
                msg: format!("`{name}` is bound here but also occurs free"),
            });
        }
    }
    Ok(f)
}
