use std::fmt;

use super::Interval;
use crate::polyhedra::{LinExpr, Var};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Time,
    Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Const(Rational),
    Var(Var, Kind),
    Access(String, Box<Term>),
    Add(Box<Term>, Box<Term>),
    Sub(Box<Term>, Box<Term>),
}

/// Core SFO formulas; `Atom(a, b)` means `a < b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(Term, Term),
    Not(Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Exists {
        var: Var,
        kind: Kind,
        domain: Interval,
        body: Box<Formula>,
    },
}

#[allow(clippy::should_implement_trait)]
impl Term {
    pub fn constant(c: Rational) -> Term {
        Term::Const(c)
    }

    pub fn time(v: Var) -> Term {
        Term::Var(v, Kind::Time)
    }

    pub fn value(v: Var) -> Term {
        Term::Var(v, Kind::Value)
    }

    pub fn access(f: &str, arg: Term) -> Term {
        Term::Access(f.to_string(), Box::new(arg))
    }

    pub fn add(a: Term, b: Term) -> Term {
        Term::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Term, b: Term) -> Term {
        Term::Sub(Box::new(a), Box::new(b))
    }

    /// `-a`, folding constants.
    pub fn neg(a: Term) -> Term {
        match a {
            Term::Const(c) => Term::Const(-c),
            other => Term::sub(Term::Const(Rational::zero()), other),
        }
    }

    /// The term as an affine expression, if it contains no signal access.
    pub fn linear(&self) -> Option<LinExpr> {
        Some(match self {
            Term::Const(c) => LinExpr::constant(c.clone()),
            Term::Var(v, _) => LinExpr::var(*v),
            Term::Access(..) => return None,
            Term::Add(a, b) => a.linear()? + b.linear()?,
            Term::Sub(a, b) => a.linear()? - b.linear()?,
        })
    }

    pub fn mentions(&self, x: Var) -> bool {
        match self {
            Term::Const(_) => false,
            Term::Var(v, _) => *v == x,
            Term::Access(_, arg) => arg.mentions(x),
            Term::Add(a, b) | Term::Sub(a, b) => a.mentions(x) || b.mentions(x),
        }
    }

    pub fn has_access(&self) -> bool {
        match self {
            Term::Const(_) | Term::Var(..) => false,
            Term::Access(..) => true,
            Term::Add(a, b) | Term::Sub(a, b) => a.has_access() || b.has_access(),
        }
    }

    /// Visit every `f(τ)` subterm.
    pub fn for_each_access<'a>(&'a self, visit: &mut impl FnMut(&'a str, &'a Term)) {
        match self {
            Term::Const(_) | Term::Var(..) => {}
            Term::Access(f, arg) => {
                visit(f, arg);
                arg.for_each_access(visit);
            }
            Term::Add(a, b) | Term::Sub(a, b) => {
                a.for_each_access(visit);
                b.for_each_access(visit);
            }
        }
    }

    pub fn for_each_var(&self, visit: &mut impl FnMut(Var, Kind)) {
        match self {
            Term::Const(_) => {}
            Term::Var(v, k) => visit(*v, *k),
            Term::Access(_, arg) => arg.for_each_var(visit),
            Term::Add(a, b) | Term::Sub(a, b) => {
                a.for_each_var(visit);
                b.for_each_var(visit);
            }
        }
    }

    pub fn substitute(&self, x: Var, by: &Term) -> Term {
        match self {
            Term::Const(_) => self.clone(),
            Term::Var(v, _) if *v == x => by.clone(),
            Term::Var(..) => self.clone(),
            Term::Access(f, arg) => Term::Access(f.clone(), Box::new(arg.substitute(x, by))),
            Term::Add(a, b) => Term::add(a.substitute(x, by), b.substitute(x, by)),
            Term::Sub(a, b) => Term::sub(a.substitute(x, by), b.substitute(x, by)),
        }
    }

    fn size(&self) -> usize {
        match self {
            Term::Const(_) | Term::Var(..) => 1,
            Term::Access(_, arg) => 1 + arg.size(),
            Term::Add(a, b) | Term::Sub(a, b) => 1 + a.size() + b.size(),
        }
    }
}

impl Formula {
    pub fn atom(lhs: Term, rhs: Term) -> Formula {
        Formula::Atom(lhs, rhs)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    /// `a ∧ b ≡ ¬(¬a ∨ ¬b)`
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::or(Formula::not(a), Formula::not(b)))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::or(Formula::not(a), b)
    }

    pub fn exists(var: Var, kind: Kind, domain: Interval, body: Formula) -> Formula {
        Formula::Exists {
            var,
            kind,
            domain,
            body: Box::new(body),
        }
    }

    /// `∀x ∈ I. φ ≡ ¬∃x ∈ I. ¬φ`
    pub fn forall(var: Var, kind: Kind, domain: Interval, body: Formula) -> Formula {
        Formula::not(Formula::exists(var, kind, domain, Formula::not(body)))
    }

    /// `a ≤ b ≡ ¬(b < a)`
    pub fn le(a: Term, b: Term) -> Formula {
        Formula::not(Formula::atom(b, a))
    }

    pub fn mentions(&self, x: Var) -> bool {
        match self {
            Formula::Atom(a, b) => a.mentions(x) || b.mentions(x),
            Formula::Not(f) => f.mentions(x),
            Formula::Or(a, b) => a.mentions(x) || b.mentions(x),
            Formula::Exists { var, body, .. } => *var != x && body.mentions(x),
        }
    }

    /// Free variables with their kinds, in order of first occurrence.
    pub fn free_vars(&self) -> Vec<(Var, Kind)> {
        let mut out = Vec::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut Vec<(Var, Kind)>) {
        let visit_term = |t: &Term, bound: &Vec<Var>, out: &mut Vec<(Var, Kind)>| {
            t.for_each_var(&mut |v, k| {
                if !bound.contains(&v) && !out.iter().any(|(w, _)| *w == v) {
                    out.push((v, k));
                }
            })
        };
        match self {
            Formula::Atom(a, b) => {
                visit_term(a, bound, out);
                visit_term(b, bound, out);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::Or(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists { var, body, .. } => {
                bound.push(*var);
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Visit every signal-access argument together with the quantifier
    /// prefix (innermost last) in scope at that access.
    pub fn for_each_access<'a>(
        &'a self,
        visit: &mut impl FnMut(&'a str, &'a Term, &[(Var, Kind, &'a Interval)]),
    ) {
        let mut scope = Vec::new();
        self.walk_accesses(&mut scope, visit);
    }

    fn walk_accesses<'a>(
        &'a self,
        scope: &mut Vec<(Var, Kind, &'a Interval)>,
        visit: &mut impl FnMut(&'a str, &'a Term, &[(Var, Kind, &'a Interval)]),
    ) {
        match self {
            Formula::Atom(a, b) => {
                a.for_each_access(&mut |f, arg| visit(f, arg, scope));
                b.for_each_access(&mut |f, arg| visit(f, arg, scope));
            }
            Formula::Not(f) => f.walk_accesses(scope, visit),
            Formula::Or(a, b) => {
                a.walk_accesses(scope, visit);
                b.walk_accesses(scope, visit);
            }
            Formula::Exists {
                var,
                kind,
                domain,
                body,
            } => {
                scope.push((*var, *kind, domain));
                body.walk_accesses(scope, visit);
                scope.pop();
            }
        }
    }

    /// Names of all signals read by the formula, sorted and deduplicated.
    pub fn signals(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        self.for_each_access(&mut |f, _, _| {
            if !out.iter().any(|g| g == f) {
                out.push(f.to_string());
            }
        });
        out.sort();
        out
    }

    /// Replace free occurrences of `x` by `by`.
    pub fn substitute_free(&self, x: Var, by: &Term) -> Formula {
        match self {
            Formula::Atom(a, b) => Formula::atom(a.substitute(x, by), b.substitute(x, by)),
            Formula::Not(f) => Formula::not(f.substitute_free(x, by)),
            Formula::Or(a, b) => Formula::or(a.substitute_free(x, by), b.substitute_free(x, by)),
            Formula::Exists { var, .. } if *var == x => self.clone(),
            Formula::Exists {
                var,
                kind,
                domain,
                body,
            } => Formula::exists(*var, *kind, domain.clone(), body.substitute_free(x, by)),
        }
    }

    /// Number of AST nodes, counting term nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(a, b) => 1 + a.size() + b.size(),
            Formula::Not(f) => 1 + f.size(),
            Formula::Or(a, b) => 1 + a.size() + b.size(),
            Formula::Exists { body, .. } => 1 + body.size(),
        }
    }

    /// Nesting depth of connectives and quantifiers (atoms have depth 0).
    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(..) => 0,
            Formula::Not(f) => 1 + f.depth(),
            Formula::Or(a, b) => 1 + a.depth().max(b.depth()),
            Formula::Exists { body, .. } => 1 + body.depth(),
        }
    }
}

// Printing recognizes the desugared shapes of ∧, ∀ and ≤ so that the
// output reads like the input and parses back to the identical tree.

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(c) if c.is_negative() => write!(f, "({c})"),
            Term::Const(c) => write!(f, "{c}"),
            Term::Var(v, _) => write!(f, "{v}"),
            Term::Access(s, arg) => write!(f, "{s}({arg})"),
            Term::Add(a, b) => {
                write!(f, "{a} + ")?;
                write_operand(f, b)
            }
            Term::Sub(a, b) => {
                write!(f, "{a} - ")?;
                write_operand(f, b)
            }
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, t: &Term) -> fmt::Result {
    match t {
        Term::Add(..) | Term::Sub(..) => write!(f, "({t})"),
        _ => write!(f, "{t}"),
    }
}

enum Shape<'a> {
    And(&'a Formula, &'a Formula),
    Forall(Var, &'a Interval, &'a Formula),
    Le(&'a Term, &'a Term),
    Other,
}

fn shape(phi: &Formula) -> Shape<'_> {
    let Formula::Not(inner) = phi else {
        return Shape::Other;
    };
    match inner.as_ref() {
        Formula::Or(a, b) => match (a.as_ref(), b.as_ref()) {
            (Formula::Not(x), Formula::Not(y)) => Shape::And(x, y),
            _ => Shape::Other,
        },
        Formula::Exists {
            var, domain, body, ..
        } => match body.as_ref() {
            Formula::Not(b) => Shape::Forall(*var, domain, b),
            _ => Shape::Other,
        },
        Formula::Atom(b, a) => Shape::Le(a, b),
        _ => Shape::Other,
    }
}

fn write_sub(f: &mut fmt::Formatter<'_>, phi: &Formula) -> fmt::Result {
    let atomic = match phi {
        Formula::Atom(..) => true,
        Formula::Not(_) => matches!(shape(phi), Shape::Le(..) | Shape::Other),
        _ => false,
    };
    if atomic {
        write!(f, "{phi}")
    } else {
        write!(f, "({phi})")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match shape(self) {
            Shape::And(a, b) => {
                write_sub(f, a)?;
                write!(f, " && ")?;
                return write_sub(f, b);
            }
            Shape::Forall(v, dom, body) => return write!(f, "A {v} in {dom}. {body}"),
            Shape::Le(a, b) => return write!(f, "{a} <= {b}"),
            Shape::Other => {}
        }
        match self {
            Formula::Atom(a, b) => write!(f, "{a} < {b}"),
            Formula::Not(g) => {
                write!(f, "!")?;
                write_sub(f, g)
            }
            Formula::Or(a, b) => {
                write_sub(f, a)?;
                write!(f, " || ")?;
                write_sub(f, b)
            }
            Formula::Exists {
                var, domain, body, ..
            } => write!(f, "E {var} in {domain}. {body}"),
        }
    }
}
