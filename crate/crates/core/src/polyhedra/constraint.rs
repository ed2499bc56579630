use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::{LinExpr, Var};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    /// `expr ≥ 0`
    Ge,
    /// `expr > 0`
    Gt,
    /// `expr = 0`
    Eq,
}

/// A linear constraint `expr ⋈ 0`.
///
/// Constraints built through [`Constraint::new`] are canonical: the
/// variable coefficients form a primitive integer vector (gcd 1), and an
/// equality has a positive leading coefficient. Inequalities are only ever
/// scaled by positive factors.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constraint {
    expr: LinExpr,
    rel: Relation,
}

/// Result of canonicalizing a constraint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Canonical {
    True,
    False,
    Constraint(Constraint),
}

impl Constraint {
    #[allow(clippy::new_ret_no_self)]
    pub fn new(expr: LinExpr, rel: Relation) -> Canonical {
        if expr.is_constant() {
            let c = expr.constant_term();
            let holds = match rel {
                Relation::Ge => !c.is_negative(),
                Relation::Gt => c.is_positive(),
                Relation::Eq => c.is_zero(),
            };
            return if holds { Canonical::True } else { Canonical::False };
        }
        let lcm = Rational::lcm_of_denominators(expr.terms().iter().map(|(_, c)| c));
        let gcd = expr
            .terms()
            .iter()
            .map(|(_, c)| (c * &Rational::from(lcm.clone())).numer())
            .fold(BigInt::zero(), |g, n| g.gcd(&n));
        let mut factor = Rational::from_bigints(lcm, gcd);
        if rel == Relation::Eq && expr.terms()[0].1.is_negative() {
            factor = -factor;
        }
        let expr = if factor == Rational::one() { expr } else { expr.scale(&factor) };
        Canonical::Constraint(Constraint { expr, rel })
    }

    /// Build from an already canonical expression without re-scaling.
    pub(crate) fn from_canonical(expr: LinExpr, rel: Relation) -> Constraint {
        Constraint { expr, rel }
    }

    pub fn expr(&self) -> &LinExpr {
        &self.expr
    }

    pub fn relation(&self) -> Relation {
        self.rel
    }

    pub fn is_strict(&self) -> bool {
        self.rel == Relation::Gt
    }

    pub fn mentions(&self, v: Var) -> bool {
        self.expr.mentions(v)
    }

    pub fn holds_at(&self, lookup: impl FnMut(Var) -> Option<Rational>) -> Option<bool> {
        let v = self.expr.eval_with(lookup)?;
        Some(match self.rel {
            Relation::Ge => !v.is_negative(),
            Relation::Gt => v.is_positive(),
            Relation::Eq => v.is_zero(),
        })
    }

    /// The complement as a disjunction of constraints (two pieces for an equality).
    pub fn complement(&self) -> Vec<Constraint> {
        let neg = -&self.expr;
        match self.rel {
            Relation::Ge => vec![Constraint::from_canonical(neg, Relation::Gt)],
            Relation::Gt => vec![Constraint::from_canonical(neg, Relation::Ge)],
            Relation::Eq => vec![
                Constraint::from_canonical(self.expr.clone(), Relation::Gt),
                Constraint::from_canonical(neg, Relation::Gt),
            ],
        }
    }

    pub fn substitute(&self, v: Var, e: &LinExpr) -> Canonical {
        Constraint::new(self.expr.substitute(v, e), self.rel)
    }
}

// Convenience constructors; each compares two affine expressions.
pub fn ge(a: &LinExpr, b: &LinExpr) -> Canonical {
    Constraint::new(a - b, Relation::Ge)
}

pub fn gt(a: &LinExpr, b: &LinExpr) -> Canonical {
    Constraint::new(a - b, Relation::Gt)
}

pub fn le(a: &LinExpr, b: &LinExpr) -> Canonical {
    Constraint::new(b - a, Relation::Ge)
}

pub fn lt(a: &LinExpr, b: &LinExpr) -> Canonical {
    Constraint::new(b - a, Relation::Gt)
}

pub fn eq(a: &LinExpr, b: &LinExpr) -> Canonical {
    Constraint::new(a - b, Relation::Eq)
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Print as `lhs ⋈ rhs` with the constant moved to the right.
        let lhs = self.expr.linear_part();
        let rhs = -self.expr.constant_term();
        let op = match self.rel {
            Relation::Ge => ">=",
            Relation::Gt => ">",
            Relation::Eq => "=",
        };
        write!(f, "{lhs} {op} {rhs}")
    }
}

impl fmt::Debug for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
