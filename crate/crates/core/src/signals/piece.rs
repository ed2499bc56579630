use std::collections::BTreeMap;

use crate::polyhedra::{ge, le, lt, LinExpr, Polyhedron, Var};
use crate::rational::Rational;

use super::SignalError;

/// Values of every signal at one time instant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplePoint {
    pub time: Rational,
    pub values: BTreeMap<String, Rational>,
}

/// One linear stretch of a signal: `v = slope·t + intercept` on
/// `[t_lo, t_hi)`, or on `[t_lo, t_hi]` when `closed_hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignalPiece {
    pub t_lo: Rational,
    pub t_hi: Rational,
    pub closed_hi: bool,
    pub slope: Rational,
    pub intercept: Rational,
}

impl SignalPiece {
    /// The value law as an affine expression in `tf`.
    pub fn law(&self, tf: Var) -> LinExpr {
        LinExpr::from_terms([(tf, self.slope.clone())], self.intercept.clone())
    }

    pub fn value_at(&self, t: &Rational) -> Rational {
        &(&self.slope * t) + &self.intercept
    }

    pub fn covers(&self, t: &Rational) -> bool {
        *t >= self.t_lo && (*t < self.t_hi || (self.closed_hi && *t == self.t_hi))
    }

    /// The time interval of the piece as constraints on `e`.
    pub fn domain_of(&self, e: &LinExpr) -> Polyhedron {
        let lo = LinExpr::constant(self.t_lo.clone());
        let hi = LinExpr::constant(self.t_hi.clone());
        let upper = if self.closed_hi { le(e, &hi) } else { lt(e, &hi) };
        let dims: Vec<Var> = e.vars().collect();
        Polyhedron::full(dims).and_all([ge(e, &lo), upper])
    }

    /// The graph `{t_lo ≤ tf < t_hi, vf = law(tf)}` over `(tf, vf)`.
    pub fn polyhedron(&self, tf: Var, vf: Var) -> Polyhedron {
        let graph = crate::polyhedra::eq(&LinExpr::var(vf), &self.law(tf));
        self.domain_of(&LinExpr::var(tf)).with_dims([vf]).and(graph)
    }

    pub fn ends_before(&self, time: &Rational) -> bool {
        self.t_hi < *time
    }
}

/// Linear interpolation of `f` between two consecutive samples.
pub fn encode_segment(prev: &SamplePoint, next: &SamplePoint, f: &str) -> Result<SignalPiece, SignalError> {
    if next.time <= prev.time {
        return Err(SignalError::NonIncreasing {
            previous: prev.time.clone(),
            found: next.time.clone(),
        });
    }
    let missing = || SignalError::MissingSignal(f.to_string());
    let vp = prev.values.get(f).ok_or_else(missing)?;
    let vn = next.values.get(f).ok_or_else(missing)?;
    let slope = &(vn - vp) / &(&next.time - &prev.time);
    let intercept = vp - &(&slope * &prev.time);
    Ok(SignalPiece {
        t_lo: prev.time.clone(),
        t_hi: next.time.clone(),
        closed_hi: false,
        slope,
        intercept,
    })
}
