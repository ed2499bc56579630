//! Symbolic robustness of terms and formulas over the signal store.

use crate::logic::{Formula, Term};
use crate::polyhedra::{LinExpr, Polyhedron, Var};
use crate::rational::Rational;
use crate::signals::SignalStore;

use super::piece::{RobustnessPiece, ValueAnnotation};
use super::plp::{closure, eliminate_by_sup};
use super::MonitorError;

/// Deliberate defects for exercising the differential checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// Negation keeps the sign of its operand.
    NegationKeepsSign,
}

/// Read-only evaluation context.
pub struct Engine<'a> {
    store: &'a SignalStore,
    mutation: Option<Mutation>,
}

/// Interval hull of `e` when each variable ranges over its own bounds in
/// `pd`; `None` for an infinite side.
fn expr_range(e: &LinExpr, pd: &Polyhedron) -> (Option<Rational>, Option<Rational>) {
    let mut lo = Some(e.constant_term().clone());
    let mut hi = lo.clone();
    for (v, a) in e.terms() {
        let (vl, vh) = pd.var_bounds(*v);
        let (at_lo, at_hi) = if a.is_positive() { (vl, vh) } else { (vh, vl) };
        lo = lo.zip(at_lo).map(|(s, (b, _))| &s + &(a * &b));
        hi = hi.zip(at_hi).map(|(s, (b, _))| &s + &(a * &b));
    }
    (lo, hi)
}

fn pure(t: &Term) -> Option<LinExpr> {
    if t.has_access() {
        None
    } else {
        t.linear()
    }
}

fn shift(pieces: Vec<RobustnessPiece>, by: &LinExpr, negate: bool) -> Vec<RobustnessPiece> {
    pieces
        .into_iter()
        .map(|p| {
            let e = p.value.affine().expect("term values are finite");
            let e = if negate { by - e } else { e + by };
            RobustnessPiece::new(p.guard, ValueAnnotation::Affine(e))
        })
        .collect()
}

impl<'a> Engine<'a> {
    pub fn new(store: &'a SignalStore) -> Self {
        Engine { store, mutation: None }
    }

    pub fn with_mutation(mut self, m: Option<Mutation>) -> Self {
        self.mutation = m;
        self
    }

    /// Pieces of the value of `th` on `pd`; absent where some access is
    /// outside the stored signal pieces.
    pub fn term_poly(&self, th: &Term, pd: &Polyhedron) -> Result<Vec<RobustnessPiece>, MonitorError> {
        if let Some(e) = pure(th) {
            return Ok(if pd.is_empty() {
                Vec::new()
            } else {
                vec![RobustnessPiece::new(pd.clone(), ValueAnnotation::Affine(e))]
            });
        }
        match th {
            Term::Access(f, arg) => self.access(f, arg, pd),
            Term::Add(a, b) => self.combine(a, b, pd, false),
            Term::Sub(a, b) => self.combine(a, b, pd, true),
            Term::Const(_) | Term::Var(..) => unreachable!("pure terms handled above"),
        }
    }

    fn access(&self, f: &str, arg: &Term, pd: &Polyhedron) -> Result<Vec<RobustnessPiece>, MonitorError> {
        let stored = self
            .store
            .pieces(f)
            .ok_or_else(|| MonitorError::UnknownSignal(f.to_string()))?;
        let e = arg.linear().expect("access arguments are affine");
        let (lo, hi) = expr_range(&e, pd);
        let mut out = Vec::new();
        for sp in stored {
            // Cheap box test before any polyhedral work.
            if lo.as_ref().is_some_and(|l| sp.t_hi < *l) || hi.as_ref().is_some_and(|h| *h < sp.t_lo) {
                continue;
            }
            let guard = pd.intersect(&sp.domain_of(&e));
            if guard.is_empty() {
                continue;
            }
            let value = &e.scale(&sp.slope) + &LinExpr::constant(sp.intercept.clone());
            out.push(RobustnessPiece::new(guard, ValueAnnotation::Affine(value)));
        }
        Ok(out)
    }

    /// `a + b` or `a − b`.
    fn combine(&self, a: &Term, b: &Term, pd: &Polyhedron, minus: bool) -> Result<Vec<RobustnessPiece>, MonitorError> {
        if let Some(eb) = pure(b) {
            let eb = if minus { -eb } else { eb };
            return Ok(shift(self.term_poly(a, pd)?, &eb, false));
        }
        if let Some(ea) = pure(a) {
            return Ok(shift(self.term_poly(b, pd)?, &ea, minus));
        }
        let left = self.term_poly(a, pd)?;
        let right = self.term_poly(b, pd)?;
        let mut out = Vec::new();
        for p in &left {
            let ep = p.value.affine().expect("term values are finite");
            for r in &right {
                let guard = p.guard.intersect(&r.guard);
                if guard.is_empty() {
                    continue;
                }
                let er = r.value.affine().expect("term values are finite");
                let e = if minus { ep - er } else { ep + er };
                out.push(RobustnessPiece::new(guard, ValueAnnotation::Affine(e)));
            }
        }
        Ok(out)
    }

    /// Pieces of the robustness of `phi` on `pd`, pairwise disjoint, absent
    /// exactly where the robustness is undefined.
    pub fn formula_robust(&self, phi: &Formula, pd: &Polyhedron) -> Result<Vec<RobustnessPiece>, MonitorError> {
        match phi {
            Formula::Atom(a, b) => self.combine(b, a, pd, true),
            Formula::Not(f) => {
                let inner = self.formula_robust(f, pd)?;
                if self.mutation == Some(Mutation::NegationKeepsSign) {
                    return Ok(inner);
                }
                Ok(inner
                    .into_iter()
                    .map(|p| RobustnessPiece::new(p.guard, p.value.negate()))
                    .collect())
            }
            Formula::Or(a, b) => {
                let left = self.formula_robust(a, pd)?;
                if left.is_empty() {
                    return Ok(left);
                }
                let right = self.formula_robust(b, pd)?;
                let mut out = Vec::new();
                for p in &left {
                    for r in &right {
                        let both = p.guard.intersect(&r.guard);
                        if both.is_empty() {
                            continue;
                        }
                        if p.value == r.value {
                            out.push(RobustnessPiece::new(both, p.value.clone()));
                            continue;
                        }
                        let keep = both.and(p.value.at_least(&r.value));
                        if !keep.is_empty() {
                            out.push(RobustnessPiece::new(keep, p.value.clone()));
                        }
                        let take = both.and(r.value.exceeds(&p.value));
                        if !take.is_empty() {
                            out.push(RobustnessPiece::new(take, r.value.clone()));
                        }
                    }
                }
                Ok(out)
            }
            Formula::Exists { var, domain, body, .. } => {
                let inner_pd = pd.and_all(closure(*var, domain));
                if inner_pd.is_empty() {
                    return Ok(Vec::new());
                }
                let inner = self.formula_robust(body, &inner_pd)?;
                Ok(eliminate_by_sup(inner, *var, domain))
            }
        }
    }
}

/// `{lo ≤ t < hi}`, or `{lo ≤ t ≤ hi}` when `closed`.
pub fn time_domain(t: Var, lo: &Rational, hi: &Rational, closed: bool) -> Polyhedron {
    let tv = LinExpr::var(t);
    let lo = LinExpr::constant(lo.clone());
    let hi_e = LinExpr::constant(hi.clone());
    let upper = if closed {
        crate::polyhedra::le(&tv, &hi_e)
    } else {
        crate::polyhedra::lt(&tv, &hi_e)
    };
    Polyhedron::full([t]).and_all([crate::polyhedra::ge(&tv, &lo), upper])
}
