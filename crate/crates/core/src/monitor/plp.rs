//! Suprema over one variable: parametric LP per piece, then the upper
//! envelope of the results.

use crate::logic::Interval;
use crate::polyhedra::{ge, le, gt, lt, Canonical, LinExpr, Polyhedron, Var};

use super::piece::{RobustnessPiece, ValueAnnotation};

/// Bounds on `x` in a guard: lower bounds `ℓ ≤ x` and upper bounds `x ≤ u`
/// as affine expressions in the other variables.
pub fn isolate_bounds(guard: &Polyhedron, x: Var) -> (Vec<LinExpr>, Vec<LinExpr>) {
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for c in guard.constraints() {
        let a = c.expr().coeff(x);
        if a.is_zero() {
            continue;
        }
        // a·x + r ⋈ 0  ⇔  x ⋈' −r/a
        let bound = c.expr().without(x).scale(&-a.recip());
        match c.relation() {
            crate::polyhedra::Relation::Eq => {
                lower.push(bound.clone());
                upper.push(bound);
            }
            _ if a.is_positive() => lower.push(bound),
            _ => upper.push(bound),
        }
    }
    (lower, upper)
}

/// `sup { objective : x with (Y, x) ∈ guard }` as pieces over Y.
///
/// The coefficient α of `x` in an affine objective is a constant, so the
/// sign analysis is a per-piece test. For α > 0 the supremum is attained at
/// the least upper bound, for α < 0 at the greatest lower bound, and it is
/// `+∞` when that side is unbounded. Among several candidate bounds the
/// regions are made disjoint by breaking ties toward the earliest one.
/// Feasibility of the `x`-interval (every lower bound below the chosen
/// upper bound) is already part of the projection.
pub fn plp_maximize(guard: &Polyhedron, objective: &ValueAnnotation, x: Var) -> Vec<RobustnessPiece> {
    let base = guard.eliminate(&[x]);
    if base.is_empty() {
        return Vec::new();
    }
    let e = match objective {
        ValueAnnotation::Affine(e) => e,
        inf => return vec![RobustnessPiece::new(base, inf.clone())],
    };
    let alpha = e.coeff(x);
    let beta = e.without(x);
    if alpha.is_zero() {
        return vec![RobustnessPiece::new(base, ValueAnnotation::Affine(beta))];
    }
    let (lower, upper) = isolate_bounds(guard, x);
    let maximizing = alpha.is_positive();
    let candidates = if maximizing { upper } else { lower };
    if candidates.is_empty() {
        return vec![RobustnessPiece::new(base, ValueAnnotation::PlusInf)];
    }
    let mut out = Vec::new();
    for (k, b) in candidates.iter().enumerate() {
        let mut g = base.clone();
        for (j, w) in candidates.iter().enumerate() {
            let c = match (j.cmp(&k), maximizing) {
                (std::cmp::Ordering::Equal, _) => continue,
                (std::cmp::Ordering::Less, true) => lt(b, w),
                (std::cmp::Ordering::Greater, true) => le(b, w),
                (std::cmp::Ordering::Less, false) => gt(b, w),
                (std::cmp::Ordering::Greater, false) => ge(b, w),
            };
            g = g.and(c);
        }
        if g.is_empty() {
            continue;
        }
        let value = &b.scale(&alpha) + &beta;
        out.push(RobustnessPiece::new(g, ValueAnnotation::Affine(value)));
    }
    out
}

/// Constraints of the closed hull of `domain` on `x`.
pub fn closure(x: Var, domain: &Interval) -> Vec<Canonical> {
    let xv = LinExpr::var(x);
    let mut out = Vec::new();
    if let Some(lo) = &domain.lo {
        out.push(ge(&xv, &LinExpr::constant(lo.clone())));
    }
    if let Some(hi) = &domain.hi {
        out.push(le(&xv, &LinExpr::constant(hi.clone())));
    }
    out
}

/// Pointwise maximum of possibly overlapping pieces, as disjoint pieces.
/// Ties keep the piece seen first.
pub fn upper_envelope(pieces: Vec<RobustnessPiece>) -> Vec<RobustnessPiece> {
    let mut acc: Vec<RobustnessPiece> = Vec::new();
    for p in pieces {
        let mut next = Vec::with_capacity(acc.len() + 1);
        let mut fresh = vec![p.guard.clone()];
        let mut wins = Vec::new();
        for r in acc {
            let overlap = r.guard.intersect(&p.guard);
            if overlap.is_empty() {
                next.push(r);
                continue;
            }
            fresh = fresh.iter().flat_map(|f| f.subtract(&r.guard)).collect();
            if r.value.at_least(&p.value) == Canonical::True {
                next.push(r);
                continue;
            }
            let win = overlap.and(p.value.exceeds(&r.value));
            let keep = overlap.and(r.value.at_least(&p.value));
            if win.is_empty() {
                next.push(r);
                continue;
            }
            for g in r.guard.subtract(&p.guard) {
                next.push(RobustnessPiece::new(g, r.value.clone()));
            }
            if !keep.is_empty() {
                next.push(RobustnessPiece::new(keep, r.value.clone()));
            }
            wins.push(RobustnessPiece::new(win, p.value.clone()));
        }
        next.extend(wins);
        next.extend(fresh.into_iter().map(|g| RobustnessPiece::new(g, p.value.clone())));
        acc = next;
    }
    acc
}

/// Eliminate `x` ranging over `domain` by taking suprema.
pub fn eliminate_by_sup(pieces: Vec<RobustnessPiece>, x: Var, domain: &Interval) -> Vec<RobustnessPiece> {
    let bounds = closure(x, domain);
    let mut out = Vec::new();
    for p in pieces {
        let g = p.guard.and_all(bounds.iter().cloned());
        out.extend(plp_maximize(&g, &p.value, x));
    }
    upper_envelope(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, Rational};

    fn lin(terms: &[(Var, i64)], c: i64) -> LinExpr {
        LinExpr::from_terms(terms.iter().map(|(v, a)| (*v, q(*a, 1))), q(c, 1))
    }

    fn k(c: i64) -> LinExpr {
        LinExpr::constant(q(c, 1))
    }

    #[test]
    fn upper_bound_is_attained() {
        let (t, c) = (Var::new("t"), Var::new("c"));
        let tv = LinExpr::var(t);
        let cv = LinExpr::var(c);
        let guard = Polyhedron::full([t, c]).and_all([
            ge(&tv, &k(2)),
            lt(&tv, &k(3)),
            le(&(&tv - &k(1)), &cv),
            le(&cv, &k(2)),
        ]);
        let obj = ValueAnnotation::Affine(lin(&[(c, 3), (t, -3)], 0));
        let out = plp_maximize(&guard, &obj, c);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].value, ValueAnnotation::Affine(lin(&[(t, -3)], 6)));
        assert!(!out[0].guard.dims().contains(&c));
    }

    #[test]
    fn zero_and_unbounded_coefficients() {
        let (t, x) = (Var::new("t"), Var::new("x"));
        let guard = Polyhedron::full([t, x]).and(ge(&LinExpr::var(x), &LinExpr::var(t)));
        let seven = ValueAnnotation::constant(q(7, 1));
        assert_eq!(plp_maximize(&guard, &seven, x)[0].value, seven);
        let up = ValueAnnotation::Affine(LinExpr::var(x));
        assert_eq!(plp_maximize(&guard, &up, x)[0].value, ValueAnnotation::PlusInf);
        let down = ValueAnnotation::Affine(-LinExpr::var(x));
        assert_eq!(plp_maximize(&guard, &down, x)[0].value, ValueAnnotation::Affine(-LinExpr::var(t)));
    }

    #[test]
    fn envelope_splits_at_crossing() {
        let t = Var::new("t");
        let tv = LinExpr::var(t);
        let g = Polyhedron::full([t]).and_all([ge(&tv, &k(2)), lt(&tv, &k(3))]);
        let a = RobustnessPiece::new(g.clone(), ValueAnnotation::Affine(lin(&[(t, -3)], 6)));
        let b = RobustnessPiece::new(g, ValueAnnotation::Affine(lin(&[(t, 2)], -5)));
        let out = upper_envelope(vec![a, b]);
        assert_eq!(out.len(), 2);
        let max_at = |x: Rational| -> Vec<_> { out.iter().filter_map(|p| p.value_at(|_| Some(x.clone()))).collect() };
        use crate::oracle::ExtReal::Finite;
        assert_eq!(max_at(q(21, 10)), vec![Finite(q(-3, 10))]);
        assert_eq!(max_at(q(5, 2)), vec![Finite(q(0, 1))]);
        assert_eq!(max_at(q(11, 5)).len(), 1);
    }
}
