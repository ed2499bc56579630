use std::collections::HashMap;

use super::{Formula, Interval, Kind, Term};
use crate::polyhedra::{LinExpr, Var};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TemporalError {
    #[error("formula has no free time variable")]
    NoTimeVariable,
    #[error("formula has several free time variables: {0}")]
    SeveralTimeVariables(String),
    #[error("signal access `{0}` is not anchored at `{1}` with coefficient 1")]
    NotAnchored(String, Var),
    #[error("time quantifier over `{0}` has unbounded interval {1}")]
    Unbounded(Var, Interval),
}

/// Forward and backward horizon of a temporal formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Horizons {
    pub forward: Rational,
    pub backward: Rational,
}

/// The unique free time variable, provided every access is `t + δ` with
/// `t` absent from `δ`.
pub fn check_temporal(phi: &Formula) -> Result<Var, TemporalError> {
    let times: Vec<Var> = phi
        .free_vars()
        .into_iter()
        .filter(|(_, k)| *k == Kind::Time)
        .map(|(v, _)| v)
        .collect();
    let t = match times.as_slice() {
        [] => return Err(TemporalError::NoTimeVariable),
        [t] => *t,
        many => {
            let names: Vec<String> = many.iter().map(|v| v.name()).collect();
            return Err(TemporalError::SeveralTimeVariables(names.join(", ")));
        }
    };
    let mut bad = None;
    phi.for_each_access(&mut |f, arg, _| {
        let anchored = arg.linear().is_some_and(|e| e.coeff(t) == Rational::one());
        if !anchored && bad.is_none() {
            bad = Some(format!("{f}({arg})"));
        }
    });
    match bad {
        Some(access) => Err(TemporalError::NotAnchored(access, t)),
        None => Ok(t),
    }
}

/// Infimum and supremum of `e` when each variable ranges over the closed
/// hull of its interval; `None` stands for an infinite bound.
fn offset_range(e: &LinExpr, ranges: &HashMap<Var, &Interval>) -> (Option<Rational>, Option<Rational>) {
    let mut lo = Some(e.constant_term().clone());
    let mut hi = lo.clone();
    for (v, a) in e.terms() {
        let iv = ranges.get(v).expect("offset variables are bound");
        let (at_lo, at_hi) = if a.is_positive() {
            (&iv.lo, &iv.hi)
        } else {
            (&iv.hi, &iv.lo)
        };
        lo = lo.zip(at_lo.as_ref()).map(|(s, b)| s + a * b);
        hi = hi.zip(at_hi.as_ref()).map(|(s, b)| s + a * b);
    }
    (lo, hi)
}

fn access_offsets(phi: &Formula, t: Var) -> Vec<(Option<Rational>, Option<Rational>)> {
    let mut out = Vec::new();
    phi.for_each_access(&mut |_, arg, scope| {
        let ranges: HashMap<Var, &Interval> = scope.iter().map(|(v, _, iv)| (*v, *iv)).collect();
        let delta = arg.linear().expect("temporal formula").without(t);
        out.push(offset_range(&delta, &ranges));
    });
    out
}

fn check_bounded(phi: &Formula) -> Result<(), TemporalError> {
    match phi {
        Formula::Atom(..) => Ok(()),
        Formula::Not(f) => check_bounded(f),
        Formula::Or(a, b) => check_bounded(a).and_then(|_| check_bounded(b)),
        Formula::Exists {
            var,
            kind,
            domain,
            body,
        } => {
            if *kind == Kind::Time && !domain.is_bounded() {
                return Err(TemporalError::Unbounded(*var, domain.clone()));
            }
            check_bounded(body)
        }
    }
}

pub fn horizons(phi: &Formula) -> Result<Horizons, TemporalError> {
    let t = check_temporal(phi)?;
    check_bounded(phi)?;
    let mut forward = Rational::zero();
    let mut backward = Rational::zero();
    for (lo, hi) in access_offsets(phi, t) {
        // Bounded time quantifiers make every offset finite.
        forward = forward.max(hi.expect("bounded offset"));
        backward = backward.max(-lo.expect("bounded offset"));
    }
    Ok(Horizons { forward, backward })
}

/// `Π_d(φ)`: every free occurrence of the time variable becomes `t − d`.
pub fn pastify(phi: &Formula, d: &Rational) -> Result<Formula, TemporalError> {
    let t = check_temporal(phi)?;
    if d.is_zero() {
        return Ok(phi.clone());
    }
    let shifted = Term::sub(Term::time(t), Term::Const(d.clone()));
    Ok(phi.substitute_free(t, &shifted))
}

/// Whether no access can read strictly after the reference time.
pub fn is_psfo(phi: &Formula) -> Result<bool, TemporalError> {
    let t = check_temporal(phi)?;
    Ok(access_offsets(phi, t)
        .into_iter()
        .all(|(_, hi)| hi.is_some_and(|h| !h.is_positive())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse;
    use crate::rational::q;

    const STABILIZATION: &str = "E r in (-inf,inf). E c in [0,10]. A d in [0,8]. |f(t+c+d) - r| <= 1/2";

    #[test]
    fn anchoring() {
        assert_eq!(check_temporal(&parse("E c in [0,2]. 0 < f(t-c)").unwrap()), Ok(Var::new("t")));
        assert!(matches!(
            check_temporal(&parse("0 < f(s1) + f(s2)").unwrap()),
            Err(TemporalError::SeveralTimeVariables(_))
        ));
        assert!(matches!(
            check_temporal(&parse("0 < f(t + t)").unwrap()),
            Err(TemporalError::NotAnchored(..))
        ));
        assert_eq!(check_temporal(&parse("r < 1").unwrap()), Err(TemporalError::NoTimeVariable));
    }

    #[test]
    fn stabilization_horizons() {
        let psi = parse(STABILIZATION).unwrap();
        assert_eq!(
            horizons(&psi).unwrap(),
            Horizons {
                forward: q(18, 1),
                backward: q(0, 1)
            }
        );
        assert!(!is_psfo(&psi).unwrap());
        let past = pastify(&psi, &q(18, 1)).unwrap();
        assert!(is_psfo(&past).unwrap());
        let expected = parse("E r in (-inf,inf). E c in [0,10]. A d in [0,8]. |f(t-18+c+d) - r| <= 1/2").unwrap();
        assert_eq!(past, expected);
        assert_eq!(
            horizons(&past).unwrap(),
            Horizons {
                forward: q(0, 1),
                backward: q(18, 1)
            }
        );
    }

    #[test]
    fn simple_horizons() {
        let h = horizons(&parse("0 < f(t)").unwrap()).unwrap();
        assert_eq!((h.forward, h.backward), (q(0, 1), q(0, 1)));
        let h = horizons(&parse("|f(t) - f(t - 0.1)| <= 1/2").unwrap()).unwrap();
        assert_eq!((h.forward, h.backward), (q(0, 1), q(1, 10)));
        assert!(is_psfo(&parse("0 < f(t-1)").unwrap()).unwrap());
        assert_eq!(pastify(&parse("0 < f(t)").unwrap(), &q(0, 1)).unwrap(), parse("0 < f(t)").unwrap());
    }

    #[test]
    fn unbounded_time_quantifier_is_rejected() {
        let f = parse("E c in [0,inf). 0 < f(t-c)").unwrap();
        assert!(matches!(horizons(&f), Err(TemporalError::Unbounded(..))));
    }
}
