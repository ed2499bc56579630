use super::Formula;
use crate::polyhedra::Var;

/// Remove double negations and shrink every quantifier to the disjuncts
/// (or conjuncts) that mention its variable.
///
/// Quantifiers are never distributed over `∨`: `∃x.(φ ∨ ψ)` with `x` in
/// both is defined wherever some instantiation makes both sides defined,
/// which `(∃x.φ) ∨ (∃x.ψ)` does not preserve.
pub fn normalize(phi: &Formula) -> Formula {
    match phi {
        Formula::Atom(..) => phi.clone(),
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Not(g) => normalize(g),
            // A quantifier split may have exposed a fresh double negation.
            g => negate(normalize(g)),
        },
        Formula::Or(a, b) => Formula::or(normalize(a), normalize(b)),
        Formula::Exists {
            var,
            kind,
            domain,
            body,
        } => {
            let body = normalize(body);
            if !body.mentions(*var) {
                return body;
            }
            let rebuild = |inner: Formula| Formula::exists(*var, *kind, domain.clone(), inner);
            match &body {
                Formula::Or(..) => {
                    let (outside, inside) = partition(disjuncts(&body), *var);
                    match join_or(outside) {
                        None => rebuild(body),
                        Some(rest) => Formula::or(rest, rebuild(join_or(inside).unwrap())),
                    }
                }
                // ∃x.¬(a ∨ m(x)) ≡ ¬(a ∨ ¬∃x.¬m(x)), i.e. the conjunct a moves out.
                Formula::Not(inner) if matches!(inner.as_ref(), Formula::Or(..)) => {
                    let (outside, inside) = partition(disjuncts(inner), *var);
                    match join_or(outside) {
                        None => rebuild(body),
                        Some(rest) => {
                            let kept = rebuild(negate(join_or(inside).unwrap()));
                            Formula::not(Formula::or(rest, negate(kept)))
                        }
                    }
                }
                _ => rebuild(body),
            }
        }
    }
}

fn negate(phi: Formula) -> Formula {
    match phi {
        Formula::Not(inner) => *inner,
        other => Formula::not(other),
    }
}

fn disjuncts(phi: &Formula) -> Vec<Formula> {
    match phi {
        Formula::Or(a, b) => {
            let mut out = disjuncts(a);
            out.extend(disjuncts(b));
            out
        }
        other => vec![other.clone()],
    }
}

fn partition(items: Vec<Formula>, x: Var) -> (Vec<Formula>, Vec<Formula>) {
    items.into_iter().partition(|f| !f.mentions(x))
}

fn join_or(items: Vec<Formula>) -> Option<Formula> {
    items.into_iter().reduce(Formula::or)
}
