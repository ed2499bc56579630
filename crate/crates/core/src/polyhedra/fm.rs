//! Fourier–Motzkin projection with strictness tracking.

use super::{simplex, Canonical, Constraint, Relation, Var};

/// Project `vars` out of the conjunction. Returns `None` when a
/// contradiction is derived. The output is not normalized.
pub(super) fn project(
    mut constraints: Vec<Constraint>,
    vars: &[Var],
    threshold: usize,
) -> Option<Vec<Constraint>> {
    let mut pending: Vec<Var> = vars.to_vec();
    pending.sort();
    pending.dedup();
    while !pending.is_empty() {
        let (idx, _) = pending
            .iter()
            .enumerate()
            .map(|(i, &v)| (i, elimination_cost(&constraints, v)))
            .min_by_key(|&(i, cost)| (cost, pending[i]))
            .unwrap();
        let v = pending.remove(idx);
        constraints = eliminate_one(constraints, v)?;
        constraints = super::polyhedron_normalize(constraints)?;
        if constraints.len() > threshold {
            constraints = remove_redundant(constraints)?;
        }
    }
    Some(constraints)
}

fn elimination_cost(constraints: &[Constraint], v: Var) -> usize {
    let mut lower = 0usize;
    let mut upper = 0usize;
    for c in constraints {
        let a = c.expr().coeff(v);
        if a.is_zero() {
            continue;
        }
        if c.relation() == Relation::Eq {
            return 0;
        }
        if a.is_positive() {
            lower += 1;
        } else {
            upper += 1;
        }
    }
    lower * upper
}

fn push(out: &mut Vec<Constraint>, c: Canonical) -> Option<()> {
    match c {
        Canonical::True => Some(()),
        Canonical::False => None,
        Canonical::Constraint(c) => {
            out.push(c);
            Some(())
        }
    }
}

fn eliminate_one(constraints: Vec<Constraint>, v: Var) -> Option<Vec<Constraint>> {
    // Gaussian step through an equality when one mentions v.
    let eq_pos = constraints
        .iter()
        .enumerate()
        .filter(|(_, c)| c.relation() == Relation::Eq && c.mentions(v))
        .min_by_key(|(_, c)| c.expr().terms().len())
        .map(|(i, _)| i);
    if let Some(i) = eq_pos {
        let eq = &constraints[i];
        let a = eq.expr().coeff(v);
        let solved = eq.expr().without(v).scale(&-a.recip());
        let mut out = Vec::with_capacity(constraints.len());
        for (j, c) in constraints.iter().enumerate() {
            if j == i {
                continue;
            }
            if c.mentions(v) {
                push(&mut out, c.substitute(v, &solved))?;
            } else {
                out.push(c.clone());
            }
        }
        return Some(out);
    }

    let mut lower = Vec::new();
    let mut upper = Vec::new();
    let mut out = Vec::new();
    for c in constraints {
        let a = c.expr().coeff(v);
        if a.is_zero() {
            out.push(c);
        } else if a.is_positive() {
            lower.push((a, c));
        } else {
            upper.push((-a, c));
        }
    }
    for (al, l) in &lower {
        for (au, u) in &upper {
            // au·l + al·u cancels v; both multipliers are positive.
            let e = &l.expr().scale(au) + &u.expr().scale(al);
            let rel = if l.is_strict() || u.is_strict() {
                Relation::Gt
            } else {
                Relation::Ge
            };
            push(&mut out, Constraint::new(e, rel))?;
        }
    }
    Some(out)
}

/// Remove every inequality implied by the remaining constraints; `None`
/// if the conjunction is infeasible.
pub(super) fn remove_redundant(constraints: Vec<Constraint>) -> Option<Vec<Constraint>> {
    if !simplex::is_feasible(&constraints) {
        return None;
    }
    let mut kept = constraints;
    let mut i = 0;
    while i < kept.len() {
        if kept[i].relation() == Relation::Eq {
            i += 1;
            continue;
        }
        let mut trial: Vec<Constraint> = Vec::with_capacity(kept.len());
        trial.extend(kept[..i].iter().cloned());
        trial.extend(kept[i + 1..].iter().cloned());
        trial.extend(kept[i].complement());
        if simplex::is_feasible(&trial) {
            i += 1;
        } else {
            kept.remove(i);
        }
    }
    Some(kept)
}
