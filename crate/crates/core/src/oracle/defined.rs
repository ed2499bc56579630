//! Where is a quantified subformula defined?
//!
//! Every signal access must read inside the trace domain. Because bound
//! variables are named apart, the set of values of the quantified variable
//! for which the body is defined is the projection of one conjunction of
//! closed linear constraints over the variable and all quantifiers nested
//! in the body. Projections of convex sets are intervals, so we compute it
//! exactly with a small dense Fourier–Motzkin elimination.

use crate::logic::{Formula, Term};
use crate::polyhedra::Var;
use crate::rational::Rational;

/// `coeffs · y ≤ bound`
#[derive(Clone, Debug)]
struct Row {
    coeffs: Vec<Rational>,
    bound: Rational,
}

struct System<'a> {
    /// Unknown 0 is the quantified variable; further unknowns are nested binders.
    scope: Vec<(Var, usize)>,
    hulls: Vec<(Rational, Rational)>,
    rows: Vec<Row>,
    env: &'a dyn Fn(Var) -> Rational,
    domain: (&'a Rational, &'a Rational),
    hull_of: &'a dyn Fn(&crate::logic::Interval) -> (Rational, Rational),
}

impl System<'_> {
    /// Affine form of an access argument over the unknowns: `(coeffs, constant)`.
    fn affine(&self, t: &Term) -> (Vec<(usize, Rational)>, Rational) {
        let e = t.linear().expect("access arguments are affine");
        let mut coeffs = Vec::new();
        let mut constant = e.constant_term().clone();
        for (v, a) in e.terms() {
            match self.scope.iter().rev().find(|(w, _)| w == v) {
                Some((_, idx)) => coeffs.push((*idx, a.clone())),
                None => constant += &(a * &(self.env)(*v)),
            }
        }
        (coeffs, constant)
    }

    fn add_access(&mut self, arg: &Term) {
        let n = self.hulls.len();
        let (lin, c) = self.affine(arg);
        let mut up = vec![Rational::zero(); n];
        for (i, a) in &lin {
            up[*i] += a;
        }
        let down: Vec<Rational> = up.iter().map(|a| -a).collect();
        // lin + c ≤ end   and   start ≤ lin + c
        self.rows.push(Row {
            coeffs: up,
            bound: self.domain.1 - &c,
        });
        self.rows.push(Row {
            coeffs: down,
            bound: &c - self.domain.0,
        });
    }

    fn walk_term(&mut self, t: &Term) {
        let mut args = Vec::new();
        t.for_each_access(&mut |_, arg| args.push(arg.clone()));
        for a in args {
            self.add_access(&a);
        }
    }

    fn walk(&mut self, phi: &Formula) {
        match phi {
            Formula::Atom(a, b) => {
                self.walk_term(a);
                self.walk_term(b);
            }
            Formula::Not(f) => self.walk(f),
            Formula::Or(a, b) => {
                self.walk(a);
                self.walk(b);
            }
            Formula::Exists { var, domain, body, .. } => {
                let idx = self.hulls.len();
                self.hulls.push((self.hull_of)(domain));
                self.scope.push((*var, idx));
                self.walk(body);
                self.scope.pop();
            }
        }
    }
}

/// Closed interval of values of `x` in `[lo, hi]` for which `body` is
/// defined, given outer variables from `env`; `None` if empty.
pub(super) fn defined_interval(
    x: Var,
    hull: (Rational, Rational),
    body: &Formula,
    env: &dyn Fn(Var) -> Rational,
    domain: (&Rational, &Rational),
    hull_of: &dyn Fn(&crate::logic::Interval) -> (Rational, Rational),
) -> Option<(Rational, Rational)> {
    let mut sys = System {
        scope: vec![(x, 0)],
        hulls: vec![hull],
        rows: Vec::new(),
        env,
        domain,
        hull_of,
    };
    sys.walk(body);
    // Accesses are added only after all binders are known; pad short rows.
    let n = sys.hulls.len();
    let mut rows = sys.rows;
    for r in rows.iter_mut() {
        r.coeffs.resize(n, Rational::zero());
    }
    for (i, (lo, hi)) in sys.hulls.iter().enumerate() {
        let mut up = vec![Rational::zero(); n];
        up[i] = Rational::one();
        let down: Vec<Rational> = up.iter().map(|a| -a).collect();
        rows.push(Row {
            coeffs: up,
            bound: hi.clone(),
        });
        rows.push(Row {
            coeffs: down,
            bound: -lo,
        });
    }
    for k in (1..n).rev() {
        rows = eliminate(rows, k)?;
    }
    let mut lo = None::<Rational>;
    let mut hi = None::<Rational>;
    for r in &rows {
        let a = &r.coeffs[0];
        if a.is_zero() {
            if r.bound.is_negative() {
                return None;
            }
        } else if a.is_positive() {
            let b = &r.bound / a;
            hi = Some(hi.map_or(b.clone(), |h| h.min(b)));
        } else {
            let b = &r.bound / a;
            lo = Some(lo.map_or(b.clone(), |l| l.max(b)));
        }
    }
    let (lo, hi) = (lo?, hi?);
    (lo <= hi).then_some((lo, hi))
}

fn eliminate(rows: Vec<Row>, k: usize) -> Option<Vec<Row>> {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut out = Vec::new();
    for r in rows {
        let a = r.coeffs[k].clone();
        if a.is_zero() {
            if r.coeffs.iter().all(Rational::is_zero) {
                if r.bound.is_negative() {
                    return None;
                }
                continue;
            }
            out.push(r);
        } else if a.is_positive() {
            pos.push(r);
        } else {
            neg.push(r);
        }
    }
    for p in &pos {
        for q in &neg {
            let (ap, aq) = (p.coeffs[k].clone(), -&q.coeffs[k]);
            let coeffs: Vec<Rational> = p
                .coeffs
                .iter()
                .zip(&q.coeffs)
                .map(|(x, y)| &(x * &aq) + &(y * &ap))
                .collect();
            let bound = &(&p.bound * &aq) + &(&q.bound * &ap);
            if coeffs.iter().all(Rational::is_zero) {
                if bound.is_negative() {
                    return None;
                }
                continue;
            }
            out.push(Row { coeffs, bound });
        }
    }
    out.sort_by(|a, b| a.coeffs.cmp(&b.coeffs).then(a.bound.cmp(&b.bound)));
    // Parallel rows with equal coefficients: keep the tightest.
    out.dedup_by(|later, earlier| later.coeffs == earlier.coeffs);
    Some(out)
}
