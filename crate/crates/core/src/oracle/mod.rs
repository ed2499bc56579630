//! Reference semantics by brute force.
//!
//! Quantifiers are evaluated on a uniform grid of rational points over the
//! closed hull of the quantification interval, first trimmed exactly to the
//! instantiations whose signal accesses stay inside the trace. Unbounded
//! intervals (value quantifiers only, in practice) are clamped to a box
//! that comfortably contains every trace value and formula constant.
//! Everything is exact rational arithmetic; only the sampling of
//! quantifiers is approximate, so `eval_mu` is a lower bound on the true
//! supremum at every existential position.

mod defined;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::logic::{Formula, Interval, Term};
use crate::polyhedra::Var;
use crate::rational::Rational;
use crate::signals::Trace;

pub type Valuation = HashMap<Var, Rational>;

/// Extended reals plus the undefined value of partial traces.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtReal {
    Finite(Rational),
    PlusInf,
    MinusInf,
    Undefined,
}

impl ExtReal {
    pub fn is_defined(&self) -> bool {
        !matches!(self, ExtReal::Undefined)
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtReal::Finite(r) => Some(r),
            _ => None,
        }
    }

    /// Sign as −1, 0, 1; `None` when undefined.
    pub fn signum(&self) -> Option<i32> {
        match self {
            ExtReal::Finite(r) => Some(r.signum()),
            ExtReal::PlusInf => Some(1),
            ExtReal::MinusInf => Some(-1),
            ExtReal::Undefined => None,
        }
    }

    /// Order on defined values; `None` if either side is undefined.
    pub fn partial_cmp_defined(&self, other: &ExtReal) -> Option<Ordering> {
        use ExtReal::*;
        Some(match (self, other) {
            (Undefined, _) | (_, Undefined) => return None,
            (Finite(a), Finite(b)) => a.cmp(b),
            (PlusInf, PlusInf) | (MinusInf, MinusInf) => Ordering::Equal,
            (PlusInf, _) | (_, MinusInf) => Ordering::Greater,
            (MinusInf, _) | (_, PlusInf) => Ordering::Less,
        })
    }

    /// Maximum; undefined if either side is.
    pub fn max(self, other: ExtReal) -> ExtReal {
        match self.partial_cmp_defined(&other) {
            None => ExtReal::Undefined,
            Some(Ordering::Less) => other,
            Some(_) => self,
        }
    }

    /// Supremum over a set where undefined members are skipped.
    fn sup_skip(self, other: ExtReal) -> ExtReal {
        match (&self, &other) {
            (ExtReal::Undefined, _) => other,
            (_, ExtReal::Undefined) => self,
            _ => self.max(other),
        }
    }
}

impl std::ops::Neg for ExtReal {
    type Output = ExtReal;
    fn neg(self) -> ExtReal {
        match self {
            ExtReal::Finite(r) => ExtReal::Finite(-r),
            ExtReal::PlusInf => ExtReal::MinusInf,
            ExtReal::MinusInf => ExtReal::PlusInf,
            ExtReal::Undefined => ExtReal::Undefined,
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(r) => write!(f, "{r}"),
            ExtReal::PlusInf => f.write_str("+inf"),
            ExtReal::MinusInf => f.write_str("-inf"),
            ExtReal::Undefined => f.write_str("undefined"),
        }
    }
}

struct Oracle<'a> {
    trace: &'a Trace,
    grid: usize,
    clamp: Rational,
    env: Vec<(Var, Rational)>,
}

fn max_abs_constant(phi: &Formula) -> Rational {
    fn term(t: &Term, acc: &mut Rational) {
        match t {
            Term::Const(c) => *acc = &*acc + &c.abs(),
            Term::Var(..) => {}
            Term::Access(_, a) => term(a, acc),
            Term::Add(a, b) | Term::Sub(a, b) => {
                term(a, acc);
                term(b, acc);
            }
        }
    }
    fn walk(phi: &Formula, acc: &mut Rational) {
        match phi {
            Formula::Atom(a, b) => {
                term(a, acc);
                term(b, acc);
            }
            Formula::Not(f) => walk(f, acc),
            Formula::Or(a, b) => {
                walk(a, acc);
                walk(b, acc);
            }
            Formula::Exists { domain, body, .. } => {
                for r in [&domain.lo, &domain.hi].into_iter().flatten() {
                    *acc = &*acc + &r.abs();
                }
                walk(body, acc);
            }
        }
    }
    let mut acc = Rational::zero();
    walk(phi, &mut acc);
    acc
}

impl<'a> Oracle<'a> {
    fn new(trace: &'a Trace, nu: &Valuation, phi: &Formula, grid: usize) -> Self {
        assert!(grid >= 2, "grid needs at least two points");
        let two = Rational::from(2);
        let clamp = &(&two * &(&trace.max_abs_value() + &max_abs_constant(phi))) + &Rational::one();
        let mut env: Vec<(Var, Rational)> = nu.iter().map(|(k, v)| (*k, v.clone())).collect();
        env.sort_by_key(|(k, _)| *k);
        Oracle {
            trace,
            grid,
            clamp,
            env,
        }
    }

    fn lookup(&self, v: Var) -> Rational {
        self.env
            .iter()
            .rev()
            .find(|(w, _)| *w == v)
            .map(|(_, r)| r.clone())
            .unwrap_or_else(|| panic!("variable `{v}` has no value"))
    }

    fn hull(&self, iv: &Interval) -> (Rational, Rational) {
        let lo = iv.lo.clone().unwrap_or_else(|| -&self.clamp);
        let hi = iv.hi.clone().unwrap_or_else(|| self.clamp.clone());
        // A clamp tighter than a finite endpoint cannot happen for the
        // other side; keep the hull nonempty.
        if lo > hi {
            (hi.clone(), hi)
        } else {
            (lo, hi)
        }
    }

    fn term(&self, t: &Term) -> Option<Rational> {
        Some(match t {
            Term::Const(c) => c.clone(),
            Term::Var(v, _) => self.lookup(*v),
            Term::Access(f, arg) => {
                let at = self.term(arg)?;
                self.trace.value(f, &at)?
            }
            Term::Add(a, b) => &self.term(a)? + &self.term(b)?,
            Term::Sub(a, b) => &self.term(a)? - &self.term(b)?,
        })
    }

    /// Grid points over the defined part of the quantifier range.
    fn points(&self, var: Var, domain: &Interval, body: &Formula) -> Option<Vec<Rational>> {
        let env = |v: Var| self.lookup(v);
        let hull_of = |iv: &Interval| self.hull(iv);
        let (lo, hi) = defined::defined_interval(
            var,
            self.hull(domain),
            body,
            &env,
            (self.trace.start(), self.trace.end()),
            &hull_of,
        )?;
        if lo == hi {
            return Some(vec![lo]);
        }
        let n = self.grid - 1;
        let step = &(&hi - &lo) / &Rational::from(n as i64);
        let mut pts: Vec<Rational> = (0..n).map(|k| &lo + &(&step * &Rational::from(k as i64))).collect();
        pts.push(hi);
        Some(pts)
    }

    fn mu(&mut self, phi: &Formula) -> ExtReal {
        match phi {
            Formula::Atom(a, b) => match (self.term(a), self.term(b)) {
                (Some(x), Some(y)) => ExtReal::Finite(&y - &x),
                _ => ExtReal::Undefined,
            },
            Formula::Not(f) => -self.mu(f),
            Formula::Or(a, b) => {
                let x = self.mu(a);
                if !x.is_defined() {
                    return x;
                }
                x.max(self.mu(b))
            }
            Formula::Exists { var, domain, body, .. } => {
                let Some(points) = self.points(*var, domain, body) else {
                    return ExtReal::Undefined;
                };
                let mut best = ExtReal::Undefined;
                for p in points {
                    self.env.push((*var, p));
                    let v = self.mu(body);
                    self.env.pop();
                    best = best.sup_skip(v);
                }
                best
            }
        }
    }

    fn holds(&mut self, phi: &Formula) -> Option<bool> {
        match phi {
            Formula::Atom(a, b) => Some(self.term(a)? < self.term(b)?),
            Formula::Not(f) => self.holds(f).map(|b| !b),
            Formula::Or(a, b) => {
                let x = self.holds(a)?;
                let y = self.holds(b)?;
                Some(x || y)
            }
            Formula::Exists { var, domain, body, .. } => {
                let points = self.points(*var, domain, body)?;
                let mut defined = false;
                for p in points {
                    self.env.push((*var, p));
                    let v = self.holds(body);
                    self.env.pop();
                    match v {
                        Some(true) => return Some(true),
                        Some(false) => defined = true,
                        None => {}
                    }
                }
                defined.then_some(false)
            }
        }
    }
}

/// Exact term value; undefined if some access leaves the trace domain.
pub fn eval_term(tr: &Trace, nu: &Valuation, th: &Term) -> ExtReal {
    let o = Oracle {
        trace: tr,
        grid: 2,
        clamp: Rational::one(),
        env: nu.iter().map(|(k, v)| (*k, v.clone())).collect(),
    };
    o.term(th).map_or(ExtReal::Undefined, ExtReal::Finite)
}

/// Boolean satisfaction with quantifiers sampled on `grid` points; `None`
/// when undefined.
pub fn eval_bool(tr: &Trace, nu: &Valuation, phi: &Formula, grid: usize) -> Option<bool> {
    Oracle::new(tr, nu, phi, grid).holds(phi)
}

/// Robustness with quantifiers sampled on `grid` points.
pub fn eval_mu(tr: &Trace, nu: &Valuation, phi: &Formula, grid: usize) -> ExtReal {
    Oracle::new(tr, nu, phi, grid).mu(phi)
}

/// Valuation binding only the reference time.
pub fn at_time(t: Var, value: Rational) -> Valuation {
    Valuation::from([(t, value)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse;
    use crate::rational::q;

    fn ex5() -> Trace {
        Trace::single("f", &[(q(0, 1), q(0, 1)), (q(1, 1), q(-3, 1)), (q(2, 1), q(-1, 1)), (q(3, 1), q(1, 1))])
            .unwrap()
    }

    fn t() -> Var {
        Var::new("t")
    }

    #[test]
    fn terms() {
        let tr = ex5();
        let nu = at_time(t(), q(5, 2));
        let f_t = Term::access("f", Term::time(t()));
        assert_eq!(eval_term(&tr, &nu, &f_t), ExtReal::Finite(q(0, 1)));
        assert_eq!(eval_term(&tr, &nu, &Term::Const(q(7, 1))), ExtReal::Finite(q(7, 1)));
        let back = Term::access("f", Term::sub(Term::time(t()), Term::Const(q(7, 2))));
        assert_eq!(eval_term(&tr, &nu, &back), ExtReal::Undefined);
    }

    #[test]
    fn quantifier_free_is_exact() {
        let tr = ex5();
        let phi = parse("0 < f(t)").unwrap();
        assert_eq!(eval_bool(&tr, &at_time(t(), q(3, 1)), &phi, 2), Some(true));
        assert_eq!(eval_mu(&tr, &at_time(t(), q(3, 1)), &phi, 2), ExtReal::Finite(q(1, 1)));
        let neg = parse("!(0 < f(t))").unwrap();
        assert_eq!(eval_mu(&tr, &at_time(t(), q(3, 1)), &neg, 2), ExtReal::Finite(q(-1, 1)));
    }

    #[test]
    fn supremum_example() {
        let tr = ex5();
        let psi = parse("E c in [0,2]. 0 < f(t-c)").unwrap();
        // max{-3t+6, 2t-5} at 5/2 is 0; c = 0 is a grid point.
        assert_eq!(eval_mu(&tr, &at_time(t(), q(5, 2)), &psi, 101), ExtReal::Finite(q(0, 1)));
        assert_eq!(eval_mu(&tr, &at_time(t(), q(21, 10)), &psi, 101), ExtReal::Finite(q(-3, 10)));
        let late = parse("E c in [1,2]. 0 < f(t-c)").unwrap();
        assert_eq!(eval_bool(&tr, &at_time(t(), q(1, 2)), &late, 11), None);
        assert_eq!(eval_mu(&tr, &at_time(t(), q(1, 2)), &late, 11), ExtReal::Undefined);
    }

    #[test]
    fn trimming_finds_the_defined_boundary() {
        let tr = ex5();
        // At t = 1/2 only c ∈ [0, 1/2] is defined; the sup is at c = 1/2 (f(0) = 0).
        let psi = parse("E c in [0,2]. 0 < f(t-c)").unwrap();
        assert_eq!(eval_mu(&tr, &at_time(t(), q(1, 2)), &psi, 3), ExtReal::Finite(q(0, 1)));
    }

    #[test]
    fn stabilization_example_is_approached() {
        let tr = Trace::single(
            "f",
            &[
                (q(0, 1), q(1, 2)),
                (q(1, 1), q(1, 2)),
                (q(2, 1), q(3, 2)),
                (q(3, 1), q(1, 1)),
                (q(12, 1), q(1, 1)),
                (q(14, 1), q(3, 1)),
                (q(16, 1), q(1, 2)),
                (q(22, 1), q(3, 1)),
                (q(30, 1), q(1, 1)),
            ],
        )
        .unwrap();
        // Replace r ∈ ℝ by a bounded range that contains the optimum so the grid hits it.
        let psi = parse("E r in [2,3]. E c in [0,10]. A d in [0,8]. |f(t+c+d) - r| <= 1/2").unwrap();
        let v = eval_mu(&tr, &at_time(t(), q(12, 1)), &psi, 9);
        // Sampling can only under-approximate the supremum −1/8.
        assert_ne!(v.partial_cmp_defined(&ExtReal::Finite(q(-1, 8))), Some(Ordering::Greater));
        assert!(v.is_defined());
        let v = eval_mu(&tr, &at_time(t(), q(1, 1)), &parse("E r in [0,2]. E c in [0,10]. A d in [0,8]. |f(t+c+d) - r| <= 1/2").unwrap(), 11);
        assert_eq!(v, ExtReal::Finite(q(1, 2)));
    }

    #[test]
    fn disjunction_is_max() {
        let tr = ex5();
        let a = parse("0 < f(t)").unwrap();
        let b = parse("0 < 1 - f(t)").unwrap();
        let both = Formula::or(a.clone(), b.clone());
        for k in 0..=6 {
            let nu = at_time(t(), q(k, 2));
            assert_eq!(eval_mu(&tr, &nu, &both, 2), eval_mu(&tr, &nu, &a, 2).max(eval_mu(&tr, &nu, &b, 2)));
        }
    }
}
