//! Exact feasibility of a conjunction of linear constraints.
//!
//! A bounded-variable simplex in the style of SMT arithmetic solvers: every
//! constraint row gets a slack variable carrying the bound, original
//! variables are free, and strict bounds are handled symbolically by
//! computing over `c + kδ` for an infinitesimal `δ > 0`. Bland's rule
//! (smallest index first) guarantees termination.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::ops::{Add, Mul, Sub};

use super::{Constraint, Relation, Var};
use crate::rational::Rational;

/// `c + kδ`
#[derive(Clone, Debug, PartialEq, Eq)]
struct DeltaRational {
    c: Rational,
    k: Rational,
}

impl DeltaRational {
    fn zero() -> Self {
        DeltaRational {
            c: Rational::zero(),
            k: Rational::zero(),
        }
    }

    fn new(c: Rational, k: Rational) -> Self {
        DeltaRational { c, k }
    }
}

impl Ord for DeltaRational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.c.cmp(&other.c).then_with(|| self.k.cmp(&other.k))
    }
}

impl PartialOrd for DeltaRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add<&DeltaRational> for &DeltaRational {
    type Output = DeltaRational;
    fn add(self, o: &DeltaRational) -> DeltaRational {
        DeltaRational::new(&self.c + &o.c, &self.k + &o.k)
    }
}

impl Sub<&DeltaRational> for &DeltaRational {
    type Output = DeltaRational;
    fn sub(self, o: &DeltaRational) -> DeltaRational {
        DeltaRational::new(&self.c - &o.c, &self.k - &o.k)
    }
}

impl Mul<&Rational> for &DeltaRational {
    type Output = DeltaRational;
    fn mul(self, r: &Rational) -> DeltaRational {
        DeltaRational::new(&self.c * r, &self.k * r)
    }
}

struct Tableau {
    /// rows[r][c]: coefficient of the c-th nonbasic variable in basic row r.
    rows: Vec<Vec<Rational>>,
    basic: Vec<usize>,
    nonbasic: Vec<usize>,
    lower: Vec<Option<DeltaRational>>,
    upper: Vec<Option<DeltaRational>>,
    value: Vec<DeltaRational>,
}

impl Tableau {
    fn build(constraints: &[Constraint]) -> Tableau {
        let mut index: HashMap<Var, usize> = HashMap::new();
        let mut order = Vec::new();
        for c in constraints {
            for v in c.expr().vars() {
                index.entry(v).or_insert_with(|| {
                    order.push(v);
                    order.len() - 1
                });
            }
        }
        let n = order.len();
        let m = constraints.len();
        let mut rows = Vec::with_capacity(m);
        let mut lower = vec![None; n + m];
        let mut upper = vec![None; n + m];
        for (i, c) in constraints.iter().enumerate() {
            let mut row = vec![Rational::zero(); n];
            for (v, a) in c.expr().terms() {
                row[index[v]] = a.clone();
            }
            rows.push(row);
            let bound = -c.expr().constant_term();
            let slack = n + i;
            match c.relation() {
                Relation::Ge => lower[slack] = Some(DeltaRational::new(bound, Rational::zero())),
                Relation::Gt => lower[slack] = Some(DeltaRational::new(bound, Rational::one())),
                Relation::Eq => {
                    lower[slack] = Some(DeltaRational::new(bound.clone(), Rational::zero()));
                    upper[slack] = Some(DeltaRational::new(bound, Rational::zero()));
                }
            }
        }
        Tableau {
            rows,
            basic: (n..n + m).collect(),
            nonbasic: (0..n).collect(),
            lower,
            upper,
            value: vec![DeltaRational::zero(); n + m],
        }
    }

    fn violates_lower(&self, var: usize) -> bool {
        matches!(&self.lower[var], Some(l) if self.value[var] < *l)
    }

    fn violates_upper(&self, var: usize) -> bool {
        matches!(&self.upper[var], Some(u) if self.value[var] > *u)
    }

    fn can_increase(&self, var: usize) -> bool {
        !matches!(&self.upper[var], Some(u) if self.value[var] >= *u)
    }

    fn can_decrease(&self, var: usize) -> bool {
        !matches!(&self.lower[var], Some(l) if self.value[var] <= *l)
    }

    fn pivot_and_update(&mut self, row: usize, col: usize, target: DeltaRational) {
        let b = self.basic[row];
        let j = self.nonbasic[col];
        let a = self.rows[row][col].clone();
        let theta = &(&target - &self.value[b]) * &a.recip();
        self.value[b] = target;
        self.value[j] = &self.value[j] + &theta;
        for (r, &k) in self.basic.iter().enumerate() {
            if r != row && !self.rows[r][col].is_zero() {
                self.value[k] = &self.value[k] + &(&theta * &self.rows[r][col]);
            }
        }
        self.pivot(row, col);
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let a = self.rows[row][col].clone();
        let inv = a.recip();
        let mut pivot_row = std::mem::take(&mut self.rows[row]);
        for (k, coef) in pivot_row.iter_mut().enumerate() {
            if k == col {
                *coef = inv.clone();
            } else if !coef.is_zero() {
                *coef = -(&*coef * &inv);
            }
        }
        for (r, other) in self.rows.iter_mut().enumerate() {
            if r == row {
                continue;
            }
            let f = other[col].clone();
            if f.is_zero() {
                continue;
            }
            for (k, p) in pivot_row.iter().enumerate() {
                if k == col {
                    other[k] = &f * p;
                } else if !p.is_zero() {
                    other[k] = &other[k] + &(&f * p);
                }
            }
        }
        self.rows[row] = pivot_row;
        std::mem::swap(&mut self.basic[row], &mut self.nonbasic[col]);
    }

    fn check(&mut self) -> bool {
        loop {
            let candidate = self
                .basic
                .iter()
                .enumerate()
                .filter(|(_, &b)| self.violates_lower(b) || self.violates_upper(b))
                .min_by_key(|(_, &b)| b)
                .map(|(r, &b)| (r, b));
            let Some((row, b)) = candidate else {
                return true;
            };
            let raise = self.violates_lower(b);
            let entering = self
                .nonbasic
                .iter()
                .enumerate()
                .filter(|(c, &j)| {
                    let a = &self.rows[row][*c];
                    if a.is_zero() {
                        return false;
                    }
                    if raise == a.is_positive() {
                        self.can_increase(j)
                    } else {
                        self.can_decrease(j)
                    }
                })
                .min_by_key(|(_, &j)| j)
                .map(|(c, _)| c);
            let Some(col) = entering else {
                return false;
            };
            let target = if raise {
                self.lower[b].clone().unwrap()
            } else {
                self.upper[b].clone().unwrap()
            };
            self.pivot_and_update(row, col, target);
        }
    }
}

/// Whether the conjunction has a rational solution.
pub fn is_feasible(constraints: &[Constraint]) -> bool {
    if constraints.is_empty() {
        return true;
    }
    Tableau::build(constraints).check()
}
