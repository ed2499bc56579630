use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::Var;
use crate::rational::Rational;

/// Affine expression `Σ coeff·var + constant` with exact coefficients.
///
/// Terms are kept sorted by variable and never hold a zero coefficient.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LinExpr {
    terms: Vec<(Var, Rational)>,
    constant: Rational,
}

impl LinExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        LinExpr {
            terms: Vec::new(),
            constant: c,
        }
    }

    pub fn var(v: Var) -> Self {
        Self::term(v, Rational::one())
    }

    pub fn term(v: Var, coeff: Rational) -> Self {
        let terms = if coeff.is_zero() {
            Vec::new()
        } else {
            vec![(v, coeff)]
        };
        LinExpr {
            terms,
            constant: Rational::zero(),
        }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Var, Rational)>, constant: Rational) -> Self {
        let mut e = LinExpr::constant(constant);
        for (v, c) in terms {
            e.add_term(v, &c);
        }
        e
    }

    pub fn terms(&self) -> &[(Var, Rational)] {
        &self.terms
    }

    pub fn constant_term(&self) -> &Rational {
        &self.constant
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, v: Var) -> Rational {
        match self.terms.binary_search_by(|(w, _)| w.cmp(&v)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn mentions(&self, v: Var) -> bool {
        self.terms.binary_search_by(|(w, _)| w.cmp(&v)).is_ok()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.terms.iter().map(|(v, _)| *v)
    }

    pub fn add_term(&mut self, v: Var, c: &Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.binary_search_by(|(w, _)| w.cmp(&v)) {
            Ok(i) => {
                let s = &self.terms[i].1 + c;
                if s.is_zero() {
                    self.terms.remove(i);
                } else {
                    self.terms[i].1 = s;
                }
            }
            Err(i) => self.terms.insert(i, (v, c.clone())),
        }
    }

    pub fn add_constant(&mut self, c: &Rational) {
        self.constant += c;
    }

    /// The expression with its constant dropped.
    pub fn linear_part(&self) -> LinExpr {
        LinExpr {
            terms: self.terms.clone(),
            constant: Rational::zero(),
        }
    }

    /// `self` with `v` removed; i.e. `self - coeff(v)·v`.
    pub fn without(&self, v: Var) -> LinExpr {
        let mut e = self.clone();
        if let Ok(i) = e.terms.binary_search_by(|(w, _)| w.cmp(&v)) {
            e.terms.remove(i);
        }
        e
    }

    pub fn scale(&self, k: &Rational) -> LinExpr {
        if k.is_zero() {
            return LinExpr::zero();
        }
        LinExpr {
            terms: self.terms.iter().map(|(v, c)| (*v, c * k)).collect(),
            constant: &self.constant * k,
        }
    }

    fn combine(&self, other: &LinExpr, sign: &Rational) -> LinExpr {
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let take_left = j >= other.terms.len()
                || (i < self.terms.len() && self.terms[i].0 < other.terms[j].0);
            let take_right = i >= self.terms.len()
                || (j < other.terms.len() && other.terms[j].0 < self.terms[i].0);
            if take_left {
                terms.push(self.terms[i].clone());
                i += 1;
            } else if take_right {
                terms.push((other.terms[j].0, &other.terms[j].1 * sign));
                j += 1;
            } else {
                let c = &self.terms[i].1 + &(&other.terms[j].1 * sign);
                if !c.is_zero() {
                    terms.push((self.terms[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        LinExpr {
            terms,
            constant: &self.constant + &(&other.constant * sign),
        }
    }

    /// Replace `v` by `e`.
    pub fn substitute(&self, v: Var, e: &LinExpr) -> LinExpr {
        let c = self.coeff(v);
        if c.is_zero() {
            return self.clone();
        }
        self.without(v).combine(&e.scale(&c), &Rational::one())
    }

    /// Exact evaluation; `None` if some variable is unassigned.
    pub fn eval(&self, point: &HashMap<Var, Rational>) -> Option<Rational> {
        let mut acc = self.constant.clone();
        for (v, c) in &self.terms {
            acc += &(c * point.get(v)?);
        }
        Some(acc)
    }

    /// Evaluation with a lookup closure.
    pub fn eval_with(&self, mut lookup: impl FnMut(Var) -> Option<Rational>) -> Option<Rational> {
        let mut acc = self.constant.clone();
        for (v, c) in &self.terms {
            acc += &(c * &lookup(*v)?);
        }
        Some(acc)
    }
}

impl Add<&LinExpr> for &LinExpr {
    type Output = LinExpr;
    fn add(self, rhs: &LinExpr) -> LinExpr {
        self.combine(rhs, &Rational::one())
    }
}

impl Sub<&LinExpr> for &LinExpr {
    type Output = LinExpr;
    fn sub(self, rhs: &LinExpr) -> LinExpr {
        self.combine(rhs, &-Rational::one())
    }
}

impl Add for LinExpr {
    type Output = LinExpr;
    fn add(self, rhs: LinExpr) -> LinExpr {
        &self + &rhs
    }
}

impl Sub for LinExpr {
    type Output = LinExpr;
    fn sub(self, rhs: LinExpr) -> LinExpr {
        &self - &rhs
    }
}

impl Neg for &LinExpr {
    type Output = LinExpr;
    fn neg(self) -> LinExpr {
        LinExpr {
            terms: self.terms.iter().map(|(v, c)| (*v, -c)).collect(),
            constant: -&self.constant,
        }
    }
}

impl Neg for LinExpr {
    type Output = LinExpr;
    fn neg(self) -> LinExpr {
        -&self
    }
}

impl Mul<&Rational> for &LinExpr {
    type Output = LinExpr;
    fn mul(self, k: &Rational) -> LinExpr {
        self.scale(k)
    }
}

impl From<Rational> for LinExpr {
    fn from(c: Rational) -> Self {
        LinExpr::constant(c)
    }
}

impl From<Var> for LinExpr {
    fn from(v: Var) -> Self {
        LinExpr::var(v)
    }
}

impl fmt::Display for LinExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, c) in &self.terms {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if mag != Rational::one() {
                write!(f, "{mag}")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        if first {
            write!(f, "{}", self.constant)
        } else if self.constant.is_zero() {
            Ok(())
        } else if self.constant.is_negative() {
            write!(f, " - {}", self.constant.abs())
        } else {
            write!(f, " + {}", self.constant)
        }
    }
}

impl fmt::Debug for LinExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
