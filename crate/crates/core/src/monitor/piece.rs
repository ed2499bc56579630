use std::fmt;

use crate::oracle::ExtReal;
use crate::polyhedra::{ge, le, lt, gt, eq, Canonical, LinExpr, Polyhedron, Var};
use crate::rational::Rational;

/// The robustness value carried by a piece.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ValueAnnotation {
    Affine(LinExpr),
    PlusInf,
    MinusInf,
}

impl ValueAnnotation {
    pub fn constant(c: Rational) -> Self {
        ValueAnnotation::Affine(LinExpr::constant(c))
    }

    pub fn negate(&self) -> Self {
        match self {
            ValueAnnotation::Affine(e) => ValueAnnotation::Affine(-e),
            ValueAnnotation::PlusInf => ValueAnnotation::MinusInf,
            ValueAnnotation::MinusInf => ValueAnnotation::PlusInf,
        }
    }

    pub fn affine(&self) -> Option<&LinExpr> {
        match self {
            ValueAnnotation::Affine(e) => Some(e),
            _ => None,
        }
    }

    pub fn eval_with(&self, lookup: impl FnMut(Var) -> Option<Rational>) -> Option<ExtReal> {
        Some(match self {
            ValueAnnotation::Affine(e) => ExtReal::Finite(e.eval_with(lookup)?),
            ValueAnnotation::PlusInf => ExtReal::PlusInf,
            ValueAnnotation::MinusInf => ExtReal::MinusInf,
        })
    }

    /// Where `self ≥ other` holds, as a single constraint.
    pub(super) fn at_least(&self, other: &ValueAnnotation) -> Canonical {
        use ValueAnnotation::*;
        match (self, other) {
            (Affine(a), Affine(b)) => ge(a, b),
            (PlusInf, _) | (_, MinusInf) => Canonical::True,
            (MinusInf, _) | (_, PlusInf) => Canonical::False,
        }
    }

    /// Where `self > other` holds, the exact complement of `other.at_least(self)`.
    pub(super) fn exceeds(&self, other: &ValueAnnotation) -> Canonical {
        use ValueAnnotation::*;
        match (self, other) {
            (Affine(a), Affine(b)) => gt(a, b),
            (PlusInf, PlusInf) | (MinusInf, MinusInf) => Canonical::False,
            (PlusInf, _) | (_, MinusInf) => Canonical::True,
            (MinusInf, _) | (_, PlusInf) => Canonical::False,
        }
    }
}

impl fmt::Display for ValueAnnotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueAnnotation::Affine(e) => write!(f, "{e}"),
            ValueAnnotation::PlusInf => f.write_str("+inf"),
            ValueAnnotation::MinusInf => f.write_str("-inf"),
        }
    }
}

/// A convex region together with the robustness value on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RobustnessPiece {
    pub guard: Polyhedron,
    pub value: ValueAnnotation,
}

impl RobustnessPiece {
    pub fn new(guard: Polyhedron, value: ValueAnnotation) -> Self {
        RobustnessPiece { guard, value }
    }

    /// Value at a point of the guard; `None` outside it.
    pub fn value_at(&self, lookup: impl Fn(Var) -> Option<Rational>) -> Option<ExtReal> {
        if self.guard.contains(&lookup)? {
            self.value.eval_with(&lookup)
        } else {
            None
        }
    }
}

impl fmt::Display for RobustnessPiece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ↦ {}", self.guard, self.value)
    }
}

/// A nonempty interval of the reference time with the value on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TimePiece {
    pub lo: Rational,
    pub lo_strict: bool,
    pub hi: Rational,
    pub hi_strict: bool,
    pub value: ValueAnnotation,
}

impl TimePiece {
    /// Read a one-dimensional guard over `t`. Guards of temporal formulas
    /// at the top level are always bounded intervals.
    pub fn from_piece(p: &RobustnessPiece, t: Var) -> TimePiece {
        let (lo, hi) = p.guard.var_bounds(t);
        let (lo, lo_strict) = lo.expect("time guards are bounded below");
        let (hi, hi_strict) = hi.expect("time guards are bounded above");
        TimePiece {
            lo,
            lo_strict,
            hi,
            hi_strict,
            value: p.value.clone(),
        }
    }

    pub fn to_piece(&self, t: Var) -> RobustnessPiece {
        let tv = LinExpr::var(t);
        let lo = LinExpr::constant(self.lo.clone());
        let hi = LinExpr::constant(self.hi.clone());
        let guard = if self.is_point() {
            Polyhedron::full([t]).and(eq(&tv, &lo))
        } else {
            Polyhedron::full([t]).and_all([
                if self.lo_strict { gt(&tv, &lo) } else { ge(&tv, &lo) },
                if self.hi_strict { lt(&tv, &hi) } else { le(&tv, &hi) },
            ])
        };
        RobustnessPiece::new(guard, self.value.clone())
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = if self.lo_strict { *x > self.lo } else { *x >= self.lo };
        let below = if self.hi_strict { *x < self.hi } else { *x <= self.hi };
        above && below
    }

    /// Value at `x`, assuming the annotation mentions only `t`.
    pub fn value_at(&self, t: Var, x: &Rational) -> ExtReal {
        self.value
            .eval_with(|v| (v == t).then(|| x.clone()))
            .expect("time annotations mention only the time variable")
    }

    /// The annotation as `slope·t + intercept`, if finite.
    pub fn slope_intercept(&self, t: Var) -> Option<(Rational, Rational)> {
        let e = self.value.affine()?;
        Some((e.coeff(t), e.constant_term().clone()))
    }
}

/// Sort, then turn a disjoint family of time pieces into its canonical
/// form: wherever two neighbours meet continuously, the shared endpoint
/// belongs to the right-hand piece; touching pieces with equal annotations
/// are merged, and isolated points agreeing with a neighbour are absorbed.
pub(super) fn canonicalize(mut pieces: Vec<TimePiece>, t: Var) -> Vec<TimePiece> {
    pieces.sort_by(|a, b| a.lo.cmp(&b.lo).then(a.lo_strict.cmp(&b.lo_strict)));
    let mut out: Vec<TimePiece> = Vec::with_capacity(pieces.len());
    for p in pieces {
        let Some(last) = out.last_mut() else {
            out.push(p);
            continue;
        };
        let touching = last.hi == p.lo && last.hi_strict != p.lo_strict;
        if !touching {
            out.push(p);
            continue;
        }
        let at = p.lo.clone();
        if last.value == p.value {
            last.hi = p.hi;
            last.hi_strict = p.hi_strict;
            continue;
        }
        let continuous = last.value_at(t, &at) == p.value_at(t, &at);
        if !continuous {
            out.push(p);
            continue;
        }
        if p.is_point() {
            // Absorbed into the left piece; a later right neighbour may
            // reclaim it below.
            last.hi_strict = false;
            continue;
        }
        if last.is_point() {
            let mut p = p;
            p.lo_strict = false;
            *out.last_mut().unwrap() = p;
            continue;
        }
        last.hi_strict = true;
        let mut p = p;
        p.lo_strict = false;
        out.push(p);
    }
    out
}

/// One output record of the online monitor: the robustness of the
/// reference time over `[t_lo, t_hi)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RobustnessSegment {
    pub index: u64,
    pub t_lo: Rational,
    pub t_hi: Rational,
    pub pieces: Vec<TimePiece>,
}

impl RobustnessSegment {
    pub fn value_at(&self, t: Var, x: &Rational) -> ExtReal {
        self.pieces
            .iter()
            .find(|p| p.contains(x))
            .map_or(ExtReal::Undefined, |p| p.value_at(t, x))
    }

    /// Whether pieces are sorted and pairwise disjoint.
    pub fn is_functional(&self) -> bool {
        self.pieces.windows(2).all(|w| {
            let (a, b) = (&w[0], &w[1]);
            a.hi < b.lo || (a.hi == b.lo && (a.hi_strict || b.lo_strict))
        })
    }
}
