use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{fm, simplex, Canonical, Constraint, LinExpr, Relation, Var};
use crate::rational::Rational;

/// A one-sided bound on a variable: value and strictness.
pub type Bound = (Rational, bool);

/// Constraint count above which projections run exact-LP redundancy removal.
pub const DEFAULT_REDUNDANCY_THRESHOLD: usize = 16;

/// A convex polyhedron given by a finite conjunction of constraints.
///
/// Constraints are stored in a normal form: constraints whose linear parts
/// are parallel are merged into one interval along that direction (so at
/// most a lower bound, an upper bound, or an equality survives per
/// direction), and the list is sorted. A polyhedron detected to be
/// infeasible during normalization is stored as the single constraint
/// `0 > 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polyhedron {
    dims: BTreeSet<Var>,
    constraints: Vec<Constraint>,
    infeasible: bool,
}

#[derive(Default)]
struct AxisBounds {
    lo: Option<(Rational, bool)>,
    hi: Option<(Rational, bool)>,
}

impl AxisBounds {
    fn tighten_lo(&mut self, v: Rational, strict: bool) {
        match &self.lo {
            Some((cur, cs)) if *cur > v || (*cur == v && (*cs || !strict)) => {}
            _ => self.lo = Some((v, strict)),
        }
    }

    fn tighten_hi(&mut self, v: Rational, strict: bool) {
        match &self.hi {
            Some((cur, cs)) if *cur < v || (*cur == v && (*cs || !strict)) => {}
            _ => self.hi = Some((v, strict)),
        }
    }
}

/// Rebuild a constraint list in normal form; `None` if a contradiction appears.
pub(super) fn normalize(constraints: impl IntoIterator<Item = Constraint>) -> Option<Vec<Constraint>> {
    // Key: linear part with positive leading coefficient. Value bounds on key·x.
    let mut axes: BTreeMap<LinExpr, AxisBounds> = BTreeMap::new();
    for c in constraints {
        let lin = c.expr().linear_part();
        let k = c.expr().constant_term().clone();
        let leading_positive = lin.terms()[0].1.is_positive();
        let (key, flipped) = if leading_positive { (lin, false) } else { (-lin, true) };
        let axis = axes.entry(key).or_default();
        match (c.relation(), flipped) {
            // key·x + k ⋈ 0  =>  key·x ⋈ -k
            (Relation::Eq, _) => {
                axis.tighten_lo(-&k, false);
                axis.tighten_hi(-k, false);
            }
            (rel, false) => axis.tighten_lo(-k, rel == Relation::Gt),
            // -key·x + k ⋈ 0  =>  key·x ⋈' k
            (rel, true) => axis.tighten_hi(k, rel == Relation::Gt),
        }
    }
    let mut out = Vec::with_capacity(axes.len() + 1);
    for (key, b) in axes {
        match (b.lo, b.hi) {
            (Some((l, ls)), Some((h, hs))) => {
                if l > h || (l == h && (ls || hs)) {
                    return None;
                }
                if l == h {
                    let mut e = key;
                    e.add_constant(&-l);
                    out.push(Constraint::from_canonical(e, Relation::Eq));
                } else {
                    out.push(lower_bound(&key, l, ls));
                    out.push(upper_bound(&key, h, hs));
                }
            }
            (Some((l, ls)), None) => out.push(lower_bound(&key, l, ls)),
            (None, Some((h, hs))) => out.push(upper_bound(&key, h, hs)),
            (None, None) => {}
        }
    }
    Some(out)
}

fn lower_bound(key: &LinExpr, l: Rational, strict: bool) -> Constraint {
    let mut e = key.clone();
    e.add_constant(&-l);
    Constraint::from_canonical(e, if strict { Relation::Gt } else { Relation::Ge })
}

fn upper_bound(key: &LinExpr, h: Rational, strict: bool) -> Constraint {
    let mut e = -key;
    e.add_constant(&h);
    Constraint::from_canonical(e, if strict { Relation::Gt } else { Relation::Ge })
}

impl Polyhedron {
    /// The whole space over `dims`.
    pub fn full(dims: impl IntoIterator<Item = Var>) -> Self {
        Polyhedron {
            dims: dims.into_iter().collect(),
            constraints: Vec::new(),
            infeasible: false,
        }
    }

    /// The empty polyhedron `{0 > 0}` over `dims`.
    pub fn empty(dims: impl IntoIterator<Item = Var>) -> Self {
        Polyhedron {
            dims: dims.into_iter().collect(),
            constraints: Vec::new(),
            infeasible: true,
        }
    }

    /// Build from canonical constraints; dims are extended to cover them.
    pub fn new(
        dims: impl IntoIterator<Item = Var>,
        constraints: impl IntoIterator<Item = Canonical>,
    ) -> Self {
        let mut dims: BTreeSet<Var> = dims.into_iter().collect();
        let mut list = Vec::new();
        let mut infeasible = false;
        for c in constraints {
            match c {
                Canonical::True => {}
                Canonical::False => infeasible = true,
                Canonical::Constraint(c) => {
                    dims.extend(c.expr().vars());
                    list.push(c);
                }
            }
        }
        Self::from_parts(dims, list, infeasible)
    }

    fn from_parts(dims: BTreeSet<Var>, constraints: Vec<Constraint>, infeasible: bool) -> Self {
        if infeasible {
            return Polyhedron {
                dims,
                constraints: Vec::new(),
                infeasible: true,
            };
        }
        match normalize(constraints) {
            Some(constraints) => Polyhedron {
                dims,
                constraints,
                infeasible: false,
            },
            None => Polyhedron {
                dims,
                constraints: Vec::new(),
                infeasible: true,
            },
        }
    }

    pub fn dims(&self) -> &BTreeSet<Var> {
        &self.dims
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// True when the constraint set is syntactically contradictory.
    pub fn is_trivially_empty(&self) -> bool {
        self.infeasible
    }

    pub fn is_universe(&self) -> bool {
        !self.infeasible && self.constraints.is_empty()
    }

    pub fn with_dims(mut self, dims: impl IntoIterator<Item = Var>) -> Self {
        self.dims.extend(dims);
        self
    }

    /// Conjoin one more constraint.
    pub fn and(&self, c: Canonical) -> Polyhedron {
        match c {
            Canonical::True => self.clone(),
            Canonical::False => Polyhedron::empty(self.dims.iter().copied()),
            Canonical::Constraint(c) => {
                let mut dims = self.dims.clone();
                dims.extend(c.expr().vars());
                let mut list = self.constraints.clone();
                list.push(c);
                Self::from_parts(dims, list, self.infeasible)
            }
        }
    }

    pub fn and_all(&self, cs: impl IntoIterator<Item = Canonical>) -> Polyhedron {
        let mut dims = self.dims.clone();
        let mut list = self.constraints.clone();
        let mut infeasible = self.infeasible;
        for c in cs {
            match c {
                Canonical::True => {}
                Canonical::False => infeasible = true,
                Canonical::Constraint(c) => {
                    dims.extend(c.expr().vars());
                    list.push(c);
                }
            }
        }
        Self::from_parts(dims, list, infeasible)
    }

    /// Set intersection; dims are united.
    pub fn intersect(&self, other: &Polyhedron) -> Polyhedron {
        let mut dims = self.dims.clone();
        dims.extend(other.dims.iter().copied());
        let list = self
            .constraints
            .iter()
            .chain(other.constraints.iter())
            .cloned()
            .collect();
        Self::from_parts(dims, list, self.infeasible || other.infeasible)
    }

    /// Exact emptiness, honoring strict inequalities.
    pub fn is_empty(&self) -> bool {
        self.infeasible || !simplex::is_feasible(&self.constraints)
    }

    /// Membership of a rational point; variables missing from `point` are
    /// treated as unconstrained only if no constraint mentions them.
    pub fn contains(&self, mut lookup: impl FnMut(Var) -> Option<Rational>) -> Option<bool> {
        if self.infeasible {
            return Some(false);
        }
        for c in &self.constraints {
            if !c.holds_at(&mut lookup)? {
                return Some(false);
            }
        }
        Some(true)
    }

    /// Complement within the full space over `dims`, as pairwise disjoint
    /// pieces: the k-th piece satisfies the first k-1 constraints and
    /// violates the k-th.
    pub fn negate(&self) -> Vec<Polyhedron> {
        if self.infeasible {
            return vec![Polyhedron::full(self.dims.iter().copied())];
        }
        let mut out = Vec::new();
        let mut prefix: Vec<Constraint> = Vec::new();
        for c in &self.constraints {
            for comp in c.complement() {
                let mut list = prefix.clone();
                list.push(comp);
                let piece = Self::from_parts(self.dims.clone(), list, false);
                if !piece.is_empty() {
                    out.push(piece);
                }
            }
            prefix.push(c.clone());
        }
        out
    }

    /// `self \ other` as pairwise disjoint pieces, skipping constraints of
    /// `other` already implied by `self`.
    pub fn subtract(&self, other: &Polyhedron) -> Vec<Polyhedron> {
        if self.is_empty() {
            return Vec::new();
        }
        if other.infeasible {
            return vec![self.clone()];
        }
        let mut out = Vec::new();
        let mut current = self.clone();
        for c in &other.constraints {
            let comps = c.complement();
            let mut implied = true;
            for comp in comps {
                let piece = current.and(Canonical::Constraint(comp));
                if !piece.is_empty() {
                    implied = false;
                    out.push(piece);
                }
            }
            if implied {
                continue;
            }
            current = current.and(Canonical::Constraint(c.clone()));
            if current.is_empty() {
                break;
            }
        }
        out
    }

    /// Replace `var` by `e` in every constraint.
    pub fn substitute(&self, var: Var, e: &LinExpr) -> Polyhedron {
        let mut dims = self.dims.clone();
        dims.remove(&var);
        dims.extend(e.vars());
        if self.infeasible {
            return Polyhedron::empty(dims);
        }
        let mut list = Vec::with_capacity(self.constraints.len());
        for c in &self.constraints {
            match c.substitute(var, e) {
                Canonical::True => {}
                Canonical::False => return Polyhedron::empty(dims),
                Canonical::Constraint(c) => list.push(c),
            }
        }
        Self::from_parts(dims, list, false)
    }

    /// Exact projection: the result contains a point over the remaining
    /// dims iff some extension over `vars` lies in `self`.
    pub fn eliminate(&self, vars: &[Var]) -> Polyhedron {
        self.eliminate_with_threshold(vars, DEFAULT_REDUNDANCY_THRESHOLD)
    }

    pub fn eliminate_with_threshold(&self, vars: &[Var], threshold: usize) -> Polyhedron {
        let mut dims = self.dims.clone();
        for v in vars {
            dims.remove(v);
        }
        if self.infeasible {
            return Polyhedron::empty(dims);
        }
        match fm::project(self.constraints.clone(), vars, threshold) {
            Some(list) => Self::from_parts(dims, list, false),
            None => Polyhedron::empty(dims),
        }
    }

    /// Drop constraints implied by the others (exact LP test per constraint).
    pub fn remove_redundant(&self) -> Polyhedron {
        if self.infeasible {
            return self.clone();
        }
        match fm::remove_redundant(self.constraints.clone()) {
            Some(constraints) => Polyhedron {
                dims: self.dims.clone(),
                constraints,
                infeasible: false,
            },
            None => Polyhedron::empty(self.dims.iter().copied()),
        }
    }

    /// Bounds of a single variable read off constraints mentioning only it.
    /// Exact for one-dimensional polyhedra in normal form.
    pub fn var_bounds(&self, v: Var) -> (Option<Bound>, Option<Bound>) {
        let mut lo: Option<(Rational, bool)> = None;
        let mut hi: Option<(Rational, bool)> = None;
        for c in &self.constraints {
            let terms = c.expr().terms();
            if terms.len() != 1 || terms[0].0 != v {
                continue;
            }
            let a = &terms[0].1;
            let bound = -(c.expr().constant_term() / a);
            let strict = c.is_strict();
            match c.relation() {
                Relation::Eq => {
                    lo = Some((bound.clone(), false));
                    hi = Some((bound, false));
                }
                _ if a.is_positive() => lo = Some((bound, strict)),
                _ => hi = Some((bound, strict)),
            }
        }
        (lo, hi)
    }
}

impl fmt::Display for Polyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.infeasible {
            return f.write_str("{0 > 0}");
        }
        f.write_str("{")?;
        for (i, c) in self.constraints.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Polyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
