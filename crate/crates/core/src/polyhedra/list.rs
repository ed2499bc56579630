use std::cmp::Ordering;

use super::{Polyhedron, Var};
use crate::rational::Rational;

/// An ordered finite union of polyhedra.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PolyList {
    pieces: Vec<Polyhedron>,
}

impl PolyList {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn pieces(&self) -> &[Polyhedron] {
        &self.pieces
    }

    pub fn into_pieces(self) -> Vec<Polyhedron> {
        self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Append a piece unless it is empty.
    pub fn push(&mut self, p: Polyhedron) {
        if !p.is_empty() {
            self.pieces.push(p);
        }
    }

    pub fn union(mut self, other: PolyList) -> PolyList {
        self.pieces.extend(other.pieces);
        self
    }

    pub fn intersect_poly(&self, p: &Polyhedron) -> PolyList {
        self.pieces.iter().map(|q| q.intersect(p)).collect()
    }

    /// Pairwise intersection of two lists.
    pub fn intersect(&self, other: &PolyList) -> PolyList {
        let mut out = PolyList::new();
        for a in &self.pieces {
            for b in &other.pieces {
                out.push(a.intersect(b));
            }
        }
        out
    }

    pub fn eliminate(&self, vars: &[Var]) -> PolyList {
        self.pieces.iter().map(|p| p.eliminate(vars)).collect()
    }

    /// Point membership in the union.
    pub fn contains(&self, lookup: impl Fn(Var) -> Option<Rational>) -> Option<bool> {
        for p in &self.pieces {
            if p.contains(&lookup)? {
                return Some(true);
            }
        }
        Some(false)
    }

    /// Sort by the supremum of `t` over each piece (unbounded last).
    pub fn sort_by_upper_bound(&mut self, t: Var) {
        let mut keyed: Vec<(Option<Rational>, Polyhedron)> = self
            .pieces
            .drain(..)
            .map(|p| {
                let others: Vec<Var> = p.dims().iter().copied().filter(|&v| v != t).collect();
                let hi = p.eliminate(&others).var_bounds(t).1.map(|(h, _)| h);
                (hi, p)
            })
            .collect();
        keyed.sort_by(|(a, _), (b, _)| match (a, b) {
            (Some(a), Some(b)) => a.cmp(b),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        });
        self.pieces = keyed.into_iter().map(|(_, p)| p).collect();
    }
}

impl FromIterator<Polyhedron> for PolyList {
    fn from_iter<I: IntoIterator<Item = Polyhedron>>(iter: I) -> Self {
        let mut out = PolyList::new();
        for p in iter {
            out.push(p);
        }
        out
    }
}

impl From<Vec<Polyhedron>> for PolyList {
    fn from(v: Vec<Polyhedron>) -> Self {
        v.into_iter().collect()
    }
}
