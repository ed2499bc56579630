use std::fmt;

use crate::rational::Rational;

/// An interval with rational or infinite endpoints.
///
/// `None` endpoints are infinite and always treated as open.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Option<Rational>,
    pub hi: Option<Rational>,
    pub lo_strict: bool,
    pub hi_strict: bool,
}

impl Interval {
    /// Builds an interval, rejecting empty or degenerate-open ones.
    pub fn new(
        lo: Option<Rational>,
        lo_strict: bool,
        hi: Option<Rational>,
        hi_strict: bool,
    ) -> Result<Interval, String> {
        let lo_strict = lo_strict || lo.is_none();
        let hi_strict = hi_strict || hi.is_none();
        if let (Some(a), Some(b)) = (&lo, &hi) {
            if a > b {
                return Err(format!("interval lower bound {a} exceeds upper bound {b}"));
            }
            if a == b && (lo_strict || hi_strict) {
                return Err(format!("interval at {a} with an open endpoint is empty"));
            }
        }
        Ok(Interval {
            lo,
            hi,
            lo_strict,
            hi_strict,
        })
    }

    pub fn closed(lo: Rational, hi: Rational) -> Interval {
        Interval::new(Some(lo), false, Some(hi), false).expect("closed interval with lo <= hi")
    }

    pub fn reals() -> Interval {
        Interval::new(None, true, None, true).unwrap()
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_some() && self.hi.is_some()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = match &self.lo {
            None => true,
            Some(l) if self.lo_strict => x > l,
            Some(l) => x >= l,
        };
        let below = match &self.hi {
            None => true,
            Some(h) if self.hi_strict => x < h,
            Some(h) => x <= h,
        };
        above && below
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.lo_strict { '(' } else { '[' };
        let close = if self.hi_strict { ')' } else { ']' };
        match &self.lo {
            Some(l) => write!(f, "{open}{l}, ")?,
            None => write!(f, "{open}-inf, ")?,
        }
        match &self.hi {
            Some(h) => write!(f, "{h}{close}"),
            None => write!(f, "inf{close}"),
        }
    }
}
