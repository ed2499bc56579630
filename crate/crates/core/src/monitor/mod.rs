//! Exact online robustness monitoring.
//!
//! Robustness is computed symbolically: each subformula is turned into a
//! list of disjoint convex pieces over the free variables, each carrying an
//! affine (or infinite) value. Quantifiers are eliminated by parametric
//! linear maximization followed by an upper-envelope pass. The online
//! [`Monitor`] consumes uniformly spaced samples and emits one
//! [`RobustnessSegment`] per sampling period, garbage-collecting signal
//! pieces that fall out of the formula's backward horizon.

mod engine;
mod piece;
mod plp;

pub use engine::{time_domain, Engine, Mutation};
pub use piece::{RobustnessPiece, RobustnessSegment, TimePiece, ValueAnnotation};
pub use plp::{closure, eliminate_by_sup, isolate_bounds, plp_maximize, upper_envelope};

use std::collections::BTreeMap;

use crate::logic::{check_temporal, horizons, normalize, pastify, Formula, Kind, TemporalError};
use crate::oracle::ExtReal;
use crate::polyhedra::Var;
use crate::rational::Rational;
use crate::signals::{SamplePoint, SignalError, SignalStore, Trace};

#[derive(Debug, thiserror::Error)]
pub enum MonitorError {
    #[error(transparent)]
    Temporal(#[from] TemporalError),
    #[error("free value variable `{0}`; only the time variable may be free")]
    FreeValueVariable(Var),
    #[error("unknown signal `{0}`")]
    UnknownSignal(String),
    #[error(transparent)]
    Signal(#[from] SignalError),
    #[error("sample at time {found}, expected {expected}")]
    Timing { expected: Rational, found: Rational },
    #[error("sampling period must be positive, got {0}")]
    Period(Rational),
}

/// A formula ready for symbolic evaluation.
#[derive(Clone, Debug)]
pub struct Prepared {
    /// Normalized, and pastified when the original reads the future.
    pub formula: Formula,
    pub time: Var,
    /// Pastification shift: output at `t` is the original robustness at `t − shift`.
    pub shift: Rational,
    /// Backward horizon of `formula`.
    pub horizon: Rational,
}

fn free_time_var(phi: &Formula) -> Result<Var, MonitorError> {
    let t = check_temporal(phi)?;
    if let Some((v, _)) = phi.free_vars().into_iter().find(|(_, k)| *k == Kind::Value) {
        return Err(MonitorError::FreeValueVariable(v));
    }
    Ok(t)
}

/// Check a temporal bounded-response formula and pastify it by its
/// forward horizon.
pub fn prepare(phi: &Formula) -> Result<Prepared, MonitorError> {
    let time = free_time_var(phi)?;
    let h = horizons(phi)?;
    let past = pastify(phi, &h.forward)?;
    let horizon = horizons(&past)?.backward;
    Ok(Prepared {
        formula: normalize(&past),
        time,
        shift: h.forward,
        horizon,
    })
}

/// Online monitor over uniformly sampled signals.
pub struct Monitor {
    prepared: Prepared,
    period: Rational,
    store: SignalStore,
    start: Option<Rational>,
    last: Option<Rational>,
    index: u64,
    mutation: Option<Mutation>,
}

impl Monitor {
    pub fn new(phi: &Formula, period: Rational) -> Result<Monitor, MonitorError> {
        if !period.is_positive() {
            return Err(MonitorError::Period(period));
        }
        let prepared = prepare(phi)?;
        let store = SignalStore::new(prepared.formula.signals());
        Ok(Monitor {
            prepared,
            period,
            store,
            start: None,
            last: None,
            index: 0,
            mutation: None,
        })
    }

    pub fn with_mutation(mut self, m: Option<Mutation>) -> Self {
        self.mutation = m;
        self
    }

    pub fn prepared(&self) -> &Prepared {
        &self.prepared
    }

    pub fn formula(&self) -> &Formula {
        &self.prepared.formula
    }

    pub fn shift(&self) -> &Rational {
        &self.prepared.shift
    }

    pub fn horizon(&self) -> &Rational {
        &self.prepared.horizon
    }

    pub fn period(&self) -> &Rational {
        &self.period
    }

    pub fn store(&self) -> &SignalStore {
        &self.store
    }

    /// Stored pieces of the busiest signal.
    pub fn stored_pieces(&self) -> usize {
        self.store.max_len()
    }

    /// `⌈h/Δ⌉ + 2`
    pub fn memory_bound(&self) -> usize {
        let ratio = &self.prepared.horizon / &self.period;
        let ceil = -(-ratio).floor();
        let ceil: usize = ceil.to_string().parse().expect("horizon ratio fits a machine integer");
        ceil + 2
    }

    /// Consume the next sample. From the second sample on, returns the
    /// robustness over the period that just closed.
    pub fn push(&mut self, sample: SamplePoint) -> Result<Option<RobustnessSegment>, MonitorError> {
        if let Some(t0) = &self.start {
            let expected = t0 + &(&self.period * &Rational::from(self.index as i64 + 1));
            if sample.time != expected {
                return Err(MonitorError::Timing {
                    expected,
                    found: sample.time,
                });
            }
        }
        let time = sample.time.clone();
        self.store.push(sample)?;
        let Some(lo) = self.last.replace(time.clone()) else {
            self.start = Some(time);
            return Ok(None);
        };
        self.index += 1;
        let t = self.prepared.time;
        let pd = time_domain(t, &lo, &time, false);
        let engine = Engine::new(&self.store).with_mutation(self.mutation);
        let raw = engine.formula_robust(&self.prepared.formula, &pd)?;
        let pieces = piece::canonicalize(raw.iter().map(|p| TimePiece::from_piece(p, t)).collect(), t);
        self.store.gc(&(&time - &self.prepared.horizon));
        Ok(Some(RobustnessSegment {
            index: self.index,
            t_lo: lo,
            t_hi: time,
            pieces,
        }))
    }
}

/// An offline store holding every piece of `trace` for the signals of
/// `phi`, with the final piece closed.
pub fn offline_store(trace: &Trace, phi: &Formula) -> Result<SignalStore, MonitorError> {
    let mut pieces = BTreeMap::new();
    for f in phi.signals() {
        if !trace.has_signal(&f) {
            return Err(MonitorError::UnknownSignal(f));
        }
        let ps = trace.pieces(&f, true)?;
        pieces.insert(f, ps);
    }
    Ok(SignalStore::from_pieces(pieces))
}

/// Robustness at a single time point on a full trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointValue {
    pub value: ExtReal,
    /// The piece of the final result containing the point.
    pub witness: Option<RobustnessPiece>,
}

/// Exact robustness of a temporal formula at `t0` (no pastification).
pub fn eval_at(trace: &Trace, t0: &Rational, phi: &Formula) -> Result<PointValue, MonitorError> {
    eval_at_with(trace, t0, phi, None)
}

pub fn eval_at_with(
    trace: &Trace,
    t0: &Rational,
    phi: &Formula,
    mutation: Option<Mutation>,
) -> Result<PointValue, MonitorError> {
    let t = free_time_var(phi)?;
    let phi = normalize(phi);
    let store = offline_store(trace, &phi)?;
    let pd = time_domain(t, t0, t0, true);
    let pieces = Engine::new(&store).with_mutation(mutation).formula_robust(&phi, &pd)?;
    for p in pieces {
        if let Some(v) = p.value_at(|v| (v == t).then(|| t0.clone())) {
            return Ok(PointValue {
                value: v,
                witness: Some(p),
            });
        }
    }
    Ok(PointValue {
        value: ExtReal::Undefined,
        witness: None,
    })
}

/// Exact robustness of a temporal formula over `[lo, hi]` on a full trace,
/// as canonical time pieces.
pub fn robustness_over(
    trace: &Trace,
    phi: &Formula,
    lo: &Rational,
    hi: &Rational,
    mutation: Option<Mutation>,
) -> Result<Vec<TimePiece>, MonitorError> {
    let t = free_time_var(phi)?;
    let phi = normalize(phi);
    let store = offline_store(trace, &phi)?;
    let pd = time_domain(t, lo, hi, true);
    let raw = Engine::new(&store).with_mutation(mutation).formula_robust(&phi, &pd)?;
    Ok(piece::canonicalize(raw.iter().map(|p| TimePiece::from_piece(p, t)).collect(), t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse;
    use crate::polyhedra::LinExpr;
    use crate::rational::q;

    fn sample(t: i64, v: i64) -> SamplePoint {
        SamplePoint {
            time: q(t, 1),
            values: BTreeMap::from([("f".to_string(), q(v, 1))]),
        }
    }

    fn affine(t: Var, slope: i64, c: i64) -> ValueAnnotation {
        ValueAnnotation::Affine(LinExpr::from_terms([(t, q(slope, 1))], q(c, 1)))
    }

    #[test]
    fn supremum_example_segments() {
        let phi = parse("E c in [0,2]. 0 < f(t-c)").unwrap();
        let mut m = Monitor::new(&phi, q(1, 1)).unwrap();
        assert_eq!(m.shift(), &q(0, 1));
        assert!(m.push(sample(0, 0)).unwrap().is_none());
        let s1 = m.push(sample(1, -3)).unwrap().unwrap();
        assert_eq!(s1.pieces.len(), 1);
        let seg = m.push(sample(2, -1)).unwrap().unwrap();
        assert!(seg.is_functional());
        let seg = m.push(sample(3, 1)).unwrap().unwrap();
        let t = m.prepared().time;
        assert_eq!(seg.index, 3);
        assert_eq!(seg.pieces.len(), 2, "{:?}", seg.pieces);
        let (a, b) = (&seg.pieces[0], &seg.pieces[1]);
        assert_eq!((&a.lo, a.lo_strict, &a.hi, a.hi_strict), (&q(2, 1), false, &q(11, 5), true));
        assert_eq!(a.value, affine(t, -3, 6));
        assert_eq!((&b.lo, b.lo_strict, &b.hi, b.hi_strict), (&q(11, 5), false, &q(3, 1), true));
        assert_eq!(b.value, affine(t, 2, -5));
    }

    #[test]
    fn late_window_is_undefined_at_start() {
        let phi = parse("E c in [1,2]. 0 < f(t-c)").unwrap();
        let mut m = Monitor::new(&phi, q(1, 1)).unwrap();
        m.push(sample(0, 0)).unwrap();
        let seg = m.push(sample(1, -3)).unwrap().unwrap();
        assert!(seg.pieces.is_empty());
    }

    #[test]
    fn constant_signal() {
        let phi = parse("0 < f(t)").unwrap();
        let mut m = Monitor::new(&phi, q(1, 2)).unwrap();
        for k in 0..6 {
            let s = SamplePoint {
                time: q(k, 2),
                values: BTreeMap::from([("f".to_string(), q(5, 1))]),
            };
            if let Some(seg) = m.push(s).unwrap() {
                assert_eq!(seg.pieces.len(), 1);
                assert_eq!(seg.pieces[0].value, ValueAnnotation::constant(q(5, 1)));
            }
            assert!(m.stored_pieces() <= m.memory_bound());
        }
    }

    #[test]
    fn timing_and_signal_errors() {
        let phi = parse("0 < f(t)").unwrap();
        let mut m = Monitor::new(&phi, q(1, 1)).unwrap();
        m.push(sample(0, 0)).unwrap();
        assert!(matches!(m.push(sample(3, 0)), Err(MonitorError::Timing { .. })));
        assert!(Monitor::new(&phi, q(0, 1)).is_err());
        assert!(matches!(
            Monitor::new(&parse("0 < f(t) + x").unwrap(), q(1, 1)),
            Err(MonitorError::FreeValueVariable(_))
        ));
    }

    #[test]
    fn point_queries() {
        let tr = Trace::single("f", &[(q(0, 1), q(0, 1)), (q(1, 1), q(-3, 1)), (q(2, 1), q(-1, 1)), (q(3, 1), q(1, 1))])
            .unwrap();
        let phi = parse("E c in [0,2]. 0 < f(t-c)").unwrap();
        assert_eq!(eval_at(&tr, &q(21, 10), &phi).unwrap().value, ExtReal::Finite(q(-3, 10)));
        assert_eq!(eval_at(&tr, &q(3, 1), &phi).unwrap().value, ExtReal::Finite(q(1, 1)));
        assert_eq!(eval_at(&tr, &q(-1, 1), &phi).unwrap().value, ExtReal::Undefined);
        let pieces = robustness_over(&tr, &phi, &q(2, 1), &q(3, 1), None).unwrap();
        assert_eq!(pieces.len(), 2);
    }
}
