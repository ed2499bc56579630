use std::collections::BTreeMap;

use super::{encode_segment, SamplePoint, SignalError, SignalPiece};
use crate::rational::Rational;

/// A finite piecewise-linear trace over a shared, strictly increasing
/// time axis. The temporal domain is `[first time, last time]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    times: Vec<Rational>,
    values: BTreeMap<String, Vec<Rational>>,
}

impl Trace {
    pub fn from_samples(samples: &[SamplePoint]) -> Result<Trace, SignalError> {
        let first = samples.first().ok_or(SignalError::Empty)?;
        let names: Vec<String> = first.values.keys().cloned().collect();
        let mut values: BTreeMap<String, Vec<Rational>> =
            names.iter().map(|n| (n.clone(), Vec::with_capacity(samples.len()))).collect();
        let mut times = Vec::with_capacity(samples.len());
        for s in samples {
            if let Some(prev) = times.last() {
                if s.time <= *prev {
                    return Err(SignalError::NonIncreasing {
                        previous: prev.clone(),
                        found: s.time.clone(),
                    });
                }
            }
            times.push(s.time.clone());
            for n in &names {
                let v = s.values.get(n).ok_or_else(|| SignalError::MissingSignal(n.clone()))?;
                values.get_mut(n).unwrap().push(v.clone());
            }
        }
        Ok(Trace { times, values })
    }

    /// Build from `(time, value)` breakpoints of a single signal.
    pub fn single(name: &str, points: &[(Rational, Rational)]) -> Result<Trace, SignalError> {
        let samples: Vec<SamplePoint> = points
            .iter()
            .map(|(t, v)| SamplePoint {
                time: t.clone(),
                values: BTreeMap::from([(name.to_string(), v.clone())]),
            })
            .collect();
        Trace::from_samples(&samples)
    }

    pub fn times(&self) -> &[Rational] {
        &self.times
    }

    pub fn signal_names(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }

    pub fn has_signal(&self, f: &str) -> bool {
        self.values.contains_key(f)
    }

    pub fn breakpoints(&self, f: &str) -> Option<impl Iterator<Item = (&Rational, &Rational)>> {
        self.values.get(f).map(|vs| self.times.iter().zip(vs))
    }

    pub fn start(&self) -> &Rational {
        &self.times[0]
    }

    pub fn end(&self) -> &Rational {
        self.times.last().unwrap()
    }

    pub fn in_domain(&self, t: &Rational) -> bool {
        t >= self.start() && t <= self.end()
    }

    pub fn samples(&self) -> Vec<SamplePoint> {
        (0..self.times.len()).map(|i| self.sample(i)).collect()
    }

    fn sample(&self, i: usize) -> SamplePoint {
        SamplePoint {
            time: self.times[i].clone(),
            values: self.values.iter().map(|(n, vs)| (n.clone(), vs[i].clone())).collect(),
        }
    }

    /// Exact linear interpolation; `None` outside the domain or for an
    /// unknown signal.
    pub fn value(&self, f: &str, t: &Rational) -> Option<Rational> {
        let vs = self.values.get(f)?;
        if !self.in_domain(t) {
            return None;
        }
        let i = match self.times.binary_search(t) {
            Ok(i) => return Some(vs[i].clone()),
            Err(i) => i,
        };
        let (t0, t1) = (&self.times[i - 1], &self.times[i]);
        let (v0, v1) = (&vs[i - 1], &vs[i]);
        let w = &(t - t0) / &(t1 - t0);
        Some(v0 + &(&w * &(v1 - v0)))
    }

    /// The half-open interpolation pieces of `f`; with `closed_end` the
    /// final piece also covers the last sample time. A single-sample trace
    /// yields one degenerate closed piece.
    pub fn pieces(&self, f: &str, closed_end: bool) -> Result<Vec<SignalPiece>, SignalError> {
        if !self.has_signal(f) {
            return Err(SignalError::MissingSignal(f.to_string()));
        }
        let samples = self.samples();
        if samples.len() == 1 {
            let v = samples[0].values[f].clone();
            return Ok(vec![SignalPiece {
                t_lo: samples[0].time.clone(),
                t_hi: samples[0].time.clone(),
                closed_hi: true,
                slope: Rational::zero(),
                intercept: v,
            }]);
        }
        let mut out = samples
            .windows(2)
            .map(|w| encode_segment(&w[0], &w[1], f))
            .collect::<Result<Vec<_>, _>>()?;
        if closed_end {
            out.last_mut().unwrap().closed_hi = true;
        }
        Ok(out)
    }

    /// Restriction to `[lo, hi] ∩ domain`, with interpolated samples added
    /// at the cut points. `None` if the intersection is empty.
    pub fn truncate(&self, lo: &Rational, hi: &Rational) -> Option<Trace> {
        let lo = lo.clone().max(self.start().clone());
        let hi = hi.clone().min(self.end().clone());
        if lo > hi {
            return None;
        }
        let mut times = vec![lo.clone()];
        times.extend(self.times.iter().filter(|t| **t > lo && **t < hi).cloned());
        if hi > lo {
            times.push(hi.clone());
        }
        let values = self
            .values
            .keys()
            .map(|n| (n.clone(), times.iter().map(|t| self.value(n, t).unwrap()).collect()))
            .collect();
        Some(Trace { times, values })
    }

    /// Largest absolute sample value over all signals.
    pub fn max_abs_value(&self) -> Rational {
        self.values
            .values()
            .flatten()
            .map(Rational::abs)
            .max()
            .unwrap_or_else(Rational::zero)
    }
}
