use std::collections::{BTreeMap, VecDeque};

use super::{encode_segment, SamplePoint, SignalError, SignalPiece};
use crate::rational::Rational;

/// Per-signal sliding window of interpolation pieces.
#[derive(Clone, Debug, Default)]
pub struct SignalStore {
    pieces: BTreeMap<String, VecDeque<SignalPiece>>,
    last: Option<SamplePoint>,
}

impl SignalStore {
    pub fn new(signals: impl IntoIterator<Item = String>) -> Self {
        SignalStore {
            pieces: signals.into_iter().map(|s| (s, VecDeque::new())).collect(),
            last: None,
        }
    }

    /// Load every piece of an offline trace at once.
    pub fn from_pieces(pieces: BTreeMap<String, Vec<SignalPiece>>) -> Self {
        SignalStore {
            pieces: pieces.into_iter().map(|(k, v)| (k, v.into())).collect(),
            last: None,
        }
    }

    /// Feed the next sample; from the second sample on, one piece per
    /// signal is appended.
    pub fn push(&mut self, sample: SamplePoint) -> Result<(), SignalError> {
        for f in self.pieces.keys() {
            if !sample.values.contains_key(f) {
                return Err(SignalError::MissingSignal(f.clone()));
            }
        }
        if let Some(prev) = &self.last {
            for (f, list) in self.pieces.iter_mut() {
                list.push_back(encode_segment(prev, &sample, f)?);
            }
        }
        self.last = Some(sample);
        Ok(())
    }

    pub fn pieces(&self, f: &str) -> Option<&VecDeque<SignalPiece>> {
        self.pieces.get(f)
    }

    pub fn signals(&self) -> impl Iterator<Item = &str> {
        self.pieces.keys().map(String::as_str)
    }

    /// Drop every piece ending before `cutoff`.
    pub fn gc(&mut self, cutoff: &Rational) {
        for list in self.pieces.values_mut() {
            while list.front().is_some_and(|p| p.ends_before(cutoff)) {
                list.pop_front();
            }
        }
    }

    pub fn max_len(&self) -> usize {
        self.pieces.values().map(VecDeque::len).max().unwrap_or(0)
    }
}
