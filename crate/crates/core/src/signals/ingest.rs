use std::collections::BTreeMap;
use std::io::Read;

use super::{SamplePoint, SignalError};
use crate::rational::Rational;

/// How sample times are validated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TimeCheck {
    /// Times must be `t₀, t₀ + Δ, t₀ + 2Δ, …` exactly.
    Period(Rational),
    /// Any strictly increasing times.
    Increasing,
}

/// Streaming reader for `time,<sig1>,<sig2>,…` CSV with `#` comments.
pub struct SampleReader<R: Read> {
    records: csv::StringRecordsIntoIter<R>,
    names: Vec<String>,
    check: TimeCheck,
    first: Option<Rational>,
    last: Option<Rational>,
    index: u64,
}

impl<R: Read> SampleReader<R> {
    pub fn new(input: R, check: TimeCheck) -> Result<Self, SignalError> {
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(input);
        let header = reader.headers().map_err(|e| SignalError::Csv(e.to_string()))?.clone();
        let mut cols = header.iter();
        if cols.next() != Some("time") {
            return Err(SignalError::Header("first column must be `time`".into()));
        }
        let names: Vec<String> = cols.map(str::to_string).collect();
        if names.is_empty() {
            return Err(SignalError::Header("no signal columns".into()));
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || names[..i].contains(n) {
                return Err(SignalError::Header(format!("bad or duplicate signal name `{n}`")));
            }
        }
        Ok(SampleReader {
            records: reader.into_records(),
            names,
            check,
            first: None,
            last: None,
            index: 0,
        })
    }

    pub fn signal_names(&self) -> &[String] {
        &self.names
    }

    fn parse_row(&mut self, rec: csv::StringRecord) -> Result<SamplePoint, SignalError> {
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        if rec.len() != self.names.len() + 1 {
            return Err(SignalError::Row {
                line,
                msg: format!("expected {} fields, found {}", self.names.len() + 1, rec.len()),
            });
        }
        let number = |text: &str, what: &str| -> Result<Rational, SignalError> {
            text.parse().map_err(|_| SignalError::Row {
                line,
                msg: format!("invalid {what} `{text}`"),
            })
        };
        let time = number(&rec[0], "time")?;
        let mut values = BTreeMap::new();
        for (i, n) in self.names.iter().enumerate() {
            values.insert(n.clone(), number(&rec[i + 1], n)?);
        }
        if let Some(prev) = &self.last {
            if time <= *prev {
                return Err(SignalError::NonIncreasing {
                    previous: prev.clone(),
                    found: time,
                });
            }
        }
        if let TimeCheck::Period(delta) = &self.check {
            if let Some(t0) = &self.first {
                let expected = t0 + &(delta * &Rational::from(self.index as i64));
                if time != expected {
                    return Err(SignalError::Period { line, expected, found: time });
                }
            }
        }
        if self.first.is_none() {
            self.first = Some(time.clone());
        }
        self.last = Some(time.clone());
        self.index += 1;
        Ok(SamplePoint { time, values })
    }
}

impl<R: Read> Iterator for SampleReader<R> {
    type Item = Result<SamplePoint, SignalError>;

    fn next(&mut self) -> Option<Self::Item> {
        let rec = self.records.next()?;
        Some(match rec {
            Ok(rec) => self.parse_row(rec),
            Err(e) => Err(SignalError::Csv(e.to_string())),
        })
    }
}

/// Read a whole CSV trace.
pub fn read_samples<R: Read>(input: R, check: TimeCheck) -> Result<Vec<SamplePoint>, SignalError> {
    SampleReader::new(input, check)?.collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn supremum_example_rows() {
        let text = "time,f\n# samples\n0,0\n1,-3\n2,-1\n3,1\n";
        let samples = read_samples(text.as_bytes(), TimeCheck::Period(q(1, 1))).unwrap();
        assert_eq!(samples.len(), 4);
        assert_eq!(samples[1].values["f"], q(-3, 1));
    }

    #[test]
    fn decimals_are_exact() {
        let samples = read_samples("time,f\n0,0.1\n0.1,1/3\n".as_bytes(), TimeCheck::Increasing).unwrap();
        assert_eq!(samples[0].values["f"], q(1, 10));
        assert_eq!(samples[1].time, q(1, 10));
        assert_eq!(samples[1].values["f"], q(1, 3));
    }

    #[test]
    fn period_violation() {
        let err = read_samples("time,f\n0,1\n0.9,2\n".as_bytes(), TimeCheck::Period(q(1, 1))).unwrap_err();
        assert!(matches!(err, SignalError::Period { .. }), "{err}");
        let err = read_samples("time,f\n0,1\n0,2\n".as_bytes(), TimeCheck::Increasing).unwrap_err();
        assert!(matches!(err, SignalError::NonIncreasing { .. }), "{err}");
        let err = read_samples("time,f\n0,1,2\n".as_bytes(), TimeCheck::Increasing).unwrap_err();
        assert!(matches!(err, SignalError::Row { .. }), "{err}");
        assert!(read_samples("t,f\n0,1\n".as_bytes(), TimeCheck::Increasing).is_err());
    }
}
