use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SamplePoint;
use crate::rational::Rational;

/// A deterministic random walk per signal, sampled every `period` from
/// time 0. Values are multiples of 1/10 starting in `[0, 1000]`.
pub fn synthetic_samples(names: &[String], segments: usize, period: &Rational, seed: u64) -> Vec<SamplePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current: Vec<i64> = names.iter().map(|_| rng.gen_range(0..=10_000)).collect();
    let mut out = Vec::with_capacity(segments + 1);
    for i in 0..=segments {
        if i > 0 {
            for v in current.iter_mut() {
                *v += rng.gen_range(-150..=150);
            }
        }
        out.push(SamplePoint {
            time: period * &Rational::from(i as i64),
            values: names
                .iter()
                .zip(&current)
                .map(|(n, v)| (n.clone(), Rational::new(*v, 10)))
                .collect::<BTreeMap<_, _>>(),
        });
    }
    out
}

/// Render samples in the trace CSV format.
pub fn samples_to_csv(samples: &[SamplePoint]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    if let Some(first) = samples.first() {
        let mut header = vec!["time".to_string()];
        header.extend(first.values.keys().cloned());
        w.write_record(&header).expect("in-memory write");
    }
    for s in samples {
        let mut row = vec![s.time.to_string()];
        row.extend(s.values.values().map(Rational::to_string));
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("CSV is UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::signals::{read_samples, TimeCheck};

    #[test]
    fn seeded_and_round_trips() {
        let names = vec!["a".to_string(), "b".to_string()];
        let a = samples_to_csv(&synthetic_samples(&names, 20, &q(1, 10), 7));
        let b = samples_to_csv(&synthetic_samples(&names, 20, &q(1, 10), 7));
        assert_eq!(a, b);
        assert_ne!(a, samples_to_csv(&synthetic_samples(&names, 20, &q(1, 10), 8)));
        let back = read_samples(a.as_bytes(), TimeCheck::Period(q(1, 10))).unwrap();
        assert_eq!(back, synthetic_samples(&names, 20, &q(1, 10), 7));
    }
}
