//! Per-segment monitoring cost on a synthetic random-walk trace.

use sfomon::cli::{bench_samples, synthetic_names};
use sfomon::logic::parse;
use sfomon::rational::Rational;
use sfomon::signals::synthetic_samples;

pub fn run_example() -> String {
    let period = Rational::one();
    let specs = [
        ("instantaneous", "300 <= alt(t) && alt(t) <= 13000"),
        ("horizon 20", "alt(t) < 500 -> E a in [0,10]. A b in [0,10]. alt(t + a + b) >= 700"),
    ];
    specs
        .iter()
        .map(|(name, text)| {
            let phi = parse(text).unwrap();
            let samples = synthetic_samples(&synthetic_names(&phi, 4).unwrap(), 200, &period, 1);
            let r = bench_samples(&phi, &period, samples.into_iter().map(Ok)).unwrap();
            format!("{name}: {} segments, mean {:.3} ms, peak {} pieces (bound {})", r.segments, r.mean_ms, r.peak_pieces, r.memory_bound)
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn main() {
    println!("{}", run_example());
}
