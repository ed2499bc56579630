//! Stream samples into the online monitor, one robustness segment per period.

use sfomon::logic::parse;
use sfomon::monitor::Monitor;
use sfomon::rational::Rational;
use sfomon::signals::SamplePoint;

pub fn run_example() -> String {
    let phi = parse("E c in [0,2]. 0 < f(t-c)").unwrap();
    let mut monitor = Monitor::new(&phi, Rational::one()).unwrap();
    let mut lines = Vec::new();
    for (k, v) in [0, -3, -1, 1].into_iter().enumerate() {
        let sample = SamplePoint {
            time: Rational::from(k as i64),
            values: [("f".to_string(), Rational::from(v))].into(),
        };
        if let Some(seg) = monitor.push(sample).unwrap() {
            let pieces: Vec<String> = seg
                .pieces
                .iter()
                .map(|p| format!("{} on [{}, {}{}", p.value, p.lo, p.hi, if p.hi_strict { ")" } else { "]" }))
                .collect();
            lines.push(format!("[{}, {}): {}", seg.t_lo, seg.t_hi, pieces.join("; ")));
        }
    }
    lines.push(format!("stored pieces {} (bound {})", monitor.stored_pieces(), monitor.memory_bound()));
    lines.join("\n")
}

fn main() {
    println!("{}", run_example());
}
