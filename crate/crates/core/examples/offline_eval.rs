//! Exact robustness of a bounded stabilization property at chosen times.

use sfomon::logic::parse;
use sfomon::monitor::eval_at;
use sfomon::rational::Rational;
use sfomon::signals::{read_samples, TimeCheck, Trace};

const TRACE: &str = "time,f\n0,0.5\n1,0.5\n2,1.5\n3,1\n12,1\n14,3\n16,0.5\n22,3\n30,1\n";

pub fn run_example() -> String {
    let trace = Trace::from_samples(&read_samples(TRACE.as_bytes(), TimeCheck::Increasing).unwrap()).unwrap();
    let phi = parse("E r in (-inf, inf). E c in [0,10]. A d in [0,8]. |f(t+c+d) - r| <= 0.5").unwrap();
    [1, 12]
        .into_iter()
        .map(|x| {
            let v = eval_at(&trace, &Rational::from(x), &phi).unwrap();
            format!("t = {x}: robustness {}", v.value)
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn main() {
    println!("{}", run_example());
}
