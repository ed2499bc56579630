//! Differential check of the monitor against the reference semantics,
//! then the same check against a deliberately broken negation.

use sfomon::cli::{run_check, CheckOptions};
use sfomon::logic::parse;
use sfomon::monitor::Mutation;
use sfomon::rational::Rational;
use sfomon::signals::Trace;

pub fn run_example() -> String {
    let q = |n: i64| Rational::from(n);
    let trace = Trace::single("f", &[(q(0), q(0)), (q(1), q(-3)), (q(2), q(-1)), (q(3), q(1))]).unwrap();
    let phi = parse("!(E c in [0,1]. f(t-c) > -1)").unwrap();
    let mut out = Vec::new();
    for mutation in [None, Some(Mutation::NegationKeepsSign)] {
        let opts = CheckOptions {
            points: 13,
            grid: 200,
            margin: Rational::new(1, 100),
            mutation,
        };
        let report = run_check(&trace, &phi, &opts).unwrap();
        out.push(format!(
            "{:?}: {} sign checks, {} discrepancies",
            mutation,
            report.sign_checked,
            report.discrepancies.len()
        ));
    }
    out.join("\n")
}

fn main() {
    println!("{}", run_example());
}
