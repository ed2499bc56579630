//! Horizons of a future-time formula and its past-time shift.

use sfomon::logic::{horizons, is_psfo, parse, pastify};

pub fn run_example() -> String {
    let phi = parse("E r in (-inf, inf). E c in [0,10]. A d in [0,8]. |f(t+c+d) - r| <= 0.5").unwrap();
    let h = horizons(&phi).unwrap();
    let past = pastify(&phi, &h.forward).unwrap();
    format!(
        "formula: {phi}\nforward horizon {}, backward horizon {}\npast-time after shifting: {} ({})",
        h.forward,
        h.backward,
        is_psfo(&past).unwrap(),
        past
    )
}

fn main() {
    println!("{}", run_example());
}
