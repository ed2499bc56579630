//! The grid-sampling reference semantics next to the exact monitor.

use sfomon::logic::parse;
use sfomon::monitor::eval_at;
use sfomon::oracle::{at_time, eval_bool, eval_mu};
use sfomon::polyhedra::Var;
use sfomon::rational::Rational;
use sfomon::signals::Trace;

pub fn run_example() -> String {
    let q = |n, d| Rational::new(n, d);
    let trace = Trace::single("f", &[(q(0, 1), q(0, 1)), (q(1, 1), q(-3, 1)), (q(2, 1), q(-1, 1)), (q(3, 1), q(1, 1))]).unwrap();
    let phi = parse("E c in [0,2]. 0 < f(t-c)").unwrap();
    let mut lines = Vec::new();
    for x in [q(21, 10), q(5, 2), q(3, 1)] {
        let nu = at_time(Var::new("t"), x.clone());
        let exact = eval_at(&trace, &x, &phi).unwrap().value;
        lines.push(format!(
            "t = {x}: monitor {exact}, oracle value {} with 1000 grid points, verdict {:?}",
            eval_mu(&trace, &nu, &phi, 1000),
            eval_bool(&trace, &nu, &phi, 1000)
        ));
    }
    lines.join("\n")
}

fn main() {
    println!("{}", run_example());
}
