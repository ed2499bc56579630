//! Parametric maximization: the supremum of an affine objective over a
//! guard, as a piecewise function of the remaining parameter.

use sfomon::monitor::{plp_maximize, ValueAnnotation};
use sfomon::polyhedra::{ge, le, LinExpr, Polyhedron, Var};
use sfomon::rational::Rational;

pub fn run_example() -> String {
    let (t, x) = (Var::new("t"), Var::new("x"));
    let (lt, lx) = (LinExpr::var(t), LinExpr::var(x));
    let c = |n| LinExpr::constant(Rational::from(n));
    // 0 <= x <= 2, x <= t, maximize 3x - t
    let guard = Polyhedron::full([t, x])
        .and(ge(&lx, &c(0)))
        .and(le(&lx, &c(2)))
        .and(le(&lx, &lt));
    let objective = ValueAnnotation::Affine(&lx.scale(&Rational::from(3)) - &lt);
    plp_maximize(&guard, &objective, x)
        .iter()
        .map(|p| format!("{}  =>  {}", p.guard, p.value))
        .collect::<Vec<_>>()
        .join("\n")
}

fn main() {
    println!("{}", run_example());
}
