//! Exact projection and emptiness of a small polyhedron.

use sfomon::polyhedra::{ge, gt, LinExpr, Polyhedron, Var};
use sfomon::rational::Rational;

pub fn run_example() -> String {
    let (x, y) = (Var::new("x"), Var::new("y"));
    let lx = LinExpr::var(x);
    let ly = LinExpr::var(y);
    // 0 <= x, x < y, y <= 4 - x
    let p = Polyhedron::full([x, y])
        .and(ge(&lx, &LinExpr::zero()))
        .and(gt(&ly, &lx))
        .and(ge(&(&LinExpr::constant(Rational::from(4)) - &lx), &ly));
    let shadow = p.eliminate(&[y]);
    let (lo, hi) = shadow.var_bounds(x);
    let tight = p.and(ge(&lx, &LinExpr::constant(Rational::from(2))));
    format!(
        "P = {p}\nexists y. P = {shadow}\nx ranges over {lo:?} .. {hi:?}\nP with x >= 2 is empty: {}",
        tight.is_empty()
    )
}

fn main() {
    println!("{}", run_example());
}
