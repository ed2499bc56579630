//! Differential checks of the monitor against the reference semantics.

use std::cmp::Ordering;

use crate::logic::{horizons, pastify, Formula};
use crate::monitor::{eval_at_with, MonitorError, Mutation};
use crate::oracle::{at_time, eval_bool, eval_mu, ExtReal};
use crate::rational::Rational;
use crate::signals::Trace;

#[derive(Clone, Debug)]
pub struct CheckOptions {
    pub points: usize,
    pub grid: usize,
    pub margin: Rational,
    pub mutation: Option<Mutation>,
}

#[derive(Clone, Debug, Default)]
pub struct CheckReport {
    pub points: usize,
    /// Points where the sign was compared against a stable oracle verdict.
    pub sign_checked: usize,
    /// Points above the margin where the oracle verdict changed under refinement.
    pub inconclusive: usize,
    pub shift_checked: usize,
    /// Largest `monitor − oracle` over finite pairs.
    pub max_gap: Option<f64>,
    pub discrepancies: Vec<String>,
}

/// Whether every quantifier occurs under an even number of negations, so
/// that sampling quantifiers can only under-approximate the robustness.
pub fn existential_only(phi: &Formula) -> bool {
    fn walk(phi: &Formula, negated: bool) -> bool {
        match phi {
            Formula::Atom(..) => true,
            Formula::Not(f) => walk(f, !negated),
            Formula::Or(a, b) => walk(a, negated) && walk(b, negated),
            Formula::Exists { body, .. } => !negated && walk(body, negated),
        }
    }
    walk(phi, false)
}

/// `n` evenly spaced rational points of `[lo, hi]`, both ends included.
pub fn sample_times(lo: &Rational, hi: &Rational, n: usize) -> Vec<Rational> {
    if n <= 1 || lo == hi {
        return vec![lo.clone()];
    }
    let step = &(hi - lo) / &Rational::from((n - 1) as i64);
    (0..n).map(|k| lo + &(&step * &Rational::from(k as i64))).collect()
}

fn positive(v: &ExtReal) -> bool {
    v.signum() == Some(1)
}

pub fn run_check(trace: &Trace, phi: &Formula, opts: &CheckOptions) -> Result<CheckReport, MonitorError> {
    let times = sample_times(trace.start(), trace.end(), opts.points);
    let t = crate::logic::check_temporal(phi)?;
    let dominance = existential_only(phi);
    let shift = horizons(phi)?.forward;
    let shifted = pastify(phi, &shift)?;
    let mut report = CheckReport {
        points: times.len(),
        ..CheckReport::default()
    };
    let fine = 2 * opts.grid - 1;
    for x in &times {
        let m = eval_at_with(trace, x, phi, opts.mutation)?.value;
        let nu = at_time(t, x.clone());
        let coarse = eval_bool(trace, &nu, phi, opts.grid);
        if m.is_defined() != coarse.is_some() {
            report
                .discrepancies
                .push(format!("t = {x}: monitor {m}, oracle definedness {}", coarse.is_some()));
            continue;
        }
        let above_margin = match &m {
            ExtReal::Finite(r) => r.abs() > opts.margin,
            ExtReal::PlusInf | ExtReal::MinusInf => true,
            ExtReal::Undefined => false,
        };
        if above_margin {
            let refined = eval_bool(trace, &nu, phi, fine);
            if refined == coarse {
                report.sign_checked += 1;
                if coarse != Some(positive(&m)) {
                    report
                        .discrepancies
                        .push(format!("t = {x}: monitor {m} but oracle verdict {coarse:?}"));
                }
            } else {
                report.inconclusive += 1;
            }
        }
        if m.is_defined() {
            let o = eval_mu(trace, &nu, phi, opts.grid);
            if let (ExtReal::Finite(a), ExtReal::Finite(b)) = (&m, &o) {
                let gap = (a - b).to_f64();
                report.max_gap = Some(report.max_gap.map_or(gap, |g: f64| g.max(gap)));
            }
            if dominance && o.partial_cmp_defined(&m) == Some(Ordering::Greater) {
                report
                    .discrepancies
                    .push(format!("t = {x}: oracle {o} exceeds monitor {m}"));
            }
        }
        let later = x + &shift;
        let p = eval_at_with(trace, &later, &shifted, opts.mutation)?.value;
        report.shift_checked += 1;
        if p != m {
            report
                .discrepancies
                .push(format!("t = {x}: robustness {m}, pastified at t + {shift} gives {p}"));
        }
    }
    Ok(report)
}
