//! Every cargo example runs and prints what it is meant to show.

#[allow(dead_code)]
#[path = "../examples/pastify.rs"]
mod pastify;
#[allow(dead_code)]
#[path = "../examples/oracle.rs"]
mod oracle;
#[allow(dead_code)]
#[path = "../examples/online_monitor.rs"]
mod online_monitor;
#[allow(dead_code)]
#[path = "../examples/offline_eval.rs"]
mod offline_eval;
#[allow(dead_code)]
#[path = "../examples/differential_check.rs"]
mod differential_check;
#[allow(dead_code)]
#[path = "../examples/bench.rs"]
mod bench;
#[allow(dead_code)]
#[path = "../examples/boundary_supremum.rs"]
mod boundary_supremum;

#[test]
fn polyhedra_projects_and_decides_emptiness() {
    let out = polyhedra::run_example();
    assert!(out.contains("exists y. P = {x >= 0, -x > -2}"), "{out}");
    assert!(out.ends_with("empty: true"), "{out}");
}

#[test]
fn pastify_shifts_by_the_forward_horizon() {
    let out = pastify::run_example();
    assert!(out.contains("forward horizon 18"), "{out}");
    assert!(out.contains("past-time after shifting: true"), "{out}");
}

#[test]
fn oracle_agrees_with_the_monitor() {
    for line in oracle::run_example().lines() {
        let monitor = line.split("monitor ").nth(1).unwrap().split(',').next().unwrap();
        let oracle = line.split("oracle value ").nth(1).unwrap().split(' ').next().unwrap();
        assert_eq!(monitor, oracle, "{line}");
    }
}

#[test]
fn online_monitor_splits_the_last_segment() {
    let out = online_monitor::run_example();
    assert!(out.contains("[2, 3): -3t + 6 on [2, 11/5); 2t - 5 on [11/5, 3)"), "{out}");
}

#[test]
fn offline_eval_gives_exact_values() {
    assert_eq!(offline_eval::run_example(), "t = 1: robustness 1/2\nt = 12: robustness -1/8");
}

#[test]
fn differential_check_catches_the_mutation() {
    let out = differential_check::run_example();
    let mut lines = out.lines();
    assert!(lines.next().unwrap().ends_with(" 0 discrepancies"), "{out}");
    assert!(!lines.next().unwrap().ends_with(" 0 discrepancies"), "{out}");
}

#[test]
fn bench_reports_both_horizons() {
    let out = bench::run_example();
    assert!(out.contains("instantaneous: 200 segments"), "{out}");
    assert!(out.contains("peak 21 pieces (bound 22)"), "{out}");
}

#[test]
fn boundary_supremum_has_two_regimes() {
    assert_eq!(boundary_supremum::run_example(), "{t >= 0, -t >= -2}  =>  2t\n{t > 2}  =>  -t + 6");
}
