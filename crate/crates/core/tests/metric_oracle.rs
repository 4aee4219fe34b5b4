//! Library metrics against the brute-force oracles.

mod oracle;

use oracle::*;
use supersem_core::eval::cohens_kappa;

#[test]
fn metrics_match_the_oracle_on_fifty_items() {
    let items = fixture();
    assert_eq!(items.len(), 50);
    let worst = compare(&items).unwrap();
    for (name, w) in ["em", "iou", "rouge", "role", "kappa"].iter().zip(worst) {
        assert!(w <= TOL, "{name}: {w}");
    }
}

#[test]
fn fixture_exercises_nontrivial_cases() {
    let items = fixture();
    let ems: f64 = items.iter().map(|i| oracle_em(&i.gold, &i.pred)).sum();
    assert!(ems > 0.0 && ems < 50.0);
    let partial = items.iter().filter(|i| {
        let v = oracle_iou(&i.gold, &i.pred);
        v > 0.0 && v < 1.0
    });
    assert!(partial.count() >= 10);
}

#[test]
fn kappa_edge_cases() {
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    assert_eq!(
        cohens_kappa(&s(&["a", "b", "a", "c"]), &s(&["a", "b", "a", "c"])).unwrap(),
        1.0
    );
    assert_eq!(
        cohens_kappa(&s(&["x", "x", "y", "y"]), &s(&["x", "y", "x", "y"])).unwrap(),
        0.0
    );
    assert_eq!(
        cohens_kappa(&s(&["x", "x", "y", "y"]), &s(&["y", "y", "x", "x"])).unwrap(),
        -1.0
    );
}
