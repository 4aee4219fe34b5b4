use supersem_core::corpus::{self, AnnotatedInstance, LoadOptions};
use supersem_core::eval::{iaa_report, EvalError, IAA_ROWS};

fn load(name: &str) -> Vec<AnnotatedInstance> {
    let path = format!("{}/../../data/iaa/{name}", env!("CARGO_MANIFEST_DIR"));
    let c = corpus::load(path, &LoadOptions::default()).unwrap();
    assert!(c.report.issues.is_empty());
    c.instances
}

#[test]
fn one_orientation_disagreement_in_ten() {
    let r = iaa_report(&load("annotator_a.jsonl"), &load("annotator_b.jsonl")).unwrap();
    assert_eq!((r.items, r.compared), (10, 10));
    let names: Vec<_> = r.rows.iter().map(|r| r.name.as_str()).collect();
    assert_eq!(names, IAA_ROWS);
    let o = r.row("exact orientation").unwrap();
    assert!((o.accuracy.unwrap() - 0.9).abs() < 1e-12);
    // A: 10 positive. B: 9 positive, 1 negative. p_o = 0.9, p_e = 1.0 * 0.9 = 0.9.
    assert!(o.kappa.unwrap().abs() < 1e-12);
    for name in IAA_ROWS.iter().filter(|n| **n != "exact orientation") {
        let row = r.row(name).unwrap();
        assert_eq!(row.accuracy, Some(1.0), "{name}");
    }
    assert_eq!(r.row("event predicate").unwrap().support, 4);
    assert_eq!(r.row("CS (no event)").unwrap().support, 6);
}

#[test]
fn self_agreement_is_perfect() {
    let a = load("annotator_a.jsonl");
    let r = iaa_report(&a, &a).unwrap();
    for row in &r.rows {
        assert_eq!(row.accuracy, Some(1.0), "{}", row.name);
        if let Some(k) = row.kappa {
            assert_eq!(k, 1.0, "{}", row.name);
        }
    }
}

#[test]
fn differing_id_sets_are_rejected() {
    let a = load("annotator_a.jsonl");
    let b = load("annotator_b.jsonl");
    assert!(matches!(iaa_report(&a[..9], &b), Err(EvalError::IdMismatch(_))));
}

#[test]
fn report_renders_every_row() {
    let r = iaa_report(&load("annotator_a.jsonl"), &load("annotator_b.jsonl")).unwrap();
    let text = r.render();
    for name in IAA_ROWS {
        assert!(text.contains(name));
    }
    assert!(text.contains("0.90 (0.00)"));
}
