use supersem_core::detector::gold::{evaluate_recall, parse_marked};
use supersem_core::detector::Detector;

fn fixture() -> String {
    std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/detector_gold.txt")).unwrap()
}

#[test]
fn gold_fixture_size() {
    let marked = parse_marked(&fixture()).unwrap();
    assert!(marked.len() >= 200, "{} sentences", marked.len());
    assert!(marked.iter().map(|m| m.quantifiers.len()).sum::<usize>() >= 10);
}

#[test]
fn recall_on_gold_fixture() {
    let marked = parse_marked(&fixture()).unwrap();
    let report = evaluate_recall(&Detector::default(), &marked);
    println!("{report:#?}");
    assert!(
        report.recall() >= 0.98,
        "recall {} misses {:?}",
        report.recall(),
        report.misses
    );
    assert_eq!(report.flag_rate(), 1.0, "{:?}", report.misses);
}
