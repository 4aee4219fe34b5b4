use supersem_core::corpus::{self, implicit_arg_rate, np_relation_overlap, parse_relations, LoadOptions};

fn data(name: &str) -> String {
    format!("{}/../../data/discourse/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn load(name: &str) -> Vec<corpus::AnnotatedInstance> {
    let c = corpus::load(data(name), &LoadOptions::default()).unwrap();
    assert!(c.report.issues.is_empty(), "{:?}", c.report.issues);
    c.instances
}

#[test]
fn implicit_argument_fixture() {
    let rate = implicit_arg_rate(&load("implicit_args.jsonl"));
    assert_eq!((rate.numerator, rate.denominator), (2, 3));
    assert!((rate.ratio().unwrap() - 0.667).abs() < 1e-3);
}

#[test]
fn np_relation_fixture() {
    let instances = load("np_overlap.jsonl");
    let relations = parse_relations(&std::fs::read_to_string(data("np_relations.tsv")).unwrap()).unwrap();
    let rate = np_relation_overlap(&instances, &relations);
    assert_eq!((rate.numerator, rate.denominator), (1, 4));
    assert_eq!(rate.ratio(), Some(0.25));
    assert_eq!(np_relation_overlap(&instances, &[]).ratio(), Some(0.0));
}

#[test]
fn no_eventive_instances_leaves_rate_undefined() {
    let nominal: Vec<_> = load("np_overlap.jsonl");
    assert_eq!(implicit_arg_rate(&nominal).ratio(), None);
    assert_eq!(np_relation_overlap(&[], &[]).ratio(), None);
}

#[test]
fn adding_a_matching_instance_never_lowers_the_numerator() {
    let mut instances = load("implicit_args.jsonl");
    let before = implicit_arg_rate(&instances);
    let mut extra = instances[0].clone();
    extra.id = "ia-copy".into();
    instances.push(extra);
    let after = implicit_arg_rate(&instances);
    assert_eq!(after.numerator, before.numerator + 1);
    assert_eq!(after.denominator, before.denominator + 1);
}
