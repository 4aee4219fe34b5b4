use std::collections::BTreeMap;

use proptest::prelude::*;
use proptest::sample::subsequence;
use supersem_core::analysis::{avg_conditional_logprob, count_entropy, decide, Decision, EntropyBase, LogProbRecord};
use supersem_core::corpus::{self, split, AnnotatedInstance, LoadOptions, SplitOptions};
use supersem_core::eval::{
    exact_match, rouge1, score_predictions, token_iou, MatchPolicy, PredictionRecord, RougeMode, Slot,
};
use supersem_core::frame::{parse_frame_notation, serialize_frame};
use supersem_core::{Argument, EventExpression, NominalExpr, Role, SetExpr};

fn sample() -> Vec<AnnotatedInstance> {
    corpus::load(
        concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/sample_corpus.jsonl"),
        &LoadOptions::default(),
    )
    .unwrap()
    .instances
}

fn role() -> impl Strategy<Value = Role> {
    "[A-Z][A-Z0-9_]{0,7}".prop_map(|s| Role::new(&s).unwrap())
}

fn value() -> impl Strategy<Value = String> {
    "[a-z0-9][a-z0-9' ]{0,14}[a-z0-9]"
}

fn argument() -> impl Strategy<Value = Argument> {
    (role(), value()).prop_map(|(r, v)| Argument::new(r, v))
}

fn set_expr() -> impl Strategy<Value = SetExpr> {
    prop_oneof![
        ("[A-Z][A-Z_]{0,9}", prop::collection::vec(argument(), 0..5))
            .prop_map(|(p, args)| SetExpr::Eventive(EventExpression::new(&p, args))),
        ("[a-z][a-z ]{0,12}[a-z]", prop::collection::vec(argument(), 0..4))
            .prop_map(|(h, args)| SetExpr::Nominal(NominalExpr::new(h, args))),
    ]
}

fn ascii_text() -> impl Strategy<Value = String> {
    "[A-Za-z0-9 ,.;:!?'()-]{0,40}"
}

proptest! {
    #[test]
    fn notation_round_trips(expr in set_expr()) {
        let s = serialize_frame(&expr);
        let parsed = parse_frame_notation(&s).unwrap();
        prop_assert!(parsed.identical(&expr), "{s}");
        prop_assert_eq!(serialize_frame(&parsed), s);
    }

    #[test]
    fn serialization_is_idempotent_under_spacing(expr in set_expr()) {
        let s = serialize_frame(&expr);
        let spaced = s.replace('=', " = ").replace(", ", " ,  ").replacen('(', " ( ", 1);
        let spaced = format!("  {spaced}  ");
        let parsed = parse_frame_notation(&spaced).unwrap();
        prop_assert_eq!(serialize_frame(&parsed), s);
    }

    #[test]
    fn argument_order_does_not_affect_equality(expr in set_expr(), seed in any::<u64>()) {
        let mut shuffled = expr.clone();
        let args = match &mut shuffled {
            SetExpr::Eventive(ev) => &mut ev.args,
            SetExpr::Nominal(np) => &mut np.restrictions,
        };
        let n = args.len();
        if n > 1 {
            args.rotate_left((seed as usize) % n);
        }
        prop_assert_eq!(&shuffled, &expr);
        prop_assert_eq!(parse_frame_notation(&serialize_frame(&shuffled)).unwrap(), expr);
    }

    #[test]
    fn deleting_structure_from_events_is_rejected(
        pred in "[A-Z][A-Z_]{0,9}",
        args in prop::collection::vec(argument(), 1..4),
        pick in any::<prop::sample::Index>(),
    ) {
        let s = serialize_frame(&SetExpr::Eventive(EventExpression::new(&pred, args)));
        let positions: Vec<usize> = s
            .chars()
            .enumerate()
            .filter(|(_, c)| matches!(c, '(' | ')' | ',' | '='))
            .map(|(i, _)| i)
            .collect();
        let at = positions[pick.index(positions.len())];
        let broken: String = s.chars().enumerate().filter(|(i, _)| *i != at).map(|(_, c)| c).collect();
        let err = parse_frame_notation(&broken);
        prop_assert!(err.is_err(), "{broken} parsed");
        if let Some(o) = err.unwrap_err().offset() {
            prop_assert!(o <= broken.chars().count());
        }
    }

    #[test]
    fn parser_never_panics_and_offsets_are_in_range(s in "\\PC{0,60}") {
        if let Err(e) = parse_frame_notation(&s) {
            if let Some(o) = e.offset() {
                prop_assert!(o <= s.chars().count());
            }
        }
    }

    #[test]
    fn entropy_is_bounded_and_permutation_invariant(mut counts in prop::collection::vec(0usize..50, 1..8), rot in 0usize..8) {
        let h = count_entropy(&counts, EntropyBase::Nats);
        let support = counts.iter().filter(|c| **c > 0).count();
        prop_assert!(h >= 0.0);
        prop_assert!(h <= (support.max(1) as f64).ln() + 1e-12);
        let bits = count_entropy(&counts, EntropyBase::Bits);
        prop_assert!((bits - h / std::f64::consts::LN_2).abs() < 1e-12);
        let n = counts.len();
        counts.rotate_left(rot % n);
        prop_assert!((count_entropy(&counts, EntropyBase::Nats) - h).abs() < 1e-12);
    }

    #[test]
    fn uniform_counts_reach_the_maximum(k in 1usize..8, c in 1usize..20) {
        let h = count_entropy(&vec![c; k], EntropyBase::Nats);
        prop_assert!((h - (k as f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn average_logprob_shifts_with_a_constant(lps in prop::collection::vec(-20.0f64..0.0, 1..10), c in 0.0f64..5.0) {
        let rec = |v: Vec<f64>| LogProbRecord {
            instance_id: "x".into(),
            condition: "no-context".into(),
            completion: "y".into(),
            token_logprobs: v,
            gold: true,
        };
        let base = avg_conditional_logprob(&rec(lps.clone())).unwrap();
        let shifted = avg_conditional_logprob(&rec(lps.iter().map(|v| v - c).collect())).unwrap();
        prop_assert!((base - c - shifted).abs() < 1e-9);
    }

    #[test]
    fn decision_survives_monotone_transforms(gold in -10i32..0, others in prop::collection::vec(-10i32..0, 1..5), c in -5i32..5) {
        let as_f = |v: i32| v as f64;
        let d = decide(as_f(gold), &others.iter().copied().map(as_f).collect::<Vec<_>>());
        let t = |v: i32| (2 * v + c) as f64;
        let d2 = decide(t(gold), &others.iter().copied().map(t).collect::<Vec<_>>());
        prop_assert_eq!(d, d2);
        let max = *others.iter().max().unwrap();
        let expected = if gold > max { Decision::Correct } else if gold == max { Decision::Tie } else { Decision::Incorrect };
        prop_assert_eq!(d, expected);
    }

    #[test]
    fn metrics_are_bounded_and_symmetric(a in ascii_text(), b in ascii_text()) {
        let iou = token_iou(&a, &b);
        let f1 = rouge1(&a, &b, RougeMode::F1);
        prop_assert!((0.0..=1.0).contains(&iou));
        prop_assert!((0.0..=1.0).contains(&f1));
        prop_assert_eq!(iou, token_iou(&b, &a));
        prop_assert!((f1 - rouge1(&b, &a, RougeMode::F1)).abs() < 1e-12);
        prop_assert_eq!(exact_match(&a, &b, MatchPolicy::Text), exact_match(&b, &a, MatchPolicy::Text));
        prop_assert!(f1 <= 1.0 && rouge1(&a, &b, RougeMode::Recall) <= 1.0);
        if exact_match(&a, &b, MatchPolicy::Text) == 1.0 {
            prop_assert_eq!(iou, 1.0);
            prop_assert_eq!(f1, 1.0);
        }
        prop_assert_eq!(token_iou(&a, &a), 1.0);
        prop_assert_eq!(exact_match(&a, &a, MatchPolicy::Raw), 1.0);
    }

    #[test]
    fn splits_partition_each_domain(
        seed in any::<u64>(),
        fractions in prop_oneof![Just((0.8, 0.1, 0.1)), Just((0.6, 0.2, 0.2)), Just((0.5, 0.25, 0.25)), Just((1.0, 0.0, 0.0))],
        rot in 0usize..51,
    ) {
        let all = sample();
        let opts = SplitOptions { seed, fractions, superlatives_only: false };
        let s = split(&all, &opts).unwrap();
        let mut rotated = all.clone();
        rotated.rotate_left(rot);
        prop_assert_eq!(&split(&rotated, &opts).unwrap(), &s);

        let mut ids: Vec<&str> = s.train.iter().chain(&s.dev).chain(&s.test).map(|i| i.id.as_str()).collect();
        ids.sort();
        let mut expected: Vec<&str> = all.iter().map(|i| i.id.as_str()).collect();
        expected.sort();
        prop_assert_eq!(ids, expected);

        let mut per: BTreeMap<_, [usize; 4]> = BTreeMap::new();
        for i in &all { per.entry(i.domain).or_default()[0] += 1; }
        for i in &s.dev { per.get_mut(&i.domain).unwrap()[1] += 1; }
        for i in &s.test { per.get_mut(&i.domain).unwrap()[2] += 1; }
        for (_, [n, dev, test, _]) in per {
            prop_assert_eq!(dev, (n as f64 * fractions.1 + 1e-9).floor() as usize);
            prop_assert_eq!(test, (n as f64 * fractions.2 + 1e-9).floor() as usize);
        }
    }

    #[test]
    fn scores_ignore_prediction_order(
        picks in subsequence((0usize..42).collect::<Vec<_>>(), 1..42),
        rot in 0usize..42,
        slot in prop_oneof![Just(Slot::Target), Just(Slot::Cs), Just(Slot::Property), Just(Slot::Anchor)],
    ) {
        let gold: Vec<_> = sample().into_iter().filter(|i| i.is_superlative).collect();
        let mut preds: Vec<PredictionRecord> = picks
            .iter()
            .map(|&k| {
                let inst = &gold[k];
                let text = slot.gold(inst.frame.as_ref().unwrap());
                let prediction = if k % 3 == 0 { format!("{text} extra") } else { text };
                PredictionRecord { instance_id: inst.id.clone(), slot, prediction }
            })
            .collect();
        let before = score_predictions(&gold, &preds).unwrap();
        let n = preds.len();
        preds.rotate_left(rot % n);
        preds.reverse();
        prop_assert_eq!(score_predictions(&gold, &preds).unwrap(), before);
    }
}
