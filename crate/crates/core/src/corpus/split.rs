use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{AnnotatedInstance, CorpusError, Domain};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitOptions {
    pub seed: u64,
    /// Train, dev and test fractions.
    pub fractions: (f64, f64, f64),
    /// Split only superlative instances, dropping the rest.
    pub superlatives_only: bool,
}

impl Default for SplitOptions {
    fn default() -> Self {
        SplitOptions {
            seed: 13,
            fractions: (0.8, 0.1, 0.1),
            superlatives_only: false,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Splits {
    pub train: Vec<AnnotatedInstance>,
    pub dev: Vec<AnnotatedInstance>,
    pub test: Vec<AnnotatedInstance>,
}

/// Stratified split: within each domain, `floor(n * dev)` instances go to
/// dev, `floor(n * test)` to test and the rest to train.
///
/// Each domain is sorted by id and shuffled with its own ChaCha stream of
/// `seed`, so results depend only on the seed and the set of instances, not
/// on input order.
pub fn split(instances: &[AnnotatedInstance], options: &SplitOptions) -> Result<Splits, CorpusError> {
    let (f_train, f_dev, f_test) = options.fractions;
    let sum = f_train + f_dev + f_test;
    if (sum - 1.0).abs() > 1e-9 || [f_train, f_dev, f_test].iter().any(|f| !(0.0..=1.0).contains(f)) {
        return Err(CorpusError::Fractions(sum));
    }
    let mut by_domain: BTreeMap<Domain, Vec<&AnnotatedInstance>> = BTreeMap::new();
    for inst in instances {
        if options.superlatives_only && !inst.is_superlative {
            continue;
        }
        by_domain.entry(inst.domain).or_default().push(inst);
    }
    let mut out = Splits::default();
    for (domain, mut group) in by_domain {
        group.sort_by(|a, b| a.id.cmp(&b.id));
        let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
        rng.set_stream(domain.index() as u64);
        group.shuffle(&mut rng);
        let n = group.len();
        let n_dev = floor_share(n, f_dev);
        let n_test = floor_share(n, f_test);
        let (dev, rest) = group.split_at(n_dev);
        let (test, train) = rest.split_at(n_test);
        out.dev.extend(dev.iter().map(|i| (*i).clone()));
        out.test.extend(test.iter().map(|i| (*i).clone()));
        out.train.extend(train.iter().map(|i| (*i).clone()));
    }
    Ok(out)
}

/// `floor(n * f)`, robust to binary representation error (0.1 * 10 is 1).
fn floor_share(n: usize, f: f64) -> usize {
    ((n as f64 * f) + 1e-9).floor() as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Span;

    fn corpus(domain: Domain, n: usize) -> Vec<AnnotatedInstance> {
        (0..n)
            .map(|i| AnnotatedInstance {
                id: format!("{domain}-{i:04}"),
                domain,
                doc_text: "x".into(),
                sentence_span: Span::new(0, 1),
                trigger_span: Span::new(0, 1),
                is_superlative: false,
                frame: None,
            })
            .collect()
    }

    #[test]
    fn ten_instances() {
        let s = split(&corpus(Domain::Reviews, 10), &SplitOptions::default()).unwrap();
        assert_eq!((s.train.len(), s.dev.len(), s.test.len()), (8, 1, 1));
    }

    #[test]
    fn floor_rule() {
        let s = split(&corpus(Domain::Wikipedia, 814), &SplitOptions::default()).unwrap();
        assert_eq!((s.train.len(), s.dev.len(), s.test.len()), (652, 81, 81));
    }

    #[test]
    fn bad_fractions() {
        let opts = SplitOptions {
            fractions: (0.8, 0.1, 0.2),
            ..Default::default()
        };
        assert!(matches!(split(&[], &opts), Err(CorpusError::Fractions(_))));
    }

    #[test]
    fn seeded() {
        let c = corpus(Domain::Dialogue, 50);
        let a = split(&c, &SplitOptions::default()).unwrap();
        assert_eq!(a, split(&c, &SplitOptions::default()).unwrap());
        let other = split(
            &c,
            &SplitOptions {
                seed: 99,
                ..Default::default()
            },
        )
        .unwrap();
        assert_ne!(a.dev, other.dev);
    }
}
