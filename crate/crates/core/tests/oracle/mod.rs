//! Brute-force reference implementations of every metric and the
//! comparison against the library on the 50-item fixture. Shared by test
//! targets in several crates.
#![allow(dead_code)]

use serde::Deserialize;
use supersem_core::eval::{
    cohens_kappa, exact_match, role_arg_iou_accuracy, rouge1, token_iou, MatchPolicy, RougeMode,
};
use supersem_core::frame::{parse_frame_notation, Argument};

#[derive(Deserialize)]
pub struct Item {
    pub id: String,
    pub gold: String,
    pub pred: String,
    pub gold_event: String,
    pub pred_event: String,
    pub label_a: String,
    pub label_b: String,
}

pub fn fixture() -> Vec<Item> {
    std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/metric_fixture.jsonl"))
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

/// Maximal alphanumeric runs, lowercased.
pub fn oracle_tokens(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for c in s.chars() {
        if c.is_alphanumeric() {
            for l in c.to_lowercase() {
                cur.push(l);
            }
        } else if !cur.is_empty() {
            out.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

pub fn oracle_normalize(s: &str) -> String {
    let mut words: Vec<String> = Vec::new();
    for w in s.split_whitespace() {
        words.push(w.to_lowercase());
    }
    let joined = words.join(" ");
    let chars: Vec<char> = joined.chars().collect();
    let keep = |c: &char| c.is_alphanumeric();
    let first = chars.iter().position(keep);
    let last = chars.iter().rposition(keep);
    match (first, last) {
        (Some(a), Some(b)) => chars[a..=b].iter().collect(),
        _ => String::new(),
    }
}

pub fn oracle_em(g: &str, p: &str) -> f64 {
    if oracle_normalize(g) == oracle_normalize(p) {
        1.0
    } else {
        0.0
    }
}

fn unique(v: Vec<String>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for t in v {
        let mut seen = false;
        for u in &out {
            if *u == t {
                seen = true;
            }
        }
        if !seen {
            out.push(t);
        }
    }
    out
}

pub fn oracle_iou(g: &str, p: &str) -> f64 {
    let g = unique(oracle_tokens(g));
    let p = unique(oracle_tokens(p));
    if g.is_empty() && p.is_empty() {
        return 1.0;
    }
    let mut inter = 0;
    for a in &g {
        for b in &p {
            if a == b {
                inter += 1;
            }
        }
    }
    let union = g.len() + p.len() - inter;
    inter as f64 / union as f64
}

pub fn oracle_rouge(g: &str, p: &str) -> f64 {
    let g = oracle_tokens(g);
    let p = oracle_tokens(p);
    if g.is_empty() && p.is_empty() {
        return 1.0;
    }
    if g.is_empty() || p.is_empty() {
        return 0.0;
    }
    let mut used = vec![false; g.len()];
    let mut overlap = 0;
    for t in &p {
        for (i, u) in g.iter().enumerate() {
            if !used[i] && u == t {
                used[i] = true;
                overlap += 1;
                break;
            }
        }
    }
    if overlap == 0 {
        return 0.0;
    }
    let precision = overlap as f64 / p.len() as f64;
    let recall = overlap as f64 / g.len() as f64;
    2.0 * precision * recall / (precision + recall)
}

/// Repeatedly takes the best remaining same-role pair (lowest indices on
/// ties) until none is left.
pub fn oracle_role_acc(g: &[Argument], p: &[Argument]) -> f64 {
    if g.is_empty() {
        return 1.0;
    }
    let mut g_used = vec![false; g.len()];
    let mut p_used = vec![false; p.len()];
    let mut correct = 0;
    loop {
        let mut best: Option<(f64, usize, usize)> = None;
        for i in 0..g.len() {
            for j in 0..p.len() {
                if g_used[i] || p_used[j] || g[i].role != p[j].role {
                    continue;
                }
                let v = oracle_iou(&g[i].value, &p[j].value);
                if best.is_none_or(|(bv, _, _)| v > bv) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((v, i, j)) = best else { break };
        g_used[i] = true;
        p_used[j] = true;
        if v >= 0.5 {
            correct += 1;
        }
    }
    correct as f64 / g.len() as f64
}

pub fn oracle_kappa(a: &[String], b: &[String]) -> f64 {
    let mut labels: Vec<&String> = Vec::new();
    for l in a.iter().chain(b) {
        if !labels.contains(&l) {
            labels.push(l);
        }
    }
    let n = a.len() as f64;
    let mut table = vec![vec![0usize; labels.len()]; labels.len()];
    for k in 0..a.len() {
        let i = labels.iter().position(|l| *l == &a[k]).unwrap();
        let j = labels.iter().position(|l| *l == &b[k]).unwrap();
        table[i][j] += 1;
    }
    let mut po = 0.0;
    let mut pe = 0.0;
    for i in 0..labels.len() {
        po += table[i][i] as f64 / n;
        let row: usize = table[i].iter().sum();
        let col: usize = table.iter().map(|r| r[i]).sum();
        pe += (row as f64 / n) * (col as f64 / n);
    }
    if pe == 1.0 {
        return 1.0;
    }
    (po - pe) / (1.0 - pe)
}

pub const TOL: f64 = 1e-12;

/// Largest library/oracle difference per metric over the fixture.
pub fn compare(items: &[Item]) -> Result<[f64; 5], String> {
    let mut worst = [0.0f64; 5];
    for it in items {
        let g = parse_frame_notation(&it.gold_event).map_err(|e| format!("{}: {e}", it.id))?;
        let p = parse_frame_notation(&it.pred_event).map_err(|e| format!("{}: {e}", it.id))?;
        let diffs = [
            exact_match(&it.gold, &it.pred, MatchPolicy::Text) - oracle_em(&it.gold, &it.pred),
            token_iou(&it.gold, &it.pred) - oracle_iou(&it.gold, &it.pred),
            rouge1(&it.gold, &it.pred, RougeMode::F1) - oracle_rouge(&it.gold, &it.pred),
            role_arg_iou_accuracy(g.arguments(), p.arguments(), 0.5) - oracle_role_acc(g.arguments(), p.arguments()),
            0.0,
        ];
        for (w, d) in worst.iter_mut().zip(diffs) {
            *w = w.max(d.abs());
        }
    }
    let a: Vec<String> = items.iter().map(|i| i.label_a.clone()).collect();
    let b: Vec<String> = items.iter().map(|i| i.label_b.clone()).collect();
    let k = cohens_kappa(&a, &b).map_err(|e| e.to_string())?;
    worst[4] = (k - oracle_kappa(&a, &b)).abs();
    Ok(worst)
}
