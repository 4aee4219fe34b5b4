use std::fmt::Display;
use std::fs;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use supersem_core::analysis::{
    challenge_report, entropy_report, parse_jsonl, preference_report, BeamPrediction, ChallengeItem, EntropyBase,
    LogProbRecord,
};
use supersem_core::corpus::{
    self, implicit_arg_rate, np_relation_overlap, parse_relations, split, AnnotatedInstance, Corpus, Rate, SplitOptions,
};
use supersem_core::detector::{gold, Candidate, Detector, Lexicon};
use supersem_core::eval::{iaa_report, parse_predictions, score_predictions_with};
use supersem_core::frame::{classify_set_expr, parse_frame_notation, serialize_frame};
use supersem_service::api::sample_pairs;
use supersem_service::{parse_documents, Document, Store, StoreConfig};

use crate::config::{parse_fractions, Config};
use crate::{Cli, CliError, Command, Table};

type Result<T> = std::result::Result<T, CliError>;

fn data_err(e: impl Display) -> CliError {
    CliError::Data(e.to_string())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

fn write_json(path: Option<&PathBuf>, value: &impl Serialize) -> Result<()> {
    match path {
        Some(p) => {
            let mut text = serde_json::to_string_pretty(value).map_err(data_err)?;
            text.push('\n');
            write(p, &text)
        }
        None => Ok(()),
    }
}

fn load_corpus(path: &Path, cfg: &Config) -> Result<Corpus> {
    Ok(corpus::load_str(&read(path)?, &cfg.load_options()))
}

/// Loads a corpus and fails on any error-severity issue.
fn load_clean(path: &Path, cfg: &Config) -> Result<Vec<AnnotatedInstance>> {
    let c = load_corpus(path, cfg)?;
    let errors: Vec<String> = c.report.violations().map(ToString::to_string).collect();
    if !errors.is_empty() {
        return Err(CliError::Data(format!(
            "{}: {} invalid line(s)\n{}",
            path.display(),
            errors.len(),
            errors.join("\n")
        )));
    }
    Ok(c.instances)
}

fn load_documents(path: &Path) -> Result<Vec<Document>> {
    parse_documents(&read(path)?).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn load_candidates(path: &Path) -> Result<Vec<Candidate>> {
    parse_jsonl(&read(path)?).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn detector(adjectives: Option<&PathBuf>) -> Result<Detector> {
    let mut lexicon = Lexicon::bundled();
    if let Some(p) = adjectives {
        lexicon.extend_adjectives(&read(p)?);
    }
    Ok(Detector::new(lexicon))
}

fn store_config(cfg: &Config, journal: Option<PathBuf>) -> StoreConfig {
    StoreConfig {
        roles: cfg.roles.clone(),
        strict: cfg.strict,
        window_before: cfg.window_before,
        window_after: cfg.window_after,
        journal,
        ..StoreConfig::default()
    }
}

fn rate_line(name: &str, r: Rate) -> String {
    match r.ratio() {
        Some(x) => format!("{name:<28} {}/{} = {:.1}%\n", r.numerator, r.denominator, 100.0 * x),
        None => format!("{name:<28} {}/{} = n/a\n", r.numerator, r.denominator),
    }
}

pub fn run(cli: Cli) -> Result<()> {
    let cfg = Config::load(cli.config.as_deref())?;
    let json = cli.json.as_ref();
    match cli.command {
        Command::Detect {
            input,
            out,
            adjectives,
            marked,
        } => {
            let det = detector(adjectives.as_ref())?;
            if let Some(marked) = marked {
                let sentences = gold::parse_marked(&read(&marked)?).map_err(data_err)?;
                let report = gold::evaluate_recall(&det, &sentences);
                print!(
                    "sentences {}\ntriggers {} found {} recall {:.4}\nquantifiers {} flagged {} rate {:.4}\nextra {}\n",
                    report.sentences,
                    report.triggers,
                    report.found,
                    report.recall(),
                    report.quantifiers,
                    report.quantifiers_flagged,
                    report.flag_rate(),
                    report.extra
                );
                for m in &report.misses {
                    println!("miss {m}");
                }
                return write_json(json, &report);
            }
            let docs = load_documents(&input)?;
            let per_doc: Vec<Vec<Candidate>> = docs.par_iter().map(|d| det.detect_document(&d.id, &d.text)).collect();
            let mut text = String::new();
            for c in per_doc.iter().flatten() {
                text.push_str(&serde_json::to_string(c).map_err(data_err)?);
                text.push('\n');
            }
            let total: usize = per_doc.iter().map(Vec::len).sum();
            let flagged = per_doc.iter().flatten().filter(|c| c.filtered).count();
            match &out {
                Some(p) => write(p, &text)?,
                None => print!("{text}"),
            }
            eprintln!("{} documents, {total} candidates, {flagged} flagged", docs.len());
            write_json(
                json,
                &json!({ "documents": docs.len(), "candidates": total, "flagged": flagged }),
            )
        }

        Command::Validate { input, non_strict } => {
            let mut cfg = cfg;
            cfg.strict &= !non_strict;
            let c = load_corpus(&input, &cfg)?;
            for issue in &c.report.issues {
                println!("{issue}");
            }
            let errors = c.report.violations().count();
            let warnings = c.report.warnings().count();
            println!(
                "{} instances loaded, {errors} error(s), {warnings} warning(s)",
                c.instances.len()
            );
            write_json(json, &c.report)?;
            if errors > 0 {
                return Err(CliError::Data(format!(
                    "{}: {errors} validation error(s)",
                    input.display()
                )));
            }
            Ok(())
        }

        Command::Stats {
            input,
            table,
            relations,
            top,
        } => {
            let instances = load_clean(&input, &cfg)?;
            let stats = corpus::stats(&instances, &cfg.light_verbs);
            match table {
                Table::Table1 => print!("{}", stats.table1()),
                Table::Fig2 => print!("{}", stats.fig2()),
                Table::Fig3 => print!("{}", stats.fig3(top)),
                Table::Fig4 => print!("{}", stats.fig4(top)),
                Table::Predicates => print!("{}", stats.predicate_table(top)),
                Table::Discourse => {
                    let implicit = implicit_arg_rate(&instances);
                    print!("{}", rate_line("implicit CS arguments", implicit));
                    let overlap = match &relations {
                        Some(p) => {
                            let rels = parse_relations(&read(p)?).map_err(data_err)?;
                            let r = np_relation_overlap(&instances, &rels);
                            print!("{}", rate_line("NP relation overlap", r));
                            Some(r)
                        }
                        None => None,
                    };
                    return write_json(
                        json,
                        &json!({ "implicit_args": implicit, "np_relation_overlap": overlap }),
                    );
                }
            }
            write_json(json, &stats)
        }

        Command::Split {
            input,
            out_dir,
            seed,
            fractions,
            superlatives_only,
        } => {
            let fractions = match fractions {
                Some(f) => parse_fractions(&f).map_err(CliError::Usage)?,
                None => cfg.fractions,
            };
            let options = SplitOptions {
                seed: seed.unwrap_or(cfg.seed),
                fractions,
                superlatives_only,
            };
            let instances = load_clean(&input, &cfg)?;
            let splits = split(&instances, &options).map_err(|e| CliError::Usage(e.to_string()))?;
            fs::create_dir_all(&out_dir)
                .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", out_dir.display())))?;
            let parts = [("train", &splits.train), ("dev", &splits.dev), ("test", &splits.test)];
            let mut summary = serde_json::Map::new();
            for (name, part) in parts {
                write(&out_dir.join(format!("{name}.jsonl")), &corpus::export(part))?;
                let ids: Vec<&str> = part.iter().map(|i| i.id.as_str()).collect();
                println!("{name:<6} {}", part.len());
                summary.insert(name.to_string(), json!({ "count": part.len(), "ids": ids }));
            }
            summary.insert("seed".into(), json!(options.seed));
            write_json(json, &summary)
        }

        Command::Score { gold, pred } => {
            let gold = load_clean(&gold, &cfg)?;
            let preds = parse_predictions(&read(&pred)?).map_err(data_err)?;
            let report = score_predictions_with(&gold, &preds, cfg.normalization).map_err(data_err)?;
            print!("{}", report.render());
            write_json(json, &report)
        }

        Command::Iaa { a, b, sample, seed } => {
            let left = load_clean(&a, &cfg)?;
            let right = load_clean(&b, &cfg)?;
            let (left, right) = match sample {
                Some(n) => {
                    let mut l = left;
                    let mut r = right;
                    l.sort_by(|x, y| x.id.cmp(&y.id));
                    r.sort_by(|x, y| x.id.cmp(&y.id));
                    sample_pairs(l, r, n, seed.unwrap_or(cfg.seed))
                }
                None => (left, right),
            };
            let report = iaa_report(&left, &right).map_err(data_err)?;
            print!("{}", report.render());
            write_json(json, &report)
        }

        Command::Entropy { beams, base } => {
            let base: EntropyBase = match base {
                Some(b) => b.parse().map_err(CliError::Usage)?,
                None => cfg.entropy_base,
            };
            let beams: Vec<BeamPrediction> = parse_jsonl(&read(&beams)?).map_err(data_err)?;
            let report = entropy_report(&beams, &cfg.light_verbs, base).map_err(data_err)?;
            print!("{}", report.render());
            write_json(json, &report)
        }

        Command::Prefs { input } => {
            let records: Vec<LogProbRecord> = parse_jsonl(&read(&input)?).map_err(data_err)?;
            let report = preference_report(&records).map_err(data_err)?;
            print!("{}", report.render());
            write_json(json, &report)
        }

        Command::Challenge { items, beams, k } => {
            if k == 0 {
                return Err(CliError::Usage("--k must be at least 1".into()));
            }
            let items: Vec<ChallengeItem> = parse_jsonl(&read(&items)?).map_err(data_err)?;
            let beams: Vec<BeamPrediction> = parse_jsonl(&read(&beams)?).map_err(data_err)?;
            let report = challenge_report(&items, &beams, &cfg.light_verbs, k).map_err(data_err)?;
            print!("{}", report.render());
            write_json(json, &report)
        }

        Command::Notation { text } => {
            let expr = parse_frame_notation(&text).map_err(data_err)?;
            let canonical = serialize_frame(&expr);
            let kind = classify_set_expr(&expr, &cfg.light_verbs);
            println!("{canonical}\n{}", kind.label());
            write_json(json, &json!({ "canonical": canonical, "semantic_type": kind }))
        }

        Command::Serve {
            docs,
            corpus: corpus_path,
            candidates,
            journal,
            assignments,
            addr,
        } => {
            let addr: SocketAddr = addr
                .parse()
                .map_err(|e| CliError::Usage(format!("bad --addr {addr:?}: {e}")))?;
            let det = Detector::default();
            let config = store_config(&cfg, journal);
            let store = match (docs, corpus_path) {
                (Some(docs), _) => {
                    let docs = load_documents(&docs)?;
                    match candidates {
                        Some(c) => Store::from_candidates(docs, load_candidates(&c)?, &det, config),
                        None => Store::from_documents(docs, &det, config),
                    }
                }
                (None, Some(c)) => Store::from_corpus(&load_clean(&c, &cfg)?, "gold", &det, config),
                (None, None) => return Err(CliError::Usage("give --docs or --corpus".into())),
            }
            .map_err(data_err)?;
            if let Some(p) = assignments {
                assign(&store, &read(&p)?)?;
            }
            let _ = tracing_subscriber::fmt().with_writer(std::io::stderr).try_init();
            let runtime = tokio::runtime::Runtime::new().map_err(data_err)?;
            runtime
                .block_on(supersem_service::serve(Arc::new(store), addr))
                .map_err(|e| CliError::Usage(format!("cannot serve on {addr}: {e}")))
        }

        Command::Export {
            docs,
            journal,
            candidates,
            annotator,
            out,
        } => {
            if !journal.is_file() {
                return Err(CliError::Usage(format!("journal {} does not exist", journal.display())));
            }
            let det = Detector::default();
            let docs = load_documents(&docs)?;
            let config = store_config(&cfg, Some(journal));
            let store = match candidates {
                Some(c) => Store::from_candidates(docs, load_candidates(&c)?, &det, config),
                None => Store::from_documents(docs, &det, config),
            }
            .map_err(data_err)?;
            let instances = store.export(annotator.as_deref());
            let text = corpus::export(&instances);
            match &out {
                Some(p) => write(p, &text)?,
                None => print!("{text}"),
            }
            let superlatives = instances.iter().filter(|i| i.is_superlative).count();
            eprintln!("{} instances exported, {superlatives} superlative", instances.len());
            write_json(
                json,
                &json!({ "instances": instances.len(), "superlatives": superlatives }),
            )
        }
    }
}

/// Applies `annotator<TAB>instance_id` lines; `#` lines are comments.
fn assign(store: &Store, text: &str) -> Result<()> {
    let mut by_annotator: std::collections::BTreeMap<&str, Vec<String>> = Default::default();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (who, id) = line.split_once('\t').ok_or_else(|| {
            CliError::Data(format!(
                "assignments line {}: expected annotator<TAB>instance_id",
                i + 1
            ))
        })?;
        by_annotator.entry(who.trim()).or_default().push(id.trim().to_string());
    }
    for (who, ids) in by_annotator {
        store.assign(who, ids).map_err(data_err)?;
    }
    Ok(())
}
