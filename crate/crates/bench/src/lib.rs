//! Criterion benchmarks for the toolkit; see `benches/toolkit.rs`.
