//! Criterion benchmarks for `hypercat-core`; see `benches/`.
