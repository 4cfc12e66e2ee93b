//! Criterion benchmarks for `vqsel-core`; see `benches/`.
