//! Criterion benchmarks for treemix-core live in `benches/`.
