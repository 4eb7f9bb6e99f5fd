//! Criterion benchmarks for the `hypertet` kernels; see `benches/kernels.rs`.
