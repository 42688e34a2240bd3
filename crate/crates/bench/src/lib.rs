//! Criterion benchmarks for the heckesum kernels live in `benches/`.
