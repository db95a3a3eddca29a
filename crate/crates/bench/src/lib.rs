//! Criterion benchmarks for `betamat`; see `benches/`.
