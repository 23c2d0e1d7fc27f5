//! Criterion benchmarks for the `exchangeable` crate; see `benches/`.
