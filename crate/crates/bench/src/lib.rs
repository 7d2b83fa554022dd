//! Benchmarks for the densilift kernel live in `benches/`.
