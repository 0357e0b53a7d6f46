//! Criterion benchmarks for the lattice engines; see `benches/`.
