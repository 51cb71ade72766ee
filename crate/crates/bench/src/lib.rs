//! Benchmarks for the geometry kernels live under `benches/`.
