//! Criterion benchmarks for the work schemes and Leggett-Garg evaluators.
