//! Benchmark-only crate; see benches/evaluators.rs.
