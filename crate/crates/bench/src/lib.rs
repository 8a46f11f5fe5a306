//! Bench-only crate; see `benches/protocols.rs`.
