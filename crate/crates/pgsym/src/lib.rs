//! Symbolic parity game solving on binary decision diagrams.
//!
//! The crate bundles a self-contained BDD engine ([`bdd`]), the PGSolver text
//! format and explicit games ([`pgsolver`]), a BDD game encoding
//! ([`symbolic`]) with the set operations solvers need ([`ops`]), four
//! symbolic solvers ([`solvers`]), explicit reference solvers used as oracles
//! ([`oracle`]), a seeded random game generator ([`generator`]) and benchmark
//! fleet plumbing ([`fleet`]).

pub mod bdd;
pub mod fleet;
pub mod generator;
pub mod ops;
pub mod oracle;
pub mod pgsolver;
pub mod sample;
pub mod solvers;
pub mod symbolic;
