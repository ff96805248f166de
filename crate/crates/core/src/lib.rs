//! Certification of strongest nonlocality for sets of GHZ-like states.
//!
//! A set is described by [`StateSet`]: tripartite local dimensions plus a
//! list of [`GhzTuple`]s, each expanding into `w` orthonormal Fourier
//! superpositions of `w` computational kets. The crate offers
//!
//! * generators for the known constructions ([`constructions`]),
//! * validators for the structural hypotheses ([`state_model`]),
//! * partition graphs and their connectivity ([`graphs`]),
//! * an exact linear-algebra oracle for orthogonality-preserving POVMs
//!   ([`oracle`]),
//! * and a certifier combining the two routes ([`certifier`]).

pub mod arith;
pub mod certifier;
pub mod constructions;
pub mod graphs;
pub mod linalg;
pub mod oracle;
pub mod state_model;

pub use arith::{Arithmetic, ArithmeticMode, GaussRational};
pub use certifier::{certify, certify_via_graphs, certify_with, CertReport, CertifyOptions, Method, Verdict};
pub use constructions::Construction;
pub use graphs::{build_graph, build_path_graph, connected_components, is_connected, to_dot, PartitionGraph};
pub use oracle::{oracle_all, oracle_verdict, OracleOptions, OracleOutcome, OracleVerdict};
pub use state_model::{GhzTuple, Ket, Partition, StateSet, StateVector, SystemDims};
