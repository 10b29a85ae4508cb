//! Exact combinatorics of rank-3 matroids and line arrangements: modular
//! resonance, nets and multinets, cyclotomic bounds on Milnor fiber monodromy,
//! non-realizability certificates and `sl_2` flat connections.
//!
//! Enumeration kernels take an [`Exec`] and run on rayon when the `parallel`
//! feature is enabled (the default).

pub mod catalog;
pub mod cli;
pub mod exec;
pub mod finfield;
pub mod flatconn;
pub mod linalg;
pub mod matroid;
pub mod milnor;
pub mod nets;
pub mod obstruction;
pub mod oracle;
pub mod projective;
pub mod resonance;

pub use exec::Exec;
pub use finfield::{FiniteField, Scalar};
pub use matroid::{Flat, Matroid, MatroidError};
pub use resonance::{Cocycle, SubspaceBasis};
