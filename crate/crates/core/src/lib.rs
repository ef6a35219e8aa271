//! Finite models of diophantine approximation groups.
//!
//! The crate provides certified interval arithmetic over refinable real
//! oracles, an exact integral LLL engine with integer-relation and
//! simultaneous-approximation solvers, finite-prefix models of
//! approximation groups and their error terms, matrix independence
//! oracles, totally real number fields with the K-Dirichlet pigeonhole
//! construction, polynomial relation detection, Kronecker foliation
//! geometry, and bounded relation harnesses for classical transcendence
//! statements.

pub mod config;
pub mod dagroups;
pub mod error;
pub mod foliation;
pub mod lattice;
pub mod matrixdioph;
pub mod numeric;
pub mod numfield;
pub mod par;
pub mod poly;
pub mod polyapprox;
pub mod rigidity;
pub mod serial;

pub use config::Config;
pub use error::{Error, Result};
pub use numeric::{PrecisionReal, RealOracle};
