//! Exact lattice reduction and the solvers built on it.

mod basis;
pub mod linalg;
mod relation;
mod simul;

pub use basis::{lll_reduce, LatticeBasis};
pub use relation::{
    combination, exact_kernel, exact_linear_verifier, exact_relation, exact_system_relation, integer_relation, lattice_relation, system_relation, Exclusion,
    RelationCertificate, RelationStatus, Verifier,
};
pub use simul::{inhomogeneous_approx, simultaneous_approx, InhomogeneousApprox, SimultaneousApprox};
