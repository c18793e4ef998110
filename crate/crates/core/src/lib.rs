//! Exact computations on multi-vector spaces: finite unions of subspaces of
//! GF(p)^n with partially defined operations.
//!
//! * [`field`]: prime field scalars, dense matrices, RREF.
//! * [`subspace`]: canonical subspaces with sum, intersection and enumeration.
//! * [`multispace`]: chains, dependence, spans, greedy bases, the subspace
//!   criterion and both dimension formulas.
//! * [`oracle`]: brute-force reference implementations.
//! * [`search`]: random instances and the dimension formula auditor.
//! * [`instance`] and [`cli`]: the text file format and command-line driver.

pub mod cli;
pub mod error;
pub mod field;
pub mod instance;
pub mod multispace;
pub mod oracle;
pub mod search;
pub mod subspace;

pub use error::{Error, Result};
pub use field::{fp_inv, rref, solve_membership, FpMatrix, FpScalar, Prime, Rref};
pub use instance::{parse_instance, render_instance, InstanceError};
pub use multispace::{
    additive_formula_check, intersect_multispaces, is_closed_subset, is_multi_subspace, Caps,
    ChainTerm, Dependence, MultiVectorSpace, OperationPolicy, TaggedVector,
};
pub use subspace::{AmbientId, Subspace};
