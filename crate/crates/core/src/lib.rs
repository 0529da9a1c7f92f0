//! Product vectors whose partial conjugates land in a second subspace.
//!
//! Given subspaces `D` and `E` of `C^n ⊗ C^m` with codimensions `k` and `ℓ`,
//! the question is whether some product vector `x ⊗ y ∈ D` has its partial
//! conjugate `x̄ ⊗ y ∈ E`. This crate provides
//!
//! * [`obstruction`]: the exact integer criterion deciding when such a vector
//!   always exists, plus enumeration of the undecided (exceptional) cases;
//! * [`solver`]: a multi-start numerical search for witnesses;
//! * [`constructions`]: explicit witness-free pairs and a witness recipe;
//! * [`edge`]: partial transpose, PPT tests, edge-state type tables and the
//!   trace-map computation for the 3 ⊗ 3 example.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod constructions;
pub mod edge;
pub mod error;
pub mod linalg;
pub mod obstruction;
pub mod solver;
pub mod tensor;

pub use error::{Error, Result};
pub use obstruction::{condition_c, ConditionVerdict, Quadruple, VerdictKind};
pub use solver::{find_pair, ProductPair, SolveOutcome, SolveStatus, SolverConfig};
pub use tensor::{CMat, CVec, Dim, Subspace, C64};
