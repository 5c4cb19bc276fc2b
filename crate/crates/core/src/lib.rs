//! Structural matrix algebras `M(ρ, k)`, their flags, automorphisms and good
//! group gradings.
//!
//! Indices are 0-based throughout the library; text formats and reports are
//! 1-based.

pub mod antichain;
pub mod classify;
pub mod field;
pub mod fixtures;
pub mod grading;
pub mod group;
pub mod io;
pub mod oracle;
pub mod poset;
pub mod snf;
pub mod structmat;

use thiserror::Error;

pub use antichain::{Antichain, AntichainLattice, LatticeError, PosetAutomorphism};
pub use field::{FieldError, FpMatrix, PrimeField};
pub use group::{FiniteGroup, GroupError, GroupSpec};
pub use classify::{classify_orbits, end_graded_iso, Classification, ClassifyError};
pub use grading::{all_trivial_abelian, all_trivial_for_group, AbelianTriviality, GroupTriviality, LabelingError, TransitiveLabeling};
pub use io::{parse_preorder, ParseError};
pub use poset::{Closure, PosetError, Preorder, QuotientPoset};
pub use structmat::{AlgebraError, AutoTriple, ScalarTransitive, StructAlgebra, StructMatrix};

/// An exhaustive search would exceed its budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("search needs {required} candidates but the budget is {budget}")]
pub struct BudgetExceeded {
    pub required: u128,
    pub budget: u64,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Labeling(#[from] LabelingError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error(transparent)]
    Parse(#[from] ParseError),
}
