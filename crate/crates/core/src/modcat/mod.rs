//! Finite-dimensional weight modules, their morphisms and decompositions.

pub mod catalog;
pub mod hom;
pub mod label;
pub mod module;
pub mod split;

pub use catalog::Catalog;
pub use hom::{hom_space, is_isomorphic, is_isomorphic_to_local, HomSpace, IsoResult};
pub use label::{EtaParam, IndecLabel, Sign};
pub use module::{GradedMap, ModuleRep, Weight};
pub use split::{split_module, DecompResult, Summand};

use crate::cyclo::CycError;
use crate::hopf::HopfError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModError {
    #[error("shape mismatch")]
    ShapeMismatch,
    #[error("b and c do not act diagonalisably with cyclic weights")]
    NotWeightGraded,
    #[error("relation {0} fails")]
    InvalidRepresentation(String),
    #[error("subspace is not a submodule")]
    NotInvariant,
    #[error("parameter out of range: {0}")]
    Range(String),
    #[error("construction failed gate {0}")]
    ConstructionFailed(String),
    #[error("no splitting idempotent found for a decomposable module of dimension {0}")]
    NonSplitSemisimpleQuotient(usize),
    #[error("module of dimension {0} matches no catalogue label")]
    Unidentified(usize),
    #[error("isomorphism test inconclusive: {0}")]
    Inconclusive(String),
    #[error("no surjection from the projective cover")]
    CoverLiftFailed,
    #[error("no embedding into the injective envelope")]
    EnvelopeEmbedFailed,
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Cyc(#[from] CycError),
    #[error(transparent)]
    Hopf(#[from] HopfError),
}

#[cfg(test)]
mod tests;
