//! The Green ring: elements, the rewriting presentation, and the dictionary
//! between indecomposables and normal-form polynomials.

mod dict;
mod element;
mod parse;
mod rewrite;

#[cfg(test)]
mod tests;

use thiserror::Error;

use crate::modcat::ModError;

pub use dict::{band_corr_closed_form, closed_form_agreement, derive_tables, proj_closed_form, DerivedTables, EtaShape, SCHEMA_VERSION};
pub use element::{Monomial, RingElement, WFactor};
pub use parse::parse_element;
pub use rewrite::{binom, c_half, lemma32_check, simple_poly, w_etas, Presentation};

#[derive(Debug, Error)]
pub enum RingError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("missing table entry: {0}")]
    MissingTableEntry(String),
    #[error("table cache is corrupt: {0}")]
    Corrupt(String),
    #[error("table derivation failed: {0}")]
    Derivation(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Oracle(#[from] ModError),
}
