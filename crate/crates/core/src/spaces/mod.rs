//! Valuation-independent families over a presented subfield `K ⊆ L`.

use thiserror::Error;

use crate::field::FieldError;
use crate::group::{GroupElement, GroupError};
use crate::series::SeriesError;

mod independence;
mod nearest;
mod orthogonal;
mod presentation;

#[cfg(test)]
mod tests;

pub use independence::{
    check_normalized, is_valuation_independent, is_valuation_independent_over, normalize,
    residue_profile, DependenceWitness, IndependenceVerdict, NormalCondition, NormalizationCheck,
    Normalized,
};
pub use nearest::{
    berlekamp_massey, immediacy_evidence, nearest_point, nearest_point_normalizing,
    nearest_point_stream, Achieved, EvidenceStep, ImmediacyEvidence, NearestPointResult,
    StreamResult, MAX_REDUCTION_STEPS, RECOGNITION_MARGIN,
};
pub use orthogonal::{
    basis_exchange, orthogonalize, relative_basis, Adjoined, ExchangeResult, Orthogonalized,
    Orthogonalizer, RelativeBasis,
};
pub use presentation::{PresentationKind, SubfieldPresentation};

#[derive(Debug, Clone, Error)]
pub enum SpaceError {
    /// 1-based position of a member that is exactly zero.
    #[error("family member {0} is zero")]
    ZeroElementInFamily(usize),
    #[error("family is not valuation independent: {}", .0.combination)]
    NotIndependent(Box<DependenceWitness>),
    #[error("a family member vanishes below {0}; raise the precision")]
    Inconclusive(GroupElement),
    #[error("the subspace basis is not certified valuation independent")]
    UncertifiedSubspace,
    #[error("basis is not normalized: {0} fails for members {1:?}")]
    NotNormalized(NormalCondition, Vec<usize>),
    #[error("element is not in the span")]
    NotInSpan,
    #[error("element already lies in the subspace")]
    InSubspace,
    #[error("probe lies in the base field")]
    ProbeInK,
    #[error("obstruction at generator {index}: {detail}")]
    Obstruction { index: usize, detail: String },
    #[error("span is not closed under multiplication: {0}")]
    NotFieldClosed(String),
    #[error("value group of the base field is not cofinal")]
    NotCofinal,
    #[error("precision exhausted at {0}")]
    PrecisionExhausted(GroupElement),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("{0} is not in the value group of the base field")]
    NotInValueGroup(GroupElement),
    #[error("{0} is not in the residue field of the base field")]
    NotInResidueSubfield(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Field(#[from] FieldError),
}
