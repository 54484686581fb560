//! Valuation-independent bases in valued function fields and Hahn series.

pub mod extension;
pub mod field;
pub mod group;
pub mod series;
pub mod spaces;

pub use extension::{
    analyze_extension, analyze_space, complete_and_approximate, monomial, ramification_and_residue,
    span_closure_basis, standard_basis, Approximation, ExtensionReport, ExtensionVerdict,
    RamificationResidue, SpanClosure, StandardBasis, DEFAULT_DEGREE_CAP,
};
pub use field::{FieldElement, FieldError, ResidueField, ResidueProfile};
pub use group::{GroupElement, GroupError, Index, OrderedGroup, Subgroup};
pub use series::{
    Ambient, Expansion, Known, Precision, Scalar, Series, SeriesError, Term, Valuation,
};
pub use spaces::{
    basis_exchange, check_normalized, immediacy_evidence, is_valuation_independent,
    is_valuation_independent_over, nearest_point, nearest_point_normalizing, nearest_point_stream,
    normalize, orthogonalize, relative_basis, residue_profile, Achieved, Adjoined,
    DependenceWitness, EvidenceStep, ExchangeResult, ImmediacyEvidence, IndependenceVerdict,
    NearestPointResult, NormalCondition, NormalizationCheck, Normalized, Orthogonalized,
    Orthogonalizer, PresentationKind, RelativeBasis, SpaceError, StreamResult,
    SubfieldPresentation,
};
