//! Bieberbach groups `π ⊂ E(n)` on the standard lattice: holonomy closure,
//! validation, finite presentations and the real Bott family.

mod affine;
mod bott;
mod format;
mod group;
mod presentation;
mod validate;

pub use affine::AffineElement;
pub use bott::{
    bott_bits, bott_matrix_from_bits, check_bott_matrix, from_bott_matrix, standardize,
    standardize_with_basis,
};
pub use format::{parse_group, write_group, ParseError};
pub use group::{
    generate_holonomy, generate_holonomy_bounded, CrystalGroup, HolonomyGroup, DEFAULT_CLOSURE_BOUND,
};
pub use presentation::{presentation, Letter, Presentation, Word};
pub use validate::{
    element_in_group, torsion_free_check, validate, Bieberbach, Check, TorsionWitness, ValidationReport,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CrystalError {
    #[error("malformed group data: {0}")]
    Shape(String),
    #[error("holonomy generator {generator} does not have determinant ±1")]
    NotUnimodular { generator: usize },
    #[error("holonomy closure exceeds {bound} elements")]
    ClosureBound { bound: usize },
    #[error("translations span a lattice of rank {rank} only")]
    NotCocompact { rank: usize },
    #[error("not a Bott matrix: {0}")]
    BadMatrix(String),
    #[error("group failed validation")]
    Invalid(ValidationReport),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}
