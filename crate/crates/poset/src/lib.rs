//! Finite topological spaces (posets), sheaf complexes on them, injective
//! resolutions, and the six operations with their localization triangles.

mod complex;
pub mod gen;
mod ops;
mod poset;
mod resolve;
mod sheaf;

pub use poset::{
    covering_map, deck_generator, poset_pullback, pseudocircle, pseudodisk,
    OpenClosedDecomposition, Poset, PosetMap,
};
pub use complex::{ShComplex, ShMap};
pub use ops::{
    closed_restrict, closed_unit, derived_open_pushforward, exceptional_pullback, extend_zero_closed,
    extend_zero_open, external_tensor, first_triangle, open_counit, open_restrict, open_unit,
    ExceptionalPullback, OpenUnit,
};
pub use resolve::{
    base_change_map, derived_global_sections, derived_pushforward, injective_resolution,
    pulled_shapes, pushforward_equivariance, pushforward_map, pushforward_unit, recognize_injective,
    resolution_comparison, resolve, resolve_map, section_from_stalk, sections_kernel, sections_map,
    sections_of, sections_pull, sections_restriction, Pushforward, Resolved, SectionModel,
    StructFactor,
};
pub use sheaf::{nat_element, nat_space, Sheaf, SheafMap};

#[derive(Debug, thiserror::Error)]
pub enum SpaceError {
    #[error("invalid poset: {0}")]
    BadPoset(String),
    #[error("invalid monotone map: {0}")]
    BadMap(String),
    #[error("invalid sheaf: {0}")]
    BadSheaf(String),
    #[error("invalid sheaf map: {0}")]
    BadSheafMap(String),
    #[error("{0}")]
    Algebra(#[from] tame_complex::ComplexError),
    #[error("{0}")]
    Unsupported(String),
}
