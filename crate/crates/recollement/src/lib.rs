//! Gluing complexes over an open/closed split of a finite space.
//!
//! A complex on a space with a closed subspace and open complement is
//! equivalent to a triple: its closed restriction, its open restriction,
//! and a comparison map from the former into the closed restriction of the
//! open pushforward of the latter.  This crate implements that equivalence
//! in both directions, certifies the round trip sample by sample, glues
//! maps and adjunctions through it, and decomposes mapping complexes along
//! the same split.  The same interface is instantiated a second time for
//! a formal split whose open side is a system of cyclic representation
//! levels, so constructions written against the interface run in both
//! worlds.

mod context;
mod equivariant;
mod homs;
mod mapping;
mod sheaf_ctx;
mod triple;
mod underived;

pub use context::{
    context_invariants, specialization, AdjunctionPart, CatPart, GluedAdjunction, GluedFunctor,
    MapOf, Obj, Recollement, TripleOf,
};
pub use equivariant::{
    constant_system, specialization_map, tensor_adjunction, tensor_system, vanishing_cone,
    EqRecollement, EqTriple, EqTripleCat, EqTripleMap, SysCat, SysMap, VectCat,
};
pub use homs::{derived_sh_hom, fiber_of, pair_map, proj_summand, sum_map, ShHomSpace};
pub use mapping::{
    eq_mapping_decomposition, mapping_decomposition, EqMappingReport, MappingReport,
    SystemHomSpace,
};
pub use sheaf_ctx::{SheafRecollement, ShCat};
pub use triple::{
    decompose, glue_map, jointly_conservative, reconstruct, roundtrip, triple_from_closed,
    triple_from_open, Decomposition, Reconstruction, RoundTrip, Triple,
};
pub use underived::{
    decomposed_map_adjunction, pullback_part, strict_counit, strict_unit, DecomposedMap,
    SectionFunctor, StrictSheafRecollement,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum RecError {
    #[error("incompatible gluing data: {0}")]
    NotCompatible(String),
    #[error("comparison map is not invertible: {0}")]
    NotIso(String),
    #[error("comparison map is not a quasi-isomorphism: {0}")]
    NotQuasiIso(String),
    #[error("mismatch: {0}")]
    Mismatch(String),
}
