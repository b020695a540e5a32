//! Bounded cochain complexes of finite-dimensional vector spaces over a
//! prime field: matrices, complexes, chain maps, cones, tensor and hom
//! complexes, cohomology with canonical bases, and seeded generators.

mod complex;
mod field;
pub mod gen;
mod hom;
mod map;
mod matrix;

pub use complex::{tensor_layout, CohomologyTable, Complex};
pub use field::Field;
pub use hom::{hom_complex, hom_element_as_chain_map, hom_element_to_maps, hom_layout, maps_to_hom_element};
pub use map::{cone_map, ChainMap};
pub use matrix::{extend_basis, Matrix};

#[derive(Debug, thiserror::Error)]
pub enum ComplexError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("shape error in {what}: {detail}")]
    Shape { what: String, detail: String },
    #[error("operands live over distinct fields")]
    FieldMismatch,
    #[error("d . d is nonzero out of degree {degree}")]
    NotAComplex { degree: i64 },
    #[error("map fails to commute with the differentials at degree {degree}")]
    NotChainMap { degree: i64 },
    #[error("incompatible arguments: {0}")]
    Incompatible(String),
}
