//! Matrix Lie algebras, subalgebras and directed families of ideals.

mod algebra;
mod family;
mod subalgebra;

pub use algebra::{bracket, verify_algebra, verify_named_algebra, MatrixLieAlgebra};
pub use family::{
    inclusion_matrix, intersect_with_ideal, verify_directed_family, DirectedIdealFamily,
    FamilyReport, UpperBound,
};
pub use subalgebra::{
    derived_series, is_ideal, is_ideal_of, is_solvable, is_solvable_algebra, Subalgebra,
};
