//! Joint spectra of solvable matrix Lie algebras.
//!
//! A solvable Lie algebra `L` of `d × d` complex matrices acts on `X = C^d`.
//! A character `f` of `L` lies in the Taylor spectrum when the
//! Chevalley–Eilenberg complex of `L` with coefficients in `X ⊗ C_{-f}` fails
//! to be exact, and in the Słodkowski spectra when exactness fails in low or
//! high degrees. On top of that, [`limit`] builds spectra for algebras
//! presented as a directed family of solvable ideals, as the inverse limit of
//! the spectra of the members.

pub mod characters;
pub mod corpus;
pub mod error;
pub mod io;
pub mod koszul;
pub mod lie;
pub mod limit;
pub mod numeric;

pub use characters::{Character, WeightList};
pub use error::{Error, Result};
pub use koszul::{spectrum, ChevalleyEilenbergComplex, SpectrumKind, SpectrumResult};
pub use lie::{DirectedIdealFamily, MatrixLieAlgebra, Subalgebra};
pub use limit::{InverseLimitSpectrum, SpectrumInverseSystem};
pub use numeric::{Matrix, Scalar, ToleranceConfig};
