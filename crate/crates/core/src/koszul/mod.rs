//! Chevalley–Eilenberg complexes and the joint spectra they define.

mod complex;
mod exterior;
mod spectrum;

pub use complex::{
    build_complex, complex_statistics, reset_complex_statistics, ChevalleyEilenbergComplex,
    ComplexStatistics, COMPLEX_RESIDUAL_TOL,
};
pub use spectrum::{
    contract_report, homology_table, is_member, spectrum, verify_spectrum_contract,
    ContractReport, HomologyTable, SpectrumKind, SpectrumResult,
};
