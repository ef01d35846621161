//! Spectra of algebras presented by a directed family of solvable ideals.
//!
//! The spectra `σ(I_α)` of the members form an inverse system under
//! restriction of characters; the spectrum of the presented algebra is the
//! inverse limit, each compatible tuple being glued into one character of the
//! parent. The reports in this module cross-check the limit against an
//! independent characterization, against other presentations, and against
//! the projection property.

mod checks;
mod inverse;
mod system;

pub use checks::{
    check_presentation_independence, glue_tuple, limit_report, limit_spectrum,
    uniqueness_audit, verify_projection_property, AuditTargets, IdealAgreement, LimitChecks,
    LimitReport, PairProjection, PresentationReport, ProjectionReport, UniquenessReport,
};
pub use inverse::{glue_character, inverse_limit, limit_by_characterization, InverseLimitSpectrum};
pub use system::{build_inverse_system, PointMap, SpectrumInverseSystem};
