//! Monochromatic progressions near zero.
//!
//! Given a finite coloring of the rationals in `(0, ε)`, this crate finds
//! and verifies monochromatic arithmetic, geo-arithmetic and polynomial
//! configurations by transporting witnesses from finite Hales–Jewett-type
//! searches into `(0, ε)` through explicit exact encodings.

pub mod certificate;
pub mod coloring;
pub mod engine;
pub mod exactnum;
pub mod phj;
pub mod pipelines;
pub mod words;

pub use certificate::{CertificateError, CertificateKind, VerifyFailure, Witness, WitnessCertificate};
pub use coloring::{parse_coloring, Color, ColoringError, ColoringKind, ColoringSpec};
pub use engine::{ColorCache, ExhaustReason, Exhausted, SearchBudget, SearchOutcome};
pub use exactnum::{NumError, Rational};
pub use pipelines::{
    ap_near_zero, direct_poly_witness, geo_arith_near_zero, parse_polynomials, poly_vdw_near_zero, ApWitness,
    GeoWitness, PipelineError, PolyWitness, Polynomial,
};
