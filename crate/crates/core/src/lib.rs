//! Exact obliteration calculus for systems of low-degree forms.
//!
//! The crate is generic over the coefficient field ([`scalar::Field`]); the
//! aliases below fix the common choices.

pub mod bounds;
pub mod error;
pub mod linalg;
pub mod polarcone;
pub mod polyring;
pub mod scalar;
pub mod solver;
pub mod solvfield;
pub mod typecalc;

pub use error::{BoundError, CertError, ConeError, FieldError, ParseError, PolyError, SolveError};
pub use polyring::{parse_poly, polarize, MultiPoly, UniPoly};
pub use scalar::{Field, Rational};
pub use solvfield::{FieldContext, FiniteContext, Fq, NumericContext, Radical, RadicalCertificate, F5, F7};
pub use typecalc::{DegreeVector, TypeVector};

pub type QPoly = MultiPoly<Rational>;
