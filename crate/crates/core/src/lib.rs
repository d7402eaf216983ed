//! Exact algebra for the generalized quantum Zernike Hamiltonians
//!
//! ```text
//! H_N = p² + Σ_{k=1..N} γ_k (q·p)^k
//! ```
//!
//! on the plane: normal-ordered Weyl-algebra arithmetic, the quadratic and
//! higher-order symmetries, the polynomial Higgs-type algebras they close,
//! the deformed-oscillator structure functions, the algebraic spectra that
//! follow from them, an independent graded-matrix check of those spectra,
//! and the curved-oscillator specializations.
//!
//! Most types are generic over the coefficient ring (see [`scalar`]); the
//! aliases below fix the instantiations used throughout.

pub mod error;
pub mod expr;
pub mod gaussian;
pub mod higgs;
pub mod linalg;
pub mod oracle;
pub mod oscillators;
pub mod poly;
pub mod ratfun;
pub mod scalar;
pub mod spectrum;
pub mod symmetries;
pub mod weyl;

pub use error::{Error, ParseError, Result};
pub use gaussian::GaussianRational;
pub use poly::{Monomial, Poly, Var};
pub use ratfun::RationalFunction;
pub use scalar::{Field, ImaginaryUnit, Real, Scalar};
pub use weyl::{NormalMonomial, WeylOperator};

/// Polynomial in the parameters γ_k over the Gaussian rationals.
pub type ParamScalar = Poly<GaussianRational>;
/// Operator with symbolic parameter coefficients.
pub type Operator = WeylOperator<ParamScalar>;
/// Operator with numeric exact coefficients.
pub type ExactOperator = WeylOperator<GaussianRational>;
