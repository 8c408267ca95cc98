//! Exact deformation quantization at desk scale.
//!
//! The crate computes Moyal-Weyl star products on constant symplectic
//! spaces, transports them to cotangent charts of the projective line through
//! the quadratic symplectomorphism `(x, y) -> (x/y, -y^2/2)`, glues them over
//! projective atlases, and assembles the symmetric-product quantization of the
//! open cell of `T*Quot(O^r, d)`. All arithmetic is exact; every identity is
//! checked as an equality of canonical rational functions.
//!
//! The algebra is generic over a [`Field`]; star products need a
//! [`ComplexField`]. The aliases below fix the scalar to [`GaussianRational`].

pub mod atlas;
pub mod error;
pub mod field;
pub mod format;
pub mod gcd;
pub mod geometry;
pub mod matrix;
pub mod moyal;
pub mod parse;
pub mod poly;
pub mod ratfn;
pub mod rng;
pub mod series;
pub mod symprod;
pub mod verify;

pub use error::{Error, ErrorClass, Result};
pub use field::{ComplexField, Field, GaussianRational};
pub use matrix::Matrix;
pub use moyal::{LinearSymplectic, MoyalContext, SymplecticSpace};
pub use poly::{Polynomial, Vars};
pub use ratfn::RationalFunction;
pub use series::HSeries;

pub use num_rational::BigRational;
pub use num_traits::{One, Zero};

/// Polynomial over the Gaussian rationals.
pub type Poly = Polynomial<GaussianRational>;
/// Rational function over the Gaussian rationals.
pub type RatFn = RationalFunction<GaussianRational>;
/// Truncated h-series over the Gaussian rationals.
pub type Series = HSeries<GaussianRational>;
/// Polynomial over the rationals.
pub type QPoly = Polynomial<BigRational>;
/// Rational function over the rationals.
pub type QRatFn = RationalFunction<BigRational>;
