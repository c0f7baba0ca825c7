//! Exact Laurent polynomial arithmetic over `Z[Z^f x T]`, univariate helper
//! polynomials, and cyclotomic evaluation.

mod cyclotomic;
mod monomial;
mod poly;
mod univariate;

pub use cyclotomic::{CharacterError, CyclotomicField, CyclotomicNumber, FiniteCharacter};
pub use monomial::{Monomial, VarContext};
pub use poly::{LaurentError, LaurentPoly};
pub use univariate::{cyclotomic_polynomial, euler_phi, UniPoly};
