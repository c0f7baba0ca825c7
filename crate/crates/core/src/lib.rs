//! Fox calculus, Alexander matrices and stratifications, and first betti
//! numbers of finite abelian covers of finitely presented groups.
//!
//! Everything is exact: Laurent polynomial coefficients are arbitrary
//! precision integers, and ranks at characters are computed in cyclotomic
//! fields `Q(zeta_m)`. The polynomial and matrix code is generic over the
//! coefficient type (see [`scalar`]); the aliases below fix the types used
//! by the pipeline.

pub mod abelian;
pub mod covers;
pub mod fixtures;
pub mod fox;
pub mod invariants;
pub mod laurent;
pub mod matrix;
pub mod presentation;
pub mod scalar;
pub mod strata;

use num_bigint::BigInt;
use num_rational::BigRational;

/// Integer Laurent polynomial, the entry type of Alexander matrices.
pub type Laurent = laurent::LaurentPoly<BigInt>;
/// Element of `Q(zeta_m)` with arbitrary-precision rationals.
pub type Cyclotomic = laurent::CyclotomicNumber<BigRational>;
/// Univariate polynomial over `Q`.
pub type QPoly = laurent::UniPoly<BigRational>;
/// Univariate polynomial over `Z`.
pub type ZPoly = laurent::UniPoly<BigInt>;
/// Integer matrix used for exponent matrices and lattice bases.
pub type IntMatrix = matrix::Matrix<i64>;

pub use abelian::{AbelianStructure, AbelianizationMap};
pub use fox::AlexanderMatrix;
pub use laurent::{FiniteCharacter, Monomial, VarContext};
pub use presentation::{Presentation, Syllable, Word};
