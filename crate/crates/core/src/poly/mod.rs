//! Exact supercommutative polynomials graded by parity, density weight and
//! fiber degree.
//!
//! Coefficients are arbitrary-precision rationals. The coefficient ring is
//! polynomial in the base and fiber coordinates and Laurent, with rational
//! exponents, in the density variable `t`; smooth coefficient functions are
//! not represented. Every identity the kernel checks is local in the
//! coefficients, so this restriction loses nothing for verification.

mod chart;
mod fmt;
mod monomial;
mod spoly;

pub use chart::{Chart, Parity, VarId, VarKind, Variable};
pub use fmt::ordered_terms;
pub use monomial::Monomial;
pub use spoly::{signed, Grade, SPoly};
