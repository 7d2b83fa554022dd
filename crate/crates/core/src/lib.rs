//! Exact computer algebra on the odd cotangent bundle of a supermanifold
//! and on its extension by densities.
//!
//! * [`poly`]: supercommutative polynomials with rational coefficients.
//! * [`bracket`]: the canonical odd bracket, `Δ`, the canonical operator
//!   `δ` and derived r-ary brackets.
//! * [`lift`]: the canonical lift of weighted multivector fields to the
//!   algebra of densities and its behaviour under coordinate changes.
//! * [`classify`]: lifts of a fixed Poisson structure, master-equation
//!   checks and worked examples (Lie–Poisson, Darboux, Q-manifolds).

pub mod bracket;
pub mod classify;
pub mod error;
pub mod lift;
pub mod linalg;
pub mod poly;
pub mod random;
pub mod rational;

pub use bracket::{
    antibracket, delta_op, divergence, divergence_full, divergence_wrt, project_base, r_ary_bracket, restrict_to_base,
    SignConvention,
};
pub use classify::{
    classify_lifts, decompose, density_evolution, lie_poisson, master_check, master_residual_of_lift, q_manifold_lifts,
    supertrace_extension, KernelBasis, LieAlgebraData, LiftDecomposition,
};
pub use error::{Error, Result};
pub use lift::{
    lift, lift_bracket_residual, lift_commutes_check, lifted_bracket_base, transform_hatted, CoordinateChange,
    DensityElement,
};
pub use poly::{Chart, Grade, Monomial, Parity, SPoly, VarId, VarKind, Variable};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
