//! Exact computations in finite-dimensional vector lattices and their
//! regular operators: Riesz–Kantorovich meets, positive projections with
//! constant diagonal, LP certificates, and lattice-ordered algebras.
//!
//! Scalars are exact rationals throughout, except for the `p`-norms with
//! `p ∉ {1, ∞}` and the feasibility search, which are floating point and say so.

pub mod algebra;
pub mod certify;
pub mod error;
pub mod lattice;
pub mod lp;
pub mod operator;
pub mod projection;
pub mod rng;
pub mod scalar;

pub use algebra::{
    check_positive_multiplication, family_alpha, multiply, poison_verdict, wickstead_family, Classification,
    LatticeAlgebra, PoisonVerdict,
};
pub use certify::{
    certify_meet, certify_sup, range_lattice_basis, range_sup, transfer_check, Certificate, CertifiedSublattice,
};
pub use error::{Error, Hypothesis, Result};
pub use lattice::{band_project, make_space, to_coords, vec_inf, vec_leq, vec_sup, LatticeSpace, Vector};
pub use lp::{lp_optimize, LinearProgram, LpSolution};
pub use operator::{
    constant_diagonal_alpha, diagonal_part, is_positive, op_join, op_meet, operator_pnorm, DiagonalPart, Exponent,
    NormValue, RegularOperator,
};
pub use projection::{analyze, sweep, recover_partition, stochastic_normalize, structure_report, Partition, ProjectionReport};
pub use rng::SplitMix64;
pub use scalar::{format_scalar, parse_scalar, rat, Matrix, Scalar};
