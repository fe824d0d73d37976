//! Regular operators on a [`LatticeSpace`].
//!
//! An operator is stored in ambient coordinates together with its
//! cone-coordinate form `basis⁻¹·M·basis`. Positivity, the Riesz–Kantorovich
//! meet and the diagonal (central) part are all read off the cone-coordinate
//! form, where the operator order is the entrywise order.

use std::fmt;
use std::str::FromStr;

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{LatticeSpace, Vector};
use crate::scalar::{parse_scalar, serde_rat, to_f64, Matrix, Scalar};

/// Relative tolerance of the power iteration behind non-exact p-norms.
pub const PNORM_TOLERANCE: f64 = 1e-10;
/// Iteration cap of the power iteration behind non-exact p-norms.
pub const PNORM_MAX_ITERATIONS: usize = 100_000;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "OperatorRepr", into = "OperatorRepr")]
pub struct RegularOperator {
    space: LatticeSpace,
    matrix: Matrix,
    cone_matrix: Matrix,
}

#[derive(Serialize, Deserialize)]
struct OperatorRepr {
    space: LatticeSpace,
    #[serde(with = "serde_rat::mat")]
    matrix: Matrix,
}

impl TryFrom<OperatorRepr> for RegularOperator {
    type Error = Error;

    fn try_from(repr: OperatorRepr) -> Result<Self> {
        RegularOperator::new(repr.space, repr.matrix)
    }
}

impl From<RegularOperator> for OperatorRepr {
    fn from(op: RegularOperator) -> Self {
        OperatorRepr { space: op.space, matrix: op.matrix }
    }
}

impl fmt::Debug for RegularOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.space.is_standard() {
            write!(f, "RegularOperator{:?}", self.matrix)
        } else {
            write!(f, "RegularOperator{{ambient: {:?}, cone: {:?}}}", self.matrix, self.cone_matrix)
        }
    }
}

impl RegularOperator {
    /// Operator with the given ambient-coordinate matrix.
    pub fn new(space: LatticeSpace, matrix: Matrix) -> Result<Self> {
        let n = space.dim();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: if matrix.rows() != n { matrix.rows() } else { matrix.cols() },
            });
        }
        let cone_matrix = if space.is_standard() {
            matrix.clone()
        } else {
            let cone = space.cone();
            cone.basis_inverse().mul(&matrix).mul(cone.basis())
        };
        Ok(RegularOperator { space, matrix, cone_matrix })
    }

    /// Operator on the standard cone of matching dimension.
    pub fn standard(matrix: Matrix) -> Result<Self> {
        RegularOperator::new(LatticeSpace::standard(matrix.rows()), matrix)
    }

    /// Operator given by its cone-coordinate matrix.
    pub fn from_cone_matrix(space: LatticeSpace, cone_matrix: Matrix) -> Result<Self> {
        let n = space.dim();
        if cone_matrix.rows() != n || cone_matrix.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: cone_matrix.rows() });
        }
        let matrix = if space.is_standard() {
            cone_matrix.clone()
        } else {
            let cone = space.cone();
            cone.basis().mul(&cone_matrix).mul(cone.basis_inverse())
        };
        Ok(RegularOperator { space, matrix, cone_matrix })
    }

    pub fn zero(space: LatticeSpace) -> Self {
        let n = space.dim();
        RegularOperator { space, matrix: Matrix::zeros(n, n), cone_matrix: Matrix::zeros(n, n) }
    }

    pub fn identity(space: LatticeSpace) -> Self {
        let n = space.dim();
        RegularOperator { space, matrix: Matrix::identity(n), cone_matrix: Matrix::identity(n) }
    }

    pub fn space(&self) -> &LatticeSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn cone_matrix(&self) -> &Matrix {
        &self.cone_matrix
    }

    fn same_space(&self, other: &RegularOperator) -> Result<()> {
        if self.space.same_order(&other.space) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    fn with_cone(&self, cone_matrix: Matrix) -> Self {
        RegularOperator::from_cone_matrix(self.space.clone(), cone_matrix).expect("shape preserved")
    }

    pub fn apply(&self, v: &[Scalar]) -> Result<Vector> {
        self.space.check_dim(v)?;
        Ok(self.matrix.mul_vec(v))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &RegularOperator) -> Result<Self> {
        self.same_space(other)?;
        Ok(self.with_cone(self.cone_matrix.mul(&other.cone_matrix)))
    }

    pub fn add(&self, other: &RegularOperator) -> Result<Self> {
        self.same_space(other)?;
        Ok(self.with_cone(self.cone_matrix.add(&other.cone_matrix)))
    }

    pub fn sub(&self, other: &RegularOperator) -> Result<Self> {
        self.same_space(other)?;
        Ok(self.with_cone(self.cone_matrix.sub(&other.cone_matrix)))
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        self.with_cone(self.cone_matrix.scale(k))
    }

    pub fn is_positive(&self) -> bool {
        self.cone_matrix.is_nonnegative()
    }

    pub fn is_idempotent(&self) -> bool {
        self.cone_matrix.mul(&self.cone_matrix) == self.cone_matrix
    }

    pub fn is_zero(&self) -> bool {
        self.cone_matrix.is_zero()
    }

    pub fn rank(&self) -> usize {
        self.cone_matrix.rank()
    }

    pub fn trace(&self) -> Scalar {
        self.cone_matrix.trace()
    }

    /// Operator order: `self ≤ other` iff `other − self` is positive.
    pub fn leq(&self, other: &RegularOperator) -> Result<bool> {
        self.same_space(other)?;
        Ok(other.cone_matrix.sub(&self.cone_matrix).is_nonnegative())
    }
}

pub fn is_positive(op: &RegularOperator) -> bool {
    op.is_positive()
}

/// Riesz–Kantorovich meet of two positive operators.
///
/// `(S ∧ T)x = inf{Sy + T(x − y) : 0 ≤ y ≤ x}`, which on a simplicial cone is
/// the entrywise minimum of the cone-coordinate matrices.
pub fn op_meet(s: &RegularOperator, t: &RegularOperator) -> Result<RegularOperator> {
    s.same_space(t)?;
    if !s.is_positive() || !t.is_positive() {
        return Err(Error::NotPositive);
    }
    Ok(s.with_cone(s.cone_matrix.zip_map(&t.cone_matrix, |a, b| a.min(b).clone())))
}

/// Lattice join of two regular operators (entrywise max in cone coordinates).
pub fn op_join(s: &RegularOperator, t: &RegularOperator) -> Result<RegularOperator> {
    s.same_space(t)?;
    Ok(s.with_cone(s.cone_matrix.zip_map(&t.cone_matrix, |a, b| a.max(b).clone())))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalPart {
    #[serde(with = "serde_rat::vec")]
    pub alpha_vector: Vec<Scalar>,
    pub is_scalar: bool,
    #[serde(with = "serde_rat::opt")]
    pub alpha: Option<Scalar>,
}

impl DiagonalPart {
    /// The central operator `diag(alpha_vector)` in cone coordinates.
    pub fn as_operator(&self, space: &LatticeSpace) -> RegularOperator {
        RegularOperator::from_cone_matrix(space.clone(), Matrix::diagonal_matrix(&self.alpha_vector))
            .expect("diagonal has the space dimension")
    }
}

/// Image of `T` under the band projection onto the central operators.
pub fn diagonal_part(t: &RegularOperator) -> DiagonalPart {
    let alpha_vector = t.cone_matrix.diagonal();
    let is_scalar = alpha_vector.windows(2).all(|w| w[0] == w[1]);
    let alpha = if is_scalar { alpha_vector.first().cloned() } else { None };
    DiagonalPart { alpha_vector, is_scalar, alpha }
}

/// The common diagonal value of a positive operator, if its diagonal is
/// constant.
pub fn constant_diagonal_alpha(p: &RegularOperator) -> Result<Option<Scalar>> {
    if !p.is_positive() {
        return Err(Error::NotPositive);
    }
    Ok(diagonal_part(p).alpha)
}

/// The order-theoretic form of "constant diagonal α" for positive `P`:
/// `α·id ≤ P`, and every central `0 ≤ M ≤ P` satisfies `M ≤ α·id`.
///
/// Central operators are diagonal in cone coordinates, so the largest one
/// below `P` is `diag(P_ii)`; the second condition is checked on it.
pub fn satisfies_central_bound(p: &RegularOperator, alpha: &Scalar) -> Result<bool> {
    if !p.is_positive() {
        return Err(Error::NotPositive);
    }
    let scaled_id = RegularOperator::identity(p.space.clone()).scale(alpha);
    let largest_central = diagonal_part(p).as_operator(&p.space);
    Ok(scaled_id.leq(p)? && largest_central.leq(&scaled_id)?)
}

/// Exponent of an `ℓp` norm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Exponent {
    Finite(Scalar),
    Infinity,
}

impl Exponent {
    pub fn one() -> Self {
        Exponent::Finite(Scalar::one())
    }

    pub fn two() -> Self {
        Exponent::Finite(Scalar::one() + Scalar::one())
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Exponent::Infinity),
            other => Ok(Exponent::Finite(parse_scalar(other)?)),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormValue {
    Exact {
        #[serde(with = "serde_rat")]
        value: Scalar,
    },
    Approximate { value: f64, iterations: usize, tolerance: f64 },
}

impl NormValue {
    pub fn as_f64(&self) -> f64 {
        match self {
            NormValue::Exact { value } => to_f64(value),
            NormValue::Approximate { value, .. } => *value,
        }
    }

    /// `‖T‖ ≤ 1`: exact comparison for exact values, `tol` slack otherwise.
    pub fn is_contractive(&self, tol: f64) -> bool {
        match self {
            NormValue::Exact { value } => *value <= Scalar::one(),
            NormValue::Approximate { value, .. } => *value <= 1.0 + tol,
        }
    }
}

/// Induced `ℓp → ℓp` operator norm on the standard cone.
pub fn operator_pnorm(t: &RegularOperator, p: &Exponent) -> Result<NormValue> {
    if !t.space.is_standard() {
        return Err(Error::UnsupportedCone);
    }
    let m = &t.matrix;
    let n = m.rows();
    match p {
        Exponent::Finite(p) if *p < Scalar::one() => Err(Error::BadExponent),
        Exponent::Finite(p) if p.is_one() => {
            let value = (0..n)
                .map(|j| (0..n).fold(Scalar::zero(), |acc, i| acc + m[(i, j)].abs()))
                .max()
                .unwrap_or_else(Scalar::zero);
            Ok(NormValue::Exact { value })
        }
        Exponent::Infinity => {
            let value = (0..n)
                .map(|i| m.row(i).iter().fold(Scalar::zero(), |acc, x| acc + x.abs()))
                .max()
                .unwrap_or_else(Scalar::zero);
            Ok(NormValue::Exact { value })
        }
        Exponent::Finite(p) if *p == Scalar::from_integer(2.into()) => {
            let value = m.to_f64().singular_values().iter().cloned().fold(0.0, f64::max);
            Ok(NormValue::Approximate { value, iterations: 0, tolerance: 1e-12 })
        }
        Exponent::Finite(p) => {
            if !t.is_positive() {
                return Err(Error::NotPositive);
            }
            Ok(nonnegative_pnorm(&m.to_f64(), to_f64(p)))
        }
    }
}

/// Boyd's ascent for `‖A‖_p` of an entrywise nonnegative matrix, started
/// from the all-ones vector.
fn nonnegative_pnorm(a: &nalgebra::DMatrix<f64>, p: f64) -> NormValue {
    let q = p / (p - 1.0);
    let pnorm = |v: &nalgebra::DVector<f64>| v.iter().map(|x| x.abs().powf(p)).sum::<f64>().powf(1.0 / p);
    let mut x = nalgebra::DVector::from_element(a.ncols(), 1.0);
    x /= pnorm(&x);
    let mut estimate = pnorm(&(a * &x));
    let mut iterations = 0;
    while iterations < PNORM_MAX_ITERATIONS {
        iterations += 1;
        let y = (a * &x).map(|v| v.max(0.0).powf(p - 1.0));
        let z = (a.transpose() * y).map(|v| v.max(0.0).powf(q - 1.0));
        let norm = pnorm(&z);
        if norm == 0.0 {
            estimate = 0.0;
            break;
        }
        x = z / norm;
        let next = pnorm(&(a * &x));
        let converged = (next - estimate).abs() <= PNORM_TOLERANCE * next.max(f64::MIN_POSITIVE);
        estimate = next;
        if converged {
            break;
        }
    }
    NormValue::Approximate { value: estimate, iterations, tolerance: PNORM_TOLERANCE }
}
