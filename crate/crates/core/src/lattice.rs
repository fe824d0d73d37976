//! Finite-dimensional vector lattices presented by simplicial cones.
//!
//! A space is `ℝⁿ` ordered by the cone generated by the columns of an
//! invertible basis. Writing a vector in cone coordinates (`basis⁻¹·v`)
//! turns the order into the coordinatewise order, so every lattice
//! operation is computed coordinatewise there and mapped back.

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{serde_rat, Matrix, Scalar};

/// Ambient-coordinate vector.
pub type Vector = Vec<Scalar>;

/// Cone generated by the columns of an invertible basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimplicialCone {
    basis: Matrix,
    basis_inverse: Matrix,
    standard: bool,
}

impl SimplicialCone {
    pub fn new(basis: Matrix) -> Result<Self> {
        if !basis.is_square() {
            return Err(Error::DimensionMismatch { expected: basis.rows(), found: basis.cols() });
        }
        if basis.rows() == 0 {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        let basis_inverse = basis.inverse().ok_or(Error::SingularBasis)?;
        let standard = basis == Matrix::identity(basis.rows());
        Ok(SimplicialCone { basis, basis_inverse, standard })
    }

    pub fn standard(dim: usize) -> Self {
        SimplicialCone { basis: Matrix::identity(dim), basis_inverse: Matrix::identity(dim), standard: true }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_inverse(&self) -> &Matrix {
        &self.basis_inverse
    }

    pub fn is_standard(&self) -> bool {
        self.standard
    }

    pub fn generator(&self, j: usize) -> Vector {
        self.basis.column(j)
    }
}

/// A finite-dimensional vector lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SpaceRepr", into = "SpaceRepr")]
pub struct LatticeSpace {
    cone: SimplicialCone,
    label: String,
}

#[derive(Serialize, Deserialize)]
struct SpaceRepr {
    dim: usize,
    #[serde(with = "serde_rat::mat")]
    basis: Matrix,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    label: String,
}

impl TryFrom<SpaceRepr> for LatticeSpace {
    type Error = Error;

    fn try_from(repr: SpaceRepr) -> Result<Self> {
        if repr.basis.rows() != repr.dim {
            return Err(Error::DimensionMismatch { expected: repr.dim, found: repr.basis.rows() });
        }
        Ok(make_space(repr.basis)?.with_label(repr.label))
    }
}

impl From<LatticeSpace> for SpaceRepr {
    fn from(space: LatticeSpace) -> Self {
        SpaceRepr { dim: space.dim(), basis: space.cone.basis, label: space.label }
    }
}

/// Builds the lattice space whose positive cone is generated by the columns
/// of `basis`.
pub fn make_space(basis: Matrix) -> Result<LatticeSpace> {
    Ok(LatticeSpace { cone: SimplicialCone::new(basis)?, label: String::new() })
}

impl LatticeSpace {
    /// `ℝⁿ` with the coordinatewise order.
    pub fn standard(dim: usize) -> Self {
        LatticeSpace { cone: SimplicialCone::standard(dim), label: String::new() }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn cone(&self) -> &SimplicialCone {
        &self.cone
    }

    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    pub fn is_standard(&self) -> bool {
        self.cone.is_standard()
    }

    /// Same cone, ignoring labels.
    pub fn same_order(&self, other: &LatticeSpace) -> bool {
        self.cone == other.cone
    }

    pub fn check_dim(&self, v: &[Scalar]) -> Result<()> {
        if v.len() == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim(), found: v.len() })
        }
    }

    pub fn to_coords(&self, v: &[Scalar]) -> Result<Vector> {
        self.check_dim(v)?;
        Ok(if self.is_standard() { v.to_vec() } else { self.cone.basis_inverse.mul_vec(v) })
    }

    pub fn from_coords(&self, c: &[Scalar]) -> Result<Vector> {
        self.check_dim(c)?;
        Ok(if self.is_standard() { c.to_vec() } else { self.cone.basis.mul_vec(c) })
    }

    fn coordinatewise(
        &self,
        x: &[Scalar],
        y: &[Scalar],
        f: impl Fn(&Scalar, &Scalar) -> Scalar,
    ) -> Result<Vector> {
        let (cx, cy) = (self.to_coords(x)?, self.to_coords(y)?);
        let c: Vector = cx.iter().zip(&cy).map(|(a, b)| f(a, b)).collect();
        self.from_coords(&c)
    }

    pub fn sup(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vector> {
        self.coordinatewise(x, y, |a, b| a.max(b).clone())
    }

    /// `x ∧ y = x + y − x ∨ y`.
    pub fn inf(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vector> {
        let s = self.sup(x, y)?;
        Ok(x.iter().zip(y).zip(&s).map(|((a, b), c)| a + b - c).collect())
    }

    pub fn positive_part(&self, x: &[Scalar]) -> Result<Vector> {
        self.sup(x, &vec![Scalar::zero(); x.len()])
    }

    pub fn negative_part(&self, x: &[Scalar]) -> Result<Vector> {
        let neg: Vector = x.iter().map(|a| -a).collect();
        self.positive_part(&neg)
    }

    /// `|x| = x ∨ (−x)`.
    pub fn abs(&self, x: &[Scalar]) -> Result<Vector> {
        let neg: Vector = x.iter().map(|a| -a).collect();
        self.sup(x, &neg)
    }

    pub fn leq(&self, x: &[Scalar], y: &[Scalar]) -> Result<bool> {
        self.check_dim(x)?;
        let diff: Vector = y.iter().zip(x).map(|(a, b)| a - b).collect();
        self.is_positive(&diff)
    }

    pub fn is_positive(&self, x: &[Scalar]) -> Result<bool> {
        Ok(self.to_coords(x)?.iter().all(|c| !c.is_negative()))
    }

    /// Component of `x` in the band generated by `e ≥ 0`.
    pub fn band_project(&self, e: &[Scalar], x: &[Scalar]) -> Result<Vector> {
        let ce = self.to_coords(e)?;
        if ce.iter().any(Signed::is_negative) {
            return Err(Error::NotPositive);
        }
        let cx = self.to_coords(x)?;
        let kept: Vector = cx
            .into_iter()
            .zip(&ce)
            .map(|(c, w)| if w.is_zero() { Scalar::zero() } else { c })
            .collect();
        self.from_coords(&kept)
    }

    /// The all-ones vector in cone coordinates, mapped to ambient coordinates.
    pub fn strong_unit(&self) -> Vector {
        let ones = vec![Scalar::one(); self.dim()];
        self.from_coords(&ones).expect("dimension matches")
    }
}

pub fn to_coords(space: &LatticeSpace, v: &[Scalar]) -> Result<Vector> {
    space.to_coords(v)
}

pub fn vec_sup(space: &LatticeSpace, x: &[Scalar], y: &[Scalar]) -> Result<Vector> {
    space.sup(x, y)
}

pub fn vec_inf(space: &LatticeSpace, x: &[Scalar], y: &[Scalar]) -> Result<Vector> {
    space.inf(x, y)
}

pub fn vec_leq(space: &LatticeSpace, x: &[Scalar], y: &[Scalar]) -> Result<bool> {
    space.leq(x, y)
}

pub fn band_project(space: &LatticeSpace, e: &[Scalar], x: &[Scalar]) -> Result<Vector> {
    space.band_project(e, x)
}
