//! Finite-dimensional lattice-ordered algebras and the non-representability
//! test for a pair of idempotents `e`, `p`.
//!
//! Structure constants are indexed by ambient coordinates: for the standard
//! basis vectors, `eᵢ·eⱼ = Σₖ c[i][j][k] eₖ`. The order comes from the
//! attached [`LatticeSpace`] and is independent of the product.

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Hypothesis, Result};
use crate::lattice::{LatticeSpace, Vector};
use crate::scalar::{is_zero_or_unit_fraction, serde_rat, Matrix, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "AlgebraRepr", into = "AlgebraRepr")]
pub struct LatticeAlgebra {
    space: LatticeSpace,
    /// `structure[i]` is the `n × n` matrix of `c[i][·][·]`.
    structure: Vec<Matrix>,
    unit: Option<Vector>,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct Slice(#[serde(with = "serde_rat::mat")] Matrix);

#[derive(Serialize, Deserialize)]
struct AlgebraRepr {
    space: LatticeSpace,
    structure: Vec<Slice>,
    #[serde(with = "serde_rat::opt_vec", default)]
    unit: Option<Vector>,
}

impl TryFrom<AlgebraRepr> for LatticeAlgebra {
    type Error = Error;

    fn try_from(repr: AlgebraRepr) -> Result<Self> {
        LatticeAlgebra::new(repr.space, repr.structure.into_iter().map(|s| s.0).collect(), repr.unit)
    }
}

impl From<LatticeAlgebra> for AlgebraRepr {
    fn from(a: LatticeAlgebra) -> Self {
        AlgebraRepr { space: a.space, structure: a.structure.into_iter().map(Slice).collect(), unit: a.unit }
    }
}

fn basis_vector(n: usize, i: usize) -> Vector {
    (0..n).map(|k| if k == i { Scalar::one() } else { Scalar::zero() }).collect()
}

fn raw_multiply(structure: &[Matrix], x: &[Scalar], y: &[Scalar]) -> Vector {
    let n = x.len();
    let mut out = vec![Scalar::zero(); n];
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            let w = xi * yj;
            for (k, o) in out.iter_mut().enumerate() {
                let c = &structure[i][(j, k)];
                if !c.is_zero() {
                    *o += &w * c;
                }
            }
        }
    }
    out
}

impl LatticeAlgebra {
    /// Validates shapes, associativity on basis triples and the unit.
    pub fn new(space: LatticeSpace, structure: Vec<Matrix>, unit: Option<Vector>) -> Result<Self> {
        let n = space.dim();
        if structure.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: structure.len() });
        }
        for slice in &structure {
            if slice.rows() != n || slice.cols() != n {
                return Err(Error::DimensionMismatch { expected: n, found: slice.rows().max(slice.cols()) });
            }
        }
        if let Some(u) = &unit {
            space.check_dim(u)?;
        }
        let basis: Vec<Vector> = (0..n).map(|i| basis_vector(n, i)).collect();
        let products: Vec<Vec<Vector>> = basis
            .iter()
            .map(|bi| basis.iter().map(|bj| raw_multiply(&structure, bi, bj)).collect())
            .collect();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let left = raw_multiply(&structure, &products[i][j], &basis[k]);
                    let right = raw_multiply(&structure, &basis[i], &products[j][k]);
                    if left != right {
                        return Err(Error::BadAlgebra(format!(
                            "not associative on basis triple ({}, {}, {})",
                            i + 1,
                            j + 1,
                            k + 1
                        )));
                    }
                }
            }
        }
        if let Some(u) = &unit {
            for (i, b) in basis.iter().enumerate() {
                if raw_multiply(&structure, u, b) != *b || raw_multiply(&structure, b, u) != *b {
                    return Err(Error::BadAlgebra(format!("unit fails on basis vector {}", i + 1)));
                }
            }
        }
        Ok(LatticeAlgebra { space, structure, unit })
    }

    /// Coordinatewise product on `space`.
    pub fn pointwise(space: LatticeSpace) -> Self {
        let n = space.dim();
        let structure = (0..n)
            .map(|i| {
                Matrix::from_fn(n, n, |j, k| if i == j && j == k { Scalar::one() } else { Scalar::zero() })
            })
            .collect();
        let unit = Some(vec![Scalar::one(); n]);
        LatticeAlgebra { space, structure, unit }
    }

    pub fn space(&self) -> &LatticeSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn structure(&self) -> &[Matrix] {
        &self.structure
    }

    pub fn unit(&self) -> Option<&Vector> {
        self.unit.as_ref()
    }

    pub fn multiply(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vector> {
        self.space.check_dim(x)?;
        self.space.check_dim(y)?;
        Ok(raw_multiply(&self.structure, x, y))
    }
}

pub fn multiply(a: &LatticeAlgebra, x: &[Scalar], y: &[Scalar]) -> Result<Vector> {
    a.multiply(x, y)
}

/// True iff every product of two cone generators lies in the cone.
pub fn check_positive_multiplication(a: &LatticeAlgebra) -> bool {
    let cone = a.space.cone();
    let gens: Vec<Vector> = (0..a.dim()).map(|j| cone.generator(j)).collect();
    gens.iter().all(|g| {
        gens.iter().all(|h| {
            let prod = raw_multiply(&a.structure, g, h);
            a.space.is_positive(&prod).unwrap_or(false)
        })
    })
}

fn check_beta(beta: &Scalar) -> Result<()> {
    if beta > &Scalar::zero() || beta < &-Scalar::one() {
        return Err(Error::BetaOutOfRange);
    }
    Ok(())
}

/// `ℝ²` ordered by the cone `{0 ≤ x, βx ≤ y ≤ x}`, with pointwise product
/// and unit `(1, 1)`.
pub fn wickstead_family(beta: &Scalar) -> Result<LatticeAlgebra> {
    check_beta(beta)?;
    let basis = Matrix::from_columns(&[vec![Scalar::one(), beta.clone()], vec![Scalar::one(), Scalar::one()]])?;
    let space = crate::lattice::make_space(basis)?;
    Ok(LatticeAlgebra::pointwise(space))
}

/// `β/(β − 1)`: the coefficient of `e` in `p = (1, 0)`.
pub fn family_alpha(beta: &Scalar) -> Result<Scalar> {
    check_beta(beta)?;
    Ok(beta / (beta - Scalar::one()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    NonRepresentable,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisCheck {
    pub hypothesis: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    #[serde(with = "serde_rat")]
    pub alpha: Scalar,
    #[serde(with = "serde_rat::vec")]
    pub x: Vector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoisonVerdict {
    #[serde(with = "serde_rat")]
    pub alpha: Scalar,
    pub classification: Classification,
    pub hypothesis_log: Vec<HypothesisCheck>,
    pub decomposition: Decomposition,
}

/// Decides whether `p = αe + x` with `e`, `p` idempotent, `ep = pe = p` and
/// `x ∧ e = 0` rules out every faithful representation of `a`.
///
/// Any failed hypothesis is an error; a verdict is only issued when all
/// hold.
pub fn poison_verdict(a: &LatticeAlgebra, e: &[Scalar], p: &[Scalar]) -> Result<PoisonVerdict> {
    let space = &a.space;
    space.check_dim(e)?;
    space.check_dim(p)?;
    if !space.is_positive(e)? || !space.is_positive(p)? {
        return Err(Error::HypothesisViolated(Hypothesis::NotPositive));
    }
    if e.iter().all(Zero::is_zero) || p.iter().all(Zero::is_zero) {
        return Err(Error::HypothesisViolated(Hypothesis::Nonzero));
    }
    let mut log = Vec::new();
    let mut record = |name: &str, holds: bool, which: Hypothesis| {
        log.push(HypothesisCheck { hypothesis: name.to_string(), holds });
        if holds {
            Ok(())
        } else {
            Err(Error::HypothesisViolated(which))
        }
    };

    let idempotent = a.multiply(e, e)? == e && a.multiply(p, p)? == p;
    record("e^2 = e, p^2 = p", idempotent, Hypothesis::Idempotents)?;
    let absorbs = a.multiply(e, p)? == p && a.multiply(p, e)? == p;
    record("ep = pe = p", absorbs, Hypothesis::Absorption)?;

    let band = space.band_project(e, p)?;
    let pivot = e.iter().position(|c| !c.is_zero()).expect("e is nonzero");
    let alpha = &band[pivot] / &e[pivot];
    let multiple = band.iter().zip(e).all(|(b, c)| *b == &alpha * c);
    record("band component of p is a multiple of e", multiple, Hypothesis::ScalarMultiple)?;

    let x: Vector = p.iter().zip(&band).map(|(pi, bi)| pi - bi).collect();
    let meet = space.inf(&x, e)?;
    record("x meet e = 0", meet.iter().all(Zero::is_zero), Hypothesis::Disjointness)?;

    debug_assert!(!alpha.is_negative());
    let classification = if is_zero_or_unit_fraction(&alpha) {
        Classification::Inconclusive
    } else {
        Classification::NonRepresentable
    };
    Ok(PoisonVerdict {
        alpha: alpha.clone(),
        classification,
        hypothesis_log: log,
        decomposition: Decomposition { alpha, x },
    })
}
