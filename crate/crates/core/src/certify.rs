//! LP-backed order certificates.
//!
//! Every certificate is a list of exact LP optima, each paired with the sign
//! it must have. All programs are posed in cone coordinates, where an order
//! interval `[0, y]` is a box and the range of a projection `E` is the
//! subspace `(I − E)z = 0`.

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Hypothesis, Result};
use crate::lattice::{LatticeSpace, Vector};
use crate::lp::{lp_optimize, LinearProgram, LpSolution, RowSense};
use crate::operator::{op_meet, RegularOperator};
use crate::scalar::{serde_rat, Matrix, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = ">= 0")]
    NonNegative,
    #[serde(rename = "<= 0")]
    NonPositive,
}

impl Relation {
    fn holds(self, value: &Scalar) -> bool {
        match self {
            Relation::NonNegative => !value.is_negative(),
            Relation::NonPositive => !value.is_positive(),
        }
    }
}

/// One proved inequality: the optimum of a cone-coordinate functional.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub functional: usize,
    #[serde(with = "serde_rat")]
    pub value: Scalar,
    pub relation: Relation,
    /// Optimal vertex of the program, when the value came from an LP.
    #[serde(skip)]
    pub solution: Option<Vec<Scalar>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub claim: String,
    pub holds: bool,
    pub witnesses: Vec<Witness>,
}

impl Certificate {
    fn new(claim: &str) -> Self {
        Certificate { claim: claim.to_string(), holds: true, witnesses: Vec::new() }
    }

    fn push(&mut self, functional: usize, value: Scalar, relation: Relation, solution: Option<Vec<Scalar>>) {
        self.holds &= relation.holds(&value);
        self.witnesses.push(Witness { functional, value, relation, solution });
    }

    /// A failed solve (infeasible or unbounded where an optimum must exist)
    /// invalidates the certificate.
    fn fail(&mut self) {
        self.holds = false;
    }

    /// Conjunction of certificates for the same claim.
    pub fn merge(mut self, other: Certificate) -> Certificate {
        self.holds &= other.holds;
        self.witnesses.extend(other.witnesses);
        self
    }
}

fn optimum(lp: &LinearProgram) -> Option<(Scalar, Vec<Scalar>)> {
    match lp_optimize(lp).expect("programs built here are well-formed") {
        LpSolution::Optimal { value, solution } => Some((value, solution)),
        _ => None,
    }
}

fn unit_row(n: usize, i: usize) -> Vec<Scalar> {
    (0..n).map(|j| if j == i { Scalar::one() } else { Scalar::zero() }).collect()
}

/// Adds the rows of `(I − E)z = 0` for a cone-coordinate projector `E`.
fn restrict_to_range(mut lp: LinearProgram, e: &Matrix) -> LinearProgram {
    let n = e.rows();
    let complement = Matrix::identity(n).sub(e);
    for i in 0..n {
        let row = complement.row(i).to_vec();
        if row.iter().any(|x| !x.is_zero()) {
            lp = lp.constraint(row, RowSense::Eq, Scalar::zero());
        }
    }
    lp
}

/// Riesz–Kantorovich value `inf{S·y + T·(x − y) : 0 ≤ y ≤ x}`, computed one
/// cone coordinate at a time by LP.
///
/// This is the independent oracle for [`op_meet`]; it never looks at the
/// closed form.
pub fn certify_meet(s: &RegularOperator, t: &RegularOperator, x: &[Scalar]) -> Result<(Vector, Certificate)> {
    if !s.space().same_order(t.space()) {
        return Err(Error::SpaceMismatch);
    }
    if !s.is_positive() || !t.is_positive() {
        return Err(Error::NotPositive);
    }
    let space = s.space();
    let xc = space.to_coords(x)?;
    if xc.iter().any(Signed::is_negative) {
        return Err(Error::NotPositive);
    }
    let n = space.dim();
    let (sc, tc) = (s.cone_matrix(), t.cone_matrix());
    let tx = tc.mul_vec(&xc);
    let mut cert = Certificate::new("riesz_kantorovich_meet");
    let mut mins = Vec::with_capacity(n);
    for i in 0..n {
        let objective: Vec<Scalar> = (0..n).map(|j| &sc[(i, j)] - &tc[(i, j)]).collect();
        let mut lp = LinearProgram::minimize(objective);
        for (j, bound) in xc.iter().enumerate() {
            lp = lp.bounds(j, Some(Scalar::zero()), Some(bound.clone()));
        }
        match optimum(&lp) {
            Some((value, solution)) => {
                let total = value + &tx[i];
                cert.push(i, total.clone(), Relation::NonNegative, Some(solution));
                mins.push(total);
            }
            None => {
                cert.fail();
                mins.push(Scalar::zero());
            }
        }
    }
    Ok((space.from_coords(&mins)?, cert))
}

/// The range `Y = E(X)` of a positive projection, with the inherited order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifiedSublattice {
    parent: LatticeSpace,
    projector: RegularOperator,
    range_basis: Vec<Vector>,
}

impl CertifiedSublattice {
    pub fn new(projector: RegularOperator) -> Result<Self> {
        if !projector.is_positive() {
            return Err(Error::NotPositive);
        }
        if !projector.is_idempotent() {
            return Err(Error::NotIdempotent);
        }
        let parent = projector.space().clone();
        let rays = range_lattice_basis(&projector)?;
        let range_basis = rays.iter().map(|r| parent.from_coords(r)).collect::<Result<_>>()?;
        Ok(CertifiedSublattice { parent, projector, range_basis })
    }

    pub fn parent(&self) -> &LatticeSpace {
        &self.parent
    }

    pub fn projector(&self) -> &RegularOperator {
        &self.projector
    }

    /// Extreme rays of `Y₊`, in ambient coordinates. They form a basis of
    /// `Y` in which the inherited order is coordinatewise.
    pub fn range_basis(&self) -> &[Vector] {
        &self.range_basis
    }

    pub fn contains(&self, y: &[Scalar]) -> Result<bool> {
        Ok(self.projector.apply(y)? == y)
    }

    /// `Y` as a lattice in its own right: the standard cone on the extreme
    /// rays of `Y₊`.
    pub fn range_space(&self) -> LatticeSpace {
        LatticeSpace::standard(self.range_basis.len())
    }

    /// Matrix of `op|_Y` in the lattice basis of `Y`. Fails with
    /// [`Error::NotInRange`] unless `op` maps `Y` into itself.
    pub fn restrict(&self, op: &RegularOperator) -> Result<RegularOperator> {
        if !op.space().same_order(&self.parent) {
            return Err(Error::SpaceMismatch);
        }
        let basis = Matrix::from_columns(&self.range_basis)?;
        let images = op.matrix().mul(&basis);
        let coords = basis.solve(&images).ok_or(Error::NotInRange)?;
        RegularOperator::new(self.range_space(), coords)
    }
}

/// Extreme rays of `E(X₊)` in cone coordinates, each scaled so its first
/// nonzero entry is 1.
///
/// `E` maps `X₊` onto `Y₊`, so the images of the cone generators span `Y₊`;
/// rays that are nonnegative combinations of the remaining ones are pruned
/// by LP feasibility.
pub fn range_lattice_basis(e: &RegularOperator) -> Result<Vec<Vector>> {
    let ec = e.cone_matrix();
    let n = ec.rows();
    let mut rays: Vec<Vector> = Vec::new();
    for j in 0..n {
        let col = ec.column(j);
        let Some(lead) = col.iter().find(|x| !x.is_zero()).cloned() else {
            continue;
        };
        let ray: Vector = col.iter().map(|x| x / &lead).collect();
        if !rays.contains(&ray) {
            rays.push(ray);
        }
    }
    let mut k = 0;
    while k < rays.len() {
        let others: Vec<&Vector> = rays.iter().enumerate().filter(|(l, _)| *l != k).map(|(_, r)| r).collect();
        let redundant = !others.is_empty() && {
            let mut lp = LinearProgram::minimize(vec![Scalar::zero(); others.len()]);
            for i in 0..n {
                let row = others.iter().map(|r| r[i].clone()).collect();
                lp = lp.constraint(row, RowSense::Eq, rays[k][i].clone());
            }
            optimum(&lp).is_some()
        };
        if redundant {
            rays.remove(k);
        } else {
            k += 1;
        }
    }
    if rays.len() != e.rank() {
        return Err(Error::TheoremViolation(format!(
            "range cone of a positive projection has {} extreme rays but rank {}",
            rays.len(),
            e.rank()
        )));
    }
    Ok(rays)
}

/// Supremum of `y1, y2` within `Y = E(X)`, with a certificate that it is the
/// least upper bound there.
///
/// The candidate is `E(y1 ∨ y2)`. The certificate records `φᵢ(s − y1)`,
/// `φᵢ(s − y2)` (upper bound) and `min φᵢ(z − s)` over upper bounds `z ∈ Y`
/// (minimality), for every cone-coordinate functional `φᵢ`.
pub fn range_sup(sub: &CertifiedSublattice, y1: &[Scalar], y2: &[Scalar]) -> Result<(Vector, Certificate)> {
    if !sub.contains(y1)? || !sub.contains(y2)? {
        return Err(Error::NotInRange);
    }
    let space = &sub.parent;
    let n = space.dim();
    let s = sub.projector.apply(&space.sup(y1, y2)?)?;
    let (sc, c1, c2) = (space.to_coords(&s)?, space.to_coords(y1)?, space.to_coords(y2)?);
    let mut cert = Certificate::new("range_least_upper_bound");
    for i in 0..n {
        cert.push(i, &sc[i] - &c1[i], Relation::NonNegative, None);
        cert.push(i, &sc[i] - &c2[i], Relation::NonNegative, None);
    }
    let e = sub.projector.cone_matrix();
    for i in 0..n {
        let mut lp = LinearProgram::minimize(unit_row(n, i));
        for j in 0..n {
            let floor = c1[j].clone().max(c2[j].clone());
            lp = lp.bounds(j, Some(floor), None);
        }
        lp = restrict_to_range(lp, e);
        match optimum(&lp) {
            Some((value, solution)) => cert.push(i, value - &sc[i], Relation::NonNegative, Some(solution)),
            None => cert.fail(),
        }
    }
    Ok((s, cert))
}

/// `x ∨ y` in the whole space, certified as a least upper bound.
pub fn certify_sup(space: &LatticeSpace, x: &[Scalar], y: &[Scalar]) -> Result<(Vector, Certificate)> {
    let sub = CertifiedSublattice::new(RegularOperator::identity(space.clone()))?;
    range_sup(&sub, x, y)
}

/// Checks the hypotheses of the disjointness-transfer lemma in order.
pub fn check_transfer_hypotheses(e: &RegularOperator, t: &RegularOperator) -> Result<()> {
    if !e.space().same_order(t.space()) {
        return Err(Error::SpaceMismatch);
    }
    if !e.is_positive() || !t.is_positive() {
        return Err(Error::HypothesisViolated(Hypothesis::NotPositive));
    }
    if !e.is_idempotent() {
        return Err(Error::HypothesisViolated(Hypothesis::NotIdempotent));
    }
    if e.compose(t)? != *t {
        return Err(Error::HypothesisViolated(Hypothesis::LeftAbsorption));
    }
    if t.compose(e)? != *t {
        return Err(Error::HypothesisViolated(Hypothesis::RightAbsorption));
    }
    if !op_meet(e, t)?.is_zero() {
        return Err(Error::HypothesisViolated(Hypothesis::Meet));
    }
    Ok(())
}

/// Certifies `id_Y ∧ T|_Y = 0` in the regular operators on `Y = E(X)`.
///
/// For each `y` in the positive spanning set `{E·gⱼ}` of `Y`, with
/// `Q = {(id − T)w + T·y : w ∈ Y, 0 ≤ w ≤ y}`:
/// first `cᵢ = min φᵢ(Q)` must be `≥ 0` (0 is a lower bound of `Q`), then
/// `max φᵢ(ℓ)` over `{ℓ ∈ Y : ℓ ≤ c}` must be `≤ 0` (every lower bound of
/// `Q` in `Y` is below 0). Together: `inf_Y Q = 0`.
pub fn transfer_check(e: &RegularOperator, t: &RegularOperator) -> Result<Certificate> {
    check_transfer_hypotheses(e, t)?;
    let ec = e.cone_matrix();
    let tc = t.cone_matrix();
    let n = ec.rows();
    let residual = Matrix::identity(n).sub(tc);

    let mut spanning: Vec<Vector> = Vec::new();
    for j in 0..n {
        let col = ec.column(j);
        if col.iter().any(|x| !x.is_zero()) && !spanning.contains(&col) {
            spanning.push(col);
        }
    }

    let mut cert = Certificate::new("disjointness_transfer");
    for y in &spanning {
        let ty = tc.mul_vec(y);
        let mut lower = Vec::with_capacity(n);
        for i in 0..n {
            let mut lp = LinearProgram::minimize(residual.row(i).to_vec());
            for (j, cap) in y.iter().enumerate() {
                lp = lp.bounds(j, Some(Scalar::zero()), Some(cap.clone()));
            }
            lp = restrict_to_range(lp, ec);
            match optimum(&lp) {
                Some((value, solution)) => {
                    let c = value + &ty[i];
                    cert.push(i, c.clone(), Relation::NonNegative, Some(solution));
                    lower.push(c);
                }
                None => {
                    cert.fail();
                    lower.push(Scalar::zero());
                }
            }
        }
        for i in 0..n {
            let mut lp = LinearProgram::maximize(unit_row(n, i));
            for (j, cap) in lower.iter().enumerate() {
                lp = lp.bounds(j, None, Some(cap.clone()));
            }
            lp = restrict_to_range(lp, ec);
            match optimum(&lp) {
                Some((value, solution)) => cert.push(i, value, Relation::NonPositive, Some(solution)),
                None => cert.fail(),
            }
        }
    }
    Ok(cert)
}
