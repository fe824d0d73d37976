//! Positive projections with constant diagonal.
//!
//! [`analyze`] is the verdict path: exact positivity, idempotence, diagonal,
//! rank and the `α ∈ {0} ∪ {1/m}` law. [`stochastic_normalize`] and
//! [`structure_report`] reduce a projection to a Markov one and read off its
//! row supports; [`recover_partition`] does the same for contractive `ℓp`
//! projections. Instance generators live in [`generators`], the floating
//! feasibility search in [`search`].

pub mod generators;
pub mod search;

use std::fmt;
use std::str::FromStr;

use num::{BigInt, One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LatticeSpace;
use crate::operator::{diagonal_part, operator_pnorm, Exponent, RegularOperator};
use crate::scalar::{reciprocal_of_integer, serde_rat, Matrix, Scalar};

pub use generators::{
    acts_freely, block_projection, conjugate_by_diagonal, direct_sum, generate_group, group_average, orbit_sizes,
    parse_cycles, poisoned_pair, poisoned_pair_with_weights, random_instance,
    random_instance_with_cap, Family, Permutation, PoisonedPair, DEFAULT_CAP,
};
pub use search::{feasibility_search, Budget, SearchOutcome, SearchVerdict};

/// Codes for findings that contradict the constant-diagonal law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Violation {
    /// `α ∉ {0} ∪ {1/m}`.
    AlphaNotUnitFraction,
    /// `α = 1/m` but `m ∤ n`.
    MNotDividingDim,
    /// `rank ≠ n·α`.
    RankNotDimTimesAlpha,
    /// trace of an idempotent differs from its rank.
    TraceNotRank,
    /// constant diagonal 0 on a nonzero projection.
    ZeroDiagonalNonzero,
    /// row supports do not partition the index set, or weights disagree.
    StructureBroken,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = serde_json::to_value(self).expect("unit variant");
        f.write_str(text.as_str().unwrap_or("?"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionReport {
    pub dim: usize,
    pub is_positive: bool,
    pub is_idempotent: bool,
    #[serde(with = "serde_rat::opt")]
    pub alpha: Option<Scalar>,
    #[serde(with = "serde_rat::vec")]
    pub alpha_vector: Vec<Scalar>,
    pub rank: usize,
    #[serde(with = "serde_rat")]
    pub trace: Scalar,
    pub wickstead_m: Option<u64>,
    pub divides_dim: bool,
    pub violations: Vec<Violation>,
}

impl ProjectionReport {
    /// Positive idempotent with constant diagonal.
    pub fn is_constant_diagonal_projection(&self) -> bool {
        self.is_positive && self.is_idempotent && self.alpha.is_some()
    }
}

/// The constant-diagonal law for a positive idempotent on an `n`-dimensional
/// lattice: `α ∈ {0} ∪ {1/m}`, `m | n`, `rank = n·α = trace`, and `α = 0`
/// only for `P = 0`.
pub fn law_violations(alpha: &Scalar, rank: usize, trace: &Scalar, dim: usize, is_zero: bool) -> Vec<Violation> {
    let mut out = Vec::new();
    let rank_q = Scalar::from_integer(BigInt::from(rank));
    if *trace != rank_q {
        out.push(Violation::TraceNotRank);
    }
    if alpha.is_zero() {
        if !is_zero {
            out.push(Violation::ZeroDiagonalNonzero);
        }
    } else {
        match reciprocal_of_integer(alpha) {
            Some(m) => {
                if dim as u64 % m != 0 {
                    out.push(Violation::MNotDividingDim);
                }
            }
            None => out.push(Violation::AlphaNotUnitFraction),
        }
    }
    if alpha * Scalar::from_integer(BigInt::from(dim)) != rank_q {
        out.push(Violation::RankNotDimTimesAlpha);
    }
    out
}

/// Exact analysis of a candidate positive projection.
pub fn analyze(p: &RegularOperator) -> ProjectionReport {
    let is_positive = p.is_positive();
    let is_idempotent = p.is_idempotent();
    let diag = diagonal_part(p);
    let rank = p.rank();
    let trace = p.trace();
    let dim = p.dim();
    let alpha = if is_positive && is_idempotent { diag.alpha.clone() } else { None };
    let mut violations = Vec::new();
    if is_idempotent && trace != Scalar::from_integer(BigInt::from(rank)) {
        violations.push(Violation::TraceNotRank);
    }
    let wickstead_m = alpha.as_ref().and_then(reciprocal_of_integer);
    if let Some(a) = &alpha {
        for v in law_violations(a, rank, &trace, dim, p.is_zero()) {
            if !violations.contains(&v) {
                violations.push(v);
            }
        }
    }
    let divides_dim = wickstead_m.is_some_and(|m| dim as u64 % m == 0);
    ProjectionReport {
        dim,
        is_positive,
        is_idempotent,
        alpha,
        alpha_vector: diag.alpha_vector,
        rank,
        trace,
        wickstead_m,
        divides_dim,
        violations,
    }
}

/// A Markov projection obtained from a positive projection by restricting
/// to the ideal generated by `P·1` and rescaling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalized {
    /// Cone coordinates (0-based) where `P·1` is nonzero.
    pub support: Vec<usize>,
    /// `D⁻¹·P|_S·D` with `D = diag(P·1)` on the support; `Q·1 = 1`.
    pub q: RegularOperator,
}

/// Restricts `P` to the support of `P·1` and conjugates by `diag(P·1)`.
///
/// Works in cone coordinates, so the result lives on a standard cone of
/// dimension `|support|`.
pub fn stochastic_normalize(p: &RegularOperator) -> Result<Normalized> {
    if !p.is_positive() {
        return Err(Error::NotPositive);
    }
    if !p.is_idempotent() {
        return Err(Error::NotIdempotent);
    }
    if p.is_zero() {
        return Err(Error::ZeroProjection);
    }
    let pc = p.cone_matrix();
    let f = pc.mul_vec(&vec![Scalar::one(); p.dim()]);
    let support: Vec<usize> = (0..f.len()).filter(|&i| f[i].is_positive()).collect();
    let q = Matrix::from_fn(support.len(), support.len(), |a, b| {
        let (i, j) = (support[a], support[b]);
        &pc[(i, j)] * &f[j] / &f[i]
    });
    Ok(Normalized { support, q: RegularOperator::standard(q)? })
}

/// Ordered blocks of 0-based indices that cover `0..n` exactly once.
///
/// Text form is 1-based: `"1,3;2,4"`. JSON form is a list of 1-based lists.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Validates that `blocks` are non-empty, disjoint and cover `0..n`.
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for block in &blocks {
            if block.is_empty() {
                return Err(Error::BadPartition("empty block".into()));
            }
            for &i in block {
                if i >= n {
                    return Err(Error::BadPartition(format!("index {} out of range 1..={n}", i + 1)));
                }
                if seen[i] {
                    return Err(Error::BadPartition(format!("index {} repeated", i + 1)));
                }
                seen[i] = true;
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::BadPartition(format!("index {} not covered", i + 1)));
        }
        Ok(Partition { blocks })
    }

    pub fn singletons(n: usize) -> Self {
        Partition { blocks: (0..n).map(|i| vec![i]).collect() }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Common block size, if all blocks have the same size.
    pub fn uniform_size(&self) -> Option<usize> {
        let k = self.blocks.first()?.len();
        self.blocks.iter().all(|b| b.len() == k).then_some(k)
    }

    /// Sorted blocks, each sorted, ordered by least element.
    pub fn canonical(&self) -> Partition {
        let mut blocks: Vec<Vec<usize>> = self
            .blocks
            .iter()
            .map(|b| {
                let mut b = b.clone();
                b.sort_unstable();
                b
            })
            .collect();
        blocks.sort();
        Partition { blocks }
    }

    /// Block index of every point.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.dim()];
        for (k, block) in self.blocks.iter().enumerate() {
            for &i in block {
                labels[i] = k;
            }
        }
        labels
    }

    /// Parses `"1,3;2,4"`; `n` is inferred from the largest index.
    pub fn parse(text: &str) -> Result<Self> {
        let mut blocks = Vec::new();
        for chunk in text.split(';').map(str::trim).filter(|c| !c.is_empty()) {
            let block = chunk
                .split(',')
                .map(|t| {
                    let i: usize = t.trim().parse().map_err(|_| Error::Parse(format!("bad index {t:?}")))?;
                    i.checked_sub(1).ok_or_else(|| Error::Parse("indices are 1-based".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            blocks.push(block);
        }
        let n = blocks.iter().flatten().map(|&i| i + 1).max().unwrap_or(0);
        Partition::new(n, blocks)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(","))
            .collect();
        f.write_str(&parts.join(";"))
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Partition::parse(s)
    }
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let one_based: Vec<Vec<usize>> = self.blocks.iter().map(|b| b.iter().map(|i| i + 1).collect()).collect();
        one_based.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = Vec::<Vec<usize>>::deserialize(d)?;
        let blocks = raw
            .into_iter()
            .map(|b| b.into_iter().map(|i| i.checked_sub(1).ok_or_else(|| D::Error::custom("indices are 1-based"))).collect())
            .collect::<std::result::Result<Vec<Vec<usize>>, _>>()?;
        let n = blocks.iter().flatten().map(|&i| i + 1).max().unwrap_or(0);
        Partition::new(n, blocks).map_err(D::Error::custom)
    }
}

fn one_based<S: serde::Serializer>(xs: &[usize], s: S) -> std::result::Result<S::Ok, S::Error> {
    xs.iter().map(|i| i + 1).collect::<Vec<_>>().serialize(s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowStructure {
    #[serde(serialize_with = "one_based")]
    pub support: Vec<usize>,
    #[serde(with = "serde_rat::vec")]
    pub weights: Vec<Scalar>,
    #[serde(with = "serde_rat")]
    pub row_sum: Scalar,
}

/// Row supports `J_t` and weights `λ(t, s)` of a Markov projection with
/// constant diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    #[serde(with = "serde_rat")]
    pub alpha: Scalar,
    pub rows: Vec<RowStructure>,
    pub partition: Option<Partition>,
    pub violations: Vec<String>,
}

impl StructureReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Reads `J_t` and `λ(t, ·)` off the rows of `Q` and checks: the distinct
/// `J_t` partition the index set, `λ(t, s) = λ(s, s)` on `J_t`, rows sum to
/// 1, and `|J_t| = 1/α`.
pub fn structure_report(q: &RegularOperator) -> Result<StructureReport> {
    if !q.space().is_standard() {
        return Err(Error::PreconditionFailed("standard cone".into()));
    }
    if !q.is_positive() {
        return Err(Error::PreconditionFailed("positive".into()));
    }
    if !q.is_idempotent() {
        return Err(Error::PreconditionFailed("idempotent".into()));
    }
    let n = q.dim();
    let m = q.matrix();
    let rows: Vec<RowStructure> = (0..n)
        .map(|t| {
            let support: Vec<usize> = (0..n).filter(|&s| m[(t, s)].is_positive()).collect();
            let weights = support.iter().map(|&s| m[(t, s)].clone()).collect();
            let row_sum = m.row(t).iter().fold(Scalar::zero(), |acc, x| acc + x);
            RowStructure { support, weights, row_sum }
        })
        .collect();
    if rows.iter().any(|r| !r.row_sum.is_one()) {
        return Err(Error::PreconditionFailed("stochastic (Q·1 = 1)".into()));
    }
    let alpha = match diagonal_part(q).alpha {
        Some(a) if a.is_positive() => a,
        _ => return Err(Error::PreconditionFailed("constant diagonal alpha > 0".into())),
    };

    let mut violations = Vec::new();
    for (t, row) in rows.iter().enumerate() {
        for (s, w) in row.support.iter().zip(&row.weights) {
            if *w != m[(*s, *s)] {
                violations.push(format!("lambda({},{}) != lambda({},{})", t + 1, s + 1, s + 1, s + 1));
            }
            if rows[*s].support != row.support {
                violations.push(format!("J_{} != J_{} although {} in J_{}", s + 1, t + 1, s + 1, t + 1));
            }
        }
        if !row.support.contains(&t) {
            violations.push(format!("{} not in J_{}", t + 1, t + 1));
        }
        let size = Scalar::from_integer(BigInt::from(row.support.len()));
        if &size * &alpha != Scalar::one() {
            violations.push(format!("|J_{}| = {} but 1/alpha = {}", t + 1, row.support.len(), alpha.recip()));
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for row in &rows {
        if !blocks.contains(&row.support) {
            blocks.push(row.support.clone());
        }
    }
    let partition = match Partition::new(n, blocks) {
        Ok(p) => Some(p),
        Err(e) => {
            violations.push(format!("supports do not partition: {e}"));
            None
        }
    };
    Ok(StructureReport { alpha, rows, partition, violations })
}

/// Recovers the block partition of a contractive positive `ℓp` projection
/// with constant diagonal `α > 0`.
///
/// The rows' supports must partition the index set into blocks of size
/// `1/α` with `P` equal to block averaging; anything else is reported as a
/// [`Error::TheoremViolation`].
pub fn recover_partition(p: &RegularOperator, exponent: &Exponent) -> Result<Partition> {
    if !p.space().is_standard() {
        return Err(Error::UnsupportedCone);
    }
    if !p.is_positive() {
        return Err(Error::NotPositive);
    }
    if !p.is_idempotent() {
        return Err(Error::NotIdempotent);
    }
    let norm = operator_pnorm(p, exponent)?;
    if !norm.is_contractive(1e-9) {
        return Err(Error::NotContractive);
    }
    let alpha = diagonal_part(p).alpha.ok_or(Error::DiagonalNotConstant)?;
    if alpha.is_zero() {
        return Err(Error::ZeroDiagonal);
    }
    let n = p.dim();
    let m = p.matrix();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for a in 0..n {
        let support: Vec<usize> = (0..n).filter(|&b| m[(a, b)].is_positive()).collect();
        if !blocks.contains(&support) {
            blocks.push(support);
        }
    }
    let partition = Partition::new(n, blocks)
        .map_err(|e| Error::TheoremViolation(format!("row supports do not partition the index set: {e}")))?;
    let size_ok = partition
        .blocks()
        .iter()
        .all(|b| (alpha.clone() * Scalar::from_integer(BigInt::from(b.len()))).is_one());
    if !size_ok {
        return Err(Error::TheoremViolation(format!("block sizes differ from 1/alpha = {}", alpha.recip())));
    }
    if block_projection(n, &partition)? != *p {
        return Err(Error::TheoremViolation("operator is not block averaging on its row supports".into()));
    }
    Ok(partition)
}

/// `n·α` as an integer when it is one.
pub fn dim_times_alpha(dim: usize, alpha: &Scalar) -> Option<usize> {
    let v = alpha * Scalar::from_integer(BigInt::from(dim));
    if v.is_integer() {
        v.to_integer().to_usize()
    } else {
        None
    }
}

/// Identity on the standard `n`-dimensional lattice.
pub fn identity(n: usize) -> RegularOperator {
    RegularOperator::identity(LatticeSpace::standard(n))
}

/// Instances of `family` at seeds `seed, seed + 1, …`, built in parallel
/// and returned in seed order.
pub fn sweep_instances(family: Family, n: usize, count: usize, seed: u64) -> Result<Vec<(u64, RegularOperator)>> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let s = seed.wrapping_add(i);
            random_instance(family, n, s).map(|op| (s, op))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub seed: u64,
    pub report: ProjectionReport,
}

/// [`analyze`] over [`sweep_instances`].
pub fn sweep(family: Family, n: usize, count: usize, seed: u64) -> Result<Vec<SweepEntry>> {
    Ok(sweep_instances(family, n, count, seed)?
        .into_par_iter()
        .map(|(seed, op)| SweepEntry { seed, report: analyze(&op) })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn std_op(rows: &[&[(i64, i64)]]) -> RegularOperator {
        RegularOperator::standard(Matrix::from_fracs(rows)).unwrap()
    }

    fn skew() -> RegularOperator {
        std_op(&[&[(1, 2), (1, 4)], &[(1, 1), (1, 2)]])
    }

    #[test]
    fn analyze_examples() {
        let blocks = block_projection(4, &Partition::parse("1,2;3,4").unwrap()).unwrap();
        let r = analyze(&blocks);
        assert_eq!((r.alpha.clone(), r.wickstead_m, r.rank, r.divides_dim), (Some(rat(1, 2)), Some(2), 2, true));
        assert!(r.violations.is_empty());

        let r = analyze(&skew());
        assert!(r.is_positive && r.is_idempotent);
        assert_eq!((r.alpha.clone(), r.wickstead_m, r.rank), (Some(rat(1, 2)), Some(2), 1));
        assert_eq!(r.trace, int(1));
        assert!(r.violations.is_empty());

        let r = analyze(&RegularOperator::zero(LatticeSpace::standard(3)));
        assert_eq!((r.alpha.clone(), r.wickstead_m, r.rank), (Some(int(0)), None, 0));
        assert!(r.violations.is_empty());
    }

    #[test]
    fn analyze_withholds_alpha_for_non_projections() {
        let r = analyze(&std_op(&[&[(1, 2), (1, 2)], &[(0, 1), (1, 2)]]));
        assert!(!r.is_idempotent);
        assert_eq!(r.alpha, None);
        assert!(r.violations.is_empty());
        let r = analyze(&std_op(&[&[(1, 1), (-1, 1)], &[(0, 1), (0, 1)]]));
        assert!(!r.is_positive && r.is_idempotent);
        assert_eq!(r.alpha, None);
    }

    #[test]
    fn law_flags_each_defect() {
        assert_eq!(law_violations(&rat(2, 5), 2, &int(2), 5, false), vec![Violation::AlphaNotUnitFraction]);
        assert_eq!(
            law_violations(&rat(1, 3), 1, &int(1), 4, false),
            vec![Violation::MNotDividingDim, Violation::RankNotDimTimesAlpha]
        );
        assert_eq!(
            law_violations(&int(0), 1, &int(1), 3, false),
            vec![Violation::ZeroDiagonalNonzero, Violation::RankNotDimTimesAlpha]
        );
        assert_eq!(law_violations(&rat(1, 2), 2, &rat(3, 2), 4, false), vec![Violation::TraceNotRank]);
        assert!(law_violations(&int(0), 0, &int(0), 3, true).is_empty());
        assert_eq!(Violation::AlphaNotUnitFraction.to_string(), "ALPHA_NOT_UNIT_FRACTION");
    }

    #[test]
    fn normalize_examples() {
        let n = stochastic_normalize(&skew()).unwrap();
        assert_eq!(n.support, vec![0, 1]);
        assert_eq!(n.q, std_op(&[&[(1, 2), (1, 2)], &[(1, 2), (1, 2)]]));

        let markov = block_projection(4, &Partition::parse("1,3;2,4").unwrap()).unwrap();
        let n = stochastic_normalize(&markov).unwrap();
        assert_eq!(n.support, vec![0, 1, 2, 3]);
        assert_eq!(n.q, markov);

        let n = stochastic_normalize(&std_op(&[&[(1, 1), (0, 1)], &[(0, 1), (0, 1)]])).unwrap();
        assert_eq!(n.support, vec![0]);
        assert_eq!(n.q, identity(1));

        let zero = RegularOperator::zero(LatticeSpace::standard(2));
        assert_eq!(stochastic_normalize(&zero), Err(Error::ZeroProjection));
        assert_eq!(stochastic_normalize(&std_op(&[&[(2, 1)]])), Err(Error::NotIdempotent));
    }

    #[test]
    fn structure_examples() {
        let r = structure_report(&std_op(&[&[(1, 2), (1, 2)], &[(1, 2), (1, 2)]])).unwrap();
        assert!(r.holds());
        assert_eq!(r.partition.unwrap().blocks(), &[vec![0, 1]]);
        assert!(r.rows.iter().all(|row| row.weights == vec![rat(1, 2), rat(1, 2)]));

        let r = structure_report(&identity(3)).unwrap();
        assert!(r.holds());
        assert_eq!(r.partition.unwrap(), Partition::singletons(3));
        assert_eq!(r.alpha, int(1));

        assert!(matches!(structure_report(&skew()), Err(Error::PreconditionFailed(_))));
        let uneven = block_projection(3, &Partition::parse("1,2;3").unwrap()).unwrap();
        assert!(matches!(structure_report(&uneven), Err(Error::PreconditionFailed(_))));
    }

    #[test]
    fn partition_grammar() {
        let p = Partition::parse("1,3; 2,4").unwrap();
        assert_eq!(p.blocks(), &[vec![0, 2], vec![1, 3]]);
        assert_eq!(p.to_string(), "1,3;2,4");
        assert_eq!(serde_json::to_string(&p).unwrap(), "[[1,3],[2,4]]");
        assert!(Partition::parse("1,2;2,3").is_err());
        assert!(Partition::parse("1,3").is_err());
        assert!(Partition::parse("0,1").is_err());
        assert_eq!(p.uniform_size(), Some(2));
    }

    #[test]
    fn sweep_is_ordered_and_reproducible() {
        let a = sweep(Family::Group, 6, 8, u64::MAX - 3).unwrap();
        assert_eq!(a.iter().map(|e| e.seed).collect::<Vec<_>>(), vec![u64::MAX - 3, u64::MAX - 2, u64::MAX - 1, u64::MAX, 0, 1, 2, 3]);
        assert_eq!(a, sweep(Family::Group, 6, 8, u64::MAX - 3).unwrap());
        assert!(a.iter().all(|e| e.report.violations.is_empty() && e.report.alpha.is_some()));
        assert!(sweep(Family::DirectSum, 1, 2, 0).is_err());
    }

    #[test]
    fn recover_examples() {
        let part = Partition::parse("1,3;2,4").unwrap();
        let p = block_projection(4, &part).unwrap();
        assert_eq!(recover_partition(&p, &Exponent::one()).unwrap(), part);
        for e in ["1", "2", "3", "inf"] {
            let got = recover_partition(&identity(3), &e.parse().unwrap()).unwrap();
            assert_eq!(got, Partition::singletons(3));
        }
        let third = rat(1, 3);
        let avg = RegularOperator::standard(Matrix::from_fn(3, 3, |_, _| third.clone())).unwrap();
        assert_eq!(recover_partition(&avg, &Exponent::two()).unwrap().blocks(), &[vec![0, 1, 2]]);

        assert_eq!(recover_partition(&skew(), &Exponent::one()), Err(Error::NotContractive));
        let uneven = block_projection(3, &Partition::parse("1,2;3").unwrap()).unwrap();
        assert_eq!(recover_partition(&uneven, &Exponent::one()), Err(Error::DiagonalNotConstant));
        let zero = RegularOperator::zero(LatticeSpace::standard(2));
        assert_eq!(recover_partition(&zero, &Exponent::Infinity), Err(Error::ZeroDiagonal));
    }
}
