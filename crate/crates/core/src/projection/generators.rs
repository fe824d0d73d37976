//! Constructions of positive projections: block averaging, group averaging,
//! diagonal similarities, direct sums, rank-one projections, and the seeded
//! families built from them.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num::{BigInt, Zero};

use super::Partition;
use crate::error::{Error, Result};
use crate::operator::RegularOperator;
use crate::rng::SplitMix64;
use crate::scalar::{rat, Matrix, Scalar};

/// Default dimension cap for [`random_instance`].
pub const DEFAULT_CAP: usize = 24;
/// Closure of [`generate_group`] stops beyond this many elements.
pub const GROUP_CAP: usize = 1_000_000;

/// A permutation of `0..n` as its image table: `σ(i) = images[i]`.
pub type Permutation = Vec<usize>;

fn scalar_usize(k: usize) -> Scalar {
    Scalar::from_integer(BigInt::from(k))
}

/// `P_ij = 1/|B|` when `i` and `j` lie in the same block `B`, else 0.
pub fn block_projection(n: usize, partition: &Partition) -> Result<RegularOperator> {
    if partition.dim() != n {
        return Err(Error::BadPartition(format!("partition covers {} points, expected {n}", partition.dim())));
    }
    let labels = partition.labels();
    let weights: Vec<Scalar> = partition.blocks().iter().map(|b| scalar_usize(b.len()).recip()).collect();
    let m = Matrix::from_fn(n, n, |i, j| {
        if labels[i] == labels[j] {
            weights[labels[i]].clone()
        } else {
            Scalar::zero()
        }
    });
    RegularOperator::standard(m)
}

fn check_permutation(n: usize, perm: &[usize]) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::NotAPermutation(n));
    }
    for &i in perm {
        if i >= n || seen[i] {
            return Err(Error::NotAPermutation(n));
        }
        seen[i] = true;
    }
    Ok(())
}

/// Parses cycle notation such as `"(1 2 3)(4 5)"` (1-based) into a
/// permutation of `0..n`. Empty text and `"()"` give the identity.
pub fn parse_cycles(n: usize, text: &str) -> Result<Permutation> {
    let mut perm: Permutation = (0..n).collect();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let inner_start = rest.strip_prefix('(').ok_or_else(|| Error::Parse(format!("expected '(' in {text:?}")))?;
        let close = inner_start.find(')').ok_or_else(|| Error::Parse(format!("unclosed cycle in {text:?}")))?;
        let cycle = inner_start[..close]
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                let i: usize = t.parse().map_err(|_| Error::Parse(format!("bad point {t:?}")))?;
                if i == 0 || i > n {
                    return Err(Error::NotAPermutation(n));
                }
                Ok(i - 1)
            })
            .collect::<Result<Vec<_>>>()?;
        let distinct: HashSet<_> = cycle.iter().collect();
        if distinct.len() != cycle.len() {
            return Err(Error::NotAPermutation(n));
        }
        // Products compose right to left: the rightmost cycle acts first.
        let mut c: Permutation = (0..n).collect();
        for (k, &i) in cycle.iter().enumerate() {
            c[i] = cycle[(k + 1) % cycle.len()];
        }
        perm = (0..n).map(|i| perm[c[i]]).collect();
        rest = inner_start[close + 1..].trim_start();
    }
    Ok(perm)
}

/// All elements of the group generated by `generators`, identity first,
/// in breadth-first order.
pub fn generate_group(n: usize, generators: &[Permutation]) -> Result<Vec<Permutation>> {
    for g in generators {
        check_permutation(n, g)?;
    }
    let identity: Permutation = (0..n).collect();
    let mut seen: HashSet<Permutation> = HashSet::from([identity.clone()]);
    let mut elements = vec![identity];
    let mut frontier = 0;
    while frontier < elements.len() {
        let current = elements[frontier].clone();
        frontier += 1;
        for g in generators {
            let next: Permutation = current.iter().map(|&i| g[i]).collect();
            if seen.insert(next.clone()) {
                if elements.len() >= GROUP_CAP {
                    return Err(Error::GroupTooLarge(GROUP_CAP));
                }
                elements.push(next);
            }
        }
    }
    Ok(elements)
}

/// `(P f)(t) = (1/|G|) Σ_σ f(σ(t))` over the generated group.
pub fn group_average(n: usize, generators: &[Permutation]) -> Result<RegularOperator> {
    let group = generate_group(n, generators)?;
    let mut counts = vec![0usize; n * n];
    for sigma in &group {
        for t in 0..n {
            counts[t * n + sigma[t]] += 1;
        }
    }
    let order = scalar_usize(group.len());
    RegularOperator::standard(Matrix::from_fn(n, n, |i, j| scalar_usize(counts[i * n + j]) / &order))
}

/// Orbit sizes of every point under the generated group.
pub fn orbit_sizes(n: usize, generators: &[Permutation]) -> Result<Vec<usize>> {
    let group = generate_group(n, generators)?;
    Ok((0..n)
        .map(|t| group.iter().map(|s| s[t]).collect::<HashSet<_>>().len())
        .collect())
}

/// No non-identity element fixes a point.
pub fn acts_freely(n: usize, generators: &[Permutation]) -> Result<bool> {
    let group = generate_group(n, generators)?;
    Ok(group.iter().skip(1).all(|s| (0..n).all(|t| s[t] != t)))
}

/// `D·P·D⁻¹` for `D = diag(d)`, `d > 0`; preserves positivity, idempotence
/// and the diagonal.
pub fn conjugate_by_diagonal(p: &RegularOperator, d: &[Scalar]) -> Result<RegularOperator> {
    if d.len() != p.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), found: d.len() });
    }
    if d.iter().any(|x| *x <= Scalar::zero()) {
        return Err(Error::NotPositive);
    }
    let c = p.cone_matrix();
    RegularOperator::from_cone_matrix(
        p.space().clone(),
        Matrix::from_fn(p.dim(), p.dim(), |i, j| &c[(i, j)] * &d[i] / &d[j]),
    )
}

/// Block-diagonal sum of operators on standard cones.
pub fn direct_sum(parts: &[RegularOperator]) -> Result<RegularOperator> {
    let n: usize = parts.iter().map(RegularOperator::dim).sum();
    let mut m = Matrix::zeros(n, n);
    let mut offset = 0;
    for part in parts {
        if !part.space().is_standard() {
            return Err(Error::UnsupportedCone);
        }
        let k = part.dim();
        for i in 0..k {
            for j in 0..k {
                m.set(offset + i, offset + j, part.matrix()[(i, j)].clone());
            }
        }
        offset += k;
    }
    RegularOperator::standard(m)
}

/// `u·vᵀ` with `⟨v, u⟩ = 1`; positive and idempotent.
pub fn rank_one(u: &[Scalar], v: &[Scalar]) -> Result<RegularOperator> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch { expected: u.len(), found: v.len() });
    }
    let n = u.len();
    RegularOperator::standard(Matrix::from_fn(n, n, |i, j| &u[i] * &v[j]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Block,
    Group,
    ConjugatedBlock,
    DirectSum,
    RankOne,
}

impl Family {
    pub const ALL: [Family; 5] =
        [Family::Block, Family::Group, Family::ConjugatedBlock, Family::DirectSum, Family::RankOne];

    pub fn name(self) -> &'static str {
        match self {
            Family::Block => "block",
            Family::Group => "group",
            Family::ConjugatedBlock => "conjugated-block",
            Family::DirectSum => "direct-sum",
            Family::RankOne => "rank-one",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::BadFamily(s.to_string()))
    }
}

fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|k| n % k == 0).collect()
}

/// Positive rational in `{1/4, 2/4, …, 8/4}`.
fn small_positive(rng: &mut SplitMix64) -> Scalar {
    rat(rng.range_inclusive(1, 8) as i64, 4)
}

fn random_equal_partition(rng: &mut SplitMix64, n: usize, k: usize) -> Partition {
    let mut points: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut points);
    let blocks = points.chunks(k).map(<[usize]>::to_vec).collect();
    Partition::new(n, blocks).expect("chunks of a permutation")
}

fn block_instance(rng: &mut SplitMix64, n: usize, k: usize) -> Result<RegularOperator> {
    block_projection(n, &random_equal_partition(rng, n, k))
}

/// Free action of `ℤ_a × ℤ_b` (`a·b = k`) on `n/k` orbits of size `k`.
fn group_instance(rng: &mut SplitMix64, n: usize, k: usize) -> Result<RegularOperator> {
    let a = *rng.choose(&divisors(k));
    let b = k / a;
    let mut points: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut points);
    let mut g1: Permutation = (0..n).collect();
    let mut g2: Permutation = (0..n).collect();
    for orbit in points.chunks(k) {
        // orbit[i * b + j] is the grid point (i, j).
        for i in 0..a {
            for j in 0..b {
                g1[orbit[i * b + j]] = orbit[((i + 1) % a) * b + j];
                g2[orbit[i * b + j]] = orbit[i * b + (j + 1) % b];
            }
        }
    }
    group_average(n, &[g1, g2])
}

fn conjugated_block_instance(rng: &mut SplitMix64, n: usize, k: usize) -> Result<RegularOperator> {
    let p = block_instance(rng, n, k)?;
    let d: Vec<Scalar> = (0..n).map(|_| small_positive(rng)).collect();
    conjugate_by_diagonal(&p, &d)
}

/// `u·vᵀ` with `uᵢvᵢ = 1/n`, which forces constant diagonal `1/n`.
fn rank_one_instance(rng: &mut SplitMix64, n: usize) -> Result<RegularOperator> {
    let u: Vec<Scalar> = (0..n).map(|_| small_positive(rng)).collect();
    let n_q = scalar_usize(n);
    let v: Vec<Scalar> = u.iter().map(|x| (x * &n_q).recip()).collect();
    rank_one(&u, &v)
}

/// Instance of size `n` with diagonal `1/k` from any non-composite family.
fn instance_with_block_size(rng: &mut SplitMix64, n: usize, k: usize) -> Result<RegularOperator> {
    let mut options = vec![Family::Block, Family::Group, Family::ConjugatedBlock];
    if n == k {
        options.push(Family::RankOne);
    }
    match *rng.choose(&options) {
        Family::Block => block_instance(rng, n, k),
        Family::Group => group_instance(rng, n, k),
        Family::ConjugatedBlock => conjugated_block_instance(rng, n, k),
        _ => rank_one_instance(rng, n),
    }
}

fn direct_sum_instance(rng: &mut SplitMix64, n: usize) -> Result<RegularOperator> {
    let ks: Vec<usize> = divisors(n).into_iter().filter(|k| n / k >= 2).collect();
    if ks.is_empty() {
        return Err(Error::BadFamily("direct-sum needs n >= 2".into()));
    }
    let k = *rng.choose(&ks);
    let r = n / k;
    let r1 = rng.range_inclusive(1, r - 1);
    let left = instance_with_block_size(rng, r1 * k, k)?;
    let right = instance_with_block_size(rng, (r - r1) * k, k)?;
    direct_sum(&[left, right])
}

/// Deterministic instance from `family`, with the default dimension cap.
pub fn random_instance(family: Family, n: usize, seed: u64) -> Result<RegularOperator> {
    random_instance_with_cap(family, n, seed, DEFAULT_CAP)
}

pub fn random_instance_with_cap(family: Family, n: usize, seed: u64, cap: usize) -> Result<RegularOperator> {
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    if n == 0 {
        return Err(Error::BadFamily("dimension must be positive".into()));
    }
    let mut rng = SplitMix64::new(seed);
    match family {
        Family::Block => {
            let k = *rng.choose(&divisors(n));
            block_instance(&mut rng, n, k)
        }
        Family::Group => {
            let k = *rng.choose(&divisors(n));
            group_instance(&mut rng, n, k)
        }
        Family::ConjugatedBlock => {
            let k = *rng.choose(&divisors(n));
            conjugated_block_instance(&mut rng, n, k)
        }
        Family::DirectSum => direct_sum_instance(&mut rng, n),
        Family::RankOne => rank_one_instance(&mut rng, n),
    }
}

/// A projection `E` and an operator `T` with `E·T = T·E = T` and `E ∧ T = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoisonedPair {
    pub e: RegularOperator,
    pub t: RegularOperator,
}

/// `E` = block averaging on `blocks`; `T = Σ w·A(a←b)` where `A(a←b)` has
/// entries `1/k` on rows of block `a` and columns of block `b`.
pub fn poisoned_pair_with_weights(
    n: usize,
    blocks: &Partition,
    weights: &[(usize, usize, Scalar)],
) -> Result<PoisonedPair> {
    let k = match blocks.uniform_size() {
        Some(k) if blocks.len() >= 2 => k,
        _ => return Err(Error::NeedTwoBlocks),
    };
    let e = block_projection(n, blocks)?;
    let inv_k = scalar_usize(k).recip();
    let mut t = Matrix::zeros(n, n);
    for (a, b, w) in weights {
        if a == b || *a >= blocks.len() || *b >= blocks.len() {
            return Err(Error::BadPartition(format!("bad block pair ({}, {})", a + 1, b + 1)));
        }
        if *w < Scalar::zero() {
            return Err(Error::NotPositive);
        }
        let entry = w * &inv_k;
        for &i in &blocks.blocks()[*a] {
            for &j in &blocks.blocks()[*b] {
                let value = &t[(i, j)] + &entry;
                t.set(i, j, value);
            }
        }
    }
    Ok(PoisonedPair { e, t: RegularOperator::standard(t)? })
}

/// Random nonnegative weights on ordered pairs of distinct blocks; about
/// half the pairs get weight 0.
pub fn poisoned_pair(n: usize, blocks: &Partition, seed: u64) -> Result<PoisonedPair> {
    let mut rng = SplitMix64::new(seed);
    let mut weights = Vec::new();
    for a in 0..blocks.len() {
        for b in 0..blocks.len() {
            if a != b && rng.below(2) == 1 {
                weights.push((a, b, small_positive(&mut rng)));
            }
        }
    }
    poisoned_pair_with_weights(n, blocks, &weights)
}
