//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Oracles are computed here, independently of the library paths
//! they check.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num::{BigInt, One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use vlattice::algebra::{family_alpha, poison_verdict, wickstead_family, Classification};
use vlattice::certify::{certify_meet, transfer_check, CertifiedSublattice};
use vlattice::error::{Error, Hypothesis};
use vlattice::lattice::{make_space, LatticeSpace, Vector};
use vlattice::operator::{op_meet, operator_pnorm, Exponent, RegularOperator};
use vlattice::projection::search::{feasibility_search, Budget};
use vlattice::projection::{
    analyze, block_projection, law_violations, poisoned_pair, recover_partition, stochastic_normalize,
    structure_report, sweep_instances, Family, Partition, Violation,
};
use vlattice::rng::SplitMix64;
use vlattice::scalar::{rat, Matrix, Scalar};

type Outcome = Result<String, String>;

fn int(n: usize) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------- 1

/// Rational roots of `a·x² + b·x + c` with integer discriminant root, by hand.
fn rational_roots(a: &Scalar, b: &Scalar, c: &Scalar) -> Vec<Scalar> {
    if a.is_zero() {
        return if b.is_zero() { vec![] } else { vec![-c / b] };
    }
    let disc = b * b - Scalar::from_integer(BigInt::from(4)) * a * c;
    if disc.is_negative() {
        return vec![];
    }
    let (num, den) = (disc.numer().sqrt(), disc.denom().sqrt());
    let root = Scalar::new(num.clone(), den.clone());
    if &root * &root != disc {
        return vec![];
    }
    let two_a = a * Scalar::from_integer(BigInt::from(2));
    let mut out = vec![(-b - &root) / &two_a, (-b + &root) / &two_a];
    out.sort();
    out.dedup();
    out
}

/// All `(α, b, c)` with `[[α, b], [c, α]]² = [[α, b], [c, α]]`, for a given
/// nonzero `b` candidate, by the case split on `b(2α − 1) = 0`.
fn two_by_two_oracle(b_candidate: &Scalar) -> Vec<(Scalar, Scalar, Scalar)> {
    let mut out = Vec::new();
    // b ≠ 0: 2α − 1 = 0, then c = (α − α²)/b; c(2α − 1) = 0 holds.
    for alpha in rational_roots(&Scalar::zero(), &int(2), &-Scalar::one()) {
        let c = (&alpha - &alpha * &alpha) / b_candidate;
        out.push((alpha, b_candidate.clone(), c));
    }
    // b = 0: α² − α = 0, then c(2α − 1) = 0 forces c = 0.
    for alpha in rational_roots(&Scalar::one(), &-Scalar::one(), &Scalar::zero()) {
        let two_alpha_minus_one = &alpha * int(2) - Scalar::one();
        assert!(!two_alpha_minus_one.is_zero());
        out.push((alpha, Scalar::zero(), Scalar::zero()));
    }
    out
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let bs = [rat(1, 4), rat(1, 2), rat(1, 1), rat(2, 1)];
    let mut alphas: Vec<Scalar> = Vec::new();
    let mut checked = 0;
    for b in &bs {
        for (alpha, bb, c) in two_by_two_oracle(b) {
            if !bb.is_zero() {
                ensure(c == (&bb * int(4)).recip(), || format!("c != 1/(4b) for b = {bb}"))?;
            }
            let op = RegularOperator::standard(
                Matrix::from_rows(vec![vec![alpha.clone(), bb.clone()], vec![c.clone(), alpha.clone()]]).unwrap(),
            )
            .unwrap();
            let report = analyze(&op);
            ensure(report.is_positive && report.is_idempotent, || format!("oracle solution {op:?} rejected"))?;
            ensure(report.alpha.as_ref() == Some(&alpha), || format!("alpha mismatch on {op:?}"))?;
            ensure(report.violations.is_empty(), || format!("violations on {op:?}"))?;
            alphas.push(alpha);
            checked += 1;
        }
        // Off the oracle's set, the same shape is never idempotent.
        for alpha in [rat(1, 3), rat(1, 4), rat(2, 3), rat(3, 4)] {
            let c = (&alpha - &alpha * &alpha) / b;
            let op =
                RegularOperator::standard(Matrix::from_rows(vec![vec![alpha.clone(), b.clone()], vec![c, alpha]]).unwrap())
                    .unwrap();
            ensure(!analyze(&op).is_idempotent, || format!("{op:?} should not be idempotent"))?;
        }
    }
    alphas.sort();
    alphas.dedup();
    ensure(alphas == vec![rat(0, 1), rat(1, 2), rat(1, 1)], || format!("oracle alphas {alphas:?}"))?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("{checked} oracle solutions, alpha in {{0, 1/2, 1}}"))
}

// ---------------------------------------------------------------- 2, 6, 9

fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|k| n % k == 0).collect()
}

/// Checks one sweep instance against the law, computed independently from
/// the diagonal and rank.
fn check_law(op: &RegularOperator) -> Result<(), String> {
    let n = op.dim();
    let report = analyze(op);
    ensure(report.is_positive && report.is_idempotent, || format!("generator produced a non-projection {op:?}"))?;
    let diag = op.cone_matrix().diagonal();
    ensure(diag.iter().all(|d| *d == diag[0]), || format!("non-constant diagonal {op:?}"))?;
    let alpha = diag[0].clone();
    ensure(report.alpha.as_ref() == Some(&alpha), || "analyze disagrees on alpha".into())?;
    ensure(report.violations.is_empty(), || format!("violations {:?} on {op:?}", report.violations))?;
    if alpha.is_zero() {
        ensure(op.matrix().is_zero(), || "zero diagonal on a nonzero projection".into())?;
        return Ok(());
    }
    ensure(alpha.numer().is_one(), || format!("alpha = {alpha} is not 1/m"))?;
    let m = alpha.denom().to_usize().unwrap();
    ensure(n % m == 0, || format!("m = {m} does not divide n = {n}"))?;
    let rank = op.matrix().rank();
    ensure(int(rank) == &alpha * int(n), || format!("rank {rank} != n alpha"))?;
    Ok(())
}

fn check_structure(op: &RegularOperator) -> Result<usize, String> {
    let mut checked = 0;
    let ones = vec![Scalar::one(); op.dim()];
    let stochastic = op.space().is_standard() && op.matrix().mul_vec(&ones) == ones;
    let normalized = stochastic_normalize(op).map_err(|e| e.to_string())?;
    let mut targets = vec![normalized.q];
    if stochastic {
        targets.push(op.clone());
    }
    for q in &targets {
        let report = structure_report(q).map_err(|e| e.to_string())?;
        ensure(report.holds(), || format!("structure violations {:?}", report.violations))?;
        let partition = report.partition.as_ref().ok_or("no partition")?;
        // Independent re-check on the matrix itself.
        let m = q.matrix();
        let n = q.dim();
        let mut covered = vec![0usize; n];
        for block in partition.blocks() {
            ensure(int(block.len()) * &report.alpha == Scalar::one(), || "|J| != 1/alpha".into())?;
            for &t in block {
                covered[t] += 1;
                for &s in block {
                    ensure(m[(t, s)] == m[(s, s)], || "lambda(t,s) != lambda(s,s)".into())?;
                }
            }
        }
        ensure(covered.iter().all(|&c| c == 1), || "J-sets do not partition".into())?;
        for t in 0..n {
            let sum = m.row(t).iter().fold(Scalar::zero(), |a, x| a + x);
            ensure(sum.is_one(), || "row sum != 1".into())?;
        }
        checked += 1;
    }
    Ok(checked)
}

struct SweepResult {
    instances: usize,
    structures: usize,
    elapsed: Duration,
    law: Result<(), String>,
    structure: Result<(), String>,
}

fn run_sweep() -> SweepResult {
    let start = Instant::now();
    let per_cell = 170;
    let mut jobs = Vec::new();
    for n in 1..=12 {
        for family in Family::ALL {
            if family == Family::DirectSum && n == 1 {
                continue;
            }
            jobs.push((family, n));
        }
    }
    let results: Vec<Result<(usize, Result<usize, String>), String>> = jobs
        .par_iter()
        .map(|&(family, n)| {
            let seed = (n as u64) << 32 | family as u64;
            let instances = sweep_instances(family, n, per_cell, seed).map_err(|e| e.to_string())?;
            let mut structures = 0;
            let mut structure_failure = None;
            for (s, op) in &instances {
                check_law(op).map_err(|e| format!("{} n={n} seed={s}: {e}", family.name()))?;
                if structure_failure.is_none() {
                    match check_structure(op) {
                        Ok(k) => structures += k,
                        Err(e) => structure_failure = Some(format!("{} n={n} seed={s}: {e}", family.name())),
                    }
                }
            }
            Ok((instances.len(), structure_failure.map_or(Ok(structures), Err)))
        })
        .collect();
    let mut out = SweepResult {
        instances: 0,
        structures: 0,
        elapsed: Duration::ZERO,
        law: Ok(()),
        structure: Ok(()),
    };
    for r in results {
        match r {
            Ok((k, s)) => {
                out.instances += k;
                match s {
                    Ok(c) => out.structures += c,
                    Err(e) => out.structure = Err(e),
                }
            }
            Err(e) => out.law = Err(e),
        }
    }
    out.elapsed = start.elapsed();
    out
}

fn criterion_2(sweep: &SweepResult) -> Outcome {
    sweep.law.clone()?;
    ensure(sweep.instances >= 10_000, || format!("only {} instances", sweep.instances))?;
    ensure(sweep.elapsed < Duration::from_secs(300), || format!("took {:?}", sweep.elapsed))?;
    Ok(format!("{} instances, n <= 12, zero violations, swept in {:.2}s", sweep.instances, sweep.elapsed.as_secs_f64()))
}

fn criterion_6(sweep: &SweepResult) -> Outcome {
    sweep.structure.clone()?;
    ensure(sweep.structures >= sweep.instances, || "some instances skipped".into())?;
    Ok(format!("{} Markov projections (stochastic instances and normalized outputs)", sweep.structures))
}

fn criterion_9(sweep: &SweepResult) -> Outcome {
    sweep.law.clone()?;
    let mut zeros = 0;
    for n in 1..=12 {
        let zero = RegularOperator::zero(LatticeSpace::standard(n));
        let report = analyze(&zero);
        ensure(report.alpha == Some(Scalar::zero()) && report.rank == 0, || "zero operator misreported".into())?;
        ensure(report.violations.is_empty(), || "zero operator flagged".into())?;
        check_law(&zero)?;
        zeros += 1;
        // A claimant with diagonal 0 but positive rank is flagged.
        for rank in 1..=n {
            let flagged = law_violations(&Scalar::zero(), rank, &Scalar::zero(), n, false);
            ensure(flagged.contains(&Violation::ZeroDiagonalNonzero), || "nonzero claimant not flagged".into())?;
        }
    }
    // Nilpotent positive operators have zero diagonal and are never idempotent.
    let nil = RegularOperator::standard(Matrix::from_fracs(&[&[(0, 1), (1, 1)], &[(0, 1), (0, 1)]])).unwrap();
    let report = analyze(&nil);
    ensure(!report.is_idempotent && report.alpha.is_none(), || "nilpotent given an alpha".into())?;
    Ok(format!("{} sweep instances plus {zeros} zero operators; claimants flagged", sweep.instances))
}

// ---------------------------------------------------------------- 3

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut forbidden = Vec::new();
    for n in [3usize, 4, 5] {
        for alpha in [0.3, 0.4, 0.45, 0.6, 0.7] {
            forbidden.push((n, alpha));
        }
    }
    let allowed: Vec<(usize, f64)> = [3usize, 4, 5]
        .into_iter()
        .flat_map(|n| [2usize, 3, 4].into_iter().filter(move |m| n % m == 0).map(move |m| (n, 1.0 / m as f64)))
        .collect();
    let run = |cases: &[(usize, f64)]| -> Vec<(usize, f64, f64)> {
        cases
            .par_iter()
            .map(|&(n, a)| (n, a, feasibility_search(n, a, Budget::default(), 2024).unwrap().best_residual))
            .collect()
    };
    let mut worst_forbidden = f64::INFINITY;
    for (n, a, r) in run(&forbidden) {
        ensure(r >= 1e-3, || format!("n={n} alpha={a}: residual {r:e} < 1e-3"))?;
        worst_forbidden = worst_forbidden.min(r);
    }
    let mut worst_allowed = 0.0f64;
    for (n, a, r) in run(&allowed) {
        ensure(r <= 1e-10, || format!("n={n} alpha={a}: residual {r:e} > 1e-10"))?;
        worst_allowed = worst_allowed.max(r);
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(600), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} forbidden cases (min residual {worst_forbidden:.3e}), {} allowed (max residual {worst_allowed:.1e})",
        forbidden.len(),
        allowed.len()
    ))
}

// ---------------------------------------------------------------- 4

fn random_space(rng: &mut SplitMix64, n: usize) -> LatticeSpace {
    if rng.below(2) == 0 {
        return LatticeSpace::standard(n);
    }
    loop {
        let basis = Matrix::from_fn(n, n, |_, _| Scalar::from_integer(BigInt::from(rng.below(7) as i64 - 3)));
        if let Ok(space) = make_space(basis) {
            return space;
        }
    }
}

fn random_positive(rng: &mut SplitMix64, space: &LatticeSpace) -> RegularOperator {
    let n = space.dim();
    let cone = Matrix::from_fn(n, n, |_, _| if rng.below(3) == 0 { Scalar::zero() } else { rat(rng.below(6) as i64 + 1, 2) });
    RegularOperator::from_cone_matrix(space.clone(), cone).unwrap()
}

/// `min_{0 ≤ y ≤ x} (S y + T (x − y))` coordinatewise in cone coordinates:
/// with `x = Σ xⱼ gⱼ`, each coordinate splits over `j` and the minimum
/// picks `min(Sᵢⱼ, Tᵢⱼ)·xⱼ`.
fn box_oracle(s: &RegularOperator, t: &RegularOperator, x: &[Scalar]) -> Vector {
    let space = s.space();
    let cx = space.to_coords(x).unwrap();
    let (sc, tc) = (s.cone_matrix(), t.cone_matrix());
    let n = cx.len();
    let coords: Vector = (0..n)
        .map(|i| (0..n).fold(Scalar::zero(), |acc, j| acc + sc[(i, j)].clone().min(tc[(i, j)].clone()) * &cx[j]))
        .collect();
    space.from_coords(&coords).unwrap()
}

fn criterion_4() -> Outcome {
    let cases: Vec<Result<usize, String>> = (0..1000u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = SplitMix64::new(0xACCE_0004_0000 + k);
            let n = rng.range_inclusive(1, 6);
            let space = random_space(&mut rng, n);
            let s = random_positive(&mut rng, &space);
            let t = random_positive(&mut rng, &space);
            let meet = op_meet(&s, &t).map_err(|e| e.to_string())?;
            for _ in 0..5 {
                let coords: Vector = (0..n).map(|_| rat(rng.below(9) as i64, rng.range_inclusive(1, 3) as i64)).collect();
                let x = space.from_coords(&coords).unwrap();
                let (value, cert) = certify_meet(&s, &t, &x).map_err(|e| e.to_string())?;
                let expected = meet.apply(&x).unwrap();
                if !cert.holds || value != expected || value != box_oracle(&s, &t, &x) {
                    return Err(format!("pair {k}: discrepancy at x = {x:?}"));
                }
            }
            Ok(usize::from(!space.is_standard()))
        })
        .collect();
    let mut nonstandard = 0;
    for c in cases {
        nonstandard += c?;
    }
    Ok(format!("1000 pairs x 5 vectors ({nonstandard} on non-standard cones), zero discrepancies"))
}

// ---------------------------------------------------------------- 5

fn criterion_5() -> Outcome {
    let outcomes: Vec<Result<(), String>> = (0..1000u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = SplitMix64::new(0xACCE_0005_0000 + k);
            let n = rng.range_inclusive(1, 24);
            let ks = divisors(n);
            let size = *rng.choose(&ks);
            let mut points: Vec<usize> = (0..n).collect();
            rng.shuffle(&mut points);
            let partition = Partition::new(n, points.chunks(size).map(<[usize]>::to_vec).collect()).unwrap();
            let p = block_projection(n, &partition).unwrap();
            for exponent in [Exponent::one(), Exponent::two(), Exponent::Infinity] {
                let recovered = recover_partition(&p, &exponent).map_err(|e| format!("case {k} p={exponent}: {e}"))?;
                if recovered.canonical() != partition.canonical() {
                    return Err(format!("case {k} p={exponent}: recovered {recovered}, expected {partition}"));
                }
                let norm = operator_pnorm(&p, &exponent).unwrap().as_f64();
                let exact = !matches!(exponent, Exponent::Finite(ref q) if *q == int(2));
                let ok = if exact { norm == 1.0 } else { (norm - 1.0).abs() <= 1e-9 };
                if !ok {
                    return Err(format!("case {k} p={exponent}: norm {norm}"));
                }
            }
            Ok(())
        })
        .collect();
    for o in outcomes {
        o?;
    }
    Ok("1000 partitions, n <= 24, p in {1, 2, inf}: all recovered, all contractive".into())
}

// ---------------------------------------------------------------- 7

fn criterion_7() -> Outcome {
    let dims = [4usize, 6, 8, 9];
    let outcomes: Vec<Result<(), String>> = (0..500u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = SplitMix64::new(0xACCE_0007_0000 + k);
            let n = dims[k as usize % dims.len()];
            let sizes: Vec<usize> = divisors(n).into_iter().filter(|d| n / d >= 2).collect();
            let size = *rng.choose(&sizes);
            let mut points: Vec<usize> = (0..n).collect();
            rng.shuffle(&mut points);
            let blocks = Partition::new(n, points.chunks(size).map(<[usize]>::to_vec).collect()).unwrap();
            let pair = poisoned_pair(n, &blocks, rng.next_u64()).map_err(|e| e.to_string())?;
            let cert = transfer_check(&pair.e, &pair.t).map_err(|e| format!("pair {k}: {e}"))?;
            if !cert.holds {
                return Err(format!("pair {k}: certificate failed"));
            }
            // P = αE + T restricted to the range of E has constant diagonal α.
            let alpha = rat(rng.range_inclusive(1, 9) as i64, 10);
            let p = pair.e.scale(&alpha).add(&pair.t).unwrap();
            let sub = CertifiedSublattice::new(pair.e.clone()).map_err(|e| e.to_string())?;
            let restricted = sub.restrict(&p).map_err(|e| format!("pair {k}: {e}"))?;
            if restricted.cone_matrix().diagonal().iter().any(|d| *d != alpha) {
                return Err(format!("pair {k}: restricted diagonal is not {alpha}"));
            }
            Ok(())
        })
        .collect();
    for o in outcomes {
        o?;
    }

    let blocks = Partition::parse("1,2;3,4").unwrap();
    let pair = poisoned_pair(4, &blocks, 7).unwrap();
    let e = pair.e;
    let expect = |t: &RegularOperator, h: Hypothesis, label: &str| -> Result<(), String> {
        match transfer_check(&e, t) {
            Err(Error::HypothesisViolated(got)) if got == h => Ok(()),
            other => Err(format!("{label}: expected {h:?}, got {other:?}")),
        }
    };
    expect(&e, Hypothesis::Meet, "T = E")?;
    let mut lopsided = Matrix::zeros(4, 4);
    lopsided.set(0, 2, Scalar::one());
    expect(&RegularOperator::standard(lopsided).unwrap(), Hypothesis::LeftAbsorption, "T not commuting")?;
    let overlap = e.scale(&rat(1, 2)).add(&pair.t).unwrap();
    expect(&overlap, Hypothesis::Meet, "T overlapping E")?;
    Ok("500 poisoned pairs certified, restrictions have diagonal alpha; 3 negatives rejected".into())
}

// ---------------------------------------------------------------- 8

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let e = vec![Scalar::one(), Scalar::one()];
    let p = vec![Scalar::one(), Scalar::zero()];
    let cases = [
        ((-1, 1), (1, 2), Classification::Inconclusive),
        ((-1, 2), (1, 3), Classification::Inconclusive),
        ((-1, 3), (1, 4), Classification::Inconclusive),
        ((-1, 4), (1, 5), Classification::Inconclusive),
        ((-1, 5), (1, 6), Classification::Inconclusive),
        ((-2, 3), (2, 5), Classification::NonRepresentable),
        ((-2, 5), (2, 7), Classification::NonRepresentable),
        ((-3, 7), (3, 10), Classification::NonRepresentable),
        ((-9, 10), (9, 19), Classification::NonRepresentable),
    ];
    for ((bn, bd), (an, ad), class) in cases {
        let beta = rat(bn, bd);
        let verdict = poison_verdict(&wickstead_family(&beta).unwrap(), &e, &p).map_err(|err| err.to_string())?;
        let by_hand = &beta / (&beta - Scalar::one());
        ensure(verdict.alpha == rat(an, ad) && verdict.alpha == by_hand, || format!("beta {beta}: alpha {}", verdict.alpha))?;
        ensure(family_alpha(&beta).unwrap() == by_hand, || "family_alpha disagrees".into())?;
        ensure(verdict.classification == class, || format!("beta {beta}: {:?}", verdict.classification))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("{} beta values, exact", cases.len()))
}

fn main() -> ExitCode {
    let sweep = run_sweep();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("exhaustive 2x2 law", Box::new(criterion_1)),
        ("constant-diagonal law sweep", Box::new(|| criterion_2(&sweep))),
        ("forbidden-alpha search", Box::new(criterion_3)),
        ("Riesz-Kantorovich oracle equivalence", Box::new(criterion_4)),
        ("lp block partition round trip", Box::new(criterion_5)),
        ("structure report", Box::new(|| criterion_6(&sweep))),
        ("disjointness transfer", Box::new(criterion_7)),
        ("two-dimensional family verdicts", Box::new(criterion_8)),
        ("zero-diagonal law", Box::new(|| criterion_9(&sweep))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
