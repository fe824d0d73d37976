//! Bounded search for nonnegative idempotents with a prescribed constant
//! diagonal, in floating point.
//!
//! Minimizes `‖P² − P‖²_F` over nonnegative `n × n` matrices whose diagonal
//! is pinned to `alpha`, by projected gradient descent with random restarts.
//! The reported residual is `max |P² − P|` entrywise. Only the thresholds
//! below turn it into a verdict; nothing here is exact.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// Residual at or below this: a construction was found.
pub const SUCCESS_THRESHOLD: f64 = 1e-10;
/// Residual at or above this after the whole budget: no construction found.
pub const FAILURE_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub restarts: usize,
    pub iterations: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { restarts: 50, iterations: 10_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchVerdict {
    ConstructionFound,
    NoConstructionFoundWithinBudget,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchOutcome {
    pub n: usize,
    pub alpha: f64,
    pub best_residual: f64,
    pub best_matrix: Vec<Vec<f64>>,
    pub restarts_run: usize,
    pub verdict: SearchVerdict,
}

fn residual(p: &DMatrix<f64>) -> DMatrix<f64> {
    p * p - p
}

fn project(p: &mut DMatrix<f64>, alpha: f64) {
    p.apply(|x| *x = x.max(0.0));
    p.fill_diagonal(alpha);
}

/// One descent from `p`; returns the best max-entry residual and its matrix.
fn descend(mut p: DMatrix<f64>, alpha: f64, iterations: usize) -> (f64, DMatrix<f64>) {
    let n = p.nrows();
    let mut r = residual(&p);
    let mut objective = r.norm_squared();
    let mut best = (r.amax(), p.clone());
    let mut step = 0.1 / n as f64;
    for _ in 0..iterations {
        if best.0 <= SUCCESS_THRESHOLD * 1e-2 || step < 1e-300 {
            break;
        }
        let pt = p.transpose();
        let mut grad = (&r * &pt + &pt * &r - &r) * 2.0;
        grad.fill_diagonal(0.0);
        let mut candidate = &p - &grad * step;
        project(&mut candidate, alpha);
        let r_candidate = residual(&candidate);
        let next = r_candidate.norm_squared();
        if next < objective {
            p = candidate;
            r = r_candidate;
            objective = next;
            let amax = r.amax();
            if amax < best.0 {
                best = (amax, p.clone());
            }
        } else {
            step *= 0.5;
        }
    }
    best
}

/// Searches for `P ≥ 0` with `diag(P) = alpha` and `P² = P`.
///
/// Deterministic in `seed`. Starting points have off-diagonal entries
/// uniform in `[0, 2(1 − alpha)/(n − 1))`, so rows sum to about 1.
pub fn feasibility_search(n: usize, alpha: f64, budget: Budget, seed: u64) -> Result<SearchOutcome> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::BadAlpha);
    }
    if n == 0 {
        return Err(Error::DimensionMismatch { expected: 1, found: 0 });
    }
    let mut rng = SplitMix64::new(seed);
    let spread = if n > 1 { 2.0 * (1.0 - alpha) / (n - 1) as f64 } else { 0.0 };
    let mut best: Option<(f64, DMatrix<f64>)> = None;
    let mut restarts_run = 0;
    for _ in 0..budget.restarts {
        restarts_run += 1;
        let mut start = DMatrix::from_fn(n, n, |_, _| rng.next_f64() * spread);
        project(&mut start, alpha);
        let found = descend(start, alpha, budget.iterations);
        if best.as_ref().is_none_or(|b| found.0 < b.0) {
            best = Some(found);
        }
        if best.as_ref().is_some_and(|b| b.0 <= SUCCESS_THRESHOLD * 1e-2) {
            break;
        }
    }
    let (best_residual, matrix) = best.expect("at least one restart");
    let verdict = if best_residual <= SUCCESS_THRESHOLD {
        SearchVerdict::ConstructionFound
    } else if best_residual >= FAILURE_THRESHOLD {
        SearchVerdict::NoConstructionFoundWithinBudget
    } else {
        SearchVerdict::Inconclusive
    };
    let best_matrix = (0..n).map(|i| (0..n).map(|j| matrix[(i, j)]).collect()).collect();
    Ok(SearchOutcome { n, alpha, best_residual, best_matrix, restarts_run, verdict })
}
