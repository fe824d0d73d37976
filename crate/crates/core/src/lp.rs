//! Exact rational linear programming.
//!
//! Dense two-phase tableau simplex with Bland's rule for both the entering
//! and the leaving index, so it terminates on every input, degenerate ones
//! included. Sizes here are tens of variables; nothing is tuned for speed.

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowSense {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Scalar>,
    pub sense: RowSense,
    pub rhs: Scalar,
}

/// `optimize objective·x` subject to row constraints and per-variable
/// bounds. Variables default to `x ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub direction: Direction,
    pub objective: Vec<Scalar>,
    pub constraints: Vec<Constraint>,
    pub lower: Vec<Option<Scalar>>,
    pub upper: Vec<Option<Scalar>>,
}

impl LinearProgram {
    pub fn new(direction: Direction, objective: Vec<Scalar>) -> Self {
        let n = objective.len();
        LinearProgram {
            direction,
            objective,
            constraints: Vec::new(),
            lower: vec![Some(Scalar::zero()); n],
            upper: vec![None; n],
        }
    }

    pub fn minimize(objective: Vec<Scalar>) -> Self {
        Self::new(Direction::Minimize, objective)
    }

    pub fn maximize(objective: Vec<Scalar>) -> Self {
        Self::new(Direction::Maximize, objective)
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn constraint(mut self, coeffs: Vec<Scalar>, sense: RowSense, rhs: Scalar) -> Self {
        self.constraints.push(Constraint { coeffs, sense, rhs });
        self
    }

    pub fn bounds(mut self, var: usize, lower: Option<Scalar>, upper: Option<Scalar>) -> Self {
        self.lower[var] = lower;
        self.upper[var] = upper;
        self
    }

    pub fn free(self, var: usize) -> Self {
        self.bounds(var, None, None)
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.lower.len() != n || self.upper.len() != n {
            return Err(Error::MalformedProgram("bounds length differs from objective".into()));
        }
        if let Some((i, _)) = self.constraints.iter().enumerate().find(|(_, c)| c.coeffs.len() != n) {
            return Err(Error::MalformedProgram(format!("row {i} has wrong length")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpSolution {
    Optimal { value: Scalar, solution: Vec<Scalar> },
    Infeasible,
    Unbounded,
}

impl LpSolution {
    pub fn status(&self) -> &'static str {
        match self {
            LpSolution::Optimal { .. } => "optimal",
            LpSolution::Infeasible => "infeasible",
            LpSolution::Unbounded => "unbounded",
        }
    }

    pub fn value(&self) -> Option<&Scalar> {
        match self {
            LpSolution::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

/// `x_j = offset + Σ sign·y_k` over the nonnegative standard-form variables.
struct VarMap {
    offset: Scalar,
    terms: Vec<(usize, bool)>,
}

struct Tableau {
    rows: Vec<Vec<Scalar>>,
    rhs: Vec<Scalar>,
    basis: Vec<usize>,
    width: usize,
}

enum PhaseEnd {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        self.rhs[r] *= &inv;
        let (pivot_row, pivot_rhs) = (self.rows[r].clone(), self.rhs[r].clone());
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let factor = self.rows[i][c].clone();
            for (x, p) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        self.basis[r] = c;
    }

    /// Minimizes `cost` with Bland's rule, entering only columns `< allowed`.
    fn run(&mut self, cost: &[Scalar], allowed: usize) -> PhaseEnd {
        loop {
            let mut entering = None;
            for j in 0..allowed {
                if self.basis.contains(&j) {
                    continue;
                }
                let reduced = self
                    .rows
                    .iter()
                    .zip(&self.basis)
                    .fold(cost[j].clone(), |acc, (row, &b)| {
                        if row[j].is_zero() || cost[b].is_zero() {
                            acc
                        } else {
                            acc - &cost[b] * &row[j]
                        }
                    });
                if reduced.is_negative() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(c) = entering else {
                return PhaseEnd::Optimal;
            };
            let mut leaving: Option<(usize, Scalar)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &leaving {
                    None => true,
                    Some((r, best)) => ratio < *best || (ratio == *best && self.basis[i] < self.basis[*r]),
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            let Some((r, _)) = leaving else {
                return PhaseEnd::Unbounded;
            };
            self.pivot(r, c);
        }
    }

    fn values(&self) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.width];
        for (i, &b) in self.basis.iter().enumerate() {
            v[b] = self.rhs[i].clone();
        }
        v
    }
}

/// Solves `lp` exactly.
pub fn lp_optimize(lp: &LinearProgram) -> Result<LpSolution> {
    lp.validate()?;
    let n = lp.num_vars();

    let mut maps = Vec::with_capacity(n);
    let mut extra_rows: Vec<(usize, Scalar)> = Vec::new();
    let mut y_count = 0;
    for j in 0..n {
        match (&lp.lower[j], &lp.upper[j]) {
            (Some(l), upper) => {
                if let Some(u) = upper {
                    if u < l {
                        return Ok(LpSolution::Infeasible);
                    }
                    extra_rows.push((y_count, u - l));
                }
                maps.push(VarMap { offset: l.clone(), terms: vec![(y_count, true)] });
                y_count += 1;
            }
            (None, Some(u)) => {
                maps.push(VarMap { offset: u.clone(), terms: vec![(y_count, false)] });
                y_count += 1;
            }
            (None, None) => {
                maps.push(VarMap { offset: Scalar::zero(), terms: vec![(y_count, true), (y_count + 1, false)] });
                y_count += 2;
            }
        }
    }

    // Rows over y: (coeffs, sense, rhs).
    let mut rows: Vec<(Vec<Scalar>, RowSense, Scalar)> = Vec::new();
    for c in &lp.constraints {
        let mut coeffs = vec![Scalar::zero(); y_count];
        let mut rhs = c.rhs.clone();
        for (a, map) in c.coeffs.iter().zip(&maps) {
            if a.is_zero() {
                continue;
            }
            rhs -= a * &map.offset;
            for &(k, plus) in &map.terms {
                if plus {
                    coeffs[k] += a;
                } else {
                    coeffs[k] -= a;
                }
            }
        }
        rows.push((coeffs, c.sense, rhs));
    }
    for (k, cap) in extra_rows {
        let mut coeffs = vec![Scalar::zero(); y_count];
        coeffs[k] = Scalar::from_integer(1.into());
        rows.push((coeffs, RowSense::Le, cap));
    }
    for row in rows.iter_mut() {
        if row.2.is_negative() {
            row.0.iter_mut().for_each(|x| *x = -&*x);
            row.2 = -&row.2;
            row.1 = match row.1 {
                RowSense::Le => RowSense::Ge,
                RowSense::Ge => RowSense::Le,
                RowSense::Eq => RowSense::Eq,
            };
        }
    }

    let m = rows.len();
    let slack_count = rows.iter().filter(|r| r.1 != RowSense::Eq).count();
    let art_count = rows.iter().filter(|r| r.1 != RowSense::Le).count();
    let art_start = y_count + slack_count;
    let width = art_start + art_count;
    let one = Scalar::from_integer(1.into());

    let mut tab = Tableau { rows: Vec::with_capacity(m), rhs: Vec::with_capacity(m), basis: Vec::with_capacity(m), width };
    let (mut slack, mut art) = (y_count, art_start);
    for (coeffs, sense, rhs) in rows {
        let mut row = coeffs;
        row.resize(width, Scalar::zero());
        match sense {
            RowSense::Le => {
                row[slack] = one.clone();
                tab.basis.push(slack);
                slack += 1;
            }
            RowSense::Ge => {
                row[slack] = -one.clone();
                slack += 1;
                row[art] = one.clone();
                tab.basis.push(art);
                art += 1;
            }
            RowSense::Eq => {
                row[art] = one.clone();
                tab.basis.push(art);
                art += 1;
            }
        }
        tab.rows.push(row);
        tab.rhs.push(rhs);
    }

    if art_count > 0 {
        let mut cost = vec![Scalar::zero(); width];
        cost[art_start..].iter_mut().for_each(|c| *c = one.clone());
        tab.run(&cost, width);
        let infeasibility = tab
            .basis
            .iter()
            .zip(&tab.rhs)
            .filter(|(&b, _)| b >= art_start)
            .fold(Scalar::zero(), |acc, (_, v)| acc + v);
        if infeasibility.is_positive() {
            return Ok(LpSolution::Infeasible);
        }
        // Drive zero-valued artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < tab.rows.len() {
            if tab.basis[i] < art_start {
                i += 1;
                continue;
            }
            match (0..art_start).find(|&j| !tab.rows[i][j].is_zero()) {
                Some(j) => {
                    tab.pivot(i, j);
                    i += 1;
                }
                None => {
                    tab.rows.remove(i);
                    tab.rhs.remove(i);
                    tab.basis.remove(i);
                }
            }
        }
    }

    let sign = match lp.direction {
        Direction::Minimize => one.clone(),
        Direction::Maximize => -one.clone(),
    };
    let mut cost = vec![Scalar::zero(); width];
    for (c, map) in lp.objective.iter().zip(&maps) {
        for &(k, plus) in &map.terms {
            let term = if plus { c * &sign } else { -(c * &sign) };
            cost[k] += term;
        }
    }
    if let PhaseEnd::Unbounded = tab.run(&cost, art_start) {
        return Ok(LpSolution::Unbounded);
    }

    let y = tab.values();
    let solution: Vec<Scalar> = maps
        .iter()
        .map(|map| {
            map.terms.iter().fold(map.offset.clone(), |acc, &(k, plus)| {
                if plus {
                    acc + &y[k]
                } else {
                    acc - &y[k]
                }
            })
        })
        .collect();
    let value = lp.objective.iter().zip(&solution).fold(Scalar::zero(), |acc, (c, x)| acc + c * x);
    Ok(LpSolution::Optimal { value, solution })
}

/// True iff `x` satisfies every row and bound of `lp` exactly.
pub fn is_feasible_point(lp: &LinearProgram, x: &[Scalar]) -> bool {
    if x.len() != lp.num_vars() {
        return false;
    }
    let bounds_ok = x.iter().enumerate().all(|(j, v)| {
        lp.lower[j].as_ref().is_none_or(|l| v >= l) && lp.upper[j].as_ref().is_none_or(|u| v <= u)
    });
    bounds_ok
        && lp.constraints.iter().all(|c| {
            let lhs = c.coeffs.iter().zip(x).fold(Scalar::zero(), |acc, (a, v)| acc + a * v);
            match c.sense {
                RowSense::Le => lhs <= c.rhs,
                RowSense::Eq => lhs == c.rhs,
                RowSense::Ge => lhs >= c.rhs,
            }
        })
}
