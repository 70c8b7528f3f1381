//! Dense two-phase primal simplex.
//!
//! Variables are nonnegative, with optional finite upper bounds. Pricing uses
//! Dantzig's rule and switches to Bland's rule after `10 * (rows + cols)`
//! pivots in a phase.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};

const PIVOT_EPS: f64 = 1e-9;
const FEAS_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

/// `optimize objective . x` subject to the constraints, `0 <= x <= upper`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub upper: Vec<Option<f64>>,
}

impl LinearProgram {
    pub fn new(sense: Sense, objective: Vec<f64>) -> Self {
        let n = objective.len();
        LinearProgram {
            sense,
            objective,
            constraints: Vec::new(),
            upper: vec![None; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) -> &mut Self {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        self
    }

    /// Adds a constraint given as sparse `(index, coefficient)` pairs.
    pub fn add_sparse(&mut self, terms: &[(usize, f64)], relation: Relation, rhs: f64) -> &mut Self {
        let mut coeffs = vec![0.0; self.num_vars()];
        for &(j, a) in terms {
            coeffs[j] += a;
        }
        self.add(coeffs, relation, rhs)
    }

    pub fn set_upper(&mut self, var: usize, bound: f64) -> &mut Self {
        self.upper[var] = Some(bound);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(self) -> Result<(Vec<f64>, f64)> {
        match self {
            LpOutcome::Optimal { x, value } => Ok((x, value)),
            LpOutcome::Infeasible => Err(Error::Infeasible("linear program is infeasible".into())),
            LpOutcome::Unbounded => Err(Error::Numeric("linear program is unbounded".into())),
        }
    }
}

struct Tableau {
    rows: usize,
    cols: usize,
    /// `(rows + 1) x (cols + 1)`; the last row holds reduced costs and the
    /// last column holds right-hand sides.
    t: Vec<f64>,
    basis: Vec<usize>,
    banned: Vec<bool>,
    trace: Vec<(usize, usize)>,
}

impl Tableau {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.t[i * (self.cols + 1) + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.at(i, self.cols)
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.cols + 1;
        let p = self.t[r * w + c];
        for j in 0..w {
            self.t[r * w + j] /= p;
        }
        let prow: Vec<f64> = self.t[r * w..(r + 1) * w].to_vec();
        for i in 0..=self.rows {
            if i == r {
                continue;
            }
            let f = self.t[i * w + c];
            if f != 0.0 {
                let row = &mut self.t[i * w..(i + 1) * w];
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x -= f * y;
                }
                row[c] = 0.0;
            }
        }
        self.basis[r] = c;
        self.trace.push((r, c));
    }

    /// Loads reduced costs for cost vector `cost` (minimisation).
    fn set_costs(&mut self, cost: &[f64]) {
        let w = self.cols + 1;
        let base = self.rows * w;
        for j in 0..w {
            self.t[base + j] = if j < self.cols { cost[j] } else { 0.0 };
        }
        for i in 0..self.rows {
            let cb = cost[self.basis[i]];
            if cb != 0.0 {
                for j in 0..w {
                    self.t[base + j] -= cb * self.t[i * w + j];
                }
            }
        }
    }

    /// Runs the simplex loop. Returns `Ok(false)` when unbounded.
    fn optimize(&mut self) -> Result<bool> {
        let bland_after = 10 * (self.rows + self.cols);
        let limit = 50 * (self.rows + self.cols) + 1000;
        let mut pivots = 0usize;
        loop {
            let bland = pivots >= bland_after;
            let Some(c) = self.entering(bland) else {
                return Ok(true);
            };
            let Some(r) = self.leaving(c) else {
                return Ok(false);
            };
            self.pivot(r, c);
            pivots += 1;
            if pivots > limit {
                let tail: Vec<_> = self.trace.iter().rev().take(10).collect();
                return Err(Error::Numeric(format!(
                    "simplex exceeded {limit} pivots; last pivots (row, col): {tail:?}"
                )));
            }
        }
    }

    fn entering(&self, bland: bool) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for j in 0..self.cols {
            if self.banned[j] {
                continue;
            }
            let d = self.at(self.rows, j);
            if d < -PIVOT_EPS {
                if bland {
                    return Some(j);
                }
                if best.is_none_or(|(_, b)| d < b) {
                    best = Some((j, d));
                }
            }
        }
        best.map(|(j, _)| j)
    }

    fn leaving(&self, c: usize) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for i in 0..self.rows {
            let a = self.at(i, c);
            if a > PIVOT_EPS {
                let ratio = self.rhs(i) / a;
                match best {
                    None => best = Some((i, ratio)),
                    Some((bi, br)) => {
                        let tie = (ratio - br).abs() <= 1e-12 * (1.0 + br.abs());
                        if ratio < br && !tie || tie && self.basis[i] < self.basis[bi] {
                            best = Some((i, ratio));
                        }
                    }
                }
            }
        }
        best.map(|(i, _)| i)
    }
}

/// Solves `lp` to optimality, or reports infeasibility or unboundedness.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpOutcome> {
    let n = lp.num_vars();
    check_dim(n, lp.upper.len())?;
    let mut rows: Vec<(Vec<f64>, Relation, f64)> = Vec::new();
    for c in &lp.constraints {
        check_dim(n, c.coeffs.len())?;
        if c.coeffs.iter().any(|v| !v.is_finite()) || !c.rhs.is_finite() {
            return Err(Error::Argument("LP data must be finite".into()));
        }
        rows.push((c.coeffs.clone(), c.relation, c.rhs));
    }
    for (j, u) in lp.upper.iter().enumerate() {
        if let Some(u) = u {
            let mut coeffs = vec![0.0; n];
            coeffs[j] = 1.0;
            rows.push((coeffs, Relation::Le, *u));
        }
    }
    for (coeffs, rel, rhs) in rows.iter_mut() {
        if *rhs < 0.0 {
            coeffs.iter_mut().for_each(|v| *v = -*v);
            *rhs = -*rhs;
            *rel = match rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
    }
    let m = rows.len();
    let n_slack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let n_art = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let cols = n + n_slack + n_art;
    let w = cols + 1;
    let mut t = vec![0.0; (m + 1) * w];
    let mut basis = vec![0; m];
    let mut is_art = vec![false; cols];
    let (mut s, mut a) = (n, n + n_slack);
    for (i, (coeffs, rel, rhs)) in rows.iter().enumerate() {
        t[i * w..i * w + n].copy_from_slice(coeffs);
        t[i * w + cols] = *rhs;
        match rel {
            Relation::Le => {
                t[i * w + s] = 1.0;
                basis[i] = s;
                s += 1;
            }
            Relation::Ge => {
                t[i * w + s] = -1.0;
                s += 1;
                t[i * w + a] = 1.0;
                basis[i] = a;
                is_art[a] = true;
                a += 1;
            }
            Relation::Eq => {
                t[i * w + a] = 1.0;
                basis[i] = a;
                is_art[a] = true;
                a += 1;
            }
        }
    }
    let mut tab = Tableau {
        rows: m,
        cols,
        t,
        basis,
        banned: vec![false; cols],
        trace: Vec::new(),
    };

    if n_art > 0 {
        let cost: Vec<f64> = is_art.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
        tab.set_costs(&cost);
        tab.optimize()?;
        let infeas = -tab.at(m, cols);
        let bnorm: f64 = rows.iter().map(|r| r.2).fold(0.0, f64::max);
        if infeas > FEAS_TOL * (1.0 + bnorm) {
            return Ok(LpOutcome::Infeasible);
        }
        for i in 0..m {
            if is_art[tab.basis[i]] {
                if let Some(j) = (0..cols).find(|&j| !is_art[j] && tab.at(i, j).abs() > PIVOT_EPS) {
                    tab.pivot(i, j);
                }
            }
        }
        tab.banned = is_art.clone();
    }

    let sign = if lp.sense == Sense::Maximize { -1.0 } else { 1.0 };
    let mut cost = vec![0.0; cols];
    for j in 0..n {
        cost[j] = sign * lp.objective[j];
    }
    tab.set_costs(&cost);
    if !tab.optimize()? {
        return Ok(LpOutcome::Unbounded);
    }
    let mut x = vec![0.0; n];
    for i in 0..m {
        if tab.basis[i] < n {
            x[tab.basis[i]] = tab.rhs(i).max(0.0);
        }
    }
    let value = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(LpOutcome::Optimal { x, value })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_maximisation() {
        // max 3x + 2y, x + y <= 4, x + 3y <= 6, x <= 3 -> (3, 1), value 11
        let mut lp = LinearProgram::new(Sense::Maximize, vec![3.0, 2.0]);
        lp.add(vec![1.0, 1.0], Relation::Le, 4.0)
            .add(vec![1.0, 3.0], Relation::Le, 6.0)
            .set_upper(0, 3.0);
        let (x, v) = solve_lp(&lp).unwrap().optimal().unwrap();
        assert!((v - 11.0).abs() < 1e-9);
        assert!((x[0] - 3.0).abs() < 1e-9 && (x[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn covering_minimisation() {
        // min x + y, x + 2y >= 4, 3x + y >= 6 -> (1.6, 1.2), value 2.8
        let mut lp = LinearProgram::new(Sense::Minimize, vec![1.0, 1.0]);
        lp.add(vec![1.0, 2.0], Relation::Ge, 4.0)
            .add(vec![3.0, 1.0], Relation::Ge, 6.0);
        let (_, v) = solve_lp(&lp).unwrap().optimal().unwrap();
        assert!((v - 2.8).abs() < 1e-9);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(Sense::Minimize, vec![1.0]);
        lp.add(vec![1.0], Relation::Le, 1.0).add(vec![1.0], Relation::Ge, 2.0);
        assert_eq!(solve_lp(&lp).unwrap(), LpOutcome::Infeasible);
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0, 0.0]);
        lp.add(vec![-1.0, 1.0], Relation::Le, 1.0);
        assert_eq!(solve_lp(&lp).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn equality_and_redundant_rows() {
        // x + y = 2 twice, min x - y -> (0, 2)
        let mut lp = LinearProgram::new(Sense::Minimize, vec![1.0, -1.0]);
        lp.add(vec![1.0, 1.0], Relation::Eq, 2.0)
            .add(vec![2.0, 2.0], Relation::Eq, 4.0);
        let (x, v) = solve_lp(&lp).unwrap().optimal().unwrap();
        assert!((v + 2.0).abs() < 1e-9);
        assert!((x[1] - 2.0).abs() < 1e-9);
    }

    #[test]
    fn negative_rhs_is_normalised() {
        // -x <= -3 means x >= 3
        let mut lp = LinearProgram::new(Sense::Minimize, vec![1.0]);
        lp.add(vec![-1.0], Relation::Le, -3.0);
        let (_, v) = solve_lp(&lp).unwrap().optimal().unwrap();
        assert!((v - 3.0).abs() < 1e-9);
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's example, which cycles under naive Dantzig pricing.
        let mut lp = LinearProgram::new(Sense::Minimize, vec![-0.75, 150.0, -0.02, 6.0]);
        lp.add(vec![0.25, -60.0, -0.04, 9.0], Relation::Le, 0.0)
            .add(vec![0.5, -90.0, -0.02, 3.0], Relation::Le, 0.0)
            .add(vec![0.0, 0.0, 1.0, 0.0], Relation::Le, 1.0);
        let (_, v) = solve_lp(&lp).unwrap().optimal().unwrap();
        assert!((v + 0.05).abs() < 1e-9);
    }

    #[test]
    fn rejects_mismatched_rows() {
        let mut lp = LinearProgram::new(Sense::Minimize, vec![1.0, 1.0]);
        lp.add(vec![1.0], Relation::Ge, 1.0);
        assert!(matches!(solve_lp(&lp), Err(Error::Dimension { .. })));
    }
}
