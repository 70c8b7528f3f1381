//! Portfolios for covering polyhedra `{x >= 0 : A x >= 1}` with `A >= 0`.
//!
//! The construction sparsifies `A` onto a geometric grid, merges identical
//! columns into groups, enumerates the decreasing orders of the group values
//! of `A^T λ` over the simplex, and collects the vertices of the polyhedron
//! restricted to each order with equal values inside every group.

use serde::{Deserialize, Serialize};

use crate::error::{arg, check_cap, check_dim, Error, Result};
use crate::norms::{dual_ordered_norm, ordered_norm, CostVector, WeightVector};
use crate::portfolio::{Alpha, Portfolio};
use crate::solvercore::{
    arrangement_regions, solve_lp, solve_square_system, ArrangementOptions, LinearProgram,
    Relation, Sense,
};

/// Slack accepted when checking that a candidate vertex is feasible.
const VERTEX_FEAS_TOL: f64 = 1e-8;
/// Cap on the number of tight-constraint subsets tried per order.
const SUBSET_CAP: f64 = 1e6;

/// `{x >= 0 : A x >= 1}` with nonnegative `A` and a positive entry in every row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoveringPolyhedron {
    rows: Vec<Vec<f64>>,
}

impl CoveringPolyhedron {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let Some(first) = rows.first() else {
            return arg("covering polyhedron needs at least one row");
        };
        let d = first.len();
        if d == 0 {
            return arg("covering polyhedron needs at least one column");
        }
        for (i, row) in rows.iter().enumerate() {
            check_dim(d, row.len())?;
            if row.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return arg(format!("row {i} has a negative or non-finite entry"));
            }
            if row.iter().all(|v| *v == 0.0) {
                return Err(Error::Infeasible(format!("row {i} is all zero")));
            }
        }
        Ok(CoveringPolyhedron { rows })
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.rows[0].len()
    }

    /// `A x >= 1 - tol` and `x >= -tol`.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.dim()
            && x.iter().all(|v| *v >= -tol)
            && self
                .rows
                .iter()
                .all(|r| r.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() >= 1.0 - tol)
    }

    /// `A^T λ`.
    pub fn transpose_times(&self, lambda: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.num_rows(), lambda.len())?;
        let mut y = vec![0.0; self.dim()];
        for (row, l) in self.rows.iter().zip(lambda) {
            for (yj, a) in y.iter_mut().zip(row) {
                *yj += l * a;
            }
        }
        Ok(y)
    }
}

/// Converts `A x >= b` (`A, b >= 0`) to the normal form `Ã x >= 1`. Rows with
/// `b_i = 0` are dropped; a remaining all-zero row makes the system infeasible.
pub fn normalize(a: Vec<Vec<f64>>, b: Vec<f64>) -> Result<CoveringPolyhedron> {
    check_dim(a.len(), b.len())?;
    if let Some(v) = b.iter().find(|v| !v.is_finite() || **v < 0.0) {
        return arg(format!("right-hand sides must be finite and nonnegative, got {v}"));
    }
    let d = a.first().map_or(0, |r| r.len());
    let mut rows = Vec::new();
    for (row, bi) in a.into_iter().zip(b) {
        check_dim(d, row.len())?;
        if row.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return arg("matrix entries must be finite and nonnegative");
        }
        if bi > 0.0 {
            rows.push(row.into_iter().map(|v| v / bi).collect());
        }
    }
    if rows.is_empty() {
        return arg("every right-hand side is zero; the polyhedron is the whole orthant");
    }
    CoveringPolyhedron::new(rows)
}

/// Sparsified polyhedron with its grid parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sparsified {
    pub poly: CoveringPolyhedron,
    pub eps: f64,
    /// `3 d^2 / ε`.
    pub mu: f64,
    /// Distinct values (including zero) in each row of the sparsified matrix.
    pub distinct_per_row: Vec<usize>,
    /// Largest number of distinct values the grid allows in a row.
    pub grid_bound: usize,
}

/// Snaps `v >= threshold` down to `threshold (1+ε/2)^l`.
pub fn snap_to_grid(v: f64, threshold: f64, q: f64) -> f64 {
    let mut l = ((v / threshold).ln() / q.ln()).floor().max(0.0) as i32;
    while threshold * q.powi(l + 1) <= v {
        l += 1;
    }
    while l > 0 && threshold * q.powi(l) > v {
        l -= 1;
    }
    threshold * q.powi(l)
}

/// Zeroes entries below `a*/μ` (`a*` the row maximum, `μ = 3d²/ε`) and snaps the
/// rest down to the grid `(a*/μ)(1+ε/2)^l`.
pub fn sparsify(poly: &CoveringPolyhedron, eps: f64) -> Result<Sparsified> {
    if !(eps > 0.0 && eps.is_finite()) {
        return arg(format!("epsilon must be positive, got {eps}"));
    }
    let d = poly.dim() as f64;
    let mu = 3.0 * d * d / eps;
    let q = 1.0 + eps / 2.0;
    let mut rows = Vec::with_capacity(poly.num_rows());
    let mut distinct_per_row = Vec::new();
    for row in poly.rows() {
        let amax = row.iter().copied().fold(0.0, f64::max);
        let thr = amax / mu;
        let new: Vec<f64> = row
            .iter()
            .map(|&v| if v < thr { 0.0 } else { snap_to_grid(v, thr, q) })
            .collect();
        let mut vals = new.clone();
        vals.sort_by(f64::total_cmp);
        vals.dedup();
        distinct_per_row.push(vals.len());
        rows.push(new);
    }
    let grid_bound = 2 + (mu.ln() / q.ln()).floor() as usize;
    Ok(Sparsified {
        poly: CoveringPolyhedron::new(rows)?,
        eps,
        mu,
        distinct_per_row,
        grid_bound,
    })
}

/// `(1+ε/2)(x + ε ||x||_1 / (3d) 1)`, a point of the sparsified polyhedron whose
/// norm exceeds that of `x` by at most `1+ε`.
pub fn witness(x: &[f64], eps: f64) -> Vec<f64> {
    let d = x.len() as f64;
    let l1: f64 = x.iter().sum();
    let shift = eps * l1 / (3.0 * d);
    x.iter().map(|v| (1.0 + eps / 2.0) * (v + shift)).collect()
}

/// Columns with identical entries, grouped. Groups are ordered by their first
/// column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnGroups {
    pub groups: Vec<Vec<usize>>,
    /// Column of each group (length `r`).
    pub columns: Vec<Vec<f64>>,
}

impl ColumnGroups {
    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Expands reduced coordinates (one value per group) to `R^d`.
    pub fn expand(&self, z: &[f64], d: usize) -> Vec<f64> {
        let mut x = vec![0.0; d];
        for (g, v) in self.groups.iter().zip(z) {
            for &j in g {
                x[j] = *v;
            }
        }
        x
    }

    /// Averages `x` within each group, giving reduced coordinates.
    pub fn average(&self, x: &[f64]) -> Vec<f64> {
        self.groups
            .iter()
            .map(|g| g.iter().map(|&j| x[j]).sum::<f64>() / g.len() as f64)
            .collect()
    }
}

/// Groups columns whose entries are bitwise equal.
pub fn group_columns(poly: &CoveringPolyhedron) -> ColumnGroups {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut columns: Vec<Vec<f64>> = Vec::new();
    for j in 0..poly.dim() {
        let col: Vec<f64> = poly.rows().iter().map(|r| r[j]).collect();
        match columns
            .iter()
            .position(|c| c.iter().zip(&col).all(|(a, b)| a.to_bits() == b.to_bits()))
        {
            Some(g) => groups[g].push(j),
            None => {
                groups.push(vec![j]);
                columns.push(col);
            }
        }
    }
    ColumnGroups { groups, columns }
}

/// Decreasing orders of the group values of `A^T λ` found on the simplex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReducedOrders {
    /// Each order lists group indices from largest to smallest value.
    pub orders: Vec<Vec<usize>>,
    /// `false` when the orders were found by sampling (`r >= 4`).
    pub exact: bool,
    pub hyperplanes: usize,
}

impl ReducedOrders {
    /// `C(m,2)^(r-1) + 1`.
    pub fn count_bound(m: usize, r: usize) -> f64 {
        let t = (m * m.saturating_sub(1) / 2) as f64;
        t.powi(r as i32 - 1) + 1.0
    }
}

/// One order per full-dimensional cell of the arrangement of the hyperplanes
/// `(A^T λ)_l = (A^T λ)_l'` over pairs of groups.
pub fn enumerate_reduced_orders(
    poly: &CoveringPolyhedron,
    groups: &ColumnGroups,
    opts: ArrangementOptions,
) -> Result<ReducedOrders> {
    let r = poly.num_rows();
    let m = groups.len();
    let mut hyperplanes = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            hyperplanes.push(
                groups.columns[a]
                    .iter()
                    .zip(&groups.columns[b])
                    .map(|(x, y)| x - y)
                    .collect::<Vec<f64>>(),
            );
        }
    }
    let regions = arrangement_regions(&hyperplanes, r, opts)?;
    let mut orders: Vec<Vec<usize>> = Vec::new();
    for p in &regions.points {
        let vals: Vec<f64> = groups
            .columns
            .iter()
            .map(|c| c.iter().zip(p).map(|(a, b)| a * b).sum())
            .collect();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&i, &j| vals[j].total_cmp(&vals[i]).then(i.cmp(&j)));
        if !orders.contains(&order) {
            orders.push(order);
        }
    }
    orders.sort();
    Ok(ReducedOrders {
        orders,
        exact: regions.exact,
        hyperplanes: hyperplanes.len(),
    })
}

/// `true` when reduced coordinates `z` are nonincreasing along `order`.
pub fn satisfies_order(z: &[f64], order: &[usize], tol: f64) -> bool {
    order
        .windows(2)
        .all(|p| z[p[0]] >= z[p[1]] - tol * (1.0 + z[p[1]].abs()))
}

fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return;
    }
    loop {
        f(&idx);
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Vertices, in reduced coordinates, of `{z : Σ_l A_il |S_l| z_l >= 1,
/// z_ρ1 >= ... >= z_ρm >= 0}` given as rows `(coefficients, rhs)`.
fn reduced_vertices(cover_rows: &[Vec<f64>], order: &[usize]) -> Result<Vec<Vec<f64>>> {
    let m = order.len();
    let mut cons: Vec<(Vec<f64>, f64)> = cover_rows.iter().map(|r| (r.clone(), 1.0)).collect();
    for k in 0..m {
        let mut c = vec![0.0; m];
        c[order[k]] = 1.0;
        if k + 1 < m {
            c[order[k + 1]] = -1.0;
        }
        cons.push((c, 0.0));
    }
    let total = cons.len();
    check_cap("tight-constraint subsets", binomial(total, m), SUBSET_CAP)?;
    let mut out: Vec<Vec<f64>> = Vec::new();
    for_each_subset(total, m, &mut |sel| {
        let mat: Vec<Vec<f64>> = sel.iter().map(|&i| cons[i].0.clone()).collect();
        let rhs: Vec<f64> = sel.iter().map(|&i| cons[i].1).collect();
        let Ok(z) = solve_square_system(&mat, &rhs) else {
            return;
        };
        let zmax = z.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let feasible = cons.iter().all(|(c, b)| {
            let lhs: f64 = c.iter().zip(&z).map(|(a, v)| a * v).sum();
            lhs - b >= -VERTEX_FEAS_TOL * (1.0 + zmax)
        });
        if feasible {
            let z: Vec<f64> = z.into_iter().map(|v| if v.abs() < 1e-12 { 0.0 } else { v }).collect();
            let dup = out.iter().any(|o| {
                o.iter().zip(&z).all(|(a, b)| (a - b).abs() <= 1e-9 * (1.0 + a.abs()))
            });
            if !dup {
                out.push(z);
            }
        }
    });
    Ok(out)
}

/// Vertices of the polyhedron restricted to `order` with equal values inside
/// each column group, expanded to `R^d`.
pub fn vertices_for_order(
    poly: &CoveringPolyhedron,
    groups: &ColumnGroups,
    order: &[usize],
) -> Result<Vec<CostVector>> {
    let m = groups.len();
    check_dim(m, order.len())?;
    let mut seen = vec![false; m];
    for &g in order {
        if g >= m || seen[g] {
            return arg("order must be a permutation of the groups");
        }
        seen[g] = true;
    }
    let cover_rows: Vec<Vec<f64>> = (0..poly.num_rows())
        .map(|i| {
            groups
                .groups
                .iter()
                .zip(&groups.columns)
                .map(|(g, c)| c[i] * g.len() as f64)
                .collect()
        })
        .collect();
    reduced_vertices(&cover_rows, order)?
        .into_iter()
        .map(|z| CostVector::new(groups.expand(&z, poly.dim()).into_iter().map(|v| v.max(0.0)).collect()))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoveringOptions {
    /// Snap the matrix to the grid first. Without it the portfolio is built on
    /// the original columns and is exact but may be much larger.
    pub sparsify: bool,
    pub arrangement: ArrangementOptions,
}

impl Default for CoveringOptions {
    fn default() -> Self {
        CoveringOptions {
            sparsify: true,
            arrangement: ArrangementOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoveringPortfolio {
    pub portfolio: Portfolio,
    /// The polyhedron the vertices were taken from.
    pub working: CoveringPolyhedron,
    pub groups: ColumnGroups,
    pub orders: ReducedOrders,
    pub vertices_per_order: Vec<usize>,
    pub distinct_per_row: Vec<usize>,
    pub grid_bound: usize,
    /// `|Π*| C(m + r, r)`.
    pub size_bound: f64,
}

/// `(1+ε)`-portfolio for a normalised covering polyhedron.
pub fn build_portfolio(
    poly: &CoveringPolyhedron,
    eps: f64,
    opts: CoveringOptions,
) -> Result<CoveringPortfolio> {
    let (working, distinct_per_row, grid_bound, alpha) = if opts.sparsify {
        let s = sparsify(poly, eps)?;
        (s.poly, s.distinct_per_row, s.grid_bound, Alpha::Numeric(1.0 + eps))
    } else {
        let distinct = poly
            .rows()
            .iter()
            .map(|r| {
                let mut v = r.clone();
                v.sort_by(f64::total_cmp);
                v.dedup();
                v.len()
            })
            .collect();
        (poly.clone(), distinct, poly.dim(), Alpha::Numeric(1.0))
    };
    let groups = group_columns(&working);
    let orders = enumerate_reduced_orders(&working, &groups, opts.arrangement)?;
    let mut vectors: Vec<CostVector> = Vec::new();
    let mut provenance = Vec::new();
    let mut vertices_per_order = Vec::new();
    for (k, order) in orders.orders.iter().enumerate() {
        let verts = vertices_for_order(&working, &groups, order)?;
        vertices_per_order.push(verts.len());
        for v in verts {
            if !vectors.contains(&v) {
                vectors.push(v);
                provenance.push(format!("order:{k}"));
            }
        }
    }
    let m = groups.len();
    let r = working.num_rows();
    let size_bound = orders.orders.len() as f64 * binomial(m + r, r);
    Ok(CoveringPortfolio {
        portfolio: Portfolio::new(vectors, provenance, alpha)?,
        working,
        groups,
        orders,
        vertices_per_order,
        distinct_per_row,
        grid_bound,
        size_bound,
    })
}

/// Minimises `||x||_(w)` over the polyhedron with the linear program
/// `Σ_k (w_k - w_{k+1}) (k t_k + Σ_j s_kj)`, `s_kj >= x_j - t_k`, `s, t >= 0`.
/// Returns an optimal `x` and its norm.
pub fn lp_min_ordered_norm(poly: &CoveringPolyhedron, w: &WeightVector) -> Result<(Vec<f64>, f64)> {
    let d = poly.dim();
    check_dim(d, w.len())?;
    let drops: Vec<(usize, f64)> = (0..d)
        .map(|k| (k + 1, w[k] - if k + 1 < d { w[k + 1] } else { 0.0 }))
        .filter(|(_, g)| *g > 0.0)
        .collect();
    let nv = d + drops.len() * (d + 1);
    let mut obj = vec![0.0; nv];
    for (b, &(k, g)) in drops.iter().enumerate() {
        let base = d + b * (d + 1);
        obj[base] = g * k as f64;
        for j in 0..d {
            obj[base + 1 + j] = g;
        }
    }
    let mut lp = LinearProgram::new(Sense::Minimize, obj);
    for b in 0..drops.len() {
        let base = d + b * (d + 1);
        for j in 0..d {
            lp.add_sparse(&[(base + 1 + j, 1.0), (j, -1.0), (base, 1.0)], Relation::Ge, 0.0);
        }
    }
    for row in poly.rows() {
        let terms: Vec<(usize, f64)> = row.iter().copied().enumerate().filter(|(_, a)| *a != 0.0).collect();
        lp.add_sparse(&terms, Relation::Ge, 1.0);
    }
    let (sol, _) = solve_lp(&lp)?.optimal()?;
    let x: Vec<f64> = sol[..d].to_vec();
    let value = ordered_norm(&x, w)?;
    Ok((x, value))
}

/// `||A^T λ||*_(w)` for `λ` on the simplex. For every feasible `x`,
/// `||x||_(w) * dual_objective >= 1`.
pub fn dual_objective(poly: &CoveringPolyhedron, lambda: &[f64], w: &WeightVector) -> Result<f64> {
    check_dim(poly.num_rows(), lambda.len())?;
    if lambda.iter().any(|v| *v < 0.0 || !v.is_finite()) {
        return arg("λ must be nonnegative");
    }
    let s: f64 = lambda.iter().sum();
    if (s - 1.0).abs() > 1e-9 {
        return arg(format!("λ must sum to 1, got {s}"));
    }
    dual_ordered_norm(&poly.transpose_times(lambda)?, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::portfolio::min_ordered_norms;
    use proptest::prelude::*;

    fn worked() -> CoveringPolyhedron {
        normalize(
            vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 1.0], vec![2.0, 1.0, 1.0]],
            vec![2.0, 4.0, 10.0],
        )
        .unwrap()
    }

    #[test]
    fn normalisation() {
        let p = normalize(vec![vec![2.0, 0.0], vec![0.0, 3.0]], vec![2.0, 0.0]).unwrap();
        assert_eq!(p.rows(), &[vec![1.0, 0.0]]);
        let e = normalize(vec![vec![0.0, 0.0]], vec![1.0]);
        assert!(matches!(e, Err(Error::Infeasible(_))));
        assert!(normalize(vec![vec![-1.0]], vec![1.0]).is_err());
    }

    #[test]
    fn worked_instance_l1() {
        let p = worked();
        let l1 = WeightVector::new(vec![1.0; 3]).unwrap();
        let (_, v) = lp_min_ordered_norm(&p, &l1).unwrap();
        assert!((v - 7.0).abs() < 1e-9);
        let g = group_columns(&p);
        assert_eq!(g.groups, vec![vec![0], vec![1, 2]]);
        let port = build_portfolio(&p, 0.5, CoveringOptions { sparsify: false, ..Default::default() }).unwrap();
        let target = CostVector::new(vec![3.0, 2.0, 2.0]).unwrap();
        let has = port.portfolio.vectors.iter().any(|v| v.iter().zip(target.iter()).all(|(a, b)| (a - b).abs() < 1e-9));
        assert!(has);
        let half = CostVector::new(vec![2.5; 3]).unwrap();
        let has = port.portfolio.vectors.iter().any(|v| v.iter().zip(half.iter()).all(|(a, b)| (a - b).abs() < 1e-9));
        assert!(has);
        let best = min_ordered_norms(&port.portfolio.vectors, &[l1]).unwrap()[0];
        assert!((best - 7.0).abs() < 1e-9);
    }

    #[test]
    fn identical_columns_form_one_group() {
        let p = CoveringPolyhedron::new(vec![vec![1.0, 1.0]]).unwrap();
        let g = group_columns(&p);
        assert_eq!(g.len(), 1);
        let o = enumerate_reduced_orders(&p, &g, ArrangementOptions::default()).unwrap();
        assert_eq!(o.orders, vec![vec![0]]);
        let v = vertices_for_order(&p, &g, &[0]).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].as_slice(), &[0.5, 0.5]);
    }

    #[test]
    fn inconsistent_chain_yields_no_vertices() {
        let rows = vec![vec![0.0, 0.0]];
        assert!(reduced_vertices(&rows, &[0, 1]).unwrap().is_empty());
    }

    #[test]
    fn grid_snapping_is_a_fixed_point() {
        let (thr, q) = (0.1f64, 1.25f64);
        for l in 0..20 {
            let v = thr * q.powi(l);
            assert_eq!(snap_to_grid(v, thr, q), v);
        }
        assert!(snap_to_grid(0.3, thr, q) <= 0.3);
    }

    #[test]
    fn sparsify_keeps_row_maxima_positive() {
        let p = CoveringPolyhedron::new(vec![vec![1.0, 1e-9, 0.5]]).unwrap();
        let s = sparsify(&p, 1.0).unwrap();
        assert_eq!(s.poly.rows()[0][1], 0.0);
        assert!(s.poly.rows()[0][0] > 0.0);
        assert!(s.distinct_per_row[0] <= s.grid_bound);
    }

    fn instance() -> impl Strategy<Value = Vec<Vec<f64>>> {
        (1usize..4, 1usize..5).prop_flat_map(|(r, d)| {
            proptest::collection::vec(
                proptest::collection::vec(prop_oneof![Just(0.0), 0.1f64..5.0], d),
                r,
            )
        })
        .prop_filter("nonzero rows", |rows| rows.iter().all(|r| r.iter().any(|v| *v > 0.0)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn sparsification_witness(rows in instance(), eps in 0.1f64..1.0, seed in 0u64..100) {
            let p = CoveringPolyhedron::new(rows).unwrap();
            let s = sparsify(&p, eps).unwrap();
            for (a, b) in p.rows().iter().zip(s.poly.rows()) {
                for (x, y) in a.iter().zip(b) {
                    prop_assert!(y <= x);
                }
            }
            let w = crate::weights::sample_weights(p.dim(), 1, seed).pop().unwrap();
            let (x, v) = lp_min_ordered_norm(&p, &w).unwrap();
            let xt = witness(&x, eps);
            prop_assert!(s.poly.contains(&xt, 1e-9));
            prop_assert!(ordered_norm(&xt, &w).unwrap() <= (1.0 + eps) * v * (1.0 + 1e-9));
        }

        #[test]
        fn portfolio_within_factor(rows in instance(), eps in prop_oneof![Just(0.25), Just(0.5), Just(1.0)], seed in 0u64..100) {
            let p = CoveringPolyhedron::new(rows).unwrap();
            let port = build_portfolio(&p, eps, CoveringOptions::default()).unwrap();
            for v in &port.portfolio.vectors {
                prop_assert!(p.contains(v, 1e-9));
            }
            let mut ws = WeightVector::all_top_k(p.dim());
            ws.extend(crate::weights::sample_weights(p.dim(), 10, seed));
            let best = min_ordered_norms(&port.portfolio.vectors, &ws).unwrap();
            for (w, b) in ws.iter().zip(best) {
                let (_, opt) = lp_min_ordered_norm(&p, w).unwrap();
                prop_assert!(b <= (1.0 + eps) * opt + 1e-6, "best {} opt {} eps {}", b, opt, eps);
            }
        }

        #[test]
        fn weak_duality(rows in instance(), raw in proptest::collection::vec(0.01f64..1.0, 3), seed in 0u64..100) {
            let p = CoveringPolyhedron::new(rows).unwrap();
            let lambda: Vec<f64> = raw[..p.num_rows()].to_vec();
            let s: f64 = lambda.iter().sum();
            let lambda: Vec<f64> = lambda.iter().map(|v| v / s).collect();
            let w = crate::weights::sample_weights(p.dim(), 1, seed).pop().unwrap();
            let (_, v) = lp_min_ordered_norm(&p, &w).unwrap();
            prop_assert!(v * dual_objective(&p, &lambda, &w).unwrap() >= 1.0 - 1e-9);
        }
    }
}
