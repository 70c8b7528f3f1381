//! k-clustering with simultaneous guarantees for all symmetric monotonic
//! norms, and a facility-location portfolio.

use serde::{Deserialize, Serialize};

use crate::error::{arg, check_cap, check_dim, Result};
use crate::norms::{top_k_profile, CostVector, REL_TOL};

/// Cap on the number of facility sets enumerated by exhaustive routines.
pub const CLUSTERING_CAP: f64 = 1e6;

/// Finite metric with an optional mask of points allowed to host facilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metric {
    dist: Vec<Vec<f64>>,
    allowed: Vec<usize>,
}

impl Metric {
    pub fn new(dist: Vec<Vec<f64>>) -> Result<Self> {
        let n = dist.len();
        Self::with_allowed(dist, (0..n).collect())
    }

    pub fn with_allowed(dist: Vec<Vec<f64>>, allowed: Vec<usize>) -> Result<Self> {
        let n = dist.len();
        if n == 0 {
            return arg("metric needs at least one point");
        }
        for row in &dist {
            check_dim(n, row.len())?;
        }
        let scale = dist.iter().flatten().copied().fold(0.0, f64::max);
        for i in 0..n {
            if dist[i][i] != 0.0 {
                return arg(format!("dist[{i}][{i}] must be zero"));
            }
            for j in 0..n {
                let v = dist[i][j];
                if !(v.is_finite() && v >= 0.0) {
                    return arg(format!("dist[{i}][{j}] = {v} is not a finite nonnegative number"));
                }
                if (v - dist[j][i]).abs() > REL_TOL * (1.0 + scale) {
                    return arg(format!("dist is not symmetric at ({i}, {j})"));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if dist[i][k] > dist[i][j] + dist[j][k] + REL_TOL * (1.0 + scale) {
                        return arg(format!("triangle inequality fails for ({i}, {j}, {k})"));
                    }
                }
            }
        }
        let mut allowed = allowed;
        allowed.sort_unstable();
        allowed.dedup();
        if allowed.is_empty() {
            return arg("at least one facility location must be allowed");
        }
        if let Some(&a) = allowed.iter().find(|&&a| a >= n) {
            return arg(format!("allowed facility {a} out of range"));
        }
        Ok(Metric { dist, allowed })
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i][j]
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.dist
    }

    pub fn allowed(&self) -> &[usize] {
        &self.allowed
    }

    /// Sorted distinct distances from allowed facilities to points.
    pub fn candidate_radii(&self) -> Vec<f64> {
        let mut r: Vec<f64> = self
            .allowed
            .iter()
            .flat_map(|&f| self.dist[f].iter().copied())
            .collect();
        r.sort_by(f64::total_cmp);
        r.dedup();
        r
    }

    fn ball(&self, f: usize, radius: f64) -> Vec<bool> {
        self.dist[f].iter().map(|&d| d <= radius).collect()
    }
}

/// Hub `0` at distance `√n` from each of `n` leaves; leaves are `2√n` apart.
pub fn star_metric(n: usize) -> Result<Metric> {
    if n == 0 {
        return arg("star needs at least one leaf");
    }
    let r = (n as f64).sqrt();
    let dist = (0..=n)
        .map(|i| {
            (0..=n)
                .map(|j| match (i, j) {
                    _ if i == j => 0.0,
                    (0, _) | (_, 0) => r,
                    _ => 2.0 * r,
                })
                .collect()
        })
        .collect();
    Metric::new(dist)
}

/// `x_j = min_{f ∈ F} dist(j, f)`.
pub fn distance_vector(metric: &Metric, facilities: &[usize]) -> Result<CostVector> {
    if facilities.is_empty() {
        return arg("facility set must be nonempty");
    }
    if let Some(&f) = facilities.iter().find(|&&f| f >= metric.len()) {
        return arg(format!("facility {f} out of range"));
    }
    CostVector::new(
        (0..metric.len())
            .map(|j| {
                facilities
                    .iter()
                    .map(|&f| metric.dist[j][f])
                    .fold(f64::INFINITY, f64::min)
            })
            .collect(),
    )
}

/// Number of points within `radius` of the facilities.
pub fn coverage(metric: &Metric, facilities: &[usize], radius: f64) -> usize {
    (0..metric.len())
        .filter(|&j| facilities.iter().any(|&f| metric.dist[j][f] <= radius))
        .count()
}

fn binom(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Calls `f` on every `k`-subset of `items` in lexicographic order.
fn for_each_subset(items: &[usize], k: usize, f: &mut dyn FnMut(&[usize])) {
    let m = items.len();
    if k == 0 || k > m {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut buf = vec![0; k];
    loop {
        for (b, &i) in buf.iter_mut().zip(&idx) {
            *b = items[i];
        }
        f(&buf);
        let mut i = k;
        while i > 0 && idx[i - 1] == m - k + i - 1 {
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

/// The `k` allowed facilities covering the most points within `radius`; ties
/// go to the lexicographically smallest set.
pub fn partial_clustering_exhaustive(metric: &Metric, k: usize, radius: f64) -> Result<Vec<usize>> {
    if k == 0 {
        return arg("k must be at least 1");
    }
    let k = k.min(metric.allowed.len());
    check_cap("facility subsets", binom(metric.allowed.len(), k), CLUSTERING_CAP)?;
    let balls: Vec<Vec<bool>> = (0..metric.len()).map(|f| metric.ball(f, radius)).collect();
    let mut best: (usize, Vec<usize>) = (0, Vec::new());
    for_each_subset(&metric.allowed, k, &mut |set| {
        let c = (0..metric.len())
            .filter(|&j| set.iter().any(|&f| balls[f][j]))
            .count();
        if best.1.is_empty() || c > best.0 {
            best = (c, set.to_vec());
        }
    });
    Ok(best.1)
}

/// Greedy partial clustering: each pick maximises the uncovered points within
/// `radius`, then marks everything within `3 radius` covered.
pub fn greedy3(metric: &Metric, k: usize, radius: f64) -> Result<Vec<usize>> {
    if k == 0 {
        return arg("k must be at least 1");
    }
    let n = metric.len();
    let mut covered = vec![false; n];
    let mut picks = Vec::new();
    for _ in 0..k.min(metric.allowed.len()) {
        let gain = |f: usize| {
            (0..n)
                .filter(|&j| !covered[j] && metric.dist[f][j] <= radius)
                .count()
        };
        let Some(&f) = metric
            .allowed
            .iter()
            .filter(|f| !picks.contains(*f))
            .max_by(|&&a, &&b| gain(a).cmp(&gain(b)).then(b.cmp(&a)))
        else {
            break;
        };
        picks.push(f);
        for (j, c) in covered.iter_mut().enumerate() {
            if metric.dist[f][j] <= 3.0 * radius {
                *c = true;
            }
        }
    }
    picks.sort_unstable();
    Ok(picks)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClusteringMode {
    Exact,
    Greedy3,
}

impl ClusteringMode {
    /// Radius blow-up of the partial clustering routine.
    pub fn alpha(self) -> f64 {
        match self {
            ClusteringMode::Exact => 1.0,
            ClusteringMode::Greedy3 => 3.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteringResult {
    pub facilities: Vec<usize>,
    pub mode: ClusteringMode,
    pub eps: f64,
    /// Parameter used by the radius loop.
    pub inner_eps: f64,
    /// Radius of the final iteration before rounding up: the k-center
    /// optimum in exact mode, an upper bound on it that greedy3 can cover in
    /// greedy mode.
    pub d: f64,
    pub radii: Vec<f64>,
    /// Every point was opened because `inner_eps <= 1/n`.
    pub opened_all: bool,
    /// `k (1 + iterations)`.
    pub facility_bound: usize,
    /// Guaranteed factor against any symmetric monotonic norm optimum.
    pub guarantee: f64,
}

/// Exact k-center optimum over allowed facilities.
pub fn k_center_optimum(metric: &Metric, k: usize) -> Result<f64> {
    let radii = metric.candidate_radii();
    let n = metric.len();
    let (mut lo, mut hi) = (0usize, radii.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        let c = partial_clustering_exhaustive(metric, k, radii[mid])?;
        if coverage(metric, &c, radii[mid]) == n {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(radii[lo])
}

/// Smallest candidate radius `R` at which greedy3 covers every point within
/// `3R`. At most the k-center optimum.
pub fn greedy_center_radius(metric: &Metric, k: usize) -> Result<f64> {
    let radii = metric.candidate_radii();
    let n = metric.len();
    for &r in &radii {
        let c = greedy3(metric, k, r)?;
        if coverage(metric, &c, 3.0 * r) == n {
            return Ok(r);
        }
    }
    Ok(*radii.last().expect("nonempty"))
}

/// Unions partial clusterings over radii `D ε' (1+ε')^l / n`,
/// `l = 0..=ceil(log_{1+ε'}(n/ε'))`, with `ε' = ε/2` (exact) or `ε/6`
/// (greedy3).
pub fn iterative_clustering(metric: &Metric, k: usize, eps: f64, mode: ClusteringMode) -> Result<ClusteringResult> {
    if !(eps > 0.0 && eps <= 1.0) {
        return arg(format!("eps must lie in (0, 1], got {eps}"));
    }
    if k == 0 {
        return arg("k must be at least 1");
    }
    let n = metric.len();
    let inner = match mode {
        ClusteringMode::Exact => eps / 2.0,
        ClusteringMode::Greedy3 => eps / 6.0,
    };
    let guarantee = mode.alpha() * (1.0 + 2.0 * inner);
    if inner <= 1.0 / n as f64 {
        return Ok(ClusteringResult {
            facilities: metric.allowed.clone(),
            mode,
            eps,
            inner_eps: inner,
            d: 0.0,
            radii: Vec::new(),
            opened_all: true,
            facility_bound: metric.allowed.len(),
            guarantee,
        });
    }
    let d = match mode {
        ClusteringMode::Exact => k_center_optimum(metric, k)?,
        ClusteringMode::Greedy3 => greedy_center_radius(metric, k)?,
    };
    let iters = ((n as f64 / inner).ln() / (1.0 + inner).ln() - 1e-12).ceil() as usize;
    let r0 = d * inner / n as f64;
    let mut open = vec![false; n];
    let mut radii = Vec::with_capacity(iters + 1);
    for l in 0..=iters {
        let r = r0 * (1.0 + inner).powi(l as i32);
        radii.push(r);
        let c = match mode {
            ClusteringMode::Exact => partial_clustering_exhaustive(metric, k, r)?,
            ClusteringMode::Greedy3 => greedy3(metric, k, r)?,
        };
        for f in c {
            open[f] = true;
        }
    }
    Ok(ClusteringResult {
        facilities: (0..n).filter(|&f| open[f]).collect(),
        mode,
        eps,
        inner_eps: inner,
        d,
        radii,
        opened_all: false,
        facility_bound: k * (1 + iters),
        guarantee,
    })
}

/// Per-`j` minimum top-j norm of distance vectors over all `k`-subsets of
/// allowed facilities.
pub fn exhaustive_k_facility_topk(metric: &Metric, k: usize) -> Result<Vec<f64>> {
    if k == 0 {
        return arg("k must be at least 1");
    }
    let k = k.min(metric.allowed.len());
    check_cap("facility subsets", binom(metric.allowed.len(), k), CLUSTERING_CAP)?;
    let mut best = vec![f64::INFINITY; metric.len()];
    let mut err = None;
    for_each_subset(&metric.allowed, k, &mut |set| match distance_vector(metric, set) {
        Ok(x) => {
            for (b, p) in best.iter_mut().zip(top_k_profile(&x)) {
                *b = b.min(p);
            }
        }
        Err(e) => err = Some(e),
    });
    match err {
        Some(e) => Err(e),
        None => Ok(best),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UflPortfolio {
    pub ks: Vec<usize>,
    pub facility_sets: Vec<Vec<usize>>,
    pub distance_vectors: Vec<CostVector>,
}

impl UflPortfolio {
    /// `min_F |F| + topk(x^F)` over the portfolio, for `k = 1..=n`.
    pub fn topk_costs(&self) -> Vec<f64> {
        let mut best = vec![f64::INFINITY; self.distance_vectors.first().map_or(0, |x| x.len())];
        for (f, x) in self.facility_sets.iter().zip(&self.distance_vectors) {
            for (b, p) in best.iter_mut().zip(top_k_profile(x)) {
                *b = b.min(f.len() as f64 + p);
            }
        }
        best
    }
}

/// Greedy iterative clusterings with `ε = 1` and `k = 2^0, 2^1, ..., 2^ceil(log2 n)`
/// (capped at the number of allowed facilities).
pub fn ufl_portfolio(metric: &Metric) -> Result<UflPortfolio> {
    let n = metric.len();
    let top = (n as f64).log2().ceil() as u32;
    let mut out = UflPortfolio {
        ks: Vec::new(),
        facility_sets: Vec::new(),
        distance_vectors: Vec::new(),
    };
    for j in 0..=top {
        let k = (1usize << j).min(metric.allowed.len());
        let c = iterative_clustering(metric, k, 1.0, ClusteringMode::Greedy3)?;
        let x = distance_vector(metric, &c.facilities)?;
        out.ks.push(k);
        out.facility_sets.push(c.facilities);
        out.distance_vectors.push(x);
    }
    Ok(out)
}

/// Per-`k` minimum of `|F| + topk(x^F)` over all nonempty allowed `F`.
pub fn ufl_brute_force_topk(metric: &Metric, cap: f64) -> Result<Vec<f64>> {
    let m = metric.allowed.len();
    check_cap("facility subsets", 2f64.powi(m as i32), cap)?;
    let mut best = vec![f64::INFINITY; metric.len()];
    for mask in 1u64..(1u64 << m) {
        let set: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| metric.allowed[i]).collect();
        let x = distance_vector(metric, &set)?;
        for (b, p) in best.iter_mut().zip(top_k_profile(&x)) {
            *b = b.min(set.len() as f64 + p);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn line(points: &[f64]) -> Metric {
        Metric::new(
            points
                .iter()
                .map(|a| points.iter().map(|b| (a - b).abs()).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn rejects_bad_metrics() {
        assert!(Metric::new(vec![vec![0.0, 1.0], vec![2.0, 0.0]]).is_err());
        let bad = vec![
            vec![0.0, 1.0, 5.0],
            vec![1.0, 0.0, 1.0],
            vec![5.0, 1.0, 0.0],
        ];
        assert!(Metric::new(bad).is_err());
        assert!(Metric::with_allowed(vec![vec![0.0]], vec![]).is_err());
    }

    #[test]
    fn distance_vectors() {
        let m = line(&[0.0, 1.0, 2.0]);
        assert_eq!(distance_vector(&m, &[0, 1, 2]).unwrap().as_slice(), &[0.0; 3]);
        assert!(distance_vector(&m, &[]).is_err());
        let star = star_metric(4).unwrap();
        assert_eq!(distance_vector(&star, &[0]).unwrap().as_slice(), &[0.0, 2.0, 2.0, 2.0, 2.0]);
    }

    #[test]
    fn collinear_center() {
        let m = line(&[0.0, 1.0, 2.0]);
        assert_eq!(partial_clustering_exhaustive(&m, 1, 1.0).unwrap(), vec![1]);
        assert_eq!(k_center_optimum(&m, 1).unwrap(), 1.0);
        assert_eq!(k_center_optimum(&m, 3).unwrap(), 0.0);
    }

    #[test]
    fn single_point() {
        let m = Metric::new(vec![vec![0.0]]).unwrap();
        for mode in [ClusteringMode::Exact, ClusteringMode::Greedy3] {
            assert_eq!(iterative_clustering(&m, 1, 1.0, mode).unwrap().facilities, vec![0]);
        }
    }

    #[test]
    fn allowed_mask_is_respected() {
        let m = Metric::with_allowed(
            vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.0], vec![2.0, 1.0, 0.0]],
            vec![0, 2],
        )
        .unwrap();
        let r = iterative_clustering(&m, 1, 1.0, ClusteringMode::Exact).unwrap();
        assert!(r.facilities.iter().all(|f| *f != 1));
        assert_eq!(r.d, 2.0);
    }

    #[test]
    fn star_portfolio_tradeoff() {
        let star = star_metric(16).unwrap();
        let p = ufl_portfolio(&star).unwrap();
        assert!(p.facility_sets.len() <= 6);
        let costs = p.topk_costs();
        // L1 optimum opens every point; L∞ optimum opens the hub.
        assert!(costs[16] <= 17.0 * 4.0);
        assert!(costs[0] <= 5.0 * 4.0);
    }

    fn metric_strategy() -> impl Strategy<Value = Metric> {
        proptest::collection::vec((0.0f64..10.0, 0.0f64..10.0), 1..8).prop_map(|pts| {
            let dist = pts
                .iter()
                .map(|a| pts.iter().map(|b| ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()).collect())
                .collect();
            Metric::new(dist).unwrap()
        })
    }

    proptest! {
        #[test]
        fn greedy_dominates_exhaustive(m in metric_strategy(), k in 1usize..4, r in 0.0f64..8.0) {
            let g = greedy3(&m, k, r).unwrap();
            let e = partial_clustering_exhaustive(&m, k, r).unwrap();
            prop_assert!(coverage(&m, &g, 3.0 * r) >= coverage(&m, &e, r));
        }

        #[test]
        fn facility_count_bound(m in metric_strategy(), k in 1usize..3, greedy in any::<bool>()) {
            let mode = if greedy { ClusteringMode::Greedy3 } else { ClusteringMode::Exact };
            let r = iterative_clustering(&m, k, 1.0, mode).unwrap();
            prop_assert!(r.facilities.len() <= r.facility_bound.max(k));
            prop_assert!(r.greedy_radius_ok(&m, k));
        }
    }

    impl ClusteringResult {
        fn greedy_radius_ok(&self, m: &Metric, k: usize) -> bool {
            self.opened_all || self.mode == ClusteringMode::Exact || self.d <= k_center_optimum(m, k).unwrap()
        }
    }
}
