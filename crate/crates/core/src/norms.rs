//! Ordered norms, their duals and majorization.
//!
//! An ordered norm with weights `w` (nonnegative, nonincreasing) evaluates
//! `sum_i w_i * x_(i)` where `x_(1) >= x_(2) >= ...` is the decreasing
//! rearrangement of `x`. Top-k norms are the special case `w = 1_k`.

use serde::{Deserialize, Serialize};
use std::ops::Deref;

use crate::error::{arg, check_dim, Error, Result};

/// Relative tolerance used by every comparison in this crate.
pub const REL_TOL: f64 = 1e-9;

/// A validated nonnegative, finite cost vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct CostVector(Vec<f64>);

impl CostVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return arg(format!("cost entries must be finite and nonnegative, got {v}"));
        }
        Ok(CostVector(values))
    }

    pub fn zeros(d: usize) -> Self {
        CostVector(vec![0.0; d])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Entries sorted in decreasing order.
    pub fn sorted_desc(&self) -> Vec<f64> {
        sorted_desc(&self.0)
    }
}

impl Deref for CostVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for CostVector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        CostVector::new(v)
    }
}

impl From<CostVector> for Vec<f64> {
    fn from(c: CostVector) -> Vec<f64> {
        c.0
    }
}

/// Nonnegative nonincreasing weights with at least one positive entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    /// Validates `w`. Violations of monotonicity within the relative tolerance
    /// are repaired by taking the running minimum.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return arg("weight vector must be nonempty");
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return arg(format!("weights must be finite and nonnegative, got {v}"));
        }
        for i in 1..values.len() {
            let (a, b) = (values[i - 1], values[i]);
            if b > a + REL_TOL * a.abs().max(1.0) {
                return arg(format!(
                    "weights must be nonincreasing: w[{}]={} < w[{}]={}",
                    i - 1,
                    a,
                    i,
                    b
                ));
            }
        }
        let mut w = values;
        for i in 1..w.len() {
            if w[i] > w[i - 1] {
                w[i] = w[i - 1];
            }
        }
        if w[0] <= 0.0 {
            return arg("weight vector must have a positive entry");
        }
        Ok(WeightVector(w))
    }

    /// The indicator `1_k` of the first `k` coordinates in dimension `d`.
    pub fn top_k(d: usize, k: usize) -> Result<Self> {
        if k == 0 || k > d {
            return arg(format!("top-k weight needs 1 <= k <= d, got k={k}, d={d}"));
        }
        let mut w = vec![0.0; d];
        w[..k].iter_mut().for_each(|v| *v = 1.0);
        Ok(WeightVector(w))
    }

    /// All `d` top-k weight vectors, in order of increasing `k`.
    pub fn all_top_k(d: usize) -> Vec<WeightVector> {
        (1..=d).map(|k| WeightVector::top_k(d, k).unwrap()).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Prefix sums `W_k = w_1 + ... + w_k`, `k = 1..=d`.
    pub fn prefix_sums(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.0
            .iter()
            .map(|v| {
                acc += v;
                acc
            })
            .collect()
    }
}

impl Deref for WeightVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for WeightVector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        WeightVector::new(v)
    }
}

impl From<WeightVector> for Vec<f64> {
    fn from(w: WeightVector) -> Vec<f64> {
        w.0
    }
}

/// Decreasing rearrangement; equal entries keep their index order.
pub fn sorted_desc(x: &[f64]) -> Vec<f64> {
    let mut v = x.to_vec();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Indices of `x` in decreasing order of value, ties by index.
pub fn argsort_desc(x: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&i, &j| x[j].total_cmp(&x[i]));
    idx
}

/// Sum of the `k` largest entries.
pub fn top_k_norm(x: &[f64], k: usize) -> Result<f64> {
    if k == 0 || k > x.len() {
        return arg(format!("top-k needs 1 <= k <= d, got k={k}, d={}", x.len()));
    }
    Ok(sorted_desc(x)[..k].iter().sum())
}

/// All top-k norms `k = 1..=d` from one sort.
pub fn top_k_profile(x: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    sorted_desc(x)
        .into_iter()
        .map(|v| {
            acc += v;
            acc
        })
        .collect()
}

/// `sum_i w_i x_(i)`.
pub fn ordered_norm(x: &[f64], w: &WeightVector) -> Result<f64> {
    check_dim(w.len(), x.len())?;
    Ok(ordered_norm_sorted(&sorted_desc(x), w))
}

/// Ordered norm of an already decreasing vector.
pub fn ordered_norm_sorted(sorted: &[f64], w: &[f64]) -> f64 {
    sorted
        .iter()
        .zip(w)
        .filter(|(_, wi)| **wi != 0.0)
        .map(|(xi, wi)| xi * wi)
        .sum()
}

/// Dual norm `max_k topk(y, k) / W_k`, evaluated only where the sorted
/// entries of `y` change value (and at `k = d`).
pub fn dual_ordered_norm(y: &[f64], w: &WeightVector) -> Result<f64> {
    check_dim(w.len(), y.len())?;
    Ok(dual_scan(y, w, true).0)
}

/// Dual norm evaluated at every `k`; the reference for [`dual_ordered_norm`].
pub fn dual_ordered_norm_full(y: &[f64], w: &WeightVector) -> Result<f64> {
    check_dim(w.len(), y.len())?;
    Ok(dual_scan(y, w, false).0)
}

/// Returns (max ratio, ratio per k for every evaluated k as (k, ratio)).
fn dual_scan(y: &[f64], w: &WeightVector, boundaries_only: bool) -> (f64, Vec<(usize, f64)>) {
    let s = sorted_desc(y);
    let wsum = w.prefix_sums();
    let d = s.len();
    let mut best = f64::NEG_INFINITY;
    let mut acc = 0.0;
    let mut ratios = Vec::new();
    for k in 1..=d {
        acc += s[k - 1];
        if boundaries_only && k < d && s[k - 1] == s[k] {
            continue;
        }
        let r = acc / wsum[k - 1];
        ratios.push((k, r));
        if r > best {
            best = r;
        }
    }
    (best, ratios)
}

/// `true` when `x` is majorized by `y` (`x ⪯ y`): every top-k norm of `x` is
/// at most the matching top-k norm of `y`, up to `1e-9 * (1 + ||y||_1)`.
pub fn majorizes(x: &[f64], y: &[f64]) -> Result<bool> {
    majorizes_scaled(x, y, 1.0)
}

/// `x ⪯ factor * y`.
pub fn majorizes_scaled(x: &[f64], y: &[f64], factor: f64) -> Result<bool> {
    check_dim(x.len(), y.len())?;
    let px = top_k_profile(x);
    let py = top_k_profile(y);
    let tol = REL_TOL * (1.0 + factor * py.last().copied().unwrap_or(0.0));
    Ok(px.iter().zip(&py).all(|(a, b)| *a <= factor * b + tol))
}

/// Outcome of the ordered Cauchy–Schwarz check
/// `||x||_(w) * ||y||*_(w) >= x . y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CauchySchwarzReport {
    pub lhs: f64,
    pub inner: f64,
    pub holds: bool,
    /// Equality within tolerance.
    pub tight: bool,
    /// Whether the equality characterisation is met.
    pub characterised: bool,
    /// A common decreasing order of `x` and `y`, if one exists.
    pub shared_order: Option<Vec<usize>>,
    /// Positions `k` where `x↓_k > x↓_{k+1}` but the dual maximum is not
    /// attained at `k`.
    pub failing_k: Vec<usize>,
}

/// Evaluates the inequality and the equality characterisation: equality holds
/// exactly when `x` and `y` can be sorted by a common permutation and, for
/// each `k`, either `x↓_k = x↓_{k+1}` or the dual maximum is attained at `k`.
pub fn check_ordered_cauchy_schwarz(
    x: &[f64],
    y: &[f64],
    w: &WeightVector,
) -> Result<CauchySchwarzReport> {
    check_dim(w.len(), x.len())?;
    check_dim(x.len(), y.len())?;
    let norm = ordered_norm(x, w)?;
    let (dual, _) = dual_scan(y, w, false);
    let lhs = norm * dual;
    let inner: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let scale = 1.0 + lhs.abs().max(inner.abs());
    let holds = lhs >= inner - REL_TOL * scale;
    let tight = (lhs - inner).abs() <= REL_TOL * scale;

    let shared_order = common_order(x, y);
    let sx = sorted_desc(x);
    let sy = sorted_desc(y);
    let wsum = w.prefix_sums();
    let mut failing_k = Vec::new();
    let mut acc = 0.0;
    let dual_scale = REL_TOL * (1.0 + dual.abs());
    for k in 1..=x.len() {
        acc += sy[k - 1];
        let next = if k < x.len() { sx[k] } else { 0.0 };
        let flat = (sx[k - 1] - next).abs() <= REL_TOL * (1.0 + sx[k - 1].abs());
        if !flat && (acc / wsum[k - 1] - dual).abs() > dual_scale {
            failing_k.push(k);
        }
    }
    let characterised = shared_order.is_some() && failing_k.is_empty();
    Ok(CauchySchwarzReport {
        lhs,
        inner,
        holds,
        tight,
        characterised,
        shared_order,
        failing_k,
    })
}

/// Sorts by `x` decreasing with ties broken by `y` decreasing, then checks
/// that `y` is nonincreasing along that order.
fn common_order(x: &[f64], y: &[f64]) -> Option<Vec<usize>> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    let close = |a: f64, b: f64| (a - b).abs() <= REL_TOL * (1.0 + a.abs().max(b.abs()));
    idx.sort_by(|&i, &j| {
        if close(x[i], x[j]) {
            y[j].total_cmp(&y[i])
        } else {
            x[j].total_cmp(&x[i])
        }
    });
    let ok = idx
        .windows(2)
        .all(|p| y[p[1]] <= y[p[0]] + REL_TOL * (1.0 + y[p[0]].abs()));
    ok.then_some(idx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(v: &[f64]) -> WeightVector {
        WeightVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn top_k_examples() {
        assert_eq!(top_k_norm(&[3.0, 1.0, 2.0], 2).unwrap(), 5.0);
        assert_eq!(top_k_norm(&[0.0, 0.0], 1).unwrap(), 0.0);
        assert!(top_k_norm(&[1.0], 0).is_err());
        assert!(top_k_norm(&[1.0], 2).is_err());
    }

    #[test]
    fn ordered_norm_examples() {
        assert_eq!(ordered_norm(&[3.0, 1.0, 2.0], &w(&[1.0, 0.5, 0.0])).unwrap(), 4.0);
        assert!(ordered_norm(&[1.0, 2.0], &w(&[1.0])).is_err());
    }

    #[test]
    fn dual_examples() {
        // (6/1, 6/2, 6/3) -> 6
        let y = [6.0, 0.0, 0.0];
        assert_eq!(dual_ordered_norm(&y, &w(&[1.0, 1.0, 1.0])).unwrap(), 6.0);
        // (1, 2/2, 3/3) -> 1
        let y = [1.0, 1.0, 1.0];
        assert_eq!(dual_ordered_norm(&y, &w(&[1.0, 1.0, 1.0])).unwrap(), 1.0);
    }

    #[test]
    fn majorization_examples() {
        assert!(majorizes(&[1.0, 1.0], &[2.0, 0.0]).unwrap());
        assert!(!majorizes(&[2.0, 0.0], &[1.0, 1.0]).unwrap());
        assert!(majorizes_scaled(&[2.0, 0.0], &[1.0, 1.0], 2.0).unwrap());
    }

    #[test]
    fn weight_validation() {
        assert!(WeightVector::new(vec![]).is_err());
        assert!(WeightVector::new(vec![0.0, 0.0]).is_err());
        assert!(WeightVector::new(vec![1.0, 2.0]).is_err());
        assert!(WeightVector::new(vec![1.0, -0.1]).is_err());
        assert!(WeightVector::new(vec![f64::NAN]).is_err());
        let repaired = WeightVector::new(vec![1.0, 1.0 + 1e-12, 0.5]).unwrap();
        assert_eq!(repaired.as_slice(), &[1.0, 1.0, 0.5]);
        assert!(CostVector::new(vec![1.0, -1.0]).is_err());
        assert!(CostVector::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn cauchy_schwarz_strict_when_orders_differ() {
        let r = check_ordered_cauchy_schwarz(&[2.0, 0.0], &[0.0, 2.0], &w(&[1.0, 0.0])).unwrap();
        assert!(r.holds);
        assert!(!r.tight);
        assert!(r.shared_order.is_none());
        assert!(!r.characterised);
    }

    #[test]
    fn cauchy_schwarz_tight_on_aligned_pair() {
        let r = check_ordered_cauchy_schwarz(&[1.0, 1.0], &[1.0, 1.0], &w(&[1.0, 1.0])).unwrap();
        assert!(r.tight);
        assert!(r.characterised);
    }

    #[test]
    fn serde_rejects_bad_vectors() {
        assert!(serde_json::from_str::<CostVector>("[1.0,-2.0]").is_err());
        assert!(serde_json::from_str::<WeightVector>("[1.0,2.0]").is_err());
        let c: CostVector = serde_json::from_str("[1.0,2.0]").unwrap();
        assert_eq!(serde_json::to_string(&c).unwrap(), "[1.0,2.0]");
    }

    fn vec_and_weights() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<f64>)> {
        (1usize..12).prop_flat_map(|d| {
            (
                proptest::collection::vec(0.0f64..10.0, d),
                proptest::collection::vec(0.0f64..10.0, d),
                proptest::collection::vec(0.0f64..1.0, d),
            )
        })
    }

    fn weights_from(raw: &[f64]) -> WeightVector {
        let mut v = raw.to_vec();
        v.sort_by(|a, b| b.total_cmp(a));
        v[0] += 0.1;
        WeightVector::new(v).unwrap()
    }

    proptest! {
        #[test]
        fn cauchy_schwarz_always_holds((x, y, raw) in vec_and_weights()) {
            let w = weights_from(&raw);
            let r = check_ordered_cauchy_schwarz(&x, &y, &w).unwrap();
            prop_assert!(r.holds);
            if r.characterised {
                prop_assert!(r.tight, "characterised but not tight: {:?}", r);
            }
        }

        #[test]
        fn fast_dual_matches_full((_x, y, raw) in vec_and_weights()) {
            let w = weights_from(&raw);
            let a = dual_ordered_norm(&y, &w).unwrap();
            let b = dual_ordered_norm_full(&y, &w).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-300));
        }

        #[test]
        fn norm_is_permutation_invariant_and_homogeneous((x, _y, raw) in vec_and_weights(), c in 0.0f64..5.0) {
            let w = weights_from(&raw);
            let mut r = x.clone();
            r.reverse();
            let a = ordered_norm(&x, &w).unwrap();
            prop_assert!((a - ordered_norm(&r, &w).unwrap()).abs() <= 1e-9 * (1.0 + a));
            let scaled: Vec<f64> = x.iter().map(|v| v * c).collect();
            prop_assert!((ordered_norm(&scaled, &w).unwrap() - c * a).abs() <= 1e-9 * (1.0 + c * a));
        }

        #[test]
        fn majorization_implies_norm_order((x, y, raw) in vec_and_weights()) {
            let w = weights_from(&raw);
            if majorizes(&x, &y).unwrap() {
                let nx = ordered_norm(&x, &w).unwrap();
                let ny = ordered_norm(&y, &w).unwrap();
                prop_assert!(nx <= ny + 1e-9 * (1.0 + ny) * w[0].max(1.0));
            }
        }

        #[test]
        fn top_k_agrees_with_indicator_weights((x, _y, _raw) in vec_and_weights(), k in 1usize..12) {
            let k = k.min(x.len());
            let w = WeightVector::top_k(x.len(), k).unwrap();
            prop_assert_eq!(top_k_norm(&x, k).unwrap(), ordered_norm(&x, &w).unwrap());
        }
    }
}
