//! Scheduling `n` identical jobs on `d` machines with per-job processing times
//! `p_i`. A schedule assigns `n_i` jobs to machine `i`, giving load
//! `n_i p_i`.
//!
//! Instances are stored with `p` sorted nondecreasingly; every schedule and
//! vertex in this module uses these sorted coordinates. Use
//! [`MlijInstance::to_input_order`] to map back.

use serde::{Deserialize, Serialize};

use crate::error::{arg, check_cap, check_dim, Error, Result};
use crate::norms::{majorizes_scaled, ordered_norm, CostVector, WeightVector, REL_TOL};
use crate::portfolio::{Alpha, FiniteDomain, Portfolio};

/// Default cap on the number of schedules enumerated by brute force.
pub const BRUTE_FORCE_CAP: f64 = 1e7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlijInstance {
    p: Vec<f64>,
    n: u64,
    order: Vec<usize>,
}

impl MlijInstance {
    /// Validates `p` (positive, finite) and `n >= 1` and sorts `p`; ties keep
    /// input order.
    pub fn new(p: Vec<f64>, n: u64) -> Result<Self> {
        if p.is_empty() {
            return arg("need at least one machine");
        }
        if let Some(v) = p.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return arg(format!("processing times must be positive and finite, got {v}"));
        }
        if n == 0 {
            return arg("need at least one job");
        }
        let mut order: Vec<usize> = (0..p.len()).collect();
        order.sort_by(|&a, &b| p[a].total_cmp(&p[b]));
        let sorted = order.iter().map(|&i| p[i]).collect();
        Ok(MlijInstance {
            p: sorted,
            n,
            order,
        })
    }

    /// Processing times in sorted order.
    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.p.len()
    }

    /// `order[i]` is the input index of sorted machine `i`.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Processing times in input order.
    pub fn input_p(&self) -> Vec<f64> {
        self.to_input_order(&self.p)
    }

    /// Maps a per-machine vector from sorted to input order.
    pub fn to_input_order<T: Copy + Default>(&self, sorted: &[T]) -> Vec<T> {
        let mut out = vec![T::default(); sorted.len()];
        for (i, &orig) in self.order.iter().enumerate() {
            out[orig] = sorted[i];
        }
        out
    }

    /// Maps a per-machine vector from input to sorted order.
    pub fn from_input_order<T: Copy>(&self, input: &[T]) -> Vec<T> {
        self.order.iter().map(|&i| input[i]).collect()
    }

    /// `true` when every `p_i` is a power of two.
    pub fn is_doubling(&self) -> bool {
        self.p.iter().all(|v| {
            let e = v.log2().round();
            2f64.powi(e as i32) == *v
        })
    }
}

/// Job counts per machine, in sorted coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub counts: Vec<u64>,
}

/// Per-machine loads `n_i p_i` of a complete schedule.
pub fn load_vector(inst: &MlijInstance, sched: &Schedule) -> Result<CostVector> {
    check_dim(inst.dim(), sched.counts.len())?;
    let total: u64 = sched.counts.iter().sum();
    if total != inst.n {
        return Err(Error::Precondition(format!(
            "schedule assigns {total} jobs, instance has {}",
            inst.n
        )));
    }
    CostVector::new(
        sched
            .counts
            .iter()
            .zip(&inst.p)
            .map(|(c, p)| *c as f64 * p)
            .collect(),
    )
}

/// Rounds `v` to the nearest power of two in log scale; exact midpoints
/// (`2^k √2`) round down.
pub fn round_to_power_of_two(v: f64) -> f64 {
    let mut low = 2f64.powi(v.log2().floor() as i32);
    // log2 can be off by one ulp next to exact powers of two.
    if low > v {
        low /= 2.0;
    } else if low * 2.0 <= v {
        low *= 2.0;
    }
    if v > low * std::f64::consts::SQRT_2 {
        low * 2.0
    } else {
        low
    }
}

/// Replaces every `p_i` by its nearest power of two. Machine order is kept.
pub fn doubling_transform(inst: &MlijInstance) -> MlijInstance {
    MlijInstance {
        p: inst.p.iter().map(|v| round_to_power_of_two(*v)).collect(),
        n: inst.n,
        order: inst.order.clone(),
    }
}

fn check_index(inst: &MlijInstance, l: usize) -> Result<()> {
    if l == 0 || l > inst.dim() {
        return arg(format!("vertex index must be in 1..={}, got {l}", inst.dim()));
    }
    Ok(())
}

/// Common load `n / sum_{i<=l} 1/p_i` of vertex `l`.
pub fn vertex_value(inst: &MlijInstance, l: usize) -> Result<f64> {
    check_index(inst, l)?;
    let s: f64 = inst.p[..l].iter().map(|p| 1.0 / p).sum();
    Ok(inst.n as f64 / s)
}

/// Fractional vertex `x(l)`: equal load on the `l` fastest machines.
pub fn vertex(inst: &MlijInstance, l: usize) -> Result<CostVector> {
    let v = vertex_value(inst, l)?;
    let mut x = vec![0.0; inst.dim()];
    x[..l].iter_mut().for_each(|e| *e = v);
    CostVector::new(x)
}

/// `x(l)` is good when every used machine receives at least one job.
pub fn is_good_vertex(inst: &MlijInstance, l: usize) -> Result<bool> {
    let v = vertex_value(inst, l)?;
    Ok(v * (1.0 + 1e-12) >= inst.p[l - 1])
}

/// Largest `l` with `x(l)` good. `x(1)` is always good.
pub fn largest_good_index(inst: &MlijInstance) -> usize {
    (1..=inst.dim())
        .rev()
        .find(|&l| is_good_vertex(inst, l).unwrap_or(false))
        .unwrap_or(1)
}

/// Rounds a good vertex to an integral schedule. Fractional job counts
/// `x_i / p_i` are floored and the remaining jobs go to the machines with the
/// largest fractional parts (ties to the lower index).
pub fn round_good_vertex(inst: &MlijInstance, l: usize) -> Result<Schedule> {
    if !is_good_vertex(inst, l)? {
        return Err(Error::Precondition(format!("vertex {l} is not good")));
    }
    let v = vertex_value(inst, l)?;
    let mut counts = vec![0u64; inst.dim()];
    let mut fracs = Vec::with_capacity(l);
    for i in 0..l {
        let c = v / inst.p[i];
        let r = c.round();
        let c = if (c - r).abs() <= 1e-9 * (1.0 + r) { r } else { c };
        counts[i] = c.floor() as u64;
        fracs.push((i, c - c.floor()));
    }
    let assigned: u64 = counts.iter().sum();
    let missing = inst.n.checked_sub(assigned).ok_or_else(|| {
        Error::Numeric(format!("rounding assigned {assigned} > {} jobs", inst.n))
    })? as usize;
    if missing > l {
        return Err(Error::Numeric(format!("rounding left {missing} jobs for {l} machines")));
    }
    fracs.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    for &(i, _) in fracs.iter().take(missing) {
        counts[i] += 1;
    }
    Ok(Schedule { counts })
}

/// Output of the portfolio constructions in this module.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlijPortfolio {
    /// Load vectors under the original processing times, sorted coordinates.
    pub portfolio: Portfolio,
    /// Schedules in sorted coordinates.
    pub schedules: Vec<Schedule>,
    /// Vertex indices (1-based) that were rounded.
    pub indices: Vec<usize>,
    /// Largest good vertex index of the doubling instance.
    pub largest_good: usize,
}

impl MlijPortfolio {
    /// Schedules with job counts in input machine order.
    pub fn input_order_schedules(&self, inst: &MlijInstance) -> Vec<Vec<u64>> {
        self.schedules
            .iter()
            .map(|s| inst.to_input_order(&s.counts))
            .collect()
    }
}

/// Size bound `1 + ceil(log_{α/4} L)`.
pub fn portfolio_size_bound(largest_good: usize, alpha: f64) -> usize {
    1 + ((largest_good as f64).ln() / (alpha / 4.0).ln()).ceil().max(0.0) as usize
}

/// Vertex indices `min(ceil((α/4)^j), L)` for `j = 0..=ceil(log_{α/4} L)`.
pub fn selected_indices(largest_good: usize, alpha: f64) -> Vec<usize> {
    let beta = alpha / 4.0;
    let jmax = portfolio_size_bound(largest_good, alpha) - 1;
    let mut out: Vec<usize> = (0..=jmax)
        .map(|j| {
            let v = beta.powi(j as i32);
            // Guard against powi landing just above an integer.
            let r = v.round();
            let c = if (v - r).abs() <= 1e-9 * r { r } else { v.ceil() };
            (c as usize).min(largest_good)
        })
        .collect();
    out.dedup();
    out
}

fn portfolio_from(
    inst: &MlijInstance,
    doubled: &MlijInstance,
    indices: Vec<usize>,
    alpha: Alpha,
    largest_good: usize,
) -> Result<MlijPortfolio> {
    let mut schedules = Vec::new();
    let mut vectors = Vec::new();
    let mut provenance = Vec::new();
    for &l in &indices {
        let s = round_good_vertex(doubled, l)?;
        vectors.push(load_vector(inst, &s)?);
        provenance.push(format!("rounded-vertex:{l}"));
        schedules.push(s);
    }
    Ok(MlijPortfolio {
        portfolio: Portfolio::new(vectors, provenance, alpha)?,
        schedules,
        indices,
        largest_good,
    })
}

/// `α`-portfolio of size at most `1 + ceil(log_{α/4} d)` for `α > 4`.
///
/// Works on the doubling instance: rounds the good vertices
/// `x(ceil((α/4)^j))` and evaluates the resulting schedules under the
/// original processing times.
pub fn build_portfolio(inst: &MlijInstance, alpha: f64) -> Result<MlijPortfolio> {
    if !(alpha.is_finite() && alpha > 4.0 + 1e-9) {
        return arg(format!("alpha must exceed 4, got {alpha}"));
    }
    let doubled = doubling_transform(inst);
    let lg = largest_good_index(&doubled);
    let indices = selected_indices(lg, alpha);
    portfolio_from(inst, &doubled, indices, Alpha::Numeric(alpha), lg)
}

/// Two schedules `{x̂(1), x̂(L)}` approximating every top-k norm; the factor
/// is 8 on instances whose times are powers of two and 16 otherwise.
pub fn topk_two_portfolio(inst: &MlijInstance) -> Result<MlijPortfolio> {
    let doubled = doubling_transform(inst);
    let lg = largest_good_index(&doubled);
    let mut indices = vec![1, lg];
    indices.dedup();
    let alpha = if inst.is_doubling() { 8.0 } else { 16.0 };
    portfolio_from(inst, &doubled, indices, Alpha::Numeric(alpha), lg)
}

/// Rounded good vertices `x̂(1..=L)` of the doubling instance, evaluated under
/// the original times.
pub fn all_rounded_vertices(inst: &MlijInstance) -> Result<MlijPortfolio> {
    let doubled = doubling_transform(inst);
    let lg = largest_good_index(&doubled);
    let alpha = if inst.is_doubling() { 2.0 } else { 4.0 };
    portfolio_from(inst, &doubled, (1..=lg).collect(), Alpha::Numeric(alpha), lg)
}

/// `x(l) ⪯ (α/4) x(i)` for every pair of good indices `l <= i <= (α/4) l`.
/// Returns the first failing pair, if any.
pub fn check_selection_majorization(inst: &MlijInstance, alpha: f64) -> Result<Option<(usize, usize)>> {
    let beta = alpha / 4.0;
    let lg = largest_good_index(inst);
    let verts: Vec<CostVector> = (1..=lg).map(|l| vertex(inst, l)).collect::<Result<_>>()?;
    for l in 1..=lg {
        for i in l..=lg {
            if i as f64 > beta * l as f64 * (1.0 + REL_TOL) {
                break;
            }
            if !majorizes_scaled(&verts[l - 1], &verts[i - 1], beta)? {
                return Ok(Some((l, i)));
            }
        }
    }
    Ok(None)
}

/// `C(n + d - 1, d - 1)`, the number of complete schedules.
pub fn schedule_count(inst: &MlijInstance) -> f64 {
    let n = inst.n as f64;
    (1..inst.dim()).fold(1.0, |acc, i| acc * (n + i as f64) / i as f64)
}

/// Calls `f` on every complete schedule (job counts in sorted coordinates) in
/// lexicographic order.
pub fn for_each_schedule(inst: &MlijInstance, cap: f64, mut f: impl FnMut(&[u64])) -> Result<()> {
    check_cap("schedule enumeration", schedule_count(inst), cap)?;
    let d = inst.dim();
    let mut counts = vec![0u64; d];
    fn rec(i: usize, left: u64, counts: &mut Vec<u64>, f: &mut dyn FnMut(&[u64])) {
        let d = counts.len();
        if i == d - 1 {
            counts[i] = left;
            f(counts);
            return;
        }
        for c in (0..=left).rev() {
            counts[i] = c;
            rec(i + 1, left - c, counts, f);
        }
    }
    rec(0, inst.n, &mut counts, &mut f);
    Ok(())
}

/// Every complete schedule's load vector, for instances with at most `cap`
/// schedules.
pub fn brute_force_schedules(inst: &MlijInstance, cap: f64) -> Result<FiniteDomain> {
    let mut vectors = Vec::new();
    let mut labels = Vec::new();
    for_each_schedule(inst, cap, |c| {
        vectors.push(
            CostVector::new(c.iter().zip(&inst.p).map(|(a, p)| *a as f64 * p).collect())
                .expect("loads are nonnegative"),
        );
        labels.push(format!("{c:?}"));
    })?;
    FiniteDomain::with_labels(vectors, labels)
}

/// Minimum of each ordered norm over all complete schedules, without storing
/// the schedules.
pub fn brute_force_optima(inst: &MlijInstance, weights: &[WeightVector], cap: f64) -> Result<Vec<f64>> {
    for w in weights {
        check_dim(inst.dim(), w.len())?;
    }
    let mut best = vec![f64::INFINITY; weights.len()];
    let mut loads = vec![0.0; inst.dim()];
    for_each_schedule(inst, cap, |c| {
        for (l, (a, p)) in loads.iter_mut().zip(c.iter().zip(&inst.p)) {
            *l = *a as f64 * p;
        }
        loads.sort_by(|a, b| b.total_cmp(a));
        for (b, w) in best.iter_mut().zip(weights) {
            let v = crate::norms::ordered_norm_sorted(&loads, w);
            if v < *b {
                *b = v;
            }
        }
    })?;
    Ok(best)
}

/// Instance family on which every portfolio with factor `α` needs `Ω(L)`
/// members.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundInstance {
    pub alpha: f64,
    pub levels: usize,
    pub base: u64,
    pub instance: MlijInstance,
    /// Class of each machine (sorted coordinates).
    pub classes: Vec<usize>,
    /// Weights `w(l)` for `l = 0..L-1`.
    pub weights: Vec<WeightVector>,
}

/// `p_i = √i` for `i = 1..=d`.
pub fn example2_instance(d: usize, n: u64) -> Result<MlijInstance> {
    MlijInstance::new((1..=d).map(|i| (i as f64).sqrt()).collect(), n)
}

/// `n = d` jobs, `p = (1, √d, ..., √d)`.
pub fn intro_instance(d: usize) -> Result<MlijInstance> {
    if d == 0 {
        return arg("need at least one machine");
    }
    let mut p = vec![(d as f64).sqrt(); d];
    p[0] = 1.0;
    MlijInstance::new(p, d as u64)
}

fn lb_base(alpha: f64, levels: usize) -> u64 {
    let target = (5.0 * alpha * levels as f64).ceil().max(2.0) as u64;
    target.next_power_of_two()
}

fn lb_dim(base: u64, levels: usize) -> f64 {
    (0..=levels).map(|l| (base as f64).powi(2 * l as i32)).sum()
}

/// Largest `L` whose lower-bound instance has at most `d_max` machines.
pub fn lower_bound_instance(alpha: f64, d_max: usize) -> Result<LowerBoundInstance> {
    if !(alpha.is_finite() && alpha >= 1.0) {
        return arg(format!("alpha must be at least 1, got {alpha}"));
    }
    let mut levels = 0;
    while lb_dim(lb_base(alpha, levels + 1), levels + 1) <= d_max as f64 {
        levels += 1;
    }
    if levels == 0 {
        let need = lb_dim(lb_base(alpha, 1), 1);
        return Err(Error::SizeCap {
            what: "lower-bound instance machines".into(),
            requested: need,
            limit: d_max as f64,
        });
    }
    lower_bound_instance_with_levels(alpha, levels, d_max)
}

/// Lower-bound instance with `L = levels`: `S` is the smallest power of two
/// with `S >= 5 α L`; class `l = 0..=L` has `S^(2l)` machines with time `S^l`
/// and there are `n = S^(3L)` jobs.
pub fn lower_bound_instance_with_levels(alpha: f64, levels: usize, d_max: usize) -> Result<LowerBoundInstance> {
    if !(alpha.is_finite() && alpha >= 1.0) || levels == 0 {
        return arg(format!("need alpha >= 1 and L >= 1, got alpha={alpha}, L={levels}"));
    }
    let base = lb_base(alpha, levels);
    check_cap("lower-bound instance machines", lb_dim(base, levels), d_max as f64)?;
    let n = (base as f64).powi(3 * levels as i32);
    if n > 9.0e15 {
        return Err(Error::SizeCap {
            what: "lower-bound instance jobs".into(),
            requested: n,
            limit: 9.0e15,
        });
    }
    let mut p = Vec::new();
    let mut classes = Vec::new();
    for l in 0..=levels {
        let count = base.pow(2 * l as u32) as usize;
        p.extend(std::iter::repeat_n((base as f64).powi(l as i32), count));
        classes.extend(std::iter::repeat_n(l, count));
    }
    let d = p.len();
    let instance = MlijInstance::new(p, n as u64)?;
    let s = base as f64;
    let mut weights = Vec::new();
    for l in 0..levels {
        let mut w = Vec::with_capacity(d);
        for i in 0..l {
            let count = base.pow(2 * i as u32) as usize;
            w.extend(std::iter::repeat_n(s.powi(-2 * i as i32), count));
        }
        w.resize(d, s.powi(-2 * l as i32));
        weights.push(WeightVector::new(w)?);
    }
    Ok(LowerBoundInstance {
        alpha,
        levels,
        base,
        instance,
        classes,
        weights,
    })
}

/// Numerical check of the lower-bound argument on one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundReport {
    /// `||x̂(l)||_(w(l))` for each `l`.
    pub claim1_norms: Vec<f64>,
    /// `2 n (l + 1) S^-l`.
    pub claim1_bounds: Vec<f64>,
    pub claim1_ok: bool,
    /// Whether the tighter `2 n l S^-l` also holds for every `l`.
    pub claim1_without_offset_ok: bool,
    pub claim2_checked: usize,
    pub claim2_ok: bool,
    pub claim3_checked: usize,
    pub claim3_ok: bool,
    /// Whether the stronger `n S^(1-l) / 2` bound also held on the samples.
    pub claim3_half_ok: bool,
    /// For each probe schedule, the number of `l` it `α`-approximates.
    pub approximated_counts: Vec<usize>,
    pub separation_ok: bool,
}

/// Distributes `jobs` over `machines` with counts proportional to `1/p_i`
/// (largest remainders get the leftovers).
fn balanced_fill(inst: &MlijInstance, machines: &[usize], jobs: u64, counts: &mut [u64]) {
    if machines.is_empty() || jobs == 0 {
        return;
    }
    let inv: f64 = machines.iter().map(|&i| 1.0 / inst.p[i]).sum();
    let mut fracs = Vec::new();
    let mut used = 0u64;
    for &i in machines {
        let c = jobs as f64 * (1.0 / inst.p[i]) / inv;
        let f = c.floor() as u64;
        counts[i] += f;
        used += f;
        fracs.push((i, c - c.floor()));
    }
    fracs.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let left = jobs.saturating_sub(used) as usize;
    for &(i, _) in fracs.iter().cycle().take(left) {
        counts[i] += 1;
    }
}

fn machines_in(lb: &LowerBoundInstance, pred: impl Fn(usize) -> bool) -> Vec<usize> {
    (0..lb.classes.len()).filter(|&i| pred(lb.classes[i])).collect()
}

/// Rounded class-prefix vertex: equal load on classes `0..=l`.
pub fn class_prefix_schedule(lb: &LowerBoundInstance, l: usize) -> Result<Schedule> {
    let m = machines_in(lb, |c| c <= l).len();
    round_good_vertex(&lb.instance, m)
}

/// Verifies the per-class norm bound, both concentration bounds on probe
/// schedules and that no probe `α`-approximates two of the weights. The probe
/// schedules are the class-prefix vertices, schedules placing just over `n/4`
/// jobs above or below each class, and any `extra` schedules supplied.
pub fn verify_lower_bound_claims(lb: &LowerBoundInstance, extra: &[Schedule]) -> Result<LowerBoundReport> {
    let inst = &lb.instance;
    let n = inst.n as f64;
    let s = lb.base as f64;
    let big_l = lb.levels;

    let prefix: Vec<Schedule> = (0..=big_l)
        .map(|l| class_prefix_schedule(lb, l))
        .collect::<Result<_>>()?;
    let mut claim1_norms = Vec::new();
    let mut claim1_bounds = Vec::new();
    let mut claim1_ok = true;
    let mut claim1_without_offset_ok = true;
    for l in 0..big_l {
        let v = ordered_norm(&load_vector(inst, &prefix[l])?, &lb.weights[l])?;
        let bound = 2.0 * n * (l as f64 + 1.0) * s.powi(-(l as i32));
        claim1_ok &= v <= bound * (1.0 + REL_TOL);
        claim1_without_offset_ok &= v <= 2.0 * n * l as f64 * s.powi(-(l as i32)) * (1.0 + REL_TOL);
        claim1_norms.push(v);
        claim1_bounds.push(bound);
    }

    let quarter = inst.n / 4 + 1;
    let mut probes: Vec<Schedule> = prefix.clone();
    for l in 0..big_l {
        let rest = machines_in(lb, |c| c <= l);
        let above = machines_in(lb, |c| c > l);
        let mut counts = vec![0u64; inst.dim()];
        balanced_fill(inst, &above, quarter, &mut counts);
        balanced_fill(inst, &rest, inst.n - quarter, &mut counts);
        probes.push(Schedule { counts });
        if l > 0 {
            let below = machines_in(lb, |c| c < l);
            let rest = machines_in(lb, |c| c >= l);
            let mut counts = vec![0u64; inst.dim()];
            balanced_fill(inst, &below, quarter, &mut counts);
            balanced_fill(inst, &rest, inst.n - quarter, &mut counts);
            probes.push(Schedule { counts });
        }
    }
    probes.extend(extra.iter().cloned());

    let (mut c2n, mut c2ok, mut c3n, mut c3ok, mut c3half) = (0, true, 0, true, true);
    let mut approximated_counts = Vec::new();
    for probe in &probes {
        let x = load_vector(inst, probe)?;
        let mut approx = 0;
        for l in 0..big_l {
            let v = ordered_norm(&x, &lb.weights[l])?;
            let scale = n * s.powi(1 - l as i32);
            let jobs_above: u64 = (0..inst.dim()).filter(|&i| lb.classes[i] > l).map(|i| probe.counts[i]).sum();
            let jobs_below: u64 = (0..inst.dim()).filter(|&i| lb.classes[i] < l).map(|i| probe.counts[i]).sum();
            if jobs_above as f64 > n / 4.0 {
                c2n += 1;
                c2ok &= v >= scale / 4.0 * (1.0 - REL_TOL);
            }
            if jobs_below as f64 > n / 4.0 {
                c3n += 1;
                c3ok &= v >= scale / 8.0 * (1.0 - REL_TOL);
                c3half &= v >= scale / 2.0 * (1.0 - REL_TOL);
            }
            if v <= lb.alpha * claim1_norms[l] * (1.0 + REL_TOL) {
                approx += 1;
            }
        }
        approximated_counts.push(approx);
    }
    let separation_ok = approximated_counts.iter().all(|c| *c <= 1);
    Ok(LowerBoundReport {
        claim1_norms,
        claim1_bounds,
        claim1_ok,
        claim1_without_offset_ok,
        claim2_checked: c2n,
        claim2_ok: c2ok,
        claim3_checked: c3n,
        claim3_ok: c3ok,
        claim3_half_ok: c3half,
        approximated_counts,
        separation_ok,
    })
}
