//! Finite domains, portfolios, ratio certificates and generic constructions.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{arg, check_cap, check_dim, Result};
use crate::norms::{
    majorizes_scaled, ordered_norm, ordered_norm_sorted, sorted_desc, top_k_profile, CostVector,
    WeightVector,
};
use crate::solvercore::{konig_vertex_cover, max_bipartite_matching};
use crate::weights::sample_weights;

/// A nonempty finite set of cost vectors of a common dimension. Serialised as
/// a JSON array of arrays; labels are not serialised.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<CostVector>", into = "Vec<CostVector>")]
pub struct FiniteDomain {
    pub vectors: Vec<CostVector>,
    pub labels: Vec<String>,
}

impl FiniteDomain {
    pub fn new(vectors: Vec<CostVector>) -> Result<Self> {
        let labels = (0..vectors.len()).map(|i| i.to_string()).collect();
        Self::with_labels(vectors, labels)
    }

    pub fn with_labels(vectors: Vec<CostVector>, labels: Vec<String>) -> Result<Self> {
        let Some(first) = vectors.first() else {
            return arg("domain must be nonempty");
        };
        let d = first.len();
        if d == 0 {
            return arg("domain vectors must have positive dimension");
        }
        for v in &vectors {
            check_dim(d, v.len())?;
        }
        check_dim(vectors.len(), labels.len())?;
        Ok(FiniteDomain { vectors, labels })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(rows.into_iter().map(CostVector::new).collect::<Result<_>>()?)
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].len()
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// `x = (√d, 0, ..., 0)`, `y = (1, ..., 1)` and
/// `z = d^(1/3) (1, 1/√2, ..., 1/√d)`.
pub fn example1_domain(d: usize) -> Result<FiniteDomain> {
    if d == 0 {
        return arg("dimension must be positive");
    }
    let mut x = vec![0.0; d];
    x[0] = (d as f64).sqrt();
    let y = vec![1.0; d];
    let c = (d as f64).cbrt();
    let z = (1..=d).map(|i| c / (i as f64).sqrt()).collect();
    FiniteDomain::with_labels(
        vec![CostVector::new(x)?, CostVector::new(y)?, CostVector::new(z)?],
        vec!["x".into(), "y".into(), "z".into()],
    )
}

/// `(1, 1/√2, ..., 1/√d)`.
pub fn inverse_sqrt_weight(d: usize) -> Result<WeightVector> {
    WeightVector::new((1..=d).map(|i| 1.0 / (i as f64).sqrt()).collect())
}

impl TryFrom<Vec<CostVector>> for FiniteDomain {
    type Error = crate::Error;
    fn try_from(v: Vec<CostVector>) -> Result<Self> {
        FiniteDomain::new(v)
    }
}

impl From<FiniteDomain> for Vec<CostVector> {
    fn from(d: FiniteDomain) -> Self {
        d.vectors
    }
}

/// A claimed approximation factor. Some guarantees only hold up to an
/// unspecified constant and are kept as text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Alpha {
    Numeric(f64),
    Symbolic(String),
}

impl Alpha {
    pub fn numeric(&self) -> Option<f64> {
        match self {
            Alpha::Numeric(a) => Some(*a),
            Alpha::Symbolic(_) => None,
        }
    }

    fn describe(&self) -> String {
        match self {
            Alpha::Numeric(a) => format!("{a}"),
            Alpha::Symbolic(s) => s.clone(),
        }
    }
}

/// A set of cost vectors with a claimed factor and a provenance tag per vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Portfolio {
    pub vectors: Vec<CostVector>,
    pub provenance: Vec<String>,
    pub alpha: Alpha,
}

impl Portfolio {
    pub fn new(vectors: Vec<CostVector>, provenance: Vec<String>, alpha: Alpha) -> Result<Self> {
        if vectors.is_empty() {
            return arg("portfolio must be nonempty");
        }
        check_dim(vectors.len(), provenance.len())?;
        let d = vectors[0].len();
        for v in &vectors {
            check_dim(d, v.len())?;
        }
        Ok(Portfolio {
            vectors,
            provenance,
            alpha,
        })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].len()
    }
}

/// Families of norms against which a portfolio can be checked.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum NormFamily {
    /// Every top-k norm; exact for all ordered norms by majorization.
    AllTopK,
    /// An explicit list of ordered norms.
    OrderedSet(Vec<WeightVector>),
    /// Random ordered norms from a fixed seed, plus every top-k norm.
    OrderedSampled { count: usize, seed: u64 },
}

impl NormFamily {
    /// The weight vectors this family evaluates in dimension `d`.
    pub fn weights(&self, d: usize) -> Result<Vec<WeightVector>> {
        match self {
            NormFamily::AllTopK => Ok(WeightVector::all_top_k(d)),
            NormFamily::OrderedSet(ws) => {
                for w in ws {
                    check_dim(d, w.len())?;
                }
                Ok(ws.clone())
            }
            NormFamily::OrderedSampled { count, seed } => {
                let mut ws = WeightVector::all_top_k(d);
                ws.extend(sample_weights(d, *count, *seed));
                Ok(ws)
            }
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, NormFamily::OrderedSampled { .. })
    }
}

/// `num / den` with `0/0 = 1` and `c/0 = ∞`.
pub fn safe_ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else if num > 0.0 {
        f64::INFINITY
    } else {
        1.0
    }
}

/// Index and value of the domain vector minimising `||.||_(w)`; ties go to
/// the lowest index.
pub fn brute_force_min_norm(domain: &[CostVector], w: &WeightVector) -> Result<(usize, f64)> {
    if domain.is_empty() {
        return arg("domain must be nonempty");
    }
    let mut best = (0, f64::INFINITY);
    for (i, x) in domain.iter().enumerate() {
        let v = ordered_norm(x, w)?;
        if v < best.1 {
            best = (i, v);
        }
    }
    Ok(best)
}

/// Result of checking a portfolio against all top-k norms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopKCertificate {
    /// `max_k min_X topk / min_D topk`.
    pub ratio: f64,
    /// `k` attaining the ratio (1-based).
    pub worst_k: usize,
    pub per_k: Vec<f64>,
}

/// Minimum top-k norm over `vectors` for every `k`.
pub fn min_top_k_profile(vectors: &[CostVector]) -> Result<Vec<f64>> {
    let Some(first) = vectors.first() else {
        return arg("vector set must be nonempty");
    };
    let d = first.len();
    let mut best = vec![f64::INFINITY; d];
    for v in vectors {
        check_dim(d, v.len())?;
        for (b, p) in best.iter_mut().zip(top_k_profile(v)) {
            *b = b.min(p);
        }
    }
    Ok(best)
}

/// Certifies the simultaneous top-k ratio, which bounds the ratio for every
/// ordered norm.
pub fn certify_topk_ratio(portfolio: &[CostVector], domain: &[CostVector]) -> Result<TopKCertificate> {
    let px = min_top_k_profile(portfolio)?;
    let pd = min_top_k_profile(domain)?;
    check_dim(pd.len(), px.len())?;
    Ok(certificate_from_profiles(&px, &pd))
}

/// Certificate from precomputed per-k minima.
pub fn certificate_from_profiles(portfolio_min: &[f64], domain_min: &[f64]) -> TopKCertificate {
    let per_k: Vec<f64> = portfolio_min
        .iter()
        .zip(domain_min)
        .map(|(a, b)| safe_ratio(*a, *b))
        .collect();
    let (worst, ratio) = per_k
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, r)| if *r > acc.1 { (i, *r) } else { acc });
    TopKCertificate {
        ratio,
        worst_k: worst + 1,
        per_k,
    }
}

/// Largest ratio over a family of ordered norms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderedRatioEstimate {
    pub ratio: f64,
    pub worst_weight: Option<WeightVector>,
    pub evaluated: usize,
    /// `false` when the family is sampled and the value is only a lower bound
    /// on the true worst case.
    pub exact: bool,
}

/// Minimum ordered norm over `vectors` for each weight.
pub fn min_ordered_norms(vectors: &[CostVector], weights: &[WeightVector]) -> Result<Vec<f64>> {
    let sorted: Vec<Vec<f64>> = vectors.iter().map(|v| sorted_desc(v)).collect();
    let mut out = Vec::with_capacity(weights.len());
    for w in weights {
        let mut best = f64::INFINITY;
        for s in &sorted {
            check_dim(w.len(), s.len())?;
            best = best.min(ordered_norm_sorted(s, w));
        }
        out.push(best);
    }
    Ok(out)
}

/// Ratio estimate from precomputed minima over the domain.
pub fn ordered_ratio_against(
    portfolio: &[CostVector],
    weights: &[WeightVector],
    domain_min: &[f64],
    exact: bool,
) -> Result<OrderedRatioEstimate> {
    check_dim(weights.len(), domain_min.len())?;
    let port_min = min_ordered_norms(portfolio, weights)?;
    let mut est = OrderedRatioEstimate {
        ratio: f64::NEG_INFINITY,
        worst_weight: None,
        evaluated: weights.len(),
        exact,
    };
    for ((w, a), b) in weights.iter().zip(&port_min).zip(domain_min) {
        let r = safe_ratio(*a, *b);
        if r > est.ratio {
            est.ratio = r;
            est.worst_weight = Some(w.clone());
        }
    }
    Ok(est)
}

/// Worst ratio of `portfolio` against `domain` over a norm family.
pub fn estimate_ordered_ratio(
    portfolio: &[CostVector],
    domain: &[CostVector],
    family: &NormFamily,
) -> Result<OrderedRatioEstimate> {
    let Some(first) = domain.first() else {
        return arg("domain must be nonempty");
    };
    let weights = family.weights(first.len())?;
    let domain_min = min_ordered_norms(domain, &weights)?;
    ordered_ratio_against(portfolio, &weights, &domain_min, family.is_exact())
}

/// If `first` is an `α1`-portfolio for a domain and `second` is an
/// `α2`-portfolio for `first`, then `second` is an `α1 α2`-portfolio for the
/// domain.
pub fn compose_sequential(first: &Portfolio, second: &Portfolio) -> Result<Portfolio> {
    check_dim(first.dim(), second.dim())?;
    let alpha = match (&first.alpha, &second.alpha) {
        (Alpha::Numeric(a), Alpha::Numeric(b)) => Alpha::Numeric(a * b),
        (a, b) => Alpha::Symbolic(format!("({}) * ({})", a.describe(), b.describe())),
    };
    let provenance = second
        .provenance
        .iter()
        .map(|p| format!("composed:{p}"))
        .collect();
    Portfolio::new(second.vectors.clone(), provenance, alpha)
}

/// Union of portfolios for the parts of a partition of a domain. The factor is
/// the largest factor among the parts. Exact duplicates are dropped.
pub fn union_portfolios(parts: &[Portfolio]) -> Result<Portfolio> {
    let Some(first) = parts.first() else {
        return arg("need at least one portfolio");
    };
    let d = first.dim();
    let mut vectors: Vec<CostVector> = Vec::new();
    let mut provenance = Vec::new();
    let mut numeric = Some(f64::NEG_INFINITY);
    let mut symbolic = Vec::new();
    for p in parts {
        check_dim(d, p.dim())?;
        match &p.alpha {
            Alpha::Numeric(a) => numeric = numeric.map(|m| m.max(*a)),
            Alpha::Symbolic(s) => {
                numeric = None;
                symbolic.push(s.clone());
            }
        }
        for (v, tag) in p.vectors.iter().zip(&p.provenance) {
            if !vectors.contains(v) {
                vectors.push(v.clone());
                provenance.push(tag.clone());
            }
        }
    }
    let alpha = match numeric {
        Some(a) => Alpha::Numeric(a),
        None => Alpha::Symbolic(format!("max({})", symbolic.join(", "))),
    };
    Portfolio::new(vectors, provenance, alpha)
}

/// Output of [`bucket_portfolio`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BucketPortfolio {
    pub portfolio: Portfolio,
    /// Smallest L∞ norm over the domain.
    pub v_star: f64,
    /// Domain indices with `||x||∞ <= d v*`.
    pub restricted: Vec<usize>,
    pub buckets: Vec<Bucket>,
    /// Index of the L∞ minimiser, always kept.
    pub linf_minimizer: usize,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bucket {
    pub key: Vec<i64>,
    pub members: Vec<usize>,
    /// Representatives chosen for the bucket; more than one only when a member
    /// fails mutual `(1+ε)`-majorization with the first.
    pub representatives: Vec<usize>,
}

/// Checkpoints `c_i = floor((1+ε/3)^i)` for `i = 0..=T`, capped at `d`.
fn bucket_checkpoints(d: usize, q: f64) -> Vec<usize> {
    let t = ((d as f64).ln() / q.ln()).ceil().max(0.0) as i32;
    let mut cs: Vec<usize> = (0..=t)
        .map(|i| (q.powi(i).floor() as usize).clamp(1, d))
        .collect();
    cs.push(d);
    cs.dedup();
    cs
}

/// A `(1+ε)`-portfolio for a finite domain.
///
/// Vectors with `||x||∞ <= d v*` are grouped by the rounded logarithms of
/// their top-`c_i` norms relative to `v*`, and each group keeps its
/// lexicographically smallest sorted vector.
pub fn bucket_portfolio(domain: &FiniteDomain, eps: f64) -> Result<BucketPortfolio> {
    if !(eps > 0.0 && eps.is_finite()) {
        return arg(format!("epsilon must be positive, got {eps}"));
    }
    let d = domain.dim();
    let linf: Vec<f64> = domain
        .vectors
        .iter()
        .map(|v| v.iter().copied().fold(0.0, f64::max))
        .collect();
    let (linf_minimizer, v_star) = linf
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, v)| if *v < acc.1 { (i, *v) } else { acc });
    let alpha = Alpha::Numeric(1.0 + eps);
    let mut notes = Vec::new();

    if v_star == 0.0 {
        notes.push("v* = 0: the zero vector dominates the domain".into());
        let portfolio = Portfolio::new(
            vec![domain.vectors[linf_minimizer].clone()],
            vec![format!("linf-minimizer:{}", domain.labels[linf_minimizer])],
            alpha,
        )?;
        let restricted: Vec<usize> = (0..domain.len()).filter(|&i| linf[i] == 0.0).collect();
        return Ok(BucketPortfolio {
            portfolio,
            v_star,
            buckets: vec![Bucket {
                key: Vec::new(),
                members: restricted.clone(),
                representatives: vec![linf_minimizer],
            }],
            restricted,
            linf_minimizer,
            notes,
        });
    }

    let q = 1.0 + eps / 3.0;
    let limit = d as f64 * v_star * (1.0 + crate::norms::REL_TOL);
    let restricted: Vec<usize> = (0..domain.len()).filter(|&i| linf[i] <= limit).collect();
    let checkpoints = bucket_checkpoints(d, q);
    let sorted: Vec<Vec<f64>> = domain.vectors.iter().map(|v| sorted_desc(v)).collect();

    let mut groups: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
    for &i in &restricted {
        let profile = top_k_profile(&domain.vectors[i]);
        let key = checkpoints
            .iter()
            .map(|&c| ((profile[c - 1] / v_star).ln() / q.ln()).floor() as i64)
            .collect();
        groups.entry(key).or_default().push(i);
    }

    let lex = |a: usize, b: usize| -> Ordering {
        for (x, y) in sorted[a].iter().zip(&sorted[b]) {
            match x.total_cmp(y) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        a.cmp(&b)
    };

    let mut buckets = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    for (key, mut members) in groups {
        members.sort_by(|&a, &b| lex(a, b));
        let mut reps: Vec<usize> = Vec::new();
        for &m in &members {
            let x = &domain.vectors[m];
            let mut covered = false;
            for &r in &reps {
                let y = &domain.vectors[r];
                if majorizes_scaled(y, x, 1.0 + eps)? && majorizes_scaled(x, y, 1.0 + eps)? {
                    covered = true;
                    break;
                }
            }
            if !covered {
                reps.push(m);
            }
        }
        if reps.len() > 1 {
            notes.push(format!("bucket {key:?} split into {} representatives", reps.len()));
        }
        chosen.extend(&reps);
        members.sort_unstable();
        buckets.push(Bucket {
            key,
            members,
            representatives: reps,
        });
    }
    if !chosen.contains(&linf_minimizer) {
        chosen.push(linf_minimizer);
    }
    chosen.sort_unstable();
    if restricted.len() == 1 {
        notes.push("restricted domain holds only the L∞ minimiser".into());
    }
    let provenance = chosen
        .iter()
        .map(|&i| {
            if i == linf_minimizer {
                format!("linf-minimizer:{}", domain.labels[i])
            } else {
                format!("bucket-rep:{}", domain.labels[i])
            }
        })
        .collect();
    let vectors = chosen.iter().map(|&i| domain.vectors[i].clone()).collect();
    Ok(BucketPortfolio {
        portfolio: Portfolio::new(vectors, provenance, alpha)?,
        v_star,
        restricted,
        buckets,
        linf_minimizer,
        notes,
    })
}

/// Largest `L` for which the maximum antichain is computed exactly.
pub const ANTICHAIN_EXACT_MAX_L: usize = 12;
/// Largest dimension `1 + S + ... + S^L` accepted.
pub const ANTICHAIN_DIM_CAP: f64 = 4.0e6;

/// Hard instance showing that portfolios of size `2^Ω(L)` can be necessary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AntichainInstance {
    pub levels: usize,
    pub base: usize,
    pub dim: usize,
    /// Sequences `a` with `a_0 = 0` and `a_i - a_{i-1} ∈ {0, 1}` forming an
    /// antichain under the componentwise order.
    pub sequences: Vec<Vec<u32>>,
    pub vectors: Vec<CostVector>,
    pub weights: Vec<WeightVector>,
    /// Whether the antichain is known to be maximum.
    pub exact: bool,
}

fn all_sequences(levels: usize) -> Vec<Vec<u32>> {
    (0..1usize << levels)
        .map(|bits| {
            let mut a = vec![0u32; levels + 1];
            for i in 1..=levels {
                a[i] = a[i - 1] + ((bits >> (levels - i)) & 1) as u32;
            }
            a
        })
        .collect()
}

fn dominated(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Maximum antichain among monotone 0/1-step sequences, by Dilworth's theorem
/// (minimum chain cover from a maximum matching). Above
/// [`ANTICHAIN_EXACT_MAX_L`] the largest level `sum a_i = const` is used.
pub fn max_sequence_antichain(levels: usize) -> (Vec<Vec<u32>>, bool) {
    let seqs = all_sequences(levels);
    if levels > ANTICHAIN_EXACT_MAX_L {
        let mut by_rank: BTreeMap<u32, Vec<Vec<u32>>> = BTreeMap::new();
        for s in seqs {
            by_rank.entry(s.iter().sum()).or_default().push(s);
        }
        let best = by_rank
            .into_values()
            .max_by(|a, b| a.len().cmp(&b.len()).then(Ordering::Greater))
            .unwrap();
        return (best, false);
    }
    let n = seqs.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && dominated(&seqs[i], &seqs[j]) {
                edges.push((i, j));
            }
        }
    }
    let m = max_bipartite_matching(n, n, &edges).expect("edges in range");
    let (cl, cr) = konig_vertex_cover(n, n, &edges, &m).expect("edges in range");
    let anti = (0..n)
        .filter(|&v| !cl[v] && !cr[v])
        .map(|v| seqs[v].clone())
        .collect();
    (anti, true)
}

/// Cost vector and weights for sequence `a`: block `i` has `S^i` coordinates,
/// with cost `S^-a_i` and weight `S^(a_i - i)`.
pub fn antichain_pair(a: &[u32], base: usize) -> (Vec<f64>, Vec<f64>) {
    let s = base as f64;
    let mut x = Vec::new();
    let mut w = Vec::new();
    for (i, &ai) in a.iter().enumerate() {
        let size = base.pow(i as u32);
        x.extend(std::iter::repeat_n(s.powi(-(ai as i32)), size));
        w.extend(std::iter::repeat_n(s.powi(ai as i32 - i as i32), size));
    }
    (x, w)
}

/// Builds the antichain hard instance for `levels = L >= 1` and `base = S >= 2`.
pub fn antichain_hard_instance(levels: usize, base: usize) -> Result<AntichainInstance> {
    if levels == 0 || base < 2 {
        return arg(format!("need L >= 1 and S >= 2, got L={levels}, S={base}"));
    }
    let dim_f: f64 = (0..=levels).map(|i| (base as f64).powi(i as i32)).sum();
    check_cap("antichain dimension", dim_f, ANTICHAIN_DIM_CAP)?;
    let (sequences, exact) = max_sequence_antichain(levels);
    let mut vectors = Vec::new();
    let mut weights = Vec::new();
    for a in &sequences {
        let (x, w) = antichain_pair(a, base);
        vectors.push(CostVector::new(x)?);
        weights.push(WeightVector::new(w)?);
    }
    Ok(AntichainInstance {
        levels,
        base,
        dim: dim_f as usize,
        sequences,
        vectors,
        weights,
        exact,
    })
}
