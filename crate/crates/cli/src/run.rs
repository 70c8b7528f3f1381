//! Command implementations shared by the binary and the tests.

use std::collections::BTreeMap;
use std::time::Instant;

use equinorm::clustering::{
    distance_vector, exhaustive_k_facility_topk, iterative_clustering, ufl_brute_force_topk, ufl_portfolio,
    ClusteringMode, Metric,
};
use equinorm::covering::{self, lp_min_ordered_norm, CoveringOptions, CoveringPolyhedron};
use equinorm::mlij::{self, all_rounded_vertices, brute_force_schedules, schedule_count};
use equinorm::norms::{ordered_norm, top_k_profile};
use equinorm::portfolio::{
    bucket_portfolio, certificate_from_profiles, min_ordered_norms, min_top_k_profile, safe_ratio, Alpha,
    Portfolio,
};
use equinorm::satisfaction::{
    completion_times_satisfier, iterative_ordering, iterative_ordering_exhaustive, satisfaction_times,
};
use equinorm::weights::sample_weights;
use equinorm::{CostVector, Error, Result, WeightVector};
use serde_json::{json, Value};

use crate::instance::{AnyProblem, Instance};
use crate::report::{Certificates, InstanceDescriptor, PortfolioOut, RatioCert, RunReport, Timings, TradeoffRow};

/// Settings shared by all commands.
#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
    pub max_brute: f64,
    pub timings: bool,
    pub jobs: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: 0,
            samples: 200,
            tol: 1e-9,
            max_brute: 1e7,
            timings: false,
            jobs: 1,
        }
    }
}

/// Method selection for `solve`; unset fields take per-instance defaults.
#[derive(Debug, Clone, Default)]
pub struct SolveArgs {
    pub method: Option<String>,
    pub alpha: Option<f64>,
    pub eps: Option<f64>,
    pub k: Option<usize>,
    pub mode: Option<String>,
    pub oracle: Option<String>,
    pub no_sparsify: bool,
}

/// Relative slack before a certificate counts as violated.
pub const VIOLATION_SLACK: f64 = 1e-6;

struct Solved {
    method: String,
    portfolio: Portfolio,
    parameters: BTreeMap<String, Value>,
    details: Value,
    reference: Context,
}

/// What a portfolio is compared against.
enum Context {
    Plain,
    KClustering { k: usize },
    Ufl { sets: Vec<Vec<usize>> },
}

fn params(pairs: &[(&str, Value)]) -> BTreeMap<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn solve_inner(inst: &Instance, a: &SolveArgs, opts: &Options) -> Result<Solved> {
    match inst {
        Instance::Mlij { .. } => {
            let m = inst.mlij()?;
            let method = a.method.clone().unwrap_or_else(|| "portfolio".into());
            let (res, parameters) = match method.as_str() {
                "portfolio" => {
                    let alpha = a.alpha.unwrap_or(8.0);
                    (mlij::build_portfolio(&m, alpha)?, params(&[("alpha", json!(alpha))]))
                }
                "topk2" => (mlij::topk_two_portfolio(&m)?, BTreeMap::new()),
                "vertices" => (all_rounded_vertices(&m)?, BTreeMap::new()),
                other => return Err(unknown_method(other, "portfolio, topk2, vertices")),
            };
            let details = json!({
                "schedules": res.input_order_schedules(&m),
                "indices": res.indices,
                "largest_good": res.largest_good,
                "size_bound": a.alpha.map(|al| mlij::portfolio_size_bound(res.largest_good, al)),
            });
            Ok(Solved {
                method,
                portfolio: res.portfolio,
                parameters,
                details,
                reference: Context::Plain,
            })
        }
        Instance::Domain { .. } => {
            let dom = inst.domain()?;
            let method = a.method.clone().unwrap_or_else(|| "bucket".into());
            match method.as_str() {
                "bucket" => {
                    let eps = a.eps.unwrap_or(0.5);
                    let b = bucket_portfolio(&dom, eps)?;
                    let details = json!({
                        "v_star": b.v_star,
                        "restricted": b.restricted,
                        "buckets": b.buckets,
                        "linf_minimizer": b.linf_minimizer,
                        "notes": b.notes,
                    });
                    Ok(Solved {
                        method,
                        portfolio: b.portfolio,
                        parameters: params(&[("eps", json!(eps))]),
                        details,
                        reference: Context::Plain,
                    })
                }
                "identity" => Ok(Solved {
                    method,
                    portfolio: Portfolio::new(dom.vectors.clone(), dom.labels.clone(), Alpha::Numeric(1.0))?,
                    parameters: BTreeMap::new(),
                    details: Value::Null,
                    reference: Context::Plain,
                }),
                other => Err(unknown_method(other, "bucket, identity")),
            }
        }
        Instance::Covering { .. } => {
            let poly = inst.covering()?;
            let method = a.method.clone().unwrap_or_else(|| "portfolio".into());
            if method != "portfolio" {
                return Err(unknown_method(&method, "portfolio"));
            }
            let eps = a.eps.unwrap_or(0.5);
            let mut copts = CoveringOptions {
                sparsify: !a.no_sparsify,
                ..CoveringOptions::default()
            };
            copts.arrangement.seed = opts.seed;
            let c = covering::build_portfolio(&poly, eps, copts)?;
            let details = json!({
                "reduced_orders": c.orders.orders,
                "orders_exact": c.orders.exact,
                "vertices_per_order": c.vertices_per_order,
                "groups": c.groups.groups,
                "distinct_per_row": c.distinct_per_row,
                "grid_bound": c.grid_bound,
                "size_bound": c.size_bound,
            });
            Ok(Solved {
                method,
                portfolio: c.portfolio,
                parameters: params(&[("eps", json!(eps)), ("sparsify", json!(copts.sparsify))]),
                details,
                reference: Context::Plain,
            })
        }
        Instance::CompletionTimes { .. } | Instance::Setcover { .. } | Instance::Vertexcover { .. } | Instance::Tsp { .. } => {
            let problem = inst.problem()?;
            let p = problem.as_dyn();
            let method = a.method.clone().unwrap_or_else(|| "ordering".into());
            if method != "ordering" {
                return Err(unknown_method(&method, "ordering"));
            }
            let oracle = a.oracle.clone().unwrap_or_else(|| "exhaustive".into());
            let res = match (oracle.as_str(), &problem) {
                ("exhaustive", _) => iterative_ordering_exhaustive(p, opts.max_brute)?,
                ("lp", AnyProblem::CompletionTimes(ct)) => {
                    iterative_ordering(p, 2.0, &mut |b| completion_times_satisfier(ct, b))?
                }
                ("lp", _) => {
                    return Err(Error::Argument("the lp oracle needs a completion_times instance".into()))
                }
                (other, _) => return Err(unknown_method(other, "exhaustive, lp")),
            };
            let times = satisfaction_times(p, &res.satisfier)?;
            let labels: Vec<String> = res.satisfier.order.iter().map(|&o| p.object_label(o)).collect();
            let details = json!({
                "order": res.satisfier.order,
                "labels": labels,
                "budgets": res.budgets,
                "pieces": res.pieces.iter().map(|s| s.order.clone()).collect::<Vec<_>>(),
                "theta": res.theta,
                "scale": res.scale,
                "gamma": p.gamma(),
            });
            Ok(Solved {
                method,
                portfolio: Portfolio::new(
                    vec![CostVector::new(times)?],
                    vec![format!("iterative-ordering:{oracle}")],
                    Alpha::Numeric(res.guarantee),
                )?,
                parameters: params(&[("oracle", json!(oracle))]),
                details,
                reference: Context::Plain,
            })
        }
        Instance::Metric { .. } => {
            let metric = inst.metric()?;
            let method = a.method.clone().unwrap_or_else(|| "clustering".into());
            match method.as_str() {
                "clustering" => {
                    let k = a.k.unwrap_or(1);
                    let eps = a.eps.unwrap_or(1.0);
                    let mode = match a.mode.as_deref().unwrap_or("greedy3") {
                        "exact" => ClusteringMode::Exact,
                        "greedy3" => ClusteringMode::Greedy3,
                        other => return Err(unknown_method(other, "exact, greedy3")),
                    };
                    let r = iterative_clustering(&metric, k, eps, mode)?;
                    let x = distance_vector(&metric, &r.facilities)?;
                    let details = json!({
                        "facilities": r.facilities,
                        "inner_eps": r.inner_eps,
                        "d": r.d,
                        "radii": r.radii,
                        "opened_all": r.opened_all,
                        "facility_bound": r.facility_bound,
                    });
                    Ok(Solved {
                        method,
                        portfolio: Portfolio::new(
                            vec![x],
                            vec![format!("iterative-clustering:{}", mode_name(mode))],
                            Alpha::Numeric(r.guarantee),
                        )?,
                        parameters: params(&[("k", json!(k)), ("eps", json!(eps)), ("mode", json!(mode_name(mode)))]),
                        details,
                        reference: Context::KClustering { k },
                    })
                }
                "ufl" => {
                    let u = ufl_portfolio(&metric)?;
                    let details = json!({"ks": u.ks, "facility_sets": u.facility_sets});
                    let provenance = u.ks.iter().map(|k| format!("ufl:k={k}")).collect();
                    Ok(Solved {
                        method,
                        portfolio: Portfolio::new(
                            u.distance_vectors.clone(),
                            provenance,
                            Alpha::Symbolic("O(log n)".into()),
                        )?,
                        parameters: BTreeMap::new(),
                        details,
                        reference: Context::Ufl { sets: u.facility_sets },
                    })
                }
                other => Err(unknown_method(other, "clustering, ufl")),
            }
        }
    }
}

fn mode_name(m: ClusteringMode) -> &'static str {
    match m {
        ClusteringMode::Exact => "exact",
        ClusteringMode::Greedy3 => "greedy3",
    }
}

fn unknown_method(m: &str, expected: &str) -> Error {
    Error::Argument(format!("unknown method '{m}'; expected one of {expected}"))
}

/// Per-k and per-weight minima over the reference set of an instance.
struct Reference {
    name: String,
    exact: bool,
    topk: Vec<f64>,
    ordered: Vec<f64>,
}

fn finite_reference(name: &str, vectors: &[CostVector], weights: &[WeightVector], exact: bool) -> Result<Reference> {
    Ok(Reference {
        name: name.into(),
        exact,
        topk: min_top_k_profile(vectors)?,
        ordered: min_ordered_norms(vectors, weights)?,
    })
}

fn reference(
    inst: &Instance,
    ctx: &Context,
    weights: &[WeightVector],
    opts: &Options,
    warnings: &mut Vec<String>,
) -> Result<Option<Reference>> {
    match inst {
        Instance::Domain { .. } => Ok(Some(finite_reference("domain", &inst.domain()?.vectors, weights, true)?)),
        Instance::Mlij { .. } => {
            let m = inst.mlij()?;
            if schedule_count(&m) <= opts.max_brute {
                let dom = brute_force_schedules(&m, opts.max_brute)?;
                Ok(Some(finite_reference("all schedules", &dom.vectors, weights, true)?))
            } else {
                let lg = mlij::largest_good_index(&mlij::doubling_transform(&m));
                if (lg * m.dim()) as f64 > opts.max_brute {
                    warnings.push(format!(
                        "{:.3e} schedules and {lg} rounded vertices of dimension {} exceed --max-brute; no reference computed",
                        schedule_count(&m),
                        m.dim()
                    ));
                    return Ok(None);
                }
                warnings.push(format!(
                    "{:.3e} schedules exceed --max-brute; ratios are lower bounds against the rounded vertices",
                    schedule_count(&m)
                ));
                let v = all_rounded_vertices(&m)?;
                Ok(Some(finite_reference("rounded vertices", &v.portfolio.vectors, weights, false)?))
            }
        }
        Instance::Covering { .. } => {
            let poly = inst.covering()?;
            lp_reference(&poly, weights).map(Some)
        }
        Instance::CompletionTimes { .. } | Instance::Setcover { .. } | Instance::Vertexcover { .. } | Instance::Tsp { .. } => {
            let problem = inst.problem()?;
            match problem.as_dyn().complete_time_vectors(opts.max_brute) {
                Ok(vs) => {
                    let vs: Vec<CostVector> = vs.into_iter().map(CostVector::new).collect::<Result<_>>()?;
                    Ok(Some(finite_reference("all complete satisfiers", &vs, weights, true)?))
                }
                Err(Error::SizeCap { what, requested, .. }) => {
                    warnings.push(format!("{what} ({requested}) exceed --max-brute; no reference computed"));
                    Ok(None)
                }
                Err(e) => Err(e),
            }
        }
        Instance::Metric { .. } => {
            let metric = inst.metric()?;
            let attempt = match ctx {
                Context::Ufl { .. } => ufl_reference(&metric, weights, opts),
                Context::KClustering { k } => kclustering_reference(&metric, *k, weights),
                Context::Plain => kclustering_reference(&metric, 1, weights),
            };
            match attempt {
                Ok(r) => Ok(Some(r)),
                Err(Error::SizeCap { what, requested, .. }) => {
                    warnings.push(format!("{what} ({requested}) exceed the cap; no reference computed"));
                    Ok(None)
                }
                Err(e) => Err(e),
            }
        }
    }
}

fn lp_reference(poly: &CoveringPolyhedron, weights: &[WeightVector]) -> Result<Reference> {
    let d = poly.dim();
    let topk = (1..=d)
        .map(|k| Ok(lp_min_ordered_norm(poly, &WeightVector::top_k(d, k)?)?.1))
        .collect::<Result<_>>()?;
    let ordered = weights
        .iter()
        .map(|w| Ok(lp_min_ordered_norm(poly, w)?.1))
        .collect::<Result<_>>()?;
    Ok(Reference {
        name: "linear programs".into(),
        exact: true,
        topk,
        ordered,
    })
}

fn kclustering_reference(metric: &Metric, k: usize, weights: &[WeightVector]) -> Result<Reference> {
    let topk = exhaustive_k_facility_topk(metric, k)?;
    let mut ordered = vec![f64::INFINITY; weights.len()];
    let n = metric.allowed().len();
    let k = k.min(n);
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let set: Vec<usize> = idx.iter().map(|&i| metric.allowed()[i]).collect();
        let x = distance_vector(metric, &set)?;
        for (o, w) in ordered.iter_mut().zip(weights) {
            *o = o.min(ordered_norm(&x, w)?);
        }
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
    Ok(Reference {
        name: format!("all {k}-facility sets"),
        exact: true,
        topk,
        ordered,
    })
}

fn ufl_reference(metric: &Metric, weights: &[WeightVector], opts: &Options) -> Result<Reference> {
    let topk = ufl_brute_force_topk(metric, opts.max_brute.min(1e6))?;
    let m = metric.allowed().len();
    let mut ordered = vec![f64::INFINITY; weights.len()];
    for mask in 1u64..(1u64 << m) {
        let set: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| metric.allowed()[i]).collect();
        let x = distance_vector(metric, &set)?;
        for (o, w) in ordered.iter_mut().zip(weights) {
            *o = o.min(set.len() as f64 + ordered_norm(&x, w)?);
        }
    }
    Ok(Reference {
        name: "all facility sets (opening cost 1)".into(),
        exact: true,
        topk,
        ordered,
    })
}

/// Per-k and per-weight minima over the portfolio.
fn portfolio_side(vectors: &[CostVector], ctx: &Context, weights: &[WeightVector]) -> Result<(Vec<f64>, Vec<f64>)> {
    match ctx {
        Context::Ufl { sets } => {
            let d = vectors[0].len();
            let mut topk = vec![f64::INFINITY; d];
            let mut ord = vec![f64::INFINITY; weights.len()];
            for (f, x) in sets.iter().zip(vectors) {
                let open = f.len() as f64;
                for (b, p) in topk.iter_mut().zip(top_k_profile(x)) {
                    *b = b.min(open + p);
                }
                for (o, w) in ord.iter_mut().zip(weights) {
                    *o = o.min(open + ordered_norm(x, w)?);
                }
            }
            Ok((topk, ord))
        }
        _ => Ok((min_top_k_profile(vectors)?, min_ordered_norms(vectors, weights)?)),
    }
}

/// Checks that portfolio vectors are feasible where membership is decidable.
fn feasibility_warnings(inst: &Instance, vectors: &[CostVector], opts: &Options) -> Result<Vec<String>> {
    let mut out = Vec::new();
    match inst {
        Instance::Covering { .. } => {
            let poly = inst.covering()?;
            for (i, v) in vectors.iter().enumerate() {
                if !poly.contains(v, opts.tol.max(1e-9)) {
                    out.push(format!("portfolio vector {i} is not in the polyhedron"));
                }
            }
        }
        Instance::Domain { .. } => {
            let dom = inst.domain()?;
            for (i, v) in vectors.iter().enumerate() {
                let member = dom.vectors.iter().any(|u| {
                    u.len() == v.len() && u.iter().zip(v.iter()).all(|(a, b)| (a - b).abs() <= opts.tol * (1.0 + a.abs()))
                });
                if !member {
                    out.push(format!("portfolio vector {i} is not in the domain"));
                }
            }
        }
        _ => {}
    }
    Ok(out)
}

fn certify(
    inst: &Instance,
    vectors: &[CostVector],
    claimed: Option<f64>,
    ctx: &Context,
    opts: &Options,
) -> Result<Certificates> {
    let mut certs = Certificates {
        claimed_alpha: claimed,
        samples: opts.samples,
        seed: opts.seed,
        ..Certificates::default()
    };
    let Some(first) = vectors.first() else {
        return Err(Error::Argument("portfolio is empty".into()));
    };
    let d = first.len();
    for v in vectors {
        if v.len() != d {
            return Err(Error::Dimension {
                expected: d,
                found: v.len(),
            });
        }
    }
    let infeasible = feasibility_warnings(inst, vectors, opts)?;
    let mut weights = inst.weights()?;
    let shipped = weights.len();
    weights.extend(sample_weights(d, opts.samples, opts.seed));
    let Some(r) = reference(inst, ctx, &weights, opts, &mut certs.warnings)? else {
        certs.violation = !infeasible.is_empty();
        certs.warnings.extend(infeasible);
        return Ok(certs);
    };
    if r.topk.len() != d {
        return Err(Error::Dimension {
            expected: r.topk.len(),
            found: d,
        });
    }
    let (ptopk, pord) = portfolio_side(vectors, ctx, &weights)?;
    let tk = certificate_from_profiles(&ptopk, &r.topk);
    certs.topk = Some(RatioCert {
        ratio: tk.ratio.is_finite().then_some(tk.ratio),
        exact: r.exact,
        evaluated: d,
        worst: tk.worst_k,
        reference: r.name.clone(),
    });
    let (mut worst, mut ratio) = (0, f64::NEG_INFINITY);
    for (i, (a, b)) in pord.iter().zip(&r.ordered).enumerate() {
        let q = safe_ratio(*a, *b);
        if q > ratio {
            worst = i;
            ratio = q;
        }
    }
    if !weights.is_empty() {
        certs.ordered = Some(RatioCert {
            ratio: ratio.is_finite().then_some(ratio),
            exact: false,
            evaluated: weights.len(),
            worst,
            reference: format!("{} ({shipped} instance weights, {} sampled)", r.name, opts.samples),
        });
    }
    if let Some(alpha) = claimed {
        if r.exact && tk.ratio > alpha * (1.0 + VIOLATION_SLACK) {
            certs.violation = true;
            certs
                .warnings
                .push(format!("top-k ratio {} exceeds claimed {alpha}", tk.ratio));
        }
        if ratio > alpha * (1.0 + VIOLATION_SLACK) {
            certs
                .warnings
                .push(format!("sampled ordered ratio {ratio} exceeds claimed {alpha}"));
        }
    }
    if !infeasible.is_empty() {
        certs.violation = true;
        certs.warnings.extend(infeasible);
    }
    Ok(certs)
}

fn elapsed(start: Instant, opts: &Options) -> Option<Timings> {
    opts.timings.then(|| Timings {
        seconds: start.elapsed().as_secs_f64(),
    })
}

fn portfolio_out(p: &Portfolio) -> PortfolioOut {
    PortfolioOut {
        vectors: p.vectors.iter().map(|v| v.to_vec()).collect(),
        provenance: p.provenance.clone(),
        alpha: p.alpha.clone(),
    }
}

fn descriptor(inst: &Instance) -> InstanceDescriptor {
    InstanceDescriptor {
        kind: inst.kind().into(),
        summary: inst.summary(),
    }
}

pub fn solve(inst: &Instance, args: &SolveArgs, opts: &Options) -> Result<RunReport> {
    let start = Instant::now();
    let s = solve_inner(inst, args, opts)?;
    let certs = certify(inst, &s.portfolio.vectors, s.portfolio.alpha.numeric(), &s.reference, opts)?;
    Ok(RunReport {
        command: "solve".into(),
        instance: descriptor(inst),
        method: s.method,
        parameters: s.parameters,
        seed: opts.seed,
        portfolio: portfolio_out(&s.portfolio),
        details: s.details,
        certificates: certs,
        timings: elapsed(start, opts),
    })
}

/// A portfolio file: a report written by `solve`, or a bare array of vectors.
pub struct PortfolioFile {
    pub vectors: Vec<CostVector>,
    pub alpha: Option<f64>,
    pub k: Option<usize>,
    pub facility_sets: Option<Vec<Vec<usize>>>,
}

pub fn parse_portfolio(text: &str) -> Result<PortfolioFile> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Argument(format!("invalid JSON: {e}")))?;
    let bad = |e: serde_json::Error| Error::Argument(format!("invalid portfolio: {e}"));
    if v.is_array() {
        let rows: Vec<Vec<f64>> = serde_json::from_value(v).map_err(bad)?;
        return Ok(PortfolioFile {
            vectors: rows.into_iter().map(CostVector::new).collect::<Result<_>>()?,
            alpha: None,
            k: None,
            facility_sets: None,
        });
    }
    let out: PortfolioOut = serde_json::from_value(v["portfolio"].clone()).map_err(bad)?;
    let facility_sets = if v["method"] == "ufl" {
        Some(serde_json::from_value(v["details"]["facility_sets"].clone()).map_err(bad)?)
    } else {
        None
    };
    Ok(PortfolioFile {
        vectors: out.vectors.into_iter().map(CostVector::new).collect::<Result<_>>()?,
        alpha: out.alpha.numeric(),
        k: v["parameters"]["k"].as_u64().map(|k| k as usize),
        facility_sets,
    })
}

pub fn verify(inst: &Instance, pf: &PortfolioFile, alpha: Option<f64>, k: Option<usize>, opts: &Options) -> Result<RunReport> {
    let start = Instant::now();
    let ctx = match (&pf.facility_sets, inst) {
        (Some(sets), Instance::Metric { .. }) => {
            if sets.len() != pf.vectors.len() {
                return Err(Error::Dimension {
                    expected: pf.vectors.len(),
                    found: sets.len(),
                });
            }
            Context::Ufl { sets: sets.clone() }
        }
        (_, Instance::Metric { .. }) => Context::KClustering {
            k: k.or(pf.k).unwrap_or(1),
        },
        _ => Context::Plain,
    };
    let claimed = alpha.or(pf.alpha);
    let certs = certify(inst, &pf.vectors, claimed, &ctx, opts)?;
    let alpha_out = claimed.map_or(Alpha::Symbolic("unspecified".into()), Alpha::Numeric);
    Ok(RunReport {
        command: "verify".into(),
        instance: descriptor(inst),
        method: "verify".into(),
        parameters: BTreeMap::new(),
        seed: opts.seed,
        portfolio: PortfolioOut {
            vectors: pf.vectors.iter().map(|v| v.to_vec()).collect(),
            provenance: (0..pf.vectors.len()).map(|i| format!("input:{i}")).collect(),
            alpha: alpha_out,
        },
        details: Value::Null,
        certificates: certs,
        timings: elapsed(start, opts),
    })
}

/// Sweeps `alpha` (MLIJ) or `eps` (other instances) and reports one row per
/// value, in input order.
pub fn tradeoff(inst: &Instance, values: &[f64], base: &SolveArgs, opts: &Options) -> Result<Vec<TradeoffRow>> {
    use rayon::prelude::*;
    if values.is_empty() {
        return Err(Error::Argument("sweep list is empty".into()));
    }
    let run = |v: &f64| -> Result<TradeoffRow> {
        let mut a = base.clone();
        if matches!(inst, Instance::Mlij { .. }) {
            a.alpha = Some(*v);
        } else {
            a.eps = Some(*v);
        }
        let start = Instant::now();
        let r = solve(inst, &a, opts)?;
        Ok(TradeoffRow {
            param: *v,
            portfolio_size: r.portfolio.vectors.len(),
            exact_topk_ratio: r.certificates.topk.as_ref().filter(|c| c.exact).and_then(|c| c.ratio),
            sampled_ord_ratio: r.certificates.ordered.as_ref().and_then(|c| c.ratio),
            seconds: if opts.timings { start.elapsed().as_secs_f64() } else { 0.0 },
        })
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(|e| Error::Numeric(format!("thread pool: {e}")))?;
    pool.install(|| values.par_iter().map(run).collect())
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::SizeCap { .. } => 3,
        Error::Numeric(_) | Error::NonTermination(_) => 5,
        _ => 2,
    }
}
