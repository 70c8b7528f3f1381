//! Instance files and generators.

use equinorm::clustering::{star_metric, Metric};
use equinorm::covering::{normalize, CoveringPolyhedron};
use equinorm::mlij::{self, MlijInstance};
use equinorm::portfolio::{antichain_hard_instance, example1_domain, inverse_sqrt_weight, FiniteDomain};
use equinorm::satisfaction::{
    ct_lower_bound_instance, make_completion_times, make_set_cover, make_tsp, make_vertex_cover,
    vc_lower_bound_instance, CompletionTimes, SatisfactionProblem, SetCover, TspPaths, VertexCover,
};
use equinorm::{Error, Result, WeightVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Instance {
    Mlij {
        p: Vec<f64>,
        n: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        weights: Option<Vec<Vec<f64>>>,
    },
    Covering {
        #[serde(rename = "A")]
        a: Vec<Vec<f64>>,
        b: Vec<f64>,
    },
    CompletionTimes {
        p: Vec<Vec<f64>>,
    },
    Setcover {
        n_elements: usize,
        sets: Vec<Vec<usize>>,
    },
    Vertexcover {
        n_vertices: usize,
        edges: Vec<(usize, usize)>,
    },
    Tsp {
        dist: Vec<Vec<f64>>,
        v0: usize,
    },
    Metric {
        dist: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        allowed: Option<Vec<usize>>,
    },
    Domain {
        vectors: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        weights: Option<Vec<Vec<f64>>>,
    },
}

/// Satisfaction problems behind one type.
pub enum AnyProblem {
    CompletionTimes(CompletionTimes),
    SetCover(SetCover),
    VertexCover(VertexCover),
    Tsp(TspPaths),
}

impl AnyProblem {
    pub fn as_dyn(&self) -> &dyn SatisfactionProblem {
        match self {
            AnyProblem::CompletionTimes(p) => p,
            AnyProblem::SetCover(p) => p,
            AnyProblem::VertexCover(p) => p,
            AnyProblem::Tsp(p) => p,
        }
    }
}

impl Instance {
    /// Parses an instance; a bare array of arrays is read as a domain.
    pub fn parse(text: &str) -> Result<Instance> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Argument(format!("invalid JSON: {e}")))?;
        if value.is_array() {
            let vectors: Vec<Vec<f64>> = serde_json::from_value(value)
                .map_err(|e| Error::Argument(format!("invalid domain: {e}")))?;
            return Ok(Instance::Domain {
                vectors,
                weights: None,
            });
        }
        serde_json::from_value(value).map_err(|e| Error::Argument(format!("invalid instance: {e}")))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Mlij { .. } => "mlij",
            Instance::Covering { .. } => "covering",
            Instance::CompletionTimes { .. } => "completion_times",
            Instance::Setcover { .. } => "setcover",
            Instance::Vertexcover { .. } => "vertexcover",
            Instance::Tsp { .. } => "tsp",
            Instance::Metric { .. } => "metric",
            Instance::Domain { .. } => "domain",
        }
    }

    /// Extra ordered-norm weights shipped with the instance.
    pub fn weights(&self) -> Result<Vec<WeightVector>> {
        match self {
            Instance::Mlij { weights: Some(w), .. } | Instance::Domain { weights: Some(w), .. } => {
                w.iter().map(|v| WeightVector::new(v.clone())).collect()
            }
            _ => Ok(Vec::new()),
        }
    }

    pub fn mlij(&self) -> Result<MlijInstance> {
        match self {
            Instance::Mlij { p, n, .. } => MlijInstance::new(p.clone(), *n),
            _ => Err(self.wrong("mlij")),
        }
    }

    pub fn covering(&self) -> Result<CoveringPolyhedron> {
        match self {
            Instance::Covering { a, b } => normalize(a.clone(), b.clone()),
            _ => Err(self.wrong("covering")),
        }
    }

    pub fn domain(&self) -> Result<FiniteDomain> {
        match self {
            Instance::Domain { vectors, .. } => FiniteDomain::from_rows(vectors.clone()),
            _ => Err(self.wrong("domain")),
        }
    }

    pub fn metric(&self) -> Result<Metric> {
        match self {
            Instance::Metric { dist, allowed: None } => Metric::new(dist.clone()),
            Instance::Metric {
                dist,
                allowed: Some(a),
            } => Metric::with_allowed(dist.clone(), a.clone()),
            _ => Err(self.wrong("metric")),
        }
    }

    pub fn problem(&self) -> Result<AnyProblem> {
        Ok(match self {
            Instance::CompletionTimes { p } => AnyProblem::CompletionTimes(make_completion_times(p.clone())?),
            Instance::Setcover { n_elements, sets } => AnyProblem::SetCover(make_set_cover(*n_elements, sets.clone())?),
            Instance::Vertexcover { n_vertices, edges } => {
                AnyProblem::VertexCover(make_vertex_cover(*n_vertices, edges.clone())?)
            }
            Instance::Tsp { dist, v0 } => AnyProblem::Tsp(make_tsp(dist.clone(), *v0)?),
            _ => return Err(self.wrong("satisfaction problem")),
        })
    }

    fn wrong(&self, expected: &str) -> Error {
        Error::Argument(format!("expected a {expected} instance, got {}", self.kind()))
    }

    /// Sizes shown in reports.
    pub fn summary(&self) -> serde_json::Value {
        use serde_json::json;
        match self {
            Instance::Mlij { p, n, weights } => {
                json!({"machines": p.len(), "jobs": n, "weights": weights.as_ref().map_or(0, |w| w.len())})
            }
            Instance::Covering { a, .. } => json!({"rows": a.len(), "dim": a.first().map_or(0, |r| r.len())}),
            Instance::CompletionTimes { p } => {
                json!({"jobs": p.len(), "machines": p.first().map_or(0, |r| r.len())})
            }
            Instance::Setcover { n_elements, sets } => json!({"elements": n_elements, "sets": sets.len()}),
            Instance::Vertexcover { n_vertices, edges } => json!({"vertices": n_vertices, "edges": edges.len()}),
            Instance::Tsp { dist, v0 } => json!({"vertices": dist.len(), "v0": v0}),
            Instance::Metric { dist, allowed } => {
                json!({"points": dist.len(), "allowed": allowed.as_ref().map_or(dist.len(), |a| a.len())})
            }
            Instance::Domain { vectors, weights } => json!({
                "vectors": vectors.len(),
                "dim": vectors.first().map_or(0, |v| v.len()),
                "weights": weights.as_ref().map_or(0, |w| w.len()),
            }),
        }
    }
}

pub const KINDS: &[&str] = &[
    "mlij-lb",
    "antichain",
    "example1",
    "example2",
    "mlij-intro",
    "vc-98",
    "ct-113",
    "star-metric",
    "random-mlij",
    "random-covering",
    "random-metric",
    "random-setcover",
    "random-ct",
];

/// Generator parameters; unset fields take per-kind defaults.
#[derive(Debug, Clone, Default)]
pub struct GenParams {
    pub d: Option<usize>,
    pub n: Option<u64>,
    pub alpha: Option<f64>,
    pub levels: Option<usize>,
    pub base: Option<usize>,
    pub rows: Option<usize>,
    pub sets: Option<usize>,
    pub d_max: Option<usize>,
    pub seed: u64,
}

fn rows(vs: &[equinorm::CostVector]) -> Vec<Vec<f64>> {
    vs.iter().map(|v| v.to_vec()).collect()
}

fn weight_rows(ws: &[WeightVector]) -> Vec<Vec<f64>> {
    ws.iter().map(|w| w.to_vec()).collect()
}

/// Builds an instance of `kind` and a one-line description.
pub fn generate(kind: &str, g: &GenParams) -> Result<(Instance, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    Ok(match kind {
        "mlij-lb" => {
            let alpha = g.alpha.unwrap_or(1.0);
            let d_max = g.d_max.unwrap_or(100);
            let lb = match g.levels {
                Some(l) => mlij::lower_bound_instance_with_levels(alpha, l, d_max)?,
                None => mlij::lower_bound_instance(alpha, d_max)?,
            };
            let desc = format!(
                "MLIJ lower-bound family: alpha={alpha}, L={}, S={}, d={}, n={}",
                lb.levels,
                lb.base,
                lb.instance.dim(),
                lb.instance.n()
            );
            (
                Instance::Mlij {
                    p: lb.instance.input_p(),
                    n: lb.instance.n(),
                    weights: Some(weight_rows(&lb.weights)),
                },
                desc,
            )
        }
        "antichain" => {
            let levels = g.levels.unwrap_or(3);
            let base = g.base.unwrap_or(4);
            let a = antichain_hard_instance(levels, base)?;
            let desc = format!(
                "antichain instance: L={levels}, S={base}, d={}, {} vectors",
                a.dim,
                a.vectors.len()
            );
            (
                Instance::Domain {
                    vectors: rows(&a.vectors),
                    weights: Some(weight_rows(&a.weights)),
                },
                desc,
            )
        }
        "example1" => {
            let d = g.d.unwrap_or(64);
            let dom = example1_domain(d)?;
            (
                Instance::Domain {
                    vectors: rows(&dom.vectors),
                    weights: Some(vec![inverse_sqrt_weight(d)?.to_vec()]),
                },
                format!("domain {{x, y, z}} in dimension {d} with weight (1, 1/sqrt 2, ...)"),
            )
        }
        "example2" => {
            let d = g.d.unwrap_or(16);
            let n = g.n.unwrap_or(64);
            let inst = mlij::example2_instance(d, n)?;
            (
                Instance::Mlij {
                    p: inst.input_p(),
                    n,
                    weights: None,
                },
                format!("MLIJ with p_i = sqrt(i), d={d}, n={n}"),
            )
        }
        "mlij-intro" => {
            let d = g.d.unwrap_or(16);
            let inst = mlij::intro_instance(d)?;
            (
                Instance::Mlij {
                    p: inst.input_p(),
                    n: inst.n(),
                    weights: None,
                },
                format!("MLIJ with p = (1, sqrt d, ..., sqrt d), d={d}, n={d}"),
            )
        }
        "vc-98" => {
            let half = g.n.unwrap_or(8) as usize;
            let vc = vc_lower_bound_instance(half)?;
            (
                Instance::Vertexcover {
                    n_vertices: vc.n_vertices,
                    edges: vc.edges.clone(),
                },
                format!("vertex-cover gadget with {} vertices", vc.n_vertices),
            )
        }
        "ct-113" => {
            let ct = ct_lower_bound_instance();
            (
                Instance::CompletionTimes { p: ct.p.clone() },
                "completion-times gadget: 3 jobs on 2 machines".to_string(),
            )
        }
        "star-metric" => {
            let n = g.n.unwrap_or(16) as usize;
            let m = star_metric(n)?;
            (
                Instance::Metric {
                    dist: m.matrix().to_vec(),
                    allowed: None,
                },
                format!("star metric with {n} leaves"),
            )
        }
        "random-mlij" => {
            let d = g.d.unwrap_or(5);
            let n = g.n.unwrap_or(8);
            let p = (0..d).map(|_| rng.random_range(1..=16u32) as f64).collect();
            MlijInstance::new(Vec::clone(&p), n)?;
            (
                Instance::Mlij { p, n, weights: None },
                format!("random MLIJ: d={d}, n={n}, seed={}", g.seed),
            )
        }
        "random-covering" => {
            let r = g.rows.unwrap_or(2);
            let d = g.d.unwrap_or(5);
            let mut a = Vec::with_capacity(r);
            for _ in 0..r {
                let mut row: Vec<f64> = (0..d)
                    .map(|_| if rng.random::<f64>() < 0.7 { rng.random_range(1..=4u32) as f64 } else { 0.0 })
                    .collect();
                if row.iter().all(|v| *v == 0.0) {
                    row[rng.random_range(0..d)] = 1.0;
                }
                a.push(row);
            }
            let b = (0..r).map(|_| rng.random_range(1..=10u32) as f64).collect();
            (
                Instance::Covering { a, b },
                format!("random covering polyhedron: r={r}, d={d}, seed={}", g.seed),
            )
        }
        "random-metric" => {
            let n = g.n.unwrap_or(7) as usize;
            let pts: Vec<(f64, f64)> = (0..n)
                .map(|_| (rng.random_range(0.0..10.0), rng.random_range(0.0..10.0)))
                .collect();
            let dist = pts
                .iter()
                .map(|a| pts.iter().map(|b| (a.0 - b.0).hypot(a.1 - b.1)).collect())
                .collect();
            (
                Instance::Metric { dist, allowed: None },
                format!("random planar metric: n={n}, seed={}", g.seed),
            )
        }
        "random-setcover" => {
            let n = g.n.unwrap_or(8) as usize;
            let m = g.sets.unwrap_or(6);
            if n == 0 || m == 0 {
                return Err(Error::Argument("need at least one element and one set".into()));
            }
            let mut sets: Vec<Vec<usize>> = (0..m)
                .map(|_| (0..n).filter(|_| rng.random::<f64>() < 0.35).collect())
                .collect();
            for e in 0..n {
                if !sets.iter().any(|s| s.contains(&e)) {
                    let i = rng.random_range(0..m);
                    sets[i].push(e);
                    sets[i].sort_unstable();
                }
            }
            (
                Instance::Setcover { n_elements: n, sets },
                format!("random set cover: {n} elements, {m} sets, seed={}", g.seed),
            )
        }
        "random-ct" => {
            let jobs = g.n.unwrap_or(4) as usize;
            let machines = g.d.unwrap_or(2);
            let p = (0..jobs)
                .map(|_| (0..machines).map(|_| rng.random_range(1..=8u32) as f64).collect())
                .collect();
            (
                Instance::CompletionTimes { p },
                format!("random completion times: {jobs} jobs, {machines} machines, seed={}", g.seed),
            )
        }
        other => {
            return Err(Error::Argument(format!(
                "unknown kind '{other}'; expected one of {}",
                KINDS.join(", ")
            )))
        }
    })
}
