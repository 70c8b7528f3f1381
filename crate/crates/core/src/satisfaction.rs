//! Ordered satisfaction problems.
//!
//! A solution is a sequence of distinct objects. Each object receives a time
//! that depends on the sequence, and each client is satisfied at the time of
//! the first object in the sequence that satisfies it. The cost of a sequence
//! is its largest object time. [`iterative_ordering`] turns a routine that
//! satisfies as many clients as possible within a budget into a single
//! sequence that approximates every ordered norm of the satisfaction times.

use serde::{Deserialize, Serialize};

use crate::error::{arg, check_cap, check_dim, Error, Result};
use crate::norms::REL_TOL;
use crate::solvercore::{max_bipartite_matching, solve_lp, LinearProgram, Relation, Sense};

/// Default cap on the number of candidates explored by exhaustive routines.
pub const EXHAUSTIVE_CAP: f64 = 1e7;

/// An ordered set of distinct objects.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Satisfier {
    pub order: Vec<usize>,
}

impl Satisfier {
    pub fn new(order: Vec<usize>) -> Self {
        Satisfier { order }
    }
}

/// Interface shared by the problems in this module.
pub trait SatisfactionProblem {
    fn num_clients(&self) -> usize;
    fn num_objects(&self) -> usize;
    /// Clients satisfied by `object`.
    fn clients_of(&self, object: usize) -> &[usize];
    /// Time of each object of `order`, aligned with `order`.
    fn object_times(&self, order: &[usize]) -> Vec<f64>;
    /// Composability constant.
    fn gamma(&self) -> f64;
    /// Smallest positive cost of any satisfier.
    fn min_nonzero_cost(&self) -> f64;
    /// Cost of some satisfier that satisfies every client.
    fn full_cost_upper_bound(&self) -> f64;
    /// Maximises the number of satisfied clients subject to cost `<= budget`.
    fn exhaustive_satisfier(&self, budget: f64, cap: f64) -> Result<Satisfier>;
    /// Satisfaction-time vectors of a set of complete satisfiers that
    /// pointwise dominates every complete satisfier.
    fn complete_time_vectors(&self, cap: f64) -> Result<Vec<Vec<f64>>>;
    fn object_label(&self, object: usize) -> String;
}

fn validate(problem: &dyn SatisfactionProblem, sat: &Satisfier) -> Result<()> {
    let mut seen = vec![false; problem.num_objects()];
    for &o in &sat.order {
        if o >= seen.len() {
            return arg(format!("object {o} out of range"));
        }
        if seen[o] {
            return arg(format!("object {o} repeated"));
        }
        seen[o] = true;
    }
    Ok(())
}

/// Satisfaction time of every client; `∞` for clients not satisfied.
pub fn satisfaction_times(problem: &dyn SatisfactionProblem, sat: &Satisfier) -> Result<Vec<f64>> {
    validate(problem, sat)?;
    let times = problem.object_times(&sat.order);
    let mut s = vec![f64::INFINITY; problem.num_clients()];
    let mut done = vec![false; problem.num_clients()];
    for (&o, &t) in sat.order.iter().zip(&times) {
        for &c in problem.clients_of(o) {
            if !done[c] {
                done[c] = true;
                s[c] = t;
            }
        }
    }
    Ok(s)
}

/// Largest object time; zero for the empty satisfier.
pub fn cost(problem: &dyn SatisfactionProblem, sat: &Satisfier) -> Result<f64> {
    validate(problem, sat)?;
    Ok(problem
        .object_times(&sat.order)
        .into_iter()
        .fold(0.0, f64::max))
}

/// Number of clients satisfied.
pub fn satisfied_count(problem: &dyn SatisfactionProblem, sat: &Satisfier) -> Result<usize> {
    Ok(satisfaction_times(problem, sat)?
        .iter()
        .filter(|t| t.is_finite())
        .count())
}

/// Concatenation keeping the first occurrence of each object.
pub fn compose(parts: &[Satisfier]) -> Satisfier {
    let mut order = Vec::new();
    for p in parts {
        for &o in &p.order {
            if !order.contains(&o) {
                order.push(o);
            }
        }
    }
    Satisfier { order }
}

/// Checks `t(composed)_o <= γ Σ_{j<i} c(part_j) + t(part_i)_o` for every object
/// `o` first contributed by part `i`.
pub fn check_composable(problem: &dyn SatisfactionProblem, parts: &[Satisfier]) -> Result<bool> {
    let composed = compose(parts);
    let ctimes = problem.object_times(&composed.order);
    let mut prefix_cost = 0.0;
    let mut pos = 0;
    for p in parts {
        validate(problem, p)?;
        let ptimes = problem.object_times(&p.order);
        for (&o, &t) in p.order.iter().zip(&ptimes) {
            if pos < composed.order.len() && composed.order[pos] == o {
                let bound = problem.gamma() * prefix_cost + t;
                if ctimes[pos] > bound + REL_TOL * (1.0 + bound.abs()) {
                    return Ok(false);
                }
                pos += 1;
            }
        }
        prefix_cost += ptimes.iter().copied().fold(0.0, f64::max);
    }
    Ok(true)
}

/// Checks that the prefix of objects with time `<= t` keeps its times.
pub fn check_downward_closed(problem: &dyn SatisfactionProblem, sat: &Satisfier, t: f64) -> Result<bool> {
    validate(problem, sat)?;
    let times = problem.object_times(&sat.order);
    let kept: Vec<usize> = sat
        .order
        .iter()
        .zip(&times)
        .filter(|(_, ti)| **ti <= t)
        .map(|(o, _)| *o)
        .collect();
    let sub = problem.object_times(&kept);
    let orig: Vec<f64> = times.into_iter().filter(|ti| *ti <= t).collect();
    Ok(sub
        .iter()
        .zip(&orig)
        .all(|(a, b)| *a <= *b + REL_TOL * (1.0 + b.abs())))
}

/// Result of [`iterative_ordering`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterativeOrderingResult {
    pub satisfier: Satisfier,
    pub pieces: Vec<Satisfier>,
    /// Budgets passed to the oracle.
    pub budgets: Vec<f64>,
    /// Budgets are `scale θ^j`, with `scale` the smallest positive cost.
    pub scale: f64,
    pub theta: f64,
    /// `β (√γ + 1)^2`.
    pub guarantee: f64,
}

/// Calls `oracle` with budgets `scale θ^j`, `θ = √γ + 1`, until every client is
/// satisfied, and composes the answers. `oracle(B)` must return a satisfier of
/// cost at most `β B` that satisfies at least as many clients as any satisfier
/// of cost at most `B`.
pub fn iterative_ordering(
    problem: &dyn SatisfactionProblem,
    beta: f64,
    oracle: &mut dyn FnMut(f64) -> Result<Satisfier>,
) -> Result<IterativeOrderingResult> {
    if !(beta >= 1.0 && beta.is_finite()) {
        return arg(format!("beta must be at least 1, got {beta}"));
    }
    let gamma = problem.gamma();
    let theta = gamma.sqrt() + 1.0;
    let scale = problem.min_nonzero_cost();
    let limit = theta * theta * problem.full_cost_upper_bound().max(scale);
    let n = problem.num_clients();
    let mut covered = vec![false; n];
    let mut ncov = 0;
    let mut pieces = Vec::new();
    let mut budgets = Vec::new();
    let mut j = 0;
    while ncov < n {
        let budget = scale * theta.powi(j);
        if budget > limit {
            return Err(Error::NonTermination(format!(
                "budget {budget} exceeds {limit} with {} clients unsatisfied",
                n - ncov
            )));
        }
        let piece = oracle(budget)?;
        validate(problem, &piece)?;
        for &o in &piece.order {
            for &c in problem.clients_of(o) {
                if !covered[c] {
                    covered[c] = true;
                    ncov += 1;
                }
            }
        }
        pieces.push(piece);
        budgets.push(budget);
        j += 1;
    }
    Ok(IterativeOrderingResult {
        satisfier: compose(&pieces),
        pieces,
        budgets,
        scale,
        theta,
        guarantee: beta * theta * theta,
    })
}

/// [`iterative_ordering`] with the problem's exhaustive satisfier (`β = 1`).
pub fn iterative_ordering_exhaustive(problem: &dyn SatisfactionProblem, cap: f64) -> Result<IterativeOrderingResult> {
    iterative_ordering(problem, 1.0, &mut |b| problem.exhaustive_satisfier(b, cap))
}

fn within(v: f64, budget: f64) -> bool {
    v <= budget * (1.0 + 1e-12) + 1e-12
}

// ---------------------------------------------------------------------------
// Set cover and vertex cover

/// Min-sum set cover: objects are sets, clients are elements, the time of the
/// `i`-th set is `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetCover {
    pub n_elements: usize,
    pub sets: Vec<Vec<usize>>,
}

/// Validates that every element lies in some set.
pub fn make_set_cover(n_elements: usize, sets: Vec<Vec<usize>>) -> Result<SetCover> {
    let mut covered = vec![false; n_elements];
    let mut clean = Vec::with_capacity(sets.len());
    for (i, s) in sets.into_iter().enumerate() {
        let mut s = s;
        s.sort_unstable();
        s.dedup();
        for &e in &s {
            if e >= n_elements {
                return arg(format!("set {i} contains element {e} >= {n_elements}"));
            }
            covered[e] = true;
        }
        clean.push(s);
    }
    if let Some(e) = covered.iter().position(|c| !c) {
        return Err(Error::Infeasible(format!("element {e} is in no set")));
    }
    Ok(SetCover {
        n_elements,
        sets: clean,
    })
}

fn unit_time_exhaustive(
    clients: &dyn Fn(usize) -> Vec<usize>,
    n_objects: usize,
    n_clients: usize,
    budget: f64,
    cap: f64,
) -> Result<Satisfier> {
    let k = if budget.is_finite() {
        ((budget * (1.0 + 1e-12)).floor().max(0.0) as usize).min(n_objects)
    } else {
        n_objects
    };
    let count: f64 = (0..=k).map(|s| binom(n_objects, s)).sum();
    check_cap("exhaustive subsets", count, cap)?;
    let masks: Vec<u128> = (0..n_objects)
        .map(|o| clients(o).iter().fold(0u128, |m, &c| m | 1u128 << c))
        .collect();
    if n_clients > 128 {
        return arg("exhaustive search supports at most 128 clients");
    }
    let mut best: (u32, Vec<usize>) = (0, Vec::new());
    for size in 1..=k {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let m = idx.iter().fold(0u128, |a, &o| a | masks[o]);
            if m.count_ones() > best.0 {
                best = (m.count_ones(), idx.clone());
            }
            let mut i = size;
            while i > 0 && idx[i - 1] == n_objects - size + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    // Order the chosen objects greedily by new coverage.
    let mut left = best.1;
    let mut order = Vec::new();
    let mut cov = 0u128;
    while !left.is_empty() {
        let (pos, _) = left
            .iter()
            .enumerate()
            .max_by(|a, b| {
                let ga = (masks[*a.1] & !cov).count_ones();
                let gb = (masks[*b.1] & !cov).count_ones();
                ga.cmp(&gb).then(b.1.cmp(a.1))
            })
            .unwrap();
        let o = left.remove(pos);
        cov |= masks[o];
        order.push(o);
    }
    Ok(Satisfier { order })
}

fn binom(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Irredundant sequences (each object satisfies a new client) until every
/// client is satisfied, with unit object times.
fn unit_time_complete_vectors(
    clients: &dyn Fn(usize) -> Vec<usize>,
    n_objects: usize,
    n_clients: usize,
    cap: f64,
) -> Result<Vec<Vec<f64>>> {
    let lists: Vec<Vec<usize>> = (0..n_objects).map(clients).collect();
    let mut out = Vec::new();
    let mut nodes = 0f64;
    let mut times = vec![f64::INFINITY; n_clients];
    fn rec(
        lists: &[Vec<usize>],
        used: &mut Vec<bool>,
        times: &mut Vec<f64>,
        depth: usize,
        left: usize,
        out: &mut Vec<Vec<f64>>,
        nodes: &mut f64,
        cap: f64,
    ) -> Result<()> {
        *nodes += 1.0;
        check_cap("exhaustive sequences", *nodes, cap)?;
        if left == 0 {
            out.push(times.clone());
            return Ok(());
        }
        for o in 0..lists.len() {
            if used[o] {
                continue;
            }
            let new: Vec<usize> = lists[o].iter().copied().filter(|&c| times[c].is_infinite()).collect();
            if new.is_empty() {
                continue;
            }
            used[o] = true;
            for &c in &new {
                times[c] = (depth + 1) as f64;
            }
            rec(lists, used, times, depth + 1, left - new.len(), out, nodes, cap)?;
            for &c in &new {
                times[c] = f64::INFINITY;
            }
            used[o] = false;
        }
        Ok(())
    }
    rec(&lists, &mut vec![false; n_objects], &mut times, 0, n_clients, &mut out, &mut nodes, cap)?;
    out.sort_by(|a, b| a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal));
    out.dedup();
    Ok(out)
}

impl SatisfactionProblem for SetCover {
    fn num_clients(&self) -> usize {
        self.n_elements
    }
    fn num_objects(&self) -> usize {
        self.sets.len()
    }
    fn clients_of(&self, object: usize) -> &[usize] {
        &self.sets[object]
    }
    fn object_times(&self, order: &[usize]) -> Vec<f64> {
        (1..=order.len()).map(|i| i as f64).collect()
    }
    fn gamma(&self) -> f64 {
        1.0
    }
    fn min_nonzero_cost(&self) -> f64 {
        1.0
    }
    fn full_cost_upper_bound(&self) -> f64 {
        self.sets.len() as f64
    }
    fn exhaustive_satisfier(&self, budget: f64, cap: f64) -> Result<Satisfier> {
        unit_time_exhaustive(&|o| self.sets[o].clone(), self.sets.len(), self.n_elements, budget, cap)
    }
    fn complete_time_vectors(&self, cap: f64) -> Result<Vec<Vec<f64>>> {
        unit_time_complete_vectors(&|o| self.sets[o].clone(), self.sets.len(), self.n_elements, cap)
    }
    fn object_label(&self, object: usize) -> String {
        format!("set{object}")
    }
}

/// Min-sum vertex cover: objects are vertices, clients are edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexCover {
    pub n_vertices: usize,
    pub edges: Vec<(usize, usize)>,
    cover: SetCover,
}

pub fn make_vertex_cover(n_vertices: usize, edges: Vec<(usize, usize)>) -> Result<VertexCover> {
    let mut sets = vec![Vec::new(); n_vertices];
    for (e, &(u, v)) in edges.iter().enumerate() {
        if u >= n_vertices || v >= n_vertices {
            return arg(format!("edge ({u}, {v}) out of range"));
        }
        if u == v {
            return arg(format!("self-loop at vertex {u}"));
        }
        sets[u].push(e);
        sets[v].push(e);
    }
    let cover = make_set_cover(edges.len(), sets)?;
    Ok(VertexCover {
        n_vertices,
        edges,
        cover,
    })
}

impl VertexCover {
    pub fn as_set_cover(&self) -> &SetCover {
        &self.cover
    }
}

impl SatisfactionProblem for VertexCover {
    fn num_clients(&self) -> usize {
        self.cover.num_clients()
    }
    fn num_objects(&self) -> usize {
        self.cover.num_objects()
    }
    fn clients_of(&self, object: usize) -> &[usize] {
        self.cover.clients_of(object)
    }
    fn object_times(&self, order: &[usize]) -> Vec<f64> {
        self.cover.object_times(order)
    }
    fn gamma(&self) -> f64 {
        1.0
    }
    fn min_nonzero_cost(&self) -> f64 {
        1.0
    }
    fn full_cost_upper_bound(&self) -> f64 {
        self.cover.full_cost_upper_bound()
    }
    fn exhaustive_satisfier(&self, budget: f64, cap: f64) -> Result<Satisfier> {
        self.cover.exhaustive_satisfier(budget, cap)
    }
    fn complete_time_vectors(&self, cap: f64) -> Result<Vec<Vec<f64>>> {
        self.cover.complete_time_vectors(cap)
    }
    fn object_label(&self, object: usize) -> String {
        format!("v{object}")
    }
}

/// Vertices `v0..v2n`: `v1..v2n` form a cycle and `v0` is joined to every odd
/// cycle vertex.
pub fn vc_lower_bound_instance(n: usize) -> Result<VertexCover> {
    if n < 2 {
        return arg("gadget needs n >= 2");
    }
    let mut edges = Vec::new();
    for i in 1..2 * n {
        edges.push((i, i + 1));
    }
    edges.push((2 * n, 1));
    for i in (1..2 * n).step_by(2) {
        edges.push((0, i));
    }
    make_vertex_cover(2 * n + 1, edges)
}

// ---------------------------------------------------------------------------
// Completion times

/// Unrelated-machine completion times: `p[j][i]` is the time of job `j` on
/// machine `i`. Object `j * d + i` places job `j` on machine `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletionTimes {
    pub p: Vec<Vec<f64>>,
    clients: Vec<Vec<usize>>,
}

pub fn make_completion_times(p: Vec<Vec<f64>>) -> Result<CompletionTimes> {
    let Some(first) = p.first() else {
        return arg("need at least one job");
    };
    let d = first.len();
    if d == 0 {
        return arg("need at least one machine");
    }
    for row in &p {
        check_dim(d, row.len())?;
        if let Some(v) = row.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return arg(format!("processing times must be positive and finite, got {v}"));
        }
    }
    let clients = (0..p.len() * d).map(|o| vec![o / d]).collect();
    Ok(CompletionTimes { p, clients })
}

impl CompletionTimes {
    pub fn jobs(&self) -> usize {
        self.p.len()
    }

    pub fn machines(&self) -> usize {
        self.p[0].len()
    }

    pub fn object(&self, job: usize, machine: usize) -> usize {
        job * self.machines() + machine
    }

    /// Satisfier running `assignment[i]` (a job sequence) on machine `i`.
    pub fn satisfier_from_sequences(&self, sequences: &[Vec<usize>]) -> Satisfier {
        let mut order = Vec::new();
        for (i, seq) in sequences.iter().enumerate() {
            for &j in seq {
                order.push(self.object(j, i));
            }
        }
        Satisfier { order }
    }
}

impl SatisfactionProblem for CompletionTimes {
    fn num_clients(&self) -> usize {
        self.p.len()
    }
    fn num_objects(&self) -> usize {
        self.p.len() * self.machines()
    }
    fn clients_of(&self, object: usize) -> &[usize] {
        &self.clients[object]
    }
    fn object_times(&self, order: &[usize]) -> Vec<f64> {
        let d = self.machines();
        let mut load = vec![0.0; d];
        order
            .iter()
            .map(|&o| {
                let (j, i) = (o / d, o % d);
                load[i] += self.p[j][i];
                load[i]
            })
            .collect()
    }
    fn gamma(&self) -> f64 {
        1.0
    }
    fn min_nonzero_cost(&self) -> f64 {
        self.p.iter().flatten().copied().fold(f64::INFINITY, f64::min)
    }
    fn full_cost_upper_bound(&self) -> f64 {
        self.p
            .iter()
            .map(|r| r.iter().copied().fold(f64::INFINITY, f64::min))
            .sum()
    }
    fn exhaustive_satisfier(&self, budget: f64, cap: f64) -> Result<Satisfier> {
        let (n, d) = (self.jobs(), self.machines());
        check_cap("exhaustive assignments", ((d + 1) as f64).powi(n as i32), cap)?;
        let mut assign = vec![0usize; n];
        let mut best: Option<(usize, f64, Vec<usize>)> = None;
        loop {
            let mut load = vec![0.0; d];
            let mut count = 0;
            for (j, &a) in assign.iter().enumerate() {
                if a > 0 {
                    load[a - 1] += self.p[j][a - 1];
                    count += 1;
                }
            }
            let span = load.iter().copied().fold(0.0, f64::max);
            if within(span, budget) {
                let better = match &best {
                    None => true,
                    Some((c, s, _)) => count > *c || count == *c && span < *s,
                };
                if better {
                    best = Some((count, span, assign.clone()));
                }
            }
            let mut i = 0;
            while i < n && assign[i] == d {
                assign[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
            assign[i] += 1;
        }
        let (_, _, assign) = best.expect("the empty assignment is feasible");
        let mut seqs: Vec<Vec<usize>> = vec![Vec::new(); d];
        for (j, &a) in assign.iter().enumerate() {
            if a > 0 {
                seqs[a - 1].push(j);
            }
        }
        for (i, s) in seqs.iter_mut().enumerate() {
            s.sort_by(|&a, &b| self.p[a][i].total_cmp(&self.p[b][i]).then(a.cmp(&b)));
        }
        Ok(self.satisfier_from_sequences(&seqs))
    }
    fn complete_time_vectors(&self, cap: f64) -> Result<Vec<Vec<f64>>> {
        let (n, d) = (self.jobs(), self.machines());
        let fact: f64 = (1..=n).map(|v| v as f64).product();
        check_cap("complete schedules", (d as f64).powi(n as i32) * fact, cap)?;
        let mut out = Vec::new();
        let mut assign = vec![0usize; n];
        loop {
            let mut seqs: Vec<Vec<usize>> = vec![Vec::new(); d];
            for (j, &a) in assign.iter().enumerate() {
                seqs[a].push(j);
            }
            let mut times = vec![0.0; n];
            permute_all(&seqs, 0, &mut times, &self.p, &mut out);
            let mut i = 0;
            while i < n && assign[i] == d - 1 {
                assign[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
            assign[i] += 1;
        }
        Ok(out)
    }
    fn object_label(&self, object: usize) -> String {
        let d = self.machines();
        format!("job{}@m{}", object / d, object % d)
    }
}

fn permute_all(seqs: &[Vec<usize>], machine: usize, times: &mut Vec<f64>, p: &[Vec<f64>], out: &mut Vec<Vec<f64>>) {
    if machine == seqs.len() {
        out.push(times.clone());
        return;
    }
    let mut perm = seqs[machine].clone();
    perm.sort_unstable();
    loop {
        let mut t = 0.0;
        for &j in &perm {
            t += p[j][machine];
            times[j] = t;
        }
        permute_all(seqs, machine + 1, times, p, out);
        if !next_permutation(&mut perm) {
            break;
        }
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Fractional solution of the budgeted assignment LP: maximise `Σ x_ij` with
/// `Σ_j p_ij x_ij <= B` per machine, `Σ_i x_ij <= 1` per job and `x_ij = 0`
/// when `p_ij > B`. Returns `x[j][i]` and the optimum.
pub fn lp_ps(inst: &CompletionTimes, budget: f64) -> Result<(Vec<Vec<f64>>, f64)> {
    let (n, d) = (inst.jobs(), inst.machines());
    let vars: Vec<(usize, usize)> = (0..n)
        .flat_map(|j| (0..d).map(move |i| (j, i)))
        .filter(|&(j, i)| within(inst.p[j][i], budget))
        .collect();
    let mut x = vec![vec![0.0; d]; n];
    if vars.is_empty() {
        return Ok((x, 0.0));
    }
    let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0; vars.len()]);
    for i in 0..d {
        let terms: Vec<(usize, f64)> = vars
            .iter()
            .enumerate()
            .filter(|(_, v)| v.1 == i)
            .map(|(k, v)| (k, inst.p[v.0][i]))
            .collect();
        if !terms.is_empty() {
            lp.add_sparse(&terms, Relation::Le, budget);
        }
    }
    for j in 0..n {
        let terms: Vec<(usize, f64)> = vars
            .iter()
            .enumerate()
            .filter(|(_, v)| v.0 == j)
            .map(|(k, _)| (k, 1.0))
            .collect();
        if !terms.is_empty() {
            lp.add_sparse(&terms, Relation::Le, 1.0);
        }
    }
    let (sol, value) = solve_lp(&lp)?.optimal()?;
    for (k, &(j, i)) in vars.iter().enumerate() {
        x[j][i] = sol[k];
    }
    Ok((x, value))
}

/// `(2, B)`-satisfier for completion times: solves [`lp_ps`], splits each
/// machine into `ceil(Σ_j x_ij)` slots filled by jobs in decreasing processing
/// time, and takes a maximum matching between jobs and slots on the support.
/// Jobs run on each machine in decreasing processing time.
pub fn completion_times_satisfier(inst: &CompletionTimes, budget: f64) -> Result<Satisfier> {
    if !(budget >= 0.0) {
        return arg(format!("budget must be nonnegative, got {budget}"));
    }
    let (n, d) = (inst.jobs(), inst.machines());
    let (x, _) = lp_ps(inst, budget)?;
    let mut slot_machine = Vec::new();
    let mut edges = Vec::new();
    for i in 0..d {
        let mut jobs: Vec<usize> = (0..n).filter(|&j| x[j][i] > 1e-9).collect();
        jobs.sort_by(|&a, &b| inst.p[b][i].total_cmp(&inst.p[a][i]).then(a.cmp(&b)));
        let total: f64 = jobs.iter().map(|&j| x[j][i]).sum();
        let slots = (total - 1e-9).ceil().max(0.0) as usize;
        let first = slot_machine.len();
        slot_machine.extend(std::iter::repeat_n(i, slots));
        let mut slot = 0usize;
        let mut room = 1.0;
        for &j in &jobs {
            let mut amount = x[j][i];
            while amount > 1e-9 && slot < slots {
                edges.push((j, first + slot));
                let used = amount.min(room);
                amount -= used;
                room -= used;
                if room <= 1e-9 {
                    slot += 1;
                    room = 1.0;
                }
            }
        }
    }
    let m = max_bipartite_matching(n, slot_machine.len(), &edges)?;
    let mut seqs: Vec<Vec<usize>> = vec![Vec::new(); d];
    for (j, s) in m.pairs() {
        seqs[slot_machine[s]].push(j);
    }
    for (i, s) in seqs.iter_mut().enumerate() {
        s.sort_by(|&a, &b| inst.p[b][i].total_cmp(&inst.p[a][i]).then(a.cmp(&b)));
    }
    Ok(inst.satisfier_from_sequences(&seqs))
}

/// Two machines and three jobs: jobs 0 and 1 take `1` on machine A and `1+δ`
/// on B; job 2 takes `1+μ` on A and `2` on B, with `μ = (√61-7)/3` and
/// `δ = (√61-7)/6`.
pub fn ct_lower_bound_instance() -> CompletionTimes {
    let s = 61f64.sqrt();
    let mu = (s - 7.0) / 3.0;
    let delta = (s - 7.0) / 6.0;
    make_completion_times(vec![
        vec![1.0, 1.0 + delta],
        vec![1.0, 1.0 + delta],
        vec![1.0 + mu, 2.0],
    ])
    .expect("gadget is valid")
}

// ---------------------------------------------------------------------------
// Traveling salesman paths

/// Paths from `v0`: objects and clients are vertices, and an object's time is
/// the length of the path prefix ending at it. Sequences not starting at `v0`
/// have infinite times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TspPaths {
    pub dist: Vec<Vec<f64>>,
    pub v0: usize,
    clients: Vec<Vec<usize>>,
}

pub fn make_tsp(dist: Vec<Vec<f64>>, v0: usize) -> Result<TspPaths> {
    let n = dist.len();
    if n == 0 {
        return arg("need at least one vertex");
    }
    if v0 >= n {
        return arg(format!("v0 = {v0} out of range"));
    }
    crate::clustering::Metric::new(dist.clone())?;
    let clients = (0..n).map(|v| vec![v]).collect();
    Ok(TspPaths { dist, v0, clients })
}

impl SatisfactionProblem for TspPaths {
    fn num_clients(&self) -> usize {
        self.dist.len()
    }
    fn num_objects(&self) -> usize {
        self.dist.len()
    }
    fn clients_of(&self, object: usize) -> &[usize] {
        &self.clients[object]
    }
    fn object_times(&self, order: &[usize]) -> Vec<f64> {
        if order.first().is_some_and(|&o| o != self.v0) {
            return vec![f64::INFINITY; order.len()];
        }
        let mut t = 0.0;
        let mut prev = self.v0;
        order
            .iter()
            .map(|&o| {
                t += self.dist[prev][o];
                prev = o;
                t
            })
            .collect()
    }
    fn gamma(&self) -> f64 {
        2.0
    }
    fn min_nonzero_cost(&self) -> f64 {
        let m = self.dist[self.v0]
            .iter()
            .copied()
            .filter(|v| *v > 0.0)
            .fold(f64::INFINITY, f64::min);
        if m.is_finite() {
            m
        } else {
            1.0
        }
    }
    fn full_cost_upper_bound(&self) -> f64 {
        let mut order = vec![self.v0];
        order.extend((0..self.dist.len()).filter(|&v| v != self.v0));
        self.object_times(&order).last().copied().unwrap_or(0.0)
    }
    fn exhaustive_satisfier(&self, budget: f64, cap: f64) -> Result<Satisfier> {
        let n = self.dist.len();
        check_cap("path subsets", (n * n) as f64 * 2f64.powi(n as i32), cap)?;
        let full = 1usize << n;
        let mut dp = vec![f64::INFINITY; full * n];
        let mut parent = vec![usize::MAX; full * n];
        dp[(1 << self.v0) * n + self.v0] = 0.0;
        for mask in 0..full {
            if mask >> self.v0 & 1 == 0 {
                continue;
            }
            for v in 0..n {
                let cur = dp[mask * n + v];
                if !cur.is_finite() {
                    continue;
                }
                for u in 0..n {
                    if mask >> u & 1 == 1 {
                        continue;
                    }
                    let nm = mask | 1 << u;
                    let c = cur + self.dist[v][u];
                    if c < dp[nm * n + u] {
                        dp[nm * n + u] = c;
                        parent[nm * n + u] = v;
                    }
                }
            }
        }
        let mut best: Option<(u32, f64, usize, usize)> = None;
        for mask in 0..full {
            for v in 0..n {
                let c = dp[mask * n + v];
                if c.is_finite() && within(c, budget) {
                    let k = mask.count_ones();
                    let better = match best {
                        None => true,
                        Some((bk, bc, _, _)) => k > bk || k == bk && c < bc,
                    };
                    if better {
                        best = Some((k, c, mask, v));
                    }
                }
            }
        }
        let Some((_, _, mut mask, mut v)) = best else {
            return Ok(Satisfier::default());
        };
        let mut order = Vec::new();
        loop {
            order.push(v);
            let p = parent[mask * n + v];
            if p == usize::MAX {
                break;
            }
            mask &= !(1 << v);
            v = p;
        }
        order.reverse();
        Ok(Satisfier { order })
    }
    fn complete_time_vectors(&self, cap: f64) -> Result<Vec<Vec<f64>>> {
        let n = self.dist.len();
        let fact: f64 = (1..n).map(|v| v as f64).product();
        check_cap("complete paths", fact, cap)?;
        let mut rest: Vec<usize> = (0..n).filter(|&v| v != self.v0).collect();
        let mut out = Vec::new();
        loop {
            let mut order = vec![self.v0];
            order.extend(&rest);
            let sat = Satisfier { order };
            out.push(satisfaction_times(self, &sat)?);
            if !next_permutation(&mut rest) {
                break;
            }
        }
        Ok(out)
    }
    fn object_label(&self, object: usize) -> String {
        format!("v{object}")
    }
}

/// Per-`k` minimum top-k norm of satisfaction times over all complete
/// satisfiers.
pub fn exhaustive_topk_optima(problem: &dyn SatisfactionProblem, cap: f64) -> Result<Vec<f64>> {
    let vecs = problem.complete_time_vectors(cap)?;
    let n = problem.num_clients();
    let mut best = vec![f64::INFINITY; n];
    for v in &vecs {
        for (b, p) in best.iter_mut().zip(crate::norms::top_k_profile(v)) {
            *b = b.min(p);
        }
    }
    Ok(best)
}
