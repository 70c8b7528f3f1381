//! Maximum bipartite matching (Hopcroft–Karp) and König vertex covers.

use std::collections::VecDeque;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    /// Partner of each left vertex.
    pub left: Vec<Option<usize>>,
    /// Partner of each right vertex.
    pub right: Vec<Option<usize>>,
    pub size: usize,
}

impl Matching {
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.left
            .iter()
            .enumerate()
            .filter_map(|(u, v)| v.map(|v| (u, v)))
            .collect()
    }
}

fn adjacency(n_left: usize, n_right: usize, edges: &[(usize, usize)]) -> Result<Vec<Vec<usize>>> {
    let mut adj = vec![Vec::new(); n_left];
    for &(u, v) in edges {
        if u >= n_left || v >= n_right {
            return Err(Error::Argument(format!(
                "edge ({u}, {v}) out of range for {n_left} x {n_right} graph"
            )));
        }
        adj[u].push(v);
    }
    for a in adj.iter_mut() {
        a.sort_unstable();
        a.dedup();
    }
    Ok(adj)
}

/// Maximum-cardinality matching. Deterministic: neighbours are scanned in
/// increasing index order.
pub fn max_bipartite_matching(
    n_left: usize,
    n_right: usize,
    edges: &[(usize, usize)],
) -> Result<Matching> {
    let adj = adjacency(n_left, n_right, edges)?;
    let mut ml: Vec<Option<usize>> = vec![None; n_left];
    let mut mr: Vec<Option<usize>> = vec![None; n_right];
    let mut dist = vec![usize::MAX; n_left];
    let mut size = 0;
    loop {
        // BFS layers from free left vertices.
        let mut queue = VecDeque::new();
        for u in 0..n_left {
            if ml[u].is_none() {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                match mr[v] {
                    None => found = true,
                    Some(w) if dist[w] == usize::MAX => {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                    _ => {}
                }
            }
        }
        if !found {
            break;
        }
        let mut next = vec![0usize; n_left];
        for u in 0..n_left {
            if ml[u].is_none() && augment(u, &adj, &mut ml, &mut mr, &mut dist, &mut next) {
                size += 1;
            }
        }
    }
    Ok(Matching {
        left: ml,
        right: mr,
        size,
    })
}

fn augment(
    u: usize,
    adj: &[Vec<usize>],
    ml: &mut [Option<usize>],
    mr: &mut [Option<usize>],
    dist: &mut [usize],
    next: &mut [usize],
) -> bool {
    // Iterative DFS along the layered graph.
    let mut stack = vec![u];
    while let Some(&x) = stack.last() {
        if next[x] >= adj[x].len() {
            dist[x] = usize::MAX;
            stack.pop();
            continue;
        }
        let v = adj[x][next[x]];
        next[x] += 1;
        match mr[v] {
            None => {
                // Flip the path recorded on the stack.
                let mut right = v;
                while let Some(l) = stack.pop() {
                    let prev = ml[l];
                    ml[l] = Some(right);
                    mr[right] = Some(l);
                    match prev {
                        Some(p) => right = p,
                        None => break,
                    }
                }
                return true;
            }
            Some(w) if dist[w] == dist[x] + 1 => stack.push(w),
            _ => {}
        }
    }
    false
}

/// Minimum vertex cover from a maximum matching (König). Returns the covered
/// left and right vertices.
pub fn konig_vertex_cover(
    n_left: usize,
    n_right: usize,
    edges: &[(usize, usize)],
    matching: &Matching,
) -> Result<(Vec<bool>, Vec<bool>)> {
    let adj = adjacency(n_left, n_right, edges)?;
    let mut seen_l = vec![false; n_left];
    let mut seen_r = vec![false; n_right];
    let mut queue: VecDeque<usize> = (0..n_left).filter(|&u| matching.left[u].is_none()).collect();
    queue.iter().for_each(|&u| seen_l[u] = true);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !seen_r[v] && matching.left[u] != Some(v) {
                seen_r[v] = true;
                if let Some(w) = matching.right[v] {
                    if !seen_l[w] {
                        seen_l[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
    }
    let cover_l = seen_l.iter().map(|s| !s).collect();
    Ok((cover_l, seen_r))
}
