//! Full-dimensional cells of a hyperplane arrangement restricted to the
//! probability simplex `{λ >= 0, sum λ = 1}` in `R^r`.
//!
//! A hyperplane is given by a coefficient vector `h` and means `h . λ = 0`.
//! Cells are enumerated exactly for `r <= 3`; for larger `r` they are found by
//! random sampling followed by a walk that reflects each found point across
//! every hyperplane.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{arg, check_dim, Result};

/// Points closer than this to a hyperplane (relative to `|h|`) are treated as
/// lying on it.
const SIDE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrangementOptions {
    pub samples: usize,
    pub seed: u64,
}

impl Default for ArrangementOptions {
    fn default() -> Self {
        ArrangementOptions {
            samples: 20_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrangementRegions {
    /// One interior point per cell.
    pub points: Vec<Vec<f64>>,
    /// Strict side (+1 / -1) of each hyperplane; 0 when the hyperplane never
    /// crosses the simplex interior and the point lies on it.
    pub signs: Vec<Vec<i8>>,
    /// `false` when the cells were found by sampling and some may be missing.
    pub exact: bool,
}

fn side(h: &[f64], p: &[f64]) -> i8 {
    let v: f64 = h.iter().zip(p).map(|(a, b)| a * b).sum();
    let scale: f64 = h.iter().map(|a| a.abs()).fold(0.0, f64::max);
    if v > SIDE_TOL * scale {
        1
    } else if v < -SIDE_TOL * scale {
        -1
    } else {
        0
    }
}

fn sign_vector(hyperplanes: &[Vec<f64>], p: &[f64]) -> Vec<i8> {
    hyperplanes.iter().map(|h| side(h, p)).collect()
}

/// Hyperplanes that are constant on the simplex do not cut it.
fn cuts_simplex(h: &[f64]) -> bool {
    let lo = h.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = h.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let scale = lo.abs().max(hi.abs());
    scale > 0.0 && lo < -SIDE_TOL * scale && hi > SIDE_TOL * scale
}

/// Returns one interior point per full-dimensional cell.
pub fn arrangement_regions(
    hyperplanes: &[Vec<f64>],
    r: usize,
    opts: ArrangementOptions,
) -> Result<ArrangementRegions> {
    if r == 0 {
        return arg("simplex dimension must be at least 1");
    }
    for h in hyperplanes {
        check_dim(r, h.len())?;
        if h.iter().any(|v| !v.is_finite()) {
            return arg("hyperplane coefficients must be finite");
        }
    }
    let cutting: Vec<&Vec<f64>> = hyperplanes.iter().filter(|h| cuts_simplex(h)).collect();
    let points = match r {
        1 => vec![vec![1.0]],
        2 => cells_on_segment(&cutting),
        3 => cells_on_triangle(&cutting),
        _ => {
            let pts = sampled_cells(&cutting, r, opts);
            return Ok(finish(hyperplanes, pts, false));
        }
    };
    Ok(finish(hyperplanes, points, true))
}

fn finish(hyperplanes: &[Vec<f64>], points: Vec<Vec<f64>>, exact: bool) -> ArrangementRegions {
    let mut seen = BTreeSet::new();
    let mut out = ArrangementRegions {
        points: Vec::new(),
        signs: Vec::new(),
        exact,
    };
    for p in points {
        let s = sign_vector(hyperplanes, &p);
        if seen.insert(s.clone()) {
            out.points.push(p);
            out.signs.push(s);
        }
    }
    out
}

fn cells_on_segment(cutting: &[&Vec<f64>]) -> Vec<Vec<f64>> {
    // λ = (t, 1 - t); h . λ = h1 + t (h0 - h1).
    let mut roots: Vec<f64> = cutting
        .iter()
        .map(|h| -h[1] / (h[0] - h[1]))
        .filter(|t| *t > 0.0 && *t < 1.0)
        .collect();
    roots.push(0.0);
    roots.push(1.0);
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
    roots
        .windows(2)
        .map(|w| {
            let t = 0.5 * (w[0] + w[1]);
            vec![t, 1.0 - t]
        })
        .collect()
}

type Polygon = Vec<[f64; 2]>;

fn cells_on_triangle(cutting: &[&Vec<f64>]) -> Vec<Vec<f64>> {
    // λ = (u, v, 1 - u - v); h . λ = h2 + u (h0 - h2) + v (h1 - h2).
    let mut cells: Vec<Polygon> = vec![vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]];
    for h in cutting {
        let (a, b, c) = (h[0] - h[2], h[1] - h[2], h[2]);
        let scale = a.abs().max(b.abs()).max(c.abs());
        let f = |p: &[f64; 2]| a * p[0] + b * p[1] + c;
        let mut next = Vec::with_capacity(cells.len() * 2);
        for poly in cells {
            let vals: Vec<f64> = poly.iter().map(f).collect();
            let pos = vals.iter().any(|v| *v > SIDE_TOL * scale);
            let neg = vals.iter().any(|v| *v < -SIDE_TOL * scale);
            if pos && neg {
                let (p, q) = split(&poly, &vals);
                for piece in [p, q] {
                    if area(&piece) > 1e-18 {
                        next.push(piece);
                    }
                }
            } else {
                next.push(poly);
            }
        }
        cells = next;
    }
    cells
        .iter()
        .map(|poly| {
            let k = poly.len() as f64;
            let u = poly.iter().map(|p| p[0]).sum::<f64>() / k;
            let v = poly.iter().map(|p| p[1]).sum::<f64>() / k;
            vec![u, v, 1.0 - u - v]
        })
        .collect()
}

fn split(poly: &Polygon, vals: &[f64]) -> (Polygon, Polygon) {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let n = poly.len();
    for i in 0..n {
        let (p, q) = (poly[i], poly[(i + 1) % n]);
        let (fp, fq) = (vals[i], vals[(i + 1) % n]);
        if fp >= 0.0 {
            pos.push(p);
        }
        if fp <= 0.0 {
            neg.push(p);
        }
        if fp > 0.0 && fq < 0.0 || fp < 0.0 && fq > 0.0 {
            let t = fp / (fp - fq);
            let x = [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])];
            pos.push(x);
            neg.push(x);
        }
    }
    (pos, neg)
}

fn area(poly: &Polygon) -> f64 {
    let n = poly.len();
    let mut s = 0.0;
    for i in 0..n {
        let (p, q) = (poly[i], poly[(i + 1) % n]);
        s += p[0] * q[1] - q[0] * p[1];
    }
    0.5 * s.abs()
}

fn sampled_cells(cutting: &[&Vec<f64>], r: usize, opts: ArrangementOptions) -> Vec<Vec<f64>> {
    let owned: Vec<Vec<f64>> = cutting.iter().map(|h| (*h).clone()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut seen = BTreeSet::new();
    let mut points = Vec::new();
    let mut consider = |p: Vec<f64>, points: &mut Vec<Vec<f64>>| {
        let s = sign_vector(&owned, &p);
        if s.contains(&0) {
            return;
        }
        if seen.insert(s) {
            points.push(p);
        }
    };
    for _ in 0..opts.samples.max(1) {
        let mut p: Vec<f64> = (0..r).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
        let s: f64 = p.iter().sum();
        p.iter_mut().for_each(|v| *v /= s);
        consider(p, &mut points);
    }
    // Reflect each found point across each hyperplane, inside the simplex.
    let mut i = 0;
    while i < points.len() {
        let p = points[i].clone();
        for h in &owned {
            let mean = h.iter().sum::<f64>() / r as f64;
            let ht: Vec<f64> = h.iter().map(|v| v - mean).collect();
            let nn: f64 = ht.iter().map(|v| v * v).sum();
            if nn == 0.0 {
                continue;
            }
            let val: f64 = h.iter().zip(&p).map(|(a, b)| a * b).sum();
            let q: Vec<f64> = p
                .iter()
                .zip(&ht)
                .map(|(pi, hi)| pi - 2.0 * val / nn * hi)
                .collect();
            if q.iter().all(|v| *v > 0.0) {
                consider(q, &mut points);
            }
        }
        i += 1;
    }
    points
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> ArrangementOptions {
        ArrangementOptions::default()
    }

    #[test]
    fn empty_arrangement_has_one_cell() {
        for r in 1..=4 {
            let regions = arrangement_regions(&[], r, opts()).unwrap();
            assert_eq!(regions.points.len(), 1);
        }
    }

    #[test]
    fn one_crossing_hyperplane_on_segment() {
        let regions = arrangement_regions(&[vec![1.0, -1.0]], 2, opts()).unwrap();
        assert_eq!(regions.points.len(), 2);
        assert!(regions.exact);
    }

    #[test]
    fn hyperplane_missing_simplex_is_ignored() {
        let regions = arrangement_regions(&[vec![1.0, 2.0]], 2, opts()).unwrap();
        assert_eq!(regions.points.len(), 1);
    }

    #[test]
    fn lines_through_triangle() {
        // Three medians meet at the centroid: six cells.
        let hs = vec![
            vec![1.0, -1.0, 0.0],
            vec![0.0, 1.0, -1.0],
            vec![1.0, 0.0, -1.0],
        ];
        let regions = arrangement_regions(&hs, 3, opts()).unwrap();
        assert_eq!(regions.points.len(), 6);
        // Two parallel lines: three cells.
        let hs = vec![vec![1.0, -0.5, -0.5], vec![1.0, -2.0, -2.0]];
        assert_eq!(arrangement_regions(&hs, 3, opts()).unwrap().points.len(), 3);
    }

    #[test]
    fn sampling_finds_cells_in_four_dimensions() {
        let hs = vec![vec![1.0, -1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0, -1.0]];
        let regions = arrangement_regions(&hs, 4, opts()).unwrap();
        assert!(!regions.exact);
        assert_eq!(regions.points.len(), 4);
    }

    #[test]
    fn cell_count_respects_bound() {
        let hs: Vec<Vec<f64>> = (0..5)
            .map(|i| vec![1.0, -(i as f64 + 1.0) * 0.3, 0.2 * i as f64 - 0.4])
            .collect();
        let regions = arrangement_regions(&hs, 3, opts()).unwrap();
        assert!(regions.points.len() <= 5 * 5 + 1);
        for p in &regions.points {
            assert!(p.iter().all(|v| *v > 0.0));
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
