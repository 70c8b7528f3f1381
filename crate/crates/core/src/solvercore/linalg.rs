//! Square linear systems by Gaussian elimination with partial pivoting.

use crate::error::{check_dim, Error, Result};

/// Relative pivot threshold below which a system is declared singular.
pub const SINGULAR_TOL: f64 = 1e-11;
/// Relative residual accepted after the solve.
pub const RESIDUAL_TOL: f64 = 1e-8;

/// Solves `m x = b`. Fails with [`Error::Numeric`] when a pivot falls below
/// `1e-11` times the largest entry of `m`, or when the residual check fails.
pub fn solve_square_system(m: &[Vec<f64>], b: &[f64]) -> Result<Vec<f64>> {
    let n = m.len();
    check_dim(n, b.len())?;
    for row in m {
        check_dim(n, row.len())?;
    }
    let scale = m
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |a, v| a.max(v.abs()));
    if n == 0 {
        return Ok(Vec::new());
    }
    if scale == 0.0 {
        return Err(Error::Numeric("singular system".into()));
    }
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut x = b.to_vec();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()).then(j.cmp(&i)))
            .unwrap();
        if a[piv][col].abs() < SINGULAR_TOL * scale {
            return Err(Error::Numeric("singular system".into()));
        }
        a.swap(col, piv);
        x.swap(col, piv);
        for i in col + 1..n {
            let f = a[i][col] / a[col][col];
            if f != 0.0 {
                for j in col..n {
                    a[i][j] -= f * a[col][j];
                }
                x[i] -= f * x[col];
            }
        }
    }
    for col in (0..n).rev() {
        let s: f64 = (col + 1..n).map(|j| a[col][j] * x[j]).sum();
        x[col] = (x[col] - s) / a[col][col];
    }
    let bmax = b.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let xmax = x.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    for (row, bi) in m.iter().zip(b) {
        let r: f64 = row.iter().zip(&x).map(|(p, q)| p * q).sum::<f64>() - bi;
        if r.abs() > RESIDUAL_TOL * (1.0 + bmax + scale * xmax) {
            return Err(Error::Numeric(format!("residual {r:e} too large")));
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn solves_two_by_two() {
        let x = solve_square_system(&[vec![2.0, 1.0], vec![1.0, 3.0]], &[3.0, 5.0]).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-12 && (x[1] - 1.4).abs() < 1e-12);
    }

    #[test]
    fn detects_singular() {
        let r = solve_square_system(&[vec![1.0, 2.0], vec![2.0, 4.0]], &[1.0, 2.0]);
        assert!(matches!(r, Err(Error::Numeric(_))));
    }

    #[test]
    fn needs_pivoting() {
        let x = solve_square_system(&[vec![0.0, 1.0], vec![1.0, 0.0]], &[2.0, 3.0]).unwrap();
        assert_eq!(x, vec![3.0, 2.0]);
    }

    proptest! {
        #[test]
        fn diagonally_dominant_systems_round_trip(
            raw in proptest::collection::vec(-1.0f64..1.0, 16),
            xs in proptest::collection::vec(-5.0f64..5.0, 4),
        ) {
            let mut m = vec![vec![0.0; 4]; 4];
            for i in 0..4 {
                for j in 0..4 {
                    m[i][j] = raw[i * 4 + j] + if i == j { 5.0 } else { 0.0 };
                }
            }
            let b: Vec<f64> = m.iter().map(|r| r.iter().zip(&xs).map(|(a, x)| a * x).sum()).collect();
            let x = solve_square_system(&m, &b).unwrap();
            for (p, q) in x.iter().zip(&xs) {
                prop_assert!((p - q).abs() < 1e-9);
            }
        }
    }
}
