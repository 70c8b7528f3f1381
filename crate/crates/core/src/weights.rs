//! Deterministic samplers for ordered-norm weight vectors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::norms::WeightVector;

/// Draws `count` weight vectors of dimension `d` from a fixed seed. The draws
/// cycle through three shapes: sorted uniforms, sums of sparse exponential
/// increments (mixtures of top-k indicators) and power decays `i^-γ`.
pub fn sample_weights(d: usize, count: usize, seed: u64) -> Vec<WeightVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|i| sample_one(d, i % 3, &mut rng)).collect()
}

fn sample_one(d: usize, shape: usize, rng: &mut ChaCha8Rng) -> WeightVector {
    let mut w: Vec<f64> = match shape {
        0 => (0..d).map(|_| rng.random::<f64>()).collect(),
        1 => {
            let keep = rng.random_range(0.1..1.0);
            let mut acc = 0.0;
            let mut inc: Vec<f64> = (0..d)
                .map(|_| {
                    if rng.random::<f64>() < keep {
                        -(1.0 - rng.random::<f64>()).ln()
                    } else {
                        0.0
                    }
                })
                .collect();
            inc.reverse();
            let mut w: Vec<f64> = inc
                .into_iter()
                .map(|v| {
                    acc += v;
                    acc
                })
                .collect();
            w.reverse();
            w
        }
        _ => {
            let gamma = rng.random_range(0.0..3.0);
            (1..=d).map(|i| (i as f64).powf(-gamma)).collect()
        }
    };
    w.sort_by(|a, b| b.total_cmp(a));
    if w[0] <= 0.0 {
        w[0] = 1.0;
    }
    WeightVector::new(w).expect("sampled weights are valid")
}
