//! Seeded weight initialization: Glorot-uniform for feedforward weights,
//! orthogonal for recurrent state matrices, zeros for biases.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::tensor::Tensor;

/// Uniform(-limit, limit) with limit = sqrt(6 / (fan_in + fan_out)).
pub fn glorot_uniform(rows: usize, cols: usize, fan_in: usize, fan_out: usize, rng: &mut ChaCha8Rng) -> Tensor {
    let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
    let data = (0..rows * cols).map(|_| rng.gen_range(-limit..limit)).collect();
    Tensor::from_vec(rows, cols, data)
}

/// Random orthogonal (n x n) matrix: modified Gram-Schmidt on a Gaussian
/// draw with the sign convention that makes the factorization canonical.
pub fn orthogonal(n: usize, rng: &mut ChaCha8Rng) -> Tensor {
    let mut cols: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..n).map(|_| StandardNormal.sample(rng)).collect())
        .collect();
    for j in 0..n {
        for i in 0..j {
            let dot: f64 = cols[j].iter().zip(&cols[i]).map(|(a, b)| a * b).sum();
            let (head, tail) = cols.split_at_mut(j);
            for (v, u) in tail[0].iter_mut().zip(&head[i]) {
                *v -= dot * u;
            }
        }
        let norm: f64 = cols[j].iter().map(|v| v * v).sum::<f64>().sqrt();
        let sign = if cols[j][j] < 0.0 { -1.0 } else { 1.0 };
        for v in cols[j].iter_mut() {
            *v *= sign / norm;
        }
    }
    let mut t = Tensor::zeros(n, n);
    for (j, col) in cols.iter().enumerate() {
        for i in 0..n {
            *t.at_mut(i, j) = col[i];
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::SeedableRng;

    #[test]
    fn orthogonal_matrix_has_orthonormal_columns() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let q = orthogonal(24, &mut rng);
        for a in 0..24 {
            for b in 0..24 {
                let dot: f64 = (0..24).map(|i| q.at(i, a) * q.at(i, b)).sum();
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() < 1e-10, "columns {a},{b}: {dot}");
            }
        }
    }

    #[test]
    fn glorot_respects_limit_and_seed() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let w = glorot_uniform(10, 20, 20, 10, &mut rng);
        let limit = (6.0f64 / 30.0).sqrt();
        for &v in w.as_slice() {
            assert!(v.abs() < limit);
        }
        let mut rng2 = ChaCha8Rng::seed_from_u64(5);
        let w2 = glorot_uniform(10, 20, 20, 10, &mut rng2);
        assert_eq!(w, w2);
    }
}
