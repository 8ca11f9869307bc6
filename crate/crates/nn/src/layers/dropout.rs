//! Inverted dropout: training-time masking scaled by 1/keep so that
//! inference is the identity.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::tensor::Tensor;

#[derive(Debug, Clone, PartialEq)]
pub struct Dropout {
    pub rate: f64,
}

#[derive(Debug, Clone)]
pub struct DropoutCache {
    /// Mask already scaled by 1/keep; empty in inference mode.
    mask: Vec<f64>,
}

impl Dropout {
    /// In training mode draws a fresh mask from `rng`; without an RNG the
    /// layer passes data through untouched.
    pub fn forward(&self, x: &Tensor, rng: Option<&mut ChaCha8Rng>) -> (Tensor, DropoutCache) {
        match rng {
            Some(rng) if self.rate > 0.0 => {
                let keep = 1.0 - self.rate;
                let inv = 1.0 / keep;
                let mask: Vec<f64> =
                    (0..x.len()).map(|_| if rng.gen::<f64>() < keep { inv } else { 0.0 }).collect();
                let mut y = x.clone();
                for (v, m) in y.as_mut_slice().iter_mut().zip(&mask) {
                    *v *= m;
                }
                (y, DropoutCache { mask })
            }
            _ => (x.clone(), DropoutCache { mask: vec![] }),
        }
    }

    pub fn backward(&self, cache: &DropoutCache, grad_out: &Tensor) -> Tensor {
        if cache.mask.is_empty() {
            return grad_out.clone();
        }
        let mut dx = grad_out.clone();
        for (v, m) in dx.as_mut_slice().iter_mut().zip(&cache.mask) {
            *v *= m;
        }
        dx
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::SeedableRng;

    #[test]
    fn inference_is_identity() {
        let d = Dropout { rate: 0.4 };
        let x = Tensor::from_vec(2, 3, vec![1.0, -2.0, 3.0, 0.5, 0.0, -1.0]);
        let (y, _) = d.forward(&x, None);
        assert_eq!(y, x);
    }

    #[test]
    fn training_masks_scale_by_inverse_keep() {
        let d = Dropout { rate: 0.5 };
        let x = Tensor::from_vec(1, 1000, vec![1.0; 1000]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (y, _) = d.forward(&x, Some(&mut rng));
        for &v in y.as_slice() {
            assert!(v == 0.0 || (v - 2.0).abs() < 1e-12);
        }
        let mean = y.as_slice().iter().sum::<f64>() / 1000.0;
        assert!((mean - 1.0).abs() < 0.1, "inverted scaling keeps the expectation: {mean}");
    }
}
