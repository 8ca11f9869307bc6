//! Shape adapters: channel-last flattening and the window-matrix to
//! time-step view.

use crate::tensor::Tensor;

/// (rows x cols) -> (1 x rows*cols), channel-last (row-major) order.
pub fn flatten(x: &Tensor) -> Tensor {
    x.clone().reshaped(1, x.len())
}

/// Interleaved window matrix (2*(2M+1) x 2) -> time steps (2M+1 x 4).
///
/// Row pairs (2t, 2t+1) hold Re/Im; columns hold the polarizations, so
/// step t becomes [Re_x, Im_x, Re_y, Im_y].
pub fn to_steps(x: &Tensor) -> Tensor {
    debug_assert_eq!(x.cols(), 2);
    debug_assert_eq!(x.rows() % 2, 0);
    let t_steps = x.rows() / 2;
    let mut out = Tensor::zeros(t_steps, 4);
    for t in 0..t_steps {
        let row = out.row_mut(t);
        row[0] = x.at(2 * t, 0);
        row[1] = x.at(2 * t + 1, 0);
        row[2] = x.at(2 * t, 1);
        row[3] = x.at(2 * t + 1, 1);
    }
    out
}

/// Adjoint of [`to_steps`].
pub fn to_steps_backward(grad: &Tensor) -> Tensor {
    let t_steps = grad.rows();
    let mut out = Tensor::zeros(2 * t_steps, 2);
    for t in 0..t_steps {
        let row = grad.row(t);
        *out.at_mut(2 * t, 0) = row[0];
        *out.at_mut(2 * t + 1, 0) = row[1];
        *out.at_mut(2 * t, 1) = row[2];
        *out.at_mut(2 * t + 1, 1) = row[3];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn steps_view_round_trips() {
        let x = Tensor::from_vec(6, 2, (0..12).map(|v| v as f64).collect());
        let s = to_steps(&x);
        assert_eq!(s.rows(), 3);
        assert_eq!(s.row(0), &[0.0, 2.0, 1.0, 3.0]);
        let back = to_steps_backward(&s);
        assert_eq!(back, x);
    }

    #[test]
    fn flatten_is_channel_last() {
        let x = Tensor::from_vec(2, 3, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let f = flatten(&x);
        assert_eq!(f.rows(), 1);
        assert_eq!(f.as_slice(), &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
    }
}
