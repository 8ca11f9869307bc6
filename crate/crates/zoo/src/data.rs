//! Bridges the receiver's windowed datasets into engine tensors.

use fiberlab_nn::Tensor;
use fiberlab_sim::windows::WindowedDataset;

use crate::build::window_tensor;

/// Materializes every window as an input tensor plus target 4-vector.
pub fn dataset_tensors(ds: &WindowedDataset) -> (Vec<Tensor>, Vec<[f64; 4]>) {
    let rows = ds.rows();
    let mut inputs = Vec::with_capacity(ds.len());
    let mut targets = Vec::with_capacity(ds.len());
    for i in 0..ds.len() {
        inputs.push(window_tensor(rows, ds.input(i)));
        targets.push(ds.target(i));
    }
    (inputs, targets)
}
