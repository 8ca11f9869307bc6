//! Row-major 2-D real tensor. Feature maps are (length x channels),
//! recurrent sequences (time x features), vectors (1 x n).

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Tensor {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(rows * cols, data.len(), "shape/element count mismatch");
        Self { rows, cols, data }
    }

    pub fn row_vector(data: Vec<f64>) -> Self {
        Self { rows: 1, cols: data.len(), data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut f64 {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// Reinterprets the buffer with a new shape of equal element count.
    pub fn reshaped(mut self, rows: usize, cols: usize) -> Self {
        assert_eq!(rows * cols, self.data.len());
        self.rows = rows;
        self.cols = cols;
        self
    }
}

/// out = w * x for a (rows x cols) row-major matrix and a cols-vector.
pub fn matvec(w: &Tensor, x: &[f64], out: &mut [f64]) {
    debug_assert_eq!(w.cols(), x.len());
    debug_assert_eq!(w.rows(), out.len());
    for (r, o) in out.iter_mut().enumerate() {
        let row = w.row(r);
        let mut acc = 0.0;
        for (a, b) in row.iter().zip(x) {
            acc += a * b;
        }
        *o = acc;
    }
}

/// out += w * x.
pub fn matvec_acc(w: &Tensor, x: &[f64], out: &mut [f64]) {
    debug_assert_eq!(w.cols(), x.len());
    debug_assert_eq!(w.rows(), out.len());
    for (r, o) in out.iter_mut().enumerate() {
        let row = w.row(r);
        let mut acc = 0.0;
        for (a, b) in row.iter().zip(x) {
            acc += a * b;
        }
        *o += acc;
    }
}

/// out += w^T * g (back-propagating through w).
pub fn matvec_t_acc(w: &Tensor, g: &[f64], out: &mut [f64]) {
    debug_assert_eq!(w.rows(), g.len());
    debug_assert_eq!(w.cols(), out.len());
    for (r, &gv) in g.iter().enumerate() {
        if gv == 0.0 {
            continue;
        }
        let row = w.row(r);
        for (o, &wv) in out.iter_mut().zip(row) {
            *o += gv * wv;
        }
    }
}

/// dw += g (outer) x, where dw is (len(g) x len(x)) row-major.
pub fn outer_acc(dw: &mut [f64], g: &[f64], x: &[f64]) {
    debug_assert_eq!(dw.len(), g.len() * x.len());
    for (r, &gv) in g.iter().enumerate() {
        if gv == 0.0 {
            continue;
        }
        let row = &mut dw[r * x.len()..(r + 1) * x.len()];
        for (o, &xv) in row.iter_mut().zip(x) {
            *o += gv * xv;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matvec_and_transpose() {
        let w = Tensor::from_vec(2, 3, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let x = [1.0, 0.5, -1.0];
        let mut out = [0.0; 2];
        matvec(&w, &x, &mut out);
        assert_eq!(out, [-1.0, 0.5]);
        let mut back = [0.0; 3];
        matvec_t_acc(&w, &[1.0, -1.0], &mut back);
        assert_eq!(back, [-3.0, -3.0, -3.0]);
    }

    #[test]
    fn outer_product_accumulates() {
        let mut dw = vec![0.0; 6];
        outer_acc(&mut dw, &[2.0, -1.0], &[1.0, 0.0, 3.0]);
        assert_eq!(dw, vec![2.0, 0.0, 6.0, -1.0, 0.0, -3.0]);
    }
}
