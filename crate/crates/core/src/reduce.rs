//! Floating-point LLL reduction.
//!
//! [`lll`] reduces an independent basis and records the unimodular change of
//! basis. [`lll_generating_set`] accepts linearly dependent generators and
//! drops the vectors that collapse to zero, which gives a second,
//! exact-arithmetic-free route to a basis of a glued lattice.

use crate::matrix::{dot, norm2, Matrix};

/// Lovász parameter used throughout.
pub const DELTA: f64 = 0.99;

/// Output of [`lll`]: `reduced = transform · basis` with `transform`
/// unimodular.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub reduced: Matrix,
    pub transform: Vec<Vec<i64>>,
}

struct Work {
    vecs: Vec<Vec<f64>>,
    // Integer combination of the input rows producing each vector.
    combos: Vec<Vec<i64>>,
}

impl Work {
    fn gram_schmidt(&self, upto: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
        let mut star: Vec<Vec<f64>> = Vec::with_capacity(upto + 1);
        let mut norms = Vec::with_capacity(upto + 1);
        for i in 0..=upto {
            let mut v = self.vecs[i].clone();
            for j in 0..i {
                let mu = dot(&self.vecs[i], &star[j]) / norms[j];
                for (x, s) in v.iter_mut().zip(&star[j]) {
                    *x -= mu * s;
                }
            }
            norms.push(norm2(&v));
            star.push(v);
        }
        (star, norms)
    }

    fn sub(&mut self, k: usize, j: usize, q: i64) {
        let (src, src_c) = (self.vecs[j].clone(), self.combos[j].clone());
        for (x, s) in self.vecs[k].iter_mut().zip(&src) {
            *x -= q as f64 * s;
        }
        for (x, s) in self.combos[k].iter_mut().zip(&src_c) {
            *x -= q * s;
        }
    }

    fn size_reduce(&mut self, k: usize, star: &[Vec<f64>], norms: &[f64]) {
        for j in (0..k).rev() {
            let mu = dot(&self.vecs[k], &star[j]) / norms[j];
            let q = mu.round();
            if q != 0.0 {
                self.sub(k, j, q as i64);
            }
        }
    }

    /// Runs LLL; when `drop_zero` is set, vectors whose norm collapses below
    /// `zero_tol` are removed.
    fn run(&mut self, drop_zero: bool, zero_tol: f64) {
        if self.vecs.is_empty() {
            return;
        }
        if drop_zero {
            self.drop_zeros_from(0, zero_tol);
        }
        let mut k = 1;
        let mut guard = 0usize;
        while k < self.vecs.len() {
            guard += 1;
            assert!(guard < 10_000_000, "LLL failed to converge");
            let (star, norms) = self.gram_schmidt(k - 1);
            self.size_reduce(k, &star, &norms);
            if drop_zero && norm2(&self.vecs[k]) < zero_tol {
                self.vecs.remove(k);
                self.combos.remove(k);
                continue;
            }
            let (star, norms) = self.gram_schmidt(k);
            let mu = dot(&self.vecs[k], &star[k - 1]) / norms[k - 1];
            if norms[k] < (DELTA - mu * mu) * norms[k - 1] {
                self.vecs.swap(k, k - 1);
                self.combos.swap(k, k - 1);
                k = (k - 1).max(1);
            } else {
                k += 1;
            }
        }
    }

    fn drop_zeros_from(&mut self, start: usize, zero_tol: f64) {
        let mut i = start;
        while i < self.vecs.len() {
            if norm2(&self.vecs[i]) < zero_tol {
                self.vecs.remove(i);
                self.combos.remove(i);
            } else {
                i += 1;
            }
        }
    }
}

/// LLL-reduces the rows of an independent basis.
pub fn lll(basis: &Matrix) -> Reduction {
    let n = basis.rows();
    let mut w = Work {
        vecs: basis.row_vecs(),
        combos: (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect(),
    };
    w.run(false, 0.0);
    Reduction {
        reduced: Matrix::from_rows(&w.vecs).expect("reduced basis keeps its shape"),
        transform: w.combos,
    }
}

/// Reduces an arbitrary generating set of a lattice to a basis, removing
/// the vectors that become zero.
pub fn lll_generating_set(generators: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let scale = generators.iter().map(|v| norm2(v)).fold(0.0, f64::max).max(1.0);
    let n = generators.len();
    let mut w = Work {
        vecs: generators.to_vec(),
        combos: (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect(),
    };
    w.run(true, 1e-12 * scale);
    w.vecs
}
