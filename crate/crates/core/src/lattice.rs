//! The [`Lattice`] type: a generator matrix with its Gram matrix,
//! determinant and a cached coordinate map.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::matrix::{norm2, Matrix};

/// Tolerance for membership and coordinate identities.
pub const MEMBERSHIP_TOL: f64 = 1e-9;
/// Relative threshold on `det(gram)` below which a basis is rank deficient.
pub const RANK_TOL: f64 = 1e-12;
/// Largest admissible condition estimate of the Gram matrix when dualizing.
pub const MAX_CONDITION: f64 = 1e12;

/// A lattice `{u·B : u ∈ ℤⁿ}` given by an `n×m` generator matrix `B`
/// with linearly independent rows.
///
/// Immutable after construction; clones share the cached data.
#[derive(Clone)]
pub struct Lattice {
    inner: Arc<Inner>,
}

struct Inner {
    label: String,
    basis: Matrix,
    gram: Matrix,
    det_gram: f64,
    volume: f64,
    /// `m×n` map with `u = x·coord_map` for `x` in the row span.
    coord_map: Matrix,
}

impl Lattice {
    /// Validates `basis` and derives Gram matrix, determinant and volume.
    pub fn new(basis: Matrix) -> Result<Self> {
        Self::with_label(basis, "unnamed")
    }

    pub fn with_label(basis: Matrix, label: impl Into<String>) -> Result<Self> {
        let (n, m) = (basis.rows(), basis.cols());
        if n > m {
            return Err(Error::DimensionMismatch(format!(
                "{n} basis rows cannot be independent in {m}-dimensional space"
            )));
        }
        let gram = basis.gram();
        // Compare against the product of squared row norms (Hadamard bound).
        let scale: f64 = (0..n).map(|i| gram[(i, i)]).product();
        let det_gram = gram.det()?;
        if !(det_gram > RANK_TOL * scale) {
            return Err(Error::RankDeficient { det: det_gram });
        }
        let coord_map = if n == m {
            basis.inverse()?
        } else {
            // Bᵀ = QR, so B = RᵀQᵀ and the pseudoinverse is Q·R⁻ᵀ.
            let (q, r) = basis.transpose().thin_qr()?;
            q.mul(&r.inverse()?.transpose())?
        };
        Ok(Lattice {
            inner: Arc::new(Inner {
                label: label.into(),
                volume: det_gram.sqrt(),
                basis,
                gram,
                det_gram,
                coord_map,
            }),
        })
    }

    pub fn label(&self) -> &str {
        &self.inner.label
    }

    /// Same lattice under a different name.
    pub fn relabeled(&self, label: impl Into<String>) -> Lattice {
        Lattice {
            inner: Arc::new(Inner {
                label: label.into(),
                basis: self.inner.basis.clone(),
                gram: self.inner.gram.clone(),
                det_gram: self.inner.det_gram,
                volume: self.inner.volume,
                coord_map: self.inner.coord_map.clone(),
            }),
        }
    }

    pub fn basis(&self) -> &Matrix {
        &self.inner.basis
    }

    pub fn gram(&self) -> &Matrix {
        &self.inner.gram
    }

    pub fn det_gram(&self) -> f64 {
        self.inner.det_gram
    }

    /// Volume of the Voronoi region, `sqrt(det gram)`.
    pub fn volume(&self) -> f64 {
        self.inner.volume
    }

    /// Lattice dimension `n`.
    pub fn dim(&self) -> usize {
        self.inner.basis.rows()
    }

    /// Dimension `m` of the embedding space.
    pub fn ambient_dim(&self) -> usize {
        self.inner.basis.cols()
    }

    /// Lattice point `u·B`.
    pub fn point(&self, coords: &[f64]) -> Vec<f64> {
        self.inner.basis.vec_mul(coords)
    }

    pub fn point_i64(&self, coords: &[i64]) -> Vec<f64> {
        let c: Vec<f64> = coords.iter().map(|&x| x as f64).collect();
        self.point(&c)
    }

    /// Real coordinates of `x` in the basis together with the residual
    /// `‖x − u·B‖` of the least-squares solve.
    pub fn coordinates(&self, x: &[f64]) -> Result<(Vec<f64>, f64)> {
        if x.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch(format!(
                "point has length {}, lattice lives in dimension {}",
                x.len(),
                self.ambient_dim()
            )));
        }
        let u = self.inner.coord_map.vec_mul(x);
        let back = self.point(&u);
        let residual = x.iter().zip(&back).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        Ok((u, residual))
    }

    /// Coordinates of a point required to lie in the row span.
    pub fn coordinates_in_span(&self, x: &[f64]) -> Result<Vec<f64>> {
        let (u, residual) = self.coordinates(x)?;
        let scale = norm2(x).sqrt().max(1.0);
        if residual >= MEMBERSHIP_TOL * scale {
            return Err(Error::NotInSpan(residual));
        }
        Ok(u)
    }

    /// Returns the integer coordinates of `x` if it is a lattice point.
    pub fn membership(&self, x: &[f64]) -> Result<Option<Vec<i64>>> {
        let u = self.coordinates_in_span(x)?;
        let rounded: Vec<f64> = u.iter().map(|c| c.round()).collect();
        let dev = u.iter().zip(&rounded).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if dev < MEMBERSHIP_TOL {
            Ok(Some(rounded.iter().map(|&c| c as i64).collect()))
        } else {
            Ok(None)
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        matches!(self.membership(x), Ok(Some(_)))
    }

    /// The dual lattice generated by `A⁻¹·B`.
    pub fn dual(&self) -> Result<Lattice> {
        let a = self.gram();
        let a_inv = a.inverse()?;
        let condition = a.frobenius() * a_inv.frobenius();
        if condition > MAX_CONDITION {
            return Err(Error::IllConditioned(condition));
        }
        Lattice::with_label(a_inv.mul(self.basis())?, format!("{}*", self.label()))
    }

    /// Cartesian product with a block-diagonal generator matrix.
    pub fn product(&self, other: &Lattice) -> Lattice {
        let basis = Matrix::block_diag(self.basis(), other.basis());
        let label = format!("{}x{}", self.label(), other.label());
        // Rows of both factors stay independent, so this cannot fail.
        Lattice::with_label(basis, label).expect("product of valid lattices is valid")
    }

    pub fn scaled(&self, c: f64) -> Result<Lattice> {
        Lattice::with_label(self.basis().scaled(c), format!("{}*{c}", self.label()))
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lattice")
            .field("label", &self.label())
            .field("dim", &self.dim())
            .field("det_gram", &self.det_gram())
            .field("basis", self.basis())
            .finish()
    }
}

/// Convenience alias mirroring the free-function form of the constructor.
pub fn make_lattice(basis: Matrix) -> Result<Lattice> {
    Lattice::new(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn identity_lattice() {
        let z = make_lattice(Matrix::identity(6)).unwrap();
        assert_eq!(z.det_gram(), 1.0);
        assert_eq!(z.volume(), 1.0);
    }

    #[test]
    fn named_determinants() {
        let e6 = catalog::e6();
        assert!((e6.det_gram() - 3.0).abs() < 1e-12);
        assert!((e6.volume() - 3f64.sqrt()).abs() < 1e-12);
        assert!((catalog::d6().det_gram() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_bases() {
        let dep = Matrix::from_rows(&[[1.0, 2.0, 0.0], [2.0, 4.0, 0.0]]).unwrap();
        assert!(matches!(make_lattice(dep), Err(Error::RankDeficient { .. })));
        let tall = Matrix::from_rows(&[[1.0], [2.0]]).unwrap();
        assert!(matches!(make_lattice(tall), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn duals() {
        let z = make_lattice(Matrix::identity(4)).unwrap();
        assert!(z.dual().unwrap().gram().max_abs_diff(&Matrix::identity(4)) < 1e-12);
        let e6d = catalog::e6().dual().unwrap();
        assert!((e6d.det_gram() - 1.0 / 3.0).abs() < 1e-12);
        let glued = catalog::glued_e6e6().dual().unwrap();
        assert!((glued.det_gram() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn ill_conditioned_dual() {
        let b = Matrix::from_rows(&[[1.0, 0.0], [0.0, 1e-7]]).unwrap();
        let l = make_lattice(b).unwrap();
        assert!(matches!(l.dual(), Err(Error::IllConditioned(_))));
    }

    #[test]
    fn products() {
        let z1 = make_lattice(Matrix::identity(1)).unwrap();
        let z2 = z1.product(&z1);
        assert_eq!(z2.dim(), 2);
        assert_eq!(z2.det_gram(), 1.0);
        assert!((catalog::e6().product(&catalog::e6()).det_gram() - 9.0).abs() < 1e-9);
        assert!((catalog::d6().product(&catalog::d6()).det_gram() - 16.0).abs() < 1e-9);
    }

    #[test]
    fn membership_examples() {
        let d6 = catalog::d6();
        assert_eq!(d6.membership(&[2.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap(), Some(vec![1, 0, 0, 0, 0, 0]));
        let e6 = catalog::e6();
        let s = 3f64.sqrt() / 6.0;
        let g1 = [-0.5, -0.5, -0.5, -0.5, -0.5, s];
        let g2 = [0.5, 0.5, 0.5, 0.5, 0.5, -s];
        assert_eq!(e6.membership(&g1).unwrap(), None);
        let sum: Vec<f64> = g1.iter().zip(&g2).map(|(a, b)| a + b).collect();
        assert!(e6.membership(&sum).unwrap().is_some());
    }

    #[test]
    fn membership_outside_span() {
        let b = Matrix::from_rows(&[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]).unwrap();
        let l = make_lattice(b).unwrap();
        assert_eq!(l.membership(&[1.0, 1.0, 0.0]).unwrap(), Some(vec![1, 1]));
        assert!(matches!(l.membership(&[1.0, 1.0, 0.5]), Err(Error::NotInSpan(_))));
    }
}
