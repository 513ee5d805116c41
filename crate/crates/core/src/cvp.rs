//! Closest-vector search and bounded-radius enumeration.
//!
//! Queries run a Schnorr–Euchner depth-first enumeration over an
//! LLL-reduced copy of the basis. The search radius shrinks to the best
//! leaf found so far; the first leaf reached is the nearest-plane point.

use crate::error::{Error, Result};
use crate::lattice::{Lattice, MEMBERSHIP_TOL};
use crate::matrix::Matrix;
use crate::reduce::lll;

/// Default cap on the number of points returned by
/// [`DecoderContext::enumerate_within`].
pub const DEFAULT_ENUM_LIMIT: usize = 10_000_000;
/// Slack added to radii when collecting points on a sphere.
pub const ENUM_SLACK: f64 = 1e-9;
/// Relative slack under which two candidate distances count as a tie.
const TIE_REL: f64 = 1e-12;

/// A decoded lattice point.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosestPoint {
    pub point: Vec<f64>,
    /// Integer coordinates in the original basis of the lattice.
    pub coords: Vec<i64>,
    pub dist2: f64,
}

/// Preprocessed data for repeated queries against one lattice.
#[derive(Debug, Clone)]
pub struct DecoderContext {
    lattice: Lattice,
    /// Reduced basis `R = U·B`.
    reduced: Matrix,
    /// `U`, rows are original coordinates of the reduced basis vectors.
    transform: Vec<Vec<i64>>,
    /// `U⁻¹`, maps original coordinates to reduced coordinates.
    transform_inv: Matrix,
    /// Lower-triangular factor of the reduced Gram matrix.
    lower: Matrix,
    /// Squared diagonal of `lower`.
    diag2: Vec<f64>,
    /// `ratio[k][i] = lower[k][i] / lower[i][i]` for `k > i`.
    ratio: Vec<Vec<f64>>,
}

/// Scratch buffers for one enumeration; reuse it across queries on the
/// same thread.
#[derive(Debug, Clone)]
pub struct Workspace {
    v: Vec<f64>,
    center: Vec<f64>,
    partial: Vec<f64>,
    dx: Vec<f64>,
    ddx: Vec<f64>,
    best: Vec<f64>,
    best_orig: Vec<i64>,
    cand_orig: Vec<i64>,
    target: Vec<f64>,
}

impl Workspace {
    pub fn new(n: usize) -> Self {
        Workspace {
            v: vec![0.0; n],
            center: vec![0.0; n],
            partial: vec![0.0; n + 1],
            dx: vec![0.0; n],
            ddx: vec![0.0; n],
            best: vec![0.0; n],
            best_orig: vec![0; n],
            cand_orig: vec![0; n],
            target: vec![0.0; n],
        }
    }
}

impl DecoderContext {
    pub fn new(lattice: &Lattice) -> Result<Self> {
        let red = lll(lattice.basis());
        let n = lattice.dim();
        let u = Matrix::from_rows(
            &red.transform.iter().map(|r| r.iter().map(|&x| x as f64).collect::<Vec<_>>()).collect::<Vec<_>>(),
        )?;
        let transform_inv = u.inverse()?;
        let gram = red.reduced.gram();
        let lower = match gram.cholesky() {
            Ok(l) => l,
            Err(_) => {
                // Rᵀ = QR gives gram = RᵀR, so Rᵀ is a lower factor up to signs.
                let (_, r) = red.reduced.transpose().thin_qr()?;
                let mut l = r.transpose();
                for j in 0..n {
                    if l[(j, j)] < 0.0 {
                        for i in j..n {
                            l[(i, j)] = -l[(i, j)];
                        }
                    }
                    if l[(j, j)] == 0.0 {
                        return Err(Error::RankDeficient { det: 0.0 });
                    }
                }
                l
            }
        };
        let diag2 = (0..n).map(|i| lower[(i, i)] * lower[(i, i)]).collect();
        let ratio = (0..n)
            .map(|k| (0..n).map(|i| if k > i { lower[(k, i)] / lower[(i, i)] } else { 0.0 }).collect())
            .collect();
        Ok(DecoderContext {
            lattice: lattice.clone(),
            reduced: red.reduced,
            transform: red.transform,
            transform_inv,
            lower,
            diag2,
            ratio,
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    /// Lower-triangular factor of the Gram matrix of the reduced basis.
    pub fn lower_triangular(&self) -> &Matrix {
        &self.lower
    }

    pub fn reduced_basis(&self) -> &Matrix {
        &self.reduced
    }

    pub fn workspace(&self) -> Workspace {
        Workspace::new(self.dim())
    }

    /// Closest lattice point to a target in the row span of the basis.
    pub fn closest_point(&self, target: &[f64]) -> Result<ClosestPoint> {
        let (cp, residual) = self.closest_point_projected(target)?;
        let scale = crate::matrix::norm2(target).sqrt().max(1.0);
        if residual >= MEMBERSHIP_TOL * scale {
            return Err(Error::NotInSpan(residual));
        }
        Ok(cp)
    }

    /// Closest lattice point to the orthogonal projection of `target` onto
    /// the row span; the projection residual is returned alongside and is
    /// not included in `dist2`.
    pub fn closest_point_projected(&self, target: &[f64]) -> Result<(ClosestPoint, f64)> {
        let (z, residual) = self.lattice.coordinates(target)?;
        let mut ws = self.workspace();
        self.decode_coords(&z, &mut ws);
        let coords = ws.best_orig.clone();
        let point = self.lattice.point_i64(&coords);
        let projected = self.lattice.point(&z);
        let dist2 = projected.iter().zip(&point).map(|(a, b)| (a - b) * (a - b)).sum();
        Ok((ClosestPoint { point, coords, dist2 }, residual))
    }

    /// Converts real coordinates in the original basis to reduced
    /// coordinates.
    #[inline]
    pub fn to_reduced(&self, z: &[f64], out: &mut [f64]) {
        let n = self.dim();
        out.iter_mut().for_each(|x| *x = 0.0);
        for i in 0..n {
            let zi = z[i];
            if zi == 0.0 {
                continue;
            }
            for (o, t) in out.iter_mut().zip(self.transform_inv.row(i)) {
                *o += zi * t;
            }
        }
    }

    /// Decodes a point given by real coordinates in the original basis.
    /// Returns the squared distance; the minimizer is left in the
    /// workspace (see [`Workspace`] accessors).
    pub fn decode_coords(&self, z: &[f64], ws: &mut Workspace) -> f64 {
        let mut target = std::mem::take(&mut ws.target);
        self.to_reduced(z, &mut target);
        let d = self.search(&target, ws);
        ws.target = target;
        d
    }

    /// Decodes a point given by reduced coordinates.
    pub fn decode_reduced(&self, zr: &[f64], ws: &mut Workspace) -> f64 {
        self.search(zr, ws)
    }

    /// Reduced-coordinate minimizer of the last decode.
    pub fn last_reduced<'a>(&self, ws: &'a Workspace) -> &'a [f64] {
        &ws.best
    }

    /// Original-basis integer coordinates of the last decode.
    pub fn last_coords<'a>(&self, ws: &'a Workspace) -> &'a [i64] {
        &ws.best_orig
    }

    /// Ambient difference `(zr − v)·R` between a reduced-coordinate target
    /// and the last minimizer.
    pub fn error_vector(&self, zr: &[f64], ws: &Workspace, out: &mut [f64]) {
        out.iter_mut().for_each(|x| *x = 0.0);
        for i in 0..self.dim() {
            let w = zr[i] - ws.best[i];
            if w == 0.0 {
                continue;
            }
            for (o, r) in out.iter_mut().zip(self.reduced.row(i)) {
                *o += w * r;
            }
        }
    }

    fn to_original(&self, v: &[f64], out: &mut [i64]) {
        out.iter_mut().for_each(|x| *x = 0);
        for (i, &vi) in v.iter().enumerate() {
            let vi = vi as i64;
            if vi == 0 {
                continue;
            }
            for (o, t) in out.iter_mut().zip(&self.transform[i]) {
                *o += vi * t;
            }
        }
    }

    #[inline]
    fn center_at(&self, level: usize, zr: &[f64], v: &[f64]) -> f64 {
        let n = self.dim();
        let mut c = zr[level];
        for k in level + 1..n {
            c -= (v[k] - zr[k]) * self.ratio[k][level];
        }
        c
    }

    fn search(&self, zr: &[f64], ws: &mut Workspace) -> f64 {
        let n = self.dim();
        let mut best = f64::INFINITY;
        let mut have_best = false;
        let mut i = n - 1;
        ws.partial[n] = 0.0;
        let c = zr[i];
        ws.center[i] = c;
        start_level(ws, i, c);
        loop {
            let diff = ws.v[i] - ws.center[i];
            let d = ws.partial[i + 1] + self.diag2[i] * diff * diff;
            let slack = TIE_REL * (1.0 + best.min(1e300));
            if d <= best + slack {
                if i == 0 {
                    if d < best - slack || !have_best {
                        best = d;
                        have_best = true;
                        ws.best.copy_from_slice(&ws.v);
                        let mut orig = std::mem::take(&mut ws.best_orig);
                        self.to_original(&ws.v, &mut orig);
                        ws.best_orig = orig;
                    } else {
                        let mut cand = std::mem::take(&mut ws.cand_orig);
                        self.to_original(&ws.v, &mut cand);
                        if cand < ws.best_orig {
                            ws.best_orig.copy_from_slice(&cand);
                            ws.best.copy_from_slice(&ws.v);
                            best = best.min(d);
                        }
                        ws.cand_orig = cand;
                    }
                    next_sibling(ws, 0);
                } else {
                    ws.partial[i] = d;
                    i -= 1;
                    let c = self.center_at(i, zr, &ws.v);
                    ws.center[i] = c;
                    start_level(ws, i, c);
                }
            } else {
                i += 1;
                if i == n {
                    break;
                }
                next_sibling(ws, i);
            }
        }
        best
    }

    /// All lattice points within squared distance `radius2` (plus
    /// [`ENUM_SLACK`]) of `center`, which must lie in the row span.
    pub fn enumerate_within(&self, center: &[f64], radius2: f64) -> Result<Vec<ClosestPoint>> {
        self.enumerate_within_limit(center, radius2, DEFAULT_ENUM_LIMIT)
    }

    pub fn enumerate_within_limit(&self, center: &[f64], radius2: f64, limit: usize) -> Result<Vec<ClosestPoint>> {
        if !(radius2 > 0.0) {
            return Err(Error::InvalidArgument(format!("radius² must be positive, got {radius2}")));
        }
        let z = self.lattice.coordinates_in_span(center)?;
        let mut zr = vec![0.0; self.dim()];
        self.to_reduced(&z, &mut zr);
        let found = self.enumerate_reduced(&zr, radius2 + ENUM_SLACK, limit)?;
        let projected = self.lattice.point(&z);
        let mut out: Vec<ClosestPoint> = found
            .into_iter()
            .map(|coords| {
                let point = self.lattice.point_i64(&coords);
                let dist2 = projected.iter().zip(&point).map(|(a, b)| (a - b) * (a - b)).sum();
                ClosestPoint { point, coords, dist2 }
            })
            .collect();
        out.sort_by(|a, b| a.dist2.total_cmp(&b.dist2).then_with(|| a.coords.cmp(&b.coords)));
        Ok(out)
    }

    /// Original-basis coordinates of every lattice point within squared
    /// distance `bound` of the reduced-coordinate target `zr`.
    pub fn enumerate_reduced(&self, zr: &[f64], bound: f64, limit: usize) -> Result<Vec<Vec<i64>>> {
        let n = self.dim();
        let mut ws = self.workspace();
        let mut found = Vec::new();
        let mut i = n - 1;
        ws.partial[n] = 0.0;
        ws.center[i] = zr[i];
        start_level(&mut ws, i, zr[i]);
        loop {
            let diff = ws.v[i] - ws.center[i];
            let d = ws.partial[i + 1] + self.diag2[i] * diff * diff;
            if d <= bound {
                if i == 0 {
                    if found.len() == limit {
                        return Err(Error::TooManyPoints(limit));
                    }
                    let mut orig = vec![0; n];
                    self.to_original(&ws.v, &mut orig);
                    found.push(orig);
                    next_sibling(&mut ws, 0);
                } else {
                    ws.partial[i] = d;
                    i -= 1;
                    let c = self.center_at(i, zr, &ws.v);
                    ws.center[i] = c;
                    start_level(&mut ws, i, c);
                }
            } else {
                i += 1;
                if i == n {
                    break;
                }
                next_sibling(&mut ws, i);
            }
        }
        Ok(found)
    }
}

#[inline]
fn start_level(ws: &mut Workspace, i: usize, c: f64) {
    let v = c.round();
    ws.v[i] = v;
    let s = if c >= v { 1.0 } else { -1.0 };
    ws.dx[i] = s;
    ws.ddx[i] = s;
}

#[inline]
fn next_sibling(ws: &mut Workspace, i: usize) {
    ws.v[i] += ws.dx[i];
    ws.ddx[i] = -ws.ddx[i];
    ws.dx[i] = ws.ddx[i] - ws.dx[i];
}
