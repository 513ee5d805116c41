//! Helpers shared by the integration test targets.

use lattice_glue::Lattice;
use lattice_glue::make_lattice;
use lattice_glue::matrix::Matrix;

/// Reasonably conditioned random lattice, or `None`.
pub fn well_conditioned(b: Matrix) -> Option<Lattice> {
    let l = make_lattice(b).ok()?;
    let hadamard: f64 = (0..l.dim()).map(|i| l.gram()[(i, i)]).product();
    (l.det_gram() / hadamard > 1e-3).then_some(l)
}

/// Exhaustive closest point over the box of coordinates that can beat the
/// rounded-coordinate point. Returns `None` if the box is too large.
pub fn brute_force(l: &Lattice, t: &[f64]) -> Option<(Vec<i64>, f64)> {
    let n = l.dim();
    let (u, _) = l.coordinates(t).unwrap();
    let center: Vec<i64> = u.iter().map(|x| x.round() as i64).collect();
    let p = l.point_i64(&center);
    let r2: f64 = t.iter().zip(&p).map(|(a, b)| (a - b) * (a - b)).sum();
    // |u*_i − u_i| ≤ r·‖d_i‖ with d_i the dual basis rows.
    let dual = l.dual().ok()?;
    let half: Vec<i64> = (0..n)
        .map(|i| {
            let d = dual.basis().row(i).iter().map(|x| x * x).sum::<f64>().sqrt();
            (r2.sqrt() * d).ceil() as i64 + 1
        })
        .collect();
    let count: i64 = half.iter().map(|h| 2 * h + 1).product();
    if count > 200_000 {
        return None;
    }
    let lo: Vec<i64> = (0..n).map(|i| (u[i].floor() as i64) - half[i]).collect();
    let hi: Vec<i64> = (0..n).map(|i| (u[i].ceil() as i64) + half[i]).collect();
    let mut cur = lo.clone();
    let mut best: Option<(Vec<i64>, f64)> = None;
    loop {
        let q = l.point_i64(&cur);
        let d: f64 = t.iter().zip(&q).map(|(a, b)| (a - b) * (a - b)).sum();
        if best.as_ref().map_or(true, |(_, bd)| d < *bd) {
            best = Some((cur.clone(), d));
        }
        let mut k = 0;
        loop {
            if k == n {
                return best;
            }
            cur[k] += 1;
            if cur[k] <= hi[k] {
                break;
            }
            cur[k] = lo[k];
            k += 1;
        }
    }
}
