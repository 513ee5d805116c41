//! Voronoi-region geometry: relevant vectors, minimal vectors, packing
//! and covering figures, hole checks and coset shell counts.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cvp::{DecoderContext, ENUM_SLACK};
use crate::error::{Error, Result};
use crate::glue::GlueVector;
use crate::lattice::Lattice;
use crate::matrix::norm2;
use crate::rng::substream;

/// Largest dimension for which relevant vectors are computed (2ⁿ − 1
/// closest-point queries).
pub const MAX_RELEVANT_DIM: usize = 16;
/// Absolute tolerance when comparing squared norms.
pub const NORM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct RelevantVector {
    pub coords: Vec<i64>,
    pub vector: Vec<f64>,
    pub norm2: f64,
}

/// Voronoi-relevant vectors by the coset-midpoint test: for every nonzero
/// class `c` of `L/2L`, the point `c·B/2` is decoded; the class contributes
/// `±v` exactly when it has two closest lattice points.
pub fn relevant_vectors(lattice: &Lattice) -> Result<Vec<RelevantVector>> {
    let n = lattice.dim();
    if n > MAX_RELEVANT_DIM {
        return Err(Error::DimensionTooLarge { dim: n, max: MAX_RELEVANT_DIM });
    }
    let ctx = DecoderContext::new(lattice)?;
    let per_class: Vec<Result<Vec<RelevantVector>>> = (1u64..(1u64 << n))
        .into_par_iter()
        .map_init(
            || ctx.workspace(),
            |ws, class| {
                let half: Vec<f64> = (0..n).map(|i| if class >> i & 1 == 1 { 0.5 } else { 0.0 }).collect();
                let mut zr = vec![0.0; n];
                ctx.to_reduced(&half, &mut zr);
                let best = ctx.decode_reduced(&zr, ws);
                let minimizers = ctx.enumerate_reduced(&zr, best + ENUM_SLACK, 3)
                    .or_else(|e| if matches!(e, Error::TooManyPoints(_)) { Ok(Vec::new()) } else { Err(e) })?;
                if minimizers.len() != 2 {
                    return Ok(Vec::new());
                }
                let twice: Vec<i64> = (0..n).map(|i| (class >> i & 1) as i64).collect();
                let coords: Vec<i64> = twice.iter().zip(&minimizers[0]).map(|(c, p)| c - 2 * p).collect();
                let vector = lattice.point_i64(&coords);
                let neg_coords: Vec<i64> = coords.iter().map(|c| -c).collect();
                let neg = vector.iter().map(|x| -x).collect();
                let nn = norm2(&vector);
                Ok(vec![
                    RelevantVector { coords, vector, norm2: nn },
                    RelevantVector { coords: neg_coords, vector: neg, norm2: nn },
                ])
            },
        )
        .collect();
    let mut out = Vec::new();
    for r in per_class {
        out.extend(r?);
    }
    Ok(out)
}

/// Smallest nonzero squared norm and the number of vectors attaining it.
pub fn minimal_vectors(lattice: &Lattice) -> Result<(f64, usize)> {
    Ok(minimal_from_relevant(&relevant_vectors(lattice)?))
}

fn minimal_from_relevant(rel: &[RelevantVector]) -> (f64, usize) {
    let min = rel.iter().map(|r| r.norm2).fold(f64::INFINITY, f64::min);
    let kissing = rel.iter().filter(|r| (r.norm2 - min).abs() <= NORM_TOL).count();
    (min, kissing)
}

/// Volume of the `n`-ball of radius `r`.
pub fn ball_volume(n: usize, r: f64) -> f64 {
    // V_0 = 1, V_1 = 2r, V_n = V_{n-2}·2π r²/n
    let mut v = if n % 2 == 0 { 1.0 } else { 2.0 * r };
    let mut k = if n % 2 == 0 { 2 } else { 3 };
    while k <= n {
        v *= 2.0 * std::f64::consts::PI * r * r / k as f64;
        k += 2;
    }
    v
}

pub fn packing_density_from(lattice: &Lattice, min_norm2: f64) -> f64 {
    ball_volume(lattice.dim(), min_norm2.sqrt() / 2.0) / lattice.volume()
}

pub fn packing_density(lattice: &Lattice) -> Result<f64> {
    let (min, _) = minimal_vectors(lattice)?;
    Ok(packing_density_from(lattice, min))
}

pub fn thickness(lattice: &Lattice, covering_radius: f64) -> f64 {
    ball_volume(lattice.dim(), covering_radius) / lattice.volume()
}

/// Whether `candidate` lies at squared distance `expected_dist2` from the
/// lattice.
pub fn verify_hole(lattice: &Lattice, candidate: &[f64], expected_dist2: f64) -> Result<bool> {
    let ctx = DecoderContext::new(lattice)?;
    let cp = ctx.closest_point(candidate)?;
    Ok((cp.dist2 - expected_dist2).abs() <= NORM_TOL)
}

/// Maximum distance to the lattice over `samples` uniform points of the
/// fundamental parallelepiped; a lower bound on the covering radius.
pub fn covering_radius_sample_bound(lattice: &Lattice, samples: usize, seed: u64) -> Result<f64> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let ctx = DecoderContext::new(lattice)?;
    let mut ws = ctx.workspace();
    let mut rng = substream(seed, 0);
    let n = lattice.dim();
    let mut u = vec![0.0; n];
    let mut best: f64 = 0.0;
    for _ in 0..samples {
        u.iter_mut().for_each(|x| *x = rng.gen::<f64>());
        best = best.max(ctx.decode_coords(&u, &mut ws));
    }
    Ok(best.sqrt())
}

/// Number of vectors of the coset `glue + L` with squared norm `norm2`.
pub fn coset_shell_count(lattice: &Lattice, glue: &GlueVector, norm2: f64) -> Result<usize> {
    coset_shell_count_ambient(lattice, glue.ambient(), norm2)
}

/// [`coset_shell_count`] for a coset given by any ambient representative.
pub fn coset_shell_count_ambient(lattice: &Lattice, representative: &[f64], norm2: f64) -> Result<usize> {
    if !(norm2 > 0.0) {
        return Err(Error::InvalidArgument(format!("norm² must be positive, got {norm2}")));
    }
    let ctx = DecoderContext::new(lattice)?;
    let center: Vec<f64> = representative.iter().map(|x| -x).collect();
    let pts = ctx.enumerate_within(&center, norm2)?;
    Ok(pts.iter().filter(|p| (p.dist2 - norm2).abs() <= NORM_TOL).count())
}

/// Where a covering radius in a summary came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoveringSource {
    Asserted,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VoronoiSummary {
    pub lattice: String,
    pub dimension: usize,
    pub det_gram: f64,
    pub relevant_count: usize,
    pub min_norm2: f64,
    pub kissing: usize,
    pub packing_radius: f64,
    pub packing_density: f64,
    pub covering_radius_bound: f64,
    pub covering_radius_source: CoveringSource,
    pub thickness: Option<f64>,
}

/// Collects the geometric figures of a lattice. With `asserted_covering`
/// the thickness is reported; otherwise the covering radius is a sampled
/// lower bound from `samples` points.
pub fn voronoi_summary(
    lattice: &Lattice,
    asserted_covering: Option<f64>,
    samples: usize,
    seed: u64,
) -> Result<VoronoiSummary> {
    let rel = relevant_vectors(lattice)?;
    let (min_norm2, kissing) = minimal_from_relevant(&rel);
    let (covering_radius_bound, covering_radius_source, thick) = match asserted_covering {
        Some(r) => (r, CoveringSource::Asserted, Some(thickness(lattice, r))),
        None => (covering_radius_sample_bound(lattice, samples.max(1), seed)?, CoveringSource::Sampled, None),
    };
    Ok(VoronoiSummary {
        lattice: lattice.label().to_string(),
        dimension: lattice.dim(),
        det_gram: lattice.det_gram(),
        relevant_count: rel.len(),
        min_norm2,
        kissing,
        packing_radius: min_norm2.sqrt() / 2.0,
        packing_density: packing_density_from(lattice, min_norm2),
        covering_radius_bound,
        covering_radius_source,
        thickness: thick,
    })
}
