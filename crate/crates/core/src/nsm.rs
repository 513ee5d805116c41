//! Normalized second moment: Monte Carlo estimation, error covariance,
//! exact product composition and scale optimization against `aℤ`.
//!
//! Samples are drawn uniformly from the fundamental parallelepiped
//! `{u·B : u ∈ [0,1)ⁿ}` and reduced to the Voronoi region by a closest-point
//! query; the quantization error only depends on the coset of the sample.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cvp::DecoderContext;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::matrix::Matrix;
use crate::rng::substream;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NsmEstimate {
    pub lattice_id: String,
    pub samples: u64,
    pub g_hat: f64,
    pub sigma_hat: f64,
    pub seed: u64,
    pub streams: u64,
}

impl NsmEstimate {
    /// `Ĝ ± 2σ̂` with six decimals.
    pub fn display(&self) -> String {
        format!("{:.6} ± {:.6}", self.g_hat, 2.0 * self.sigma_hat)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CovarianceEstimate {
    pub matrix: Matrix,
    pub samples: u64,
    /// max |off-diagonal| / mean diagonal
    pub max_offdiag_ratio: f64,
    /// max diagonal / min diagonal − 1
    pub diag_spread: f64,
}

/// NSM and covariance computed from one sample stream.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantizerEstimate {
    pub nsm: NsmEstimate,
    pub covariance: CovarianceEstimate,
}

/// Running moments of one substream.
#[derive(Debug, Clone)]
struct Accumulator {
    count: u64,
    mean: f64,
    m2: f64,
    // Upper triangle of Σ e·eᵀ, row-major, present only when requested.
    outer: Option<Vec<f64>>,
}

impl Accumulator {
    fn new(dim: Option<usize>) -> Self {
        Accumulator { count: 0, mean: 0.0, m2: 0.0, outer: dim.map(|d| vec![0.0; d * d]) }
    }

    #[inline]
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(&mut self, other: &Accumulator) {
        if other.count == 0 {
            return;
        }
        let n = (self.count + other.count) as f64;
        let delta = other.mean - self.mean;
        self.mean += delta * other.count as f64 / n;
        self.m2 += other.m2 + delta * delta * self.count as f64 * other.count as f64 / n;
        self.count += other.count;
        if let (Some(a), Some(b)) = (self.outer.as_mut(), other.outer.as_ref()) {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        }
    }
}

/// Samples of stream `j` when `samples` are split over `streams`.
fn stream_share(samples: u64, streams: u64, j: u64) -> u64 {
    samples / streams + u64::from(j < samples % streams)
}

/// Orthonormal frame for error vectors: identity for square bases,
/// otherwise an orthonormal basis of the row span.
fn error_frame(lattice: &Lattice) -> Result<Option<Matrix>> {
    if lattice.dim() == lattice.ambient_dim() {
        return Ok(None);
    }
    let (q, _) = lattice.basis().transpose().thin_qr()?;
    Ok(Some(q))
}

fn run_stream(
    ctx: &DecoderContext,
    frame: Option<&Matrix>,
    norm: f64,
    count: u64,
    seed: u64,
    stream: u64,
    with_cov: bool,
) -> Accumulator {
    let n = ctx.dim();
    let m = ctx.lattice().ambient_dim();
    let mut acc = Accumulator::new(with_cov.then_some(n));
    let mut rng = substream(seed, stream);
    let mut ws = ctx.workspace();
    let mut u = vec![0.0; n];
    let mut zr = vec![0.0; n];
    let mut e = vec![0.0; m];
    let mut ef = vec![0.0; n];
    for _ in 0..count {
        u.iter_mut().for_each(|x| *x = rng.gen::<f64>());
        ctx.to_reduced(&u, &mut zr);
        ctx.decode_reduced(&zr, &mut ws);
        ctx.error_vector(&zr, &ws, &mut e);
        let err: &[f64] = match frame {
            Some(q) => {
                for (k, f) in ef.iter_mut().enumerate() {
                    *f = (0..m).map(|i| e[i] * q[(i, k)]).sum();
                }
                &ef
            }
            None => &e,
        };
        let d2: f64 = err.iter().map(|x| x * x).sum();
        acc.push(d2 / norm);
        if let Some(outer) = acc.outer.as_mut() {
            for i in 0..n {
                let ei = err[i];
                let row = &mut outer[i * n..(i + 1) * n];
                for j in i..n {
                    row[j] += ei * err[j];
                }
            }
        }
    }
    acc
}

fn estimate(lattice: &Lattice, samples: u64, seed: u64, streams: u64, with_cov: bool) -> Result<(NsmEstimate, Option<CovarianceEstimate>)> {
    if samples < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 samples, got {samples}")));
    }
    let streams = streams.clamp(1, samples);
    let ctx = DecoderContext::new(lattice)?;
    let frame = error_frame(lattice)?;
    let n = lattice.dim();
    let norm = n as f64 * lattice.volume().powf(2.0 / n as f64);
    let parts: Vec<Accumulator> = (0..streams)
        .into_par_iter()
        .map(|j| run_stream(&ctx, frame.as_ref(), norm, stream_share(samples, streams, j), seed, j, with_cov))
        .collect();
    let mut total = Accumulator::new(with_cov.then_some(n));
    for p in &parts {
        total.merge(p);
    }
    let count = total.count as f64;
    let sigma_hat = (total.m2 / (count - 1.0)).sqrt() / count.sqrt();
    let nsm = NsmEstimate {
        lattice_id: lattice.label().to_string(),
        samples,
        g_hat: total.mean,
        sigma_hat,
        seed,
        streams,
    };
    let cov = total.outer.map(|outer| {
        let mut matrix = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = outer[i * n + j] / count;
                matrix[(i, j)] = v;
                matrix[(j, i)] = v;
            }
        }
        covariance_summary(matrix, samples)
    });
    Ok((nsm, cov))
}

fn covariance_summary(matrix: Matrix, samples: u64) -> CovarianceEstimate {
    let n = matrix.rows();
    let diag: Vec<f64> = (0..n).map(|i| matrix[(i, i)]).collect();
    let mean_diag = diag.iter().sum::<f64>() / n as f64;
    let max_off = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| matrix[(i, j)].abs())
        .fold(0.0, f64::max);
    let max_d = diag.iter().copied().fold(f64::MIN, f64::max);
    let min_d = diag.iter().copied().fold(f64::MAX, f64::min);
    CovarianceEstimate { samples, max_offdiag_ratio: max_off / mean_diag, diag_spread: max_d / min_d - 1.0, matrix }
}

/// Monte Carlo NSM estimate with `samples` points split over `streams`
/// independent substreams of `seed`. The result depends on
/// `(seed, streams)` but not on the number of worker threads.
pub fn estimate_nsm(lattice: &Lattice, samples: u64, seed: u64, streams: u64) -> Result<NsmEstimate> {
    Ok(estimate(lattice, samples, seed, streams, false)?.0)
}

/// Second-moment matrix of the quantization error (single stream).
pub fn estimate_covariance(lattice: &Lattice, samples: u64, seed: u64) -> Result<CovarianceEstimate> {
    estimate_covariance_streams(lattice, samples, seed, 1)
}

pub fn estimate_covariance_streams(lattice: &Lattice, samples: u64, seed: u64, streams: u64) -> Result<CovarianceEstimate> {
    if samples < lattice.dim() as u64 + 1 {
        return Err(Error::InvalidArgument(format!("need at least n+1 = {} samples", lattice.dim() + 1)));
    }
    Ok(estimate(lattice, samples, seed, streams, true)?.1.expect("covariance requested"))
}

/// NSM and covariance from the same draws.
pub fn estimate_quantizer(lattice: &Lattice, samples: u64, seed: u64, streams: u64) -> Result<QuantizerEstimate> {
    if samples < lattice.dim() as u64 + 1 {
        return Err(Error::InvalidArgument(format!("need at least n+1 = {} samples", lattice.dim() + 1)));
    }
    let (nsm, cov) = estimate(lattice, samples, seed, streams, true)?;
    Ok(QuantizerEstimate { nsm, covariance: cov.expect("covariance requested") })
}

/// Exact NSM of the product `L₁ × L₂` from the dimensions, NSMs and
/// volumes of the factors.
pub fn product_nsm(n1: usize, g1: f64, v1: f64, n2: usize, g2: f64, v2: f64) -> f64 {
    let (n1f, n2f) = (n1 as f64, n2 as f64);
    (n1f * g1 * v1.powf(2.0 / n1f) + n2f * g2 * v2.powf(2.0 / n2f)) / ((n1f + n2f) * (v1 * v2).powf(2.0 / (n1f + n2f)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaleOptimum {
    /// Optimal scale of the `aℤ` factor.
    pub a: f64,
    pub combined_nsm: f64,
    /// Minimizer found by golden-section search, for cross-checking.
    pub search_a: f64,
    pub search_nsm: f64,
}

/// Best product `L × aℤ` over `a > 0`. At the optimum the per-dimension
/// second moments agree: `a²/12 = G₁·V₁^{2/n₁}`.
pub fn optimize_scale_with_z(n1: usize, g1: f64, v1: f64) -> Result<ScaleOptimum> {
    if n1 == 0 || !(g1 > 0.0) || !(v1 > 0.0) {
        return Err(Error::InvalidArgument("dimension, NSM and volume must be positive".into()));
    }
    let f = |a: f64| product_nsm(n1, g1, v1, 1, 1.0 / 12.0, a);
    let a = (12.0 * g1 * v1.powf(2.0 / n1 as f64)).sqrt();
    let combined = f(a);

    // Golden-section search on ln a, bracketing the closed form widely.
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (a.ln() - 5.0, a.ln() + 5.0);
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1.exp()), f(x2.exp()));
    for _ in 0..200 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = f(x1.exp());
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = f(x2.exp());
        }
    }
    let search_a = ((lo + hi) / 2.0).exp();
    let search_nsm = f(search_a);
    if (search_nsm - combined).abs() > 1e-9 || search_nsm < combined - 1e-15 {
        return Err(Error::InvalidArgument(format!(
            "closed-form optimum {combined} disagrees with search {search_nsm}"
        )));
    }
    Ok(ScaleOptimum { a, combined_nsm: combined, search_a, search_nsm })
}
