//! Seeded synthetic series: Gaussian walks, iid pairs, correlated AR(1)
//! pairs and correlated outlier injection.
//!
//! Normal variates come from ChaCha8 (a counter-based stream cipher RNG)
//! through the ziggurat sampler of `rand_distr::StandardNormal`. Each seed
//! owns independent streams: stream 0 drives the first series, stream 1 the
//! second, stream 2 outlier positions. Output is a pure function of the
//! configuration.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::ingest::{ensure_aligned, TimeSeries};

const STREAM_X: u64 = 0;
const STREAM_Y: u64 = 1;
const STREAM_OUTLIERS: u64 = 2;

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

fn normals(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

fn check_len(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "series length must be at least 2, got {n}"
        )));
    }
    Ok(())
}

fn pair(x: Vec<f64>, y: Vec<f64>) -> Result<(TimeSeries, TimeSeries)> {
    Ok((
        TimeSeries::from_values("x", x)?,
        TimeSeries::from_values("y", y)?,
    ))
}

fn cumulative(steps: Vec<f64>) -> Vec<f64> {
    steps
        .into_iter()
        .scan(0.0, |acc, z| {
            *acc += z;
            Some(*acc)
        })
        .collect()
}

/// Two independent random walks with standard normal increments, `X_k = Z_0 + .. + Z_k`.
pub fn gaussian_walk_pair(n: usize, seed: u64) -> Result<(TimeSeries, TimeSeries)> {
    check_len(n)?;
    let x = cumulative(normals(&mut stream(seed, STREAM_X), n));
    let y = cumulative(normals(&mut stream(seed, STREAM_Y), n));
    pair(x, y)
}

/// Two independent sequences of iid standard normal values.
pub fn gaussian_iid_pair(n: usize, seed: u64) -> Result<(TimeSeries, TimeSeries)> {
    check_len(n)?;
    let x = normals(&mut stream(seed, STREAM_X), n);
    let y = normals(&mut stream(seed, STREAM_Y), n);
    pair(x, y)
}

fn check_rho(rho: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&rho) {
        return Err(Error::InvalidRho(rho));
    }
    Ok(())
}

/// Standard normal pairs `(Z, W)` with `W = rho Z + sqrt(1 - rho^2) Z'`.
pub fn correlated_noise(n: usize, rho: f64, seed: u64) -> Result<(Vec<f64>, Vec<f64>)> {
    check_rho(rho)?;
    let z = normals(&mut stream(seed, STREAM_X), n);
    let z_indep = normals(&mut stream(seed, STREAM_Y), n);
    let scale = (1.0 - rho * rho).sqrt();
    let w = z
        .iter()
        .zip(&z_indep)
        .map(|(a, b)| rho * a + scale * b)
        .collect();
    Ok((z, w))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ar1Config {
    pub n: usize,
    pub phi: f64,
    pub rho: f64,
    pub seed: u64,
}

/// `X_n = phi X_{n-1} + Z_n`, `Y_n = phi Y_{n-1} + W_n`, started at `X = Z`, `Y = W`.
pub fn correlated_ar1_pair(cfg: &Ar1Config) -> Result<(TimeSeries, TimeSeries)> {
    check_len(cfg.n)?;
    check_rho(cfg.rho)?;
    if !cfg.phi.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "phi must be finite, got {}",
            cfg.phi
        )));
    }
    let (z, w) = correlated_noise(cfg.n, cfg.rho, cfg.seed)?;
    let recurse = |noise: Vec<f64>| -> Vec<f64> {
        let mut out = Vec::with_capacity(noise.len());
        let mut prev: Option<f64> = None;
        for e in noise {
            let v = match prev {
                None => e,
                Some(p) => cfg.phi * p + e,
            };
            out.push(v);
            prev = Some(v);
        }
        out
    };
    pair(recurse(z), recurse(w))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OutlierConfig {
    pub k: usize,
    pub magnitude: f64,
    pub seed: u64,
}

/// Indices picked by [`inject_outliers`], ascending.
pub fn outlier_positions(len: usize, cfg: &OutlierConfig) -> Result<Vec<usize>> {
    if cfg.k > len {
        return Err(Error::TooManyOutliers { k: cfg.k, len });
    }
    let mut picked = index::sample(&mut stream(cfg.seed, STREAM_OUTLIERS), len, cfg.k).into_vec();
    picked.sort_unstable();
    Ok(picked)
}

/// Sets `x` to `+magnitude` and `y` to `-magnitude` at `k` distinct random positions.
pub fn inject_outliers(
    x: &TimeSeries,
    y: &TimeSeries,
    cfg: &OutlierConfig,
) -> Result<(TimeSeries, TimeSeries)> {
    ensure_aligned(x, y)?;
    if !cfg.magnitude.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "magnitude must be finite, got {}",
            cfg.magnitude
        )));
    }
    let positions = outlier_positions(x.len(), cfg)?;
    let mut xv = x.values().to_vec();
    let mut yv = y.values().to_vec();
    for i in positions {
        xv[i] = cfg.magnitude;
        yv[i] = -cfg.magnitude;
    }
    Ok((x.with_values(xv)?, y.with_values(yv)?))
}
