use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::domain::Domain;
use super::quadrature::QuadratureConfig;
use crate::error::{Error, Result};

/// Accepted points per independently seeded chunk.
pub const CHUNK: usize = 4096;

/// The generator for chunk `chunk` of a run seeded with `seed`.
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Uniform sample of a domain with per-point volume weights, so that
/// `mean(wᵢ f(xᵢ))` estimates `∫_D f`.
#[derive(Debug, Clone)]
pub struct Samples {
    n: usize,
    points: Vec<f64>,
    weights: Vec<f64>,
    proposed: u64,
}

impl Samples {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.n..(i + 1) * self.n]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> {
        self.points.chunks_exact(self.n).zip(self.weights.iter().copied())
    }

    /// Accepted over proposed points of the rejection step.
    pub fn acceptance_rate(&self) -> f64 {
        self.len() as f64 / self.proposed as f64
    }

    /// Mean and standard error of `wᵢ f(xᵢ)`, i.e. the Monte Carlo estimate
    /// of `∫_D f`. Evaluated in parallel; the reduction order is fixed.
    pub fn integrate<F>(&self, f: F) -> (f64, f64)
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        let partial: Vec<(f64, f64)> = self
            .points
            .par_chunks(self.n * CHUNK)
            .zip(self.weights.par_chunks(CHUNK))
            .map(|(pts, ws)| {
                pts.chunks_exact(self.n).zip(ws).fold((0.0, 0.0), |(s, s2), (x, w)| {
                    let v = w * f(x);
                    (s + v, s2 + v * v)
                })
            })
            .collect();
        let (s, s2) = partial.iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
        mean_and_error(s, s2, self.len())
    }
}

pub(crate) fn mean_and_error(sum: f64, sum_sq: f64, count: usize) -> (f64, f64) {
    let m = count as f64;
    let mean = sum / m;
    if count < 2 {
        return (mean, 0.0);
    }
    let var = ((sum_sq - m * mean * mean) / (m - 1.0)).max(0.0);
    (mean, (var / m).sqrt())
}

/// Draws `cfg.sample_count` uniform points of `dom`. Balls and simplices
/// use rejection from their bounding box; images push base samples through
/// the map and weight them by `|det Dφ|`.
pub fn sample_domain(dom: &Domain, cfg: &QuadratureConfig) -> Result<Samples> {
    cfg.validate()?;
    match dom {
        Domain::BiLipschitzImage { base, map } => {
            let inner = sample_domain(base, cfg)?;
            let n = inner.n;
            let (points, weights): (Vec<Vec<f64>>, Vec<f64>) = inner
                .points
                .par_chunks(n)
                .zip(inner.weights.par_iter())
                .map(|(x, w)| (map.apply(x), w * map.jacobian(x).determinant().abs()))
                .unzip();
            Ok(Samples {
                n,
                points: points.concat(),
                weights,
                proposed: inner.proposed,
            })
        }
        _ => {
            let (lo, hi) = dom
                .bounding_box()
                .ok_or_else(|| Error::Parameter("domain has no bounding box".into()))?;
            let volume = dom.volume().expect("basic domains have a volume");
            let n = dom.dim();
            let total = cfg.sample_count;
            let chunks = total.div_ceil(CHUNK);
            let parts: Vec<(Vec<f64>, u64)> = (0..chunks)
                .into_par_iter()
                .map(|c| {
                    let want = CHUNK.min(total - c * CHUNK);
                    let mut rng = chunk_rng(cfg.seed, c as u64);
                    let mut pts = Vec::with_capacity(want * n);
                    let mut x = vec![0.0; n];
                    let mut proposed = 0u64;
                    while pts.len() < want * n {
                        for (i, v) in x.iter_mut().enumerate() {
                            *v = rng.random_range(lo[i]..hi[i]);
                        }
                        proposed += 1;
                        if dom.contains(&x) {
                            pts.extend_from_slice(&x);
                        }
                    }
                    (pts, proposed)
                })
                .collect();
            let proposed = parts.iter().map(|p| p.1).sum();
            let points: Vec<f64> = parts.into_iter().flat_map(|p| p.0).collect();
            Ok(Samples {
                n,
                weights: vec![volume; total],
                points,
                proposed,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_inside() {
        let cfg = QuadratureConfig::default().with_samples(10_000);
        let s = Domain::simplex(2).unwrap();
        let a = sample_domain(&s, &cfg).unwrap();
        let b = sample_domain(&s, &cfg).unwrap();
        assert_eq!(a.points, b.points);
        assert_eq!(a.len(), 10_000);
        assert!(a.iter().all(|(x, _)| x.iter().all(|&v| v >= 0.0) && x.iter().sum::<f64>() <= 1.0));
    }

    #[test]
    fn ball_acceptance_rate() {
        let cfg = QuadratureConfig::default().with_samples(100_000);
        let s = sample_domain(&Domain::unit_ball(2), &cfg).unwrap();
        let p = std::f64::consts::FRAC_PI_4;
        let sigma = (p * (1.0 - p) / s.proposed as f64).sqrt();
        assert!((s.acceptance_rate() - p).abs() < 3.0 * sigma);
    }

    #[test]
    fn integrates_volume() {
        let cfg = QuadratureConfig::default().with_samples(5000);
        let s = sample_domain(&Domain::unit_ball(3), &cfg).unwrap();
        let (v, se) = s.integrate(|_| 1.0);
        assert!((v - 4.0 / 3.0 * std::f64::consts::PI).abs() < 1e-12);
        assert!(se < 1e-6);
    }
}
