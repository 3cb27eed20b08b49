//! Monte-Carlo estimates of the pod integrals over `x ∈ ℝ^{n-1}` pulled back from `S^{n-1}`.
//!
//! A point `x` is sent to the direction of `(x, -1)`, which sweeps out the lower hemisphere once.
//! Every estimate is a reduction over fixed-size batches, each with its own ChaCha stream, so
//! results depend only on the seed.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

pub const MIN_SAMPLES: u64 = 10_000;
const BATCH: u64 = 1 << 14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatError {
    #[error("ambient dimension must be at least 2, got {0}")]
    Dimension(usize),
    #[error("pod arity must be positive")]
    Arity,
    #[error("{got} samples requested, at least {min} needed")]
    TooFewSamples { got: u64, min: u64 },
    #[error("batch {batch} rejected every proposal")]
    Degenerate { batch: u64 },
}

/// How directions are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sampler {
    /// Uniform on the lower hemisphere, weighted by the pulled-back density over the proposal density.
    Hemisphere,
    /// Uniform on the whole sphere, counting the directions hit by the parameterization.
    Sphere,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: u64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate { estimate: value, stderr: 0.0, samples: 0 }
    }

    /// Whether `target` lies within `k` standard errors.
    pub fn agrees_with(&self, target: f64, k: f64) -> bool {
        (self.estimate - target).abs() <= k * self.stderr + 1e-12 * target.abs().max(1.0)
    }

    pub fn relative_error(&self, target: f64) -> f64 {
        ((self.estimate - target) / target).abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IntegralTask {
    pub n: usize,
    pub r: usize,
    pub samples: u64,
    pub seed: u64,
}

impl IntegralTask {
    pub fn new(n: usize, r: usize, samples: u64, seed: u64) -> Result<Self, StatError> {
        if n < 2 {
            return Err(StatError::Dimension(n));
        }
        if r == 0 {
            return Err(StatError::Arity);
        }
        if samples < MIN_SAMPLES {
            return Err(StatError::TooFewSamples { got: samples, min: MIN_SAMPLES });
        }
        Ok(IntegralTask { n, r, samples, seed })
    }
}

/// Pulled-back density of the unit-volume form at `x`, up to the sphere's area.
fn pulled_back(x_norm2: f64, n: usize) -> f64 {
    (1.0 + x_norm2).powf(-(n as f64) / 2.0)
}

/// Area of the unit sphere `S^{n-1}`.
fn sphere_area(n: usize) -> f64 {
    let mut area = if n % 2 == 0 { 2.0 * std::f64::consts::PI } else { 2.0 };
    let mut k = if n % 2 == 0 { 2 } else { 1 };
    while k < n {
        area *= 2.0 * std::f64::consts::PI / k as f64;
        k += 2;
    }
    area
}

struct Direction {
    v: Vec<f64>,
}

impl Direction {
    fn draw(rng: &mut ChaCha8Rng, n: usize) -> Self {
        Direction { v: (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect() }
    }

    fn is_lower(&self) -> bool {
        *self.v.last().expect("n >= 2") < 0.0
    }

    /// Importance weight of a lower direction: density in `x` over the proposal density in `x`.
    fn weight(&self, n: usize) -> f64 {
        let last = *self.v.last().expect("n >= 2");
        let norm2: f64 = self.v.iter().map(|c| c * c).sum();
        let x_norm2: f64 = self.v[..n - 1].iter().map(|c| (c / last).powi(2)).sum();
        let target = pulled_back(x_norm2, n) / sphere_area(n);
        let cos = last.abs() / norm2.sqrt();
        let proposal = 2.0 * cos.powi(n as i32) / sphere_area(n);
        target / proposal
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    sum: f64,
    sum2: f64,
    count: u64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.sum += x;
        self.sum2 += x * x;
        self.count += 1;
    }

    fn merge(self, o: Moments) -> Moments {
        Moments { sum: self.sum + o.sum, sum2: self.sum2 + o.sum2, count: self.count + o.count }
    }

    fn estimate(&self) -> Estimate {
        let k = self.count as f64;
        let mean = self.sum / k;
        let var = ((self.sum2 / k - mean * mean) * k / (k - 1.0)).max(0.0);
        Estimate { estimate: mean, stderr: (var / k).sqrt(), samples: self.count }
    }
}

/// Draws one value per sample in every batch and reduces in batch order.
fn integrate<F>(samples: u64, seed: u64, draw: F) -> Result<Estimate, StatError>
where
    F: Fn(&mut ChaCha8Rng) -> Option<f64> + Sync,
{
    let batches: Vec<u64> = (0..samples.div_ceil(BATCH)).collect();
    let parts: Vec<Result<Moments, StatError>> = batches
        .par_iter()
        .map(|&b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let size = BATCH.min(samples - b * BATCH);
            let mut m = Moments::default();
            for _ in 0..size {
                if let Some(x) = draw(&mut rng) {
                    m.push(x);
                }
            }
            if m.count == 0 {
                return Err(StatError::Degenerate { batch: b });
            }
            Ok(m)
        })
        .collect();
    let mut total = Moments::default();
    for p in parts {
        total = total.merge(p?);
    }
    if total.count < 2 {
        return Err(StatError::Degenerate { batch: 0 });
    }
    Ok(total.estimate())
}

/// `∫_{ℝ^{n-1}} Ω(x)`, which is the fraction of the sphere covered by the parameterization.
pub fn hemisphere_weight(n: usize, samples: u64, seed: u64, sampler: Sampler) -> Result<Estimate, StatError> {
    if n < 2 {
        return Err(StatError::Dimension(n));
    }
    if samples < MIN_SAMPLES {
        return Err(StatError::TooFewSamples { got: samples, min: MIN_SAMPLES });
    }
    integrate(samples, seed, |rng| {
        let d = Direction::draw(rng, n);
        match sampler {
            Sampler::Hemisphere => d.is_lower().then(|| d.weight(n)),
            Sampler::Sphere => Some(if d.is_lower() { 1.0 } else { 0.0 }),
        }
    })
}

/// Coefficient of the `r`-pod: `2·w^r` with the hemisphere weight `w` of each leg, and exactly 0 for even `r`.
pub fn pod_coefficient(task: &IntegralTask, sampler: Sampler) -> Result<Estimate, StatError> {
    if task.r % 2 == 0 {
        return Ok(Estimate::exact(0.0));
    }
    let (n, r) = (task.n, task.r);
    integrate(task.samples, task.seed, |rng| {
        let mut value = 2.0;
        for _ in 0..r {
            let d = Direction::draw(rng, n);
            value *= match sampler {
                Sampler::Hemisphere => {
                    let mut d = d;
                    while !d.is_lower() {
                        d = Direction::draw(rng, n);
                    }
                    d.weight(n)
                }
                Sampler::Sphere => {
                    if d.is_lower() {
                        1.0
                    } else {
                        0.0
                    }
                }
            };
        }
        Some(value)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_areas() {
        let pi = std::f64::consts::PI;
        assert!((sphere_area(2) - 2.0 * pi).abs() < 1e-12);
        assert!((sphere_area(3) - 4.0 * pi).abs() < 1e-12);
        assert!((sphere_area(4) - 2.0 * pi * pi).abs() < 1e-12);
    }

    #[test]
    fn half_of_the_sphere() {
        for n in [2, 3, 4] {
            let w = hemisphere_weight(n, 200_000, 1, Sampler::Hemisphere).unwrap();
            assert!((w.estimate - 0.5).abs() < 1e-9, "{w:?}");
            let s = hemisphere_weight(n, 200_000, 1, Sampler::Sphere).unwrap();
            assert!(s.agrees_with(0.5, 5.0), "{s:?}");
            let binomial = (0.25f64 / 200_000.0).sqrt();
            assert!((s.stderr / binomial - 1.0).abs() < 0.01);
        }
    }

    #[test]
    fn pods() {
        let t = IntegralTask::new(2, 3, 1_000_000, 7).unwrap();
        let e = pod_coefficient(&t, Sampler::Sphere).unwrap();
        assert!(e.relative_error(0.25) < 0.02, "{e:?}");
        let t = IntegralTask::new(3, 5, 1_000_000, 7).unwrap();
        let e = pod_coefficient(&t, Sampler::Sphere).unwrap();
        assert!(e.relative_error(0.0625) < 0.03, "{e:?}");
        let e = pod_coefficient(&t, Sampler::Hemisphere).unwrap();
        assert!(e.relative_error(0.0625) < 1e-9, "{e:?}");
        let t = IntegralTask::new(2, 4, MIN_SAMPLES, 7).unwrap();
        assert_eq!(pod_coefficient(&t, Sampler::Sphere).unwrap(), Estimate::exact(0.0));
    }

    #[test]
    fn stderr_shrinks_like_root_samples() {
        let mut ratios = Vec::new();
        for seed in 0..8 {
            let a = pod_coefficient(&IntegralTask::new(2, 3, 100_000, seed).unwrap(), Sampler::Sphere).unwrap();
            let b = pod_coefficient(&IntegralTask::new(2, 3, 200_000, seed + 100).unwrap(), Sampler::Sphere).unwrap();
            ratios.push(a.stderr / b.stderr);
        }
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        assert!((mean - 2f64.sqrt()).abs() < 0.05, "{ratios:?}");
    }

    #[test]
    fn seeded_runs_repeat() {
        let t = IntegralTask::new(3, 3, 50_000, 11).unwrap();
        let a = pod_coefficient(&t, Sampler::Sphere).unwrap();
        let b = pod_coefficient(&t, Sampler::Sphere).unwrap();
        assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
        assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
        let c = pod_coefficient(&IntegralTask { seed: 12, ..t }, Sampler::Sphere).unwrap();
        assert_ne!(a.estimate.to_bits(), c.estimate.to_bits());
    }

    #[test]
    fn invalid_tasks() {
        assert_eq!(IntegralTask::new(1, 3, MIN_SAMPLES, 0), Err(StatError::Dimension(1)));
        assert!(matches!(IntegralTask::new(2, 3, 10, 0), Err(StatError::TooFewSamples { .. })));
        assert_eq!(IntegralTask::new(2, 0, MIN_SAMPLES, 0), Err(StatError::Arity));
    }
}
