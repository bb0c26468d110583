//! Imperfect atom counting: Gaussian detector noise on both levels,
//! refinement of the participating atom number, and the resulting
//! sensitivity, analytically and by Monte Carlo.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Normal};
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::spin::{Moments, SensitivityResult};

/// Independent Gaussian miscounts of standard deviation `σ` on each level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountingNoise {
    sigma: f64,
}

impl CountingNoise {
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma >= 0.0) || !sigma.is_finite() {
            return domain(format!("counting noise must be finite and non-negative, got {sigma}"));
        }
        Ok(Self { sigma })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Variance of the measured total `N`, `2σ²`.
    pub fn number_variance(&self) -> f64 {
        2.0 * self.sigma * self.sigma
    }

    /// Variance added to `m = (n₁ − n₂)/2`, `σ²/2`.
    pub fn m_variance(&self) -> f64 {
        0.5 * self.sigma * self.sigma
    }
}

/// Discrete distribution over atom numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct NumberPrior {
    support: Vec<u64>,
    probabilities: Vec<f64>,
}

impl NumberPrior {
    pub fn new(support: Vec<u64>, probabilities: Vec<f64>) -> Result<Self> {
        if support.is_empty() || support.len() != probabilities.len() {
            return domain("support must be non-empty and match the probabilities");
        }
        if probabilities.iter().any(|p| !(*p >= 0.0) || !p.is_finite()) {
            return domain("probabilities must be finite and non-negative");
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return domain(format!("probabilities sum to {total}, not 1"));
        }
        Ok(Self { support, probabilities })
    }

    /// Uniform over the integers in `[N(1−f), N(1+f)]`.
    pub fn flat(center: u64, fraction: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&fraction) {
            return domain(format!("prior width fraction must lie in [0, 1), got {fraction}"));
        }
        let c = center as f64;
        let lo = (c * (1.0 - fraction)).ceil().max(1.0) as u64;
        let hi = (c * (1.0 + fraction)).floor() as u64;
        if hi < lo {
            return domain("flat prior has empty support");
        }
        let support: Vec<u64> = (lo..=hi).collect();
        let p = 1.0 / support.len() as f64;
        let probabilities = vec![p; support.len()];
        Ok(Self { support, probabilities })
    }

    pub fn point(n: u64) -> Self {
        Self { support: vec![n], probabilities: vec![1.0] }
    }

    pub fn support(&self) -> &[u64] {
        &self.support
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.support.iter().zip(&self.probabilities).map(|(&n, &p)| (n as f64, p))
    }

    pub fn mean(&self) -> f64 {
        self.iter().map(|(n, p)| n * p).sum()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.iter().map(|(n, p)| (n - m).powi(2) * p).sum()
    }

    fn expect<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.iter().map(|(n, p)| f(n) * p).sum()
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> u64 {
        if self.support.len() == 1 {
            return self.support[0];
        }
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (&n, &p) in self.support.iter().zip(&self.probabilities) {
            acc += p;
            if u < acc {
                return n;
            }
        }
        *self.support.last().expect("non-empty support")
    }
}

/// Posterior weights smaller than this fraction of the largest are dropped.
const TRUNCATION: f64 = 1e-16;

/// `p(N₀|N) ∝ p(N|N₀) p(N₀)` with `p(N|N₀)` Gaussian of variance `2σ²`.
pub fn posterior_n0(prior: &NumberPrior, measured: f64, noise: CountingNoise) -> Result<NumberPrior> {
    if noise.sigma() == 0.0 {
        let hit = prior.iter().any(|(n, p)| n == measured && p > 0.0);
        if !hit {
            return Err(Error::Domain(format!("measured N = {measured} has zero prior weight and σ = 0")));
        }
        return Ok(NumberPrior::point(measured as u64));
    }
    let var = noise.number_variance();
    let log_w: Vec<f64> = prior
        .iter()
        .map(|(n, p)| if p > 0.0 { p.ln() - (measured - n).powi(2) / (2.0 * var) } else { f64::NEG_INFINITY })
        .collect();
    let max = log_w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return domain("posterior is empty");
    }
    let mut support = Vec::new();
    let mut weights = Vec::new();
    for (&n, lw) in prior.support.iter().zip(&log_w) {
        let w = (lw - max).exp();
        if w >= TRUNCATION {
            support.push(n);
            weights.push(w);
        }
    }
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    NumberPrior::new(support, weights)
}

type SignalFn = Box<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Sampler {
    Gaussian,
    /// Product state after a Ramsey sequence: `n₁ ~ Binomial(N₀, (1 + cos γt)/2)`.
    RamseyBinomial {
        t: f64,
    },
}

/// `⟨J_z⟩`, `Δ²J_z` and `∂⟨J_z⟩/∂γ` as functions of `(N₀, γ)`.
pub struct QuantumSignalModel {
    mean: SignalFn,
    variance: SignalFn,
    derivative: SignalFn,
    sampler: Sampler,
}

impl std::fmt::Debug for QuantumSignalModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("QuantumSignalModel").field("sampler", &self.sampler).finish_non_exhaustive()
    }
}

impl QuantumSignalModel {
    /// A model from closures; Monte Carlo draws `m` from a Gaussian with
    /// the model's mean and variance.
    pub fn new<M, V, D>(mean: M, variance: V, derivative: D) -> Self
    where
        M: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        V: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            mean: Box::new(mean),
            variance: Box::new(variance),
            derivative: Box::new(derivative),
            sampler: Sampler::Gaussian,
        }
    }

    /// Ramsey readout with phase `φ = γt`: `⟨J_z⟩ = (N₀/2) cos φ`,
    /// `Δ²J_z = (N₀/4) sin²φ`; Monte Carlo uses the exact binomial.
    pub fn ramsey(t: f64) -> Result<Self> {
        if !(t > 0.0) || !t.is_finite() {
            return domain(format!("interrogation time must be positive, got {t}"));
        }
        let mut m = Self::new(
            move |n, g| 0.5 * n * (g * t).cos(),
            move |n, g| 0.25 * n * (g * t).sin().powi(2),
            move |n, g| -0.5 * n * t * (g * t).sin(),
        );
        m.sampler = Sampler::RamseyBinomial { t };
        Ok(m)
    }

    pub fn mean(&self, n0: f64, gamma: f64) -> f64 {
        (self.mean)(n0, gamma)
    }

    pub fn variance(&self, n0: f64, gamma: f64) -> f64 {
        (self.variance)(n0, gamma).max(0.0)
    }

    pub fn derivative(&self, n0: f64, gamma: f64) -> f64 {
        (self.derivative)(n0, gamma)
    }

    fn sample_m<R: Rng>(&self, n0: u64, gamma: f64, rng: &mut R) -> f64 {
        match self.sampler {
            Sampler::RamseyBinomial { t } => {
                let p = (0.5 * (1.0 + (gamma * t).cos())).clamp(0.0, 1.0);
                let k = Binomial::new(n0, p).expect("valid binomial").sample(rng) as f64;
                k - 0.5 * n0 as f64
            }
            Sampler::Gaussian => {
                let n = n0 as f64;
                let sd = self.variance(n, gamma).sqrt();
                self.mean(n, gamma) + sd * standard_normal(rng)
            }
        }
    }
}

fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    rand_distr::StandardNormal.sample(rng)
}

/// Posterior-averaged moments of the measured `m`:
/// mean `Σ⟨J_z⟩p`, variance `σ²/2 + Σ(⟨J_z⟩² + Δ²J_z)p − mean²`.
pub fn corrected_moments(
    model: &QuantumSignalModel,
    posterior: &NumberPrior,
    noise: CountingNoise,
    gamma: f64,
) -> Moments {
    let mean = posterior.expect(|n| model.mean(n, gamma));
    let second = posterior.expect(|n| model.mean(n, gamma).powi(2) + model.variance(n, gamma));
    Moments { mean, variance: noise.m_variance() + (second - mean * mean).max(0.0) }
}

/// The same moments with the posterior replaced by a point at its mean.
pub fn corrected_moments_at_mean(
    model: &QuantumSignalModel,
    posterior: &NumberPrior,
    noise: CountingNoise,
    gamma: f64,
) -> Moments {
    let n = posterior.mean();
    Moments { mean: model.mean(n, gamma), variance: noise.m_variance() + model.variance(n, gamma) }
}

/// `δγ² = (σ²/2 + Δ²J_z)/|∂⟨J_z⟩/∂γ|²` with posterior-averaged moments.
pub fn corrected_uncertainty(
    model: &QuantumSignalModel,
    posterior: &NumberPrior,
    noise: CountingNoise,
    gamma: f64,
) -> Result<SensitivityResult> {
    let m = corrected_moments(model, posterior, noise, gamma);
    let d = posterior.expect(|n| model.derivative(n, gamma));
    let scale = posterior.expect(|n| n.abs()).max(1.0);
    if !(d.abs() > 1e-13 * scale) {
        return Err(Error::UndefinedSensitivity(format!("signal slope vanishes at γ = {gamma}")));
    }
    Ok(SensitivityResult::new(m.variance.sqrt() / d.abs()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloResult {
    /// Per-trial estimates `γ̂`, in trial order.
    pub estimates: Vec<f64>,
    /// Sample standard deviation of `γ̂`.
    pub delta_gamma: f64,
    /// Standard error of `delta_gamma`.
    pub stderr: f64,
    pub mean_estimate: f64,
}

const CHUNK: usize = 4096;

/// Draws `N₀` from the prior, `m` from the quantum model, miscounts both
/// levels, and inverts the linearized mean signal at the measured `N`.
/// Trials are split into fixed chunks, each with its own ChaCha stream, so
/// the output depends only on `seed`.
pub fn simulate_counts(
    model: &QuantumSignalModel,
    prior: &NumberPrior,
    noise: CountingNoise,
    gamma: f64,
    trials: usize,
    seed: u64,
) -> Result<MonteCarloResult> {
    if trials < 2 {
        return domain("at least two trials are needed for a spread");
    }
    let n_chunks = trials.div_ceil(CHUNK);
    let normal = Normal::new(0.0, noise.sigma()).map_err(|e| Error::Domain(e.to_string()))?;
    let chunks: Vec<Vec<f64>> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let len = CHUNK.min(trials - c * CHUNK);
            (0..len)
                .map(|_| {
                    let n0 = prior.sample(&mut rng);
                    let m = model.sample_m(n0, gamma, &mut rng);
                    let (e1, e2) = if noise.sigma() > 0.0 {
                        (normal.sample(&mut rng), normal.sample(&mut rng))
                    } else {
                        (0.0, 0.0)
                    };
                    let n_meas = n0 as f64 + e1 + e2;
                    let m_meas = m + 0.5 * (e1 - e2);
                    let slope = model.derivative(n_meas, gamma);
                    gamma + (m_meas - model.mean(n_meas, gamma)) / slope
                })
                .collect()
        })
        .collect();
    let estimates: Vec<f64> = chunks.into_iter().flatten().collect();
    if estimates.iter().any(|g| !g.is_finite()) {
        return Err(Error::UndefinedSensitivity("signal slope vanishes in a trial".into()));
    }
    let n = estimates.len() as f64;
    let mean = estimates.iter().sum::<f64>() / n;
    let var = estimates.iter().map(|g| (g - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let m4 = estimates.iter().map(|g| (g - mean).powi(4)).sum::<f64>() / n;
    let sd = var.sqrt();
    let var_se = ((m4 - var * var).max(0.0) / n).sqrt();
    Ok(MonteCarloResult { estimates, delta_gamma: sd, stderr: var_se / (2.0 * sd), mean_estimate: mean })
}

/// One line of the analytic-versus-Monte-Carlo table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountingRow {
    pub sigma: f64,
    pub n_atoms: u64,
    pub gamma: f64,
    pub delta_gamma_analytic: f64,
    pub delta_gamma_mc: f64,
    pub mc_stderr: f64,
}

impl CountingRow {
    pub const CSV_HEADER: &'static str = "sigma,N,gamma,delta_gamma_analytic,delta_gamma_mc,mc_stderr";

    pub fn csv_line(&self) -> String {
        format!(
            "{:.6e},{},{:.10e},{:.10e},{:.10e},{:.4e}",
            self.sigma, self.n_atoms, self.gamma, self.delta_gamma_analytic, self.delta_gamma_mc, self.mc_stderr
        )
    }
}
