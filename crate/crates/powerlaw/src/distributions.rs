//! The two model families: the discrete power law
//! `p(x) = x^-α / ζ(α)` and the discrete power law with exponential cutoff
//! `p(x) = e^(βx) x^-α / Li_α(e^β)`, on x = 1, 2, 3, …
//!
//! The power law is exactly the β = 0 slice of the cutoff family; both
//! evaluate their normalizer through the same [`crate::specfun`] code
//! path, so the specialization is bit-identical.
//!
//! Sampling is inverse-CDF over a cumulative table grown on demand and
//! truncated at the 1 - 1e-12 quantile (residual mass assigned to the
//! last cell), driven by a ChaCha8 stream seeded from a caller-supplied
//! `u64`. Identical (params, count, seed) give identical tables.

use crate::data::FrequencyTable;
use crate::error::{Error, Result};
use crate::specfun;
use crate::sum::NeumaierSum;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Largest support point the sampler will tabulate.
const SAMPLER_CAP: u64 = 100_000_000;
/// Quantile at which the sampler truncates the cumulative table.
const SAMPLER_TAIL: f64 = 1e-12;

/// Power-law exponent α > 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawParams {
    alpha: f64,
}

impl PowerLawParams {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 1.0 {
            return Err(Error::InvalidParams(format!(
                "power law requires alpha > 1 (got {alpha}); the pmf is not normalizable"
            )));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn pmf(&self, x: u32) -> f64 {
        Model::PowerLaw(*self).pmf(x)
    }

    pub fn log_pmf(&self, x: u32) -> f64 {
        Model::PowerLaw(*self).log_pmf(x)
    }

    pub fn cdf(&self, x: u32) -> f64 {
        Model::PowerLaw(*self).cdf(x)
    }

    pub fn sample(&self, count: u64, seed: u64) -> Result<FrequencyTable> {
        Model::PowerLaw(*self).sample(count, seed)
    }
}

/// Cutoff-family parameters: β < 0 (any real α), or β = 0 with α > 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffParams {
    alpha: f64,
    beta: f64,
}

impl CutoffParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let ok = alpha.is_finite()
            && beta.is_finite()
            && (beta < 0.0 || (beta == 0.0 && alpha > 1.0));
        if !ok {
            return Err(Error::InvalidParams(format!(
                "cutoff family requires beta < 0, or beta = 0 with alpha > 1 \
                 (got alpha = {alpha}, beta = {beta})"
            )));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn pmf(&self, x: u32) -> f64 {
        Model::Cutoff(*self).pmf(x)
    }

    pub fn log_pmf(&self, x: u32) -> f64 {
        Model::Cutoff(*self).log_pmf(x)
    }

    pub fn cdf(&self, x: u32) -> f64 {
        Model::Cutoff(*self).cdf(x)
    }

    pub fn sample(&self, count: u64, seed: u64) -> Result<FrequencyTable> {
        Model::Cutoff(*self).sample(count, seed)
    }

    /// E\[X\] = Li_(α-1)(e^β) / Li_α(e^β). Requires β < 0; at β = 0 the mean
    /// diverges for α ≤ 2 and this operation is refused outright.
    pub fn model_mean(&self) -> Result<f64> {
        if self.beta >= 0.0 {
            return Err(Error::Domain(
                "model_mean requires beta < 0 (the mean may diverge at beta = 0)".into(),
            ));
        }
        let num = specfun::polylog(self.alpha - 1.0, self.beta)?;
        let den = specfun::polylog(self.alpha, self.beta)?;
        Ok(num.value / den.value)
    }
}

/// Either family behind one dispatching surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    PowerLaw(PowerLawParams),
    Cutoff(CutoffParams),
}

impl Model {
    pub fn alpha(&self) -> f64 {
        match self {
            Model::PowerLaw(p) => p.alpha,
            Model::Cutoff(p) => p.alpha,
        }
    }

    pub fn beta(&self) -> f64 {
        match self {
            Model::PowerLaw(_) => 0.0,
            Model::Cutoff(p) => p.beta,
        }
    }

    /// ln of the normalizer: ln ζ(α) or ln Li_α(e^β).
    pub fn ln_norm(&self) -> f64 {
        let norm = match self {
            Model::PowerLaw(p) => specfun::zeta(p.alpha),
            Model::Cutoff(p) => specfun::polylog(p.alpha, p.beta),
        };
        norm.expect("normalizer is defined on the validated parameter space")
            .value
            .ln()
    }

    /// ln p(x) = βx - α ln x - ln(normalizer); stable out to x ~ 10^6 and
    /// beyond.
    pub fn log_pmf(&self, x: u32) -> f64 {
        assert!(x >= 1, "support starts at x = 1");
        self.log_pmf_with(self.ln_norm(), x)
    }

    fn log_pmf_with(&self, ln_norm: f64, x: u32) -> f64 {
        let xf = f64::from(x);
        self.beta() * xf - self.alpha() * xf.ln() - ln_norm
    }

    pub fn pmf(&self, x: u32) -> f64 {
        self.log_pmf(x).exp()
    }

    /// F(x) = Σ_{k=1}^{x} p(k) by direct compensated summation.
    pub fn cdf(&self, x: u32) -> f64 {
        assert!(x >= 1, "support starts at x = 1");
        let ln_norm = self.ln_norm();
        let mut acc = NeumaierSum::new();
        for k in 1..=x {
            acc.add(self.log_pmf_with(ln_norm, k).exp());
        }
        acc.value()
    }

    /// Upper bound on the normalized tail mass Σ_{k>x} p(k).
    ///
    /// For β = 0 the integral bound x^(1-α)/(α-1)/ζ(α); for β < 0 the
    /// geometric bound p(x+1)/(1 - r) once the term ratio r < 1.
    pub fn tail_bound(&self, x: u64) -> f64 {
        let alpha = self.alpha();
        let beta = self.beta();
        let xf = x as f64;
        match self {
            Model::PowerLaw(_) => {
                xf.powf(1.0 - alpha) / (alpha - 1.0) / self.ln_norm().exp()
            }
            Model::Cutoff(p) => {
                if p.beta == 0.0 {
                    return Model::PowerLaw(PowerLawParams { alpha }).tail_bound(x);
                }
                // sup of the forward term ratio beyond x
                let ratio = if alpha >= 0.0 {
                    beta.exp()
                } else {
                    beta.exp() * (1.0 + 1.0 / xf).powf(-alpha)
                };
                if ratio >= 1.0 {
                    return f64::INFINITY;
                }
                let next = (beta * (xf + 1.0) - alpha * (xf + 1.0).ln() - self.ln_norm()).exp();
                next / (1.0 - ratio)
            }
        }
    }

    /// Smallest x with tail mass certifiably below `tail`, or None past
    /// the cap.
    fn quantile_cap(&self, tail: f64) -> Option<u64> {
        let mut x: u64 = 1;
        while x <= SAMPLER_CAP {
            if self.tail_bound(x) <= tail {
                return Some(x);
            }
            x *= 2;
        }
        None
    }

    /// Draw `count` values by inverse CDF and aggregate into a table.
    /// Deterministic for a fixed seed (ChaCha8 keyed by `seed`).
    pub fn sample(&self, count: u64, seed: u64) -> Result<FrequencyTable> {
        if count == 0 {
            return Err(Error::EmptyInput("sample count must be >= 1".into()));
        }
        let x_star = self.quantile_cap(SAMPLER_TAIL).ok_or_else(|| {
            Error::Resource(format!(
                "the 1 - {SAMPLER_TAIL:e} quantile exceeds the sampler cap {SAMPLER_CAP}"
            ))
        })?;
        let ln_norm = self.ln_norm();
        // cum[i] = F(i + 1), grown on demand
        let mut cum: Vec<f64> = Vec::with_capacity(1024);
        let mut acc = NeumaierSum::new();
        let push_next = |cum: &mut Vec<f64>, acc: &mut NeumaierSum| {
            let k = cum.len() as u32 + 1;
            acc.add(self.log_pmf_with(ln_norm, k).exp());
            cum.push(acc.value());
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
        for _ in 0..count {
            let u: f64 = rng.random();
            while (cum.last().copied().unwrap_or(0.0)) < u && (cum.len() as u64) < x_star {
                push_next(&mut cum, &mut acc);
            }
            // first index with cum >= u; residual mass lands on x_star
            let idx = cum.partition_point(|&c| c < u);
            let x = (idx as u64 + 1).min(x_star);
            let x = u32::try_from(x).expect("sampler cap fits in u32 range");
            *counts.entry(x).or_insert(0) += 1;
        }
        FrequencyTable::new(counts.into_iter().collect())
    }
}
