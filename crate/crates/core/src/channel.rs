//! BI-AWGN channel: BPSK mapping `s = 1 - 2x` with `Es = 1`, additive Gaussian
//! noise of variance `sigma2 = 1 / (2 Es/N0)` per real dimension, and channel
//! LLRs `2y / sigma2`.
//!
//! Randomness comes from ChaCha8 with 64-bit stream splitting: trial `t` of a
//! run seeded with `seed` always draws from stream `t`, independent of how the
//! trials are scheduled. Normal variates use the ziggurat sampler of
//! `rand_distr::StandardNormal`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polar::BitBlock;

/// `Es/N0` in dB to noise variance per real dimension, with `Es = 1`.
pub fn snr_to_sigma2(es_n0_db: f64) -> f64 {
    1.0 / (2.0 * 10f64.powf(es_n0_db / 10.0))
}

/// Linear `Es/N0`.
pub fn snr_linear(es_n0_db: f64) -> f64 {
    10f64.powf(es_n0_db / 10.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub es_n0_db: f64,
    pub sigma2: f64,
    pub seed: u64,
    /// Forces every noise sample to zero while keeping the LLR scale `2 / sigma2`.
    #[serde(default)]
    pub noiseless: bool,
}

impl ChannelParams {
    pub fn new(es_n0_db: f64, seed: u64) -> Result<Self> {
        let sigma2 = snr_to_sigma2(es_n0_db);
        if !(sigma2.is_finite() && sigma2 > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "Es/N0 {es_n0_db} dB gives sigma2 = {sigma2}"
            )));
        }
        Ok(Self {
            es_n0_db,
            sigma2,
            seed,
            noiseless: false,
        })
    }

    pub fn noiseless(mut self) -> Self {
        self.noiseless = true;
        self
    }
}

/// Channel-level LLRs, positive favouring bit 0.
#[derive(Debug, Clone, PartialEq)]
pub struct LlrBlock(Vec<f64>);

impl LlrBlock {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "LLR {} is not finite",
                pos + 1
            )));
        }
        Ok(Self(values))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// The generator for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// LLRs for received samples: `2 y / sigma2`.
pub fn llr_from_received(y: &[f64], sigma2: f64) -> LlrBlock {
    LlrBlock(y.iter().map(|&yi| 2.0 * yi / sigma2).collect())
}

/// Sends `x` through BPSK/AWGN and returns the channel LLRs.
pub fn transmit<R: Rng + ?Sized>(x: &BitBlock, params: &ChannelParams, rng: &mut R) -> LlrBlock {
    let mut out = Vec::with_capacity(x.len());
    transmit_into(x.as_slice(), params, rng, &mut out);
    LlrBlock(out)
}

pub(crate) fn transmit_into<R: Rng + ?Sized>(
    x: &[u8],
    params: &ChannelParams,
    rng: &mut R,
    out: &mut Vec<f64>,
) {
    let sigma = params.sigma2.sqrt();
    let scale = 2.0 / params.sigma2;
    out.clear();
    for &bit in x {
        let s = 1.0 - 2.0 * bit as f64;
        let z: f64 = rng.sample(StandardNormal);
        let y = if params.noiseless { s } else { s + sigma * z };
        out.push(scale * y);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q_oracle(x: f64) -> f64 {
        0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
    }

    #[test]
    fn sigma2_examples() {
        assert!((snr_to_sigma2(0.0) - 0.5).abs() < 1e-15);
        assert!((snr_to_sigma2(3.0103) - 0.25).abs() < 1e-5);
        assert!((snr_to_sigma2(-3.0103) - 1.0).abs() < 2e-5);
    }

    #[test]
    fn zero_noise_and_erasure() {
        let p = ChannelParams::new(1.0, 0).unwrap().noiseless();
        let llr = transmit(&BitBlock::parse("01").unwrap(), &p, &mut trial_rng(0, 0));
        assert!((llr.as_slice()[0] - 2.0 / p.sigma2).abs() < 1e-12);
        assert!((llr.as_slice()[1] + 2.0 / p.sigma2).abs() < 1e-12);
        assert_eq!(llr_from_received(&[0.0], 0.3).as_slice(), &[0.0]);
    }

    #[test]
    fn deterministic_per_stream() {
        let p = ChannelParams::new(2.0, 42).unwrap();
        let x = BitBlock::zeros(64);
        let a = transmit(&x, &p, &mut trial_rng(42, 7));
        let b = transmit(&x, &p, &mut trial_rng(42, 7));
        let c = transmit(&x, &p, &mut trial_rng(42, 8));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn llr_mean_and_raw_error_rate() {
        // 10^6 draws on the all-zero word; mean 2/sigma2, P(LLR<0) = Q(1/sigma).
        let p = ChannelParams::new(1.0, 3).unwrap();
        let x = BitBlock::zeros(1000);
        let mut rng = trial_rng(3, 0);
        let (mut sum, mut neg, mut count) = (0.0, 0usize, 0usize);
        for _ in 0..1000 {
            for v in transmit(&x, &p, &mut rng).as_slice() {
                sum += v;
                neg += (*v < 0.0) as usize;
                count += 1;
            }
        }
        let mean = sum / count as f64;
        let mu = 2.0 / p.sigma2;
        // LLR variance is 4/sigma2.
        let se = (4.0 / p.sigma2 / count as f64).sqrt();
        assert!((mean - mu).abs() < 3.0 * se, "mean {mean} vs {mu}");
        let q = q_oracle(1.0 / p.sigma2.sqrt());
        let rate = neg as f64 / count as f64;
        let se = (q * (1.0 - q) / count as f64).sqrt();
        assert!((rate - q).abs() < 3.0 * se, "rate {rate} vs {q}");
    }
}
