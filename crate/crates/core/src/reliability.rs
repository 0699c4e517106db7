//! Gaussian-approximation (GA) evolution of the synthetic channels.
//!
//! Each synthetic channel's LLR is modelled as `N(μ, 2μ)`. Starting from the
//! channel mean `2 / sigma2`, one polarization level maps `μ` to
//! `φ⁻¹(1 - (1 - φ(μ))²)` on the check branch and `2μ` on the variable branch.
//! The results are reported as equivalent noise variances `σ_i² = 2 / μ_i`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{ln_q, q_func};
use crate::channel::{snr_to_sigma2, transmit_into, ChannelParams};
use crate::decoders::sc_genie_llrs_into;
use crate::error::{Error, Result};
use crate::polar::CodeConfig;

/// Where the two segments of `φ` meet. The nominal switch at 10 leaves a jump
/// of about 1e-3 that makes `φ` non-monotone; the exact crossing does not.
pub const PHI_SWITCH: f64 = 14.394_352_942_168_441;

/// Bumped whenever the `φ` approximation changes; part of the cache key.
pub const PHI_VERSION: u32 = 1;

/// `ln φ(x)` for the two-segment approximation.
pub fn ln_phi(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x < PHI_SWITCH {
        -0.4527 * x.powf(0.86) + 0.0218
    } else {
        0.5 * (PI / x).ln() - x / 4.0 + (1.0 - 10.0 / (7.0 * x)).ln()
    }
}

pub fn phi(x: f64) -> f64 {
    ln_phi(x).exp()
}

fn ln_phi_deriv(x: f64) -> f64 {
    if x < PHI_SWITCH {
        -0.4527 * 0.86 * x.powf(-0.14)
    } else {
        let c = 10.0 / (7.0 * x);
        -0.5 / x - 0.25 + c / x / (1.0 - c)
    }
}

/// Solves `ln φ(x) = t` for `t <= ln φ(0⁺)`.
pub fn phi_inv_ln(t: f64) -> f64 {
    let top = ln_phi(f64::MIN_POSITIVE);
    if t >= top {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while ln_phi(hi) > t {
        lo = hi;
        hi *= 2.0;
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let g = ln_phi(x) - t;
        if g > 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - g / ln_phi_deriv(x);
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= 1e-14 * x.max(1.0) {
            return next;
        }
        x = next;
    }
    x
}

/// `φ⁻¹(y)` for `0 < y <= φ(0⁺)`.
pub fn phi_inv(y: f64) -> f64 {
    phi_inv_ln(y.ln())
}

/// Check-node mean `φ⁻¹(1 - (1 - φ(μ))²)`, evaluated as `φ⁻¹(φ (2 - φ))` in
/// the log domain. Capped at `μ`: the first segment exceeds 1 below
/// `x ≈ 0.029`, where the formula would otherwise report an improvement.
pub fn check_mean(mu: f64) -> f64 {
    let lp = ln_phi(mu);
    let p = lp.exp();
    phi_inv_ln(lp + (2.0 - p).ln()).min(mu)
}

type CacheKey = (u32, u64, u32);

fn cache() -> &'static RwLock<HashMap<CacheKey, Arc<Vec<f64>>>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, Arc<Vec<f64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// GA means `μ_1..μ_N` (natural order) for a length-`2^n` code.
pub fn ga_means(n: u32, sigma2_channel: f64) -> Result<Arc<Vec<f64>>> {
    if !(sigma2_channel > 0.0 && sigma2_channel.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "channel variance {sigma2_channel} must be positive"
        )));
    }
    if n > 24 {
        return Err(Error::InvalidArgument(format!("n = {n} is too large")));
    }
    let key = (n, sigma2_channel.to_bits(), PHI_VERSION);
    if let Some(hit) = cache().read().expect("cache lock").get(&key) {
        return Ok(hit.clone());
    }
    let mut mu = vec![2.0 / sigma2_channel];
    for _ in 0..n {
        let mut next = Vec::with_capacity(2 * mu.len());
        for &m in &mu {
            next.push(check_mean(m));
            next.push(2.0 * m);
        }
        mu = next;
    }
    let mu = Arc::new(mu);
    cache().write().expect("cache lock").insert(key, mu.clone());
    Ok(mu)
}

/// Equivalent noise variances `σ_i² = 2 / μ_i` of all `N` synthetic channels.
pub fn ga_evolve(n: u32, sigma2_channel: f64) -> Result<Vec<f64>> {
    Ok(ga_means(n, sigma2_channel)?
        .iter()
        .map(|&m| 2.0 / m)
        .collect())
}

/// GA description of a code at a design SNR.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReliabilityProfile {
    pub n: u32,
    pub design_es_n0_db: f64,
    pub sigma2_channel: f64,
    pub sigma2_per_channel: Vec<f64>,
    /// Information indices (1-based) the per-bit fields refer to.
    pub info: Vec<usize>,
    /// `μ_{L_k} = 2 / σ²_{a_k}`.
    pub mu_l: Vec<f64>,
    /// `σ²_{L_k} = 4 / σ²_{a_k}`.
    pub var_l: Vec<f64>,
}

impl ReliabilityProfile {
    /// Runs GA at `es_n0_db` and restricts it to the information set of `cfg`.
    pub fn from_ga(cfg: &CodeConfig, es_n0_db: f64) -> Result<Self> {
        let sigma2 = snr_to_sigma2(es_n0_db);
        let per = ga_evolve(cfg.n(), sigma2)?;
        Ok(Self::from_channel_variances(per, cfg, es_n0_db, sigma2))
    }

    pub(crate) fn from_channel_variances(
        sigma2_per_channel: Vec<f64>,
        cfg: &CodeConfig,
        es_n0_db: f64,
        sigma2_channel: f64,
    ) -> Self {
        let info = cfg.info_set().to_vec();
        let mu_l: Vec<f64> = info
            .iter()
            .map(|&a| 2.0 / sigma2_per_channel[a - 1])
            .collect();
        let var_l = mu_l.iter().map(|&m| 2.0 * m).collect();
        Self {
            n: cfg.n(),
            design_es_n0_db: es_n0_db,
            sigma2_channel,
            sigma2_per_channel,
            info,
            mu_l,
            var_l,
        }
    }

    pub fn k(&self) -> usize {
        self.info.len()
    }

    /// `(μ, σ)` of `L_k`, `k` 1-based.
    pub fn gaussian(&self, k: usize) -> (f64, f64) {
        (self.mu_l[k - 1], self.var_l[k - 1].sqrt())
    }

    /// `{"format", "n", "sigma2_channel", "sigma2_per_channel"}`.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&serde_json::json!({
            "format": crate::FORMAT_VERSION,
            "n": self.n,
            "sigma2_channel": self.sigma2_channel,
            "sigma2_per_channel": self.sigma2_per_channel,
        }))?)
    }
}

/// `P(L_k < 0) = Q(μ / σ)`, `k` 1-based.
pub fn bit_error_prob(profile: &ReliabilityProfile, k: usize) -> Result<f64> {
    if k == 0 || k > profile.k() {
        return Err(Error::IndexOutOfRange {
            index: k,
            max: profile.k(),
        });
    }
    let (mu, sd) = profile.gaussian(k);
    Ok(q_func(mu / sd))
}

/// `ln P(L_k < 0)`, finite where the probability underflows.
pub fn ln_bit_error_prob(profile: &ReliabilityProfile, k: usize) -> f64 {
    let (mu, sd) = profile.gaussian(k);
    ln_q(mu / sd)
}

/// Empirical `P(L_j < 0)` per information bit from genie-aided SC on
/// all-zero transmissions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityEstimate {
    pub samples: u64,
    pub p_neg: Vec<f64>,
    pub std_err: Vec<f64>,
}

const ORACLE_CHUNK: u64 = 4096;

/// Monte Carlo stand-in for full density evolution: simulates `samples`
/// all-zero blocks, runs SC with every decision forced to 0 and counts
/// `θ < 0` at each information index.
pub fn mc_density_oracle(
    cfg: &CodeConfig,
    sigma2_channel: f64,
    samples: u64,
    seed: u64,
) -> Result<DensityEstimate> {
    mc_density_oracle_with(cfg, sigma2_channel, samples, seed, false)
}

pub(crate) fn mc_density_oracle_with(
    cfg: &CodeConfig,
    sigma2_channel: f64,
    samples: u64,
    seed: u64,
    noiseless: bool,
) -> Result<DensityEstimate> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be positive".into()));
    }
    let mut params = ChannelParams {
        es_n0_db: f64::NAN,
        sigma2: sigma2_channel,
        seed,
        noiseless: false,
    };
    if noiseless {
        params = params.noiseless();
    }
    let len = cfg.len();
    let zeros = vec![0u8; len];
    let chunks = samples.div_ceil(ORACLE_CHUNK);
    let counts = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let mut llr = Vec::with_capacity(len);
            let mut thetas = vec![0.0; len];
            let mut counts = vec![0u64; len];
            let hi = ((c + 1) * ORACLE_CHUNK).min(samples);
            for _ in c * ORACLE_CHUNK..hi {
                transmit_into(&zeros, &params, &mut rng, &mut llr);
                sc_genie_llrs_into(&llr, &zeros, &mut thetas);
                for (cnt, &t) in counts.iter_mut().zip(&thetas) {
                    *cnt += (t < 0.0) as u64;
                }
            }
            counts
        })
        .reduce(
            || vec![0u64; len],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let s = samples as f64;
    let p_neg: Vec<f64> = cfg
        .info_set()
        .iter()
        .map(|&a| counts[a - 1] as f64 / s)
        .collect();
    let std_err = p_neg.iter().map(|&p| (p * (1.0 - p) / s).sqrt()).collect();
    Ok(DensityEstimate {
        samples,
        p_neg,
        std_err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn segments_meet_at_switch() {
        let a = (-0.4527 * PHI_SWITCH.powf(0.86) + 0.0218f64).exp();
        let b = (PI / PHI_SWITCH).sqrt()
            * (-PHI_SWITCH / 4.0).exp()
            * (1.0 - 10.0 / (7.0 * PHI_SWITCH));
        assert!(((a - b) / a).abs() < 1e-12);
    }

    #[test]
    fn phi_is_decreasing() {
        let mut prev = phi(1e-6);
        let mut x = 1e-6;
        while x < 500.0 {
            x *= 1.01;
            let p = phi(x);
            assert!(p < prev, "phi not decreasing at {x}");
            prev = p;
        }
    }

    proptest! {
        #[test]
        fn phi_round_trip(lx in (1e-3f64).ln()..(100f64).ln()) {
            let x = lx.exp();
            let back = phi_inv(phi(x));
            prop_assert!(((back - x) / x).abs() < 1e-6, "x={} back={}", x, back);
        }
    }

    #[test]
    fn check_node_degrades() {
        for mu in [1e-4, 0.01, 0.5, 3.0, 20.0, 300.0, 5000.0] {
            let c = check_mean(mu);
            assert!(c > 0.0 && c <= mu, "mu={mu} c={c}");
        }
        // Deep in the asymptotic regime the check node loses about ln 2 in ln φ.
        let c = check_mean(400.0);
        assert!((ln_phi(c) - ln_phi(400.0) - std::f64::consts::LN_2).abs() < 1e-6);
    }

    #[test]
    fn small_n_examples() {
        assert_eq!(ga_evolve(0, 0.7).unwrap(), vec![0.7]);
        let s = ga_evolve(1, 0.5).unwrap();
        assert!((s[1] - 0.25).abs() < 1e-15);
        assert!(s[0] > 0.5);
        assert!(ga_evolve(2, 0.0).is_err());
    }

    #[test]
    fn max_mean_grows_with_n() {
        for sigma2 in [0.3, 0.5, 1.0, 2.0] {
            let mut prev = 0.0;
            for n in 0..10 {
                let best = ga_means(n, sigma2)
                    .unwrap()
                    .iter()
                    .cloned()
                    .fold(0.0, f64::max);
                assert!(best >= prev);
                prev = best;
            }
        }
    }

    #[test]
    fn profile_relations() {
        let cfg = CodeConfig::new(8, &[4, 6, 7, 8]).unwrap();
        let p = ReliabilityProfile::from_ga(&cfg, 1.0).unwrap();
        for k in 1..=4 {
            let s2 = p.sigma2_per_channel[cfg.info_index(k) - 1];
            assert!((p.mu_l[k - 1] - 2.0 / s2).abs() < 1e-12);
            assert!((p.var_l[k - 1] - 4.0 / s2).abs() < 1e-12);
        }
        let json: serde_json::Value = serde_json::from_str(&p.to_json().unwrap()).unwrap();
        assert_eq!(json["n"], 3);
        assert_eq!(json["sigma2_per_channel"].as_array().unwrap().len(), 8);
    }

    #[test]
    fn bit_error_examples() {
        let cfg = CodeConfig::new(1, &[1]).unwrap();
        let mut p = ReliabilityProfile::from_channel_variances(vec![0.5], &cfg, 0.0, 0.5);
        assert!((bit_error_prob(&p, 1).unwrap() - 0.078_649_603_525_142_57).abs() < 1e-15);
        p.mu_l[0] = 0.0;
        assert_eq!(bit_error_prob(&p, 1).unwrap(), 0.5);
        p.mu_l[0] = 1e6;
        p.var_l[0] = 2e6;
        assert!(bit_error_prob(&p, 1).unwrap() < 1e-300);
        assert!(bit_error_prob(&p, 2).is_err());
    }

    #[test]
    fn oracle_noiseless_is_zero() {
        let cfg = CodeConfig::new(16, &[8, 12, 14, 15, 16]).unwrap();
        let est = mc_density_oracle_with(&cfg, 0.5, 1000, 1, true).unwrap();
        assert!(est.p_neg.iter().all(|&p| p == 0.0));
    }

    #[test]
    fn oracle_matches_exact_variable_node() {
        // N = 2, index 2: θ = l1 + l2 is exactly N(8, 16) at σ² = 0.5, so P = Q(2).
        let cfg = CodeConfig::new(2, &[2]).unwrap();
        let est = mc_density_oracle(&cfg, 0.5, 200_000, 5).unwrap();
        let want = 0.022_750_131_948_179_21;
        assert!((est.p_neg[0] - want).abs() < 3.0 * est.std_err[0]);
        let p = ReliabilityProfile::from_ga(&cfg, 0.0).unwrap();
        assert!((bit_error_prob(&p, 1).unwrap() - want).abs() < 1e-15);
    }
}
