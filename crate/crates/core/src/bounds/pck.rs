//! Upper bound on `P(C_k)`, the probability that the correct path survives
//! the decision on message bit `k` given it survived so far, for list size
//! `L = 2^m`.
//!
//! The window `L_{k-m}, …, L_k` of independent Gaussian LLRs enters through
//! three disjoint regions:
//!
//! 1. all of them non-negative;
//! 2. for `i = 1..m`, `L_{k-m}..L_{k-i} >= 0` and `-ln β_i <= L_{k-i+1} < 0`;
//! 3. `ln α <= L_{k-m} < 0` (or simply `L_{k-m} < 0` when α is discarded).
//!
//! On the positive orthant `β_i >= 2^i - 1 >= 1`, so the second-region
//! integrands are smooth; the floor at `β_i <= 1` only ever touches the
//! corner `l = 0`.

use serde::{Deserialize, Serialize};

use super::q::{gauss_interval, q_func};
use super::quadrature::{integrate_positive_orthant, IntegrationSettings};
use crate::error::{Error, Result};

/// The `α` of the third region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub enum Alpha {
    /// Relax the region to `L_{k-m} < 0`.
    #[default]
    Discard,
    Value(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub list_size: usize,
    pub alpha: Alpha,
    pub integration: IntegrationSettings,
}

impl BoundParams {
    pub fn new(list_size: usize) -> Result<Self> {
        if !list_size.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "list size {list_size} is not a power of two"
            )));
        }
        Ok(Self {
            list_size,
            alpha: Alpha::Discard,
            integration: IntegrationSettings::default(),
        })
    }

    pub fn with_alpha(mut self, alpha: Alpha) -> Result<Self> {
        if let Alpha::Value(a) = alpha {
            if !(a > 0.0 && a <= 1.0) {
                return Err(Error::InvalidArgument(format!(
                    "alpha {a} must lie in (0, 1]"
                )));
            }
        }
        self.alpha = alpha;
        Ok(self)
    }

    /// `m = log2 L`.
    pub fn m(&self) -> usize {
        self.list_size.trailing_zeros() as usize
    }
}

/// The three parts of the `P(C_k)` bound for one window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PckTerms {
    pub part1: f64,
    /// `part2[i - 1]` is the region-2 probability for `i = 1..m`.
    pub part2: Vec<f64>,
    pub part3: f64,
    /// `min(1, part1 + Σ part2 + part3)`.
    pub upper: f64,
    /// `1 - upper`, evaluated without cancellation.
    pub complement: f64,
    /// Sum of the quadrature or Monte Carlo error estimates.
    pub error: f64,
}

/// `β_i` at a point `w` of the window (`w[0] = l_{k-m}`, …), `1 <= i <= m`.
pub fn beta(i: usize, m: usize, list_size: usize, w: &[f64]) -> f64 {
    // Π_{q=i}^{m-1} (e^{-l_{k-q}} + 1) with l_{k-q} = w[m - q].
    let denom: f64 = (1..=m - i).map(|j| (-w[j]).exp() + 1.0).product();
    list_size as f64 * w[0].exp() / denom - 1.0
}

/// Evaluates the bound for the window `(mu[j], sd[j])`, `j = 0..=m`, holding
/// the Gaussian parameters of `L_{k-m}, …, L_k` in that order.
pub fn pck_window(mu: &[f64], sd: &[f64], params: &BoundParams) -> Result<PckTerms> {
    let m = params.m();
    if mu.len() != m + 1 || sd.len() != m + 1 {
        return Err(Error::LengthMismatch {
            expected: m + 1,
            actual: mu.len().min(sd.len()),
        });
    }
    // ln P(L_j >= 0) accumulated without losing the tiny error probabilities.
    let ln_keep: f64 = mu
        .iter()
        .zip(sd)
        .map(|(&u, &s)| (-q_func(u / s)).ln_1p())
        .sum();
    let part1 = ln_keep.exp();
    let not_all = -ln_keep.exp_m1();

    let mut part2 = Vec::with_capacity(m);
    let mut error = 0.0;
    for i in 1..=m {
        let dims = m - i + 1;
        let gauss: Vec<(f64, f64)> = (0..dims).map(|j| (mu[j], sd[j])).collect();
        let (tm, ts) = (mu[dims], sd[dims]);
        let list_size = params.list_size;
        let integrand = |w: &[f64]| {
            let b = beta(i, m, list_size, w);
            if b <= 1.0 {
                0.0
            } else {
                gauss_interval(tm, ts, -b.ln(), 0.0)
            }
        };
        let r = integrate_positive_orthant(integrand, &gauss, &params.integration)?;
        part2.push(r.value.max(0.0));
        error += r.error;
    }

    let part3 = if m == 0 {
        // With a single path nothing else can hold the list after an error.
        0.0
    } else {
        match params.alpha {
            Alpha::Discard => q_func(mu[0] / sd[0]),
            Alpha::Value(a) => gauss_interval(mu[0], sd[0], a.ln(), 0.0),
        }
    };
    let p2: f64 = part2.iter().sum();
    let upper = (part1 + p2 + part3).min(1.0);
    let complement = (not_all - p2 - part3).clamp(0.0, 1.0);
    Ok(PckTerms {
        part1,
        part2,
        part3,
        upper,
        complement,
        error,
    })
}

/// Monte Carlo estimate of the same three regions by direct sampling of the
/// window; used as an independent check of the quadrature.
pub fn pck_monte_carlo(
    mu: &[f64],
    sd: &[f64],
    params: &BoundParams,
    samples: u64,
    seed: u64,
) -> (f64, f64) {
    use rand::SeedableRng;
    use rand_distr::{Distribution, StandardNormal};
    let m = params.m();
    let ln_alpha = match params.alpha {
        Alpha::Discard => f64::NEG_INFINITY,
        Alpha::Value(a) => a.ln(),
    };
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut w = vec![0.0; m + 1];
    let mut hits = 0u64;
    for _ in 0..samples {
        for j in 0..=m {
            let z: f64 = StandardNormal.sample(&mut rng);
            w[j] = mu[j] + sd[j] * z;
        }
        let first_neg = w.iter().position(|&x| x < 0.0);
        let inside = match first_neg {
            None => true,
            Some(0) => m > 0 && w[0] >= ln_alpha,
            Some(p) => {
                let i = m + 1 - p;
                let b = beta(i, m, params.list_size, &w);
                b > 1.0 && w[p] >= -b.ln()
            }
        };
        hits += inside as u64;
    }
    let p = hits as f64 / samples as f64;
    (p, (p * (1.0 - p) / samples as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_channels_keep_the_path() {
        for l in [1, 2, 4, 8] {
            let p = BoundParams::new(l).unwrap();
            let m = p.m();
            let t = pck_window(&vec![1e4; m + 1], &vec![(2e4f64).sqrt(); m + 1], &p).unwrap();
            assert!((t.upper - 1.0).abs() < 1e-12);
            assert!(t.complement < 1e-12);
        }
    }

    #[test]
    fn two_fair_signs() {
        let p = BoundParams::new(2).unwrap();
        let t = pck_window(&[0.0, 0.0], &[3.0, 1.0], &p).unwrap();
        assert!((t.part1 - 0.25).abs() < 1e-15);
    }

    #[test]
    fn beta_examples() {
        assert!((beta(1, 1, 2, &[0.0, 5.0]) - 1.0).abs() < 1e-15);
        assert!((beta(2, 2, 4, &[1.0, 0.0, 0.0]) - (4.0 * 1f64.exp() - 1.0)).abs() < 1e-12);
        // i = 1, m = 2 divides by (e^{-l_{k-1}} + 1).
        assert!((beta(1, 2, 4, &[0.0, 0.0, 0.0]) - 1.0).abs() < 1e-15);
        assert!(beta(1, 3, 8, &[0.0, 0.0, 0.0, 0.0]) >= 1.0 - 1e-15);
    }

    #[test]
    fn single_path_reduces_to_sign() {
        let p = BoundParams::new(1).unwrap();
        let t = pck_window(&[3.0], &[6f64.sqrt()], &p).unwrap();
        assert!((t.complement - q_func(3.0 / 6f64.sqrt())).abs() < 1e-16);
    }

    #[test]
    fn parts_are_bounded_by_companions() {
        let p = BoundParams::new(8).unwrap();
        let mu = [2.0, 5.0, 1.0, 7.5];
        let sd: Vec<f64> = mu.iter().map(|m: &f64| (2.0 * m).sqrt()).collect();
        let t = pck_window(&mu, &sd, &p).unwrap();
        for i in 1..=3 {
            let dims = 3 - i + 1;
            let companion: f64 = (0..dims).map(|j| q_func(-mu[j] / sd[j])).product();
            assert!(t.part2[i - 1] >= 0.0 && t.part2[i - 1] <= companion);
        }
        assert!((t.upper + t.complement - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quadrature_matches_direct_sampling() {
        let p = BoundParams::new(2).unwrap();
        let (mu, sd) = ([4.0, 4.0], [8f64.sqrt(), 8f64.sqrt()]);
        let t = pck_window(&mu, &sd, &p).unwrap();
        let (mc, se) = pck_monte_carlo(&mu, &sd, &p, 1_000_000, 3);
        assert!(
            (t.upper - mc).abs() < 3.0 * se + t.error,
            "{} vs {mc} ± {se}",
            t.upper
        );
    }

    #[test]
    fn alpha_shrinks_region_three() {
        let base = BoundParams::new(4).unwrap();
        let mu = [1.0, 2.0, 3.0];
        let sd = [2f64.sqrt(), 2.0, 6f64.sqrt()];
        let d = pck_window(&mu, &sd, &base).unwrap();
        let a = pck_window(&mu, &sd, &base.with_alpha(Alpha::Value(0.1)).unwrap()).unwrap();
        assert!(a.part3 < d.part3);
        assert!(base.with_alpha(Alpha::Value(0.0)).is_err());
        let one = pck_window(&mu, &sd, &base.with_alpha(Alpha::Value(1.0)).unwrap()).unwrap();
        assert_eq!(one.part3, 0.0);
    }
}
