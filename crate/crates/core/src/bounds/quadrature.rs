//! Expectations over independent Gaussians restricted to the positive orthant.
//!
//! `∫_{l ≥ 0} f(l) Π_j p_j(l_j) dl` with `p_j` the `N(μ_j, σ_j²)` density.
//! Up to three dimensions use tensor Gauss–Legendre on
//! `[max(0, μ - Tσ), μ + Tσ]` per axis; the error estimate is the change
//! against half the node count, and the node count doubles until the
//! tolerance is met. Higher dimensions use Monte Carlo stratified along the
//! first axis.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::q::{norm_inv, q_func};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrationSettings {
    /// Gauss–Legendre nodes per dimension for the first attempt.
    pub nodes: usize,
    /// Upper limit on tensor grid points while doubling.
    pub max_points: usize,
    pub tol_abs: f64,
    pub tol_rel: f64,
    /// Truncation radius in standard deviations.
    pub truncation: f64,
    pub mc_samples: u64,
    pub mc_seed: u64,
    /// Dimensions from which Monte Carlo replaces quadrature.
    pub mc_min_dim: usize,
    pub force_mc: bool,
}

impl Default for IntegrationSettings {
    fn default() -> Self {
        Self {
            nodes: 64,
            max_points: 1 << 22,
            tol_abs: 1e-12,
            tol_rel: 1e-8,
            truncation: 10.0,
            mc_samples: 1_000_000,
            mc_seed: 0x5eed,
            mc_min_dim: 4,
            force_mc: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

type Rule = Arc<(Vec<f64>, Vec<f64>)>;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, cached per order.
pub fn gauss_legendre(n: usize) -> Rule {
    static CACHE: OnceLock<RwLock<HashMap<usize, Rule>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(rule) = cache.read().expect("rule cache").get(&n) {
        return rule.clone();
    }
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j - 1) as f64 * z * p2 - (j - 1) as f64 * p3) / j as f64;
            }
            pp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * pp * pp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    let rule = Arc::new((x, w));
    cache.write().expect("rule cache").insert(n, rule.clone());
    rule
}

fn normal_pdf(x: f64, mu: f64, sigma: f64) -> f64 {
    let z = (x - mu) / sigma;
    (-0.5 * z * z).exp() / (sigma * (2.0 * PI).sqrt())
}

fn tensor<F: Fn(&[f64]) -> f64>(f: &F, gauss: &[(f64, f64)], n: usize, radius: f64) -> f64 {
    let rule = gauss_legendre(n);
    let axes: Vec<(Vec<f64>, Vec<f64>)> = gauss
        .iter()
        .map(|&(mu, sigma)| {
            let lo = (mu - radius * sigma).max(0.0);
            let hi = mu + radius * sigma;
            let (c, h) = (0.5 * (lo + hi), 0.5 * (hi - lo));
            let pts: Vec<f64> = rule.0.iter().map(|&t| c + h * t).collect();
            let wts = rule
                .1
                .iter()
                .zip(&pts)
                .map(|(&w, &p)| h * w * normal_pdf(p, mu, sigma))
                .collect();
            (pts, wts)
        })
        .collect();
    let mut point = vec![0.0; gauss.len()];
    fn walk<F: Fn(&[f64]) -> f64>(
        f: &F,
        axes: &[(Vec<f64>, Vec<f64>)],
        dim: usize,
        weight: f64,
        point: &mut [f64],
    ) -> f64 {
        if dim == axes.len() {
            return weight * f(point);
        }
        let (pts, wts) = &axes[dim];
        let mut acc = 0.0;
        for (p, w) in pts.iter().zip(wts) {
            point[dim] = *p;
            acc += walk(f, axes, dim + 1, weight * w, point);
        }
        acc
    }
    walk(f, &axes, 0, 1.0, &mut point)
}

/// Truncated-normal sample on `[0, ∞)` from a uniform in `(0, 1)`.
fn positive_normal(u: f64, mu: f64, sigma: f64) -> f64 {
    let below = q_func(mu / sigma);
    let p = below + u * (1.0 - below);
    (mu + sigma * norm_inv(p)).max(0.0)
}

fn monte_carlo<F: Fn(&[f64]) -> f64>(
    f: &F,
    gauss: &[(f64, f64)],
    settings: &IntegrationSettings,
) -> Integral {
    let mass: f64 = gauss.iter().map(|&(mu, s)| q_func(-mu / s)).product();
    let samples = settings.mc_samples.max(2);
    let strata = samples.min(1000);
    let per = (samples / strata).max(2);
    let mut rng = ChaCha8Rng::seed_from_u64(settings.mc_seed);
    let mut point = vec![0.0; gauss.len()];
    let (mut mean, mut var) = (0.0, 0.0);
    for s in 0..strata {
        let (mut sum, mut sq) = (0.0, 0.0);
        for _ in 0..per {
            let u0 = (s as f64 + rng.random::<f64>()) / strata as f64;
            point[0] = positive_normal(u0, gauss[0].0, gauss[0].1);
            for (d, &(mu, sigma)) in gauss.iter().enumerate().skip(1) {
                point[d] = positive_normal(rng.random::<f64>(), mu, sigma);
            }
            let v = f(&point);
            sum += v;
            sq += v * v;
        }
        let m = sum / per as f64;
        let v = (sq / per as f64 - m * m).max(0.0) * per as f64 / (per - 1) as f64;
        mean += m / strata as f64;
        var += v / per as f64 / (strata * strata) as f64;
    }
    Integral {
        value: mass * mean,
        error: mass * var.sqrt(),
    }
}

/// Integrates `f` against the product Gaussian density over `l >= 0`.
pub fn integrate_positive_orthant<F: Fn(&[f64]) -> f64>(
    f: F,
    gauss: &[(f64, f64)],
    settings: &IntegrationSettings,
) -> Result<Integral> {
    let d = gauss.len();
    if d == 0 {
        return Err(Error::InvalidArgument(
            "integration needs at least one dimension".into(),
        ));
    }
    if let Some(&(mu, s)) = gauss
        .iter()
        .find(|&&(mu, s)| !(s > 0.0 && mu.is_finite() && s.is_finite()))
    {
        return Err(Error::InvalidArgument(format!(
            "invalid Gaussian ({mu}, {s})"
        )));
    }
    // An axis whose mass on [0, ∞) is below the truncation radius contributes nothing.
    if gauss
        .iter()
        .any(|&(mu, s)| mu + settings.truncation * s <= 0.0)
    {
        return Ok(Integral {
            value: 0.0,
            error: 0.0,
        });
    }
    if settings.force_mc || d >= settings.mc_min_dim {
        return Ok(monte_carlo(&f, gauss, settings));
    }
    let mut n = settings.nodes.max(2);
    let mut coarse = tensor(&f, gauss, n / 2, settings.truncation);
    loop {
        let fine = tensor(&f, gauss, n, settings.truncation);
        let error = (fine - coarse).abs();
        if error <= settings.tol_abs + settings.tol_rel * fine.abs() {
            return Ok(Integral { value: fine, error });
        }
        if (2 * n)
            .checked_pow(d as u32)
            .is_none_or(|p| p > settings.max_points)
        {
            return Err(Error::Integration { value: fine, error });
        }
        coarse = fine;
        n *= 2;
    }
}
