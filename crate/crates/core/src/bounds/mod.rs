//! Error-probability bounds for SC, SCL and ML decoding of polar codes.
//!
//! Every bound works on the Gaussian LLR model of [`ReliabilityProfile`] and
//! treats the LLRs of different message bits as independent.
//!
//! The SCL lower bound sums, over `k = m+1..K`, the probability that the
//! correct path is first lost while deciding bit `k`,
//! `(1 - P_UB(C_k)) Π_{j<k-m} P(L_j >= 0)`, and adds the ML error
//! probability (approximated by the leading union-bound term).

mod pck;
mod q;
mod quadrature;

use serde::{Deserialize, Serialize};

pub use pck::{beta, pck_monte_carlo, pck_window, Alpha, BoundParams, PckTerms};
pub use q::{gauss_interval, ln_q, norm_inv, q_func};
pub use quadrature::{gauss_legendre, integrate_positive_orthant, Integral, IntegrationSettings};

use crate::channel::snr_linear;
use crate::error::{Error, Result};
use crate::reliability::ReliabilityProfile;
use crate::wdist::WeightEnumerator;

/// Leading union-bound term `min(1, A_dmin Q(√(2 d_min Es/N0)))`.
pub fn union_bound(dmin: usize, a_dmin: u64, es_n0_db: f64) -> f64 {
    (a_dmin as f64 * q_func((2.0 * dmin as f64 * snr_linear(es_n0_db)).sqrt())).min(1.0)
}

/// Full union bound over a complete weight spectrum.
pub fn union_bound_spectrum(wd: &WeightEnumerator, es_n0_db: f64) -> Result<f64> {
    let spectrum = wd.spectrum.as_ref().ok_or_else(|| {
        Error::InvalidArgument("full union bound needs a complete spectrum".into())
    })?;
    let snr = snr_linear(es_n0_db);
    let sum: f64 = spectrum
        .iter()
        .filter(|(&w, _)| w > 0)
        .map(|(&w, &c)| c as f64 * q_func((2.0 * w as f64 * snr).sqrt()))
        .sum();
    Ok(sum.min(1.0))
}

fn bit_errors(profile: &ReliabilityProfile) -> Vec<f64> {
    (1..=profile.k())
        .map(|k| {
            let (mu, sd) = profile.gaussian(k);
            q_func(mu / sd)
        })
        .collect()
}

/// `min(1, Σ_k P(L_k < 0))`.
pub fn sc_upper_bound_classic(profile: &ReliabilityProfile) -> f64 {
    bit_errors(profile).iter().sum::<f64>().min(1.0)
}

/// `Σ_k P(L_k < 0) Π_{j<k} P(L_j >= 0)`: the probability that some bit is
/// the first one decided wrongly.
pub fn sc_upper_bound_modified(profile: &ReliabilityProfile) -> f64 {
    let mut ln_prefix = 0.0f64;
    let mut total = 0.0;
    for p in bit_errors(profile) {
        total += p * ln_prefix.exp();
        ln_prefix += (-p).ln_1p();
    }
    total.min(1.0)
}

/// All bound values at one SNR.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub es_n0_db: f64,
    pub list_size: usize,
    pub p_ml: f64,
    /// `P(S_k)` lower-bound terms for `k = m+1..K`.
    pub p_s_terms: Vec<f64>,
    /// `P_UB(C_k)` for `k = m+1..K`.
    pub p_ub_ck: Vec<f64>,
    pub p_lb_scl: f64,
    pub p_sc_modified: f64,
    pub p_sc_classic: f64,
    pub dmin: usize,
    pub a_dmin: u64,
    /// Set when `A_dmin` is a lower estimate rather than exact.
    pub a_dmin_approximate: bool,
    /// Largest integration error estimate over all windows.
    pub max_integration_error: f64,
}

/// Evaluates every `P(C_k)` window of `profile`: entry `k - m - 1` holds the
/// terms for message bit `k`.
pub fn pck_all(profile: &ReliabilityProfile, params: &BoundParams) -> Result<Vec<PckTerms>> {
    let m = params.m();
    let k_total = profile.k();
    if k_total <= m {
        return Ok(Vec::new());
    }
    let sd: Vec<f64> = profile.var_l.iter().map(|v| v.sqrt()).collect();
    (m + 1..=k_total)
        .map(|k| pck_window(&profile.mu_l[k - 1 - m..k], &sd[k - 1 - m..k], params))
        .collect()
}

/// `P_UB(C_k)` for message bit `k` (1-based, `k > m`).
pub fn pck_upper_bound(
    k: usize,
    profile: &ReliabilityProfile,
    params: &BoundParams,
) -> Result<f64> {
    let m = params.m();
    if k <= m || k > profile.k() {
        return Err(Error::IndexOutOfRange {
            index: k,
            max: profile.k(),
        });
    }
    let sd: Vec<f64> = profile.var_l[k - 1 - m..k]
        .iter()
        .map(|v| v.sqrt())
        .collect();
    Ok(pck_window(&profile.mu_l[k - 1 - m..k], &sd, params)?.upper)
}

/// Combines per-window complements into the lower bound. `complements[k-m-1]`
/// is `1 - P_UB(C_k)` and `bit_err[j-1]` is `P(L_j < 0)`.
pub(crate) fn assemble_lower_bound(
    complements: &[f64],
    bit_err: &[f64],
    p_ml: f64,
) -> (Vec<f64>, f64) {
    let mut ln_prefix = 0.0f64;
    let mut terms = Vec::with_capacity(complements.len());
    for (idx, &c) in complements.iter().enumerate() {
        // Window for k = idx + m + 1 keeps bits 1..k-m-1 = 1..idx.
        if idx > 0 {
            ln_prefix += (-bit_err[idx - 1]).ln_1p();
        }
        terms.push(c * ln_prefix.exp());
    }
    let total = (terms.iter().sum::<f64>() + p_ml).clamp(0.0, 1.0);
    (terms, total)
}

/// The SCL lower bound with all intermediate quantities. `profile` must be
/// the GA profile at `es_n0_db`.
pub fn lb_scl(
    profile: &ReliabilityProfile,
    params: &BoundParams,
    wd: &WeightEnumerator,
    es_n0_db: f64,
) -> Result<BoundReport> {
    let p_ml = union_bound(wd.dmin, wd.a_dmin, es_n0_db);
    let windows = pck_all(profile, params)?;
    let complements: Vec<f64> = windows.iter().map(|w| w.complement).collect();
    let (p_s_terms, p_lb_scl) = assemble_lower_bound(&complements, &bit_errors(profile), p_ml);
    Ok(BoundReport {
        es_n0_db,
        list_size: params.list_size,
        p_ml,
        p_s_terms,
        p_ub_ck: windows.iter().map(|w| w.upper).collect(),
        p_lb_scl,
        p_sc_modified: sc_upper_bound_modified(profile),
        p_sc_classic: sc_upper_bound_classic(profile),
        dmin: wd.dmin,
        a_dmin: wd.a_dmin,
        a_dmin_approximate: wd.approximate,
        max_integration_error: windows.iter().map(|w| w.error).fold(0.0, f64::max),
    })
}
