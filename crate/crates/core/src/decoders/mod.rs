//! SC, SCL, CRC-aided SCL and brute-force ML decoding.
//!
//! Path metrics are kept in the log domain with the exact update
//! `log_metric += -ln(1 + exp(-(1 - 2u) * theta))`, applied to information
//! and frozen bits alike, so the metric of a complete path equals
//! `ln P(x | y)` up to a constant shared by every path.

mod crc;
mod ml;
mod sc;
mod scl;

pub use crc::{crc_attach, crc_check, CrcSpec};
pub use ml::{ml_decode_bruteforce, MlDecoder, ML_MAX_K};
pub use sc::{sc_decode, sc_genie_llrs};
pub(crate) use sc::{sc_decode_into, sc_genie_llrs_into};
pub use scl::{ca_scl_decode, scl_decode, DecodePath, PathList, PathTrace, SclDecoder, SclOutput};

/// `ln(1 + e^x)` without overflow or loss of precision for large `|x|`.
#[inline]
pub fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Check-node combination `2 atanh(tanh(a/2) tanh(b/2))`.
///
/// With `lo = ||a| - |b||` and `hi = |a| + |b|` this equals
/// `sgn(a) sgn(b) (min(|a|,|b|) - c)` where
/// `c = ln(1+e^{-lo}) - ln(1+e^{-hi}) = ln(1 + e^{-lo}(1 - e^{-2 min}) / (1 + e^{-hi}))`,
/// finite for every finite input, so no magnitude clamp is needed. `c` drops
/// below half an ulp of the result once `lo > 37`, and `ln(1+e^{-hi})`
/// likewise once `hi > 37`.
#[inline]
pub fn llr_combine_check(a: f64, b: f64) -> f64 {
    let (x, y) = (a.abs(), b.abs());
    let mag = x.min(y);
    let lo = (x - y).abs();
    let hi = x + y;
    let c = if lo > 37.0 {
        0.0
    } else if hi > 37.0 {
        (-lo).exp().ln_1p()
    } else {
        let e_lo = (-lo).exp();
        let e_hi = (-hi).exp();
        // e^{-lo} - e^{-hi} loses digits when the two are close.
        let diff = if mag < 0.25 {
            -e_lo * (-2.0 * mag).exp_m1()
        } else {
            e_lo - e_hi
        };
        (diff / (1.0 + e_hi)).ln_1p()
    };
    let v = (mag - c).max(0.0);
    if (a < 0.0) != (b < 0.0) {
        -v
    } else {
        v
    }
}

/// Variable-node combination `(1 - 2u) a + b`.
#[inline]
pub fn llr_combine_var(a: f64, b: f64, u: u8) -> f64 {
    if u == 0 {
        b + a
    } else {
        b - a
    }
}

/// Metric penalty for deciding `bit` on a leaf LLR `theta`: `ln(1 + e^{-(1-2u) theta})`.
#[inline]
pub(crate) fn decision_penalty(theta: f64, bit: u8) -> f64 {
    if bit == 0 {
        softplus(-theta)
    } else {
        softplus(theta)
    }
}
