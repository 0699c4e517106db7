//! Minimum weight distribution of polar codes.
//!
//! Exact spectra come from Gray-code enumeration of all `2^K` messages: each
//! step flips one message bit, so the running codeword changes by one
//! generator row. Above `K = 24` the minimum-weight codewords are counted as
//! affine flats instead. When that search is too large, `A_dmin` falls back to
//! the number of minimum-weight rows, a lower bound flagged as approximate.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polar::{generator_row, row_weight, CodeConfig};

/// Largest `K` accepted by exhaustive enumeration.
pub const ENUM_MAX_K: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightEnumerator {
    pub dmin: usize,
    pub a_dmin: u64,
    /// Complete spectrum `weight -> count` when enumerated.
    pub spectrum: Option<BTreeMap<usize, u64>>,
    /// True when `a_dmin` is a row-count lower bound rather than exact.
    pub approximate: bool,
}

impl WeightEnumerator {
    /// Explicit `(d_min, A_dmin)`, e.g. supplied by the user for large codes.
    pub fn given(dmin: usize, a_dmin: u64) -> Result<Self> {
        if dmin == 0 || a_dmin == 0 {
            return Err(Error::InvalidArgument(
                "d_min and A_dmin must be at least 1".into(),
            ));
        }
        Ok(Self {
            dmin,
            a_dmin,
            spectrum: None,
            approximate: false,
        })
    }

    /// Exact enumeration when `K <= 24`. Above that, the exact minimum-weight
    /// count from [`count_min_weight`], or the row-based approximation when
    /// the flat search is too large.
    pub fn for_code(cfg: &CodeConfig) -> Result<Self> {
        if cfg.k() <= ENUM_MAX_K {
            return enumerate_weights(cfg);
        }
        match count_min_weight(cfg)? {
            Some((dmin, a_dmin)) => Self::given(dmin, a_dmin),
            None => from_rows(cfg),
        }
    }

    /// Spectrum as a JSON object keyed by weight.
    pub fn spectrum_json(&self) -> serde_json::Value {
        match &self.spectrum {
            Some(s) => serde_json::Value::Object(
                s.iter()
                    .map(|(w, c)| (w.to_string(), serde_json::Value::from(*c)))
                    .collect(),
            ),
            None => serde_json::Value::Null,
        }
    }
}

fn packed_rows(cfg: &CodeConfig) -> Result<Vec<Vec<u64>>> {
    let words = cfg.len().div_ceil(64);
    cfg.info_set()
        .iter()
        .map(|&a| {
            let row = generator_row(a, cfg.n())?;
            let mut packed = vec![0u64; words];
            for (i, &b) in row.as_slice().iter().enumerate() {
                packed[i / 64] |= (b as u64) << (i % 64);
            }
            Ok(packed)
        })
        .collect()
}

/// Exact weight spectrum over all `2^K` codewords.
pub fn enumerate_weights(cfg: &CodeConfig) -> Result<WeightEnumerator> {
    let k = cfg.k();
    if k == 0 {
        return Err(Error::InvalidArgument(
            "K = 0 has no nonzero codeword".into(),
        ));
    }
    if k > ENUM_MAX_K {
        return Err(Error::Capacity {
            k,
            limit: ENUM_MAX_K,
        });
    }
    let rows = packed_rows(cfg)?;
    let len = cfg.len();
    // The top `shard_bits` message bits select a shard; each shard walks a
    // Gray code over the remaining bits.
    let shard_bits = k.saturating_sub(12).min(6);
    let low = k - shard_bits;
    let hist = (0..1u64 << shard_bits)
        .into_par_iter()
        .map(|s| {
            let mut word = vec![0u64; rows[0].len()];
            for b in 0..shard_bits {
                if (s >> b) & 1 == 1 {
                    word.iter_mut()
                        .zip(&rows[low + b])
                        .for_each(|(w, r)| *w ^= r);
                }
            }
            let mut hist = vec![0u64; len + 1];
            let weight = |w: &[u64]| w.iter().map(|x| x.count_ones() as usize).sum::<usize>();
            hist[weight(&word)] += 1;
            for t in 1u64..(1u64 << low) {
                let j = t.trailing_zeros() as usize;
                word.iter_mut().zip(&rows[j]).for_each(|(w, r)| *w ^= r);
                hist[weight(&word)] += 1;
            }
            hist
        })
        .reduce(
            || vec![0u64; len + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let spectrum: BTreeMap<usize, u64> = hist
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(w, &c)| (w, c))
        .collect();
    let (&dmin, &a_dmin) = spectrum
        .iter()
        .find(|(&w, _)| w > 0)
        .ok_or_else(|| Error::Contract("code has no nonzero codeword".into()))?;
    Ok(WeightEnumerator {
        dmin,
        a_dmin,
        spectrum: Some(spectrum),
        approximate: false,
    })
}

/// `d_min` as the minimum row weight over the information set.
pub fn dmin_lower_via_rows(cfg: &CodeConfig) -> Result<usize> {
    cfg.info_set()
        .iter()
        .map(|&a| row_weight(a, cfg.n()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .min()
        .ok_or_else(|| Error::InvalidArgument("K = 0 has no nonzero codeword".into()))
}

/// Row-based description: exact `d_min`, `A_dmin` as the count of
/// minimum-weight rows (a lower bound).
pub fn from_rows(cfg: &CodeConfig) -> Result<WeightEnumerator> {
    let dmin = dmin_lower_via_rows(cfg)?;
    let count = cfg
        .info_set()
        .iter()
        .filter(|&&a| row_weight(a, cfg.n()).ok() == Some(dmin))
        .count();
    Ok(WeightEnumerator {
        dmin,
        a_dmin: count as u64,
        spectrum: None,
        approximate: true,
    })
}

/// Largest number of candidate flats [`count_min_weight`] will test.
pub const FLAT_MAX_CANDIDATES: u64 = 1 << 24;

/// Row indices (0-based) as monomials: row `c` is the product of
/// `y_b = 1 + p_b` over the zero bits `b` of `c`.
struct MonomialSet {
    n: usize,
    info: Vec<bool>,
}

impl MonomialSet {
    fn new(cfg: &CodeConfig) -> Self {
        let info = cfg.frozen_mask().iter().map(|&f| !f).collect();
        Self {
            n: cfg.n() as usize,
            info,
        }
    }

    fn contains(&self, c: usize) -> bool {
        self.info[c]
    }

    /// Replacements `(b, k)` of `y_b` by `y_k` (`k < b`, `y_k` absent) that
    /// stay inside the set.
    fn moves(&self, c: usize, all: bool) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for b in (0..self.n).filter(|b| c >> b & 1 == 0) {
            for k in (0..b).filter(|k| c >> k & 1 == 1) {
                if all || self.contains((c | 1 << b) & !(1 << k)) {
                    out.push((b, k));
                }
            }
        }
        out
    }

    /// Closed under dividing out a variable and under `y_b -> y_k` for `k < b`.
    fn is_decreasing(&self) -> bool {
        (0..self.info.len()).filter(|&c| self.contains(c)).all(|c| {
            (0..self.n)
                .filter(|b| c >> b & 1 == 0)
                .all(|b| self.contains(c | 1 << b))
                && self.moves(c, true).len() == self.moves(c, false).len()
        })
    }
}

/// `x F^{⊗n}` on a packed word array of length `2^n`.
fn packed_transform(x: &mut [u64], n: usize) {
    const LOW: [u64; 6] = [
        0x5555_5555_5555_5555,
        0x3333_3333_3333_3333,
        0x0f0f_0f0f_0f0f_0f0f,
        0x00ff_00ff_00ff_00ff,
        0x0000_ffff_0000_ffff,
        0x0000_0000_ffff_ffff,
    ];
    for (s, &mask) in LOW.iter().enumerate().take(n) {
        for w in x.iter_mut() {
            *w ^= (*w >> (1 << s)) & mask;
        }
    }
    for s in 6..n {
        let stride = 1 << (s - 6);
        for w in (0..x.len()).filter(|w| w & stride == 0) {
            x[w] ^= x[w + stride];
        }
    }
}

/// Exact number of minimum-weight codewords.
///
/// Minimum-weight codewords are indicators of affine flats. Each flat is
/// written once as `prod_b (y_b + sum_k a_bk y_k + c_b)` with `b` running
/// over the zero bits of a minimum-weight information row and `k < b` over
/// its one bits. For a decreasing information set every such product is a
/// codeword and the count has a closed form. Otherwise `a_bk = 1` is only
/// possible when the replaced monomial is an information row, and the
/// remaining candidates are tested one by one. Returns `None` when that
/// would exceed [`FLAT_MAX_CANDIDATES`].
pub fn count_min_weight(cfg: &CodeConfig) -> Result<Option<(usize, u64)>> {
    let dmin = dmin_lower_via_rows(cfg)?;
    let set = MonomialSet::new(cfg);
    let n = set.n;
    let t = dmin.trailing_zeros();
    let r = n - t as usize;
    let leading: Vec<usize> = (0..cfg.len())
        .filter(|&c| set.contains(c) && c.count_ones() == t)
        .collect();
    if set.is_decreasing() {
        let a = leading
            .iter()
            .map(|&c| 1u64 << (r + set.moves(c, true).len()))
            .sum();
        return Ok(Some((dmin, a)));
    }
    let moves: Vec<Vec<(usize, usize)>> = leading.iter().map(|&c| set.moves(c, false)).collect();
    let candidates: u64 = moves
        .iter()
        .map(|m| 1u64.checked_shl((r + m.len()) as u32).unwrap_or(u64::MAX))
        .sum();
    if candidates > FLAT_MAX_CANDIDATES {
        return Ok(None);
    }
    let words = cfg.len().div_ceil(64);
    let mut frozen = vec![0u64; words];
    for c in (0..cfg.len()).filter(|&c| !set.contains(c)) {
        frozen[c / 64] |= 1 << (c % 64);
    }
    let mask = cfg.len() - 1;
    let a = leading
        .par_iter()
        .zip(&moves)
        .map(|(&c, moves)| {
            let pivots: Vec<usize> = (0..n).filter(|b| c >> b & 1 == 0).collect();
            let free: Vec<usize> = (0..n).filter(|b| c >> b & 1 == 1).collect();
            let mut x = vec![0u64; words];
            let mut points = vec![0usize; 1 << t];
            let mut count = 0u64;
            for assign in 0u64..1 << moves.len() {
                // Linear part of each factor, restricted to the free variables.
                let mut forms = vec![0usize; n];
                for (j, &(b, k)) in moves.iter().enumerate() {
                    if assign >> j & 1 == 1 {
                        forms[b] |= 1 << k;
                    }
                }
                for (z, p) in points.iter_mut().enumerate() {
                    let y = free
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| z >> j & 1 == 1)
                        .fold(0, |acc, (_, &b)| acc | 1 << b);
                    *p = pivots
                        .iter()
                        .filter(|&&b| (forms[b] & y).count_ones() & 1 == 1)
                        .fold(y, |acc, &b| acc | 1 << b);
                }
                for shift in 0usize..1 << r {
                    let v = pivots
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| shift >> j & 1 == 1)
                        .fold(0, |acc, (_, &b)| acc | 1 << b);
                    x.fill(0);
                    for &y in &points {
                        // y_b = 1 + p_b; the all-ones constant is absorbed by `v`.
                        let p = (y ^ v) & mask;
                        x[p / 64] |= 1 << (p % 64);
                    }
                    packed_transform(&mut x, n);
                    count += x.iter().zip(&frozen).all(|(u, f)| u & f == 0) as u64;
                }
            }
            count
        })
        .sum();
    Ok(Some((dmin, a)))
}
