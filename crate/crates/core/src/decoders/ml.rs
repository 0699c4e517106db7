//! Exhaustive maximum-likelihood decoding by Gray-code enumeration.
//!
//! On a BI-AWGN channel `ln P(x | y) = C + ½ Σ (1 - 2x_i) l_i`, so maximising
//! the correlation is exactly maximising the likelihood. Each Gray step flips
//! one message bit, which XORs one generator row into the running codeword
//! and updates the correlation in `O(w(g_i))`.

use crate::channel::LlrBlock;
use crate::error::{Error, Result};
use crate::polar::{generator_row, BitBlock, CodeConfig};

/// Largest `K` accepted by exhaustive enumeration.
pub const ML_MAX_K: usize = 24;

/// Reusable brute-force ML decoder.
#[derive(Debug, Clone)]
pub struct MlDecoder {
    len: usize,
    info: Vec<usize>,
    /// Support of each information row, ordered so the lightest rows sit at
    /// the most frequently flipped Gray positions.
    rows: Vec<Vec<usize>>,
    /// Message bit (0-based `k`) toggled by Gray position `j`.
    gray_to_msg: Vec<usize>,
    signed: Vec<f64>,
}

impl MlDecoder {
    pub fn new(cfg: &CodeConfig) -> Result<Self> {
        let k = cfg.k();
        if k > ML_MAX_K {
            return Err(Error::Capacity { k, limit: ML_MAX_K });
        }
        let mut order: Vec<usize> = (0..k).collect();
        let weight = |idx: usize| generator_row(cfg.info_set()[idx], cfg.n()).map(|r| r.weight());
        let weights = (0..k).map(weight).collect::<Result<Vec<_>>>()?;
        order.sort_by_key(|&idx| (weights[idx], idx));
        let rows = order
            .iter()
            .map(|&idx| {
                let row = generator_row(cfg.info_set()[idx], cfg.n())?;
                Ok(row
                    .as_slice()
                    .iter()
                    .enumerate()
                    .filter(|(_, &b)| b == 1)
                    .map(|(i, _)| i)
                    .collect())
            })
            .collect::<Result<Vec<Vec<usize>>>>()?;
        Ok(Self {
            len: cfg.len(),
            info: cfg.info_set().to_vec(),
            rows,
            gray_to_msg: order,
            signed: vec![0.0; cfg.len()],
        })
    }

    /// Returns the decided `u` (frozen positions zero).
    pub fn decode(&mut self, llr: &LlrBlock) -> Result<BitBlock> {
        self.decode_slice(llr.as_slice())
    }

    pub(crate) fn decode_slice(&mut self, llr: &[f64]) -> Result<BitBlock> {
        if llr.len() != self.len {
            return Err(Error::LengthMismatch {
                expected: self.len,
                actual: llr.len(),
            });
        }
        let k = self.info.len();
        self.signed.copy_from_slice(llr);
        let mut corr: f64 = llr.iter().sum();
        let (mut best_corr, mut best_msg) = (corr, 0u32);
        // Message value with v_1 as the most significant bit.
        let mut msg = 0u32;
        for t in 1u64..(1u64 << k) {
            let j = t.trailing_zeros() as usize;
            for &p in &self.rows[j] {
                corr -= 2.0 * self.signed[p];
                self.signed[p] = -self.signed[p];
            }
            msg ^= 1 << (k - 1 - self.gray_to_msg[j]);
            if corr > best_corr || (corr == best_corr && msg < best_msg) {
                best_corr = corr;
                best_msg = msg;
            }
        }
        let mut u = vec![0u8; self.len];
        for (idx, &a) in self.info.iter().enumerate() {
            u[a - 1] = ((best_msg >> (k - 1 - idx)) & 1) as u8;
        }
        Ok(BitBlock::from_vec_unchecked(u))
    }
}

/// Maximum-likelihood decision over all `2^K` messages; ties go to the
/// smallest message value.
pub fn ml_decode_bruteforce(llr: &LlrBlock, cfg: &CodeConfig) -> Result<BitBlock> {
    MlDecoder::new(cfg)?.decode(llr)
}
