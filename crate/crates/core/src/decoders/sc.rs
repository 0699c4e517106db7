use super::{llr_combine_check, llr_combine_var};
use crate::channel::LlrBlock;
use crate::error::{Error, Result};
use crate::polar::{BitBlock, CodeConfig};

/// Recursive SC over natural-order `F^{⊗n}`. `decide(i, theta)` receives the
/// 0-based leaf index and its LLR and returns the bit to commit. Subtrees
/// whose leaves are all marked in `skip` are not visited; their bits are 0.
fn sc_node<D: FnMut(usize, f64) -> u8>(
    llr: &[f64],
    offset: usize,
    decide: &mut D,
    x_out: &mut [u8],
    scratch: &mut [f64],
    skip: Option<&[bool]>,
) {
    let len = llr.len();
    if skip.is_some_and(|s| s[offset..offset + len].iter().all(|&f| f)) {
        x_out.fill(0);
        return;
    }
    if len == 1 {
        x_out[0] = decide(offset, llr[0]);
        return;
    }
    let half = len / 2;
    let (buf, rest) = scratch.split_at_mut(half);
    let (top, bottom) = llr.split_at(half);
    for j in 0..half {
        buf[j] = llr_combine_check(top[j], bottom[j]);
    }
    sc_node(buf, offset, decide, &mut x_out[..half], rest, skip);
    for j in 0..half {
        buf[j] = llr_combine_var(top[j], bottom[j], x_out[j]);
    }
    sc_node(buf, offset + half, decide, &mut x_out[half..], rest, skip);
    let (left, right) = x_out.split_at_mut(half);
    for (l, r) in left.iter_mut().zip(right.iter()) {
        *l ^= *r;
    }
}

fn run_sc<D: FnMut(usize, f64) -> u8>(llr: &[f64], skip: Option<&[bool]>, mut decide: D) {
    let len = llr.len();
    let mut x = vec![0u8; len];
    let mut scratch = vec![0.0; len.max(1)];
    sc_node(llr, 0, &mut decide, &mut x, &mut scratch, skip);
}

/// Successive cancellation: frozen bits are 0; information bit `i` is 0 iff
/// its LLR is `>= 0`.
pub fn sc_decode(llr: &LlrBlock, cfg: &CodeConfig) -> Result<BitBlock> {
    if llr.len() != cfg.len() {
        return Err(Error::LengthMismatch {
            expected: cfg.len(),
            actual: llr.len(),
        });
    }
    let mut u = vec![0u8; cfg.len()];
    sc_decode_into(llr.as_slice(), cfg.frozen_mask(), &mut u);
    Ok(BitBlock::from_vec_unchecked(u))
}

pub(crate) fn sc_decode_into(llr: &[f64], frozen: &[bool], u: &mut [u8]) {
    // Frozen decisions ignore their LLR, so all-frozen subtrees are skipped.
    u.fill(0);
    run_sc(llr, Some(frozen), |i, theta| {
        let bit = if frozen[i] || theta >= 0.0 { 0 } else { 1 };
        u[i] = bit;
        bit
    });
}

/// Genie-aided SC: every decision is forced to the true bit, returning the
/// LLR `theta_N^{(i)}(y, u_1^{i-1})` seen at each of the `N` leaves.
pub fn sc_genie_llrs(llr: &LlrBlock, u_true: &BitBlock) -> Result<Vec<f64>> {
    if llr.len() != u_true.len() || !llr.len().is_power_of_two() {
        return Err(Error::LengthMismatch {
            expected: u_true.len(),
            actual: llr.len(),
        });
    }
    let mut thetas = vec![0.0; llr.len()];
    sc_genie_llrs_into(llr.as_slice(), u_true.as_slice(), &mut thetas);
    Ok(thetas)
}

pub(crate) fn sc_genie_llrs_into(llr: &[f64], truth: &[u8], thetas: &mut [f64]) {
    run_sc(llr, None, |i, theta| {
        thetas[i] = theta;
        truth[i]
    });
}
