//! Polar code definition and the polar transform `x = uG`, `G = F^{⊗n}`,
//! `F = [[1, 0], [1, 1]]`, in natural bit order (no bit-reversal permutation).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::FORMAT_VERSION;

/// A block of hard bits, each element 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BitBlock(Vec<u8>);

impl BitBlock {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if let Some(pos) = bits.iter().position(|&b| b > 1) {
            return Err(Error::InvalidArgument(format!(
                "bit {} has value {}, expected 0 or 1",
                pos + 1,
                bits[pos]
            )));
        }
        Ok(Self(bits))
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0; len])
    }

    /// Parses a string of `0`/`1` characters (whitespace ignored).
    pub fn parse(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidArgument(format!(
                    "invalid bit character {other:?}"
                ))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(Self(bits))
    }

    pub(crate) fn from_vec_unchecked(bits: Vec<u8>) -> Self {
        debug_assert!(bits.iter().all(|&b| b <= 1));
        Self(bits)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u8> {
        self.0
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }

    pub fn xor(&self, other: &BitBlock) -> Result<BitBlock> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                actual: other.len(),
            });
        }
        Ok(BitBlock(
            self.0.iter().zip(&other.0).map(|(a, b)| a ^ b).collect(),
        ))
    }
}

impl std::fmt::Display for BitBlock {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// An `(N, K)` polar code: length `N = 2^n` and the information set `A`.
///
/// `A` is stored ascending and 1-based; `a_k` is `info_index(k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "CodeConfigFile", try_from = "CodeConfigFile")]
pub struct CodeConfig {
    n: u32,
    info: Vec<usize>,
    frozen_mask: Vec<bool>,
}

impl CodeConfig {
    /// Builds a code from its length and any ordering of the information indices.
    pub fn new(len: usize, info: &[usize]) -> Result<Self> {
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "code length {len} is not a power of two"
            )));
        }
        let mut sorted = info.to_vec();
        sorted.sort_unstable();
        let mut frozen_mask = vec![true; len];
        for (pos, &i) in sorted.iter().enumerate() {
            if i == 0 || i > len {
                return Err(Error::IndexOutOfRange { index: i, max: len });
            }
            if pos > 0 && sorted[pos - 1] == i {
                return Err(Error::InvalidArgument(format!(
                    "duplicate information index {i}"
                )));
            }
            frozen_mask[i - 1] = false;
        }
        Ok(Self {
            n: len.trailing_zeros(),
            info: sorted,
            frozen_mask,
        })
    }

    /// Exponent `n` with `N = 2^n`.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Code length `N`.
    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Information length `K`.
    pub fn k(&self) -> usize {
        self.info.len()
    }

    /// The information set `A`, ascending, 1-based.
    pub fn info_set(&self) -> &[usize] {
        &self.info
    }

    /// `a_k` for `k` in `1..=K`.
    pub fn info_index(&self, k: usize) -> usize {
        self.info[k - 1]
    }

    /// The frozen set `F`, ascending, 1-based.
    pub fn frozen_set(&self) -> Vec<usize> {
        (1..=self.len())
            .filter(|&i| self.frozen_mask[i - 1])
            .collect()
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        self.frozen_mask[i - 1]
    }

    /// Frozen flags indexed from 0.
    pub fn frozen_mask(&self) -> &[bool] {
        &self.frozen_mask
    }

    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.len() as f64
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&CodeConfigFile::from(self))?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: CodeConfigFile = serde_json::from_str(s)?;
        file.try_into()
    }
}

/// On-disk form of a [`CodeConfig`]: `{"format": 1, "N": .., "K": .., "A": [..]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CodeConfigFile {
    #[serde(default = "default_format")]
    pub format: u32,
    #[serde(rename = "N")]
    pub len: usize,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "A")]
    pub info: Vec<usize>,
}

fn default_format() -> u32 {
    FORMAT_VERSION
}

impl From<&CodeConfig> for CodeConfigFile {
    fn from(cfg: &CodeConfig) -> Self {
        Self {
            format: FORMAT_VERSION,
            len: cfg.len(),
            k: cfg.k(),
            info: cfg.info.clone(),
        }
    }
}

impl From<CodeConfig> for CodeConfigFile {
    fn from(cfg: CodeConfig) -> Self {
        Self::from(&cfg)
    }
}

impl TryFrom<CodeConfigFile> for CodeConfig {
    type Error = Error;

    fn try_from(file: CodeConfigFile) -> Result<Self> {
        if file.format != FORMAT_VERSION {
            return Err(Error::Format(format!(
                "unsupported format version {}",
                file.format
            )));
        }
        if file.info.len() != file.k {
            return Err(Error::Format(format!(
                "K = {} but A has {} entries",
                file.k,
                file.info.len()
            )));
        }
        CodeConfig::new(file.len, &file.info)
    }
}

/// In-place butterfly for `x = uG` over GF(2). `bits.len()` must be a power of two.
pub(crate) fn transform_in_place(bits: &mut [u8]) {
    let len = bits.len();
    let mut half = 1;
    while half < len {
        for start in (0..len).step_by(2 * half) {
            let (left, right) = bits[start..start + 2 * half].split_at_mut(half);
            for (l, r) in left.iter_mut().zip(right.iter()) {
                *l ^= *r;
            }
        }
        half *= 2;
    }
}

/// Computes `x = uG` with `G = F^{⊗n}`. `G` is an involution, so this is also the inverse.
pub fn polar_transform(u: &BitBlock, n: u32) -> Result<BitBlock> {
    let len = 1usize << n;
    if u.len() != len {
        return Err(Error::InvalidArgument(format!(
            "input length {} is not 2^{n} = {len}",
            u.len()
        )));
    }
    let mut x = u.0.clone();
    transform_in_place(&mut x);
    Ok(BitBlock(x))
}

/// Hamming weight of row `i` (1-based) of `F^{⊗n}`: `2^{popcount(i-1)}`.
pub fn row_weight(i: usize, n: u32) -> Result<usize> {
    let len = 1usize << n;
    if i == 0 || i > len {
        return Err(Error::IndexOutOfRange { index: i, max: len });
    }
    Ok(1 << (i - 1).count_ones())
}

/// Row `i` (1-based) of `G`, obtained by transforming the unit vector `e_i`.
pub fn generator_row(i: usize, n: u32) -> Result<BitBlock> {
    let len = 1usize << n;
    if i == 0 || i > len {
        return Err(Error::IndexOutOfRange { index: i, max: len });
    }
    let mut e = vec![0u8; len];
    e[i - 1] = 1;
    transform_in_place(&mut e);
    Ok(BitBlock(e))
}

/// Places the message `v` on the information set: `u_{a_k} = v_k`, frozen bits zero.
pub fn embed_message(v: &BitBlock, cfg: &CodeConfig) -> Result<BitBlock> {
    if v.len() != cfg.k() {
        return Err(Error::LengthMismatch {
            expected: cfg.k(),
            actual: v.len(),
        });
    }
    let mut u = vec![0u8; cfg.len()];
    for (&a, &bit) in cfg.info.iter().zip(v.as_slice()) {
        u[a - 1] = bit;
    }
    Ok(BitBlock(u))
}

/// Reads the message `v_k = u_{a_k}` back out of a length-`N` block.
pub fn extract_message(u: &BitBlock, cfg: &CodeConfig) -> Result<BitBlock> {
    if u.len() != cfg.len() {
        return Err(Error::LengthMismatch {
            expected: cfg.len(),
            actual: u.len(),
        });
    }
    Ok(BitBlock(cfg.info.iter().map(|&a| u.0[a - 1]).collect()))
}

/// Encodes a message directly to a codeword.
pub fn encode(v: &BitBlock, cfg: &CodeConfig) -> Result<BitBlock> {
    let mut u = embed_message(v, cfg)?;
    transform_in_place(&mut u.0);
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Explicit Kronecker power `F^{⊗n}`, rows as bit vectors.
    fn kron_matrix(n: u32) -> Vec<Vec<u8>> {
        let mut g = vec![vec![1u8]];
        for _ in 0..n {
            let size = g.len();
            let mut next = vec![vec![0u8; 2 * size]; 2 * size];
            for r in 0..size {
                for c in 0..size {
                    next[r][c] = g[r][c];
                    next[r + size][c] = g[r][c];
                    next[r + size][c + size] = g[r][c];
                }
            }
            g = next;
        }
        g
    }

    fn matmul(u: &[u8], g: &[Vec<u8>]) -> Vec<u8> {
        let len = g.len();
        (0..len)
            .map(|c| (0..len).fold(0u8, |acc, r| acc ^ (u[r] & g[r][c])))
            .collect()
    }

    #[test]
    fn transform_examples() {
        let x = polar_transform(&BitBlock::zeros(4), 2).unwrap();
        assert_eq!(x, BitBlock::zeros(4));
        let x = polar_transform(&BitBlock::parse("11").unwrap(), 1).unwrap();
        assert_eq!(x.to_string(), "01");
        let x = polar_transform(&BitBlock::parse("0001").unwrap(), 2).unwrap();
        assert_eq!(x.to_string(), "1111");
    }

    #[test]
    fn transform_rejects_bad_length() {
        assert!(polar_transform(&BitBlock::zeros(3), 2).is_err());
        assert!(polar_transform(&BitBlock::zeros(8), 2).is_err());
    }

    #[test]
    fn transform_matches_explicit_matrix() {
        for n in 0..=6 {
            let g = kron_matrix(n);
            let len = 1usize << n;
            for seed in 0..20u64 {
                let u: Vec<u8> = (0..len)
                    .map(|i| ((seed.wrapping_mul(2654435761) >> (i % 31)) & 1) as u8)
                    .collect();
                let expected = matmul(&u, &g);
                let got = polar_transform(&BitBlock::new(u).unwrap(), n).unwrap();
                assert_eq!(got.as_slice(), expected.as_slice());
            }
        }
    }

    #[test]
    fn row_weight_examples() {
        assert_eq!(row_weight(1, 2).unwrap(), 1);
        assert_eq!(row_weight(4, 2).unwrap(), 4);
        assert_eq!(row_weight(1, 0).unwrap(), 1);
        assert!(row_weight(0, 2).is_err());
        assert!(row_weight(5, 2).is_err());
    }

    #[test]
    fn row_weight_closed_form_matches_explicit_rows() {
        for n in 0..=10 {
            let g = kron_matrix(n);
            for (r, row) in g.iter().enumerate() {
                let explicit = row.iter().filter(|&&b| b == 1).count();
                assert_eq!(row_weight(r + 1, n).unwrap(), explicit, "n={n} i={}", r + 1);
                if n <= 6 {
                    assert_eq!(generator_row(r + 1, n).unwrap().as_slice(), row.as_slice());
                }
            }
        }
    }

    #[test]
    fn embed_examples() {
        let cfg = CodeConfig::new(4, &[3, 4]).unwrap();
        let u = embed_message(&BitBlock::parse("10").unwrap(), &cfg).unwrap();
        assert_eq!(u.to_string(), "0010");
        let cfg = CodeConfig::new(4, &[4]).unwrap();
        let u = embed_message(&BitBlock::parse("1").unwrap(), &cfg).unwrap();
        assert_eq!(u.to_string(), "0001");
        let cfg = CodeConfig::new(4, &[1, 2, 3, 4]).unwrap();
        let v = BitBlock::parse("1011").unwrap();
        assert_eq!(embed_message(&v, &cfg).unwrap(), v);
        assert!(embed_message(&BitBlock::zeros(3), &cfg).is_err());
    }

    #[test]
    fn config_invariants() {
        let cfg = CodeConfig::new(8, &[8, 4, 7, 6]).unwrap();
        assert_eq!(cfg.info_set(), &[4, 6, 7, 8]);
        assert_eq!(cfg.frozen_set(), vec![1, 2, 3, 5]);
        assert_eq!(cfg.info_index(1), 4);
        assert_eq!(cfg.n(), 3);
        assert!(CodeConfig::new(8, &[0]).is_err());
        assert!(CodeConfig::new(8, &[9]).is_err());
        assert!(CodeConfig::new(8, &[2, 2]).is_err());
        assert!(CodeConfig::new(6, &[1]).is_err());
    }

    #[test]
    fn config_json_round_trip() {
        let cfg = CodeConfig::new(8, &[4, 6, 7, 8]).unwrap();
        let s = cfg.to_json().unwrap();
        assert!(s.contains("\"format\": 1"));
        assert_eq!(CodeConfig::from_json(&s).unwrap(), cfg);
        assert!(CodeConfig::from_json(r#"{"format":1,"N":8,"K":3,"A":[1,2]}"#).is_err());
    }

    proptest! {
        #[test]
        fn transform_is_involution(bits in proptest::collection::vec(0u8..2, 64)) {
            let u = BitBlock::new(bits).unwrap();
            let x = polar_transform(&u, 6).unwrap();
            prop_assert_eq!(polar_transform(&x, 6).unwrap(), u);
        }

        #[test]
        fn transform_is_linear(a in proptest::collection::vec(0u8..2, 32),
                               b in proptest::collection::vec(0u8..2, 32)) {
            let a = BitBlock::new(a).unwrap();
            let b = BitBlock::new(b).unwrap();
            let lhs = polar_transform(&a.xor(&b).unwrap(), 5).unwrap();
            let rhs = polar_transform(&a, 5).unwrap().xor(&polar_transform(&b, 5).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
