use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polar::BitBlock;

/// A CRC generator `g(x)` of degree `r`, stored MSB-first without the
/// implicit leading coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "CrcFile", try_from = "CrcFile")]
pub struct CrcSpec {
    poly: Vec<u8>,
}

/// Serialized form: hex polynomial plus its length.
#[derive(Serialize, Deserialize)]
struct CrcFile {
    poly: String,
    len: usize,
}

impl From<CrcSpec> for CrcFile {
    fn from(c: CrcSpec) -> Self {
        Self {
            poly: c.to_hex(),
            len: c.len(),
        }
    }
}

impl TryFrom<CrcFile> for CrcSpec {
    type Error = Error;

    fn try_from(f: CrcFile) -> Result<Self> {
        Self::from_hex(&f.poly, f.len)
    }
}

impl CrcSpec {
    /// `poly[0]` is the coefficient of `x^{r-1}`, `poly[r-1]` that of `x^0`.
    pub fn new(poly: Vec<u8>) -> Result<Self> {
        if poly.is_empty() || poly.iter().any(|&b| b > 1) {
            return Err(Error::InvalidArgument(
                "CRC polynomial must be a non-empty bit string".into(),
            ));
        }
        Ok(Self { poly })
    }

    /// Parses a hex polynomial such as `0x621` for a CRC of length `r`.
    pub fn from_hex(hex: &str, r: usize) -> Result<Self> {
        let digits = hex.trim().trim_start_matches("0x").trim_start_matches("0X");
        let value = u64::from_str_radix(digits, 16)
            .map_err(|_| Error::InvalidArgument(format!("bad CRC polynomial {hex:?}")))?;
        if r == 0 || r > 63 || value >> r != 0 {
            return Err(Error::InvalidArgument(format!(
                "polynomial {hex} does not fit {r} bits"
            )));
        }
        Self::new((0..r).rev().map(|j| ((value >> j) & 1) as u8).collect())
    }

    /// Placeholder 11-bit default: `x^11 + x^10 + x^9 + x^5 + 1`.
    pub fn crc11() -> Self {
        Self::from_hex("0x621", 11).expect("valid constant")
    }

    /// Placeholder 8-bit default: `x^8 + x^2 + x + 1`.
    pub fn crc8() -> Self {
        Self::from_hex("0x07", 8).expect("valid constant")
    }

    pub fn len(&self) -> usize {
        self.poly.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poly.is_empty()
    }

    pub fn to_hex(&self) -> String {
        let v = self.poly.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
        format!("0x{v:x}")
    }

    /// Remainder of `m(x) x^r mod g(x)`, MSB-first.
    pub fn remainder(&self, bits: &[u8]) -> Vec<u8> {
        let r = self.poly.len();
        let mut reg = vec![0u8; r];
        for &b in bits {
            let feedback = reg[0] ^ b;
            reg.copy_within(1.., 0);
            reg[r - 1] = 0;
            if feedback == 1 {
                for (x, &g) in reg.iter_mut().zip(&self.poly) {
                    *x ^= g;
                }
            }
        }
        reg
    }

    /// True when `bits` (payload followed by its CRC) has zero remainder.
    pub fn check_bits(&self, bits: &[u8]) -> bool {
        bits.len() >= self.len() && self.remainder(bits).iter().all(|&b| b == 0)
    }
}

/// Appends the CRC of `payload`.
pub fn crc_attach(payload: &BitBlock, spec: &CrcSpec) -> Result<BitBlock> {
    if payload.is_empty() {
        return Err(Error::InvalidArgument("empty CRC payload".into()));
    }
    let mut out = payload.as_slice().to_vec();
    out.extend(spec.remainder(payload.as_slice()));
    Ok(BitBlock::from_vec_unchecked(out))
}

/// True when the trailing `r` bits of `msg` are the CRC of the rest.
pub fn crc_check(msg: &BitBlock, spec: &CrcSpec) -> bool {
    msg.len() > spec.len() && spec.check_bits(msg.as_slice())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Polynomial long division over GF(2), written independently of the register.
    fn long_division(payload: &[u8], g_full: &[u8]) -> Vec<u8> {
        let r = g_full.len() - 1;
        let mut work: Vec<u8> = payload.to_vec();
        work.extend(std::iter::repeat(0).take(r));
        for i in 0..payload.len() {
            if work[i] == 1 {
                for (j, &g) in g_full.iter().enumerate() {
                    work[i + j] ^= g;
                }
            }
        }
        work[payload.len()..].to_vec()
    }

    #[test]
    fn hand_example() {
        let spec = CrcSpec::new(vec![0, 1, 1]).unwrap();
        let out = crc_attach(&BitBlock::parse("1010").unwrap(), &spec).unwrap();
        assert_eq!(out.to_string(), "1010011");
        assert!(crc_check(&out, &spec));
    }

    #[test]
    fn zero_payload_zero_crc() {
        let out = crc_attach(&BitBlock::zeros(20), &CrcSpec::crc11()).unwrap();
        assert!(out.as_slice().iter().all(|&b| b == 0));
    }

    #[test]
    fn hex_round_trip() {
        assert_eq!(CrcSpec::crc11().to_hex(), "0x621");
        assert_eq!(CrcSpec::crc8().len(), 8);
        assert!(CrcSpec::from_hex("0x1ff", 8).is_err());
        assert!(CrcSpec::from_hex("zz", 8).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn attach_then_check(bits in proptest::collection::vec(0u8..2, 1..60)) {
            let spec = CrcSpec::crc11();
            let v = BitBlock::new(bits).unwrap();
            prop_assert!(crc_check(&crc_attach(&v, &spec).unwrap(), &spec));
        }
    }

    proptest! {
        #[test]
        fn register_matches_long_division(bits in proptest::collection::vec(0u8..2, 1..40)) {
            for spec in [CrcSpec::crc8(), CrcSpec::crc11()] {
                let mut g = vec![1u8];
                g.extend_from_slice(&spec.poly);
                prop_assert_eq!(spec.remainder(&bits), long_division(&bits, &g));
            }
        }

        #[test]
        fn single_flip_detected(bits in proptest::collection::vec(0u8..2, 1..40), pos in 0usize..51) {
            let spec = CrcSpec::crc11();
            let mut m = crc_attach(&BitBlock::new(bits).unwrap(), &spec).unwrap().into_vec();
            let p = pos % m.len();
            m[p] ^= 1;
            prop_assert!(!spec.check_bits(&m));
        }
    }
}
