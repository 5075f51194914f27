//! Bit strings and their shadow encodings.
//!
//! For a nonzero bit string `b_1 … b_n` the *bit shadow* of position `i` is
//!
//! 1. `0` when `b_i = 0`,
//! 2. `1 +` the length of the zero run immediately before `b_i` when
//!    `b_i = 1`,
//! 3. additionally, for the leftmost 1-bit, `+` the length of the zero run
//!    after the rightmost 1-bit.
//!
//! Every bit is accounted for exactly once, so the shadows sum to `n`.
//!
//! The *long shadow* doubles a shadow when the bit diametrically opposite
//! (`i ± n/2`) is set, giving sums in `[n, 2n]`. Both maps are injective
//! on nonzero strings; [`recover_bits`] inverts the long-shadow map.

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use crate::error::{Error, Result};

/// An ordered string of bits `b_1 … b_n`, stored most significant first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn new(bits: Vec<bool>) -> Self {
        BitString { bits }
    }

    pub fn zeros(n: usize) -> Self {
        BitString {
            bits: vec![false; n],
        }
    }

    /// The n-bit string whose integer value (b_1 most significant) is `value`.
    pub fn from_u64(value: u64, n: usize) -> Self {
        assert!(n <= 64);
        let bits = (0..n).map(|i| (value >> (n - 1 - i)) & 1 == 1).collect();
        BitString { bits }
    }

    /// Parses a string of ASCII `'0'`/`'1'` characters.
    pub fn from_bit_str(text: &str) -> Result<Self> {
        text.chars()
            .enumerate()
            .map(|(i, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::parse(
                    1,
                    format!("bad bit character {c:?} at column {}", i + 1),
                )),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitString::new)
    }

    /// Reads the first `nbits` bits of `bytes`, big-endian within each byte.
    pub fn from_bytes(bytes: &[u8], nbits: usize) -> Result<Self> {
        if nbits > bytes.len() * 8 {
            return Err(Error::LengthMismatch {
                expected: nbits,
                got: bytes.len() * 8,
            });
        }
        let bits = (0..nbits)
            .map(|i| bytes[i / 8] >> (7 - i % 8) & 1 == 1)
            .collect();
        Ok(BitString { bits })
    }

    /// Parses hex where the first character carries `b_1 … b_4`.
    ///
    /// The text must be exactly `⌈nbits/4⌉` digits long, and any bits past
    /// `nbits` in the final digit must be zero.
    pub fn from_hex(text: &str, nbits: usize) -> Result<Self> {
        let expected = nbits.div_ceil(4);
        if text.len() != expected {
            return Err(Error::parse(
                1,
                format!(
                    "expected {expected} hex digits for {nbits} bits, got {}",
                    text.len()
                ),
            ));
        }
        let mut bits = Vec::with_capacity(expected * 4);
        for (i, c) in text.chars().enumerate() {
            let v = c.to_digit(16).ok_or_else(|| {
                Error::parse(1, format!("bad hex digit {c:?} at column {}", i + 1))
            })?;
            bits.extend((0..4).rev().map(|k| (v >> k) & 1 == 1));
        }
        if bits[nbits..].iter().any(|&b| b) {
            return Err(Error::parse(1, "nonzero bits beyond the stated bit length"));
        }
        bits.truncate(nbits);
        Ok(BitString { bits })
    }

    pub fn to_hex(&self) -> String {
        self.bits
            .chunks(4)
            .map(|chunk| {
                let v = chunk
                    .iter()
                    .enumerate()
                    .fold(0u32, |acc, (k, &b)| acc | (u32::from(b) << (3 - k)));
                char::from_digit(v, 16).unwrap()
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Checks the preconditions shared by the shadow encoders.
    fn check_encodable(&self) -> Result<()> {
        if self.len() % 2 == 1 {
            return Err(Error::OddLength(self.len()));
        }
        if self.is_zero() {
            return Err(Error::ZeroMessage);
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BitString::from_bit_str(s)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Per-position bit shadows. Entries are bounded by n ≤ 4096.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ShadowString(Vec<u32>);

/// Per-position bit long-shadows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LongShadowString(Vec<u32>);

macro_rules! shadow_common {
    ($t:ty) => {
        impl $t {
            pub fn into_inner(self) -> Vec<u32> {
                self.0
            }

            pub fn sum(&self) -> u64 {
                self.0.iter().map(|&v| u64::from(v)).sum()
            }
        }

        impl Deref for $t {
            type Target = [u32];

            fn deref(&self) -> &[u32] {
                &self.0
            }
        }

        impl AsRef<[u32]> for $t {
            fn as_ref(&self) -> &[u32] {
                &self.0
            }
        }

        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                // Single digits print run together, larger values comma-separated.
                if self.0.iter().all(|&v| v < 10) {
                    self.0.iter().try_for_each(|v| write!(f, "{v}"))
                } else {
                    let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
                    f.write_str(&parts.join(","))
                }
            }
        }
    };
}

shadow_common!(ShadowString);
shadow_common!(LongShadowString);

impl LongShadowString {
    /// Wraps raw values without checking that they are the image of a bit
    /// string. Use [`recover_bits`] to check.
    pub fn from_raw(values: Vec<u32>) -> Self {
        LongShadowString(values)
    }
}

/// Zero-based index of the position opposite `i` in a string of length `n`.
///
/// Positions in the first half pair with `i + n/2`, positions in the second
/// half with `i - n/2`.
pub fn partner_index(i: usize, n: usize) -> usize {
    let half = n / 2;
    if i < half {
        i + half
    } else {
        i - half
    }
}

/// Single-pass bit shadow computation.
///
/// Walks the string once keeping the current zero run `k`; the leftmost
/// 1-bit is the one found at `i = k + 1` (nothing but zeros before it).
/// After the walk, the trailing zero run is credited to that position.
pub fn bit_shadow(msg: &BitString) -> Result<ShadowString> {
    msg.check_encodable()?;
    let mut shadows = vec![0u32; msg.len()];
    let mut run = 0u32;
    let mut leftmost = 0usize;
    for (i, &bit) in msg.bits().iter().enumerate() {
        if !bit {
            run += 1;
        } else {
            if i as u32 == run {
                leftmost = i;
            }
            shadows[i] = run + 1;
            run = 0;
        }
    }
    shadows[leftmost] += run;
    Ok(ShadowString(shadows))
}

/// Bit shadows computed position by position from the three rules.
///
/// Kept alongside [`bit_shadow`] as its reference form.
pub fn bit_shadow_by_rules(msg: &BitString) -> Result<ShadowString> {
    msg.check_encodable()?;
    let bits = msg.bits();
    let leftmost = bits.iter().position(|&b| b).unwrap();
    let rightmost = bits.iter().rposition(|&b| b).unwrap();
    let trailing = (bits.len() - 1 - rightmost) as u32;
    let shadows = (0..bits.len())
        .map(|i| {
            if !bits[i] {
                return 0;
            }
            let before = bits[..i].iter().rev().take_while(|&&b| !b).count() as u32;
            let extra = if i == leftmost { trailing } else { 0 };
            1 + before + extra
        })
        .collect();
    Ok(ShadowString(shadows))
}

/// Bit long-shadows: each shadow doubled when its partner bit is set.
pub fn bit_long_shadow(msg: &BitString) -> Result<LongShadowString> {
    let shadows = bit_shadow(msg)?;
    Ok(long_from_shadow(msg, shadows))
}

fn long_from_shadow(msg: &BitString, shadows: ShadowString) -> LongShadowString {
    let n = msg.len();
    let bits = msg.bits();
    let values = shadows
        .0
        .into_iter()
        .enumerate()
        .map(|(i, s)| s << u32::from(bits[partner_index(i, n)]))
        .collect();
    LongShadowString(values)
}

/// Inverts [`bit_long_shadow`]: a position is set iff its long shadow is
/// nonzero. Fails with [`Error::Inconsistent`] when re-encoding the result
/// does not give `ls` back.
pub fn recover_bits(ls: &LongShadowString) -> Result<BitString> {
    let msg = BitString::new(ls.iter().map(|&v| v != 0).collect());
    match bit_long_shadow(&msg) {
        Ok(again) if again == *ls => Ok(msg),
        Ok(_) | Err(Error::ZeroMessage) => Err(Error::Inconsistent),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn digits(s: &str) -> Vec<u32> {
        s.chars().map(|c| c.to_digit(10).unwrap()).collect()
    }

    #[test]
    fn shadow_examples() {
        assert_eq!(
            *bit_shadow(&bs("01010110")).unwrap(),
            digits("03020210")[..]
        );
        assert_eq!(
            *bit_shadow(&bs("11111111")).unwrap(),
            digits("11111111")[..]
        );
        assert_eq!(
            *bit_shadow(&bs("10000000")).unwrap(),
            digits("80000000")[..]
        );
    }

    #[test]
    fn long_shadow_examples() {
        assert_eq!(
            *bit_long_shadow(&bs("01010110")).unwrap(),
            digits("06020410")[..]
        );
        assert_eq!(
            *bit_long_shadow(&bs("10000000")).unwrap(),
            digits("80000000")[..]
        );
        assert_eq!(
            *bit_long_shadow(&bs("11111111")).unwrap(),
            digits("22222222")[..]
        );
    }

    #[test]
    fn recover_examples() {
        let ls = |s: &str| LongShadowString::from_raw(digits(s));
        assert_eq!(recover_bits(&ls("06020410")).unwrap(), bs("01010110"));
        assert_eq!(recover_bits(&ls("22222222")).unwrap(), bs("11111111"));
        assert_eq!(recover_bits(&ls("80000000")).unwrap(), bs("10000000"));
        // right mask, wrong values
        assert_eq!(recover_bits(&ls("06020400")), Err(Error::Inconsistent));
        assert_eq!(recover_bits(&ls("00000000")), Err(Error::Inconsistent));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(bit_shadow(&bs("00000000")), Err(Error::ZeroMessage));
        assert_eq!(bit_shadow(&bs("0100000")), Err(Error::OddLength(7)));
        assert_eq!(
            bit_long_shadow(&BitString::zeros(0)),
            Err(Error::ZeroMessage)
        );
        assert!("0120".parse::<BitString>().is_err());
    }

    #[test]
    fn hex_parsing() {
        let b = BitString::from_hex("56", 8).unwrap();
        assert_eq!(b, bs("01010110"));
        assert_eq!(b.to_hex(), "56");
        assert_eq!(BitString::from_hex("5c", 6).unwrap(), bs("010111"));
        assert!(BitString::from_hex("5d", 6).is_err());
        assert!(BitString::from_hex("5", 8).is_err());
        assert!(BitString::from_hex("zz", 8).is_err());
        assert_eq!(
            BitString::from_bytes(&[0x56, 0xff], 10).unwrap(),
            bs("0101011011")
        );
    }

    #[test]
    fn partner_pairs() {
        let n = 12;
        let partners: Vec<usize> = (0..n).map(|i| partner_index(i, n)).collect();
        assert_eq!(partners, vec![6, 7, 8, 9, 10, 11, 0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn exhaustive_injectivity_n8_n10() {
        for n in [8usize, 10] {
            let mut shadows = HashSet::new();
            let mut longs = HashSet::new();
            for v in 1..(1u64 << n) {
                let msg = BitString::from_u64(v, n);
                let s = bit_shadow(&msg).unwrap();
                assert_eq!(s, bit_shadow_by_rules(&msg).unwrap());
                assert_eq!(s.sum(), n as u64);
                let ls = bit_long_shadow(&msg).unwrap();
                assert_eq!(recover_bits(&ls).unwrap(), msg);
                shadows.insert(s);
                longs.insert(ls);
            }
            assert_eq!(shadows.len(), (1 << n) - 1);
            assert_eq!(longs.len(), (1 << n) - 1);
        }
    }

    #[test]
    fn streaming_matches_rules_on_random_strings() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [8usize, 16, 64, 256] {
            for _ in 0..10_000 {
                let msg = loop {
                    let m = BitString::new((0..n).map(|_| rng.gen()).collect());
                    if !m.is_zero() {
                        break m;
                    }
                };
                assert_eq!(
                    bit_shadow(&msg).unwrap(),
                    bit_shadow_by_rules(&msg).unwrap()
                );
            }
        }
    }

    fn nonzero_bits() -> impl Strategy<Value = BitString> {
        (1usize..=64)
            .prop_flat_map(|half| proptest::collection::vec(any::<bool>(), half * 2))
            .prop_filter("nonzero", |v| v.iter().any(|&b| b))
            .prop_map(BitString::new)
    }

    proptest! {
        #[test]
        fn shadow_sums(msg in nonzero_bits()) {
            let n = msg.len() as u64;
            let s = bit_shadow(&msg).unwrap();
            let ls = bit_long_shadow(&msg).unwrap();
            prop_assert_eq!(s.sum(), n);
            prop_assert!(n <= ls.sum() && ls.sum() <= 2 * n);
            for (i, (&a, &b)) in s.iter().zip(ls.iter()).enumerate() {
                prop_assert_eq!(a == 0, !msg.bits()[i]);
                prop_assert!(b == a || b == 2 * a);
            }
            prop_assert_eq!(recover_bits(&ls).unwrap(), msg);
        }
    }
}
