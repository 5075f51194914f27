//! The compression step: `d = ∏ C_i^{b̿_i} mod M`.
//!
//! [`digest`] multiplies each `C_i` into an accumulator `b̿_i` times, so a
//! call costs exactly `Σ b̿_i - 1 ≤ 2n - 1` modular multiplications.
//! [`digest_oracle`] evaluates the same formula with one independent
//! modular exponentiation per term and exists only to cross-check.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::bitcodec::{bit_long_shadow, BitString};
use crate::error::{Error, Result};
use crate::numtheory::ModContext;
use crate::params::PublicParams;

/// An m-bit digest value in `[1, M - 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Digest {
    value: BigUint,
    m: u32,
}

impl Digest {
    pub fn new(value: BigUint, m: u32) -> Result<Self> {
        if value.is_zero() || value.bits() > u64::from(m) {
            return Err(Error::Domain(format!(
                "digest value does not fit [1, 2^{m})"
            )));
        }
        Ok(Digest { value, m })
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Lowercase hex, zero-padded to `⌈m/4⌉` digits.
    pub fn to_hex(&self) -> String {
        let width = self.m.div_ceil(4) as usize;
        format!("{:0width$x}", self.value)
    }

    /// Parses exactly `⌈m/4⌉` hex digits.
    pub fn parse(text: &str, m: u32) -> Result<Self> {
        let width = m.div_ceil(4) as usize;
        if text.len() != width || !text.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(Error::parse(
                1,
                format!("expected {width} hex digits, found `{text}`"),
            ));
        }
        let value = BigUint::parse_bytes(text.as_bytes(), 16)
            .ok_or_else(|| Error::parse(1, format!("bad hex `{text}`")))?;
        Digest::new(value, m).map_err(|e| Error::parse(1, e.to_string()))
    }

    /// Keeps the low `bits` bits of the value. Only for collision
    /// experiments; the hash has no truncated mode.
    pub fn truncated(&self, bits: u32) -> BigUint {
        &self.value & ((BigUint::one() << bits) - 1u32)
    }
}

impl fmt::Display for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

fn check_message(params: &PublicParams, msg: &BitString) -> Result<()> {
    if msg.len() != params.n() {
        return Err(Error::LengthMismatch {
            expected: params.n(),
            got: msg.len(),
        });
    }
    if msg.is_zero() {
        return Err(Error::ZeroMessage);
    }
    Ok(())
}

/// Hashes `msg`, counting multiplications on `ctx`.
///
/// `ctx` must be a context over the same modulus as `params`.
pub fn digest_in(ctx: &ModContext, params: &PublicParams, msg: &BitString) -> Result<Digest> {
    assert_eq!(
        ctx.modulus(),
        params.modulus(),
        "context and parameters disagree on M"
    );
    check_message(params, msg)?;
    let ls = bit_long_shadow(msg)?;
    let mut acc: Option<BigUint> = None;
    for (c, &e) in params.c().iter().zip(ls.iter()) {
        for _ in 0..e {
            acc = Some(match acc {
                None => c.clone(),
                Some(a) => ctx.mod_mul(&a, c),
            });
        }
    }
    let value = acc.expect("long shadows of a nonzero message sum to at least n");
    Digest::new(value, params.m())
}

/// Hashes `msg` under `params`.
pub fn digest(params: &PublicParams, msg: &BitString) -> Result<Digest> {
    digest_in(&params.context(), params, msg)
}

/// Same contract as [`digest`], evaluated as a product of per-term modular
/// powers.
pub fn digest_oracle(params: &PublicParams, msg: &BitString) -> Result<Digest> {
    check_message(params, msg)?;
    let ls = bit_long_shadow(msg)?;
    let modulus = params.modulus();
    let value = params
        .c()
        .iter()
        .zip(ls.iter())
        .map(|(c, &e)| c.modpow(&BigUint::from(e), modulus))
        .fold(BigUint::one(), |acc, t| acc * t % modulus);
    Digest::new(value, params.m())
}

/// Extends a short message to `n` bits by appending a single 1 and then
/// zeros.
///
/// This padding is a command-line convenience and not part of the hash,
/// which is defined only on exactly-n-bit inputs.
pub fn pad_to_n(msg: &BitString, n: usize) -> Result<BitString> {
    if msg.len() >= n {
        return Err(Error::LengthMismatch {
            expected: n - 1,
            got: msg.len(),
        });
    }
    let mut bits = msg.bits().to_vec();
    bits.push(true);
    bits.resize(n, false);
    Ok(BitString::new(bits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn toy() -> PublicParams {
        let c = [2u32, 3, 5, 7].iter().map(|&v| BigUint::from(v)).collect();
        PublicParams::new(BigUint::from(101u32), c).unwrap()
    }

    #[test]
    fn toy_digest() {
        let p = toy();
        let msg: BitString = "1111".parse().unwrap();
        let ctx = p.context();
        let d = digest_in(&ctx, &p, &msg).unwrap();
        assert_eq!(d.value(), &BigUint::from(64u32));
        assert_eq!(digest_oracle(&p, &msg).unwrap(), d);
        // Σ b̿ = 8, so 7 multiplications
        assert_eq!(ctx.mulcount(), 7);
    }

    #[test]
    fn single_bit_messages() {
        let p = toy();
        for x in 0..4 {
            let mut bits = vec![false; 4];
            bits[x] = true;
            let d = digest(&p, &BitString::new(bits)).unwrap();
            assert_eq!(
                *d.value(),
                p.c()[x].modpow(&BigUint::from(4u32), p.modulus())
            );
        }
    }

    #[test]
    fn rejects_bad_messages() {
        let p = toy();
        assert_eq!(
            digest(&p, &"0000".parse().unwrap()),
            Err(Error::ZeroMessage)
        );
        assert_eq!(
            digest(&p, &"101".parse().unwrap()),
            Err(Error::LengthMismatch {
                expected: 4,
                got: 3
            })
        );
        assert_eq!(
            digest_oracle(&p, &"0000".parse().unwrap()),
            Err(Error::ZeroMessage)
        );
    }

    #[test]
    fn rendering() {
        let d = Digest::new(BigUint::from(64u32), 12).unwrap();
        assert_eq!(d.to_hex(), "040");
        let one = Digest::new(BigUint::one(), 80).unwrap();
        assert_eq!(one.to_hex(), "00000000000000000001");
        assert_eq!(Digest::parse("040", 12).unwrap(), d);
        assert!(Digest::parse("zz", 8).is_err());
        assert!(Digest::parse("40", 12).is_err());
        assert!(Digest::parse("000", 12).is_err());
        assert!(Digest::parse("f00", 11).is_err());
        assert_eq!(d.truncated(4), BigUint::zero());
    }

    #[test]
    fn padding() {
        let short: BitString = "01".parse().unwrap();
        assert_eq!(pad_to_n(&short, 6).unwrap(), "011000".parse().unwrap());
        assert!(pad_to_n(&"0110".parse().unwrap(), 4).is_err());
    }

    proptest! {
        #[test]
        fn hex_round_trip(v in 1u64.., m in 64u32..100) {
            let d = Digest::new(BigUint::from(v), m).unwrap();
            prop_assert_eq!(Digest::parse(&d.to_hex(), m).unwrap(), d);
        }
    }
}
