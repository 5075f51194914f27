//! Compaction of a classical hash output.
//!
//! The n-bit output of an existing hash is fed through the compression step
//! under parameters with `⌈lg M⌉ = n/2`, giving an (n/2)-bit digest. The
//! underlying hash is not computed here; callers supply its output bits.

use crate::bitcodec::BitString;
use crate::compress::{digest, Digest};
use crate::error::{Error, Result};
use crate::params::PublicParams;

/// Public parameters sized for one underlying hash width.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReformProfile {
    params: PublicParams,
}

impl ReformProfile {
    /// Requires `n` even and `⌈lg M⌉ = n/2`.
    pub fn new(params: PublicParams) -> Result<Self> {
        let n = params.n();
        if n == 0 || n % 2 == 1 {
            return Err(Error::OddLength(n));
        }
        if params.m() as usize != n / 2 {
            return Err(Error::InvalidParameter(format!(
                "profile for {n}-bit input needs a {}-bit modulus, got {}",
                n / 2,
                params.m()
            )));
        }
        Ok(ReformProfile { params })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::new(PublicParams::parse(text)?)
    }

    pub fn underlying_bits(&self) -> usize {
        self.params.n()
    }

    pub fn output_bits(&self) -> u32 {
        self.params.m()
    }

    pub fn params(&self) -> &PublicParams {
        &self.params
    }

    /// Compresses an underlying digest given as hex (`n/4` digits).
    pub fn digest_hex(&self, hex: &str) -> Result<Digest> {
        self.digest(&BitString::from_hex(hex, self.underlying_bits())?)
    }

    pub fn digest(&self, underlying: &BitString) -> Result<Digest> {
        reform_digest(self, underlying)
    }
}

/// The compressed form of an underlying digest.
///
/// An all-zero underlying digest fails with [`Error::ZeroMessage`].
pub fn reform_digest(profile: &ReformProfile, underlying: &BitString) -> Result<Digest> {
    if underlying.len() != profile.underlying_bits() {
        return Err(Error::LengthMismatch {
            expected: profile.underlying_bits(),
            got: underlying.len(),
        });
    }
    digest(&profile.params, underlying)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mode::Mode;
    use crate::params::{initialize, InitConfig};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn profile(bits: usize, seed: u64) -> ReformProfile {
        let cfg = InitConfig::new(bits as u32 / 2, bits, 1 << 10, bits as u64).mode(Mode::Test);
        let (public, _) = initialize(&cfg, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        ReformProfile::new(public).unwrap()
    }

    #[test]
    fn md5_sized_profile() {
        let p = profile(128, 1);
        assert_eq!(p.output_bits(), 64);
        let hex = "9e107d9d372bb6826bd81d3542a419d6";
        let d = p.digest_hex(hex).unwrap();
        assert_eq!(d.to_hex().len(), 16);
        let bits = BitString::from_hex(hex, 128).unwrap();
        assert_eq!(d, digest(p.params(), &bits).unwrap());
        assert_eq!(p.digest_hex(&"0".repeat(32)), Err(Error::ZeroMessage));
        assert!(p.digest_hex("9e10").is_err());
    }

    #[test]
    fn sha1_sized_profile_delegates() {
        let p = profile(160, 2);
        assert_eq!(p.output_bits(), 80);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let x = BitString::new((0..160).map(|_| rng.gen()).collect());
            if x.is_zero() {
                continue;
            }
            let d = reform_digest(&p, &x).unwrap();
            assert_eq!(d, digest(p.params(), &x).unwrap());
            assert_eq!(d.to_hex().len(), 20);
        }
    }

    #[test]
    fn profile_width_checked() {
        let cfg = InitConfig::new(12, 8, 1201, 8).mode(Mode::Test);
        let (public, _) = initialize(&cfg, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert!(ReformProfile::new(public).is_err());
    }
}
