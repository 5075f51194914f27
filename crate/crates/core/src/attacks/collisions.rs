//! Exhaustive collision enumeration for toy parameter sets.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::One;

use crate::bitcodec::{bit_long_shadow, BitString};
use crate::compress::{digest_in, Digest};
use crate::error::{Error, Result};
use crate::params::PublicParams;

pub const MAX_BRUTE_N: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollisionPair {
    pub first: BitString,
    pub second: BitString,
    pub digest: Digest,
    /// `ȳ_i = b̿_i - b̿'_i`, each in `[-n, n]`.
    pub y: Vec<i64>,
    /// Whether `∏ C_i^{ȳ_i} ≡ 1 (mod M)`.
    pub identity_holds: bool,
}

/// Checks `∏ C_i^{y_i} ≡ 1 (mod M)`, inverting the negative part.
pub fn product_identity_holds(params: &PublicParams, y: &[i64]) -> Result<bool> {
    if y.len() != params.n() {
        return Err(Error::LengthMismatch {
            expected: params.n(),
            got: y.len(),
        });
    }
    let ctx = params.context();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for (c, &e) in params.c().iter().zip(y) {
        let p = ctx.mod_pow(c, &BigUint::from(e.unsigned_abs()));
        if e > 0 {
            num = ctx.mod_mul(&num, &p);
        } else if e < 0 {
            den = ctx.mod_mul(&den, &p);
        }
    }
    Ok(ctx.mod_mul(&num, &ctx.mod_inverse(&den)?).is_one())
}

/// Hashes all `2^n - 1` nonzero messages and returns every colliding pair,
/// ordered by the integer values of `(first, second)`.
pub fn brute_force_collision(params: &PublicParams) -> Result<Vec<CollisionPair>> {
    let n = params.n();
    if n > MAX_BRUTE_N {
        return Err(Error::InstanceTooLarge {
            n,
            cap: MAX_BRUTE_N,
        });
    }
    let ctx = params.context();
    let mut groups: HashMap<Digest, Vec<u64>> = HashMap::new();
    for v in 1..1u64 << n {
        let d = digest_in(&ctx, params, &BitString::from_u64(v, n))?;
        groups.entry(d).or_default().push(v);
    }
    let mut pairs = Vec::new();
    for (d, members) in &groups {
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                pairs.push((a, b, d.clone()));
            }
        }
    }
    pairs.sort_by_key(|&(a, b, _)| (a, b));
    pairs
        .into_iter()
        .map(|(a, b, digest)| {
            let (first, second) = (BitString::from_u64(a, n), BitString::from_u64(b, n));
            let (l1, l2) = (bit_long_shadow(&first)?, bit_long_shadow(&second)?);
            let y: Vec<i64> = l1
                .iter()
                .zip(l2.iter())
                .map(|(&x, &z)| i64::from(x) - i64::from(z))
                .collect();
            let identity_holds = product_identity_holds(params, &y)?;
            Ok(CollisionPair {
                first,
                second,
                digest,
                y,
                identity_holds,
            })
        })
        .collect()
}
