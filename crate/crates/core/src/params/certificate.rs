//! White-box collision check from the private side.
//!
//! With `k = Σ b̿_i ℓ(i)` and `k' = Σ b̿'_i ℓ(i)`, two messages collide iff
//!
//! ```text
//! W^{k - k'} ≡ ∏ A_i^{b̿'_i - b̿_i}   (mod M)
//! ```
//!
//! because `δ` is invertible modulo `M - 1`. The certificate evaluates both
//! sides without hashing either message.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{lever_span, lever_sum, PrivateParams, PublicParams};
use crate::bitcodec::{bit_long_shadow, BitString};
use crate::error::{Error, Result};
use crate::numtheory::{two_adic_valuation, ModContext};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollisionCertificate {
    /// `Σ b̿_i ℓ(i)` for the first message.
    pub k: BigInt,
    /// The same sum for the second message.
    pub kprime: BigInt,
    /// `W^{k - k'} mod M`.
    pub lhs: BigUint,
    /// `∏ A_i^{b̿'_i - b̿_i} mod M`.
    pub rhs: BigUint,
    pub holds: bool,
    /// 2-adic valuation κ of `k - k'`; `None` when `k = k'`. Recorded only.
    pub kappa: Option<u64>,
    /// `rhs` raised to the inverse of the odd part of `k - k'` modulo
    /// `M - 1`. Equals `W^{2^κ}` exactly when `holds`.
    pub psi: Option<BigUint>,
    /// `4n(2n̄ + 3)`, which bounds `|k - k'|`.
    pub span: u128,
}

/// Builds the collision certificate for `(msg1, msg2)`.
pub fn certify_collision(
    private: &PrivateParams,
    public: &PublicParams,
    msg1: &BitString,
    msg2: &BitString,
) -> Result<CollisionCertificate> {
    if private.modulus != *public.modulus() || private.n() != public.n() {
        return Err(Error::InconsistentParams(
            "modulus or length differs".into(),
        ));
    }
    if private.derive_public()? != *public {
        return Err(Error::InconsistentParams(
            "public values are not derived from these".into(),
        ));
    }
    for msg in [msg1, msg2] {
        if msg.len() != public.n() {
            return Err(Error::LengthMismatch {
                expected: public.n(),
                got: msg.len(),
            });
        }
    }
    let ls1 = bit_long_shadow(msg1)?;
    let ls2 = bit_long_shadow(msg2)?;
    let ctx = ModContext::new(private.modulus.clone())?;

    let k = lever_sum(&private.ell, &ls1);
    let kprime = lever_sum(&private.ell, &ls2);
    let diff = &k - &kprime;
    let lhs = ctx.mod_pow_signed(&private.w, &diff)?;

    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for ((&a, &e1), &e2) in private.a.elements().iter().zip(ls1.iter()).zip(ls2.iter()) {
        let a = BigUint::from(a);
        if e2 > e1 {
            num = ctx.mod_mul(&num, &ctx.mod_pow(&a, &BigUint::from(e2 - e1)));
        } else if e1 > e2 {
            den = ctx.mod_mul(&den, &ctx.mod_pow(&a, &BigUint::from(e1 - e2)));
        }
    }
    let rhs = ctx.mod_mul(&num, &ctx.mod_inverse(&den)?);

    let kappa = if diff.is_zero() {
        None
    } else {
        two_adic_valuation(&diff)
    };
    let psi = kappa.and_then(|kappa| {
        let order = BigInt::from(ctx.group_order());
        let odd = (&diff >> kappa).mod_floor(&order);
        let inv = odd.to_biguint()?.modinv(&ctx.group_order())?;
        Some(ctx.mod_pow(&rhs, &inv))
    });

    Ok(CollisionCertificate {
        holds: lhs == rhs,
        k,
        kprime,
        lhs,
        rhs,
        kappa,
        psi,
        span: lever_span(public.n(), private.nbar),
    })
}

impl CollisionCertificate {
    /// `|k - k'|`.
    pub fn lever_gap(&self) -> BigInt {
        (&self.k - &self.kprime).abs()
    }
}
