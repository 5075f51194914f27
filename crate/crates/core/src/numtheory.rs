//! Modular arithmetic over a prime modulus, with multiplication accounting.
//!
//! [`ModContext`] wraps a prime `M` and counts every modular multiplication
//! routed through it, squarings inside [`ModContext::mod_pow`] included.
//! The count is atomic so concurrent callers never lose increments.
//!
//! When the context knows `q = (M - 1)/2` is prime (a safe prime), the
//! multiplicative order of any residue is one of `1, 2, q, 2q` and can be
//! decided with two exponentiations.

use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

pub const DEFAULT_MR_ROUNDS: u32 = 64;

/// Fixed Miller-Rabin bases. Together they decide primality below 3.18·10^23.
const FIXED_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// `⌈lg x⌉` for `x ≥ 1`.
pub fn ceil_lg(x: &BigUint) -> u64 {
    let bits = x.bits();
    if bits == 0 {
        return 0;
    }
    if x.count_ones() == 1 {
        bits - 1
    } else {
        bits
    }
}

pub fn ceil_lg_u64(x: u64) -> u32 {
    match x {
        0 | 1 => 0,
        _ => 64 - (x - 1).leading_zeros(),
    }
}

/// All primes `≤ limit`, by the sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i * i;
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality for 64-bit integers.
pub fn is_prime_u64(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    for &p in &FIXED_BASES {
        if x.is_multiple_of(p) {
            return x == p;
        }
    }
    let s = (x - 1).trailing_zeros();
    let d = (x - 1) >> s;
    'witness: for &a in &FIXED_BASES {
        let mut y = pow_mod_u64(a, d, x);
        if y == 1 || y == x - 1 {
            continue;
        }
        for _ in 1..s {
            y = mul_mod_u64(y, y, x);
            if y == x - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn small_primes() -> &'static [u64] {
    static PRIMES: std::sync::OnceLock<Vec<u64>> = std::sync::OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(2000))
}

fn miller_rabin_round(x: &BigUint, d: &BigUint, s: u64, a: &BigUint) -> bool {
    let one = BigUint::one();
    let minus_one = x - 1u32;
    let mut y = a.modpow(d, x);
    if y == one || y == minus_one {
        return true;
    }
    for _ in 1..s {
        y = &y * &y % x;
        if y == minus_one {
            return true;
        }
    }
    false
}

/// Miller-Rabin with `rounds` witnesses after trial division by the primes
/// below 2000.
///
/// The first witnesses are the fixed bases 2, 3, …, 37; any further rounds
/// draw uniform bases from the thread RNG. Values below 2^64 are decided
/// exactly.
pub fn is_probable_prime(x: &BigUint, rounds: u32) -> bool {
    if let Some(v) = x.to_u64() {
        return is_prime_u64(v);
    }
    for &p in small_primes() {
        if (x % p).is_zero() {
            return false;
        }
    }
    let minus_one = x - 1u32;
    let s = minus_one.trailing_zeros().unwrap_or(0);
    let d = &minus_one >> s;
    let mut rng = rand::thread_rng();
    let two = BigUint::from(2u32);
    (0..rounds as usize).all(|r| {
        let a = match FIXED_BASES.get(r) {
            Some(&b) => BigUint::from(b),
            None => rng.gen_biguint_range(&two, &minus_one),
        };
        miller_rabin_round(x, &d, s, &a)
    })
}

/// True when no prime `≤ limit` divides `x`.
pub fn least_factor_exceeds(x: &BigUint, limit: u64) -> bool {
    if x.is_one() || x.is_zero() {
        return false;
    }
    if limit >= 2 && x.is_even() {
        return false;
    }
    let mut d = 3u64;
    while d <= limit {
        if (x % d).is_zero() {
            return false;
        }
        d += 2;
    }
    true
}

/// A prime modulus together with a running multiplication count.
#[derive(Debug)]
pub struct ModContext {
    modulus: BigUint,
    cofactor: Option<BigUint>,
    mulcount: AtomicU64,
}

impl Clone for ModContext {
    fn clone(&self) -> Self {
        ModContext {
            modulus: self.modulus.clone(),
            cofactor: self.cofactor.clone(),
            mulcount: AtomicU64::new(self.mulcount()),
        }
    }
}

impl ModContext {
    /// Context over an odd modulus `≥ 3`. Primality is the caller's concern;
    /// see [`ModContext::checked`].
    pub fn new(modulus: BigUint) -> Result<Self> {
        if modulus < BigUint::from(3u32) || modulus.is_even() {
            return Err(Error::InvalidParameter(format!(
                "modulus {modulus} must be odd and ≥ 3"
            )));
        }
        Ok(ModContext {
            modulus,
            cofactor: None,
            mulcount: AtomicU64::new(0),
        })
    }

    /// Context over `M`, failing unless `M` is a probable prime.
    pub fn checked(modulus: BigUint, rounds: u32) -> Result<Self> {
        if !is_probable_prime(&modulus, rounds) {
            return Err(Error::InvalidParameter(format!(
                "modulus {modulus} is not prime"
            )));
        }
        Self::new(modulus)
    }

    /// Context over the safe prime `M = 2q + 1`.
    pub fn from_safe_prime(q: BigUint) -> Result<Self> {
        let modulus = (&q << 1u32) + 1u32;
        let mut ctx = Self::new(modulus)?;
        ctx.cofactor = Some(q);
        Ok(ctx)
    }

    /// Records `q`, failing unless `M = 2q + 1` with `q` a probable prime.
    pub fn with_cofactor(mut self, q: BigUint, rounds: u32) -> Result<Self> {
        if (&q << 1u32) + 1u32 != self.modulus {
            return Err(Error::BadFactorization);
        }
        if !is_probable_prime(&q, rounds) {
            return Err(Error::BadFactorization);
        }
        self.cofactor = Some(q);
        Ok(self)
    }

    /// Attaches `q = (M-1)/2` when it is a probable prime.
    pub fn detect_safe_prime(self, rounds: u32) -> Self {
        let q = (&self.modulus - 1u32) >> 1u32;
        let copy = self.clone();
        self.with_cofactor(q, rounds).unwrap_or(copy)
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    /// `m = ⌈lg M⌉`.
    pub fn bits(&self) -> u64 {
        ceil_lg(&self.modulus)
    }

    pub fn cofactor(&self) -> Option<&BigUint> {
        self.cofactor.as_ref()
    }

    /// `M - 1`, the order of the multiplicative group.
    pub fn group_order(&self) -> BigUint {
        &self.modulus - 1u32
    }

    pub fn mulcount(&self) -> u64 {
        self.mulcount.load(Ordering::Relaxed)
    }

    pub(crate) fn add_mulcount(&self, k: u64) {
        self.mulcount.fetch_add(k, Ordering::Relaxed);
    }

    pub fn reduce(&self, x: &BigUint) -> BigUint {
        x % &self.modulus
    }

    pub fn mod_mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        self.add_mulcount(1);
        a * b % &self.modulus
    }

    /// Left-to-right square-and-multiply. Costs `(bits(e) - 1)` squarings
    /// plus `(popcount(e) - 1)` multiplications.
    pub fn mod_pow(&self, base: &BigUint, exponent: &BigUint) -> BigUint {
        if exponent.is_zero() {
            return BigUint::one() % &self.modulus;
        }
        let base = self.reduce(base);
        let mut acc = base.clone();
        let mut muls = 0u64;
        for i in (0..exponent.bits() - 1).rev() {
            acc = &acc * &acc % &self.modulus;
            muls += 1;
            if exponent.bit(i) {
                acc = &acc * &base % &self.modulus;
                muls += 1;
            }
        }
        self.add_mulcount(muls);
        acc
    }

    /// `base^exponent` for a signed exponent; negative exponents go through
    /// the inverse of `base`.
    pub fn mod_pow_signed(&self, base: &BigUint, exponent: &BigInt) -> Result<BigUint> {
        match exponent.sign() {
            Sign::Minus => {
                let inv = self.mod_inverse(base)?;
                Ok(self.mod_pow(&inv, exponent.magnitude()))
            }
            _ => Ok(self.mod_pow(base, exponent.magnitude())),
        }
    }

    pub fn mod_inverse(&self, x: &BigUint) -> Result<BigUint> {
        let x = self.reduce(x);
        if x.is_zero() {
            return Err(Error::NotInvertible);
        }
        x.modinv(&self.modulus).ok_or(Error::NotInvertible)
    }

    /// Checks that `factors` are exactly the distinct primes of `M - 1`
    /// (powers allowed) and returns them.
    fn check_factorization<'a>(&self, factors: &'a [BigUint]) -> Result<&'a [BigUint]> {
        let mut rest = self.group_order();
        for p in factors {
            if *p <= BigUint::one() || !(&rest % p).is_zero() {
                return Err(Error::BadFactorization);
            }
            while (&rest % p).is_zero() {
                rest /= p;
            }
        }
        if !rest.is_one() {
            return Err(Error::BadFactorization);
        }
        Ok(factors)
    }

    /// Whether `g` generates the full group: `g^((M-1)/p) ≠ 1` for every
    /// prime `p | M - 1`.
    pub fn is_generator(&self, g: &BigUint, factors: &[BigUint]) -> Result<bool> {
        let factors = self.check_factorization(factors)?;
        let g = self.reduce(g);
        if g.is_zero() {
            return Ok(false);
        }
        let order = self.group_order();
        Ok(factors
            .iter()
            .all(|p| !self.mod_pow(&g, &(&order / p)).is_one()))
    }

    /// Random generator search given the prime factors of `M - 1`.
    pub fn find_generator<R: Rng + ?Sized>(
        &self,
        factors: &[BigUint],
        rng: &mut R,
    ) -> Result<BigUint> {
        self.check_factorization(factors)?;
        const TRIES: u64 = 10_000;
        let lo = BigUint::from(2u32);
        for _ in 0..TRIES {
            let g = if self.modulus > lo {
                rng.gen_biguint_range(&lo, &self.modulus)
            } else {
                BigUint::one()
            };
            if self.is_generator(&g, factors)? {
                return Ok(g);
            }
        }
        Err(Error::SearchExhausted { attempts: TRIES })
    }

    /// Multiplicative order of `w` in safe-prime mode.
    pub fn safe_order(&self, w: &BigUint) -> Result<BigUint> {
        let q = self.cofactor.as_ref().ok_or(Error::UnknownFactorization)?;
        let w = self.reduce(w);
        if w.is_zero() {
            return Err(Error::Domain("zero has no multiplicative order".into()));
        }
        Ok(if w.is_one() {
            BigUint::one()
        } else if w == self.group_order() {
            BigUint::from(2u32)
        } else if self.mod_pow(&w, q).is_one() {
            q.clone()
        } else {
            q << 1u32
        })
    }

    /// Whether the order of `w` is at least `bound`.
    pub fn order_at_least(&self, w: &BigUint, bound: &BigUint) -> Result<bool> {
        Ok(self.safe_order(w)? >= *bound)
    }
}

/// Draws a safe prime `p = 2q + 1` with `⌈lg p⌉ = bits`, trying at most
/// `budget` candidates for `q`.
pub fn random_safe_prime<R: Rng + ?Sized>(
    bits: u64,
    budget: u64,
    rounds: u32,
    rng: &mut R,
) -> Result<ModContext> {
    if bits < 3 {
        return Err(Error::InvalidParameter(format!(
            "no safe prime has {bits} bits"
        )));
    }
    // q ∈ [2^(bits-2), 2^(bits-1)) puts p in [2^(bits-1) + 1, 2^bits).
    let lo = BigUint::one() << (bits - 2);
    let hi = BigUint::one() << (bits - 1);
    for _ in 0..budget {
        let mut q = rng.gen_biguint_range(&lo, &hi);
        if bits > 3 {
            q |= BigUint::one();
        }
        if is_safe_prime_cofactor(&q, rounds) {
            return ModContext::from_safe_prime(q);
        }
    }
    Err(Error::SearchExhausted { attempts: budget })
}

fn is_safe_prime_cofactor(q: &BigUint, rounds: u32) -> bool {
    let p: BigUint = (q << 1u32) + 1u32;
    if let Some(pv) = p.to_u64() {
        return is_prime_u64(q.to_u64().unwrap()) && is_prime_u64(pv);
    }
    for &sp in small_primes() {
        let r = (q % sp).to_u64().unwrap();
        // sp | q, or sp | 2q + 1
        if r == 0 || (2 * r + 1).is_multiple_of(sp) {
            return false;
        }
    }
    let base = BigUint::from(2u32);
    let quick = |x: &BigUint| {
        let minus_one = x - 1u32;
        let s = minus_one.trailing_zeros().unwrap_or(0);
        miller_rabin_round(x, &(&minus_one >> s), s, &base)
    };
    quick(q) && quick(&p) && is_probable_prime(q, rounds) && is_probable_prime(&p, rounds)
}

/// The 2-adic valuation of a nonzero integer.
pub fn two_adic_valuation(x: &BigInt) -> Option<u64> {
    x.magnitude().trailing_zeros()
}

pub fn gcd(a: &BigUint, b: &BigUint) -> BigUint {
    a.gcd(b)
}
