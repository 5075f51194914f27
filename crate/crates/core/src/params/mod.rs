//! One-shot parameter initialization.
//!
//! The private side is a coprime sequence `A`, a random injection `ℓ` into
//! the signed odd set `Ω = {±5, ±7, …, ±(2n̄+3)}`, a residue `W` of large
//! order and an exponent `δ` coprime to `M - 1`. The public side is
//!
//! ```text
//! C_i = (A_i · W^{ℓ(i)})^δ mod M,   i = 1 … n
//! ```
//!
//! over a safe prime `M` of exactly `m` bits.

mod certificate;
pub(crate) mod file;
mod validate;

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::One;
use rand::seq::{index, SliceRandom};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::coprime::CoprimeSequence;
use crate::error::{Error, Result};
use crate::mode::Mode;
use crate::numtheory::{ceil_lg, ceil_lg_u64, random_safe_prime, ModContext, DEFAULT_MR_ROUNDS};

pub use certificate::{certify_collision, CollisionCertificate};
pub use validate::{validate, Check, ValidateOptions, ValidationReport};

/// Default number of safe-prime candidates tried before giving up.
pub const DEFAULT_SEARCH_BUDGET: u64 = 1_000_000;

/// Redraws of (W, δ, ℓ) allowed when the public values collide.
const MAX_REDRAWS: u64 = 256;

/// The public initial value: a prime modulus and `n` residues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicParams {
    m: u32,
    modulus: BigUint,
    c: Vec<BigUint>,
}

impl PublicParams {
    /// Requires an odd modulus `≥ 3` and every `C_i < M`. Range and
    /// distinctness of the `C_i` are left to [`validate`].
    pub fn new(modulus: BigUint, c: Vec<BigUint>) -> Result<Self> {
        ModContext::new(modulus.clone())?;
        if let Some(i) = c.iter().position(|ci| *ci >= modulus) {
            return Err(Error::Domain(format!(
                "C_{} is not reduced modulo M",
                i + 1
            )));
        }
        let m = ceil_lg(&modulus) as u32;
        Ok(PublicParams { m, modulus, c })
    }

    /// `⌈lg M⌉`, the digest width in bits.
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Message length in bits.
    pub fn n(&self) -> usize {
        self.c.len()
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    pub fn c(&self) -> &[BigUint] {
        &self.c
    }

    /// A fresh multiplication-counting context over `M`.
    pub fn context(&self) -> ModContext {
        ModContext::new(self.modulus.clone()).expect("modulus checked at construction")
    }
}

/// The private parameter set. Only needed at initialization and for
/// collision certificates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrivateParams {
    pub modulus: BigUint,
    pub a: CoprimeSequence,
    /// Signed lever exponents `ℓ(1) … ℓ(n)`.
    pub ell: Vec<i64>,
    pub w: BigUint,
    pub delta: BigUint,
    /// `n̄ = |Ω|`.
    pub nbar: u64,
}

impl PrivateParams {
    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn m(&self) -> u32 {
        ceil_lg(&self.modulus) as u32
    }

    /// The bound `P` on the coprime sequence.
    pub fn bound(&self) -> u64 {
        self.a.bound()
    }

    /// Recomputes `C_i = (A_i · W^{ℓ(i)})^δ mod M` for every i.
    pub fn derive_public(&self) -> Result<PublicParams> {
        if self.ell.len() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                got: self.ell.len(),
            });
        }
        let ctx = ModContext::new(self.modulus.clone())?;
        let c = compute_public(&ctx, &self.a, &self.ell, &self.w, &self.delta)?;
        PublicParams::new(self.modulus.clone(), c)
    }
}

fn compute_public(
    ctx: &ModContext,
    a: &CoprimeSequence,
    ell: &[i64],
    w: &BigUint,
    delta: &BigUint,
) -> Result<Vec<BigUint>> {
    let w_inv = ctx.mod_inverse(w)?;
    a.elements()
        .iter()
        .zip(ell)
        .map(|(&ai, &li)| {
            let base = if li < 0 { &w_inv } else { w };
            let lever = ctx.mod_pow(base, &BigUint::from(li.unsigned_abs()));
            let inner = ctx.mod_mul(&ctx.reduce(&BigUint::from(ai)), &lever);
            Ok(ctx.mod_pow(&inner, delta))
        })
        .collect()
}

/// The signed exponent set `Ω = {±5, ±7, …, ±(2n̄+3)}`, one sign per
/// magnitude.
///
/// n̄ may be as large as 2^32, so the signs are not stored. Each sign is a
/// bit of a ChaCha20 keystream under a random key, read by random access.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Omega {
    nbar: u64,
    key: [u8; 32],
}

impl Omega {
    pub fn sample<R: Rng + ?Sized>(nbar: u64, rng: &mut R) -> Self {
        let mut key = [0u8; 32];
        rng.fill_bytes(&mut key);
        Omega { nbar, key }
    }

    pub fn nbar(&self) -> u64 {
        self.nbar
    }

    /// Magnitude of the `j`-th element, `2j + 5`.
    pub fn magnitude(j: u64) -> u64 {
        2 * j + 5
    }

    /// `+1` or `-1` for the `j`-th magnitude.
    pub fn sign(&self, j: u64) -> i64 {
        assert!(j < self.nbar, "index {j} outside Ω of size {}", self.nbar);
        let mut stream = ChaCha20Rng::from_seed(self.key);
        stream.set_word_pos(u128::from(j / 32));
        if (stream.next_u32() >> (j % 32)) & 1 == 1 {
            1
        } else {
            -1
        }
    }

    pub fn element(&self, j: u64) -> i64 {
        self.sign(j) * Self::magnitude(j) as i64
    }

    pub fn contains(&self, value: i64) -> bool {
        let mag = value.unsigned_abs();
        if mag < 5 || mag.is_multiple_of(2) {
            return false;
        }
        let j = (mag - 5) / 2;
        j < self.nbar && self.element(j) == value
    }

    pub fn elements(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.nbar).map(|j| self.element(j))
    }
}

/// Draws Ω with an independent uniform sign for each of the n̄ magnitudes.
pub fn sample_omega<R: Rng + ?Sized>(nbar: u64, rng: &mut R) -> Omega {
    Omega::sample(nbar, rng)
}

/// Both forms of the sizing rule relating m, n, n̄ and P.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Capacity {
    /// `2 · n^5 · n̄ · P^5 ≥ 2^m`
    pub sizing_rule: bool,
    /// `2 · n̄^5 · P^5 ≥ 2^m`
    pub input_rule: bool,
    /// `⌊lg(2 · n^5 · n̄ · P^5)⌋`
    pub work_log2: u64,
}

impl Capacity {
    pub fn holds(&self) -> bool {
        self.sizing_rule
    }
}

pub fn capacity(m: u32, n: usize, nbar: u64, bound: u64) -> Capacity {
    let n = BigUint::from(n);
    let nbar = BigUint::from(nbar);
    let p5 = BigUint::from(bound).pow(5);
    let target = BigUint::one() << m;
    let work = BigUint::from(2u32) * n.pow(5) * &nbar * &p5;
    let alt = BigUint::from(2u32) * nbar.pow(5) * &p5;
    Capacity {
        sizing_rule: work >= target,
        input_rule: alt >= target,
        work_log2: work.bits() - 1,
    }
}

/// Whether `2 · n^5 · n̄ · P^5 ≥ 2^m`.
pub fn check_capacity(m: u32, n: usize, nbar: u64, bound: u64) -> bool {
    capacity(m, n, nbar, bound).holds()
}

/// `4n(2n̄ + 3)`, the bound on `|k - k'|` and the trial-division limit for
/// `(M - 1)/2` when it is not itself prime.
pub fn lever_span(n: usize, nbar: u64) -> u128 {
    4 * n as u128 * (2 * nbar as u128 + 3)
}

/// Finds a safe prime `M = 2q + 1` with `⌈lg M⌉ = m` and `q > 4n(2n̄+3)`.
pub fn find_modulus<R: Rng + ?Sized>(
    m: u32,
    n: usize,
    nbar: u64,
    budget: u64,
    rng: &mut R,
) -> Result<ModContext> {
    let span = BigUint::from(lever_span(n, nbar));
    for _ in 0..budget {
        match random_safe_prime(u64::from(m), 1, DEFAULT_MR_ROUNDS, rng) {
            Ok(ctx) if *ctx.cofactor().unwrap() > span => return Ok(ctx),
            Ok(_) | Err(Error::SearchExhausted { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::SearchExhausted { attempts: budget })
}

/// Inputs to [`initialize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InitConfig {
    pub m: u32,
    pub n: usize,
    /// `P`, the largest value allowed in the coprime sequence.
    pub bound: u64,
    pub nbar: u64,
    pub mode: Mode,
    /// Safe-prime candidates tried before [`Error::SearchExhausted`].
    pub budget: u64,
}

impl InitConfig {
    pub fn new(m: u32, n: usize, bound: u64, nbar: u64) -> Self {
        InitConfig {
            m,
            n,
            bound,
            nbar,
            mode: Mode::Production,
            budget: DEFAULT_SEARCH_BUDGET,
        }
    }

    pub fn mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    fn check(&self) -> Result<()> {
        self.mode
            .check_sizes(self.m, self.n, ceil_lg_u64(self.bound), self.nbar)?;
        if !check_capacity(self.m, self.n, self.nbar, self.bound) {
            return Err(Error::InvalidParameter(format!(
                "2·n^5·nbar·P^5 < 2^m for m = {}, n = {}, nbar = {}, P = {}",
                self.m, self.n, self.nbar, self.bound
            )));
        }
        if self.bound >= 1 << (self.m - 1).min(63) {
            return Err(Error::InvalidParameter(format!(
                "P = {} must stay below 2^(m-1)",
                self.bound
            )));
        }
        Ok(())
    }
}

/// Lower bound on the order of `W`: `2^(m - ⌈lg P⌉)`, at least 1.
pub fn w_order_bound(m: u32, bound: u64) -> BigUint {
    BigUint::one() << m.saturating_sub(ceil_lg_u64(bound))
}

/// Runs the initialization algorithm and returns the matching public and
/// private parameters.
///
/// `W` is drawn uniformly from `(1, M-1)` and kept once its order reaches
/// `2^(m - ⌈lg P⌉)`; `δ` is drawn from the same range until it is coprime
/// to `M - 1`. A repeated or trivial `C_i` triggers a fresh draw of `W`,
/// `δ`, `Ω` and `ℓ`.
pub fn initialize<R: Rng + ?Sized>(
    config: &InitConfig,
    rng: &mut R,
) -> Result<(PublicParams, PrivateParams)> {
    config.check()?;
    let a = CoprimeSequence::generate(config.n, config.bound, rng)?;
    let ctx = find_modulus(config.m, config.n, config.nbar, config.budget, rng)?;
    let order = ctx.group_order();
    let lo = BigUint::from(2u32);
    let min_order = w_order_bound(config.m, config.bound);

    for _ in 0..MAX_REDRAWS {
        let w = loop {
            let w = rng.gen_biguint_range(&lo, &order);
            if ctx.order_at_least(&w, &min_order)? {
                break w;
            }
        };
        let delta = loop {
            let d = rng.gen_biguint_range(&lo, &order);
            if d.gcd(&order).is_one() {
                break d;
            }
        };
        let omega = sample_omega(config.nbar, rng);
        let mut picks: Vec<u64> = index::sample(rng, config.nbar as usize, config.n)
            .into_iter()
            .map(|j| j as u64)
            .collect();
        picks.shuffle(rng);
        let ell: Vec<i64> = picks.iter().map(|&j| omega.element(j)).collect();

        let c = compute_public(&ctx, &a, &ell, &w, &delta)?;
        let mut sorted: Vec<&BigUint> = c.iter().collect();
        sorted.sort();
        let repeated = sorted.windows(2).any(|p| p[0] == p[1]);
        if repeated || sorted[0] <= &BigUint::one() {
            continue;
        }
        let public = PublicParams::new(ctx.modulus().clone(), c)?;
        let private = PrivateParams {
            modulus: ctx.modulus().clone(),
            a,
            ell,
            w,
            delta,
            nbar: config.nbar,
        };
        return Ok((public, private));
    }
    Err(Error::SearchExhausted {
        attempts: MAX_REDRAWS,
    })
}

/// `Σ e_i · ℓ(i)` as an exact signed integer.
pub(crate) fn lever_sum(ell: &[i64], exponents: &[u32]) -> BigInt {
    ell.iter()
        .zip(exponents)
        .map(|(&l, &e)| i128::from(l) * i128::from(e))
        .sum::<i128>()
        .into()
}
