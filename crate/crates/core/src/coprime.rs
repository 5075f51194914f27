//! Coprime sequences: the private multiplicative basis of the hash.
//!
//! A sequence `A_1 … A_n` of distinct integers is *coprime* when every pair
//! is either coprime, or shares `F = gcd(A_i, A_j) ≠ 1` with neither
//! `A_i / F` nor `A_j / F` dividing any third element. Under that condition
//! the map from exponent vectors to `∏ A_i^{e_i}` is injective, which the
//! tests check exhaustively at small sizes.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use rand::seq::{index, SliceRandom};
use rand::Rng;

use crate::error::{Error, Result};
use crate::numtheory::{is_prime_u64, primes_up_to};

/// Bounds above this are sampled by rejection instead of sieving.
const SIEVE_LIMIT: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoprimeSequence {
    elements: Vec<u64>,
    bound: u64,
}

/// The first way a sequence fails the coprime condition (zero-based indices).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    OutOfRange {
        index: usize,
    },
    Duplicate {
        i: usize,
        j: usize,
    },
    /// `A_i` and `A_j` share a factor and one cofactor divides `A_k`.
    Divides {
        i: usize,
        j: usize,
        k: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::OutOfRange { index } => write!(f, "element {} out of range", index + 1),
            Violation::Duplicate { i, j } => {
                write!(f, "elements {} and {} are equal", i + 1, j + 1)
            }
            Violation::Divides { i, j, k } => write!(
                f,
                "elements {} and {} share a factor whose cofactor divides element {}",
                i + 1,
                j + 1,
                k + 1
            ),
        }
    }
}

impl CoprimeSequence {
    /// Wraps `elements` with the bound `P`. Only the bound itself is checked
    /// here; call [`CoprimeSequence::check`] for the coprime condition.
    pub fn from_elements(elements: Vec<u64>, bound: u64) -> Result<Self> {
        if !(2..=1 << 32).contains(&bound) {
            return Err(Error::InvalidParameter(format!(
                "bound {bound} outside [2, 2^32]"
            )));
        }
        Ok(CoprimeSequence { elements, bound })
    }

    /// `n` distinct primes drawn uniformly from the primes in `[2, bound]`,
    /// in random order.
    pub fn generate<R: Rng + ?Sized>(n: usize, bound: u64, rng: &mut R) -> Result<Self> {
        if !(2..=1 << 32).contains(&bound) {
            return Err(Error::InvalidParameter(format!(
                "bound {bound} outside [2, 2^32]"
            )));
        }
        let elements = if bound <= SIEVE_LIMIT {
            let primes = primes_up_to(bound);
            if primes.len() < n {
                return Err(Error::InsufficientPrimes {
                    needed: n,
                    available: primes.len(),
                });
            }
            let mut picked: Vec<u64> = index::sample(rng, primes.len(), n)
                .into_iter()
                .map(|i| primes[i])
                .collect();
            picked.shuffle(rng);
            picked
        } else {
            // π(2^24) > 10^6, far beyond any supported n.
            let mut seen = HashSet::with_capacity(n);
            let mut picked = Vec::with_capacity(n);
            while picked.len() < n {
                let x = rng.gen_range(2..=bound);
                if is_prime_u64(x) && seen.insert(x) {
                    picked.push(x);
                }
            }
            picked
        };
        Ok(CoprimeSequence { elements, bound })
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// The earliest violation in (i, j, k) scan order, if any.
    pub fn check(&self) -> Option<Violation> {
        let a = &self.elements;
        if let Some(index) = a.iter().position(|&x| x < 2 || x > self.bound) {
            return Some(Violation::OutOfRange { index });
        }
        for i in 0..a.len() {
            for j in i + 1..a.len() {
                if a[i] == a[j] {
                    return Some(Violation::Duplicate { i, j });
                }
                let f = a[i].gcd(&a[j]);
                if f == 1 {
                    continue;
                }
                let (ci, cj) = (a[i] / f, a[j] / f);
                let hit = (0..a.len())
                    .filter(|&k| k != i && k != j)
                    .find(|&k| a[k].is_multiple_of(ci) || a[k].is_multiple_of(cj));
                if let Some(k) = hit {
                    return Some(Violation::Divides { i, j, k });
                }
            }
        }
        None
    }

    pub fn verify(&self) -> bool {
        self.check().is_none()
    }

    /// The exact product `∏ A_i^{e_i}`.
    pub fn subset_product(&self, exponents: &[u32]) -> Result<BigUint> {
        if exponents.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: exponents.len(),
            });
        }
        Ok(self
            .elements
            .iter()
            .zip(exponents)
            .filter(|(_, &e)| e > 0)
            .fold(BigUint::one(), |acc, (&a, &e)| {
                acc * BigUint::from(a).pow(e)
            }))
    }
}
