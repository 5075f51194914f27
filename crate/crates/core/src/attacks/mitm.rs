//! Meet-in-the-middle for plain subset sum.
//!
//! Given `c_1 … c_n` and `s`, split at `t = ⌊n/2⌋`, tabulate and sort every
//! left-half sum, then walk the right half and binary-search each residue
//! `s - Σ_{i>t} c_i b_i` in the table. Time `O(n 2^{n/2})`.
//!
//! # Why this does not carry over to the hash
//!
//! The split only works because each term depends on one bit. In the
//! compression function the exponent at position `i` is a long shadow, which
//! reads bit `i` and the opposite bit `i ± n/2`, so every half of the string
//! touches the other half. [`fork_dependencies`] makes this concrete: for
//! `n = 12` and the fork `(4 : 8)`, positions 5 through 12 read
//!
//! ```text
//! (b_5 2^{b_11}) (b_6 2^{b_12}) (b_7 2^{b_1}) (b_8 2^{b_2})
//! (b_9 2^{b_3}) (b_10 2^{b_4}) (b_11 2^{b_5}) (b_12 2^{b_6})
//! ```
//!
//! which is all twelve bits. The shadows themselves add more coupling
//! through zero runs, so the true dependency set is never smaller than this.
//! Only plain subset-sum instances are attacked here.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::bitcodec::partner_index;
use crate::error::{Error, Result};
use crate::params::file::Lines;

pub const DEFAULT_MITM_CAP: usize = 40;
pub const MAX_BRUTE_FORCE_N: usize = 24;

pub const SSP_HEADER: &str = "SSP 1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetSumInstance {
    c: Vec<u64>,
    s: u64,
}

impl SubsetSumInstance {
    pub fn new(c: Vec<u64>, s: u64) -> Result<Self> {
        if let Some(i) = c.iter().position(|&v| v == 0) {
            return Err(Error::InvalidParameter(format!("c_{} = 0", i + 1)));
        }
        Ok(SubsetSumInstance { c, s })
    }

    pub fn c(&self) -> &[u64] {
        &self.c
    }

    pub fn s(&self) -> u64 {
        self.s
    }

    pub fn n(&self) -> usize {
        self.c.len()
    }

    /// `Σ c_i b_i`.
    pub fn evaluate(&self, bits: &[bool]) -> u128 {
        self.c
            .iter()
            .zip(bits)
            .filter(|(_, &b)| b)
            .map(|(&c, _)| u128::from(c))
            .sum()
    }

    pub fn is_solution(&self, bits: &[bool]) -> bool {
        bits.len() == self.n() && self.evaluate(bits) == u128::from(self.s)
    }

    /// `SSP 1`, then `n=`, `s=` and one `c=` line per element.
    pub fn to_text(&self) -> String {
        let mut out = format!("{SSP_HEADER}\nn={}\ns={}\n", self.n(), self.s);
        for c in &self.c {
            writeln!(out, "c={c}").unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        const KEYS: [&str; 3] = ["n", "s", "c"];
        let mut lines = Lines::new(text);
        lines.header(SSP_HEADER)?;
        let (n_line, n): (_, usize) = lines.field("n", &KEYS)?;
        if n > DEFAULT_MITM_CAP.max(64) {
            return Err(Error::parse(n_line, format!("n = {n} is too large")));
        }
        let (_, s) = lines.field("s", &KEYS)?;
        let mut c = Vec::with_capacity(n);
        for _ in 0..n {
            let (no, v): (_, u64) = lines.field("c", &KEYS)?;
            if v == 0 {
                return Err(Error::parse(no, "c must be positive"));
            }
            c.push(v);
        }
        lines.finish()?;
        SubsetSumInstance::new(c, s)
    }
}

fn mask_sum(c: &[u64], mask: u64) -> u128 {
    c.iter()
        .enumerate()
        .filter(|(j, _)| mask >> j & 1 == 1)
        .map(|(_, &v)| u128::from(v))
        .sum()
}

/// [`mitm_subset_sum_capped`] with the default cap of 40.
pub fn mitm_subset_sum(inst: &SubsetSumInstance) -> Result<Option<Vec<bool>>> {
    mitm_subset_sum_capped(inst, DEFAULT_MITM_CAP)
}

/// Returns some `b` with `Σ c_i b_i = s`, or `None`.
///
/// Right halves are tried in increasing mask order (bit `j` of the mask is
/// `b_{t+1+j}`), and for each the first matching entry of the table sorted
/// by `(sum, mask)` is taken, so the answer is deterministic.
pub fn mitm_subset_sum_capped(inst: &SubsetSumInstance, cap: usize) -> Result<Option<Vec<bool>>> {
    let n = inst.n();
    if n > cap.min(62) {
        return Err(Error::InstanceTooLarge { n, cap });
    }
    let t = n / 2;
    let (left, right) = inst.c.split_at(t);

    let mut table: Vec<(u128, u64)> = (0..1u64 << t)
        .map(|mask| (mask_sum(left, mask), mask))
        .collect();
    table.sort_unstable();

    let s = u128::from(inst.s);
    for rmask in 0..1u64 << (n - t) {
        let Some(r) = s.checked_sub(mask_sum(right, rmask)) else {
            continue;
        };
        let at = table.partition_point(|&(sum, _)| sum < r);
        if let Some(&(sum, lmask)) = table.get(at) {
            if sum == r {
                let bits = (0..t)
                    .map(|j| lmask >> j & 1 == 1)
                    .chain((0..n - t).map(|j| rmask >> j & 1 == 1))
                    .collect();
                return Ok(Some(bits));
            }
        }
    }
    Ok(None)
}

/// Every assignment with `Σ c_i b_i = s`, sorted. Walks a Gray code so each
/// step costs one addition.
pub fn brute_force_solve(inst: &SubsetSumInstance) -> Result<Vec<Vec<bool>>> {
    let n = inst.n();
    if n > MAX_BRUTE_FORCE_N {
        return Err(Error::InstanceTooLarge {
            n,
            cap: MAX_BRUTE_FORCE_N,
        });
    }
    let s = u128::from(inst.s);
    let mut sum = 0u128;
    let mut code = 0u64;
    let mut found = Vec::new();
    for step in 0..1u64 << n {
        if step > 0 {
            let j = step.trailing_zeros() as usize;
            code ^= 1 << j;
            if code >> j & 1 == 1 {
                sum += u128::from(inst.c[j]);
            } else {
                sum -= u128::from(inst.c[j]);
            }
        }
        if sum == s {
            found.push((0..n).map(|j| code >> j & 1 == 1).collect::<Vec<bool>>());
        }
    }
    found.sort();
    Ok(found)
}

/// Zero-based bit positions read by the long-shadow exponents at positions
/// `range` of an `n`-bit string, counting the partner bits only.
pub fn fork_dependencies(n: usize, range: std::ops::Range<usize>) -> BTreeSet<usize> {
    assert!(
        n.is_multiple_of(2) && range.end <= n,
        "need even n and a range inside it"
    );
    range.flat_map(|i| [i, partner_index(i, n)]).collect()
}
