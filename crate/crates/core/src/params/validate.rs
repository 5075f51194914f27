use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;

use super::{capacity, lever_span, w_order_bound, PrivateParams, PublicParams};
use crate::mode::Mode;
use crate::numtheory::{
    ceil_lg_u64, is_probable_prime, least_factor_exceeds, ModContext, DEFAULT_MR_ROUNDS,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Itemized outcome of [`validate`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    fn push(&mut self, name: &'static str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name,
            passed,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let verdict = if c.passed { "pass" } else { "fail" };
            if c.detail.is_empty() {
                writeln!(f, "{}={}", c.name, verdict)?;
            } else {
                writeln!(f, "{}={} {}", c.name, verdict, c.detail)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidateOptions {
    pub mode: Mode,
    /// n̄ used for the `4n(2n̄+3)` trial-division limit when no private
    /// parameters are given. Defaults to n.
    pub nbar: Option<u64>,
    pub rounds: u32,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions {
            mode: Mode::Production,
            nbar: None,
            rounds: DEFAULT_MR_ROUNDS,
        }
    }
}

/// Checks every constraint of the initialization algorithm that can be
/// checked from what is supplied.
pub fn validate(
    public: &PublicParams,
    private: Option<&PrivateParams>,
    opts: &ValidateOptions,
) -> ValidationReport {
    let mut report = ValidationReport::default();
    let modulus = public.modulus();
    let n = public.n();
    let m = public.m();
    let nbar = private.map(|p| p.nbar).or(opts.nbar).unwrap_or(n as u64);

    let prime = is_probable_prime(modulus, opts.rounds);
    report.push("modulus_prime", prime, format!("M={modulus}"));

    let half = (modulus - 1u32) >> 1u32;
    let limit = lever_span(n, nbar);
    let (ok, detail) = if is_probable_prime(&half, opts.rounds) {
        (true, "(M-1)/2 is prime".to_string())
    } else if u64::try_from(limit).is_ok_and(|l| least_factor_exceeds(&half, l)) {
        (true, format!("(M-1)/2 has no prime factor <= {limit}"))
    } else {
        (
            false,
            format!("(M-1)/2 is not prime and has a prime factor <= {limit}"),
        )
    };
    report.push("modulus_structure", ok, detail);

    let m_range = opts.mode.check_m(m);
    report.push(
        "bit_length",
        m_range.is_ok(),
        m_range
            .err()
            .map_or(format!("lg M = {m}"), |e| e.to_string()),
    );
    let n_range = opts.mode.check_n(n);
    report.push(
        "message_length",
        n_range.is_ok(),
        n_range.err().map_or(format!("n = {n}"), |e| e.to_string()),
    );

    let bad = public.c().iter().position(|c| *c <= BigUint::one());
    report.push(
        "c_range",
        bad.is_none(),
        bad.map_or("all C_i in (1, M)".into(), |i| {
            format!("C_{} not in (1, M)", i + 1)
        }),
    );

    let mut seen = HashMap::with_capacity(n);
    let dup = public
        .c()
        .iter()
        .enumerate()
        .find_map(|(j, c)| seen.insert(c, j).map(|i| (i, j)));
    report.push(
        "c_distinct",
        dup.is_none(),
        dup.map_or(format!("{n} distinct values"), |(i, j)| {
            format!("C_{} = C_{}", i + 1, j + 1)
        }),
    );

    if let Some(private) = private {
        check_private(&mut report, public, private, opts);
    }
    report
}

fn check_private(
    report: &mut ValidationReport,
    public: &PublicParams,
    private: &PrivateParams,
    opts: &ValidateOptions,
) {
    let n = public.n();
    let matches = private.modulus == *public.modulus() && private.n() == n;
    report.push(
        "private_matches_public",
        matches,
        format!("private n = {}, public n = {n}", private.n()),
    );
    if !matches || private.ell.len() != n {
        report.push(
            "lever_length",
            private.ell.len() == n,
            format!("{} lever values", private.ell.len()),
        );
        return;
    }

    let m = public.m();
    let bound = private.bound();
    let sizes = opts
        .mode
        .check_sizes(m, n, ceil_lg_u64(bound), private.nbar);
    report.push(
        "sizes",
        sizes.is_ok(),
        sizes.err().map_or_else(
            || format!("m = {m}, n = {n}, P = {bound}, nbar = {}", private.nbar),
            |e| e.to_string(),
        ),
    );
    let cap = capacity(m, n, private.nbar, bound);
    report.push(
        "capacity",
        cap.holds(),
        format!(
            "lg(2 n^5 nbar P^5) = {}, m = {m}, alt rule {}",
            cap.work_log2, cap.input_rule
        ),
    );

    let violation = private.a.check();
    report.push(
        "coprime_sequence",
        violation.is_none(),
        violation.map_or(format!("{n} elements, P = {bound}"), |v| v.to_string()),
    );

    // equal magnitudes cover both a repeated value and a magnitude used with both signs
    let mut by_magnitude = HashMap::new();
    let lever_dup = private
        .ell
        .iter()
        .enumerate()
        .find_map(|(j, &l)| by_magnitude.insert(l.unsigned_abs(), j).map(|i| (i, j)));
    report.push(
        "lever_injective",
        lever_dup.is_none(),
        lever_dup.map_or("one exponent per magnitude".into(), |(i, j)| {
            format!("l({}) and l({}) share a magnitude", i + 1, j + 1)
        }),
    );
    let top = 2 * private.nbar as u128 + 3;
    let outside = private.ell.iter().position(|&l| {
        let mag = l.unsigned_abs() as u128;
        mag < 5 || mag > top || mag.is_multiple_of(2)
    });
    report.push(
        "lever_in_omega",
        outside.is_none(),
        outside.map_or(format!("all |l(i)| odd in [5, {top}]"), |i| {
            format!("l({}) = {} outside Omega", i + 1, private.ell[i])
        }),
    );

    let order = public.modulus() - 1u32;
    let delta_ok = private.delta > BigUint::one()
        && private.delta < order
        && private.delta.gcd(&order).is_one();
    report.push(
        "delta_invertible",
        delta_ok,
        "gcd(delta, M-1) = 1 with delta in (1, M-1)",
    );

    let min_order = w_order_bound(m, bound);
    let w_in_range = private.w > BigUint::one() && private.w < order;
    let (w_ok, w_detail) = match ModContext::new(public.modulus().clone())
        .and_then(|ctx| ctx.with_cofactor(order >> 1u32, opts.rounds))
        .and_then(|ctx| ctx.order_at_least(&private.w, &min_order))
    {
        Ok(ok) => (
            ok && w_in_range,
            format!("order(W) >= 2^{}", min_order.bits() - 1),
        ),
        Err(e) => (false, format!("order undecidable: {e}")),
    };
    report.push("w_order", w_ok, w_detail);

    let consistent = match private.derive_public() {
        Ok(derived) => derived
            .c()
            .iter()
            .zip(public.c())
            .position(|(a, b)| a != b)
            .map_or(Ok(()), |i| Err(format!("C_{} differs", i + 1))),
        Err(e) => Err(e.to_string()),
    };
    report.push(
        "c_consistency",
        consistent.is_ok(),
        consistent
            .err()
            .unwrap_or_else(|| "(A_i W^l(i))^delta reproduces every C_i".into()),
    );
}
