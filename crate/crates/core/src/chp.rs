//! Chaum-van Heijst-Pfitzmann hash `h(w1, w2) = α^{w1} β^{w2} mod p` and
//! the cost figures used to compare it against the knapsack hash.

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;

use crate::error::{Error, Result};
use crate::numtheory::{is_probable_prime, random_safe_prime, ModContext, DEFAULT_MR_ROUNDS};
use crate::params::file::Lines;

pub const CHP_HEADER: &str = "CHP 1";

/// Safe prime `p = 2q + 1` and two independent generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChpParams {
    pub p: BigUint,
    pub q: BigUint,
    pub alpha: BigUint,
    pub beta: BigUint,
}

impl ChpParams {
    /// Checks `p = 2q + 1` with both prime, and that `α ≠ β` both generate.
    pub fn check(&self) -> Result<()> {
        if (&self.q << 1u32) + 1u32 != self.p {
            return Err(Error::InvalidParameter("p != 2q + 1".into()));
        }
        if !is_probable_prime(&self.q, DEFAULT_MR_ROUNDS)
            || !is_probable_prime(&self.p, DEFAULT_MR_ROUNDS)
        {
            return Err(Error::InvalidParameter("p or q is not prime".into()));
        }
        if self.alpha == self.beta {
            return Err(Error::InvalidParameter("alpha = beta".into()));
        }
        let ctx = self.context()?;
        let factors = self.factors();
        for (name, g) in [("alpha", &self.alpha), ("beta", &self.beta)] {
            if !ctx.is_generator(g, &factors)? {
                return Err(Error::InvalidParameter(format!(
                    "{name} is not a generator"
                )));
            }
        }
        Ok(())
    }

    fn factors(&self) -> [BigUint; 2] {
        [BigUint::from(2u32), self.q.clone()]
    }

    pub fn context(&self) -> Result<ModContext> {
        ModContext::from_safe_prime(self.q.clone())
    }

    pub fn to_text(&self) -> String {
        format!(
            "{CHP_HEADER}\np={}\nq={}\nalpha={}\nbeta={}\n",
            self.p, self.q, self.alpha, self.beta
        )
    }

    pub fn parse(text: &str) -> Result<Self> {
        const KEYS: [&str; 4] = ["p", "q", "alpha", "beta"];
        let mut lines = Lines::new(text);
        lines.header(CHP_HEADER)?;
        let (_, p) = lines.field("p", &KEYS)?;
        let (_, q) = lines.field("q", &KEYS)?;
        let (_, alpha) = lines.field("alpha", &KEYS)?;
        let (_, beta) = lines.field("beta", &KEYS)?;
        lines.finish()?;
        Ok(ChpParams { p, q, alpha, beta })
    }
}

/// Finds a `bits`-bit safe prime and two distinct random generators.
pub fn chp_setup<R: Rng + ?Sized>(bits: u64, budget: u64, rng: &mut R) -> Result<ChpParams> {
    if bits < 5 {
        return Err(Error::InvalidParameter(format!(
            "bits = {bits}, need at least 5"
        )));
    }
    let ctx = random_safe_prime(bits, budget, DEFAULT_MR_ROUNDS, rng)?;
    let q = ctx.cofactor().unwrap().clone();
    let factors = [BigUint::from(2u32), q.clone()];
    let alpha = ctx.find_generator(&factors, rng)?;
    let beta = loop {
        let b = ctx.find_generator(&factors, rng)?;
        if b != alpha {
            break b;
        }
    };
    Ok(ChpParams {
        p: ctx.modulus().clone(),
        q,
        alpha,
        beta,
    })
}

/// `α^{w1} · β^{w2} mod p` for `w1, w2 ∈ [0, q - 1]`.
pub fn chp_hash(params: &ChpParams, w1: &BigUint, w2: &BigUint) -> Result<BigUint> {
    chp_hash_in(&params.context()?, params, w1, w2)
}

pub fn chp_hash_in(
    ctx: &ModContext,
    params: &ChpParams,
    w1: &BigUint,
    w2: &BigUint,
) -> Result<BigUint> {
    for (name, w) in [("w1", w1), ("w2", w2)] {
        if *w >= params.q {
            return Err(Error::Domain(format!("{name} must lie in [0, q-1]")));
        }
    }
    let a = ctx.mod_pow(&params.alpha, w1);
    let b = ctx.mod_pow(&params.beta, w2);
    Ok(if a.is_one() {
        b
    } else if b.is_one() {
        a
    } else {
        ctx.mod_mul(&a, &b)
    })
}

/// Side-by-side cost, rate and birthday figures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostTable {
    /// `2 · 4⌈lg p⌉^3`: two exponentiations at `4 lg^3 p` each.
    pub chp_bit_ops: u128,
    /// `4 n m^2`: at most `2n` multiplications at `2m^2` each.
    pub juna_bit_ops: u128,
    /// `lg p / (2(lg p - 1))`
    pub chp_rate: f64,
    /// `m / n`
    pub juna_rate: f64,
    /// `lg` of the birthday input count, `lg p / 2`.
    pub chp_birthday_log2: f64,
    /// `m / 2`
    pub juna_birthday_log2: f64,
}

pub fn compare_costs(m: u64, n: u64, lg_p: u64) -> CostTable {
    let lp = u128::from(lg_p);
    CostTable {
        chp_bit_ops: 2 * 4 * lp.pow(3),
        juna_bit_ops: 4 * u128::from(n) * u128::from(m).pow(2),
        chp_rate: lg_p as f64 / (2.0 * (lg_p as f64 - 1.0)),
        juna_rate: m as f64 / n as f64,
        chp_birthday_log2: lg_p as f64 / 2.0,
        juna_birthday_log2: m as f64 / 2.0,
    }
}

impl CostTable {
    pub fn chp_birthday_inputs(&self) -> f64 {
        self.chp_birthday_log2.exp2()
    }

    pub fn juna_birthday_inputs(&self) -> f64 {
        self.juna_birthday_log2.exp2()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn p23() -> ChpParams {
        ChpParams {
            p: big(23),
            q: big(11),
            alpha: big(5),
            beta: big(7),
        }
    }

    #[test]
    fn toy_params_check() {
        p23().check().unwrap();
        let bad = ChpParams {
            beta: big(2),
            ..p23()
        };
        assert!(bad.check().is_err());
        let same = ChpParams {
            beta: big(5),
            ..p23()
        };
        assert!(same.check().is_err());
    }

    #[test]
    fn setup_at_five_bits() {
        let params = chp_setup(5, 1000, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!((params.p.clone(), params.q.clone()), (big(23), big(11)));
        params.check().unwrap();
        assert_eq!(ChpParams::parse(&params.to_text()).unwrap(), params);
        assert!(matches!(
            chp_setup(1024, 2, &mut ChaCha8Rng::seed_from_u64(1)),
            Err(Error::SearchExhausted { attempts: 2 })
        ));
    }

    #[test]
    fn hash_values() {
        let p = p23();
        assert_eq!(chp_hash(&p, &big(3), &big(4)).unwrap(), big(21));
        assert_eq!(chp_hash(&p, &big(0), &big(0)).unwrap(), big(1));
        assert_eq!(chp_hash(&p, &big(1), &big(0)).unwrap(), big(5));
        assert!(matches!(
            chp_hash(&p, &big(11), &big(0)),
            Err(Error::Domain(_))
        ));
        for w1 in 0..11u64 {
            for w2 in 0..11u64 {
                let expect = 5u64.pow(w1 as u32) % 23 * (7u64.pow(w2 as u32) % 23) % 23;
                let direct =
                    big(5).modpow(&big(w1), &big(23)) * big(7).modpow(&big(w2), &big(23)) % 23u32;
                assert_eq!(direct, big(expect));
                assert_eq!(chp_hash(&p, &big(w1), &big(w2)).unwrap(), direct);
            }
        }
    }

    #[test]
    fn homomorphic() {
        let p = p23();
        for (a, b, c, d) in [(1u64, 2u64, 3u64, 4u64), (0, 5, 5, 0), (4, 4, 6, 6)] {
            let sum = chp_hash(&p, &big(a + c), &big(b + d)).unwrap();
            let prod = chp_hash(&p, &big(a), &big(b)).unwrap()
                * chp_hash(&p, &big(c), &big(d)).unwrap()
                % 23u32;
            assert_eq!(sum, prod);
        }
    }

    #[test]
    fn published_costs() {
        let t = compare_costs(80, 2048, 1024);
        assert_eq!(t.chp_bit_ops, 8_589_934_592);
        assert_eq!(t.juna_bit_ops, 52_428_800);
        let t = compare_costs(80, 2046, 1024);
        assert_eq!(format!("{:.2}", t.juna_rate * 100.0), "3.91");
        assert_eq!(format!("{:.2}", t.chp_rate * 100.0), "50.05");
        assert_eq!(t.chp_birthday_log2, 512.0);
        assert_eq!(t.juna_birthday_inputs(), 2f64.powi(40));
    }
}
