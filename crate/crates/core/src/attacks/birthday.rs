//! Birthday collision search on a truncated digest.
//!
//! Truncation exists only for experiments: real 80-bit collisions are out of
//! reach, so the search keeps the low `mask_bits` bits of each digest and
//! looks for a repeat. A result here says the harness and the mixing of the
//! toy-truncated digest behave like a random map. It says nothing about the
//! full-width resistance of the hash.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};
use std::thread;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitcodec::BitString;
use crate::compress::digest_in;
use crate::error::{Error, Result};
use crate::params::PublicParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BirthdayConfig {
    pub mask_bits: u32,
    pub budget: u64,
    pub seed: u64,
    pub workers: usize,
}

impl BirthdayConfig {
    pub fn new(mask_bits: u32, budget: u64, seed: u64) -> Self {
        BirthdayConfig {
            mask_bits,
            budget,
            seed,
            workers: 1,
        }
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BirthdayStats {
    /// Digest evaluations performed, summed over workers.
    pub trials: u64,
    /// Two distinct messages and their shared truncated digest.
    pub collision: Option<(BitString, BitString, BigUint)>,
    /// `1.1774 · 2^{mask_bits/2}`.
    pub threshold: f64,
    pub seed: u64,
    pub mask_bits: u32,
}

/// Expected number of draws for a 50% chance of a repeat among `2^bits`
/// values.
pub fn birthday_threshold(bits: u32) -> f64 {
    1.1774 * (f64::from(bits) / 2.0).exp2()
}

fn random_message(rng: &mut ChaCha8Rng, n: usize) -> BitString {
    loop {
        let msg = BitString::new((0..n).map(|_| rng.gen()).collect());
        if !msg.is_zero() {
            return msg;
        }
    }
}

struct WorkerResult {
    trials: u64,
    collision: Option<(BitString, BitString, BigUint)>,
}

fn run_worker(
    params: &PublicParams,
    mask_bits: u32,
    budget: u64,
    seed: u64,
    stop: &AtomicBool,
) -> Result<WorkerResult> {
    let ctx = params.context();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: HashMap<BigUint, BitString> = HashMap::new();
    let mut trials = 0;
    while trials < budget && !stop.load(Ordering::Relaxed) {
        let msg = random_message(&mut rng, params.n());
        let tag = digest_in(&ctx, params, &msg)?.truncated(mask_bits);
        trials += 1;
        match seen.get(&tag) {
            Some(prev) if *prev != msg => {
                stop.store(true, Ordering::Relaxed);
                let prev = prev.clone();
                return Ok(WorkerResult {
                    trials,
                    collision: Some((prev, msg, tag)),
                });
            }
            Some(_) => {}
            None => {
                seen.insert(tag, msg);
            }
        }
    }
    Ok(WorkerResult {
        trials,
        collision: None,
    })
}

/// Draws random nonzero messages until two distinct ones agree on the low
/// `mask_bits` bits of their digests, or the budget runs out.
///
/// With several workers the budget is split evenly, worker `i` uses seed
/// `seed + i`, the first collision stops everyone and trial counts are
/// summed. Only the single-worker run is reproducible.
pub fn birthday_search(params: &PublicParams, cfg: &BirthdayConfig) -> Result<BirthdayStats> {
    if cfg.mask_bits == 0 || cfg.mask_bits > params.m() {
        return Err(Error::InvalidParameter(format!(
            "mask_bits = {} must lie in [1, {}]",
            cfg.mask_bits,
            params.m()
        )));
    }
    if cfg.budget == 0 || cfg.workers == 0 {
        return Err(Error::InvalidParameter(
            "budget and workers must be positive".into(),
        ));
    }
    let stop = AtomicBool::new(false);
    let workers = cfg.workers as u64;
    let results: Vec<Result<WorkerResult>> = thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|i| {
                let share = cfg.budget / workers + u64::from(i < cfg.budget % workers);
                let stop = &stop;
                scope.spawn(move || {
                    run_worker(params, cfg.mask_bits, share, cfg.seed.wrapping_add(i), stop)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("birthday worker panicked"))
            .collect()
    });

    let mut trials = 0;
    let mut collision = None;
    for result in results {
        let r = result?;
        trials += r.trials;
        if collision.is_none() {
            collision = r.collision;
        }
    }
    Ok(BirthdayStats {
        trials,
        collision,
        threshold: birthday_threshold(cfg.mask_bits),
        seed: cfg.seed,
        mask_bits: cfg.mask_bits,
    })
}

impl BirthdayStats {
    pub const CSV_HEADER: &'static str = "seed,mask_bits,trials,found,threshold";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{:.1}",
            self.seed,
            self.mask_bits,
            self.trials,
            self.collision.is_some(),
            self.threshold
        )
    }
}

impl fmt::Display for BirthdayStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed={}", self.seed)?;
        writeln!(f, "truncated=true")?;
        writeln!(f, "mask_bits={}", self.mask_bits)?;
        writeln!(f, "trials={}", self.trials)?;
        writeln!(f, "threshold={:.1}", self.threshold)?;
        match &self.collision {
            Some((a, b, tag)) => {
                writeln!(f, "found=true")?;
                writeln!(f, "msg1={}", a.to_hex())?;
                writeln!(f, "msg2={}", b.to_hex())?;
                write!(f, "truncated_digest={tag:x}")
            }
            None => write!(f, "found=false"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compress::digest;
    use crate::mode::Mode;
    use crate::params::{initialize, InitConfig};

    fn toy() -> PublicParams {
        let cfg = InitConfig::new(12, 8, 1201, 8).mode(Mode::Test);
        initialize(&cfg, &mut ChaCha8Rng::seed_from_u64(4))
            .unwrap()
            .0
    }

    #[test]
    fn full_width_toy_collision() {
        let p = toy();
        let stats = birthday_search(&p, &BirthdayConfig::new(12, 1 << 12, 7)).unwrap();
        let (a, b, tag) = stats
            .collision
            .clone()
            .expect("255 messages into 2^12 values");
        assert_ne!(a, b);
        let (da, db) = (digest(&p, &a).unwrap(), digest(&p, &b).unwrap());
        assert_eq!(da, db);
        assert_eq!(da.truncated(12), tag);
        assert!(stats.to_string().contains("truncated=true"));
    }

    #[test]
    fn budget_one_and_bad_config() {
        let p = toy();
        let stats = birthday_search(&p, &BirthdayConfig::new(8, 1, 0)).unwrap();
        assert_eq!((stats.trials, stats.collision.is_none()), (1, true));
        assert!(birthday_search(&p, &BirthdayConfig::new(13, 5, 0)).is_err());
        assert!(birthday_search(&p, &BirthdayConfig::new(8, 0, 0)).is_err());
    }

    #[test]
    fn single_worker_is_reproducible() {
        let p = toy();
        let cfg = BirthdayConfig::new(10, 1000, 42);
        assert_eq!(
            birthday_search(&p, &cfg).unwrap(),
            birthday_search(&p, &cfg).unwrap()
        );
    }

    #[test]
    fn sharded_collisions_verify() {
        let p = toy();
        let stats = birthday_search(&p, &BirthdayConfig::new(10, 4000, 5).workers(4)).unwrap();
        let (a, b, tag) = stats.collision.expect("collision within budget");
        assert_ne!(a, b);
        assert_eq!(digest(&p, &a).unwrap().truncated(10), tag);
        assert_eq!(digest(&p, &b).unwrap().truncated(10), tag);
        assert!(stats.trials <= 4000);
    }

    #[test]
    fn threshold_value() {
        assert!((birthday_threshold(16) - 301.4144).abs() < 1e-3);
    }
}
