use crate::error::{Error, Result};

/// Size regime for parameter generation and validation.
///
/// `Production` enforces the published ranges (80 ≤ m ≤ 232, m ≤ n ≤ 4096,
/// 10 ≤ ⌈lg P⌉ ≤ 32). `Test` opens up toy sizes (m ≥ 12, n ≥ 4, no m ≤ n
/// requirement) so that exhaustive checks stay cheap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Production,
    Test,
}

pub const MAX_N: usize = 4096;
pub const MAX_M: u32 = 232;
pub const MAX_NBAR: u64 = 1 << 32;

impl Mode {
    pub fn min_m(self) -> u32 {
        match self {
            Mode::Production => 80,
            Mode::Test => 12,
        }
    }

    pub fn min_n(self) -> usize {
        match self {
            Mode::Production => 80,
            Mode::Test => 4,
        }
    }

    pub fn check_n(self, n: usize) -> Result<()> {
        if n % 2 == 1 {
            return Err(Error::OddLength(n));
        }
        if n < self.min_n() || n > MAX_N {
            return Err(Error::InvalidParameter(format!(
                "n = {n} outside [{}, {MAX_N}]",
                self.min_n()
            )));
        }
        Ok(())
    }

    pub fn check_m(self, m: u32) -> Result<()> {
        if m < self.min_m() || m > MAX_M {
            return Err(Error::InvalidParameter(format!(
                "m = {m} outside [{}, {MAX_M}]",
                self.min_m()
            )));
        }
        Ok(())
    }

    /// Full range check on an (m, n, ⌈lg P⌉, n̄) tuple.
    pub fn check_sizes(self, m: u32, n: usize, lg_bound: u32, nbar: u64) -> Result<()> {
        self.check_m(m)?;
        self.check_n(n)?;
        if self == Mode::Production {
            if (m as usize) > n {
                return Err(Error::InvalidParameter(format!("m = {m} exceeds n = {n}")));
            }
            if !(10..=32).contains(&lg_bound) {
                return Err(Error::InvalidParameter(format!(
                    "lg P = {lg_bound} outside [10, 32]"
                )));
            }
        }
        if (nbar as u128) < n as u128 || nbar > MAX_NBAR {
            return Err(Error::InvalidParameter(format!(
                "nbar = {nbar} outside [{n}, 2^32]"
            )));
        }
        Ok(())
    }
}
