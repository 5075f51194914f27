//! Line-oriented parameter files.
//!
//! ```text
//! JUNA-PUB 1            JUNA-PRIV 1
//! m=<int>               m=<int>
//! n=<int>               n=<int>
//! M=<int>               M=<int>
//! C=<int>   (n lines)   P=<int>
//!                       nbar=<int>
//!                       W=<int>
//!                       delta=<int>
//!                       A=<int>   (n lines)
//!                       L=<int>   (n lines, signed)
//! ```
//!
//! ASCII, LF line endings, decimal integers, keys in exactly this order.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigUint;

use super::{PrivateParams, PublicParams};
use crate::coprime::CoprimeSequence;
use crate::error::{Error, Result};
use crate::numtheory::ceil_lg;

pub const PUBLIC_HEADER: &str = "JUNA-PUB 1";
pub const PRIVATE_HEADER: &str = "JUNA-PRIV 1";

const KNOWN_KEYS: [&str; 10] = ["m", "n", "M", "C", "P", "nbar", "W", "delta", "A", "L"];

pub(crate) struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Split<'a, char>>,
    last: usize,
}

impl<'a> Lines<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        let body = text.strip_suffix('\n').unwrap_or(text);
        Lines {
            inner: body.split('\n').enumerate(),
            last: 0,
        }
    }

    fn next_line(&mut self) -> Result<(usize, &'a str)> {
        match self.inner.next() {
            Some((i, line)) => {
                self.last = i + 1;
                Ok((i + 1, line))
            }
            None => Err(Error::parse(self.last + 1, "unexpected end of file")),
        }
    }

    pub(crate) fn header(&mut self, expected: &str) -> Result<()> {
        let (no, line) = self.next_line()?;
        if line != expected {
            return Err(Error::parse(
                no,
                format!("expected header `{expected}`, found `{line}`"),
            ));
        }
        Ok(())
    }

    /// Reads `key=value` for the given key and parses the value.
    pub(crate) fn field<T: FromStr>(&mut self, key: &str, known: &[&str]) -> Result<(usize, T)> {
        let (no, line) = self.next_line()?;
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::parse(no, format!("expected `{key}=<value>`, found `{line}`")))?;
        if k != key {
            let msg = if known.contains(&k) {
                format!("expected key `{key}`, found `{k}`")
            } else {
                format!("unknown key `{k}`")
            };
            return Err(Error::parse(no, msg));
        }
        let digits = v.strip_prefix('-').unwrap_or(v);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::parse(no, format!("`{v}` is not a decimal integer")));
        }
        let value = v
            .parse()
            .map_err(|_| Error::parse(no, format!("`{v}` is out of range for `{key}`")))?;
        Ok((no, value))
    }

    pub(crate) fn finish(&mut self) -> Result<()> {
        match self.inner.next() {
            None => Ok(()),
            Some((i, _)) => Err(Error::parse(i + 1, "unexpected trailing content")),
        }
    }
}

fn read_modulus_block(lines: &mut Lines<'_>) -> Result<(usize, BigUint)> {
    let (m_line, m): (_, u64) = lines.field("m", &KNOWN_KEYS)?;
    let (_, n): (_, usize) = lines.field("n", &KNOWN_KEYS)?;
    let (no, modulus): (_, BigUint) = lines.field("M", &KNOWN_KEYS)?;
    if ceil_lg(&modulus) != m {
        return Err(Error::parse(
            m_line,
            format!("m = {m} but lg M = {}", ceil_lg(&modulus)),
        ));
    }
    if n > crate::mode::MAX_N {
        return Err(Error::parse(
            m_line + 1,
            format!("n = {n} exceeds {}", crate::mode::MAX_N),
        ));
    }
    if modulus < BigUint::from(3u32) || !modulus.bit(0) {
        return Err(Error::parse(no, "M must be odd and at least 3"));
    }
    Ok((n, modulus))
}

impl PublicParams {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{PUBLIC_HEADER}\nm={}\nn={}\nM={}\n",
            self.m,
            self.n(),
            self.modulus
        );
        for c in &self.c {
            writeln!(out, "C={c}").unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = Lines::new(text);
        lines.header(PUBLIC_HEADER)?;
        let (n, modulus) = read_modulus_block(&mut lines)?;
        let mut c = Vec::with_capacity(n);
        for _ in 0..n {
            let (no, ci): (_, BigUint) = lines.field("C", &KNOWN_KEYS)?;
            if ci >= modulus {
                return Err(Error::parse(no, "C is not reduced modulo M"));
            }
            c.push(ci);
        }
        lines.finish()?;
        PublicParams::new(modulus, c)
    }
}

impl PrivateParams {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{PRIVATE_HEADER}\nm={}\nn={}\nM={}\nP={}\nnbar={}\nW={}\ndelta={}\n",
            self.m(),
            self.n(),
            self.modulus,
            self.bound(),
            self.nbar,
            self.w,
            self.delta
        );
        for a in self.a.elements() {
            writeln!(out, "A={a}").unwrap();
        }
        for l in &self.ell {
            writeln!(out, "L={l}").unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = Lines::new(text);
        lines.header(PRIVATE_HEADER)?;
        let (n, modulus) = read_modulus_block(&mut lines)?;
        let (p_line, bound): (_, u64) = lines.field("P", &KNOWN_KEYS)?;
        let (_, nbar): (_, u64) = lines.field("nbar", &KNOWN_KEYS)?;
        let (_, w): (_, BigUint) = lines.field("W", &KNOWN_KEYS)?;
        let (_, delta): (_, BigUint) = lines.field("delta", &KNOWN_KEYS)?;
        let a = (0..n)
            .map(|_| lines.field::<u64>("A", &KNOWN_KEYS).map(|(_, v)| v))
            .collect::<Result<Vec<_>>>()?;
        let ell = (0..n)
            .map(|_| lines.field::<i64>("L", &KNOWN_KEYS).map(|(_, v)| v))
            .collect::<Result<Vec<_>>>()?;
        lines.finish()?;
        let a = CoprimeSequence::from_elements(a, bound)
            .map_err(|e| Error::parse(p_line, e.to_string()))?;
        Ok(PrivateParams {
            modulus,
            a,
            ell,
            w,
            delta,
            nbar,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mode::Mode;
    use crate::params::{initialize, InitConfig};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const REFERENCE: &str = include_str!("../../fixtures/reference_m80_n256.pub");

    #[test]
    fn reference_fixture_parses() {
        let p = PublicParams::parse(REFERENCE).unwrap();
        assert_eq!(p.m(), 80);
        assert_eq!(p.n(), 256);
        assert_eq!(p.c()[0], "394375509141369037703184".parse().unwrap());
        assert_eq!(p.c()[255], "500378758398549449630036".parse().unwrap());
        assert_eq!(p.to_text(), REFERENCE);
    }

    #[test]
    fn short_file_is_rejected() {
        let mut lines: Vec<&str> = REFERENCE.lines().collect();
        lines.pop();
        let text = lines.join("\n") + "\n";
        assert_eq!(
            PublicParams::parse(&text),
            Err(Error::Parse {
                line: 260,
                msg: "unexpected end of file".into()
            })
        );
    }

    #[test]
    fn malformed_files() {
        let cases = [
            ("JUNA-PUB 2\n", 1),
            ("JUNA-PUB 1\nm=7\nn=1\nM=101\nX=5\n", 5),
            ("JUNA-PUB 1\nm=7\nn=1\nM=101\nA=5\n", 5),
            ("JUNA-PUB 1\nm=8\nn=1\nM=101\nC=5\n", 2),
            ("JUNA-PUB 1\nm=7\nn=1\nM=101\nC=+5\n", 5),
            ("JUNA-PUB 1\nm=7\nn=1\nM=101\nC=101\n", 5),
            ("JUNA-PUB 1\nm=7\nn=1\nM=101\nC=5\nC=6\n", 6),
            ("JUNA-PUB 1\nm=7\nn=1\nM=101\nC=5\n\n", 6),
            ("JUNA-PUB 1\r\nm=7\n", 1),
        ];
        for (text, line) in cases {
            match PublicParams::parse(text) {
                Err(Error::Parse { line: got, .. }) => assert_eq!(got, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
        let ok = PublicParams::parse("JUNA-PUB 1\nm=7\nn=1\nM=101\nC=5").unwrap();
        assert_eq!(ok.c(), &[BigUint::from(5u32)]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn generated_params_round_trip(seed in any::<u64>()) {
            let cfg = InitConfig::new(12, 8, 1201, 8).mode(Mode::Test);
            let (public, private) = initialize(&cfg, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            prop_assert_eq!(PublicParams::parse(&public.to_text()).unwrap(), public);
            prop_assert_eq!(PrivateParams::parse(&private.to_text()).unwrap(), private);
        }
    }
}
