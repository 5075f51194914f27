use num_rational::Ratio;

use crate::numtheory::ceil_lg_u64;

/// Knapsack density `n·⌈lg n⌉ / m` as an exact rational.
///
/// Each exponent of the product is at most n, so carries `⌈lg n⌉` bits,
/// against an m-bit target. Densities well above 1 are out of reach of the
/// low-density lattice attacks.
pub fn assp_density(n: u64, m: u64) -> Ratio<u64> {
    assert!(n >= 2 && m >= 2, "density needs n, m >= 2");
    Ratio::new(n * u64::from(ceil_lg_u64(n)), m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values() {
        assert_eq!(assp_density(256, 80), Ratio::new(128, 5));
        assert_eq!(
            *assp_density(256, 80).numer() as f64 / *assp_density(256, 80).denom() as f64,
            25.6
        );
        for n in [80u64, 96, 128, 1000] {
            assert_eq!(
                assp_density(n, n),
                Ratio::from_integer(u64::from(ceil_lg_u64(n)))
            );
        }
        for (n, m) in [(96u64, 80u64), (256, 80), (4096, 232), (81, 80)] {
            assert!(assp_density(n, m) > Ratio::from_integer(u64::from(ceil_lg_u64(n))));
        }
    }
}
