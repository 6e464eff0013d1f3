//! Exact binomial arithmetic.

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// `C(n, k)` as an arbitrary-precision integer; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, k)` in 64 bits. Exact for `n <= 62`; panics on overflow otherwise.
pub fn binomial_u64(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc * (n as u128 - i) / (i + 1);
    }
    u64::try_from(acc).expect("binomial overflows u64")
}

/// `C(n, n/2 + l) / 2^n` exactly. Requires `n` even and positive and `|l| <= n/2`.
pub fn mid_binomial_ratio(n: u64, l: i64) -> Result<BigRational> {
    if n == 0 || n % 2 == 1 {
        return Err(Error::InvalidParameter(format!("n must be even and positive, got {n}")));
    }
    let half = (n / 2) as i64;
    if l.abs() > half {
        return Err(Error::InvalidParameter(format!("|l| = {} exceeds n/2 = {half}", l.abs())));
    }
    let k = (half + l) as u64;
    let num = BigInt::from(binomial(n, k));
    let den = BigInt::one() << n as usize;
    Ok(BigRational::new(num, den))
}

/// Whether `|l| <= 0.1 sqrt(n)`, decided exactly as `100 l^2 <= n`.
pub fn central_window_in_range(n: u64, l: i64) -> bool {
    (l as i128) * (l as i128) * 100 <= n as i128
}

/// Whether `1/(4 sqrt n) <= C(n, n/2 + l)/2^n <= 1/sqrt n`, decided in exact
/// arithmetic by squaring: the bounds become `16 n r^2 >= 1` and `n r^2 <= 1`.
pub fn central_window_holds(n: u64, l: i64) -> Result<bool> {
    let r = mid_binomial_ratio(n, l)?;
    let r2 = &r * &r;
    let n_big = BigRational::from_integer(BigInt::from(n));
    let lower = (&n_big * BigRational::from_integer(BigInt::from(16))) * &r2 >= BigRational::one();
    let upper = &n_big * &r2 <= BigRational::one();
    Ok(lower && upper)
}

/// Fraction of `{0,1}^n` whose weight lies in the real interval `[lo, hi]`.
pub fn level_band_measure(n: u32, lo: f64, hi: f64) -> Ratio<u64> {
    assert!(n <= 62, "level measure limited to n <= 62");
    let count: u64 = (0..=n)
        .filter(|&w| (w as f64) >= lo && (w as f64) <= hi)
        .map(|w| binomial_u64(n as u64, w as u64))
        .sum();
    Ratio::new(count, 1u64 << n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(4, 2), BigUint::from(6u32));
        assert_eq!(binomial(5, 7), BigUint::zero());
        assert_eq!(binomial_u64(62, 31), 465_428_353_255_261_088);
        assert_eq!(binomial(62, 31), BigUint::from(465_428_353_255_261_088u64));
    }

    #[test]
    fn mid_ratio_examples() {
        let r = mid_binomial_ratio(4, 0).unwrap();
        assert_eq!(r, BigRational::new(6.into(), 16.into()));
        let r = mid_binomial_ratio(100, 0).unwrap().to_f64().unwrap();
        assert!((r - 0.0796).abs() < 1e-4 && (0.025..=0.1).contains(&r));
        assert_eq!(mid_binomial_ratio(4, 2).unwrap(), BigRational::new(1.into(), 16.into()));
        assert!(!central_window_in_range(4, 2));
        assert!(mid_binomial_ratio(4, 3).is_err());
        assert!(mid_binomial_ratio(5, 0).is_err());
    }

    #[test]
    fn central_window_small_n() {
        assert!(central_window_holds(4, 0).unwrap());
        assert!(central_window_holds(256, 1).unwrap());
        // Far from the middle the lower bound fails.
        assert!(!central_window_holds(16, 8).unwrap());
    }

    #[test]
    fn band_measure() {
        assert_eq!(level_band_measure(4, 2.0, 2.0), Ratio::new(6, 16));
        assert_eq!(level_band_measure(4, 1.5, 2.5), Ratio::new(6, 16));
        assert_eq!(level_band_measure(3, 1.55, 1.6), Ratio::new(0, 8));
    }
}
