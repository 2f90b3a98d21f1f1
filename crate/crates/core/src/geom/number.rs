//! Exact scalar type used by all geometry, plus parsing and formatting.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn half() -> Rational {
    ratio(1, 2)
}

/// Parses `a`, `a/b`, or a finite decimal such as `-1.25`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !whole_digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let digits = format!("{}{}", whole_digits, frac);
        let mut n: BigInt = digits.parse().ok()?;
        if negative {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10), frac.len());
        return Some(Rational::new(n, d));
    }
    s.parse::<BigInt>().ok().map(Rational::from_integer)
}

pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact conversion of a finite float.
pub fn from_f64(v: f64) -> Rational {
    Rational::from_float(v).unwrap_or_else(Rational::zero)
}

/// Nearest rational with denominator at most `max_den` if it lies within
/// `tol` of `v`; otherwise the exact binary value of `v`.
pub fn snap_f64(v: f64, max_den: i64, tol: f64) -> Rational {
    if !v.is_finite() {
        return Rational::zero();
    }
    // continued fraction convergents
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut x = v;
    for _ in 0..64 {
        let a = x.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        (h0, h1) = (h1, h2);
        (k0, k1) = (k1, k2);
        if ((h1 as f64) / (k1 as f64) - v).abs() <= tol {
            return Rational::new(BigInt::from(h1), BigInt::from(k1));
        }
        let f = x - a;
        if f.abs() < 1e-300 {
            break;
        }
        x = 1.0 / f;
    }
    from_f64(v)
}

pub fn ceil(r: &Rational) -> BigInt {
    r.ceil().to_integer()
}

/// Orders two rationals, consulting their float images first.
#[inline]
pub fn cmp_filtered(a: &Rational, fa: f64, b: &Rational, fb: f64) -> Ordering {
    let diff = fa - fb;
    let scale = fa.abs().max(fb.abs());
    if diff.is_finite() && diff.abs() > 1e-12 * scale + 1e-300 {
        if diff > 0.0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    } else {
        a.cmp(b)
    }
}

/// Rounds to the nearest multiple of `2^-bits`.
pub fn round_dyadic(r: &Rational, bits: u32) -> Rational {
    let scale = Rational::from_integer(BigInt::one() << bits);
    let scaled = r * &scale;
    scaled.round() / scale
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_notations() {
        assert_eq!(parse_rational("3"), Some(int(3)));
        assert_eq!(parse_rational("-3/6"), Some(ratio(-1, 2)));
        assert_eq!(parse_rational("1.25"), Some(ratio(5, 4)));
        assert_eq!(parse_rational("-0.5"), Some(ratio(-1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
        assert_eq!(parse_rational("1."), None);
    }

    #[test]
    fn format_round_trips() {
        for s in ["0", "7", "-2/3", "15/4"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
    }

    #[test]
    fn snapping_recovers_small_fractions() {
        assert_eq!(snap_f64(0.333333333333, 1000, 1e-9), ratio(1, 3));
        assert_eq!(snap_f64(0.5 + 1e-12, 1000, 1e-9), ratio(1, 2));
        assert_eq!(snap_f64(2.0, 1000, 1e-9), int(2));
        assert_eq!(snap_f64(-1.5, 1000, 1e-9), ratio(-3, 2));
    }

    #[test]
    fn dyadic_rounding() {
        assert_eq!(round_dyadic(&ratio(1, 3), 2), ratio(1, 4));
        assert_eq!(round_dyadic(&ratio(5, 7), 0), int(1));
    }
}
