//! Exact rational helpers shared by every module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

/// Largest denominator produced when snapping solver output to rationals.
pub const MAX_DENOMINATOR: u64 = 1_000_000_000;
/// Absolute tolerance for constraint feasibility of float solutions.
pub const FEAS_TOL: f64 = 1e-7;
/// Tolerance used for optimality and bound comparisons.
pub const OPT_TOL: f64 = 1e-6;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Continued-fraction approximation of `x` with denominator at most `max_den`.
pub fn from_f64(x: f64, max_den: u64) -> Rational {
    near_f64(x, 0.0, max_den)
}

/// First continued-fraction convergent within `tol` of `x`, or the last one
/// with denominator at most `max_den`.
pub fn near_f64(x: f64, tol: f64, max_den: u64) -> Rational {
    if !x.is_finite() {
        return Rational::zero();
    }
    let neg = x < 0.0;
    let mut rest = x.abs();
    let (mut h0, mut h1): (i128, i128) = (0, 1);
    let (mut k0, mut k1): (i128, i128) = (1, 0);
    for _ in 0..64 {
        let a = rest.floor();
        if a > 1e18 {
            break;
        }
        let a = a as i128;
        let h2 = a * h1 + h0;
        let k2 = a * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (x.abs() - h1 as f64 / k1 as f64).abs() <= tol {
            break;
        }
        let f = rest - a as f64;
        if f < 1e-15 {
            break;
        }
        rest = 1.0 / f;
    }
    if k1 == 0 {
        return Rational::zero();
    }
    let r = Rational::new(BigInt::from(h1), BigInt::from(k1));
    if neg {
        -r
    } else {
        r
    }
}

/// Parses `"12"`, `"-0.125"`, `"3e-2"` or `"1/3"` exactly.
pub fn parse_decimal(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_decimal(n)?;
        let d = parse_decimal(d)?;
        if d.is_zero() {
            return None;
        }
        return Some(n / d);
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    if ip.is_empty() && fp.is_empty() {
        return None;
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: String = format!("{ip}{fp}");
    let n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    let scale = exp - fp.len() as i32;
    let ten = BigInt::from(10);
    let r = if scale >= 0 {
        Rational::from_integer(n * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(n, num_traits::pow(ten, (-scale) as usize))
    };
    Some(if neg { -r } else { r })
}

/// Exact decimal text when the denominator divides a power of ten, else `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        return r.numer().to_string();
    }
    let mut d = r.denom().clone();
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    let (mut p2, mut p5) = (0usize, 0usize);
    while d.is_even() {
        d /= &two;
        p2 += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        p5 += 1;
    }
    if !d.is_one() {
        return format!("{}/{}", r.numer(), r.denom());
    }
    let places = p2.max(p5);
    let scaled = (r * Rational::from_integer(num_traits::pow(BigInt::from(10), places))).to_integer();
    let neg = scaled.is_negative();
    let digits = scaled.abs().to_string();
    let digits = format!("{digits:0>width$}", width = places + 1);
    let (ip, fp) = digits.split_at(digits.len() - places);
    format!("{}{}.{}", if neg { "-" } else { "" }, ip, fp)
}

pub fn ceil(r: &Rational) -> BigInt {
    r.ceil().to_integer()
}

/// Ceiling that ignores an overshoot of at most `tol` above an integer.
pub fn ceil_tol(x: f64, tol: f64) -> f64 {
    (x - tol).ceil()
}

pub fn max_rat(a: Rational, b: Rational) -> Rational {
    if a >= b {
        a
    } else {
        b
    }
}

pub fn min_rat(a: Rational, b: Rational) -> Rational {
    if a <= b {
        a
    } else {
        b
    }
}
