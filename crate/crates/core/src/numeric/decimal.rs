//! Decimal scientific notation with directed rounding, and exact decimal parsing.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use super::dyadic::{Dyadic, Rounding};

/// Number of significant decimal digits that faithfully shows `prec` bits.
pub fn digits_for_prec(prec: u32) -> usize {
    ((prec as f64) * std::f64::consts::LOG10_2).ceil() as usize + 1
}

fn pow10(k: u64) -> BigInt {
    BigInt::from(10u32).pow(k)
}

fn scale_by_pow10(r: &BigRational, k: i64) -> BigRational {
    if k >= 0 {
        r * BigRational::from_integer(pow10(k as u64))
    } else {
        r / BigRational::from_integer(pow10((-k) as u64))
    }
}

fn approx_log10(r: &BigRational) -> i64 {
    let n = r.numer().abs();
    let d = r.denom();
    let l2 = n.bits() as f64 - d.bits() as f64;
    (l2 * std::f64::consts::LOG10_2).floor() as i64
}

/// Format `r` as `d.ddd…e±E` with exactly `digits` significant digits.
pub fn format_rational_sci(r: &BigRational, digits: usize, mode: Rounding) -> String {
    assert!(digits >= 1);
    if r.is_zero() {
        return "0".to_string();
    }
    let negative = r.is_negative();
    let mag = r.abs();
    // rounding the magnitude: floor on a negative value means rounding the magnitude up
    let mag_mode = match (mode, negative) {
        (Rounding::Floor, true) => Rounding::Ceil,
        (Rounding::Ceil, true) => Rounding::Floor,
        (m, _) => m,
    };
    let lower = pow10(digits as u64 - 1);
    let upper = pow10(digits as u64);
    let mut e10 = approx_log10(&mag);
    let mut guard = 0;
    let (int, e10) = loop {
        let scaled = scale_by_pow10(&mag, digits as i64 - 1 - e10);
        let int = match mag_mode {
            Rounding::Floor => scaled.floor().to_integer(),
            Rounding::Ceil => scaled.ceil().to_integer(),
            Rounding::Nearest => scaled.round().to_integer(),
        };
        guard += 1;
        if guard > 8 {
            break (int, e10);
        }
        if int >= upper {
            e10 += 1;
        } else if int < lower {
            e10 -= 1;
        } else {
            break (int, e10);
        }
    };
    let s = int.to_string();
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    out.push_str(&s[..1]);
    if s.len() > 1 {
        out.push('.');
        out.push_str(&s[1..]);
    }
    out.push('e');
    out.push_str(&e10.to_string());
    out
}

pub fn format_sci(x: &Dyadic, digits: usize, mode: Rounding) -> String {
    format_rational_sci(&x.to_rational(), digits, mode)
}

/// Parse `[-]digits[.digits][e[+-]digits]` into an exact rational.
pub fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() || s.len() > 100_000 {
        return None;
    }
    let (neg, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (mant, exp) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], Some(&body[i + 1..])),
        None => (body, None),
    };
    let (int_part, frac_part) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let m: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    let mut e: i64 = match exp {
        Some(t) => {
            let t = t.strip_prefix('+').unwrap_or(t);
            if t.is_empty() || t.len() > 9 {
                return None;
            }
            let (sign, digits) = match t.strip_prefix('-') {
                Some(rest) => (-1, rest),
                None => (1, t),
            };
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            sign * digits.parse::<i64>().ok()?
        }
        None => 0,
    };
    e -= frac_part.len() as i64;
    if e.abs() > 100_000 {
        return None;
    }
    let mut r = scale_by_pow10(&BigRational::from_integer(m), e);
    if neg {
        r = -r;
    }
    Some(r)
}

/// Exact rational `r` rounded to a dyadic with directed rounding.
pub fn rational_to_dyadic(r: &BigRational, prec: u32, mode: Rounding) -> Dyadic {
    Dyadic::from_ratio(r.numer(), r.denom(), prec, mode)
}

/// True when `r` has a power-of-two denominator.
pub fn is_dyadic(r: &BigRational) -> bool {
    let d = r.denom();
    let tz = d.trailing_zeros().unwrap_or(0);
    (d >> tz).is_one()
}

/// `floor(log10(n))` for a positive integer, exactly.
pub fn ilog10(n: &BigInt) -> u64 {
    assert!(n.is_positive());
    let mut k = ((n.bits() - 1) as f64 * std::f64::consts::LOG10_2).floor() as u64;
    while pow10(k + 1) <= *n {
        k += 1;
    }
    while k > 0 && pow10(k) > *n {
        k -= 1;
    }
    k
}
