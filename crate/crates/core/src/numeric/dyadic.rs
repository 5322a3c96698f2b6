//! Exact dyadic numbers `m * 2^e` with directed rounding to a mantissa width.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Direction used when a result must be shortened to a mantissa width.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    /// Toward negative infinity.
    Floor,
    /// Toward positive infinity.
    Ceil,
    /// To nearest; the error is at most half an ulp.
    Nearest,
}

/// `mant * 2^exp`, kept with an odd mantissa (or zero with `exp == 0`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

/// Floor of `x / 2^s` for `s >= 0`.
pub(crate) fn shr_floor(x: &BigInt, s: u64) -> BigInt {
    if s == 0 {
        return x.clone();
    }
    if x.sign() != Sign::Minus {
        return x >> s;
    }
    // -(ceil(|x| / 2^s))
    let mag = x.magnitude();
    let q: num_bigint::BigUint = mag >> s;
    let exact = (&q << s) == *mag;
    let q = BigInt::from_biguint(Sign::Plus, q);
    if exact {
        -q
    } else {
        -(q + BigInt::one())
    }
}

fn shr_round(x: &BigInt, s: u64, mode: Rounding) -> BigInt {
    match mode {
        Rounding::Floor => shr_floor(x, s),
        Rounding::Ceil => -shr_floor(&-x, s),
        Rounding::Nearest => {
            if s == 0 {
                return x.clone();
            }
            // floor((x + 2^(s-1)) / 2^s)
            let half = BigInt::one() << (s - 1);
            shr_floor(&(x + half), s)
        }
    }
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Self::zero();
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        if tz == 0 {
            Dyadic { mant, exp }
        } else {
            Dyadic {
                mant: mant >> tz,
                exp: exp + tz as i64,
            }
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: 0,
        }
    }

    pub fn from_int(n: BigInt) -> Self {
        Self::new(n, 0)
    }

    pub fn from_i64(n: i64) -> Self {
        Self::new(BigInt::from(n), 0)
    }

    /// `2^e`
    pub fn pow2(e: i64) -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: e,
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.mant.sign() == Sign::Minus
    }

    pub fn is_positive(&self) -> bool {
        self.mant.sign() == Sign::Plus
    }

    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Smallest `e` with `|self| < 2^e`; `i64::MIN` for zero.
    pub fn mag_exp(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exp + self.mant.bits() as i64
        }
    }

    /// `2^(mag_exp - prec)`, or zero for zero.
    pub fn ulp(&self, prec: u32) -> Self {
        if self.is_zero() {
            Self::zero()
        } else {
            Self::pow2(self.mag_exp() - prec as i64)
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    pub fn mul_2exp(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        Self::new(a + b, e)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Dyadic {
            mant: &self.mant * &other.mant,
            exp: self.exp + other.exp,
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        Self::new(&self.mant * k, self.exp)
    }

    /// Shorten to at most `prec` mantissa bits.
    pub fn round(&self, prec: u32, mode: Rounding) -> Self {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let s = bits - prec as u64;
        Self::new(shr_round(&self.mant, s, mode), self.exp + s as i64)
    }

    /// Nearest rounding together with an upper bound on the rounding error.
    pub fn round_err(&self, prec: u32) -> (Self, Self) {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return (self.clone(), Self::zero());
        }
        let s = bits - prec as u64;
        let r = Self::new(shr_round(&self.mant, s, Rounding::Nearest), self.exp + s as i64);
        (r, Self::pow2(self.exp + s as i64 - 1))
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            shr_floor(&self.mant, (-self.exp) as u64)
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(self.neg().floor())
    }

    /// `num / den` rounded to `prec` bits. `den` must be nonzero.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32, mode: Rounding) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let (num, den) = if den.is_negative() {
            (-num, -den)
        } else {
            (num.clone(), den.clone())
        };
        // choose k with num * 2^k / den having at least prec + 2 bits
        let k = prec as i64 + 2 + den.bits() as i64 - num.bits() as i64;
        let (n, d) = if k >= 0 {
            (num << k as u64, den)
        } else {
            (num, den << (-k) as u64)
        };
        let (q, r) = n.div_mod_floor(&d);
        // q = floor(n/d); the true value lies in [q, q+1) scaled by 2^-k
        let exact = r.is_zero();
        let base = Self::new(q.clone(), -k);
        let rounded = if exact {
            base
        } else {
            match mode {
                Rounding::Floor => base,
                Rounding::Ceil => Self::new(q + 1, -k),
                Rounding::Nearest => {
                    if (&r << 1u32) >= d {
                        Self::new(q + 1, -k)
                    } else {
                        base
                    }
                }
            }
        };
        rounded.round(prec, mode)
    }

    pub fn from_rational(r: &BigRational, prec: u32, mode: Rounding) -> Self {
        Self::from_ratio(r.numer(), r.denom(), prec, mode)
    }

    /// Quotient of two dyadics rounded to `prec` bits.
    pub fn div(&self, other: &Self, prec: u32, mode: Rounding) -> Self {
        assert!(!other.is_zero(), "division by zero");
        // (ma 2^ea) / (mb 2^eb) = (ma / mb) 2^(ea - eb)
        let q = Self::from_ratio(&self.mant, &other.mant, prec, mode);
        q.mul_2exp(self.exp - other.exp)
    }

    /// Square root of a non-negative dyadic rounded to `prec` bits.
    pub fn sqrt(&self, prec: u32, mode: Rounding) -> Self {
        assert!(!self.is_negative(), "sqrt of negative dyadic");
        if self.is_zero() {
            return Self::zero();
        }
        // scale so mantissa has ~2*prec + 4 bits and exponent is even
        let mut shift = 2 * prec as i64 + 4 - self.mant.bits() as i64;
        if shift < 0 {
            shift = 0;
        }
        if (self.exp - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = &self.mant << shift as u64;
        let e = self.exp - shift;
        let s = m.sqrt();
        let exact = &s * &s == m;
        let root = if exact {
            s
        } else {
            match mode {
                Rounding::Floor => s,
                Rounding::Ceil => s + 1,
                Rounding::Nearest => {
                    // compare m with (s + 1/2)^2 = s^2 + s + 1/4
                    let t = &s * &s + &s;
                    if m > t {
                        s + 1
                    } else {
                        s
                    }
                }
            }
        };
        Self::new(root, e / 2).round(prec, mode)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Nearest `f64`, saturating to infinities and flushing tiny values to zero.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        let (m, e) = if bits > 60 {
            let s = bits - 60;
            (shr_floor(&self.mant, s), self.exp + s as i64)
        } else {
            (self.mant.clone(), self.exp)
        };
        let mf = m.to_f64().unwrap_or(0.0);
        if e > 2000 {
            return mf.signum() * f64::INFINITY;
        }
        if e < -2200 {
            return 0.0;
        }
        mf * (e as f64).exp2()
    }

    /// `log2 |self|` as an approximate float; `-inf` for zero.
    pub fn log2_approx(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.mant.bits();
        let (m, e) = if bits > 60 {
            let s = bits - 60;
            (shr_floor(&self.mant.abs(), s), self.exp + s as i64)
        } else {
            (self.mant.abs(), self.exp)
        };
        m.to_f64().unwrap_or(1.0).log2() + e as f64
    }

    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        self.to_rational().cmp(r)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // same nonzero sign: compare magnitudes, short-circuiting on scale
        let (ma, mb) = (self.mag_exp(), other.mag_exp());
        let mag_order = if ma != mb {
            ma.cmp(&mb)
        } else {
            let e = self.exp.min(other.exp);
            let a = self.mant.magnitude() << (self.exp - e) as u64;
            let b = other.mant.magnitude() << (other.exp - e) as u64;
            a.cmp(&b)
        };
        if sa > 0 {
            mag_order
        } else {
            mag_order.reverse()
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::decimal::format_sci(self, 20, Rounding::Nearest))
    }
}

impl From<i64> for Dyadic {
    fn from(n: i64) -> Self {
        Self::from_i64(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(m: i64, e: i64) -> Dyadic {
        Dyadic::new(BigInt::from(m), e)
    }

    #[test]
    fn normalizes_trailing_zeros() {
        let x = d(12, 0);
        assert_eq!(x.mantissa(), &BigInt::from(3));
        assert_eq!(x.exponent(), 2);
        assert_eq!(d(0, 17), Dyadic::zero());
    }

    #[test]
    fn shr_floor_negative() {
        assert_eq!(shr_floor(&BigInt::from(-5), 1), BigInt::from(-3));
        assert_eq!(shr_floor(&BigInt::from(-4), 1), BigInt::from(-2));
        assert_eq!(shr_floor(&BigInt::from(5), 1), BigInt::from(2));
    }

    #[test]
    fn directed_rounding_brackets() {
        let third = Dyadic::from_ratio(&BigInt::from(1), &BigInt::from(3), 64, Rounding::Floor);
        let third_up = Dyadic::from_ratio(&BigInt::from(1), &BigInt::from(3), 64, Rounding::Ceil);
        let r = BigRational::new(1.into(), 3.into());
        assert!(third.to_rational() < r);
        assert!(third_up.to_rational() > r);
        assert!(third.bits() <= 64 && third_up.bits() <= 64);
        let neg = Dyadic::from_ratio(&BigInt::from(-1), &BigInt::from(3), 64, Rounding::Floor);
        assert!(neg.to_rational() < -r);
    }

    #[test]
    fn sqrt_two_brackets() {
        let two = d(2, 0);
        let lo = two.sqrt(100, Rounding::Floor);
        let hi = two.sqrt(100, Rounding::Ceil);
        assert!(lo.mul(&lo) < two);
        assert!(hi.mul(&hi) > two);
        assert_eq!(d(9, 4).sqrt(10, Rounding::Nearest), d(3, 2));
    }

    #[test]
    fn ordering_across_scales() {
        assert!(d(1, -1000) < d(1, 0));
        assert!(d(-1, 0) < d(-1, -1000));
        assert!(d(3, 0) > d(5, -1));
        assert_eq!(d(4, 0).cmp(&d(1, 2)), Ordering::Equal);
    }

    #[test]
    fn floor_and_ceil() {
        assert_eq!(d(-3, -1).floor(), BigInt::from(-2));
        assert_eq!(d(-3, -1).ceil(), BigInt::from(-1));
        assert_eq!(d(7, 3).floor(), BigInt::from(56));
    }
}
