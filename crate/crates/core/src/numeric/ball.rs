//! Midpoint–radius real balls over dyadic numbers.
//!
//! Every operation takes a working precision in bits. The midpoint is rounded
//! to that many mantissa bits and the rounding error is folded into the
//! radius, so the enclosure contract `|x - mid| <= rad` survives every step.
//! Radii are kept short (`RAD_BITS`) and always rounded upward.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::decimal::{digits_for_prec, format_sci, parse_decimal};
use super::dyadic::{Dyadic, Rounding};
use crate::error::{Error, Result};

const RAD_BITS: u32 = 30;

fn rad_up(d: Dyadic) -> Dyadic {
    d.round(RAD_BITS, Rounding::Ceil)
}

/// Certified sign of a ball.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum SignVerdict {
    Positive,
    Negative,
    ContainsZero,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    mid: Dyadic,
    rad: Dyadic,
}

pub fn certify_sign(x: &Ball) -> SignVerdict {
    if x.lower().is_positive() {
        SignVerdict::Positive
    } else if x.upper().is_negative() {
        SignVerdict::Negative
    } else {
        SignVerdict::ContainsZero
    }
}

impl Ball {
    /// Build a ball from parts. The radius is taken in absolute value and rounded up.
    pub fn new(mid: Dyadic, rad: Dyadic) -> Self {
        Ball {
            mid,
            rad: rad_up(rad.abs()),
        }
    }

    pub fn exact(mid: Dyadic) -> Self {
        Ball {
            mid,
            rad: Dyadic::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::exact(Dyadic::zero())
    }

    pub fn one() -> Self {
        Self::exact(Dyadic::one())
    }

    pub fn from_i64(n: i64) -> Self {
        Self::exact(Dyadic::from_i64(n))
    }

    pub fn from_int(n: &BigInt) -> Self {
        Self::exact(Dyadic::from_int(n.clone()))
    }

    /// Ball from `[lo, hi]`, exact when the midpoint is representable.
    pub fn from_endpoints(lo: &Dyadic, hi: &Dyadic) -> Self {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let mid = lo.add(hi).mul_2exp(-1);
        let rad = hi.sub(lo).mul_2exp(-1);
        Self::new(mid, rad)
    }

    /// Enclosure of an exact rational; radius 0 when the denominator is a power of two.
    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        if super::decimal::is_dyadic(r) {
            let tz = r.denom().trailing_zeros().unwrap_or(0);
            return Self::exact(Dyadic::new(r.numer().clone(), -(tz as i64)));
        }
        let mid = Dyadic::from_ratio(r.numer(), r.denom(), prec, Rounding::Nearest);
        // half-ulp of the rounded midpoint, widened to a full ulp
        let ulp = mid.ulp(prec);
        Self::new(mid, ulp)
    }

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn rad(&self) -> &Dyadic {
        &self.rad
    }

    pub fn lower(&self) -> Dyadic {
        self.mid.sub(&self.rad)
    }

    pub fn upper(&self) -> Dyadic {
        self.mid.add(&self.rad)
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn contains_zero(&self) -> bool {
        certify_sign(self) == SignVerdict::ContainsZero
    }

    pub fn sign(&self) -> SignVerdict {
        certify_sign(self)
    }

    pub fn contains_dyadic(&self, x: &Dyadic) -> bool {
        self.lower() <= *x && *x <= self.upper()
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        self.lower().to_rational() <= *r && *r <= self.upper().to_rational()
    }

    /// True when `other` lies entirely inside `self`.
    pub fn contains(&self, other: &Ball) -> bool {
        self.lower() <= other.lower() && other.upper() <= self.upper()
    }

    pub fn overlaps(&self, other: &Ball) -> bool {
        !(self.upper() < other.lower() || other.upper() < self.lower())
    }

    /// Upper bound on `|x|`.
    pub fn max_abs(&self) -> Dyadic {
        self.mid.abs().add(&self.rad)
    }

    /// Lower bound on `|x|` (zero when the ball straddles 0).
    pub fn min_abs(&self) -> Dyadic {
        let m = self.mid.abs().sub(&self.rad);
        if m.is_negative() {
            Dyadic::zero()
        } else {
            m
        }
    }

    pub fn add_error(&self, err: &Dyadic) -> Self {
        Self::new(self.mid.clone(), self.rad.add(&err.abs()))
    }

    fn rounded(mid: Dyadic, rad: Dyadic, prec: u32) -> Self {
        let (m, err) = mid.round_err(prec);
        Self::new(m, rad.add(&err))
    }

    /// Shorten the midpoint to `prec` bits.
    pub fn round(&self, prec: u32) -> Self {
        Self::rounded(self.mid.clone(), self.rad.clone(), prec)
    }

    pub fn neg(&self) -> Self {
        Ball {
            mid: self.mid.neg(),
            rad: self.rad.clone(),
        }
    }

    pub fn abs(&self) -> Self {
        if !self.contains_zero() {
            if self.mid.is_negative() {
                return self.neg();
            }
            return self.clone();
        }
        let hi = self.max_abs();
        Self::from_endpoints(&Dyadic::zero(), &hi)
    }

    pub fn mul_2exp(&self, k: i64) -> Self {
        Ball {
            mid: self.mid.mul_2exp(k),
            rad: self.rad.mul_2exp(k),
        }
    }

    pub fn add(&self, other: &Ball, prec: u32) -> Self {
        // a summand far below the other's last kept bit goes straight into the radius
        if !self.mid.is_zero() && !other.mid.is_zero() {
            let (ea, eb) = (self.mid.mag_exp(), other.mid.mag_exp());
            let gap = prec as i64 + 8;
            if ea - eb > gap {
                let r = self.rad.add(&other.rad).add(&other.mid.abs());
                return Self::rounded(self.mid.clone(), r, prec);
            }
            if eb - ea > gap {
                let r = self.rad.add(&other.rad).add(&self.mid.abs());
                return Self::rounded(other.mid.clone(), r, prec);
            }
        }
        Self::rounded(self.mid.add(&other.mid), self.rad.add(&other.rad), prec)
    }

    pub fn sub(&self, other: &Ball, prec: u32) -> Self {
        self.add(&other.neg(), prec)
    }

    pub fn mul(&self, other: &Ball, prec: u32) -> Self {
        let mid = self.mid.mul(&other.mid);
        let rad = self
            .mid
            .abs()
            .mul(&other.rad)
            .add(&other.mid.abs().mul(&self.rad))
            .add(&self.rad.mul(&other.rad));
        Self::rounded(mid, rad_up(rad), prec)
    }

    pub fn sqr(&self, prec: u32) -> Self {
        let mid = self.mid.mul(&self.mid);
        let rad = self
            .mid
            .abs()
            .mul(&self.rad)
            .mul_2exp(1)
            .add(&self.rad.mul(&self.rad));
        Self::rounded(mid, rad_up(rad), prec)
    }

    pub fn mul_int(&self, k: &BigInt, prec: u32) -> Self {
        let kd = Dyadic::from_int(k.abs());
        Self::rounded(self.mid.mul_int(k), self.rad.mul(&kd), prec)
    }

    pub fn mul_rational(&self, r: &BigRational, prec: u32) -> Self {
        self.mul_int(r.numer(), prec + 8)
            .div(&Ball::from_int(r.denom()), prec)
            .expect("positive denominator")
    }

    /// Division; fails with `SingularInput` when the divisor contains zero.
    pub fn div(&self, other: &Ball, prec: u32) -> Result<Self> {
        if other.contains_zero() {
            return Err(Error::SingularInput("division by a ball containing zero".into()));
        }
        let bm = other.mid.abs();
        let gap = bm.sub(&other.rad); // > 0
        let mid = self.mid.div(&other.mid, prec, Rounding::Nearest);
        let ulp = mid.ulp(prec);
        if other.rad.is_zero() && self.rad.is_zero() {
            return Ok(Self::new(mid, ulp));
        }
        // |x/y - am/bm| <= (|am| br + |bm| ar) / (|bm| (|bm| - br))
        let num = self
            .mid
            .abs()
            .mul(&other.rad)
            .add(&bm.mul(&self.rad))
            .round(RAD_BITS + 2, Rounding::Ceil);
        let den = bm.mul(&gap).round(RAD_BITS + 2, Rounding::Floor);
        let prop = num.div(&den, RAD_BITS, Rounding::Ceil);
        Ok(Self::new(mid, prop.add(&ulp)))
    }

    /// Integer division by a small positive constant.
    pub fn div_u64(&self, k: u64, prec: u32) -> Self {
        self.div(&Ball::exact(Dyadic::from_int(BigInt::from(k))), prec)
            .expect("nonzero constant")
    }

    pub fn recip(&self, prec: u32) -> Result<Self> {
        Ball::one().div(self, prec)
    }

    /// Square root of a non-negative quantity. A ball reaching below zero is
    /// clamped to `[0, hi]`; a ball entirely below zero is a domain error.
    pub fn sqrt(&self, prec: u32) -> Result<Self> {
        let lo = self.lower();
        let hi = self.upper();
        if hi.is_negative() {
            return Err(Error::Domain("square root of a negative ball".into()));
        }
        if !lo.is_positive() {
            if hi.is_zero() {
                return Ok(Ball::zero());
            }
            let top = hi.sqrt(prec.min(64).max(RAD_BITS), Rounding::Ceil);
            return Ok(Self::from_endpoints(&Dyadic::zero(), &top));
        }
        let mid = self.mid.sqrt(prec, Rounding::Nearest);
        let ulp = mid.ulp(prec);
        if self.rad.is_zero() {
            let err = if mid.mul(&mid) == self.mid { Dyadic::zero() } else { ulp };
            return Ok(Self::new(mid, err));
        }
        // |sqrt(x) - sqrt(m)| <= r / (sqrt(lo) + sqrt(m))
        let s_lo = lo.sqrt(RAD_BITS + 2, Rounding::Floor);
        let s_m = self.mid.sqrt(RAD_BITS + 2, Rounding::Floor);
        let den = s_lo.add(&s_m);
        let prop = self.rad.div(&den, RAD_BITS, Rounding::Ceil);
        Ok(Self::new(mid, prop.add(&ulp)))
    }

    /// `self^e` by repeated squaring.
    pub fn pow_u64(&self, e: u64, prec: u32) -> Self {
        if e == 0 {
            return Ball::one();
        }
        let guard = prec + 2 * (64 - e.leading_zeros());
        let mut base = self.clone();
        let mut acc: Option<Ball> = None;
        let mut k = e;
        loop {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base, guard),
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            base = base.sqr(guard);
        }
        acc.expect("e > 0").round(prec)
    }

    pub fn union(&self, other: &Ball) -> Self {
        let lo = std::cmp::min(self.lower(), other.lower());
        let hi = std::cmp::max(self.upper(), other.upper());
        Self::from_endpoints(&lo, &hi)
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    /// Render as `mid ± rad [prec b]`. The printed radius also absorbs the
    /// decimal rounding of the midpoint, so the text is itself an enclosure.
    pub fn to_string_prec(&self, prec: u32) -> String {
        let digits = digits_for_prec(prec);
        let mid_s = format_sci(&self.mid, digits, Rounding::Nearest);
        let printed = parse_decimal(&mid_s).expect("own output parses");
        let shift = (self.mid.to_rational() - printed).abs();
        let rad = self.rad.to_rational() + shift;
        let rad_s = if rad.is_zero() {
            "0".to_string()
        } else {
            super::decimal::format_rational_sci(&rad, 3, Rounding::Ceil)
        };
        format!("{mid_s} ± {rad_s} [{prec}b]")
    }

    /// Parse the `mid ± rad [prec b]` form. The result encloses the printed interval.
    pub fn parse(text: &str) -> Result<(Ball, u32)> {
        let bad = |msg: &str| Error::Parse {
            pos: 0,
            msg: format!("ball: {msg}"),
        };
        let (body, prec) = match text.rfind('[') {
            Some(i) => {
                let tail = text[i + 1..].trim();
                let tail = tail
                    .strip_suffix(']')
                    .and_then(|t| t.strip_suffix('b'))
                    .ok_or_else(|| bad("malformed precision annotation"))?;
                let p: u32 = tail.trim().parse().map_err(|_| bad("bad precision"))?;
                if !(2..=1 << 20).contains(&p) {
                    return Err(bad("precision out of range"));
                }
                (&text[..i], p)
            }
            None => return Err(bad("missing precision annotation")),
        };
        let mut parts = body.split('±');
        let mid_s = parts.next().ok_or_else(|| bad("missing midpoint"))?;
        let rad_s = parts.next().ok_or_else(|| bad("missing radius"))?;
        if parts.next().is_some() {
            return Err(bad("extra ±"));
        }
        let mid_q = parse_decimal(mid_s).ok_or_else(|| bad("bad midpoint"))?;
        let rad_q = parse_decimal(rad_s).ok_or_else(|| bad("bad radius"))?;
        if rad_q.is_negative() {
            return Err(bad("negative radius"));
        }
        let work = prec + 16;
        let m = Ball::from_rational(&mid_q, work);
        let r = Dyadic::from_rational(&rad_q, RAD_BITS, Rounding::Ceil);
        Ok((m.add_error(&r), prec))
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prec = (self.mid.bits() as u32).max(53);
        f.write_str(&self.to_string_prec(prec))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn sign_examples() {
        let quarter = Dyadic::pow2(-2);
        assert_eq!(certify_sign(&Ball::new(Dyadic::one(), quarter.clone())), SignVerdict::Positive);
        assert_eq!(certify_sign(&Ball::new(Dyadic::zero(), quarter)), SignVerdict::ContainsZero);
        assert_eq!(
            certify_sign(&Ball::new(Dyadic::from_i64(-3), Dyadic::one())),
            SignVerdict::Negative
        );
    }

    #[test]
    fn dyadic_rationals_are_exact() {
        assert!(Ball::from_rational(&q(3, 8), 10).is_exact());
        let third = Ball::from_rational(&q(1, 3), 64);
        assert!(!third.is_exact());
        assert!(third.contains_rational(&q(1, 3)));
    }

    #[test]
    fn arithmetic_encloses_exact_results() {
        let p = 80;
        let a = Ball::from_rational(&q(1, 3), p);
        let b = Ball::from_rational(&q(2, 7), p);
        assert!(a.add(&b, p).contains_rational(&q(13, 21)));
        assert!(a.sub(&b, p).contains_rational(&q(1, 21)));
        assert!(a.mul(&b, p).contains_rational(&q(2, 21)));
        assert!(a.div(&b, p).unwrap().contains_rational(&q(7, 6)));
        assert!(a.sqr(p).contains_rational(&q(1, 9)));
        assert!(b.pow_u64(5, p).contains_rational(&q(32, 16807)));
    }

    #[test]
    fn divide_by_zero_ball_is_singular() {
        let z = Ball::new(Dyadic::zero(), Dyadic::pow2(-4));
        assert!(matches!(Ball::one().div(&z, 64), Err(Error::SingularInput(_))));
    }

    #[test]
    fn sqrt_encloses_and_clamps() {
        let two = Ball::from_i64(2);
        let r = two.sqrt(128).unwrap();
        let sq = r.sqr(256);
        assert!(sq.contains_dyadic(&Dyadic::from_i64(2)));
        assert!(r.rad().log2_approx() < -126.0);
        let around_zero = Ball::new(Dyadic::zero(), Dyadic::pow2(-20));
        let s = around_zero.sqrt(64).unwrap();
        assert!(s.contains_dyadic(&Dyadic::zero()));
        assert!(s.contains_dyadic(&Dyadic::pow2(-10)));
        assert!(Ball::from_i64(-1).sqrt(64).is_err());
    }

    #[test]
    fn far_apart_addends_fold_into_radius() {
        let big = Ball::one();
        let tiny = Ball::exact(Dyadic::pow2(-100_000));
        let s = big.add(&tiny, 64);
        assert!(s.contains_dyadic(&Dyadic::one().add(&Dyadic::pow2(-100_000))));
        assert!(s.mid().bits() <= 64);
    }

    #[test]
    fn printed_form_round_trips_as_enclosure() {
        let x = Ball::from_rational(&q(1, 3), 128);
        let s = x.to_string_prec(128);
        assert!(s.ends_with("[128b]"), "{s}");
        let (y, p) = Ball::parse(&s).unwrap();
        assert_eq!(p, 128);
        assert!(y.contains(&x));
        assert!(Ball::parse("1 ± 2").is_err());
        assert!(Ball::parse("1 ± -2 [64b]").is_err());
    }
}
