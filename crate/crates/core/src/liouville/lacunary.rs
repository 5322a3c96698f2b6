use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::numeric::ball::Ball;
use crate::numeric::dyadic::{Dyadic, Rounding};

/// Truncations whose denominator would exceed this many bits are refused.
pub const MAX_TRUNCATION_BITS: u64 = 1 << 25;

/// `sum_{k>=1} a_k b^(-k!)` with a purely periodic digit rule `a_k = digits[(k-1) % len]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LacunaryNumber {
    base: u32,
    digits: Vec<u32>,
}

/// Partial sum `p / q` with `q = base^(m!)`, unreduced, and a bound on what is left.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Truncation {
    pub depth: u32,
    pub p: BigInt,
    pub q: BigInt,
    pub tail_bound: BigRational,
}

impl Truncation {
    pub fn value(&self) -> BigRational {
        BigRational::new(self.p.clone(), self.q.clone())
    }
}

pub(crate) fn factorial(m: u32) -> Option<u64> {
    (1..=m as u64).try_fold(1u64, |acc, k| acc.checked_mul(k))
}

fn minimal_period(d: &[u32]) -> usize {
    (1..=d.len())
        .find(|&p| d.len() % p == 0 && (p..d.len()).all(|i| d[i] == d[i - p]))
        .unwrap_or(d.len())
}

impl LacunaryNumber {
    pub fn new(base: u32, digits: Vec<u32>) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidArgument("base must be at least 2".into()));
        }
        if digits.is_empty() || digits.iter().all(|&d| d == 0) {
            return Err(Error::InvalidArgument("digit block must contain a nonzero digit".into()));
        }
        if let Some(d) = digits.iter().find(|&&d| d >= base) {
            return Err(Error::InvalidArgument(format!("digit {d} is not below base {base}")));
        }
        let p = minimal_period(&digits);
        let mut digits = digits;
        digits.truncate(p);
        Ok(LacunaryNumber { base, digits })
    }

    /// The classical constant `sum b^(-k!)`.
    pub fn liouville(base: u32) -> Result<Self> {
        Self::new(base, vec![1])
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn is_classical(&self) -> bool {
        self.digits == [1]
    }

    /// `a_k` for `k >= 1`.
    pub fn digit(&self, k: u32) -> u32 {
        self.digits[(k as usize - 1) % self.digits.len()]
    }

    pub fn max_digit(&self) -> u32 {
        *self.digits.iter().max().expect("nonempty")
    }

    fn base_bits_floor(&self) -> u64 {
        31 - self.base.leading_zeros() as u64
    }

    fn base_bits_ceil(&self) -> u64 {
        32 - (self.base - 1).leading_zeros() as u64
    }

    /// Upper bound on the bit size of `base^(m!)`, or `None` past the supported range.
    pub fn denominator_bits(&self, m: u32) -> Option<u64> {
        factorial(m)?.checked_mul(self.base_bits_ceil())
    }

    fn check_depth(&self, m: u32) -> Result<u64> {
        let f = factorial(m + 1).ok_or_else(|| Error::InvalidArgument(format!("depth {m} is too large")))?;
        match self.denominator_bits(m + 1) {
            Some(b) if b <= MAX_TRUNCATION_BITS => Ok(f),
            _ => Err(Error::InvalidArgument(format!(
                "truncation at depth {m} is too large to represent"
            ))),
        }
    }

    /// Exact `(p, q)` with `p / q = sum_{k<=m} a_k b^(-k!)` and `q = b^(m!)`.
    pub fn partial_sum(&self, m: u32) -> Result<(BigInt, BigInt)> {
        self.check_depth(m)?;
        let b = BigInt::from(self.base);
        let mut p = BigInt::zero();
        let mut prev = 1u64;
        for k in 1..=m {
            let f = factorial(k).expect("checked");
            p = p * Pow::pow(&b, f - prev) + BigInt::from(self.digit(k));
            prev = f;
        }
        let q = if m == 0 { BigInt::one() } else { Pow::pow(&b, prev) };
        Ok((p, q))
    }

    /// Exact partial sum up to `k = m` and the bound `2 * max_digit * base^(-(m+1)!)`.
    pub fn truncate(&self, m: u32) -> Result<Truncation> {
        let f_next = self.check_depth(m)?;
        let (p, q) = self.partial_sum(m)?;
        let tail_bound = BigRational::new(
            BigInt::from(2u64 * self.max_digit() as u64),
            Pow::pow(&BigInt::from(self.base), f_next),
        );
        Ok(Truncation {
            depth: m,
            p,
            q,
            tail_bound,
        })
    }

    /// Upper bound `2 * max_digit * base^(-(m+1)!)` as a dyadic, without forming the power.
    pub fn tail_bound_dyadic(&self, m: u32) -> Option<Dyadic> {
        let f = factorial(m + 1)?;
        let e = f.checked_mul(self.base_bits_floor())? as i64;
        let a = Dyadic::from_i64(2 * self.max_digit() as i64);
        Some(a.mul_2exp(-e))
    }

    /// Smallest depth whose tail bound is at most `2^-bits`.
    pub fn depth_for_bits(&self, bits: u64) -> u32 {
        let extra = 2 + 64 - (self.max_digit() as u64).leading_zeros() as u64;
        let mut m = 0u32;
        while factorial(m + 1).map_or(false, |f| f.saturating_mul(self.base_bits_floor()) < bits + extra) {
            m += 1;
        }
        m
    }

    /// Enclosure with radius at most `2^-prec`.
    pub fn to_ball(&self, prec: u32) -> Result<Ball> {
        let m = self.depth_for_bits(prec as u64 + 2);
        let (p, q) = self.partial_sum(m)?;
        let b = self.tail_bound_dyadic(m).expect("depth is representable");
        Ok(Ball::from_rational(&BigRational::new(p, q), prec + 4).add_error(&b))
    }

    /// Enclosure of `sum_{k>m} a_k b^(-k!)` with relative precision about `2^-prec`.
    pub fn tail_ball(&self, m: u32, prec: u32) -> Result<Ball> {
        let p = prec + 16;
        let inv_b = Ball::from_rational(&BigRational::new(BigInt::one(), BigInt::from(self.base)), p);
        let mut acc = Ball::zero();
        let mut k = m + 1;
        loop {
            let f = factorial(k).ok_or_else(|| Error::InvalidArgument("tail depth overflow".into()))?;
            let a = self.digit(k);
            if a != 0 {
                let term = inv_b.pow_u64(f, p).mul(&Ball::from_i64(a as i64), p);
                acc = acc.add(&term, p);
            }
            if !acc.mid().is_zero() {
                let bound = self
                    .tail_bound_dyadic(k)
                    .ok_or_else(|| Error::InvalidArgument("tail depth overflow".into()))?;
                let lo = acc.lower();
                if lo.is_positive() {
                    let limit = lo.mul_2exp(-(prec as i64) - 4);
                    if bound <= limit {
                        let b = bound.round(30, Rounding::Ceil);
                        return Ok(acc.add_error(&b).round(p));
                    }
                }
            }
            k += 1;
        }
    }
}

impl fmt::Display for LacunaryNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_classical() {
            write!(f, "liouville:{}", self.base)
        } else {
            let d: Vec<String> = self.digits.iter().map(|d| d.to_string()).collect();
            write!(f, "lacunary:{}:{}", self.base, d.join(","))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn truncations() {
        let l = LacunaryNumber::liouville(10).unwrap();
        let t = l.truncate(2).unwrap();
        assert_eq!((t.p.clone(), t.q.clone()), (BigInt::from(11), BigInt::from(100)));
        assert_eq!(t.tail_bound, q(2, 1_000_000));
        let t = l.truncate(0).unwrap();
        assert_eq!(t.value(), q(0, 1));
        assert_eq!(t.tail_bound, q(2, 10));
        let t = l.truncate(3).unwrap();
        assert_eq!(t.p, BigInt::from(110001));
        let l2 = LacunaryNumber::liouville(2).unwrap();
        let t = l2.truncate(1).unwrap();
        assert_eq!(t.value(), q(1, 2));
        assert_eq!(t.tail_bound, q(1, 2));
    }

    #[test]
    fn period_is_normalized() {
        let a = LacunaryNumber::new(10, vec![1, 2, 1, 2]).unwrap();
        assert_eq!(a.digits(), &[1, 2]);
        assert_eq!(a.to_string(), "lacunary:10:1,2");
        assert_eq!(LacunaryNumber::new(10, vec![1, 1]).unwrap().to_string(), "liouville:10");
        assert!(LacunaryNumber::new(10, vec![0, 0]).is_err());
        assert!(LacunaryNumber::new(10, vec![10]).is_err());
    }

    #[test]
    fn ball_encloses_deep_truncation() {
        let l = LacunaryNumber::new(7, vec![3, 0, 6]).unwrap();
        let b = l.to_ball(128).unwrap();
        assert!(b.rad().log2_approx() <= -128.0);
        let deep = l.truncate(5).unwrap().value();
        assert!(b.contains_rational(&deep));
    }

    #[test]
    fn tail_ball_is_relatively_tight() {
        let l = LacunaryNumber::liouville(10).unwrap();
        let t = l.tail_ball(2, 64).unwrap();
        // tail = 10^-24 + 10^-120 + ...
        let lo = BigRational::new(1.into(), Pow::pow(BigInt::from(10), 24u32));
        assert!(t.lower().cmp_rational(&lo).is_gt());
        assert!(t.rad().log2_approx() < t.mid().log2_approx() - 60.0);
    }
}
