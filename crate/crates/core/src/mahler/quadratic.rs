//! Exact arithmetic in `Z[sqrt d]` for evaluating integer polynomials at `±sqrt(r)`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use super::poly::IntegerPolynomial;
use crate::numeric::ball::Ball;
use crate::numeric::spec::{NumberSpec, Sign};

/// `xi = sign * sqrt(d) / v` with `d` not a perfect square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticPoint {
    pub d: BigInt,
    pub v: BigInt,
    pub negative: bool,
}

/// Sign of `a + b sqrt(d)`, `d > 0` not a square.
pub fn sign_of(a: &BigInt, b: &BigInt, d: &BigInt) -> Ordering {
    let sa = a.cmp(&BigInt::zero());
    let sb = b.cmp(&BigInt::zero());
    if sb == Ordering::Equal {
        return sa;
    }
    if sa == Ordering::Equal || sa == sb {
        return sb;
    }
    // opposite signs: compare a^2 with d b^2
    let a2 = a * a;
    let db2 = d * b * b;
    match a2.cmp(&db2) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    }
}

/// `|a1 + b1 sqrt d|` against `|a2 + b2 sqrt d|`.
pub fn cmp_abs(x: &(BigInt, BigInt), y: &(BigInt, BigInt), d: &BigInt) -> Ordering {
    let (a1, b1) = x;
    let (a2, b2) = y;
    let rat = a1 * a1 + d * b1 * b1 - a2 * a2 - d * b2 * b2;
    let irr = (a1 * b1 - a2 * b2) * 2;
    sign_of(&rat, &irr, d)
}

impl QuadraticPoint {
    pub fn from_spec(x: &NumberSpec) -> Option<Self> {
        match x {
            NumberSpec::SqrtRational(r, s) if x.as_rational().is_none() => Some(QuadraticPoint {
                d: r.numer() * r.denom(),
                v: r.denom().clone(),
                negative: *s == Sign::Minus,
            }),
            _ => None,
        }
    }

    /// `(A, B)` with `P(xi) * v^scale = A + B sqrt d`, for `scale >= deg P`.
    pub fn eval(&self, p: &IntegerPolynomial, scale: usize) -> (BigInt, BigInt) {
        let mut a = BigInt::zero();
        let mut b = BigInt::zero();
        let mut dpow = BigInt::one();
        for (k, c) in p.coeffs().iter().enumerate() {
            if k >= 2 && k % 2 == 0 {
                dpow *= &self.d;
            }
            let vk: BigInt = Pow::pow(&self.v, (scale - k) as u64);
            let term = c * &dpow * vk;
            if k % 2 == 0 {
                a += term;
            } else if self.negative {
                b -= term;
            } else {
                b += term;
            }
        }
        (a, b)
    }

    /// Enclosure of `(a + b sqrt d) / v^scale` with relative precision about `2^-prec`.
    pub fn to_ball(&self, ab: &(BigInt, BigInt), scale: usize, prec: u32) -> Ball {
        let p = prec + 16;
        let (a, b) = ab;
        let root = Ball::from_rational(&BigRational::from_integer(self.d.clone()), p + 8)
            .sqrt(p + 4)
            .expect("positive");
        let den = Ball::from_int(&Pow::pow(&self.v, scale as u64));
        let num = if a.is_zero() || b.is_zero() || a.is_negative() == b.is_negative() {
            Ball::from_int(a).add(&root.mul(&Ball::from_int(b), p), p)
        } else {
            // (a^2 - d b^2) / (a - b sqrt d), with no cancellation in the denominator
            let n = a * a - &self.d * b * b;
            let conj = Ball::from_int(a).sub(&root.mul(&Ball::from_int(b), p), p);
            Ball::from_int(&n).div(&conj, p).expect("conjugate is nonzero")
        };
        num.div(&den, p).expect("positive denominator")
    }
}
