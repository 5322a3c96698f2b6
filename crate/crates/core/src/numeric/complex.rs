use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::ball::Ball;
use super::dyadic::Dyadic;
use crate::error::{Error, Result};

/// Rectangular complex enclosure: both components are balls.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexBall {
    pub re: Ball,
    pub im: Ball,
}

impl ComplexBall {
    pub fn new(re: Ball, im: Ball) -> Self {
        ComplexBall { re, im }
    }

    pub fn real(re: Ball) -> Self {
        ComplexBall { re, im: Ball::zero() }
    }

    pub fn zero() -> Self {
        Self::real(Ball::zero())
    }

    pub fn one() -> Self {
        Self::real(Ball::one())
    }

    pub fn i() -> Self {
        ComplexBall {
            re: Ball::zero(),
            im: Ball::one(),
        }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::real(Ball::from_i64(n))
    }

    /// Gaussian integer `a + b i`.
    pub fn gaussian(a: &BigInt, b: &BigInt) -> Self {
        ComplexBall {
            re: Ball::from_int(a),
            im: Ball::from_int(b),
        }
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        Self::real(Ball::from_rational(r, prec))
    }

    /// Imaginary part is exactly zero.
    pub fn is_real(&self) -> bool {
        self.im.is_exact() && self.im.mid().is_zero()
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    /// Largest of the two component radii.
    pub fn rad(&self) -> Dyadic {
        std::cmp::max(self.re.rad().clone(), self.im.rad().clone())
    }

    /// Upper bound on `|z|` (sum of component bounds).
    pub fn max_abs(&self) -> Dyadic {
        self.re.max_abs().add(&self.im.max_abs())
    }

    pub fn contains(&self, other: &ComplexBall) -> bool {
        self.re.contains(&other.re) && self.im.contains(&other.im)
    }

    pub fn overlaps(&self, other: &ComplexBall) -> bool {
        self.re.overlaps(&other.re) && self.im.overlaps(&other.im)
    }

    pub fn neg(&self) -> Self {
        ComplexBall {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    pub fn conj(&self) -> Self {
        ComplexBall {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    /// Multiply by `i`.
    pub fn mul_i(&self) -> Self {
        ComplexBall {
            re: self.im.neg(),
            im: self.re.clone(),
        }
    }

    /// Multiply by `-i`.
    pub fn mul_neg_i(&self) -> Self {
        ComplexBall {
            re: self.im.clone(),
            im: self.re.neg(),
        }
    }

    pub fn mul_2exp(&self, k: i64) -> Self {
        ComplexBall {
            re: self.re.mul_2exp(k),
            im: self.im.mul_2exp(k),
        }
    }

    pub fn add(&self, o: &Self, prec: u32) -> Self {
        ComplexBall {
            re: self.re.add(&o.re, prec),
            im: self.im.add(&o.im, prec),
        }
    }

    pub fn sub(&self, o: &Self, prec: u32) -> Self {
        ComplexBall {
            re: self.re.sub(&o.re, prec),
            im: self.im.sub(&o.im, prec),
        }
    }

    pub fn mul(&self, o: &Self, prec: u32) -> Self {
        if o.is_real() {
            return self.scale(&o.re, prec);
        }
        if self.is_real() {
            return o.scale(&self.re, prec);
        }
        let p = prec + 4;
        let re = self.re.mul(&o.re, p).sub(&self.im.mul(&o.im, p), prec);
        let im = self.re.mul(&o.im, p).add(&self.im.mul(&o.re, p), prec);
        ComplexBall { re, im }
    }

    pub fn sqr(&self, prec: u32) -> Self {
        if self.is_real() {
            return Self::real(self.re.sqr(prec));
        }
        let p = prec + 4;
        let re = self.re.sqr(p).sub(&self.im.sqr(p), prec);
        let im = self.re.mul(&self.im, p).mul_2exp(1).round(prec);
        ComplexBall { re, im }
    }

    /// Multiply by a real ball.
    pub fn scale(&self, r: &Ball, prec: u32) -> Self {
        let im = if self.is_real() {
            Ball::zero()
        } else {
            self.im.mul(r, prec)
        };
        ComplexBall {
            re: self.re.mul(r, prec),
            im,
        }
    }

    pub fn add_real(&self, r: &Ball, prec: u32) -> Self {
        ComplexBall {
            re: self.re.add(r, prec),
            im: self.im.clone(),
        }
    }

    /// `|z|^2` as a real ball.
    pub fn norm_sqr(&self, prec: u32) -> Ball {
        let p = prec + 4;
        self.re.sqr(p).add(&self.im.sqr(p), prec)
    }

    pub fn div(&self, o: &Self, prec: u32) -> Result<Self> {
        if o.contains_zero() {
            return Err(Error::SingularInput("division by a complex ball containing zero".into()));
        }
        if o.is_real() {
            let p = prec + 4;
            let im = if self.is_real() {
                Ball::zero()
            } else {
                self.im.div(&o.re, p)?
            };
            return Ok(ComplexBall {
                re: self.re.div(&o.re, p)?,
                im,
            });
        }
        let p = prec + 8;
        let den = o.norm_sqr(p);
        if den.contains_zero() {
            return Err(Error::SingularInput("division by a complex ball containing zero".into()));
        }
        let num = self.mul(&o.conj(), p);
        Ok(ComplexBall {
            re: num.re.div(&den, prec)?,
            im: num.im.div(&den, prec)?,
        })
    }

    pub fn recip(&self, prec: u32) -> Result<Self> {
        Self::one().div(self, prec)
    }

    pub fn pow_u64(&self, e: u64, prec: u32) -> Self {
        if e == 0 {
            return Self::one();
        }
        let guard = prec + 2 * (64 - e.leading_zeros());
        let mut base = self.clone();
        let mut acc: Option<Self> = None;
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
        acc.expect("e > 0")
    }

    pub fn to_string_prec(&self, prec: u32) -> String {
        if self.is_real() {
            return self.re.to_string_prec(prec);
        }
        format!(
            "({}) + i({})",
            self.re.to_string_prec(prec),
            self.im.to_string_prec(prec)
        )
    }
}

impl fmt::Display for ComplexBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_real() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "({}) + i({})", self.re, self.im)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_squared_is_minus_one() {
        let i = ComplexBall::i();
        let m = i.mul(&i, 64);
        assert_eq!(m.re, Ball::from_i64(-1));
        assert!(m.im.mid().is_zero());
    }

    #[test]
    fn division_round_trips() {
        let p = 128;
        let a = ComplexBall::new(Ball::from_i64(3), Ball::from_i64(-2));
        let b = ComplexBall::new(Ball::from_i64(1), Ball::from_i64(5));
        let q = a.div(&b, p).unwrap();
        let back = q.mul(&b, p);
        assert!(back.re.contains_dyadic(&Dyadic::from_i64(3)));
        assert!(back.im.contains_dyadic(&Dyadic::from_i64(-2)));
        assert!(a.div(&ComplexBall::zero(), p).is_err());
    }
}
