use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::numeric::ball::Ball;

/// Integer polynomial, coefficients in ascending degree, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegerPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntegerPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntegerPolynomial { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `X^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn height(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    pub fn neg(&self) -> Self {
        IntegerPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// `P` or `-P`, whichever has a positive leading coefficient.
    pub fn sign_normalized(&self) -> Self {
        match self.coeffs.last() {
            Some(c) if c.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }

    /// Tie-break order among minimizers: lower degree first, then
    /// lexicographic on the ascending coefficient vector.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_ball(&self, x: &Ball, prec: u32) -> Ball {
        let mut acc = Ball::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x, prec).add(&Ball::from_int(c), prec);
        }
        acc
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl fmt::Display for IntegerPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let unit = mag == BigInt::from(1);
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !unit {
                        write!(f, "{mag}*")?;
                    }
                    if k == 1 {
                        f.write_str("X")?;
                    } else {
                        write!(f, "X^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trims_and_measures() {
        let p = IntegerPolynomial::from_i64(&[-2, 0, 1, 0, 0]);
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.height(), BigInt::from(2));
        assert_eq!(p.to_string(), "-2 + X^2");
        assert!(IntegerPolynomial::from_i64(&[0, 0]).is_zero());
        assert_eq!(IntegerPolynomial::from_i64(&[-110001, 1000000]).to_string(), "-110001 + 1000000*X");
    }

    #[test]
    fn canonical_order() {
        let a = IntegerPolynomial::from_i64(&[-1, 1]);
        let b = IntegerPolynomial::from_i64(&[-1, -1, 1]);
        assert_eq!(a.canonical_cmp(&b), Ordering::Less);
        let c = IntegerPolynomial::from_i64(&[-1, 2]);
        let d = IntegerPolynomial::from_i64(&[0, 1]);
        assert_eq!(c.canonical_cmp(&d), Ordering::Less);
        assert_eq!(IntegerPolynomial::from_i64(&[3, -2]).sign_normalized(), IntegerPolynomial::from_i64(&[-3, 2]));
    }

    #[test]
    fn evaluation() {
        let p = IntegerPolynomial::from_i64(&[-1, 2]);
        let third = BigRational::new(1.into(), 3.into());
        assert_eq!(p.eval_rational(&third), BigRational::new((-1).into(), 3.into()));
        let b = p.eval_ball(&Ball::from_rational(&third, 80), 80);
        assert!(b.contains_rational(&BigRational::new((-1).into(), 3.into())));
    }
}
