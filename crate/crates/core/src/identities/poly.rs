use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::complex::ComplexBall;

/// `a + b i` with integer parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussianInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        GaussianInt {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn to_ball(&self) -> ComplexBall {
        ComplexBall::gaussian(&self.re, &self.im)
    }
}

impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) if self.im.is_one() => f.write_str("i"),
            (true, false) if (-&self.im).is_one() => f.write_str("-i"),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "({} {} {}i)", self.re, sign, self.im.abs())
            }
        }
    }
}

/// `sum c[j][k] X^j Y^k` with Gaussian-integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariatePolynomial {
    terms: BTreeMap<(u32, u32), GaussianInt>,
}

impl BivariatePolynomial {
    /// Zero coefficients are dropped; an empty result is an error.
    pub fn new(terms: impl IntoIterator<Item = ((u32, u32), GaussianInt)>) -> Result<Self> {
        let mut map: BTreeMap<(u32, u32), GaussianInt> = BTreeMap::new();
        for (jk, c) in terms {
            let e = map.entry(jk).or_insert_with(|| GaussianInt::new(0, 0));
            e.re += c.re;
            e.im += c.im;
        }
        map.retain(|_, c| !c.is_zero());
        if map.is_empty() {
            return Err(Error::InvalidArgument("polynomial is identically zero".into()));
        }
        Ok(BivariatePolynomial { terms: map })
    }

    /// Integer coefficients `(j, k, c)` for `c X^j Y^k`.
    pub fn from_int_terms(terms: &[(u32, u32, i64)]) -> Result<Self> {
        Self::new(terms.iter().map(|&(j, k, c)| ((j, k), GaussianInt::new(c, 0))))
    }

    /// Gaussian coefficients `(j, k, re, im)`.
    pub fn from_gaussian_terms(terms: &[(u32, u32, i64, i64)]) -> Result<Self> {
        Self::new(terms.iter().map(|&(j, k, a, b)| ((j, k), GaussianInt::new(a, b))))
    }

    pub fn coeff(&self, j: u32, k: u32) -> GaussianInt {
        self.terms.get(&(j, k)).cloned().unwrap_or_else(|| GaussianInt::new(0, 0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &GaussianInt)> {
        self.terms.iter()
    }

    pub fn degree_x(&self) -> u32 {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn degree_y(&self) -> u32 {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    /// Enclosure of `P(x, y)`: Horner in `Y` over coefficient polynomials in `X`.
    pub fn eval(&self, x: &ComplexBall, y: &ComplexBall, prec: u32) -> ComplexBall {
        let mut acc = ComplexBall::zero();
        for k in (0..=self.degree_y()).rev() {
            let mut ck = ComplexBall::zero();
            for j in (0..=self.degree_x()).rev() {
                ck = ck.mul(x, prec);
                if let Some(c) = self.terms.get(&(j, k)) {
                    ck = ck.add(&c.to_ball(), prec);
                }
            }
            acc = acc.mul(y, prec).add(&ck, prec);
        }
        acc
    }
}

impl fmt::Display for BivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut keys: Vec<&(u32, u32)> = self.terms.keys().collect();
        keys.sort_by(|a, b| (b.0 + b.1, b.1, b.0).cmp(&(a.0 + a.1, a.1, a.0)));
        for &(j, k) in keys {
            let c = &self.terms[&(j, k)];
            let neg = (c.im.is_zero() && c.re.is_negative()) || (c.re.is_zero() && c.im.is_negative());
            let mag = if neg { GaussianInt::new(-&c.re, -&c.im) } else { c.clone() };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mut factors = Vec::new();
            if !(mag.im.is_zero() && mag.re.is_one()) || (j == 0 && k == 0) {
                factors.push(mag.to_string());
            }
            for (v, e) in [("X", j), ("Y", k)] {
                match e {
                    0 => {}
                    1 => factors.push(v.to_string()),
                    _ => factors.push(format!("{v}^{e}")),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

/// Certified enclosure of `P(x, y)`.
pub fn dependence_residual(p: &BivariatePolynomial, x: &ComplexBall, y: &ComplexBall, prec: u32) -> ComplexBall {
    p.eval(x, y, prec)
}
