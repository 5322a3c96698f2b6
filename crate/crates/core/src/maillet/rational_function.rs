//! Rational functions over `Q` in one variable, with a small expression parser.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::ball::Ball;

pub const MAX_DEGREE: usize = 256;
const MAX_INPUT: usize = 10_000;
const MAX_NUMBER_DIGITS: usize = 1000;
const MAX_NESTING: usize = 128;
const MAX_EXPONENT: u32 = 64;

/// Dense polynomial over `Q`, ascending, trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
struct QPoly(Vec<BigRational>);

impl QPoly {
    fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        QPoly(c)
    }

    fn constant(c: BigRational) -> Self {
        QPoly::new(vec![c])
    }

    fn var() -> Self {
        QPoly::new(vec![BigRational::zero(), BigRational::one()])
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lead(&self) -> &BigRational {
        self.0.last().expect("nonzero polynomial")
    }

    fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        QPoly::new(
            (0..n)
                .map(|i| {
                    self.0.get(i).cloned().unwrap_or_default() + o.0.get(i).cloned().unwrap_or_default()
                })
                .collect(),
        )
    }

    fn neg(&self) -> Self {
        QPoly(self.0.iter().map(|c| -c).collect())
    }

    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return QPoly(Vec::new());
        }
        let mut out = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    fn scale(&self, c: &BigRational) -> Self {
        QPoly::new(self.0.iter().map(|x| x * c).collect())
    }

    fn rem(&self, d: &Self) -> Self {
        let mut r = self.0.clone();
        let dl = d.lead();
        while r.len() >= d.0.len() && !r.is_empty() {
            let shift = r.len() - d.0.len();
            let f = r.last().expect("nonempty") / dl;
            for (i, c) in d.0.iter().enumerate() {
                r[shift + i] -= &f * c;
            }
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        QPoly(r)
    }

    fn div_exact(&self, d: &Self) -> Self {
        let mut r = self.0.clone();
        let mut q = vec![BigRational::zero(); (self.0.len() + 1).saturating_sub(d.0.len())];
        let dl = d.lead();
        while r.len() >= d.0.len() && !r.is_empty() {
            let shift = r.len() - d.0.len();
            let f = r.last().expect("nonempty") / dl;
            for (i, c) in d.0.iter().enumerate() {
                r[shift + i] -= &f * c;
            }
            q[shift] = f;
            r.pop();
        }
        QPoly::new(q)
    }

    fn monic(&self) -> Self {
        let l = self.lead().clone();
        self.scale(&(BigRational::one() / l))
    }

    fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    fn eval_ball(&self, x: &Ball, prec: u32) -> Ball {
        let mut acc = Ball::zero();
        for c in self.0.iter().rev() {
            acc = acc.mul(x, prec).add(&Ball::from_int(c.numer()), prec);
        }
        acc
    }
}

/// `num(t) / den(t)`, stored as coprime integer polynomials with no common
/// content and a positive leading denominator coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    num: QPoly,
    den: QPoly,
}

impl RationalFunction {
    /// From rational coefficient lists (ascending degree).
    pub fn new(num: Vec<BigRational>, den: Vec<BigRational>) -> Result<Self> {
        Self::from_parts(QPoly::new(num), QPoly::new(den))
    }

    pub fn from_i64(num: &[i64], den: &[i64]) -> Result<Self> {
        let conv = |c: &[i64]| c.iter().map(|&x| BigRational::from_integer(x.into())).collect();
        Self::new(conv(num), conv(den))
    }

    fn from_parts(num: QPoly, den: QPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidArgument("denominator is identically zero".into()));
        }
        if num.degree() > MAX_DEGREE || den.degree() > MAX_DEGREE {
            return Err(Error::InvalidArgument(format!("degree exceeds {MAX_DEGREE}")));
        }
        if num.is_zero() {
            return Ok(RationalFunction {
                num,
                den: QPoly::constant(BigRational::one()),
            });
        }
        let g = num.gcd(&den);
        let (num, den) = if g.degree() > 0 {
            (num.div_exact(&g), den.div_exact(&g))
        } else {
            (num, den)
        };
        let lcm = num
            .0
            .iter()
            .chain(den.0.iter())
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let l = BigRational::from_integer(lcm);
        let (num, den) = (num.scale(&l), den.scale(&l));
        let content = num
            .0
            .iter()
            .chain(den.0.iter())
            .fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()));
        let mut f = BigRational::new(BigInt::one(), content);
        if den.lead().is_negative() {
            f = -f;
        }
        Ok(RationalFunction {
            num: num.scale(&f),
            den: den.scale(&f),
        })
    }

    pub fn identity() -> Self {
        RationalFunction {
            num: QPoly::var(),
            den: QPoly::constant(BigRational::one()),
        }
    }

    /// `(t + 1/t) / 2`.
    pub fn half_t_plus_inverse() -> Self {
        Self::from_i64(&[1, 0, 1], &[0, 2]).expect("nonzero denominator")
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// Integer numerator coefficients, ascending.
    pub fn numerator(&self) -> Vec<BigInt> {
        self.num.0.iter().map(|c| c.to_integer()).collect()
    }

    pub fn denominator(&self) -> Vec<BigInt> {
        self.den.0.iter().map(|c| c.to_integer()).collect()
    }

    pub fn degree(&self) -> usize {
        self.num.degree().max(self.den.degree())
    }

    /// Exact value at a rational point.
    pub fn eval_exact(&self, t: &BigRational) -> Result<BigRational> {
        let d = self.den.eval(t);
        if d.is_zero() {
            return Err(Error::PoleProximity(format!("{self} has a pole at {t}")));
        }
        Ok(self.num.eval(t) / d)
    }

    /// Enclosure over a ball; fails if the denominator enclosure meets zero.
    pub fn eval_ball(&self, t: &Ball, prec: u32) -> Result<Ball> {
        let d = self.den.eval_ball(t, prec);
        if d.contains_zero() {
            return Err(Error::PoleProximity(format!("denominator of {self} may vanish on {t}")));
        }
        self.num.eval_ball(t, prec).div(&d, prec)
    }

    fn add(&self, o: &Self) -> Result<Self> {
        Self::from_parts(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    fn mul(&self, o: &Self) -> Result<Self> {
        Self::from_parts(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    fn recip(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::InvalidArgument("division by the zero function".into()));
        }
        Self::from_parts(self.den.clone(), self.num.clone())
    }

    fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    fn constant(c: BigRational) -> Self {
        Self::from_parts(QPoly::constant(c), QPoly::constant(BigRational::one())).expect("valid")
    }

    fn would_exceed(&self, o: &Self) -> bool {
        self.degree() + o.degree() > MAX_DEGREE
    }

    /// For a Mobius map `(a t + b)/(c t + d)`, the inverse `(d t - b)/(-c t + a)`.
    pub fn mobius_inverse(&self) -> Option<Self> {
        if self.num.degree() > 1 || self.den.degree() > 1 {
            return None;
        }
        let c = |p: &QPoly, k: usize| p.0.get(k).cloned().unwrap_or_default();
        let (a, b, cc, d) = (c(&self.num, 1), c(&self.num, 0), c(&self.den, 1), c(&self.den, 0));
        if (&a * &d - &b * &cc).is_zero() {
            return None;
        }
        Self::new(vec![-b, d], vec![a, -cc]).ok()
    }
}

fn write_poly(f: &mut fmt::Formatter<'_>, p: &QPoly) -> fmt::Result {
    if p.is_zero() {
        return f.write_str("0");
    }
    let mut first = true;
    for (k, c) in p.0.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let c = c.to_integer();
        let neg = c.is_negative();
        if first {
            if neg {
                f.write_str("-")?;
            }
        } else {
            f.write_str(if neg { " - " } else { " + " })?;
        }
        first = false;
        let mag = c.abs();
        let unit = mag.is_one();
        match k {
            0 => write!(f, "{mag}")?,
            _ => {
                if !unit {
                    write!(f, "{mag}*")?;
                }
                if k == 1 {
                    f.write_str("t")?;
                } else {
                    write!(f, "t^{k}")?;
                }
            }
        }
    }
    Ok(())
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == 0 && self.den.0[0].is_one() {
            return write_poly(f, &self.num);
        }
        f.write_str("(")?;
        write_poly(f, &self.num)?;
        f.write_str(")/(")?;
        write_poly(f, &self.den)?;
        f.write_str(")")
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    depth: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::parse(self.pos, msg))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn lift(&self, r: Result<RationalFunction>) -> Result<RationalFunction> {
        r.map_err(|e| match e {
            Error::InvalidArgument(m) => Error::parse(self.pos, m),
            other => other,
        })
    }

    fn expr(&mut self) -> Result<RationalFunction> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            return self.err("nesting too deep");
        }
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let mut rhs = self.term()?;
            if c == b'-' {
                rhs = rhs.neg();
            }
            acc = self.lift(acc.add(&rhs))?;
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = self.combine(&acc, &rhs, false)?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = self.combine(&acc, &rhs, true)?;
                }
                Some(c) if c == b'(' || c == b't' || c == b'x' || c.is_ascii_digit() => {
                    let rhs = self.power()?;
                    acc = self.combine(&acc, &rhs, false)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn combine(&self, a: &RationalFunction, b: &RationalFunction, divide: bool) -> Result<RationalFunction> {
        if a.would_exceed(b) {
            return self.err(format!("degree exceeds {MAX_DEGREE}"));
        }
        let b = if divide { self.lift(b.recip())? } else { b.clone() };
        self.lift(a.mul(&b))
    }

    fn unary(&mut self) -> Result<RationalFunction> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RationalFunction> {
        let base = self.primary()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let negative = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos || self.pos - start > 3 {
            self.pos = start;
            return self.err("expected a small exponent");
        }
        let e: u32 = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii").parse().expect("digits");
        if e > MAX_EXPONENT || base.degree() * e as usize > MAX_DEGREE {
            self.pos = start;
            return self.err("exponent too large");
        }
        let mut acc = RationalFunction::constant(BigRational::one());
        for _ in 0..e {
            acc = self.lift(acc.mul(&base))?;
        }
        if negative {
            acc = self.lift(acc.recip())?;
        }
        Ok(acc)
    }

    fn primary(&mut self) -> Result<RationalFunction> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b't' | b'x') => {
                self.pos += 1;
                Ok(RationalFunction::identity())
            }
            Some(c) if c.is_ascii_digit() => self.number(),
            Some(_) => self.err("expected a number, `t` or `(`"),
            None => self.err("unexpected end of input"),
        }
    }

    fn number(&mut self) -> Result<RationalFunction> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let int_end = self.pos;
        let mut frac = "";
        if self.pos < self.s.len() && self.s[self.pos] == b'.' {
            self.pos += 1;
            let fs = self.pos;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if fs == self.pos {
                return self.err("expected digits after `.`");
            }
            frac = std::str::from_utf8(&self.s[fs..self.pos]).expect("ascii");
        }
        if self.pos - start > MAX_NUMBER_DIGITS {
            self.pos = start;
            return self.err("number too long");
        }
        let int = std::str::from_utf8(&self.s[start..int_end]).expect("ascii");
        let n: BigInt = format!("{int}{frac}").parse().expect("digits");
        let d = num_traits::Pow::pow(BigInt::from(10), frac.len() as u32);
        Ok(RationalFunction::constant(BigRational::new(n, d)))
    }
}

impl FromStr for RationalFunction {
    type Err = Error;

    /// Expressions in `t` (or `x`) over `+ - * / ^`, parentheses, and
    /// decimal constants; juxtaposition multiplies, e.g. `1/2 (t + 1/t)`.
    fn from_str(s: &str) -> Result<Self> {
        if s.len() > MAX_INPUT {
            return Err(Error::parse(0, "input too long"));
        }
        let mut p = Parser {
            s: s.as_bytes(),
            pos: 0,
            depth: 0,
        };
        let r = p.expr()?;
        if p.peek().is_some() {
            return p.err("unexpected trailing input");
        }
        Ok(r)
    }
}

impl Serialize for RationalFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RationalFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
