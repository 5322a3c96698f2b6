//! Number specifications: `rational:a/b`, `liouville:b`, `lacunary:b:d1,d2,...`,
//! `sqrt:a/b` (optionally `-sqrt:a/b`), `pi` and `e`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ball::Ball;
use super::functions;
use crate::error::{Error, Result};
use crate::liouville::lacunary::LacunaryNumber;

const MAX_SPEC_LEN: usize = 100_000;
const MAX_INT_DIGITS: usize = 10_000;
const MAX_DIGIT_BLOCK: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Constant {
    Pi,
    E,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NumberSpec {
    ExactRational(BigRational),
    Lacunary(LacunaryNumber),
    /// `sign * sqrt(radicand)`, radicand >= 0.
    SqrtRational(BigRational, Sign),
    NamedConstant(Constant),
}

struct Cursor<'a> {
    s: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn rest(&self) -> &'a str {
        &self.s[self.pos..]
    }

    fn eat(&mut self, c: char) -> bool {
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected `{c}`")))
        }
    }

    fn digits(&mut self) -> Result<&'a str> {
        let start = self.pos;
        let n = self.rest().bytes().take_while(|b| b.is_ascii_digit()).count();
        if n == 0 {
            return Err(Error::parse(start, "expected digits"));
        }
        if n > MAX_INT_DIGITS {
            return Err(Error::parse(start, "integer too long"));
        }
        self.pos += n;
        Ok(&self.s[start..start + n])
    }

    fn uint(&mut self) -> Result<BigInt> {
        Ok(self.digits()?.parse().expect("ascii digits"))
    }

    fn int(&mut self) -> Result<BigInt> {
        let neg = self.eat('-');
        let v = self.uint()?;
        Ok(if neg { -v } else { v })
    }

    fn small(&mut self, what: &str) -> Result<u32> {
        let start = self.pos;
        let d = self.digits()?;
        d.parse::<u32>()
            .map_err(|_| Error::parse(start, format!("{what} too large")))
    }

    fn end(&self) -> Result<()> {
        if self.pos == self.s.len() {
            Ok(())
        } else {
            Err(Error::parse(self.pos, "unexpected trailing input"))
        }
    }
}

fn parse_base(c: &mut Cursor) -> Result<u32> {
    let start = c.pos;
    let b = c.small("base")?;
    if b < 2 {
        return Err(Error::parse(start, "base must be at least 2"));
    }
    Ok(b)
}

fn lacunary_at(start: usize, base: u32, digits: Vec<u32>) -> Result<LacunaryNumber> {
    LacunaryNumber::new(base, digits).map_err(|e| match e {
        Error::InvalidArgument(msg) => Error::parse(start, msg),
        other => other,
    })
}

/// Parse a number specification.
pub fn parse_number(text: &str) -> Result<NumberSpec> {
    if text.len() > MAX_SPEC_LEN {
        return Err(Error::parse(MAX_SPEC_LEN, "specification too long"));
    }
    match text {
        "pi" => return Ok(NumberSpec::NamedConstant(Constant::Pi)),
        "e" => return Ok(NumberSpec::NamedConstant(Constant::E)),
        _ => {}
    }
    let mut c = Cursor { s: text, pos: 0 };
    let neg = c.eat('-');
    let kind_len = c.rest().find(':').ok_or_else(|| {
        Error::parse(c.pos, "expected one of rational:, liouville:, lacunary:, sqrt:, pi, e")
    })?;
    let kind = &c.rest()[..kind_len];
    let kind_pos = c.pos;
    if neg && kind != "sqrt" {
        return Err(Error::parse(0, "only sqrt specifications take a leading sign"));
    }
    c.pos += kind_len + 1;
    let spec = match kind {
        "rational" => {
            let n = c.int()?;
            c.expect('/')?;
            let dpos = c.pos;
            let d = c.uint()?;
            if d.is_zero() {
                return Err(Error::parse(dpos, "zero denominator"));
            }
            NumberSpec::ExactRational(BigRational::new(n, d))
        }
        "sqrt" => {
            let npos = c.pos;
            let n = c.uint()?;
            c.expect('/')?;
            let dpos = c.pos;
            let d = c.uint()?;
            if d.is_zero() {
                return Err(Error::parse(dpos, "zero denominator"));
            }
            if n.is_zero() {
                return Err(Error::parse(npos, "radicand must be positive"));
            }
            let sign = if neg { Sign::Minus } else { Sign::Plus };
            NumberSpec::SqrtRational(BigRational::new(n, d), sign)
        }
        "liouville" => {
            let start = c.pos;
            let b = parse_base(&mut c)?;
            NumberSpec::Lacunary(lacunary_at(start, b, vec![1])?)
        }
        "lacunary" => {
            let start = c.pos;
            let b = parse_base(&mut c)?;
            c.expect(':')?;
            let mut digits = Vec::new();
            loop {
                let dpos = c.pos;
                let d = c.small("digit")?;
                if d >= b {
                    return Err(Error::parse(dpos, format!("digit {d} is not below base {b}")));
                }
                digits.push(d);
                if digits.len() > MAX_DIGIT_BLOCK {
                    return Err(Error::parse(dpos, "digit block too long"));
                }
                if !c.eat(',') {
                    break;
                }
            }
            NumberSpec::Lacunary(lacunary_at(start, b, digits)?)
        }
        _ => return Err(Error::parse(kind_pos, format!("unknown kind `{kind}`"))),
    };
    c.end()?;
    Ok(spec)
}

fn exact_sqrt(r: &BigRational) -> Option<BigRational> {
    let (n, d) = (r.numer(), r.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}

impl NumberSpec {
    pub fn rational(n: i64, d: i64) -> Self {
        NumberSpec::ExactRational(BigRational::new(n.into(), d.into()))
    }

    pub fn sqrt(n: i64, d: i64) -> Self {
        NumberSpec::SqrtRational(BigRational::new(n.into(), d.into()), Sign::Plus)
    }

    pub fn liouville(base: u32) -> Self {
        NumberSpec::Lacunary(LacunaryNumber::liouville(base).expect("base >= 2"))
    }

    /// The value as a rational when it is one.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            NumberSpec::ExactRational(r) => Some(r.clone()),
            NumberSpec::SqrtRational(r, s) => exact_sqrt(r).map(|v| match s {
                Sign::Plus => v,
                Sign::Minus => -v,
            }),
            _ => None,
        }
    }

    /// Degree of the value over Q when it is known to be algebraic.
    pub fn algebraic_degree(&self) -> Option<u32> {
        match self {
            NumberSpec::ExactRational(_) => Some(1),
            NumberSpec::SqrtRational(..) => Some(if self.as_rational().is_some() { 1 } else { 2 }),
            _ => None,
        }
    }

    /// Whether zero tests of integer polynomials are decided exactly.
    pub fn is_exact(&self) -> bool {
        self.algebraic_degree().is_some()
    }

    /// `-x`, for the specs that can express it.
    pub fn negate(&self) -> Option<Self> {
        match self {
            NumberSpec::ExactRational(r) => Some(NumberSpec::ExactRational(-r)),
            NumberSpec::SqrtRational(r, s) => Some(NumberSpec::SqrtRational(
                r.clone(),
                match s {
                    Sign::Plus => Sign::Minus,
                    Sign::Minus => Sign::Plus,
                },
            )),
            _ => None,
        }
    }

    /// Exact comparison `x <=> c` for rational and square-root specs.
    pub fn cmp_rational(&self, c: &BigRational) -> Option<Ordering> {
        match self {
            NumberSpec::ExactRational(r) => Some(r.cmp(c)),
            NumberSpec::SqrtRational(r, s) => {
                // sqrt(r) <=> |c| by squares, then orient by signs
                let mag = (r.clone()).cmp(&(c * c));
                Some(match (s, c.is_negative()) {
                    (Sign::Plus, true) => Ordering::Greater,
                    (Sign::Plus, false) => mag,
                    (Sign::Minus, false) => {
                        if r.is_zero() && c.is_zero() {
                            Ordering::Equal
                        } else {
                            Ordering::Less
                        }
                    }
                    (Sign::Minus, true) => mag.reverse(),
                })
            }
            _ => None,
        }
    }

    /// Enclosure with radius at most `2^-prec * max(1, |mid|)`.
    pub fn to_ball(&self, prec: u32) -> Ball {
        let prec = prec.max(2);
        match self {
            NumberSpec::ExactRational(r) => Ball::from_rational(r, prec + 2),
            NumberSpec::Lacunary(l) => l.to_ball(prec).expect("depth needed for this precision is representable"),
            NumberSpec::SqrtRational(r, s) => {
                let b = match exact_sqrt(r) {
                    Some(v) => Ball::from_rational(&v, prec + 2),
                    None => Ball::from_rational(r, prec + 8)
                        .sqrt(prec + 4)
                        .expect("positive radicand"),
                };
                match s {
                    Sign::Plus => b,
                    Sign::Minus => b.neg(),
                }
            }
            NumberSpec::NamedConstant(Constant::Pi) => functions::pi(prec + 4),
            NumberSpec::NamedConstant(Constant::E) => {
                functions::exp(&Ball::one(), prec + 4).expect("exp(1) is in range")
            }
        }
    }
}

impl fmt::Display for NumberSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumberSpec::ExactRational(r) => write!(f, "rational:{}/{}", r.numer(), r.denom()),
            NumberSpec::Lacunary(l) => write!(f, "{l}"),
            NumberSpec::SqrtRational(r, s) => {
                if *s == Sign::Minus {
                    f.write_str("-")?;
                }
                write!(f, "sqrt:{}/{}", r.numer(), r.denom())
            }
            NumberSpec::NamedConstant(Constant::Pi) => f.write_str("pi"),
            NumberSpec::NamedConstant(Constant::E) => f.write_str("e"),
        }
    }
}

impl FromStr for NumberSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_number(s)
    }
}

impl Serialize for NumberSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for NumberSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_number(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::dyadic::Dyadic;

    #[test]
    fn grammar_cases() {
        assert_eq!(parse_number("rational:1/2").unwrap(), NumberSpec::rational(1, 2));
        assert_eq!(parse_number("rational:-6/4").unwrap(), NumberSpec::rational(-3, 2));
        assert_eq!(parse_number("liouville:10").unwrap(), NumberSpec::liouville(10));
        assert_eq!(parse_number("lacunary:10:1").unwrap(), NumberSpec::liouville(10));
        assert_eq!(parse_number("pi").unwrap(), NumberSpec::NamedConstant(Constant::Pi));
        assert_eq!(parse_number("sqrt:2/1").unwrap(), NumberSpec::sqrt(2, 1));
        let e = parse_number("rational:1/0").unwrap_err();
        assert_eq!(e, Error::Parse { pos: 11, msg: "zero denominator".into() });
        for bad in ["", "rational:1/", "rational:+1/2", "liouville:1", "lacunary:10:", "lacunary:3:0,0",
            "lacunary:3:1,3", "sqrt:-2/1", "sqrt:0/1", "pie", "-rational:1/2", "rational:1/2 "] {
            assert!(parse_number(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn printing_round_trips() {
        for s in ["rational:-3/2", "liouville:2", "lacunary:7:3,0,6", "sqrt:1/2", "-sqrt:5/3", "pi", "e"] {
            let x = parse_number(s).unwrap();
            assert_eq!(x.to_string(), s);
            assert_eq!(parse_number(&x.to_string()).unwrap(), x);
        }
    }

    #[test]
    fn balls_meet_radius_target() {
        let half = NumberSpec::rational(1, 2).to_ball(64);
        assert!(half.is_exact());
        assert_eq!(*half.mid(), Dyadic::pow2(-1));
        let r2 = NumberSpec::sqrt(2, 1).to_ball(64);
        assert!(r2.rad().log2_approx() <= -63.0);
        assert!((r2.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
        let l = NumberSpec::liouville(10).to_ball(128);
        assert!(l.rad().log2_approx() <= -128.0);
        let pi = NumberSpec::NamedConstant(Constant::Pi).to_ball(100);
        assert!(pi.rad().log2_approx() <= -98.0);
    }

    #[test]
    fn exact_comparisons() {
        let r2 = NumberSpec::sqrt(2, 1);
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(r2.cmp_rational(&q(7, 5)), Some(Ordering::Greater));
        assert_eq!(r2.cmp_rational(&q(3, 2)), Some(Ordering::Less));
        let m = r2.negate().unwrap();
        assert_eq!(m.cmp_rational(&q(-7, 5)), Some(Ordering::Less));
        assert_eq!(m.cmp_rational(&q(-3, 2)), Some(Ordering::Greater));
        assert_eq!(m.cmp_rational(&q(0, 1)), Some(Ordering::Less));
        assert_eq!(NumberSpec::sqrt(4, 9).as_rational(), Some(q(2, 3)));
    }
}
