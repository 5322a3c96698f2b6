use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::distance::{inverse_power, signed_distance};
use super::lacunary::LacunaryNumber;
use crate::error::{Error, Result};
use crate::numeric::ball::{Ball, SignVerdict};
use crate::numeric::functions::DEFAULT_PRECISION_CAP;
use crate::numeric::spec::NumberSpec;

/// Which of `0 < |x - p/q|` and `|x - p/q| < q^-n` an argument is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Inequality {
    Lower,
    Upper,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessVerdict {
    Certified,
    /// `excess` encloses `|x - p/q| - q^-n` for the upper inequality and `0` for the lower one.
    Refuted { which: Inequality, excess: Ball },
    Undecided,
}

/// Sign verdicts backing a certified witness: `|x - p/q|` and `q^-n - |x - p/q|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub lower: SignVerdict,
    pub upper: SignVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiouvilleWitness {
    pub xi: NumberSpec,
    pub n: u32,
    pub p: BigInt,
    pub q: BigInt,
    pub certificate: Certificate,
    pub distance: Ball,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessCheck {
    pub verdict: WitnessVerdict,
    pub certificate: Certificate,
    /// Enclosure of `|x - p/q|`.
    pub distance: Ball,
}

impl LiouvilleWitness {
    pub fn is_certified(&self) -> bool {
        self.certificate.lower == SignVerdict::Positive && self.certificate.upper == SignVerdict::Positive
    }
}

const MAX_QN_BITS: u64 = 1 << 40;
const MAX_EXACT_QN_BITS: u64 = 1 << 24;

/// Exact decision for specs whose value is rational or a square root.
fn exact_upper(x: &NumberSpec, c: &BigRational, eps: &BigRational) -> Option<bool> {
    let below = x.cmp_rational(&(c + eps))? == Ordering::Less;
    let above = x.cmp_rational(&(c - eps))? == Ordering::Greater;
    Some(below && above)
}

/// Check `0 < |x - p/q| < q^-n`.
pub fn verify_witness(x: &NumberSpec, n: u32, p: &BigInt, q: &BigInt, prec: u32) -> Result<WitnessCheck> {
    if *q <= BigInt::one() {
        return Err(Error::InvalidWitness("q must exceed 1".into()));
    }
    if n == 0 {
        return Err(Error::InvalidWitness("n must be positive".into()));
    }
    let qn_bits = q.bits().saturating_mul(n as u64);
    if qn_bits > MAX_QN_BITS {
        return Err(Error::InvalidWitness("q^n is too large".into()));
    }
    let c = BigRational::new(p.clone(), q.clone());
    let mut wp = prec.max(32);
    loop {
        let Some(d) = signed_distance(x, &c, wp)? else {
            return Ok(WitnessCheck {
                verdict: WitnessVerdict::Refuted {
                    which: Inequality::Lower,
                    excess: Ball::zero(),
                },
                certificate: Certificate {
                    lower: SignVerdict::ContainsZero,
                    upper: SignVerdict::Positive,
                },
                distance: Ball::zero(),
            });
        };
        let dist = d.abs();
        let bound = inverse_power(q, n, wp);
        let gap = bound.sub(&dist, wp + 8);
        if x.is_exact() && qn_bits <= MAX_EXACT_QN_BITS {
            let eps = BigRational::new(BigInt::one(), Pow::pow(q, n));
            let holds = exact_upper(x, &c, &eps).expect("exact spec");
            let equal = x.cmp_rational(&(&c + &eps)) == Some(Ordering::Equal)
                || x.cmp_rational(&(&c - &eps)) == Some(Ordering::Equal);
            let (upper, verdict) = if holds {
                (SignVerdict::Positive, WitnessVerdict::Certified)
            } else {
                let s = if equal { SignVerdict::ContainsZero } else { SignVerdict::Negative };
                let excess = if equal { Ball::zero() } else { gap.neg() };
                (s, WitnessVerdict::Refuted { which: Inequality::Upper, excess })
            };
            return Ok(WitnessCheck {
                verdict,
                certificate: Certificate { lower: SignVerdict::Positive, upper },
                distance: dist,
            });
        }
        let upper = gap.sign();
        let certificate = Certificate {
            lower: SignVerdict::Positive,
            upper,
        };
        let verdict = match upper {
            SignVerdict::Positive => WitnessVerdict::Certified,
            SignVerdict::Negative => WitnessVerdict::Refuted {
                which: Inequality::Upper,
                excess: gap.neg(),
            },
            SignVerdict::ContainsZero => {
                if wp < DEFAULT_PRECISION_CAP {
                    wp = (wp * 2).min(DEFAULT_PRECISION_CAP);
                    continue;
                }
                WitnessVerdict::Undecided
            }
        };
        return Ok(WitnessCheck {
            verdict,
            certificate,
            distance: dist,
        });
    }
}

/// Witness at level `n` from the truncation at depth `n` (deeper depths as fallback).
pub fn find_witness(l: &LacunaryNumber, n: u32, prec: u32) -> Result<LiouvilleWitness> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let xi = NumberSpec::Lacunary(l.clone());
    for m in n..n + 4 {
        let (p, q) = l.partial_sum(m)?;
        if q <= BigInt::one() {
            continue;
        }
        let check = verify_witness(&xi, n, &p, &q, prec)?;
        if check.verdict == WitnessVerdict::Certified {
            return Ok(LiouvilleWitness {
                xi,
                n,
                p,
                q,
                certificate: check.certificate,
                distance: check.distance,
            });
        }
    }
    Err(Error::Undecided(format!("no certified witness for {xi} at level {n}")))
}

/// Serialized witness; big integers are decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessJson {
    pub xi: NumberSpec,
    pub n: u32,
    pub p: String,
    pub q: String,
    pub certified: bool,
    pub distance: String,
}

impl LiouvilleWitness {
    pub fn to_json(&self, prec: u32) -> WitnessJson {
        WitnessJson {
            xi: self.xi.clone(),
            n: self.n,
            p: self.p.to_string(),
            q: self.q.to_string(),
            certified: self.is_certified(),
            distance: self.distance.to_string_prec(prec),
        }
    }
}

impl WitnessJson {
    /// Parse the integer fields; `q > 1` is required.
    pub fn integers(&self) -> Result<(BigInt, BigInt)> {
        let parse = |s: &str, field: &str| -> Result<BigInt> {
            let ok = !s.is_empty()
                && s.len() <= 2_000_000
                && s.strip_prefix('-').unwrap_or(s).bytes().all(|b| b.is_ascii_digit())
                && s != "-";
            if !ok {
                return Err(Error::parse(0, format!("field `{field}` is not a decimal integer")));
            }
            Ok(s.parse().expect("validated"))
        };
        let p = parse(&self.p, "p")?;
        let q = parse(&self.q, "q")?;
        if !q.is_positive() || q.is_one() || q.is_zero() {
            return Err(Error::InvalidWitness("q must exceed 1".into()));
        }
        Ok((p, q))
    }
}

/// Decode a witness JSON document and re-verify it.
pub fn verify_witness_json(text: &str, prec: u32) -> Result<WitnessCheck> {
    let w: WitnessJson =
        serde_json::from_str(text).map_err(|e| Error::parse(e.column(), e.to_string()))?;
    let (p, q) = w.integers()?;
    if w.n == 0 {
        return Err(Error::InvalidWitness("n must be positive".into()));
    }
    verify_witness(&w.xi, w.n, &p, &q, prec)
}
