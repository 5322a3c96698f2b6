use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::poly::IntegerPolynomial;
use crate::error::{Error, Result};
use crate::numeric::decimal::{digits_for_prec, format_rational_sci, parse_decimal};
use crate::numeric::dyadic::Rounding;
use crate::numeric::spec::NumberSpec;

/// One evaluated point `w_n(xi, H)`: `w_lo <= w_n(xi, H) <= w_hi`.
///
/// The bounds are decimals with `digits_for_prec(prec)` significant digits,
/// rounded outward, so a record prints and parses back to itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WnRecord {
    pub xi: NumberSpec,
    pub n: u32,
    pub h: BigInt,
    pub w_lo: BigRational,
    pub w_hi: BigRational,
    pub argmin: IntegerPolynomial,
    pub prec: u32,
    pub skipped: u64,
}

fn outward(r: &BigRational, digits: usize, mode: Rounding) -> BigRational {
    parse_decimal(&format_rational_sci(r, digits, mode)).expect("formatter output parses")
}

impl WnRecord {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        xi: NumberSpec,
        n: u32,
        h: BigInt,
        lo: &BigRational,
        hi: &BigRational,
        argmin: IntegerPolynomial,
        prec: u32,
        skipped: u64,
    ) -> Self {
        let d = digits_for_prec(prec);
        WnRecord {
            xi,
            n,
            h,
            w_lo: outward(lo, d, Rounding::Floor),
            w_hi: outward(hi, d, Rounding::Ceil),
            argmin,
            prec,
            skipped,
        }
    }

    pub fn key(&self) -> (String, u32, BigInt) {
        (self.xi.to_string(), self.n, self.h.clone())
    }

    pub fn to_line(&self) -> RecordLine {
        let d = digits_for_prec(self.prec);
        RecordLine {
            xi: self.xi.to_string(),
            n: self.n,
            h: self.h.to_string(),
            w_lo: format_rational_sci(&self.w_lo, d, Rounding::Nearest),
            w_hi: format_rational_sci(&self.w_hi, d, Rounding::Nearest),
            argmin: self.argmin.to_strings(),
            prec: self.prec,
            skipped: self.skipped,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_line()).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let line: RecordLine =
            serde_json::from_str(text).map_err(|e| Error::parse(e.column(), e.to_string()))?;
        line.into_record()
    }
}

/// The on-disk shape of a record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordLine {
    pub xi: String,
    pub n: u32,
    #[serde(rename = "H")]
    pub h: String,
    pub w_lo: String,
    pub w_hi: String,
    pub argmin: Vec<String>,
    pub prec: u32,
    pub skipped: u64,
}

fn int_field(s: &str, field: &str) -> Result<BigInt> {
    let body = s.strip_prefix('-').unwrap_or(s);
    if body.is_empty() || body.len() > 10_000 || !body.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::parse(0, format!("field `{field}` is not a decimal integer")));
    }
    Ok(s.parse().expect("validated"))
}

impl RecordLine {
    pub fn into_record(self) -> Result<WnRecord> {
        let xi: NumberSpec = self.xi.parse()?;
        let h = int_field(&self.h, "H")?;
        if !h.is_positive() {
            return Err(Error::parse(0, "H must be positive"));
        }
        if self.argmin.len() > 10_000 {
            return Err(Error::parse(0, "argmin too long"));
        }
        let w_lo = parse_decimal(&self.w_lo).ok_or_else(|| Error::parse(0, "w_lo is not a decimal"))?;
        let w_hi = parse_decimal(&self.w_hi).ok_or_else(|| Error::parse(0, "w_hi is not a decimal"))?;
        if w_lo.is_negative() || w_lo.is_zero() || w_lo > w_hi {
            return Err(Error::parse(0, "bounds must satisfy 0 < w_lo <= w_hi"));
        }
        let coeffs = self
            .argmin
            .iter()
            .map(|c| int_field(c, "argmin"))
            .collect::<Result<Vec<_>>>()?;
        Ok(WnRecord {
            xi,
            n: self.n,
            h,
            w_lo,
            w_hi,
            argmin: IntegerPolynomial::new(coeffs),
            prec: self.prec,
            skipped: self.skipped,
        })
    }
}
