use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::distance::signed_distance;
use crate::error::{Error, Result};
use crate::numeric::ball::Ball;
use crate::numeric::functions::ln;
use crate::numeric::spec::NumberSpec;

/// `-log|x - p/q| / log q`, enclosed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentMeasurement {
    pub p: BigInt,
    pub q: BigInt,
    pub exponent: Ball,
}

/// `-log(d) / log(q)` for a positive distance ball.
pub fn exponent_of_distance(d: &Ball, q: &BigInt, prec: u32) -> Result<Ball> {
    let p = prec + 16;
    let lq = ln(&Ball::from_int(q), p)?;
    let ld = ln(&d.abs(), p)?;
    Ok(ld.neg().div(&lq, p)?.round(prec))
}

pub fn approximation_exponent(x: &NumberSpec, p: &BigInt, q: &BigInt, prec: u32) -> Result<ExponentMeasurement> {
    if *q <= BigInt::one() {
        return Err(Error::InvalidArgument("q must exceed 1".into()));
    }
    let c = BigRational::new(p.clone(), q.clone());
    let d = signed_distance(x, &c, prec)?
        .ok_or_else(|| Error::Domain(format!("{x} equals {p}/{q}; the distance is zero")))?;
    Ok(ExponentMeasurement {
        p: p.clone(),
        q: q.clone(),
        exponent: exponent_of_distance(&d, q, prec)?,
    })
}
