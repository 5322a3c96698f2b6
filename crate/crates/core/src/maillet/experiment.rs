use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rational_function::RationalFunction;
use crate::error::{Error, Result};
use crate::liouville::cf::convergents_with_error;
use crate::liouville::exponent::{exponent_of_distance, ExponentMeasurement};
use crate::liouville::lacunary::LacunaryNumber;
use crate::numeric::ball::Ball;
use crate::numeric::dyadic::{Dyadic, Rounding};
use crate::numeric::functions::DEFAULT_PRECISION_CAP as PRECISION_CAP;

/// Enclosure of `R(t)`; exact when `t` is an exact ball.
pub fn apply_rational_function(r: &RationalFunction, t: &Ball, prec: u32) -> Result<Ball> {
    if r.is_identity() {
        return Ok(t.clone());
    }
    if t.is_exact() {
        let v = r.eval_exact(&t.mid().to_rational())?;
        return Ok(Ball::from_rational(&v, prec));
    }
    r.eval_ball(t, prec)
}

pub fn apply_exact(r: &RationalFunction, t: &BigRational) -> Result<BigRational> {
    r.eval_exact(t)
}

/// One depth of the image experiment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImageRow {
    pub depth: u32,
    /// Best exponent among convergents of `R(t_m)` that the error bound confirms.
    pub best: Option<ExponentMeasurement>,
    /// `R(t_m)`, exact.
    pub image_value: BigRational,
    /// Exponent of `R(t_m)` itself, when its denominator exceeds 1.
    pub image: Option<ExponentMeasurement>,
    /// Upper bound on `|R(L) - R(t_m)|`.
    pub error: BigRational,
    pub confirmed: usize,
}

/// Stable output row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageRowJson {
    #[serde(rename = "R")]
    pub r: String,
    pub xi: String,
    pub depth: u32,
    pub p: Option<String>,
    pub q: Option<String>,
    pub exponent: Option<String>,
    pub image_p: String,
    pub image_q: String,
    pub image_exponent: Option<String>,
    pub confirmed: usize,
}

impl ImageRow {
    pub fn to_json(&self, r: &RationalFunction, xi: &LacunaryNumber, prec: u32) -> ImageRowJson {
        let s = |m: &Option<ExponentMeasurement>, f: fn(&ExponentMeasurement) -> String| m.as_ref().map(f);
        ImageRowJson {
            r: r.to_string(),
            xi: xi.to_string(),
            depth: self.depth,
            p: s(&self.best, |m| m.p.to_string()),
            q: s(&self.best, |m| m.q.to_string()),
            exponent: self.best.as_ref().map(|m| m.exponent.to_string_prec(prec.min(64))),
            image_p: self.image_value.numer().to_string(),
            image_q: self.image_value.denom().to_string(),
            image_exponent: self.image.as_ref().map(|m| m.exponent.to_string_prec(prec.min(64))),
            confirmed: self.confirmed,
        }
    }
}

fn bits_of_inverse(x: &BigRational) -> u32 {
    let b = x.denom().bits() as i64 - x.numer().bits() as i64 + 1;
    b.clamp(0, u32::MAX as i64) as u32
}

/// Upper bound on `sup |R(s) - R(t)|` over `s` in `[t, t + tail]`.
fn image_error(r: &RationalFunction, t: &BigRational, tail: &BigRational, x: &BigRational) -> Result<BigRational> {
    let p = bits_of_inverse(tail) + 64;
    let lo = Dyadic::from_rational(t, p, Rounding::Floor);
    let hi = Dyadic::from_rational(&(t + tail), p, Rounding::Ceil);
    let img = r.eval_ball(&Ball::from_endpoints(&lo, &hi), p)?;
    let e = (img.mid().to_rational() - x).abs() + img.rad().to_rational();
    Ok(Dyadic::from_rational(&e, 32, Rounding::Ceil).to_rational())
}

fn measure(
    r: &RationalFunction,
    l: &LacunaryNumber,
    p: &BigInt,
    q: &BigInt,
    wp: u32,
    prec: u32,
) -> Result<Option<ExponentMeasurement>> {
    let c = BigRational::new(p.clone(), q.clone());
    let mut w = wp;
    loop {
        let rl = apply_rational_function(r, &l.to_ball(w)?, w)?;
        let d = rl.sub(&Ball::from_rational(&c, w + 8), w);
        if !d.contains_zero() {
            let exponent = exponent_of_distance(&d, q, prec)?;
            return Ok(Some(ExponentMeasurement {
                p: p.clone(),
                q: q.clone(),
                exponent,
            }));
        }
        if w >= PRECISION_CAP {
            log::warn!("distance from {r} at {l} to {c} undecided at {w} bits; skipped");
            return Ok(None);
        }
        w = (w * 2).min(PRECISION_CAP);
    }
}

fn row(r: &RationalFunction, l: &LacunaryNumber, m: u32, prec: u32) -> Result<ImageRow> {
    let tr = l.truncate(m)?;
    let t = tr.value();
    let x = r
        .eval_exact(&t)
        .map_err(|_| Error::PoleProximity(format!("{r} has a pole at the depth-{m} truncation {t}")))?;
    let err = image_error(r, &t, &tr.tail_bound, &x)?;
    let wp = prec.max(64 + bits_of_inverse(&err)).min(PRECISION_CAP);
    let candidates: Vec<_> = convergents_with_error(&x, &err, usize::MAX)
        .into_iter()
        .filter(|c| c.confirmed && c.q > BigInt::one())
        .collect();
    let mut best: Option<ExponentMeasurement> = None;
    for c in &candidates {
        if let Some(mm) = measure(r, l, &c.p, &c.q, wp, prec)? {
            let better = match &best {
                None => true,
                Some(b) => mm.exponent.mid().to_rational() > b.exponent.mid().to_rational(),
            };
            if better {
                best = Some(mm);
            }
        }
    }
    let image = if x.denom() > &BigInt::one() {
        measure(r, l, x.numer(), x.denom(), wp, prec)?
    } else {
        None
    };
    Ok(ImageRow {
        depth: m,
        best,
        image,
        image_value: x,
        error: err,
        confirmed: candidates.len(),
    })
}

/// For each depth `m`, measures approximation exponents of `R(L)` by the
/// convergents of `R(t_m)` that remain valid for `R(L)`.
pub fn image_exponent_experiment(
    r: &RationalFunction,
    l: &LacunaryNumber,
    depths: &[u32],
    prec: u32,
) -> Result<Vec<ImageRow>> {
    if prec < 2 {
        return Err(Error::InvalidArgument("precision must be at least 2".into()));
    }
    depths.par_iter().map(|&m| row(r, l, m, prec)).collect()
}
