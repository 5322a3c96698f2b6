//! Relative-precision enclosures of `x - c` for a number spec `x` and rational `c`.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::ball::Ball;
use crate::numeric::functions::DEFAULT_PRECISION_CAP;
use crate::numeric::spec::{NumberSpec, Sign};

fn relatively_tight(b: &Ball, prec: u32) -> bool {
    !b.contains_zero() && *b.rad() <= b.min_abs().mul_2exp(-(prec as i64))
}

/// Enclosure of `x - c` whose radius is at most `2^-prec` times its magnitude,
/// or `None` when `x = c` exactly.
pub fn signed_distance(x: &NumberSpec, c: &BigRational, prec: u32) -> Result<Option<Ball>> {
    let p = prec + 16;
    match x {
        NumberSpec::ExactRational(r) => {
            let d = r - c;
            Ok((!d.is_zero()).then(|| Ball::from_rational(&d, p)))
        }
        NumberSpec::SqrtRational(r, s) => {
            if let Some(v) = x.as_rational() {
                let d = v - c;
                return Ok((!d.is_zero()).then(|| Ball::from_rational(&d, p)));
            }
            let root = Ball::from_rational(r, p + 8).sqrt(p + 4)?;
            let same_side = match s {
                Sign::Plus => !c.is_negative(),
                Sign::Minus => !c.is_positive(),
            };
            let d = if same_side {
                // |sqrt(r)| - |c| = (r - c^2) / (sqrt(r) + |c|)
                let num = Ball::from_rational(&(r - c * c), p + 8);
                let den = root.add(&Ball::from_rational(&c.abs(), p + 8), p + 4);
                let mag = num.div(&den, p)?;
                match s {
                    Sign::Plus => mag,
                    Sign::Minus => mag.neg(),
                }
            } else {
                let sum = root.add(&Ball::from_rational(&c.abs(), p + 8), p);
                match s {
                    Sign::Plus => sum,
                    Sign::Minus => sum.neg(),
                }
            };
            Ok(Some(d))
        }
        NumberSpec::Lacunary(l) => {
            let mut m = 1u32;
            loop {
                let (tp, tq) = l.partial_sum(m).map_err(|_| {
                    Error::Undecided("distance not resolved within representable truncations".into())
                })?;
                let r = BigRational::new(tp, tq) - c;
                let tail = l.tail_ball(m, p)?;
                let d = if r.is_zero() {
                    tail
                } else {
                    Ball::from_rational(&r, p + 8).add(&tail, p + 4)
                };
                if relatively_tight(&d, prec) {
                    return Ok(Some(d));
                }
                m += 1;
            }
        }
        NumberSpec::NamedConstant(_) => {
            let mut wp = p;
            loop {
                let d = x.to_ball(wp).sub(&Ball::from_rational(c, wp + 8), wp);
                if relatively_tight(&d, prec) {
                    return Ok(Some(d));
                }
                if wp >= DEFAULT_PRECISION_CAP {
                    return Err(Error::Undecided("distance to constant not separated from zero".into()));
                }
                wp = (wp * 2).min(DEFAULT_PRECISION_CAP);
            }
        }
    }
}

/// `q^-n` with relative precision `2^-prec`.
pub fn inverse_power(q: &num_bigint::BigInt, n: u32, prec: u32) -> Ball {
    let p = prec + 16 + 2 * (32 - n.leading_zeros());
    let inv = Ball::from_rational(&BigRational::new(1.into(), q.clone()), p);
    inv.pow_u64(n as u64, p).round(prec + 8)
}
