use num_rational::BigRational;
use num_traits::Zero;

use super::poly::IntegerPolynomial;
use super::quadratic::QuadraticPoint;
use crate::error::{Error, Result};
use crate::numeric::ball::Ball;
use crate::numeric::functions::DEFAULT_PRECISION_CAP;
use crate::numeric::spec::NumberSpec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyValue {
    ExactZero,
    Exact(BigRational),
    Enclosure(Ball),
}

/// Ball evaluation at escalating precision until the enclosure excludes zero
/// with relative radius at most `2^-prec`.
pub fn eval_ball_escalating(p: &IntegerPolynomial, x: &NumberSpec, prec: u32, cap: u32) -> Result<Ball> {
    let mut wp = prec + 32;
    loop {
        let guard = 8 + 2 * p.coeffs().len() as u32;
        let b = p.eval_ball(&x.to_ball(wp + guard), wp + guard);
        if !b.contains_zero() && *b.rad() <= b.min_abs().mul_2exp(-(prec as i64)) {
            return Ok(b);
        }
        if wp >= cap {
            if b.contains_zero() {
                return Err(Error::Undecided(format!("sign of P(x) for P = {p}")));
            }
            return Ok(b);
        }
        wp = (wp * 2).min(cap);
    }
}

/// `P(x)`, decided exactly for rational and square-root specs.
pub fn poly_eval_certified(p: &IntegerPolynomial, x: &NumberSpec, prec: u32) -> Result<PolyValue> {
    if p.is_zero() {
        return Ok(PolyValue::ExactZero);
    }
    if let Some(r) = x.as_rational() {
        let v = p.eval_rational(&r);
        return Ok(if v.is_zero() { PolyValue::ExactZero } else { PolyValue::Exact(v) });
    }
    if let Some(q) = QuadraticPoint::from_spec(x) {
        let scale = p.degree().unwrap_or(0);
        let ab = q.eval(p, scale);
        if ab.0.is_zero() && ab.1.is_zero() {
            return Ok(PolyValue::ExactZero);
        }
        return Ok(PolyValue::Enclosure(q.to_ball(&ab, scale, prec)));
    }
    eval_ball_escalating(p, x, prec, DEFAULT_PRECISION_CAP).map(PolyValue::Enclosure)
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let sq2 = NumberSpec::sqrt(2, 1);
        assert_eq!(
            poly_eval_certified(&IntegerPolynomial::from_i64(&[-2, 0, 1]), &sq2, 64).unwrap(),
            PolyValue::ExactZero
        );
        assert_eq!(
            poly_eval_certified(&IntegerPolynomial::from_i64(&[-1, 1]), &NumberSpec::rational(1, 2), 64).unwrap(),
            PolyValue::Exact(BigRational::new((-1).into(), 2.into()))
        );
        let PolyValue::Enclosure(b) =
            poly_eval_certified(&IntegerPolynomial::from_i64(&[0, 1]), &NumberSpec::liouville(10), 128).unwrap()
        else {
            panic!()
        };
        assert!(b.rad().log2_approx() <= -128.0);
        assert!((b.to_f64() - 0.110001).abs() < 1e-12);
    }
}
