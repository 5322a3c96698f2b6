//! Reference enumeration of every coefficient vector in `[-H, H]^(n+1)`.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Pow, ToPrimitive, Zero};
use rayon::prelude::*;

use super::poly::IntegerPolynomial;
use super::quadratic::{cmp_abs, QuadraticPoint};
use super::record::WnRecord;
use super::search::{check_args, finish_ball, finish_quadratic, finish_rational, into_record, SearchConfig};
use crate::error::{Error, Result};
use crate::numeric::dyadic::Dyadic;
use crate::numeric::spec::NumberSpec;

/// `(2H + 1)^(n + 1)`, if it fits.
pub fn naive_size(n: u32, h: &BigInt) -> Option<u128> {
    (2 * h.to_u128()?).checked_add(1)?.checked_pow(n + 1)
}

fn vectors_with_top(n: usize, h: i64, top: i64) -> impl Iterator<Item = Vec<i64>> {
    let mut a = vec![-h; n + 1];
    a[n] = top;
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = a.clone();
        let mut k = 0;
        while k < n {
            if a[k] < h {
                a[k] += 1;
                break;
            }
            a[k] = -h;
            k += 1;
        }
        done = k >= n;
        Some(out)
    })
}

/// Exhaustive `w_n(xi, H)`; the oracle for [`super::wn_search`].
pub fn wn_naive(x: &NumberSpec, n: u32, h: &BigInt, prec: u32) -> Result<WnRecord> {
    wn_naive_with(x, n, h, prec, &SearchConfig::default())
}

pub fn wn_naive_with(x: &NumberSpec, n: u32, h: &BigInt, prec: u32, cfg: &SearchConfig) -> Result<WnRecord> {
    check_args(n, h)?;
    let size = naive_size(n, h);
    if size.map_or(true, |s| s > cfg.enumeration_cap) {
        return Err(Error::EnumerationCap {
            size: size.map_or_else(|| "more than 2^128".to_string(), |s| s.to_string()),
            cap: cfg.enumeration_cap.to_string(),
        });
    }
    let hh = h.to_i64().expect("bounded by the enumeration cap");
    let nn = n as usize;
    let tops: Vec<i64> = (-hh..=hh).collect();

    if let Some(r) = x.as_rational() {
        let w: Vec<BigInt> = (0..=nn)
            .map(|k| Pow::pow(r.numer(), k as u64) * Pow::pow(r.denom(), (nn - k) as u64))
            .collect();
        let minima: Vec<(BigInt, Vec<IntegerPolynomial>)> = tops
            .par_iter()
            .filter_map(|&t| {
                let mut best: Option<(BigInt, Vec<IntegerPolynomial>)> = None;
                for a in vectors_with_top(nn, hh, t) {
                    let v: BigInt = a.iter().zip(&w).map(|(c, wk)| wk * *c).sum();
                    let v = num_traits::Signed::abs(&v);
                    if v.is_zero() {
                        continue;
                    }
                    match &mut best {
                        Some((b, ps)) if v == *b => ps.push(IntegerPolynomial::from_i64(&a)),
                        Some((b, _)) if v > *b => {}
                        _ => best = Some((v, vec![IntegerPolynomial::from_i64(&a)])),
                    }
                }
                best
            })
            .collect();
        let best = minima.iter().map(|(v, _)| v.clone()).min().expect("the constant 1 qualifies");
        let polys = normalized(minima.into_iter().filter(|(v, _)| *v == best).flat_map(|(_, p)| p));
        return Ok(into_record(x, n, h, prec, finish_rational(&r, polys)));
    }

    if let Some(q) = QuadraticPoint::from_spec(x) {
        let minima: Vec<((BigInt, BigInt), Vec<IntegerPolynomial>)> = tops
            .par_iter()
            .filter_map(|&t| {
                let mut best: Option<((BigInt, BigInt), Vec<IntegerPolynomial>)> = None;
                for a in vectors_with_top(nn, hh, t) {
                    let p = IntegerPolynomial::from_i64(&a);
                    let v = q.eval(&p, nn);
                    if v.0.is_zero() && v.1.is_zero() {
                        continue;
                    }
                    match &mut best {
                        Some((b, ps)) => match cmp_abs(&v, b, &q.d) {
                            Ordering::Less => best = Some((v, vec![p])),
                            Ordering::Equal => ps.push(p),
                            Ordering::Greater => {}
                        },
                        None => best = Some((v, vec![p])),
                    }
                }
                best
            })
            .collect();
        let polys = normalized(minima.into_iter().flat_map(|(_, p)| p));
        return Ok(into_record(x, n, h, prec, finish_quadratic(&q, nn, polys, prec)));
    }

    let xb = x.to_ball(prec + 32);
    let wp = prec + 32;
    let vals: Vec<(IntegerPolynomial, Dyadic, Dyadic)> = tops
        .par_iter()
        .flat_map_iter(|&t| {
            vectors_with_top(nn, hh, t).filter_map(|a| {
                let p = IntegerPolynomial::from_i64(&a);
                if p.is_zero() {
                    return None;
                }
                let b = p.eval_ball(&xb, wp).abs();
                Some((p, b.lower(), b.upper()))
            })
        })
        .collect();
    let best_hi = vals.iter().map(|v| v.2.clone()).min().expect("nonempty");
    let polys = normalized(vals.into_iter().filter(|v| v.1 <= best_hi).map(|v| v.0));
    let m = finish_ball(x, polys, prec, cfg.precision_cap)?;
    Ok(into_record(x, n, h, prec, m))
}

fn normalized(polys: impl Iterator<Item = IntegerPolynomial>) -> Vec<IntegerPolynomial> {
    let set: BTreeSet<Vec<BigInt>> = polys.map(|p| p.sign_normalized().coeffs().to_vec()).collect();
    set.into_iter().map(IntegerPolynomial::new).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn rec(x: &str, n: u32, h: i64) -> WnRecord {
        wn_naive(&x.parse().unwrap(), n, &BigInt::from(h), 128).unwrap()
    }

    #[test]
    fn examples() {
        let r = rec("rational:0/1", 3, 7);
        assert_eq!(r.argmin, IntegerPolynomial::from_i64(&[1]));
        assert_eq!(r.w_lo, BigRational::from_integer(1.into()));
        let r = rec("rational:1/2", 1, 1);
        assert_eq!(r.w_hi, BigRational::new(1.into(), 2.into()));
        let r = rec("rational:1/3", 1, 2);
        assert_eq!(r.argmin, IntegerPolynomial::from_i64(&[-1, 2]));
        let r = rec("sqrt:2/1", 2, 1);
        assert_eq!(r.argmin, IntegerPolynomial::from_i64(&[-1, 1]));
    }

    #[test]
    fn ball_path_matches_search() {
        for x in ["pi", "e", "liouville:3"] {
            let x: NumberSpec = x.parse().unwrap();
            let a = wn_naive(&x, 2, &BigInt::from(4), 64).unwrap();
            let b = super::super::search::wn_search(&x, 2, &BigInt::from(4), 64).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn cap() {
        let e = wn_naive(&NumberSpec::rational(1, 2), 3, &BigInt::from(100), 64).unwrap_err();
        assert_eq!(
            e,
            Error::EnumerationCap {
                size: "1632240801".into(),
                cap: "100000000".into()
            }
        );
    }
}
