//! `w_n(xi, H) = min { |P(xi)| : P in Z[X], H(P) <= H, deg P <= n, P(xi) != 0 }`.
//!
//! The pruned search enumerates `(a_1, ..., a_n)` with a positive leading
//! coefficient and tries only the constant terms nearest to `-sum a_k xi^k`.
//! Candidates are screened with fixed-point integer arithmetic carrying an
//! explicit error bound; every candidate whose lower bound does not exceed the
//! best upper bound survives, and survivors are then decided exactly (rational
//! and quadratic `xi`) or by balls at rising precision.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use super::poly::IntegerPolynomial;
use super::quadratic::{cmp_abs, QuadraticPoint};
use super::record::WnRecord;
use crate::error::{Error, Result};
use crate::numeric::ball::Ball;
use crate::numeric::dyadic::{Dyadic, Rounding};
use crate::numeric::functions::DEFAULT_PRECISION_CAP;
use crate::numeric::spec::NumberSpec;

pub const DEFAULT_ENUMERATION_CAP: u128 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub enumeration_cap: u128,
    pub precision_cap: u32,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            precision_cap: DEFAULT_PRECISION_CAP,
        }
    }
}

pub(crate) trait Acc: Clone + Send + Sync + Ord + std::fmt::Debug {
    fn zero() -> Self;
    fn from_big(b: &BigInt) -> Self;
    fn mul_i64(&self, a: i64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn abs(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// `floor(self / d)` for `d > 0`, clamped to `[-lim, lim]`.
    fn div_floor_clamp(&self, d: &Self, lim: i64) -> i64;
}

impl Acc for i128 {
    fn zero() -> Self {
        0
    }
    fn from_big(b: &BigInt) -> Self {
        b.to_i128().expect("checked to fit")
    }
    fn mul_i64(&self, a: i64) -> Self {
        self * a as i128
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn abs(&self) -> Self {
        i128::abs(*self)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn div_floor_clamp(&self, d: &Self, lim: i64) -> i64 {
        self.div_euclid(*d).clamp(-(lim as i128), lim as i128) as i64
    }
}

impl Acc for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_big(b: &BigInt) -> Self {
        b.clone()
    }
    fn mul_i64(&self, a: i64) -> Self {
        self * a
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn div_floor_clamp(&self, d: &Self, lim: i64) -> i64 {
        let q = Integer::div_floor(self, d);
        let l = BigInt::from(lim);
        if q > l {
            lim
        } else if q < -&l {
            -lim
        } else {
            q.to_i64().expect("within lim")
        }
    }
}

/// Fixed-point (or exact integer) images of `xi^k`, `k = 0..=n`.
struct Screen<T> {
    n: usize,
    h: i64,
    w: Vec<T>,
    e: Vec<T>,
    exact: bool,
    widen: i64,
    quad: Option<QuadraticPoint>,
}

#[derive(Clone, Debug)]
struct Cand<T> {
    coeffs: Vec<i64>,
    lo: T,
}

struct BlockResult<T> {
    cands: Vec<Cand<T>>,
    best_hi: Option<T>,
}

impl<T: Acc> Screen<T> {
    fn scale(&self) -> &T {
        &self.w[0]
    }

    fn is_exact_zero(&self, a: &[i64]) -> bool {
        match &self.quad {
            Some(q) => {
                let p = IntegerPolynomial::from_i64(a);
                let (x, y) = q.eval(&p, self.n);
                Zero::is_zero(&x) && Zero::is_zero(&y)
            }
            None => false,
        }
    }

    fn offer(&self, a: &[i64], lo: T, hi: T, out: &mut BlockResult<T>) {
        if let Some(b) = &out.best_hi {
            if lo > *b {
                return;
            }
        }
        if out.best_hi.as_ref().map_or(true, |b| hi < *b) {
            out.best_hi = Some(hi.clone());
        }
        out.cands.push(Cand { coeffs: a.to_vec(), lo });
        if out.cands.len() >= 4096 && out.cands.len().is_power_of_two() {
            let b = out.best_hi.clone().expect("set above");
            out.cands.retain(|c| c.lo <= b);
        }
    }

    /// Try the constant terms nearest to `-sum_{k>=1} a_k xi^k`.
    fn process(&self, a: &mut [i64], positive_only: bool, out: &mut BlockResult<T>) {
        let mut t = T::zero();
        let mut err = T::zero();
        for k in 1..=self.n {
            if a[k] != 0 {
                t = t.add(&self.w[k].mul_i64(a[k]));
                if !self.exact {
                    err = err.add(&self.e[k].mul_i64(a[k].abs()));
                }
            }
        }
        let s = self.scale();
        let lim = self.h.saturating_add(2);
        let neg_t = t.neg();
        let (mut lo_c, mut hi_c, hole) = if self.exact {
            let f = neg_t.div_floor_clamp(s, lim);
            let exact_int = neg_t.sub(&s.mul_i64(f)).is_zero();
            if exact_int {
                (f - 1, f + 1, Some(f))
            } else {
                (f, f + 1, None)
            }
        } else {
            let lo = neg_t.sub(&err).div_floor_clamp(s, lim);
            let hi = neg_t.add(&err).div_floor_clamp(s, lim).saturating_add(1);
            (lo - self.widen, hi + self.widen, None)
        };
        lo_c = lo_c.max(-self.h);
        hi_c = hi_c.min(self.h);
        if lo_c > hi_c {
            // the nearest admissible constant is an endpoint
            if lo_c > self.h {
                lo_c = self.h;
                hi_c = self.h;
            } else {
                lo_c = -self.h;
                hi_c = -self.h;
            }
        }
        if positive_only {
            lo_c = lo_c.max(1);
        }
        for a0 in lo_c..=hi_c {
            if hole == Some(a0) {
                continue;
            }
            a[0] = a0;
            let v = t.add(&s.mul_i64(a0)).abs();
            if self.exact {
                if v.is_zero() {
                    continue;
                }
                self.offer(a, v.clone(), v, out);
            } else {
                let lo = if v <= err { T::zero() } else { v.sub(&err) };
                let hi = v.add(&err);
                if lo.is_zero() && self.is_exact_zero(a) {
                    continue;
                }
                self.offer(a, lo, hi, out);
            }
        }
        a[0] = 0;
    }

    fn scan_block(&self, d: usize, leads: (i64, i64)) -> BlockResult<T> {
        let mut out = BlockResult {
            cands: Vec::new(),
            best_hi: None,
        };
        let mut a = vec![0i64; self.n + 1];
        for lead in leads.0..=leads.1 {
            a[d] = lead;
            for slot in a.iter_mut().take(d).skip(1) {
                *slot = -self.h;
            }
            loop {
                self.process(&mut a, false, &mut out);
                // odometer over a_1 .. a_{d-1}
                let mut k = 1;
                while k < d {
                    if a[k] < self.h {
                        a[k] += 1;
                        break;
                    }
                    a[k] = -self.h;
                    k += 1;
                }
                if k >= d {
                    break;
                }
            }
        }
        out
    }

    fn run(&self) -> Vec<Cand<T>> {
        let h = self.h;
        let chunk = (h / 64).max(1);
        let mut blocks = Vec::new();
        for d in 1..=self.n {
            let mut s = 1;
            while s <= h {
                let e = (s + chunk - 1).min(h);
                blocks.push((d, (s, e)));
                s = e + 1;
            }
        }
        let mut results: Vec<BlockResult<T>> =
            blocks.par_iter().map(|&(d, r)| self.scan_block(d, r)).collect();
        let mut constant = BlockResult {
            cands: Vec::new(),
            best_hi: None,
        };
        let mut a = vec![0i64; self.n + 1];
        self.process(&mut a, true, &mut constant);
        results.push(constant);
        let best = results
            .iter()
            .filter_map(|r| r.best_hi.clone())
            .min()
            .expect("the constant 1 is always a candidate");
        results
            .into_iter()
            .flat_map(|r| r.cands)
            .filter(|c| c.lo <= best)
            .collect()
    }
}

/// Number of coefficient vectors the pruned search visits.
pub fn search_size(n: u32, h: &BigInt) -> Option<u128> {
    let h = h.to_u128()?;
    let mut total: u128 = 1;
    let mut inner: u128 = 1;
    for _ in 1..=n {
        total = total.checked_add(h.checked_mul(inner)?)?;
        inner = inner.checked_mul(2 * h + 1)?;
    }
    Some(total)
}

/// Winner of an exact or refined minimization.
pub(crate) struct Minimum {
    pub argmin: IntegerPolynomial,
    pub lo: BigRational,
    pub hi: BigRational,
    pub skipped: u64,
}

fn pick_canonical(polys: impl IntoIterator<Item = IntegerPolynomial>) -> IntegerPolynomial {
    polys
        .into_iter()
        .min_by(|a, b| a.canonical_cmp(b))
        .expect("nonempty")
}

/// Exact minimum of `|P(xi)|` over polynomials with rational values.
pub(crate) fn finish_rational(x: &BigRational, polys: Vec<IntegerPolynomial>) -> Minimum {
    let vals: Vec<(IntegerPolynomial, BigRational)> = polys
        .into_iter()
        .map(|p| {
            let v = p.eval_rational(x).abs();
            (p, v)
        })
        .filter(|(_, v)| !v.is_zero())
        .collect();
    let best = vals.iter().map(|(_, v)| v.clone()).min().expect("nonempty");
    let argmin = pick_canonical(vals.into_iter().filter(|(_, v)| *v == best).map(|(p, _)| p));
    Minimum {
        argmin,
        lo: best.clone(),
        hi: best,
        skipped: 0,
    }
}

/// Exact minimum over a quadratic point.
pub(crate) fn finish_quadratic(q: &QuadraticPoint, n: usize, polys: Vec<IntegerPolynomial>, prec: u32) -> Minimum {
    let vals: Vec<(IntegerPolynomial, (BigInt, BigInt))> = polys
        .into_iter()
        .map(|p| {
            let v = q.eval(&p, n);
            (p, v)
        })
        .filter(|(_, (a, b))| !(Zero::is_zero(a) && Zero::is_zero(b)))
        .collect();
    let mut best = vals[0].1.clone();
    for (_, v) in &vals[1..] {
        if cmp_abs(v, &best, &q.d) == Ordering::Less {
            best = v.clone();
        }
    }
    let argmin = pick_canonical(
        vals.into_iter()
            .filter(|(_, v)| cmp_abs(v, &best, &q.d) == Ordering::Equal)
            .map(|(p, _)| p),
    );
    let ball = q.to_ball(&best, n, prec + 16).abs();
    Minimum {
        argmin,
        lo: ball.lower().to_rational(),
        hi: ball.upper().to_rational(),
        skipped: 0,
    }
}

/// Minimum over ball-valued evaluations, refining precision until one
/// contender remains or the cap is reached.
pub(crate) fn finish_ball(x: &NumberSpec, polys: Vec<IntegerPolynomial>, prec: u32, cap: u32) -> Result<Minimum> {
    let mut cands = polys;
    let mut wp = prec + 32;
    loop {
        let at_cap = wp >= cap;
        let guard = 16 + 4 * cands.iter().map(|p| p.coeffs().len()).max().unwrap_or(1) as u32;
        let xb = x.to_ball(wp + guard);
        let mut vals: Vec<(IntegerPolynomial, Ball)> = cands
            .par_iter()
            .map(|p| (p.clone(), p.eval_ball(&xb, wp + guard).abs()))
            .collect();
        let mut skipped = 0u64;
        if at_cap {
            let before = vals.len();
            vals.retain(|(_, b)| !b.contains_zero());
            skipped = (before - vals.len()) as u64;
            if vals.is_empty() {
                return Err(Error::Undecided("every contender straddles zero at the precision cap".into()));
            }
        }
        let best_hi = vals.iter().map(|(_, b)| b.upper()).min().expect("nonempty");
        vals.retain(|(_, b)| b.lower() <= best_hi);
        let tight = |b: &Ball| !b.contains_zero() && *b.rad() <= b.min_abs().mul_2exp(-(prec as i64));
        if (vals.len() == 1 && tight(&vals[0].1)) || at_cap {
            let lo = vals.iter().map(|(_, b)| b.lower()).min().expect("nonempty");
            let (argmin, ball) = vals
                .into_iter()
                .min_by(|a, b| a.0.canonical_cmp(&b.0))
                .expect("nonempty");
            if skipped > 0 {
                log::warn!("{skipped} polynomials skipped: sign undecided at the precision cap");
            }
            return Ok(Minimum {
                argmin,
                lo: lo.to_rational(),
                hi: ball.upper().to_rational(),
                skipped,
            });
        }
        cands = vals.into_iter().map(|(p, _)| p).collect();
        wp = (wp * 2).min(cap);
    }
}

fn fixed_point_screen<T: Acc>(x: &NumberSpec, n: usize, h: i64, f: u32) -> Screen<T> {
    let p = f + 64;
    let xb = x.to_ball(p + 8);
    let mut w = Vec::with_capacity(n + 1);
    let mut e = Vec::with_capacity(n + 1);
    let one = Dyadic::one();
    for k in 0..=n {
        if k == 0 {
            w.push(T::from_big(&(BigInt::one() << f)));
            e.push(T::zero());
            continue;
        }
        let b = xb.pow_u64(k as u64, p);
        let mid = b.mid().mul_2exp(f as i64);
        w.push(T::from_big(&mid.floor()));
        let rad = b.rad().mul_2exp(f as i64).add(&one).round(30, Rounding::Ceil);
        e.push(T::from_big(&(rad.ceil() + 1)));
    }
    let quad = QuadraticPoint::from_spec(x);
    Screen {
        n,
        h,
        w,
        e,
        exact: false,
        widen: if quad.is_some() { 1 } else { 0 },
        quad,
    }
}

fn exact_screen<T: Acc>(x: &BigRational, n: usize, h: i64) -> Screen<T> {
    let (u, v) = (x.numer(), x.denom());
    let w = (0..=n)
        .map(|k| T::from_big(&(Pow::pow(u, k as u64) * Pow::pow(v, (n - k) as u64))))
        .collect();
    Screen {
        n,
        h,
        w,
        e: vec![T::zero(); n + 1],
        exact: true,
        widen: 0,
        quad: None,
    }
}

fn bits_of(b: &BigInt) -> u64 {
    b.bits()
}

fn to_polys(cands: Vec<Cand<impl Acc>>) -> Vec<IntegerPolynomial> {
    cands.into_iter().map(|c| IntegerPolynomial::from_i64(&c.coeffs)).collect()
}

pub(crate) fn check_args(n: u32, h: &BigInt) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("degree bound n must be at least 1".into()));
    }
    if !h.is_positive() {
        return Err(Error::InvalidArgument("height bound H must be at least 1".into()));
    }
    Ok(())
}

pub(crate) fn into_record(x: &NumberSpec, n: u32, h: &BigInt, prec: u32, m: Minimum) -> WnRecord {
    WnRecord::new(x.clone(), n, h.clone(), &m.lo, &m.hi, m.argmin, prec, m.skipped)
}

/// Pruned exhaustive search for `w_n(xi, H)`.
pub fn wn_search(x: &NumberSpec, n: u32, h: &BigInt, prec: u32) -> Result<WnRecord> {
    wn_search_with(x, n, h, prec, &SearchConfig::default())
}

pub fn wn_search_with(x: &NumberSpec, n: u32, h: &BigInt, prec: u32, cfg: &SearchConfig) -> Result<WnRecord> {
    check_args(n, h)?;
    let size = search_size(n, h);
    if size.map_or(true, |s| s > cfg.enumeration_cap) {
        return Err(Error::EnumerationCap {
            size: size.map_or_else(|| "more than 2^128".to_string(), |s| s.to_string()),
            cap: cfg.enumeration_cap.to_string(),
        });
    }
    let hh = h.to_i64().expect("bounded by the enumeration cap");
    let nn = n as usize;
    let polys = if let Some(r) = x.as_rational() {
        let total: BigInt = (0..=nn)
            .map(|k| Pow::pow(Signed::abs(r.numer()), k as u64) * Pow::pow(r.denom(), (nn - k) as u64))
            .sum();
        let polys = if bits_of(&(total * hh)) < 124 {
            to_polys(exact_screen::<i128>(&r, nn, hh).run())
        } else {
            to_polys(exact_screen::<BigInt>(&r, nn, hh).run())
        };
        return Ok(into_record(x, n, h, prec, finish_rational(&r, polys)));
    } else {
        let mag = x.to_ball(32).max_abs();
        let grow = if mag.mag_exp() > 0 { mag.mag_exp() as u64 * nn as u64 } else { 0 };
        let used = bits_of(h) + 64 - (nn as u64 + 1).leading_zeros() as u64 + grow + 3;
        if used + 40 <= 124 {
            to_polys(fixed_point_screen::<i128>(x, nn, hh, (124 - used) as u32).run())
        } else {
            let f = prec.max(128) + used as u32;
            to_polys(fixed_point_screen::<BigInt>(x, nn, hh, f).run())
        }
    };
    let m = match QuadraticPoint::from_spec(x) {
        Some(q) => finish_quadratic(&q, nn, polys, prec),
        None => finish_ball(x, polys, prec, cfg.precision_cap)?,
    };
    Ok(into_record(x, n, h, prec, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(x: &str, n: u32, h: i64) -> WnRecord {
        wn_search(&x.parse().unwrap(), n, &BigInt::from(h), 128).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn pinned_examples() {
        let r = rec("rational:0/1", 3, 7);
        assert_eq!(r.argmin, IntegerPolynomial::from_i64(&[1]));
        assert_eq!((r.w_lo.clone(), r.w_hi.clone()), (q(1, 1), q(1, 1)));
        let r = rec("rational:1/2", 1, 1);
        assert_eq!(r.w_lo, q(1, 2));
        let r = rec("rational:1/3", 1, 2);
        assert_eq!(r.argmin, IntegerPolynomial::from_i64(&[-1, 2]));
        assert!(r.w_lo < q(1, 3) && q(1, 3) < r.w_hi);
        let r = rec("sqrt:2/1", 2, 1);
        assert_eq!(r.argmin, IntegerPolynomial::from_i64(&[-1, 1]));
        let v = std::f64::consts::SQRT_2 - 1.0;
        assert!((r.w_lo.to_f64().unwrap() - v).abs() < 1e-15);
    }

    #[test]
    fn liouville_truncation_polynomial() {
        let r = rec("liouville:10", 1, 1_000_000);
        assert_eq!(r.argmin, IntegerPolynomial::from_i64(&[-110001, 1000000]));
        assert!(r.w_hi <= q(2, 1) * BigRational::new(1.into(), Pow::pow(BigInt::from(10), 18u32)));
        assert_eq!(r.skipped, 0);
    }

    #[test]
    fn argument_checks() {
        let x = NumberSpec::rational(1, 2);
        assert!(matches!(wn_search(&x, 1, &BigInt::from(0), 64), Err(Error::InvalidArgument(_))));
        assert!(matches!(
            wn_search(&x, 4, &BigInt::from(1000), 64),
            Err(Error::EnumerationCap { .. })
        ));
    }
}
