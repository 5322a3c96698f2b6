//! Sweeps over `H`, exponent estimates and heuristic class signatures.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::record::WnRecord;
use super::search::{wn_search_with, SearchConfig};
use super::store::Store;
use crate::error::{Error, Result};
use crate::numeric::spec::NumberSpec;

pub const DISCLAIMER: &str = "heuristic: w_n(xi) is a limsup over all H and cannot be determined from finitely many heights; \
this signature describes the sampled grid only";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sweep {
    pub records: Vec<WnRecord>,
    pub computed: usize,
    pub loaded: usize,
}

/// `start, start*factor, ...` up to and including `end`.
pub fn geometric_grid(start: &BigInt, factor: u32, end: &BigInt) -> Result<Vec<BigInt>> {
    if !start.is_positive() || factor < 2 || end < start {
        return Err(Error::InvalidArgument(
            "geometric grid needs 1 <= start <= end and factor >= 2".into(),
        ));
    }
    let mut out = Vec::new();
    let mut h = start.clone();
    while &h <= end {
        out.push(h.clone());
        h *= factor;
    }
    Ok(out)
}

/// `w_n(x, H)` for each `H` of the grid, reusing and extending the store.
pub fn wn_sweep(x: &NumberSpec, n: u32, grid: &[BigInt], prec: u32, store: &mut Store) -> Result<Sweep> {
    wn_sweep_with(x, n, grid, prec, store, &SearchConfig::default())
}

pub fn wn_sweep_with(
    x: &NumberSpec,
    n: u32,
    grid: &[BigInt],
    prec: u32,
    store: &mut Store,
    cfg: &SearchConfig,
) -> Result<Sweep> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("empty H grid".into()));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("H grid must be strictly increasing".into()));
    }
    let xs = x.to_string();
    let mut out = Sweep {
        records: Vec::with_capacity(grid.len()),
        computed: 0,
        loaded: 0,
    };
    for h in grid {
        let key = (xs.clone(), n, h.clone());
        let rec = match store.get(&key) {
            Some(r) => {
                out.loaded += 1;
                r.clone()
            }
            None => {
                let r = wn_search_with(x, n, h, prec, cfg)?;
                store.append(r.clone())?;
                out.computed += 1;
                r
            }
        };
        out.records.push(rec);
    }
    check_monotone_in_h(&out.records)?;
    Ok(out)
}

fn check_record(r: &WnRecord) -> Result<()> {
    if !r.w_lo.is_positive() {
        return Err(Error::Invariant(format!("w_lo <= 0 at H = {}", r.h)));
    }
    if r.argmin.height() > r.h || r.argmin.degree().map_or(true, |d| d > r.n as usize) {
        return Err(Error::Invariant(format!("argmin {} violates H = {}, n = {}", r.argmin, r.h, r.n)));
    }
    Ok(())
}

/// `H <= H'` implies `w_n(H') <= w_n(H)`; checked on the enclosures.
pub fn check_monotone_in_h(records: &[WnRecord]) -> Result<()> {
    for r in records {
        check_record(r)?;
    }
    for w in records.windows(2) {
        if w[0].h <= w[1].h && w[1].w_lo > w[0].w_hi {
            return Err(Error::Invariant(format!(
                "w_{} grows from H = {} to H = {}",
                w[0].n, w[0].h, w[1].h
            )));
        }
    }
    Ok(())
}

/// `w_{n+1}(H) <= w_n(H)` for every height present in both.
pub fn check_monotone_in_n(lower: &[WnRecord], higher: &[WnRecord]) -> Result<()> {
    for a in lower {
        for b in higher.iter().filter(|b| b.h == a.h && b.n > a.n) {
            if b.w_lo > a.w_hi {
                return Err(Error::Invariant(format!(
                    "w_{} exceeds w_{} at H = {}",
                    b.n, a.n, a.h
                )));
            }
        }
    }
    Ok(())
}

pub(crate) fn ln_int(x: &BigInt) -> f64 {
    let b = x.bits();
    if b <= 960 {
        x.to_f64().expect("finite").abs().ln()
    } else {
        let shift = b - 64;
        (x.abs() >> shift).to_f64().expect("finite").ln() + shift as f64 * std::f64::consts::LN_2
    }
}

pub(crate) fn ln_rational(r: &BigRational) -> f64 {
    ln_int(r.numer()) - ln_int(r.denom())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeEstimate {
    pub n: u32,
    /// `(log H, -log w)`, natural logarithms.
    pub points: Vec<(f64, f64)>,
    pub regression_slope: f64,
    pub max_ratio: f64,
    pub confidence: usize,
}

/// Least-squares slope of `-log w` against `log H`, and the largest ratio.
///
/// `log w` is taken at the geometric midpoint of `[w_lo, w_hi]`.
pub fn estimate_wn_exponent(records: &[WnRecord]) -> Result<SlopeEstimate> {
    if records.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "{} record(s); a slope needs at least 2",
            records.len()
        )));
    }
    let n = records[0].n;
    if records.iter().any(|r| r.n != n) {
        return Err(Error::InvalidArgument("records mix degree bounds".into()));
    }
    let mut hs: Vec<&BigInt> = records.iter().map(|r| &r.h).collect();
    hs.sort();
    if hs.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidArgument("records repeat a height".into()));
    }
    let points: Vec<(f64, f64)> = records
        .iter()
        .map(|r| (ln_int(&r.h), -(ln_rational(&r.w_lo) + ln_rational(&r.w_hi)) / 2.0))
        .collect();
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let max_ratio = points
        .iter()
        .filter(|p| p.0 > 0.0)
        .map(|p| p.1 / p.0)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(SlopeEstimate {
        n,
        regression_slope: sxy / sxx,
        max_ratio,
        confidence: points.len(),
        points,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Signature {
    AlgebraicLike,
    SLike,
    ULike,
    Inconclusive,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Signature::AlgebraicLike => "algebraic-like",
            Signature::SLike => "S-like",
            Signature::ULike => "U-like",
            Signature::Inconclusive => "inconclusive",
        })
    }
}

/// U-like once `max_ratio` for degree `n` exceeds this.
pub fn u_threshold(n: u32) -> f64 {
    2.0 * n as f64 + 0.5
}

/// Slope ceiling for an algebraic number of degree `d`.
pub fn algebraic_threshold(n: u32, d: u32) -> f64 {
    n.min(d.saturating_sub(1)) as f64 + 0.3
}

/// Slope ceiling for S-like behaviour (`w_n` stays near `n`).
pub fn s_threshold(n: u32) -> f64 {
    n as f64 + 1.0
}

/// Pure classification of per-degree estimates.
///
/// `degree` is the algebraic degree of an exactly algebraic spec.
pub fn classify(estimates: &[SlopeEstimate], degree: Option<u32>) -> Signature {
    if estimates.is_empty() {
        return Signature::Inconclusive;
    }
    if estimates.iter().any(|e| e.max_ratio > u_threshold(e.n)) {
        return Signature::ULike;
    }
    if let Some(d) = degree {
        return if estimates.iter().all(|e| e.regression_slope <= algebraic_threshold(e.n, d)) {
            Signature::AlgebraicLike
        } else {
            Signature::Inconclusive
        };
    }
    if estimates.iter().all(|e| e.confidence >= 3 && e.regression_slope <= s_threshold(e.n)) {
        Signature::SLike
    } else {
        Signature::Inconclusive
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub xi: String,
    pub estimates: Vec<SlopeEstimate>,
    pub signature: Signature,
    /// Largest `n` with `base^((n+1)!) <= max H` for lacunary `xi`: the
    /// deepest truncation the grid can see.
    pub grid_resolution: Option<u32>,
    pub disclaimer: String,
}

fn grid_resolution(x: &NumberSpec, max_h: &BigInt) -> Option<u32> {
    let NumberSpec::Lacunary(l) = x else {
        return None;
    };
    let base = BigInt::from(l.base());
    let mut best = None;
    let mut fact: u32 = 1;
    for n in 1..=12u32 {
        fact = fact.checked_mul(n + 1)?;
        if base.bits().saturating_sub(1) * fact as u64 > max_h.bits() {
            break;
        }
        if num_traits::Pow::pow(&base, fact) <= *max_h {
            best = Some(n);
        } else {
            break;
        }
    }
    best
}

/// Sweeps `n = 1..=n_max` over the grid and classifies the estimates.
pub fn class_signature(
    x: &NumberSpec,
    n_max: u32,
    grid: &[BigInt],
    prec: u32,
    store: &mut Store,
) -> Result<ClassReport> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    if grid.is_empty() {
        return Err(Error::InvalidArgument("empty H grid".into()));
    }
    let mut estimates = Vec::new();
    let mut prev: Option<Vec<WnRecord>> = None;
    for n in 1..=n_max {
        let sweep = wn_sweep(x, n, grid, prec, store)?;
        if let Some(p) = &prev {
            check_monotone_in_n(p, &sweep.records)?;
        }
        estimates.push(estimate_wn_exponent(&sweep.records)?);
        prev = Some(sweep.records);
    }
    let degree = x.algebraic_degree();
    let max_h = grid.last().cloned().unwrap_or_else(BigInt::one);
    Ok(ClassReport {
        xi: x.to_string(),
        signature: classify(&estimates, degree),
        estimates,
        grid_resolution: grid_resolution(x, &max_h),
        disclaimer: DISCLAIMER.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mahler::IntegerPolynomial;

    fn fake(n: u32, h: i64, w: BigRational) -> WnRecord {
        WnRecord::new(NumberSpec::rational(1, 7), n, h.into(), &w, &w, IntegerPolynomial::from_i64(&[1]), 128, 0)
    }

    fn pow10(e: i32) -> BigRational {
        BigRational::new(1.into(), num_traits::Pow::pow(BigInt::from(10), e as u32))
    }

    #[test]
    fn collinear_slope() {
        let recs = [fake(1, 100, pow10(4)), fake(1, 1000, pow10(6)), fake(1, 10000, pow10(8))];
        let e = estimate_wn_exponent(&recs).unwrap();
        assert!((e.regression_slope - 2.0).abs() < 1e-9);
        assert!((e.max_ratio - 2.0).abs() < 1e-9);
        assert_eq!(e.confidence, 3);
        assert!(matches!(estimate_wn_exponent(&recs[..1]), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn monotone_violation_is_reported() {
        let recs = [fake(1, 10, pow10(3)), fake(1, 20, pow10(2))];
        assert!(matches!(check_monotone_in_h(&recs), Err(Error::Invariant(_))));
    }

    #[test]
    fn grid_checks() {
        let mut s = Store::in_memory();
        let x = NumberSpec::sqrt(2, 1);
        assert!(wn_sweep(&x, 1, &[], 64, &mut s).is_err());
        assert!(wn_sweep(&x, 1, &[4.into(), 4.into()], 64, &mut s).is_err());
        assert!(class_signature(&x, 1, &[], 64, &mut s).is_err());
        let g = geometric_grid(&16.into(), 4, &1024.into()).unwrap();
        assert_eq!(g, [16, 64, 256, 1024].map(BigInt::from));
    }

    #[test]
    fn resolution() {
        let l = NumberSpec::liouville(10);
        assert_eq!(grid_resolution(&l, &BigInt::from(1_000_000)), Some(2));
        assert_eq!(grid_resolution(&l, &BigInt::from(99)), None);
    }
}
