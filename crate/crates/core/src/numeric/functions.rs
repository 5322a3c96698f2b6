//! Certified elementary functions on real and complex balls.
//!
//! Real kernels are independent power series with explicit remainder bounds:
//! `exp` (halving + squaring), `sin/cos` and `sinh/cosh` (halving + doubling
//! formulas), `ln` (square-root reduction + atanh series) and `atan`
//! (half-angle reduction + alternating series). The complex exponential has
//! its own complex Taylor kernel, so identities linking `exp(i x)` to the
//! real trigonometric kernels compare two separate computations.

use num_integer::Roots;

use super::ball::{Ball, SignVerdict};
use super::complex::ComplexBall;
use super::dyadic::{Dyadic, Rounding};
use crate::error::{Error, Result};

const BOUND_BITS: u32 = 40;
/// Arguments with `|x| >= 2^MAX_ARG_EXP` are refused by the exponential kernels.
const MAX_ARG_EXP: i64 = 40;

fn reduction_bits(wp: u32) -> i64 {
    ((wp as u64).sqrt() / 2).clamp(2, 32) as i64
}

/// Smallest `n` with `2 * bound(n) < 2^-target`, where `bound(n)` is an upper
/// bound on `ymax^(step*n + offset) / (step*n + offset)!`. Returns `(n, 2*bound)`.
fn series_cutoff(ymax: &Dyadic, target: u32, step: u64, offset: u64) -> (u64, Dyadic) {
    let limit = Dyadic::pow2(-(target as i64));
    // term for n = 0: ymax^offset / offset!
    let mut t = Dyadic::one();
    for k in 1..=offset {
        t = t
            .mul(ymax)
            .round(BOUND_BITS, Rounding::Ceil)
            .div(&Dyadic::from_i64(k as i64), BOUND_BITS, Rounding::Ceil);
    }
    let mut n = 0u64;
    loop {
        let twice = t.mul_2exp(1);
        if twice < limit || ymax.is_zero() {
            return (n, twice);
        }
        let base = step * n + offset;
        for k in base + 1..=base + step {
            t = t
                .mul(ymax)
                .round(BOUND_BITS, Rounding::Ceil)
                .div(&Dyadic::from_i64(k as i64), BOUND_BITS, Rounding::Ceil);
        }
        n += 1;
        if n > 1_000_000 {
            return (n, twice);
        }
    }
}

fn check_arg_size(x: &Dyadic, what: &str) -> Result<()> {
    if x.mag_exp() > MAX_ARG_EXP {
        return Err(Error::Undecided(format!("{what} argument too large")));
    }
    Ok(())
}

/// `exp(x)` for a real ball.
pub fn exp(x: &Ball, wp: u32) -> Result<Ball> {
    if x.is_exact() && x.mid().is_zero() {
        return Ok(Ball::one());
    }
    let m = x.max_abs();
    check_arg_size(&m, "exp")?;
    let s = (m.mag_exp() + reduction_bits(wp)).max(0);
    let p = wp + s as u32 + 24;
    let y = x.mul_2exp(-s);
    let (n, tail) = series_cutoff(&y.max_abs().max(Dyadic::pow2(-(p as i64))), p, 1, 0);
    let one = Ball::one();
    let mut acc = Ball::one();
    for k in (1..n.max(1)).rev() {
        acc = acc.mul(&y, p).div_u64(k, p).add(&one, p);
    }
    acc = acc.add_error(&tail);
    for _ in 0..s {
        acc = acc.sqr(p);
    }
    Ok(acc.round(wp))
}

/// `exp(z)` via a complex Taylor kernel.
pub fn exp_complex(z: &ComplexBall, wp: u32) -> Result<ComplexBall> {
    if z.is_real() {
        return Ok(ComplexBall::real(exp(&z.re, wp)?));
    }
    let m = z.max_abs();
    check_arg_size(&m, "exp")?;
    let s = (m.mag_exp() + reduction_bits(wp)).max(0);
    let p = wp + 2 * s as u32 + 24;
    let y = z.mul_2exp(-s);
    let (n, tail) = series_cutoff(&y.max_abs().max(Dyadic::pow2(-(p as i64))), p, 1, 0);
    let one = Ball::one();
    let mut acc = ComplexBall::one();
    for k in (1..n.max(1)).rev() {
        let t = acc.mul(&y, p);
        acc = ComplexBall::new(t.re.div_u64(k, p).add(&one, p), t.im.div_u64(k, p));
    }
    acc = ComplexBall::new(acc.re.add_error(&tail), acc.im.add_error(&tail));
    for _ in 0..s {
        acc = acc.sqr(p);
    }
    Ok(ComplexBall::new(acc.re.round(wp), acc.im.round(wp)))
}

/// `(sin x, cos x)` or, with `hyperbolic`, `(sinh x, cosh x)`.
fn trig_pair(x: &Ball, wp: u32, hyperbolic: bool) -> Result<(Ball, Ball)> {
    if x.is_exact() && x.mid().is_zero() {
        return Ok((Ball::zero(), Ball::one()));
    }
    let m = x.max_abs();
    check_arg_size(&m, "trigonometric")?;
    let s = (m.mag_exp() + reduction_bits(wp)).max(0);
    let p = wp + 2 * s as u32 + 24;
    let y = x.mul_2exp(-s);
    let y2 = y.sqr(p);
    let ymax = y.max_abs().max(Dyadic::pow2(-(p as i64)));
    // sin: y * sum (+-1)^i y^(2i) / (2i+1)!; cos: sum (+-1)^i y^(2i) / (2i)!
    let (ns, tail_s) = series_cutoff(&ymax, p, 2, 1);
    let (nc, tail_c) = series_cutoff(&ymax, p, 2, 0);
    let one = Ball::one();
    let step = |acc: &Ball, a: u64, b: u64| -> Ball {
        let t = acc.mul(&y2, p).div_u64(a * b, p);
        if hyperbolic {
            one.add(&t, p)
        } else {
            one.sub(&t, p)
        }
    };
    let mut sn = Ball::one();
    for i in (1..ns.max(1)).rev() {
        sn = step(&sn, 2 * i, 2 * i + 1);
    }
    let mut sn = sn.mul(&y, p).add_error(&tail_s);
    let mut cs = Ball::one();
    for i in (1..nc.max(1)).rev() {
        cs = step(&cs, 2 * i - 1, 2 * i);
    }
    let mut cs = cs.add_error(&tail_c);
    for _ in 0..s {
        let s2 = sn.mul(&cs, p).mul_2exp(1);
        let sq = sn.sqr(p).mul_2exp(1);
        let c2 = if hyperbolic { one.add(&sq, p) } else { one.sub(&sq, p) };
        sn = s2;
        cs = c2;
    }
    Ok((sn.round(wp), cs.round(wp)))
}

pub fn sin_cos(x: &Ball, wp: u32) -> Result<(Ball, Ball)> {
    trig_pair(x, wp, false)
}

pub fn sinh_cosh(x: &Ball, wp: u32) -> Result<(Ball, Ball)> {
    trig_pair(x, wp, true)
}

/// `atanh(t) = t * sum t^(2i) / (2i+1)` for `|t| <= 1/2`.
fn atanh_series(t: &Ball, p: u32) -> Ball {
    let tmax = t.max_abs().max(Dyadic::pow2(-(p as i64)));
    // terms |t|^(2i+1)/(2i+1) <= |t|^(2i+1); cut when |t|^(2n+1) < 2^-(p+2)
    let log_t = -tmax.log2_approx();
    let n = ((p as f64 + 4.0) / (2.0 * log_t.max(0.5))).ceil() as u64 + 1;
    let tail = {
        // 2 |t|^(2n+1) / (2n+1) bounds the remainder for |t| <= 1/2
        let mut b = Dyadic::one();
        for _ in 0..(2 * n + 1) {
            b = b.mul(&tmax).round(BOUND_BITS, Rounding::Ceil);
        }
        b.mul_2exp(1)
    };
    let t2 = t.sqr(p);
    let mut acc = Ball::one().div_u64(2 * n - 1, p);
    for i in (0..n - 1).rev() {
        let c = Ball::one().div_u64(2 * i + 1, p);
        acc = c.add(&acc.mul(&t2, p), p);
    }
    acc.mul(t, p).add_error(&tail)
}

/// `atan(t) = t * sum (-1)^i t^(2i) / (2i+1)` for `|t| < 1`.
fn atan_series(t: &Ball, p: u32) -> Ball {
    let tmax = t.max_abs().max(Dyadic::pow2(-(p as i64)));
    let log_t = -tmax.log2_approx();
    let n = ((p as f64 + 4.0) / (2.0 * log_t.max(0.25))).ceil() as u64 + 1;
    let tail = {
        let mut b = Dyadic::one();
        for _ in 0..(2 * n + 1) {
            b = b.mul(&tmax).round(BOUND_BITS, Rounding::Ceil);
        }
        b
    };
    let t2 = t.sqr(p);
    let mut acc = Ball::one().div_u64(2 * n - 1, p);
    for i in (0..n - 1).rev() {
        let c = Ball::one().div_u64(2 * i + 1, p);
        acc = c.sub(&acc.mul(&t2, p), p);
    }
    acc.mul(t, p).add_error(&tail)
}

pub fn ln2(wp: u32) -> Ball {
    let p = wp + 16;
    let third = Ball::from_rational(&num_rational::BigRational::new(1.into(), 3.into()), p);
    atanh_series(&third, p).mul_2exp(1).round(wp)
}

/// pi by Machin's formula.
pub fn pi(wp: u32) -> Ball {
    let p = wp + 16;
    let fifth = Ball::from_rational(&num_rational::BigRational::new(1.into(), 5.into()), p);
    let inv239 = Ball::from_rational(&num_rational::BigRational::new(1.into(), 239.into()), p);
    let a = atan_series(&fifth, p).mul_2exp(4);
    let b = atan_series(&inv239, p).mul_2exp(2);
    a.sub(&b, p).round(wp)
}

/// Natural logarithm of a positive ball.
pub fn ln(x: &Ball, wp: u32) -> Result<Ball> {
    match x.sign() {
        SignVerdict::Positive => {}
        SignVerdict::ContainsZero => {
            return Err(Error::SingularInput("log of a ball containing zero".into()))
        }
        SignVerdict::Negative => return Err(Error::Domain("real log of a negative ball".into())),
    }
    if x.is_exact() && *x.mid() == Dyadic::one() {
        return Ok(Ball::zero());
    }
    let j = reduction_bits(wp);
    let p = wp + 2 * j as u32 + 40;
    let k = x.mid().mag_exp() - 1;
    let mut z = x.mul_2exp(-k);
    for _ in 0..j {
        z = z.sqrt(p)?;
    }
    let one = Ball::one();
    let t = z.sub(&one, p).div(&z.add(&one, p), p)?;
    let ln_y = atanh_series(&t, p).mul_2exp(j + 1);
    let out = if k == 0 {
        ln_y
    } else {
        let kb = Ball::from_i64(k);
        let bits = 64 - k.unsigned_abs().leading_zeros();
        ln_y.add(&ln2(p + bits).mul(&kb, p), p)
    };
    Ok(out.round(wp))
}

/// Arctangent of a real ball.
pub fn atan(x: &Ball, wp: u32) -> Result<Ball> {
    if x.is_exact() && x.mid().is_zero() {
        return Ok(Ball::zero());
    }
    let mut j = reduction_bits(wp);
    if x.max_abs().mag_exp() > 0 {
        j += 1;
    }
    let p = wp + j as u32 + 40;
    let one = Ball::one();
    let mut z = x.clone();
    for _ in 0..j {
        let r = one.add(&z.sqr(p), p).sqrt(p)?;
        z = z.div(&one.add(&r, p), p)?;
    }
    Ok(atan_series(&z, p).mul_2exp(j).round(wp))
}

/// Principal argument of `x + i y`.
pub fn atan2(y: &Ball, x: &Ball, wp: u32) -> Result<Ball> {
    let p = wp + 8;
    if x.sign() == SignVerdict::Positive {
        return atan(&y.div(x, p)?, wp);
    }
    let half_pi = || pi(p).mul_2exp(-1);
    match y.sign() {
        SignVerdict::Positive => return Ok(half_pi().sub(&atan(&x.div(y, p)?, p)?, p).round(wp)),
        SignVerdict::Negative => {
            return Ok(half_pi().neg().sub(&atan(&x.div(y, p)?, p)?, p).round(wp))
        }
        SignVerdict::ContainsZero => {}
    }
    if x.sign() == SignVerdict::Negative {
        if y.is_exact() && y.mid().is_zero() {
            return Ok(pi(wp));
        }
        let a = atan(&y.div(x, p)?, p)?;
        if !y.lower().is_negative() {
            return Ok(pi(p).add(&a, p).round(wp));
        }
        if !y.upper().is_positive() {
            return Ok(pi(p).neg().add(&a, p).round(wp));
        }
        return Err(Error::Undecided("argument straddles the branch cut".into()));
    }
    Err(Error::SingularInput("argument of a ball containing zero".into()))
}

/// Principal complex logarithm.
pub fn log_complex(z: &ComplexBall, wp: u32) -> Result<ComplexBall> {
    if z.contains_zero() {
        return Err(Error::SingularInput("log of a ball containing zero".into()));
    }
    if z.is_real() {
        return match z.re.sign() {
            SignVerdict::Positive => Ok(ComplexBall::real(ln(&z.re, wp)?)),
            SignVerdict::Negative => Ok(ComplexBall::new(ln(&z.re.neg(), wp)?, pi(wp))),
            SignVerdict::ContainsZero => unreachable!("checked above"),
        };
    }
    let p = wp + 8;
    let arg = atan2(&z.im, &z.re, wp)?;
    let n2 = z.norm_sqr(p);
    let re = ln(&n2, p)?.mul_2exp(-1).round(wp);
    Ok(ComplexBall::new(re, arg))
}

/// Principal square root.
pub fn sqrt_complex(z: &ComplexBall, wp: u32) -> Result<ComplexBall> {
    let p = wp + 8;
    if z.is_real() {
        let r = &z.re;
        if !r.lower().is_negative() {
            return Ok(ComplexBall::real(r.sqrt(wp)?));
        }
        if !r.upper().is_positive() {
            return Ok(ComplexBall::new(Ball::zero(), r.neg().sqrt(wp)?));
        }
        // straddles zero on the real axis: both parts lie in [0, sqrt(max)]
        let re = r.sqrt(wp)?;
        let im = r.neg().sqrt(wp)?;
        return Ok(ComplexBall::new(re, im));
    }
    let a = z.norm_sqr(p).sqrt(p)?;
    let half = |b: Ball| b.mul_2exp(-1);
    if z.re.sign() == SignVerdict::Positive {
        let u = half(a.add(&z.re, p)).sqrt(p)?;
        let v = z.im.div(&u.mul_2exp(1), p)?;
        return Ok(ComplexBall::new(u.round(wp), v.round(wp)));
    }
    let im_sign = z.im.sign();
    if im_sign == SignVerdict::ContainsZero {
        return Err(Error::Undecided("square root argument straddles the branch cut".into()));
    }
    let w = half(a.sub(&z.re, p)).sqrt(p)?;
    let v = if im_sign == SignVerdict::Negative { w.neg() } else { w.clone() };
    let u = if z.re.sign() == SignVerdict::Negative {
        z.im.abs().div(&w.mul_2exp(1), p)?
    } else {
        half(a.add(&z.re, p)).sqrt(p)?
    };
    Ok(ComplexBall::new(u.round(wp), v.round(wp)))
}

/// The elementary functions available to `eval_fn`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionTag {
    Exp,
    Log,
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
    Arcsin,
    Arctan,
    Arcsinh,
    Arccosh,
    Artanh,
    Sqrt,
}

impl FunctionTag {
    pub const ALL: [FunctionTag; 14] = [
        FunctionTag::Exp,
        FunctionTag::Log,
        FunctionTag::Sin,
        FunctionTag::Cos,
        FunctionTag::Tan,
        FunctionTag::Sinh,
        FunctionTag::Cosh,
        FunctionTag::Tanh,
        FunctionTag::Arcsin,
        FunctionTag::Arctan,
        FunctionTag::Arcsinh,
        FunctionTag::Arccosh,
        FunctionTag::Artanh,
        FunctionTag::Sqrt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FunctionTag::Exp => "exp",
            FunctionTag::Log => "log",
            FunctionTag::Sin => "sin",
            FunctionTag::Cos => "cos",
            FunctionTag::Tan => "tan",
            FunctionTag::Sinh => "sinh",
            FunctionTag::Cosh => "cosh",
            FunctionTag::Tanh => "tanh",
            FunctionTag::Arcsin => "arcsin",
            FunctionTag::Arctan => "arctan",
            FunctionTag::Arcsinh => "arcsinh",
            FunctionTag::Arccosh => "arccosh",
            FunctionTag::Artanh => "artanh",
            FunctionTag::Sqrt => "sqrt",
        }
    }
}

impl std::str::FromStr for FunctionTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FunctionTag::ALL
            .iter()
            .copied()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::parse(0, format!("unknown function `{s}`")))
    }
}

impl std::fmt::Display for FunctionTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Result of `eval_fn`: the enclosure and whether it missed the radius target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluated {
    pub value: ComplexBall,
    pub low_precision: bool,
}

pub const DEFAULT_PRECISION_CAP: u32 = 16384;

fn sin_complex(z: &ComplexBall, wp: u32) -> Result<ComplexBall> {
    let (s, c) = sin_cos(&z.re, wp)?;
    if z.is_real() {
        return Ok(ComplexBall::real(s));
    }
    let (sh, ch) = sinh_cosh(&z.im, wp)?;
    Ok(ComplexBall::new(s.mul(&ch, wp), c.mul(&sh, wp)))
}

fn cos_complex(z: &ComplexBall, wp: u32) -> Result<ComplexBall> {
    let (s, c) = sin_cos(&z.re, wp)?;
    if z.is_real() {
        return Ok(ComplexBall::real(c));
    }
    let (sh, ch) = sinh_cosh(&z.im, wp)?;
    Ok(ComplexBall::new(c.mul(&ch, wp), s.mul(&sh, wp).neg()))
}

fn sinh_complex(z: &ComplexBall, wp: u32) -> Result<ComplexBall> {
    let (sh, ch) = sinh_cosh(&z.re, wp)?;
    if z.is_real() {
        return Ok(ComplexBall::real(sh));
    }
    let (s, c) = sin_cos(&z.im, wp)?;
    Ok(ComplexBall::new(sh.mul(&c, wp), ch.mul(&s, wp)))
}

fn cosh_complex(z: &ComplexBall, wp: u32) -> Result<ComplexBall> {
    let (sh, ch) = sinh_cosh(&z.re, wp)?;
    if z.is_real() {
        return Ok(ComplexBall::real(ch));
    }
    let (s, c) = sin_cos(&z.im, wp)?;
    Ok(ComplexBall::new(ch.mul(&c, wp), sh.mul(&s, wp)))
}

fn real_in_open_unit(x: &Ball) -> bool {
    let one = Dyadic::one();
    x.upper() < one && x.lower() > one.neg()
}

fn eval_once(f: FunctionTag, z: &ComplexBall, wp: u32) -> Result<ComplexBall> {
    let one = ComplexBall::one();
    match f {
        FunctionTag::Exp => exp_complex(z, wp),
        FunctionTag::Log => log_complex(z, wp),
        FunctionTag::Sqrt => sqrt_complex(z, wp),
        FunctionTag::Sin => sin_complex(z, wp),
        FunctionTag::Cos => cos_complex(z, wp),
        FunctionTag::Sinh => sinh_complex(z, wp),
        FunctionTag::Cosh => cosh_complex(z, wp),
        FunctionTag::Tan => {
            let c = cos_complex(z, wp)?;
            if c.contains_zero() {
                return Err(Error::SingularInput("tan at a pole".into()));
            }
            sin_complex(z, wp)?.div(&c, wp)
        }
        FunctionTag::Tanh => {
            let c = cosh_complex(z, wp)?;
            if c.contains_zero() {
                return Err(Error::SingularInput("tanh at a pole".into()));
            }
            sinh_complex(z, wp)?.div(&c, wp)
        }
        FunctionTag::Arcsin => {
            if z.is_real() && real_in_open_unit(&z.re) {
                let x = &z.re;
                let r = Ball::one().sub(&x.sqr(wp), wp).sqrt(wp)?;
                return Ok(ComplexBall::real(atan(&x.div(&r, wp)?, wp)?));
            }
            // -i log(i z + sqrt(1 - z^2))
            let r = sqrt_complex(&one.sub(&z.sqr(wp), wp), wp)?;
            Ok(log_complex(&z.mul_i().add(&r, wp), wp)?.mul_neg_i())
        }
        FunctionTag::Arctan => {
            if z.is_real() {
                return Ok(ComplexBall::real(atan(&z.re, wp)?));
            }
            // (i/2) (log(1 - i z) - log(1 + i z))
            let iz = z.mul_i();
            let a = log_complex(&one.sub(&iz, wp), wp)?;
            let b = log_complex(&one.add(&iz, wp), wp)?;
            Ok(a.sub(&b, wp).mul_i().mul_2exp(-1))
        }
        FunctionTag::Arcsinh => {
            if z.is_real() {
                let x = &z.re;
                let neg = x.upper().is_negative();
                let x = if neg { x.neg() } else { x.clone() };
                let r = x.sqr(wp).add(&Ball::one(), wp).sqrt(wp)?;
                let v = ln(&x.add(&r, wp), wp)?;
                return Ok(ComplexBall::real(if neg { v.neg() } else { v }));
            }
            let r = sqrt_complex(&z.sqr(wp).add(&one, wp), wp)?;
            log_complex(&z.add(&r, wp), wp)
        }
        FunctionTag::Arccosh => {
            if z.is_real() && z.re.lower() >= Dyadic::one() {
                let x = &z.re;
                let r = x.sqr(wp).sub(&Ball::one(), wp).sqrt(wp)?;
                return Ok(ComplexBall::real(ln(&x.add(&r, wp), wp)?));
            }
            // log(z + sqrt(z + 1) sqrt(z - 1))
            let a = sqrt_complex(&z.add(&one, wp), wp)?;
            let b = sqrt_complex(&z.sub(&one, wp), wp)?;
            log_complex(&z.add(&a.mul(&b, wp), wp), wp)
        }
        FunctionTag::Artanh => {
            if z.is_real() && real_in_open_unit(&z.re) {
                let x = &z.re;
                let q = Ball::one().add(x, wp).div(&Ball::one().sub(x, wp), wp)?;
                return Ok(ComplexBall::real(ln(&q, wp)?.mul_2exp(-1)));
            }
            let a = log_complex(&one.add(z, wp), wp)?;
            let b = log_complex(&one.sub(z, wp), wp)?;
            Ok(a.sub(&b, wp).mul_2exp(-1))
        }
    }
}

fn lower_abs(v: &ComplexBall) -> Dyadic {
    std::cmp::max(v.re.min_abs(), v.im.min_abs())
}

/// Principal value of `f(z)` with precision escalation up to `DEFAULT_PRECISION_CAP`.
pub fn eval_fn(f: FunctionTag, z: &ComplexBall, prec: u32) -> Result<Evaluated> {
    eval_fn_capped(f, z, prec, DEFAULT_PRECISION_CAP)
}

pub fn eval_fn_capped(f: FunctionTag, z: &ComplexBall, prec: u32, cap: u32) -> Result<Evaluated> {
    if f == FunctionTag::Log && z.contains_zero() {
        return Err(Error::SingularInput("log of a ball containing zero".into()));
    }
    let cap = cap.max(prec + 16);
    let mut wp = prec + 16;
    let mut prev: Option<Dyadic> = None;
    loop {
        match eval_once(f, z, wp) {
            Ok(v) => {
                let target = Dyadic::one().max(lower_abs(&v)).mul_2exp(-(prec as i64));
                let r = v.rad();
                if r <= target {
                    return Ok(Evaluated { value: v, low_precision: false });
                }
                let stalled = prev.as_ref().map_or(false, |p| r.mul_2exp(2) > *p);
                if wp >= cap || stalled {
                    return Ok(Evaluated { value: v, low_precision: true });
                }
                prev = Some(r);
            }
            Err(Error::Undecided(msg)) => {
                if wp >= cap {
                    return Err(Error::Undecided(msg));
                }
            }
            Err(Error::SingularInput(msg)) => {
                // only retry when the input is sharper than the working precision
                if wp >= cap || z.rad() > Dyadic::pow2(-(wp as i64)) {
                    return Err(Error::SingularInput(msg));
                }
            }
            Err(e) => return Err(e),
        }
        wp = (wp * 2).min(cap);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> Ball {
        Ball::from_rational(&BigRational::new(n.into(), d.into()), 200)
    }

    fn close(b: &Ball, v: f64, tol: f64) -> bool {
        (b.to_f64() - v).abs() < tol
    }

    #[test]
    fn kernels_match_float_reference() {
        let p = 128;
        assert!(close(&exp(&q(1, 1), p).unwrap(), std::f64::consts::E, 1e-15));
        assert!(close(&exp(&q(-7, 2), p).unwrap(), (-3.5f64).exp(), 1e-15));
        let (s, c) = sin_cos(&q(11, 100), p).unwrap();
        assert!(close(&s, 0.109_778_300_837_174_82, 1e-16));
        assert!(close(&c, 0.11f64.cos(), 1e-16));
        let (sh, ch) = sinh_cosh(&q(3, 2), p).unwrap();
        assert!(close(&sh, 1.5f64.sinh(), 1e-14));
        assert!(close(&ch, 1.5f64.cosh(), 1e-14));
        assert!(close(&ln(&q(10, 1), p).unwrap(), 10f64.ln(), 1e-15));
        assert!(close(&ln(&q(1, 1000), p).unwrap(), (0.001f64).ln(), 1e-14));
        assert!(close(&atan(&q(5, 1), p).unwrap(), 5f64.atan(), 1e-15));
        assert!(close(&pi(p), std::f64::consts::PI, 1e-16));
        assert!(close(&ln2(p), std::f64::consts::LN_2, 1e-16));
    }

    #[test]
    fn radii_track_precision() {
        for p in [64u32, 256, 1024] {
            let e = exp(&Ball::one(), p).unwrap();
            assert!(e.rad().log2_approx() < -(p as f64) + 3.0, "p={p}");
            let l = ln(&Ball::from_i64(3), p).unwrap();
            assert!(l.rad().log2_approx() < -(p as f64) + 3.0, "p={p}");
        }
    }

    #[test]
    fn pi_digits() {
        let p = pi(300);
        let s = p.to_string_prec(300);
        assert!(s.starts_with("3.14159265358979323846264338327950288419716939937510"), "{s}");
    }

    #[test]
    fn complex_exp_of_i_pi_is_minus_one() {
        let p = 128;
        let z = ComplexBall::new(Ball::zero(), pi(p + 20));
        let w = exp_complex(&z, p).unwrap();
        assert!(w.re.contains_dyadic(&Dyadic::from_i64(-1)));
        assert!(w.im.contains_dyadic(&Dyadic::zero()));
    }

    #[test]
    fn log_branch_cases() {
        let p = 96;
        let l = log_complex(&ComplexBall::from_i64(-1), p).unwrap();
        assert!(l.re.contains_dyadic(&Dyadic::zero()));
        assert!(l.im.overlaps(&pi(p)));
        assert!(matches!(
            log_complex(&ComplexBall::zero(), p),
            Err(Error::SingularInput(_))
        ));
        let straddle = ComplexBall::new(Ball::from_i64(-1), Ball::new(Dyadic::zero(), Dyadic::pow2(-30)));
        assert!(matches!(log_complex(&straddle, p), Err(Error::Undecided(_))));
    }

    #[test]
    fn eval_fn_examples() {
        let v = eval_fn(FunctionTag::Exp, &ComplexBall::zero(), 128).unwrap();
        assert_eq!(v.value, ComplexBall::one());
        let x = ComplexBall::real(q(11, 100));
        let v = eval_fn(FunctionTag::Sin, &x, 128).unwrap();
        assert!(!v.low_precision);
        assert!(close(&v.value.re, 0.109_778_300_837_174_82, 1e-16));
        assert!(matches!(
            eval_fn(FunctionTag::Log, &ComplexBall::zero(), 64),
            Err(Error::SingularInput(_))
        ));
        let half_pi = ComplexBall::real(pi(80).mul_2exp(-1).add_error(&Dyadic::pow2(-40)));
        assert!(matches!(eval_fn(FunctionTag::Tan, &half_pi, 64), Err(Error::SingularInput(_))));
    }

    #[test]
    fn wide_input_is_flagged() {
        let x = ComplexBall::real(Ball::new(Dyadic::one(), Dyadic::pow2(-20)));
        let v = eval_fn(FunctionTag::Exp, &x, 128).unwrap();
        assert!(v.low_precision);
        assert!(close(&v.value.re, std::f64::consts::E, 1e-5));
    }

    #[test]
    fn sqrt_principal_branch() {
        let p = 96;
        let r = sqrt_complex(&ComplexBall::from_i64(-4), p).unwrap();
        assert!(r.re.contains_dyadic(&Dyadic::zero()));
        assert!(r.im.contains_dyadic(&Dyadic::from_i64(2)));
        // sqrt(2i) = 1 + i
        let z = ComplexBall::new(Ball::zero(), Ball::from_i64(2));
        let r = sqrt_complex(&z, p).unwrap();
        assert!(r.re.contains_dyadic(&Dyadic::one()));
        assert!(r.im.contains_dyadic(&Dyadic::one()));
        // sqrt(-3 - 4i) = 1 - 2i
        let z = ComplexBall::new(Ball::from_i64(-3), Ball::from_i64(-4));
        let r = sqrt_complex(&z, p).unwrap();
        assert!(r.re.contains_dyadic(&Dyadic::one()));
        assert!(r.im.contains_dyadic(&Dyadic::from_i64(-2)));
    }
}
