use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::poly::{dependence_residual, BivariatePolynomial};
use crate::error::{Error, Result};
use crate::numeric::ball::Ball;
use crate::numeric::complex::ComplexBall;
use crate::numeric::dyadic::Dyadic;
use crate::numeric::functions::{eval_fn, pi, FunctionTag, DEFAULT_PRECISION_CAP};
use crate::numeric::spec::NumberSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Expected {
    Vanishes,
    NonVanishing,
    UnderTest,
}

/// Where a case's residual is defined on the principal branches used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Domain {
    Real,
    /// `|alpha| < 1`
    OpenUnit,
    /// `cos alpha != 0`
    CosNonzero,
    /// `sin alpha != 0` and `cos alpha != 0`
    SinCosNonzero,
}

/// `|alpha|` beyond this is rejected for every case.
pub const MAX_ALPHA: i64 = 1 << 16;

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCase {
    pub id: &'static str,
    pub description: &'static str,
    pub expected: Expected,
    pub domain: Domain,
    /// Log-based cases carry a branch index `k`.
    pub multivalued: bool,
    /// The polynomial in `(X, Y)` whose vanishing is checked, if any.
    pub polynomial: Option<BivariatePolynomial>,
}

fn int(terms: &[(u32, u32, i64)]) -> Option<BivariatePolynomial> {
    Some(BivariatePolynomial::from_int_terms(terms).expect("nonzero"))
}

fn gauss(terms: &[(u32, u32, i64, i64)]) -> Option<BivariatePolynomial> {
    Some(BivariatePolynomial::from_gaussian_terms(terms).expect("nonzero"))
}

fn build() -> Vec<IdentityCase> {
    use Domain::*;
    use Expected::*;
    let case = |id, description, expected, domain, multivalued, polynomial| IdentityCase {
        id,
        description,
        expected,
        domain,
        multivalued,
        polynomial,
    };
    vec![
        case("exp-log-roundtrip", "log(exp a) = a, branch k adds 2 pi i k", Vanishes, Real, true, None),
        case("sin-exponential", "2i sin a = e^{ia} - e^{-ia}", Vanishes, Real, false, None),
        case(
            "sin-quadratic-root",
            "t = (b +- sqrt(4 - b^2))/2 at t = e^{ia}, b = 2i sin a; residual (t - r+)(t - r-) times 2",
            UnderTest,
            Real,
            false,
            int(&[(0, 2, 2), (1, 1, -2), (2, 0, 1), (0, 0, -2)]),
        ),
        case(
            "arcsin-log-form",
            "arcsin a = -i log(ia + sqrt(1 - a^2))",
            Vanishes,
            OpenUnit,
            true,
            None,
        ),
        case(
            "arcsin-dependence",
            "P(X, Y) = 0 at X = a, Y = e^{i arcsin a} = sqrt(1 - a^2) + ia",
            Vanishes,
            OpenUnit,
            false,
            int(&[(0, 4, 1), (2, 2, 4), (0, 2, -2), (0, 0, 1)]),
        ),
        case("tan-ratio", "i tan a = (t - 1/t)/(t + 1/t) at t = e^{ia}", Vanishes, CosNonzero, false, None),
        case(
            "tan-cubic-paper",
            "t^3 + t + i b t - i b = 0 at t = e^{ia}, b = 1/tan a",
            UnderTest,
            SinCosNonzero,
            false,
            gauss(&[(0, 3, 1, 0), (0, 1, 1, 0), (1, 1, 0, 1), (1, 0, 0, -1)]),
        ),
        case(
            "tan-quadratic-derived",
            "t^2 (i - b) + (i + b) = 0 at t = e^{ia}, b = 1/tan a",
            UnderTest,
            SinCosNonzero,
            false,
            gauss(&[(0, 2, 0, 1), (1, 2, -1, 0), (0, 0, 0, 1), (1, 0, 1, 0)]),
        ),
        case(
            "arctan-log-form",
            "2i arctan a = log((i - a)/(i + a))",
            Vanishes,
            Real,
            true,
            None,
        ),
        case(
            "arctan-dependence-paper",
            "P(X, Y) = 0 at X = a, Y = (i - a)/(i + a)",
            UnderTest,
            Real,
            false,
            int(&[(2, 2, 1), (2, 1, 2), (2, 0, 1), (0, 2, -1), (0, 1, 2), (0, 0, -1)]),
        ),
        case(
            "arctan-dependence-corrected",
            "P(X, Y) = 0 at X = a, Y = (i - a)/(i + a)",
            UnderTest,
            Real,
            false,
            int(&[(2, 2, 1), (2, 1, 2), (2, 0, 1), (0, 2, 1), (0, 1, -2), (0, 0, 1)]),
        ),
        case(
            "sinh-root-paper",
            "t = m +- sqrt(1 - m^2) at t = e^a, m = sinh a; residual (t - r+)(t - r-)",
            UnderTest,
            Real,
            false,
            int(&[(0, 2, 1), (1, 1, -2), (2, 0, 2), (0, 0, -1)]),
        ),
        case(
            "sinh-root-corrected",
            "t = m +- sqrt(1 + m^2) at t = e^a, m = sinh a; residual (t - r+)(t - r-)",
            UnderTest,
            Real,
            false,
            int(&[(0, 2, 1), (1, 1, -2), (0, 0, -1)]),
        ),
        case(
            "arcsinh-dependence",
            "P(X, Y) = 0 at X = a, Y = e^{arcsinh a} = a + sqrt(1 + a^2)",
            Vanishes,
            Real,
            false,
            int(&[(0, 2, 1), (1, 1, -2), (0, 0, -1)]),
        ),
        case("maillet-cosh", "cosh a = R(e^a), R(t) = (t + 1/t)/2", Vanishes, Real, false, None),
        case("maillet-sinh", "sinh a = (t - 1/t)/2 at t = e^a", Vanishes, Real, false, None),
    ]
}

pub fn list_identity_cases() -> &'static [IdentityCase] {
    static CATALOG: OnceLock<Vec<IdentityCase>> = OnceLock::new();
    CATALOG.get_or_init(build)
}

pub fn find_case(id: &str) -> Result<&'static IdentityCase> {
    list_identity_cases()
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::UnknownCase(id.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// The residual ball contains zero with this radius.
    Verified { radius: Dyadic },
    /// The residual ball excludes zero; `|residual| >= lower_bound`.
    Refuted { lower_bound: Dyadic },
    Undecided,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Verified { .. } => "Verified",
            Verdict::Refuted { .. } => "Refuted",
            Verdict::Undecided => "Undecided",
        }
    }

    pub fn is_verified(&self) -> bool {
        matches!(self, Verdict::Verified { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityVerdict {
    pub case: &'static str,
    pub alpha: String,
    pub branch: Option<i32>,
    pub verdict: Verdict,
    pub residual: ComplexBall,
    pub prec: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub case: String,
    pub alpha: String,
    pub branch: Option<i32>,
    pub verdict: String,
    pub residual: String,
    pub prec: u32,
}

impl IdentityVerdict {
    pub fn to_json(&self) -> VerdictJson {
        VerdictJson {
            case: self.case.to_string(),
            alpha: self.alpha.clone(),
            branch: self.branch,
            verdict: self.verdict.name().to_string(),
            residual: self.residual.to_string_prec(self.prec),
            prec: self.prec,
        }
    }
}

fn f(tag: FunctionTag, z: &ComplexBall, wp: u32) -> Result<ComplexBall> {
    Ok(eval_fn(tag, z, wp)?.value)
}

fn lower_abs(z: &ComplexBall) -> Dyadic {
    std::cmp::max(z.re.min_abs(), z.im.min_abs())
}

/// `Some(true)` inside, `Some(false)` outside, `None` if the ball straddles.
fn in_domain(d: Domain, a: &Ball, wp: u32) -> Result<Option<bool>> {
    let bound = Dyadic::from_i64(MAX_ALPHA);
    if a.max_abs() > bound {
        return Ok(if a.min_abs() > bound { Some(false) } else { None });
    }
    let nonzero = |b: &Ball| if b.contains_zero() { None } else { Some(true) };
    Ok(match d {
        Domain::Real => Some(true),
        Domain::OpenUnit => {
            let one = Dyadic::one();
            if a.max_abs() < one {
                Some(true)
            } else if a.min_abs() >= one {
                Some(false)
            } else {
                None
            }
        }
        Domain::CosNonzero => {
            let c = crate::numeric::functions::sin_cos(a, wp)?.1;
            nonzero(&c)
        }
        Domain::SinCosNonzero => {
            let (s, c) = crate::numeric::functions::sin_cos(a, wp)?;
            if s.contains_zero() || c.contains_zero() {
                None
            } else {
                Some(true)
            }
        }
    })
}

fn two_pi_k(k: i32, wp: u32) -> Ball {
    pi(wp).mul_int(&(2 * k as i64).into(), wp)
}

/// The residual of `case` at `alpha` (branch `k` for multivalued cases).
pub fn residual(case: &IdentityCase, alpha: &Ball, k: i32, wp: u32) -> Result<ComplexBall> {
    use FunctionTag::*;
    let a = ComplexBall::real(alpha.clone());
    let ia = a.mul_i();
    let poly = |x: &ComplexBall, y: &ComplexBall| {
        dependence_residual(case.polynomial.as_ref().expect("polynomial case"), x, y, wp)
    };
    let r = match case.id {
        "exp-log-roundtrip" => {
            let l = f(Log, &f(Exp, &a, wp)?, wp)?;
            let l = ComplexBall::new(l.re, l.im.add(&two_pi_k(k, wp), wp));
            l.sub(&a, wp)
        }
        "sin-exponential" => {
            let lhs = f(Sin, &a, wp)?.mul_i().mul_2exp(1);
            let t = f(Exp, &ia, wp)?;
            lhs.sub(&t.sub(&t.recip(wp)?, wp), wp)
        }
        "sin-quadratic-root" => {
            let t = f(Exp, &ia, wp)?;
            let b = f(Sin, &a, wp)?.mul_i().mul_2exp(1);
            poly(&b, &t)
        }
        "arcsin-log-form" => {
            let root = f(Sqrt, &ComplexBall::one().sub(&a.sqr(wp), wp), wp)?;
            let l = f(Log, &ia.add(&root, wp), wp)?;
            let l = ComplexBall::new(l.re, l.im.add(&two_pi_k(k, wp), wp));
            f(Arcsin, &a, wp)?.sub(&l.mul_neg_i(), wp)
        }
        "arcsin-dependence" => {
            let y = f(Exp, &f(Arcsin, &a, wp)?.mul_i(), wp)?;
            poly(&a, &y)
        }
        "tan-ratio" => {
            let t = f(Exp, &ia, wp)?;
            let ti = t.recip(wp)?;
            let ratio = t.sub(&ti, wp).div(&t.add(&ti, wp), wp)?;
            f(Tan, &a, wp)?.mul_i().sub(&ratio, wp)
        }
        "tan-cubic-paper" | "tan-quadratic-derived" => {
            let t = f(Exp, &ia, wp)?;
            let b = f(Tan, &a, wp)?.recip(wp)?;
            poly(&b, &t)
        }
        "arctan-log-form" => {
            let i = ComplexBall::i();
            let w = i.sub(&a, wp).div(&i.add(&a, wp), wp)?;
            let l = f(Log, &w, wp)?;
            let l = ComplexBall::new(l.re, l.im.add(&two_pi_k(k, wp), wp));
            f(Arctan, &a, wp)?.mul_i().mul_2exp(1).sub(&l, wp)
        }
        "arctan-dependence-paper" | "arctan-dependence-corrected" => {
            let i = ComplexBall::i();
            let y = i.sub(&a, wp).div(&i.add(&a, wp), wp)?;
            poly(&a, &y)
        }
        "sinh-root-paper" | "sinh-root-corrected" => {
            let t = f(Exp, &a, wp)?;
            let m = f(Sinh, &a, wp)?;
            poly(&m, &t)
        }
        "arcsinh-dependence" => {
            let y = f(Exp, &f(Arcsinh, &a, wp)?, wp)?;
            poly(&a, &y)
        }
        "maillet-cosh" => {
            let t = f(Exp, &a, wp)?;
            let r = t.add(&t.recip(wp)?, wp).mul_2exp(-1);
            f(Cosh, &a, wp)?.sub(&r, wp)
        }
        "maillet-sinh" => {
            let t = f(Exp, &a, wp)?;
            let r = t.sub(&t.recip(wp)?, wp).mul_2exp(-1);
            f(Sinh, &a, wp)?.sub(&r, wp)
        }
        other => return Err(Error::UnknownCase(other.to_string())),
    };
    Ok(r)
}

/// Verdicts for `alpha` given as a precision-indexed family of enclosures.
pub fn verify_identity_at(
    case_id: &str,
    alpha: &dyn Fn(u32) -> Ball,
    label: &str,
    prec: u32,
    branches: u32,
) -> Result<Vec<IdentityVerdict>> {
    let case = find_case(case_id)?;
    if prec < 2 {
        return Err(Error::InvalidArgument("precision must be at least 2 bits".into()));
    }
    let ks: Vec<i32> = if case.multivalued {
        let b = branches.min(1 << 20) as i32;
        (-b..=b).collect()
    } else {
        vec![0]
    };
    let tol = Dyadic::pow2(-((prec / 2) as i64));
    let cap = DEFAULT_PRECISION_CAP.max(prec + 64);
    let mut out = Vec::with_capacity(ks.len());
    for k in ks {
        let mut wp = prec + 32;
        let (verdict, res) = loop {
            let a = alpha(wp + 16);
            match in_domain(case.domain, &a, wp)? {
                Some(true) => {}
                Some(false) => {
                    return Err(Error::Domain(format!("{label} is outside the domain of {case_id}")));
                }
                None if wp >= cap => {
                    return Err(Error::Domain(format!("{label} is too close to the boundary of the domain of {case_id}")));
                }
                None => {
                    wp = (wp * 2).min(cap);
                    continue;
                }
            }
            let r = residual(case, &a, k, wp)?;
            if !r.contains_zero() {
                break (Verdict::Refuted { lower_bound: lower_abs(&r) }, r);
            }
            if r.rad() <= tol {
                break (Verdict::Verified { radius: r.rad() }, r);
            }
            if wp >= cap {
                break (Verdict::Undecided, r);
            }
            wp = (wp * 2).min(cap);
        };
        out.push(IdentityVerdict {
            case: case.id,
            alpha: label.to_string(),
            branch: case.multivalued.then_some(k),
            verdict,
            residual: res,
            prec,
        });
    }
    Ok(out)
}

/// One verdict per branch `k in [-branches, branches]` for log-based cases,
/// a single verdict otherwise.
pub fn verify_identity(case_id: &str, alpha: &NumberSpec, prec: u32, branches: u32) -> Result<Vec<IdentityVerdict>> {
    verify_identity_at(case_id, &|p| alpha.to_ball(p), &alpha.to_string(), prec, branches)
}

/// Default sample points: `1/3, 1/2, 2/3`, the depth-3 truncation of the
/// base-10 Liouville constant, and the constant itself.
pub fn default_sample_points() -> Vec<NumberSpec> {
    vec![
        NumberSpec::rational(1, 3),
        NumberSpec::rational(1, 2),
        NumberSpec::rational(2, 3),
        NumberSpec::rational(110001, 1000000),
        NumberSpec::liouville(10),
    ]
}
