use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::lacunary::Truncation;

/// Partial quotients `[a0; a1, a2, ...]` of a rational.
pub fn partial_quotients(x: &BigRational) -> Vec<BigInt> {
    let (mut n, mut d) = (x.numer().clone(), x.denom().clone());
    let mut out = Vec::new();
    while !d.is_zero() {
        let (a, r) = n.div_mod_floor(&d);
        out.push(a);
        n = d;
        d = r;
    }
    out
}

/// Convergent numerators and denominators, with the `0/1` convergent dropped when `a0 = 0`.
pub fn convergent_pairs(x: &BigRational, count: usize) -> Vec<(BigInt, BigInt)> {
    let a = partial_quotients(x);
    let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
    let (mut p1, mut q1) = (a[0].clone(), BigInt::one());
    let mut out = Vec::new();
    if !a[0].is_zero() {
        out.push((p1.clone(), q1.clone()));
    }
    for ak in &a[1..] {
        if out.len() >= count {
            break;
        }
        let p2 = ak * &p1 + &p0;
        let q2 = ak * &q1 + &q0;
        out.push((p2.clone(), q2.clone()));
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    out.truncate(count);
    out
}

pub fn convergents(x: &BigRational, count: usize) -> Vec<BigRational> {
    convergent_pairs(x, count)
        .into_iter()
        .map(|(p, q)| BigRational::new(p, q))
        .collect()
}

/// A convergent of a truncation, with whether it is trusted for the limit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergent {
    pub p: BigInt,
    pub q: BigInt,
    /// `q^2 * err < 1/2`, so the convergent is also one of the limit.
    pub confirmed: bool,
}

/// `q^2 * err < 1/2`.
pub fn stable(q: &BigInt, err: &BigRational) -> bool {
    let q2 = BigRational::from_integer(q * q);
    q2 * err * BigRational::from_integer(2.into()) < BigRational::one()
}

/// Convergents of an approximation `x` of a limit known to lie within `err` of it.
pub fn convergents_with_error(x: &BigRational, err: &BigRational, count: usize) -> Vec<Convergent> {
    convergent_pairs(x, count)
        .into_iter()
        .map(|(p, q)| {
            let confirmed = stable(&q, err);
            Convergent { p, q, confirmed }
        })
        .collect()
}

pub fn truncation_convergents(t: &Truncation, count: usize) -> Vec<Convergent> {
    convergents_with_error(&t.value(), &t.tail_bound, count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liouville::lacunary::LacunaryNumber;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn examples() {
        assert_eq!(convergents(&q(7, 5), 3), vec![q(1, 1), q(3, 2), q(7, 5)]);
        assert_eq!(convergents(&q(1, 3), 5), vec![q(1, 3)]);
        assert_eq!(convergents(&q(110001, 1000000), 2), vec![q(1, 9), q(11, 100)]);
        assert_eq!(convergents(&q(-7, 5), 9).last(), Some(&q(-7, 5)));
        assert!(convergents(&q(0, 1), 3).is_empty());
    }

    #[test]
    fn partial_quotients_of_truncation() {
        let a = partial_quotients(&q(110001, 1000000));
        assert_eq!(a[..3], [0.into(), 9.into(), 11.into()]);
    }

    #[test]
    fn stability_flags() {
        let l = LacunaryNumber::liouville(10).unwrap();
        let t = l.truncate(2).unwrap();
        let cs = truncation_convergents(&t, 10);
        // 11/100 with err 2e-6: 10^4 * 2e-6 < 1/2
        let last = cs.last().unwrap();
        assert_eq!((last.p.clone(), last.q.clone()), (11.into(), 100.into()));
        assert!(last.confirmed);
        let t1 = l.truncate(1).unwrap();
        let cs = truncation_convergents(&t1, 10);
        assert!(!cs[0].confirmed);
    }
}
