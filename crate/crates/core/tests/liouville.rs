use mahlerlab::liouville::cf::{convergent_pairs, convergents, convergents_with_error};
use mahlerlab::liouville::exponent::approximation_exponent;
use mahlerlab::liouville::lacunary::LacunaryNumber;
use mahlerlab::liouville::witness::{find_witness, verify_witness, Inequality, WitnessVerdict};
use mahlerlab::numeric::spec::NumberSpec;
use mahlerlab::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn lacunary() -> impl Strategy<Value = LacunaryNumber> {
    (2u32..16, prop::collection::vec(0u32..16, 1..4)).prop_filter_map("nonzero block", |(b, d)| {
        let d: Vec<u32> = d.into_iter().map(|x| x % b).collect();
        LacunaryNumber::new(b, d).ok()
    })
}

#[test]
fn truncation_examples() {
    let t = LacunaryNumber::liouville(10).unwrap().truncate(2).unwrap();
    assert_eq!(t.value(), q(11, 100));
    assert_eq!(t.tail_bound, q(2, 1_000_000));
    let t = LacunaryNumber::liouville(2).unwrap().truncate(1).unwrap();
    assert_eq!(t.value(), q(1, 2));
    assert!(t.tail_bound <= q(1, 2));
    let t = LacunaryNumber::liouville(10).unwrap().truncate(0).unwrap();
    assert_eq!(t.value(), BigRational::zero());
    assert_eq!(t.tail_bound, q(2, 10));
}

#[test]
fn witness_examples() {
    let l = LacunaryNumber::liouville(10).unwrap();
    for (n, p, qq) in [(1u32, "1", "10"), (2, "11", "100"), (3, "110001", "1000000")] {
        let w = find_witness(&l, n, 128).unwrap();
        assert!(w.is_certified());
        assert_eq!((w.p.to_string().as_str(), w.q.to_string().as_str()), (p, qq));
    }
    let xi = NumberSpec::liouville(10);
    let c = verify_witness(&xi, 2, &11.into(), &100.into(), 128).unwrap();
    assert_eq!(c.verdict, WitnessVerdict::Certified);
    let c = verify_witness(&NumberSpec::rational(1, 2), 1, &1.into(), &2.into(), 64).unwrap();
    assert!(matches!(c.verdict, WitnessVerdict::Refuted { which: Inequality::Lower, .. }));
    let c = verify_witness(&xi, 3, &11.into(), &100.into(), 128).unwrap();
    assert!(matches!(c.verdict, WitnessVerdict::Refuted { which: Inequality::Upper, .. }));
    assert!(matches!(
        verify_witness(&xi, 1, &0.into(), &1.into(), 64),
        Err(Error::InvalidWitness(_))
    ));
}

#[test]
fn convergent_examples() {
    assert_eq!(convergents(&q(7, 5), 3), vec![q(1, 1), q(3, 2), q(7, 5)]);
    assert_eq!(convergents(&q(1, 3), 5), vec![q(1, 3)]);
    assert_eq!(convergents(&q(110001, 1_000_000), 2), vec![q(1, 9), q(11, 100)]);
}

#[test]
fn exponent_growth_on_truncations() {
    for b in [2u32, 3, 10] {
        let l = LacunaryNumber::liouville(b).unwrap();
        let xi = NumberSpec::Lacunary(l.clone());
        for m in 1..=4 {
            let t = l.truncate(m).unwrap();
            let e = approximation_exponent(&xi, &t.p, &t.q, 256).unwrap();
            assert!(e.exponent.lower().to_f64() >= m as f64, "base {b}, depth {m}: {:?}", e.exponent);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn truncations_are_sound(l in lacunary(), m in 0u32..4) {
        let t = l.truncate(m).unwrap();
        let deep = l.truncate(m + 2).unwrap();
        let gap = deep.value() - t.value();
        prop_assert!(!gap.is_negative());
        prop_assert!(gap <= t.tail_bound);
        let b = BigInt::from(l.base());
        let f: u32 = (1..=m + 1).product();
        prop_assert!(t.tail_bound <= BigRational::new(2.into(), Pow::pow(&b, f)) * BigRational::from_integer(l.max_digit().into()));
    }

    #[test]
    fn witnesses_verify_and_downgrade(l in lacunary(), n in 1u32..5) {
        let w = find_witness(&l, n, 128).unwrap();
        prop_assert!(w.is_certified());
        let xi = NumberSpec::Lacunary(l);
        for k in 1..=n {
            let c = verify_witness(&xi, k, &w.p, &w.q, 128).unwrap();
            prop_assert_eq!(c.verdict, WitnessVerdict::Certified);
        }
        let back = mahlerlab::liouville::witness::verify_witness_json(
            &serde_json::to_string(&w.to_json(128)).unwrap(), 128).unwrap();
        prop_assert_eq!(back.verdict, WitnessVerdict::Certified);
    }

    #[test]
    fn convergent_law(p in -10_000i64..10_000, d in 1i64..10_000) {
        prop_assume!(p != 0);
        let x = q(p, d);
        let cs = convergent_pairs(&x, 64);
        prop_assert_eq!(BigRational::new(cs.last().unwrap().0.clone(), cs.last().unwrap().1.clone()), x.clone());
        let last = cs.len().saturating_sub(2);
        for (k, w) in cs.windows(2).enumerate() {
            let (pk, qk) = &w[0];
            let (_, qn) = &w[1];
            let dist = (&x - BigRational::new(pk.clone(), qk.clone())).abs();
            let bound = BigRational::new(BigInt::one(), qk * qn);
            if k == last {
                prop_assert_eq!(dist, bound);
            } else {
                prop_assert!(dist < bound);
            }
        }
    }

    #[test]
    fn confirmed_convergents_are_those_of_the_limit(l in lacunary(), m in 2u32..4) {
        let t = l.truncate(m).unwrap();
        let deeper = l.truncate(m + 1).unwrap().value();
        let limit: Vec<_> = convergent_pairs(&deeper, usize::MAX);
        for c in convergents_with_error(&t.value(), &t.tail_bound, usize::MAX).into_iter().filter(|c| c.confirmed) {
            prop_assert!(limit.contains(&(c.p.clone(), c.q.clone())), "{}/{}", c.p, c.q);
        }
    }
}
