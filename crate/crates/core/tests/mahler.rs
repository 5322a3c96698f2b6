use mahlerlab::mahler::*;
use mahlerlab::numeric::spec::NumberSpec;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

fn grid(hs: &[i64]) -> Vec<BigInt> {
    hs.iter().map(|&h| big(h)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn search_matches_naive_on_rationals(p in -30i64..=30, q in 1i64..=12, n in 1u32..=2, h in 1i64..=6) {
        let x = NumberSpec::rational(p, q);
        let a = wn_naive(&x, n, &big(h), 64).unwrap();
        let b = wn_search(&x, n, &big(h), 64).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn search_matches_naive_on_square_roots(p in 1i64..=20, q in 1i64..=6, neg in any::<bool>(), n in 1u32..=3, h in 1i64..=4) {
        let mut x = NumberSpec::sqrt(p, q);
        if neg {
            x = x.negate().unwrap();
        }
        let a = wn_naive(&x, n, &big(h), 64).unwrap();
        let b = wn_search(&x, n, &big(h), 64).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn sign_symmetry(p in -40i64..=40, q in 1i64..=15, n in 1u32..=3, h in 1i64..=9) {
        let x = NumberSpec::rational(p, q);
        let a = wn_search(&x, n, &big(h), 64).unwrap();
        let b = wn_search(&x.negate().unwrap(), n, &big(h), 64).unwrap();
        prop_assert_eq!(a.w_lo, b.w_lo);
    }

    #[test]
    fn monotone_in_h_and_n(p in -40i64..=40, q in 1i64..=15, h in 1i64..=8) {
        let x = NumberSpec::rational(p, q);
        let rows: Vec<Vec<WnRecord>> = (1..=3)
            .map(|n| (h..=h + 2).map(|hh| wn_search(&x, n, &big(hh), 64).unwrap()).collect())
            .collect();
        for row in &rows {
            check_monotone_in_h(row).unwrap();
        }
        check_monotone_in_n(&rows[0], &rows[1]).unwrap();
        check_monotone_in_n(&rows[1], &rows[2]).unwrap();
    }

    #[test]
    fn record_invariants(x in prop::sample::select(vec!["pi", "e", "liouville:2", "lacunary:3:1,2", "sqrt:5/3"]), n in 1u32..=3, h in 1i64..=12) {
        let x: NumberSpec = x.parse().unwrap();
        let r = wn_search(&x, n, &big(h), 96).unwrap();
        prop_assert!(r.w_lo > BigRational::from_integer(0.into()));
        prop_assert!(r.w_lo <= r.w_hi);
        prop_assert!(r.argmin.height() <= r.h);
        prop_assert!(r.argmin.degree().unwrap() <= n as usize);
        let v = eval_ball_escalating(&r.argmin, &x, 96, 4096).unwrap().abs();
        prop_assert!(v.lower().to_rational() <= r.w_hi);
        prop_assert!(v.upper().to_rational() >= r.w_lo);
        prop_assert_eq!(WnRecord::from_json(&r.to_json()).unwrap(), r);
    }
}

#[test]
fn sqrt2_sweep_scales_like_one_over_h() {
    let mut store = Store::in_memory();
    let s = wn_sweep(&NumberSpec::sqrt(2, 1), 1, &grid(&[16, 64, 256, 1024]), 128, &mut store).unwrap();
    assert_eq!((s.computed, s.loaded), (4, 0));
    for r in &s.records {
        let wh = (&r.w_lo * BigRational::from_integer(r.h.clone())).to_f64().unwrap();
        assert!((1.0 / 3.0..=3.0).contains(&wh), "w*H = {wh}");
    }
    let again = wn_sweep(&NumberSpec::sqrt(2, 1), 1, &grid(&[16, 64, 256, 1024]), 128, &mut store).unwrap();
    assert_eq!((again.computed, again.loaded), (0, 4));
    assert_eq!(again.records, s.records);
    let e = estimate_wn_exponent(&s.records).unwrap();
    assert!((0.8..=1.2).contains(&e.regression_slope), "{e:?}");
}

#[test]
fn liouville_sweep_decays_superpolynomially() {
    let mut store = Store::in_memory();
    let s = wn_sweep(&NumberSpec::liouville(10), 1, &grid(&[100, 10_000, 1_000_000]), 128, &mut store).unwrap();
    let e = estimate_wn_exponent(&s.records).unwrap();
    let last = e.points.last().unwrap();
    assert!(last.1 / last.0 >= 2.9, "{e:?}");
    assert_eq!(s.records[2].argmin, IntegerPolynomial::from_i64(&[-110001, 1000000]));
}

#[test]
fn signatures() {
    let mut store = Store::in_memory();
    let g = geometric_grid(&big(16), 4, &big(1024)).unwrap();
    let r = class_signature(&NumberSpec::sqrt(2, 1), 2, &g, 128, &mut store).unwrap();
    assert_eq!(r.signature, Signature::AlgebraicLike, "{r:?}");
    assert_eq!(r.disclaimer, DISCLAIMER);
    let g = grid(&[100, 1000, 10_000, 100_000, 1_000_000]);
    let r = class_signature(&NumberSpec::liouville(10), 1, &g, 128, &mut store).unwrap();
    assert_eq!(r.signature, Signature::ULike, "{r:?}");
    assert_eq!(r.grid_resolution, Some(2));
}

#[test]
fn store_resumes_from_disk_and_keeps_last_duplicate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("wn.jsonl");
    let x = NumberSpec::rational(2, 7);
    {
        let mut store = Store::open(&path).unwrap();
        let s = wn_sweep(&x, 1, &grid(&[1, 2, 3]), 64, &mut store).unwrap();
        assert_eq!(s.computed, 3);
    }
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 3);
    {
        let mut store = Store::open(&path).unwrap();
        let s = wn_sweep(&x, 1, &grid(&[1, 2, 3, 4]), 64, &mut store).unwrap();
        assert_eq!((s.computed, s.loaded), (1, 3));
    }
    let first = std::fs::read_to_string(&path).unwrap().lines().next().unwrap().to_string();
    let mut dup = WnRecord::from_json(&first).unwrap();
    dup.skipped = 7;
    std::fs::write(&path, format!("{}{}\n", std::fs::read_to_string(&path).unwrap(), dup.to_json())).unwrap();
    let store = Store::open(&path).unwrap();
    assert_eq!(store.len(), 4);
    assert_eq!(store.duplicates(), 1);
    assert_eq!(store.get(&dup.key()).unwrap().skipped, 7);
}

#[test]
fn store_is_single_writer() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("wn.jsonl");
    let _a = Store::open(&path).unwrap();
    assert!(Store::open(&path).is_err());
}

#[test]
fn store_rejects_corrupt_lines() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("wn.jsonl");
    std::fs::write(&path, "{\"xi\":\"pi\"}\n").unwrap();
    let e = Store::open(&path).unwrap_err();
    assert!(e.to_string().contains(":1:"), "{e}");
}
