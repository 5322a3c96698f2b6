use std::fs;
use std::path::PathBuf;

use mahlerlab::liouville::witness::verify_witness_json;
use mahlerlab::mahler::WnRecord;
use mahlerlab::maillet::RationalFunction;
use mahlerlab::numeric::ball::Ball;
use mahlerlab::numeric::spec::parse_number;

fn seeds(target: &str) -> Vec<String> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<String> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| fs::read_to_string(e.unwrap().path()).unwrap())
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn number_seeds() {
    let mut ok = 0;
    for s in seeds("parse_number") {
        if let Ok(spec) = parse_number(&s) {
            assert_eq!(parse_number(&spec.to_string()).unwrap().to_string(), spec.to_string());
            ok += 1;
        }
    }
    assert!(ok >= 5);
}

#[test]
fn rational_function_seeds() {
    let mut ok = 0;
    for s in seeds("rational_function") {
        if let Ok(r) = s.parse::<RationalFunction>() {
            assert_eq!(r.to_string().parse::<RationalFunction>().unwrap(), r);
            ok += 1;
        }
    }
    assert!(ok >= 4);
}

#[test]
fn store_line_seeds() {
    let mut ok = 0;
    for s in seeds("store_line") {
        if let Ok(r) = WnRecord::from_json(&s) {
            let line = r.to_json();
            assert_eq!(WnRecord::from_json(&line).unwrap().to_json(), line);
            ok += 1;
        }
    }
    assert!(ok >= 1);
}

#[test]
fn witness_seeds() {
    let verdicts: Vec<bool> = seeds("witness_json")
        .iter()
        .map(|s| verify_witness_json(s, 64).is_ok())
        .collect();
    assert!(verdicts.iter().any(|&v| v));
}

#[test]
fn ball_seeds() {
    for s in seeds("ball_string") {
        let (b, p) = Ball::parse(&s).unwrap();
        let (again, _) = Ball::parse(&b.to_string_prec(p)).unwrap();
        assert!(again.overlaps(&b), "{s}");
    }
}
