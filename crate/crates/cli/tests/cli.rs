//! End-to-end runs of the `sbr` binary.

use std::path::PathBuf;
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sbr_core::expr::{parse_expression, Parsed};
use sbr_core::ratio::RatMatrix;
use sbr_core::sample::{random_ratfunc, SampleShape};
use sbr_core::FieldSpec;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn sbr(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_sbr")).args(args).output().expect("binary runs");
    Run {
        code: out.status.code().expect("exited"),
        stdout: String::from_utf8(out.stdout).expect("utf-8"),
        stderr: String::from_utf8(out.stderr).expect("utf-8"),
    }
}

fn temp_path(tag: &str) -> PathBuf {
    std::env::temp_dir().join(format!("sbr-cli-{tag}-{}.json", std::process::id()))
}

#[test]
fn negative_verdict_exits_one_with_certificate() {
    let run = sbr(&["check", "--field", "gf2", "--vars", "2", "--mode", "sbr", "z1*z2"]);
    assert_eq!(run.code, 1, "{}", run.stderr);
    assert!(run.stdout.contains("not realizable"));
    assert!(run.stdout.contains("beta = 11"));
}

#[test]
fn positive_verdicts_exit_zero() {
    for (field, mode, expr) in [("gf3", "sbr", "z1*z2"), ("gf2", "br", "z1*z2"), ("gf2", "sbr", "z1 + z2^2")] {
        let run = sbr(&["check", "--field", field, "--mode", mode, expr]);
        assert_eq!(run.code, 0, "{field} {mode} {expr}: {}", run.stderr);
        assert!(run.stdout.contains("verdict: realizable"));
    }
}

#[test]
fn usage_and_parse_errors_exit_two() {
    for args in [
        &["check", "z1 +"][..],
        &["check", "z1 * w"],
        &["check", "--field", "gf2", "0x5"],
        &["check", "[[z1, 1],[1]]"],
        &["check", "1/0"],
        &["check"],
        &["density"],
        &["verify", "--target", "z1"],
        &["check", "--field", "gf6", "z1"],
    ] {
        let run = sbr(args);
        assert_eq!(run.code, 2, "{args:?}: {}", run.stderr);
        assert!(run.stderr.starts_with("error:"), "{args:?}: {}", run.stderr);
    }
    let run = sbr(&["check", "--vars", "2", "z1 + (z2"]);
    assert!(run.stderr.contains("1:"), "no position in {}", run.stderr);
}

#[test]
fn density_table() {
    let run = sbr(&["density", "--vars", "3"]);
    assert_eq!(run.code, 0);
    let numbers: Vec<&str> = run.stdout.lines().filter_map(|l| l.split('=').nth(1)).map(str::trim).collect();
    assert_eq!(&numbers[..5], ["3", "8", "4", "4", "3"]);
    let run = sbr(&["density", "--vars", "3", "--json"]);
    let doc: serde_json::Value = serde_json::from_str(&run.stdout).unwrap();
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["dim_sbr"], 4);
}

#[test]
fn realize_then_verify() {
    let path = temp_path("pipeline");
    let p = path.to_str().unwrap();
    let run = sbr(&["realize", "--field", "gf3", "--vars", "2", "--mode", "sbr", "z1*z2"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    std::fs::write(&path, &run.stdout).unwrap();
    let run = sbr(&["verify", "--pencil", p, "--mode", "sbr", "--target", "z1*z2"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let run = sbr(&["verify", "--pencil", p, "--mode", "sbr", "--target", "z1*z2 + 1"]);
    assert_eq!(run.code, 1, "{}", run.stderr);
    let run = sbr(&["schur", "--pencil", p]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert_eq!(run.stdout.trim(), "z1*z2");
    let _ = std::fs::remove_file(&path);
}

#[test]
fn emitted_pencil_is_symmetric_json() {
    let path = temp_path("emit");
    let p = path.to_str().unwrap();
    let run = sbr(&["realize", "--field", "gf2", "--mode", "sbr", "--emit", p, "z1^2 + z1*z2^2"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let r = sbr_core::json::realization_from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(r.is_symmetric());
    assert_eq!(r.top(), 1);
    let _ = std::fs::remove_file(&path);
}

#[test]
fn same_seed_gives_identical_json() {
    for args in [
        &["check", "--json", "--seed", "7", "--mode", "hsbr", "--vars", "3", "z1*z2/z3"][..],
        &["check", "--json", "--field", "gf4", "--mode", "sbr", "[[z1, g],[g, z2^2]]"],
        &["transfer", "--json", "--ext-field", "gf4", "--ext-vars", "3", "z1 + z2"],
        &["coords", "--json", "--vars", "2", "(z1 + z2^3)/(z1*z2 + 1)"],
    ] {
        let (a, b) = (sbr(args), sbr(args));
        assert_eq!(a.code, b.code);
        assert!(!a.stdout.is_empty(), "{args:?}: {}", a.stderr);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        let doc: serde_json::Value = serde_json::from_str(&a.stdout).unwrap();
        assert_eq!(doc["schema"], 1);
    }
}

#[test]
fn derive_and_decompose() {
    let run = sbr(&["derive", "--vars", "2", "z1^3*z2 + z2^2"]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.contains("d/dz1: z1^2*z2"));
    assert!(run.stdout.contains("d/dz2: z1^3"));
    let run = sbr(&["decompose", "--vars", "2", "z1*z2"]);
    assert_eq!(run.code, 1);
    let run = sbr(&["decompose", "--vars", "2", "z1 + z2^2"]);
    assert_eq!(run.code, 0);
}

#[test]
fn diagonalize_constant_matrices() {
    assert_eq!(sbr(&["diagonalize", "[[1, 1],[1, 0]]"]).code, 0);
    assert_eq!(sbr(&["diagonalize", "[[0, 1],[1, 0]]"]).code, 1);
}

#[test]
fn print_parse_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xB355);
    let fields = [FieldSpec::gf2(), FieldSpec::gf4(), FieldSpec::gf3(), FieldSpec::gf256()];
    for i in 0..1000 {
        let spec = fields[i % fields.len()];
        let n = rng.gen_range(1..=3);
        let shape = SampleShape::new(n, 3, 3);
        let r = random_ratfunc(&mut rng, spec, &shape);
        match parse_expression(&r.to_string(), spec, n).unwrap() {
            Parsed::Scalar(back) => assert_eq!(back, r),
            Parsed::Matrix(_) => panic!("scalar printed as a matrix"),
        }
        if i % 10 == 0 {
            let m = RatMatrix::from_fn(2, 2, |_, _| random_ratfunc(&mut rng, spec, &shape));
            assert_eq!(parse_expression(&m.to_string(), spec, n).unwrap().into_matrix(), m);
        }
    }
}
