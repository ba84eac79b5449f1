//! Every combinator checked against matrix arithmetic over `F(z)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sbr_core::linalg::FieldMatrix;
use sbr_core::pencil::Realization;
use sbr_core::ratio::{RatFunc, RatMatrix};
use sbr_core::realize::*;
use sbr_core::sample::{random_realizable_target, SampleShape};
use sbr_core::FieldSpec;

const CASES: usize = 12;

fn assert_realizes(r: &Realization, expected: &RatMatrix, what: &str) {
    let t = verify_realization(r, expected, &VerifyOptions::default()).unwrap();
    assert!(t.passed, "{what}: numeric mismatch for {expected}");
    if r.size() <= 12 {
        assert_eq!(&r.schur_symbolic().unwrap(), expected, "{what}: symbolic mismatch");
    }
}

fn random_target(rng: &mut ChaCha8Rng, spec: FieldSpec, n: usize, k: usize) -> RatMatrix {
    let shape = SampleShape::new(n, 1, 2);
    random_realizable_target(rng, spec, &shape, k, Mode::Br, 0.3)
}

fn fields() -> [FieldSpec; 3] {
    [FieldSpec::gf2(), FieldSpec::gf4(), FieldSpec::prime(101).unwrap()]
}

#[test]
fn sum_scale_and_transpose() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for spec in fields() {
        for _ in 0..CASES {
            let k = rng.gen_range(1..=2);
            let (f, g) = (random_target(&mut rng, spec, 2, k), random_target(&mut rng, spec, 2, k));
            let (rf, rg) = (build_realization(&f, Mode::Br).unwrap(), build_realization(&g, Mode::Br).unwrap());
            assert_realizes(&comb_sum(&rf, &rg).unwrap(), &f.add(&g).unwrap(), "sum");
            let c = spec.random_nonzero(&mut rng);
            assert_realizes(&comb_scale(&rf, c), &f.map(|e| e.scale(c)), "scale");
            assert_realizes(&rf.transpose(), &f.transpose(), "transpose");
            let sym = comb_symmetrize(&rf);
            assert!(sym.is_symmetric());
            assert_realizes(&sym, &f.add(&f.transpose()).unwrap(), "symmetrize");
        }
    }
}

#[test]
fn products_and_sandwiches() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for spec in fields() {
        for _ in 0..CASES {
            let k = rng.gen_range(1..=2);
            let (f, g) = (random_target(&mut rng, spec, 2, k), random_target(&mut rng, spec, 2, k));
            let (rf, rg) = (build_realization(&f, Mode::Br).unwrap(), build_realization(&g, Mode::Br).unwrap());
            assert_realizes(&comb_product(&rf, &rg).unwrap(), &f.mul(&g).unwrap(), "product");
            let x = RatMatrix::from_fn(k, k, |i, j| {
                if i == j {
                    RatFunc::var(spec, 2, i % 2).unwrap().add(&RatFunc::constant(spec, 2, 1))
                } else {
                    RatFunc::zero(spec, 2)
                }
            });
            let rx = build_realization(&x, Mode::Br).unwrap();
            let xinv = RatMatrix::from_fn(k, k, |i, j| if i == j { x.get(i, i).inv().unwrap() } else { x.get(i, j).clone() });
            let expected = f.mul(&xinv).unwrap().mul(&g).unwrap();
            assert_realizes(&comb_sandwich(&rf, &rx, &rg).unwrap(), &expected, "sandwich");
        }
    }
}

#[test]
fn symmetric_sandwich_keeps_symmetry() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for spec in fields() {
        for _ in 0..CASES {
            let f = random_target(&mut rng, spec, 2, 1);
            let rf = build_realization(&f, Mode::Br).unwrap();
            let h = RatMatrix::scalar(RatFunc::var(spec, 2, 1).unwrap());
            let rh = build_realization(&h, Mode::Sbr).unwrap();
            let r = jordan_sandwich(&rf, &rh).unwrap();
            assert!(r.is_symmetric());
            let expected = f.mul(&h).unwrap().mul(&f.transpose()).unwrap();
            assert_realizes(&r, &expected, "x h x^T");
            let n = jordan_norm(&rf).unwrap();
            assert!(n.is_symmetric());
            assert_realizes(&n, &f.mul(&f.transpose()).unwrap(), "x x^T");
        }
    }
}

#[test]
fn inverse() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for spec in fields() {
        let mut done = 0;
        while done < CASES {
            let k = rng.gen_range(1..=2);
            let f = random_target(&mut rng, spec, 2, k);
            let Ok(finv) = matrix_inverse(&f) else { continue };
            let rf = build_realization(&f, Mode::Br).unwrap();
            assert_realizes(&comb_inverse(&rf).unwrap(), &finv, "inverse");
            done += 1;
        }
        let zero = build_realization(&RatMatrix::zero(spec, 2, 1, 1), Mode::Br).unwrap();
        assert!(comb_inverse(&zero).is_err());
    }
}

fn matrix_inverse(f: &RatMatrix) -> Result<RatMatrix, ()> {
    match f.rows() {
        1 => Ok(RatMatrix::scalar(f.get(0, 0).inv().map_err(|_| ())?)),
        2 => {
            let (a, b, c, d) = (f.get(0, 0), f.get(0, 1), f.get(1, 0), f.get(1, 1));
            let det = a.mul(d).sub(&b.mul(c));
            let inv = det.inv().map_err(|_| ())?;
            Ok(RatMatrix::new(2, 2, vec![d.mul(&inv), b.neg().mul(&inv), c.neg().mul(&inv), a.mul(&inv)]).unwrap())
        }
        _ => unreachable!(),
    }
}

#[test]
fn congruence_and_kron() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for spec in fields() {
        for _ in 0..CASES {
            let f = random_target(&mut rng, spec, 2, 2);
            let rf = build_realization(&f, Mode::Br).unwrap();
            let u = FieldMatrix::random(spec, 3, 2, &mut rng);
            let v = FieldMatrix::random(spec, 2, 3, &mut rng);
            let expected = RatMatrix::from_constant(&u, 2)
                .mul(&f)
                .unwrap()
                .mul(&RatMatrix::from_constant(&v, 2))
                .unwrap();
            assert_realizes(&comb_congruence(&rf, &u, Some(&v)).unwrap(), &expected, "congruence");
            let kron = comb_kron(&rf, 2).unwrap();
            let expected = RatMatrix::from_fn(4, 4, |i, j| {
                if i % 2 == j % 2 {
                    f.get(i / 2, j / 2).clone()
                } else {
                    RatFunc::zero(spec, 2)
                }
            });
            assert_realizes(&kron, &expected, "kron");
        }
    }
}

#[test]
fn homogenize() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for spec in fields() {
        for _ in 0..CASES {
            let f = random_target(&mut rng, spec, 2, 1);
            let rf = build_realization(&f, Mode::Br).unwrap();
            let h = comb_homogenize(&rf);
            assert!(h.is_homogeneous());
            // z3 * f(z1/z3, z2/z3)
            let z3 = RatFunc::var(spec, 3, 2).unwrap();
            let e = f.get(0, 0);
            let sub = |p: &sbr_core::MultiPoly| {
                let mut acc = RatFunc::zero(spec, 3);
                for (exp, c) in p.terms() {
                    let mut t = RatFunc::constant(spec, 3, c);
                    for v in 0..2 {
                        let zv = RatFunc::var(spec, 3, v).unwrap().div(&z3).unwrap();
                        t = t.mul(&zv.pow(exp.get(v)));
                    }
                    acc = acc.add(&t);
                }
                acc
            };
            let expected = z3.mul(&sub(e.num()).div(&sub(e.den())).unwrap());
            assert_realizes(&h, &RatMatrix::scalar(expected), "homogenize");
        }
    }
}
