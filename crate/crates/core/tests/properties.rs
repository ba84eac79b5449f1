//! Algebraic invariants checked on random inputs.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sbr_core::constants::{
    affine_decompose, basis_coordinates, constants_member, square_witnesses, AffineOutcome, WitnessMode,
    WitnessOutcome,
};
use sbr_core::expr::{parse_matrix, parse_ratfunc};
use sbr_core::ratio::{RatFunc, RatMatrix};
use sbr_core::sample::{random_homogeneous_ratfunc, random_ratfunc, SampleShape};
use sbr_core::FieldSpec;

fn field(choice: u8) -> FieldSpec {
    match choice % 4 {
        0 => FieldSpec::gf2(),
        1 => FieldSpec::gf4(),
        2 => FieldSpec::gf3(),
        _ => FieldSpec::prime(7).unwrap(),
    }
}

fn char2_field(choice: u8) -> FieldSpec {
    if choice.is_multiple_of(2) {
        FieldSpec::gf2()
    } else {
        FieldSpec::gf4()
    }
}

fn draw(seed: u64, spec: FieldSpec, nvars: usize, degree: u32) -> (ChaCha8Rng, SampleShape, RatFunc) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = SampleShape::new(nvars, degree, 3);
    let r = random_ratfunc(&mut rng, spec, &shape);
    (rng, shape, r)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(seed in any::<u64>(), f in any::<u8>(), n in 1usize..=3) {
        let spec = field(f);
        let (mut rng, shape, a) = draw(seed, spec, n, 2);
        let b = random_ratfunc(&mut rng, spec, &shape);
        let c = random_ratfunc(&mut rng, spec, &shape);
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        if !b.is_zero() {
            prop_assert_eq!(a.div(&b).unwrap().mul(&b), a.clone());
            prop_assert!(b.mul(&b.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn leibniz_rule(seed in any::<u64>(), f in any::<u8>(), n in 1usize..=3, var in 0usize..3) {
        let spec = field(f);
        let (mut rng, shape, a) = draw(seed, spec, n, 3);
        let b = random_ratfunc(&mut rng, spec, &shape);
        let i = var % n;
        let lhs = a.mul(&b).derive(i).unwrap();
        let rhs = a.derive(i).unwrap().mul(&b).add(&a.mul(&b.derive(i).unwrap()));
        prop_assert_eq!(lhs, rhs);
        let sum = a.add(&b).derive(i).unwrap();
        prop_assert_eq!(sum, a.derive(i).unwrap().add(&b.derive(i).unwrap()));
    }

    #[test]
    fn partials_commute(seed in any::<u64>(), f in any::<u8>(), n in 2usize..=3) {
        let spec = field(f);
        let (_, _, a) = draw(seed, spec, n, 3);
        let d01 = a.derive(0).unwrap().derive(1).unwrap();
        let d10 = a.derive(1).unwrap().derive(0).unwrap();
        prop_assert_eq!(d01, d10);
    }

    #[test]
    fn pth_powers_are_constants(seed in any::<u64>(), f in any::<u8>(), n in 1usize..=3) {
        let spec = field(f);
        let p = spec.characteristic();
        let (_, _, a) = draw(seed, spec, n, 2);
        let ap = a.pow(p as u32);
        for i in 0..n {
            prop_assert!(ap.derive(i).unwrap().is_zero());
        }
        prop_assert!(constants_member(&ap, p).unwrap());
    }

    #[test]
    fn frobenius_root_inverts_square(seed in any::<u64>(), f in any::<u8>(), n in 1usize..=3) {
        let spec = char2_field(f);
        let (_, _, a) = draw(seed, spec, n, 3);
        let sq = a.square();
        prop_assert_eq!(sq.frobenius_sqrt().unwrap(), Some(a.clone()));
        if let Some(root) = a.frobenius_sqrt().unwrap() {
            prop_assert_eq!(root.square(), a);
        }
    }

    #[test]
    fn procedures_agree(seed in any::<u64>(), f in any::<u8>(), n in 1usize..=4) {
        let spec = char2_field(f);
        let (_, _, a) = draw(seed, spec, n, 4);
        // An error here would mean the derivative and exponent tests disagree.
        let member = constants_member(&a, 2).unwrap();
        let all_partials_zero = (0..n).all(|i| a.derive(i).unwrap().is_zero());
        prop_assert_eq!(member, all_partials_zero);
    }

    #[test]
    fn coordinates_reconstruct(seed in any::<u64>(), f in any::<u8>(), n in 1usize..=4) {
        let spec = char2_field(f);
        let (_, _, a) = draw(seed, spec, n, 4);
        let c = basis_coordinates(&a).unwrap();
        prop_assert_eq!(c.reconstruct(), a.clone());
        for (_, v) in c.iter() {
            prop_assert!(constants_member(v, 2).unwrap());
        }
        match affine_decompose(&a).unwrap() {
            AffineOutcome::Decomposed(d) => {
                prop_assert!(c.first_violation().is_none());
                prop_assert_eq!(d.reconstruct(), a.clone());
                for (i, g) in d.gradient.iter().enumerate() {
                    prop_assert_eq!(g, &a.derive(i).unwrap());
                }
            }
            AffineOutcome::NotInSubspace { .. } => prop_assert!(c.first_violation().is_some()),
        }
    }

    #[test]
    fn witnesses_reconstruct(seed in any::<u64>(), f in any::<u8>(), n in 1usize..=3) {
        let spec = char2_field(f);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = SampleShape::new(n, 2, 2);
        let mut r = random_ratfunc(&mut rng, spec, &shape).square();
        for i in 0..n {
            let q = random_ratfunc(&mut rng, spec, &shape);
            r = r.add(&RatFunc::var(spec, n, i).unwrap().mul(&q.square()));
        }
        match square_witnesses(&r, WitnessMode::Affine).unwrap() {
            WitnessOutcome::Witnesses(w) => prop_assert_eq!(w.reconstruct(), r),
            WitnessOutcome::NotInSubspace(v) => prop_assert!(false, "rejected {}: {:?}", r, v),
        }
    }

    #[test]
    fn homogeneous_witnesses(seed in any::<u64>(), f in any::<u8>(), n in 1usize..=3) {
        let spec = char2_field(f);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = SampleShape::new(n, 2, 2);
        let mut r = RatFunc::zero(spec, n);
        for i in 0..n {
            let q = random_homogeneous_ratfunc(&mut rng, spec, &shape, 0);
            r = r.add(&RatFunc::var(spec, n, i).unwrap().mul(&q.square()));
        }
        match square_witnesses(&r, WitnessMode::Homogeneous).unwrap() {
            WitnessOutcome::Witnesses(w) => {
                prop_assert!(w.q0.is_none());
                prop_assert_eq!(w.reconstruct(), r);
            }
            WitnessOutcome::NotInSubspace(v) => prop_assert!(false, "rejected {}: {:?}", r, v),
        }
    }

    #[test]
    fn one_variable_is_always_a_square_sum(seed in any::<u64>(), f in any::<u8>()) {
        let spec = char2_field(f);
        let (_, _, a) = draw(seed, spec, 1, 5);
        match square_witnesses(&a, WitnessMode::Affine).unwrap() {
            WitnessOutcome::Witnesses(w) => prop_assert_eq!(w.reconstruct(), a),
            WitnessOutcome::NotInSubspace(v) => prop_assert!(false, "rejected {}: {:?}", a, v),
        }
    }

    #[test]
    fn two_variable_degree_one_is_always_homogeneous_square_sum(seed in any::<u64>(), f in any::<u8>(), n in 1usize..=2) {
        let spec = char2_field(f);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_homogeneous_ratfunc(&mut rng, spec, &SampleShape::new(n, 3, 3), 1);
        match square_witnesses(&a, WitnessMode::Homogeneous).unwrap() {
            WitnessOutcome::Witnesses(w) => prop_assert_eq!(w.reconstruct(), a),
            WitnessOutcome::NotInSubspace(v) => prop_assert!(false, "rejected {}: {:?}", a, v),
        }
    }

    #[test]
    fn homogeneity_is_preserved(seed in any::<u64>(), f in any::<u8>(), n in 1usize..=3, d in -2i64..=2) {
        let spec = field(f);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = SampleShape::new(n, 2, 3);
        let a = random_homogeneous_ratfunc(&mut rng, spec, &shape, d);
        let b = random_homogeneous_ratfunc(&mut rng, spec, &shape, 1);
        prop_assert!(a.mul(&b).homogeneous_degree().admits(d + 1));
        for i in 0..n {
            prop_assert!(a.derive(i).unwrap().homogeneous_degree().admits(d - 1));
        }
    }

    #[test]
    fn print_parse_round_trip(seed in any::<u64>(), f in any::<u8>(), n in 0usize..=3) {
        let spec = field(f);
        let (mut rng, shape, a) = draw(seed, spec, n, 3);
        prop_assert_eq!(parse_ratfunc(&a.to_string(), spec, n).unwrap(), a.clone());
        let m = RatMatrix::from_fn(2, 2, |_, _| random_ratfunc(&mut rng, spec, &shape));
        prop_assert_eq!(parse_matrix(&m.to_string(), spec, n).unwrap(), m);
    }
}

#[test]
fn extension_field_round_trip() {
    let spec = FieldSpec::gf256();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let shape = SampleShape::new(2, 3, 4);
    for _ in 0..200 {
        let a = random_ratfunc(&mut rng, spec, &shape);
        assert_eq!(parse_ratfunc(&a.to_string(), spec, 2).unwrap(), a);
    }
}
