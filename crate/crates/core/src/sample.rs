//! Random polynomials, rational functions and realizable targets for tests,
//! benchmarks and the CLI.

use rand::Rng;

use crate::field::FieldSpec;
use crate::poly::{ExpVec, MultiPoly};
use crate::ratio::{RatFunc, RatMatrix};
use crate::realize::Mode;

/// Size limits for random elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleShape {
    pub nvars: usize,
    /// Maximum total degree of numerators and denominators.
    pub max_degree: u32,
    pub max_terms: usize,
}

impl SampleShape {
    pub fn new(nvars: usize, max_degree: u32, max_terms: usize) -> Self {
        SampleShape { nvars, max_degree, max_terms: max_terms.max(1) }
    }
}

fn exponent_of_degree<R: Rng + ?Sized>(rng: &mut R, nvars: usize, degree: u32) -> ExpVec {
    let mut exps = vec![0u32; nvars];
    if nvars > 0 {
        for _ in 0..degree {
            exps[rng.gen_range(0..nvars)] += 1;
        }
    }
    ExpVec::new(&exps)
}

/// A random polynomial of total degree at most `shape.max_degree`; may be zero.
pub fn random_poly<R: Rng + ?Sized>(rng: &mut R, spec: FieldSpec, shape: &SampleShape) -> MultiPoly {
    let t = rng.gen_range(1..=shape.max_terms);
    let terms: Vec<_> = (0..t)
        .map(|_| {
            let d = if shape.nvars == 0 { 0 } else { rng.gen_range(0..=shape.max_degree) };
            (exponent_of_degree(rng, shape.nvars, d), spec.random_nonzero(rng))
        })
        .collect();
    MultiPoly::from_terms(spec, shape.nvars, terms)
}

/// A random homogeneous polynomial of the given degree; may be zero.
pub fn random_homogeneous_poly<R: Rng + ?Sized>(
    rng: &mut R,
    spec: FieldSpec,
    shape: &SampleShape,
    degree: u32,
) -> MultiPoly {
    let t = rng.gen_range(1..=shape.max_terms);
    let terms: Vec<_> = (0..t)
        .map(|_| (exponent_of_degree(rng, shape.nvars, degree), spec.random_nonzero(rng)))
        .collect();
    MultiPoly::from_terms(spec, shape.nvars, terms)
}

fn nonzero<R: Rng + ?Sized>(rng: &mut R, mut draw: impl FnMut(&mut R) -> MultiPoly) -> MultiPoly {
    loop {
        let p = draw(rng);
        if !p.is_zero() {
            return p;
        }
    }
}

/// A random rational function; the numerator may be zero.
pub fn random_ratfunc<R: Rng + ?Sized>(rng: &mut R, spec: FieldSpec, shape: &SampleShape) -> RatFunc {
    let num = random_poly(rng, spec, shape);
    let den = nonzero(rng, |r| random_poly(r, spec, shape));
    RatFunc::new(num, den).expect("nonzero denominator")
}

/// A random homogeneous rational function of degree `degree`; may be zero.
pub fn random_homogeneous_ratfunc<R: Rng + ?Sized>(
    rng: &mut R,
    spec: FieldSpec,
    shape: &SampleShape,
    degree: i64,
) -> RatFunc {
    if shape.nvars == 0 {
        return RatFunc::zero(spec, 0);
    }
    let low = degree.min(0).unsigned_abs() as u32;
    let high = shape.max_degree.max(low);
    let den_degree = rng.gen_range(low..=high);
    let num_degree = (i64::from(den_degree) + degree).max(0) as u32;
    let num = random_homogeneous_poly(rng, spec, shape, num_degree);
    let den = nonzero(rng, |r| random_homogeneous_poly(r, spec, shape, den_degree));
    RatFunc::new(num, den).expect("nonzero denominator")
}

/// `q0^2 + sum z_i q_i^2` (affine) or `sum z_i q_i^2` with degree-0 `q_i`
/// (homogeneous), each witness possibly zero.
fn square_sum<R: Rng + ?Sized>(rng: &mut R, spec: FieldSpec, shape: &SampleShape, homogeneous: bool) -> RatFunc {
    let n = shape.nvars;
    let small = SampleShape::new(n, shape.max_degree.div_ceil(2), shape.max_terms.min(2));
    let mut acc = RatFunc::zero(spec, n);
    let witness = |rng: &mut R| {
        if rng.gen_bool(0.4) {
            return RatFunc::zero(spec, n);
        }
        if homogeneous {
            random_homogeneous_ratfunc(rng, spec, &small, 0)
        } else {
            random_ratfunc(rng, spec, &small)
        }
    };
    if !homogeneous {
        acc = witness(rng).square();
    }
    for i in 0..n {
        let q = witness(rng);
        acc = acc.add(&RatFunc::var(spec, n, i).expect("index in range").mul(&q.square()));
    }
    acc
}

/// A random `k x k` target realizable in `mode`. Entries are zero with
/// probability `zero_chance`.
pub fn random_realizable_target<R: Rng + ?Sized>(
    rng: &mut R,
    spec: FieldSpec,
    shape: &SampleShape,
    k: usize,
    mode: Mode,
    zero_chance: f64,
) -> RatMatrix {
    let n = shape.nvars;
    let entry = |rng: &mut R, diagonal: bool| -> RatFunc {
        if rng.gen_bool(zero_chance) {
            return RatFunc::zero(spec, n);
        }
        if diagonal && mode.symmetric() && spec.characteristic() == 2 {
            return square_sum(rng, spec, shape, mode.homogeneous());
        }
        if mode.homogeneous() {
            random_homogeneous_ratfunc(rng, spec, shape, 1)
        } else {
            random_ratfunc(rng, spec, shape)
        }
    };
    let mut m = RatMatrix::zero(spec, n, k, k);
    for i in 0..k {
        for j in 0..k {
            if mode.symmetric() && j < i {
                let upper = m.get(j, i).clone();
                m.set(i, j, upper);
            } else {
                let e = entry(rng, i == j);
                m.set(i, j, e);
            }
        }
    }
    m
}
