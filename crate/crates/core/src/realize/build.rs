//! Explicit constructions of realizations from combinators.

use super::combinators::{
    atom_constant, atom_homogeneous_variable, atom_variable, comb_congruence, comb_homogenize, comb_inverse,
    comb_product, comb_sandwich, comb_scale, comb_sum, comb_symmetrize,
};
use super::{decide_realizable, Certificate, DiagonalWitness, Mode, Verdict};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::FieldMatrix;
use crate::pencil::{Pencil, Realization};
use crate::poly::{ExpVec, MultiPoly};
use crate::ratio::{RatFunc, RatMatrix};

/// Decides and, if possible, builds a realization of `f` in the given class.
pub fn build_realization(f: &RatMatrix, mode: Mode) -> Result<Realization> {
    let verdict = decide_realizable(f, mode)?;
    build_from_verdict(f, &verdict)
}

pub(super) fn build_from_verdict(f: &RatMatrix, verdict: &Verdict) -> Result<Realization> {
    if !verdict.realizable {
        return Err(Error::NotRealizable(verdict.mode.to_string()));
    }
    let homogeneous = verdict.mode.homogeneous();
    let plain = |m: &RatMatrix| if homogeneous { hbr_matrix(m) } else { br_matrix(m) };
    if !verdict.mode.symmetric() {
        return plain(f);
    }
    let spec = f.spec();
    if spec.characteristic() != 2 {
        let half = spec.inv(spec.from_int(2)).expect("odd characteristic");
        return Ok(comb_scale(&comb_symmetrize(&plain(f)?), half));
    }
    let Certificate::Witnesses(witnesses) = &verdict.certificate else {
        return Err(Error::Inconsistent("symmetric verdict in characteristic 2 without witnesses".into()));
    };
    let k = f.rows();
    let upper = RatMatrix::from_fn(k, k, |i, j| {
        if i < j {
            f.get(i, j).clone()
        } else {
            RatFunc::zero(spec, f.nvars())
        }
    });
    let mut acc = comb_symmetrize(&plain(&upper)?);
    for w in witnesses {
        let d = if homogeneous { diagonal_homogeneous(w, spec, f.nvars())? } else { diagonal_affine(w, spec, f.nvars())? };
        acc = comb_sum(&acc, &comb_congruence(&d, &unit_column(spec, k, w.index), None)?)?;
    }
    Ok(acc)
}

fn unit_column(spec: FieldSpec, k: usize, i: usize) -> FieldMatrix {
    FieldMatrix::from_fn(spec, k, 1, |r, _| u64::from(r == i))
}

fn constant(spec: FieldSpec, nvars: usize, c: u64) -> Result<Realization> {
    atom_constant(&FieldMatrix::from_fn(spec, 1, 1, |_, _| c), nvars)
}

fn monomial(spec: FieldSpec, nvars: usize, e: &ExpVec) -> Result<Realization> {
    let mut factors = Vec::new();
    for var in 0..nvars {
        for _ in 0..e.get(var) {
            factors.push(atom_variable(spec, nvars, var)?);
        }
    }
    let Some((first, rest)) = factors.split_first() else {
        return constant(spec, nvars, 1);
    };
    rest.iter().try_fold(first.clone(), |acc, x| comb_product(&acc, x))
}

/// Scalar realization of a polynomial as a sum of scaled monomials.
fn br_poly(p: &MultiPoly) -> Result<Realization> {
    let (spec, nvars) = (p.spec(), p.nvars());
    let mut acc = Realization::zero(spec, nvars, 1);
    for (e, c) in p.terms() {
        let term = if e.is_zero() { constant(spec, nvars, c)? } else { comb_scale(&monomial(spec, nvars, e)?, c) };
        acc = comb_sum(&acc, &term)?;
    }
    Ok(acc)
}

/// Scalar realization of `num / den`.
fn br_scalar(r: &RatFunc) -> Result<Realization> {
    let num = br_poly(r.num())?;
    if r.den().is_one() {
        return Ok(num);
    }
    comb_product(&num, &comb_inverse(&br_poly(r.den())?)?)
}

/// Realization of an arbitrary square matrix, entry by entry.
fn br_matrix(f: &RatMatrix) -> Result<Realization> {
    let (spec, k) = (f.spec(), f.rows());
    let mut acc = Realization::zero(spec, f.nvars(), k);
    for i in 0..k {
        for j in 0..k {
            let entry = f.get(i, j);
            if entry.is_zero() {
                continue;
            }
            let u = unit_column(spec, k, i);
            let v = unit_column(spec, k, j).transpose();
            acc = comb_sum(&acc, &comb_congruence(&br_scalar(entry)?, &u, Some(&v))?)?;
        }
    }
    Ok(acc)
}

/// Homogeneous realization of a matrix of degree-1 functions: dehomogenize
/// at the last variable, realize, and homogenize back.
fn hbr_matrix(f: &RatMatrix) -> Result<Realization> {
    let n = f.nvars();
    if n == 0 {
        if !f.is_zero() {
            return Err(Error::NotHomogeneousDegreeOne);
        }
        return Ok(Realization::zero(f.spec(), 0, f.rows()));
    }
    let affine = f.try_map(|r| {
        r.set_var_to_one(n - 1)
            .ok_or(Error::NotHomogeneousDegreeOne)?
            .with_nvars(n - 1)
    })?;
    Ok(comb_homogenize(&br_matrix(&affine)?))
}

/// `[z_i]` as a whole symmetric pencil scaled by `c`.
fn scaled_variable(spec: FieldSpec, nvars: usize, var: usize, c: u64) -> Realization {
    let p = Pencil::build(spec, nvars, 1, |j, m| {
        if j == var + 1 {
            m.set(0, 0, c);
        }
    });
    Realization::whole(p)
}

/// Symmetric realization of `q^2 z_i` as `(q z_i) z_i^-1 (q z_i)`.
fn square_times_variable(q: &RatFunc, var: usize, homogeneous: bool) -> Result<Realization> {
    let (spec, nvars) = (q.spec(), q.nvars());
    let qz = RatMatrix::scalar(q.mul(&RatFunc::var(spec, nvars, var)?));
    let outer = if homogeneous { hbr_matrix(&qz)? } else { br_matrix(&qz)? };
    comb_sandwich(&outer, &scaled_variable(spec, nvars, var, 1), &outer.transpose())
}

/// Symmetric realization of `q0^2 + sum z_i q_i^2`.
fn diagonal_affine(w: &DiagonalWitness, spec: FieldSpec, nvars: usize) -> Result<Realization> {
    let mut acc = Realization::zero(spec, nvars, 1);
    if let Some(q0) = w.witnesses.q0.as_ref().filter(|q| !q.is_zero()) {
        let term = match q0.constant_value() {
            Some(c) => constant(spec, nvars, spec.mul(c, c))?,
            None => {
                let outer = br_scalar(q0)?;
                comb_product(&outer, &outer.transpose())?
            }
        };
        acc = comb_sum(&acc, &term)?;
    }
    for (var, q) in w.witnesses.qs.iter().enumerate() {
        if q.is_zero() {
            continue;
        }
        let term = match q.constant_value() {
            Some(c) => scaled_variable(spec, nvars, var, spec.mul(c, c)),
            None => square_times_variable(q, var, false)?,
        };
        acc = comb_sum(&acc, &term)?;
    }
    Ok(acc)
}

/// Symmetric homogeneous realization of `sum z_i q_i^2`.
fn diagonal_homogeneous(w: &DiagonalWitness, spec: FieldSpec, nvars: usize) -> Result<Realization> {
    let mut acc = Realization::zero(spec, nvars, 1);
    for (var, q) in w.witnesses.qs.iter().enumerate() {
        if q.is_zero() {
            continue;
        }
        let term = match q.constant_value() {
            Some(c) => atom_homogeneous_variable(spec, nvars, var, spec.mul(c, c))?,
            None => square_times_variable(q, var, true)?,
        };
        acc = comb_sum(&acc, &term)?;
    }
    Ok(acc)
}
