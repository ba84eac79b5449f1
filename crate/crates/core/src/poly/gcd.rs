//! Multivariate gcd by recursive content extraction and subresultant
//! pseudo-remainder sequences.

use super::MultiPoly;
use crate::error::{Error, Result};

/// Monic greatest common divisor. Fails only when both inputs are zero.
pub fn poly_gcd(a: &MultiPoly, b: &MultiPoly) -> Result<MultiPoly> {
    a.check_compatible(b)?;
    if a.is_zero() && b.is_zero() {
        return Err(Error::BothZero);
    }
    Ok(gcd_unnormalized(a, b).monic().0)
}

/// A gcd up to a nonzero constant factor.
pub(crate) fn gcd_unnormalized(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let one = MultiPoly::one(a.spec(), a.nvars());
    if a.is_constant() || b.is_constant() {
        return one;
    }
    if a == b {
        return a.clone();
    }
    let (ma, ra) = a.split_monomial_content();
    let (mb, rb) = b.split_monomial_content();
    let g = gcd_without_monomials(ra, rb);
    g.mul_term(&ma.meet(&mb), 1)
}

/// Gcd of a list, stopping early once it becomes constant.
fn content_of(coeffs: &[MultiPoly]) -> MultiPoly {
    let mut it = coeffs.iter().filter(|c| !c.is_zero());
    let Some(first) = it.next() else {
        return MultiPoly::zero(coeffs[0].spec(), coeffs[0].nvars());
    };
    let mut g = first.clone();
    for c in it {
        if g.is_constant() {
            break;
        }
        g = gcd_unnormalized(&g, c);
    }
    if g.is_constant() {
        MultiPoly::one(g.spec(), g.nvars())
    } else {
        g
    }
}

fn divide_all(coeffs: &[MultiPoly], d: &MultiPoly) -> Vec<MultiPoly> {
    if d.is_one() {
        return coeffs.to_vec();
    }
    coeffs
        .iter()
        .map(|c| c.exact_div(d).expect("content divides every coefficient"))
        .collect()
}

fn gcd_without_monomials(mut a: MultiPoly, mut b: MultiPoly) -> MultiPoly {
    let one = MultiPoly::one(a.spec(), a.nvars());
    // A variable present in only one operand cannot occur in the gcd, so that
    // operand may be replaced by its content with respect to the variable.
    loop {
        if a.is_constant() || b.is_constant() {
            return one;
        }
        let (va, vb) = (a.variables(), b.variables());
        if va == vb {
            break;
        }
        if let Some(v) = first_bit(va & !vb) {
            a = content_of(&a.coefficients_in(v));
        } else if let Some(v) = first_bit(vb & !va) {
            b = content_of(&b.coefficients_in(v));
        }
    }
    let common = a.variables();
    let main = (0..a.nvars())
        .filter(|v| common >> v & 1 == 1)
        .min_by_key(|&v| (a.degree_in(v).max(b.degree_in(v)), v))
        .expect("non-constant polynomial has a variable");

    let ca = a.coefficients_in(main);
    let cb = b.coefficients_in(main);
    let conta = content_of(&ca);
    let contb = content_of(&cb);
    let content = gcd_unnormalized(&conta, &contb);
    let pa = divide_all(&ca, &conta);
    let pb = divide_all(&cb, &contb);
    let prim = subresultant_gcd(pa, pb);
    MultiPoly::from_coefficients_in(main, &prim).mul(&content)
}

fn first_bit(mask: u64) -> Option<usize> {
    (mask != 0).then(|| mask.trailing_zeros() as usize)
}

type Univariate = Vec<MultiPoly>;

fn trim(p: &mut Univariate) {
    while p.len() > 1 && p.last().is_some_and(MultiPoly::is_zero) {
        p.pop();
    }
}

fn is_zero(p: &Univariate) -> bool {
    p.iter().all(MultiPoly::is_zero)
}

fn lead(p: &Univariate) -> &MultiPoly {
    p.last().expect("non-empty coefficient list")
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
fn pseudo_rem(a: &Univariate, b: &Univariate) -> Univariate {
    let db = b.len() - 1;
    let lb = lead(b);
    let mut r = a.clone();
    let mut steps = 0usize;
    let total = a.len() - b.len() + 1;
    while !is_zero(&r) && r.len() > db {
        let lr = lead(&r).clone();
        let shift = r.len() - 1 - db;
        for c in r.iter_mut() {
            *c = c.mul(lb);
        }
        for (i, bc) in b.iter().enumerate() {
            let t = bc.mul(&lr);
            r[i + shift] = r[i + shift].sub(&t);
        }
        debug_assert!(lead(&r).is_zero());
        r.pop();
        trim(&mut r);
        steps += 1;
    }
    let fix = lb.pow((total - steps) as u32);
    if !fix.is_one() {
        for c in r.iter_mut() {
            *c = c.mul(&fix);
        }
    }
    r
}

/// Gcd of two primitive polynomials in a distinguished variable.
fn subresultant_gcd(mut a: Univariate, mut b: Univariate) -> Univariate {
    trim(&mut a);
    trim(&mut b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    let spec = a[0].spec();
    let nvars = a[0].nvars();
    let one = MultiPoly::one(spec, nvars);
    let mut g = one.clone();
    let mut h = one.clone();
    loop {
        let delta = (a.len() - b.len()) as u32;
        let r = pseudo_rem(&a, &b);
        if is_zero(&r) {
            break;
        }
        if r.len() == 1 {
            return vec![one];
        }
        a = b;
        let divisor = g.mul(&h.pow(delta));
        b = divide_all(&r, &divisor);
        g = lead(&a).clone();
        h = match delta {
            0 => h,
            1 => g.clone(),
            d => g
                .pow(d)
                .exact_div(&h.pow(d - 1))
                .expect("subresultant recurrence is exact"),
        };
    }
    let c = content_of(&b);
    divide_all(&b, &c)
}
