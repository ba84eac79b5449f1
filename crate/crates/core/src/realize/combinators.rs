//! Operations on realizations that act predictably on the Schur complement.
//!
//! Every construction rests on two identities: `F X^-1 G` is the Schur
//! complement of `[[0, F], [G, -X]]` with respect to `-X`, and eliminating a
//! trailing block in stages gives the same Schur complement as eliminating it
//! at once. Each combinator documents its block layout; coefficients are
//! assembled per power of `z`.

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::FieldMatrix;
use crate::pencil::{Pencil, Realization};
use crate::poly::check_var;

fn check_compatible(a: &Realization, b: &Realization) -> Result<()> {
    if a.spec() != b.spec() {
        return Err(Error::MixedFields(a.spec().to_string(), b.spec().to_string()));
    }
    if a.nvars() != b.nvars() {
        return Err(Error::VariableCountMismatch { expected: a.nvars(), found: b.nvars() });
    }
    Ok(())
}

/// Offsets of consecutive blocks with the given sizes.
fn offsets(sizes: &[usize]) -> Vec<usize> {
    sizes
        .iter()
        .scan(0, |acc, &s| {
            let o = *acc;
            *acc += s;
            Some(o)
        })
        .collect()
}

impl Realization {
    /// The realization whose target is the whole pencil (no eliminated block).
    pub fn whole(pencil: Pencil) -> Realization {
        let m = pencil.size();
        Realization::new(pencil, m).expect("top equals size")
    }

    /// The `k x k` zero function, realized by a zero pencil with nothing to
    /// eliminate. Symmetric and homogeneous.
    pub fn zero(spec: FieldSpec, nvars: usize, k: usize) -> Realization {
        Realization::whole(Pencil::zeros(spec, nvars, k))
    }

    /// Realizes `F^T` by transposing every coefficient.
    pub fn transpose(&self) -> Realization {
        Realization::new(self.pencil().transpose(), self.top()).expect("same shape")
    }

    fn trailing(&self) -> usize {
        self.size() - self.top()
    }
}

/// `[[M, 0], [0, 1]]` with top block `k`: realizes the constant matrix `M`.
pub fn atom_constant(m: &FieldMatrix, nvars: usize) -> Result<Realization> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let k = m.rows();
    let p = Pencil::build(m.spec(), nvars, k + 1, |j, c| {
        if j == 0 {
            c.set_block(0, 0, m);
            c.set(k, k, 1);
        }
    });
    Realization::new(p, k)
}

/// `[[z_i, 0], [0, 1]]`: realizes the variable `z_(var+1)`.
pub fn atom_variable(spec: FieldSpec, nvars: usize, var: usize) -> Result<Realization> {
    check_var(var, nvars)?;
    let p = Pencil::build(spec, nvars, 2, |j, c| {
        if j == 0 {
            c.set(1, 1, 1);
        } else if j == var + 1 {
            c.set(0, 0, 1);
        }
    });
    Realization::new(p, 1)
}

/// `[[c z_i, 0], [0, z_i]]`: realizes `c z_(var+1)` with a homogeneous
/// symmetric pencil.
pub fn atom_homogeneous_variable(spec: FieldSpec, nvars: usize, var: usize, c: u64) -> Result<Realization> {
    check_var(var, nvars)?;
    let p = Pencil::build(spec, nvars, 2, |j, m| {
        if j == var + 1 {
            m.set(0, 0, c);
            m.set(1, 1, 1);
        }
    });
    Realization::new(p, 1)
}

/// `lambda F`: every coefficient scaled; `lambda = 0` gives the zero realization.
pub fn comb_scale(a: &Realization, lambda: u64) -> Realization {
    if lambda == 0 {
        return Realization::zero(a.spec(), a.nvars(), a.top());
    }
    Realization::new(a.pencil().map(|c| c.scale(lambda)), a.top()).expect("same shape")
}

/// `F + G` via `[[A11 + B11, A12, B12], [A21, A22, 0], [B21, 0, B22]]`.
pub fn comb_sum(a: &Realization, b: &Realization) -> Result<Realization> {
    check_compatible(a, b)?;
    if a.top() != b.top() {
        return Err(Error::ShapeMismatch(format!(
            "cannot add {0}x{0} and {1}x{1} targets",
            a.top(),
            b.top()
        )));
    }
    let (k, sa, sb) = (a.top(), a.trailing(), b.trailing());
    let p = Pencil::build(a.spec(), a.nvars(), k + sa + sb, |j, c| {
        c.set_block(0, 0, &a.block(j, 0, 0).add(&b.block(j, 0, 0)));
        if sa > 0 {
            c.set_block(0, k, &a.block(j, 0, 1));
            c.set_block(k, 0, &a.block(j, 1, 0));
            c.set_block(k, k, &a.block(j, 1, 1));
        }
        if sb > 0 {
            c.set_block(0, k + sa, &b.block(j, 0, 1));
            c.set_block(k + sa, 0, &b.block(j, 1, 0));
            c.set_block(k + sa, k + sa, &b.block(j, 1, 1));
        }
    });
    Realization::new(p, k)
}

/// `F + F^T` with a symmetric pencil:
/// `[[A11 + A11^T, A12, A21^T], [A12^T, 0, A22^T], [A21, A22, 0]]`.
pub fn comb_symmetrize(a: &Realization) -> Realization {
    let (k, s) = (a.top(), a.trailing());
    let p = Pencil::build(a.spec(), a.nvars(), k + 2 * s, |j, c| {
        let a11 = a.block(j, 0, 0);
        c.set_block(0, 0, &a11.add(&a11.transpose()));
        if s > 0 {
            let (a12, a21, a22) = (a.block(j, 0, 1), a.block(j, 1, 0), a.block(j, 1, 1));
            c.set_block(0, k, &a12);
            c.set_block(0, k + s, &a21.transpose());
            c.set_block(k, 0, &a12.transpose());
            c.set_block(k, k + s, &a22.transpose());
            c.set_block(k + s, 0, &a21);
            c.set_block(k + s, k, &a22);
        }
    });
    Realization::new(p, k).expect("top within size")
}

/// `U F V` (with `V = U^T` by default) via `[[U A11 V, U A12], [A21 V, A22]]`.
///
/// `U` is `p x k` and `V` is `k x p` for a `k x k` target.
pub fn comb_congruence(a: &Realization, u: &FieldMatrix, v: Option<&FieldMatrix>) -> Result<Realization> {
    let ut;
    let v = match v {
        Some(v) => v,
        None => {
            ut = u.transpose();
            &ut
        }
    };
    let k = a.top();
    let p_rows = u.rows();
    if u.cols() != k || v.rows() != k || v.cols() != p_rows || p_rows == 0 {
        return Err(Error::ShapeMismatch(format!(
            "congruence by {}x{} and {}x{} on a {k}x{k} target",
            u.rows(),
            u.cols(),
            v.rows(),
            v.cols()
        )));
    }
    if u.spec() != a.spec() || v.spec() != a.spec() {
        return Err(Error::MixedFields(a.spec().to_string(), u.spec().to_string()));
    }
    let s = a.trailing();
    let p = Pencil::build(a.spec(), a.nvars(), p_rows + s, |j, c| {
        c.set_block(0, 0, &u.mul(&a.block(j, 0, 0)).mul(v));
        if s > 0 {
            c.set_block(0, p_rows, &u.mul(&a.block(j, 0, 1)));
            c.set_block(p_rows, 0, &a.block(j, 1, 0).mul(v));
            c.set_block(p_rows, p_rows, &a.block(j, 1, 1));
        }
    });
    Realization::new(p, p_rows)
}

/// `F X^-1 G`, where `X` is itself given as a realization (a plain pencil is
/// [`Realization::whole`]).
///
/// With blocks ordered `[top | middle | a22 | b22 | x22]` the pencil is
///
/// ```text
/// [[0,   A11,  A12, 0,   0   ],
///  [B11, -X11, 0,   B12, -X12],
///  [0,   A21,  A22, 0,   0   ],
///  [B21, 0,    0,   B22, 0   ],
///  [0,   -X21, 0,   0,   -X22]]
/// ```
///
/// Eliminating `x22`, `a22` and `b22` leaves `[[0, F], [G, -X]]`. When `b`
/// is the transpose of `a` and `X` is symmetric, the `a22` blocks are laid
/// out as `[[0, A22^T], [A22, 0]]` instead so that the pencil is symmetric.
pub fn comb_sandwich(a: &Realization, x: &Realization, b: &Realization) -> Result<Realization> {
    check_compatible(a, b)?;
    check_compatible(a, x)?;
    let k = a.top();
    if x.top() != k || b.top() != k {
        return Err(Error::ShapeMismatch(format!(
            "sandwich of {k}x{k}, {0}x{0} and {1}x{1} targets",
            x.top(),
            b.top()
        )));
    }
    if x.pencil().is_identically_singular() || x.schur_symbolic_is_singular() {
        return Err(Error::SingularMiddle);
    }
    let symmetric_layout = x.is_symmetric() && *b == a.transpose();
    let (sa, sb, sx) = (a.trailing(), b.trailing(), x.trailing());
    let size = 2 * k + sa + sb + sx;
    let o = offsets(&[k, k, sa, sb, sx]);
    let (top, mid, pa, pb, px) = (o[0], o[1], o[2], o[3], o[4]);
    let p = Pencil::build(a.spec(), a.nvars(), size, |j, c| {
        c.set_block(top, mid, &a.block(j, 0, 0));
        c.set_block(mid, top, &b.block(j, 0, 0));
        c.set_block(mid, mid, &x.block(j, 0, 0).neg());
        if sx > 0 {
            c.set_block(mid, px, &x.block(j, 0, 1).neg());
            c.set_block(px, mid, &x.block(j, 1, 0).neg());
            c.set_block(px, px, &x.block(j, 1, 1).neg());
        }
        if sa > 0 {
            if symmetric_layout {
                // Rows/cols `pa` carry A22^T and A12^T; rows/cols `pb` carry A21, A22.
                let (a12, a21, a22) = (a.block(j, 0, 1), a.block(j, 1, 0), a.block(j, 1, 1));
                c.set_block(top, pa, &a12);
                c.set_block(pa, top, &a12.transpose());
                c.set_block(mid, pb, &a21.transpose());
                c.set_block(pb, mid, &a21);
                c.set_block(pa, pb, &a22.transpose());
                c.set_block(pb, pa, &a22);
            } else {
                c.set_block(top, pa, &a.block(j, 0, 1));
                c.set_block(pa, mid, &a.block(j, 1, 0));
                c.set_block(pa, pa, &a.block(j, 1, 1));
            }
        }
        if sb > 0 && !symmetric_layout {
            c.set_block(mid, pb, &b.block(j, 0, 1));
            c.set_block(pb, top, &b.block(j, 1, 0));
            c.set_block(pb, pb, &b.block(j, 1, 1));
        }
    });
    Realization::new(p, k)
}

impl Realization {
    /// True when the trailing block exists and is identically singular.
    fn schur_symbolic_is_singular(&self) -> bool {
        if self.trailing() == 0 {
            return false;
        }
        let a22 = Pencil::build(self.spec(), self.nvars(), self.trailing(), |j, c| {
            c.set_block(0, 0, &self.block(j, 1, 1));
        });
        a22.is_identically_singular()
    }
}

/// `F^-1` via `[[0, I, 0], [I, -A11, -A12], [0, -A21, -A22]]`.
pub fn comb_inverse(a: &Realization) -> Result<Realization> {
    if a.pencil().is_identically_singular() {
        return Err(Error::SingularTarget);
    }
    let k = a.top();
    let m = a.size();
    let f = a.spec();
    let eye = FieldMatrix::identity(f, k);
    let p = Pencil::build(f, a.nvars(), k + m, |j, c| {
        if j == 0 {
            c.set_block(0, k, &eye);
            c.set_block(k, 0, &eye);
        }
        c.set_block(k, k, &a.pencil().coeff(j).neg());
    });
    Realization::new(p, k)
}

/// `F ⊗ I_s`: every coefficient replaced by `A ⊗ I_s`.
pub fn comb_kron(a: &Realization, s: usize) -> Result<Realization> {
    if s == 0 {
        return Err(Error::InvalidArgument("Kronecker factor must be at least 1".into()));
    }
    Realization::new(a.pencil().map(|c| c.kron_identity(s)), a.top() * s)
}

/// `z_(n+1) F(z / z_(n+1))` in `n + 1` variables: `A'0 = 0`, `A'i = Ai`,
/// `A'(n+1) = A0`.
pub fn comb_homogenize(a: &Realization) -> Realization {
    let n = a.nvars();
    let src = a.pencil();
    let p = Pencil::build(a.spec(), n + 1, a.size(), |j, c| {
        if j == n + 1 {
            *c = src.coeff(0).clone();
        } else if j > 0 {
            *c = src.coeff(j).clone();
        }
    });
    Realization::new(p, a.top()).expect("same shape")
}

/// `F G` as `F I^-1 G`.
pub fn comb_product(a: &Realization, b: &Realization) -> Result<Realization> {
    let eye = Realization::whole(Pencil::build(a.spec(), a.nvars(), a.top(), |j, c| {
        if j == 0 {
            *c = FieldMatrix::identity(a.spec(), a.top());
        }
    }));
    comb_sandwich(a, &eye, b)
}

/// `x + x^T`, the trace of `x`.
pub fn jordan_trace(x: &Realization) -> Realization {
    comb_symmetrize(x)
}

/// `x x^T` with a symmetric pencil.
pub fn jordan_norm(x: &Realization) -> Result<Realization> {
    comb_product(x, &x.transpose())
}

/// `x h x^T`; symmetric whenever `h` is.
pub fn jordan_sandwich(x: &Realization, h: &Realization) -> Result<Realization> {
    let hinv = comb_inverse(h)?;
    comb_sandwich(x, &hinv, &x.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::{RatFunc, RatMatrix};

    fn z(f: FieldSpec, n: usize, i: usize) -> RatFunc {
        RatFunc::var(f, n, i).unwrap()
    }

    fn scalar(r: &Realization) -> RatFunc {
        let m = r.schur_symbolic().unwrap();
        assert_eq!((m.rows(), m.cols()), (1, 1));
        m.get(0, 0).clone()
    }

    #[test]
    fn atoms() {
        let f = FieldSpec::gf2();
        assert_eq!(scalar(&atom_variable(f, 3, 1).unwrap()), z(f, 3, 1));
        let eye = FieldMatrix::identity(f, 2);
        assert_eq!(
            atom_constant(&eye, 1).unwrap().schur_symbolic().unwrap(),
            RatMatrix::identity(f, 1, 2)
        );
        let zero = FieldMatrix::zeros(f, 1, 1);
        assert!(scalar(&atom_constant(&zero, 1).unwrap()).is_zero());
        assert!(atom_variable(f, 2, 2).is_err());
    }

    #[test]
    fn scale_and_sum() {
        let f4 = FieldSpec::gf4();
        let z1 = atom_variable(f4, 2, 0).unwrap();
        let z2 = atom_variable(f4, 2, 1).unwrap();
        assert_eq!(scalar(&comb_scale(&z1, 2)), z(f4, 2, 0).scale(2));
        assert!(scalar(&comb_scale(&z1, 0)).is_zero());
        let s = comb_sum(&z1, &z2).unwrap();
        assert_eq!(scalar(&s), z(f4, 2, 0).add(&z(f4, 2, 1)));
        assert!(scalar(&comb_sum(&z1, &z1).unwrap()).is_zero());
    }

    #[test]
    fn symmetrize() {
        let f2 = FieldSpec::gf2();
        let s = comb_symmetrize(&atom_variable(f2, 1, 0).unwrap());
        assert!(s.is_symmetric());
        assert!(scalar(&s).is_zero());
        let f3 = FieldSpec::gf3();
        let s = comb_symmetrize(&atom_variable(f3, 1, 0).unwrap());
        assert_eq!(scalar(&s), z(f3, 1, 0).scale(2));
    }

    #[test]
    fn congruence() {
        let f2 = FieldSpec::gf2();
        let diag = comb_sum(
            &comb_congruence(&atom_variable(f2, 2, 0).unwrap(), &FieldMatrix::from_rows(f2, &[vec![1], vec![0]]), None).unwrap(),
            &comb_congruence(&atom_variable(f2, 2, 1).unwrap(), &FieldMatrix::from_rows(f2, &[vec![0], vec![1]]), None).unwrap(),
        )
        .unwrap();
        let u = FieldMatrix::from_rows(f2, &[vec![1, 1]]);
        let c = comb_congruence(&diag, &u, None).unwrap();
        assert_eq!(scalar(&c), z(f2, 2, 0).add(&z(f2, 2, 1)));
        assert!(c.is_symmetric());
    }

    #[test]
    fn sandwich_generators() {
        let f2 = FieldSpec::gf2();
        let one = atom_constant(&FieldMatrix::identity(f2, 1), 1).unwrap();
        let x = Realization::whole(Pencil::new(f2, 1, vec![FieldMatrix::zeros(f2, 1, 1), FieldMatrix::identity(f2, 1)]).unwrap());
        let r = comb_sandwich(&one, &x, &one).unwrap();
        assert_eq!(scalar(&r), z(f2, 1, 0).inv().unwrap());

        // q z1 with q = z1 + 1, middle z1: q^2 z1, symmetric.
        let q_z1 = comb_product(
            &comb_sum(&atom_variable(f2, 1, 0).unwrap(), &one).unwrap(),
            &atom_variable(f2, 1, 0).unwrap(),
        )
        .unwrap();
        let r = comb_sandwich(&q_z1, &x, &q_z1.transpose()).unwrap();
        assert!(r.is_symmetric());
        let q = z(f2, 1, 0).add(&RatFunc::one(f2, 1));
        assert_eq!(scalar(&r), q.square().mul(&z(f2, 1, 0)));
    }

    #[test]
    fn inverse_and_kron() {
        let f3 = FieldSpec::gf3();
        let z1 = atom_variable(f3, 1, 0).unwrap();
        let inv = comb_inverse(&z1).unwrap();
        assert_eq!(scalar(&inv), z(f3, 1, 0).inv().unwrap());
        assert_eq!(scalar(&comb_inverse(&inv).unwrap()), z(f3, 1, 0));
        let two = atom_constant(&FieldMatrix::from_rows(f3, &[vec![2]]), 1).unwrap();
        assert_eq!(scalar(&comb_inverse(&two).unwrap()), RatFunc::constant(f3, 1, 2));
        assert_eq!(comb_inverse(&Realization::zero(f3, 1, 1)), Err(Error::SingularTarget));

        let k = comb_kron(&z1, 2).unwrap();
        let m = k.schur_symbolic().unwrap();
        assert_eq!(m, RatMatrix::from_fn(2, 2, |i, j| if i == j { z(f3, 1, 0) } else { RatFunc::zero(f3, 1) }));
    }

    #[test]
    fn homogenize() {
        let f2 = FieldSpec::gf2();
        let one = atom_constant(&FieldMatrix::identity(f2, 1), 1).unwrap();
        let h = comb_homogenize(&one);
        assert!(h.is_homogeneous());
        assert_eq!(scalar(&h), z(f2, 2, 1));
        let z1_plus_1 = comb_sum(&atom_variable(f2, 1, 0).unwrap(), &one).unwrap();
        assert_eq!(scalar(&comb_homogenize(&z1_plus_1)), z(f2, 2, 0).add(&z(f2, 2, 1)));
    }
}
