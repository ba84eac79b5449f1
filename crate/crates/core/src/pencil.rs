//! Affine linear matrix pencils `A(z) = A0 + z_1 A1 + ... + z_n An` and the
//! Schur complements `A11 - A12 A22^-1 A21` they realize.

use std::sync::OnceLock;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Embedding, FieldElem, FieldSpec};
use crate::linalg::FieldMatrix;
use crate::poly::{ExpVec, MultiPoly};
use crate::ratio::{RatFunc, RatMatrix};

/// A square affine linear pencil over a finite field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Pencil {
    spec: FieldSpec,
    nvars: usize,
    /// `A0, A1, ..., An`.
    coeffs: Vec<FieldMatrix>,
}

/// Structural flags of a pencil.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PencilPredicates {
    pub symmetric: bool,
    pub homogeneous: bool,
    /// Per coefficient `A0..An`: symmetric with zero diagonal, in characteristic 2.
    pub alternate: Vec<bool>,
}

impl Pencil {
    pub fn new(spec: FieldSpec, nvars: usize, coeffs: Vec<FieldMatrix>) -> Result<Self> {
        if coeffs.len() != nvars + 1 {
            return Err(Error::ShapeMismatch(format!(
                "{} coefficient matrices for {nvars} variables",
                coeffs.len()
            )));
        }
        let size = coeffs[0].rows();
        if size == 0 {
            return Err(Error::ShapeMismatch("empty pencil".into()));
        }
        for c in &coeffs {
            if !c.is_square() {
                return Err(Error::NotSquare { rows: c.rows(), cols: c.cols() });
            }
            if c.rows() != size {
                return Err(Error::ShapeMismatch(format!(
                    "coefficient of size {} in a pencil of size {size}",
                    c.rows()
                )));
            }
            if c.spec() != spec {
                return Err(Error::MixedFields(spec.to_string(), c.spec().to_string()));
            }
        }
        Ok(Pencil { spec, nvars, coeffs })
    }

    pub fn zeros(spec: FieldSpec, nvars: usize, size: usize) -> Self {
        Pencil {
            spec,
            nvars,
            coeffs: vec![FieldMatrix::zeros(spec, size, size); nvars + 1],
        }
    }

    /// Builds a pencil coefficient by coefficient; `fill(j, m)` writes `Aj`.
    pub(crate) fn build(
        spec: FieldSpec,
        nvars: usize,
        size: usize,
        mut fill: impl FnMut(usize, &mut FieldMatrix),
    ) -> Self {
        let mut p = Self::zeros(spec, nvars, size);
        for (j, c) in p.coeffs.iter_mut().enumerate() {
            fill(j, c);
        }
        p
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn size(&self) -> usize {
        self.coeffs[0].rows()
    }

    /// `A0` for `j = 0`, otherwise the coefficient of `z_j`.
    pub fn coeff(&self, j: usize) -> &FieldMatrix {
        &self.coeffs[j]
    }

    pub fn coeff_mut(&mut self, j: usize) -> &mut FieldMatrix {
        &mut self.coeffs[j]
    }

    pub fn coeffs(&self) -> &[FieldMatrix] {
        &self.coeffs
    }

    pub fn transpose(&self) -> Pencil {
        self.map(FieldMatrix::transpose)
    }

    pub fn map(&self, f: impl Fn(&FieldMatrix) -> FieldMatrix) -> Pencil {
        Pencil {
            spec: self.spec,
            nvars: self.nvars,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.coeffs.iter().all(FieldMatrix::is_symmetric)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.coeffs[0].is_zero()
    }

    pub fn predicates(&self) -> PencilPredicates {
        let char2 = self.spec.characteristic() == 2;
        PencilPredicates {
            symmetric: self.is_symmetric(),
            homogeneous: self.is_homogeneous(),
            alternate: self.coeffs.iter().map(|c| char2 && c.is_alternate()).collect(),
        }
    }

    /// `A(point)` for a point given by raw representatives of `emb.target()`.
    pub fn eval_raw(&self, emb: &Embedding, point: &[u64]) -> FieldMatrix {
        let f = emb.target();
        let mut acc = self.coeffs[0].embed(emb);
        for (c, &x) in self.coeffs[1..].iter().zip(point) {
            if x == 0 || c.is_zero() {
                continue;
            }
            acc = acc.add(&c.embed(emb).scale(x));
        }
        debug_assert_eq!(acc.spec(), f);
        acc
    }

    pub fn eval(&self, point: &[FieldElem]) -> Result<FieldMatrix> {
        let (emb, raw) = embed_point(self.spec, self.nvars, point)?;
        Ok(self.eval_raw(&emb, &raw))
    }

    /// The pencil as a matrix of linear polynomials.
    pub fn to_rat_matrix(&self) -> RatMatrix {
        let (f, n, m) = (self.spec, self.nvars, self.size());
        RatMatrix::from_fn(m, m, |r, c| {
            let mut terms = vec![(ExpVec::zero(n), self.coeffs[0].get(r, c))];
            for i in 0..n {
                terms.push((ExpVec::unit(n, i), self.coeffs[i + 1].get(r, c)));
            }
            RatFunc::from_poly(MultiPoly::from_terms(f, n, terms))
        })
    }

    /// Whether `det A(z)` vanishes identically.
    ///
    /// A nonsingular evaluation settles the question; otherwise the pencil is
    /// eliminated symbolically.
    pub fn is_identically_singular(&self) -> bool {
        if let Ok(field) = oracle_field(self.spec, 16) {
            let emb = self.spec.embedding(&field).expect("oracle field embeds");
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..4 {
                let point: Vec<u64> = (0..self.nvars).map(|_| field.random(&mut rng)).collect();
                if self.eval_raw(&emb, &point).det() != 0 {
                    return false;
                }
            }
        }
        let m = self.size();
        let padded = Pencil::build(self.spec, self.nvars, m + 1, |j, c| {
            c.set_block(1, 1, &self.coeffs[j]);
        });
        schur_eliminate(&padded, 1).is_none()
    }

    /// The same pencil in `nvars >= self.nvars()` variables.
    pub fn with_nvars(&self, nvars: usize) -> Pencil {
        assert!(nvars >= self.nvars);
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(nvars + 1, FieldMatrix::zeros(self.spec, self.size(), self.size()));
        Pencil { spec: self.spec, nvars, coeffs }
    }

    /// The same pencil over an extension field.
    pub fn embed(&self, emb: &Embedding) -> Pencil {
        Pencil {
            spec: emb.target(),
            nvars: self.nvars,
            coeffs: self.coeffs.iter().map(|c| c.embed(emb)).collect(),
        }
    }
}

impl std::fmt::Debug for Pencil {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Pencil[{}; n={}; m={}]", self.spec, self.nvars, self.size())?;
        for (j, c) in self.coeffs.iter().enumerate() {
            write!(f, " A{j}={c}")?;
        }
        Ok(())
    }
}

/// Checks a point against a pencil or function and returns raw coordinates.
pub(crate) fn embed_point(spec: FieldSpec, nvars: usize, point: &[FieldElem]) -> Result<(Embedding, Vec<u64>)> {
    if point.len() != nvars {
        return Err(Error::VariableCountMismatch { expected: nvars, found: point.len() });
    }
    let target = point.first().map_or(spec, FieldElem::spec);
    if let Some(bad) = point.iter().find(|x| x.spec() != target) {
        return Err(Error::MixedFields(target.to_string(), bad.spec().to_string()));
    }
    let emb = spec.embedding(&target)?;
    Ok((emb, point.iter().map(FieldElem::repr).collect()))
}

/// A pencil together with the size of its `A11` block.
#[derive(Clone)]
pub struct Realization {
    pencil: Pencil,
    top: usize,
    /// Whether `det A22(z)` vanishes identically, once computed.
    singular: OnceLock<bool>,
}

impl PartialEq for Realization {
    fn eq(&self, other: &Self) -> bool {
        self.top == other.top && self.pencil == other.pencil
    }
}

impl Eq for Realization {}

impl std::fmt::Debug for Realization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Realization[top={}] {:?}", self.top, self.pencil)
    }
}

impl Realization {
    pub fn new(pencil: Pencil, top: usize) -> Result<Self> {
        if top == 0 || top > pencil.size() {
            return Err(Error::ShapeMismatch(format!(
                "top block {top} in a pencil of size {}",
                pencil.size()
            )));
        }
        Ok(Realization { pencil, top, singular: OnceLock::new() })
    }

    pub fn pencil(&self) -> &Pencil {
        &self.pencil
    }

    pub fn into_pencil(self) -> Pencil {
        self.pencil
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn spec(&self) -> FieldSpec {
        self.pencil.spec
    }

    pub fn nvars(&self) -> usize {
        self.pencil.nvars
    }

    pub fn size(&self) -> usize {
        self.pencil.size()
    }

    /// Block `(row, col)` of coefficient `j`, with block 0 the top `k` indices.
    pub(crate) fn block(&self, j: usize, row: usize, col: usize) -> FieldMatrix {
        let (k, m) = (self.top, self.size());
        let range = |b: usize| if b == 0 { (0, k) } else { (k, m) };
        let (r0, r1) = range(row);
        let (c0, c1) = range(col);
        self.pencil.coeffs[j].block(r0, r1, c0, c1)
    }

    /// `Some(true)` once `A22` has been found singular, `None` before the first
    /// symbolic Schur computation.
    pub fn known_singular(&self) -> Option<bool> {
        self.singular.get().copied()
    }

    /// Exact Schur complement over `F(z)` by Gaussian elimination of `A22`.
    pub fn schur_symbolic(&self) -> Result<RatMatrix> {
        if self.singular.get() == Some(&true) {
            return Err(Error::SingularBlock);
        }
        let result = schur_eliminate(&self.pencil, self.top);
        let _ = self.singular.set(result.is_none());
        result.ok_or(Error::SingularBlock)
    }

    /// Numeric Schur complement; `Ok(None)` when `A22(point)` is singular.
    pub fn schur_eval(&self, point: &[FieldElem]) -> Result<Option<FieldMatrix>> {
        let (emb, raw) = embed_point(self.spec(), self.nvars(), point)?;
        Ok(self.schur_eval_raw(&emb, &raw))
    }

    pub fn schur_eval_raw(&self, emb: &Embedding, point: &[u64]) -> Option<FieldMatrix> {
        schur_numeric(&self.pencil.eval_raw(emb, point), self.top)
    }

    /// Structural flags expected of a realization in each mode.
    pub fn is_symmetric(&self) -> bool {
        self.pencil.is_symmetric()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.pencil.is_homogeneous()
    }
}

/// `A11 - A12 A22^-1 A21` of a numeric matrix; `None` if `A22` is singular.
pub fn schur_numeric(a: &FieldMatrix, top: usize) -> Option<FieldMatrix> {
    let m = a.rows();
    let a11 = a.block(0, top, 0, top);
    if top == m {
        return Some(a11);
    }
    let a12 = a.block(0, top, top, m);
    let a21 = a.block(top, m, 0, top);
    let a22 = a.block(top, m, top, m);
    let x = a22.solve(&a21)?;
    Some(a11.sub(&a12.mul(&x)))
}

/// Pivot preference: entry complexity, fill-in estimate, then position.
type PivotKey = (usize, usize, usize, usize);

/// Symbolic elimination of the trailing block; `None` if it is singular.
fn schur_eliminate(p: &Pencil, top: usize) -> Option<RatMatrix> {
    let m = p.size();
    let full = p.to_rat_matrix();
    let mut a: Vec<Vec<RatFunc>> = (0..m)
        .map(|i| (0..m).map(|j| full.get(i, j).clone()).collect())
        .collect();
    let mut rows: Vec<usize> = (top..m).collect();
    let mut cols: Vec<usize> = (top..m).collect();
    let complexity = |r: &RatFunc| {
        r.num().nterms() + r.den().nterms() + if r.is_polynomial() { 0 } else { 4 }
    };
    while !rows.is_empty() {
        let live_rows: Vec<usize> = (0..top).chain(rows.iter().copied()).collect();
        let live_cols: Vec<usize> = (0..top).chain(cols.iter().copied()).collect();
        // (pivot key, row slot, column slot); the smallest key wins.
        let mut best: Option<(PivotKey, usize, usize)> = None;
        for (ri, &r) in rows.iter().enumerate() {
            for (ci, &c) in cols.iter().enumerate() {
                let e = &a[r][c];
                if e.is_zero() {
                    continue;
                }
                let row_count = live_cols.iter().filter(|&&j| !a[r][j].is_zero()).count();
                let col_count = live_rows.iter().filter(|&&i| !a[i][c].is_zero()).count();
                let key = (complexity(e), (row_count - 1) * (col_count - 1), r, c);
                if best.as_ref().is_none_or(|(k, _, _)| key < *k) {
                    best = Some((key, ri, ci));
                }
            }
        }
        let (_, ri, ci) = best?;
        let r = rows.swap_remove(ri);
        let c = cols.swap_remove(ci);
        let pinv = a[r][c].inv().expect("nonzero pivot");
        let pivot_row: Vec<(usize, RatFunc)> = live_cols
            .iter()
            .filter(|&&j| j != c && !a[r][j].is_zero())
            .map(|&j| (j, a[r][j].clone()))
            .collect();
        for &i in &live_rows {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let factor = a[i][c].mul(&pinv);
            for (j, v) in &pivot_row {
                a[i][*j] = a[i][*j].sub(&factor.mul(v));
            }
        }
    }
    Some(RatMatrix::from_fn(top, top, |i, j| a[i][j].clone()))
}

/// Outcome of [`congruence_diagonalize`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagonalization {
    /// `S = P^T D P` with `P` invertible and `D` diagonal.
    Diagonal { p: FieldMatrix, d: FieldMatrix },
    /// `S` has zero diagonal and is congruent to no diagonal matrix except 0.
    Alternate,
}

/// Diagonalizes a symmetric matrix over a characteristic-2 field by congruence.
pub fn congruence_diagonalize(s: &FieldMatrix) -> Result<Diagonalization> {
    let f = s.spec();
    if f.characteristic() != 2 {
        return Err(Error::WrongCharacteristic { expected: 2, found: f.characteristic() });
    }
    if !s.is_square() {
        return Err(Error::NotSquare { rows: s.rows(), cols: s.cols() });
    }
    if !s.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = s.rows();
    if (0..n).all(|i| s.get(i, i) == 0) {
        return Ok(Diagonalization::Alternate);
    }
    let form = |x: &[u64], y: &[u64]| -> u64 {
        let mut acc = 0;
        for (i, &xi) in x.iter().enumerate().filter(|(_, &v)| v != 0) {
            for (j, &yj) in y.iter().enumerate().filter(|(_, &v)| v != 0) {
                let sij = s.get(i, j);
                if sij != 0 {
                    acc = f.add(acc, f.mul(xi, f.mul(sij, yj)));
                }
            }
        }
        acc
    };
    // axpy: x + c*y
    let axpy = |x: &[u64], c: u64, y: &[u64]| -> Vec<u64> {
        x.iter().zip(y).map(|(a, b)| f.add(*a, f.mul(c, *b))).collect()
    };

    // Vectors still to be processed (pairwise arbitrary, orthogonal to `done`),
    // and finished orthogonal vectors with their diagonal values.
    let mut work: Vec<Vec<u64>> = (0..n)
        .map(|i| (0..n).map(|j| (i == j) as u64).collect())
        .collect();
    let mut done: Vec<(Vec<u64>, u64)> = Vec::new();
    while !work.is_empty() {
        if let Some(idx) = work.iter().position(|w| form(w, w) != 0) {
            let w = work.remove(idx);
            let d = form(&w, &w);
            let dinv = f.inv(d).expect("nonzero");
            for x in work.iter_mut() {
                let c = f.mul(form(x, &w), dinv);
                if c != 0 {
                    *x = axpy(x, c, &w);
                }
            }
            done.push((w, d));
            continue;
        }
        // Every remaining vector is isotropic. Find a hyperbolic pair.
        let pair = (0..work.len())
            .flat_map(|i| (i + 1..work.len()).map(move |j| (i, j)))
            .find(|&(i, j)| form(&work[i], &work[j]) != 0);
        let Some((i, j)) = pair else {
            done.extend(work.drain(..).map(|w| (w, 0)));
            break;
        };
        let w = work.remove(j);
        let u = work.remove(i);
        let c = form(&u, &w);
        let w: Vec<u64> = w.iter().map(|x| f.div(*x, c).expect("nonzero")).collect();
        for x in work.iter_mut() {
            let (bw, bu) = (form(x, &w), form(x, &u));
            *x = axpy(&axpy(x, bw, &u), bu, &w);
        }
        // Mix with an earlier anisotropic vector v, B(v, v) = d:
        // v + u, v + d w and v + u + d w are orthogonal with B = d each.
        let pos = done
            .iter()
            .position(|(_, d)| *d != 0)
            .expect("a non-alternate form has an anisotropic vector");
        let (v, d) = done.remove(pos);
        let a = axpy(&v, 1, &u);
        let b = axpy(&v, d, &w);
        let cvec = axpy(&a, d, &w);
        done.push((a, d));
        done.push((b, d));
        done.push((cvec, d));
    }
    let x = FieldMatrix::from_fn(f, n, n, |r, c| done[c].0[r]);
    let d = FieldMatrix::from_fn(f, n, n, |r, c| if r == c { done[r].1 } else { 0 });
    debug_assert_eq!(x.transpose().mul(s).mul(&x), d);
    let p = x.inverse().ok_or_else(|| Error::Inconsistent("singular congruence".into()))?;
    Ok(Diagonalization::Diagonal { p, d })
}

/// The field in which random oracle points are drawn: `GF(2^ext_degree)` in
/// characteristic 2, the base field itself otherwise.
pub fn oracle_field(spec: FieldSpec, ext_degree: u32) -> Result<FieldSpec> {
    if spec.characteristic() != 2 {
        return Ok(spec);
    }
    let ext = FieldSpec::binary_default(ext_degree)?;
    if !spec.embeds_into(&ext) {
        return Err(Error::NonEmbeddableField { from: spec.to_string(), into: ext.to_string() });
    }
    Ok(ext)
}

/// Report of a derivative-identity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub holds: bool,
    /// Non-singular points at which both sides were compared.
    pub checked: usize,
    /// Index (among checked points) of the first mismatch.
    pub first_mismatch: Option<usize>,
}

/// `a + b*eps` with `eps^2 = 0`.
#[derive(Clone, Copy, Debug)]
struct Dual {
    re: u64,
    eps: u64,
}

/// Schur complement of `m0 + eps*m1` (top block of size 1), by elimination
/// over dual numbers; `None` if the trailing block is singular.
fn dual_schur_scalar(f: FieldSpec, m0: &FieldMatrix, m1: &FieldMatrix) -> Option<Dual> {
    let m = m0.rows();
    let mut a: Vec<Vec<Dual>> = (0..m)
        .map(|i| (0..m).map(|j| Dual { re: m0.get(i, j), eps: m1.get(i, j) }).collect())
        .collect();
    let mul = |x: Dual, y: Dual| Dual {
        re: f.mul(x.re, y.re),
        eps: f.add(f.mul(x.re, y.eps), f.mul(x.eps, y.re)),
    };
    let sub = |x: Dual, y: Dual| Dual { re: f.sub(x.re, y.re), eps: f.sub(x.eps, y.eps) };
    let inv = |x: Dual| {
        let r = f.inv(x.re).expect("nonzero");
        Dual { re: r, eps: f.neg(f.mul(x.eps, f.mul(r, r))) }
    };
    let mut rows: Vec<usize> = (1..m).collect();
    let mut cols: Vec<usize> = (1..m).collect();
    while !rows.is_empty() {
        let (ri, ci) = rows
            .iter()
            .enumerate()
            .flat_map(|(ri, &r)| cols.iter().enumerate().map(move |(ci, &c)| (ri, ci, r, c)))
            .find(|&(_, _, r, c)| a[r][c].re != 0)
            .map(|(ri, ci, _, _)| (ri, ci))?;
        let r = rows.swap_remove(ri);
        let c = cols.swap_remove(ci);
        let pinv = inv(a[r][c]);
        let live_rows: Vec<usize> = std::iter::once(0).chain(rows.iter().copied()).collect();
        let live_cols: Vec<usize> = std::iter::once(0).chain(cols.iter().copied()).collect();
        for &i in &live_rows {
            let factor = mul(a[i][c], pinv);
            for &j in &live_cols {
                a[i][j] = sub(a[i][j], mul(factor, a[r][j]));
            }
        }
    }
    Some(a[0][0])
}

/// Checks `dF/dz_i = F^2 [A^-1 A_i A^-1]_11` for a scalar realization at
/// random non-singular points.
///
/// `F` and the left side come from the Schur complement of `reference`, the
/// left side by forward-mode differentiation; `A` and `A_i` on the right come
/// from the pencil of `claimed`. Passing the same
/// realization twice checks the identity itself; passing a modified `claimed`
/// checks whether the modification is detected. In characteristic 2 points are
/// drawn from `GF(2^ext_degree)`, so a failure of a false identity is missed
/// with probability at most `(deg / 2^ext_degree)` per point.
pub fn derivative_identity_check_against(
    reference: &Realization,
    claimed: &Realization,
    var: usize,
    trials: usize,
    ext_degree: u32,
    seed: u64,
) -> Result<IdentityReport> {
    for r in [reference, claimed] {
        if r.top() != 1 {
            return Err(Error::NotScalarTarget(r.top()));
        }
    }
    if reference.spec() != claimed.spec() || reference.nvars() != claimed.nvars() {
        return Err(Error::ShapeMismatch("reference and claimed realizations differ in field or variables".into()));
    }
    crate::poly::check_var(var, reference.nvars())?;
    let base = reference.spec();
    let field = oracle_field(base, ext_degree)?;
    let emb = base.embedding(&field)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = 10 * trials.max(1);
    let mut checked = 0;
    let mut first_mismatch = None;
    for _ in 0..budget {
        if checked == trials {
            break;
        }
        let point: Vec<u64> = (0..reference.nvars()).map(|_| field.random(&mut rng)).collect();
        let a_ref = reference.pencil.eval_raw(&emb, &point);
        let ai_ref = reference.pencil.coeff(var + 1).embed(&emb);
        let Some(lhs) = dual_schur_scalar(field, &a_ref, &ai_ref) else {
            continue;
        };
        let Some(a_inv) = claimed.pencil.eval_raw(&emb, &point).inverse() else {
            continue;
        };
        let ai = claimed.pencil.coeff(var + 1).embed(&emb);
        let middle = a_inv.mul(&ai).mul(&a_inv).get(0, 0);
        let rhs = field.mul(field.mul(lhs.re, lhs.re), middle);
        if lhs.eps != rhs && first_mismatch.is_none() {
            first_mismatch = Some(checked);
        }
        checked += 1;
    }
    if checked < trials {
        return Err(Error::SingularPencil);
    }
    Ok(IdentityReport { holds: first_mismatch.is_none(), checked, first_mismatch })
}

/// [`derivative_identity_check_against`] with the realization as its own reference.
pub fn derivative_identity_check(
    r: &Realization,
    var: usize,
    trials: usize,
    ext_degree: u32,
    seed: u64,
) -> Result<IdentityReport> {
    derivative_identity_check_against(r, r, var, trials, ext_degree, seed)
}
