//! Rational functions in canonical form and dense matrices of them.
//!
//! A [`RatFunc`] is always stored reduced (`gcd(num, den) = 1`) with a monic
//! denominator, so equality is structural.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Embedding, FieldElem, FieldSpec};
use crate::linalg::FieldMatrix;
use crate::poly::{gcd::gcd_unnormalized, Homogeneity, MultiPoly};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

/// Result of evaluating a rational function at a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatEval {
    Value(FieldElem),
    Pole,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked field arithmetic in `F(z)`.
pub fn rat_arith(a: &RatFunc, b: &RatFunc, op: RatOp) -> Result<RatFunc> {
    a.num.check_compatible(&b.num)?;
    match op {
        RatOp::Add => Ok(a.add(b)),
        RatOp::Sub => Ok(a.sub(b)),
        RatOp::Mul => Ok(a.mul(b)),
        RatOp::Div => a.div(b),
    }
}

fn exact(a: &MultiPoly, d: &MultiPoly) -> MultiPoly {
    if d.is_one() {
        return a.clone();
    }
    a.exact_div(d).expect("gcd divides its arguments")
}

impl RatFunc {
    /// Reduces `num/den` to canonical form.
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        num.check_compatible(&den)?;
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: MultiPoly, den: MultiPoly) -> Self {
        if num.is_zero() {
            return Self::zero(num.spec(), num.nvars());
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = gcd_unnormalized(&num, &den);
            (exact(&num, &g), exact(&den, &g))
        };
        let (den, lc) = den.monic();
        let num = if lc == 1 {
            num
        } else {
            num.scale(num.spec().inv(lc).expect("nonzero"))
        };
        RatFunc { num, den }
    }

    pub fn zero(spec: FieldSpec, nvars: usize) -> Self {
        RatFunc {
            num: MultiPoly::zero(spec, nvars),
            den: MultiPoly::one(spec, nvars),
        }
    }

    pub fn one(spec: FieldSpec, nvars: usize) -> Self {
        Self::constant(spec, nvars, 1)
    }

    pub fn constant(spec: FieldSpec, nvars: usize, c: u64) -> Self {
        Self::from_poly(MultiPoly::constant(spec, nvars, c))
    }

    pub fn var(spec: FieldSpec, nvars: usize, var: usize) -> Result<Self> {
        MultiPoly::var(spec, nvars, var).map(Self::from_poly)
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        let den = MultiPoly::one(p.spec(), p.nvars());
        RatFunc { num: p, den }
    }

    pub fn spec(&self) -> FieldSpec {
        self.num.spec()
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<u64> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Self::normalize(self.num.add(&other.num), self.den.clone());
        }
        if self.den.is_one() {
            return RatFunc {
                num: self.num.mul(&other.den).add(&other.num),
                den: other.den.clone(),
            };
        }
        if other.den.is_one() {
            return RatFunc {
                num: other.num.mul(&self.den).add(&self.num),
                den: self.den.clone(),
            };
        }
        let g = gcd_unnormalized(&self.den, &other.den).monic().0;
        let b1 = exact(&self.den, &g);
        let d1 = exact(&other.den, &g);
        let num = self.num.mul(&d1).add(&other.num.mul(&b1));
        let den = b1.mul(&other.den);
        if num.is_zero() {
            return Self::zero(self.spec(), self.nvars());
        }
        if g.is_one() {
            return RatFunc { num, den };
        }
        let h = gcd_unnormalized(&num, &g).monic().0;
        RatFunc {
            num: exact(&num, &h),
            den: exact(&den, &h),
        }
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.spec(), self.nvars());
        }
        let g1 = gcd_unnormalized(&self.num, &other.den).monic().0;
        let g2 = gcd_unnormalized(&other.num, &self.den).monic().0;
        RatFunc {
            num: exact(&self.num, &g1).mul(&exact(&other.num, &g2)),
            den: exact(&self.den, &g2).mul(&exact(&other.den, &g1)),
        }
    }

    pub fn square(&self) -> RatFunc {
        RatFunc {
            num: self.num.square(),
            den: self.den.square(),
        }
    }

    pub fn scale(&self, c: u64) -> RatFunc {
        if c == 0 {
            return Self::zero(self.spec(), self.nvars());
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u32) -> RatFunc {
        RatFunc {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// Formal partial derivative by the quotient rule.
    pub fn derive(&self, var: usize) -> Result<RatFunc> {
        let da = self.num.partial_derivative(var)?;
        if self.den.is_one() {
            return Ok(Self::from_poly(da));
        }
        let db = self.den.partial_derivative(var)?;
        if db.is_zero() {
            return Ok(Self::normalize(da, self.den.clone()));
        }
        let num = da.mul(&self.den).sub(&self.num.mul(&db));
        Ok(Self::normalize(num, self.den.square()))
    }

    /// Evaluates at a point in this field or an extension of it.
    pub fn eval(&self, point: &[FieldElem]) -> Result<RatEval> {
        let d = self.den.eval(point)?;
        if d.is_zero() {
            return Ok(RatEval::Pole);
        }
        let n = self.num.eval(point)?;
        Ok(RatEval::Value(n.div(&d)?))
    }

    /// Evaluation on raw representatives of `emb.target()`; `None` at a pole.
    pub fn eval_raw(&self, emb: &Embedding, point: &[u64]) -> Option<u64> {
        let f = emb.target();
        let d = self.den.eval_raw(emb, point);
        if d == 0 {
            return None;
        }
        f.div(self.num.eval_raw(emb, point), d)
    }

    pub fn homogeneous_degree(&self) -> Homogeneity {
        match (self.num.homogeneous_degree(), self.den.homogeneous_degree()) {
            (Homogeneity::Any, _) => Homogeneity::Any,
            (Homogeneity::Degree(a), Homogeneity::Degree(b)) => Homogeneity::Degree(a - b),
            _ => Homogeneity::NotHomogeneous,
        }
    }

    /// The square root of an element of `F(z^2)` in characteristic 2, or
    /// `None` when the element is not a square.
    pub fn frobenius_sqrt(&self) -> Result<Option<RatFunc>> {
        let p = self.spec().characteristic();
        if p != 2 {
            return Err(Error::WrongCharacteristic { expected: 2, found: p });
        }
        if self.den.is_one() {
            return Ok(self.num.frobenius_sqrt().map(Self::from_poly));
        }
        // num/den = num*den / den^2, so sqrt = sqrt(num*den) / den.
        let c = self.num.mul(&self.den);
        Ok(c.frobenius_sqrt()
            .map(|s| Self::normalize(s, self.den.clone())))
    }

    pub fn embed(&self, emb: &Embedding) -> RatFunc {
        RatFunc {
            num: self.num.embed(emb),
            den: self.den.embed(emb),
        }
    }

    pub fn with_nvars(&self, nvars: usize) -> Result<RatFunc> {
        Ok(RatFunc {
            num: self.num.with_nvars(nvars)?,
            den: self.den.with_nvars(nvars)?,
        })
    }

    /// Substitutes `z_(var+1) = 1`; `None` if the denominator vanishes.
    pub fn set_var_to_one(&self, var: usize) -> Option<RatFunc> {
        let den = self.den.set_var_to_one(var);
        if den.is_zero() {
            return None;
        }
        Some(Self::normalize(self.num.set_var_to_one(var), den))
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        RatDisplay { r: self, names: Some(names) }
    }
}

struct RatDisplay<'a> {
    r: &'a RatFunc,
    names: Option<&'a [String]>,
}

impl fmt::Display for RatDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |p: &MultiPoly| match self.names {
            Some(n) => p.display_with(n).to_string(),
            None => p.to_string(),
        };
        let num = show(&self.r.num);
        if self.r.den.is_one() {
            return f.write_str(&num);
        }
        let den = show(&self.r.den);
        // A product in the denominator needs parentheses as well as a sum.
        let num = if self.r.num.nterms() > 1 || num.contains('+') { format!("({num})") } else { num };
        let den = if den.contains(['+', '*']) { format!("({den})") } else { den };
        write!(f, "{num}/{den}")
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        RatDisplay { r: self, names: None }.fmt(f)
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc[{}; n={}]({})", self.spec(), self.nvars(), self)
    }
}

impl From<MultiPoly> for RatFunc {
    fn from(p: MultiPoly) -> Self {
        RatFunc::from_poly(p)
    }
}

/// A dense `rows x cols` matrix of rational functions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<RatFunc>,
}

impl RatMatrix {
    /// Builds a matrix from row-major entries sharing one field and variable count.
    pub fn new(rows: usize, cols: usize, entries: Vec<RatFunc>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        for e in &entries[1..] {
            entries[0].num.check_compatible(&e.num)?;
        }
        Ok(RatMatrix { rows, cols, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> RatFunc) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        RatMatrix { rows, cols, entries }
    }

    pub fn scalar(r: RatFunc) -> Self {
        RatMatrix {
            rows: 1,
            cols: 1,
            entries: vec![r],
        }
    }

    pub fn zero(spec: FieldSpec, nvars: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| RatFunc::zero(spec, nvars))
    }

    pub fn identity(spec: FieldSpec, nvars: usize, k: usize) -> Self {
        Self::from_fn(k, k, |i, j| RatFunc::constant(spec, nvars, (i == j) as u64))
    }

    /// Embeds a constant matrix.
    pub fn from_constant(m: &FieldMatrix, nvars: usize) -> Self {
        Self::from_fn(m.rows(), m.cols(), |i, j| {
            RatFunc::constant(m.spec(), nvars, m.get(i, j))
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn spec(&self) -> FieldSpec {
        self.entries[0].spec()
    }

    pub fn nvars(&self) -> usize {
        self.entries[0].nvars()
    }

    pub fn get(&self, i: usize, j: usize) -> &RatFunc {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, r: RatFunc) {
        self.entries[i * self.cols + j] = r;
    }

    pub fn entries(&self) -> &[RatFunc] {
        &self.entries
    }

    pub fn transpose(&self) -> RatMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(RatFunc::is_zero)
    }

    fn check_same_shape(&self, other: &RatMatrix) -> Result<()> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        self.entries[0].num.check_compatible(&other.entries[0].num)
    }

    pub fn add(&self, other: &RatMatrix) -> Result<RatMatrix> {
        self.check_same_shape(other)?;
        Ok(Self::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).add(other.get(i, j))
        }))
    }

    pub fn sub(&self, other: &RatMatrix) -> Result<RatMatrix> {
        self.check_same_shape(other)?;
        Ok(Self::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).sub(other.get(i, j))
        }))
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        self.entries[0].num.check_compatible(&other.entries[0].num)?;
        let (spec, nvars) = (self.spec(), self.nvars());
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(RatFunc::zero(spec, nvars), |acc, l| {
                let a = self.get(i, l);
                let b = other.get(l, j);
                if a.is_zero() || b.is_zero() {
                    acc
                } else {
                    acc.add(&a.mul(b))
                }
            })
        }))
    }

    pub fn scale(&self, c: &RatFunc) -> RatMatrix {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).mul(c))
    }

    pub fn map(&self, f: impl Fn(&RatFunc) -> RatFunc) -> RatMatrix {
        Self::from_fn(self.rows, self.cols, |i, j| f(self.get(i, j)))
    }

    pub fn try_map(&self, f: impl Fn(&RatFunc) -> Result<RatFunc>) -> Result<RatMatrix> {
        let entries = self.entries.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Evaluates on raw representatives of `emb.target()`; `None` at a pole.
    pub fn eval_raw(&self, emb: &Embedding, point: &[u64]) -> Option<FieldMatrix> {
        let data = self
            .entries
            .iter()
            .map(|e| e.eval_raw(emb, point))
            .collect::<Option<Vec<_>>>()?;
        Some(FieldMatrix::from_vec(emb.target(), self.rows, self.cols, data))
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        MatDisplay { m: self, names: Some(names) }
    }
}

struct MatDisplay<'a> {
    m: &'a RatMatrix,
    names: Option<&'a [String]>,
}

impl fmt::Display for MatDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.m;
        if m.rows == 1 && m.cols == 1 {
            return match self.names {
                Some(n) => m.entries[0].display_with(n).fmt(f),
                None => m.entries[0].fmt(f),
            };
        }
        f.write_str("[")?;
        for i in 0..m.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..m.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                match self.names {
                    Some(n) => write!(f, "{}", m.get(i, j).display_with(n))?,
                    None => write!(f, "{}", m.get(i, j))?,
                }
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        MatDisplay { m: self, names: None }.fmt(f)
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatMatrix[{}x{}]({})", self.rows, self.cols, self)
    }
}
