//! Sparse multivariate polynomials over a [`FieldSpec`].
//!
//! Terms live in a `BTreeMap` keyed by exponent vector, so iteration is in
//! graded-lexicographic order and structural equality is mathematical
//! equality. Variables are indexed from zero in the API and printed as
//! `z1 .. zn`.

pub(crate) mod gcd;

use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::field::{Embedding, FieldElem, FieldSpec};

pub use gcd::poly_gcd;

/// Exponent vector of a monomial `z^alpha`.
///
/// The derived ordering is graded-lexicographic: total degree first, then
/// lexicographic with `z1` most significant.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExpVec {
    degree: u32,
    exps: SmallVec<[u16; 8]>,
}

impl ExpVec {
    pub fn zero(nvars: usize) -> Self {
        ExpVec {
            degree: 0,
            exps: SmallVec::from_elem(0, nvars),
        }
    }

    pub fn new(exps: &[u32]) -> Self {
        let exps: SmallVec<[u16; 8]> = exps
            .iter()
            .map(|&e| u16::try_from(e).expect("exponent overflow"))
            .collect();
        let degree = exps.iter().map(|&e| e as u32).sum();
        ExpVec { degree, exps }
    }

    /// The exponent vector of `z_var`.
    pub fn unit(nvars: usize, var: usize) -> Self {
        let mut e = ExpVec::zero(nvars);
        e.exps[var] = 1;
        e.degree = 1;
        e
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn get(&self, var: usize) -> u32 {
        self.exps[var] as u32
    }

    pub fn exponents(&self) -> impl Iterator<Item = u32> + '_ {
        self.exps.iter().map(|&e| e as u32)
    }

    pub fn is_zero(&self) -> bool {
        self.degree == 0
    }

    pub fn add(&self, other: &ExpVec) -> ExpVec {
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
            .collect();
        ExpVec {
            degree: self.degree + other.degree,
            exps,
        }
    }

    /// `self - other`, if every component stays non-negative.
    pub fn checked_sub(&self, other: &ExpVec) -> Option<ExpVec> {
        let mut exps = SmallVec::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(&other.exps) {
            exps.push(a.checked_sub(*b)?);
        }
        Some(ExpVec {
            degree: self.degree - other.degree,
            exps,
        })
    }

    pub fn meet(&self, other: &ExpVec) -> ExpVec {
        let exps: SmallVec<[u16; 8]> = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| *a.min(b))
            .collect();
        let degree = exps.iter().map(|&e| e as u32).sum();
        ExpVec { degree, exps }
    }

    fn with(&self, var: usize, value: u32) -> ExpVec {
        let mut e = self.clone();
        e.degree = e.degree - e.exps[var] as u32 + value;
        e.exps[var] = u16::try_from(value).expect("exponent overflow");
        e
    }

    fn map(&self, f: impl Fn(u16) -> u16) -> ExpVec {
        let exps: SmallVec<[u16; 8]> = self.exps.iter().map(|&e| f(e)).collect();
        let degree = exps.iter().map(|&e| e as u32).sum();
        ExpVec { degree, exps }
    }

    /// Component-wise parity, as a 0/1 exponent vector.
    pub fn parity(&self) -> ExpVec {
        self.map(|e| e & 1)
    }

    fn halve(&self) -> ExpVec {
        self.map(|e| e / 2)
    }

    /// Copy of `self` in `nvars` variables; new trailing exponents are zero.
    pub fn resized(&self, nvars: usize) -> ExpVec {
        let mut exps = self.exps.clone();
        exps.resize(nvars, 0);
        let degree = exps.iter().map(|&e| e as u32).sum();
        ExpVec { degree, exps }
    }

    /// Bit-string form, `z1` first (used for 0/1 vectors).
    pub fn bit_string(&self) -> String {
        self.exps.iter().map(|e| e.to_string()).collect()
    }

    /// All `2^n` binary vectors of length `n`.
    pub fn binary_vectors(n: usize) -> impl Iterator<Item = ExpVec> {
        (0u64..(1u64 << n)).map(move |mask| {
            let exps: Vec<u32> = (0..n).map(|i| ((mask >> i) & 1) as u32).collect();
            ExpVec::new(&exps)
        })
    }
}

impl fmt::Debug for ExpVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps.as_slice())
    }
}

/// Outcome of a homogeneity test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Homogeneity {
    /// The zero function, homogeneous of every degree.
    Any,
    Degree(i64),
    NotHomogeneous,
}

impl Homogeneity {
    /// True when the value is homogeneous of degree `d` (zero always is).
    pub fn admits(self, d: i64) -> bool {
        matches!(self, Homogeneity::Any) || self == Homogeneity::Degree(d)
    }
}

/// A polynomial in `nvars` variables with coefficients in `spec`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    spec: FieldSpec,
    nvars: usize,
    terms: BTreeMap<ExpVec, u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// Checked ring arithmetic.
pub fn poly_arith(a: &MultiPoly, b: &MultiPoly, op: PolyOp) -> Result<MultiPoly> {
    a.check_compatible(b)?;
    Ok(match op {
        PolyOp::Add => a.add(b),
        PolyOp::Sub => a.sub(b),
        PolyOp::Mul => a.mul(b),
    })
}

impl MultiPoly {
    pub fn zero(spec: FieldSpec, nvars: usize) -> Self {
        MultiPoly {
            spec,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(spec: FieldSpec, nvars: usize) -> Self {
        Self::constant(spec, nvars, 1)
    }

    pub fn constant(spec: FieldSpec, nvars: usize, c: u64) -> Self {
        Self::monomial(spec, ExpVec::zero(nvars), c)
    }

    /// `c * z^e`.
    pub fn monomial(spec: FieldSpec, e: ExpVec, c: u64) -> Self {
        let nvars = e.nvars();
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(e, c);
        }
        MultiPoly { spec, nvars, terms }
    }

    /// The variable `z_(var+1)`.
    pub fn var(spec: FieldSpec, nvars: usize, var: usize) -> Result<Self> {
        check_var(var, nvars)?;
        Ok(Self::monomial(spec, ExpVec::unit(nvars, var), 1))
    }

    /// Builds a polynomial from possibly repeated terms; zero sums are dropped.
    pub fn from_terms(
        spec: FieldSpec,
        nvars: usize,
        terms: impl IntoIterator<Item = (ExpVec, u64)>,
    ) -> Self {
        let mut p = Self::zero(spec, nvars);
        for (e, c) in terms {
            debug_assert_eq!(e.nvars(), nvars);
            p.add_term(e, c);
        }
        p
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value() == Some(1)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(ExpVec::is_zero)
    }

    /// The value of a constant polynomial (zero included).
    pub fn constant_value(&self) -> Option<u64> {
        match self.terms.len() {
            0 => Some(0),
            1 => {
                let (e, c) = self.terms.iter().next()?;
                e.is_zero().then_some(*c)
            }
            _ => None,
        }
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExpVec, u64)> + '_ {
        self.terms.iter().map(|(e, c)| (e, *c))
    }

    pub fn coeff(&self, e: &ExpVec) -> u64 {
        self.terms.get(e).copied().unwrap_or(0)
    }

    pub fn leading_term(&self) -> Option<(&ExpVec, u64)> {
        self.terms.iter().next_back().map(|(e, c)| (e, *c))
    }

    pub fn leading_coeff(&self) -> u64 {
        self.leading_term().map_or(0, |(_, c)| c)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.leading_term().map(|(e, _)| e.degree())
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e.get(var)).max().unwrap_or(0)
    }

    /// Bit set of the variables that occur.
    pub fn variables(&self) -> u64 {
        let mut mask = 0u64;
        for e in self.terms.keys() {
            for (i, x) in e.exponents().enumerate() {
                if x > 0 {
                    mask |= 1 << i;
                }
            }
        }
        mask
    }

    pub(crate) fn check_compatible(&self, other: &MultiPoly) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::MixedFields(
                self.spec.to_string(),
                other.spec.to_string(),
            ));
        }
        if self.nvars != other.nvars {
            return Err(Error::VariableCountMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        Ok(())
    }

    fn add_term(&mut self, e: ExpVec, c: u64) {
        if c == 0 {
            return;
        }
        let f = self.spec;
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        debug_assert!(self.check_compatible(other).is_ok());
        let (mut big, small) = if self.nterms() >= other.nterms() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (e, c) in &small.terms {
            big.add_term(e.clone(), *c);
        }
        big
    }

    pub fn neg(&self) -> MultiPoly {
        if self.spec.characteristic() == 2 {
            return self.clone();
        }
        let f = self.spec;
        MultiPoly {
            spec: f,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), f.neg(*c))).collect(),
        }
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u64) -> MultiPoly {
        if c == 0 {
            return Self::zero(self.spec, self.nvars);
        }
        if c == 1 {
            return self.clone();
        }
        let f = self.spec;
        MultiPoly {
            spec: f,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), f.mul(*x, c))).collect(),
        }
    }

    /// Multiplies by `c * z^e`.
    pub fn mul_term(&self, e: &ExpVec, c: u64) -> MultiPoly {
        if c == 0 {
            return Self::zero(self.spec, self.nvars);
        }
        let f = self.spec;
        MultiPoly {
            spec: f,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(x, k)| (x.add(e), f.mul(*k, c))).collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        debug_assert!(self.check_compatible(other).is_ok());
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.spec, self.nvars);
        }
        if let Some(c) = other.constant_value() {
            return self.scale(c);
        }
        if let Some(c) = self.constant_value() {
            return other.scale(c);
        }
        let f = self.spec;
        let mut out = Self::zero(f, self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.add(eb), f.mul(*ca, *cb));
            }
        }
        out
    }

    pub fn square(&self) -> MultiPoly {
        if self.spec.characteristic() == 2 {
            // Frobenius: (sum c_a z^a)^2 = sum c_a^2 z^(2a).
            let f = self.spec;
            return MultiPoly {
                spec: f,
                nvars: self.nvars,
                terms: self
                    .terms
                    .iter()
                    .map(|(e, c)| (e.map(|x| x.checked_mul(2).expect("exponent overflow")), f.mul(*c, *c)))
                    .collect(),
            };
        }
        self.mul(self)
    }

    pub fn pow(&self, mut e: u32) -> MultiPoly {
        let mut acc = Self::one(self.spec, self.nvars);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Divides by the leading coefficient. Returns the normalized polynomial
    /// and the coefficient removed (1 for the zero polynomial).
    pub fn monic(&self) -> (MultiPoly, u64) {
        let lc = self.leading_coeff();
        if lc == 0 || lc == 1 {
            return (self.clone(), 1);
        }
        let inv = self.spec.inv(lc).expect("nonzero leading coefficient");
        (self.scale(inv), lc)
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff() == 1
    }

    /// Formal partial derivative with respect to `z_(var+1)`.
    pub fn partial_derivative(&self, var: usize) -> Result<MultiPoly> {
        check_var(var, self.nvars)?;
        let f = self.spec;
        let mut out = Self::zero(f, self.nvars);
        for (e, c) in &self.terms {
            let a = e.get(var);
            if a == 0 {
                continue;
            }
            let factor = f.from_int((a as u64 % f.characteristic()) as i64);
            if factor == 0 {
                continue;
            }
            out.terms.insert(e.with(var, a - 1), f.mul(*c, factor));
        }
        Ok(out)
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &MultiPoly) -> Option<MultiPoly> {
        debug_assert!(self.check_compatible(d).is_ok());
        let f = self.spec;
        let (de, dc) = d.leading_term()?;
        let dinv = f.inv(dc)?;
        if d.nterms() == 1 {
            let mut terms = BTreeMap::new();
            for (e, c) in &self.terms {
                terms.insert(e.checked_sub(de)?, f.mul(*c, dinv));
            }
            return Some(MultiPoly {
                spec: f,
                nvars: self.nvars,
                terms,
            });
        }
        let de = de.clone();
        let mut rem = self.clone();
        let mut quot = Self::zero(f, self.nvars);
        while let Some((re, rc)) = rem.leading_term() {
            let qe = re.checked_sub(&de)?;
            let qc = f.mul(rc, dinv);
            rem = rem.sub(&d.mul_term(&qe, qc));
            quot.terms.insert(qe, qc);
        }
        Some(quot)
    }

    /// Evaluates at a point whose coordinates lie in this field or an extension of it.
    pub fn eval(&self, point: &[FieldElem]) -> Result<FieldElem> {
        if point.len() != self.nvars {
            return Err(Error::VariableCountMismatch {
                expected: self.nvars,
                found: point.len(),
            });
        }
        let target = point.first().map_or(self.spec, FieldElem::spec);
        if let Some(bad) = point.iter().find(|x| x.spec() != target) {
            return Err(Error::MixedFields(target.to_string(), bad.spec().to_string()));
        }
        let emb = self.spec.embedding(&target)?;
        let raw: Vec<u64> = point.iter().map(FieldElem::repr).collect();
        Ok(target.elem(self.eval_raw(&emb, &raw)))
    }

    /// Evaluation on raw representatives of `emb.target()`.
    pub fn eval_raw(&self, emb: &Embedding, point: &[u64]) -> u64 {
        let f = emb.target();
        let mut powers: Vec<Vec<u64>> = Vec::with_capacity(self.nvars);
        for (var, &x) in point.iter().enumerate() {
            let d = self.degree_in(var) as usize;
            let mut row = Vec::with_capacity(d + 1);
            row.push(1);
            for j in 0..d {
                row.push(f.mul(row[j], x));
            }
            powers.push(row);
        }
        let mut acc = 0;
        for (e, c) in &self.terms {
            let mut t = emb.map(*c);
            for (var, x) in e.exponents().enumerate() {
                if x > 0 {
                    t = f.mul(t, powers[var][x as usize]);
                }
            }
            acc = f.add(acc, t);
        }
        acc
    }

    /// The same polynomial with coefficients pushed through `emb`.
    pub fn embed(&self, emb: &Embedding) -> MultiPoly {
        MultiPoly {
            spec: emb.target(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), emb.map(*c))).collect(),
        }
    }

    /// The same polynomial viewed in `nvars >= self.nvars()` variables.
    pub fn with_nvars(&self, nvars: usize) -> Result<MultiPoly> {
        if nvars < self.nvars && self.variables() >> nvars != 0 {
            return Err(Error::VariableCountMismatch {
                expected: self.nvars,
                found: nvars,
            });
        }
        Ok(MultiPoly {
            spec: self.spec,
            nvars,
            terms: self.terms.iter().map(|(e, c)| (e.resized(nvars), *c)).collect(),
        })
    }

    /// Substitutes `z_(var+1) = 1`.
    pub fn set_var_to_one(&self, var: usize) -> MultiPoly {
        MultiPoly::from_terms(
            self.spec,
            self.nvars,
            self.terms.iter().map(|(e, c)| (e.with(var, 0), *c)),
        )
    }

    /// Homogeneous degree of the polynomial, if any.
    pub fn homogeneous_degree(&self) -> Homogeneity {
        let mut degrees = self.terms.keys().map(ExpVec::degree);
        match degrees.next() {
            None => Homogeneity::Any,
            Some(d) if degrees.all(|x| x == d) => Homogeneity::Degree(d as i64),
            Some(_) => Homogeneity::NotHomogeneous,
        }
    }

    /// Whether every exponent is divisible by `p`.
    pub fn exponents_divisible_by(&self, p: u64) -> bool {
        self.terms
            .keys()
            .all(|e| e.exponents().all(|x| (x as u64).is_multiple_of(p)))
    }

    /// Splits a characteristic-2 polynomial as `sum_beta m_beta^2 z^beta`.
    ///
    /// Keys are 0/1 exponent vectors; only nonzero parts are returned.
    pub fn parity_split(&self) -> Result<BTreeMap<ExpVec, MultiPoly>> {
        self.require_char2()?;
        let f = self.spec;
        let mut parts: BTreeMap<ExpVec, MultiPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let beta = e.parity();
            let half = e.checked_sub(&beta).expect("parity below exponent").halve();
            parts
                .entry(beta)
                .or_insert_with(|| MultiPoly::zero(f, self.nvars))
                .terms
                .insert(half, f.pth_root(*c));
        }
        Ok(parts)
    }

    /// The square root of a characteristic-2 polynomial in `F[z^2]`.
    pub fn frobenius_sqrt(&self) -> Option<MultiPoly> {
        if self.spec.characteristic() != 2 || !self.exponents_divisible_by(2) {
            return None;
        }
        let f = self.spec;
        Some(MultiPoly {
            spec: f,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.halve(), f.pth_root(*c)))
                .collect(),
        })
    }

    fn require_char2(&self) -> Result<()> {
        match self.spec.characteristic() {
            2 => Ok(()),
            p => Err(Error::WrongCharacteristic { expected: 2, found: p }),
        }
    }

    /// Coefficients with respect to `var`: `self = sum_i out[i] * z_var^i`.
    pub(crate) fn coefficients_in(&self, var: usize) -> Vec<MultiPoly> {
        let mut out = vec![Self::zero(self.spec, self.nvars); self.degree_in(var) as usize + 1];
        for (e, c) in &self.terms {
            out[e.get(var) as usize].terms.insert(e.with(var, 0), *c);
        }
        out
    }

    pub(crate) fn from_coefficients_in(var: usize, coeffs: &[MultiPoly]) -> MultiPoly {
        let mut out = MultiPoly::zero(coeffs[0].spec, coeffs[0].nvars);
        for (i, c) in coeffs.iter().enumerate() {
            for (e, k) in &c.terms {
                out.terms.insert(e.with(var, i as u32), *k);
            }
        }
        out
    }

    /// Splits off the largest monomial factor: `self = z^m * rest`.
    pub(crate) fn split_monomial_content(&self) -> (ExpVec, MultiPoly) {
        let Some(m) = self.terms.keys().cloned().reduce(|a, b| a.meet(&b)) else {
            return (ExpVec::zero(self.nvars), self.clone());
        };
        if m.is_zero() {
            return (m, self.clone());
        }
        let rest = MultiPoly {
            spec: self.spec,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.checked_sub(&m).expect("monomial content divides"), *c))
                .collect(),
        };
        (m, rest)
    }

    /// Renders with explicit variable names (`z1..zn` by default).
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        PolyDisplay { poly: self, names: Some(names) }
    }
}

/// Partial derivative, with the variable index checked.
pub fn poly_partial_derivative(a: &MultiPoly, var: usize) -> Result<MultiPoly> {
    a.partial_derivative(var)
}

pub(crate) fn check_var(var: usize, nvars: usize) -> Result<()> {
    if var >= nvars {
        return Err(Error::BadVariableIndex { index: var, nvars });
    }
    Ok(())
}

/// Formats a field constant in the expression grammar (polynomials in `g`
/// for extension fields).
pub fn format_constant(f: FieldSpec, c: u64) -> String {
    if f.is_prime_field() {
        return c.to_string();
    }
    if c == 0 {
        return "0".into();
    }
    let mut parts = Vec::new();
    for i in (0..f.extension_degree()).rev() {
        if (c >> i) & 1 == 1 {
            parts.push(match i {
                0 => "1".to_string(),
                1 => "g".to_string(),
                _ => format!("g^{i}"),
            });
        }
    }
    parts.join(" + ")
}

struct PolyDisplay<'a> {
    poly: &'a MultiPoly,
    names: Option<&'a [String]>,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.poly;
        if p.is_zero() {
            return f.write_str("0");
        }
        let spec = p.spec;
        for (n, (e, c)) in p.terms.iter().rev().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            let coeff = format_constant(spec, *c);
            if e.is_zero() || *c != 1 {
                if e.is_zero() || !coeff.contains('+') {
                    factors.push(coeff);
                } else {
                    factors.push(format!("({coeff})"));
                }
            }
            for (i, x) in e.exponents().enumerate() {
                if x == 0 {
                    continue;
                }
                let name = match self.names {
                    Some(names) => names[i].clone(),
                    None => format!("z{}", i + 1),
                };
                if x == 1 {
                    factors.push(name);
                } else {
                    factors.push(format!("{name}^{x}"));
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        PolyDisplay { poly: self, names: None }.fmt(f)
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}; n={}]({})", self.spec, self.nvars, self)
    }
}
