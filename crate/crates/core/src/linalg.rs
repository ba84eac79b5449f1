//! Dense matrices over a finite field.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Embedding, FieldSpec};

/// A dense row-major matrix of raw field representatives.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldMatrix {
    spec: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl FieldMatrix {
    pub fn zeros(spec: FieldSpec, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            spec,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(spec: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(spec, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_vec(spec: FieldSpec, rows: usize, cols: usize, data: Vec<u64>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        debug_assert!(data.iter().all(|&x| spec.contains(x)));
        FieldMatrix { spec, rows, cols, data }
    }

    pub fn from_fn(spec: FieldSpec, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        FieldMatrix { spec, rows, cols, data }
    }

    pub fn from_rows(spec: FieldSpec, rows: &[Vec<u64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_vec(spec, rows.len(), cols, rows.concat())
    }

    pub fn random<R: Rng + ?Sized>(spec: FieldSpec, rows: usize, cols: usize, rng: &mut R) -> Self {
        Self::from_fn(spec, rows, cols, |_, _| spec.random(rng))
    }

    pub fn random_symmetric<R: Rng + ?Sized>(spec: FieldSpec, n: usize, rng: &mut R) -> Self {
        let mut m = Self::zeros(spec, n, n);
        for i in 0..n {
            for j in i..n {
                let x = spec.random(rng);
                m.set(i, j, x);
                m.set(j, i, x);
            }
        }
        m
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
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

    pub fn data(&self) -> &[u64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: u64) {
        self.data[i * self.cols + j] = x;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> FieldMatrix {
        Self::from_fn(self.spec, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Symmetric with zero diagonal (meaningful in characteristic 2).
    pub fn is_alternate(&self) -> bool {
        self.is_symmetric() && (0..self.rows).all(|i| self.get(i, i) == 0)
    }

    pub fn add(&self, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.spec;
        FieldMatrix {
            spec: f,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f.add(*a, *b)).collect(),
        }
    }

    pub fn sub(&self, other: &FieldMatrix) -> FieldMatrix {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FieldMatrix {
        self.map(|x| self.spec.neg(x))
    }

    pub fn scale(&self, c: u64) -> FieldMatrix {
        self.map(|x| self.spec.mul(x, c))
    }

    pub fn map(&self, f: impl Fn(u64) -> u64) -> FieldMatrix {
        FieldMatrix {
            spec: self.spec,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    /// The same matrix with entries pushed through `emb`.
    pub fn embed(&self, emb: &Embedding) -> FieldMatrix {
        FieldMatrix {
            spec: emb.target(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| emb.map(x)).collect(),
        }
    }

    pub fn mul(&self, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions");
        let f = self.spec;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(l, j);
                    if b != 0 {
                        let idx = i * out.cols + j;
                        out.data[idx] = f.add(out.data[idx], f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    /// The block with rows `r0..r1` and columns `c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> FieldMatrix {
        Self::from_fn(self.spec, r1 - r0, c1 - c0, |i, j| self.get(r0 + i, c0 + j))
    }

    /// Copies `b` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, b: &FieldMatrix) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j));
            }
        }
    }

    /// Kronecker product `self ⊗ I_s`.
    pub fn kron_identity(&self, s: usize) -> FieldMatrix {
        Self::from_fn(self.spec, self.rows * s, self.cols * s, |i, j| {
            if i % s == j % s {
                self.get(i / s, j / s)
            } else {
                0
            }
        })
    }

    /// Row echelon reduction; returns the rank and the determinant (square only).
    fn eliminate(&self) -> (usize, u64) {
        let f = self.spec;
        let mut m = self.clone();
        let mut rank = 0;
        let mut det = 1;
        for c in 0..m.cols {
            let Some(p) = (rank..m.rows).find(|&r| m.get(r, c) != 0) else {
                det = 0;
                continue;
            };
            if p != rank {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, rank * m.cols + j);
                }
                det = f.neg(det);
            }
            let pivot = m.get(rank, c);
            det = f.mul(det, pivot);
            let inv = f.inv(pivot).expect("nonzero pivot");
            for r in rank + 1..m.rows {
                let factor = f.mul(m.get(r, c), inv);
                if factor == 0 {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(r, j), f.mul(factor, m.get(rank, j)));
                    m.set(r, j, v);
                }
            }
            rank += 1;
        }
        (rank, if rank == m.rows { det } else { 0 })
    }

    pub fn rank(&self) -> usize {
        self.eliminate().0
    }

    pub fn det(&self) -> u64 {
        assert!(self.is_square(), "determinant of a non-square matrix");
        if self.rows == 0 {
            return 1;
        }
        self.eliminate().1
    }

    /// Solves `self * X = rhs`; `None` when `self` is singular.
    pub fn solve(&self, rhs: &FieldMatrix) -> Option<FieldMatrix> {
        assert!(self.is_square() && rhs.rows == self.rows);
        let f = self.spec;
        let n = self.rows;
        let w = rhs.cols;
        let mut a = self.clone();
        let mut b = rhs.clone();
        for c in 0..n {
            let p = (c..n).find(|&r| a.get(r, c) != 0)?;
            if p != c {
                for j in 0..n {
                    a.data.swap(p * n + j, c * n + j);
                }
                for j in 0..w {
                    b.data.swap(p * w + j, c * w + j);
                }
            }
            let inv = f.inv(a.get(c, c)).expect("nonzero pivot");
            for j in 0..n {
                a.set(c, j, f.mul(a.get(c, j), inv));
            }
            for j in 0..w {
                b.set(c, j, f.mul(b.get(c, j), inv));
            }
            for r in 0..n {
                if r == c {
                    continue;
                }
                let factor = a.get(r, c);
                if factor == 0 {
                    continue;
                }
                for j in 0..n {
                    let v = f.sub(a.get(r, j), f.mul(factor, a.get(c, j)));
                    a.set(r, j, v);
                }
                for j in 0..w {
                    let v = f.sub(b.get(r, j), f.mul(factor, b.get(c, j)));
                    b.set(r, j, v);
                }
            }
        }
        Some(b)
    }

    pub fn inverse(&self) -> Option<FieldMatrix> {
        self.solve(&Self::identity(self.spec, self.rows))
    }

    /// Checked version of [`FieldMatrix::mul`].
    pub fn try_mul(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.spec != other.spec {
            return Err(Error::MixedFields(self.spec.to_string(), other.spec.to_string()));
        }
        Ok(self.mul(other))
    }
}

impl fmt::Display for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                f.write_str(&self.spec.format_elem(self.get(i, j)))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldMatrix[{}]{}", self.spec, self)
    }
}
