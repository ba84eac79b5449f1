//! Fields of constants of the formal partial derivations.
//!
//! In characteristic `p` the common kernel of `d/dz_1, ..., d/dz_n` on
//! `F(z)` is `F(z^p)`. For `p = 2`, `F(z)` is a `2^n`-dimensional vector
//! space over `F(z^2)` with basis `{z^beta : beta in {0,1}^n}`; the
//! functions realizable by symmetric pencils are exactly those whose
//! coordinates vanish for `|beta| >= 2`.

use std::collections::BTreeMap;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::poly::ExpVec;
use crate::ratio::RatFunc;

/// Largest variable count for which all `2^n` coordinates are materialized.
pub const MAX_COORDINATE_VARS: usize = 16;

/// Decides `r in F(z^p)` two independent ways and insists they agree.
pub fn constants_member(r: &RatFunc, p: u64) -> Result<bool> {
    let char = r.spec().characteristic();
    if p != char {
        return Err(Error::WrongCharacteristic { expected: p, found: char });
    }
    let by_derivation = (0..r.nvars()).all(|i| r.derive(i).map(|d| d.is_zero()).unwrap_or(false));
    let by_exponents = r.num().exponents_divisible_by(p) && r.den().exponents_divisible_by(p);
    if by_derivation != by_exponents {
        return Err(Error::ProcedureDisagreement(r.to_string()));
    }
    Ok(by_derivation)
}

fn require_char2(r: &RatFunc) -> Result<()> {
    match r.spec().characteristic() {
        2 => Ok(()),
        p => Err(Error::WrongCharacteristic { expected: 2, found: p }),
    }
}

/// Membership in the homogeneous degree-zero part of `F(z^2)`.
pub fn homogeneous_constants_member(r: &RatFunc) -> Result<bool> {
    require_char2(r)?;
    Ok(constants_member(r, 2)? && r.homogeneous_degree().admits(0))
}

/// `r = r0 + sum_i z_i * gradient[i]` with every piece in `F(z^2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineDecomposition {
    pub r0: RatFunc,
    pub gradient: Vec<RatFunc>,
}

impl AffineDecomposition {
    pub fn reconstruct(&self) -> RatFunc {
        let n = self.r0.nvars();
        let spec = self.r0.spec();
        self.gradient.iter().enumerate().fold(self.r0.clone(), |acc, (i, g)| {
            acc.add(&RatFunc::var(spec, n, i).expect("index in range").mul(g))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AffineOutcome {
    Decomposed(AffineDecomposition),
    /// The partial derivative with respect to `var` is not in `F(z^2)`.
    NotInSubspace { var: usize, partial: RatFunc },
}

/// Decides membership in `F(z^2) + z_1 F(z^2) + ... + z_n F(z^2)` through the
/// partial derivatives.
pub fn affine_decompose(r: &RatFunc) -> Result<AffineOutcome> {
    require_char2(r)?;
    let mut gradient = Vec::with_capacity(r.nvars());
    for i in 0..r.nvars() {
        let d = r.derive(i)?;
        if !constants_member(&d, 2)? {
            return Ok(AffineOutcome::NotInSubspace { var: i, partial: d });
        }
        gradient.push(d);
    }
    let spec = r.spec();
    let n = r.nvars();
    let r0 = gradient.iter().enumerate().fold(r.clone(), |acc, (i, g)| {
        acc.add(&RatFunc::var(spec, n, i).expect("index in range").mul(g))
    });
    if !constants_member(&r0, 2)? {
        return Err(Error::Inconsistent(format!("constant part of {r} is not in F(z^2)")));
    }
    Ok(AffineOutcome::Decomposed(AffineDecomposition { r0, gradient }))
}

/// Coordinates of `r` in the basis `{z^beta}` over `F(z^2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coordinates {
    nvars: usize,
    coords: BTreeMap<ExpVec, RatFunc>,
}

impl Coordinates {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// The coordinate at a 0/1 vector `beta`.
    pub fn get(&self, beta: &ExpVec) -> &RatFunc {
        &self.coords[beta]
    }

    /// All `2^n` coordinates in ascending graded-lex order of `beta`.
    pub fn iter(&self) -> impl Iterator<Item = (&ExpVec, &RatFunc)> {
        self.coords.iter()
    }

    /// `sum_beta coords[beta] * z^beta`.
    pub fn reconstruct(&self) -> RatFunc {
        let (spec, n) = {
            let any = self.coords.values().next().expect("at least one coordinate");
            (any.spec(), any.nvars())
        };
        self.coords
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .fold(RatFunc::zero(spec, n), |acc, (beta, c)| {
                let mono = crate::poly::MultiPoly::monomial(spec, beta.clone(), 1);
                acc.add(&c.mul(&RatFunc::from_poly(mono)))
            })
    }

    /// The graded-lex-least `beta` with `|beta| >= 2` and a nonzero coordinate.
    pub fn first_violation(&self) -> Option<(&ExpVec, &RatFunc)> {
        self.coords
            .iter()
            .find(|(beta, c)| beta.degree() >= 2 && !c.is_zero())
    }
}

/// Writes `r = a/b` as `a*b / b^2`, splits `a*b` by exponent parity and reads
/// off `coords[beta] = (s_beta / b)^2`.
pub fn basis_coordinates(r: &RatFunc) -> Result<Coordinates> {
    require_char2(r)?;
    let n = r.nvars();
    if n > MAX_COORDINATE_VARS {
        return Err(Error::InvalidArgument(format!(
            "coordinates are limited to {MAX_COORDINATE_VARS} variables, got {n}"
        )));
    }
    Ok(Coordinates {
        nvars: n,
        coords: square_roots_of_coordinates(r)?
            .into_iter()
            .map(|(beta, s)| (beta, s.square()))
            .collect(),
    })
}

/// `s_beta / b` for every `beta`, the square roots of the coordinates.
fn square_roots_of_coordinates(r: &RatFunc) -> Result<BTreeMap<ExpVec, RatFunc>> {
    let n = r.nvars();
    let c = r.num().mul(r.den());
    let mut split = c.parity_split()?;
    let mut out = BTreeMap::new();
    for beta in ExpVec::binary_vectors(n) {
        let root = match split.remove(&beta) {
            Some(s) => RatFunc::new(s, r.den().clone())?,
            None => RatFunc::zero(r.spec(), n),
        };
        out.insert(beta, root);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WitnessMode {
    /// `r = q0^2 + sum z_i q_i^2`.
    Affine,
    /// `r = sum z_i q_i^2` with each `q_i` homogeneous of degree 0.
    Homogeneous,
}

/// Square-sum witnesses for a diagonal entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareWitnesses {
    /// Absent in homogeneous mode.
    pub q0: Option<RatFunc>,
    pub qs: Vec<RatFunc>,
}

impl SquareWitnesses {
    /// `q0^2 + sum_i z_i q_i^2`.
    pub fn reconstruct(&self) -> RatFunc {
        let first = self.q0.as_ref().unwrap_or(&self.qs[0]);
        let (spec, n) = (first.spec(), first.nvars());
        let start = self.q0.as_ref().map_or(RatFunc::zero(spec, n), RatFunc::square);
        self.qs.iter().enumerate().fold(start, |acc, (i, q)| {
            acc.add(&RatFunc::var(spec, n, i).expect("index in range").mul(&q.square()))
        })
    }
}

/// Why an element is outside the square-sum subspace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A nonzero coordinate at `beta` with `|beta| >= 2`.
    Coordinate { beta: ExpVec, value: RatFunc },
    /// A nonzero `F(z^2)` part in homogeneous mode.
    ConstantPart { value: RatFunc },
    /// A witness that is not homogeneous of degree 0.
    InhomogeneousWitness { var: usize, value: RatFunc },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessOutcome {
    Witnesses(SquareWitnesses),
    NotInSubspace(Violation),
}

/// Extracts `q0, q_1, ..., q_n` or reports a violation.
pub fn square_witnesses(r: &RatFunc, mode: WitnessMode) -> Result<WitnessOutcome> {
    require_char2(r)?;
    if mode == WitnessMode::Homogeneous && !r.homogeneous_degree().admits(1) {
        return Err(Error::NotHomogeneousDegreeOne);
    }
    let coords = basis_coordinates(r)?;
    if let Some((beta, value)) = coords.first_violation() {
        return Ok(WitnessOutcome::NotInSubspace(Violation::Coordinate {
            beta: beta.clone(),
            value: value.clone(),
        }));
    }
    let n = r.nvars();
    let root = |c: &RatFunc| -> Result<RatFunc> {
        c.frobenius_sqrt()?
            .ok_or_else(|| Error::Inconsistent(format!("coordinate {c} is not a square")))
    };
    let c0 = coords.get(&ExpVec::zero(n));
    let qs = (0..n)
        .map(|i| root(coords.get(&ExpVec::unit(n, i))))
        .collect::<Result<Vec<_>>>()?;
    let witnesses = match mode {
        WitnessMode::Affine => SquareWitnesses { q0: Some(root(c0)?), qs },
        WitnessMode::Homogeneous => {
            if !c0.is_zero() {
                return Ok(WitnessOutcome::NotInSubspace(Violation::ConstantPart {
                    value: c0.clone(),
                }));
            }
            if let Some((var, q)) = qs
                .iter()
                .enumerate()
                .find(|(_, q)| !q.homogeneous_degree().admits(0))
            {
                return Ok(WitnessOutcome::NotInSubspace(Violation::InhomogeneousWitness {
                    var,
                    value: q.clone(),
                }));
            }
            SquareWitnesses { q0: None, qs }
        }
    };
    Ok(WitnessOutcome::Witnesses(witnesses))
}

/// Dimensions of `F(z)` and its realizable subspaces over `F(z^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DensityReport {
    pub n: u32,
    /// `[F(z) : F(z^2)] = 2^n`.
    pub dim_total: u64,
    /// `dim (F(z^2) + sum z_i F(z^2)) = n + 1`.
    pub dim_sbr: u64,
    /// `[F(z)_1 : F(z^2)_0] = 2^(n-1)`.
    pub dim_total_h: u64,
    /// `dim (sum z_i F(z^2)_0) = n`.
    pub dim_hsbr: u64,
}

impl DensityReport {
    /// `(n + 1) / 2^n`.
    pub fn ratio_sbr(&self) -> Ratio<u64> {
        Ratio::new(self.dim_sbr, self.dim_total)
    }

    /// `n / 2^(n-1)`.
    pub fn ratio_hsbr(&self) -> Ratio<u64> {
        Ratio::new(self.dim_hsbr, self.dim_total_h)
    }
}

pub fn density_report(n: u32) -> Result<DensityReport> {
    if n == 0 || n > 63 {
        return Err(Error::InvalidArgument(format!(
            "variable count must be in 1..=63, got {n}"
        )));
    }
    Ok(DensityReport {
        n,
        dim_total: 1 << n,
        dim_sbr: n as u64 + 1,
        dim_total_h: 1 << (n - 1),
        dim_hsbr: n as u64,
    })
}
