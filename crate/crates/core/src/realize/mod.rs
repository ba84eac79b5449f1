//! Deciding, building and verifying realizations of rational matrices as
//! Schur complements of linear pencils.
//!
//! Four classes are distinguished: arbitrary pencils (BR), symmetric pencils
//! (SBR), homogeneous pencils with `A0 = 0` (hBR) and both (hSBR). Every
//! rational matrix has a BR, and the homogeneous degree-1 ones have an hBR.
//! Outside characteristic 2 every symmetric (degree-1) matrix has an SBR
//! (hSBR). In characteristic 2 a symmetric matrix has one exactly when each
//! diagonal entry lies in `F(z^2) + z_1 F(z^2) + ... + z_n F(z^2)` (for hSBR:
//! in `z_1 F(z^2)_0 + ... + z_n F(z^2)_0`).

mod build;
pub mod combinators;
mod transfer;
mod verify;

use std::fmt;
use std::str::FromStr;

use crate::constants::{square_witnesses, SquareWitnesses, Violation, WitnessMode, WitnessOutcome};
use crate::error::{Error, Result};
use crate::pencil::Realization;
use crate::ratio::RatMatrix;

pub use build::build_realization;
pub use combinators::*;
pub use transfer::{transfer_check, TransferReport};
pub use verify::{verify_realization, Transcript, TranscriptPoint, VerifyOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Br,
    Sbr,
    Hbr,
    Hsbr,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::Br, Mode::Sbr, Mode::Hbr, Mode::Hsbr];

    pub fn symmetric(self) -> bool {
        matches!(self, Mode::Sbr | Mode::Hsbr)
    }

    pub fn homogeneous(self) -> bool {
        matches!(self, Mode::Hbr | Mode::Hsbr)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Br => "BR",
            Mode::Sbr => "SBR",
            Mode::Hbr => "hBR",
            Mode::Hsbr => "hSBR",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "br" => Ok(Mode::Br),
            "sbr" => Ok(Mode::Sbr),
            "hbr" => Ok(Mode::Hbr),
            "hsbr" => Ok(Mode::Hsbr),
            _ => Err(Error::InvalidArgument(format!("unknown mode `{s}`"))),
        }
    }
}

/// Square witnesses for one diagonal entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalWitness {
    pub index: usize,
    pub witnesses: SquareWitnesses,
}

/// Evidence behind a [`Verdict`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// Realizable with no further evidence needed (BR, hBR, or odd characteristic).
    Unconditional,
    /// Witnesses for every nonzero diagonal entry (characteristic 2).
    Witnesses(Vec<DiagonalWitness>),
    /// `F[row][col] != F[col][row]`.
    Asymmetric { row: usize, col: usize },
    /// `F[row][col]` is not homogeneous of degree 1.
    NotHomogeneousDegreeOne { row: usize, col: usize },
    /// Diagonal entry `index` lies outside the square-sum subspace.
    OutsideSubspace { index: usize, violation: Violation },
}

/// Outcome of [`decide_realizable`], optionally with a built and verified
/// realization attached by [`certify`].
#[derive(Debug, Clone)]
pub struct Verdict {
    pub mode: Mode,
    pub realizable: bool,
    pub certificate: Certificate,
    pub realization: Option<Realization>,
    pub transcript: Option<Transcript>,
}

impl Verdict {
    fn positive(mode: Mode, certificate: Certificate) -> Self {
        Verdict { mode, realizable: true, certificate, realization: None, transcript: None }
    }

    fn negative(mode: Mode, certificate: Certificate) -> Self {
        Verdict { mode, realizable: false, certificate, realization: None, transcript: None }
    }
}

fn first_asymmetry(f: &RatMatrix) -> Option<(usize, usize)> {
    (0..f.rows())
        .flat_map(|i| (i + 1..f.cols()).map(move |j| (i, j)))
        .find(|&(i, j)| f.get(i, j) != f.get(j, i))
}

fn first_inhomogeneous(f: &RatMatrix) -> Option<(usize, usize)> {
    (0..f.rows())
        .flat_map(|i| (0..f.cols()).map(move |j| (i, j)))
        .find(|&(i, j)| !f.get(i, j).homogeneous_degree().admits(1))
}

/// Decides whether `f` has a realization of the given class.
pub fn decide_realizable(f: &RatMatrix, mode: Mode) -> Result<Verdict> {
    if !f.is_square() {
        return Err(Error::NotSquare { rows: f.rows(), cols: f.cols() });
    }
    if mode.symmetric() {
        if let Some((row, col)) = first_asymmetry(f) {
            return Ok(Verdict::negative(mode, Certificate::Asymmetric { row, col }));
        }
    }
    if mode.homogeneous() {
        if let Some((row, col)) = first_inhomogeneous(f) {
            return Ok(Verdict::negative(mode, Certificate::NotHomogeneousDegreeOne { row, col }));
        }
    }
    if !mode.symmetric() || f.spec().characteristic() != 2 {
        return Ok(Verdict::positive(mode, Certificate::Unconditional));
    }
    let witness_mode = if mode.homogeneous() { WitnessMode::Homogeneous } else { WitnessMode::Affine };
    // For n = 1 (SBR) and n <= 2 (hSBR) the subspace is everything, so a
    // violation there means an implementation fault.
    let vacuous = match mode {
        Mode::Sbr => f.nvars() <= 1,
        _ => f.nvars() <= 2,
    };
    let mut all = Vec::new();
    for index in 0..f.rows() {
        let entry = f.get(index, index);
        if entry.is_zero() {
            continue;
        }
        match square_witnesses(entry, witness_mode)? {
            WitnessOutcome::Witnesses(witnesses) => all.push(DiagonalWitness { index, witnesses }),
            WitnessOutcome::NotInSubspace(violation) => {
                if vacuous {
                    return Err(Error::Inconsistent(format!(
                        "diagonal entry {entry} rejected although every {mode} candidate in {} variables is realizable",
                        f.nvars()
                    )));
                }
                return Ok(Verdict::negative(mode, Certificate::OutsideSubspace { index, violation }));
            }
        }
    }
    Ok(Verdict::positive(mode, Certificate::Witnesses(all)))
}

/// Decides, and for a positive verdict builds a realization and verifies it
/// against `f`. A failed verification is an internal inconsistency.
pub fn certify(f: &RatMatrix, mode: Mode, opts: &VerifyOptions) -> Result<Verdict> {
    let mut verdict = decide_realizable(f, mode)?;
    if !verdict.realizable {
        return Ok(verdict);
    }
    let r = build::build_from_verdict(f, &verdict)?;
    let transcript = verify_realization(&r, f, opts)?;
    if !transcript.passed {
        return Err(Error::Inconsistent(format!(
            "built {mode} realization does not reproduce the target"
        )));
    }
    verdict.realization = Some(r);
    verdict.transcript = Some(transcript);
    Ok(verdict)
}
