//! Randomized verification of a realization against its target.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::FieldMatrix;
use crate::pencil::{oracle_field, Realization};
use crate::ratio::RatMatrix;

/// Below this oracle-field order a passing numeric check is backed by an
/// exact symbolic comparison.
const EXACT_BELOW_ORDER: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub points: usize,
    pub ext_degree: u32,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { points: 20, ext_degree: 16, seed: 0xB355 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranscriptPoint {
    /// Coordinates as raw elements of [`Transcript::field`].
    pub point: Vec<u64>,
    pub realized: FieldMatrix,
    pub expected: FieldMatrix,
    pub matches: bool,
}

/// Record of a verification run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    /// Field the points were drawn from.
    pub field: FieldSpec,
    pub points: Vec<TranscriptPoint>,
    /// Samples rejected because `A22` was singular or the target had a pole.
    pub skipped: usize,
    pub passed: bool,
    /// Index into `points` of the first mismatch.
    pub first_mismatch: Option<usize>,
    /// Result of the exact comparison, when one was made.
    pub exact: Option<bool>,
}

/// Compares the Schur complement of `r` with `target` at random points.
///
/// Points are drawn from `GF(2^ext_degree)` in characteristic 2 and from the
/// base field otherwise; points where either side is undefined are skipped,
/// up to ten times the requested number of samples. When the point field is
/// small the symbolic Schur complement is compared exactly as well, and that
/// comparison alone decides when too few defined points exist.
pub fn verify_realization(r: &Realization, target: &RatMatrix, opts: &VerifyOptions) -> Result<Transcript> {
    if r.spec() != target.spec() {
        return Err(Error::MixedFields(r.spec().to_string(), target.spec().to_string()));
    }
    if r.nvars() != target.nvars() {
        return Err(Error::VariableCountMismatch { expected: target.nvars(), found: r.nvars() });
    }
    if target.rows() != r.top() || target.cols() != r.top() {
        return Err(Error::ShapeMismatch(format!(
            "realization has a {0}x{0} target, expected {1}x{2}",
            r.top(),
            target.rows(),
            target.cols()
        )));
    }
    let field = oracle_field(r.spec(), opts.ext_degree)?;
    let emb = r.spec().embedding(&field)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut points = Vec::with_capacity(opts.points);
    let mut skipped = 0;
    let mut first_mismatch = None;
    for _ in 0..10 * opts.points.max(1) {
        if points.len() == opts.points {
            break;
        }
        let point: Vec<u64> = (0..r.nvars()).map(|_| field.random(&mut rng)).collect();
        let (Some(realized), Some(expected)) = (r.schur_eval_raw(&emb, &point), target.eval_raw(&emb, &point)) else {
            skipped += 1;
            continue;
        };
        let matches = realized == expected;
        if !matches && first_mismatch.is_none() {
            first_mismatch = Some(points.len());
        }
        points.push(TranscriptPoint { point, realized, expected, matches });
    }
    let small = field.order() < EXACT_BELOW_ORDER;
    if points.len() < opts.points && !small {
        return Err(Error::InsufficientNonSingularPoints { found: points.len(), wanted: opts.points });
    }
    let exact = if first_mismatch.is_none() && small {
        Some(r.schur_symbolic().is_ok_and(|s| &s == target))
    } else {
        None
    };
    let passed = first_mismatch.is_none() && exact != Some(false);
    Ok(Transcript { field, points, skipped, passed, first_mismatch, exact })
}
