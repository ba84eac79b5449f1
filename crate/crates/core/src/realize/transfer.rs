//! Realizability is unchanged by enlarging the field or adding variables.

use super::{decide_realizable, Mode, Verdict};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::ratio::RatMatrix;

#[derive(Debug, Clone)]
pub struct TransferReport {
    pub verdict_base: Verdict,
    pub verdict_ext: Verdict,
    pub agree: bool,
}

/// Decides `f` over its own field and again after embedding it into `ext`
/// with `ext_vars >= f.nvars()` variables.
pub fn transfer_check(f: &RatMatrix, ext: FieldSpec, ext_vars: usize, mode: Mode) -> Result<TransferReport> {
    let base = f.spec();
    if base.characteristic() != ext.characteristic() || !base.embeds_into(&ext) {
        return Err(Error::NotAnExtension { base: base.to_string(), ext: ext.to_string() });
    }
    if ext_vars < f.nvars() {
        return Err(Error::VariableCountMismatch { expected: f.nvars(), found: ext_vars });
    }
    let emb = base.embedding(&ext)?;
    let lifted = f.try_map(|r| r.embed(&emb).with_nvars(ext_vars))?;
    let verdict_base = decide_realizable(f, mode)?;
    let verdict_ext = decide_realizable(&lifted, mode)?;
    let agree = verdict_base.realizable == verdict_ext.realizable;
    Ok(TransferReport { verdict_base, verdict_ext, agree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::RatFunc;

    #[test]
    fn product_stays_unrealizable() {
        let f2 = FieldSpec::gf2();
        let z1 = RatFunc::var(f2, 2, 0).unwrap();
        let z2 = RatFunc::var(f2, 2, 1).unwrap();
        let t = RatMatrix::scalar(z1.mul(&z2));
        let rep = transfer_check(&t, FieldSpec::gf4(), 3, Mode::Sbr).unwrap();
        assert!(rep.agree);
        assert!(!rep.verdict_ext.realizable);
        assert!(matches!(
            transfer_check(&t, FieldSpec::gf3(), 3, Mode::Sbr),
            Err(Error::NotAnExtension { .. })
        ));
        assert!(transfer_check(&t, FieldSpec::gf4(), 1, Mode::Sbr).is_err());
    }
}
