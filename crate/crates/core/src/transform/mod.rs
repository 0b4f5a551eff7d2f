//! Proof transformations: weakening, contraction, inversion, set-proof
//! normalization, and the translations between standard and circular proofs.
//!
//! The propositional rules and `RT` accept any sub-sequent of their
//! prescribed premisses, and box rules accept any context. Weakening a
//! standard proof therefore only changes its endsequent. Contraction and
//! inversion follow the usual depth-preserving case analysis.

mod companion;
mod lower;
mod structural;

use thiserror::Error;

use crate::calculus::{Calculus, RuleKind};
use crate::derivation::{check_circular, check_standard, DerivationTree, NodeRule, Verdict};
use crate::search::SearchError;
use crate::sequent::Sequent;

pub use companion::{
    fold_subsumed, gl_to_circular, grz_to_circular_s4, to_circular, truncate_repeats, Companion,
};
pub use lower::circular_to_standard;
pub use structural::{contract, contract_one, contract_to, invert, to_set_proof, Shape};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("input proof is invalid: {0}")]
    InvalidInput(String),
    #[error("endsequent does not have the requested shape: {0}")]
    ShapeMismatch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("proof search failed on a sequent that should be provable: {0}")]
    Witness(String),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("iteration bound of {0} exceeded")]
    Bound(usize),
}

pub type Result<T> = std::result::Result<T, TransformError>;

/// Checks `d` in `c`, as a circular proof when it has circular leaves.
pub(crate) fn require_valid(c: &Calculus, d: &DerivationTree) -> Result<()> {
    let verdict = if d.count_circular_leaves() > 0 {
        check_circular(c, d)
    } else {
        check_standard(c, d)
    };
    match verdict {
        Verdict::Valid => Ok(()),
        v => Err(TransformError::InvalidInput(v.to_string())),
    }
}

pub(crate) fn require_standard(c: &Calculus, d: &DerivationTree) -> Result<()> {
    match check_standard(c, d) {
        Verdict::Valid => Ok(()),
        v => Err(TransformError::InvalidInput(v.to_string())),
    }
}

/// The same derivation with a larger endsequent. Valid for standard proofs
/// whenever `sequent` contains the old endsequent.
pub(crate) fn reroot(d: &DerivationTree, sequent: Sequent) -> DerivationTree {
    debug_assert!(d.sequent.is_subsequent_of(&sequent));
    DerivationTree {
        sequent,
        rule: d.rule.clone(),
        premisses: d.premisses.clone(),
    }
}

/// A proof of `extra · S` from a proof of `S`.
///
/// Standard proofs keep their shape and depth. In a circular proof a leaf
/// that returned to the old endsequent has lost its companion; it is
/// replaced by a copy of the original proof, so the depth can grow.
pub fn weaken(c: &Calculus, d: &DerivationTree, extra: &Sequent) -> Result<DerivationTree> {
    require_valid(c, d)?;
    if extra.is_empty() {
        return Ok(d.clone());
    }
    let target = d.sequent.multiply(extra);
    if c.single_conclusion && target.succ.len() > 1 {
        return Err(TransformError::Unsupported(format!(
            "{target} has several succedent formulas in a single-conclusion calculus"
        )));
    }
    let mut out = reroot(d, target);
    if d.count_circular_leaves() > 0 {
        let mut below = Vec::new();
        restore_companions(&mut out, d, &mut below, true);
    }
    require_valid(c, &out)?;
    Ok(out)
}

fn restore_companions(
    node: &mut DerivationTree,
    original: &DerivationTree,
    below: &mut Vec<(Option<Sequent>, bool)>,
    is_root: bool,
) {
    if node.rule == NodeRule::Circular {
        let closed = below
            .iter()
            .position(|(s, _)| s.as_ref() == Some(&node.sequent))
            .is_some_and(|i| below[i..].iter().any(|(_, b)| *b));
        if !closed {
            *node = original.clone();
        }
        return;
    }
    let boxed = node.kind().is_some_and(RuleKind::is_box);
    // the rerooted endsequent no longer serves as a companion
    let label = (!is_root).then(|| node.sequent.clone());
    below.push((label, boxed));
    for p in &mut node.premisses {
        restore_companions(p, original, below, false);
    }
    below.pop();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{prove, SearchConfig};

    fn seq(s: &str) -> Sequent {
        Sequent::parse(s).unwrap()
    }

    #[test]
    fn weaken_examples() {
        let g3p = Calculus::g3p();
        let ax = DerivationTree::axiom(seq("p => p"), RuleKind::Ax);
        let w = weaken(&g3p, &ax, &seq("q =>")).unwrap();
        assert_eq!(w.sequent, seq("q, p => p"));
        assert_eq!(w.depth(), 1);
        assert_eq!(weaken(&g3p, &ax, &Sequent::empty()).unwrap(), ax);

        let k4 = Calculus::g3k4();
        let d = prove(&SearchConfig::standard(k4.clone()), &seq("[]p => [][]p"))
            .unwrap()
            .proof()
            .unwrap();
        let w = weaken(&k4, &d, &seq("r => s")).unwrap();
        assert_eq!(w.sequent, seq("r, []p => [][]p, s"));
        assert_eq!(w.depth(), d.depth());
    }

    #[test]
    fn weaken_circular_unfolds_lost_companions() {
        let k4 = Calculus::g3k4();
        let d = prove(&SearchConfig::circular(k4.clone()), &seq("[]([]p -> p) => []p"))
            .unwrap()
            .proof()
            .unwrap();
        let w = weaken(&k4, &d, &seq("q => r")).unwrap();
        assert_eq!(w.sequent, seq("q, []([]p -> p) => []p, r"));
        assert!(check_circular(&k4, &w).is_valid());
    }

    #[test]
    fn invalid_input_is_reported() {
        let bogus = DerivationTree::axiom(seq("p => q"), RuleKind::Ax);
        assert!(matches!(
            weaken(&Calculus::g3p(), &bogus, &seq("r =>")),
            Err(TransformError::InvalidInput(_))
        ));
    }
}
