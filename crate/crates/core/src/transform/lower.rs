//! From circular G3K4 proofs to standard G3GL proofs.
//!
//! Each subtree with endsequent `S` is turned into a G3GL proof of
//! `□I(ap), ⊡I(nap), S`, where `ap` and `nap` are the leaves of the subtree
//! that are circular in the whole proof but not within the subtree, split by
//! whether an `R_K4` application lies between them and the subtree's root.
//! `I(X)` is the formula of sequent `X`. At the root both sets are empty.

use std::collections::BTreeSet;

use super::{reroot, require_valid, Result, TransformError};
use crate::calculus::{Calculus, RuleKind};
use crate::derivation::{check_standard, DerivationTree, NodeRule};
use crate::formula::Formula;
use crate::search::{prove, Outcome, SearchConfig};
use crate::sequent::{Multiset, Sequent};

type Ledger = BTreeSet<Sequent>;

/// A G3GL proof from a circular G3K4 proof of the same endsequent.
pub fn circular_to_standard(d: &DerivationTree) -> Result<DerivationTree> {
    let k4 = Calculus::g3k4();
    require_valid(&k4, d)?;
    if d.contains_assumptions() {
        return Err(TransformError::InvalidInput("open assumption leaves".into()));
    }
    if !d.sequent.is_desugared() {
        return Err(TransformError::InvalidInput(
            "endsequent must be written without ~ and T".into(),
        ));
    }
    let lower = Lower {
        k4,
        gl: Calculus::g3gl(),
        decider: SearchConfig::standard(Calculus::g3gl()),
    };
    let (proof, ap, nap) = lower.run(d)?;
    if !ap.is_empty() || !nap.is_empty() {
        return Err(TransformError::InvalidInput("circular leaf without companion".into()));
    }
    let v = check_standard(&lower.gl, &proof);
    assert!(v.is_valid(), "translation produced an invalid proof: {v}");
    Ok(proof)
}

struct Lower {
    k4: Calculus,
    gl: Calculus,
    decider: SearchConfig,
}

fn formula_of(s: &Sequent) -> Formula {
    s.interpret().desugar()
}

/// `□I(ap), I(nap), □I(nap)`, each formula once.
fn context(ap: &Ledger, nap: &Ledger) -> Multiset {
    let mut boxed: BTreeSet<Formula> = BTreeSet::new();
    let mut m = Multiset::new();
    for x in ap.iter().chain(nap) {
        boxed.insert(Formula::boxed(formula_of(x)));
    }
    for x in nap {
        m.insert(formula_of(x));
    }
    for b in boxed {
        m.insert(b);
    }
    m
}

fn with_context(ctx: &Multiset, s: &Sequent) -> Sequent {
    Sequent::new(ctx.union(&s.ante), s.succ.clone())
}

impl Lower {
    fn witness(&self, target: &Sequent) -> Result<DerivationTree> {
        match prove(&self.decider, target)? {
            Outcome::Proof(p) if p.sequent == *target => Ok(p),
            _ => Err(TransformError::Witness(target.to_string())),
        }
    }

    fn checked(&self, d: DerivationTree) -> DerivationTree {
        debug_assert!(
            self.gl.match_kind(d.kind().expect("rule node"), &d.sequent, &d.premiss_sequents()).is_some(),
            "not an instance: {d}"
        );
        d
    }

    fn run(&self, d: &DerivationTree) -> Result<(DerivationTree, Ledger, Ledger)> {
        let kind = match &d.rule {
            NodeRule::Circular => {
                let nap: Ledger = [d.sequent.clone()].into();
                let target = with_context(&context(&Ledger::new(), &nap), &d.sequent);
                return Ok((self.witness(&target)?, Ledger::new(), nap));
            }
            NodeRule::Assumption => {
                return Err(TransformError::InvalidInput("open assumption leaf".into()));
            }
            NodeRule::Rule(_) => d.kind().expect("validated rule"),
        };
        if kind.is_axiom() {
            return Ok((d.clone(), Ledger::new(), Ledger::new()));
        }
        let mut children = Vec::new();
        let (mut ap, mut nap) = (Ledger::new(), Ledger::new());
        for p in &d.premisses {
            let (proof, a, n) = self.run(p)?;
            ap.extend(a);
            nap.extend(n);
            children.push((proof, p.sequent.clone()));
        }
        let s = &d.sequent;
        if kind == RuleKind::K4 {
            let (child, premiss) = children.pop().expect("one premiss");
            let inst = self
                .k4
                .match_kind(kind, s, &[premiss])
                .expect("validated instance");
            let (_, principal) = inst.principal.expect("box principal");
            let phi = principal.unbox().expect("boxed principal");
            let open: Ledger = ap.union(&nap).cloned().collect();
            let mut gamma = inst.gamma.clone();
            for x in &open {
                gamma.insert(formula_of(x));
            }
            let literal = RuleKind::Gl.box_premiss(&gamma, phi);
            if !child.sequent.is_subsequent_of(&literal) {
                return Err(TransformError::InvalidInput(format!(
                    "internal: {} does not weaken to {literal}",
                    child.sequent
                )));
            }
            let ctx = context(&open, &Ledger::new());
            let concl = with_context(&ctx, s);
            let mut proof = self.checked(DerivationTree::node(
                concl,
                RuleKind::Gl,
                vec![reroot(&child, literal)],
            ));
            let mut ap = open;
            if ap.remove(s) {
                // the endsequent was a circular leaf above: absorb □I(S)
                let target = with_context(&context(&ap, &Ledger::new()), s);
                proof = self.witness(&target)?;
            }
            return Ok((proof, ap, Ledger::new()));
        }

        let ctx = context(&ap, &nap);
        let premisses = children
            .into_iter()
            .map(|(proof, premiss)| reroot(&proof, with_context(&ctx, &premiss)))
            .collect();
        let mut proof = self.checked(DerivationTree::node(with_context(&ctx, s), kind, premisses));
        let fresh_ap = ap.remove(s);
        let fresh_nap = nap.remove(s);
        if fresh_nap {
            // a repeat needs an R_K4 application in between
            return Err(TransformError::InvalidInput(format!(
                "cycle through {s} without a box rule"
            )));
        }
        if fresh_ap {
            let target = with_context(&context(&ap, &nap), s);
            proof = self.witness(&target)?;
        }
        Ok((proof, ap, nap))
    }
}
