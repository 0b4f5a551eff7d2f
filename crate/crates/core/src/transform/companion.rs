//! From standard proofs with a strong box rule `R1` to circular proofs with
//! a weaker one `R2`: GL to circular K4, and Grz to circular S4.
//!
//! The lowest, leftmost `R1` application is replaced by an `R2` application
//! whose (set-)premiss is proved in the source calculus. This pushes `R1` up
//! the tree. Once every branch through an `R1` application repeats a sequent
//! across an `R2` application, cutting each branch at its first repeat leaves
//! a circular proof without `R1`.

use std::collections::HashMap;

use super::structural::set_proof;
use super::{require_standard, require_valid, Result, TransformError};
use crate::calculus::{Calculus, RuleKind};
use crate::derivation::{DerivationTree, NodeRule};
use crate::search::{closure_with, prove, Outcome, SearchConfig, DEFAULT_MAX_SEQUENTS};
use crate::sequent::Sequent;

/// A source calculus `G + R1`, its circular companion `G + R2`, and the
/// calculus `G + R1 + R2` of the intermediate proofs.
#[derive(Clone, Debug)]
pub struct Companion {
    pub source: Calculus,
    pub target: Calculus,
    pub mixed: Calculus,
    pub r1: RuleKind,
    pub r2: RuleKind,
}

impl Companion {
    pub fn gl_k4() -> Self {
        Companion {
            source: Calculus::g3gl(),
            target: Calculus::g3k4(),
            mixed: Calculus::build("gl+k4", crate::calculus::Base::Classical, &[RuleKind::Gl, RuleKind::K4]),
            r1: RuleKind::Gl,
            r2: RuleKind::K4,
        }
    }

    pub fn grz_s4() -> Self {
        Companion {
            source: Calculus::g3grz(),
            target: Calculus::g3s4(),
            mixed: Calculus::build(
                "grz+s4",
                crate::calculus::Base::Classical,
                &[RuleKind::Grz, RuleKind::T, RuleKind::K4],
            ),
            r1: RuleKind::Grz,
            r2: RuleKind::K4,
        }
    }
}

/// A circular G3K4 proof from a G3GL proof of the same endsequent.
pub fn gl_to_circular(d: &DerivationTree) -> Result<DerivationTree> {
    to_circular(&Companion::gl_k4(), d)
}

/// A circular G3S4 proof from a proof in G3p + R_Grz + R_T.
pub fn grz_to_circular_s4(d: &DerivationTree) -> Result<DerivationTree> {
    to_circular(&Companion::grz_s4(), d)
}

const MAX_ROUNDS: usize = 200_000;

pub fn to_circular(comp: &Companion, d: &DerivationTree) -> Result<DerivationTree> {
    require_standard(&comp.source, d)?;
    if !d.sequent.is_desugared() {
        return Err(TransformError::InvalidInput(
            "endsequent must be written without ~ and T".into(),
        ));
    }
    // every branch of length beyond the universe size repeats a sequent
    let bound = closure_with(&d.sequent, &comp.mixed, true, DEFAULT_MAX_SEQUENTS)
        .map(|c| c.size())
        .unwrap_or(DEFAULT_MAX_SEQUENTS);
    let decider = SearchConfig::standard(comp.source.clone());
    let mut tree = set_proof(&comp.source, d)?;
    for _ in 0..MAX_ROUNDS {
        tree = truncate_repeats(&tree, comp.r2);
        let Some(path) = lowest_leftmost(&tree, comp.r1) else {
            let out = fold_subsumed(&tree);
            require_valid(&comp.target, &out).map_err(|e| {
                TransformError::InvalidInput(format!("internal: translation output rejected: {e}"))
            })?;
            return Ok(out);
        };
        if path.len() + 1 > bound + 1 {
            return Err(TransformError::Bound(bound));
        }
        let node = tree.get(&path).expect("path from search");
        let inst = comp
            .mixed
            .match_kind(comp.r1, &node.sequent, &node.premiss_sequents())
            .expect("R1 node of a valid proof");
        let (_, principal) = inst.principal.expect("box rule principal");
        let phi = principal.unbox().expect("boxed principal");
        let premiss = comp.r2.box_premiss(&inst.gamma, phi).star();
        let witness = match prove(&decider, &premiss)? {
            Outcome::Proof(q) => set_proof(&comp.source, &q)?,
            Outcome::NotProvable => return Err(TransformError::Witness(premiss.to_string())),
        };
        let replaced = DerivationTree::node(node.sequent.clone(), comp.r2, vec![witness]);
        *tree.get_mut(&path).expect("path from search") = replaced;
    }
    Err(TransformError::Bound(MAX_ROUNDS))
}

/// Path to the `rule` application closest to the root, leftmost among those.
fn lowest_leftmost(tree: &DerivationTree, rule: RuleKind) -> Option<Vec<usize>> {
    let mut level: Vec<(Vec<usize>, &DerivationTree)> = vec![(Vec::new(), tree)];
    while !level.is_empty() {
        if let Some((p, _)) = level.iter().find(|(_, n)| n.kind() == Some(rule)) {
            return Some(p.clone());
        }
        level = level
            .into_iter()
            .flat_map(|(p, n)| {
                n.premisses.iter().enumerate().map(move |(i, c)| {
                    let mut q = p.clone();
                    q.push(i);
                    (q, c)
                })
            })
            .collect();
    }
    None
}

struct Branch {
    labels: Vec<Sequent>,
    via_box: Vec<bool>,
    first: HashMap<Sequent, usize>,
}

impl Branch {
    fn new() -> Self {
        Branch {
            labels: Vec::new(),
            via_box: Vec::new(),
            first: HashMap::new(),
        }
    }

    fn push(&mut self, s: &Sequent, boxed: bool) {
        self.first.entry(s.clone()).or_insert(self.labels.len());
        self.labels.push(s.clone());
        self.via_box.push(boxed);
    }

    fn pop(&mut self) {
        let s = self.labels.pop().expect("non-empty branch");
        self.via_box.pop();
        if self.first.get(&s) == Some(&self.labels.len()) {
            self.first.remove(&s);
        }
    }

    fn box_since(&self, i: usize) -> bool {
        self.via_box[i..].iter().any(|b| *b)
    }
}

/// Replaces every node whose sequent already occurs below it, with an `r2`
/// application in between, by a circular leaf.
pub fn truncate_repeats(tree: &DerivationTree, r2: RuleKind) -> DerivationTree {
    fn go(node: &DerivationTree, r2: RuleKind, branch: &mut Branch) -> DerivationTree {
        if let Some(&i) = branch.first.get(&node.sequent) {
            if branch.box_since(i) {
                return DerivationTree::circular(node.sequent.clone());
            }
        }
        branch.push(&node.sequent, node.kind() == Some(r2));
        let premisses = node.premisses.iter().map(|p| go(p, r2, branch)).collect();
        branch.pop();
        DerivationTree {
            sequent: node.sequent.clone(),
            rule: node.rule.clone(),
            premisses,
        }
    }
    go(tree, r2, &mut Branch::new())
}

/// Replaces a non-leaf premiss of a propositional rule by a circular leaf
/// when a sequent below it (across a box rule) is contained in it. The rule
/// then uses that sequent as a weakened premiss.
pub fn fold_subsumed(tree: &DerivationTree) -> DerivationTree {
    fn go(node: &DerivationTree, branch: &mut Branch) -> DerivationTree {
        let boxed = node.kind().is_some_and(RuleKind::is_box);
        let propositional = matches!(node.rule, NodeRule::Rule(_)) && !boxed;
        branch.push(&node.sequent, boxed);
        let premisses = node
            .premisses
            .iter()
            .map(|p| {
                if propositional && !p.premisses.is_empty() {
                    let hit = (0..branch.labels.len())
                        .find(|&i| branch.box_since(i) && branch.labels[i].is_subsequent_of(&p.sequent));
                    if let Some(i) = hit {
                        return DerivationTree::circular(branch.labels[i].clone());
                    }
                }
                go(p, branch)
            })
            .collect();
        branch.pop();
        DerivationTree {
            sequent: node.sequent.clone(),
            rule: node.rule.clone(),
            premisses,
        }
    }
    go(tree, &mut Branch::new())
}
