//! Backward proof search for standard and circular proofs, the finite
//! sequent universe of a goal, and the formula corpus used for bulk runs.
//!
//! Search is depth-first. At each node axioms are tried first, then the first
//! applicable invertible rule is committed to, and only when none applies are
//! the non-invertible rules (box rules, `RT`, and the intuitionistic
//! non-invertible left and right rules) tried in turn. Premisses are
//! replaced by their set-sequents (contraction is admissible and the rules
//! accept sub-sequents of their premisses), so every branch below the root
//! moves through a finite universe.
//!
//! Standard mode prunes a branch that repeats a sequent: a proof with a
//! repeat on a branch can be shortened by replacing the lower occurrence with
//! the subproof of the upper one. Circular mode instead closes such a leaf
//! when a box rule lies between the two occurrences.
//! For propositional premisses it also closes a leaf whose premiss contains a
//! sequent further down the branch, using that sequent as the (weakened)
//! premiss.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use thiserror::Error;

use crate::calculus::{Calculus, RuleInstance};
use crate::derivation::{check_circular, check_standard, DerivationTree};
use crate::formula::Formula;
use crate::sequent::Sequent;

pub const DEFAULT_MAX_SEQUENTS: usize = 1_000_000;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    Standard,
    Circular,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub calculus: Calculus,
    pub mode: Mode,
    /// Cap on the number of sequents expanded; `None` means the default.
    pub max_sequents: Option<usize>,
    pub trace: bool,
}

impl SearchConfig {
    pub fn new(calculus: Calculus, mode: Mode) -> Self {
        SearchConfig {
            calculus,
            mode,
            max_sequents: None,
            trace: false,
        }
    }

    pub fn standard(calculus: Calculus) -> Self {
        Self::new(calculus, Mode::Standard)
    }

    pub fn circular(calculus: Calculus) -> Self {
        Self::new(calculus, Mode::Circular)
    }

    pub fn with_limit(mut self, max_sequents: usize) -> Self {
        self.max_sequents = Some(max_sequents);
        self
    }

    fn limit(&self) -> usize {
        self.max_sequents.unwrap_or(DEFAULT_MAX_SEQUENTS)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search exceeded the limit of {0} sequents")]
    ResourceLimit(usize),
    #[error("calculus {0} is single-conclusion but the goal has several succedent formulas")]
    MultipleSuccedents(String),
    #[error("circular search needs a box rule, calculus {0} has none")]
    NoBoxRule(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Proof(DerivationTree),
    NotProvable,
}

impl Outcome {
    pub fn is_proof(&self) -> bool {
        matches!(self, Outcome::Proof(_))
    }

    pub fn proof(self) -> Option<DerivationTree> {
        match self {
            Outcome::Proof(d) => Some(d),
            Outcome::NotProvable => None,
        }
    }
}

/// Searches for a proof of the desugared goal (`¬φ` as `φ → ⊥`, `⊤` as
/// `⊥ → ⊥`). The root of a returned proof is the desugared goal, and the
/// proof has been checked.
pub fn prove(cfg: &SearchConfig, goal: &Sequent) -> Result<Outcome, SearchError> {
    let calc = &cfg.calculus;
    if calc.single_conclusion && goal.succ.len() > 1 {
        return Err(SearchError::MultipleSuccedents(calc.name.clone()));
    }
    if cfg.mode == Mode::Circular && calc.box_rules().next().is_none() {
        return Err(SearchError::NoBoxRule(calc.name.clone()));
    }
    let goal = goal.desugar();
    let mut s = Searcher {
        cfg,
        history: Vec::new(),
        boxed: Vec::new(),
        index: HashMap::new(),
        expanded: 0,
        proved: HashMap::new(),
        failed: HashSet::new(),
    };
    match s.search(&goal)? {
        Res::Fail { .. } => Ok(Outcome::NotProvable),
        Res::Ok { proof, .. } => {
            let proof = Arc::unwrap_or_clone(proof);
            let verdict = match cfg.mode {
                Mode::Standard => check_standard(calc, &proof),
                Mode::Circular => check_circular(calc, &proof),
            };
            assert!(verdict.is_valid(), "search produced an invalid proof: {verdict}\n{proof}");
            Ok(Outcome::Proof(proof))
        }
    }
}

pub fn decide(cfg: &SearchConfig, goal: &Sequent) -> Result<bool, SearchError> {
    prove(cfg, goal).map(|o| o.is_proof())
}

const NONE: usize = usize::MAX;

enum Res {
    /// `refs`: lowest branch index a circular leaf of the proof points to.
    Ok { proof: Arc<DerivationTree>, refs: usize },
    /// `hit`: lowest branch index whose presence pruned part of the search.
    Fail { hit: usize },
}

struct Searcher<'a> {
    cfg: &'a SearchConfig,
    history: Vec<Sequent>,
    /// Whether the branch node at each index was concluded by a box rule.
    boxed: Vec<bool>,
    index: HashMap<Sequent, usize>,
    expanded: usize,
    proved: HashMap<Sequent, Arc<DerivationTree>>,
    failed: HashSet<Sequent>,
}

impl Searcher<'_> {
    fn search(&mut self, goal: &Sequent) -> Result<Res, SearchError> {
        if let Some(&i) = self.index.get(goal) {
            return Ok(if self.cfg.mode == Mode::Circular && self.box_since(i) {
                Res::Ok {
                    proof: Arc::new(DerivationTree::circular(goal.clone())),
                    refs: i,
                }
            } else {
                Res::Fail { hit: i }
            });
        }
        if let Some(p) = self.proved.get(goal) {
            return Ok(Res::Ok {
                proof: p.clone(),
                refs: NONE,
            });
        }
        if self.failed.contains(goal) {
            return Ok(Res::Fail { hit: NONE });
        }
        self.expanded += 1;
        if self.expanded > self.cfg.limit() {
            return Err(SearchError::ResourceLimit(self.cfg.limit()));
        }
        let calc = &self.cfg.calculus;
        let apps = calc.backward_applications(goal);
        if let Some(ax) = apps.iter().find(|a| a.premisses.is_empty()) {
            self.trace(ax);
            let proof = Arc::new(DerivationTree::axiom(goal.clone(), ax.rule));
            self.proved.insert(goal.clone(), proof.clone());
            return Ok(Res::Ok { proof, refs: NONE });
        }

        let depth = self.history.len();
        self.history.push(goal.clone());
        self.boxed.push(false);
        self.index.insert(goal.clone(), depth);
        let invertible = apps.iter().find(|a| calc.is_invertible(a.rule));
        let candidates: Vec<&RuleInstance> = match invertible {
            Some(a) => vec![a],
            None => apps.iter().collect(),
        };
        let mut hit = NONE;
        let mut found = None;
        for app in candidates {
            self.trace(app);
            match self.apply(app)? {
                Res::Ok { proof, refs } => {
                    found = Some((proof, refs));
                    break;
                }
                Res::Fail { hit: h } => hit = hit.min(h),
            }
        }
        self.history.pop();
        self.boxed.pop();
        self.index.remove(goal);

        Ok(match found {
            Some((proof, refs)) => {
                if refs >= depth {
                    self.proved.insert(goal.clone(), proof.clone());
                }
                Res::Ok { proof, refs }
            }
            None => {
                if self.cfg.mode == Mode::Standard && hit >= depth {
                    self.failed.insert(goal.clone());
                }
                Res::Fail { hit }
            }
        })
    }

    fn apply(&mut self, app: &RuleInstance) -> Result<Res, SearchError> {
        let mut children = Vec::with_capacity(app.premisses.len());
        let mut refs = NONE;
        *self.boxed.last_mut().expect("conclusion on branch") = app.rule.is_box();
        for prem in &app.premisses {
            let prem = &prem.star();
            if self.cfg.mode == Mode::Circular && !app.rule.is_box() {
                if let Some(i) = self.subsumed(prem) {
                    refs = refs.min(i);
                    children.push(DerivationTree::circular(self.history[i].clone()));
                    continue;
                }
            }
            match self.search(prem)? {
                Res::Ok { proof, refs: r } => {
                    refs = refs.min(r);
                    children.push(Arc::unwrap_or_clone(proof));
                }
                fail => return Ok(fail),
            }
        }
        Ok(Res::Ok {
            proof: Arc::new(DerivationTree::node(app.conclusion.clone(), app.rule, children)),
            refs,
        })
    }

    /// Whether a box rule was applied at branch index `i` or above it.
    fn box_since(&self, i: usize) -> bool {
        self.boxed[i..].iter().any(|b| *b)
    }

    /// A sequent on the branch contained in `prem` that a cycle through a
    /// box rule can return to; exact repeats first.
    fn subsumed(&self, prem: &Sequent) -> Option<usize> {
        if let Some(&i) = self.index.get(prem) {
            return self.box_since(i).then_some(i);
        }
        self.history
            .iter()
            .position(|s| s.is_subsequent_of(prem))
            .filter(|&i| self.box_since(i))
    }

    fn trace(&self, app: &RuleInstance) {
        if self.cfg.trace {
            eprintln!("{}\t{}\t{}", self.history.len(), app.rule, app.conclusion);
        }
    }
}

/// The sequents a search for a goal can visit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureSet {
    pub sequents: HashSet<Sequent>,
}

impl ClosureSet {
    pub fn size(&self) -> usize {
        self.sequents.len()
    }

    pub fn contains(&self, s: &Sequent) -> bool {
        self.sequents.contains(s)
    }
}

/// All sequents reachable from the desugared goal by backward rule
/// applications. Propositional steps descend in the multiset order and box
/// premisses are set-sequents over the goal's subformulas (with
/// `□(ψ → □ψ)` added for Grz), so the set is finite.
pub fn closure(goal: &Sequent, c: &Calculus) -> Result<ClosureSet, SearchError> {
    closure_with(goal, c, false, DEFAULT_MAX_SEQUENTS)
}

/// As [`closure`]; with `exhaustive`, box rules range over every subset of
/// the boxed antecedent rather than the whole of it.
pub fn closure_with(
    goal: &Sequent,
    c: &Calculus,
    exhaustive: bool,
    limit: usize,
) -> Result<ClosureSet, SearchError> {
    let goal = goal.desugar();
    let mut seen: HashSet<Sequent> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(goal.clone());
    queue.push_back(goal);
    while let Some(s) = queue.pop_front() {
        let mut next: Vec<Sequent> = Vec::new();
        for app in c.backward_applications(&s) {
            if exhaustive && app.rule.is_box() {
                let (_, principal) = app.inst.principal.as_ref().expect("box principal");
                let phi = principal.unbox().expect("boxed principal");
                let bodies: Vec<&Formula> = app.inst.gamma.distinct().collect();
                for mask in 0u64..(1u64 << bodies.len().min(20)) {
                    let gamma = bodies
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, b)| (*b).clone())
                        .collect();
                    next.push(app.rule.box_premiss(&gamma, phi).star());
                }
            } else {
                next.extend(app.premisses.iter().map(Sequent::star));
            }
        }
        for p in next {
            if !seen.contains(&p) {
                if seen.len() >= limit {
                    return Err(SearchError::ResourceLimit(limit));
                }
                seen.insert(p.clone());
                queue.push_back(p);
            }
        }
    }
    Ok(ClosureSet { sequents: seen })
}

/// Atom names used by the corpus: p, q, r, s, then p4, p5, ...
pub fn atom_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| match i {
            0..=3 => ["p", "q", "r", "s"][i].to_string(),
            _ => format!("p{i}"),
        })
        .collect()
}

/// All formulas with at most `max_size` nodes over the first `atoms` atoms,
/// ordered by size and then by construction. Leaves are atoms, ⊤ and ⊥.
pub fn formulas(atoms: usize, max_size: usize) -> Vec<Formula> {
    let mut by_size: Vec<Vec<Formula>> = vec![Vec::new(); max_size + 1];
    if max_size == 0 {
        return Vec::new();
    }
    by_size[1] = atom_names(atoms)
        .iter()
        .map(|a| Formula::atom(a))
        .chain([Formula::Top, Formula::Bot])
        .collect();
    for n in 2..=max_size {
        let mut out = Vec::new();
        for f in &by_size[n - 1] {
            out.push(Formula::neg(f.clone()));
            out.push(Formula::boxed(f.clone()));
        }
        for left in 1..n - 1 {
            let right = n - 1 - left;
            for a in &by_size[left] {
                for b in &by_size[right] {
                    out.push(Formula::and(a.clone(), b.clone()));
                    out.push(Formula::or(a.clone(), b.clone()));
                    out.push(Formula::imp(a.clone(), b.clone()));
                }
            }
        }
        by_size[n] = out;
    }
    by_size.into_iter().flatten().collect()
}

/// The goals `⇒ φ` for every corpus formula φ.
pub fn corpus(atoms: usize, max_size: usize) -> impl Iterator<Item = Sequent> {
    formulas(atoms, max_size)
        .into_iter()
        .map(|f| Sequent::new(Default::default(), [f].into_iter().collect()))
}
