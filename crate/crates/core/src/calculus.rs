//! Built-in rule schemas and the calculi assembled from them.
//!
//! Rules are matched literally with one relaxation: a premiss of a
//! propositional rule (and of `RT`) may be any sub-sequent of the premiss the
//! schema prescribes. This absorbs depth-preserving weakening into the rules
//! and is what lets a premiss coincide with a sequent further down a branch.
//! Box-rule premisses are never weakened; they must equal the prescribed
//! premiss or its set-sequent.
//!
//! `RT` prescribes the premiss `Γ, □φ, φ ⇒ Δ`. Its usual form `Γ, φ ⇒ Δ` is a
//! sub-sequent and hence an instance; keeping `□φ` is what makes the rule
//! complete without a contraction rule.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::formula::Formula;
use crate::sequent::{Multiset, Sequent, Side};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalculusError {
    #[error("rule `{rule}` is not part of calculus {calculus}")]
    UnknownRule { rule: String, calculus: String },
    #[error("unknown calculus `{0}`")]
    UnknownCalculus(String),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum RuleKind {
    Ax,
    LBot,
    LAnd,
    RAnd,
    LOr,
    ROr,
    LImp,
    RImp,
    ROr1,
    ROr2,
    L0Imp,
    LAndImp,
    LOrImp,
    LImpImp,
    LBoxImp,
    T,
    K4,
    Gl,
    Grz,
}

impl RuleKind {
    pub const ALL: [RuleKind; 19] = [
        RuleKind::Ax,
        RuleKind::LBot,
        RuleKind::LAnd,
        RuleKind::RAnd,
        RuleKind::LOr,
        RuleKind::ROr,
        RuleKind::LImp,
        RuleKind::RImp,
        RuleKind::ROr1,
        RuleKind::ROr2,
        RuleKind::L0Imp,
        RuleKind::LAndImp,
        RuleKind::LOrImp,
        RuleKind::LImpImp,
        RuleKind::LBoxImp,
        RuleKind::T,
        RuleKind::K4,
        RuleKind::Gl,
        RuleKind::Grz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleKind::Ax => "Ax",
            RuleKind::LBot => "Lbot",
            RuleKind::LAnd => "Land",
            RuleKind::RAnd => "Rand",
            RuleKind::LOr => "Lor",
            RuleKind::ROr => "Ror",
            RuleKind::LImp => "Limp",
            RuleKind::RImp => "Rimp",
            RuleKind::ROr1 => "Ror1",
            RuleKind::ROr2 => "Ror2",
            RuleKind::L0Imp => "L0imp",
            RuleKind::LAndImp => "Landimp",
            RuleKind::LOrImp => "Lorimp",
            RuleKind::LImpImp => "Limpimp",
            RuleKind::LBoxImp => "Lboximp",
            RuleKind::T => "RT",
            RuleKind::K4 => "RK4",
            RuleKind::Gl => "RGL",
            RuleKind::Grz => "RGrz",
        }
    }

    pub fn from_name(name: &str) -> Option<RuleKind> {
        RuleKind::ALL.into_iter().find(|k| k.name() == name)
    }

    pub fn arity(self) -> usize {
        match self {
            RuleKind::Ax | RuleKind::LBot => 0,
            RuleKind::RAnd | RuleKind::LOr | RuleKind::LImp => 2,
            RuleKind::LImpImp | RuleKind::LBoxImp => 2,
            _ => 1,
        }
    }

    pub fn is_axiom(self) -> bool {
        self.arity() == 0
    }

    pub fn is_box(self) -> bool {
        matches!(self, RuleKind::K4 | RuleKind::Gl | RuleKind::Grz)
    }

    fn principal_side(self) -> Side {
        match self {
            RuleKind::RAnd
            | RuleKind::ROr
            | RuleKind::RImp
            | RuleKind::ROr1
            | RuleKind::ROr2
            | RuleKind::K4
            | RuleKind::Gl
            | RuleKind::Grz => Side::Succ,
            _ => Side::Ante,
        }
    }

    fn invertible(self, base: Base) -> bool {
        match self {
            RuleKind::LAnd | RuleKind::RAnd | RuleKind::LOr | RuleKind::RImp => true,
            RuleKind::ROr | RuleKind::LImp => base == Base::Classical,
            RuleKind::L0Imp | RuleKind::LAndImp | RuleKind::LOrImp => true,
            _ => false,
        }
    }

    /// Whether `f` has the shape this rule decomposes (for non-box rules).
    fn fits(self, f: &Formula) -> bool {
        use Formula as F;
        match (self, f) {
            (RuleKind::Ax, F::Atom(_)) | (RuleKind::LBot, F::Bot) => true,
            (RuleKind::LAnd | RuleKind::RAnd, F::And(..)) => true,
            (RuleKind::LOr | RuleKind::ROr | RuleKind::ROr1 | RuleKind::ROr2, F::Or(..)) => true,
            (RuleKind::LImp | RuleKind::RImp, F::Imp(..)) => true,
            (RuleKind::L0Imp, F::Imp(a, _)) => a.is_atom(),
            (RuleKind::LAndImp, F::Imp(a, _)) => matches!(**a, F::And(..)),
            (RuleKind::LOrImp, F::Imp(a, _)) => matches!(**a, F::Or(..)),
            (RuleKind::LImpImp, F::Imp(a, _)) => matches!(**a, F::Imp(..)),
            (RuleKind::LBoxImp, F::Imp(a, _)) => matches!(**a, F::Box(..)),
            (RuleKind::T, F::Box(_)) => true,
            _ => false,
        }
    }

    /// Premisses prescribed for `conclusion` with principal formula `pf`,
    /// for rules other than box rules.
    pub fn literal_premisses(self, conclusion: &Sequent, pf: &Formula) -> Option<Vec<Sequent>> {
        use Formula as F;
        let side = self.principal_side();
        if !self.fits(pf) || !conclusion.side(side).contains(pf) {
            return None;
        }
        if self == RuleKind::Ax {
            return conclusion.succ.contains(pf).then(Vec::new);
        }
        if self == RuleKind::LBot {
            return Some(Vec::new());
        }
        let mut ctx = conclusion.clone();
        ctx.side_mut(side).remove_one(pf);
        let with = |ante: &[&F], succ: &[&F]| {
            let mut s = ctx.clone();
            for f in ante {
                s.ante.insert((*f).clone());
            }
            for f in succ {
                s.succ.insert((*f).clone());
            }
            s
        };
        let replace_succ = |ante: &[&F], succ: &F| {
            let mut s = Sequent::new(ctx.ante.clone(), Multiset::new());
            for f in ante {
                s.ante.insert((*f).clone());
            }
            s.succ.insert(succ.clone());
            s
        };
        let prem = match (self, pf) {
            (RuleKind::LAnd, F::And(a, b)) => vec![with(&[a, b], &[])],
            (RuleKind::RAnd, F::And(a, b)) => vec![with(&[], &[a]), with(&[], &[b])],
            (RuleKind::LOr, F::Or(a, b)) => vec![with(&[a], &[]), with(&[b], &[])],
            (RuleKind::ROr, F::Or(a, b)) => vec![with(&[], &[a, b])],
            (RuleKind::ROr1, F::Or(a, _)) => vec![with(&[], &[a])],
            (RuleKind::ROr2, F::Or(_, b)) => vec![with(&[], &[b])],
            (RuleKind::LImp, F::Imp(a, b)) => vec![with(&[], &[a]), with(&[b], &[])],
            (RuleKind::RImp, F::Imp(a, b)) => vec![with(&[a], &[b])],
            (RuleKind::L0Imp, F::Imp(a, b)) => {
                if !ctx.ante.contains(a) {
                    return None;
                }
                vec![with(&[b], &[])]
            }
            (RuleKind::LAndImp, F::Imp(a, b)) => {
                let F::And(c, d) = &**a else { return None };
                let nested = F::imp((**c).clone(), F::imp((**d).clone(), (**b).clone()));
                vec![with(&[&nested], &[])]
            }
            (RuleKind::LOrImp, F::Imp(a, b)) => {
                let F::Or(c, d) = &**a else { return None };
                let left = F::imp((**c).clone(), (**b).clone());
                let right = F::imp((**d).clone(), (**b).clone());
                vec![with(&[&left, &right], &[])]
            }
            (RuleKind::LImpImp, F::Imp(a, b)) => {
                let F::Imp(_, d) = &**a else { return None };
                let db = F::imp((**d).clone(), (**b).clone());
                vec![replace_succ(&[&db], a), with(&[b], &[])]
            }
            (RuleKind::LBoxImp, F::Imp(a, b)) => vec![replace_succ(&[], a), with(&[b], &[])],
            (RuleKind::T, F::Box(a)) => vec![with(&[pf, a], &[])],
            _ => return None,
        };
        Some(prem)
    }

    /// The premiss of a box rule for boxed context Γ and principal □φ.
    pub fn box_premiss(self, gamma: &Multiset, phi: &Formula) -> Sequent {
        let mut ante;
        match self {
            RuleKind::K4 => ante = gamma.boxdot(),
            RuleKind::Gl => {
                ante = gamma.boxdot();
                ante.insert(Formula::boxed(phi.clone()));
            }
            RuleKind::Grz => {
                ante = gamma.boxed();
                ante.insert(grz_formula(phi));
            }
            _ => panic!("{} is not a box rule", self.name()),
        }
        Sequent::new(ante, Multiset::from([phi.clone()]))
    }
}

/// □(φ → □φ), the extra antecedent formula of the Grz box rule.
pub fn grz_formula(phi: &Formula) -> Formula {
    Formula::boxed(Formula::imp(phi.clone(), Formula::boxed(phi.clone())))
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Base {
    /// G3p.
    Classical,
    /// Dyckhoff's terminating single-succedent calculus.
    Intuitionistic,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RuleSchema {
    pub kind: RuleKind,
    pub name: &'static str,
    pub arity: usize,
    pub is_box: bool,
    pub is_slim: bool,
    pub is_ordered: bool,
    pub single_conclusion_ok: bool,
}

impl RuleSchema {
    fn new(kind: RuleKind) -> Self {
        RuleSchema {
            kind,
            name: kind.name(),
            arity: kind.arity(),
            is_box: kind.is_box(),
            is_slim: kind.is_box(),
            is_ordered: !kind.is_box(),
            single_conclusion_ok: !matches!(kind, RuleKind::ROr),
        }
    }
}

/// What a match fixed: the principal formula and, for box rules, the boxed
/// context Γ and whether the premiss was given as a set-sequent.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Instantiation {
    pub principal: Option<(Side, Formula)>,
    pub gamma: Multiset,
    pub starred: bool,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RuleInstance {
    pub rule: RuleKind,
    pub conclusion: Sequent,
    pub premisses: Vec<Sequent>,
    pub inst: Instantiation,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Calculus {
    pub name: String,
    pub base: Base,
    pub rules: Vec<RuleSchema>,
    pub single_conclusion: bool,
}

const G3P: [RuleKind; 8] = [
    RuleKind::Ax,
    RuleKind::LBot,
    RuleKind::LAnd,
    RuleKind::RAnd,
    RuleKind::LOr,
    RuleKind::ROr,
    RuleKind::LImp,
    RuleKind::RImp,
];

const DYCKHOFF: [RuleKind; 13] = [
    RuleKind::Ax,
    RuleKind::LBot,
    RuleKind::LAnd,
    RuleKind::RAnd,
    RuleKind::LOr,
    RuleKind::ROr1,
    RuleKind::ROr2,
    RuleKind::RImp,
    RuleKind::L0Imp,
    RuleKind::LAndImp,
    RuleKind::LOrImp,
    RuleKind::LImpImp,
    RuleKind::LBoxImp,
];

impl Calculus {
    /// G3p or Dyckhoff's calculus extended by `extra`.
    pub fn build(name: &str, base: Base, extra: &[RuleKind]) -> Calculus {
        let propositional: &[RuleKind] = match base {
            Base::Classical => &G3P,
            Base::Intuitionistic => &DYCKHOFF,
        };
        Calculus {
            name: name.to_string(),
            base,
            rules: propositional
                .iter()
                .chain(extra)
                .map(|k| RuleSchema::new(*k))
                .collect(),
            single_conclusion: base == Base::Intuitionistic,
        }
    }

    pub fn g3p() -> Calculus {
        Self::build("g3p", Base::Classical, &[])
    }

    pub fn g3k4() -> Calculus {
        Self::build("k4", Base::Classical, &[RuleKind::K4])
    }

    pub fn g3gl() -> Calculus {
        Self::build("gl", Base::Classical, &[RuleKind::Gl])
    }

    pub fn g3s4() -> Calculus {
        Self::build("s4", Base::Classical, &[RuleKind::K4, RuleKind::T])
    }

    /// G3p + R_Grz + R_T.
    pub fn g3grz() -> Calculus {
        Self::build("grz", Base::Classical, &[RuleKind::Grz, RuleKind::T])
    }

    pub fn ig3k4() -> Calculus {
        Self::build("ik4", Base::Intuitionistic, &[RuleKind::K4])
    }

    pub fn ig3gl() -> Calculus {
        Self::build("igl", Base::Intuitionistic, &[RuleKind::Gl])
    }

    pub fn by_name(name: &str) -> Result<Calculus, CalculusError> {
        match name {
            "g3p" => Ok(Self::g3p()),
            "k4" => Ok(Self::g3k4()),
            "gl" => Ok(Self::g3gl()),
            "s4" => Ok(Self::g3s4()),
            "grz" => Ok(Self::g3grz()),
            "ik4" => Ok(Self::ig3k4()),
            "igl" => Ok(Self::ig3gl()),
            other => Err(CalculusError::UnknownCalculus(other.to_string())),
        }
    }

    pub fn has_rule(&self, kind: RuleKind) -> bool {
        self.rules.iter().any(|r| r.kind == kind)
    }

    pub fn schema(&self, name: &str) -> Option<&RuleSchema> {
        self.rules.iter().find(|r| r.name == name)
    }

    pub fn box_rules(&self) -> impl Iterator<Item = RuleKind> + '_ {
        self.rules.iter().filter(|r| r.is_box).map(|r| r.kind)
    }

    pub fn is_invertible(&self, kind: RuleKind) -> bool {
        kind.invertible(self.base)
    }

    fn single_ok(&self, s: &Sequent) -> bool {
        !self.single_conclusion || s.succ.len() <= 1
    }

    /// Checks whether `premisses / conclusion` is an instance of the named
    /// rule and returns what the match fixed.
    pub fn match_instance(
        &self,
        rule: &str,
        conclusion: &Sequent,
        premisses: &[Sequent],
    ) -> Result<Option<Instantiation>, CalculusError> {
        let schema = self.schema(rule).ok_or_else(|| CalculusError::UnknownRule {
            rule: rule.to_string(),
            calculus: self.name.clone(),
        })?;
        Ok(self.match_kind(schema.kind, conclusion, premisses))
    }

    pub(crate) fn match_kind(
        &self,
        kind: RuleKind,
        conclusion: &Sequent,
        premisses: &[Sequent],
    ) -> Option<Instantiation> {
        if premisses.len() != kind.arity()
            || !self.single_ok(conclusion)
            || !premisses.iter().all(|p| self.single_ok(p))
        {
            return None;
        }
        if kind.is_box() {
            return self.match_box(kind, conclusion, &premisses[0]);
        }
        let side = kind.principal_side();
        for pf in conclusion.side(side).distinct() {
            let Some(lit) = kind.literal_premisses(conclusion, pf) else {
                continue;
            };
            if premisses.iter().zip(&lit).all(|(p, l)| p.is_subsequent_of(l)) {
                return Some(Instantiation {
                    principal: Some((side, pf.clone())),
                    gamma: Multiset::new(),
                    starred: false,
                });
            }
        }
        None
    }

    fn box_principals<'a>(&self, conclusion: &'a Sequent) -> Vec<&'a Formula> {
        if self.single_conclusion {
            match conclusion.succ.distinct().next() {
                Some(f @ Formula::Box(_)) if conclusion.succ.len() == 1 => vec![f],
                _ => vec![],
            }
        } else {
            conclusion
                .succ
                .distinct()
                .filter(|f| matches!(f, Formula::Box(_)))
                .collect()
        }
    }

    fn match_box(&self, kind: RuleKind, conclusion: &Sequent, premiss: &Sequent) -> Option<Instantiation> {
        let bodies = conclusion.ante.box_bodies();
        for boxed in self.box_principals(conclusion) {
            let phi = boxed.unbox().expect("boxed principal");
            if premiss.succ != Multiset::from([phi.clone()]) {
                continue;
            }
            // Each body of Γ leaves a trace in the premiss antecedent.
            let choices: Vec<(&Formula, usize)> = bodies
                .entries()
                .map(|(b, n)| {
                    let trace = match kind {
                        RuleKind::Grz => Formula::boxed(b.clone()),
                        _ => b.clone(),
                    };
                    (b, if premiss.ante.contains(&trace) { n } else { 0 })
                })
                .collect();
            let mut counters = vec![0usize; choices.len()];
            loop {
                let mut gamma = Multiset::new();
                for ((b, _), c) in choices.iter().zip(&counters) {
                    gamma.insert_n((*b).clone(), *c);
                }
                let lit = kind.box_premiss(&gamma, phi);
                let starred = if *premiss == lit {
                    Some(false)
                } else if *premiss == lit.star() {
                    Some(true)
                } else {
                    None
                };
                if let Some(starred) = starred {
                    return Some(Instantiation {
                        principal: Some((Side::Succ, boxed.clone())),
                        gamma,
                        starred,
                    });
                }
                // odometer over the multiplicities
                let mut i = 0;
                loop {
                    if i == counters.len() {
                        break;
                    }
                    if counters[i] < choices[i].1 {
                        counters[i] += 1;
                        break;
                    }
                    counters[i] = 0;
                    i += 1;
                }
                if i == counters.len() {
                    break;
                }
            }
        }
        None
    }

    /// All instances whose conclusion is `goal`, in the calculus' rule order.
    ///
    /// Box rules take Γ to be the set of all boxed antecedent bodies and
    /// yield the set-sequent of the prescribed premiss.
    pub fn backward_applications(&self, goal: &Sequent) -> Vec<RuleInstance> {
        let mut out = Vec::new();
        if !self.single_ok(goal) {
            return out;
        }
        for schema in &self.rules {
            let kind = schema.kind;
            if kind.is_box() {
                let gamma: Multiset = goal.ante.box_bodies().distinct().cloned().collect();
                for boxed in self.box_principals(goal) {
                    let phi = boxed.unbox().expect("boxed principal");
                    let lit = kind.box_premiss(&gamma, phi);
                    let star = lit.star();
                    out.push(RuleInstance {
                        rule: kind,
                        conclusion: goal.clone(),
                        inst: Instantiation {
                            principal: Some((Side::Succ, boxed.clone())),
                            gamma: gamma.clone(),
                            starred: star != lit,
                        },
                        premisses: vec![star],
                    });
                }
                continue;
            }
            let side = kind.principal_side();
            for pf in goal.side(side).distinct() {
                // RT adds φ and keeps □φ; with φ present it would only contract
                if kind == RuleKind::T && pf.unbox().is_some_and(|a| goal.ante.contains(a)) {
                    continue;
                }
                if let Some(premisses) = kind.literal_premisses(goal, pf) {
                    if !premisses.iter().all(|p| self.single_ok(p)) {
                        continue;
                    }
                    out.push(RuleInstance {
                        rule: kind,
                        conclusion: goal.clone(),
                        premisses,
                        inst: Instantiation {
                            principal: Some((side, pf.clone())),
                            gamma: Multiset::new(),
                            starred: false,
                        },
                    });
                }
            }
        }
        out
    }

    /// The three box-rule conditions, checked for one instance. The
    /// contraction condition is tested for every boxed formula that the
    /// instance's Γ holds twice.
    pub fn is_box_instance(&self, instance: &RuleInstance) -> bool {
        if !instance.rule.is_box() {
            return false;
        }
        let Some(inst) = self.match_kind(instance.rule, &instance.conclusion, &instance.premisses)
        else {
            return false;
        };
        let Some((_, principal)) = &inst.principal else {
            return false;
        };
        let phi = principal.unbox().expect("boxed principal");
        let mut extra = BTreeSet::new();
        if instance.rule == RuleKind::Grz {
            let g = grz_formula(phi);
            g.collect_subformulas(&mut extra);
        }
        let boxed_part = Sequent::new(inst.gamma.boxed(), Multiset::from([principal.clone()]));
        if !has_box_shape(&boxed_part, &instance.premisses, &extra) {
            return false;
        }
        for (body, n) in inst.gamma.entries() {
            if n < 2 {
                continue;
            }
            let mut concl = instance.conclusion.clone();
            concl.ante.remove_one(&Formula::boxed(body.clone()));
            let drops: [&[Formula]; 4] = [
                &[],
                std::slice::from_ref(body),
                &[Formula::boxed(body.clone())],
                &[body.clone(), Formula::boxed(body.clone())],
            ];
            let ok = drops.iter().any(|drop| {
                let prems: Vec<Sequent> = instance
                    .premisses
                    .iter()
                    .map(|p| {
                        let mut p = p.clone();
                        for d in drop.iter() {
                            if p.ante.count(d) >= 2 {
                                p.ante.remove_one(d);
                            }
                        }
                        p
                    })
                    .collect();
                self.match_kind(instance.rule, &concl, &prems).is_some()
            });
            if !ok {
                return false;
            }
        }
        true
    }

    /// Starring every premiss again yields an instance.
    pub fn is_slim_instance(&self, instance: &RuleInstance) -> bool {
        let starred: Vec<Sequent> = instance.premisses.iter().map(Sequent::star).collect();
        self.match_kind(instance.rule, &instance.conclusion, &starred).is_some()
    }

    /// All premisses are ≺-below the conclusion and built from its
    /// subformulas.
    pub fn is_ordered_instance(&self, instance: &RuleInstance) -> bool {
        let subs = instance.conclusion.subformulas();
        instance.premisses.iter().all(|p| {
            p.dm_lt(&instance.conclusion)
                && p.ante.distinct().chain(p.succ.distinct()).all(|f| subs.contains(f))
        })
    }
}

/// First two box-rule conditions for a boxed part `□S` (given already boxed)
/// and its premisses: every premiss formula is a subformula of a formula of
/// `□S`, or lies in `extra`.
pub fn has_box_shape(boxed_part: &Sequent, premisses: &[Sequent], extra: &BTreeSet<Formula>) -> bool {
    let mut allowed = extra.clone();
    for f in boxed_part.ante.distinct().chain(boxed_part.succ.distinct()) {
        if f.unbox().is_none() {
            return false;
        }
        f.collect_subformulas(&mut allowed);
    }
    premisses.iter().all(|p| {
        p.ante
            .distinct()
            .chain(p.succ.distinct())
            .all(|f| allowed.contains(f))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> Sequent {
        Sequent::parse(s).unwrap()
    }

    #[test]
    fn rule_counts() {
        assert_eq!(Calculus::g3p().rules.len(), 8);
        assert_eq!(Calculus::g3k4().rules.len(), 9);
        assert!(Calculus::g3k4().has_rule(RuleKind::K4));
        assert_eq!(Calculus::g3s4().rules.len(), 10);
        assert!(Calculus::ig3gl().single_conclusion);
    }

    #[test]
    fn t_rule_shape() {
        let s4 = Calculus::g3s4();
        assert!(s4
            .match_instance("RT", &seq("q, []p => r"), &[seq("q, p => r")])
            .unwrap()
            .is_some());
        assert!(s4
            .match_instance("RT", &seq("q, p => r"), &[seq("q, p => r")])
            .unwrap()
            .is_none());
    }

    #[test]
    fn gl_premiss_shape() {
        let gl = Calculus::g3gl();
        let concl = seq("r, []q => []p, s");
        let prem = seq("q, []q, []p => p");
        assert!(gl.match_instance("RGL", &concl, &[prem]).unwrap().is_some());
        assert!(gl
            .match_instance("RGL", &concl, &[seq("q, []q => p")])
            .unwrap()
            .is_none());
    }

    #[test]
    fn backward_examples() {
        let gl = Calculus::g3gl();
        let apps = gl.backward_applications(&seq("[]([]p -> p) => []p"));
        assert!(apps.iter().any(|a| a.rule == RuleKind::Gl
            && a.premisses == vec![seq("[]p -> p, []([]p -> p), []p => p")]));
        let g3p = Calculus::g3p();
        let apps = g3p.backward_applications(&seq("p => p"));
        assert!(apps.iter().any(|a| a.rule == RuleKind::Ax && a.premisses.is_empty()));
        let apps = g3p.backward_applications(&seq("p & q =>"));
        assert!(apps
            .iter()
            .any(|a| a.rule == RuleKind::LAnd && a.premisses == vec![seq("p, q =>")]));
    }

    #[test]
    fn match_examples() {
        let k4 = Calculus::g3k4();
        assert!(k4
            .match_instance("RK4", &seq("[]p => [][]p"), &[seq("p, []p => []p")])
            .unwrap()
            .is_some());
        assert!(k4
            .match_instance("Ax", &seq("p & q => p & q"), &[])
            .unwrap()
            .is_none());
        assert!(k4
            .match_instance("Lbot", &seq("q, F => r"), &[])
            .unwrap()
            .is_some());
        assert!(matches!(
            k4.match_instance("RGL", &seq("p => p"), &[]),
            Err(CalculusError::UnknownRule { .. })
        ));
    }

    #[test]
    fn weakened_premisses_are_accepted() {
        let g3p = Calculus::g3p();
        // L→ with the left premiss missing context formula q from Δ
        assert!(g3p
            .match_instance("Limp", &seq("p -> r => q"), &[seq("=> p"), seq("r => q")])
            .unwrap()
            .is_some());
        // but never a formula that is not in the prescribed premiss
        assert!(g3p
            .match_instance("Limp", &seq("p -> r => q"), &[seq("=> p, s"), seq("r => q")])
            .unwrap()
            .is_none());
    }

    #[test]
    fn backward_instances_match() {
        for calc in [Calculus::g3gl(), Calculus::g3s4(), Calculus::g3grz(), Calculus::ig3k4()] {
            for s in ["[]([]p -> p) => []p", "[]p, p -> q, [](q & r) => []r | p", "[][]p, []p => [][]p"] {
                let goal = seq(s);
                for app in calc.backward_applications(&goal) {
                    assert!(
                        calc.match_instance(app.rule.name(), &goal, &app.premisses)
                            .unwrap()
                            .is_some(),
                        "{} {} {:?}",
                        calc.name,
                        app.rule,
                        app.premisses
                    );
                    if app.rule.is_box() {
                        assert!(app.premisses.iter().all(Sequent::is_set_sequent));
                    }
                }
            }
        }
    }

    #[test]
    fn classification_examples() {
        let gl = Calculus::g3gl();
        for goal in ["[]([]p -> p) => []p", "[]q, []q, [][]q => []p, []r"] {
            for app in gl.backward_applications(&seq(goal)) {
                if app.rule == RuleKind::Gl {
                    assert!(gl.is_slim_instance(&app));
                    assert!(gl.is_box_instance(&app));
                }
            }
        }
        let s4 = Calculus::g3s4();
        let mut rt = s4
            .backward_applications(&seq("[](p & q), []r => p"))
            .into_iter()
            .find(|a| a.rule == RuleKind::T)
            .unwrap();
        assert!(!s4.is_ordered_instance(&rt));
        // the form that drops □φ is an ordered instance
        let (_, principal) = rt.inst.principal.clone().unwrap();
        rt.premisses[0].ante.remove_one(&principal);
        assert!(s4.is_ordered_instance(&rt));
        assert!(s4.match_kind(RuleKind::T, &rt.conclusion, &rt.premisses).is_some());
        // Π,□p ⇒ Δ over p ⇒ has box shape; Π,□p ⇒ Δ over Π,p ⇒ Δ does not
        let boxed = seq("[]p =>");
        assert!(has_box_shape(&boxed, &[seq("p =>")], &BTreeSet::new()));
        assert!(!has_box_shape(&boxed, &[seq("q, p => r")], &BTreeSet::new()));
    }

    #[test]
    fn contraction_condition_on_duplicated_gamma() {
        let k4 = Calculus::g3k4();
        let inst = RuleInstance {
            rule: RuleKind::K4,
            conclusion: seq("[]q, []q => []p"),
            premisses: vec![seq("q, q, []q, []q => p")],
            inst: Instantiation {
                principal: None,
                gamma: Multiset::new(),
                starred: false,
            },
        };
        assert!(k4.is_box_instance(&inst));
    }
}
