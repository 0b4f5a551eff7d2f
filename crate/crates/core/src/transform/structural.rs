//! Depth-preserving contraction and inversion, and set-proof normalization.

use super::{reroot, require_standard, Result, TransformError};
use crate::calculus::{Base, Calculus, RuleKind};
use crate::derivation::{check_standard, DerivationTree, NodeRule};
use crate::formula::Formula;
use crate::sequent::{Sequent, Side};

/// The invertible propositional rules, by principal formula.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Shape {
    LeftAnd,
    LeftOr,
    LeftImp,
    RightAnd,
    RightOr,
    RightImp,
}

impl Shape {
    pub const ALL: [Shape; 6] = [
        Shape::LeftAnd,
        Shape::LeftOr,
        Shape::LeftImp,
        Shape::RightAnd,
        Shape::RightOr,
        Shape::RightImp,
    ];

    pub fn rule(self) -> RuleKind {
        match self {
            Shape::LeftAnd => RuleKind::LAnd,
            Shape::LeftOr => RuleKind::LOr,
            Shape::LeftImp => RuleKind::LImp,
            Shape::RightAnd => RuleKind::RAnd,
            Shape::RightOr => RuleKind::ROr,
            Shape::RightImp => RuleKind::RImp,
        }
    }

    pub fn side(self) -> Side {
        match self {
            Shape::LeftAnd | Shape::LeftOr | Shape::LeftImp => Side::Ante,
            _ => Side::Succ,
        }
    }

    /// The shape that undoes `rule`, if it is one of the six.
    pub fn of_rule(rule: RuleKind) -> Option<Shape> {
        Shape::ALL.into_iter().find(|s| s.rule() == rule)
    }

    /// The shape for a formula on a side, if it is compound and not boxed.
    pub fn of_formula(side: Side, f: &Formula) -> Option<Shape> {
        let shape = match (side, f) {
            (Side::Ante, Formula::And(..)) => Shape::LeftAnd,
            (Side::Ante, Formula::Or(..)) => Shape::LeftOr,
            (Side::Ante, Formula::Imp(..)) => Shape::LeftImp,
            (Side::Succ, Formula::And(..)) => Shape::RightAnd,
            (Side::Succ, Formula::Or(..)) => Shape::RightOr,
            (Side::Succ, Formula::Imp(..)) => Shape::RightImp,
            _ => return None,
        };
        Some(shape)
    }
}

fn classical(c: &Calculus) -> Result<()> {
    match c.base {
        Base::Classical => Ok(()),
        Base::Intuitionistic => Err(TransformError::Unsupported(format!(
            "contraction and inversion are implemented for classical calculi, not {}",
            c.name
        ))),
    }
}

fn verified(c: &Calculus, input: &DerivationTree, out: DerivationTree) -> Result<DerivationTree> {
    let v = check_standard(c, &out);
    assert!(v.is_valid(), "transformation produced an invalid proof: {v}\n{out}");
    assert!(out.depth() <= input.depth(), "transformation increased depth");
    Ok(out)
}

/// Proofs of the premisses of the rule for `formula` (1 or 2 of them), no
/// deeper than `d`.
pub fn invert(
    c: &Calculus,
    d: &DerivationTree,
    shape: Shape,
    formula: &Formula,
) -> Result<Vec<DerivationTree>> {
    classical(c)?;
    require_standard(c, d)?;
    if Shape::of_formula(shape.side(), formula) != Some(shape)
        || !d.sequent.side(shape.side()).contains(formula)
    {
        return Err(TransformError::ShapeMismatch(format!(
            "{:?} on {} in {}",
            shape, formula, d.sequent
        )));
    }
    let out = inv(c, d, shape.rule(), formula)?;
    out.into_iter().map(|p| verified(c, d, p)).collect()
}

fn inv(c: &Calculus, d: &DerivationTree, kind: RuleKind, pf: &Formula) -> Result<Vec<DerivationTree>> {
    let targets = kind
        .literal_premisses(&d.sequent, pf)
        .ok_or_else(|| TransformError::ShapeMismatch(format!("{pf} in {}", d.sequent)))?;
    let rk = node_kind(d)?;
    if rk.is_axiom() {
        return Ok(targets.into_iter().map(|t| DerivationTree::axiom(t, rk)).collect());
    }
    if rk.is_box() {
        return Ok(targets
            .into_iter()
            .map(|t| DerivationTree::node(t, rk, d.premisses.clone()))
            .collect());
    }
    let inst = c
        .match_kind(rk, &d.sequent, &d.premiss_sequents())
        .ok_or_else(|| TransformError::InvalidInput(format!("{} is not an instance", d.sequent)))?;
    if rk == kind && inst.principal.as_ref().is_some_and(|(_, f)| f == pf) {
        return Ok(d
            .premisses
            .iter()
            .zip(targets)
            .map(|(p, t)| reroot(p, t))
            .collect());
    }
    let side = kind_side(kind);
    let mut inverted: Vec<Option<Vec<DerivationTree>>> = Vec::new();
    for p in &d.premisses {
        inverted.push(if p.sequent.side(side).contains(pf) {
            Some(inv(c, p, kind, pf)?)
        } else {
            None
        });
    }
    Ok(targets
        .into_iter()
        .enumerate()
        .map(|(j, t)| {
            let premisses = d
                .premisses
                .iter()
                .zip(&inverted)
                .map(|(p, i)| match i {
                    Some(v) => v[j].clone(),
                    None => p.clone(),
                })
                .collect();
            DerivationTree::node(t, rk, premisses)
        })
        .collect())
}

fn kind_side(kind: RuleKind) -> Side {
    match kind {
        RuleKind::RAnd | RuleKind::ROr | RuleKind::RImp => Side::Succ,
        _ => Side::Ante,
    }
}

fn node_kind(d: &DerivationTree) -> Result<RuleKind> {
    match &d.rule {
        NodeRule::Rule(name) => RuleKind::from_name(name)
            .ok_or_else(|| TransformError::InvalidInput(format!("unknown rule {name}"))),
        other => Err(TransformError::Unsupported(format!(
            "{} leaves in a standard proof",
            other.name()
        ))),
    }
}

/// A proof of `S` from a proof of `S · (x on side)` where `S` still contains
/// `x`; no deeper than the input.
pub fn contract_one(c: &Calculus, d: &DerivationTree, side: Side, x: &Formula) -> Result<DerivationTree> {
    classical(c)?;
    require_standard(c, d)?;
    if d.sequent.side(side).count(x) < 2 {
        return Err(TransformError::ShapeMismatch(format!(
            "{x} does not occur twice in {}",
            d.sequent
        )));
    }
    let out = co(c, d, side, x)?;
    verified(c, d, out)
}

/// A proof of `S′ · S` from a proof of `S′ · S′ · S`.
pub fn contract(c: &Calculus, d: &DerivationTree, dup: &Sequent) -> Result<DerivationTree> {
    let mut target = d.sequent.clone();
    for f in dup.ante.iter() {
        target.ante.remove_one(f);
    }
    for f in dup.succ.iter() {
        target.succ.remove_one(f);
    }
    if !dup.is_subsequent_of(&target) {
        return Err(TransformError::ShapeMismatch(format!(
            "{} is not of the form S' . S' . S for S' = {dup}",
            d.sequent
        )));
    }
    contract_to(c, d, &target)
}

/// Contracts duplicated formulas until the endsequent is `target`, which
/// must contain every formula of the endsequent.
pub fn contract_to(c: &Calculus, d: &DerivationTree, target: &Sequent) -> Result<DerivationTree> {
    classical(c)?;
    require_standard(c, d)?;
    if !target.is_subsequent_of(&d.sequent) || !target.set_equivalent(&d.sequent) {
        return Err(TransformError::ShapeMismatch(format!(
            "{target} is not a contraction of {}",
            d.sequent
        )));
    }
    let out = reduce(c, d.clone(), target, None)?;
    verified(c, d, out)
}

fn co(c: &Calculus, d: &DerivationTree, side: Side, x: &Formula) -> Result<DerivationTree> {
    let mut concl = d.sequent.clone();
    concl.side_mut(side).remove_one(x);
    let rk = node_kind(d)?;
    let prems = d.premiss_sequents();
    if c.match_kind(rk, &concl, &prems).is_some() {
        return Ok(DerivationTree {
            sequent: concl,
            rule: d.rule.clone(),
            premisses: d.premisses.clone(),
        });
    }
    let inst = c
        .match_kind(rk, &d.sequent, &prems)
        .ok_or_else(|| TransformError::InvalidInput(format!("{} is not an instance", d.sequent)))?;
    let (_, pf) = inst
        .principal
        .clone()
        .ok_or_else(|| TransformError::InvalidInput("instance without principal".into()))?;
    let mut premisses = Vec::with_capacity(d.premisses.len());
    if rk.is_box() {
        // a boxed formula of Γ occurs twice: drop one copy from Γ
        let body = x.unbox().filter(|b| side == Side::Ante && inst.gamma.count(b) >= 2);
        let body = body.ok_or_else(|| {
            TransformError::Unsupported(format!("contracting {x} below {}", rk.name()))
        })?;
        let gamma = inst.gamma.without(body).expect("counted above");
        let target = rk.box_premiss(&gamma, pf.unbox().expect("boxed principal"));
        let target = if d.premisses[0].sequent.is_set_sequent() { target.star() } else { target };
        premisses.push(reduce(c, d.premisses[0].clone(), &target, None)?);
    } else {
        let targets = rk.literal_premisses(&concl, &pf).ok_or_else(|| {
            TransformError::Unsupported(format!("{} after contracting {x}", rk.name()))
        })?;
        for (i, (p, t)) in d.premisses.iter().zip(&targets).enumerate() {
            premisses.push(reduce(c, p.clone(), t, Some((rk, &pf, i)))?);
        }
    }
    let out = DerivationTree::node(concl, rk, premisses);
    if c.match_kind(rk, &out.sequent, &out.premiss_sequents()).is_none() {
        return Err(TransformError::Unsupported(format!(
            "contraction of {x} through {} at {}",
            rk.name(),
            d.sequent
        )));
    }
    Ok(out)
}

/// Shrinks the endsequent of `d` into `target`: surplus copies are
/// contracted, and the principal formula of the rule below (absent from
/// `target`) is inverted away.
fn reduce(
    c: &Calculus,
    mut d: DerivationTree,
    target: &Sequent,
    principal: Option<(RuleKind, &Formula, usize)>,
) -> Result<DerivationTree> {
    loop {
        let surplus = [Side::Ante, Side::Succ].into_iter().find_map(|side| {
            d.sequent
                .side(side)
                .entries()
                .find(|(f, n)| *n > target.side(side).count(f))
                .map(|(f, _)| (side, f.clone()))
        });
        let Some((side, y)) = surplus else { return Ok(d) };
        if target.side(side).count(&y) >= 1 {
            d = co(c, &d, side, &y)?;
            continue;
        }
        match principal {
            Some((rk, pf, i)) if *pf == y && Shape::of_rule(rk).is_some_and(|s| s.side() == side) => {
                d = inv(c, &d, rk, pf)?.swap_remove(i);
            }
            _ => {
                return Err(TransformError::Unsupported(format!(
                    "cannot remove {y} from {} to reach {target}",
                    d.sequent
                )))
            }
        }
    }
}

/// A proof of the same endsequent whose box-rule premisses are all
/// set-sequents, no deeper than `d`.
pub fn to_set_proof(c: &Calculus, d: &DerivationTree) -> Result<DerivationTree> {
    require_standard(c, d)?;
    let out = set_proof(c, d)?;
    verified(c, d, out)
}

pub(crate) fn set_proof(c: &Calculus, d: &DerivationTree) -> Result<DerivationTree> {
    let mut premisses = Vec::with_capacity(d.premisses.len());
    let boxed = d.kind().is_some_and(RuleKind::is_box);
    for p in &d.premisses {
        let p = set_proof(c, p)?;
        if boxed && !p.sequent.is_set_sequent() {
            classical(c)?;
            let star = p.sequent.star();
            premisses.push(reduce(c, p, &star, None)?);
        } else {
            premisses.push(p);
        }
    }
    Ok(DerivationTree {
        sequent: d.sequent.clone(),
        rule: d.rule.clone(),
        premisses,
    })
}
