//! Derivation trees, the standard and circular checkers, proof statistics and
//! the JSON interchange format.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::calculus::{Calculus, RuleKind};
use crate::sequent::Sequent;

/// How a node was justified.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum NodeRule {
    /// An application of the named rule; axioms are rules without premisses.
    Rule(String),
    /// A leaf closed by an identical sequent strictly below it.
    Circular,
    /// An open leaf. Never valid as a proof; used for derivations from
    /// hypotheses.
    Assumption,
}

impl NodeRule {
    pub fn name(&self) -> &str {
        match self {
            NodeRule::Rule(n) => n,
            NodeRule::Circular => "circular",
            NodeRule::Assumption => "assumption",
        }
    }

    fn from_name(name: &str) -> NodeRule {
        match name {
            "circular" => NodeRule::Circular,
            "assumption" => NodeRule::Assumption,
            other => NodeRule::Rule(other.to_string()),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DerivationTree {
    pub sequent: Sequent,
    pub rule: NodeRule,
    pub premisses: Vec<DerivationTree>,
}

impl DerivationTree {
    pub fn node(sequent: Sequent, rule: RuleKind, premisses: Vec<DerivationTree>) -> Self {
        DerivationTree {
            sequent,
            rule: NodeRule::Rule(rule.name().to_string()),
            premisses,
        }
    }

    pub fn axiom(sequent: Sequent, rule: RuleKind) -> Self {
        Self::node(sequent, rule, Vec::new())
    }

    pub fn circular(sequent: Sequent) -> Self {
        DerivationTree {
            sequent,
            rule: NodeRule::Circular,
            premisses: Vec::new(),
        }
    }

    pub fn assumption(sequent: Sequent) -> Self {
        DerivationTree {
            sequent,
            rule: NodeRule::Assumption,
            premisses: Vec::new(),
        }
    }

    /// The built-in rule at this node, if any.
    pub fn kind(&self) -> Option<RuleKind> {
        match &self.rule {
            NodeRule::Rule(n) => RuleKind::from_name(n),
            _ => None,
        }
    }

    pub fn is_circular_leaf(&self) -> bool {
        self.rule == NodeRule::Circular
    }

    pub fn premiss_sequents(&self) -> Vec<Sequent> {
        self.premisses.iter().map(|p| p.sequent.clone()).collect()
    }

    /// Number of nodes on the longest branch.
    pub fn depth(&self) -> usize {
        1 + self.premisses.iter().map(Self::depth).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.premisses.iter().map(Self::size).sum::<usize>()
    }

    pub fn count_circular_leaves(&self) -> usize {
        usize::from(self.is_circular_leaf())
            + self.premisses.iter().map(Self::count_circular_leaves).sum::<usize>()
    }

    pub fn count_rule(&self, kind: RuleKind) -> usize {
        usize::from(self.kind() == Some(kind))
            + self.premisses.iter().map(|p| p.count_rule(kind)).sum::<usize>()
    }

    pub fn contains_assumptions(&self) -> bool {
        self.rule == NodeRule::Assumption || self.premisses.iter().any(Self::contains_assumptions)
    }

    /// The subtree at `path` (child indices from the root).
    pub fn get(&self, path: &[usize]) -> Option<&DerivationTree> {
        let mut node = self;
        for &i in path {
            node = node.premisses.get(i)?;
        }
        Some(node)
    }

    pub fn get_mut(&mut self, path: &[usize]) -> Option<&mut DerivationTree> {
        let mut node = self;
        for &i in path {
            node = node.premisses.get_mut(i)?;
        }
        Some(node)
    }

    /// Visits every node in pre-order with its path.
    pub fn walk<'a>(&'a self, f: &mut dyn FnMut(&[usize], &'a DerivationTree)) {
        fn go<'a>(
            node: &'a DerivationTree,
            path: &mut Vec<usize>,
            f: &mut dyn FnMut(&[usize], &'a DerivationTree),
        ) {
            f(path, node);
            for (i, p) in node.premisses.iter().enumerate() {
                path.push(i);
                go(p, path, f);
                path.pop();
            }
        }
        go(self, &mut Vec::new(), f)
    }

    pub fn stats(&self) -> ProofStats {
        stats(self)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "sequent": self.sequent.to_string(),
            "rule": self.rule.name(),
            "premisses": self.premisses.iter().map(Self::to_json).collect::<Vec<_>>(),
        })
    }

    /// Indented tree rendering, root first.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out, 0);
        out
    }

    fn render_into(&self, out: &mut String, indent: usize) {
        use fmt::Write;
        let _ = writeln!(out, "{:indent$}{}  [{}]", "", self.sequent, self.rule.name(), indent = indent);
        for p in &self.premisses {
            p.render_into(out, indent + 2);
        }
    }
}

impl fmt::Display for DerivationTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Outcome of a check; an invalid verdict names the first offending node.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    Valid,
    Invalid {
        path: Vec<usize>,
        sequent: Sequent,
        reason: String,
    },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Valid => f.write_str("valid"),
            Verdict::Invalid { path, sequent, reason } => {
                write!(f, "invalid at {path:?} ({sequent}): {reason}")
            }
        }
    }
}

/// What leaves a checker accepts besides axioms.
///
/// A circular leaf needs an identical sequent strictly below it, with a box
/// rule applied between the two. With ordered rules every cycle passes a box
/// rule anyway; the condition matters for `RT`, whose premiss grows.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CheckOptions<'a> {
    pub circular: bool,
    /// Open leaves whose sequent is in this list are accepted.
    pub assumptions: &'a [Sequent],
}

pub fn check_standard(c: &Calculus, d: &DerivationTree) -> Verdict {
    check(c, d, CheckOptions { circular: false, assumptions: &[] })
}

pub fn check_circular(c: &Calculus, d: &DerivationTree) -> Verdict {
    check(c, d, CheckOptions { circular: true, assumptions: &[] })
}

pub fn check(c: &Calculus, d: &DerivationTree, opts: CheckOptions<'_>) -> Verdict {
    let mut below: Vec<(&Sequent, bool)> = Vec::new();
    let mut path = Vec::new();
    check_node(c, d, opts, &mut below, &mut path)
}

fn invalid(path: &[usize], d: &DerivationTree, reason: impl Into<String>) -> Verdict {
    Verdict::Invalid {
        path: path.to_vec(),
        sequent: d.sequent.clone(),
        reason: reason.into(),
    }
}

fn check_node<'a>(
    c: &Calculus,
    d: &'a DerivationTree,
    opts: CheckOptions<'_>,
    below: &mut Vec<(&'a Sequent, bool)>,
    path: &mut Vec<usize>,
) -> Verdict {
    match &d.rule {
        NodeRule::Circular => {
            if !d.premisses.is_empty() {
                return invalid(path, d, "circular leaf with premisses");
            }
            if !opts.circular {
                return invalid(path, d, "circular leaf in a standard proof");
            }
            let Some(i) = below.iter().position(|(s, _)| **s == d.sequent) else {
                return invalid(path, d, "no identical sequent below the circular leaf");
            };
            if below[i..].iter().any(|(_, boxed)| *boxed) {
                Verdict::Valid
            } else {
                invalid(path, d, "cycle without a box rule")
            }
        }
        NodeRule::Assumption => {
            if d.premisses.is_empty() && opts.assumptions.contains(&d.sequent) {
                Verdict::Valid
            } else {
                invalid(path, d, "open assumption")
            }
        }
        NodeRule::Rule(name) => {
            match c.match_instance(name, &d.sequent, &d.premiss_sequents()) {
                Err(e) => return invalid(path, d, e.to_string()),
                Ok(None) => return invalid(path, d, format!("not an instance of {name}")),
                Ok(Some(_)) => {}
            }
            below.push((&d.sequent, d.kind().is_some_and(RuleKind::is_box)));
            for (i, p) in d.premisses.iter().enumerate() {
                path.push(i);
                let v = check_node(c, p, opts, below, path);
                path.pop();
                if !v.is_valid() {
                    below.pop();
                    return v;
                }
            }
            below.pop();
            Verdict::Valid
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ProofStats {
    pub depth: usize,
    /// Height of the application of each rule closest to the root; the root
    /// has height 1. Rules that do not occur are absent (height 0).
    pub lowest_height: BTreeMap<String, usize>,
    /// Number of applications of each rule at its lowest height.
    pub count_at_lowest: BTreeMap<String, usize>,
}

impl ProofStats {
    pub fn lowest(&self, rule: RuleKind) -> usize {
        self.lowest_height.get(rule.name()).copied().unwrap_or(0)
    }

    pub fn count(&self, rule: RuleKind) -> usize {
        self.count_at_lowest.get(rule.name()).copied().unwrap_or(0)
    }
}

pub fn stats(d: &DerivationTree) -> ProofStats {
    let mut st = ProofStats {
        depth: d.depth(),
        ..ProofStats::default()
    };
    d.walk(&mut |path, node| {
        let NodeRule::Rule(name) = &node.rule else { return };
        let h = path.len() + 1;
        match st.lowest_height.get(name).copied() {
            Some(low) if low < h => {}
            Some(low) if low == h => *st.count_at_lowest.get_mut(name).unwrap() += 1,
            _ => {
                st.lowest_height.insert(name.clone(), h);
                st.count_at_lowest.insert(name.clone(), 1);
            }
        }
    });
    st
}

pub fn depth(d: &DerivationTree) -> usize {
    d.depth()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed derivation at '{path}': {message}")]
pub struct FormatError {
    /// JSON pointer to the offending value.
    pub path: String,
    pub message: String,
}

pub fn to_interchange(d: &DerivationTree) -> String {
    serde_json::to_string_pretty(&d.to_json()).expect("tree serializes")
}

pub fn from_interchange(text: &str) -> Result<DerivationTree, FormatError> {
    let value: Value = serde_json::from_str(text).map_err(|e| FormatError {
        path: String::new(),
        message: e.to_string(),
    })?;
    from_json(&value, "")
}

pub fn from_json(value: &Value, path: &str) -> Result<DerivationTree, FormatError> {
    let err = |p: String, m: String| FormatError { path: p, message: m };
    let obj: &Map<String, Value> = value
        .as_object()
        .ok_or_else(|| err(path.to_string(), "expected an object".into()))?;
    let field = |k: &str| {
        obj.get(k)
            .ok_or_else(|| err(path.to_string(), format!("missing field `{k}`")))
    };
    let seq_text = field("sequent")?
        .as_str()
        .ok_or_else(|| err(format!("{path}/sequent"), "expected a string".into()))?;
    let sequent = Sequent::parse(seq_text).map_err(|e| err(format!("{path}/sequent"), e.to_string()))?;
    let rule_name = field("rule")?
        .as_str()
        .ok_or_else(|| err(format!("{path}/rule"), "expected a string".into()))?;
    let rule = NodeRule::from_name(rule_name);
    let items = match obj.get("premisses") {
        None => &[][..],
        Some(v) => v
            .as_array()
            .ok_or_else(|| err(format!("{path}/premisses"), "expected an array".into()))?,
    };
    let expected = match &rule {
        NodeRule::Circular | NodeRule::Assumption => Some(0),
        NodeRule::Rule(n) => RuleKind::from_name(n).map(RuleKind::arity),
    };
    if let Some(n) = expected {
        if items.len() != n {
            return Err(err(
                format!("{path}/premisses"),
                format!("`{rule_name}` takes {n} premisses, found {}", items.len()),
            ));
        }
    }
    let premisses = items
        .iter()
        .enumerate()
        .map(|(i, v)| from_json(v, &format!("{path}/premisses/{i}")))
        .collect::<Result<_, _>>()?;
    Ok(DerivationTree {
        sequent,
        rule,
        premisses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::Calculus;

    fn seq(s: &str) -> Sequent {
        Sequent::parse(s).unwrap()
    }

    pub(crate) fn loeb_tree() -> DerivationTree {
        let root = seq("[]([]p -> p) => []p");
        DerivationTree::node(
            root.clone(),
            RuleKind::K4,
            vec![DerivationTree::node(
                seq("[]p -> p, []([]p -> p) => p"),
                RuleKind::LImp,
                vec![
                    DerivationTree::circular(root),
                    DerivationTree::axiom(seq("[]([]p -> p), p => p"), RuleKind::Ax),
                ],
            )],
        )
    }

    #[test]
    fn loeb_tree_checks() {
        let k4 = Calculus::g3k4();
        let d = loeb_tree();
        assert!(check_circular(&k4, &d).is_valid());
        assert!(!check_standard(&k4, &d).is_valid());
        let st = stats(&d);
        assert_eq!(st.depth, 3);
        assert_eq!(st.lowest(RuleKind::K4), 1);
        assert_eq!(st.count(RuleKind::K4), 1);
        assert_eq!(st.lowest(RuleKind::Gl), 0);
    }

    #[test]
    fn two_step_k4_proof() {
        let k4 = Calculus::g3k4();
        let d = DerivationTree::node(
            seq("[]p => [][]p"),
            RuleKind::K4,
            vec![DerivationTree::node(
                seq("p, []p => []p"),
                RuleKind::K4,
                vec![DerivationTree::axiom(seq("p, []p => p"), RuleKind::Ax)],
            )],
        );
        assert!(check_standard(&k4, &d).is_valid());
        assert!(check_circular(&k4, &d).is_valid());
    }

    #[test]
    fn single_axiom() {
        let d = DerivationTree::axiom(seq("p => p"), RuleKind::Ax);
        assert!(check_standard(&Calculus::g3p(), &d).is_valid());
        assert_eq!(d.depth(), 1);
    }

    #[test]
    fn set_equivalent_circularity_is_rejected() {
        let d = DerivationTree::node(
            seq("p & q, p & q, p, q =>"),
            RuleKind::LAnd,
            vec![DerivationTree::circular(seq("p & q, p, q, p, q =>"))],
        );
        let v = check_circular(&Calculus::g3k4(), &d);
        assert_eq!(
            v,
            Verdict::Invalid {
                path: vec![0],
                sequent: seq("p & q, p, q, p, q =>"),
                reason: "no identical sequent below the circular leaf".into()
            }
        );
    }

    #[test]
    fn interchange_round_trip() {
        let d = loeb_tree();
        assert_eq!(from_interchange(&to_interchange(&d)).unwrap(), d);
        let bad = r#"{"sequent": "p => p", "rule": "Limp", "premisses": []}"#;
        let e = from_interchange(bad).unwrap_err();
        assert_eq!(e.path, "/premisses");
        let unknown = r#"{"sequent": "p => p", "rule": "Cut", "premisses": []}"#;
        let d = from_interchange(unknown).unwrap();
        assert!(!check_standard(&Calculus::g3p(), &d).is_valid());
    }
}
