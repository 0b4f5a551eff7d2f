//! Modal propositional formulas: syntax tree, parser, printer and the
//! handful of syntactic operations the calculi need.
//!
//! Concrete syntax (ASCII):
//!
//! ```text
//! imp   := or ( "->" imp )?          right associative
//! or    := and ( "|" and )*          left associative
//! and   := unary ( "&" unary )*      left associative
//! unary := "~" unary | "[]" unary | "[.]" unary | atom | "T" | "F" | "(" imp ")"
//! ```
//!
//! `[.]` is sugar for `φ & []φ` and is expanded while parsing.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Formula {
    Top,
    Bot,
    Atom(Arc<str>),
    Neg(Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Imp(Arc<Formula>, Arc<Formula>),
    Box(Arc<Formula>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {offset}: {message}")]
pub struct SyntaxError {
    pub offset: usize,
    pub message: String,
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Arc::from(name))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(f: Formula) -> Formula {
        Formula::Neg(Arc::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Arc::new(l), Arc::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Arc::new(l), Arc::new(r))
    }

    pub fn imp(l: Formula, r: Formula) -> Formula {
        Formula::Imp(Arc::new(l), Arc::new(r))
    }

    pub fn boxed(f: Formula) -> Formula {
        Formula::Box(Arc::new(f))
    }

    /// `φ ∧ □φ`.
    pub fn boxdot(f: Formula) -> Formula {
        Formula::and(f.clone(), Formula::boxed(f))
    }

    pub fn parse(text: &str) -> Result<Formula, SyntaxError> {
        let mut p = Parser::new(text);
        let f = p.imp()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(f)
    }

    /// Atoms and constants are 0; each connective and each box adds 1.
    pub fn complexity(&self) -> usize {
        match self {
            Formula::Top | Formula::Bot | Formula::Atom(_) => 0,
            Formula::Neg(f) | Formula::Box(f) => 1 + f.complexity(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
                1 + l.complexity() + r.complexity()
            }
        }
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::Top | Formula::Bot | Formula::Atom(_) => 1,
            Formula::Neg(f) | Formula::Box(f) => 1 + f.size(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.collect_subformulas(&mut out);
        out
    }

    pub(crate) fn collect_subformulas(&self, out: &mut BTreeSet<Formula>) {
        if !out.insert(self.clone()) {
            return;
        }
        match self {
            Formula::Top | Formula::Bot | Formula::Atom(_) => {}
            Formula::Neg(f) | Formula::Box(f) => f.collect_subformulas(out),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
                l.collect_subformulas(out);
                r.collect_subformulas(out);
            }
        }
    }

    pub fn atoms(&self) -> BTreeSet<Arc<str>> {
        self.subformulas()
            .into_iter()
            .filter_map(|f| match f {
                Formula::Atom(a) => Some(a),
                _ => None,
            })
            .collect()
    }

    pub fn substitute(&self, map: &BTreeMap<Arc<str>, Formula>) -> Formula {
        match self {
            Formula::Top | Formula::Bot => self.clone(),
            Formula::Atom(a) => map.get(a).cloned().unwrap_or_else(|| self.clone()),
            Formula::Neg(f) => Formula::neg(f.substitute(map)),
            Formula::Box(f) => Formula::boxed(f.substitute(map)),
            Formula::And(l, r) => Formula::and(l.substitute(map), r.substitute(map)),
            Formula::Or(l, r) => Formula::or(l.substitute(map), r.substitute(map)),
            Formula::Imp(l, r) => Formula::imp(l.substitute(map), r.substitute(map)),
        }
    }

    /// Rewrites `~φ` to `φ -> F` and `T` to `F -> F`, the only forms the
    /// calculi have rules for.
    pub fn desugar(&self) -> Formula {
        match self {
            Formula::Top => Formula::imp(Formula::Bot, Formula::Bot),
            Formula::Bot | Formula::Atom(_) => self.clone(),
            Formula::Neg(f) => Formula::imp(f.desugar(), Formula::Bot),
            Formula::Box(f) => Formula::boxed(f.desugar()),
            Formula::And(l, r) => Formula::and(l.desugar(), r.desugar()),
            Formula::Or(l, r) => Formula::or(l.desugar(), r.desugar()),
            Formula::Imp(l, r) => Formula::imp(l.desugar(), r.desugar()),
        }
    }

    pub fn is_desugared(&self) -> bool {
        match self {
            Formula::Top | Formula::Neg(_) => false,
            Formula::Bot | Formula::Atom(_) => true,
            Formula::Box(f) => f.is_desugared(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
                l.is_desugared() && r.is_desugared()
            }
        }
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Atom(_))
    }

    pub fn unbox(&self) -> Option<&Formula> {
        match self {
            Formula::Box(f) => Some(f),
            _ => None,
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Formula::Top => 0,
            Formula::Bot => 1,
            Formula::Atom(_) => 2,
            Formula::Neg(_) => 3,
            Formula::Box(_) => 4,
            Formula::And(..) => 5,
            Formula::Or(..) => 6,
            Formula::Imp(..) => 7,
        }
    }

    fn structural_cmp(&self, other: &Formula) -> Ordering {
        match (self, other) {
            (Formula::Atom(a), Formula::Atom(b)) => a.cmp(b),
            (Formula::Neg(a), Formula::Neg(b)) | (Formula::Box(a), Formula::Box(b)) => {
                a.structural_cmp(b)
            }
            (Formula::And(a1, a2), Formula::And(b1, b2))
            | (Formula::Or(a1, a2), Formula::Or(b1, b2))
            | (Formula::Imp(a1, a2), Formula::Imp(b1, b2)) => {
                a1.structural_cmp(b1).then_with(|| a2.structural_cmp(b2))
            }
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

/// Formulas are ordered by complexity first, then structurally. Every
/// multiset and set in the crate iterates in this order.
impl Ord for Formula {
    fn cmp(&self, other: &Self) -> Ordering {
        if std::ptr::eq(self, other) {
            return Ordering::Equal;
        }
        self.complexity()
            .cmp(&other.complexity())
            .then_with(|| self.structural_cmp(other))
    }
}

impl PartialOrd for Formula {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

const PREC_IMP: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_UNARY: u8 = 4;

impl Formula {
    fn write_prec(&self, f: &mut fmt::Formatter<'_>, ctx: u8) -> fmt::Result {
        let (prec, open) = match self {
            Formula::Imp(..) => (PREC_IMP, true),
            Formula::Or(..) => (PREC_OR, true),
            Formula::And(..) => (PREC_AND, true),
            _ => (PREC_UNARY, false),
        };
        let parens = open && prec < ctx;
        if parens {
            f.write_str("(")?;
        }
        match self {
            Formula::Top => f.write_str("T")?,
            Formula::Bot => f.write_str("F")?,
            Formula::Atom(a) => f.write_str(a)?,
            Formula::Neg(x) => {
                f.write_str("~")?;
                x.write_prec(f, PREC_UNARY)?;
            }
            Formula::Box(x) => {
                f.write_str("[]")?;
                x.write_prec(f, PREC_UNARY)?;
            }
            Formula::And(l, r) => {
                l.write_prec(f, PREC_AND)?;
                f.write_str(" & ")?;
                r.write_prec(f, PREC_UNARY)?;
            }
            Formula::Or(l, r) => {
                l.write_prec(f, PREC_OR)?;
                f.write_str(" | ")?;
                r.write_prec(f, PREC_AND)?;
            }
            Formula::Imp(l, r) => {
                l.write_prec(f, PREC_OR)?;
                f.write_str(" -> ")?;
                r.write_prec(f, PREC_IMP)?;
            }
        }
        if parens {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_prec(f, 0)
    }
}

impl std::str::FromStr for Formula {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Formula::parse(s)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
        }
    }

    fn error(&self, message: &str) -> SyntaxError {
        SyntaxError {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(tok.as_bytes()) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn imp(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.or()?;
        if self.eat("->") {
            let rhs = self.imp()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.and()?;
        while self.eat("|") {
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.unary()?;
        while self.eat("&") {
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        self.skip_ws();
        if self.eat("~") {
            return Ok(Formula::neg(self.unary()?));
        }
        if self.eat("[]") {
            return Ok(Formula::boxed(self.unary()?));
        }
        if self.eat("[.]") {
            return Ok(Formula::boxdot(self.unary()?));
        }
        if self.eat("(") {
            let inner = self.imp()?;
            if !self.eat(")") {
                return Err(self.error("expected ')'"));
            }
            return Ok(inner);
        }
        self.skip_ws();
        let start = self.pos;
        match self.src.get(self.pos) {
            Some(c) if c.is_ascii_alphabetic() => {
                self.pos += 1;
                while self
                    .src
                    .get(self.pos)
                    .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                Ok(match name {
                    "T" => Formula::Top,
                    "F" => Formula::Bot,
                    _ => Formula::atom(name),
                })
            }
            Some(_) => Err(self.error("expected a formula")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}
