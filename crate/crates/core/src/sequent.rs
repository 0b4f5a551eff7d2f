//! Formula multisets, sequents and the sequent algebra: multiplication,
//! boxing, set-sequents and the Dershowitz–Manna order on sequents.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::formula::{Formula, SyntaxError};

/// A finite multiset of formulas. Entries with multiplicity zero are never
/// stored, so structural equality is multiset equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Debug)]
pub struct Multiset {
    counts: BTreeMap<Formula, usize>,
}

impl Multiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, f: Formula) {
        *self.counts.entry(f).or_insert(0) += 1;
    }

    pub fn insert_n(&mut self, f: Formula, n: usize) {
        if n > 0 {
            *self.counts.entry(f).or_insert(0) += n;
        }
    }

    /// Removes one copy; returns false if `f` was absent.
    pub fn remove_one(&mut self, f: &Formula) -> bool {
        match self.counts.get_mut(f) {
            Some(n) if *n > 1 => {
                *n -= 1;
                true
            }
            Some(_) => {
                self.counts.remove(f);
                true
            }
            None => false,
        }
    }

    pub fn with(&self, f: Formula) -> Self {
        let mut m = self.clone();
        m.insert(f);
        m
    }

    pub fn without(&self, f: &Formula) -> Option<Self> {
        let mut m = self.clone();
        m.remove_one(f).then_some(m)
    }

    pub fn count(&self, f: &Formula) -> usize {
        self.counts.get(f).copied().unwrap_or(0)
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.counts.contains_key(f)
    }

    /// Total number of elements, counting multiplicity.
    pub fn len(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Distinct elements with their multiplicities.
    pub fn entries(&self) -> impl Iterator<Item = (&Formula, usize)> {
        self.counts.iter().map(|(f, n)| (f, *n))
    }

    pub fn distinct(&self) -> impl Iterator<Item = &Formula> {
        self.counts.keys()
    }

    /// Every element, repeated according to its multiplicity.
    pub fn iter(&self) -> impl Iterator<Item = &Formula> {
        self.counts
            .iter()
            .flat_map(|(f, n)| std::iter::repeat_n(f, *n))
    }

    /// Multiset sum.
    pub fn union(&self, other: &Multiset) -> Multiset {
        let mut m = self.clone();
        for (f, n) in other.entries() {
            m.insert_n(f.clone(), n);
        }
        m
    }

    /// Multiplicity-wise difference, saturating at zero.
    pub fn difference(&self, other: &Multiset) -> Multiset {
        let mut m = Multiset::new();
        for (f, n) in self.entries() {
            m.insert_n(f.clone(), n.saturating_sub(other.count(f)));
        }
        m
    }

    pub fn is_submultiset(&self, other: &Multiset) -> bool {
        self.entries().all(|(f, n)| other.count(f) >= n)
    }

    pub fn support(&self) -> BTreeSet<Formula> {
        self.counts.keys().cloned().collect()
    }

    /// □Γ.
    pub fn boxed(&self) -> Multiset {
        self.map(Formula::boxed)
    }

    /// ⊡Γ = Γ ∪ □Γ.
    pub fn boxdot(&self) -> Multiset {
        self.union(&self.boxed())
    }

    pub fn map(&self, mut f: impl FnMut(Formula) -> Formula) -> Multiset {
        let mut m = Multiset::new();
        for (x, n) in self.entries() {
            m.insert_n(f(x.clone()), n);
        }
        m
    }

    /// Bodies of the boxed elements, with multiplicity.
    pub fn box_bodies(&self) -> Multiset {
        let mut m = Multiset::new();
        for (f, n) in self.entries() {
            if let Formula::Box(b) = f {
                m.insert_n((**b).clone(), n);
            }
        }
        m
    }

    /// The canonical maximal ⊡Π contained in the multiset (written Γ_⊡).
    ///
    /// Candidates φ with both φ and □φ present are scanned by decreasing
    /// complexity and admitted while ⊡Π stays inside the multiset. A
    /// rejected candidate stays rejected as Π grows, so the result is
    /// ⊆-maximal.
    pub fn boxdot_core(&self) -> Multiset {
        let mut candidates: Vec<&Formula> = self
            .distinct()
            .filter(|f| self.contains(&Formula::boxed((*f).clone())))
            .collect();
        candidates.sort_by(|a, b| {
            b.complexity()
                .cmp(&a.complexity())
                .then_with(|| a.to_string().cmp(&b.to_string()))
        });
        let mut core = Multiset::new();
        for phi in candidates {
            let mut trial = core.clone();
            trial.insert(phi.clone());
            trial.insert(Formula::boxed(phi.clone()));
            if trial.is_submultiset(self) {
                core = trial;
            }
        }
        core
    }

    /// Γ* = Γ_⊡ together with one copy of every other element of Γ.
    pub fn star(&self) -> Multiset {
        let mut m = self.boxdot_core();
        for f in self.distinct() {
            if !m.contains(f) {
                m.insert(f.clone());
            }
        }
        m
    }
}

impl FromIterator<Formula> for Multiset {
    fn from_iter<T: IntoIterator<Item = Formula>>(iter: T) -> Self {
        let mut m = Multiset::new();
        for f in iter {
            m.insert(f);
        }
        m
    }
}

impl<const N: usize> From<[Formula; N]> for Multiset {
    fn from(arr: [Formula; N]) -> Self {
        arr.into_iter().collect()
    }
}

/// Which side of the sequent arrow a formula sits on.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Side {
    Ante,
    Succ,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Debug)]
pub struct Sequent {
    pub ante: Multiset,
    pub succ: Multiset,
}

impl Sequent {
    pub fn new(ante: Multiset, succ: Multiset) -> Self {
        Sequent { ante, succ }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn side(&self, side: Side) -> &Multiset {
        match side {
            Side::Ante => &self.ante,
            Side::Succ => &self.succ,
        }
    }

    pub fn side_mut(&mut self, side: Side) -> &mut Multiset {
        match side {
            Side::Ante => &mut self.ante,
            Side::Succ => &mut self.succ,
        }
    }

    pub fn parse(text: &str) -> Result<Sequent, SyntaxError> {
        let Some(arrow) = text.find("=>") else {
            return Err(SyntaxError {
                offset: text.len(),
                message: "expected '=>'".into(),
            });
        };
        if let Some(second) = text[arrow + 2..].find("=>") {
            return Err(SyntaxError {
                offset: arrow + 2 + second,
                message: "more than one '=>'".into(),
            });
        }
        let ante = parse_side(&text[..arrow], 0)?;
        let succ = parse_side(&text[arrow + 2..], arrow + 2)?;
        Ok(Sequent { ante, succ })
    }

    /// S₁·S₂: componentwise multiset sum.
    pub fn multiply(&self, other: &Sequent) -> Sequent {
        Sequent {
            ante: self.ante.union(&other.ante),
            succ: self.succ.union(&other.succ),
        }
    }

    /// ⋀Γ → ⋁Δ with ⊤ and ⊥ for empty sides. Both folds are left-nested
    /// over the elements sorted by their printed form.
    pub fn interpret(&self) -> Formula {
        let ante = fold(&self.ante, Formula::Top, Formula::and);
        let succ = fold(&self.succ, Formula::Bot, Formula::or);
        Formula::imp(ante, succ)
    }

    pub fn box_sequent(&self) -> Sequent {
        Sequent {
            ante: self.ante.boxed(),
            succ: self.succ.boxed(),
        }
    }

    pub fn boxdot_sequent(&self) -> Sequent {
        Sequent {
            ante: self.ante.boxdot(),
            succ: self.succ.boxdot(),
        }
    }

    /// The set-sequent S*.
    pub fn star(&self) -> Sequent {
        Sequent {
            ante: self.ante.star(),
            succ: self.succ.star(),
        }
    }

    pub fn is_set_sequent(&self) -> bool {
        self.star() == *self
    }

    pub fn set_equivalent(&self, other: &Sequent) -> bool {
        self.star() == other.star()
    }

    /// Both sides are sub-multisets of the corresponding sides of `other`.
    pub fn is_subsequent_of(&self, other: &Sequent) -> bool {
        self.ante.is_submultiset(&other.ante) && self.succ.is_submultiset(&other.succ)
    }

    pub fn difference(&self, other: &Sequent) -> Sequent {
        Sequent {
            ante: self.ante.difference(&other.ante),
            succ: self.succ.difference(&other.succ),
        }
    }

    /// S^a ∪ S^s.
    pub fn all_formulas(&self) -> Multiset {
        self.ante.union(&self.succ)
    }

    pub fn len(&self) -> usize {
        self.ante.len() + self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ante.is_empty() && self.succ.is_empty()
    }

    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        for f in self.ante.distinct().chain(self.succ.distinct()) {
            f.collect_subformulas(&mut out);
        }
        out
    }

    pub fn desugar(&self) -> Sequent {
        Sequent {
            ante: self.ante.map(|f| f.desugar()),
            succ: self.succ.map(|f| f.desugar()),
        }
    }

    pub fn is_desugared(&self) -> bool {
        self.ante.distinct().chain(self.succ.distinct()).all(Formula::is_desugared)
    }

    /// S₁ ≼ S₂ in the Dershowitz–Manna extension of the complexity order.
    pub fn dm_leq(&self, other: &Sequent) -> bool {
        dm_leq(&self.all_formulas(), &other.all_formulas())
    }

    /// S₁ ≺ S₂: S₁ ≼ S₂ and the sequents differ.
    pub fn dm_lt(&self, other: &Sequent) -> bool {
        self != other && self.dm_leq(other)
    }
}

/// M ≼_dm N: either equal, or N∖M is non-empty and every element of M∖N is
/// dominated in complexity by some element of N∖M.
pub fn dm_leq(m: &Multiset, n: &Multiset) -> bool {
    if m == n {
        return true;
    }
    let removed = n.difference(m);
    let added = m.difference(n);
    if removed.is_empty() {
        return false;
    }
    let top = removed.distinct().map(Formula::complexity).max().unwrap_or(0);
    let ok = added.distinct().all(|f| f.complexity() < top);
    ok
}

fn fold(m: &Multiset, unit: Formula, op: fn(Formula, Formula) -> Formula) -> Formula {
    let mut items: Vec<&Formula> = m.iter().collect();
    items.sort_by_cached_key(|f| f.to_string());
    let mut it = items.into_iter().cloned();
    match it.next() {
        None => unit,
        Some(first) => it.fold(first, op),
    }
}

fn parse_side(text: &str, base: usize) -> Result<Multiset, SyntaxError> {
    let mut m = Multiset::new();
    if text.trim().is_empty() {
        return Ok(m);
    }
    let mut offset = base;
    for part in text.split(',') {
        let f = Formula::parse(part).map_err(|e| SyntaxError {
            offset: e.offset + offset,
            message: e.message,
        })?;
        m.insert(f);
        offset += part.len() + 1;
    }
    Ok(m)
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.ante.is_empty(), self.succ.is_empty()) {
            (true, true) => f.write_str("=>"),
            (true, false) => write!(f, "=> {}", self.succ),
            (false, true) => write!(f, "{} =>", self.ante),
            (false, false) => write!(f, "{} => {}", self.ante, self.succ),
        }
    }
}

impl std::str::FromStr for Sequent {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Sequent::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> Sequent {
        Sequent::parse(s).unwrap()
    }

    fn ms(s: &str) -> Multiset {
        seq(&format!("{s} =>")).ante
    }

    #[test]
    fn multiply_examples() {
        assert_eq!(seq("p => q").multiply(&seq("r =>")), seq("p, r => q"));
        assert_eq!(seq("p =>").multiply(&seq("p =>")), seq("p, p =>"));
        let s = seq("p, []q => r");
        assert_eq!(s.multiply(&Sequent::empty()), s);
    }

    #[test]
    fn interpret_examples() {
        assert_eq!(seq("p => q").interpret(), Formula::parse("p -> q").unwrap());
        assert_eq!(seq("=>").interpret(), Formula::parse("T -> F").unwrap());
        assert_eq!(seq("p, q =>").interpret(), Formula::parse("p & q -> F").unwrap());
    }

    #[test]
    fn box_examples() {
        assert_eq!(seq("p =>").box_sequent(), seq("[]p =>"));
        assert_eq!(ms("q").boxdot(), ms("q, []q"));
        assert_eq!(ms("q, []q").boxdot(), ms("q, []q, []q, [][]q"));
    }

    #[test]
    fn boxdot_core_examples() {
        assert_eq!(ms("p, p, q, []q").boxdot_core(), ms("q, []q"));
        assert_eq!(
            ms("q, []q, []q, [][]q").boxdot_core(),
            ms("q, []q, []q, [][]q")
        );
        assert_eq!(ms("p").boxdot_core(), Multiset::new());
    }

    #[test]
    fn star_examples() {
        assert_eq!(seq("p, p, q, []q =>").star(), seq("p, q, []q =>"));
        assert_eq!(
            seq("q, []q, []q, [][]q, p, p =>").star(),
            seq("q, []q, []q, [][]q, p =>")
        );
        let s = seq("p, p, []p, []p, [][]p => q, q");
        assert_eq!(s.star().star(), s.star());
    }

    #[test]
    fn set_equivalence_examples() {
        assert!(seq("p, p =>").set_equivalent(&seq("p =>")));
        assert!(!seq("p =>").set_equivalent(&seq("q =>")));
        assert!(seq("p & q, p & q, p, q =>").set_equivalent(&seq("p & q, p, q =>")));
    }

    #[test]
    fn dm_examples() {
        assert!(seq("p, q =>").dm_lt(&seq("p & q =>")));
        let s = seq("[]p, p -> q => r");
        assert!(s.dm_leq(&s));
        assert!(!s.dm_lt(&s));
        assert!(!seq("=> p -> q").dm_lt(&seq("p => q")));
    }

    #[test]
    fn sequent_parse_and_print() {
        let s = seq("[](([]p -> p)) => []p");
        assert_eq!(s.to_string(), "[]([]p -> p) => []p");
        assert_eq!(seq(" => ").to_string(), "=>");
        assert!(Sequent::parse("p -> q").is_err());
        assert!(Sequent::parse("p => q => r").is_err());
        let err = Sequent::parse("p, [](q => r").unwrap_err();
        assert_eq!(err.offset, 8);
    }
}
