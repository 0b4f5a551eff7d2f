//! Finite Kripke models, used to refute sequents independently of the
//! calculi.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::formula::Formula;
use crate::sequent::Sequent;

/// At most this many worlds; sets of worlds are `u32` bitmasks.
pub const MAX_WORLDS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("world {0} does not exist")]
    UnknownWorld(usize),
    #[error("unknown frame class `{0}` (expected k4, s4 or gl-finite)")]
    UnknownFrame(String),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KripkeModel {
    /// `access[w]` has bit `v` set iff `w R v`.
    pub access: Vec<u32>,
    pub valuation: Vec<BTreeSet<Arc<str>>>,
}

impl KripkeModel {
    pub fn new(access: Vec<u32>, valuation: Vec<BTreeSet<Arc<str>>>) -> Self {
        assert!(access.len() <= MAX_WORLDS && access.len() == valuation.len());
        KripkeModel { access, valuation }
    }

    pub fn worlds(&self) -> usize {
        self.access.len()
    }

    fn all(&self) -> u32 {
        (1u32 << self.worlds()) - 1
    }

    pub fn sees(&self, w: usize, v: usize) -> bool {
        self.access[w] & (1 << v) != 0
    }

    pub fn is_transitive(&self) -> bool {
        (0..self.worlds()).all(|w| {
            (0..self.worlds())
                .filter(|&v| self.sees(w, v))
                .all(|v| self.access[v] & !self.access[w] == 0)
        })
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.worlds()).all(|w| self.sees(w, w))
    }

    pub fn is_irreflexive(&self) -> bool {
        (0..self.worlds()).all(|w| !self.sees(w, w))
    }

    /// The set of worlds where `f` holds.
    pub fn extension(&self, f: &Formula) -> u32 {
        let all = self.all();
        match f {
            Formula::Top => all,
            Formula::Bot => 0,
            Formula::Atom(a) => (0..self.worlds())
                .filter(|&w| self.valuation[w].contains(a))
                .fold(0, |m, w| m | 1 << w),
            Formula::Neg(a) => all & !self.extension(a),
            Formula::And(a, b) => self.extension(a) & self.extension(b),
            Formula::Or(a, b) => self.extension(a) | self.extension(b),
            Formula::Imp(a, b) => (all & !self.extension(a)) | self.extension(b),
            Formula::Box(a) => {
                let ext = self.extension(a);
                (0..self.worlds())
                    .filter(|&w| self.access[w] & !ext == 0)
                    .fold(0, |m, w| m | 1 << w)
            }
        }
    }

    pub fn eval(&self, w: usize, f: &Formula) -> Result<bool, SemanticsError> {
        if w >= self.worlds() {
            return Err(SemanticsError::UnknownWorld(w));
        }
        Ok(self.extension(f) & (1 << w) != 0)
    }

    /// Worlds where the sequent holds: some antecedent formula fails or some
    /// succedent formula holds.
    pub fn sequent_extension(&self, s: &Sequent) -> u32 {
        let mut ext = 0;
        for f in s.ante.distinct() {
            ext |= self.all() & !self.extension(f);
        }
        for f in s.succ.distinct() {
            ext |= self.extension(f);
        }
        ext
    }

    pub fn eval_sequent(&self, w: usize, s: &Sequent) -> Result<bool, SemanticsError> {
        if w >= self.worlds() {
            return Err(SemanticsError::UnknownWorld(w));
        }
        Ok(self.sequent_extension(s) & (1 << w) != 0)
    }
}

impl fmt::Display for KripkeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let worlds: Vec<String> = (0..self.worlds()).map(|w| format!("w{w}")).collect();
        writeln!(f, "worlds: {}", worlds.join(", "))?;
        let pairs: Vec<String> = (0..self.worlds())
            .flat_map(|w| (0..self.worlds()).map(move |v| (w, v)))
            .filter(|&(w, v)| self.sees(w, v))
            .map(|(w, v)| format!("(w{w}, w{v})"))
            .collect();
        writeln!(f, "access: {{{}}}", pairs.join(", "))?;
        for (w, atoms) in self.valuation.iter().enumerate() {
            let names: Vec<&str> = atoms.iter().map(|a| &**a).collect();
            writeln!(f, "w{w}: {{{}}}", names.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FrameClass {
    /// Transitive.
    K4,
    /// Reflexive and transitive.
    S4,
    /// Transitive and irreflexive (finite, hence conversely well-founded).
    GlFinite,
}

impl FrameClass {
    pub fn parse(s: &str) -> Result<FrameClass, SemanticsError> {
        match s {
            "k4" => Ok(FrameClass::K4),
            "s4" => Ok(FrameClass::S4),
            "gl-finite" | "gl" => Ok(FrameClass::GlFinite),
            other => Err(SemanticsError::UnknownFrame(other.to_string())),
        }
    }

    pub fn admits(self, m: &KripkeModel) -> bool {
        m.is_transitive()
            && match self {
                FrameClass::K4 => true,
                FrameClass::S4 => m.is_reflexive(),
                FrameClass::GlFinite => m.is_irreflexive(),
            }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Countermodel {
    pub model: KripkeModel,
    /// A world where the goal fails.
    pub world: usize,
}

/// Relations on `n` worlds in the frame class, one per isomorphism class.
pub fn frames(class: FrameClass, n: usize) -> Vec<Vec<u32>> {
    assert!(n <= 4, "frame enumeration is limited to 4 worlds");
    let pairs = n * n;
    let perms = permutations(n);
    let mut out = Vec::new();
    for code in 0u32..(1 << pairs) {
        let access: Vec<u32> = (0..n).map(|w| (code >> (w * n)) & ((1 << n) - 1)).collect();
        let m = KripkeModel {
            access: access.clone(),
            valuation: vec![BTreeSet::new(); n],
        };
        if !class.admits(&m) {
            continue;
        }
        // keep the least code among the renamings
        let minimal = perms.iter().all(|p| {
            let mut renamed = 0u32;
            for w in 0..n {
                for v in 0..n {
                    if access[w] & (1 << v) != 0 {
                        renamed |= 1 << (p[w] * n + p[v]);
                    }
                }
            }
            renamed >= code
        });
        if minimal {
            out.push(access);
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Searches models with 1 to `max_worlds` worlds in the frame class, smallest
/// first, for a world where the goal fails. `None` is inconclusive.
pub fn countermodel(goal: &Sequent, class: FrameClass, max_worlds: usize) -> Option<Countermodel> {
    let atoms: Vec<Arc<str>> = goal
        .all_formulas()
        .distinct()
        .flat_map(|f| f.atoms())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    for n in 1..=max_worlds.min(4) {
        let bits = n * atoms.len();
        assert!(bits < 32, "too many atoms for model enumeration");
        for access in frames(class, n) {
            for code in 0u32..(1 << bits) {
                let valuation = (0..n)
                    .map(|w| {
                        atoms
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| code & (1 << (w * atoms.len() + i)) != 0)
                            .map(|(_, a)| a.clone())
                            .collect()
                    })
                    .collect();
                let model = KripkeModel {
                    access: access.clone(),
                    valuation,
                };
                let holds = model.sequent_extension(goal);
                if holds != model.all() {
                    let world = (!holds).trailing_zeros() as usize;
                    return Some(Countermodel { model, world });
                }
            }
        }
    }
    None
}
