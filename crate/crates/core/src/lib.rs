//! Proof search, checking and translation for standard and circular sequent
//! calculi of the modal logics K4, GL, S4 and Grz, with intuitionistic
//! variants of K4 and GL.

pub mod calculus;
pub mod derivation;
pub mod formula;
pub mod search;
pub mod semantics;
pub mod sequent;
pub mod transform;

pub use calculus::{Base, Calculus, CalculusError, Instantiation, RuleInstance, RuleKind, RuleSchema};
pub use formula::{Formula, SyntaxError};
pub use sequent::{dm_leq, Multiset, Sequent, Side};
pub use derivation::{
    check, check_circular, check_standard, from_interchange, stats, to_interchange, CheckOptions,
    DerivationTree, FormatError, NodeRule, ProofStats, Verdict,
};
pub use search::{closure, corpus, decide, prove, ClosureSet, Mode, Outcome, SearchConfig, SearchError};
pub use semantics::{countermodel, Countermodel, FrameClass, KripkeModel};
pub use transform::{
    circular_to_standard, contract, contract_one, contract_to, gl_to_circular, grz_to_circular_s4,
    invert, to_set_proof, weaken, Shape, TransformError,
};
