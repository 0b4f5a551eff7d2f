use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use circprove::*;
use proptest::prelude::*;

fn f(s: &str) -> Formula {
    Formula::parse(s).unwrap()
}

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(f("p")),
        Just(f("q")),
        Just(f("r")),
        Just(Formula::Top),
        Just(Formula::Bot),
    ];
    leaf.prop_recursive(5, 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::neg),
            inner.clone().prop_map(Formula::boxed),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::imp(a, b)),
        ]
    })
}

fn multiset(max: usize) -> impl Strategy<Value = Multiset> {
    prop::collection::vec(formula(), 0..=max).prop_map(|v| v.into_iter().collect())
}

fn sequent() -> impl Strategy<Value = Sequent> {
    (multiset(3), multiset(2)).prop_map(|(a, s)| Sequent::new(a, s))
}

/// A multiset drawn from a small pool so that repeats and boxes collide.
fn pooled(pool: &'static [&'static str], max: usize) -> impl Strategy<Value = Multiset> {
    prop::collection::vec(0..pool.len(), 0..=max).prop_map(move |v| v.into_iter().map(|i| f(pool[i])).collect())
}

const BOX_POOL: &[&str] = &["p", "[]p", "[][]p", "q", "[]q"];

proptest! {
    #[test]
    fn print_parse_round_trip(x in formula()) {
        prop_assert_eq!(Formula::parse(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn identity_substitution_keeps_complexity(x in formula()) {
        let map: BTreeMap<Arc<str>, Formula> = x.atoms().into_iter().map(|a| (a.clone(), Formula::Atom(a))).collect();
        prop_assert_eq!(x.substitute(&map).complexity(), x.complexity());
        prop_assert_eq!(x.substitute(&map), x);
    }

    #[test]
    fn subformulas_bounded_by_nodes(x in formula()) {
        prop_assert!(x.subformulas().len() <= 2 * x.size());
    }

    #[test]
    fn sequent_round_trip(s in sequent()) {
        prop_assert_eq!(Sequent::parse(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn multiply_is_a_commutative_monoid(a in sequent(), b in sequent(), c in sequent()) {
        prop_assert_eq!(a.multiply(&b), b.multiply(&a));
        prop_assert_eq!(a.multiply(&b).multiply(&c), a.multiply(&b.multiply(&c)));
        prop_assert_eq!(a.multiply(&Sequent::empty()), a);
    }

    #[test]
    fn star_is_an_idempotent_set_equivalent(s in (pooled(BOX_POOL, 6), pooled(BOX_POOL, 3)).prop_map(|(a, b)| Sequent::new(a, b))) {
        let st = s.star();
        prop_assert!(st.set_equivalent(&s));
        prop_assert!(st.is_subsequent_of(&s));
        prop_assert_eq!(st.star(), st.clone());
        prop_assert!(st.is_set_sequent());
    }

    #[test]
    fn boxdot_core_is_maximal(g in pooled(&["p", "[]p", "[][]p"], 6)) {
        let core = g.boxdot_core();
        prop_assert!(core.is_submultiset(&g));
        let maximal = maximal_boxdot_cores(&g);
        prop_assert!(maximal.contains(&core), "{} not among maximal cores of {}", core, g);
    }

    #[test]
    fn dm_strict_order_is_transitive(a in pooled(DM_POOL, 3), b in pooled(DM_POOL, 3), c in pooled(DM_POOL, 3)) {
        let lt = |m: &Multiset, n: &Multiset| m != n && dm_leq(m, n);
        prop_assert!(!lt(&a, &a));
        if lt(&a, &b) && lt(&b, &c) {
            prop_assert!(lt(&a, &c));
        }
    }
}

/// ⊡Π for every ⊆-maximal set Π with ⊡Π contained in `g`.
fn maximal_boxdot_cores(g: &Multiset) -> BTreeSet<Multiset> {
    let candidates: Vec<Formula> = g
        .distinct()
        .filter(|x| g.contains(&Formula::boxed((*x).clone())))
        .cloned()
        .collect();
    let fits: Vec<u32> = (0u32..1 << candidates.len())
        .filter(|&mask| {
            let pi: Multiset = (0..candidates.len())
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| candidates[i].clone())
                .collect();
            pi.boxdot().is_submultiset(g)
        })
        .collect();
    fits.iter()
        .filter(|&&m| !fits.iter().any(|&n| n != m && n & m == m))
        .map(|&mask| {
            (0..candidates.len())
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| candidates[i].clone())
                .collect::<Multiset>()
                .boxdot()
        })
        .collect()
}

const DM_POOL: &[&str] = &["p", "F", "~p", "[]p", "p & p", "[][]p", "p -> F", "~[]p"];

fn submultisets(m: &Multiset) -> Vec<Multiset> {
    let mut out = vec![Multiset::new()];
    for (x, n) in m.entries() {
        out = out
            .into_iter()
            .flat_map(|s| (0..=n).map(move |k| {
                let mut t = s.clone();
                t.insert_n(x.clone(), k);
                t
            }))
            .collect();
    }
    out
}

/// M ≤ N in the multiset extension, by the definition: M = N, or M arises
/// from N by removing a non-empty X and adding elements each below some
/// element of X.
fn dm_oracle(m: &Multiset, n: &Multiset) -> bool {
    m == n
        || submultisets(n).into_iter().any(|x| {
            let rest = n.difference(&x);
            !x.is_empty()
                && rest.is_submultiset(m)
                && m.difference(&rest)
                    .distinct()
                    .all(|y| x.distinct().any(|z| z.complexity() > y.complexity()))
        })
}

#[test]
fn dm_leq_agrees_with_definition() {
    // all multisets of at most three formulas of complexity at most 2
    let pool: Vec<Formula> = DM_POOL.iter().map(|s| f(s)).filter(|x| x.complexity() <= 2).collect();
    let mut universe = vec![Multiset::new()];
    for _ in 0..3 {
        let next: Vec<Multiset> = universe
            .iter()
            .flat_map(|m| pool.iter().map(move |x| m.with(x.clone())))
            .collect();
        universe.extend(next);
    }
    let universe: BTreeSet<Multiset> = universe.into_iter().collect();
    for m in &universe {
        for n in &universe {
            assert_eq!(dm_leq(m, n), dm_oracle(m, n), "{m} vs {n}");
        }
    }
}

#[test]
fn modal_free_eval_matches_truth_tables() {
    fn truth(x: &Formula, v: &BTreeSet<Arc<str>>) -> bool {
        match x {
            Formula::Top => true,
            Formula::Bot => false,
            Formula::Atom(a) => v.contains(a),
            Formula::Neg(a) => !truth(a, v),
            Formula::And(a, b) => truth(a, v) && truth(b, v),
            Formula::Or(a, b) => truth(a, v) || truth(b, v),
            Formula::Imp(a, b) => !truth(a, v) || truth(b, v),
            Formula::Box(_) => true,
        }
    }
    let atoms: Vec<Arc<str>> = ["p", "q"].iter().map(|a| Arc::from(*a)).collect();
    let valuations: Vec<BTreeSet<Arc<str>>> = (0..4)
        .map(|m| atoms.iter().enumerate().filter(|(i, _)| m & (1 << i) != 0).map(|(_, a)| a.clone()).collect())
        .collect();
    let model = KripkeModel::new(vec![0; 4], valuations.clone());
    for x in search::formulas(2, 5) {
        for (w, v) in valuations.iter().enumerate() {
            assert_eq!(model.eval(w, &x).unwrap(), truth(&x, v), "{x} at {w}");
        }
    }
}
