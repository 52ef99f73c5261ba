//! Structural identities of `d_S` and `D_S` as property tests over random
//! groups of order at most 24.

mod support;

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use proptest::prelude::*;
use reldav_core::group::{all_subgroups, groups_up_to, negate_set, preimage, quotient, FabGroup, SubsetS};
use reldav_core::Engine;
use support::oracle::{self, BruteGroup, ZeroSumFreeLengths};

fn groups() -> &'static [FabGroup] {
    static GROUPS: OnceLock<Vec<FabGroup>> = OnceLock::new();
    GROUPS.get_or_init(|| groups_up_to(24))
}

fn engine() -> &'static Engine {
    static ENGINE: OnceLock<Engine> = OnceLock::new();
    ENGINE.get_or_init(|| Engine::new(255, 2))
}

fn lengths(g: &FabGroup) -> std::sync::Arc<ZeroSumFreeLengths> {
    static CACHE: OnceLock<Mutex<HashMap<Vec<u64>, std::sync::Arc<ZeroSumFreeLengths>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = g.invariant_factors().to_vec();
    if let Some(l) = cache.lock().unwrap().get(&key) {
        return l.clone();
    }
    let l = std::sync::Arc::new(ZeroSumFreeLengths::compute(&BruteGroup::new(&key)));
    cache.lock().unwrap().insert(key, l.clone());
    l
}

/// A nonempty subset picked by the bits of `mask`, falling back to `{0}`.
fn subset(g: &FabGroup, mask: u32) -> SubsetS {
    let s = SubsetS::from_indices(g, (0..g.order() as usize).filter(|i| mask >> (i % 32) & 1 == 1));
    if s.is_empty() {
        SubsetS::singleton(g.zero())
    } else {
        s
    }
}

fn oracle_indices(g: &FabGroup, s: &SubsetS) -> Vec<usize> {
    let b = BruteGroup::new(g.invariant_factors());
    s.iter().map(|e| b.index(e.coords())).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn big_d_is_small_d_plus_one(gi in 0usize..1000, mask in any::<u32>()) {
        let g = &groups()[gi % groups().len()];
        let s = subset(g, mask);
        let r = engine().small_rel_davenport(g, &s).unwrap();
        let l = lengths(g);
        let idx = oracle_indices(g, &s);
        prop_assert_eq!(r.value, l.small_d(&idx));
        // the oracle's D_S comes straight from the definition
        prop_assert_eq!(l.big_d(&idx), r.value + 1);
        prop_assert_eq!(engine().rel_davenport(g, &s).unwrap(), r.value + 1);
    }

    #[test]
    fn monotone_and_bounded(gi in 0usize..1000, m1 in any::<u32>(), m2 in any::<u32>()) {
        let g = &groups()[gi % groups().len()];
        let s = subset(g, m1);
        let t = s.union(&subset(g, m2));
        let ds = engine().small_rel_davenport(g, &s).unwrap().value;
        let dt = engine().small_rel_davenport(g, &t).unwrap().value;
        prop_assert!(ds <= dt);
        prop_assert!(engine().rel_davenport(g, &t).unwrap() <= engine().davenport(g).unwrap());
    }

    #[test]
    fn negation_invariance(gi in 0usize..1000, mask in any::<u32>()) {
        let g = &groups()[gi % groups().len()];
        let s = subset(g, mask);
        let neg = negate_set(g, &s).unwrap();
        prop_assert_eq!(
            engine().rel_davenport(g, &s).unwrap(),
            engine().rel_davenport(g, &neg).unwrap()
        );
    }

    #[test]
    fn quotient_lifting(gi in 0usize..1000, hi in 0usize..1000, mask in any::<u32>()) {
        let g = &groups()[gi % groups().len()];
        let subs = all_subgroups(g);
        let h = &subs[hi % subs.len()];
        let (q, pi) = quotient(g, h).unwrap();
        let s_bar = subset(&q, mask);
        let s = preimage(&pi, &s_bar).unwrap();
        let below = engine().small_rel_davenport(&q, &s_bar).unwrap().value;
        let above = engine().small_rel_davenport(g, &s).unwrap().value;
        prop_assert!(below <= above, "{} in {} vs {} in {}", below, q, above, g);
    }

    #[test]
    fn witnesses_are_zero_sum_free(gi in 0usize..1000, mask in any::<u32>()) {
        let g = &groups()[gi % groups().len()];
        let s = subset(g, mask);
        let r = engine().small_rel_davenport(g, &s).unwrap();
        if let Some(w) = r.witness {
            let b = BruteGroup::new(g.invariant_factors());
            let seq: Vec<usize> = w.elements().iter().map(|e| b.index(e.coords())).collect();
            prop_assert_eq!(seq.len() as u64, r.value);
            prop_assert!(s.contains(&w.sum(g)));
            prop_assert!(!oracle::has_zero_sum(&b, &seq));
        } else {
            prop_assert_eq!(r.value, 0);
        }
    }
}

#[test]
fn small_d_vanishes_only_at_zero() {
    for g in groups_up_to(12) {
        for x in g.elements() {
            let v = engine().small_rel_davenport(&g, &SubsetS::singleton(x.clone())).unwrap().value;
            assert_eq!(v == 0, x == g.zero(), "group {g}, element {x}");
        }
    }
}
