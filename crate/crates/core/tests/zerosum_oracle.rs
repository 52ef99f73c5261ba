//! The zero-sum engine against brute-force enumeration.

mod support;

use reldav_core::group::{groups_up_to, FabGroup, GroupElement, SubsetS};
use reldav_core::zerosum::{cyclic_small_rel_coset, has_zero_sum_subsequence, skalba_relative};
use reldav_core::{Engine, GSequence};
use support::oracle::{self, BruteGroup, ZeroSumFreeLengths};

fn brute(g: &FabGroup) -> BruteGroup {
    BruteGroup::new(g.invariant_factors())
}

fn from_index(b: &BruteGroup, idx: usize) -> GroupElement {
    GroupElement(b.coords(idx))
}

#[test]
fn cyclic_coset_formula_matches_enumeration() {
    for n in 1..=18u64 {
        let lengths = ZeroSumFreeLengths::compute(&BruteGroup::cyclic(n));
        for m in (1..=n).filter(|m| n % m == 0) {
            for g in 1..=m {
                let coset = oracle::cyclic_coset(n, m, g);
                assert_eq!(
                    cyclic_small_rel_coset(n, m, g as i64).unwrap(),
                    lengths.small_d(&coset),
                    "n = {n}, m = {m}, g = {g}"
                );
            }
        }
    }
}

#[test]
fn skalba_formula_matches_enumeration() {
    for n in 1..=14u64 {
        let lengths = ZeroSumFreeLengths::compute(&BruteGroup::cyclic(n));
        for a in 0..n {
            // Skalba's D_a is D(G) at a = 0 and the longest zero-sum-free
            // sequence with sum a otherwise
            let expected = if a == 0 { lengths.davenport() } else { lengths.small_d(&[a as usize]) };
            assert_eq!(skalba_relative(n, a as i64).unwrap(), expected, "n = {n}, a = {a}");
        }
    }
}

#[test]
fn every_subset_of_tiny_groups() {
    let engine = Engine::new(255, 1);
    for g in groups_up_to(8) {
        let b = brute(&g);
        let lengths = ZeroSumFreeLengths::compute(&b);
        for mask in 1u32..(1 << b.order) {
            let idx: Vec<usize> = (0..b.order).filter(|i| mask >> i & 1 == 1).collect();
            let s = SubsetS::new(idx.iter().map(|&i| from_index(&b, i)));
            let r = engine.small_rel_davenport(&g, &s).unwrap();
            assert_eq!(r.value, lengths.small_d(&idx), "group {g}, S = {s}");
            assert_eq!(r.big_d(), lengths.big_d(&idx), "group {g}, S = {s}");
        }
        assert_eq!(engine.davenport(&g).unwrap(), lengths.davenport(), "group {g}");
    }
}

#[test]
fn witnesses_reverify_independently() {
    let engine = Engine::new(255, 2);
    for g in groups_up_to(16) {
        let b = brute(&g);
        for x in g.elements() {
            let s = SubsetS::singleton(x.clone());
            let r = engine.small_rel_davenport(&g, &s).unwrap();
            let Some(w) = r.witness else {
                assert_eq!(r.value, 0);
                continue;
            };
            let seq: Vec<usize> = w.elements().iter().map(|e| b.index(e.coords())).collect();
            assert_eq!(seq.len() as u64, r.value);
            assert_eq!(b.sum(&seq), b.index(x.coords()));
            assert!(!oracle::has_zero_sum(&b, &seq), "witness {w} in {g} has a zero sum");
        }
    }
}

#[test]
fn zero_sum_detection_matches_subset_enumeration() {
    let g = FabGroup::new(&[2, 6]).unwrap();
    let b = brute(&g);
    let mut state = 12345u64;
    for _ in 0..300 {
        let len = (state % 9) as usize;
        let mut seq = Vec::new();
        for _ in 0..len {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            seq.push((state >> 33) as usize % b.order);
        }
        state = state.wrapping_add(7);
        let gs = GSequence::new(seq.iter().map(|&i| from_index(&b, i)).collect());
        assert_eq!(has_zero_sum_subsequence(&g, &gs).unwrap(), oracle::has_zero_sum(&b, &seq));
    }
}

#[test]
fn non_cyclic_davenport_values() {
    let engine = Engine::default();
    for (factors, expected) in [(vec![2u64, 2], 3u64), (vec![2, 4], 5), (vec![3, 3], 5), (vec![2, 2, 2], 4)] {
        let g = FabGroup::new(&factors).unwrap();
        assert_eq!(engine.davenport(&g).unwrap(), expected);
        assert_eq!(ZeroSumFreeLengths::compute(&brute(&g)).davenport(), expected);
    }
}
