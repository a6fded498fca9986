mod common;

use std::collections::HashSet;

use prodfree::freeword::{words_up_to, Alphabet, FreeWord};
use prodfree::stallings::{build_weighted, subgroup_of_weighted, SubgroupGraph};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn gens_sample(rng: &mut ChaCha8Rng, k: usize, len: usize) -> Vec<FreeWord> {
    (0..k).map(|_| common::random_word(rng, Alphabet::a(2), len)).collect()
}

#[test]
fn folding_ignores_generator_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let words = words_up_to(Alphabet::a(2), 8);
    for _ in 0..30 {
        let mut gens = gens_sample(&mut rng, 3, 5);
        let g1 = SubgroupGraph::fold(Alphabet::a(2), &gens);
        gens.shuffle(&mut rng);
        let g2 = SubgroupGraph::fold(Alphabet::a(2), &gens);
        assert_eq!(g1, g2, "canonical form depends on order");
        for w in words.iter().step_by(7) {
            assert_eq!(g1.contains(w), g2.contains(w));
        }
    }
}

/// Subgroup elements reachable as products of generators and inverses
/// whose partial products all have length at most `max_len`.
fn naive_closure(gens: &[FreeWord], max_len: usize) -> HashSet<FreeWord> {
    let al = Alphabet::a(2);
    let mut all: Vec<FreeWord> = gens.iter().flat_map(|g| [g.clone(), g.inverse()]).collect();
    all.retain(|g| !g.is_empty());
    let mut seen: HashSet<FreeWord> = HashSet::from([FreeWord::identity(al)]);
    let mut frontier = vec![FreeWord::identity(al)];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for w in &frontier {
            for g in &all {
                let p = w.mul(g);
                if p.len() <= max_len && seen.insert(p.clone()) {
                    next.push(p);
                }
            }
        }
        frontier = next;
    }
    seen
}

#[test]
fn membership_matches_naive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let words = words_up_to(Alphabet::a(2), 6);
    for _ in 0..20 {
        let gens = gens_sample(&mut rng, 3, 3);
        let g = SubgroupGraph::fold(Alphabet::a(2), &gens);
        let closure = naive_closure(&gens, 10);
        for w in &words {
            assert_eq!(g.contains(w), closure.contains(w), "gens {gens:?} word {w}");
        }
    }
}

#[test]
fn intersection_membership_and_rank_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let words = words_up_to(Alphabet::a(2), 8);
    for _ in 0..20 {
        let g = SubgroupGraph::fold(Alphabet::a(2), &gens_sample(&mut rng, 2, 4));
        let h = SubgroupGraph::fold(Alphabet::a(2), &gens_sample(&mut rng, 2, 4));
        let gh = g.intersect(&h);
        for w in words.iter().step_by(5) {
            assert_eq!(gh.contains(w), g.contains(w) && h.contains(w), "{w}");
        }
        let bound = (g.rank().max(1) - 1) * (h.rank().max(1) - 1) + 1;
        assert!(gh.rank() <= bound.max(1), "rank {} exceeds {}", gh.rank(), bound);
    }
}

#[test]
fn weighted_graph_is_the_congruence_subgroup() {
    let al = Alphabet::b(2);
    let words = words_up_to(al, 6);
    for modulus in [2u64, 3, 5] {
        for weights in [[1i64, 0], [1, -1], [2, 3]] {
            let aut = build_weighted(&weights, modulus).unwrap();
            let g = subgroup_of_weighted(&aut, al).unwrap();
            for w in &words {
                let t = w.weighted_sum(&weights).unwrap();
                let expect = t.rem_euclid(modulus as i64) == 0;
                assert_eq!(g.contains(w), expect, "mod {modulus} weights {weights:?} {w}");
                assert_eq!(aut.accepts(w), expect);
            }
        }
    }
}
