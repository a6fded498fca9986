mod common;

use common::*;
use prodfree::dynamics::{boundary_fixed_classify, iterate_truncated, uniform_continuity, BoundaryLabel, DynError, TruncatedPoint};
use prodfree::endo::{EndoType, FreeHom, ProductEndo};
use prodfree::fixed::SubgroupBasisInput;
use prodfree::freeword::{Alphabet, FreeWord, Tag};
use prodfree::stallings::SubgroupGraph;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Injectivity for rank-2 sources: the image subgroup must have rank 2.
fn injective(h: &FreeHom) -> bool {
    SubgroupGraph::fold(h.codomain, &h.images).rank() == h.domain.rank
}

fn expected_uc(e: &ProductEndo) -> bool {
    let Some((phi, psi)) = e.components() else { return false };
    matches!(e.etype, EndoType::IV | EndoType::VI | EndoType::VII) && [phi, psi].iter().all(|h| h.is_trivial() || injective(h))
}

fn uc_fixtures() -> Vec<ProductEndo> {
    let mut out: Vec<ProductEndo> = type_fixtures().into_iter().map(|(_, e)| e).collect();
    out.push(swap_nielsen());
    out.push(fibonacci_swap());
    out.push(endo(&[(&[], &[]), (&[2], &[])], &[(&[], &[1]), (&[], &[2])]));
    out.push(endo(&[(&[], &[]), (&[], &[2])], &[(&[2], &[]), (&[1], &[])]));
    out.push(endo(&[(&[1], &[]), (&[1, 1], &[])], &[(&[], &[1]), (&[], &[2])]));
    out
}

/// Type VII with phi psi: a1 -> a1 a2, a2 -> a1.
fn fibonacci_swap() -> ProductEndo {
    endo(&[(&[], &[1, 2]), (&[], &[1])], &[(&[1], &[]), (&[2], &[])])
}

#[test]
fn uniform_continuity_matches_predicate() {
    for e in uc_fixtures() {
        let r = uniform_continuity(&e);
        assert_eq!(r.uniformly_continuous, expected_uc(&e), "{:?}", e.etype);
    }
}

#[test]
fn deeper_inputs_never_contradict() {
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    let mut cases: Vec<ProductEndo> = uc_fixtures().into_iter().filter(|e| uniform_continuity(e).uniformly_continuous).collect();
    for _ in 0..6 {
        let phi = random_automorphism(&mut rng, Alphabet::a(2), 3);
        let psi = random_automorphism(&mut rng, Alphabet::b(2), 3);
        let x: Vec<(&[i32], &[i32])> = phi.images.iter().map(|w| (w.letters(), &[][..])).collect();
        let y: Vec<(&[i32], &[i32])> = psi.images.iter().map(|w| (&[][..], w.letters())).collect();
        cases.push(endo(&x, &y));
    }
    for e in &cases {
        for _ in 0..10 {
            let x = long_word(&mut rng, Alphabet::a(2), 40);
            let y = long_word(&mut rng, Alphabet::b(2), 40);
            let shallow = iterate_truncated(e, &TruncatedPoint::new(x.clone(), y.clone(), 12), 3).unwrap();
            let deep = iterate_truncated(e, &TruncatedPoint::new(x, y, 40), 3).unwrap();
            for (s, d) in shallow.iter().zip(&deep) {
                assert!(d.agrees(s, s.known().min(s.depth)), "{s:?} vs {d:?}");
            }
        }
    }
}

#[test]
fn non_uc_iteration_is_refused() {
    let (_, t1) = type_fixtures().remove(0);
    let p = TruncatedPoint::new(wa(2, &[1; 8]), wb(2, &[1; 8]), 8);
    assert!(matches!(iterate_truncated(&t1, &p, 2), Err(DynError::NotUniformlyContinuous)));
}

fn long_word(rng: &mut ChaCha8Rng, al: Alphabet, len: usize) -> FreeWord {
    loop {
        let w = random_word(rng, al, len);
        if w.len() >= len / 2 {
            return w;
        }
    }
}

#[test]
fn type_four_singular_points_shadow_fixed_words() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    // psi = identity on B, phi: b_j -> a_j
    let flat = endo(&[(&[], &[]), (&[], &[])], &[(&[1], &[1]), (&[2], &[2])]);
    let flat_oracle = SubgroupBasisInput::default().with(Tag::B, vec![wb(2, &[1]), wb(2, &[2])]);
    let doubling = type_fixtures()[3].1.clone();
    let doubling_oracle = SubgroupBasisInput::default().with(Tag::B, vec![wb(2, &[2])]);
    let mut singular = 0;
    for (e, oracle) in [(flat, flat_oracle), (doubling, doubling_oracle)] {
        assert_eq!(e.etype, EndoType::IV);
        let (phi, psi) = e.components().unwrap();
        let mut ys = vec![wb(2, &[2; 20]), wb(2, &[1; 20])];
        ys.extend((0..10).map(|_| long_word(&mut rng, Alphabet::b(2), 20)));
        for y in ys {
            let Some(y) = stabilize(psi, y, 16) else { continue };
            let p = TruncatedPoint::new(phi.apply(&y), y, 16);
            let c = boundary_fixed_classify(&e, &p, 16, Some(&oracle)).unwrap();
            if c.singularity == BoundaryLabel::SingularAtDepth {
                singular += 1;
                let g = c.fixed_witness.unwrap();
                assert_eq!(psi.apply(&g.y), g.y);
                assert!(g.y.common_prefix_len(&p.y_prefix) >= c.depth.min(p.y_prefix.len()));
                assert!(p.near(&g, c.depth));
            }
        }
    }
    assert!(singular >= 2);
}

/// Iterates `h` on `y` until the first `depth` letters stop moving.
fn stabilize(h: &FreeHom, mut y: FreeWord, depth: usize) -> Option<FreeWord> {
    for _ in 0..8 {
        let next = h.apply(&y);
        if next.len() >= depth && next.common_prefix_len(&y) >= depth {
            return Some(next.prefix(depth.max(y.len().min(next.len()))));
        }
        y = next.prefix(64);
    }
    None
}

#[test]
fn type_seven_regular_points_have_evidence() {
    let e = fibonacci_swap();
    assert_eq!(e.etype, EndoType::VII);
    assert!(e.morphism_flags().automorphism);
    let oracle = SubgroupBasisInput::default().with(Tag::A, vec![]).with(Tag::B, vec![]);
    let (phi, psi) = e.components().unwrap();
    let comp = phi.then(psi);
    let mut x = wa(2, &[1]);
    while x.len() < 40 {
        x = comp.apply(&x);
    }
    let p = TruncatedPoint::new(x.clone(), phi.apply(&x), 24);
    let inverse = e.invert_automorphism().unwrap();
    let mut regular = 0;
    for map in [&e, &inverse] {
        let Ok(c) = boundary_fixed_classify(map, &p, 16, Some(&oracle)) else { continue };
        if c.singularity == BoundaryLabel::RegularAtDepth {
            regular += 1;
            assert_ne!(c.evidence, BoundaryLabel::Inconclusive, "{}", c.note);
            assert!(!c.probes.is_empty());
            let other = if std::ptr::eq(map, &e) { &inverse } else { &e };
            let stepper = if c.evidence == BoundaryLabel::AttractorEvidence { map } else { other };
            for w in &c.probes {
                let orbit = iterate_truncated(stepper, &w.start, w.steps).unwrap();
                assert!(orbit.last().unwrap().agrees(&p, c.depth), "probe does not replay");
            }
        }
    }
    assert!(regular >= 1);
}
