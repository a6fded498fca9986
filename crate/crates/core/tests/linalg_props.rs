mod common;

use num_bigint::BigInt;
use prodfree::intlinalg::{kernel_basis, periodic_lattice, solve_diophantine, IntMatrix};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| x.into()).collect()
}

fn mat(rows: &[Vec<i64>]) -> IntMatrix {
    let r: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
    IntMatrix::from_i64(&r)
}

fn zero(v: &[BigInt]) -> bool {
    v.iter().all(|x| *x == BigInt::from(0))
}

proptest! {
    #[test]
    fn kernel_vectors_are_annihilated(rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 2), 1..=2)) {
        let m = mat(&rows);
        let k = kernel_basis(&m);
        for b in &k.basis {
            prop_assert!(zero(&m.mul_vec(b)));
        }
        for a in -10i64..=10 {
            for c in -10i64..=10 {
                if zero(&m.mul_vec(&big(&[a, c]))) {
                    prop_assert!(k.contains_i64(&[a, c]), "({}, {}) missing", a, c);
                }
            }
        }
    }
}

#[test]
fn diophantine_solutions_and_refutations() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..60 {
        let rows: Vec<Vec<i64>> = (0..2).map(|_| (0..2).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        let b = [rng.gen_range(-6..=6), rng.gen_range(-6..=6)];
        let m = mat(&rows);
        match solve_diophantine(&m, &big(&b)) {
            Some((x0, ker)) => {
                assert_eq!(m.mul_vec(&x0), big(&b));
                for k in &ker.basis {
                    let x: Vec<BigInt> = x0.iter().zip(k).map(|(a, c)| a + c * 3).collect();
                    assert_eq!(m.mul_vec(&x), big(&b));
                }
            }
            None => {
                for x in -15..=15 {
                    for y in -15..=15 {
                        assert_ne!(m.mul_vec(&big(&[x, y])), big(&b), "{rows:?} b={b:?} has ({x}, {y})");
                    }
                }
            }
        }
    }
}

#[test]
fn periodic_lattice_matches_orbits() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..60 {
        let m = [[rng.gen_range(-3..=3), rng.gen_range(-3..=3)], [rng.gen_range(-3..=3), rng.gen_range(-3..=3)]];
        let lat = periodic_lattice(&IntMatrix::from_i64(&[&m[0], &m[1]]));
        for a in -8..=8 {
            for b in -8..=8 {
                assert_eq!(lat.contains_i64(&[a, b]), common::brute_periodic(m, [a, b], 12), "{m:?} ({a}, {b})");
            }
        }
    }
}
