mod common;

use common::*;
use num_bigint::BigInt;
use prodfree::endo::{EndoType, PairElement, ProductEndo};
use prodfree::fixed::SubgroupBasisInput;
use prodfree::freeword::Tag;
use prodfree::periodic::{criterion_with_repeats, orbit_sum, periodic_subgroup, Type7Split, DEFAULT_PERIOD_LIMIT};
use proptest::prelude::*;

fn least_period(e: &ProductEndo, g: &PairElement, max: u64) -> Option<u64> {
    let mut cur = g.clone();
    for k in 1..=max {
        cur = e.apply(&cur);
        if cur == *g {
            return Some(k);
        }
    }
    None
}

fn nielsen_oracle() -> SubgroupBasisInput {
    SubgroupBasisInput::default()
        .with(Tag::A, vec![wa(2, &[2]), wa(2, &[1, 2, -1])])
        .with(Tag::B, vec![wb(2, &[2]), wb(2, &[1, 2, -1])])
}

#[test]
fn stated_periods_hold() {
    let mut cases: Vec<(ProductEndo, Option<SubgroupBasisInput>)> = type_fixtures().into_iter().map(|(_, e)| (e, None)).collect();
    cases.push((swap_nielsen(), Some(nielsen_oracle())));
    cases.push((type3(2, [3, 0], [&[1], &[2]]), None));
    cases.push((type3(-1, [2, 0], [&[2], &[1]]), None));
    cases.push((type3(3, [1, 1], [&[2], &[1]]), None));
    cases.push((endo(&[(&[], &[1]), (&[], &[])], &[(&[], &[-1]), (&[], &[])]), None));
    // Type IV with oracle for Per(psi) = <b2>
    let iv = type_fixtures()[3].1.clone();
    cases.push((iv, Some(SubgroupBasisInput::default().with(Tag::B, vec![wb(2, &[2])]))));
    for (e, oracle) in cases {
        let r = periodic_subgroup(&e, oracle.as_ref()).unwrap();
        for (&k, gens) in &r.per_period {
            for g in gens {
                assert_eq!(e.apply_power(g, k), *g, "{g} period {k}");
                assert_eq!(least_period(&e, g, k), Some(k));
                assert!(r.contains(g));
            }
        }
    }
}

#[test]
fn type_one_matches_orbits() {
    for (p, q, r, s) in [([0, 1], [1, 0], [1, 0], [0, 1]), ([1, 0], [1, 1], [1, 0], [0, -1]), ([0, 1], [-1, 0], [1, 1], [0, 2])] {
        let Some(e) = type1(&[1], &[1], p, q, r, s) else { continue };
        assert_eq!(e.etype, EndoType::I);
        let rep = periodic_subgroup(&e, None).unwrap();
        let m = [[p[0], r[0]], [q[0], s[0]]];
        for a in -8..=8 {
            for b in -8..=8 {
                let g = PairElement::new(wa(2, &[1]).pow(a), wb(2, &[1]).pow(b));
                assert_eq!(rep.contains(&g), brute_periodic(m, [a, b], 12), "({a}, {b})");
                assert_eq!(rep.contains(&g), least_period(&e, &g, 12).is_some());
            }
        }
    }
}

#[test]
fn type_seven_split_matches_orbits() {
    for (e, oracle) in [(swap(), None), (swap_nielsen(), Some(nielsen_oracle()))] {
        let split = Type7Split::new(&e, oracle.as_ref(), DEFAULT_PERIOD_LIMIT).unwrap();
        let rep = periodic_subgroup(&e, oracle.as_ref()).unwrap();
        for g in pairs_up_to(2, 2, 4) {
            let period = least_period(&e, &g, 6);
            assert_eq!(split.in_even_part(&g), period.is_some(), "{g}");
            assert_eq!(rep.contains(&g), period.is_some(), "{g}");
            assert_eq!(split.in_odd_part(&g), period.is_some_and(|p| p % 2 == 1), "{g}");
        }
    }
}

fn i128_orbit_sum(up: i128, values: &[i128], s: usize) -> i128 {
    let pi = values.len();
    (0..s * pi).map(|t| values[t % pi] * up.pow((s * pi - t - 1) as u32)).sum()
}

proptest! {
    #[test]
    fn geometric_series_identity(
        up in prop_oneof![-5i64..=-2, 2i64..=5],
        values in prop::collection::vec(-5i64..=5, 1..=4),
        s in 1usize..=4,
    ) {
        let pi = values.len() as u32;
        let v128: Vec<i128> = values.iter().map(|&v| v as i128).collect();
        let lhs = i128_orbit_sum(up as i128, &v128, s);
        let ratio = (1 - (up as i128).pow(s as u32 * pi)) / (1 - (up as i128).pow(pi));
        prop_assert_eq!(lhs, ratio * i128_orbit_sum(up as i128, &v128, 1));
        let big: Vec<BigInt> = values.iter().map(|&v| v.into()).collect();
        prop_assert_eq!(orbit_sum(&up.into(), &big, s as u32), BigInt::from(lhs));
        let base = criterion_with_repeats(&up.into(), &big, 1);
        prop_assert_eq!(criterion_with_repeats(&up.into(), &big, s as u32), base);
    }
}
