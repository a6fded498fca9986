//! Fixtures and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use prodfree::endo::{validate_and_classify, EndoSpec, EndoType, FreeHom, PairElement, ProductEndo};
use prodfree::freeword::{words_up_to, Alphabet, FreeWord, Letter};
use prodfree::whitehead::MoveSet;
use rand::Rng;

pub type Img<'a> = (&'a [Letter], &'a [Letter]);

pub fn wa(n: usize, r: &[Letter]) -> FreeWord {
    FreeWord::reduce(r, Alphabet::a(n)).unwrap()
}

pub fn wb(m: usize, r: &[Letter]) -> FreeWord {
    FreeWord::reduce(r, Alphabet::b(m)).unwrap()
}

pub fn pe(x: &[Letter], y: &[Letter]) -> PairElement {
    PairElement::from_letters(2, 2, x, y).unwrap()
}

pub fn spec(n: usize, m: usize, a: &[Img], b: &[Img]) -> EndoSpec {
    let p = |(x, y): &Img| PairElement::from_letters(n, m, x, y).unwrap();
    EndoSpec::new(n, m, a.iter().map(p).collect(), b.iter().map(p).collect()).unwrap()
}

pub fn endo(a: &[Img], b: &[Img]) -> ProductEndo {
    validate_and_classify(&spec(2, 2, a, b)).unwrap()
}

pub fn hom(dom: Alphabet, cod: Alphabet, images: &[&[Letter]]) -> FreeHom {
    FreeHom::new(dom, cod, images.iter().map(|r| FreeWord::reduce(r, cod).unwrap()).collect()).unwrap()
}

/// One endomorphism of each type over `F_2 x F_2`.
pub fn type_fixtures() -> Vec<(EndoType, ProductEndo)> {
    vec![
        (EndoType::I, endo(&[(&[1], &[1]), (&[1, 1], &[])], &[(&[1], &[1]), (&[], &[-1])])),
        (EndoType::II, endo(&[(&[], &[1]), (&[], &[])], &[(&[1, 2], &[1, 1]), (&[2], &[])])),
        (EndoType::III, endo(&[(&[1], &[]), (&[1, 1], &[])], &[(&[1], &[1]), (&[], &[2])])),
        (EndoType::IV, endo(&[(&[], &[]), (&[], &[])], &[(&[1], &[1, 1]), (&[2], &[2])])),
        (EndoType::V, endo(&[(&[], &[1]), (&[], &[])], &[(&[], &[-1]), (&[], &[])])),
        (EndoType::VI, ProductEndo::identity(2, 2)),
        (EndoType::VII, swap()),
    ]
}

/// `(x, y) -> (y, x)` with letters renamed.
pub fn swap() -> ProductEndo {
    endo(&[(&[], &[1]), (&[], &[2])], &[(&[1], &[]), (&[2], &[])])
}

/// Type VII with `phi: a1 -> b1 b2, a2 -> b2` and `psi: b_j -> a_j`.
pub fn swap_nielsen() -> ProductEndo {
    endo(&[(&[], &[1, 2]), (&[], &[2])], &[(&[1], &[]), (&[2], &[])])
}

/// `a1 -> (a1, 1)`, `a2 -> 1`, `b1 -> (a1, b1)`, `b2 -> (a1^-1, b2)`: Type
/// III with identity component, `u^P = 1` and `R = (1, -1)`.
pub fn counterexample() -> ProductEndo {
    endo(&[(&[1], &[]), (&[], &[])], &[(&[1], &[1]), (&[-1], &[2])])
}

/// Type I with `u = a1`, `v = b1` and the given exponent vectors.
pub fn type1(u: &[Letter], v: &[Letter], p: [i64; 2], q: [i64; 2], r: [i64; 2], s: [i64; 2]) -> Option<ProductEndo> {
    let u = wa(2, u);
    let v = wb(2, v);
    let img = |a: i64, b: i64| PairElement::new(u.pow(a), v.pow(b));
    let sp = EndoSpec::new(2, 2, vec![img(p[0], q[0]), img(p[1], q[1])], vec![img(r[0], s[0]), img(r[1], s[1])]).ok()?;
    validate_and_classify(&sp).ok().filter(|e| e.etype == EndoType::I)
}

/// Type III with `u = a1`, `P = (up, 0)`, the given `R` and component.
pub fn type3(up: i64, r: [i64; 2], phi: [&[Letter]; 2]) -> ProductEndo {
    let up = [up];
    let a1: Vec<Letter> = vec![1; up[0].unsigned_abs() as usize].into_iter().map(|x| x * up[0].signum() as Letter).collect();
    let r0: Vec<Letter> = vec![1; r[0].unsigned_abs() as usize].into_iter().map(|x| x * r[0].signum() as Letter).collect();
    let r1: Vec<Letter> = vec![1; r[1].unsigned_abs() as usize].into_iter().map(|x| x * r[1].signum() as Letter).collect();
    // a2 -> (a1, 1) keeps X nontrivial when up = 0
    validate_and_classify(&spec(2, 2, &[(&a1, &[]), (&[1], &[])], &[(&r0, phi[0]), (&r1, phi[1])])).unwrap()
}

pub fn random_word<R: Rng>(rng: &mut R, al: Alphabet, max_len: usize) -> FreeWord {
    let len = rng.gen_range(0..=max_len);
    let raw: Vec<Letter> = (0..len)
        .map(|_| {
            let x = rng.gen_range(1..=al.rank as Letter);
            if rng.gen_bool(0.5) {
                x
            } else {
                -x
            }
        })
        .collect();
    FreeWord::reduce(&raw, al).unwrap()
}

pub fn random_pair<R: Rng>(rng: &mut R, n: usize, m: usize, max_len: usize) -> PairElement {
    PairElement::new(random_word(rng, Alphabet::a(n), max_len), random_word(rng, Alphabet::b(m), max_len))
}

/// A random automorphism of `F(al)` as a product of Whitehead moves.
pub fn random_automorphism<R: Rng>(rng: &mut R, al: Alphabet, moves: usize) -> FreeHom {
    let ms = MoveSet::new(al);
    (0..moves).fold(FreeHom::identity(al), |acc, _| acc.then(&ms.moves[rng.gen_range(0..ms.moves.len())].1))
}

/// Pairs with component lengths at most `len`.
pub fn pairs_up_to(n: usize, m: usize, len: usize) -> Vec<PairElement> {
    let xs = words_up_to(Alphabet::a(n), len);
    let ys = words_up_to(Alphabet::b(m), len);
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for x in &xs {
        for y in &ys {
            out.push(PairElement::new(x.clone(), y.clone()));
        }
    }
    out
}

/// Integer 2x2 matrix power orbit check, independent of the library.
pub fn brute_periodic(m: [[i64; 2]; 2], v: [i64; 2], max_period: usize) -> bool {
    let mut w = v;
    for _ in 0..max_period {
        w = [m[0][0] * w[0] + m[0][1] * w[1], m[1][0] * w[0] + m[1][1] * w[1]];
        if w == v {
            return true;
        }
    }
    false
}
