//! Periodic subgroups `Per(e) = ∪_k Fix(e^k)`.
//!
//! Types I and II reduce to periodic lattices of 2x2 integer matrices and
//! Type V to a scalar. For the remaining types every period divides a
//! computable `L` (built from the periods of a basis of `Per` of the free
//! components), so `Per(e) = Fix(e^L)` and the fixed-subgroup machinery does
//! the rest.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::endo::{normalize_generators, EndoError, EndoType, FreeHom, PairElement, ProductEndo, TypeData};
use crate::fixed::{fixed_subgroup, user_tag, FixError, Membership, SubgroupBasisInput, Verdict};
use crate::freeword::{Alphabet, FreeWord, Tag};
use crate::intlinalg::{periodic_lattice, IntMatrix, Lattice, PERIOD_EXPONENT};
use crate::stallings::SubgroupGraph;

/// Default limit for period searches along free-group orbits.
pub const DEFAULT_PERIOD_LIMIT: u64 = 64;

/// Orbit words longer than this are treated as escaping.
const ORBIT_LENGTH_CAP: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PerError {
    #[error("a basis for the periodic subgroup of the {0:?}-component map is required (supply one with an oracle)")]
    OracleRequired(Tag),
    #[error("oracle word {word} has no period up to {limit}")]
    PeriodBoundExceeded { word: String, limit: u64 },
    #[error("orbit does not close")]
    OrbitNotClosed,
    #[error("period criterion disagrees with the computed generator {0}")]
    CriterionMismatch(String),
    #[error("exponent too large for this computation")]
    Overflow,
    #[error(transparent)]
    Fix(#[from] FixError),
    #[error(transparent)]
    Endo(#[from] EndoError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PerMembership {
    /// Membership in a computed subgroup; `swapped` says whether the test
    /// reads normalized coordinates of the factor-swapped group.
    Subgroup { membership: Membership, swapped: bool },
    /// `{(v^b phi, v^a) : (b, a) in lattice}` with `vphi = v phi != 1`.
    Companion { v: FreeWord, vphi: FreeWord, lattice: Lattice, swapped: bool },
    /// Direct search: some power up to `limit` fixes the element.
    PeriodicWithin { endo: Box<ProductEndo>, limit: u64 },
}

impl PerMembership {
    pub fn contains(&self, g: &PairElement) -> bool {
        match self {
            PerMembership::Subgroup { membership, swapped } => {
                let g = if *swapped { g.swap() } else { g.clone() };
                membership.contains_normal(&g)
            }
            PerMembership::Companion { v, vphi, lattice, swapped } => {
                let g = if *swapped { g.swap() } else { g.clone() };
                let Some(a) = g.y.exponent_over(v) else { return false };
                let b = if g.x.is_empty() {
                    0
                } else {
                    let (root, e) = vphi.primitive_root().unwrap();
                    match g.x.exponent_over(&root) {
                        Some(k) if k % e as i64 == 0 => k / e as i64,
                        _ => return false,
                    }
                };
                lattice.contains_i64(&[b, a])
            }
            PerMembership::PeriodicWithin { endo, limit } => {
                let mut cur = g.clone();
                for _ in 0..*limit {
                    cur = endo.apply(&cur);
                    if cur == *g {
                        return true;
                    }
                }
                false
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerReport {
    pub etype: EndoType,
    pub swapped: bool,
    pub verdict: Verdict,
    /// In the user's coordinates, sorted by length then shortlex.
    pub generators: Vec<PairElement>,
    /// Every period divides this bound.
    pub period_bound: Option<u64>,
    /// Generators grouped by their exact period.
    pub per_period: BTreeMap<u64, Vec<PairElement>>,
    pub structure_note: String,
    pub membership: PerMembership,
}

impl PerReport {
    pub fn contains(&self, g: &PairElement) -> bool {
        self.membership.contains(g)
    }
}

/// Least `k <= limit` with `y map^k = y`.
pub fn bounded_period(map: &FreeHom, y: &FreeWord, limit: u64) -> Option<u64> {
    let mut cur = y.clone();
    for k in 1..=limit {
        cur = map.apply(&cur);
        if cur == *y {
            return Some(k);
        }
        if cur.len() > ORBIT_LENGTH_CAP {
            return None;
        }
    }
    None
}

/// `Σ_{t < s·π} v_{t mod π} · up^{s·π - t - 1}` for one orbit of values `v`
/// repeated `s` times.
pub fn orbit_sum(up: &BigInt, values: &[BigInt], s: u32) -> BigInt {
    let total = values.len() * s as usize;
    let mut acc = BigInt::zero();
    for t in 0..total {
        acc = acc * up + &values[t % values.len()];
    }
    acc
}

/// `a = Σ_{t<π} v_t·up^{π-t-1} / (1 - up^π)` when the division is exact:
/// the exponent with `(u^a, w)` fixed by the `π`-th power.
pub fn geometric_criterion(up: &BigInt, values: &[BigInt]) -> Option<BigInt> {
    criterion_with_repeats(up, values, 1)
}

/// The same criterion stated for `s` turns around the orbit.
pub fn criterion_with_repeats(up: &BigInt, values: &[BigInt], s: u32) -> Option<BigInt> {
    let denom = BigInt::one() - up.pow(values.len() as u32 * s);
    if denom.is_zero() {
        return None;
    }
    let (q, r) = orbit_sum(up, values, s).div_rem(&denom);
    r.is_zero().then_some(q)
}

/// Checks that `orbit` is a closed `map`-orbit and applies
/// [`geometric_criterion`] to the values `(w map^t)^R`.
pub fn type3_per_criterion(up: i64, r: &[i64], map: &FreeHom, orbit: &[FreeWord]) -> Result<Option<BigInt>, PerError> {
    if orbit.is_empty() {
        return Err(PerError::OrbitNotClosed);
    }
    for (t, w) in orbit.iter().enumerate() {
        if map.apply(w) != orbit[(t + 1) % orbit.len()] {
            return Err(PerError::OrbitNotClosed);
        }
    }
    let values: Vec<BigInt> = orbit.iter().map(|w| BigInt::from(w.weighted_sum(r).unwrap())).collect();
    Ok(geometric_criterion(&BigInt::from(up), &values))
}

/// Basis of `Per(map)` when it can be read off: identity, trivial and
/// signed-permutation maps.
pub fn derive_per_basis(map: &FreeHom) -> Option<Vec<FreeWord>> {
    if map.domain != map.codomain {
        return None;
    }
    if map.is_trivial() {
        return Some(Vec::new());
    }
    map.signed_permutation()?;
    Some(map.domain.generators())
}

/// A basis of `Per(map)` and the lcm of the periods of its words.
fn resolve_per_basis(
    map: &FreeHom,
    oracle: Option<&SubgroupBasisInput>,
    tag: Tag,
    limit: u64,
) -> Result<Option<(Vec<FreeWord>, u64)>, PerError> {
    let words = match derive_per_basis(map) {
        Some(b) => b,
        None => match oracle.and_then(|o| o.get(tag)) {
            Some(ws) => ws
                .iter()
                .map(|w| {
                    w.relabel(map.domain).map_err(|_| PerError::PeriodBoundExceeded {
                        word: w.to_string(),
                        limit,
                    })
                })
                .collect::<Result<_, _>>()?,
            None => return Ok(None),
        },
    };
    let mut l = 1u64;
    for w in &words {
        let p = bounded_period(map, w, limit).ok_or_else(|| PerError::PeriodBoundExceeded {
            word: w.to_string(),
            limit,
        })?;
        l = l.lcm(&p);
    }
    Ok(Some((words, l)))
}

fn exact_period(e: &ProductEndo, g: &PairElement, bound: u64) -> u64 {
    let mut cur = g.clone();
    for k in 1..=bound {
        cur = e.apply(&cur);
        if cur == *g {
            return k;
        }
    }
    unreachable!("generator {g} not periodic within {bound}")
}

fn group_by_period(e: &ProductEndo, gens: &[PairElement], bound: u64) -> BTreeMap<u64, Vec<PairElement>> {
    let mut out: BTreeMap<u64, Vec<PairElement>> = BTreeMap::new();
    for g in gens {
        out.entry(exact_period(e, g, bound)).or_default().push(g.clone());
    }
    out
}

fn big_i64(x: &BigInt) -> Result<i64, PerError> {
    x.to_i64().ok_or(PerError::Overflow)
}

fn count_verdict(k: usize) -> Verdict {
    match k {
        0 => Verdict::Trivial,
        1 => Verdict::InfiniteCyclic,
        _ => Verdict::FinGen,
    }
}

fn report(
    e: &ProductEndo,
    verdict: Verdict,
    normal_gens: Vec<PairElement>,
    bound: Option<u64>,
    note: String,
    membership: PerMembership,
) -> PerReport {
    let mut generators: Vec<PairElement> = normal_gens.iter().map(|g| e.from_normal(g)).collect();
    normalize_generators(&mut generators);
    let per_period = match bound {
        Some(b) => group_by_period(e, &generators, b),
        None => BTreeMap::new(),
    };
    PerReport {
        etype: e.etype,
        swapped: e.swapped,
        verdict,
        generators,
        period_bound: bound,
        per_period,
        structure_note: note,
        membership,
    }
}

/// Computes `Per(e)` with generators grouped by period.
pub fn periodic_subgroup(e: &ProductEndo, oracle: Option<&SubgroupBasisInput>) -> Result<PerReport, PerError> {
    periodic_subgroup_with_limit(e, oracle, DEFAULT_PERIOD_LIMIT)
}

pub fn periodic_subgroup_with_limit(
    e: &ProductEndo,
    oracle: Option<&SubgroupBasisInput>,
    limit: u64,
) -> Result<PerReport, PerError> {
    let (n, m) = e.normalized_ranks();
    let al_b = Alphabet::b(m);
    let one_a = FreeWord::identity(Alphabet::a(n));
    match &e.data {
        TypeData::I { u, v, p, q, r, s } => {
            let (up, uq) = (u.weighted_sum(p).unwrap(), u.weighted_sum(q).unwrap());
            let (vr, vs) = (v.weighted_sum(r).unwrap(), v.weighted_sum(s).unwrap());
            let mat = IntMatrix::from_i64(&[&[up, vr], &[uq, vs]]);
            let lattice = periodic_lattice(&mat);
            let gens = lattice
                .basis
                .iter()
                .map(|b| Ok(PairElement::new(u.pow(big_i64(&b[0])?), v.pow(big_i64(&b[1])?))))
                .collect::<Result<Vec<_>, PerError>>()?;
            Ok(report(
                e,
                if lattice.is_trivial() { Verdict::Trivial } else { Verdict::Lattice },
                gens,
                Some(PERIOD_EXPONENT as u64),
                format!("Per = {{(u^a, v^b) : (a, b) in Per(M)}}, M = {mat}, Per(M) = Ker(M^12 - I) of rank {}", lattice.rank()),
                PerMembership::Subgroup {
                    membership: Membership::PowerLattice {
                        u: u.clone(),
                        v: v.clone(),
                        lattice,
                    },
                    swapped: e.swapped,
                },
            ))
        }
        TypeData::II { phi, v, q, s } => {
            let vphi = phi.apply(v);
            let c = vphi.weighted_sum(q).unwrap();
            let d = v.weighted_sum(s).unwrap();
            if !vphi.is_empty() {
                // (v^b phi, v^a) -> (v^a phi, v^(c b + d a))
                let mat = IntMatrix::from_i64(&[&[0, 1], &[c, d]]);
                let lattice = periodic_lattice(&mat);
                let gens = lattice
                    .basis
                    .iter()
                    .map(|ba| Ok(PairElement::new(vphi.pow(big_i64(&ba[0])?), v.pow(big_i64(&ba[1])?))))
                    .collect::<Result<Vec<_>, PerError>>()?;
                Ok(report(
                    e,
                    count_verdict(gens.len()),
                    gens,
                    Some(PERIOD_EXPONENT as u64),
                    format!(
                        "Per = {{(v^b phi, v^a) : (b, a) in Per(C)}}, C = {mat} acting on (b, a), v = {v}, v phi = {vphi}"
                    ),
                    PerMembership::Companion {
                        v: v.clone(),
                        vphi,
                        lattice,
                        swapped: e.swapped,
                    },
                ))
            } else {
                scalar_case(e, v, d, &one_a, al_b, "v phi = 1; Per = {(1, v^a)} when v^S = ±1")
            }
        }
        TypeData::V { v, s, .. } => {
            let d = v.weighted_sum(s).unwrap();
            scalar_case(e, v, d, &one_a, al_b, "Per = {(1, v^b)} when v^S = ±1")
        }
        TypeData::III { u, p, r, phi } => {
            let up = u.weighted_sum(p).unwrap();
            let tag = user_tag(e, Tag::B);
            let (basis, l0) = resolve_per_basis(phi, oracle, tag, limit)?.ok_or(PerError::OracleRequired(tag))?;
            let l = if up == -1 { 2 * l0 } else { l0 };
            let oracle2 = SubgroupBasisInput::default().with(tag, retag_all(&basis, tag));
            let mut rep = via_power(e, l, &oracle2, format!("u^P = {up}; component periods divide {l0}"))?;
            if up.abs() != 1 {
                check_type3_generators(e, up, r, phi, &rep.generators, limit)?;
            }
            rep.verdict = match rep.verdict {
                v @ (Verdict::NotFinGen | Verdict::Trivial | Verdict::InfiniteCyclic) => v,
                _ => count_verdict(rep.generators.len()),
            };
            Ok(rep)
        }
        TypeData::IV { psi, .. } => {
            let tag = user_tag(e, Tag::B);
            match resolve_per_basis(psi, oracle, tag, limit)? {
                Some((basis, l)) => {
                    let oracle2 = SubgroupBasisInput::default().with(tag, retag_all(&basis, tag));
                    via_power(e, l, &oracle2, "Per = {(y psi^(L-1) phi, y) : y in Per(psi)}".into())
                }
                None => Ok(conditional(e, limit, "Per = {(y psi^(pi_y - 1) phi, y) : y in Per(psi)}; basis of Per(psi) not supplied")),
            }
        }
        TypeData::VI { phi, psi } => {
            let ba = resolve_per_basis(phi, oracle, Tag::A, limit)?;
            let bb = resolve_per_basis(psi, oracle, Tag::B, limit)?;
            match (ba, bb) {
                (Some((wa, la)), Some((wb, lb))) => {
                    let oracle2 = SubgroupBasisInput::default().with(Tag::A, wa).with(Tag::B, wb);
                    via_power(e, la.lcm(&lb), &oracle2, "Per = Per(phi) x Per(psi)".into())
                }
                _ => Ok(conditional(e, limit, "Per = Per(phi) x Per(psi); a component basis was not supplied")),
            }
        }
        TypeData::VII { phi, psi } => {
            let ba = resolve_per_basis(&phi.then(psi), oracle, Tag::A, limit)?;
            let bb = resolve_per_basis(&psi.then(phi), oracle, Tag::B, limit)?;
            match (ba, bb) {
                (Some((wa, la)), Some((wb, lb))) => {
                    let oracle2 = SubgroupBasisInput::default().with(Tag::A, wa).with(Tag::B, wb);
                    via_power(
                        e,
                        2 * la.lcm(&lb),
                        &oracle2,
                        "Per = Per(phi psi) x Per(psi phi); odd-period points are (x, x (phi psi)^((pi_x - 1)/2) phi)".into(),
                    )
                }
                _ => Ok(conditional(e, limit, "Per = Per(phi psi) x Per(psi phi); a component basis was not supplied")),
            }
        }
    }
}

fn retag_all(words: &[FreeWord], tag: Tag) -> Vec<FreeWord> {
    words
        .iter()
        .map(|w| w.relabel(Alphabet::new(w.alphabet().rank, tag)).unwrap())
        .collect()
}

fn scalar_case(e: &ProductEndo, v: &FreeWord, d: i64, one_a: &FreeWord, al_b: Alphabet, note: &str) -> Result<PerReport, PerError> {
    let periodic = d.abs() == 1;
    let (gens, bound) = if periodic {
        (vec![PairElement::new(one_a.clone(), v.clone())], Some(if d == 1 { 1 } else { 2 }))
    } else {
        (Vec::new(), Some(1))
    };
    let graph = if periodic {
        SubgroupGraph::fold(al_b, std::slice::from_ref(v))
    } else {
        SubgroupGraph::trivial(al_b)
    };
    Ok(report(
        e,
        if periodic { Verdict::InfiniteCyclic } else { Verdict::Trivial },
        gens,
        bound,
        format!("{note}; v^S = {d}, v = {v}"),
        PerMembership::Subgroup {
            membership: Membership::Graph {
                tag: Tag::B,
                graph,
                section: crate::fixed::Section::Hom(FreeHom::trivial(al_b, Alphabet::a(one_a.alphabet().rank))),
            },
            swapped: e.swapped,
        },
    ))
}

fn conditional(e: &ProductEndo, limit: u64, note: &str) -> PerReport {
    PerReport {
        etype: e.etype,
        swapped: e.swapped,
        verdict: Verdict::ConditionalOnOracle,
        generators: Vec::new(),
        period_bound: None,
        per_period: BTreeMap::new(),
        structure_note: note.to_string(),
        membership: PerMembership::PeriodicWithin {
            endo: Box::new(e.clone()),
            limit,
        },
    }
}

/// `Per(e) = Fix(e^l)` when every period divides `l`.
fn via_power(e: &ProductEndo, l: u64, oracle: &SubgroupBasisInput, note: String) -> Result<PerReport, PerError> {
    let el = e.power(l)?;
    let fix = fixed_subgroup(&el, Some(oracle))?;
    let mut rep = report(
        e,
        fix.verdict,
        Vec::new(),
        Some(l),
        format!("{note}; every period divides L = {l}, Per = Fix(e^{l}): {}", fix.structure_note),
        PerMembership::Subgroup {
            membership: fix.membership.clone(),
            swapped: fix.swapped,
        },
    );
    rep.generators = fix.generators.clone();
    rep.per_period = group_by_period(e, &rep.generators, l);
    Ok(rep)
}

/// Recomputes the first coordinate of each Type III generator from the
/// orbit criterion and compares.
fn check_type3_generators(
    e: &ProductEndo,
    up: i64,
    r: &[i64],
    phi: &FreeHom,
    gens: &[PairElement],
    limit: u64,
) -> Result<(), PerError> {
    let TypeData::III { u, .. } = &e.data else { unreachable!() };
    for g in gens {
        let g_n = e.to_normal(g);
        let w = &g_n.y;
        let pi = bounded_period(phi, w, limit.max(1)).ok_or(PerError::CriterionMismatch(g.to_string()))?;
        let orbit: Vec<FreeWord> = (0..pi).map(|t| phi.power(t).apply(w)).collect();
        let a = type3_per_criterion(up, r, phi, &orbit)?.ok_or(PerError::CriterionMismatch(g.to_string()))?;
        if g_n.x != u.pow(big_i64(&a)?) {
            return Err(PerError::CriterionMismatch(g.to_string()));
        }
    }
    Ok(())
}

/// The two pieces of `Per` for Type VII: graphs of `Per(phi psi)` and
/// `Per(psi phi)` (their product is all of `Per`), and the partner map
/// for odd periods.
#[derive(Debug, Clone)]
pub struct Type7Split {
    pub per_a: SubgroupGraph,
    pub per_b: SubgroupGraph,
    phi: FreeHom,
    psi: FreeHom,
    limit: u64,
}

impl Type7Split {
    pub fn new(e: &ProductEndo, oracle: Option<&SubgroupBasisInput>, limit: u64) -> Result<Type7Split, PerError> {
        let TypeData::VII { phi, psi } = &e.data else {
            return Err(PerError::Endo(EndoError::InconsistentRoots));
        };
        let (wa, _) = resolve_per_basis(&phi.then(psi), oracle, Tag::A, limit)?.ok_or(PerError::OracleRequired(Tag::A))?;
        let (wb, _) = resolve_per_basis(&psi.then(phi), oracle, Tag::B, limit)?.ok_or(PerError::OracleRequired(Tag::B))?;
        Ok(Type7Split {
            per_a: SubgroupGraph::fold(phi.domain, &wa),
            per_b: SubgroupGraph::fold(psi.domain, &wb),
            phi: phi.clone(),
            psi: psi.clone(),
            limit,
        })
    }

    pub fn in_even_part(&self, g: &PairElement) -> bool {
        self.per_a.contains(&g.x) && self.per_b.contains(&g.y)
    }

    /// `x (phi psi)^((pi_x - 1)/2) phi` when `x` is periodic with odd period.
    pub fn odd_partner(&self, x: &FreeWord) -> Option<FreeWord> {
        let comp = self.phi.then(&self.psi);
        let pi = bounded_period(&comp, x, self.limit)?;
        (pi % 2 == 1).then(|| self.phi.apply(&comp.power((pi - 1) / 2).apply(x)))
    }

    pub fn in_odd_part(&self, g: &PairElement) -> bool {
        self.per_a.contains(&g.x) && self.odd_partner(&g.x).as_ref() == Some(&g.y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::endo::{validate_and_classify, EndoSpec};
    use crate::freeword::Letter;

    fn pe(x: &[Letter], y: &[Letter]) -> PairElement {
        PairElement::from_letters(2, 2, x, y).unwrap()
    }

    fn endo(a: [(&[Letter], &[Letter]); 2], b: [(&[Letter], &[Letter]); 2]) -> ProductEndo {
        let spec = EndoSpec::new(2, 2, a.iter().map(|(x, y)| pe(x, y)).collect(), b.iter().map(|(x, y)| pe(x, y)).collect()).unwrap();
        validate_and_classify(&spec).unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn type_one_involution() {
        // P = (0, 1), Q = (1, 0), R = (1, 0), S = (0, 1)
        let e = endo([(&[], &[1]), (&[1], &[])], [(&[1], &[]), (&[], &[1])]);
        assert_eq!(e.etype, EndoType::I);
        let r = periodic_subgroup(&e, None).unwrap();
        assert_eq!(r.period_bound, Some(12));
        assert!(r.per_period.keys().all(|&k| k <= 2));
        let g = pe(&[1], &[-1]);
        assert!(r.contains(&g));
        assert_eq!(e.apply_power(&g, 2), g);
    }

    #[test]
    fn type_five_minus_one() {
        // v = b1, S = (-1, 0)
        let e = endo([(&[], &[1]), (&[], &[])], [(&[], &[-1]), (&[], &[])]);
        assert_eq!(e.etype, EndoType::V);
        let r = periodic_subgroup(&e, None).unwrap();
        assert_eq!(r.verdict, Verdict::InfiniteCyclic);
        assert_eq!(r.generators, vec![pe(&[], &[1])]);
        assert_eq!(r.per_period.keys().copied().collect::<Vec<_>>(), vec![2]);
    }

    #[test]
    fn swap_everything_periodic() {
        let e = endo([(&[], &[1]), (&[], &[2])], [(&[1], &[]), (&[2], &[])]);
        let r = periodic_subgroup(&e, None).unwrap();
        assert_eq!(r.generators.len(), 4);
        assert!(r.contains(&pe(&[1, 2, -1], &[2, 2])));
    }

    #[test]
    fn type_three_doubling() {
        // u = a1, u^P = 2, identity component, R = (3, 0)
        let e = endo([(&[1, 1], &[]), (&[], &[])], [(&[1, 1, 1], &[1]), (&[], &[2])]);
        let r = periodic_subgroup(&e, None).unwrap();
        assert!(r.contains(&pe(&[-1, -1, -1], &[1])));
        assert!(!r.contains(&pe(&[], &[1])));
        let id = FreeHom::identity(Alphabet::b(2));
        let b1 = FreeWord::reduce(&[1], Alphabet::b(2)).unwrap();
        assert_eq!(type3_per_criterion(2, &[3, 0], &id, &[b1]).unwrap(), Some(BigInt::from(-3)));
    }

    #[test]
    fn criterion_examples() {
        assert_eq!(geometric_criterion(&2.into(), &big(&[3])), Some((-3).into()));
        assert_eq!(geometric_criterion(&3.into(), &big(&[0])), Some(0.into()));
        assert_eq!(geometric_criterion(&2.into(), &big(&[2, 1])), None);
    }

    #[test]
    fn orbit_not_closed() {
        let id = FreeHom::identity(Alphabet::b(2));
        let w = |r: &[Letter]| FreeWord::reduce(r, Alphabet::b(2)).unwrap();
        assert_eq!(type3_per_criterion(2, &[1, 0], &id, &[w(&[1]), w(&[2])]), Err(PerError::OrbitNotClosed));
    }

    #[test]
    fn bounded_period_examples() {
        let b = Alphabet::b(2);
        let w = |r: &[Letter]| FreeWord::reduce(r, b).unwrap();
        let swap = FreeHom::new(b, b, vec![w(&[2]), w(&[1])]).unwrap();
        assert_eq!(bounded_period(&swap, &w(&[1]), 10), Some(2));
        assert_eq!(bounded_period(&swap, &w(&[1, 2]), 10), Some(2));
        assert_eq!(bounded_period(&FreeHom::identity(b), &w(&[2, 1, 1]), 10), Some(1));
        let grow = FreeHom::new(b, b, vec![w(&[1, 1]), w(&[2])]).unwrap();
        assert_eq!(bounded_period(&grow, &w(&[1]), 10), None);
    }
}
