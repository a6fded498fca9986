//! Fixed subgroups of endomorphisms of `F_n x F_m`, type by type.
//!
//! Free-group component maps need a basis of their own fixed subgroup. For
//! identity, trivial and signed-permutation maps it is derived here;
//! anything else must come from a [`SubgroupBasisInput`].

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::endo::{normalize_generators, EndoError, EndoType, FreeHom, PairElement, ProductEndo, TypeData};
use crate::freeword::{words_up_to, Alphabet, FreeWord, Letter, Tag};
use crate::intlinalg::{kernel_basis, IntMatrix, Lattice};
use crate::stallings::{build_weighted, subgroup_of_weighted, StallingsError, SubgroupGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixError {
    #[error("a basis for the fixed subgroup of the {0:?}-component map is required (supply one with an oracle)")]
    OracleRequired(Tag),
    #[error("oracle word {word} is not fixed by the {tag:?}-component map")]
    OracleWordNotFixed { tag: Tag, word: String },
    #[error("exponent too large for this computation")]
    Overflow,
    #[error(transparent)]
    Stallings(#[from] StallingsError),
    #[error(transparent)]
    Endo(#[from] EndoError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Trivial,
    InfiniteCyclic,
    Lattice,
    FinGen,
    NotFinGen,
    ConditionalOnOracle,
}

impl Verdict {
    pub fn describe(self) -> &'static str {
        match self {
            Verdict::Trivial => "trivial",
            Verdict::InfiniteCyclic => "infinite cyclic",
            Verdict::Lattice => "lattice",
            Verdict::FinGen => "finitely generated",
            Verdict::NotFinGen => "NOT finitely generated",
            Verdict::ConditionalOnOracle => "conditional on oracle",
        }
    }

    /// Whether the verdict settles the question without outside input.
    pub fn is_decided(self) -> bool {
        self != Verdict::ConditionalOnOracle
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.describe())
    }
}

/// User-supplied bases for subgroups of the free factors, keyed by the tag
/// of the factor in the user's coordinates. A tag that is `None` was not
/// supplied.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupBasisInput {
    pub a: Option<Vec<FreeWord>>,
    pub b: Option<Vec<FreeWord>>,
}

impl SubgroupBasisInput {
    pub fn get(&self, tag: Tag) -> Option<&[FreeWord]> {
        match tag {
            Tag::A => self.a.as_deref(),
            Tag::B => self.b.as_deref(),
        }
    }

    pub fn with(mut self, tag: Tag, words: Vec<FreeWord>) -> Self {
        match tag {
            Tag::A => self.a = Some(words),
            Tag::B => self.b = Some(words),
        }
        self
    }
}

/// `x = (y) section` for the component that is not read by the graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Section {
    Hom(FreeHom),
    /// `x = u^(y^R / divisor)`
    Power { u: FreeWord, weights: Vec<i64>, divisor: i64 },
}

impl Section {
    fn eval(&self, w: &FreeWord) -> Option<FreeWord> {
        match self {
            Section::Hom(h) => Some(h.apply(w)),
            Section::Power { u, weights, divisor } => {
                let t = w.weighted_sum(weights).ok()?;
                (t % divisor == 0).then(|| u.pow(t / divisor))
            }
        }
    }
}

/// Membership test for a computed subgroup, in normalized coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Membership {
    /// `{(u^a, v^b) : (a, b) in lattice}`
    PowerLattice { u: FreeWord, v: FreeWord, lattice: Lattice },
    /// Pairs whose `tag` component lies in `graph` and whose other component
    /// is its image under `section`.
    Graph { tag: Tag, graph: SubgroupGraph, section: Section },
    Product { a: SubgroupGraph, b: SubgroupGraph },
    /// `{(u^k, y) : y in fix, y^R = 0}`
    CounterKernel { u: FreeWord, fix: SubgroupGraph, weights: Vec<i64> },
    /// Direct check against the endomorphism.
    FixedBy(Box<ProductEndo>),
}

impl Membership {
    pub fn contains_normal(&self, g: &PairElement) -> bool {
        match self {
            Membership::PowerLattice { u, v, lattice } => {
                let (Some(a), Some(b)) = (g.x.exponent_over(u), g.y.exponent_over(v)) else {
                    return false;
                };
                lattice.contains_i64(&[a, b])
            }
            Membership::Graph { tag, graph, section } => {
                let (read, other) = match tag {
                    Tag::A => (&g.x, &g.y),
                    Tag::B => (&g.y, &g.x),
                };
                graph.contains(read) && section.eval(read).as_ref() == Some(other)
            }
            Membership::Product { a, b } => a.contains(&g.x) && b.contains(&g.y),
            Membership::CounterKernel { u, fix, weights } => {
                g.x.exponent_over(u).is_some() && fix.contains(&g.y) && type3_counter_membership(&g.y, weights)
            }
            Membership::FixedBy(e) => e.apply_normal(g) == *g,
        }
    }
}

/// Evidence that the fixed subgroup is not finitely generated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NotFinGenWitness {
    /// Basis of the component's fixed subgroup with the value of `y^R` on each.
    pub basis_values: Vec<(FreeWord, i64)>,
    pub weights: Vec<i64>,
    /// Distinct elements `g^k [h, g] g^-k` of the kernel, as fixed points.
    pub samples: Vec<PairElement>,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixReport {
    pub etype: EndoType,
    pub swapped: bool,
    pub verdict: Verdict,
    /// In the user's coordinates, sorted by length then shortlex.
    pub generators: Vec<PairElement>,
    pub structure_note: String,
    pub membership: Membership,
    pub witness: Option<NotFinGenWitness>,
}

impl FixReport {
    /// Membership of `g` (user coordinates) in the described subgroup.
    pub fn contains(&self, g: &PairElement) -> bool {
        let g = if self.swapped { g.swap() } else { g.clone() };
        self.membership.contains_normal(&g)
    }
}

/// Basis of `Fix(map)` when it can be read off directly.
pub fn derive_fix_basis(map: &FreeHom) -> Option<Vec<FreeWord>> {
    if map.domain != map.codomain {
        return None;
    }
    if map.is_trivial() {
        return Some(Vec::new());
    }
    // a signed permutation acts letter by letter, so a reduced word is fixed
    // exactly when each of its letters is
    let perm = map.signed_permutation()?;
    Some(
        perm.iter()
            .enumerate()
            .filter(|(i, &x)| x == *i as Letter + 1)
            .map(|(i, _)| FreeWord::letter(map.domain, i as Letter + 1).unwrap())
            .collect(),
    )
}

/// Resolves a basis for a subgroup of `map`'s domain that `map` must fix:
/// derived when possible, otherwise the oracle words for `user_tag`, each
/// checked to be fixed.
pub(crate) fn resolve_basis(
    map: &FreeHom,
    oracle: Option<&SubgroupBasisInput>,
    user_tag: Tag,
) -> Result<Option<Vec<FreeWord>>, FixError> {
    if let Some(b) = derive_fix_basis(map) {
        return Ok(Some(b));
    }
    let Some(words) = oracle.and_then(|o| o.get(user_tag)) else {
        return Ok(None);
    };
    let mut out = Vec::with_capacity(words.len());
    for w in words {
        let w = w.relabel(map.domain).map_err(|_| FixError::OracleWordNotFixed {
            tag: user_tag,
            word: w.to_string(),
        })?;
        if map.apply(&w) != w {
            return Err(FixError::OracleWordNotFixed {
                tag: user_tag,
                word: w.to_string(),
            });
        }
        out.push(w);
    }
    Ok(Some(out))
}

/// Tag in the user's coordinates of a normalized factor.
pub(crate) fn user_tag(e: &ProductEndo, normal: Tag) -> Tag {
    if e.swapped {
        normal.other()
    } else {
        normal
    }
}

/// `Σ τ_j(y) r_j = 0`, decided by running a single counter over `y`.
pub fn type3_counter_membership(y: &FreeWord, r: &[i64]) -> bool {
    let mut counter: i128 = 0;
    for &x in y.letters() {
        counter += x.signum() as i128 * r[x.unsigned_abs() as usize - 1] as i128;
    }
    counter == 0
}

/// `Fix(component) ∩ {y : modulus divides y^R}`.
pub fn type3_h_graph(r: &[i64], modulus: u64, fixbasis: &[FreeWord], alphabet: Alphabet) -> Result<SubgroupGraph, FixError> {
    let aut = build_weighted(r, modulus)?;
    let weighted = subgroup_of_weighted(&aut, alphabet)?;
    Ok(SubgroupGraph::fold(alphabet, fixbasis).intersect(&weighted))
}

fn verdict_for_count(k: usize) -> Verdict {
    match k {
        0 => Verdict::Trivial,
        1 => Verdict::InfiniteCyclic,
        _ => Verdict::FinGen,
    }
}

fn big_to_i64(x: &BigInt) -> Result<i64, FixError> {
    x.to_i64().ok_or(FixError::Overflow)
}

struct Draft {
    verdict: Verdict,
    generators: Vec<PairElement>,
    note: String,
    membership: Membership,
    witness: Option<NotFinGenWitness>,
}

fn finish(e: &ProductEndo, d: Draft) -> FixReport {
    let mut generators: Vec<PairElement> = d.generators.iter().map(|g| e.from_normal(g)).collect();
    normalize_generators(&mut generators);
    debug_assert!(generators.iter().all(|g| e.apply(g) == *g), "unsound fixed generator");
    FixReport {
        etype: e.etype,
        swapped: e.swapped,
        verdict: d.verdict,
        generators,
        structure_note: d.note,
        membership: d.membership,
        witness: d.witness,
    }
}

fn conditional(e: &ProductEndo, note: String) -> Draft {
    Draft {
        verdict: Verdict::ConditionalOnOracle,
        generators: Vec::new(),
        note,
        membership: Membership::FixedBy(Box::new(e.clone())),
        witness: None,
    }
}

/// Computes `Fix(e)` with a verdict and certificate generators.
pub fn fixed_subgroup(e: &ProductEndo, oracle: Option<&SubgroupBasisInput>) -> Result<FixReport, FixError> {
    let (n, m) = e.normalized_ranks();
    let (al_a, al_b) = (Alphabet::a(n), Alphabet::b(m));
    let one_a = FreeWord::identity(al_a);
    let one_b = FreeWord::identity(al_b);
    let draft = match &e.data {
        TypeData::I { u, v, p, q, r, s } => {
            let (up, uq) = (u.weighted_sum(p).unwrap(), u.weighted_sum(q).unwrap());
            let (vr, vs) = (v.weighted_sum(r).unwrap(), v.weighted_sum(s).unwrap());
            let mat = IntMatrix::from_i64(&[&[up - 1, vr], &[uq, vs - 1]]);
            let lattice = kernel_basis(&mat);
            let mut generators = Vec::new();
            for b in &lattice.basis {
                generators.push(PairElement::new(u.pow(big_to_i64(&b[0])?), v.pow(big_to_i64(&b[1])?)));
            }
            Draft {
                verdict: if lattice.is_trivial() { Verdict::Trivial } else { Verdict::Lattice },
                generators,
                note: format!(
                    "Fix = {{(u^a, v^b) : (a, b) in Ker M}}, u = {u}, v = {v}, M = {mat}, kernel rank {}",
                    lattice.rank()
                ),
                membership: Membership::PowerLattice {
                    u: u.clone(),
                    v: v.clone(),
                    lattice,
                },
                witness: None,
            }
        }
        TypeData::II { phi, v, q, s } => {
            let vphi = phi.apply(v);
            let c = vphi.weighted_sum(q).unwrap() + v.weighted_sum(s).unwrap();
            let fixed = c == 1;
            let graph = if fixed {
                SubgroupGraph::fold(al_b, std::slice::from_ref(v))
            } else {
                SubgroupGraph::trivial(al_b)
            };
            Draft {
                verdict: if fixed { Verdict::InfiniteCyclic } else { Verdict::Trivial },
                generators: if fixed { vec![PairElement::new(vphi, v.clone())] } else { Vec::new() },
                note: format!("(v phi)^Q + v^S = {c}; Fix = {{(v^b phi, v^b)}} when this is 1, v = {v}"),
                membership: Membership::Graph {
                    tag: Tag::B,
                    graph,
                    section: Section::Hom(phi.clone()),
                },
                witness: None,
            }
        }
        TypeData::III { u, p, r, phi } => {
            let up = u.weighted_sum(p).unwrap();
            let tag = user_tag(e, Tag::B);
            let basis = resolve_basis(phi, oracle, tag)?.ok_or(FixError::OracleRequired(tag))?;
            if up == 1 {
                type3_unit(u, r, &basis, al_a, al_b)
            } else {
                let modulus = (up - 1).unsigned_abs();
                let g = type3_h_graph(r, modulus, &basis, al_b)?;
                let divisor = 1 - up;
                let generators: Vec<PairElement> = g
                    .basis()
                    .into_iter()
                    .map(|y| {
                        let t = y.weighted_sum(r).unwrap();
                        PairElement::new(u.pow(t / divisor), y)
                    })
                    .collect();
                Draft {
                    verdict: verdict_for_count(generators.len()),
                    note: format!(
                        "u^P = {up}; Fix = {{(u^(y^R/(1-u^P)), y) : y in G}}, G = Fix(phi) ∩ {{y : {modulus} divides y^R}}, rank {}",
                        g.rank()
                    ),
                    generators,
                    membership: Membership::Graph {
                        tag: Tag::B,
                        graph: g,
                        section: Section::Power {
                            u: u.clone(),
                            weights: r.clone(),
                            divisor,
                        },
                    },
                    witness: None,
                }
            }
        }
        TypeData::IV { phi, psi } => {
            let tag = user_tag(e, Tag::B);
            match resolve_basis(psi, oracle, tag)? {
                None => conditional(e, "Fix = {(y phi, y) : y in Fix(psi)}; basis of Fix(psi) not supplied".into()),
                Some(basis) => {
                    let graph = SubgroupGraph::fold(al_b, &basis);
                    let generators: Vec<PairElement> =
                        graph.basis().into_iter().map(|y| PairElement::new(phi.apply(&y), y)).collect();
                    Draft {
                        verdict: verdict_for_count(generators.len()),
                        note: format!("Fix = {{(y phi, y) : y in Fix(psi)}}, isomorphic to Fix(psi) of rank {}", graph.rank()),
                        generators,
                        membership: Membership::Graph {
                            tag: Tag::B,
                            graph,
                            section: Section::Hom(phi.clone()),
                        },
                        witness: None,
                    }
                }
            }
        }
        TypeData::V { v, s, .. } => {
            let vs = v.weighted_sum(s).unwrap();
            let fixed = vs == 1;
            Draft {
                verdict: if fixed { Verdict::InfiniteCyclic } else { Verdict::Trivial },
                generators: if fixed { vec![PairElement::new(one_a.clone(), v.clone())] } else { Vec::new() },
                note: format!("v^S = {vs}; Fix = {{(1, v^b)}} when this is 1, v = {v}"),
                membership: Membership::Graph {
                    tag: Tag::B,
                    graph: if fixed {
                        SubgroupGraph::fold(al_b, std::slice::from_ref(v))
                    } else {
                        SubgroupGraph::trivial(al_b)
                    },
                    section: Section::Hom(FreeHom::trivial(al_b, al_a)),
                },
                witness: None,
            }
        }
        TypeData::VI { phi, psi } => {
            let ba = resolve_basis(phi, oracle, Tag::A)?;
            let bb = resolve_basis(psi, oracle, Tag::B)?;
            match (ba, bb) {
                (Some(ba), Some(bb)) => {
                    let (ga, gb) = (SubgroupGraph::fold(al_a, &ba), SubgroupGraph::fold(al_b, &bb));
                    let mut generators: Vec<PairElement> =
                        ga.basis().into_iter().map(|x| PairElement::new(x, one_b.clone())).collect();
                    generators.extend(gb.basis().into_iter().map(|y| PairElement::new(one_a.clone(), y)));
                    Draft {
                        verdict: verdict_for_count(generators.len()),
                        note: format!("Fix = Fix(phi) x Fix(psi), ranks {} and {}", ga.rank(), gb.rank()),
                        generators,
                        membership: Membership::Product { a: ga, b: gb },
                        witness: None,
                    }
                }
                (ba, bb) => {
                    let missing: Vec<&str> = [(ba.is_none(), "Fix(phi)"), (bb.is_none(), "Fix(psi)")]
                        .into_iter()
                        .filter(|t| t.0)
                        .map(|t| t.1)
                        .collect();
                    conditional(e, format!("Fix = Fix(phi) x Fix(psi); basis of {} not supplied", missing.join(" and ")))
                }
            }
        }
        TypeData::VII { phi, psi } => {
            let comp = phi.then(psi);
            match resolve_basis(&comp, oracle, Tag::A)? {
                Some(basis) => type7_from_a(phi, &basis, al_a),
                None => match resolve_basis(&psi.then(phi), oracle, Tag::B)? {
                    Some(basis) => type7_from_b(psi, &basis, al_b),
                    None => conditional(e, "Fix = {(x, x phi) : x in Fix(phi psi)}; basis of Fix(phi psi) not supplied".into()),
                },
            }
        }
    };
    Ok(finish(e, draft))
}

fn type7_from_a(phi: &FreeHom, basis: &[FreeWord], al_a: Alphabet) -> Draft {
    let graph = SubgroupGraph::fold(al_a, basis);
    let generators: Vec<PairElement> = graph.basis().into_iter().map(|x| PairElement::new(x.clone(), phi.apply(&x))).collect();
    Draft {
        verdict: verdict_for_count(generators.len()),
        note: format!("Fix = {{(x, x phi) : x in Fix(phi psi)}}, rank {}", graph.rank()),
        generators,
        membership: Membership::Graph {
            tag: Tag::A,
            graph,
            section: Section::Hom(phi.clone()),
        },
        witness: None,
    }
}

fn type7_from_b(psi: &FreeHom, basis: &[FreeWord], al_b: Alphabet) -> Draft {
    let graph = SubgroupGraph::fold(al_b, basis);
    let generators: Vec<PairElement> = graph.basis().into_iter().map(|y| PairElement::new(psi.apply(&y), y)).collect();
    Draft {
        verdict: verdict_for_count(generators.len()),
        note: format!("Fix = {{(y psi, y) : y in Fix(psi phi)}}, rank {}", graph.rank()),
        generators,
        membership: Membership::Graph {
            tag: Tag::B,
            graph,
            section: Section::Hom(psi.clone()),
        },
        witness: None,
    }
}

/// Both descriptions of the fixed subgroup of a Type VII endomorphism: via
/// `Fix(phi psi)` and via `Fix(psi phi)`.
pub fn type7_fix_descriptions(e: &ProductEndo, oracle: Option<&SubgroupBasisInput>) -> Result<(FixReport, FixReport), FixError> {
    let TypeData::VII { phi, psi } = &e.data else {
        return Err(FixError::Endo(EndoError::InconsistentRoots));
    };
    let (n, m) = e.normalized_ranks();
    let ba = resolve_basis(&phi.then(psi), oracle, Tag::A)?.ok_or(FixError::OracleRequired(Tag::A))?;
    let bb = resolve_basis(&psi.then(phi), oracle, Tag::B)?.ok_or(FixError::OracleRequired(Tag::B))?;
    Ok((
        finish(e, type7_from_a(phi, &ba, Alphabet::a(n))),
        finish(e, type7_from_b(psi, &bb, Alphabet::b(m))),
    ))
}

/// Type III with `u^P = 1`: `Fix = <u> x H`, `H = {y in Fix(phi) : y^R = 0}`.
fn type3_unit(u: &FreeWord, r: &[i64], basis: &[FreeWord], al_a: Alphabet, al_b: Alphabet) -> Draft {
    let fix = SubgroupGraph::fold(al_b, basis);
    let fix_basis = fix.basis();
    let values: Vec<(FreeWord, i64)> = fix_basis.iter().map(|y| (y.clone(), y.weighted_sum(r).unwrap())).collect();
    let one_b = FreeWord::identity(al_b);
    let one_a = FreeWord::identity(al_a);
    let mut generators = vec![PairElement::new(u.clone(), one_b)];
    let membership = Membership::CounterKernel {
        u: u.clone(),
        fix: fix.clone(),
        weights: r.to_vec(),
    };
    let all_zero = values.iter().all(|(_, t)| *t == 0);
    if all_zero {
        generators.extend(fix_basis.iter().map(|y| PairElement::new(one_a.clone(), y.clone())));
        return Draft {
            verdict: verdict_for_count(generators.len()),
            generators,
            note: format!(
                "u^P = 1; Fix = <u> x H with H = {{y in Fix(phi) : y^R = 0}} = Fix(phi), since y^R vanishes on Fix(phi) (rank {})",
                fix.rank()
            ),
            membership,
            witness: None,
        };
    }
    if fix.rank() <= 1 {
        return Draft {
            verdict: Verdict::InfiniteCyclic,
            generators,
            note: "u^P = 1; Fix = <u> x H with H = {y in Fix(phi) : y^R = 0} trivial, since Fix(phi) is cyclic with y^R nonzero".into(),
            membership,
            witness: None,
        };
    }
    // H is a nontrivial normal subgroup of infinite index in a free group of
    // rank at least 2, hence not finitely generated
    let (g, c) = values.iter().find(|(_, t)| *t != 0).cloned().unwrap();
    let h = fix_basis.iter().find(|y| **y != g).unwrap().clone();
    let comm = h.mul(&g).mul(&h.inverse()).mul(&g.inverse());
    let samples = (0..4)
        .map(|k| PairElement::new(one_a.clone(), comm.conjugate_by(&g.pow(-k))))
        .collect();
    let description = format!(
        "H = {{y in Fix(phi) : y^R = 0}} with R = {:?} is the kernel of a nonzero map Fix(phi) -> Z ({g} -> {c}) on a free group of rank {}; a nontrivial normal subgroup of infinite index in a free group of rank >= 2 is not finitely generated. Its words are not a rational language.",
        r,
        fix.rank()
    );
    Draft {
        verdict: Verdict::NotFinGen,
        generators: Vec::new(),
        note: format!("u^P = 1; Fix = <u> x H, {description}"),
        membership,
        witness: Some(NotFinGenWitness {
            basis_values: values,
            weights: r.to_vec(),
            samples,
            description,
        }),
    }
}

/// All reduced words of length at most `max_len` fixed by `map`. Exhaustive
/// and therefore only for small cases; reports never rely on it.
pub fn bounded_fixed_words(map: &FreeHom, max_len: usize) -> Vec<FreeWord> {
    words_up_to(map.domain, max_len)
        .into_iter()
        .filter(|w| map.apply(w) == *w)
        .collect()
}

/// Basis of the subgroup generated by the fixed words up to `max_len`.
pub fn bounded_fix_basis(map: &FreeHom, max_len: usize) -> Vec<FreeWord> {
    let words: Vec<FreeWord> = bounded_fixed_words(map, max_len).into_iter().filter(|w| !w.is_empty()).collect();
    SubgroupGraph::fold(map.domain, &words).basis()
}
