//! Endomorphisms of `F_n x F_m`: validation, classification into the seven
//! types, application, composition and morphism properties.
//!
//! A classified endomorphism keeps its original spec and stores the per-type
//! data in *normalized* coordinates. Types II-V are each described for one
//! pattern of trivial image sets; the mirrored pattern is handled by swapping
//! the two factors, recorded in [`ProductEndo::swapped`].

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::freeword::{Alphabet, FreeWord, Letter, Tag, WordError};
use crate::stallings::{SubgroupGraph, TrackedGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EndoError {
    #[error("images of a{i} and b{j} do not commute in the {component:?} component")]
    CommutationViolation { i: usize, j: usize, component: Tag },
    #[error("image words are not powers of a common root")]
    InconsistentRoots,
    #[error("not an automorphism")]
    NotAnAutomorphism,
    #[error("expected {expected} images, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("ambient groups differ: F{0}xF{1} vs F{2}xF{3}")]
    AmbientMismatch(usize, usize, usize, usize),
    #[error("factor ranks must be at least 2 (got n={n}, m={m})")]
    RankTooSmall { n: usize, m: usize },
    #[error(transparent)]
    Word(#[from] WordError),
}

/// A homomorphism between free groups given by generator images.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FreeHom {
    pub domain: Alphabet,
    pub codomain: Alphabet,
    pub images: Vec<FreeWord>,
}

impl FreeHom {
    pub fn new(domain: Alphabet, codomain: Alphabet, images: Vec<FreeWord>) -> Result<Self, EndoError> {
        if images.len() != domain.rank {
            return Err(EndoError::WrongArity {
                expected: domain.rank,
                got: images.len(),
            });
        }
        for w in &images {
            if w.alphabet() != codomain {
                return Err(WordError::AlphabetMismatch {
                    left: w.alphabet(),
                    right: codomain,
                }
                .into());
            }
        }
        Ok(FreeHom {
            domain,
            codomain,
            images,
        })
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        FreeHom {
            domain: alphabet,
            codomain: alphabet,
            images: alphabet.generators(),
        }
    }

    pub fn trivial(domain: Alphabet, codomain: Alphabet) -> Self {
        FreeHom {
            domain,
            codomain,
            images: vec![FreeWord::identity(codomain); domain.rank],
        }
    }

    pub fn apply(&self, w: &FreeWord) -> FreeWord {
        assert_eq!(w.alphabet(), self.domain, "word outside the domain");
        let letters = w.letters().iter().flat_map(|&x| {
            let img = &self.images[x.unsigned_abs() as usize - 1];
            let seq: Vec<Letter> = if x > 0 {
                img.letters().to_vec()
            } else {
                img.letters().iter().rev().map(|y| -y).collect()
            };
            seq
        });
        FreeWord::collect_reduced(self.codomain, letters)
    }

    /// `self` followed by `other`: `x (self.then(other)) = (x self) other`.
    pub fn then(&self, other: &FreeHom) -> FreeHom {
        assert_eq!(self.codomain, other.domain, "composition mismatch");
        FreeHom {
            domain: self.domain,
            codomain: other.codomain,
            images: self.images.iter().map(|w| other.apply(w)).collect(),
        }
    }

    pub fn power(&self, k: u64) -> FreeHom {
        assert_eq!(self.domain, self.codomain, "power of a non-endomorphism");
        let mut acc = FreeHom::identity(self.domain);
        for _ in 0..k {
            acc = acc.then(self);
        }
        acc
    }

    pub fn is_trivial(&self) -> bool {
        self.images.iter().all(FreeWord::is_empty)
    }

    pub fn is_identity(&self) -> bool {
        self.domain == self.codomain && self.images == self.domain.generators()
    }

    pub fn image_graph(&self) -> SubgroupGraph {
        SubgroupGraph::fold(self.codomain, &self.images)
    }

    /// Injective iff the images freely generate a subgroup of full rank.
    pub fn is_injective(&self) -> bool {
        self.image_graph().rank() == self.domain.rank
    }

    pub fn is_surjective(&self) -> bool {
        self.image_graph().is_whole_group()
    }

    /// The signed permutation `i -> images[i]` when every image is a single
    /// letter and the indices are a permutation.
    pub fn signed_permutation(&self) -> Option<Vec<Letter>> {
        if self.domain.rank != self.codomain.rank {
            return None;
        }
        let mut seen = vec![false; self.codomain.rank];
        let mut out = Vec::with_capacity(self.images.len());
        for w in &self.images {
            let [x] = w.letters() else { return None };
            let k = x.unsigned_abs() as usize - 1;
            if std::mem::replace(&mut seen[k], true) {
                return None;
            }
            out.push(*x);
        }
        Some(out)
    }

    /// Inverse of an automorphism, by rewriting each codomain generator in
    /// terms of the images on a tracked Stallings graph. Returns `None` unless
    /// a two-sided inverse is found and verified.
    pub fn inverse(&self) -> Option<FreeHom> {
        if self.domain.rank != self.codomain.rank || !self.is_surjective() {
            return None;
        }
        let tracked = TrackedGraph::fold(self.codomain, &self.images);
        let mut images = Vec::with_capacity(self.codomain.rank);
        for g in self.codomain.generators() {
            let t = tracked.express(&g)?;
            images.push(FreeWord::reduce(t.letters(), self.domain).ok()?);
        }
        let inv = FreeHom {
            domain: self.codomain,
            codomain: self.domain,
            images,
        };
        (self.then(&inv).is_identity() && inv.then(self).is_identity()).then_some(inv)
    }

    /// The same map read over alphabets with the given tags.
    pub fn retag(&self, domain: Tag, codomain: Tag) -> FreeHom {
        let dom = Alphabet::new(self.domain.rank, domain);
        let cod = Alphabet::new(self.codomain.rank, codomain);
        FreeHom {
            domain: dom,
            codomain: cod,
            images: self.images.iter().map(|w| w.relabel(cod).unwrap()).collect(),
        }
    }
}

impl fmt::Display for FreeHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = self.domain.tag.symbol();
        for (i, w) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{t}{} -> {w}", i + 1)?;
        }
        Ok(())
    }
}

/// An element `(x, y)` of `F_n x F_m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PairElement {
    pub x: FreeWord,
    pub y: FreeWord,
}

impl PairElement {
    pub fn new(x: FreeWord, y: FreeWord) -> Self {
        debug_assert_eq!(x.alphabet().tag, Tag::A);
        debug_assert_eq!(y.alphabet().tag, Tag::B);
        PairElement { x, y }
    }

    pub fn identity(n: usize, m: usize) -> Self {
        PairElement {
            x: FreeWord::identity(Alphabet::a(n)),
            y: FreeWord::identity(Alphabet::b(m)),
        }
    }

    pub fn from_letters(n: usize, m: usize, x: &[Letter], y: &[Letter]) -> Result<Self, WordError> {
        Ok(PairElement {
            x: FreeWord::reduce(x, Alphabet::a(n))?,
            y: FreeWord::reduce(y, Alphabet::b(m))?,
        })
    }

    /// The `i`-th generator `(a_i, 1)`, 1-based.
    pub fn gen_a(n: usize, m: usize, i: usize) -> Self {
        PairElement::from_letters(n, m, &[i as Letter], &[]).unwrap()
    }

    /// The `j`-th generator `(1, b_j)`, 1-based.
    pub fn gen_b(n: usize, m: usize, j: usize) -> Self {
        PairElement::from_letters(n, m, &[], &[j as Letter]).unwrap()
    }

    pub fn n(&self) -> usize {
        self.x.alphabet().rank
    }

    pub fn m(&self) -> usize {
        self.y.alphabet().rank
    }

    pub fn mul(&self, other: &PairElement) -> PairElement {
        PairElement {
            x: self.x.mul(&other.x),
            y: self.y.mul(&other.y),
        }
    }

    pub fn inverse(&self) -> PairElement {
        PairElement {
            x: self.x.inverse(),
            y: self.y.inverse(),
        }
    }

    pub fn pow(&self, k: i64) -> PairElement {
        PairElement {
            x: self.x.pow(k),
            y: self.y.pow(k),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_empty() && self.y.is_empty()
    }

    pub fn len(&self) -> usize {
        self.x.len() + self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.is_identity()
    }

    /// Exchanges the factors: `(x, y)` in `F_n x F_m` becomes `(y, x)` in
    /// `F_m x F_n`.
    pub fn swap(&self) -> PairElement {
        PairElement {
            x: self.y.relabel(Alphabet::a(self.m())).unwrap(),
            y: self.x.relabel(Alphabet::b(self.n())).unwrap(),
        }
    }

    /// Ordering used in reports: total length, then the components shortlex.
    pub fn report_cmp(&self, other: &PairElement) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.x.cmp(&other.x))
            .then_with(|| self.y.cmp(&other.y))
    }
}

impl fmt::Display for PairElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Sorts generators for reports and drops identities and duplicates.
pub fn normalize_generators(gens: &mut Vec<PairElement>) {
    gens.retain(|g| !g.is_identity());
    gens.sort_by(PairElement::report_cmp);
    gens.dedup();
}

/// Raw endomorphism data: the images of `(a_i, 1)` and `(1, b_j)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EndoSpec {
    pub n: usize,
    pub m: usize,
    pub images_a: Vec<PairElement>,
    pub images_b: Vec<PairElement>,
}

impl EndoSpec {
    pub fn new(n: usize, m: usize, images_a: Vec<PairElement>, images_b: Vec<PairElement>) -> Result<Self, EndoError> {
        let spec = EndoSpec {
            n,
            m,
            images_a,
            images_b,
        };
        spec.check_shape()?;
        Ok(spec)
    }

    fn check_shape(&self) -> Result<(), EndoError> {
        if self.images_a.len() != self.n {
            return Err(EndoError::WrongArity {
                expected: self.n,
                got: self.images_a.len(),
            });
        }
        if self.images_b.len() != self.m {
            return Err(EndoError::WrongArity {
                expected: self.m,
                got: self.images_b.len(),
            });
        }
        let (a, b) = (Alphabet::a(self.n), Alphabet::b(self.m));
        for g in self.images_a.iter().chain(&self.images_b) {
            for (w, al) in [(&g.x, a), (&g.y, b)] {
                if w.alphabet() != al {
                    return Err(WordError::AlphabetMismatch {
                        left: w.alphabet(),
                        right: al,
                    }
                    .into());
                }
            }
        }
        Ok(())
    }

    pub fn identity(n: usize, m: usize) -> Self {
        EndoSpec {
            n,
            m,
            images_a: (1..=n).map(|i| PairElement::gen_a(n, m, i)).collect(),
            images_b: (1..=m).map(|j| PairElement::gen_b(n, m, j)).collect(),
        }
    }

    /// Images of all generators, `(a_i, 1)` first.
    pub fn images(&self) -> impl Iterator<Item = &PairElement> {
        self.images_a.iter().chain(&self.images_b)
    }

    pub fn swap(&self) -> EndoSpec {
        EndoSpec {
            n: self.m,
            m: self.n,
            images_a: self.images_b.iter().map(PairElement::swap).collect(),
            images_b: self.images_a.iter().map(PairElement::swap).collect(),
        }
    }

    /// Substitution of generator images, without using any classification.
    pub fn apply_naive(&self, g: &PairElement) -> PairElement {
        let mut acc = PairElement::identity(self.n, self.m);
        for &x in g.x.letters() {
            let img = &self.images_a[x.unsigned_abs() as usize - 1];
            acc = acc.mul(&if x > 0 { img.clone() } else { img.inverse() });
        }
        for &y in g.y.letters() {
            let img = &self.images_b[y.unsigned_abs() as usize - 1];
            acc = acc.mul(&if y > 0 { img.clone() } else { img.inverse() });
        }
        acc
    }

    /// Which of `X, Y, Z, W` are trivial.
    pub fn trivial_pattern(&self) -> [bool; 4] {
        [
            self.images_a.iter().all(|g| g.x.is_empty()),
            self.images_a.iter().all(|g| g.y.is_empty()),
            self.images_b.iter().all(|g| g.x.is_empty()),
            self.images_b.iter().all(|g| g.y.is_empty()),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EndoType {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
}

impl EndoType {
    pub const ALL: [EndoType; 7] = [
        EndoType::I,
        EndoType::II,
        EndoType::III,
        EndoType::IV,
        EndoType::V,
        EndoType::VI,
        EndoType::VII,
    ];

    pub fn roman(self) -> &'static str {
        match self {
            EndoType::I => "I",
            EndoType::II => "II",
            EndoType::III => "III",
            EndoType::IV => "IV",
            EndoType::V => "V",
            EndoType::VI => "VI",
            EndoType::VII => "VII",
        }
    }
}

impl fmt::Display for EndoType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.roman())
    }
}

/// Maps the triviality pattern of `(X, Y, Z, W)` to a type and whether the
/// factors must be swapped to reach the normalized form.
pub fn classify_pattern(pattern: [bool; 4]) -> (EndoType, bool) {
    use EndoType::*;
    match pattern {
        [false, false, false, false] => (I, false),
        [true, false, false, false] => (II, false),
        [false, false, false, true] => (II, true),
        [false, true, false, false] => (III, false),
        [false, false, true, false] => (III, true),
        [true, true, false, false] => (IV, false),
        [false, false, true, true] => (IV, true),
        [true, false, true, false] => (V, false),
        [false, true, false, true] => (V, true),
        [_, true, true, _] => (VI, false),
        [true, _, _, true] => (VII, false),
    }
}

/// Per-type data in normalized coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum TypeData {
    I {
        u: FreeWord,
        v: FreeWord,
        p: Vec<i64>,
        q: Vec<i64>,
        r: Vec<i64>,
        s: Vec<i64>,
    },
    /// `phi: F_m -> F_n`
    II {
        phi: FreeHom,
        v: FreeWord,
        q: Vec<i64>,
        s: Vec<i64>,
    },
    /// `phi` in `End(F_m)`
    III {
        u: FreeWord,
        p: Vec<i64>,
        r: Vec<i64>,
        phi: FreeHom,
    },
    /// `phi: F_m -> F_n`, `psi` in `End(F_m)`
    IV { phi: FreeHom, psi: FreeHom },
    V {
        v: FreeWord,
        q: Vec<i64>,
        s: Vec<i64>,
    },
    /// `phi` in `End(F_n)`, `psi` in `End(F_m)`
    VI { phi: FreeHom, psi: FreeHom },
    /// `phi: F_n -> F_m`, `psi: F_m -> F_n`; `(x, y) -> (y psi, x phi)`
    VII { phi: FreeHom, psi: FreeHom },
}

fn dot(w: &FreeWord, weights: &[i64]) -> i64 {
    w.weighted_sum(weights).expect("weights match the alphabet")
}

fn exponents(words: &[&FreeWord], root: &FreeWord) -> Result<Vec<i64>, EndoError> {
    words
        .iter()
        .map(|w| w.exponent_over(root).ok_or(EndoError::InconsistentRoots))
        .collect()
}

fn first_root<'a>(words: impl IntoIterator<Item = &'a FreeWord>) -> Result<FreeWord, EndoError> {
    let w = words
        .into_iter()
        .find(|w| !w.is_empty())
        .ok_or(EndoError::InconsistentRoots)?;
    Ok(w.primitive_root()?.0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductEndo {
    pub spec: EndoSpec,
    pub etype: EndoType,
    pub swapped: bool,
    pub data: TypeData,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AutCoset {
    Aut6,
    Aut7,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismFlags {
    pub injective: bool,
    pub surjective: bool,
    pub automorphism: bool,
    pub aut_coset: Option<AutCoset>,
}

impl ProductEndo {
    pub fn n(&self) -> usize {
        self.spec.n
    }

    pub fn m(&self) -> usize {
        self.spec.m
    }

    /// Ranks of the factors in normalized coordinates.
    pub fn normalized_ranks(&self) -> (usize, usize) {
        if self.swapped {
            (self.spec.m, self.spec.n)
        } else {
            (self.spec.n, self.spec.m)
        }
    }

    /// Moves an element into normalized coordinates.
    pub fn to_normal(&self, g: &PairElement) -> PairElement {
        if self.swapped {
            g.swap()
        } else {
            g.clone()
        }
    }

    /// Moves an element back from normalized coordinates.
    pub fn from_normal(&self, g: &PairElement) -> PairElement {
        self.to_normal(g)
    }

    /// Applies the endomorphism in normalized coordinates.
    pub fn apply_normal(&self, g: &PairElement) -> PairElement {
        let a = Alphabet::a(self.normalized_ranks().0);
        match &self.data {
            TypeData::I { u, v, p, q, r, s } => PairElement::new(
                u.pow(dot(&g.x, p) + dot(&g.y, r)),
                v.pow(dot(&g.x, q) + dot(&g.y, s)),
            ),
            TypeData::II { phi, v, q, s } => {
                PairElement::new(phi.apply(&g.y), v.pow(dot(&g.x, q) + dot(&g.y, s)))
            }
            TypeData::III { u, p, r, phi } => {
                PairElement::new(u.pow(dot(&g.x, p) + dot(&g.y, r)), phi.apply(&g.y))
            }
            TypeData::IV { phi, psi } => PairElement::new(phi.apply(&g.y), psi.apply(&g.y)),
            TypeData::V { v, q, s } => PairElement::new(FreeWord::identity(a), v.pow(dot(&g.x, q) + dot(&g.y, s))),
            TypeData::VI { phi, psi } => PairElement::new(phi.apply(&g.x), psi.apply(&g.y)),
            TypeData::VII { phi, psi } => PairElement::new(psi.apply(&g.y), phi.apply(&g.x)),
        }
    }

    /// Image of `g`, computed from the classified data.
    pub fn apply(&self, g: &PairElement) -> PairElement {
        self.from_normal(&self.apply_normal(&self.to_normal(g)))
    }

    /// Image of `g` by direct substitution of the generator images.
    pub fn apply_naive(&self, g: &PairElement) -> PairElement {
        self.spec.apply_naive(g)
    }

    pub fn apply_power(&self, g: &PairElement, k: u64) -> PairElement {
        (0..k).fold(g.clone(), |acc, _| self.apply(&acc))
    }

    /// Rebuilds the spec from the classified data.
    pub fn expand(&self) -> EndoSpec {
        let (n, m) = self.normalized_ranks();
        let images_a = (1..=n).map(|i| self.apply_normal(&PairElement::gen_a(n, m, i))).collect();
        let images_b = (1..=m).map(|j| self.apply_normal(&PairElement::gen_b(n, m, j))).collect();
        let normal = EndoSpec {
            n,
            m,
            images_a,
            images_b,
        };
        if self.swapped {
            normal.swap()
        } else {
            normal
        }
    }

    pub fn identity(n: usize, m: usize) -> ProductEndo {
        validate_and_classify(&EndoSpec::identity(n, m)).expect("identity is valid")
    }

    pub fn morphism_flags(&self) -> MorphismFlags {
        let (injective, surjective, coset) = match &self.data {
            TypeData::VI { phi, psi } => (
                phi.is_injective() && psi.is_injective(),
                phi.is_surjective() && psi.is_surjective(),
                AutCoset::Aut6,
            ),
            TypeData::VII { phi, psi } => (
                phi.is_injective() && psi.is_injective(),
                phi.is_surjective() && psi.is_surjective(),
                AutCoset::Aut7,
            ),
            _ => (false, false, AutCoset::Aut6),
        };
        let automorphism = injective && surjective;
        MorphismFlags {
            injective,
            surjective,
            automorphism,
            aut_coset: automorphism.then_some(coset),
        }
    }

    /// Component maps of Types IV, VI and VII, in normalized coordinates.
    pub fn components(&self) -> Option<(&FreeHom, &FreeHom)> {
        match &self.data {
            TypeData::IV { phi, psi } | TypeData::VI { phi, psi } | TypeData::VII { phi, psi } => Some((phi, psi)),
            _ => None,
        }
    }

    pub fn invert_automorphism(&self) -> Result<ProductEndo, EndoError> {
        if !self.morphism_flags().automorphism {
            return Err(EndoError::NotAnAutomorphism);
        }
        let (n, m) = (self.n(), self.m());
        let spec = match &self.data {
            TypeData::VI { phi, psi } => {
                let (pi, qi) = (
                    phi.inverse().ok_or(EndoError::NotAnAutomorphism)?,
                    psi.inverse().ok_or(EndoError::NotAnAutomorphism)?,
                );
                EndoSpec {
                    n,
                    m,
                    images_a: pi.images.iter().map(|x| PairElement::new(x.clone(), FreeWord::identity(Alphabet::b(m)))).collect(),
                    images_b: qi.images.iter().map(|y| PairElement::new(FreeWord::identity(Alphabet::a(n)), y.clone())).collect(),
                }
            }
            TypeData::VII { phi, psi } => {
                // (x, y) -> (y psi, x phi) has inverse (x, y) -> (y phi^-1, x psi^-1)
                let phi_inv = phi.inverse().ok_or(EndoError::NotAnAutomorphism)?;
                let psi_inv = psi.inverse().ok_or(EndoError::NotAnAutomorphism)?;
                EndoSpec {
                    n,
                    m,
                    images_a: psi_inv.images.iter().map(|y| PairElement::new(FreeWord::identity(Alphabet::a(n)), y.clone())).collect(),
                    images_b: phi_inv.images.iter().map(|x| PairElement::new(x.clone(), FreeWord::identity(Alphabet::b(m)))).collect(),
                }
            }
            _ => return Err(EndoError::NotAnAutomorphism),
        };
        let inv = validate_and_classify(&spec)?;
        let id = ProductEndo::identity(n, m);
        if compose(self, &inv)?.spec != id.spec || compose(&inv, self)?.spec != id.spec {
            return Err(EndoError::NotAnAutomorphism);
        }
        Ok(inv)
    }

    /// `self` iterated `k` times.
    pub fn power(&self, k: u64) -> Result<ProductEndo, EndoError> {
        let mut acc = ProductEndo::identity(self.n(), self.m());
        for _ in 0..k {
            acc = compose(&acc, self)?;
        }
        Ok(acc)
    }

    /// `u^P` for Types I and III, in normalized coordinates.
    pub fn u_p(&self) -> Option<i64> {
        match &self.data {
            TypeData::I { u, p, .. } | TypeData::III { u, p, .. } => Some(dot(u, p)),
            _ => None,
        }
    }

    /// `v^S` for Types I, II and V.
    pub fn v_s(&self) -> Option<i64> {
        match &self.data {
            TypeData::I { v, s, .. } | TypeData::II { v, s, .. } | TypeData::V { v, s, .. } => Some(dot(v, s)),
            _ => None,
        }
    }
}

/// Checks the commutation conditions, classifies and extracts the type data.
pub fn validate_and_classify(spec: &EndoSpec) -> Result<ProductEndo, EndoError> {
    spec.check_shape()?;
    if spec.n < 2 || spec.m < 2 {
        return Err(EndoError::RankTooSmall { n: spec.n, m: spec.m });
    }
    for (i, ga) in spec.images_a.iter().enumerate() {
        for (j, gb) in spec.images_b.iter().enumerate() {
            if !ga.x.commutes(&gb.x)? {
                return Err(EndoError::CommutationViolation {
                    i: i + 1,
                    j: j + 1,
                    component: Tag::A,
                });
            }
            if !ga.y.commutes(&gb.y)? {
                return Err(EndoError::CommutationViolation {
                    i: i + 1,
                    j: j + 1,
                    component: Tag::B,
                });
            }
        }
    }
    let (etype, swapped) = classify_pattern(spec.trivial_pattern());
    let normal = if swapped { spec.swap() } else { spec.clone() };
    let (n, m) = (normal.n, normal.m);
    let (a, b) = (Alphabet::a(n), Alphabet::b(m));
    let xs: Vec<&FreeWord> = normal.images_a.iter().map(|g| &g.x).collect();
    let ys: Vec<&FreeWord> = normal.images_a.iter().map(|g| &g.y).collect();
    let zs: Vec<&FreeWord> = normal.images_b.iter().map(|g| &g.x).collect();
    let ws: Vec<&FreeWord> = normal.images_b.iter().map(|g| &g.y).collect();
    let hom = |dom: Alphabet, cod: Alphabet, words: &[&FreeWord]| FreeHom {
        domain: dom,
        codomain: cod,
        images: words.iter().map(|w| (*w).clone()).collect(),
    };
    let data = match etype {
        EndoType::I => {
            let u = first_root(xs.iter().chain(&zs).copied())?;
            let v = first_root(ys.iter().chain(&ws).copied())?;
            TypeData::I {
                p: exponents(&xs, &u)?,
                r: exponents(&zs, &u)?,
                q: exponents(&ys, &v)?,
                s: exponents(&ws, &v)?,
                u,
                v,
            }
        }
        EndoType::II => {
            let v = first_root(ys.iter().chain(&ws).copied())?;
            TypeData::II {
                phi: hom(b, a, &zs),
                q: exponents(&ys, &v)?,
                s: exponents(&ws, &v)?,
                v,
            }
        }
        EndoType::III => {
            let u = first_root(xs.iter().chain(&zs).copied())?;
            TypeData::III {
                p: exponents(&xs, &u)?,
                r: exponents(&zs, &u)?,
                phi: hom(b, b, &ws),
                u,
            }
        }
        EndoType::IV => TypeData::IV {
            phi: hom(b, a, &zs),
            psi: hom(b, b, &ws),
        },
        EndoType::V => {
            let v = first_root(ys.iter().chain(&ws).copied())?;
            TypeData::V {
                q: exponents(&ys, &v)?,
                s: exponents(&ws, &v)?,
                v,
            }
        }
        EndoType::VI => TypeData::VI {
            phi: hom(a, a, &xs),
            psi: hom(b, b, &ws),
        },
        EndoType::VII => TypeData::VII {
            phi: hom(a, b, &ys),
            psi: hom(b, a, &zs),
        },
    };
    let e = ProductEndo {
        spec: spec.clone(),
        etype,
        swapped,
        data,
    };
    if e.expand() != *spec {
        return Err(EndoError::InconsistentRoots);
    }
    Ok(e)
}

/// `e2` after `e1`: `apply(compose(e1, e2), g) = apply(e2, apply(e1, g))`.
pub fn compose(e1: &ProductEndo, e2: &ProductEndo) -> Result<ProductEndo, EndoError> {
    if (e1.n(), e1.m()) != (e2.n(), e2.m()) {
        return Err(EndoError::AmbientMismatch(e1.n(), e1.m(), e2.n(), e2.m()));
    }
    let spec = EndoSpec {
        n: e1.n(),
        m: e1.m(),
        images_a: e1.spec.images_a.iter().map(|g| e2.apply(g)).collect(),
        images_b: e1.spec.images_b.iter().map(|g| e2.apply(g)).collect(),
    };
    validate_and_classify(&spec)
}
