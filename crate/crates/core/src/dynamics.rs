//! Continuity and boundary dynamics.
//!
//! An endomorphism extends to the completion of `F_n x F_m` under the prefix
//! metric exactly when it has Type IV, VI or VII and each component map is
//! trivial or injective. Infinite points are handled through truncations:
//! a prefix of each component together with the number of letters that are
//! guaranteed correct. For an injective component the guarantee comes from
//! bounded cancellation, with the number of folds needed to fold the images
//! as the constant.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::endo::{EndoError, EndoType, FreeHom, PairElement, ProductEndo, TypeData};
use crate::fixed::{fixed_subgroup, FixError, Membership, Section, SubgroupBasisInput};
use crate::freeword::{words_up_to, Alphabet, FreeWord, Letter, Tag};
use crate::stallings::SubgroupGraph;

pub const DEFAULT_STEPS: usize = 32;
pub const DEFAULT_DEPTH: usize = 16;

/// Cap on candidate fixed points enumerated per singularity check.
const CANDIDATE_CAP: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynError {
    #[error("the endomorphism is not uniformly continuous, so it does not extend to the completion")]
    NotUniformlyContinuous,
    #[error("the point is not fixed to depth {depth}: image prefix {image} differs")]
    NotFixedAtDepth { depth: usize, image: String },
    #[error(transparent)]
    Fix(#[from] FixError),
    #[error(transparent)]
    Endo(#[from] EndoError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum UCReason {
    TypeIVVIVIIWithUCComponents,
    TypeObstruction,
    /// The named component (`phi` or `psi`) is neither trivial nor injective.
    ComponentObstruction(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UCReport {
    pub etype: EndoType,
    pub uniformly_continuous: bool,
    pub reason: UCReason,
}

/// Uniform continuity of `e` with respect to the prefix metric.
pub fn uniform_continuity(e: &ProductEndo) -> UCReport {
    let report = |uc, reason| UCReport {
        etype: e.etype,
        uniformly_continuous: uc,
        reason,
    };
    let Some((phi, psi)) = e.components() else {
        return report(false, UCReason::TypeObstruction);
    };
    for (name, map) in [("phi", phi), ("psi", psi)] {
        if !map.is_trivial() && !map.is_injective() {
            return report(false, UCReason::ComponentObstruction(name.into()));
        }
    }
    report(true, UCReason::TypeIVVIVIIWithUCComponents)
}

/// A ball in the completion: all points whose components start with the
/// given prefixes. An exact component is a finite word known completely.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncatedPoint {
    pub x_prefix: FreeWord,
    pub y_prefix: FreeWord,
    /// Letters retained in the longest non-exact component; a shorter
    /// non-exact prefix is known only to its own length.
    pub depth: usize,
    pub x_exact: bool,
    pub y_exact: bool,
}

impl TruncatedPoint {
    /// Both components infinite, known to `depth` letters.
    pub fn new(x: FreeWord, y: FreeWord, depth: usize) -> TruncatedPoint {
        let depth = depth.min(x.len()).min(y.len());
        TruncatedPoint {
            x_prefix: x.prefix(depth),
            y_prefix: y.prefix(depth),
            depth,
            x_exact: false,
            y_exact: false,
        }
    }

    /// A finite element of the group.
    pub fn exact(g: &PairElement) -> TruncatedPoint {
        TruncatedPoint {
            x_prefix: g.x.clone(),
            y_prefix: g.y.clone(),
            depth: g.x.len().max(g.y.len()),
            x_exact: true,
            y_exact: true,
        }
    }

    fn comps(&self) -> (Comp, Comp) {
        (
            Comp {
                word: self.x_prefix.clone(),
                exact: self.x_exact,
            },
            Comp {
                word: self.y_prefix.clone(),
                exact: self.y_exact,
            },
        )
    }

    fn from_comps(x: Comp, y: Comp) -> TruncatedPoint {
        let depth = [&x, &y]
            .iter()
            .filter(|c| !c.exact)
            .map(|c| c.word.len())
            .max()
            .unwrap_or_else(|| x.word.len().max(y.word.len()));
        TruncatedPoint {
            x_exact: x.exact,
            y_exact: y.exact,
            x_prefix: x.word,
            y_prefix: y.word,
            depth,
        }
    }

    /// Letters known in every non-exact component.
    pub fn known(&self) -> usize {
        [(&self.x_prefix, self.x_exact), (&self.y_prefix, self.y_exact)]
            .iter()
            .filter(|(_, e)| !e)
            .map(|(w, _)| w.len())
            .min()
            .unwrap_or(usize::MAX)
    }

    pub fn swap(&self) -> TruncatedPoint {
        let retag = |w: &FreeWord, t: Tag| w.relabel(Alphabet::new(w.alphabet().rank, t)).unwrap();
        TruncatedPoint {
            x_prefix: retag(&self.y_prefix, Tag::A),
            y_prefix: retag(&self.x_prefix, Tag::B),
            depth: self.depth,
            x_exact: self.y_exact,
            y_exact: self.x_exact,
        }
    }

    /// Whether the finite element `g` lies within `2^-d` of every point of
    /// this ball, componentwise.
    pub fn near(&self, g: &PairElement, d: usize) -> bool {
        comp_near(&self.x_prefix, self.x_exact, &g.x, d) && comp_near(&self.y_prefix, self.y_exact, &g.y, d)
    }

    /// Whether two balls agree on their first `d` letters in each
    /// component (exact components must coincide when shorter than `d`).
    pub fn agrees(&self, other: &TruncatedPoint, d: usize) -> bool {
        comp_agree(&self.x_prefix, self.x_exact, &other.x_prefix, other.x_exact, d)
            && comp_agree(&self.y_prefix, self.y_exact, &other.y_prefix, other.y_exact, d)
    }
}

fn comp_near(c: &FreeWord, exact: bool, w: &FreeWord, d: usize) -> bool {
    if exact && c.len() < d {
        return c == w;
    }
    let need = d.min(c.len());
    w.common_prefix_len(c) >= need
}

fn comp_agree(a: &FreeWord, ae: bool, b: &FreeWord, be: bool, d: usize) -> bool {
    if ae && be && (a.len() < d || b.len() < d) {
        return a == b;
    }
    if (ae && a.len() < d) || (be && b.len() < d) {
        // a short exact word against a truncation of an infinite word
        return false;
    }
    a.common_prefix_len(b) >= d
}

#[derive(Debug, Clone)]
struct Comp {
    word: FreeWord,
    exact: bool,
}

/// A component map with its bounded-cancellation constant.
#[derive(Debug, Clone)]
struct CompMap {
    map: FreeHom,
    bcc: usize,
}

impl CompMap {
    fn new(map: &FreeHom) -> CompMap {
        let bcc = if map.is_trivial() {
            0
        } else {
            SubgroupGraph::fold_with_count(map.codomain, &map.images).1
        };
        CompMap { map: map.clone(), bcc }
    }

    fn apply(&self, c: &Comp, cap: usize) -> Comp {
        if self.map.is_trivial() {
            return Comp {
                word: FreeWord::identity(self.map.codomain),
                exact: true,
            };
        }
        let img = self.map.apply(&c.word);
        if c.exact {
            if img.len() <= cap {
                return Comp { word: img, exact: true };
            }
            return Comp {
                word: img.prefix(cap),
                exact: false,
            };
        }
        let known = img.len().saturating_sub(self.bcc).min(cap);
        Comp {
            word: img.prefix(known),
            exact: false,
        }
    }
}

/// How each output component is computed, in normalized coordinates.
#[derive(Debug, Clone)]
struct Stepper {
    swapped: bool,
    /// `(reads y?, map)` for the x and y outputs.
    x_out: (bool, CompMap),
    y_out: (bool, CompMap),
}

impl Stepper {
    fn new(e: &ProductEndo) -> Result<Stepper, DynError> {
        if !uniform_continuity(e).uniformly_continuous {
            return Err(DynError::NotUniformlyContinuous);
        }
        let (x_out, y_out) = match &e.data {
            TypeData::IV { phi, psi } => ((true, CompMap::new(phi)), (true, CompMap::new(psi))),
            TypeData::VI { phi, psi } => ((false, CompMap::new(phi)), (true, CompMap::new(psi))),
            TypeData::VII { phi, psi } => ((true, CompMap::new(psi)), (false, CompMap::new(phi))),
            _ => return Err(DynError::NotUniformlyContinuous),
        };
        Ok(Stepper {
            swapped: e.swapped,
            x_out,
            y_out,
        })
    }

    fn step(&self, p: &TruncatedPoint, cap: usize) -> TruncatedPoint {
        let p = if self.swapped { p.swap() } else { p.clone() };
        let (x, y) = p.comps();
        let pick = |reads_y: bool| if reads_y { &y } else { &x };
        let nx = self.x_out.1.apply(pick(self.x_out.0), cap);
        let ny = self.y_out.1.apply(pick(self.y_out.0), cap);
        let out = TruncatedPoint::from_comps(nx, ny);
        if self.swapped {
            out.swap()
        } else {
            out
        }
    }
}

/// Iterates the extension of `e` to the completion on a truncated point.
/// Each output keeps only letters guaranteed correct for every point of the
/// input ball, capped at `max(p.depth, DEFAULT_DEPTH)`.
pub fn iterate_truncated(e: &ProductEndo, p: &TruncatedPoint, steps: usize) -> Result<Vec<TruncatedPoint>, DynError> {
    let st = Stepper::new(e)?;
    let cap = p.depth.max(DEFAULT_DEPTH);
    let mut out = Vec::with_capacity(steps);
    let mut cur = p.clone();
    for _ in 0..steps {
        cur = st.step(&cur, cap);
        out.push(cur.clone());
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryLabel {
    SingularAtDepth,
    RegularAtDepth,
    AttractorEvidence,
    RepellerEvidence,
    Inconclusive,
}

/// A probe orbit that returned to the point: start it at `start` and it
/// agrees with the point to the tested depth after `steps` steps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeWitness {
    pub start: TruncatedPoint,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryClass {
    /// `SingularAtDepth`, `RegularAtDepth` or `Inconclusive`.
    pub singularity: BoundaryLabel,
    /// `AttractorEvidence`, `RepellerEvidence` or `Inconclusive`.
    pub evidence: BoundaryLabel,
    pub depth: usize,
    /// A finite fixed point within `2^-depth`, when singular.
    pub fixed_witness: Option<PairElement>,
    /// Replayable probe orbits supporting the evidence label (the first few).
    pub probes: Vec<ProbeWitness>,
    pub probes_run: usize,
    pub note: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeConfig {
    /// Iteration budget per probe orbit.
    pub steps: usize,
    /// Prefix position after which perturbations are inserted; defaults to
    /// half the tested depth.
    pub perturb_at: Option<usize>,
    /// Length bound for perturbing suffixes.
    pub suffix_len: usize,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            steps: DEFAULT_STEPS,
            perturb_at: None,
            suffix_len: 3,
        }
    }
}

/// Classifies a fixed point of the extension of `e` at the given depth.
pub fn boundary_fixed_classify(
    e: &ProductEndo,
    p: &TruncatedPoint,
    depth: usize,
    oracle: Option<&SubgroupBasisInput>,
) -> Result<BoundaryClass, DynError> {
    boundary_fixed_classify_with(e, p, depth, oracle, &ProbeConfig::default())
}

pub fn boundary_fixed_classify_with(
    e: &ProductEndo,
    p: &TruncatedPoint,
    depth: usize,
    oracle: Option<&SubgroupBasisInput>,
    cfg: &ProbeConfig,
) -> Result<BoundaryClass, DynError> {
    let st = Stepper::new(e)?;
    let depth = depth.min(p.known()).max(1);
    let cap = p.depth.max(depth);
    let image = st.step(p, cap);
    let checked = depth.min(image.known());
    if !image.agrees(p, checked) {
        return Err(DynError::NotFixedAtDepth {
            depth: checked,
            image: format!("({}, {})", image.x_prefix, image.y_prefix),
        });
    }

    let (singularity, fixed_witness, mut note) = match singular_witness(e, p, depth, oracle)? {
        Some(Some(g)) => (BoundaryLabel::SingularAtDepth, Some(g), String::new()),
        Some(None) => (BoundaryLabel::RegularAtDepth, None, String::new()),
        None => (
            BoundaryLabel::Inconclusive,
            None,
            "no basis for the fixed subgroup of a component; ".to_string(),
        ),
    };

    let k = cfg.perturb_at.unwrap_or(depth / 2).min(depth);
    let probes = perturbations(p, k, cfg.suffix_len);
    let forward = run_probes(&st, p, &probes, depth, cap, cfg.steps);
    let (evidence, witnesses) = match forward {
        Some(w) => (BoundaryLabel::AttractorEvidence, w),
        None if e.morphism_flags().automorphism => {
            let inv = Stepper::new(&e.invert_automorphism()?)?;
            match run_probes(&inv, p, &probes, depth, cap, cfg.steps) {
                Some(w) => (BoundaryLabel::RepellerEvidence, w),
                None => {
                    note.push_str("probes converged neither forward nor backward within budget");
                    (BoundaryLabel::Inconclusive, Vec::new())
                }
            }
        }
        None => {
            note.push_str("forward probes did not all converge; no inverse to probe backward");
            (BoundaryLabel::Inconclusive, Vec::new())
        }
    };
    if note.is_empty() {
        note = format!("fixed checked to {checked} letters; {} probes perturbed after letter {k}", probes.len());
    }
    Ok(BoundaryClass {
        singularity,
        evidence,
        depth,
        fixed_witness,
        probes: witnesses.into_iter().take(8).collect(),
        probes_run: probes.len(),
        note,
    })
}

/// Each probe converges when some iterate agrees with `p` to `depth`.
fn run_probes(
    st: &Stepper,
    p: &TruncatedPoint,
    probes: &[TruncatedPoint],
    depth: usize,
    cap: usize,
    steps: usize,
) -> Option<Vec<ProbeWitness>> {
    let mut out = Vec::with_capacity(probes.len());
    for q in probes {
        let mut cur = q.clone();
        let hit = (1..=steps).find(|_| {
            cur = st.step(&cur, cap);
            cur.agrees(p, depth)
        })?;
        out.push(ProbeWitness {
            start: q.clone(),
            steps: hit,
        });
    }
    Some(out)
}

/// Finite points agreeing with `p` on the first `k` letters of each
/// non-exact component and continuing with a reduced suffix of length at
/// most `suffix_len`.
fn perturbations(p: &TruncatedPoint, k: usize, suffix_len: usize) -> Vec<TruncatedPoint> {
    let variants = |w: &FreeWord, exact: bool| -> Vec<FreeWord> {
        if exact {
            return vec![w.clone()];
        }
        let head = w.prefix(k);
        let last = head.letters().last().copied();
        words_up_to(w.alphabet(), suffix_len)
            .into_iter()
            .filter(|s| s.letters().first().is_none_or(|&x| Some(-x) != last))
            .map(|s| head.mul(&s))
            .collect()
    };
    let xs = variants(&p.x_prefix, p.x_exact);
    let ys = variants(&p.y_prefix, p.y_exact);
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for x in &xs {
        for y in &ys {
            out.push(TruncatedPoint::exact(&PairElement::new(x.clone(), y.clone())));
        }
    }
    out
}

/// `Some(Some(g))`: a finite fixed point within `2^-depth` of `p`;
/// `Some(None)`: none found; `None`: the fixed subgroup is unavailable.
fn singular_witness(
    e: &ProductEndo,
    p: &TruncatedPoint,
    depth: usize,
    oracle: Option<&SubgroupBasisInput>,
) -> Result<Option<Option<PairElement>>, DynError> {
    let fix = fixed_subgroup(e, oracle)?;
    let pn = if e.swapped { p.swap() } else { p.clone() };
    let found = match &fix.membership {
        Membership::Product { a, b } => {
            let x = completions(a, &pn.x_prefix, pn.x_exact, depth, 1).into_iter().next();
            let y = completions(b, &pn.y_prefix, pn.y_exact, depth, 1).into_iter().next();
            x.zip(y).map(|(x, y)| PairElement::new(x, y))
        }
        Membership::Graph { tag, graph, section } => {
            let (read, read_exact, _) = match tag {
                Tag::A => (&pn.x_prefix, pn.x_exact, &pn.y_prefix),
                Tag::B => (&pn.y_prefix, pn.y_exact, &pn.x_prefix),
            };
            completions(graph, read, read_exact, depth, CANDIDATE_CAP).into_iter().find_map(|w| {
                let other = match section {
                    Section::Hom(h) => h.apply(&w),
                    Section::Power { .. } => return None,
                };
                let g = match tag {
                    Tag::A => PairElement::new(w, other),
                    Tag::B => PairElement::new(other, w),
                };
                pn.near(&g, depth).then_some(g)
            })
        }
        Membership::FixedBy(_) => return Ok(None),
        _ => unreachable!("uniformly continuous endomorphisms have Type IV, VI or VII"),
    };
    Ok(Some(found.map(|g| if e.swapped { g.swap() } else { g })))
}

/// Words of `graph`'s subgroup near the component `(prefix, exact)`: the
/// prefix followed by a reduced return path to the base of length at most
/// `extra`, shortest first, at most `limit` of them.
fn completions(graph: &SubgroupGraph, prefix: &FreeWord, exact: bool, extra: usize, limit: usize) -> Vec<FreeWord> {
    if exact {
        return if graph.contains(prefix) { vec![prefix.clone()] } else { Vec::new() };
    }
    let Some(start) = graph.read(prefix) else { return Vec::new() };
    let last = prefix.letters().last().copied();
    let letters: Vec<Letter> = graph.alphabet().letters().collect();
    let mut out = Vec::new();
    // breadth-first over (vertex, last letter, path)
    let mut layer = vec![(start, last, Vec::<Letter>::new())];
    for len in 0..=extra {
        let mut next = Vec::new();
        for (v, l, path) in layer {
            if v == 0 {
                let mut w = prefix.letters().to_vec();
                w.extend_from_slice(&path);
                out.push(FreeWord::reduce(&w, graph.alphabet()).unwrap());
                if out.len() >= limit {
                    return out;
                }
            }
            if len == extra {
                continue;
            }
            for &x in &letters {
                if Some(-x) == l {
                    continue;
                }
                if let Some(w) = graph.step(v, x) {
                    let mut p = path.clone();
                    p.push(x);
                    next.push((w, Some(x), p));
                }
            }
            if next.len() > CANDIDATE_CAP * 4 {
                break;
            }
        }
        layer = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::endo::{validate_and_classify, EndoSpec};

    fn pe(x: &[Letter], y: &[Letter]) -> PairElement {
        PairElement::from_letters(2, 2, x, y).unwrap()
    }

    fn endo(a: [(&[Letter], &[Letter]); 2], b: [(&[Letter], &[Letter]); 2]) -> ProductEndo {
        let spec = EndoSpec::new(2, 2, a.iter().map(|(x, y)| pe(x, y)).collect(), b.iter().map(|(x, y)| pe(x, y)).collect()).unwrap();
        validate_and_classify(&spec).unwrap()
    }

    fn wa(r: &[Letter]) -> FreeWord {
        FreeWord::reduce(r, Alphabet::a(2)).unwrap()
    }

    fn wb(r: &[Letter]) -> FreeWord {
        FreeWord::reduce(r, Alphabet::b(2)).unwrap()
    }

    #[test]
    fn uc_examples() {
        assert!(uniform_continuity(&ProductEndo::identity(2, 2)).uniformly_continuous);
        let t1 = endo([(&[1], &[1]), (&[], &[])], [(&[1], &[1]), (&[], &[])]);
        assert_eq!(t1.etype, EndoType::I);
        assert_eq!(uniform_continuity(&t1).reason, UCReason::TypeObstruction);
        let vi = endo([(&[], &[]), (&[2], &[])], [(&[], &[1]), (&[], &[2])]);
        assert_eq!(vi.etype, EndoType::VI);
        assert_eq!(uniform_continuity(&vi).reason, UCReason::ComponentObstruction("phi".into()));
    }

    #[test]
    fn identity_repeats() {
        let p = TruncatedPoint::new(wa(&[1, 2, 2]), wb(&[2, -1, 2]), 3);
        let orbit = iterate_truncated(&ProductEndo::identity(2, 2), &p, 3).unwrap();
        assert!(orbit.iter().all(|q| *q == p));
    }

    #[test]
    fn swap_alternates() {
        let swap = endo([(&[], &[1]), (&[], &[2])], [(&[1], &[]), (&[2], &[])]);
        let p = TruncatedPoint::new(wa(&[1, 1, 1]), wb(&[2, 2, 2]), 3);
        let orbit = iterate_truncated(&swap, &p, 2).unwrap();
        assert_eq!(orbit[0].x_prefix, wa(&[2, 2, 2]));
        assert_eq!(orbit[0].y_prefix, wb(&[1, 1, 1]));
        assert_eq!(orbit[1], p);
    }

    #[test]
    fn doubling_grows() {
        // (x, y) -> (y phi, y psi), psi: b1 -> b1^2, b2 -> b2, phi: b1 -> a1, b2 -> a2
        let e = endo([(&[], &[]), (&[], &[])], [(&[1], &[1, 1]), (&[2], &[2])]);
        assert_eq!(e.etype, EndoType::IV);
        let p = TruncatedPoint::new(wa(&[1, 1, 1]), wb(&[1, 1, 1]), 3);
        let orbit = iterate_truncated(&e, &p, 3).unwrap();
        assert_eq!(orbit[0].y_prefix, wb(&[1; 6]));
        assert!(orbit[2].depth > orbit[0].depth);
        let oracle = SubgroupBasisInput::default().with(Tag::B, vec![wb(&[2])]);
        let p = TruncatedPoint::new(wa(&[1; 16]), wb(&[1; 16]), 16);
        let c = boundary_fixed_classify(&e, &p, 16, Some(&oracle)).unwrap();
        assert_eq!(c.singularity, BoundaryLabel::RegularAtDepth);
        assert_eq!(c.evidence, BoundaryLabel::AttractorEvidence);
    }

    #[test]
    fn identity_is_singular() {
        let p = TruncatedPoint::new(wa(&[1; 16]), wb(&[1; 16]), 16);
        let c = boundary_fixed_classify(&ProductEndo::identity(2, 2), &p, 16, None).unwrap();
        assert_eq!(c.singularity, BoundaryLabel::SingularAtDepth);
        assert!(p.near(c.fixed_witness.as_ref().unwrap(), 16));
    }

    #[test]
    fn not_fixed() {
        let swap = endo([(&[], &[1]), (&[], &[2])], [(&[1], &[]), (&[2], &[])]);
        let p = TruncatedPoint::new(wa(&[1; 4]), wb(&[2; 4]), 4);
        assert!(matches!(boundary_fixed_classify(&swap, &p, 4, None), Err(DynError::NotFixedAtDepth { .. })));
    }
}
