//! Command-line frontend: argument definitions, file parsing and report
//! rendering. `main.rs` only wires these to the process.

pub mod parse;
pub mod report;

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use prodfree::dynamics::{boundary_fixed_classify_with, ProbeConfig, DEFAULT_DEPTH, DEFAULT_STEPS};
use prodfree::periodic::{periodic_subgroup_with_limit, DEFAULT_PERIOD_LIMIT};
use prodfree::whitehead::{hom_exists_bounded, mono_exists_bounded};
use prodfree::{
    fixed_subgroup, iterate_truncated, uniform_continuity, validate_and_classify, whp_auto_free, whp_product, Alphabet, BoundaryLabel, Certificate,
    EndoSpec, ProductEndo, SubgroupBasisInput, Tag, TruncatedPoint, TypeData, Variant, WhAnswer, WhVerdict,
};

use parse::{infer_ranks, leading_tag, parse_endo, parse_oracle, parse_pair, parse_word, print_endo, print_pair};
use report::Report;

#[derive(Debug, Parser)]
#[command(name = "prodfree", version, about = "Endomorphisms of F_n x F_m")]
pub struct Cli {
    /// Emit JSON instead of plain text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate an endomorphism and report its type and normalized data.
    Classify { file: PathBuf },
    /// Fixed subgroup.
    Fix(WithOracle),
    /// Periodic subgroup.
    Per {
        #[command(flatten)]
        input: WithOracle,
        /// Largest period searched for individual oracle words.
        #[arg(long, default_value_t = DEFAULT_PERIOD_LIMIT)]
        limit: u64,
    },
    /// Whitehead problem: is there a map of the given kind sending source to
    /// target? Pairs are written `x | y`; a bare word poses the problem in
    /// its free factor.
    Whitehead {
        #[arg(long, value_parser = parse_variant)]
        variant: Variant,
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        /// Total image length searched by the bounded procedures.
        #[arg(long, default_value_t = 6)]
        bound: u64,
    },
    /// Boundary dynamics.
    #[command(subcommand)]
    Dynamics(DynamicsCommand),
    /// Word utilities.
    #[command(subcommand)]
    Word(WordCommand),
}

#[derive(Debug, Args)]
pub struct WithOracle {
    pub file: PathBuf,
    /// Bases for component fixed subgroups (`a: word` / `b: word` lines).
    #[arg(long)]
    pub oracle: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub input: WithOracle,
    /// Prefixes of the infinite point, written `x | y`.
    #[arg(long)]
    pub point: String,
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    pub depth: usize,
}

#[derive(Debug, Subcommand)]
pub enum DynamicsCommand {
    /// Uniform continuity with respect to the prefix metric.
    Uc { file: PathBuf },
    /// Iterate the extension to the completion on a truncated point.
    Iterate {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, default_value_t = 4)]
        steps: usize,
    },
    /// Classify a fixed infinite point as singular or regular and probe for
    /// attractor or repeller behavior.
    ClassifyBoundary {
        #[command(flatten)]
        point: PointArgs,
        /// Iteration budget per probe.
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        steps: usize,
        /// Perturb after this many letters (default: half the depth).
        #[arg(long)]
        perturb_at: Option<usize>,
        #[arg(long, default_value_t = 3)]
        suffix_len: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum WordCommand {
    Reduce(WordArgs),
    /// Primitive root and exponent.
    Root(WordArgs),
    /// Exponents k for which the word is a k-th power.
    Powers(WordArgs),
}

#[derive(Debug, Args)]
pub struct WordArgs {
    pub word: String,
    /// Rank of the ambient free group (default: largest index, at least 2).
    #[arg(long)]
    pub rank: Option<usize>,
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse()
}

pub fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Classify { file } => classify(&load_endo(file)?),
        Command::Fix(input) => {
            let (e, oracle) = load_with_oracle(input)?;
            fix(&e, oracle.as_ref())
        }
        Command::Per { input, limit } => {
            let (e, oracle) = load_with_oracle(input)?;
            per(&e, oracle.as_ref(), *limit)
        }
        Command::Whitehead { variant, source, target, bound } => whitehead(*variant, source, target, *bound),
        Command::Dynamics(DynamicsCommand::Uc { file }) => Ok(uc(&load_endo(file)?)),
        Command::Dynamics(DynamicsCommand::Iterate { point, steps }) => {
            let (e, _) = load_with_oracle(&point.input)?;
            iterate(&e, &point.point, point.depth, *steps)
        }
        Command::Dynamics(DynamicsCommand::ClassifyBoundary { point, steps, perturb_at, suffix_len }) => {
            let (e, oracle) = load_with_oracle(&point.input)?;
            let cfg = ProbeConfig {
                steps: *steps,
                perturb_at: *perturb_at,
                suffix_len: *suffix_len,
            };
            classify_boundary(&e, oracle.as_ref(), &point.point, point.depth, &cfg)
        }
        Command::Word(cmd) => word(cmd),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn load_endo(path: &Path) -> Result<ProductEndo> {
    let spec = parse_endo(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    Ok(validate_and_classify(&spec)?)
}

fn load_with_oracle(input: &WithOracle) -> Result<(ProductEndo, Option<SubgroupBasisInput>)> {
    let e = load_endo(&input.file)?;
    let oracle = match &input.oracle {
        Some(p) => Some(parse_oracle(&read(p)?, e.n(), e.m()).with_context(|| format!("parsing {}", p.display()))?),
        None => None,
    };
    Ok((e, oracle))
}

fn vector(v: &[i64]) -> String {
    format!("{v:?}")
}

fn endo_lines(spec: &EndoSpec) -> Vec<String> {
    print_endo(spec).lines().skip(2).map(str::to_string).collect()
}

pub fn classify(e: &ProductEndo) -> Result<Report> {
    let mut r = Report::default();
    r.text("type", e.etype).flag("swapped", e.swapped);
    match &e.data {
        TypeData::I { u, v, p, q, r: rr, s } => {
            r.text("u", u).text("v", v).text("P", vector(p)).text("Q", vector(q)).text("R", vector(rr)).text("S", vector(s));
        }
        TypeData::II { phi, v, q, s } => {
            r.text("phi", phi).text("v", v).text("Q", vector(q)).text("S", vector(s));
        }
        TypeData::III { u, p, r: rr, phi } => {
            r.text("u", u).text("P", vector(p)).text("R", vector(rr)).text("phi", phi);
        }
        TypeData::V { v, q, s } => {
            r.text("v", v).text("Q", vector(q)).text("S", vector(s));
        }
        TypeData::IV { phi, psi } | TypeData::VI { phi, psi } | TypeData::VII { phi, psi } => {
            r.text("phi", phi).text("psi", psi);
        }
    }
    let flags = e.morphism_flags();
    r.flag("injective", flags.injective).flag("surjective", flags.surjective).flag("automorphism", flags.automorphism);
    Ok(r)
}

pub fn fix(e: &ProductEndo, oracle: Option<&SubgroupBasisInput>) -> Result<Report> {
    let rep = fixed_subgroup(e, oracle)?;
    let mut r = Report::default();
    r.text("type", e.etype).text("verdict", rep.verdict).list("generators", &rep.generators);
    if !rep.structure_note.is_empty() {
        r.text("structure", &rep.structure_note);
    }
    if let Some(w) = &rep.witness {
        if !rep.structure_note.contains(&w.description) {
            r.text("witness", &w.description);
        }
        r.list("witness samples", &w.samples);
    }
    if !rep.verdict.is_decided() {
        r.undecided();
    }
    Ok(r)
}

pub fn per(e: &ProductEndo, oracle: Option<&SubgroupBasisInput>, limit: u64) -> Result<Report> {
    let rep = periodic_subgroup_with_limit(e, oracle, limit)?;
    let mut r = Report::default();
    r.text("type", e.etype).text("verdict", rep.verdict);
    match rep.period_bound {
        Some(b) => r.text("period bound", b),
        None => r.text("period bound", "unknown"),
    };
    let gens = rep.per_period.iter().flat_map(|(k, gs)| gs.iter().map(move |g| format!("period {k}: {g}")));
    r.list("generators", gens);
    if !rep.structure_note.is_empty() {
        r.text("structure", &rep.structure_note);
    }
    if !rep.verdict.is_decided() {
        r.undecided();
    }
    Ok(r)
}

pub fn whitehead(variant: Variant, source: &str, target: &str, bound: u64) -> Result<Report> {
    let name = match variant {
        Variant::A => "automorphism",
        Variant::M => "monomorphism",
        Variant::E => "endomorphism",
    };
    let verdict = if source.contains('|') || target.contains('|') {
        let (n, m) = infer_ranks([source, target]);
        let g = parse_pair(source, n, m).context("parsing --source")?;
        let h = parse_pair(target, n, m).context("parsing --target")?;
        whp_product(&g, &h, variant, bound)
    } else {
        let tag = leading_tag(source).or_else(|| leading_tag(target)).unwrap_or(Tag::A);
        let (n, m) = infer_ranks([source, target]);
        let al = Alphabet::new(if tag == Tag::A { n } else { m }, tag);
        let u = parse_word(source, al).context("parsing --source")?;
        let v = parse_word(target, al).context("parsing --target")?;
        match variant {
            Variant::A => whp_auto_free(&u, &v),
            Variant::M => mono_exists_bounded(&u, &v, bound),
            Variant::E => hom_exists_bounded(&u, &v, bound),
        }
    };
    Ok(whitehead_report(name, &verdict))
}

fn whitehead_report(name: &str, verdict: &WhVerdict) -> Report {
    let mut r = Report::default();
    r.text("variant", name);
    match verdict.answer {
        WhAnswer::Yes => r.text("answer", "Yes"),
        WhAnswer::No => r.text("answer", "No"),
        WhAnswer::Unknown(b) => r.text("answer", format!("Unknown (searched to bound {b})")).undecided(),
    };
    r.text("path", &verdict.path);
    match &verdict.certificate {
        Some(Certificate::Free(h)) => {
            r.list("certificate", h.to_string().split(", "));
        }
        Some(Certificate::Product(e)) => {
            r.text("certificate type", e.etype).list("certificate", endo_lines(&e.spec));
        }
        None => {}
    }
    r
}

pub fn uc(e: &ProductEndo) -> Report {
    let rep = uniform_continuity(e);
    let mut r = Report::default();
    r.text("type", e.etype).flag("uniformly continuous", rep.uniformly_continuous);
    let reason = match &rep.reason {
        prodfree::dynamics::UCReason::TypeIVVIVIIWithUCComponents => "type IV, VI or VII with trivial or injective components".to_string(),
        prodfree::dynamics::UCReason::TypeObstruction => format!("type {} never extends uniformly", e.etype),
        prodfree::dynamics::UCReason::ComponentObstruction(c) => format!("{c} is neither trivial nor injective"),
    };
    r.text("reason", reason);
    r
}

fn point(e: &ProductEndo, text: &str, depth: usize) -> Result<TruncatedPoint> {
    let g = parse_pair(text, e.n(), e.m()).context("parsing --point")?;
    if depth == 0 {
        bail!("--depth must be positive");
    }
    Ok(TruncatedPoint::new(g.x, g.y, depth))
}

fn show_point(p: &TruncatedPoint) -> String {
    let comp = |w: &prodfree::FreeWord, exact: bool| if exact { w.to_string() } else { format!("{w} ...") };
    format!("{} | {}", comp(&p.x_prefix, p.x_exact), comp(&p.y_prefix, p.y_exact))
}

pub fn iterate(e: &ProductEndo, text: &str, depth: usize, steps: usize) -> Result<Report> {
    let p = point(e, text, depth)?;
    let orbit = iterate_truncated(e, &p, steps)?;
    let mut r = Report::default();
    r.text("type", e.etype).text("start", show_point(&p));
    r.list("orbit", orbit.iter().enumerate().map(|(k, q)| format!("{}: {}", k + 1, show_point(q))));
    Ok(r)
}

pub fn classify_boundary(e: &ProductEndo, oracle: Option<&SubgroupBasisInput>, text: &str, depth: usize, cfg: &ProbeConfig) -> Result<Report> {
    let p = point(e, text, depth)?;
    let c = boundary_fixed_classify_with(e, &p, depth, oracle, cfg)?;
    let label = |l: BoundaryLabel| match l {
        BoundaryLabel::SingularAtDepth => "singular at depth",
        BoundaryLabel::RegularAtDepth => "regular at depth",
        BoundaryLabel::AttractorEvidence => "attractor evidence",
        BoundaryLabel::RepellerEvidence => "repeller evidence",
        BoundaryLabel::Inconclusive => "inconclusive",
    };
    let mut r = Report::default();
    r.text("type", e.etype).text("depth", c.depth).text("singularity", label(c.singularity)).text("evidence", label(c.evidence));
    if let Some(g) = &c.fixed_witness {
        r.text("fixed witness", print_pair(g));
    }
    r.text("probes run", c.probes_run);
    r.list("probe witnesses", c.probes.iter().map(|w| format!("{} after {} steps", show_point(&w.start), w.steps)));
    r.text("note", &c.note);
    if c.singularity == BoundaryLabel::Inconclusive || c.evidence == BoundaryLabel::Inconclusive {
        r.undecided();
    }
    Ok(r)
}

fn word(cmd: &WordCommand) -> Result<Report> {
    let (WordCommand::Reduce(args) | WordCommand::Root(args) | WordCommand::Powers(args)) = cmd;
    let tag = leading_tag(&args.word).unwrap_or(Tag::A);
    let (n, m) = infer_ranks([args.word.as_str()]);
    let rank = args.rank.unwrap_or(if tag == Tag::A { n } else { m });
    let w = parse_word(&args.word, Alphabet::new(rank, tag))?;
    let mut r = Report::default();
    match cmd {
        WordCommand::Reduce(_) => {
            r.text("reduced", &w).text("length", w.len());
        }
        WordCommand::Root(_) => match w.primitive_root() {
            Ok((root, e)) => {
                r.text("root", root).text("exponent", e);
            }
            Err(_) => {
                r.text("root", "none (the empty word is a power of everything)");
            }
        },
        WordCommand::Powers(_) => match w.power_exponents() {
            prodfree::PowerSet::AllIntegers => {
                r.text("exponents", "all integers");
            }
            prodfree::PowerSet::Finite(set) => {
                r.text("exponents", set.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(", "));
            }
        },
    }
    Ok(r)
}
