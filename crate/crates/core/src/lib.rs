//! Endomorphisms of direct products `F_n x F_m` of two free groups.

pub mod dynamics;
pub mod endo;
pub mod fixed;
pub mod freeword;
pub mod intlinalg;
pub mod periodic;
pub mod stallings;
pub mod whitehead;

pub use freeword::{Alphabet, ExponentVector, FreeWord, Letter, PowerSet, Tag, WordError};
pub use intlinalg::{IntMatrix, Lattice};
pub use stallings::{SubgroupGraph, TrackedGraph, WeightedAutomaton};
pub use endo::{compose, validate_and_classify, EndoError, EndoSpec, EndoType, FreeHom, MorphismFlags, PairElement, ProductEndo, TypeData};
pub use fixed::{fixed_subgroup, FixError, FixReport, Membership, SubgroupBasisInput, Verdict};
pub use periodic::{periodic_subgroup, PerError, PerMembership, PerReport};
pub use whitehead::{whp_auto_free, whp_product, Certificate, Variant, WhAnswer, WhVerdict};
pub use dynamics::{boundary_fixed_classify, iterate_truncated, uniform_continuity, BoundaryClass, BoundaryLabel, DynError, TruncatedPoint, UCReport};
