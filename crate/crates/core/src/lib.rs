//! Construction and verification of strong difference families, relative
//! difference families, and 2-designs over finite abelian groups and finite
//! fields.
//!
//! The crate is organized around three object tiers, each with an
//! independent verifier, and the machinery connecting them:
//!
//! - [`field`] / [`group`]: finite fields F_{p^f} with cyclotomic classes,
//!   and abelian groups (Z_n, field-additive, products) with a canonical
//!   element encoding;
//! - [`family`]: strong difference families, relative difference families,
//!   2-designs, development and the fill-the-cosets compositions;
//! - [`bound`]: the exact Q(d,m) threshold calculator;
//! - [`paley`] / [`symbolic`]: Paley difference multisets, the ordered
//!   lifting schemes, and their symbolic D_h tables;
//! - [`lifting`] / [`catalog`]: the fundamental construction turning an
//!   ordered SDF with companions into a relative difference family, plus the
//!   built-in catalog of explicit constructions;
//! - [`search`] / [`constrained`]: the backtracking witness search, range
//!   scanner, constrained-element finder and the stepwise greedy strategy;
//! - [`formats`]: the JSON interchange schemas.

pub mod arith;
pub mod bound;
pub mod catalog;
pub mod constrained;
pub mod error;
pub mod family;
pub mod field;
pub mod formats;
pub mod group;
pub mod lifting;
pub mod paley;
pub mod search;
pub mod symbolic;

pub use bound::{q_bound, BoundQuery};
pub use catalog::{catalog, catalog_entry, CatalogEntry, CatalogObject, Expected};
pub use constrained::{
    build_condition_table, find_constrained_element, greedy_lift_search, ConditionTable,
    CycloConstraint, GreedyOutcome,
};
pub use error::{Error, Result};
pub use family::{
    affine_plane, compose_design, develop_df, difference_multiset, trivial_design,
    ComposeVariant, Design, DesignVerdict, DfVerdict, DifferenceTally,
    RelativeDifferenceFamily, SdfVerdict, StrongDifferenceFamily,
};
pub use field::{FieldElem, FiniteField, DEFAULT_DLOG_THRESHOLD};
pub use group::{make_cyclic, make_field_additive, make_product, AbelianGroup, GroupElem, Subgroup};
pub use lifting::{compute_dh, double, lift, DhFactorization, LiftInput};
pub use paley::{build_scheme, paley_sdf, PaleyScheme, PaleyType, SchemeVariant};
pub use search::{
    admissible_q, assemble_lift_input, scan_range, search, ScanConfig, ScanRecord,
    SearchProblem, SearchResult, SearchStatus,
};
pub use symbolic::{evaluate_dh, symbolic_dh, transversal_check, SymbolicDhTable, SymbolicDiff};
