//! Shared fixtures for the benchmark targets.

use diff_forge::{
    affine_plane, build_scheme, catalog_entry, compose_design, ComposeVariant, Design,
    FiniteField, RelativeDifferenceFamily, SchemeVariant, SearchProblem,
};

/// The (2025,81,9,1) relative difference family from the catalog.
pub fn df_2025() -> RelativeDifferenceFamily {
    let entry = catalog_entry("lemma-2.16-p81").expect("catalog entry");
    diff_forge::lift(entry.as_lift().expect("lift entry")).expect("lifts")
}

/// The fully composed 2-(2025,9,1) design (56,925 blocks).
pub fn design_2025() -> Design {
    let ag9 = affine_plane(&FiniteField::new(3, 2, None).expect("GF(9)"));
    compose_design(&df_2025(), &ag9, ComposeVariant::FillCosets).expect("composes")
}

/// Quarter-variant search problem for p = 13 over F_q.
pub fn p13_problem(q: u64) -> SearchProblem {
    let fp = FiniteField::prime(13).expect("prime");
    let fq = FiniteField::prime(q).expect("prime");
    let scheme = build_scheme(&fp, SchemeVariant::Quarter).expect("scheme");
    SearchProblem::new(scheme, fq, 3, 1).expect("admissible")
}
