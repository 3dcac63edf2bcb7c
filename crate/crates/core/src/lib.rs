//! Exact invariants of quasismooth Fano 3-folds given by weights and degrees:
//! Hodge numbers from the Milnor algebra, singularity baskets, orbifold Euler
//! characteristics, projection cascades and deformation counts, plus a
//! catalogue verifier that compares all of them with printed tables.
//!
//! ```
//! use fanocalc::{h21_hypersurface, hodge_diamond};
//! let h21 = h21_hypersurface(&[1, 5, 6, 22, 33], 66).unwrap();
//! assert_eq!(hodge_diamond(1, h21).euler(), -236);
//! ```

pub mod basket;
pub mod catalog;
pub mod error;
pub mod geometry;
pub mod hodge;
pub mod moduli;
pub mod orbifold;
pub mod projection;
pub mod series;

pub use basket::{
    compute_basket_ci, compute_basket_hypersurface, normalize_quotient, singular_strata, Basket,
    QuotientSingularity, Stratum,
};
pub use catalog::{
    load_catalog, primary_route, query, verify_all, Catalog, Field, Filter, ReportEntry, ReportFormat,
    ResultsStore, Route, Status, VerificationReport, VerifyOptions,
};
pub use error::{Error, Result};
pub use geometry::{
    euler_from_hodge, genus, hilbert_series_ci, hilbert_series_pfaffian, validate_family, EquationModel,
    Expected, FamilyKey, FamilyRecord, ValidationReport, WeightedSpace,
};
pub use hodge::{h21_hypersurface, hodge_diamond, milnor_series, primitive_hodge, HodgeDiamond};
pub use moduli::{
    alpha_invariant, elephant_section_count, h1_tangent, jacobian_moduli_oracle, moduli, Assumption,
    ElephantSections, ModuliResult,
};
pub use orbifold::{euler_orbifold_ci, euler_topological};
pub use projection::{
    conifold_euler_update, conifold_h21_update, nodes_type1_codim2, resolve_cascade, unprojection_basket,
    BaseKind, CascadePath, CascadeResolver, CascadeResult, ProjectionKind, ProjectionStep,
};
pub use series::{expand_product_quotient, series_mul, PowerSeries, Rational};
