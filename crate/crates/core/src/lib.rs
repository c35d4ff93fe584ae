//! Exact invariants of quasilinear p-forms over rational function fields of
//! characteristic p.
//!
//! The crate provides, bottom to top:
//! - exact arithmetic in `F = F_p(x_1, ..., x_m)` ([`MultiPoly`], [`RatFunc`])
//!   together with the Frobenius-coordinate decomposition of `F` over `F^p`;
//! - fraction-free linear algebra over `F` ([`matrix_rank_kernel`],
//!   [`solve_linear`]);
//! - the diagonal p-form algebra: sums, tensor products, quasi-Pfister forms,
//!   defect and anisotropic part, represented values, isometry and subform
//!   tests ([`QuasiPForm`]);
//! - p-independence, p-bases, norm fields and minimal forms;
//! - defect computations over purely inseparable extensions, entirely by
//!   F-side linear algebra, with an independent brute-force oracle for
//!   modular extensions ([`extension`]);
//! - splitting patterns over purely inseparable extensions: the strictly
//!   increasing tower, exhaustive exponent-one search, and closed forms for
//!   minimal forms, quasi-Pfister forms and their neighbors ([`splitting`]).

pub mod error;
pub mod extension;
pub mod field;
pub mod linalg;
pub mod poly;
pub mod pform;
pub mod pindep;
pub mod ratfunc;
pub mod splitting;

pub use error::{Error, Result};
pub use extension::{
    decompose_over_extension, defect_via_modular_basis, values_over_simple_extension,
    ExtensionSpec, RelativeDecomposition,
};
pub use field::{Exponents, FieldDescriptor};
pub use linalg::{matrix_rank_kernel, solve_linear};
pub use pform::{Decomposition, QuasiPForm, RepresentedSpace};
pub use pindep::{
    degree_over_fp, extract_p_basis, is_minimal, is_p_independent, minimal_subform, norm_data,
    product_anisotropy, subspace_intersection, NormData, ProductAnisotropy,
};
pub use poly::MultiPoly;
pub use ratfunc::{FpCoordinates, LaurentTerm, RatFunc};
pub use splitting::{
    inseparable_tower, neighbor_split, reference_split_table, search_splitting_pattern,
    splitting_lower_bound_check, splitting_pattern_minimal, splitting_pattern_neighbor,
    splitting_pattern_quasi_pfister, LowerBoundCheck, NeighborInput, NeighborSplitCase,
    ReportMethod, SearchBudget, SplitTable, SplitTableCell, SplittingReport, TowerReport,
    TowerStage,
};
