//! Semi-regularity of homogeneous sequences in the squarefree quotient
//! of GF(2) polynomial rings.
//!
//! The ring under study is F2[x1..xn] modulo the squares of all
//! variables, graded by degree. A sequence of homogeneous elements is
//! semi-regular when the quotient by the ideal it generates has the
//! dimensions of a particular truncated power series. This crate
//! provides:
//!
//! * exact ring arithmetic on squarefree supports ([`ring`]),
//! * dense GF(2) linear algebra and multiplication matrices ([`gf2`]),
//! * the reference series, its index, parity and positivity tools, and
//!   affine lower-bound certificates with non-existence thresholds
//!   ([`series`]),
//! * decision procedures: Hilbert series, semi-regularity (full and
//!   degree-bounded), first fall degree, quadratic rank, and
//!   closed-form predictions ([`semiregular`]),
//! * reproduction harnesses: proportion tables, censuses, the
//!   symmetric-element table, and threshold scans ([`experiments`]).

pub mod error;
pub mod experiments;
pub mod gf2;
pub mod ring;
pub mod semiregular;
pub mod series;

pub use error::{Error, Result};
pub use experiments::{
    census_by_classification, census_csv, estimate_proportion, gaussian_binomial_2,
    index_comparison_scan, proportion_csv, proportion_grid, quadratic_census,
    quadratic_class_count, sigma_csv, sigma_table, single_element_grid, threshold_csv,
    threshold_scan, AuditNote, CellMode, CensusReport, ExperimentCtx, IndexScanReport,
    ProportionCell, RankClass, SigmaCell, SigmaTable, ThresholdReport, ThresholdRow, DEFAULT_SEED,
    EXHAUSTIVE_LIMIT,
};
pub use gf2::{mult_map_matrix, stacked_ideal_matrix, BitMatrix, BitVec};
pub use ring::{
    element_add, element_mul, monomial_mul, random_element, sigma, Element, GradedBasisIndex,
    Monomial, MAX_VARS,
};
pub use semiregular::{
    ffd_vs_index_veto, first_fall_degree, hilbert_series, hilbert_series_with_ranks, ideal_index,
    is_d_semiregular, is_semiregular, is_trivially_semiregular, predicted_index_if_semiregular,
    quadratic_rank, semiregular_via_maps, sigma_semiregular_predicted, Budget, Divergence,
    HilbertData, IdealSpec, SemiregularReport,
};
pub use series::{
    gamma, gamma_positivity_check, linear_lower_bound, nonexistence_threshold,
    single_degree_slope_certificate, t_series, tau, truncation_algebra_check, verify_lower_bound,
    DegreeVector, GammaPositivityReport, GammaViolation, IntSeries, LinearLowerBound,
    SlopeCertificate, ThresholdCertificate,
};
