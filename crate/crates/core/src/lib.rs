//! Random geometric graphs on the high-dimensional torus: geometry, sampling,
//! cluster-expansion moments of signed subgraph counts, detection tests and
//! information-theoretic bounds.

pub mod bounds;
pub mod detection;
pub mod error;
pub mod expansion;
pub mod geometry;
pub mod graph;
pub mod numeric;
pub mod pattern;
pub mod polymer;
pub mod stats;

pub use error::{Error, Result};
pub use geometry::{
    circ_dist, derive_tau_lambda, lq_dist, phi, sum_uq_cdf, ModelParams, PhiMethod, PhiValue,
    QSpec, SumPowerCdf, ThresholdConfig, TorusPoint,
};
pub use graph::{
    sample_er, sample_hypercube_rag, sample_rgg, sample_rgg_1d_complement, Graph, LatentSample,
    RngSpec, SigmaSpec,
};
pub use pattern::{pattern_facts, Block, CanonKey, EdgePattern, PatternFacts};
pub use polymer::{
    chi, err, expected_weight_1d, psi, ChiMethod, PolymerConfig, PolymerTable, PolymerValue,
    ValidityRule,
};
pub use expansion::{
    expected_signed_cycle_mean, expected_weight, signed_cycle_asymptotic, signed_weight,
    signed_weight_bound, unsigned_graph_asymptotic, variance_predictor, CycleStat, VarianceModel,
    WeightResult,
};
pub use stats::{
    mc_run, signed_4cycle_count, signed_pattern_estimate, signed_triangle_count, ExperimentReport,
    ModelSpec, StatKind, StatSpec,
};
pub use detection::{
    decide, detect, estimate_dimension, phase_diagram, power_curve, power_table,
    predicted_success, Decision, DetectionConfig, MdGrid, PhaseModel, PhaseRegion, PowerTable,
    Prediction, TestOutcome,
};
pub use bounds::{
    gamma_moment_mc, hypercube_influences, hypercube_tv_bound, kl_bound,
    low_degree_advantage_small, overlap_f, sigma_conv_moment_linfty, small_ball_check,
    InfluenceVector, KlReport, MomentTable,
};
