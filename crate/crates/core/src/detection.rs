//! Signed-cycle hypothesis tests between `G(n, p)` and the `L_inf` torus model,
//! power curves, dimension estimation by mean inversion, and phase-diagram
//! boundary data.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::expansion::{
    er_variance, expected_signed_cycle_mean_with, variance_predictor_with, CycleStat,
    VarianceModel,
};
use crate::geometry::{ModelParams, QSpec};
use crate::graph::{sample_er, sample_rgg, Graph, RngSpec};
use crate::numeric::wilson_interval;
use crate::polymer::{PolymerConfig, ValidityRule};
use crate::stats::CycleCounts;

/// Default z-score above which a test is predicted to succeed.
pub const DEFAULT_Z_CUTOFF: f64 = 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Decision {
    H0,
    H1,
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::H0 => "H0",
            Decision::H1 => "H1",
        })
    }
}

/// Knobs shared by the predictors and tests.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectionConfig {
    pub variance: VarianceModel,
    pub polymer: PolymerConfig,
    pub z_cutoff: f64,
}

impl Default for DetectionConfig {
    fn default() -> Self {
        DetectionConfig {
            variance: VarianceModel::RggExact,
            polymer: PolymerConfig::with_rule(ValidityRule::NoWrap),
            z_cutoff: DEFAULT_Z_CUTOFF,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestOutcome {
    pub decision: Decision,
    pub statistic: f64,
    pub threshold: f64,
    pub predicted_mean: f64,
    pub predicted_z: f64,
}

/// The tie-inclusive rule: `H1` iff the statistic lies at or beyond half the
/// predicted mean, on the side of the mean.
pub fn decide(statistic: f64, predicted_mean: f64) -> Decision {
    let threshold = predicted_mean / 2.0;
    let beyond = if predicted_mean >= 0.0 {
        statistic >= threshold
    } else {
        statistic <= threshold
    };
    if beyond {
        Decision::H1
    } else {
        Decision::H0
    }
}

/// Value of the cycle statistic on `g`, centred at `p`.
pub fn cycle_statistic(g: &Graph, stat: CycleStat, p: f64) -> f64 {
    let c = CycleCounts::of(g);
    match stat {
        CycleStat::C3 => c.signed_triangles(p),
        CycleStat::C4 => c.signed_four_cycles(p),
    }
}

fn require_cycle_model(params: &ModelParams) -> Result<()> {
    if params.q != QSpec::Infinity {
        return Err(Error::UnsupportedGeometry(format!(
            "predicted means need q = inf, got q = {}",
            params.q
        )));
    }
    Ok(())
}

/// Predicted mean, variances and z-score of a cycle statistic on `n` vertices.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub stat: CycleStat,
    pub n: usize,
    pub d: usize,
    pub mean: f64,
    pub var_er: f64,
    pub var_rgg: f64,
    pub z: f64,
    pub succeeds: bool,
}

pub fn predicted_success(stat: CycleStat, n: usize, params: &ModelParams) -> Result<Prediction> {
    predicted_success_with(stat, n, params, &DetectionConfig::default())
}

pub fn predicted_success_with(
    stat: CycleStat,
    n: usize,
    params: &ModelParams,
    cfg: &DetectionConfig,
) -> Result<Prediction> {
    require_cycle_model(params)?;
    let p = params.p;
    if p >= 1.0 {
        return Ok(Prediction {
            stat,
            n,
            d: params.d,
            mean: 0.0,
            var_er: 0.0,
            var_rgg: 0.0,
            z: 0.0,
            succeeds: false,
        });
    }
    let mean = expected_signed_cycle_mean_with(stat.length(), n, params, &cfg.polymer)?;
    let var_er = er_variance(stat, n, p);
    let var_rgg = variance_predictor_with(stat, n, params, cfg.variance, &cfg.polymer)?.value;
    let total = var_er + var_rgg.max(0.0);
    let z = if total > 0.0 { mean.abs() / total.sqrt() } else { 0.0 };
    Ok(Prediction {
        stat,
        n,
        d: params.d,
        mean,
        var_er,
        var_rgg,
        z,
        succeeds: z >= cfg.z_cutoff,
    })
}

/// Runs the signed-cycle test on `g` against the model `params`.
pub fn detect(g: &Graph, params: &ModelParams, stat: CycleStat) -> Result<TestOutcome> {
    detect_with(g, params, stat, &DetectionConfig::default())
}

pub fn detect_with(
    g: &Graph,
    params: &ModelParams,
    stat: CycleStat,
    cfg: &DetectionConfig,
) -> Result<TestOutcome> {
    require_cycle_model(params)?;
    if params.p >= 1.0 {
        return Ok(TestOutcome {
            decision: Decision::H1,
            statistic: 0.0,
            threshold: 0.0,
            predicted_mean: 0.0,
            predicted_z: 0.0,
        });
    }
    let pred = predicted_success_with(stat, g.n(), params, cfg)?;
    let statistic = cycle_statistic(g, stat, params.p);
    Ok(TestOutcome {
        decision: decide(statistic, pred.mean),
        statistic,
        threshold: pred.mean / 2.0,
        predicted_mean: pred.mean,
        predicted_z: pred.z,
    })
}

/// One row of a power table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerRow {
    pub d: usize,
    pub stat: CycleStat,
    /// Fraction of `G(n, p)` samples rejected.
    pub type1: f64,
    /// Fraction of geometric samples accepted as `G(n, p)`.
    pub type2: f64,
    /// Wilson interval on `type2`.
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub type1_ci: (f64, f64),
    pub predicted_z: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerTable {
    pub n: usize,
    pub p: f64,
    pub replicates: usize,
    pub level: f64,
    pub rows: Vec<PowerRow>,
}

impl PowerTable {
    pub const CSV_HEADER: &'static str = "d,type1,type2,ci_lo,ci_hi";

    pub fn rows_for(&self, stat: CycleStat) -> impl Iterator<Item = &PowerRow> {
        self.rows.iter().filter(move |r| r.stat == stat)
    }

    /// CSV rows for one statistic, in grid order.
    pub fn to_csv(&self, stat: CycleStat) -> String {
        let mut s = String::from(Self::CSV_HEADER);
        s.push('\n');
        for r in self.rows_for(stat) {
            s.push_str(&format!("{},{},{},{},{}\n", r.d, r.type1, r.type2, r.ci_lo, r.ci_hi));
        }
        s
    }
}

/// Stream offsets separating null and geometric samples.
const NULL_STREAM: u64 = 0x4e55_4c4c;
const GEOMETRIC_STREAM: u64 = 0x5247_4700;

/// Empirical error rates of the signed-cycle tests over a dimension grid.
///
/// Null samples are shared across grid points; every statistic in `stats` is
/// evaluated on the same graphs.
pub fn power_table(
    n: usize,
    p: f64,
    d_grid: &[usize],
    stats: &[CycleStat],
    replicates: usize,
    seeds: RngSpec,
    cfg: &DetectionConfig,
) -> Result<PowerTable> {
    if d_grid.is_empty() {
        return invalid("dimension grid is empty");
    }
    if stats.is_empty() {
        return invalid("no statistic requested");
    }
    if replicates == 0 {
        return invalid("replicates must be positive");
    }
    if !(p > 0.0 && p <= 1.0) {
        return invalid(format!("p must lie in (0, 1], got {p}"));
    }
    let level = 0.95;
    let stat_values = |g: &Graph| -> Vec<f64> {
        if p >= 1.0 {
            return vec![0.0; stats.len()];
        }
        let c = CycleCounts::of(g);
        stats
            .iter()
            .map(|s| match s {
                CycleStat::C3 => c.signed_triangles(p),
                CycleStat::C4 => c.signed_four_cycles(p),
            })
            .collect()
    };
    let null_root = RngSpec { stream_index: seeds.stream_index ^ NULL_STREAM, ..seeds };
    let null: Vec<Vec<f64>> = (0..replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = null_root.replicate(r as u64).rng();
            Ok(stat_values(&sample_er(n, p, &mut rng)?))
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::new();
    for (gi, &d) in d_grid.iter().enumerate() {
        let params = ModelParams::linfty(n, d, p)?;
        let preds: Vec<Prediction> = stats
            .iter()
            .map(|&s| predicted_success_with(s, n, &params, cfg))
            .collect::<Result<_>>()?;
        let root = RngSpec {
            stream_index: seeds.stream_index ^ GEOMETRIC_STREAM ^ (gi as u64) << 32,
            ..seeds
        };
        let alt: Vec<Vec<f64>> = (0..replicates)
            .into_par_iter()
            .map(|r| {
                let mut rng = root.replicate(r as u64).rng();
                Ok(stat_values(&sample_rgg(&params, &mut rng)?.0))
            })
            .collect::<Result<_>>()?;
        for (si, &stat) in stats.iter().enumerate() {
            let mean = preds[si].mean;
            let rejected = null.iter().filter(|v| decide(v[si], mean) == Decision::H1).count() as u64;
            let missed = alt.iter().filter(|v| decide(v[si], mean) == Decision::H0).count() as u64;
            let reps = replicates as u64;
            let (ci_lo, ci_hi) = wilson_interval(missed, reps, level);
            rows.push(PowerRow {
                d,
                stat,
                type1: rejected as f64 / reps as f64,
                type2: missed as f64 / reps as f64,
                ci_lo,
                ci_hi,
                type1_ci: wilson_interval(rejected, reps, level),
                predicted_z: preds[si].z,
            });
        }
    }
    Ok(PowerTable {
        n,
        p,
        replicates,
        level,
        rows,
    })
}

/// Single-statistic form of [`power_table`].
pub fn power_curve(
    n: usize,
    p: f64,
    d_grid: &[usize],
    stat: CycleStat,
    replicates: usize,
    seeds: RngSpec,
) -> Result<PowerTable> {
    power_table(n, p, d_grid, &[stat], replicates, seeds, &DetectionConfig::default())
}

/// Predicted means `M_d` over a dimension range, strictly monotone in `d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MdGrid {
    pub stat: CycleStat,
    pub n: usize,
    pub p: f64,
    pub dims: Vec<usize>,
    pub means: Vec<f64>,
}

/// Relative slack under which two distances count as a tie.
const TIE_TOLERANCE: f64 = 1e-12;

impl MdGrid {
    pub fn build(
        stat: CycleStat,
        n: usize,
        p: f64,
        d_min: usize,
        d_max: usize,
        cfg: &PolymerConfig,
    ) -> Result<Self> {
        if d_min < 1 || d_max < d_min {
            return invalid(format!("need 1 <= d_min <= d_max, got [{d_min}, {d_max}]"));
        }
        if !(p > 0.0 && p < 1.0) {
            return invalid(format!("p must lie in (0, 1), got {p}"));
        }
        // lambda falls with d, so the smallest dimension is the binding case
        let first = ModelParams::linfty(n, d_min, p)?;
        cfg.rule.check(&stat.pattern(), first.lambda).map_err(|e| {
            Error::Precondition(format!("d_min = {d_min} too small for the polymer expansion: {e}"))
        })?;
        let dims: Vec<usize> = (d_min..=d_max).collect();
        let means: Vec<f64> = dims
            .iter()
            .map(|&d| {
                let params = ModelParams::linfty(n, d, p)?;
                expected_signed_cycle_mean_with(stat.length(), n, &params, cfg)
            })
            .collect::<Result<_>>()?;
        if dims.len() > 1 {
            let dir = (means[1] - means[0]).signum();
            let monotone = dir != 0.0 && means.windows(2).all(|w| (w[1] - w[0]).signum() == dir);
            if !monotone {
                return Err(Error::Precondition(format!(
                    "{stat} means are not strictly monotone on [{d_min}, {d_max}]; \
                     try another statistic or a narrower range"
                )));
            }
        }
        Ok(MdGrid {
            stat,
            n,
            p,
            dims,
            means,
        })
    }

    /// Grid point whose mean is nearest `value`; ties go to the smaller `d`.
    pub fn nearest(&self, value: f64) -> usize {
        let mut best = 0;
        let mut best_dist = f64::INFINITY;
        for (i, &m) in self.means.iter().enumerate() {
            let dist = (value - m).abs();
            if dist < best_dist * (1.0 - TIE_TOLERANCE) - f64::MIN_POSITIVE {
                best = i;
                best_dist = dist;
            }
        }
        self.dims[best]
    }

    pub fn mean_of(&self, d: usize) -> Option<f64> {
        self.dims.iter().position(|&x| x == d).map(|i| self.means[i])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionEstimate {
    pub d: usize,
    pub statistic: f64,
}

/// Nearest-mean inversion of the cycle statistic over `[d_min, d_max]`.
pub fn estimate_dimension(
    g: &Graph,
    p: f64,
    stat: CycleStat,
    d_min: usize,
    d_max: usize,
) -> Result<DimensionEstimate> {
    let grid = MdGrid::build(stat, g.n(), p, d_min, d_max, &DetectionConfig::default().polymer)?;
    Ok(estimate_on_grid(g, &grid))
}

pub fn estimate_on_grid(g: &Graph, grid: &MdGrid) -> DimensionEstimate {
    let statistic = cycle_statistic(g, grid.stat, grid.p);
    DimensionEstimate {
        d: grid.nearest(statistic),
        statistic,
    }
}

/// Histogram of estimates from repeated samples at a true dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecoveryReport {
    pub true_d: usize,
    pub stat: CycleStat,
    pub replicates: usize,
    pub exact: usize,
    /// `(estimated d, count)` in increasing `d`.
    pub histogram: Vec<(usize, usize)>,
}

impl RecoveryReport {
    pub fn exact_rate(&self) -> f64 {
        self.exact as f64 / self.replicates as f64
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("true_d,est_d,count\n");
        for &(d, c) in &self.histogram {
            s.push_str(&format!("{},{},{}\n", self.true_d, d, c));
        }
        s
    }
}

pub fn recovery_experiment(
    true_params: &ModelParams,
    grid: &MdGrid,
    replicates: usize,
    seeds: RngSpec,
) -> Result<RecoveryReport> {
    if replicates == 0 {
        return invalid("replicates must be positive");
    }
    if true_params.n != grid.n || true_params.p != grid.p {
        return invalid("grid and sampling parameters disagree on n or p");
    }
    let estimates: Vec<usize> = (0..replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = seeds.replicate(r as u64).rng();
            let (g, _) = sample_rgg(true_params, &mut rng)?;
            Ok(estimate_on_grid(&g, grid).d)
        })
        .collect::<Result<_>>()?;
    let mut histogram: Vec<(usize, usize)> = Vec::new();
    let mut sorted = estimates.clone();
    sorted.sort_unstable();
    for d in sorted {
        match histogram.last_mut() {
            Some((x, c)) if *x == d => *c += 1,
            _ => histogram.push((d, 1)),
        }
    }
    Ok(RecoveryReport {
        true_d: true_params.d,
        stat: grid.stat,
        replicates,
        exact: estimates.iter().filter(|&&d| d == true_params.d).count(),
        histogram,
    })
}

/// Smallest predicted gap between consecutive means around `d`, in units of
/// the predicted standard deviation `sqrt(Var_d + Var_{d+1})` of the statistic
/// under the geometric model.
pub fn mean_gap_in_sds(
    stat: CycleStat,
    n: usize,
    p: f64,
    d: usize,
    cfg: &DetectionConfig,
) -> Result<f64> {
    let a = ModelParams::linfty(n, d, p)?;
    let b = ModelParams::linfty(n, d + 1, p)?;
    let ma = expected_signed_cycle_mean_with(stat.length(), n, &a, &cfg.polymer)?;
    let mb = expected_signed_cycle_mean_with(stat.length(), n, &b, &cfg.polymer)?;
    let va = variance_predictor_with(stat, n, &a, cfg.variance, &cfg.polymer)?.value;
    let vb = variance_predictor_with(stat, n, &b, cfg.variance, &cfg.polymer)?.value;
    Ok((ma - mb).abs() / (va + vb).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhaseModel {
    /// Axes `x = log_n(np)`, `y = log_n d`.
    Linfty,
    /// Density `1/2`; axes `x = log_n q`, `y = log_n d`.
    Lq,
}

impl FromStr for PhaseModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "" => Err(Error::Parse("empty phase model tag".into())),
            "linfty" | "linf" | "inf" => Ok(PhaseModel::Linfty),
            "lq" => Ok(PhaseModel::Lq),
            other => Err(Error::Parse(format!("unknown phase model '{other}' (expected linfty or lq)"))),
        }
    }
}

impl fmt::Display for PhaseModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PhaseModel::Linfty => "linfty",
            PhaseModel::Lq => "lq",
        })
    }
}

/// A piecewise-linear boundary in exponent coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCurve {
    pub id: String,
    /// Scaling law in words, e.g. `d = (np)^(3/4)`.
    pub law: String,
    pub points: Vec<(f64, f64)>,
    pub conjecture: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseRegion {
    pub name: String,
    /// What holds below (or above) the boundary.
    pub description: String,
    /// Result the boundary comes from.
    pub provenance: String,
    pub curves: Vec<BoundaryCurve>,
}

fn curve(id: &str, law: &str, points: &[(f64, f64)], conjecture: bool) -> BoundaryCurve {
    BoundaryCurve {
        id: id.into(),
        law: law.into(),
        points: points.to_vec(),
        conjecture,
    }
}

fn region(name: &str, description: &str, provenance: &str, curves: Vec<BoundaryCurve>) -> PhaseRegion {
    PhaseRegion {
        name: name.into(),
        description: description.into(),
        provenance: provenance.into(),
        curves,
    }
}

/// Regime boundaries with polylog factors dropped.
pub fn phase_diagram(model: PhaseModel) -> Vec<PhaseRegion> {
    match model {
        PhaseModel::Linfty => vec![
            region(
                "triangle-detects",
                "below: the signed triangle test succeeds",
                "signed-cycle detection",
                vec![curve("c3", "d = (np)^(3/4)", &[(0.0, 0.0), (1.0, 0.75)], false)],
            ),
            region(
                "four-cycle-detects",
                "below: the signed 4-cycle test succeeds; above: low-degree tests fail",
                "signed-cycle detection and low-degree hardness",
                vec![curve("c4", "d = np", &[(0.0, 0.0), (1.0, 1.0)], false)],
            ),
            region(
                "indistinguishable",
                "above: total variation to G(n, p) vanishes",
                "information-theoretic lower bound",
                vec![curve(
                    "it",
                    "d = max(n^(3/2) p, n)",
                    &[(0.0, 1.0), (0.5, 1.0), (1.0, 1.5)],
                    false,
                )],
            ),
            region(
                "low-entropy",
                "below: the geometric model has much lower entropy than G(n, p)",
                "entropy bound",
                vec![curve("entropy", "d = np / log n", &[(0.0, 0.0), (1.0, 1.0)], false)],
            ),
        ],
        PhaseModel::Lq => vec![
            region(
                "indistinguishable",
                "above: total variation to G(n, 1/2) vanishes",
                "information-theoretic lower bound",
                vec![
                    curve("it-lq", "dq = n^3", &[(0.0, 3.0), (1.5, 1.5)], false),
                    curve("it-linfty", "d = n^(3/2)", &[(1.5, 1.5), (3.0, 1.5)], false),
                ],
            ),
            region(
                "low-entropy",
                "below: the geometric model has much lower entropy than G(n, 1/2)",
                "entropy bound",
                vec![curve("entropy", "d = n / log n", &[(0.0, 1.0), (3.0, 1.0)], false)],
            ),
            region(
                "four-cycle-detects",
                "below: the signed 4-cycle test succeeds",
                "signed 4-cycle conjecture",
                vec![
                    curve("c4-small-q", "dq = n^2", &[(0.0, 2.0), (1.0, 1.0)], true),
                    curve("c4-large-q", "d = n", &[(1.0, 1.0), (3.0, 1.0)], true),
                ],
            ),
            region(
                "triangle-detects",
                "below: the signed triangle test succeeds",
                "signed triangle conjecture",
                vec![
                    curve("c3-small-q", "dq^3 = n^3", &[(0.0, 3.0), (0.75, 0.75)], true),
                    curve("c3-large-q", "d = n^(3/4)", &[(0.75, 0.75), (3.0, 0.75)], true),
                ],
            ),
        ],
    }
}

pub const PHASE_CSV_HEADER: &str = "region,curve_id,x,y,conjecture";

pub fn phase_csv(regions: &[PhaseRegion]) -> String {
    let mut s = String::from(PHASE_CSV_HEADER);
    s.push('\n');
    for r in regions {
        for c in &r.curves {
            for &(x, y) in &c.points {
                s.push_str(&format!("{},{},{},{},{}\n", r.name, c.id, x, y, c.conjecture));
            }
        }
    }
    s
}
