//! Monte Carlo isotropy test: extremeness orderings, p-values and the
//! end-to-end pipeline from a point pattern to a test decision.
//!
//! The observed functional statistic T₀ is compared against statistics
//! T₁..T_M from rotation-resampled Fry patterns. Two total orderings are
//! offered: the trapezoidal L1 norm of the curve (integral ordering) and the
//! extreme rank length measure (ERL) from global envelope testing.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimator::{
    sector_contrast_curve, uniform_grid, wong_chiu_curve, zero_weight_count, CurveStatistic,
    EstimatorContext,
};
use crate::fry::{fry_points, resample, FryPattern, RotationScheme};
use crate::pattern::PointPattern;
use crate::sampling::RngStream;

/// Which functional contrast statistic the test evaluates.
#[derive(Debug, Clone, PartialEq)]
pub enum StatisticKind {
    /// Pointwise difference of two sector K-functions (two-sided extremeness).
    SectorContrast { alpha1: f64, alpha2: f64, eps: f64 },
    /// Maximal deviation of the sector ratio from its uniform reference
    /// (one-sided extremeness).
    WongChiu {
        alpha_grid: Vec<f64>,
        eps_grid: Vec<f64>,
    },
}

impl StatisticKind {
    /// Ratio statistic on the default 5° × 2.5° grid.
    pub fn wong_chiu_default() -> StatisticKind {
        StatisticKind::WongChiu {
            alpha_grid: crate::estimator::default_alpha_grid(),
            eps_grid: crate::estimator::default_eps_grid(),
        }
    }

    pub fn sidedness(&self) -> Sidedness {
        match self {
            StatisticKind::SectorContrast { .. } => Sidedness::Two,
            StatisticKind::WongChiu { .. } => Sidedness::One,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            StatisticKind::SectorContrast { .. } => "sector_contrast",
            StatisticKind::WongChiu { .. } => "wong_chiu",
        }
    }
}

/// Total ordering used to rank curves by extremeness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveOrdering {
    /// Trapezoidal L1 norm; larger is more extreme.
    Integral,
    /// Extreme rank length position; smaller is more extreme.
    Erl,
}

impl CurveOrdering {
    pub fn name(&self) -> &'static str {
        match self {
            CurveOrdering::Integral => "integral",
            CurveOrdering::Erl => "erl",
        }
    }
}

/// Whether only large values (one-sided) or both tails (two-sided) count as
/// extreme at each grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sidedness {
    One,
    Two,
}

/// Full specification of one isotropy test.
#[derive(Debug, Clone)]
pub struct TestConfig {
    pub statistic: StatisticKind,
    pub ordering: CurveOrdering,
    pub scheme: RotationScheme,
    /// Number of bootstrap samples M.
    pub bootstrap_count: usize,
    pub r_max: f64,
    /// Number of evaluation points of the functional statistic.
    pub grid_size: usize,
    pub seed: u64,
}

impl TestConfig {
    pub fn validate(&self) -> Result<()> {
        if self.bootstrap_count < 1 {
            return Err(Error::Config("bootstrap count M must be >= 1".into()));
        }
        if !(self.r_max > 0.0 && self.r_max.is_finite()) {
            return Err(Error::Config(format!(
                "r_max must be positive and finite, got {}",
                self.r_max
            )));
        }
        if self.grid_size < 2 {
            return Err(Error::Config("grid size k must be >= 2".into()));
        }
        match &self.statistic {
            StatisticKind::SectorContrast { eps, .. } => {
                if !(0.0..=std::f64::consts::FRAC_PI_2).contains(eps) {
                    return Err(Error::Config(format!(
                        "sector half-angle must lie in [0, pi/2], got {eps}"
                    )));
                }
            }
            StatisticKind::WongChiu {
                alpha_grid,
                eps_grid,
            } => {
                if alpha_grid.is_empty() || eps_grid.is_empty() {
                    return Err(Error::Config("ratio statistic grids must be nonempty".into()));
                }
            }
        }
        Ok(())
    }
}

/// Outcome of one Monte Carlo isotropy test.
#[derive(Debug, Clone)]
pub struct TestResult {
    /// Monte Carlo p-value, one of {j/(M+1), j = 1..M+1}.
    pub p_value: f64,
    /// Extremeness score of the observed curve (L1 norm or ERL position).
    pub observed_score: f64,
    /// Scores of the M bootstrap curves in bootstrap order.
    pub bootstrap_scores: Vec<f64>,
    pub ordering: CurveOrdering,
    pub warnings: Vec<String>,
}

impl TestResult {
    /// Rejection decision at significance level `alpha`.
    pub fn reject_at(&self, alpha: f64) -> bool {
        self.p_value <= alpha
    }
}

/// Trapezoidal approximation of ∫ |T(r)| dr over the curve's grid.
///
/// Missing grid values are skipped, linearly bridging the gap. Fewer than
/// two usable points is an error.
pub fn integral_extremeness(curve: &CurveStatistic) -> Result<f64> {
    let skip: Vec<bool> = curve.values().iter().map(|v| v.is_none()).collect();
    trapezoid_abs(curve, &skip)
}

fn trapezoid_abs(curve: &CurveStatistic, skip: &[bool]) -> Result<f64> {
    let mut prev: Option<(f64, f64)> = None;
    let mut total = 0.0;
    let mut used = 0usize;
    for (j, (r, v)) in curve.r_grid().iter().zip(curve.values()).enumerate() {
        if skip[j] {
            continue;
        }
        let v = v.ok_or(Error::DegenerateCurve)?.abs();
        if let Some((r0, v0)) = prev {
            total += (r - r0) * (v0 + v) / 2.0;
        }
        prev = Some((*r, v));
        used += 1;
    }
    if used < 2 {
        return Err(Error::DegenerateCurve);
    }
    Ok(total)
}

/// Extreme rank length ordering of M+1 curves on a common grid.
///
/// Every curve is ranked at each grid point from most to least extreme (ties
/// share the minimal rank), represented by the ascending-sorted vector of
/// its pointwise ranks, and the vectors are ordered lexicographically. The
/// returned score is each curve's 1-based position in that order; the most
/// extreme curve has position 1, and fully tied curves share a position.
pub fn erl_order(curves: &[CurveStatistic], sidedness: Sidedness) -> Result<Vec<f64>> {
    if curves.is_empty() {
        return Err(Error::DegenerateCurve);
    }
    for c in &curves[1..] {
        if !c.same_grid(&curves[0]) {
            return Err(Error::GridMismatch);
        }
    }
    let skip = union_missing(curves);
    erl_positions(curves, &skip, sidedness)
}

fn union_missing(curves: &[CurveStatistic]) -> Vec<bool> {
    let k = curves[0].len();
    let mut skip = vec![false; k];
    for c in curves {
        for (j, v) in c.values().iter().enumerate() {
            if v.is_none() {
                skip[j] = true;
            }
        }
    }
    skip
}

fn erl_positions(
    curves: &[CurveStatistic],
    skip: &[bool],
    sidedness: Sidedness,
) -> Result<Vec<f64>> {
    let m = curves.len();
    let used: Vec<usize> = (0..curves[0].len()).filter(|j| !skip[*j]).collect();
    if used.is_empty() {
        return Err(Error::DegenerateCurve);
    }
    // pointwise ranks, most extreme = 1, ties share the minimal rank
    let mut rank_vectors: Vec<Vec<u32>> = vec![Vec::with_capacity(used.len()); m];
    let mut order: Vec<usize> = (0..m).collect();
    for &j in &used {
        let values: Vec<f64> = curves
            .iter()
            .map(|c| c.values()[j].expect("missing values are skipped"))
            .collect();
        order.sort_unstable_by(|a, b| values[*b].partial_cmp(&values[*a]).unwrap());
        // descending rank: 1 + number of strictly larger values
        let mut rank_desc = vec![0u32; m];
        let mut rank = 1u32;
        for (t, &idx) in order.iter().enumerate() {
            if t > 0 && values[idx] < values[order[t - 1]] {
                rank = t as u32 + 1;
            }
            rank_desc[idx] = rank;
        }
        match sidedness {
            Sidedness::One => {
                for i in 0..m {
                    rank_vectors[i].push(rank_desc[i]);
                }
            }
            Sidedness::Two => {
                // ascending rank: 1 + number of strictly smaller values
                let mut rank_asc = vec![0u32; m];
                let mut rank = 1u32;
                for (t, &idx) in order.iter().rev().enumerate() {
                    if t > 0 && values[idx] > values[order[m - t]] {
                        rank = t as u32 + 1;
                    }
                    rank_asc[idx] = rank;
                }
                for i in 0..m {
                    rank_vectors[i].push(rank_desc[i].min(rank_asc[i]));
                }
            }
        }
    }
    for v in &mut rank_vectors {
        v.sort_unstable();
    }
    // lexicographic ordering of the sorted rank vectors; smallest first
    let mut by_vector: Vec<usize> = (0..m).collect();
    by_vector.sort_by(|a, b| rank_vectors[*a].cmp(&rank_vectors[*b]));
    let mut positions = vec![0.0; m];
    let mut position = 1usize;
    for (t, &idx) in by_vector.iter().enumerate() {
        if t > 0 && rank_vectors[idx] > rank_vectors[by_vector[t - 1]] {
            position = t + 1;
        }
        positions[idx] = position as f64;
    }
    Ok(positions)
}

/// Monte Carlo p-value (1 + #{i : T_i at least as extreme as T₀}) / (M+1).
pub fn mc_p_value(observed_score: f64, bootstrap_scores: &[f64], ordering: CurveOrdering) -> f64 {
    let at_least_as_extreme = bootstrap_scores
        .iter()
        .filter(|s| match ordering {
            CurveOrdering::Integral => **s >= observed_score,
            CurveOrdering::Erl => **s <= observed_score,
        })
        .count();
    (1 + at_least_as_extreme) as f64 / (bootstrap_scores.len() + 1) as f64
}

/// Score a family of curves (observed first) and compute the p-value.
///
/// Missing grid points are excluded symmetrically across all curves so every
/// curve is compared on the same support. Returns the observed score, the
/// bootstrap scores and the p-value.
pub fn curve_p_value(
    curves: &[CurveStatistic],
    ordering: CurveOrdering,
    sidedness: Sidedness,
) -> Result<(f64, Vec<f64>, f64)> {
    if curves.len() < 2 {
        return Err(Error::Config("need the observed curve plus M >= 1 bootstraps".into()));
    }
    for c in &curves[1..] {
        if !c.same_grid(&curves[0]) {
            return Err(Error::GridMismatch);
        }
    }
    let skip = union_missing(curves);
    let scores: Vec<f64> = match ordering {
        CurveOrdering::Integral => curves
            .iter()
            .map(|c| trapezoid_abs(c, &skip))
            .collect::<Result<_>>()?,
        CurveOrdering::Erl => erl_positions(curves, &skip, sidedness)?,
    };
    let observed = scores[0];
    let bootstrap = scores[1..].to_vec();
    let p = mc_p_value(observed, &bootstrap, ordering);
    Ok((observed, bootstrap, p))
}

fn eval_statistic(
    statistic: &StatisticKind,
    fry: &FryPattern,
    ctx: &EstimatorContext,
    grid: &[f64],
) -> Result<CurveStatistic> {
    match statistic {
        StatisticKind::SectorContrast { alpha1, alpha2, eps } => {
            sector_contrast_curve(fry, ctx, *alpha1, *alpha2, *eps, grid)
        }
        StatisticKind::WongChiu {
            alpha_grid,
            eps_grid,
        } => wong_chiu_curve(fry, ctx, grid, alpha_grid, eps_grid),
    }
}

/// Run the full nonparametric isotropy test on an observed pattern.
///
/// The Fry points are clipped at `r_max` up front (rotations preserve norms,
/// so this is equivalent to clipping inside the estimator), resampled M
/// times under the configured scheme with one RNG stream per bootstrap
/// index, and scored under the configured ordering. Fully deterministic
/// given the seed, at any parallelism degree.
pub fn isotropy_test(pattern: &PointPattern, cfg: &TestConfig) -> Result<TestResult> {
    cfg.validate()?;
    let ctx = EstimatorContext::for_pattern(pattern)?;
    let fry = fry_points(pattern, Some(cfg.r_max))?;
    let grid = uniform_grid(cfg.r_max, cfg.grid_size)?;

    let mut warnings = Vec::new();
    let dropped = zero_weight_count(&fry, ctx.window());
    if dropped > 0 {
        warnings.push(format!(
            "{dropped} Fry vectors with zero edge-correction weight were dropped"
        ));
    }

    let observed = eval_statistic(&cfg.statistic, &fry, &ctx, &grid)?;
    let bootstrap: Vec<CurveStatistic> = (1..=cfg.bootstrap_count as u64)
        .into_par_iter()
        .map(|b| {
            let mut rng = RngStream::new(cfg.seed, b);
            let resampled = resample(&fry, cfg.scheme, &mut rng)?;
            eval_statistic(&cfg.statistic, &resampled, &ctx, &grid)
        })
        .collect::<Result<_>>()?;

    let mut curves = Vec::with_capacity(cfg.bootstrap_count + 1);
    curves.push(observed);
    curves.extend(bootstrap);

    let skipped = union_missing(&curves).iter().filter(|s| **s).count();
    if skipped > 0 {
        warnings.push(format!(
            "{skipped} grid points excluded from all curves (undefined statistic)"
        ));
    }

    let (observed_score, bootstrap_scores, p_value) =
        curve_p_value(&curves, cfg.ordering, cfg.statistic.sidedness())?;
    Ok(TestResult {
        p_value,
        observed_score,
        bootstrap_scores,
        ordering: cfg.ordering,
        warnings,
    })
}
