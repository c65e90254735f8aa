//! Edge-corrected second-order estimators and functional contrast statistics.
//!
//! All estimators are pure functions of the Fry points: each difference
//! vector z contributes 1/|W ∩ W_z| whenever it falls in the test set, and
//! the total is normalized by λ̂² = n(n−1)/|W|². Curve evaluation walks the
//! vectors in ascending norm once per angular band, so a full radius grid
//! costs the same as a single radius.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::fry::FryPattern;
use crate::geom::{angular_distance, translation_overlap, DirectedSet, Window};

/// A functional summary statistic sampled on a fixed ascending radius grid.
///
/// Grid points where the statistic is undefined (zero denominator in the
/// ratio statistic) carry `None`; orderings skip them symmetrically.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveStatistic {
    r_grid: Vec<f64>,
    values: Vec<Option<f64>>,
}

impl CurveStatistic {
    pub fn new(r_grid: Vec<f64>, values: Vec<Option<f64>>) -> Result<Self> {
        if r_grid.len() != values.len() {
            return Err(Error::Config(format!(
                "{} grid points but {} values",
                r_grid.len(),
                values.len()
            )));
        }
        let ascending =
            |w: &[f64]| w[0].partial_cmp(&w[1]) == Some(std::cmp::Ordering::Less);
        if r_grid.windows(2).any(|w| !ascending(w)) || r_grid.iter().any(|r| !r.is_finite()) {
            return Err(Error::Config("radius grid must be strictly ascending".into()));
        }
        Ok(CurveStatistic { r_grid, values })
    }

    pub fn from_values(r_grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let values = values.into_iter().map(Some).collect();
        CurveStatistic::new(r_grid, values)
    }

    #[inline]
    pub fn r_grid(&self) -> &[f64] {
        &self.r_grid
    }

    #[inline]
    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.r_grid.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.r_grid.is_empty()
    }

    pub fn missing_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_none()).count()
    }

    /// True when both curves are sampled on the identical grid.
    pub fn same_grid(&self, other: &CurveStatistic) -> bool {
        self.r_grid == other.r_grid
    }
}

/// The uniform evaluation grid r_j = j·r_max/k, j = 1..k (r = 0 excluded).
pub fn uniform_grid(r_max: f64, k: usize) -> Result<Vec<f64>> {
    if r_max <= 0.0 || r_max.is_nan() || k == 0 {
        return Err(Error::Config(format!(
            "grid needs r_max > 0 and k >= 1, got r_max={r_max}, k={k}"
        )));
    }
    Ok((1..=k).map(|j| j as f64 * r_max / k as f64).collect())
}

/// Window and intensity context shared by all estimates of one pattern.
///
/// λ̂² always comes from the observed pattern, also when evaluating
/// bootstrap Fry patterns.
#[derive(Debug, Clone, Copy)]
pub struct EstimatorContext {
    window: Window,
    source_n: usize,
    squared_intensity_hat: f64,
}

impl EstimatorContext {
    pub fn new(window: Window, source_n: usize) -> Result<Self> {
        if source_n < 2 {
            return Err(Error::TooFewPoints {
                needed: 2,
                got: source_n,
            });
        }
        let area = window.area();
        Ok(EstimatorContext {
            window,
            source_n,
            squared_intensity_hat: (source_n * (source_n - 1)) as f64 / (area * area),
        })
    }

    pub fn for_pattern(pattern: &crate::pattern::PointPattern) -> Result<Self> {
        EstimatorContext::new(*pattern.window(), pattern.len())
    }

    #[inline]
    pub fn window(&self) -> &Window {
        &self.window
    }

    #[inline]
    pub fn source_n(&self) -> usize {
        self.source_n
    }

    #[inline]
    pub fn squared_intensity_hat(&self) -> f64 {
        self.squared_intensity_hat
    }
}

/// Translational edge-corrected estimate K̂(B) of the reduced second-order
/// moment measure on the directed set `B`.
///
/// Vectors with zero overlap weight are skipped; count them separately via
/// [`zero_weight_count`] when a warning tally is wanted.
pub fn estimate_k(fry: &FryPattern, ctx: &EstimatorContext, set: &DirectedSet) -> f64 {
    let mut sum = 0.0;
    for z in fry.vectors() {
        if set.contains(*z) {
            let w = translation_overlap(&ctx.window, *z);
            if w > 0.0 {
                sum += 1.0 / w;
            }
        }
    }
    sum / ctx.squared_intensity_hat
}

/// Number of Fry vectors whose translation overlap vanishes (they cannot
/// contribute to any estimate and are dropped with a warning downstream).
pub fn zero_weight_count(fry: &FryPattern, window: &Window) -> usize {
    fry.vectors()
        .iter()
        .filter(|z| translation_overlap(window, **z) == 0.0)
        .count()
}

// Fry vectors in polar form, sorted by norm, with precomputed reciprocal
// edge-correction weights. Shared by all curve evaluations of one pattern.
struct PolarFry {
    angle: Vec<f64>,
    norm: Vec<f64>,
    weight: Vec<f64>,
}

impl PolarFry {
    fn build(fry: &FryPattern, window: &Window) -> PolarFry {
        let mut entries: Vec<(f64, f64, f64)> = fry
            .vectors()
            .iter()
            .filter_map(|z| {
                let w = translation_overlap(window, *z);
                if w > 0.0 {
                    Some((z.norm(), z.angle(), 1.0 / w))
                } else {
                    None
                }
            })
            .collect();
        entries.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        PolarFry {
            angle: entries.iter().map(|e| e.1).collect(),
            norm: entries.iter().map(|e| e.0).collect(),
            weight: entries.iter().map(|e| e.2).collect(),
        }
    }

    // out[j] = Σ weight over vectors with norm ≤ grid[j] whose angular
    // distance to alpha is ≤ eps; accumulation runs in ascending-norm order.
    fn sector_mass_curve(&self, alpha: f64, eps: f64, grid: &[f64], out: &mut [f64]) {
        let dists: Vec<f64> = self
            .angle
            .iter()
            .map(|a| angular_distance(*a, alpha))
            .collect();
        self.masked_mass_curve(&dists, eps, grid, out);
    }

    // same, with the angular distances to the axis precomputed
    fn masked_mass_curve(&self, dists: &[f64], eps: f64, grid: &[f64], out: &mut [f64]) {
        debug_assert_eq!(grid.len(), out.len());
        let mut cum = 0.0;
        let mut j = 0;
        for ((r, d), w) in self.norm.iter().zip(dists).zip(&self.weight) {
            while j < grid.len() && grid[j] < *r {
                out[j] = cum;
                j += 1;
            }
            if j >= grid.len() {
                break;
            }
            if *d <= eps {
                cum += *w;
            }
        }
        while j < grid.len() {
            out[j] = cum;
            j += 1;
        }
    }
}

/// The sector K-function K̂_sect,α,ε(r) evaluated on `grid`.
pub fn sector_k_curve(
    fry: &FryPattern,
    ctx: &EstimatorContext,
    alpha: f64,
    eps: f64,
    grid: &[f64],
) -> Result<CurveStatistic> {
    check_eps(eps)?;
    let polar = PolarFry::build(fry, &ctx.window);
    let mut mass = vec![0.0; grid.len()];
    polar.sector_mass_curve(alpha, eps, grid, &mut mass);
    let values = mass
        .iter()
        .map(|m| m / ctx.squared_intensity_hat)
        .collect();
    CurveStatistic::from_values(grid.to_vec(), values)
}

/// The contrast K̂_sect,α₁,ε(r) − K̂_sect,α₂,ε(r) of two sector K-functions.
pub fn sector_contrast_curve(
    fry: &FryPattern,
    ctx: &EstimatorContext,
    alpha1: f64,
    alpha2: f64,
    eps: f64,
    grid: &[f64],
) -> Result<CurveStatistic> {
    check_eps(eps)?;
    let polar = PolarFry::build(fry, &ctx.window);
    let mut mass1 = vec![0.0; grid.len()];
    let mut mass2 = vec![0.0; grid.len()];
    polar.sector_mass_curve(alpha1, eps, grid, &mut mass1);
    polar.sector_mass_curve(alpha2, eps, grid, &mut mass2);
    let values = mass1
        .iter()
        .zip(&mass2)
        .map(|(a, b)| (a - b) / ctx.squared_intensity_hat)
        .collect();
    CurveStatistic::from_values(grid.to_vec(), values)
}

/// Default direction grid for the ratio statistic: 0° to 175° in 5° steps.
pub fn default_alpha_grid() -> Vec<f64> {
    (0..36).map(|j| j as f64 * PI / 36.0).collect()
}

/// Default half-angle grid for the ratio statistic: 2.5° to 90° in 2.5° steps.
pub fn default_eps_grid() -> Vec<f64> {
    (1..=36).map(|j| j as f64 * PI / 72.0).collect()
}

/// The maximal-deviation ratio statistic
/// T(r) = max over (α, ε) of |K̂(S(α,ε,r)) / K̂(S(π/2,π/2,r)) − ε/(π/2)|.
///
/// Under isotropy the ratio is the uniform distribution function in ε, so T
/// measures the worst deviation from that reference. Grid points where the
/// half-disk denominator vanishes are flagged missing.
pub fn wong_chiu_curve(
    fry: &FryPattern,
    ctx: &EstimatorContext,
    grid: &[f64],
    alpha_grid: &[f64],
    eps_grid: &[f64],
) -> Result<CurveStatistic> {
    if alpha_grid.is_empty() || eps_grid.is_empty() {
        return Err(Error::Config("alpha and eps grids must be nonempty".into()));
    }
    for eps in eps_grid {
        check_eps(*eps)?;
    }
    let polar = PolarFry::build(fry, &ctx.window);
    // λ̂² cancels in the ratio; work with raw weighted masses
    let mut denom = vec![0.0; grid.len()];
    polar.sector_mass_curve(FRAC_PI_2, FRAC_PI_2, grid, &mut denom);
    let mut sup = vec![0.0_f64; grid.len()];
    let mut mass = vec![0.0; grid.len()];
    let mut dists = vec![0.0; polar.angle.len()];
    for &alpha in alpha_grid {
        for (d, a) in dists.iter_mut().zip(&polar.angle) {
            *d = angular_distance(*a, alpha);
        }
        for &eps in eps_grid {
            polar.masked_mass_curve(&dists, eps, grid, &mut mass);
            let reference = eps / FRAC_PI_2;
            for j in 0..grid.len() {
                if denom[j] > 0.0 {
                    let dev = (mass[j] / denom[j] - reference).abs();
                    if dev > sup[j] {
                        sup[j] = dev;
                    }
                }
            }
        }
    }
    let values = (0..grid.len())
        .map(|j| if denom[j] > 0.0 { Some(sup[j]) } else { None })
        .collect();
    CurveStatistic::new(grid.to_vec(), values)
}

fn check_eps(eps: f64) -> Result<()> {
    if !(0.0..=FRAC_PI_2).contains(&eps) {
        return Err(Error::Domain(format!(
            "sector half-angle must satisfy 0 <= eps <= pi/2, got {eps}"
        )));
    }
    Ok(())
}
