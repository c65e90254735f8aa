//! Thomas-like cluster process with fixed cluster counts.

use crate::error::Result;
use crate::geom::{Vec2, Window};
use crate::pattern::PointPattern;
use crate::sampling::{sigma_from_r, RngStream};

use super::{inverse_compressed_window, uniform_in_dilation, ModelConfig, ModelFamily};

/// Simulate a Thomas-like cluster process.
///
/// Parents are binomial on the dilated pre-image window C⁻¹W ⊕ b_σ(0), with
/// the parent count scaled by the dilation area ratio so the offspring
/// intensity stays at its target. Every parent receives exactly n₁ Gaussian
/// offspring (scale σ tied to R by the containment level p); offspring are
/// mapped through the compression and those outside the window discarded.
pub fn simulate_thomas_like(
    cfg: &ModelConfig,
    window: &Window,
    rng: &mut RngStream,
) -> Result<PointPattern> {
    let p_level = match cfg.family {
        ModelFamily::ThomasLike { p } => p,
        _ => unreachable!("dispatched on family"),
    };
    let (n0, n1) = cfg.cluster_counts()?;
    let sigma = sigma_from_r(cfg.range, p_level)?;
    let pre_window = inverse_compressed_window(window, cfg.anisotropy)?;

    let parent_count =
        (n0 as f64 * pre_window.dilated_area(sigma) / pre_window.area()).floor() as usize;
    let parents: Vec<Vec2> = (0..parent_count)
        .map(|_| uniform_in_dilation(&pre_window, sigma, rng))
        .collect();

    let mut points = Vec::with_capacity(parent_count * n1);
    for parent in &parents {
        for _ in 0..n1 {
            let offspring = *parent + gaussian_displacement(sigma, rng);
            let mapped = Vec2::new(offspring.x / cfg.anisotropy, offspring.y * cfg.anisotropy);
            if window.contains(mapped) {
                points.push(mapped);
            }
        }
    }
    PointPattern::new(points, *window)
}

// centered isotropic Gaussian displacement with standard deviation sigma
pub(crate) fn gaussian_displacement(sigma: f64, rng: &mut RngStream) -> Vec2 {
    Vec2::new(sigma * rng.standard_normal(), sigma * rng.standard_normal())
}
