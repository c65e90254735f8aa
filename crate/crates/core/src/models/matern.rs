//! Matérn-like cluster process with elliptical clusters.

use crate::error::Result;
use crate::geom::{Vec2, Window};
use crate::pattern::PointPattern;
use crate::sampling::{kappa_from_a, sample_von_mises, RngStream};

use super::{uniform_in_dilation, ModelConfig, ModelFamily};

/// Simulate a Matérn-like cluster process with elliptic clusters.
///
/// Cluster centers form a binomial process on the window dilated by the
/// longer half-axis R, with the count scaled by the dilation area ratio.
/// Each cluster is an ellipse with half-axes (R, τR), oriented by a von
/// Mises draw around μ, holding exactly n₁ uniformly placed offspring;
/// offspring outside the window are discarded.
pub fn simulate_matern_elliptical(
    cfg: &ModelConfig,
    window: &Window,
    rng: &mut RngStream,
) -> Result<PointPattern> {
    simulate_with_diagnostics(cfg, window, rng).map(|(pattern, _, _)| pattern)
}

// exposes the drawn cluster centers and orientations for distributional tests
pub(crate) fn simulate_with_diagnostics(
    cfg: &ModelConfig,
    window: &Window,
    rng: &mut RngStream,
) -> Result<(PointPattern, Vec<Vec2>, Vec<f64>)> {
    let (mu, tau, kappa_max) = match cfg.family {
        ModelFamily::MaternLikeElliptical { mu, tau, kappa_max } => (mu, tau, kappa_max),
        _ => unreachable!("dispatched on family"),
    };
    let (n0, n1) = cfg.cluster_counts()?;
    let kappa = kappa_from_a(cfg.anisotropy, kappa_max)?;
    let radius = cfg.range;

    let center_count =
        (n0 as f64 * window.dilated_area(radius) / window.area()).floor() as usize;
    let mut points = Vec::with_capacity(center_count * n1);
    let mut centers = Vec::with_capacity(center_count);
    let mut orientations = Vec::with_capacity(center_count);
    for _ in 0..center_count {
        let center = uniform_in_dilation(window, radius, rng);
        let beta = sample_von_mises(mu, kappa, rng);
        centers.push(center);
        orientations.push(beta);
        let (sin_b, cos_b) = beta.sin_cos();
        for _ in 0..n1 {
            // uniform in the unit disk, scaled to the (R, τR) ellipse and
            // rotated to the cluster orientation
            let r = rng.uniform(0.0, 1.0).sqrt();
            let phi = rng.uniform_angle();
            let (sx, sy) = (radius * r * phi.cos(), tau * radius * r * phi.sin());
            let offspring = Vec2::new(
                center.x + sx * cos_b - sy * sin_b,
                center.y + sx * sin_b + sy * cos_b,
            );
            if window.contains(offspring) {
                points.push(offspring);
            }
        }
    }
    Ok((PointPattern::new(points, *window)?, centers, orientations))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(gamma: f64, a: f64, n: usize, range: f64, tau: f64) -> ModelConfig {
        ModelConfig {
            family: ModelFamily::MaternLikeElliptical {
                mu: std::f64::consts::PI / 3.0,
                tau,
                kappa_max: 10.0,
            },
            range,
            strength: gamma,
            anisotropy: a,
            n_target: n,
        }
    }

    #[test]
    fn circular_clusters_when_tau_is_one() {
        let w = Window::centered_square(245.0).unwrap();
        let cfg = config(0.15, 1.0, 300, 10.0, 1.0);
        let mut rng = RngStream::new(20, 0);
        let (pattern, centers, orientations) =
            simulate_with_diagnostics(&cfg, &w, &mut rng).unwrap();
        let expected_centers = {
            let (n0, _) = cfg.cluster_counts().unwrap();
            (n0 as f64 * w.dilated_area(10.0) / w.area()).floor() as usize
        };
        assert_eq!(orientations.len(), expected_centers);
        // disk clusters: every offspring within R of its nearest center
        for p in pattern.points() {
            let nearest = centers
                .iter()
                .map(|c| (*p - *c).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(nearest <= 10.0 * (1.0 + 1e-12), "offspring {nearest} from center");
        }
        assert!(pattern.points().iter().all(|p| w.contains(*p)));
    }

    #[test]
    fn orientations_concentrate_around_mu_when_anisotropic() {
        let w = Window::centered_square(245.0).unwrap();
        let cfg = config(0.25, 0.7, 300, 10.0, 0.4);
        let mut rng = RngStream::new(21, 0);
        let mut all = Vec::new();
        while all.len() < 500 {
            let (_, _, orientations) = simulate_with_diagnostics(&cfg, &w, &mut rng).unwrap();
            all.extend(orientations);
        }
        let (s, c) = all
            .iter()
            .fold((0.0, 0.0), |(s, c), b| (s + b.sin(), c + b.cos()));
        let mean = s.atan2(c);
        let target = std::f64::consts::PI / 3.0;
        assert!(
            (mean - target).abs() < 0.1,
            "circular mean {mean} vs {target}"
        );
    }

    #[test]
    fn orientations_axially_uniform_when_isotropic() {
        let w = Window::centered_square(245.0).unwrap();
        let cfg = config(0.25, 1.0, 300, 10.0, 0.4);
        let mut rng = RngStream::new(22, 0);
        let mut all = Vec::new();
        for _ in 0..500 {
            let (_, _, orientations) = simulate_with_diagnostics(&cfg, &w, &mut rng).unwrap();
            all.extend(orientations);
        }
        // resultant of the doubled angles measures axial nonuniformity
        let n = all.len() as f64;
        let (s, c) = all.iter().fold((0.0, 0.0), |(s, c), b| {
            (s + (2.0 * b).sin(), c + (2.0 * b).cos())
        });
        let resultant = (s / n).hypot(c / n);
        assert!(resultant < 0.1, "axial resultant {resultant}");
    }

    #[test]
    fn reproducible_given_seed() {
        let w = Window::centered_square(141.0).unwrap();
        let cfg = config(0.25, 0.7, 100, 10.0, 0.4);
        let a = simulate_matern_elliptical(&cfg, &w, &mut RngStream::new(23, 7)).unwrap();
        let b = simulate_matern_elliptical(&cfg, &w, &mut RngStream::new(23, 7)).unwrap();
        assert_eq!(a.points(), b.points());
    }
}
