//! Simulators for the four point-process families of the power study.
//!
//! All families share the (R, γ, a) parametrization: R sets the spatial
//! scale, γ the strength of the structural feature (γ = 0 strongest), and
//! a ∈ (0, 1] the degree of anisotropy (a = 1 isotropic). The Strauss and
//! Thomas-like families induce anisotropy geometrically via the compression
//! C = diag(1/a, a); the line and Matérn-like cluster families direct their
//! lines or ellipses through a von Mises distribution with κ = κ(a).

use crate::error::{Error, Result};
use crate::geom::{Vec2, Window};
use crate::pattern::PointPattern;
use crate::sampling::RngStream;

mod line;
mod matern;
mod strauss;
mod thomas;

pub use line::simulate_line_cluster;
pub use matern::simulate_matern_elliptical;
pub use strauss::simulate_strauss;
pub use thomas::simulate_thomas_like;

/// Family-specific parameters beyond the shared (R, γ, a) triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelFamily {
    /// Fixed-n Strauss process, geometric anisotropy.
    Strauss,
    /// Thomas-like cluster process with fixed counts; `p` is the Gaussian
    /// containment level that pins σ to the range R.
    ThomasLike { p: f64 },
    /// Poisson line cluster process with von Mises line directions.
    PoissonLineCluster { mu: f64, kappa_max: f64 },
    /// Matérn-like cluster process with elliptical clusters of aspect τ and
    /// von Mises orientations.
    MaternLikeElliptical { mu: f64, tau: f64, kappa_max: f64 },
}

impl ModelFamily {
    pub fn name(&self) -> &'static str {
        match self {
            ModelFamily::Strauss => "strauss",
            ModelFamily::ThomasLike { .. } => "thomas",
            ModelFamily::PoissonLineCluster { .. } => "line",
            ModelFamily::MaternLikeElliptical { .. } => "matern",
        }
    }
}

/// One point-process model under the shared parametrization.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelConfig {
    pub family: ModelFamily,
    /// Range parameter R (interaction radius, cluster radius, displacement
    /// scale, or ellipse half-axis, depending on the family).
    pub range: f64,
    /// Strength parameter γ in [0, 1]; 0 is the most pronounced structure.
    pub strength: f64,
    /// Degree of anisotropy a in (0, 1]; 1 is isotropic.
    pub anisotropy: f64,
    /// Target number of points in the observation window.
    pub n_target: usize,
}

impl ModelConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.strength) {
            return Err(Error::Config(format!(
                "strength gamma must lie in [0, 1], got {}",
                self.strength
            )));
        }
        if self.anisotropy <= 0.0 || self.anisotropy > 1.0 || self.anisotropy.is_nan() {
            return Err(Error::Config(format!(
                "anisotropy degree a must lie in (0, 1], got {}",
                self.anisotropy
            )));
        }
        if self.n_target < 2 {
            return Err(Error::Config(format!(
                "n_target must be >= 2, got {}",
                self.n_target
            )));
        }
        match self.family {
            ModelFamily::Strauss => {
                if self.range <= 0.0 || self.range.is_nan() {
                    return Err(Error::Config("Strauss range R must be > 0".into()));
                }
            }
            ModelFamily::ThomasLike { p } => {
                if self.range <= 0.0 || self.range.is_nan() {
                    return Err(Error::Config("cluster range R must be > 0".into()));
                }
                if p <= 0.0 || p >= 1.0 || p.is_nan() {
                    return Err(Error::Config(format!(
                        "containment level p must lie in (0, 1), got {p}"
                    )));
                }
                self.cluster_counts()?;
            }
            ModelFamily::PoissonLineCluster { kappa_max, .. } => {
                if self.range < 0.0 || self.range.is_nan() {
                    return Err(Error::Config("line displacement R must be >= 0".into()));
                }
                if kappa_max < 0.0 || kappa_max.is_nan() {
                    return Err(Error::Config("kappa_max must be >= 0".into()));
                }
            }
            ModelFamily::MaternLikeElliptical { tau, kappa_max, .. } => {
                if self.range <= 0.0 || self.range.is_nan() {
                    return Err(Error::Config("cluster range R must be > 0".into()));
                }
                if tau <= 0.0 || tau > 1.0 || tau.is_nan() {
                    return Err(Error::Config(format!(
                        "aspect ratio tau must lie in (0, 1], got {tau}"
                    )));
                }
                if kappa_max < 0.0 || kappa_max.is_nan() {
                    return Err(Error::Config("kappa_max must be >= 0".into()));
                }
                self.cluster_counts()?;
            }
        }
        Ok(())
    }

    /// Cluster count n₀ = round(γ·n) and per-cluster size n₁ with n₀·n₁
    /// closest to n (ties resolved downward). Requires n₀ ≥ 5.
    pub fn cluster_counts(&self) -> Result<(usize, usize)> {
        let n0 = (self.strength * self.n_target as f64).round() as usize;
        if n0 < 5 {
            return Err(Error::Config(format!(
                "cluster models need n0 = round(gamma * n) >= 5, got n0 = {n0}"
            )));
        }
        Ok((n0, best_cluster_size(n0, self.n_target)))
    }

    /// Simulate one realization in `window`.
    pub fn simulate(&self, window: &Window, rng: &mut RngStream) -> Result<PointPattern> {
        self.validate()?;
        match self.family {
            ModelFamily::Strauss => simulate_strauss(self, window, rng),
            ModelFamily::ThomasLike { .. } => simulate_thomas_like(self, window, rng),
            ModelFamily::PoissonLineCluster { .. } => simulate_line_cluster(self, window, rng),
            ModelFamily::MaternLikeElliptical { .. } => {
                simulate_matern_elliptical(self, window, rng)
            }
        }
    }

    /// Default estimator range: R + 25 for line clusters, 1.3·R otherwise.
    pub fn default_r_max(&self) -> f64 {
        match self.family {
            ModelFamily::PoissonLineCluster { .. } => self.range + 25.0,
            _ => 1.3 * self.range,
        }
    }

    /// Default contrast directions (α₁, α₂): the compression axes for the
    /// geometric-anisotropy families, (μ, μ + π/2) for the von Mises ones.
    pub fn default_directions(&self) -> (f64, f64) {
        match self.family {
            ModelFamily::Strauss | ModelFamily::ThomasLike { .. } => {
                (0.0, std::f64::consts::FRAC_PI_2)
            }
            ModelFamily::PoissonLineCluster { mu, .. }
            | ModelFamily::MaternLikeElliptical { mu, .. } => {
                (mu, mu + std::f64::consts::FRAC_PI_2)
            }
        }
    }
}

// n₁ ≥ 1 minimizing |n₀·n₁ − n|, preferring the smaller candidate on ties.
fn best_cluster_size(n0: usize, n_target: usize) -> usize {
    let lower = (n_target / n0).max(1);
    let upper = lower + 1;
    let d_lower = (n0 * lower).abs_diff(n_target);
    let d_upper = (n0 * upper).abs_diff(n_target);
    if d_lower <= d_upper {
        lower
    } else {
        upper
    }
}

/// Apply the area-preserving compression C = diag(1/a, a) to a point list.
pub fn apply_compression(points: &[Vec2], a: f64) -> Result<Vec<Vec2>> {
    check_anisotropy(a)?;
    Ok(points
        .iter()
        .map(|p| Vec2::new(p.x / a, p.y * a))
        .collect())
}

/// Apply C to a whole pattern, transforming the window alongside the points.
pub fn compress_pattern(pattern: &PointPattern, a: f64) -> Result<PointPattern> {
    check_anisotropy(a)?;
    let window = compressed_window(pattern.window(), a)?;
    let points = apply_compression(pattern.points(), a)?;
    PointPattern::with_marks(points, window, pattern.marks().map(|m| m.to_vec()))
}

/// Image C·W of a window under the compression.
pub fn compressed_window(window: &Window, a: f64) -> Result<Window> {
    check_anisotropy(a)?;
    Window::new(
        window.x_min / a,
        window.x_max / a,
        window.y_min * a,
        window.y_max * a,
    )
}

/// Preimage C⁻¹·W of a window: where the isotropic process is simulated.
pub fn inverse_compressed_window(window: &Window, a: f64) -> Result<Window> {
    check_anisotropy(a)?;
    Window::new(
        window.x_min * a,
        window.x_max * a,
        window.y_min / a,
        window.y_max / a,
    )
}

fn check_anisotropy(a: f64) -> Result<()> {
    if a <= 0.0 || a > 1.0 || a.is_nan() {
        return Err(Error::Domain(format!(
            "anisotropy degree a must lie in (0, 1], got {a}"
        )));
    }
    Ok(())
}

// Apply C to a simulated pre-image point, snapping rounding spill (at most a
// few ulp) back onto the closed target window.
pub(crate) fn compress_into(p: Vec2, a: f64, window: &Window) -> Vec2 {
    let q = Vec2::new(p.x / a, p.y * a);
    Vec2::new(
        q.x.clamp(window.x_min, window.x_max),
        q.y.clamp(window.y_min, window.y_max),
    )
}

// Uniform point in a rectangle.
pub(crate) fn uniform_in(window: &Window, rng: &mut RngStream) -> Vec2 {
    Vec2::new(
        rng.uniform(window.x_min, window.x_max),
        rng.uniform(window.y_min, window.y_max),
    )
}

// Uniform point on the Minkowski dilation window ⊕ b_margin(0), by rejection
// from the grown bounding box (corners are rounded, hence the distance test).
pub(crate) fn uniform_in_dilation(window: &Window, margin: f64, rng: &mut RngStream) -> Vec2 {
    if margin == 0.0 {
        return uniform_in(window, rng);
    }
    let bbox = window.grown(margin);
    loop {
        let p = uniform_in(&bbox, rng);
        if window.distance_to(p) <= margin {
            return p;
        }
    }
}
