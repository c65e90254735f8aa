//! Poisson line cluster process with von Mises distributed line directions.

use crate::error::{Error, Result};
use crate::geom::{Vec2, Window};
use crate::pattern::PointPattern;
use crate::sampling::{kappa_from_a, sample_von_mises, RngStream};

use super::{ModelConfig, ModelFamily};

// candidate positions extend to window ⊕ b_{3R}(0): virtually all Gaussian
// displacements from outside segments can still land in the window
const EXTENSION_SIGMAS: f64 = 3.0;

/// Simulate a Poisson line cluster process in a square window.
///
/// Lines (p, θ) with p uniform on [−r_d, r_d] (r_d the bounding-disk radius)
/// and θ von Mises around μ accumulate until their total clipped length
/// inside the window reaches L·5^{1+γ}. Points are then placed uniformly on
/// the slightly extended line system and displaced orthogonally by a
/// centered Gaussian with standard deviation R, until exactly `n_target`
/// displaced points fall inside the window.
pub fn simulate_line_cluster(
    cfg: &ModelConfig,
    window: &Window,
    rng: &mut RngStream,
) -> Result<PointPattern> {
    let (mu, kappa_max) = match cfg.family {
        ModelFamily::PoissonLineCluster { mu, kappa_max } => (mu, kappa_max),
        _ => unreachable!("dispatched on family"),
    };
    let side = window.width();
    if (window.height() - side).abs() > 1e-9 * side {
        return Err(Error::Config(format!(
            "line cluster process needs a square window, got {} x {}",
            side,
            window.height()
        )));
    }
    let kappa = kappa_from_a(cfg.anisotropy, kappa_max)?;
    let center = window.center();
    let disk_radius = side / std::f64::consts::SQRT_2;
    let threshold = side * 5f64.powf(1.0 + cfg.strength);

    let lines = generate_line_system(
        window, center, disk_radius, threshold, mu, kappa, rng,
    );

    // candidate segments on the extended window
    let margin = EXTENSION_SIGMAS * cfg.range;
    let extended = window.grown(margin);
    let mut segments: Vec<Segment> = Vec::new();
    let mut total_length = 0.0;
    for line in &lines {
        if let Some((t0, t1)) = clip_to_rect(line.base, line.dir, &extended) {
            total_length += t1 - t0;
            segments.push(Segment {
                base: line.base,
                dir: line.dir,
                normal: line.normal,
                t0,
                t1,
                cum_length: total_length,
            });
        }
    }
    if segments.is_empty() {
        return Err(Error::Simulation(
            "line system does not intersect the extended window".into(),
        ));
    }

    let mut points = Vec::with_capacity(cfg.n_target);
    let budget = 10_000usize.saturating_mul(cfg.n_target).max(1_000_000);
    let mut attempts = 0usize;
    while points.len() < cfg.n_target {
        attempts += 1;
        if attempts > budget {
            return Err(Error::Simulation(format!(
                "placed only {} of {} points after {budget} proposals",
                points.len(),
                cfg.n_target
            )));
        }
        let u = rng.uniform(0.0, total_length);
        let seg = &segments[segments.partition_point(|s| s.cum_length <= u)];
        let offset = u - (seg.cum_length - (seg.t1 - seg.t0));
        let on_line = seg.base + seg.dir * (seg.t0 + offset);
        // keep the support at true distance ≤ 3R (the clip rectangle is a
        // hair larger at the corners)
        if cfg.range > 0.0 && window.distance_to(on_line) > margin {
            continue;
        }
        let placed = if cfg.range > 0.0 {
            on_line + seg.normal * (cfg.range * rng.standard_normal())
        } else {
            on_line
        };
        if window.contains(placed) {
            points.push(placed);
        }
    }
    PointPattern::new(points, *window)
}

struct Line {
    base: Vec2,
    dir: Vec2,
    normal: Vec2,
}

struct Segment {
    base: Vec2,
    dir: Vec2,
    normal: Vec2,
    t0: f64,
    t1: f64,
    cum_length: f64,
}

// draw lines until the clipped in-window length reaches the threshold
fn generate_line_system(
    window: &Window,
    center: Vec2,
    disk_radius: f64,
    threshold: f64,
    mu: f64,
    kappa: f64,
    rng: &mut RngStream,
) -> Vec<Line> {
    let mut lines = Vec::new();
    let mut in_window_length = 0.0;
    while in_window_length < threshold {
        let theta = sample_von_mises(mu, kappa, rng);
        let signed_distance = rng.uniform(-disk_radius, disk_radius);
        let dir = Vec2::unit(theta);
        let normal = Vec2::unit(theta + std::f64::consts::FRAC_PI_2);
        let base = center + normal * signed_distance;
        if let Some((t0, t1)) = clip_to_rect(base, dir, window) {
            in_window_length += t1 - t0;
        }
        lines.push(Line { base, dir, normal });
    }
    lines
}

// parameter interval of {base + t·dir} inside the rectangle, if any
fn clip_to_rect(base: Vec2, dir: Vec2, w: &Window) -> Option<(f64, f64)> {
    let mut t0 = f64::NEG_INFINITY;
    let mut t1 = f64::INFINITY;
    for (b, d, lo, hi) in [
        (base.x, dir.x, w.x_min, w.x_max),
        (base.y, dir.y, w.y_min, w.y_max),
    ] {
        if d == 0.0 {
            if b < lo || b > hi {
                return None;
            }
        } else {
            let (a1, a2) = ((lo - b) / d, (hi - b) / d);
            let (lo_t, hi_t) = if a1 <= a2 { (a1, a2) } else { (a2, a1) };
            t0 = t0.max(lo_t);
            t1 = t1.min(hi_t);
        }
    }
    (t0 < t1).then_some((t0, t1))
}

// in-window clipped length of the full line system (test instrumentation)
#[cfg(test)]
fn system_length_in(lines: &[Line], window: &Window) -> f64 {
    lines
        .iter()
        .filter_map(|l| clip_to_rect(l.base, l.dir, window).map(|(t0, t1)| t1 - t0))
        .sum()
}
