//! Fixed-n Strauss process via Metropolis relocation moves.

use crate::error::{Error, Result};
use crate::geom::Vec2;
use crate::geom::Window;
use crate::pattern::PointPattern;
use crate::sampling::RngStream;

use super::{compress_into, inverse_compressed_window, uniform_in, ModelConfig};

// moves per point for burn-in and for the sampling run
const MOVES_PER_POINT: usize = 1000;

/// Simulate a Strauss process with exactly `n_target` points.
///
/// An isotropic fixed-n chain for the density ∝ γ^{s_R(x)} (s_R counts pairs
/// closer than R) runs in the pre-image window C⁻¹W; the final state is
/// mapped through the compression C. γ = 0 is the hard-core case,
/// initialized by random sequential adsorption so the chain starts feasible.
pub fn simulate_strauss(
    cfg: &ModelConfig,
    window: &Window,
    rng: &mut RngStream,
) -> Result<PointPattern> {
    let n = cfg.n_target;
    let gamma = cfg.strength;
    let r = cfg.range;
    let pre_window = inverse_compressed_window(window, cfg.anisotropy)?;

    let mut points = if gamma == 0.0 {
        sequential_adsorption(n, r, &pre_window, rng)?
    } else {
        (0..n).map(|_| uniform_in(&pre_window, rng)).collect()
    };

    let r2 = r * r;
    let total_moves = 2 * MOVES_PER_POINT * n;
    for _ in 0..total_moves {
        let idx = rng.index(n);
        let proposal = uniform_in(&pre_window, rng);
        let s_old = close_pairs_with(&points, idx, points[idx], r2);
        let s_new = close_pairs_with(&points, idx, proposal, r2);
        let accept = if gamma >= 1.0 {
            true
        } else if gamma == 0.0 {
            s_new == 0
        } else if s_new <= s_old {
            true
        } else {
            rng.uniform(0.0, 1.0) < gamma.powi((s_new - s_old) as i32)
        };
        if accept {
            points[idx] = proposal;
        }
    }

    let mapped = points
        .into_iter()
        .map(|p| compress_into(p, cfg.anisotropy, window))
        .collect();
    PointPattern::new(mapped, *window)
}

// number of points (other than index `skip`) strictly closer than r to `p`
fn close_pairs_with(points: &[Vec2], skip: usize, p: Vec2, r2: f64) -> usize {
    points
        .iter()
        .enumerate()
        .filter(|(j, q)| {
            if *j == skip {
                return false;
            }
            let d = p - **q;
            d.x * d.x + d.y * d.y < r2
        })
        .count()
}

// Random sequential adsorption: place points one by one, rejecting proposals
// that violate the hard-core distance. Errors out when the packing stalls.
fn sequential_adsorption(
    n: usize,
    r: f64,
    window: &Window,
    rng: &mut RngStream,
) -> Result<Vec<Vec2>> {
    let r2 = r * r;
    let mut points: Vec<Vec2> = Vec::with_capacity(n);
    let budget = 5000usize.saturating_mul(n).max(100_000);
    let mut attempts = 0usize;
    while points.len() < n {
        attempts += 1;
        if attempts > budget {
            return Err(Error::Simulation(format!(
                "could not place {n} hard-core points at distance {r} in a window of area {:.1} \
                 after {budget} attempts",
                window.area()
            )));
        }
        let p = uniform_in(window, rng);
        let feasible = points.iter().all(|q| {
            let d = p - *q;
            d.x * d.x + d.y * d.y >= r2
        });
        if feasible {
            points.push(p);
        }
    }
    Ok(points)
}
