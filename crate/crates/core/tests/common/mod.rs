//! Helpers shared by the integration suites.
#![allow(dead_code)] // each test binary uses its own subset

use frytest::geom::{Vec2, Window};
use frytest::pattern::PointPattern;
use frytest::sampling::RngStream;

pub fn poisson_pattern(n: usize, window: &Window, rng: &mut RngStream) -> PointPattern {
    let pts: Vec<Vec2> = (0..n)
        .map(|_| {
            Vec2::new(
                rng.uniform(window.x_min, window.x_max),
                rng.uniform(window.y_min, window.y_max),
            )
        })
        .collect();
    PointPattern::new(pts, *window).unwrap()
}

/// Independent ERL implementation used as an oracle: O(m²) pairwise counting
/// for pointwise ranks, then pairwise lexicographic position counting.
pub fn brute_force_erl(values: &[Vec<i32>], one_sided: bool) -> Vec<f64> {
    let m = values.len();
    let k = values[0].len();
    let mut rank_vectors: Vec<Vec<u32>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut ranks = Vec::with_capacity(k);
        for j in 0..k {
            let mut larger = 0;
            let mut smaller = 0;
            for row in values {
                if row[j] > values[i][j] {
                    larger += 1;
                }
                if row[j] < values[i][j] {
                    smaller += 1;
                }
            }
            let desc = larger + 1;
            let asc = smaller + 1;
            ranks.push(if one_sided { desc } else { desc.min(asc) });
        }
        ranks.sort_unstable();
        rank_vectors.push(ranks);
    }
    (0..m)
        .map(|i| {
            let strictly_before = (0..m)
                .filter(|j| rank_vectors[*j] < rank_vectors[i])
                .count();
            (strictly_before + 1) as f64
        })
        .collect()
}
