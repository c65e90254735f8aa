//! Fry points and the random-rotation resampling schemes.
//!
//! The Fry pattern of an observed point set holds every ordered pairwise
//! difference x_j − x_i. Under isotropy the angle of a difference vector at
//! any fixed norm is uniform, so rotating Fry points by independent uniform
//! angles produces surrogate patterns with the same second-order radial
//! structure but rotation-invariant directions. Three schemes are offered:
//! one angle per vector, one per symmetric pair, or one per group G_i (all
//! vectors sharing the origin point x_i).

use crate::error::{Error, Result};
use crate::geom::{Vec2, Window};
use crate::pattern::PointPattern;
use crate::sampling::RngStream;

/// How rotation angles are assigned to Fry points during resampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RotationScheme {
    /// An independent angle for every Fry point.
    Individual,
    /// One angle per pair {z, −z}; keeps the pattern point-symmetric.
    Pairwise,
    /// One angle per group G_i of vectors with common origin x_i.
    GroupWise,
}

impl RotationScheme {
    pub fn name(&self) -> &'static str {
        match self {
            RotationScheme::Individual => "individual",
            RotationScheme::Pairwise => "pairwise",
            RotationScheme::GroupWise => "group",
        }
    }
}

/// The multiset of pairwise difference vectors of a point pattern.
///
/// `group_of[k]` is the index of the origin point of `vectors[k]`; pair
/// links tie each vector to its negation and are dropped once a resampling
/// scheme breaks the point symmetry.
#[derive(Debug, Clone)]
pub struct FryPattern {
    vectors: Vec<Vec2>,
    group_of: Vec<u32>,
    pair_links: Option<Vec<Option<u32>>>,
    source_n: usize,
    window: Window,
}

impl FryPattern {
    #[inline]
    pub fn vectors(&self) -> &[Vec2] {
        &self.vectors
    }

    #[inline]
    pub fn group_of(&self) -> &[u32] {
        &self.group_of
    }

    /// Pair links, present only while the pattern is point-symmetric.
    #[inline]
    pub fn pair_links(&self) -> Option<&[Option<u32>]> {
        self.pair_links.as_deref()
    }

    #[inline]
    pub fn source_n(&self) -> usize {
        self.source_n
    }

    #[inline]
    pub fn window(&self) -> &Window {
        &self.window
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// Extract the Fry points of a pattern: all n(n−1) ordered differences
/// x_j − x_i, each labelled with its origin index i.
///
/// With `r_max` given, vectors of larger norm are dropped on the fly; a pair
/// always survives or falls together since z and −z share their norm.
pub fn fry_points(pattern: &PointPattern, r_max: Option<f64>) -> Result<FryPattern> {
    let pts = pattern.points();
    let n = pts.len();
    if n < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: n });
    }
    let mut vectors = Vec::new();
    let mut group_of = Vec::new();
    let mut pair_links = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let z = pts[j] - pts[i];
            if let Some(rm) = r_max {
                if z.norm() > rm {
                    continue;
                }
            }
            let k = vectors.len() as u32;
            // store the negation bitwise so the pattern is exactly symmetric
            vectors.push(z);
            group_of.push(i as u32);
            pair_links.push(Some(k + 1));
            vectors.push(-z);
            group_of.push(j as u32);
            pair_links.push(Some(k));
        }
    }
    Ok(FryPattern {
        vectors,
        group_of,
        pair_links: Some(pair_links),
        source_n: n,
        window: *pattern.window(),
    })
}

impl FryPattern {
    // Rebuild with transformed vectors; the caller vouches for the links.
    #[cfg(test)]
    pub(crate) fn from_raw_parts(
        vectors: Vec<Vec2>,
        group_of: Vec<u32>,
        pair_links: Option<Vec<Option<u32>>>,
        source_n: usize,
        window: Window,
    ) -> FryPattern {
        debug_assert_eq!(vectors.len(), group_of.len());
        FryPattern {
            vectors,
            group_of,
            pair_links,
            source_n,
            window,
        }
    }

    /// Rotate every vector by its own angle; `angles[k]` applies to vector k.
    /// The output is no longer point-symmetric, so pair links are dropped.
    pub fn rotate_individual(&self, angles: &[f64]) -> Result<FryPattern> {
        if angles.len() != self.vectors.len() {
            return Err(Error::Config(format!(
                "{} angles for {} vectors",
                angles.len(),
                self.vectors.len()
            )));
        }
        let vectors = self
            .vectors
            .iter()
            .zip(angles)
            .map(|(z, phi)| z.rotate(*phi))
            .collect();
        Ok(FryPattern {
            vectors,
            group_of: self.group_of.clone(),
            pair_links: None,
            source_n: self.source_n,
            window: self.window,
        })
    }

    /// Rotate each pair {z, −z} by a common angle, preserving point symmetry.
    /// `angles` are consumed in ascending order of the pair's first member.
    pub fn rotate_pairwise(&self, angles: &[f64]) -> Result<FryPattern> {
        let links = self.pair_links.as_ref().ok_or(Error::BrokenPairLinks)?;
        let mut vectors = vec![Vec2::ZERO; self.vectors.len()];
        let mut next = 0usize;
        for (k, link) in links.iter().enumerate() {
            let partner = link.ok_or(Error::BrokenPairLinks)? as usize;
            if partner < k {
                continue; // handled when we visited the partner
            }
            let phi = *angles.get(next).ok_or_else(|| {
                Error::Config("not enough angles for pairwise rotation".into())
            })?;
            next += 1;
            let rotated = self.vectors[k].rotate(phi);
            vectors[k] = rotated;
            vectors[partner] = -rotated;
        }
        if next != angles.len() {
            return Err(Error::Config(format!(
                "{} angles supplied but {} pairs present",
                angles.len(),
                next
            )));
        }
        Ok(FryPattern {
            vectors,
            group_of: self.group_of.clone(),
            pair_links: self.pair_links.clone(),
            source_n: self.source_n,
            window: self.window,
        })
    }

    /// Rotate each group G_i by `angles[i]`. Requires one angle per source
    /// point. Pair links are dropped: groups rotate independently.
    pub fn rotate_group_wise(&self, angles: &[f64]) -> Result<FryPattern> {
        if angles.len() != self.source_n {
            return Err(Error::Config(format!(
                "{} angles for {} groups",
                angles.len(),
                self.source_n
            )));
        }
        let vectors = self
            .vectors
            .iter()
            .zip(&self.group_of)
            .map(|(z, g)| z.rotate(angles[*g as usize]))
            .collect();
        Ok(FryPattern {
            vectors,
            group_of: self.group_of.clone(),
            pair_links: None,
            source_n: self.source_n,
            window: self.window,
        })
    }
}

/// Draw one bootstrap Fry pattern by random rotation under `scheme`.
///
/// Angles are drawn from `rng` in a fixed order (vector index, pair index or
/// ascending group index), so results depend only on the stream, never on
/// scheduling.
pub fn resample(fry: &FryPattern, scheme: RotationScheme, rng: &mut RngStream) -> Result<FryPattern> {
    match scheme {
        RotationScheme::Individual => {
            let angles: Vec<f64> = (0..fry.len()).map(|_| rng.uniform_angle()).collect();
            fry.rotate_individual(&angles)
        }
        RotationScheme::Pairwise => {
            let links = fry.pair_links().ok_or(Error::BrokenPairLinks)?;
            let pairs = links.len() / 2;
            let angles: Vec<f64> = (0..pairs).map(|_| rng.uniform_angle()).collect();
            fry.rotate_pairwise(&angles)
        }
        RotationScheme::GroupWise => {
            let angles: Vec<f64> = (0..fry.source_n()).map(|_| rng.uniform_angle()).collect();
            fry.rotate_group_wise(&angles)
        }
    }
}
