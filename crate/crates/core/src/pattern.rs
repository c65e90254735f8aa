//! Observed point patterns: a finite point set together with its window.

use crate::error::{Error, Result};
use crate::geom::{Vec2, Window};

/// A finite planar point pattern in a rectangular observation window,
/// optionally carrying one categorical mark per point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointPattern {
    points: Vec<Vec2>,
    window: Window,
    marks: Option<Vec<String>>,
}

impl PointPattern {
    /// Build a pattern, checking that every point lies in the (closed) window.
    pub fn new(points: Vec<Vec2>, window: Window) -> Result<Self> {
        Self::with_marks(points, window, None)
    }

    pub fn with_marks(
        points: Vec<Vec2>,
        window: Window,
        marks: Option<Vec<String>>,
    ) -> Result<Self> {
        if let Some(m) = &marks {
            if m.len() != points.len() {
                return Err(Error::Config(format!(
                    "{} marks for {} points",
                    m.len(),
                    points.len()
                )));
            }
        }
        let outside: Vec<usize> = points
            .iter()
            .enumerate()
            .filter(|(_, p)| !window.contains(**p))
            .map(|(i, _)| i)
            .collect();
        if !outside.is_empty() {
            return Err(Error::Geometry(format!(
                "{} point(s) outside the window (indices {:?}...)",
                outside.len(),
                &outside[..outside.len().min(8)]
            )));
        }
        Ok(PointPattern {
            points,
            window,
            marks,
        })
    }

    #[inline]
    pub fn points(&self) -> &[Vec2] {
        &self.points
    }

    #[inline]
    pub fn window(&self) -> &Window {
        &self.window
    }

    #[inline]
    pub fn marks(&self) -> Option<&[String]> {
        self.marks.as_deref()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Empirical intensity n / |W|.
    pub fn intensity(&self) -> f64 {
        self.len() as f64 / self.window.area()
    }

    /// Keep only points whose mark equals `mark` (ASCII case-insensitive).
    pub fn subset_by_mark(&self, mark: &str) -> Result<PointPattern> {
        let marks = self
            .marks
            .as_ref()
            .ok_or_else(|| Error::Config("pattern has no marks".into()))?;
        let mut points = Vec::new();
        let mut kept = Vec::new();
        for (p, m) in self.points.iter().zip(marks) {
            if m.eq_ignore_ascii_case(mark) {
                points.push(*p);
                kept.push(m.clone());
            }
        }
        PointPattern::with_marks(points, self.window, Some(kept))
    }

    /// Drop marks, keeping all points.
    pub fn unmarked(&self) -> PointPattern {
        PointPattern {
            points: self.points.clone(),
            window: self.window,
            marks: None,
        }
    }
}
