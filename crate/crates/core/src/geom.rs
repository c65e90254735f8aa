//! Planar geometry primitives: rectangular windows, directed sets and the
//! translational edge-correction weight.
//!
//! All sets use closed boundaries. Angular comparisons are carried out
//! modulo 2π, so a sector may straddle the 0/2π seam without special cases.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

/// A point or difference vector in the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    #[inline]
    pub fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// Angle from the positive x-axis, counterclockwise, in [0, 2π).
    /// Undefined for the zero vector (returns 0 by convention).
    #[inline]
    pub fn angle(self) -> f64 {
        let a = self.y.atan2(self.x);
        if a < 0.0 {
            a + TAU
        } else {
            a
        }
    }

    /// Counterclockwise rotation around the origin by `phi` radians.
    #[inline]
    pub fn rotate(self, phi: f64) -> Vec2 {
        let (s, c) = phi.sin_cos();
        Vec2 {
            x: self.x * c - self.y * s,
            y: self.x * s + self.y * c,
        }
    }

    /// Unit vector u(α) = (cos α, sin α).
    #[inline]
    pub fn unit(alpha: f64) -> Vec2 {
        let (s, c) = alpha.sin_cos();
        Vec2 { x: c, y: s }
    }
}

impl std::ops::Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl std::ops::Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl std::ops::Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl std::ops::Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, rhs: f64) -> Vec2 {
        Vec2::new(self.x * rhs, self.y * rhs)
    }
}

/// Smallest angular distance between two directions, in [0, π].
#[inline]
pub fn angular_distance(theta: f64, alpha: f64) -> f64 {
    let d = (theta - alpha).rem_euclid(TAU);
    if d > PI {
        TAU - d
    } else {
        d
    }
}

/// Axis-aligned rectangular observation window with positive finite area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Window {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        let all_finite =
            x_min.is_finite() && x_max.is_finite() && y_min.is_finite() && y_max.is_finite();
        if !all_finite || x_min >= x_max || y_min >= y_max {
            return Err(Error::Geometry(format!(
                "window [{x_min}, {x_max}] x [{y_min}, {y_max}] must have x_min < x_max and y_min < y_max, all finite"
            )));
        }
        Ok(Window {
            x_min,
            x_max,
            y_min,
            y_max,
        })
    }

    /// Square window [-L/2, L/2]² centered at the origin.
    pub fn centered_square(side: f64) -> Result<Self> {
        Window::new(-side / 2.0, side / 2.0, -side / 2.0, side / 2.0)
    }

    #[inline]
    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    #[inline]
    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    #[inline]
    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    #[inline]
    pub fn center(&self) -> Vec2 {
        Vec2::new(
            (self.x_min + self.x_max) / 2.0,
            (self.y_min + self.y_max) / 2.0,
        )
    }

    /// Closed membership test.
    #[inline]
    pub fn contains(&self, p: Vec2) -> bool {
        p.x >= self.x_min && p.x <= self.x_max && p.y >= self.y_min && p.y <= self.y_max
    }

    /// Euclidean distance from `p` to the window (0 inside).
    #[inline]
    pub fn distance_to(&self, p: Vec2) -> f64 {
        let dx = (self.x_min - p.x).max(0.0).max(p.x - self.x_max);
        let dy = (self.y_min - p.y).max(0.0).max(p.y - self.y_max);
        dx.hypot(dy)
    }

    /// The window grown by `margin` on every side.
    pub fn grown(&self, margin: f64) -> Window {
        Window {
            x_min: self.x_min - margin,
            x_max: self.x_max + margin,
            y_min: self.y_min - margin,
            y_max: self.y_max + margin,
        }
    }

    /// Area of the Minkowski dilation W ⊕ b_r(0).
    #[inline]
    pub fn dilated_area(&self, r: f64) -> f64 {
        self.area() + 2.0 * r * (self.width() + self.height()) + PI * r * r
    }
}

/// Area of the overlap |W ∩ W_z| between the window and its translate by `z`.
///
/// This is the translational edge-correction denominator; it is symmetric in
/// z ↔ -z and vanishes once |z.x| or |z.y| exceeds the window dimensions.
#[inline]
pub fn translation_overlap(window: &Window, z: Vec2) -> f64 {
    (window.width() - z.x.abs()).max(0.0) * (window.height() - z.y.abs()).max(0.0)
}

/// A directed test set used with the reduced second-order moment measure.
///
/// `Sector` and `DoubleConeSector` are bounded by the angles α ± ε; the
/// cylinder has main axis u(α), half-length `r` and radius `w`.
#[derive(Debug, Clone, PartialEq)]
pub enum DirectedSet {
    Sector { alpha: f64, eps: f64, r: f64 },
    DoubleConeSector { alpha: f64, eps: f64, r: f64 },
    Cylinder { alpha: f64, w: f64, r: f64 },
    Ball { r: f64 },
}

impl DirectedSet {
    /// Disk sector S(α, ε, r) with 0 ≤ 2ε ≤ π.
    pub fn sector(alpha: f64, eps: f64, r: f64) -> Result<Self> {
        if !(0.0..=PI / 2.0).contains(&eps) || r < 0.0 {
            return Err(Error::Geometry(format!(
                "sector needs 0 <= eps <= pi/2 and r >= 0, got eps={eps}, r={r}"
            )));
        }
        Ok(DirectedSet::Sector { alpha, eps, r })
    }

    /// Restricted double cone DS(α, ε, r) with 0 < ε ≤ π/2.
    pub fn double_cone_sector(alpha: f64, eps: f64, r: f64) -> Result<Self> {
        if !(eps > 0.0 && eps <= PI / 2.0) || r < 0.0 {
            return Err(Error::Geometry(format!(
                "double cone sector needs 0 < eps <= pi/2 and r >= 0, got eps={eps}, r={r}"
            )));
        }
        Ok(DirectedSet::DoubleConeSector { alpha, eps, r })
    }

    /// 2D cylinder Cyl(α, w, r) with w, r ≥ 0.
    pub fn cylinder(alpha: f64, w: f64, r: f64) -> Result<Self> {
        if w < 0.0 || r < 0.0 {
            return Err(Error::Geometry(format!(
                "cylinder needs w >= 0 and r >= 0, got w={w}, r={r}"
            )));
        }
        Ok(DirectedSet::Cylinder { alpha, w, r })
    }

    /// Closed disk b_r(0).
    pub fn ball(r: f64) -> Result<Self> {
        if r < 0.0 {
            return Err(Error::Geometry(format!("ball needs r >= 0, got r={r}")));
        }
        Ok(DirectedSet::Ball { r })
    }

    /// Closed membership test. The origin belongs to every variant.
    pub fn contains(&self, z: Vec2) -> bool {
        if z.x == 0.0 && z.y == 0.0 {
            return true;
        }
        match *self {
            DirectedSet::Sector { alpha, eps, r } => {
                z.norm() <= r && angular_distance(z.angle(), alpha) <= eps
            }
            DirectedSet::DoubleConeSector { alpha, eps, r } => {
                if z.norm() > r {
                    return false;
                }
                let d = angular_distance(z.angle(), alpha);
                // distance to the opposite axis α+π is π - d
                d.min(PI - d) <= eps
            }
            DirectedSet::Cylinder { alpha, w, r } => {
                let axial = z.dot(Vec2::unit(alpha)).abs();
                let lateral = z.dot(Vec2::unit(alpha + PI / 2.0)).abs();
                axial <= r && lateral <= w
            }
            DirectedSet::Ball { r } => z.norm() <= r,
        }
    }
}
