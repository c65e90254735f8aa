//! Nonparametric isotropy tests for stationary planar point processes,
//! based on random rotations of Fry points.
//!
//! Under isotropy, the direction of a pairwise difference vector at any
//! fixed length is uniform on the circle, so rotating the Fry points of an
//! observed pattern by random angles produces surrogate patterns that share
//! the observed second-order radial structure while being rotation
//! invariant. Comparing a directional summary statistic of the observed
//! Fry points against the resampled ones yields a Monte Carlo test that
//! needs no parametric null model.
//!
//! The crate provides the full pipeline:
//!
//! * [`geom`] — windows, directed sets (sector, double cone, cylinder) and
//!   the translational edge-correction weight;
//! * [`sampling`] — reproducible RNG streams, von Mises sampling and the
//!   concentration and scale mappings of the study parametrization;
//! * [`models`] — simulators for the four stationary model families of the
//!   power study;
//! * [`fry`] — Fry point extraction and the individual, pairwise and
//!   group-wise rotation schemes;
//! * [`estimator`] — edge-corrected sector K-functions, contrasts and the
//!   maximal-deviation ratio statistic;
//! * [`mctest`] — extremeness orderings (integral, extreme rank length),
//!   Monte Carlo p-values and the end-to-end [`mctest::isotropy_test`];
//! * [`io`] — CSV interchange for patterns, Fry points, curves and results.
//!
//! ```
//! use frytest::geom::Window;
//! use frytest::models::{ModelConfig, ModelFamily};
//! use frytest::mctest::{isotropy_test, CurveOrdering, StatisticKind, TestConfig};
//! use frytest::fry::RotationScheme;
//! use frytest::sampling::RngStream;
//!
//! let window = Window::centered_square(100.0 * 2f64.sqrt())?;
//! let model = ModelConfig {
//!     family: ModelFamily::Strauss,
//!     range: 5.0,
//!     strength: 0.0,
//!     anisotropy: 0.7,
//!     n_target: 60,
//! };
//! let pattern = model.simulate(&window, &mut RngStream::new(1, 0))?;
//! let cfg = TestConfig {
//!     statistic: StatisticKind::SectorContrast {
//!         alpha1: 0.0,
//!         alpha2: std::f64::consts::FRAC_PI_2,
//!         eps: std::f64::consts::FRAC_PI_4,
//!     },
//!     ordering: CurveOrdering::Integral,
//!     scheme: RotationScheme::GroupWise,
//!     bootstrap_count: 39,
//!     r_max: model.default_r_max(),
//!     grid_size: 50,
//!     seed: 42,
//! };
//! let result = isotropy_test(&pattern, &cfg)?;
//! assert!(result.p_value > 0.0 && result.p_value <= 1.0);
//! # Ok::<(), frytest::Error>(())
//! ```

pub mod error;
pub mod estimator;
pub mod fry;
pub mod geom;
pub mod io;
pub mod mctest;
pub mod models;
pub mod pattern;
pub mod sampling;

pub use error::{Error, Result};
pub use geom::{DirectedSet, Vec2, Window};
pub use pattern::PointPattern;

// Every fenced Rust block in the book runs as a doctest of this crate, so
// the guide cannot drift from the library.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/geometry.md")]
    pub mod geometry {}
    #[doc = include_str!("../../../book/src/sampling.md")]
    pub mod sampling {}
    #[doc = include_str!("../../../book/src/models.md")]
    pub mod models {}
    #[doc = include_str!("../../../book/src/fry.md")]
    pub mod fry {}
    #[doc = include_str!("../../../book/src/estimation.md")]
    pub mod estimation {}
    #[doc = include_str!("../../../book/src/montecarlo.md")]
    pub mod montecarlo {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
