//! Seed-reproducible random sampling.
//!
//! All randomness flows through [`RngStream`], a counter-based generator in
//! which a `(master_seed, stream_id)` pair fully determines the sample
//! sequence. Distinct stream ids give statistically independent streams, so
//! replicates and bootstrap iterations can run concurrently and still
//! reproduce bit-for-bit at any parallelism degree.

use std::f64::consts::{PI, TAU};

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// One independent, reproducible random stream.
#[derive(Debug, Clone)]
pub struct RngStream {
    master_seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_id);
        RngStream {
            master_seed,
            stream_id,
            rng,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Derive an independent child stream.
    ///
    /// The child's master seed mixes this stream's identity with `salt`
    /// through the SplitMix64 finalizer, so nested hierarchies (study cell →
    /// replicate → bootstrap) never share a stream.
    pub fn child(&self, salt: u64) -> RngStream {
        let mixed = split_mix(split_mix(self.master_seed ^ split_mix(self.stream_id)) ^ salt);
        RngStream::new(mixed, 0)
    }

    /// Uniform angle on [0, 2π).
    #[inline]
    pub fn uniform_angle(&mut self) -> f64 {
        // random::<f64>() is uniform on [0, 1); scaling keeps it below 2π
        self.rng.random::<f64>() * TAU
    }

    /// Uniform draw from [lo, hi).
    #[inline]
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.rng.random::<f64>()
    }

    /// Uniform index in [0, n).
    #[inline]
    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    /// Standard normal draw via rand_distr's ziggurat.
    #[inline]
    pub fn standard_normal(&mut self) -> f64 {
        self.rng.sample(rand_distr::StandardNormal)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }
}

// SplitMix64 finalizer; bijective on u64 with good avalanche behaviour.
fn split_mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Concentration κ = κ_max · (1 − exp(1 − 1/a)) for the anisotropy degree a.
///
/// a = 1 gives κ = 0 (the uniform case); a → 0⁺ approaches κ_max.
pub fn kappa_from_a(a: f64, kappa_max: f64) -> Result<f64> {
    if a <= 0.0 || a > 1.0 || a.is_nan() {
        return Err(Error::Domain(format!(
            "anisotropy degree must satisfy 0 < a <= 1, got {a}"
        )));
    }
    if kappa_max < 0.0 || kappa_max.is_nan() {
        return Err(Error::Domain(format!(
            "kappa_max must be >= 0, got {kappa_max}"
        )));
    }
    Ok(kappa_max * (1.0 - (1.0 - 1.0 / a).exp()))
}

/// p-quantile of the χ² distribution with 2 degrees of freedom.
pub fn chi2_quantile_df2(p: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&p) {
        return Err(Error::Domain(format!(
            "quantile level must satisfy 0 <= p < 1, got {p}"
        )));
    }
    Ok(-2.0 * (1.0 - p).ln())
}

/// Gaussian cluster scale σ such that a centered isotropic 2D normal with
/// standard deviation σ puts probability `p` inside the disk of radius `R`.
pub fn sigma_from_r(range: f64, p: f64) -> Result<f64> {
    if range <= 0.0 || range.is_nan() {
        return Err(Error::Domain(format!("range must be > 0, got {range}")));
    }
    if p <= 0.0 || p >= 1.0 || p.is_nan() {
        return Err(Error::Domain(format!(
            "containment probability must satisfy 0 < p < 1, got {p}"
        )));
    }
    // |N(0, σ²I₂)|² / σ² is χ²₂, so the containment level p pins σ to
    // R / sqrt(χ²₂-quantile at p).
    Ok(range / chi2_quantile_df2(p)?.sqrt())
}

/// Draw from the von Mises density ∝ exp(κ cos(θ − μ)) on [0, 2π).
///
/// Uses the Best–Fisher wrapped-Cauchy rejection envelope; κ = 0 falls back
/// to a single uniform draw.
pub fn sample_von_mises(mu: f64, kappa: f64, rng: &mut RngStream) -> f64 {
    assert!(kappa >= 0.0, "concentration must be nonnegative");
    if kappa == 0.0 {
        return rng.uniform_angle();
    }
    let tau = 1.0 + (1.0 + 4.0 * kappa * kappa).sqrt();
    let rho = (tau - (2.0 * tau).sqrt()) / (2.0 * kappa);
    let r = (1.0 + rho * rho) / (2.0 * rho);
    loop {
        let u1: f64 = rng.uniform(0.0, 1.0);
        let z = (PI * u1).cos();
        let f = (1.0 + r * z) / (r + z);
        let c = kappa * (r - f);
        let u2: f64 = rng.uniform(0.0, 1.0);
        if c * (2.0 - c) - u2 > 0.0 || (c / u2).ln() + 1.0 - c >= 0.0 {
            let u3: f64 = rng.uniform(0.0, 1.0);
            let theta = if u3 < 0.5 { mu - f.acos() } else { mu + f.acos() };
            return theta.rem_euclid(TAU);
        }
    }
}
