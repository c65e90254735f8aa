//! Acceptance suite: exact oracles, estimator calibration and the
//! scaled-down size/power experiments. One test per criterion; each prints a
//! PASS line (visible with `--nocapture`).

mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use rayon::prelude::*;

use common::{brute_force_erl, poisson_pattern};
use frytest::estimator::{
    estimate_k, sector_k_curve, uniform_grid, CurveStatistic, EstimatorContext,
};
use frytest::fry::{fry_points, resample, RotationScheme};
use frytest::geom::{translation_overlap, DirectedSet, Vec2, Window};
use frytest::mctest::{
    curve_p_value, erl_order, integral_extremeness, isotropy_test, CurveOrdering, Sidedness,
    StatisticKind, TestConfig,
};
use frytest::models::{ModelConfig, ModelFamily};
use frytest::sampling::RngStream;

fn table1_window(n: usize) -> Window {
    // lambda = 0.005 throughout the study
    Window::centered_square((n as f64 / 0.005).sqrt()).unwrap()
}

// ---------------------------------------------------------------------------
// Criterion 1: exact oracles
// ---------------------------------------------------------------------------

#[test]
fn criterion_1_exact_oracles() {
    overlap_vs_raster_oracle();
    erl_vs_exhaustive_brute_force();
    trapezoid_vs_refinement();
    fry_count_and_pairwise_symmetry();
    hand_computed_k_estimate();
    println!("ACCEPTANCE 1 PASS - exact-oracle suite (raster overlap, ERL brute force, trapezoid refinement, Fry counts, pairwise symmetry, hand K)");
}

fn overlap_vs_raster_oracle() {
    let mut rng = RngStream::new(42, 0);
    for case in 0..100 {
        let width = rng.uniform(1.0, 50.0);
        let height = rng.uniform(1.0, 50.0);
        let x0 = rng.uniform(-10.0, 10.0);
        let y0 = rng.uniform(-10.0, 10.0);
        let window = Window::new(x0, x0 + width, y0, y0 + height).unwrap();
        let z = Vec2::new(
            rng.uniform(-0.75 * width, 0.75 * width),
            rng.uniform(-0.75 * height, 0.75 * height),
        );
        let analytic = translation_overlap(&window, z);

        // raster oracle: count 1000x1000 grid cells of W whose center also
        // lies in the translate W + z, times the cell area
        let cells = 1000;
        let (cw, ch) = (width / cells as f64, height / cells as f64);
        let mut count = 0usize;
        for i in 0..cells {
            let cx = x0 + (i as f64 + 0.5) * cw;
            // the overlap is a rectangle; count rows only when the x-strip hits
            let in_x = cx - z.x >= x0 && cx - z.x <= x0 + width;
            if !in_x {
                continue;
            }
            for j in 0..cells {
                let cy = y0 + (j as f64 + 0.5) * ch;
                if cy - z.y >= y0 && cy - z.y <= y0 + height {
                    count += 1;
                }
            }
        }
        let raster = count as f64 * cw * ch;
        assert!(
            (analytic - raster).abs() <= 1e-2 * analytic.max(1e-12),
            "case {case}: analytic {analytic} vs raster {raster}"
        );
    }
}

fn erl_vs_exhaustive_brute_force() {
    let alphabet = 3u64;
    let mut exhaustive_instances = 0usize;
    let mut sampled_instances = 0usize;
    for m in 2..=6usize {
        for k in 1..=4usize {
            let digits = m * k;
            let total = alphabet.pow(digits as u32);
            let exhaustive = total <= 59049; // enumerate fully up to 3^10
            let instances: Box<dyn Iterator<Item = u64>> = if exhaustive {
                exhaustive_instances += total as usize;
                Box::new(0..total)
            } else {
                sampled_instances += 20_000;
                let mut rng = RngStream::new(9999, (m * 10 + k) as u64);
                Box::new((0..20_000).map(move |_| rng.index(total as usize) as u64))
            };
            let grid: Vec<f64> = (1..=k).map(|j| j as f64).collect();
            for code in instances {
                let mut c = code;
                let values: Vec<Vec<i32>> = (0..m)
                    .map(|_| {
                        (0..k)
                            .map(|_| {
                                let d = (c % alphabet) as i32;
                                c /= alphabet;
                                d
                            })
                            .collect()
                    })
                    .collect();
                let curves: Vec<CurveStatistic> = values
                    .iter()
                    .map(|v| {
                        let v: Vec<f64> = v.iter().map(|x| *x as f64).collect();
                        CurveStatistic::from_values(grid.clone(), v).unwrap()
                    })
                    .collect();
                for one_sided in [true, false] {
                    let sidedness = if one_sided { Sidedness::One } else { Sidedness::Two };
                    let got = erl_order(&curves, sidedness).unwrap();
                    let expected = brute_force_erl(&values, one_sided);
                    assert_eq!(
                        got, expected,
                        "m={m} k={k} values={values:?} one_sided={one_sided}"
                    );
                }
            }
        }
    }
    assert!(exhaustive_instances > 90_000);
    assert!(sampled_instances > 100_000);
}

fn trapezoid_vs_refinement() {
    let mut rng = RngStream::new(4242, 0);
    for _ in 0..20 {
        let k = 30 + rng.index(170);
        let r_max = rng.uniform(0.5, 30.0);
        let grid = uniform_grid(r_max, k).unwrap();
        let values: Vec<f64> = (0..k).map(|_| rng.uniform(-5.0, 5.0)).collect();
        let curve = CurveStatistic::from_values(grid.clone(), values.clone()).unwrap();
        let coarse = integral_extremeness(&curve).unwrap();
        let mut fine = 0.0;
        for seg in 0..k - 1 {
            let (v0, v1) = (values[seg].abs(), values[seg + 1].abs());
            let h = (grid[seg + 1] - grid[seg]) / 10.0;
            for s in 0..10 {
                let a = v0 + (v1 - v0) * (s as f64 / 10.0);
                let b = v0 + (v1 - v0) * ((s + 1) as f64 / 10.0);
                fine += h * (a + b) / 2.0;
            }
        }
        assert!(
            (coarse - fine).abs() <= 1e-12 * coarse.max(1.0),
            "trapezoid {coarse} vs refined {fine}"
        );
    }
}

fn fry_count_and_pairwise_symmetry() {
    let window = Window::new(0.0, 1.6012085, 0.0, 1.0).unwrap();
    let mut rng = RngStream::new(77, 0);
    let pattern = poisson_pattern(294, &window, &mut rng);
    let fry = fry_points(&pattern, None).unwrap();
    assert_eq!(fry.len(), 294 * 293);

    let rotated = resample(&fry, RotationScheme::Pairwise, &mut rng).unwrap();
    let links = rotated.pair_links().expect("pairwise keeps links");
    for (idx, link) in links.iter().enumerate() {
        let partner = link.unwrap() as usize;
        assert_eq!(rotated.vectors()[idx], -rotated.vectors()[partner]);
    }
}

fn hand_computed_k_estimate() {
    let window = Window::new(0.0, 10.0, 0.0, 10.0).unwrap();
    let pattern =
        frytest::PointPattern::new(vec![Vec2::new(2.0, 2.0), Vec2::new(5.0, 2.0)], window)
            .unwrap();
    let fry = fry_points(&pattern, None).unwrap();
    let ctx = EstimatorContext::for_pattern(&pattern).unwrap();
    let k = estimate_k(&fry, &ctx, &DirectedSet::sector(0.0, FRAC_PI_4, 4.0).unwrap());
    let expected = 5000.0 / 70.0;
    assert!((k - expected).abs() <= 1e-9 * expected);
}

// ---------------------------------------------------------------------------
// Criterion 2: estimator calibration on Poisson patterns
// ---------------------------------------------------------------------------

#[test]
fn criterion_2_estimator_calibration() {
    let n = 300;
    let window = table1_window(n);
    let runs = 500;
    let sums: Vec<(f64, f64)> = (0..runs)
        .into_par_iter()
        .map(|rep| {
            let mut rng = RngStream::new(20_000, rep as u64);
            let pattern = poisson_pattern(n, &window, &mut rng);
            let fry = fry_points(&pattern, Some(20.0)).unwrap();
            let ctx = EstimatorContext::for_pattern(&pattern).unwrap();
            let k10 = estimate_k(
                &fry,
                &ctx,
                &DirectedSet::double_cone_sector(0.0, FRAC_PI_2, 10.0).unwrap(),
            );
            let k20 = estimate_k(
                &fry,
                &ctx,
                &DirectedSet::double_cone_sector(0.0, FRAC_PI_2, 20.0).unwrap(),
            );
            (k10, k20)
        })
        .collect();
    let mean10 = sums.iter().map(|s| s.0).sum::<f64>() / runs as f64;
    let mean20 = sums.iter().map(|s| s.1).sum::<f64>() / runs as f64;
    let target10 = PI * 100.0;
    let target20 = PI * 400.0;
    assert!(
        (mean10 - target10).abs() <= 0.05 * target10,
        "mean K(b_10) = {mean10} vs {target10}"
    );
    assert!(
        (mean20 - target20).abs() <= 0.05 * target20,
        "mean K(b_20) = {mean20} vs {target20}"
    );

    // half-disk invariance on a point-symmetric Fry set
    let mut rng = RngStream::new(20_500, 0);
    let pattern = poisson_pattern(n, &window, &mut rng);
    let fry = fry_points(&pattern, Some(20.0)).unwrap();
    let ctx = EstimatorContext::for_pattern(&pattern).unwrap();
    let grid = [5.0, 10.0, 15.0, 20.0];
    let base = sector_k_curve(&fry, &ctx, 0.1, FRAC_PI_2, &grid).unwrap();
    for j in 0..12 {
        let alpha = 0.1 + j as f64 * PI / 6.3;
        let other = sector_k_curve(&fry, &ctx, alpha, FRAC_PI_2, &grid).unwrap();
        for (a, b) in base.values().iter().zip(other.values()) {
            let (a, b) = (a.unwrap(), b.unwrap());
            assert!(
                (a - b).abs() <= 1e-10 * a.max(1e-300),
                "half-disk estimate varies with direction: {a} vs {b}"
            );
        }
    }
    println!(
        "ACCEPTANCE 2 PASS - mean K(b_10) = {mean10:.2} (pi r^2 = {target10:.2}), \
         mean K(b_20) = {mean20:.2} ({target20:.2}); half-disk invariance <= 1e-10"
    );
}

// ---------------------------------------------------------------------------
// Criterion 3: ratio statistic against the uniform reference
// ---------------------------------------------------------------------------

#[test]
fn criterion_3_uniform_reference_of_ratio() {
    let n = 300;
    let window = table1_window(n);
    let runs = 200;
    let r = 20.0;
    let alphas: Vec<f64> = (0..36).map(|j| j as f64 * PI / 36.0).collect();
    let epsilons: Vec<f64> = (1..=36).map(|j| j as f64 * PI / 72.0).collect();

    let deviation_sums: Vec<Vec<f64>> = (0..runs)
        .into_par_iter()
        .map(|rep| {
            let mut rng = RngStream::new(30_000, rep as u64);
            let pattern = poisson_pattern(n, &window, &mut rng);
            let fry = fry_points(&pattern, Some(r)).unwrap();
            let ctx = EstimatorContext::for_pattern(&pattern).unwrap();
            let denom = estimate_k(
                &fry,
                &ctx,
                &DirectedSet::sector(FRAC_PI_2, FRAC_PI_2, r).unwrap(),
            );
            alphas
                .iter()
                .flat_map(|alpha| {
                    epsilons.iter().map(|eps| {
                        let num =
                            estimate_k(&fry, &ctx, &DirectedSet::sector(*alpha, *eps, r).unwrap());
                        (num / denom - eps / FRAC_PI_2).abs()
                    })
                })
                .collect()
        })
        .collect();

    let cells = alphas.len() * epsilons.len();
    let mut worst = 0.0f64;
    for cell in 0..cells {
        let mean: f64 = deviation_sums.iter().map(|d| d[cell]).sum::<f64>() / runs as f64;
        worst = worst.max(mean);
    }
    assert!(worst <= 0.05, "worst mean deviation {worst}");
    println!("ACCEPTANCE 3 PASS - max over 5x2.5 degree grid of mean |F - 2e/pi| = {worst:.4} <= 0.05");
}

// ---------------------------------------------------------------------------
// Criterion 4: null uniformity under exchangeability
// ---------------------------------------------------------------------------

#[test]
fn criterion_4_null_uniformity() {
    let runs = 1000;
    let ks_runs = 500;
    let m = 99;
    let window = Window::centered_square(100.0).unwrap();
    let grid = uniform_grid(20.0, 50).unwrap();
    let p_values: Vec<f64> = (0..runs)
        .into_par_iter()
        .map(|rep| {
            let mut rng = RngStream::new(40_000, rep as u64);
            let pattern = poisson_pattern(50, &window, &mut rng);
            let fry = fry_points(&pattern, Some(20.0)).unwrap();
            let ctx = EstimatorContext::for_pattern(&pattern).unwrap();
            // observed and bootstraps drawn by the same mechanism: curve 0 is
            // itself a random rotation, so all M+1 curves are exchangeable
            let curves: Vec<CurveStatistic> = (0..=m)
                .map(|b| {
                    let mut stream = RngStream::new(41_000 + rep as u64, b as u64);
                    let rotated = resample(&fry, RotationScheme::GroupWise, &mut stream).unwrap();
                    frytest::estimator::sector_contrast_curve(
                        &rotated, &ctx, 0.0, FRAC_PI_2, FRAC_PI_4, &grid,
                    )
                    .unwrap()
                })
                .collect();
            let (_, _, p) = curve_p_value(&curves, CurveOrdering::Integral, Sidedness::Two).unwrap();
            p
        })
        .collect();

    // Kolmogorov-Smirnov distance to the uniform distribution on the atoms
    // {j/(M+1)}; under exchangeability P(p <= j/(M+1)) = j/(M+1) exactly
    let mut sorted: Vec<f64> = p_values[..ks_runs].to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let nf = ks_runs as f64;
    let mut d = 0.0f64;
    for j in 1..=(m + 1) {
        let x = j as f64 / (m + 1) as f64;
        let below = sorted.partition_point(|p| *p <= x + 1e-12) as f64 / nf;
        let at_left = sorted.partition_point(|p| *p < x - 1e-12) as f64 / nf;
        d = d.max((below - x).abs()).max((at_left - x).abs());
    }
    // asymptotic 1% critical value 1.62762 / sqrt(n); conservative on a
    // discrete support
    let crit = 1.62762 / nf.sqrt();
    assert!(d <= crit, "KS distance {d} exceeds {crit}");

    // rejection probability never exceeds its nominal level by more than 0.02
    for alpha in [0.01, 0.05, 0.1] {
        let rate = p_values.iter().filter(|p| **p <= alpha + 1e-12).count() as f64
            / p_values.len() as f64;
        assert!(
            rate <= alpha + 0.02,
            "P(p <= {alpha}) = {rate} exceeds {alpha} + 0.02 over {runs} runs"
        );
    }
    println!(
        "ACCEPTANCE 4 PASS - null p-values uniform: KS = {d:.4} <= {crit:.4} over {ks_runs} runs; \
         size bound P(p <= a) <= a + 0.02 holds at a = 0.01, 0.05, 0.1 over {runs} runs"
    );
}

// ---------------------------------------------------------------------------
// Criteria 5-7: size, power and the documented failure mode
// ---------------------------------------------------------------------------

fn run_cell(
    model: &ModelConfig,
    n: usize,
    replicates: usize,
    master_seed: u64,
) -> (f64, f64, f64) {
    let window = table1_window(n);
    let (alpha1, alpha2) = model.default_directions();
    let results: Vec<f64> = (0..replicates)
        .into_par_iter()
        .map(|rep| {
            let mut sim_rng = RngStream::new(master_seed, rep as u64);
            let pattern = model.simulate(&window, &mut sim_rng).unwrap();
            let cfg = TestConfig {
                statistic: StatisticKind::SectorContrast {
                    alpha1,
                    alpha2,
                    eps: FRAC_PI_4,
                },
                ordering: CurveOrdering::Integral,
                scheme: RotationScheme::GroupWise,
                bootstrap_count: 99,
                r_max: model.default_r_max(),
                grid_size: 200,
                seed: RngStream::new(master_seed, rep as u64).child(1).master_seed(),
            };
            isotropy_test(&pattern, &cfg).unwrap().p_value
        })
        .collect();
    let rejections = results.iter().filter(|p| **p <= 0.05).count();
    let rate = rejections as f64 / replicates as f64;
    let mean_p = results.iter().sum::<f64>() / replicates as f64;
    let sd_p = (results.iter().map(|p| (p - mean_p).powi(2)).sum::<f64>()
        / (replicates - 1) as f64)
        .sqrt();
    (rate, mean_p, sd_p)
}

#[test]
fn criterion_5_empirical_size() {
    let thomas = ModelConfig {
        family: ModelFamily::ThomasLike { p: 0.94 },
        range: 10.0,
        strength: 0.15,
        anisotropy: 1.0,
        n_target: 100,
    };
    let (thomas_rate, _, _) = run_cell(&thomas, 100, 200, 50_000);
    assert!(
        (0.02..=0.10).contains(&thomas_rate),
        "isotropic Thomas-like rejection rate {thomas_rate} outside [0.02, 0.10]"
    );

    let strauss = ModelConfig {
        family: ModelFamily::Strauss,
        range: 5.0,
        strength: 0.4,
        anisotropy: 1.0,
        n_target: 100,
    };
    let (strauss_rate, _, _) = run_cell(&strauss, 100, 200, 51_000);
    assert!(
        (0.02..=0.10).contains(&strauss_rate),
        "isotropic Strauss rejection rate {strauss_rate} outside [0.02, 0.10]"
    );
    println!(
        "ACCEPTANCE 5 PASS - empirical size at alpha=0.05: Thomas-like {thomas_rate:.3}, \
         Strauss {strauss_rate:.3} (band [0.02, 0.10], 200 replicates each)"
    );
}

#[test]
fn criterion_6_power_on_anisotropic_strauss() {
    let model = ModelConfig {
        family: ModelFamily::Strauss,
        range: 10.0,
        strength: 0.0,
        anisotropy: 0.7,
        n_target: 300,
    };
    let (rate, _, _) = run_cell(&model, 300, 100, 60_000);
    assert!(rate >= 0.90, "anisotropic hard-core power {rate} below 0.90");
    println!("ACCEPTANCE 6 PASS - power on anisotropic hard-core Strauss: {rate:.2} >= 0.90 (100 replicates)");
}

#[test]
fn criterion_7_line_cluster_failure_mode() {
    let model = ModelConfig {
        family: ModelFamily::PoissonLineCluster {
            mu: PI / 3.0,
            kappa_max: 10.0,
        },
        range: 1.0,
        strength: 0.0,
        anisotropy: 1.0,
        n_target: 300,
    };
    let (rate, _, _) = run_cell(&model, 300, 100, 70_000);
    assert!(
        rate >= 0.5,
        "isotropic line-cluster false rejection rate {rate}, expected the documented failure (>= 0.5)"
    );
    println!(
        "ACCEPTANCE 7 PASS - isotropic Poisson line cluster falsely rejected at rate {rate:.2} \
         >= 0.5 (documented failure mode reproduced)"
    );
}
