//! Real-data battery: repeated tests over subsets, orderings, bootstrap
//! counts and estimator ranges, reporting mean and standard deviation of the
//! Monte Carlo p-value.

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt::Write as _;

use rayon::prelude::*;

use frytest::error::{Error, Result};
use frytest::fry::RotationScheme;
use frytest::mctest::{isotropy_test, CurveOrdering, StatisticKind, TestConfig};
use frytest::pattern::PointPattern;
use frytest::sampling::RngStream;

use crate::config::{ordering_from, Config};

/// One battery line: a subset of the data tested under fixed settings.
#[derive(Debug, Clone)]
pub struct BatteryRow {
    pub subset: String,
    pub ordering: &'static str,
    pub bootstrap_count: usize,
    pub r_max: f64,
    pub repeats: usize,
    pub mean_p: f64,
    pub sd_p: f64,
}

/// Battery specification; defaults follow the amacrine analysis.
#[derive(Debug, Clone)]
pub struct BatteryConfig {
    pub subsets: Vec<String>,
    pub orderings: Vec<CurveOrdering>,
    pub m_values: Vec<usize>,
    pub r_max_values: Vec<f64>,
    pub repeats: usize,
    pub epsilon: f64,
    pub grid_size: usize,
    pub seed: u64,
    /// Contrast directions per subset; falls back to the built-in table.
    pub directions: Vec<(String, (f64, f64))>,
}

fn degrees(d: f64) -> f64 {
    d * PI / 180.0
}

/// Built-in contrast directions: unmarked (−45°, 45°), on (−10°, 80°),
/// off (60°, 150°).
pub fn default_directions(subset: &str) -> Option<(f64, f64)> {
    match subset {
        "unmarked" => Some((degrees(-45.0), degrees(45.0))),
        "on" => Some((degrees(-10.0), degrees(80.0))),
        "off" => Some((degrees(60.0), degrees(150.0))),
        _ => None,
    }
}

impl BatteryConfig {
    pub fn from_config(cfg: &Config, seed: u64) -> Result<BatteryConfig> {
        let subsets = cfg
            .str_list("battery.subsets")
            .unwrap_or_else(|| vec!["unmarked".into(), "on".into(), "off".into()]);
        let orderings = match cfg.str_list("battery.orderings") {
            Some(names) => names
                .iter()
                .map(|n| ordering_from(n))
                .collect::<Result<Vec<_>>>()?,
            None => vec![CurveOrdering::Integral, CurveOrdering::Erl],
        };
        let m_values = cfg.usize_list("battery.M")?.unwrap_or_else(|| vec![99, 499]);
        let r_max_values = cfg
            .f64_list("battery.r_max")?
            .unwrap_or_else(|| vec![0.08, 0.09, 0.10, 0.11, 0.12]);
        let mut directions = Vec::new();
        for subset in &subsets {
            let a1 = cfg.f64_opt(&format!("battery.{subset}.alpha1"))?;
            let a2 = cfg.f64_opt(&format!("battery.{subset}.alpha2"))?;
            let dirs = match (a1, a2) {
                (Some(a1), Some(a2)) => (a1, a2),
                (None, None) => default_directions(subset).ok_or_else(|| {
                    Error::Config(format!(
                        "no default directions for subset '{subset}'; set battery.{subset}.alpha1/alpha2"
                    ))
                })?,
                _ => {
                    return Err(Error::Config(format!(
                        "set both battery.{subset}.alpha1 and alpha2 or neither"
                    )))
                }
            };
            directions.push((subset.clone(), dirs));
        }
        Ok(BatteryConfig {
            subsets,
            orderings,
            m_values,
            r_max_values,
            repeats: cfg.usize_or("battery.repeats", 1000)?,
            epsilon: cfg.f64_or("battery.epsilon", FRAC_PI_4)?,
            grid_size: cfg.usize_or("battery.k", 200)?,
            seed,
            directions,
        })
    }
}

fn subset_pattern(pattern: &PointPattern, subset: &str) -> Result<PointPattern> {
    let p = if subset == "unmarked" {
        pattern.unmarked()
    } else {
        pattern.subset_by_mark(subset)?
    };
    if p.len() < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            got: p.len(),
        });
    }
    Ok(p)
}

/// Run the battery: group-wise rotations, every combination of subset,
/// ordering, M and r_max, `repeats` independent tests each.
pub fn run_battery(pattern: &PointPattern, cfg: &BatteryConfig) -> Result<Vec<BatteryRow>> {
    let mut rows = Vec::new();
    let mut combo = 0u64;
    for (subset, dirs) in &cfg.directions {
        let sub = subset_pattern(pattern, subset)?;
        for ordering in &cfg.orderings {
            for &m in &cfg.m_values {
                for &r_max in &cfg.r_max_values {
                    combo += 1;
                    let key = RngStream::new(cfg.seed, combo);
                    let p_values: Vec<f64> = (0..cfg.repeats)
                        .into_par_iter()
                        .map(|rep| {
                            let test = TestConfig {
                                statistic: StatisticKind::SectorContrast {
                                    alpha1: dirs.0,
                                    alpha2: dirs.1,
                                    eps: cfg.epsilon,
                                },
                                ordering: *ordering,
                                scheme: RotationScheme::GroupWise,
                                bootstrap_count: m,
                                r_max,
                                grid_size: cfg.grid_size,
                                seed: key.child(rep as u64).master_seed(),
                            };
                            isotropy_test(&sub, &test).map(|r| r.p_value)
                        })
                        .collect::<Result<_>>()?;
                    let mean = p_values.iter().sum::<f64>() / p_values.len() as f64;
                    let sd = if p_values.len() > 1 {
                        (p_values.iter().map(|p| (p - mean).powi(2)).sum::<f64>()
                            / (p_values.len() - 1) as f64)
                            .sqrt()
                    } else {
                        0.0
                    };
                    rows.push(BatteryRow {
                        subset: subset.clone(),
                        ordering: ordering.name(),
                        bootstrap_count: m,
                        r_max,
                        repeats: cfg.repeats,
                        mean_p: mean,
                        sd_p: sd,
                    });
                }
            }
        }
    }
    Ok(rows)
}

pub fn battery_to_csv(rows: &[BatteryRow]) -> String {
    let mut out = String::from("subset,ordering,M,r_max,repeats,mean_p,sd_p\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.subset, r.ordering, r.bootstrap_count, r.r_max, r.repeats, r.mean_p, r.sd_p
        );
    }
    out
}
