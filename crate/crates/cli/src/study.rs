//! Power study driver: model grids, replicated tests, rejection rates.

use std::fmt::Write as _;

use rayon::prelude::*;

use frytest::error::{Error, Result};
use frytest::fry::RotationScheme;
use frytest::geom::Window;
use frytest::mctest::{isotropy_test, CurveOrdering, StatisticKind, TestConfig};
use frytest::models::ModelConfig;
use frytest::sampling::RngStream;

use crate::config::{model_from_config, ordering_from, scheme_from, Config};

/// One grid cell of the study: a model plus its observation window.
#[derive(Debug, Clone)]
pub struct StudyCell {
    pub model: ModelConfig,
    pub window: Window,
}

/// Full study specification: the cell grid and the shared test template.
#[derive(Debug, Clone)]
pub struct StudyConfig {
    pub cells: Vec<StudyCell>,
    pub replicates: usize,
    pub scheme: RotationScheme,
    pub ordering: CurveOrdering,
    pub bootstrap_count: usize,
    pub grid_size: usize,
    /// Significance level for the rejection-rate column.
    pub alpha: f64,
    pub seed: u64,
    /// Override the per-family r_max rule.
    pub r_max: Option<f64>,
    /// Override the per-family contrast directions.
    pub directions: Option<(f64, f64)>,
    pub epsilon: f64,
}

impl StudyConfig {
    /// Build from a config file: list-valued `model.*` keys span the grid.
    pub fn from_config(cfg: &Config, seed: u64) -> Result<StudyConfig> {
        let ranges = cfg
            .f64_list("model.R")?
            .ok_or_else(|| Error::Config("missing required key 'model.R'".into()))?;
        let strengths = cfg
            .f64_list("model.gamma")?
            .ok_or_else(|| Error::Config("missing required key 'model.gamma'".into()))?;
        let anisotropies = cfg.f64_list("model.a")?.unwrap_or_else(|| vec![1.0]);
        let counts = cfg
            .usize_list("model.n")?
            .ok_or_else(|| Error::Config("missing required key 'model.n'".into()))?;
        let families = cfg
            .str_list("model.family")
            .ok_or_else(|| Error::Config("missing required key 'model.family'".into()))?;

        let mut cells = Vec::new();
        for family in &families {
            for &range in &ranges {
                for &strength in &strengths {
                    for &a in &anisotropies {
                        for &n in &counts {
                            // reuse the single-model builder for the extras
                            let base = format!(
                                "model.family = {family}\nmodel.R = {range}\nmodel.gamma = {strength}\nmodel.a = {a}\nmodel.n = {n}\n"
                            );
                            let extras: String = ["model.p", "model.mu", "model.kappa_max", "model.tau"]
                                .iter()
                                .filter_map(|k| cfg.get(k).map(|v| format!("{k} = {v}\n")))
                                .collect();
                            let merged = Config::parse(&format!("{base}{extras}"))?;
                            let model = model_from_config(&merged)?;
                            let window = crate::config::window_from_config(cfg, n)?;
                            cells.push(StudyCell { model, window });
                        }
                    }
                }
            }
        }
        if cells.is_empty() {
            return Err(Error::Config("study grid is empty".into()));
        }
        let replicates = cfg.usize_or("study.replicates", 100)?;
        if replicates < 1 {
            return Err(Error::Config("study.replicates must be >= 1".into()));
        }
        let bootstrap_count = cfg.usize_or("test.M", 99)?;
        let alpha = cfg.f64_or("study.alpha", 0.05)?;
        if (bootstrap_count + 1) as f64 * alpha < 1.0 {
            return Err(Error::Config(format!(
                "1/(M+1) must not exceed the significance level: M = {bootstrap_count}, alpha = {alpha}"
            )));
        }
        let directions = match (cfg.f64_opt("test.alpha1")?, cfg.f64_opt("test.alpha2")?) {
            (Some(a1), Some(a2)) => Some((a1, a2)),
            (None, None) => None,
            _ => {
                return Err(Error::Config(
                    "set both test.alpha1 and test.alpha2 or neither".into(),
                ))
            }
        };
        Ok(StudyConfig {
            cells,
            replicates,
            scheme: scheme_from(cfg.get("test.scheme").unwrap_or("group"))?,
            ordering: ordering_from(cfg.get("test.ordering").unwrap_or("integral"))?,
            bootstrap_count,
            grid_size: cfg.usize_or("test.k", 200)?,
            alpha,
            seed,
            r_max: cfg.f64_opt("test.r_max")?,
            directions,
            epsilon: cfg.f64_or("test.epsilon", std::f64::consts::FRAC_PI_4)?,
        })
    }
}

/// Aggregated outcome of one study cell.
#[derive(Debug, Clone)]
pub struct PowerRow {
    pub family: &'static str,
    pub range: f64,
    pub strength: f64,
    pub anisotropy: f64,
    pub n_target: usize,
    pub scheme: &'static str,
    pub ordering: &'static str,
    pub replicates: usize,
    pub failures: usize,
    pub skipped: bool,
    pub rejections: usize,
    pub rejection_rate: f64,
    pub rate_se: f64,
    pub mean_p: f64,
    pub sd_p: f64,
}

/// The study result table; serializes to one CSV row per cell.
#[derive(Debug, Clone)]
pub struct PowerTable {
    pub rows: Vec<PowerRow>,
}

impl PowerTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "family,R,gamma,a,n,scheme,ordering,replicates,failures,skipped,rejections,rejection_rate,rate_se,mean_p,sd_p\n",
        );
        for r in &self.rows {
            let _ = write!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                r.family,
                r.range,
                r.strength,
                r.anisotropy,
                r.n_target,
                r.scheme,
                r.ordering,
                r.replicates,
                r.failures,
                r.skipped
            );
            if r.skipped {
                out.push_str(",,,,,\n");
            } else {
                let _ = writeln!(
                    out,
                    ",{},{},{},{},{}",
                    r.rejections, r.rejection_rate, r.rate_se, r.mean_p, r.sd_p
                );
            }
        }
        out
    }
}

// Streams are keyed by (cell, replicate): simulation and test seeds derive
// from disjoint salts of the same child stream, so the table is reproducible
// at any parallelism degree.
fn replicate_p_value(study: &StudyConfig, cell_index: usize, rep: usize) -> Result<f64> {
    let cell = &study.cells[cell_index];
    let key = RngStream::new(study.seed, (cell_index as u64) << 32 | rep as u64);
    let mut sim_rng = key.child(0);
    let pattern = cell.model.simulate(&cell.window, &mut sim_rng)?;
    let (d1, d2) = study.directions.unwrap_or(cell.model.default_directions());
    let cfg = TestConfig {
        statistic: StatisticKind::SectorContrast {
            alpha1: d1,
            alpha2: d2,
            eps: study.epsilon,
        },
        ordering: study.ordering,
        scheme: study.scheme,
        bootstrap_count: study.bootstrap_count,
        r_max: study.r_max.unwrap_or(cell.model.default_r_max()),
        grid_size: study.grid_size,
        seed: key.child(1).master_seed(),
    };
    Ok(isotropy_test(&pattern, &cfg)?.p_value)
}

/// Run the full study grid. Replicates are distributed over the current
/// rayon pool; a cell is marked skipped when more than 1% of its replicates
/// fail to simulate.
pub fn run_power_study(study: &StudyConfig) -> Result<PowerTable> {
    let jobs: Vec<(usize, usize)> = (0..study.cells.len())
        .flat_map(|c| (0..study.replicates).map(move |r| (c, r)))
        .collect();
    let outcomes: Vec<Result<f64>> = jobs
        .par_iter()
        .map(|(c, r)| replicate_p_value(study, *c, *r))
        .collect();

    let mut rows = Vec::with_capacity(study.cells.len());
    for (c, cell) in study.cells.iter().enumerate() {
        let cell_outcomes = &outcomes[c * study.replicates..(c + 1) * study.replicates];
        let p_values: Vec<f64> = cell_outcomes.iter().filter_map(|o| o.as_ref().ok()).copied().collect();
        let failures = study.replicates - p_values.len();
        let skipped = failures as f64 > 0.01 * study.replicates as f64;
        let (rejections, rate, se, mean_p, sd_p) = if skipped || p_values.is_empty() {
            (0, f64::NAN, f64::NAN, f64::NAN, f64::NAN)
        } else {
            let rejections = p_values.iter().filter(|p| **p <= study.alpha).count();
            let rate = rejections as f64 / p_values.len() as f64;
            let se = (rate * (1.0 - rate) / p_values.len() as f64).sqrt();
            let mean = p_values.iter().sum::<f64>() / p_values.len() as f64;
            let sd = if p_values.len() > 1 {
                (p_values.iter().map(|p| (p - mean).powi(2)).sum::<f64>()
                    / (p_values.len() - 1) as f64)
                    .sqrt()
            } else {
                0.0
            };
            (rejections, rate, se, mean, sd)
        };
        rows.push(PowerRow {
            family: cell.model.family.name(),
            range: cell.model.range,
            strength: cell.model.strength,
            anisotropy: cell.model.anisotropy,
            n_target: cell.model.n_target,
            scheme: study.scheme.name(),
            ordering: study.ordering.name(),
            replicates: study.replicates,
            failures,
            skipped,
            rejections,
            rejection_rate: rate,
            rate_se: se,
            mean_p,
            sd_p,
        });
    }
    Ok(PowerTable { rows })
}
