//! Flat key-value configuration files.
//!
//! One `key = value` pair per line with dotted keys (`model.family`,
//! `test.M`, `seed`); `#` starts a comment. List-valued keys take
//! comma-separated entries. The format is diff-friendly and parsed without
//! any dependency.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use frytest::error::{Error, Result};
use frytest::fry::RotationScheme;
use frytest::geom::Window;
use frytest::mctest::{CurveOrdering, StatisticKind, TestConfig};
use frytest::models::{ModelConfig, ModelFamily};

/// Parsed configuration: a flat map from dotted keys to raw values.
#[derive(Debug, Clone, Default)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Config> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Config(format!(
                "line {}: expected 'key = value', got '{line}'",
                idx + 1
            )))?;
            entries.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Config { entries })
    }

    pub fn from_file(path: &std::path::Path) -> Result<Config> {
        let text = std::fs::read_to_string(path)?;
        Config::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn f64_opt(&self, key: &str) -> Result<Option<f64>> {
        self.get(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| Error::Config(format!("{key}: expected a number, got '{v}'")))
            })
            .transpose()
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        Ok(self.f64_opt(key)?.unwrap_or(default))
    }

    pub fn usize_opt(&self, key: &str) -> Result<Option<usize>> {
        self.get(key)
            .map(|v| {
                v.parse::<usize>()
                    .map_err(|_| Error::Config(format!("{key}: expected an integer, got '{v}'")))
            })
            .transpose()
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        Ok(self.usize_opt(key)?.unwrap_or(default))
    }

    pub fn u64_or(&self, key: &str, default: u64) -> Result<u64> {
        self.get(key)
            .map(|v| {
                v.parse::<u64>()
                    .map_err(|_| Error::Config(format!("{key}: expected an integer, got '{v}'")))
            })
            .transpose()
            .map(|v| v.unwrap_or(default))
    }

    pub fn f64_list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.get(key)
            .map(|v| {
                v.split(',')
                    .map(|item| {
                        item.trim().parse::<f64>().map_err(|_| {
                            Error::Config(format!("{key}: expected numbers, got '{item}'"))
                        })
                    })
                    .collect()
            })
            .transpose()
    }

    pub fn usize_list(&self, key: &str) -> Result<Option<Vec<usize>>> {
        self.get(key)
            .map(|v| {
                v.split(',')
                    .map(|item| {
                        item.trim().parse::<usize>().map_err(|_| {
                            Error::Config(format!("{key}: expected integers, got '{item}'"))
                        })
                    })
                    .collect()
            })
            .transpose()
    }

    pub fn str_list(&self, key: &str) -> Option<Vec<String>> {
        self.get(key)
            .map(|v| v.split(',').map(|s| s.trim().to_string()).collect())
    }

    fn require(&self, key: &str) -> Result<&str> {
        self.get(key)
            .ok_or_else(|| Error::Config(format!("missing required key '{key}'")))
    }
}

// Table 1 defaults for the family-specific extras.
const DEFAULT_P: f64 = 0.94;
const DEFAULT_KAPPA_MAX: f64 = 10.0;
const DEFAULT_TAU: f64 = 0.4;
const DEFAULT_MU: f64 = PI / 3.0;

fn family_from(cfg: &Config, name: &str) -> Result<ModelFamily> {
    Ok(match name {
        "strauss" => ModelFamily::Strauss,
        "thomas" => ModelFamily::ThomasLike {
            p: cfg.f64_or("model.p", DEFAULT_P)?,
        },
        "line" => ModelFamily::PoissonLineCluster {
            mu: cfg.f64_or("model.mu", DEFAULT_MU)?,
            kappa_max: cfg.f64_or("model.kappa_max", DEFAULT_KAPPA_MAX)?,
        },
        "matern" => ModelFamily::MaternLikeElliptical {
            mu: cfg.f64_or("model.mu", DEFAULT_MU)?,
            tau: cfg.f64_or("model.tau", DEFAULT_TAU)?,
            kappa_max: cfg.f64_or("model.kappa_max", DEFAULT_KAPPA_MAX)?,
        },
        other => {
            return Err(Error::Config(format!(
                "model.family: unknown family '{other}' (use strauss, thomas, line or matern)"
            )))
        }
    })
}

/// Single model from `model.*` keys.
pub fn model_from_config(cfg: &Config) -> Result<ModelConfig> {
    let family = family_from(cfg, cfg.require("model.family")?)?;
    let model = ModelConfig {
        family,
        range: cfg
            .f64_opt("model.R")?
            .ok_or_else(|| Error::Config("missing required key 'model.R'".into()))?,
        strength: cfg
            .f64_opt("model.gamma")?
            .ok_or_else(|| Error::Config("missing required key 'model.gamma'".into()))?,
        anisotropy: cfg.f64_or("model.a", 1.0)?,
        n_target: cfg
            .usize_opt("model.n")?
            .ok_or_else(|| Error::Config("missing required key 'model.n'".into()))?,
    };
    model.validate()?;
    Ok(model)
}

/// Observation window: `window.side` when given, else the square window with
/// intensity 0.005 at the model's target count.
pub fn window_from_config(cfg: &Config, n_target: usize) -> Result<Window> {
    match cfg.f64_opt("window.side")? {
        Some(side) => Window::centered_square(side),
        None => Window::centered_square((n_target as f64 / 0.005).sqrt()),
    }
}

pub fn scheme_from(name: &str) -> Result<RotationScheme> {
    Ok(match name {
        "individual" => RotationScheme::Individual,
        "pair" | "pairwise" => RotationScheme::Pairwise,
        "group" | "groupwise" | "group_wise" => RotationScheme::GroupWise,
        other => {
            return Err(Error::Config(format!(
                "unknown rotation scheme '{other}' (use individual, pair or group)"
            )))
        }
    })
}

pub fn ordering_from(name: &str) -> Result<CurveOrdering> {
    Ok(match name {
        "integral" => CurveOrdering::Integral,
        "erl" => CurveOrdering::Erl,
        other => {
            return Err(Error::Config(format!(
                "unknown ordering '{other}' (use integral or erl)"
            )))
        }
    })
}

/// Test specification from `test.*` keys.
///
/// `default_r_max` and `default_directions` supply the family rules when the
/// keys are absent; a bare `test` config for external data must set
/// `test.r_max` (and directions) explicitly.
pub fn test_from_config(
    cfg: &Config,
    seed: u64,
    default_r_max: Option<f64>,
    default_directions: Option<(f64, f64)>,
) -> Result<TestConfig> {
    let r_max = match cfg.f64_opt("test.r_max")? {
        Some(v) => v,
        None => default_r_max.ok_or_else(|| {
            Error::Config("missing 'test.r_max' (no model to derive it from)".into())
        })?,
    };
    let statistic = match cfg.get("test.statistic").unwrap_or("sector_contrast") {
        "sector_contrast" => {
            let (d1, d2) = default_directions.unwrap_or((0.0, FRAC_PI_2));
            StatisticKind::SectorContrast {
                alpha1: cfg.f64_or("test.alpha1", d1)?,
                alpha2: cfg.f64_or("test.alpha2", d2)?,
                eps: cfg.f64_or("test.epsilon", FRAC_PI_4)?,
            }
        }
        "wong_chiu" => StatisticKind::wong_chiu_default(),
        other => {
            return Err(Error::Config(format!(
                "unknown statistic '{other}' (use sector_contrast or wong_chiu)"
            )))
        }
    };
    let test = TestConfig {
        statistic,
        ordering: ordering_from(cfg.get("test.ordering").unwrap_or("integral"))?,
        scheme: scheme_from(cfg.get("test.scheme").unwrap_or("group"))?,
        bootstrap_count: cfg.usize_or("test.M", 99)?,
        r_max,
        grid_size: cfg.usize_or("test.k", 200)?,
        seed,
    };
    test.validate()?;
    Ok(test)
}
