use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use crate::cost::{CostError, CostParams};
use crate::eval::DEFAULT_QUERY_COUNT;
use crate::ingest::DEFAULT_ROAD_SPEED_MPS;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PathsConfig {
    pub trajectories: Option<PathBuf>,
    pub roads: Option<PathBuf>,
    pub index: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub cell_size_m: f64,
    /// `[min_lat, min_lon, max_lat, max_lon]`; derived from the data when absent.
    pub bbox: Option<[f64; 4]>,
    pub default_road_speed_mps: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            cell_size_m: 100.0,
            bbox: None,
            default_road_speed_mps: DEFAULT_ROAD_SPEED_MPS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalConfig {
    pub seed: u64,
    pub query_count: usize,
    pub values: Option<Vec<f64>>,
    pub levels: Option<Vec<f64>>,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            query_count: DEFAULT_QUERY_COUNT,
            values: None,
            levels: None,
        }
    }
}

/// Everything a command needs, after merging defaults, the config file, and
/// command-line flags (in increasing priority).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub paths: PathsConfig,
    pub grid: GridConfig,
    pub cost: CostParams,
    pub eval: EvalConfig,
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("in config {}", path.display()))
    }

    /// Defaults, overlaid with `path` when given.
    pub fn load_or_default(path: Option<&Path>) -> Result<Self> {
        path.map_or_else(|| Ok(Self::default()), Self::load)
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.grid;
        if !(g.cell_size_m.is_finite() && g.cell_size_m > 0.0) {
            bail!("grid.cell_size_m must be positive, got {}", g.cell_size_m);
        }
        if !(g.default_road_speed_mps.is_finite() && g.default_road_speed_mps > 0.0) {
            bail!("grid.default_road_speed_mps must be positive, got {}", g.default_road_speed_mps);
        }
        if let Some([a, b, c, d]) = g.bbox {
            if !(a < c && b < d) {
                bail!("grid.bbox must be [min_lat, min_lon, max_lat, max_lon] with min < max");
            }
        }
        if let Err(CostError::InvalidParam { name, reason }) = self.cost.validate() {
            bail!("cost.{name} {reason}");
        }
        if self.eval.query_count == 0 {
            bail!("eval.query_count must be at least 1");
        }
        Ok(())
    }
}
