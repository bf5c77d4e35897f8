use std::path::Path;

use serde::Deserialize;

use ringlab_core::semidirect::WitnessBounds;
use ringlab_core::verify::DEFAULT_SEED;
use ringlab_core::{Budget, OutputFormat};

/// Settings from a TOML file. Every key is optional:
///
/// ```toml
/// table_max = 4096
/// rule_max = 1048576
/// degree = 4
/// coef = 10
/// format = "json"
/// seed = 24301
/// ```
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub table_max: usize,
    pub rule_max: usize,
    pub degree: usize,
    pub coef: i64,
    pub format: OutputFormat,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        let b = Budget::default();
        let w = WitnessBounds::default();
        Config {
            table_max: b.table_max,
            rule_max: b.rule_max,
            degree: w.degree,
            coef: w.coef,
            format: OutputFormat::default(),
            seed: DEFAULT_SEED,
        }
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn budget(&self) -> Budget {
        Budget { table_max: self.table_max, rule_max: self.rule_max }
    }

    pub fn bounds(&self) -> WitnessBounds {
        WitnessBounds { degree: self.degree, coef: self.coef }
    }

    pub fn check(&self) -> Result<(), String> {
        if self.table_max == 0 || self.rule_max == 0 {
            return Err("budgets must be positive".into());
        }
        if self.coef < 0 {
            return Err("coef must be non-negative".into());
        }
        Ok(())
    }
}
