use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bt::RedPolicyConfig;
use crate::error::{Error, Result};
use crate::scenario::{ScenarioConfig, ScenarioKind};
use crate::{AirframeParamsF64, MissileParamsF64};

/// Bump when a config change alters what a given seed simulates.
pub const CONFIG_VERSION: u32 = 1;

/// Everything that determines an episode besides the seed and the actions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub config_version: u32,
    pub scenario: ScenarioConfig,
    pub airframe: AirframeParamsF64,
    pub missile: MissileParamsF64,
    pub red: RedPolicyConfig,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            config_version: CONFIG_VERSION,
            scenario: ScenarioConfig::default(),
            airframe: AirframeParamsF64::default(),
            missile: MissileParamsF64::default(),
            red: RedPolicyConfig::default(),
        }
    }
}

impl SimConfig {
    pub fn for_kind(kind: ScenarioKind) -> Self {
        Self { scenario: ScenarioConfig::for_kind(kind), ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.config_version != CONFIG_VERSION {
            return Err(Error::VersionMismatch {
                expected: CONFIG_VERSION.to_string(),
                found: self.config_version.to_string(),
            });
        }
        self.scenario.validate().map_err(|e| Error::InvalidConfig(format!("scenario: {e}")))?;
        self.airframe.validate().map_err(|e| Error::InvalidConfig(format!("airframe: {e}")))?;
        self.missile.validate().map_err(|e| Error::InvalidConfig(format!("missile: {e}")))?;
        Ok(())
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }
}
