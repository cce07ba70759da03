use alloc::string::{String, ToString};
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Evaluation scenario: single (clear noon) or all weathers, with normal or
/// adversarial actors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScenarioKind {
    #[serde(rename = "1W-N")]
    OneWeatherNormal,
    #[serde(rename = "1W-A")]
    OneWeatherAdversarial,
    #[serde(rename = "AW-N")]
    AllWeatherNormal,
    #[serde(rename = "AW-A")]
    AllWeatherAdversarial,
}

impl ScenarioKind {
    pub fn is_adversarial(self) -> bool {
        matches!(self, ScenarioKind::OneWeatherAdversarial | ScenarioKind::AllWeatherAdversarial)
    }

    pub fn all_weathers(self) -> bool {
        matches!(self, ScenarioKind::AllWeatherNormal | ScenarioKind::AllWeatherAdversarial)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioKind::OneWeatherNormal => "1W-N",
            ScenarioKind::OneWeatherAdversarial => "1W-A",
            ScenarioKind::AllWeatherNormal => "AW-N",
            ScenarioKind::AllWeatherAdversarial => "AW-A",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1W-N" => Ok(ScenarioKind::OneWeatherNormal),
            "1W-A" => Ok(ScenarioKind::OneWeatherAdversarial),
            "AW-N" => Ok(ScenarioKind::AllWeatherNormal),
            "AW-A" => Ok(ScenarioKind::AllWeatherAdversarial),
            other => Err(Error::UnknownScenario(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub kind: ScenarioKind,
    #[serde(default = "default_weather")]
    pub weather: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_log_period")]
    pub log_period: f64,
}

fn default_weather() -> String {
    "ClearNoon".to_string()
}
fn default_dt() -> f64 {
    0.05
}
fn default_log_period() -> f64 {
    0.5
}

impl ScenarioConfig {
    pub fn new(kind: ScenarioKind) -> Self {
        ScenarioConfig {
            kind,
            weather: default_weather(),
            seed: 0,
            dt: default_dt(),
            log_period: default_log_period(),
        }
    }

    /// Number of simulation steps per log frame.
    pub fn steps_per_log(&self) -> Result<u64> {
        if !self.dt.is_finite() || self.dt <= 0.0 {
            return Err(Error::InvalidConfig("dt must be positive".to_string()));
        }
        let ratio = self.log_period / self.dt;
        let k = crate::math::round_half_up(ratio);
        if k < 1.0 || libm::fabs(k * self.dt - self.log_period) > 1e-9 {
            return Err(Error::InvalidConfig(
                "log period must be a positive integer multiple of dt".to_string(),
            ));
        }
        Ok(k as u64)
    }

    pub fn validate(&self) -> Result<()> {
        self.steps_per_log()?;
        crate::sensor::WeatherPreset::by_name(&self.weather)?;
        Ok(())
    }
}
