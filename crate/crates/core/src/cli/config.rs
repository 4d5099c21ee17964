//! Run configuration files (TOML).
//!
//! ```toml
//! track = "all"
//! seed = 7
//! samples = 20000
//! output_path = "report.json"
//! output_format = "json"
//!
//! # "canonical", four coplanar angles in degrees, or a table whose entries
//! # are either 3-component vectors or coplanar angles in degrees
//! [configuration]
//! a = [1.0, 0.0, 0.0]
//! a_prime = 90.0
//! b = 225.0
//! b_prime = [-0.7071067811865476, 0.7071067811865476, 0.0]
//!
//! [coefficients]
//! alpha_a = 1.0
//! alpha_a_prime = 1.0
//! alpha_b = 1.0
//! alpha_b_prime = 1.0
//!
//! [[lhv_model.states]]
//! weight = 1.0
//! responses = [1.0, 1.0, 1.0, 1.0]
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::configuration::Configuration;
use crate::ga::UnitVector3;
use crate::ga_values::FCoefficients;
use crate::lhv::LhvModel;

use super::{CliError, OutputFormat, TrackSelection};

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub track: Option<TrackSelection>,
    pub configuration: Option<ConfigurationSpec>,
    pub coefficients: Option<FCoefficients>,
    pub lhv_model: Option<LhvModel>,
    pub seed: Option<u64>,
    pub samples: Option<u64>,
    pub output_path: Option<PathBuf>,
    pub output_format: Option<OutputFormat>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ConfigurationSpec {
    Named(String),
    /// Coplanar angles in degrees for `a, a′, b, b′`.
    AngleList([f64; 4]),
    Explicit {
        a: DirectionSpec,
        a_prime: DirectionSpec,
        b: DirectionSpec,
        b_prime: DirectionSpec,
    },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
pub enum DirectionSpec {
    Components([f64; 3]),
    /// Angle in degrees from e1 within the e1–e2 plane.
    Degrees(f64),
}

impl DirectionSpec {
    fn resolve(self, name: &str) -> Result<UnitVector3, CliError> {
        match self {
            DirectionSpec::Components(c) => {
                UnitVector3::try_from(c).map_err(|e| CliError::Config(format!("{name}: {e}")))
            }
            DirectionSpec::Degrees(d) if d.is_finite() => Ok(UnitVector3::in_plane(d.to_radians())),
            DirectionSpec::Degrees(d) => Err(CliError::Config(format!("{name}: angle {d} is not finite"))),
        }
    }
}

impl ConfigurationSpec {
    pub fn resolve(&self) -> Result<Configuration, CliError> {
        match self {
            ConfigurationSpec::Named(name) if name == "canonical" => Ok(Configuration::canonical()),
            ConfigurationSpec::Named(name) => Err(CliError::Config(format!(
                "unknown configuration {name:?}; expected \"canonical\""
            ))),
            ConfigurationSpec::AngleList(deg) => {
                let [a, ap, b, bp] = deg.map(DirectionSpec::Degrees);
                Ok(Configuration::new(
                    a.resolve("a")?,
                    ap.resolve("a_prime")?,
                    b.resolve("b")?,
                    bp.resolve("b_prime")?,
                ))
            }
            ConfigurationSpec::Explicit { a, a_prime, b, b_prime } => Ok(Configuration::new(
                a.resolve("a")?,
                a_prime.resolve("a_prime")?,
                b.resolve("b")?,
                b_prime.resolve("b_prime")?,
            )),
        }
    }
}
