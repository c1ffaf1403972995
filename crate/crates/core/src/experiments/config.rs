use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::pipeline::PipelineOptions;
use crate::bounds::BoundSettings;
use crate::error::{NepError, Result};
use crate::linalg::C64;
use crate::solver::Selection;

/// Ritz value selection as configured: `oracle` uses the known `lambda*`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum SelectionMode {
    #[default]
    Oracle,
    Target(C64),
}

impl SelectionMode {
    pub fn resolve(&self, lambda_star: C64) -> Selection {
        match self {
            Self::Oracle => Selection::Oracle(lambda_star),
            Self::Target(tau) => Selection::Target(*tau),
        }
    }
}

/// Parses `1.5`, `-2i`, `0.1+0.2i`, `1e-3-4e-2i`.
pub fn parse_complex(s: &str) -> Result<C64> {
    let s = s.trim();
    let bad = || NepError::InvalidInput(format!("cannot parse complex number '{s}'"));
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| C64::new(re, 0.0)).map_err(|_| bad());
    };
    // Split at the last sign that is not the leading one or part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |t: &str| -> Result<f64> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => t.parse::<f64>().map_err(|_| bad()),
        }
    };
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| bad())?;
            Ok(C64::new(re, imag(&body[k..])?))
        }
        None => Ok(C64::new(0.0, imag(body)?)),
    }
}

impl FromStr for SelectionMode {
    type Err = NepError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "oracle" {
            return Ok(Self::Oracle);
        }
        match s.strip_prefix("target=") {
            Some(v) => Ok(Self::Target(parse_complex(v)?)),
            None => Err(NepError::InvalidInput(format!(
                "selection '{s}' is neither 'oracle' nor 'target=<complex>'"
            ))),
        }
    }
}

impl fmt::Display for SelectionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Oracle => f.write_str("oracle"),
            Self::Target(z) if z.im == 0.0 => write!(f, "target={}", z.re),
            Self::Target(z) => write!(f, "target={}{:+}i", z.re, z.im),
        }
    }
}

impl Serialize for SelectionMode {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SelectionMode {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Every knob the command line exposes; a JSON config file uses the same keys.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Base seed; per-trial seeds derive from it.
    pub seed: u64,
    pub selection: SelectionMode,
    /// Multiplier on the dropped quadratic terms.
    pub slack: f64,
    pub tau_deriv: f64,
    /// Perturbation level for the demonstration subspace.
    pub sigma: f64,
    /// Number of perturbation seeds.
    pub seeds: usize,
    pub epsilon_list: Vec<f64>,
    pub trials: usize,
    /// Defaults to `min(3, n - 1)`.
    pub subspace_dim: Option<usize>,
    pub problem_path: Option<PathBuf>,
    pub output_dir: Option<PathBuf>,
    /// Radius of the disc searched for Ritz values around the selection anchor.
    pub region_radius: f64,
    /// Run the first demonstration with `W = I`.
    pub full_space: bool,
    /// `builtin` or a path to a suite file.
    pub suite: String,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            selection: SelectionMode::Oracle,
            slack: 10.0,
            tau_deriv: 1e-2,
            sigma: 1e-4,
            seeds: 20,
            epsilon_list: vec![1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8],
            trials: 5,
            subspace_dim: None,
            problem_path: None,
            output_dir: None,
            region_radius: 0.5,
            full_space: false,
            suite: "builtin".into(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(text).map_err(|e| NepError::Format(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(NepError::InvalidInput(m));
        if let Some(e) = self.epsilon_list.iter().find(|e| !(**e > 0.0 && **e < 1.0)) {
            return bad(format!("epsilon {e} outside (0, 1)"));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return bad(format!("sigma {} must be non-negative", self.sigma));
        }
        if !(self.slack >= 0.0 && self.slack.is_finite()) {
            return bad(format!("slack {} must be non-negative", self.slack));
        }
        if !(self.tau_deriv > 0.0 && self.tau_deriv < 1.0) {
            return bad(format!("tau_deriv {} outside (0, 1)", self.tau_deriv));
        }
        if !(self.region_radius > 0.0 && self.region_radius.is_finite()) {
            return bad(format!("region_radius {} must be positive", self.region_radius));
        }
        if self.trials == 0 || self.seeds == 0 {
            return bad("trials and seeds must be at least 1".into());
        }
        if self.subspace_dim == Some(0) {
            return bad("subspace_dim must be at least 1".into());
        }
        Ok(())
    }

    pub fn pipeline_options(&self) -> PipelineOptions {
        let mut bounds = BoundSettings {
            slack_factor: self.slack,
            ..BoundSettings::default()
        };
        bounds.profile.tau_deriv = self.tau_deriv;
        PipelineOptions {
            selection: self.selection,
            region_radius: self.region_radius,
            bounds,
            ..PipelineOptions::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("-0.9").unwrap(), C64::new(-0.9, 0.0));
        assert_eq!(parse_complex("2i").unwrap(), C64::new(0.0, 2.0));
        assert_eq!(parse_complex("-i").unwrap(), C64::new(0.0, -1.0));
        assert_eq!(parse_complex("0.1+0.2i").unwrap(), C64::new(0.1, 0.2));
        assert_eq!(parse_complex("1e-3-4e-2i").unwrap(), C64::new(1e-3, -4e-2));
        assert_eq!(parse_complex("-1e+2+1i").unwrap(), C64::new(-100.0, 1.0));
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn selection_round_trip() {
        for s in ["oracle", "target=-0.9", "target=0.5-0.25i"] {
            let m: SelectionMode = s.parse().unwrap();
            assert_eq!(m.to_string(), s);
        }
        assert!("nearest".parse::<SelectionMode>().is_err());
    }

    #[test]
    fn config_file_overrides_defaults() {
        let c = ExperimentConfig::from_json(r#"{"seed": 7, "selection": "target=-0.9", "slack": 0.0}"#).unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.selection, SelectionMode::Target(C64::new(-0.9, 0.0)));
        assert_eq!(c.trials, 5);
        assert!(ExperimentConfig::from_json(r#"{"sede": 7}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"epsilon_list": [1.5]}"#).is_err());
        let back: ExperimentConfig = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
    }
}
