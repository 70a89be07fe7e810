//! Run configuration: a small TOML file plus command-line overrides.

use rph_core::gpsp::{RuleSource, Schedule};
use rph_core::WheelDiagram;
use serde::Deserialize;
use std::path::Path;
use std::str::FromStr;

/// Configuration file contents. Every field has a default so an empty file
/// (or no file at all) is valid.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Number of substitution steps.
    #[serde(default = "default_depth")]
    pub depth: usize,
    /// Master seed for every random decision stream.
    #[serde(default)]
    pub master_seed: u64,
    /// Interior clip factor applied before statistics, in (0, 1].
    #[serde(default = "default_clip")]
    pub clip: f64,
    /// Grid step for perpendicular-space area and boundary estimates.
    #[serde(default = "default_grid_step")]
    pub grid_step: f64,
    /// Schedule entries: 10-character wheel strings over {L,R}, or
    /// `RANDOM(pl,pr,pm,pm')` for per-rhombus random rules.
    #[serde(default = "default_schedule")]
    pub schedule: Vec<String>,
    /// Empirical-symmetry Hausdorff tolerance as a fraction of the cloud
    /// diameter.
    #[serde(default = "default_symmetry_tolerance")]
    pub symmetry_tolerance: f64,
}

fn default_depth() -> usize {
    4
}
fn default_clip() -> f64 {
    rph_core::stats::DEFAULT_CLIP
}
fn default_grid_step() -> f64 {
    0.02
}
fn default_schedule() -> Vec<String> {
    vec!["LLLLLLLLLL".to_string()]
}
fn default_symmetry_tolerance() -> f64 {
    0.04
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            depth: default_depth(),
            master_seed: 0,
            clip: default_clip(),
            grid_step: default_grid_step(),
            schedule: default_schedule(),
            symmetry_tolerance: default_symmetry_tolerance(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let cfg: RunConfig =
            toml::from_str(&text).map_err(|e| format!("malformed config: {e}"))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.depth > 12 {
            return Err(format!("depth {} out of range (max 12)", self.depth));
        }
        if !(self.clip > 0.0 && self.clip <= 1.0) {
            return Err(format!("clip {} out of range (0, 1]", self.clip));
        }
        if !(self.grid_step > 0.0 && self.grid_step <= 0.5) {
            return Err(format!("grid_step {} out of range (0, 0.5]", self.grid_step));
        }
        if !(self.symmetry_tolerance > 0.0 && self.symmetry_tolerance < 1.0) {
            return Err(format!(
                "symmetry_tolerance {} out of range (0, 1)",
                self.symmetry_tolerance
            ));
        }
        if self.schedule.is_empty() {
            return Err("schedule must be nonempty".into());
        }
        for s in &self.schedule {
            parse_entry(s)?;
        }
        Ok(())
    }

    pub fn schedule(&self) -> Result<Schedule, String> {
        let entries: Result<Vec<RuleSource>, String> =
            self.schedule.iter().map(|s| parse_entry(s)).collect();
        Schedule::new(entries?).map_err(|e| e.to_string())
    }
}

/// Parse one schedule entry: a wheel string or `RANDOM(pl,pr,pm,pm')`.
pub fn parse_entry(s: &str) -> Result<RuleSource, String> {
    let trimmed = s.trim();
    if let Some(rest) = trimmed
        .strip_prefix("RANDOM(")
        .and_then(|r| r.strip_suffix(')'))
    {
        let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(format!("RANDOM entry needs 4 weights: {s:?}"));
        }
        let mut weights = [0.0f64; 4];
        for (w, p) in weights.iter_mut().zip(&parts) {
            *w = p
                .parse()
                .map_err(|e| format!("bad weight {p:?} in {s:?}: {e}"))?;
            if !w.is_finite() || *w < 0.0 {
                return Err(format!("weights must be finite and nonnegative: {s:?}"));
            }
        }
        if weights.iter().sum::<f64>() <= 0.0 {
            return Err(format!("weights must not all be zero: {s:?}"));
        }
        return Ok(RuleSource::Random { weights });
    }
    WheelDiagram::from_str(trimmed)
        .map(RuleSource::Wheel)
        .map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let cfg = RunConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.schedule().unwrap().entries().len(), 1);
    }

    #[test]
    fn random_entry_parses() {
        match parse_entry("RANDOM(0.25, 0.25, 0.25, 0.25)").unwrap() {
            RuleSource::Random { weights } => assert_eq!(weights, [0.25; 4]),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_entry("RANDOM(1,2,3)").is_err());
        assert!(parse_entry("RANDOM(1,2,3,-1)").is_err());
        assert!(parse_entry("LRLRLRLRL").is_err());
        assert!(parse_entry("LRLRLRLRLX").is_err());
    }
}
