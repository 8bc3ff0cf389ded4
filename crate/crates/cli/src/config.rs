use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::Context;
use ctqw_core::spin::NoiseModel;
use ctqw_core::SpinSystem;

/// Bad flags, config entries or argument values; exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage<T>(msg: impl Into<String>) -> Result<T, UsageError> {
    Err(UsageError(msg.into()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Jump rate for the theory sweeps.
    pub gamma: f64,
    pub n_nodes: usize,
    pub j_hz: f64,
    pub t2_proton: f64,
    pub t2_carbon: f64,
    pub grid_points: usize,
    pub noise: bool,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            gamma: 1.0,
            n_nodes: 4,
            j_hz: 215.0,
            t2_proton: 0.4,
            t2_carbon: 0.3,
            grid_points: 200,
            noise: true,
            output_dir: PathBuf::from("."),
        }
    }
}

pub fn parse_switch(value: &str) -> Result<bool, UsageError> {
    match value.to_ascii_lowercase().as_str() {
        "on" | "true" | "yes" | "1" => Ok(true),
        "off" | "false" | "no" | "0" => Ok(false),
        _ => usage(format!("expected on or off, got {value:?}")),
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, UsageError> {
    value
        .parse()
        .or_else(|_| usage(format!("{key}: cannot parse {value:?}")))
}

impl RunConfig {
    /// Parses `key = value` lines over the defaults. Blank lines and `#`
    /// comments are skipped.
    pub fn parse(text: &str) -> Result<Self, UsageError> {
        let mut cfg = Self::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return usage(format!("line {}: expected key = value", lineno + 1));
            };
            cfg.set(key.trim(), value.trim())
                .map_err(|e| UsageError(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        Self::parse(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())).into())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), UsageError> {
        match key {
            "gamma" => self.gamma = parse_num(key, value)?,
            "n_nodes" => self.n_nodes = parse_num(key, value)?,
            "j_hz" => self.j_hz = parse_num(key, value)?,
            "t2_proton" => self.t2_proton = parse_num(key, value)?,
            "t2_carbon" => self.t2_carbon = parse_num(key, value)?,
            "grid_points" => self.grid_points = parse_num(key, value)?,
            "noise" => self.noise = parse_switch(value)?,
            "output_dir" => self.output_dir = PathBuf::from(value),
            _ => return usage(format!("unknown key {key:?}")),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), UsageError> {
        for (name, x) in [
            ("gamma", self.gamma),
            ("j_hz", self.j_hz),
            ("t2_proton", self.t2_proton),
            ("t2_carbon", self.t2_carbon),
        ] {
            if !(x > 0.0 && x.is_finite()) {
                return usage(format!("{name} must be positive and finite, got {x}"));
            }
        }
        if self.n_nodes < 3 {
            return usage(format!("n_nodes must be at least 3, got {}", self.n_nodes));
        }
        if self.grid_points < 2 {
            return usage(format!(
                "grid_points must be at least 2, got {}",
                self.grid_points
            ));
        }
        Ok(())
    }

    pub fn spin_system(&self) -> SpinSystem {
        SpinSystem::new(self.j_hz, self.t2_proton, self.t2_carbon).expect("validated config")
    }

    pub fn noise_model(&self) -> NoiseModel {
        NoiseModel {
            enabled: self.noise,
        }
    }
}
