//! Flat key-value config files.
//!
//! One assignment per line, `key = value`, with `#` comments and blank
//! lines ignored. Recognized keys are exactly the [`ProtocolConfig`]
//! fields: `p1, p2, theta, eta, m, g, cutoff, seed`. Values given here
//! override the defaults; command-line flags override both.

use std::path::Path;

use crate::error::{Error, Result};
use crate::protocol::ProtocolConfig;

/// Partial parameter assignment; unset fields fall through to the base.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PartialConfig {
    pub p1: Option<f64>,
    pub p2: Option<f64>,
    pub theta: Option<f64>,
    pub eta: Option<f64>,
    pub m: Option<u32>,
    pub g: Option<f64>,
    pub cutoff: Option<usize>,
    pub seed: Option<u64>,
}

impl PartialConfig {
    /// Parse the flat key-value dialect. Unknown keys and malformed values
    /// are errors, reported with their line number.
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            let bad = |what: &str| {
                Error::Config(format!(
                    "line {}: `{value}` is not a valid {what} for `{key}`",
                    lineno + 1
                ))
            };
            match key {
                "p1" => out.p1 = Some(value.parse().map_err(|_| bad("number"))?),
                "p2" => out.p2 = Some(value.parse().map_err(|_| bad("number"))?),
                "theta" => out.theta = Some(value.parse().map_err(|_| bad("number"))?),
                "eta" => out.eta = Some(value.parse().map_err(|_| bad("number"))?),
                "m" => out.m = Some(value.parse().map_err(|_| bad("integer"))?),
                "g" => out.g = Some(value.parse().map_err(|_| bad("number"))?),
                "cutoff" => out.cutoff = Some(value.parse().map_err(|_| bad("integer"))?),
                "seed" => out.seed = Some(value.parse().map_err(|_| bad("integer"))?),
                other => {
                    return Err(Error::Config(format!(
                        "line {}: unknown key `{other}`",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(out)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Overlay the set fields onto a base configuration.
    pub fn apply(&self, base: ProtocolConfig) -> ProtocolConfig {
        ProtocolConfig {
            p1: self.p1.unwrap_or(base.p1),
            p2: self.p2.unwrap_or(base.p2),
            theta: self.theta.unwrap_or(base.theta),
            eta: self.eta.unwrap_or(base.eta),
            m: self.m.unwrap_or(base.m),
            g: self.g.unwrap_or(base.g),
            cutoff: self.cutoff.unwrap_or(base.cutoff),
            seed: self.seed.unwrap_or(base.seed),
        }
    }

    /// Overlay another partial assignment on top of this one.
    pub fn merged_with(&self, over: &PartialConfig) -> PartialConfig {
        PartialConfig {
            p1: over.p1.or(self.p1),
            p2: over.p2.or(self.p2),
            theta: over.theta.or(self.theta),
            eta: over.eta.or(self.eta),
            m: over.m.or(self.m),
            g: over.g.or(self.g),
            cutoff: over.cutoff.or(self.cutoff),
            seed: over.seed.or(self.seed),
        }
    }
}
