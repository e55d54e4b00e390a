//! Built-in transfer parameters per scale factor and upscaler.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::guided::FilterParams;
use crate::resample::ScaleFactor;

/// Regularization used for every built-in entry (`0.1^4`).
pub const DEFAULT_EPSILON: f64 = 1e-4;

/// Where the approximated image comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Upscaler {
    /// In-tree bicubic interpolation.
    Bicubic,
    /// An externally produced approximation (e.g. a VDSR-style network output).
    External,
}

impl fmt::Display for Upscaler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Upscaler::Bicubic => "bicubic",
            Upscaler::External => "external",
        })
    }
}

impl FromStr for Upscaler {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bicubic" => Ok(Upscaler::Bicubic),
            "external" => Ok(Upscaler::External),
            other => Err(Error::InvalidParams(format!(
                "unknown upscaler '{other}' (expected bicubic or external)"
            ))),
        }
    }
}

/// Radius lookup keyed by `(scale, upscaler)` with one shared epsilon.
#[derive(Debug, Clone)]
pub struct ParamTable {
    entries: Vec<(usize, Upscaler, usize)>,
    epsilon: f64,
}

impl Default for ParamTable {
    fn default() -> Self {
        use Upscaler::*;
        Self {
            entries: vec![
                (2, Bicubic, 1),
                (3, Bicubic, 3),
                (4, Bicubic, 6),
                (8, Bicubic, 15),
                (2, External, 2),
                (3, External, 3),
                (4, External, 4),
                (8, External, 15),
            ],
            epsilon: DEFAULT_EPSILON,
        }
    }
}

impl ParamTable {
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn entries(&self) -> impl Iterator<Item = (ScaleFactor, Upscaler, usize)> + '_ {
        self.entries.iter().map(|&(s, u, r)| {
            (
                ScaleFactor::uniform(s).expect("table scales are >= 2"),
                u,
                r,
            )
        })
    }

    pub fn lookup(&self, scale: ScaleFactor, upscaler: Upscaler) -> Result<FilterParams> {
        let radius = (scale.sx() == scale.sy())
            .then(|| {
                self.entries
                    .iter()
                    .find(|&&(s, u, _)| s == scale.sx() && u == upscaler)
                    .map(|&(_, _, r)| r)
            })
            .flatten()
            .ok_or_else(|| Error::UnsupportedScale {
                scale: scale.to_string(),
                upscaler: upscaler.to_string(),
            })?;
        FilterParams::new(radius, self.epsilon)
    }
}

/// Built-in radius and epsilon for a scale factor and upscaler.
pub fn lookup_params(scale: ScaleFactor, upscaler: Upscaler) -> Result<FilterParams> {
    ParamTable::default().lookup(scale, upscaler)
}
