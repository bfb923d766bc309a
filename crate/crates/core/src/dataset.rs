//! Failure-time datasets: text parsing and the bundled air-conditioning data.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Failure times (hours) of an airplane air-conditioning system, 30 units.
pub const AIRCON: [f64; 30] = [
    1.0, 3.0, 5.0, 7.0, 11.0, 11.0, 11.0, 12.0, 14.0, 14.0, 14.0, 16.0, 16.0, 20.0, 21.0, 23.0,
    42.0, 47.0, 52.0, 62.0, 71.0, 71.0, 87.0, 90.0, 95.0, 120.0, 120.0, 225.0, 246.0, 261.0,
];

/// Progressive Type-II sample drawn from [`AIRCON`] with `n = 30`, `m = 20`,
/// `R_1 = ... = R_5 = 2` and no later removals.
pub const AIRCON_PROGRESSIVE: [f64; 20] = [
    1.0, 3.0, 5.0, 7.0, 11.0, 14.0, 16.0, 20.0, 23.0, 42.0, 47.0, 52.0, 62.0, 71.0, 87.0, 90.0,
    95.0, 120.0, 225.0, 246.0,
];

/// Removal scheme that produced [`AIRCON_PROGRESSIVE`].
pub fn aircon_progressive_removals() -> Vec<usize> {
    let mut r = vec![2; 5];
    r.extend([0; 15]);
    r
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub times: Vec<f64>,
    pub label: String,
    pub source: String,
}

impl Dataset {
    pub fn bundled(name: &str) -> Result<Self> {
        let (times, label): (&[f64], &str) = match name {
            "aircon" => (&AIRCON, "air-conditioning failure times"),
            "aircon-progressive" => (
                &AIRCON_PROGRESSIVE,
                "air-conditioning progressive Type-II sample (n=30, m=20)",
            ),
            other => {
                return Err(Error::domain(format!(
                    "unknown bundled dataset '{other}' (known: aircon, aircon-progressive)"
                )))
            }
        };
        Ok(Self {
            times: times.to_vec(),
            label: label.to_string(),
            source: format!("bundled:{name}"),
        })
    }

    /// Parses values separated by commas, whitespace or newlines. Lines whose
    /// first non-blank character is `#` are comments.
    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let mut times = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            if line.trim_start().starts_with('#') {
                continue;
            }
            let mut col = 0;
            for piece in line.split(',') {
                let mut offset = 0;
                for token in piece.split_whitespace() {
                    let start = piece[offset..].find(token).unwrap() + offset;
                    offset = start + token.len();
                    let column = col + start + 1;
                    let value: f64 = token.parse().map_err(|_| Error::Parse {
                        line: lineno + 1,
                        column,
                        message: format!("'{token}' is not a number"),
                    })?;
                    if !value.is_finite() || value <= 0.0 {
                        return Err(Error::Parse {
                            line: lineno + 1,
                            column,
                            message: format!("failure time must be finite and > 0, got {token}"),
                        });
                    }
                    times.push(value);
                }
                col += piece.len() + 1;
            }
        }
        if times.is_empty() {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                message: "no failure times found".into(),
            });
        }
        Ok(Self {
            times,
            label: source.to_string(),
            source: source.to_string(),
        })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, &path.display().to_string())
    }
}

/// Loads `bundled:<name>` or a file path.
pub fn load_dataset(spec: &str) -> Result<Dataset> {
    match spec.strip_prefix("bundled:") {
        Some(name) => Dataset::bundled(name),
        None => Dataset::from_path(Path::new(spec)),
    }
}
