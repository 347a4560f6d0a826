//! Array exchange formats.
//!
//! JSON: `{"name": "...", "positions": [0, 1, ...]}`.
//! Plain text: whitespace-separated integer positions, `#` starts a comment.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::SensorArray;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedArray {
    pub name: String,
    pub positions: Vec<i64>,
}

impl NamedArray {
    pub fn new(name: impl Into<String>, arr: &SensorArray) -> Self {
        Self {
            name: name.into(),
            positions: arr.positions().iter().map(|&p| p as i64).collect(),
        }
    }

    /// Normalizes the stored positions into a validated array.
    pub fn to_array(&self) -> Result<SensorArray> {
        SensorArray::normalized(&self.positions)
    }
}

pub fn to_json(name: &str, arr: &SensorArray) -> Result<String> {
    Ok(serde_json::to_string(&NamedArray::new(name, arr))?)
}

pub fn from_json(s: &str) -> Result<NamedArray> {
    Ok(serde_json::from_str(s)?)
}

pub fn to_text(arr: &SensorArray) -> String {
    let mut out = arr
        .positions()
        .iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(" ");
    out.push('\n');
    out
}

pub fn from_text(s: &str) -> Result<SensorArray> {
    let positions = s
        .lines()
        .map(|line| line.split('#').next().unwrap_or(""))
        .flat_map(str::split_whitespace)
        .map(|tok| {
            tok.parse::<i64>()
                .map_err(|_| Error::Parse(format!("'{tok}' is not an integer position")))
        })
        .collect::<Result<Vec<_>>>()?;
    SensorArray::normalized(&positions)
}

/// Reads either format; content starting with `{` is treated as JSON.
pub fn parse_array(s: &str) -> Result<SensorArray> {
    if s.trim_start().starts_with('{') {
        from_json(s)?.to_array()
    } else {
        from_text(s)
    }
}

pub fn read_array(path: &Path) -> Result<SensorArray> {
    parse_array(&fs::read_to_string(path)?)
}
