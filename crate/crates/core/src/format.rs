//! Versioned JSON envelopes for every file format.
//!
//! Each top-level document carries `"format": 1` next to its own fields.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Json { line: e.line(), column: e.column(), message: e.to_string() }
    }
}

/// The `format` field; only version 1 is accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FormatVersion;

impl Serialize for FormatVersion {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u32(FORMAT_VERSION)
    }
}

impl<'de> Deserialize<'de> for FormatVersion {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = u32::deserialize(d)?;
        if v == FORMAT_VERSION {
            Ok(FormatVersion)
        } else {
            Err(serde::de::Error::custom(format!("unsupported format version {v}, expected {FORMAT_VERSION}")))
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Versioned<T> {
    pub format: FormatVersion,
    #[serde(flatten)]
    pub body: T,
}

/// Parses a versioned document, reporting line and column on failure.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T, FormatError> {
    let v: Versioned<T> = serde_json::from_str(text)?;
    Ok(v.body)
}

/// Serializes `body` as a pretty-printed versioned document.
pub fn render<T: Serialize>(body: &T) -> String {
    serde_json::to_string_pretty(&Versioned { format: FormatVersion, body }).expect("serializable")
}
