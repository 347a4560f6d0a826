use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{
    generate_proposed, generate_reference, ProposedFamily, ProposedKind, ReferenceFamily,
    ReferenceKind, SensorArray,
};
use crate::error::{Error, Result};

/// Any generable array family, keyed by a stable kebab-case identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ArrayFamily {
    Proposed(ProposedKind),
    Reference(ReferenceKind),
}

impl ArrayFamily {
    /// Every family, proposed kinds first.
    pub fn all() -> Vec<ArrayFamily> {
        ProposedKind::ALL
            .iter()
            .map(|&k| ArrayFamily::Proposed(k))
            .chain(
                ReferenceKind::ALL
                    .iter()
                    .map(|&k| ArrayFamily::Reference(k)),
            )
            .collect()
    }

    /// The six arrays of the coupling and DOA comparison, in comparison order.
    pub fn comparison_set() -> [ArrayFamily; 6] {
        [
            ArrayFamily::Reference(ReferenceKind::Type93FourRPlus3),
            ArrayFamily::Reference(ReferenceKind::Type93FourR),
            ArrayFamily::Reference(ReferenceKind::Type10FourR),
            ArrayFamily::Reference(ReferenceKind::SuperNested),
            ArrayFamily::Reference(ReferenceKind::Misc),
            ArrayFamily::Proposed(ProposedKind::FourRType1),
        ]
    }

    pub fn id(self) -> &'static str {
        match self {
            ArrayFamily::Proposed(k) => k.id(),
            ArrayFamily::Reference(k) => k.id(),
        }
    }

    pub fn from_id(id: &str) -> Result<Self> {
        let id = id.trim().to_ascii_lowercase();
        Self::all()
            .into_iter()
            .find(|f| f.id() == id)
            .ok_or(Error::UnknownFamily(id))
    }

    pub fn generate(self, n: usize) -> Result<SensorArray> {
        match self {
            ArrayFamily::Proposed(kind) => Ok(generate_proposed(&ProposedFamily::new(kind, n)?)),
            ArrayFamily::Reference(kind) => generate_reference(&ReferenceFamily::new(kind, n)?),
        }
    }

    pub fn supports(self, n: usize) -> bool {
        match self {
            ArrayFamily::Proposed(kind) => ProposedFamily::new(kind, n).is_ok(),
            ArrayFamily::Reference(kind) => ReferenceFamily::new(kind, n).is_ok(),
        }
    }
}

impl fmt::Display for ArrayFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for ArrayFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_id(s)
    }
}

impl TryFrom<String> for ArrayFamily {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        Self::from_id(&s)
    }
}

impl From<ArrayFamily> for String {
    fn from(f: ArrayFamily) -> Self {
        f.id().to_string()
    }
}
