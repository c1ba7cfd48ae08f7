//! Positional attribute boxes attached to graph nodes.

use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "t", content = "v")]
pub enum AttrValue {
    /// An identifier such as `R1` or `A4`.
    Id(String),
    /// A marker or inference marker, rendered quoted.
    Marker(String),
    /// A short code such as `p`, `D` or `Claim`.
    Symbol(String),
    /// A set of ids; rendered `φ` when empty.
    Set(Vec<String>),
    /// Not applicable (`N`).
    None,
}

impl fmt::Display for AttrValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttrValue::Id(s) | AttrValue::Symbol(s) => f.write_str(s),
            AttrValue::Marker(s) => write!(f, "\"{s}\""),
            AttrValue::Set(v) if v.is_empty() => f.write_str("φ"),
            AttrValue::Set(v) => write!(f, "{{{}}}", v.join(", ")),
            AttrValue::None => f.write_str("N"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
#[serde(transparent)]
pub struct AttributeBox(pub Vec<AttrValue>);

impl AttributeBox {
    pub fn values(&self) -> &[AttrValue] {
        &self.0
    }
}

impl fmt::Display for AttributeBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}
