use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Vertex label.
///
/// The canonical string form is `"n"` for [`VertexId::Index`], `"k,j"` for
/// [`VertexId::Cell`] and the raw text otherwise; [`FromStr`] inverts it, so
/// graph files may refer to row-structured vertices as `"3,2"`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexId {
    Index(u64),
    /// Row `k` (1-based), position `j` within the row (1-based).
    Cell(u32, u32),
    Label(Arc<str>),
}

impl VertexId {
    pub fn label(s: &str) -> Self {
        VertexId::Label(Arc::from(s))
    }

    pub fn row(&self) -> Option<u32> {
        match self {
            VertexId::Cell(k, _) => Some(*k),
            _ => None,
        }
    }
}

impl From<u64> for VertexId {
    fn from(n: u64) -> Self {
        VertexId::Index(n)
    }
}

impl From<(u32, u32)> for VertexId {
    fn from((k, j): (u32, u32)) -> Self {
        VertexId::Cell(k, j)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexId::Index(n) => write!(f, "{n}"),
            VertexId::Cell(k, j) => write!(f, "{k},{j}"),
            VertexId::Label(s) => f.write_str(s),
        }
    }
}

impl FromStr for VertexId {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Ok(n) = s.parse::<u64>() {
            return Ok(VertexId::Index(n));
        }
        if let Some((k, j)) = s.split_once(',') {
            if let (Ok(k), Ok(j)) = (k.trim().parse::<u32>(), j.trim().parse::<u32>()) {
                return Ok(VertexId::Cell(k, j));
            }
        }
        Ok(VertexId::label(s))
    }
}

impl Serialize for VertexId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for VertexId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Ok(s.parse().unwrap())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_forms() {
        assert_eq!("7".parse::<VertexId>().unwrap(), VertexId::Index(7));
        assert_eq!("3,2".parse::<VertexId>().unwrap(), VertexId::Cell(3, 2));
        assert_eq!("a".parse::<VertexId>().unwrap(), VertexId::label("a"));
        assert!(VertexId::Cell(1, 1) < VertexId::Cell(2, 1));
        assert!(VertexId::Cell(2, 1) < VertexId::Cell(2, 2));
    }

    proptest! {
        #[test]
        fn string_form_round_trips(k in 0u32..10_000, j in 0u32..10_000, n in any::<u64>(), s in "[a-z_][a-z0-9_]{0,8}") {
            for v in [VertexId::Cell(k, j), VertexId::Index(n), VertexId::label(&s)] {
                prop_assert_eq!(v.to_string().parse::<VertexId>().unwrap(), v);
            }
        }
    }
}
