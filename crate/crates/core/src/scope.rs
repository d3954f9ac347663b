//! Textual scope descriptors: `rows:1..K`, `indices:0..N`, `ids:a;b;c`, `all`.
//! Ranges are inclusive at both ends (`1..K` and `1..=K` mean the same).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{VertexId, WeightedGraph};
use crate::zoo::TriangularGraph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scope {
    Rows(u32, u32),
    Indices(u64, u64),
    Ids(Vec<VertexId>),
    All,
}

fn range<T: FromStr>(s: &str) -> Option<(T, T)> {
    let (a, b) = s.split_once("..")?;
    let b = b.strip_prefix('=').unwrap_or(b);
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

impl FromStr for Scope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::config(format!("cannot parse scope {s:?}; expected rows:A..B, indices:A..B, ids:x;y;.. or all"));
        let s = s.trim();
        if s == "all" {
            return Ok(Scope::All);
        }
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "rows" => {
                let (a, b) = range::<u32>(rest).ok_or_else(bad)?;
                if a == 0 || a > b {
                    return Err(bad());
                }
                Ok(Scope::Rows(a, b))
            }
            "indices" => {
                let (a, b) = range::<u64>(rest).ok_or_else(bad)?;
                if a > b {
                    return Err(bad());
                }
                Ok(Scope::Indices(a, b))
            }
            "ids" => {
                let ids: Vec<VertexId> = rest.split(';').filter(|t| !t.trim().is_empty()).map(|t| t.parse().unwrap()).collect();
                if ids.is_empty() {
                    return Err(bad());
                }
                Ok(Scope::Ids(ids))
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scope::Rows(a, b) => write!(f, "rows:{a}..{b}"),
            Scope::Indices(a, b) => write!(f, "indices:{a}..{b}"),
            Scope::Ids(ids) => {
                f.write_str("ids:")?;
                for (i, x) in ids.iter().enumerate() {
                    if i > 0 {
                        f.write_str(";")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
            Scope::All => f.write_str("all"),
        }
    }
}

impl Serialize for Scope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Scope {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

impl Scope {
    /// The vertices of the scope, each checked to belong to `g`.
    pub fn resolve<G: WeightedGraph + ?Sized>(&self, g: &G) -> Result<Vec<VertexId>> {
        let vs = match self {
            Scope::Rows(a, b) => TriangularGraph::rows_range(*a, *b),
            Scope::Indices(a, b) => (*a..=*b).map(VertexId::Index).collect(),
            Scope::Ids(ids) => ids.clone(),
            Scope::All => g.vertices().ok_or_else(|| Error::config(format!("scope 'all' needs a finite graph, got {}", g.describe())))?,
        };
        if let Some(x) = vs.iter().find(|x| !g.contains(x)) {
            return Err(Error::UnknownVertex(x.clone()));
        }
        Ok(vs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints() {
        for s in ["rows:1..30", "indices:0..9", "ids:1,1;2,2;a", "all"] {
            assert_eq!(s.parse::<Scope>().unwrap().to_string(), s);
        }
        assert_eq!("rows:1..=5".parse::<Scope>().unwrap(), Scope::Rows(1, 5));
        for bad in ["rows:0..3", "rows:4..2", "cols:1..2", "ids:", "rows:x..2"] {
            assert!(bad.parse::<Scope>().is_err(), "{bad}");
        }
    }

    #[test]
    fn resolves_rows() {
        let g = TriangularGraph::truncated(4);
        assert_eq!(Scope::Rows(1, 3).resolve(&g).unwrap().len(), 6);
        assert_eq!(Scope::All.resolve(&g).unwrap().len(), 10);
        assert!(Scope::Rows(1, 5).resolve(&g).is_err());
        assert!(Scope::All.resolve(&TriangularGraph::infinite()).is_err());
    }
}
