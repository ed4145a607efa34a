//! Vertex identifiers shared by every oracle.
//!
//! Base vertices carry up to four integer coordinates. Decoration segments
//! use `Seg { n, k }` for the vertex at position `k` of the segment hung at
//! `x_{n²}`; position 0 is never stored since it coincides with that base
//! vertex. Bounded-degree gadgets produced by cubicalization use `Gadget`.
//!
//! The derived order (Base < Seg < Gadget, lexicographic inside each
//! variant) is the tie-break used by every deterministic algorithm here.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const MAX_COORDS: usize = 4;

#[derive(Clone, Copy)]
pub struct Coords {
    len: u8,
    vals: [i64; MAX_COORDS],
}

impl Coords {
    pub fn new(values: &[i64]) -> Result<Self> {
        if values.is_empty() || values.len() > MAX_COORDS {
            return Err(Error::Precondition(format!(
                "coordinate tuples need 1..={MAX_COORDS} entries, got {}",
                values.len()
            )));
        }
        let mut vals = [0; MAX_COORDS];
        vals[..values.len()].copy_from_slice(values);
        Ok(Coords {
            len: values.len() as u8,
            vals,
        })
    }

    /// Panics on an empty or over-long slice; for literals known to be valid.
    pub fn of(values: &[i64]) -> Self {
        Self::new(values).expect("valid coordinate tuple")
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.vals[..self.len as usize]
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> i64 {
        self.as_slice()[i]
    }

    pub fn with(&self, i: usize, value: i64) -> Self {
        let mut out = *self;
        out.vals[i] = value;
        out
    }
}

impl PartialEq for Coords {
    fn eq(&self, other: &Self) -> bool {
        self.as_slice() == other.as_slice()
    }
}

impl Eq for Coords {}

impl Hash for Coords {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.as_slice().hash(state)
    }
}

impl PartialOrd for Coords {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Coords {
    fn cmp(&self, other: &Self) -> Ordering {
        self.as_slice().cmp(other.as_slice())
    }
}

impl fmt::Debug for Coords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.as_slice())
    }
}

impl fmt::Display for Coords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.as_slice().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for Coords {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let vals = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|e| Error::parse("coordinates", s, e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Coords::new(&vals).map_err(|e| Error::parse("coordinates", s, e.to_string()))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexId {
    Base(Coords),
    Seg { n: u64, k: u64 },
    Gadget { base: Coords, port: u8 },
}

impl VertexId {
    pub fn base(values: &[i64]) -> Self {
        VertexId::Base(Coords::of(values))
    }

    pub fn int(x: i64) -> Self {
        VertexId::Base(Coords::of(&[x]))
    }

    pub fn is_base(&self) -> bool {
        matches!(self, VertexId::Base(_))
    }

    pub fn coords(&self) -> Option<&Coords> {
        match self {
            VertexId::Base(c) => Some(c),
            _ => None,
        }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexId::Base(c) => write!(f, "b:{c}"),
            VertexId::Seg { n, k } => write!(f, "s:{n}:{k}"),
            VertexId::Gadget { base, port } => write!(f, "g:{base}:{port}"),
        }
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for VertexId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: &str| Error::parse("vertex id", s, reason);
        let (tag, rest) = s.split_once(':').ok_or_else(|| bad("missing tag"))?;
        match tag {
            "b" => Ok(VertexId::Base(rest.parse()?)),
            "s" => {
                let (n, k) = rest.split_once(':').ok_or_else(|| bad("expected s:n:k"))?;
                let n = n.parse().map_err(|_| bad("segment index"))?;
                let k = k.parse().map_err(|_| bad("segment position"))?;
                if n == 0 || k == 0 {
                    return Err(bad("segment vertices have n >= 1 and k >= 1"));
                }
                Ok(VertexId::Seg { n, k })
            }
            "g" => {
                let (base, port) = rest
                    .rsplit_once(':')
                    .ok_or_else(|| bad("expected g:coords:port"))?;
                Ok(VertexId::Gadget {
                    base: base.parse()?,
                    port: port.parse().map_err(|_| bad("port"))?,
                })
            }
            _ => Err(bad("unknown tag")),
        }
    }
}

impl Serialize for VertexId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for VertexId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
