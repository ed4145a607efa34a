//! Example graphs: integer lattices, regular trees, the cone in the plane
//! and the ladder, plus the finite interval and tripod shapes.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::decorate::AxisLabeling;
use crate::error::{Error, Result};
use crate::graph::{Cone, FiniteMetric, GraphOracle};
use crate::vertex::{Coords, VertexId};

fn base_coords<'a>(v: &'a VertexId, len: usize, graph: &str) -> Result<&'a Coords> {
    match v {
        VertexId::Base(c) if c.len() == len => Ok(c),
        _ => Err(Error::InvalidVertex {
            vertex: *v,
            reason: format!("{graph} vertices are base vertices with {len} coordinates"),
        }),
    }
}

/// Cayley graph of `Z^d` with the standard symmetric generators.
#[derive(Clone, Debug)]
pub struct Grid {
    dim: usize,
}

pub fn make_grid(d: usize) -> Result<Grid> {
    if !(1..=4).contains(&d) {
        return Err(Error::Precondition(format!(
            "grid dimension must be in 1..=4, got {d}"
        )));
    }
    Ok(Grid { dim: d })
}

impl Grid {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `x_n = (n, 0, ..., 0)`.
    pub fn labeling(&self) -> AxisLabeling {
        AxisLabeling::new(Coords::new(&vec![0; self.dim]).unwrap(), 0)
    }
}

impl GraphOracle for Grid {
    fn name(&self) -> String {
        format!("grid:{}", self.dim)
    }

    fn basepoint(&self) -> VertexId {
        VertexId::Base(Coords::new(&vec![0; self.dim]).unwrap())
    }

    fn degree_bound(&self) -> usize {
        2 * self.dim
    }

    fn neighbors(&self, v: &VertexId) -> Result<Vec<VertexId>> {
        let c = base_coords(v, self.dim, "grid")?;
        let mut out = Vec::with_capacity(2 * self.dim);
        for i in 0..self.dim {
            out.push(VertexId::Base(c.with(i, c.get(i) - 1)));
            out.push(VertexId::Base(c.with(i, c.get(i) + 1)));
        }
        out.sort_unstable();
        Ok(out)
    }
}

/// The `q`-regular tree, laid out around a bi-infinite spine.
///
/// A vertex is `(s, depth, hi, lo)`: `s` is the spine position it hangs
/// from, `depth` its distance from the spine, and `hi:lo` the 128-bit code
/// of its branch (first digit base `q - 2`, the rest base `q - 1`). Spine
/// vertices have depth 0 and code 0.
#[derive(Clone, Debug)]
pub struct Tree {
    q: u32,
}

pub fn make_tree(q: u32) -> Result<Tree> {
    if !(3..=6).contains(&q) {
        return Err(Error::Precondition(format!(
            "tree degree must be in 3..=6, got {q}"
        )));
    }
    Ok(Tree { q })
}

impl Tree {
    pub fn degree(&self) -> u32 {
        self.q
    }

    /// `x_n` is spine vertex `n`.
    pub fn labeling(&self) -> AxisLabeling {
        AxisLabeling::new(Coords::of(&[0, 0, 0, 0]), 0)
    }

    pub fn vertex(spine: i64, depth: i64, code: u128) -> VertexId {
        VertexId::base(&[spine, depth, (code >> 64) as u64 as i64, code as u64 as i64])
    }

    fn decode(&self, v: &VertexId) -> Result<(i64, i64, u128)> {
        let c = base_coords(v, 4, "tree")?;
        let (s, depth) = (c.get(0), c.get(1));
        let code = ((c.get(2) as u64 as u128) << 64) | c.get(3) as u64 as u128;
        let invalid = |reason: &str| Error::InvalidVertex {
            vertex: *v,
            reason: reason.to_string(),
        };
        if depth < 0 {
            return Err(invalid("negative depth"));
        }
        if depth == 0 {
            if code != 0 {
                return Err(invalid("spine vertices carry code 0"));
            }
            return Ok((s, 0, 0));
        }
        let mut limit = (self.q - 2) as u128;
        for _ in 1..depth {
            limit = limit
                .checked_mul((self.q - 1) as u128)
                .ok_or_else(|| invalid("depth beyond the encodable range"))?;
        }
        if code >= limit {
            return Err(invalid("branch code out of range for its depth"));
        }
        Ok((s, depth, code))
    }

    fn parent_of(&self, s: i64, depth: i64, code: u128) -> VertexId {
        if depth == 1 {
            Tree::vertex(s, 0, 0)
        } else {
            Tree::vertex(s, depth - 1, code / (self.q - 1) as u128)
        }
    }
}

impl GraphOracle for Tree {
    fn name(&self) -> String {
        format!("tree:{}", self.q)
    }

    fn basepoint(&self) -> VertexId {
        Tree::vertex(0, 0, 0)
    }

    fn degree_bound(&self) -> usize {
        self.q as usize
    }

    fn neighbors(&self, v: &VertexId) -> Result<Vec<VertexId>> {
        let (s, depth, code) = self.decode(v)?;
        let mut out = Vec::with_capacity(self.q as usize);
        if depth == 0 {
            out.push(Tree::vertex(s - 1, 0, 0));
            out.push(Tree::vertex(s + 1, 0, 0));
            for j in 0..(self.q - 2) as u128 {
                out.push(Tree::vertex(s, 1, j));
            }
        } else {
            out.push(self.parent_of(s, depth, code));
            let base =
                code.checked_mul((self.q - 1) as u128)
                    .ok_or_else(|| Error::InvalidVertex {
                        vertex: *v,
                        reason: "children beyond the encodable depth".into(),
                    })?;
            for j in 0..(self.q - 1) as u128 {
                out.push(Tree::vertex(s, depth + 1, base + j));
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    fn tree_cone(&self, v: &VertexId) -> Option<Cone> {
        let (s, depth, code) = self.decode(v).ok()?;
        (depth > 0).then(|| Cone {
            parent: self.parent_of(s, depth, code),
            class: 0,
        })
    }
}

/// Subgraph of the square lattice induced by `{(x, y) : |y| <= |x|}`.
#[derive(Clone, Debug, Default)]
pub struct ConeGraph;

pub fn make_cone() -> ConeGraph {
    ConeGraph
}

impl ConeGraph {
    /// `x_n = (n, 0)`, a geodesic through the apex.
    pub fn labeling(&self) -> AxisLabeling {
        AxisLabeling::new(Coords::of(&[0, 0]), 0)
    }

    fn contains(x: i64, y: i64) -> bool {
        y.abs() <= x.abs()
    }
}

impl GraphOracle for ConeGraph {
    fn name(&self) -> String {
        "cone".into()
    }

    fn basepoint(&self) -> VertexId {
        VertexId::base(&[0, 0])
    }

    fn degree_bound(&self) -> usize {
        4
    }

    fn neighbors(&self, v: &VertexId) -> Result<Vec<VertexId>> {
        let c = base_coords(v, 2, "cone")?;
        let (x, y) = (c.get(0), c.get(1));
        if !Self::contains(x, y) {
            return Err(Error::InvalidVertex {
                vertex: *v,
                reason: "outside the cone |y| <= |x|".into(),
            });
        }
        let mut out: Vec<VertexId> = [(x - 1, y), (x + 1, y), (x, y - 1), (x, y + 1)]
            .into_iter()
            .filter(|(a, b)| Self::contains(*a, *b))
            .map(|(a, b)| VertexId::base(&[a, b]))
            .collect();
        out.sort_unstable();
        Ok(out)
    }
}

/// `Z x P_2`: two parallel lines joined by rungs.
#[derive(Clone, Debug, Default)]
pub struct Ladder;

pub fn make_ladder() -> Ladder {
    Ladder
}

impl Ladder {
    /// `x_n = (n, 0)`.
    pub fn labeling(&self) -> AxisLabeling {
        AxisLabeling::new(Coords::of(&[0, 0]), 0)
    }
}

impl GraphOracle for Ladder {
    fn name(&self) -> String {
        "ladder".into()
    }

    fn basepoint(&self) -> VertexId {
        VertexId::base(&[0, 0])
    }

    fn degree_bound(&self) -> usize {
        3
    }

    fn neighbors(&self, v: &VertexId) -> Result<Vec<VertexId>> {
        let c = base_coords(v, 2, "ladder")?;
        let (x, y) = (c.get(0), c.get(1));
        if y != 0 && y != 1 {
            return Err(Error::InvalidVertex {
                vertex: *v,
                reason: "ladder rails are y = 0 and y = 1".into(),
            });
        }
        let mut out = vec![
            VertexId::base(&[x - 1, y]),
            VertexId::base(&[x + 1, y]),
            VertexId::base(&[x, 1 - y]),
        ];
        out.sort_unstable();
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "n")]
pub enum FiniteShape {
    /// `{-n, ..., n}` with the path metric.
    Interval(u32),
    /// Three legs of length `n` glued at a center: the lattice points
    /// `(k, 0)` for `|k| <= n` and `(0, k)` for `1 <= k <= n`.
    Tripod(u32),
}

impl FiniteShape {
    pub fn center(&self) -> VertexId {
        match self {
            FiniteShape::Interval(_) => VertexId::int(0),
            FiniteShape::Tripod(_) => VertexId::base(&[0, 0]),
        }
    }

    /// Points and edges of the shape.
    pub fn graph(&self) -> (Vec<VertexId>, Vec<(VertexId, VertexId)>) {
        match *self {
            FiniteShape::Interval(n) => {
                let n = n as i64;
                let points = (-n..=n).map(VertexId::int).collect();
                let edges = (-n..n)
                    .map(|k| (VertexId::int(k), VertexId::int(k + 1)))
                    .collect();
                (points, edges)
            }
            FiniteShape::Tripod(n) => {
                let n = n as i64;
                let mut points: Vec<VertexId> = (-n..=n).map(|k| VertexId::base(&[k, 0])).collect();
                points.extend((1..=n).map(|k| VertexId::base(&[0, k])));
                let mut edges: Vec<(VertexId, VertexId)> = (-n..n)
                    .map(|k| (VertexId::base(&[k, 0]), VertexId::base(&[k + 1, 0])))
                    .collect();
                edges
                    .extend((0..n).map(|k| (VertexId::base(&[0, k]), VertexId::base(&[0, k + 1]))));
                points.sort_unstable();
                (points, edges)
            }
        }
    }
}

impl fmt::Display for FiniteShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiniteShape::Interval(n) => write!(f, "interval:{n}"),
            FiniteShape::Tripod(n) => write!(f, "tripod:{n}"),
        }
    }
}

/// Exact path metric on a finite shape.
pub fn make_finite(shape: FiniteShape) -> Result<FiniteMetric> {
    let n = match shape {
        FiniteShape::Interval(n) | FiniteShape::Tripod(n) => n,
    };
    if n == 0 {
        return Err(Error::Precondition("finite shapes need n >= 1".into()));
    }
    let (points, edges) = shape.graph();
    FiniteMetric::from_edges(points, &edges)
}
