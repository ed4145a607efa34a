//! Infinite, locally finite graphs as lazy neighbor oracles, and the exact
//! BFS machinery that produces their finite shadows.

mod bfs;
mod metric;
mod snapshot;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::vertex::VertexId;

pub(crate) use bfs::{annulus_components, explore};
pub use bfs::{
    bfs_ball, boundary_components, distance, sphere_counts, Component, Distance, FiniteBall,
};
pub use metric::FiniteMetric;
pub use snapshot::{parse_snapshot, write_snapshot, Snapshot};

/// Marks a vertex whose far side is a pendant tree.
///
/// Returning `Some` from [`GraphOracle::tree_cone`] promises that the edge
/// `{parent, v}` is a bridge, that the side of it containing `v` is a tree
/// in which every vertex also reports a cone (with the neighbor towards `v`
/// as parent), and that the classes of a vertex's children depend only on
/// its own class. The basepoint never lies inside a cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cone {
    pub parent: VertexId,
    pub class: u32,
}

/// A connected, locally finite graph given by its neighbor function.
///
/// `neighbors` must be pure and symmetric, and never return more than
/// `degree_bound` vertices.
pub trait GraphOracle: Send + Sync {
    fn name(&self) -> String;

    fn basepoint(&self) -> VertexId;

    fn degree_bound(&self) -> usize;

    fn neighbors(&self, v: &VertexId) -> Result<Vec<VertexId>>;

    fn tree_cone(&self, _v: &VertexId) -> Option<Cone> {
        None
    }
}

pub type SharedOracle = Arc<dyn GraphOracle>;

impl<G: GraphOracle + ?Sized> GraphOracle for Arc<G> {
    fn name(&self) -> String {
        (**self).name()
    }

    fn basepoint(&self) -> VertexId {
        (**self).basepoint()
    }

    fn degree_bound(&self) -> usize {
        (**self).degree_bound()
    }

    fn neighbors(&self, v: &VertexId) -> Result<Vec<VertexId>> {
        (**self).neighbors(v)
    }

    fn tree_cone(&self, v: &VertexId) -> Option<Cone> {
        (**self).tree_cone(v)
    }
}

/// `neighbors` with the degree bound enforced.
pub fn checked_neighbors<G: GraphOracle + ?Sized>(g: &G, v: &VertexId) -> Result<Vec<VertexId>> {
    let ns = g.neighbors(v)?;
    if ns.len() > g.degree_bound() {
        return Err(Error::DegreeExceeded {
            vertex: *v,
            degree: ns.len(),
            bound: g.degree_bound(),
        });
    }
    Ok(ns)
}
