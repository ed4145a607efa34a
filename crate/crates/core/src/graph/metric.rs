use std::collections::VecDeque;

use rustc_hash::FxHashMap;
use serde::Serialize;

use super::{explore, GraphOracle};
use crate::error::{Error, Result};
use crate::vertex::VertexId;

/// A finite metric space on labelled points; `None` marks infinite distance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteMetric {
    points: Vec<VertexId>,
    dist: Vec<Option<u32>>,
    #[serde(skip)]
    index: FxHashMap<VertexId, usize>,
}

impl FiniteMetric {
    pub fn from_matrix(points: Vec<VertexId>, dist: Vec<Option<u32>>) -> Result<Self> {
        let n = points.len();
        if dist.len() != n * n {
            return Err(Error::Precondition(format!(
                "distance table has {} entries for {n} points",
                dist.len()
            )));
        }
        let index: FxHashMap<VertexId, usize> =
            points.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        if index.len() != n {
            return Err(Error::Precondition("duplicate metric points".into()));
        }
        Ok(FiniteMetric {
            points,
            dist,
            index,
        })
    }

    /// Path metric of a finite graph, computed by BFS from every point.
    pub fn from_edges(points: Vec<VertexId>, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        let n = points.len();
        let index: FxHashMap<VertexId, usize> =
            points.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let mut adj = vec![Vec::new(); n];
        for (a, b) in edges {
            let (Some(&i), Some(&j)) = (index.get(a), index.get(b)) else {
                return Err(Error::Precondition(format!(
                    "edge {a}-{b} leaves the point set"
                )));
            };
            adj[i].push(j);
            adj[j].push(i);
        }
        let mut dist = vec![None; n * n];
        for s in 0..n {
            dist[s * n + s] = Some(0);
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                let dv = dist[s * n + v].unwrap();
                for &u in &adj[v] {
                    if dist[s * n + u].is_none() {
                        dist[s * n + u] = Some(dv + 1);
                        queue.push_back(u);
                    }
                }
            }
        }
        Self::from_matrix(points, dist)
    }

    /// Restriction of the oracle's metric to `points`.
    ///
    /// Distances longer than `cap` are recorded as infinite.
    pub fn from_oracle<G: GraphOracle + ?Sized>(
        g: &G,
        points: Vec<VertexId>,
        cap: u32,
    ) -> Result<Self> {
        let n = points.len();
        let mut dist = vec![None; n * n];
        for (i, p) in points.iter().enumerate() {
            let ex = explore(g, *p, cap)?;
            for (j, q) in points.iter().enumerate() {
                dist[i * n + j] = ex.dist.get(q).copied();
            }
        }
        Self::from_matrix(points, dist)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[VertexId] {
        &self.points
    }

    pub fn d(&self, i: usize, j: usize) -> Option<u32> {
        self.dist[i * self.len() + j]
    }

    pub fn index_of(&self, v: &VertexId) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn diameter(&self) -> Option<u32> {
        let mut best = 0;
        for d in &self.dist {
            best = best.max((*d)?);
        }
        Some(best)
    }

    /// Sub-metric on the given point indices, in the given order.
    pub fn restrict(&self, idx: &[usize]) -> Result<Self> {
        let points: Vec<VertexId> = idx.iter().map(|&i| self.points[i]).collect();
        let mut dist = Vec::with_capacity(idx.len() * idx.len());
        for &i in idx {
            for &j in idx {
                dist.push(self.d(i, j));
            }
        }
        Self::from_matrix(points, dist)
    }

    /// Checks zero diagonal, symmetry and the triangle inequality.
    pub fn validate(&self) -> Result<()> {
        let n = self.len();
        let fail = |msg: String| Err(Error::Precondition(msg));
        for i in 0..n {
            if self.d(i, i) != Some(0) {
                return fail(format!("d({0},{0}) != 0", self.points[i]));
            }
            for j in 0..n {
                if self.d(i, j) != self.d(j, i) {
                    return fail(format!(
                        "asymmetric at ({}, {})",
                        self.points[i], self.points[j]
                    ));
                }
                if i != j && self.d(i, j) == Some(0) {
                    return fail(format!("distinct points at distance 0: {}", self.points[i]));
                }
                for k in 0..n {
                    if let (Some(a), Some(b)) = (self.d(i, k), self.d(k, j)) {
                        if self.d(i, j).is_none_or(|c| c > a + b) {
                            return fail(format!(
                                "triangle inequality fails for ({}, {}, {})",
                                self.points[i], self.points[k], self.points[j]
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}
