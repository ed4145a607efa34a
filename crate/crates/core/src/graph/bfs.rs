use std::collections::{BTreeMap, VecDeque};

use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use super::{checked_neighbors, GraphOracle};
use crate::error::{Error, Result};
use crate::vertex::VertexId;

/// Frontiers at least this large are expanded on the rayon pool.
const PAR_FRONTIER: usize = 512;

/// Neighbor lists of a whole frontier, in frontier order. The first error
/// in frontier order wins, so failures are as deterministic as successes.
fn expand_layer<G: GraphOracle + ?Sized>(
    g: &G,
    frontier: &[VertexId],
) -> Result<Vec<Vec<VertexId>>> {
    let raw: Vec<Result<Vec<VertexId>>> = if frontier.len() >= PAR_FRONTIER {
        frontier
            .par_iter()
            .map(|v| checked_neighbors(g, v))
            .collect()
    } else {
        frontier.iter().map(|v| checked_neighbors(g, v)).collect()
    };
    raw.into_iter().collect()
}

/// A materialized ball: exact distances plus the neighbor list of every
/// vertex in it.
pub(crate) struct Explored {
    pub center: VertexId,
    pub radius: u32,
    pub dist: FxHashMap<VertexId, u32>,
    pub layers: Vec<Vec<VertexId>>,
    pub adj: FxHashMap<VertexId, Vec<VertexId>>,
}

impl Explored {
    pub fn in_ball(&self, v: &VertexId) -> bool {
        self.dist.contains_key(v)
    }
}

pub(crate) fn explore<G: GraphOracle + ?Sized>(g: &G, x0: VertexId, r: u32) -> Result<Explored> {
    let mut dist = FxHashMap::default();
    let mut adj = FxHashMap::default();
    let mut layers: Vec<Vec<VertexId>> = vec![vec![x0]];
    dist.insert(x0, 0);
    for d in 0..=r {
        let frontier = &layers[d as usize];
        let nbrs = expand_layer(g, frontier)?;
        let mut next = Vec::new();
        for (v, ns) in frontier.iter().zip(&nbrs) {
            if d < r {
                for u in ns {
                    if !dist.contains_key(u) {
                        dist.insert(*u, d + 1);
                        next.push(*u);
                    }
                }
            }
            adj.insert(*v, ns.clone());
        }
        if d < r {
            next.sort_unstable();
            layers.push(next);
        }
    }
    // symmetry spot-check on every edge with both ends explored
    for layer in &layers {
        for v in layer {
            for u in &adj[v] {
                if let Some(back) = adj.get(u) {
                    if !back.contains(v) {
                        return Err(Error::Asymmetric { from: *v, to: *u });
                    }
                }
            }
        }
    }
    Ok(Explored {
        center: x0,
        radius: r,
        dist,
        layers,
        adj,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteBall {
    pub center: VertexId,
    pub radius: u32,
    /// Sorted by `(dist, vertex)`.
    pub vertices: Vec<(VertexId, u32)>,
    /// Each undirected edge once, as `(smaller, larger)`, sorted.
    pub edges: Vec<(VertexId, VertexId)>,
}

impl FiniteBall {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn dist_of(&self, v: &VertexId) -> Option<u32> {
        self.vertices.iter().find(|(u, _)| u == v).map(|(_, d)| *d)
    }

    pub fn sphere(&self, d: u32) -> impl Iterator<Item = &VertexId> {
        self.vertices
            .iter()
            .filter(move |(_, dv)| *dv == d)
            .map(|(v, _)| v)
    }
}

impl From<&Explored> for FiniteBall {
    fn from(ex: &Explored) -> Self {
        let mut vertices = Vec::with_capacity(ex.dist.len());
        let mut edges = Vec::new();
        for (d, layer) in ex.layers.iter().enumerate() {
            for v in layer {
                vertices.push((*v, d as u32));
                for u in &ex.adj[v] {
                    if v < u && ex.in_ball(u) {
                        edges.push((*v, *u));
                    }
                }
            }
        }
        edges.sort_unstable();
        edges.dedup();
        FiniteBall {
            center: ex.center,
            radius: ex.radius,
            vertices,
            edges,
        }
    }
}

/// All vertices within distance `r` of `x0`, with exact distances and the
/// induced edge set.
pub fn bfs_ball<G: GraphOracle + ?Sized>(g: &G, x0: VertexId, r: u32) -> Result<FiniteBall> {
    Ok(FiniteBall::from(&explore(g, x0, r)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Distance {
    Exact(u32),
    AboveCap,
}

impl Distance {
    pub fn exact(self) -> Option<u32> {
        match self {
            Distance::Exact(d) => Some(d),
            Distance::AboveCap => None,
        }
    }
}

/// Path from `v` up through its cone ancestors to the first vertex that is
/// not inside a cone.
fn climb<G: GraphOracle + ?Sized>(g: &G, v: VertexId) -> Vec<VertexId> {
    let mut chain = vec![v];
    let mut cur = v;
    while let Some(cone) = g.tree_cone(&cur) {
        cur = cone.parent;
        chain.push(cur);
    }
    chain
}

/// Exact `d(u, v)` when it is at most `cap`.
///
/// Pendant tree cones are never entered by the search: endpoints inside a
/// cone are first lifted to its root, and every other cone is skipped
/// since a shortest path cannot cross a bridge twice.
pub fn distance<G: GraphOracle + ?Sized>(
    g: &G,
    u: VertexId,
    v: VertexId,
    cap: u32,
) -> Result<Distance> {
    checked_neighbors(g, &u)?;
    checked_neighbors(g, &v)?;
    if u == v {
        return Ok(Distance::Exact(0));
    }
    let up_u = climb(g, u);
    let up_v = climb(g, v);
    let index_u: FxHashMap<VertexId, usize> =
        up_u.iter().enumerate().map(|(i, w)| (*w, i)).collect();
    if let Some((j, i)) = up_v
        .iter()
        .enumerate()
        .find_map(|(j, w)| index_u.get(w).map(|i| (j, *i)))
    {
        let d = (i + j) as u32;
        return Ok(if d <= cap {
            Distance::Exact(d)
        } else {
            Distance::AboveCap
        });
    }
    let lift = (up_u.len() + up_v.len() - 2) as u32;
    if lift > cap {
        return Ok(Distance::AboveCap);
    }
    let a = *up_u.last().unwrap();
    let b = *up_v.last().unwrap();
    Ok(match bidirectional(g, a, b, cap - lift)? {
        Distance::Exact(d) => Distance::Exact(d + lift),
        Distance::AboveCap => Distance::AboveCap,
    })
}

fn bidirectional<G: GraphOracle + ?Sized>(
    g: &G,
    a: VertexId,
    b: VertexId,
    cap: u32,
) -> Result<Distance> {
    if a == b {
        return Ok(Distance::Exact(0));
    }
    let mut seen = [FxHashMap::default(), FxHashMap::default()];
    seen[0].insert(a, 0u32);
    seen[1].insert(b, 0u32);
    let mut frontier = [vec![a], vec![b]];
    let mut depth = [0u32, 0u32];
    while depth[0] + depth[1] < cap {
        let side = if frontier[0].len() <= frontier[1].len() {
            0
        } else {
            1
        };
        let other = 1 - side;
        if frontier[side].is_empty() {
            return Ok(Distance::AboveCap);
        }
        let nbrs = expand_layer(g, &frontier[side])?;
        let next_depth = depth[side] + 1;
        let mut next = Vec::new();
        let mut best: Option<u32> = None;
        for ns in nbrs {
            for w in ns {
                if seen[side].contains_key(&w) || g.tree_cone(&w).is_some() {
                    continue;
                }
                seen[side].insert(w, next_depth);
                if let Some(dw) = seen[other].get(&w) {
                    let total = next_depth + dw;
                    best = Some(best.map_or(total, |b| b.min(total)));
                }
                next.push(w);
            }
        }
        depth[side] = next_depth;
        if let Some(d) = best {
            return Ok(if d <= cap {
                Distance::Exact(d)
            } else {
                Distance::AboveCap
            });
        }
        frontier[side] = next;
    }
    Ok(Distance::AboveCap)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    /// Sorted.
    pub vertices: Vec<VertexId>,
    pub touches_horizon: bool,
}

/// Components of the subgraph induced on `B(x0, big_r) \ B(x0, r)`.
pub fn boundary_components<G: GraphOracle + ?Sized>(
    g: &G,
    x0: VertexId,
    r: u32,
    big_r: u32,
) -> Result<Vec<Component>> {
    if big_r <= r {
        return Err(Error::Precondition(format!(
            "horizon radius {big_r} must exceed the removed radius {r}"
        )));
    }
    let ex = explore(g, x0, big_r)?;
    Ok(annulus_components(&ex, r, big_r))
}

/// Components of the annulus `r < dist <= big_r` inside an already explored
/// ball (`big_r <= ex.radius`), sorted by their least vertex.
pub(crate) fn annulus_components(ex: &Explored, r: u32, big_r: u32) -> Vec<Component> {
    debug_assert!(big_r <= ex.radius);
    let inside = |v: &VertexId| ex.dist.get(v).is_some_and(|d| *d > r && *d <= big_r);
    let mut assigned: FxHashSet<VertexId> = FxHashSet::default();
    let mut out = Vec::new();
    for layer in ex
        .layers
        .iter()
        .take(big_r as usize + 1)
        .skip(r as usize + 1)
    {
        for start in layer {
            if assigned.contains(start) {
                continue;
            }
            assigned.insert(*start);
            let mut queue = VecDeque::from([*start]);
            let mut vertices = Vec::new();
            let mut touches = false;
            while let Some(v) = queue.pop_front() {
                touches |= ex.dist[&v] == big_r;
                vertices.push(v);
                for u in &ex.adj[&v] {
                    if inside(u) && assigned.insert(*u) {
                        queue.push_back(*u);
                    }
                }
            }
            vertices.sort_unstable();
            out.push(Component {
                vertices,
                touches_horizon: touches,
            });
        }
    }
    out.sort_by(|a, b| a.vertices[0].cmp(&b.vertices[0]));
    out
}

/// `|S(x0, n)|` for `n = 0..=n_max`.
///
/// Unless `x0` itself sits in a cone, pendant tree cones (see
/// [`super::Cone`]) are counted by class multiplicity instead of being
/// enumerated, which keeps trees exact far beyond enumerable radii. Every
/// cone step taken is checked against the cone contract.
pub fn sphere_counts<G: GraphOracle + ?Sized>(
    g: &G,
    x0: VertexId,
    n_max: u32,
) -> Result<Vec<u128>> {
    checked_neighbors(g, &x0)?;
    let use_cones = g.tree_cone(&x0).is_none();
    let mut counts = Vec::with_capacity(n_max as usize + 1);
    let mut prev: FxHashSet<VertexId> = FxHashSet::default();
    let mut frontier = vec![x0];
    let mut cur: FxHashSet<VertexId> = frontier.iter().copied().collect();
    let mut classes: BTreeMap<u32, u128> = BTreeMap::new();
    let mut reps: FxHashMap<u32, VertexId> = FxHashMap::default();
    let mut children: FxHashMap<u32, Vec<u32>> = FxHashMap::default();

    for d in 0..=n_max {
        let mut total = frontier.len() as u128;
        for c in classes.values() {
            total = total
                .checked_add(*c)
                .ok_or_else(|| Error::Overflow("sphere size".into()))?;
        }
        counts.push(total);
        if d == n_max {
            break;
        }
        let nbrs = expand_layer(g, &frontier)?;
        let mut next = Vec::new();
        let mut next_set = FxHashSet::default();
        let mut next_classes: BTreeMap<u32, u128> = BTreeMap::new();
        for (v, ns) in frontier.iter().zip(nbrs) {
            for u in ns {
                if prev.contains(&u) || cur.contains(&u) || next_set.contains(&u) {
                    continue;
                }
                if use_cones {
                    if let Some(cone) = g.tree_cone(&u) {
                        if cone.parent != *v {
                            return Err(Error::Precondition(format!(
                                "cone vertex {u} reached from {v} instead of its parent {}",
                                cone.parent
                            )));
                        }
                        *next_classes.entry(cone.class).or_insert(0) += 1;
                        reps.entry(cone.class).or_insert(u);
                        continue;
                    }
                }
                next_set.insert(u);
                next.push(u);
            }
        }
        for (class, mult) in &classes {
            if !children.contains_key(class) {
                let kids = cone_children(g, reps[class], &mut reps)?;
                children.insert(*class, kids);
            }
            for child in &children[class] {
                let slot = next_classes.entry(*child).or_insert(0);
                *slot = slot
                    .checked_add(*mult)
                    .ok_or_else(|| Error::Overflow("sphere size".into()))?;
            }
        }
        next.sort_unstable();
        prev = std::mem::replace(&mut cur, next_set);
        frontier = next;
        classes = next_classes;
    }
    Ok(counts)
}

fn cone_children<G: GraphOracle + ?Sized>(
    g: &G,
    rep: VertexId,
    reps: &mut FxHashMap<u32, VertexId>,
) -> Result<Vec<u32>> {
    let cone = g
        .tree_cone(&rep)
        .expect("representatives are cone vertices");
    let mut out = Vec::new();
    for u in checked_neighbors(g, &rep)? {
        if u == cone.parent {
            continue;
        }
        match g.tree_cone(&u) {
            Some(c) if c.parent == rep => {
                reps.entry(c.class).or_insert(u);
                out.push(c.class);
            }
            _ => {
                return Err(Error::Precondition(format!(
                    "cone vertex {rep} has neighbor {u} outside its cone"
                )))
            }
        }
    }
    Ok(out)
}
