//! Pinned backtracking search for `(L, A)` embeddings of a finite metric
//! into a graph oracle.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::Serialize;

use super::{check_qi, QiCheck, QiMap};
use crate::constant::Constant;
use crate::error::{Error, Result};
use crate::graph::{distance, explore, FiniteMetric, GraphOracle};
use crate::vertex::VertexId;

pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchParams {
    #[serde(rename = "L")]
    pub l: Constant,
    #[serde(rename = "A")]
    pub a: Constant,
    /// `(domain point, codomain vertex)`; the first pin anchors the window.
    pub pins: Vec<(VertexId, VertexId)>,
    /// Requested window; `None` uses the admissible ball around the first pin.
    pub window: Option<(VertexId, u32)>,
    /// Maximum number of accepted partial assignments.
    pub budget: u64,
}

impl SearchParams {
    pub fn new(l: Constant, a: Constant, pins: Vec<(VertexId, VertexId)>) -> Self {
        SearchParams {
            l,
            a,
            pins,
            window: None,
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Window {
    pub center: VertexId,
    pub radius: u32,
    /// Every admissible image lies within this distance of the first pin's image.
    pub admissible_radius: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SearchOutcome {
    /// The least assignment in search order; it passed a full audit.
    Found {
        map: QiMap,
        nodes_explored: u64,
        window: Window,
    },
    RefutedByExhaustion {
        nodes_explored: u64,
        window: Window,
    },
    BudgetExceeded {
        nodes_explored: u64,
        budget: u64,
        window: Window,
    },
}

impl SearchOutcome {
    pub fn nodes_explored(&self) -> u64 {
        match self {
            SearchOutcome::Found { nodes_explored, .. }
            | SearchOutcome::RefutedByExhaustion { nodes_explored, .. }
            | SearchOutcome::BudgetExceeded { nodes_explored, .. } => *nodes_explored,
        }
    }

    pub fn found(&self) -> Option<&QiMap> {
        match self {
            SearchOutcome::Found { map, .. } => Some(map),
            _ => None,
        }
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, SearchOutcome::RefutedByExhaustion { .. })
    }
}

/// A pinned search instance, indexed by assignment position.
struct Problem {
    /// Domain indices in assignment order.
    order: Vec<usize>,
    /// Pinned candidate for each position, if any.
    fixed: Vec<Option<Option<usize>>>,
    /// `bounds[p][q] = (lo, hi)` for positions `q < p`.
    bounds: Vec<Vec<(u32, u32)>>,
    /// Position of the closest earlier point, used to filter candidates first.
    parent: Vec<usize>,
    cand: Vec<VertexId>,
    /// Candidate distance matrix, saturated at `far`.
    cd: Vec<u32>,
    m: usize,
}

enum Branch {
    Found(Vec<usize>, u64),
    Exhausted(u64),
    OverBudget,
    Cancelled,
}

struct Dfs<'a> {
    pb: &'a Problem,
    assign: Vec<usize>,
    nodes: u64,
    budget: u64,
    cancel: Option<(&'a AtomicUsize, usize)>,
}

impl Dfs<'_> {
    fn consistent(&self, pos: usize, c: usize) -> bool {
        let pb = self.pb;
        let row = &pb.cd[c * pb.m..(c + 1) * pb.m];
        let b = &pb.bounds[pos];
        let par = pb.parent[pos];
        let dp = row[self.assign[par]];
        if dp < b[par].0 || dp > b[par].1 {
            return false;
        }
        (0..pos).all(|q| {
            let d = row[self.assign[q]];
            d >= b[q].0 && d <= b[q].1
        })
    }

    /// `Some(true)` on success with `assign` filled, `Some(false)` when the
    /// subtree is exhausted, `None` on budget or cancellation.
    fn run(&mut self, pos: usize) -> Option<bool> {
        if pos == self.pb.order.len() {
            return Some(true);
        }
        if let Some((flag, me)) = self.cancel {
            if flag.load(Ordering::Relaxed) < me {
                return None;
            }
        }
        let options: Vec<usize> = match self.pb.fixed[pos] {
            Some(Some(c)) => vec![c],
            Some(None) => Vec::new(),
            None => (0..self.pb.m).collect(),
        };
        for c in options {
            if !self.consistent(pos, c) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return None;
            }
            self.assign.push(c);
            match self.run(pos + 1) {
                Some(true) => return Some(true),
                Some(false) => {
                    self.assign.pop();
                }
                None => return None,
            }
        }
        Some(false)
    }
}

fn build_problem<G: GraphOracle + ?Sized>(
    domain: &FiniteMetric,
    g: &G,
    params: &SearchParams,
) -> Result<(Problem, Window)> {
    let n = domain.len();
    let diam = domain
        .diameter()
        .ok_or_else(|| Error::Precondition("domain metric is disconnected".into()))?;
    let (&(p0, v0), _) = params
        .pins
        .split_first()
        .ok_or_else(|| Error::Precondition("search needs at least one pin".into()))?;
    let idx_of = |p: &VertexId| {
        domain
            .index_of(p)
            .ok_or_else(|| Error::Precondition(format!("pin {p} is not a domain point")))
    };
    let i0 = idx_of(&p0)?;
    let mut pinned: FxHashMap<usize, VertexId> = FxHashMap::default();
    for (p, v) in &params.pins {
        if let Some(prev) = pinned.insert(idx_of(p)?, *v) {
            if prev != *v {
                return Err(Error::Precondition(format!("{p} is pinned twice")));
            }
        }
    }

    let hi = |d: u32| -> Result<u32> {
        u32::try_from(Constant::upper_bound(params.l, params.a, d))
            .map_err(|_| Error::Overflow("upper bound".into()))
    };
    let lo = |d: u32| Constant::lower_bound(params.l, params.a, d).max(0) as u32;
    let ecc = (0..n)
        .map(|j| domain.d(i0, j).unwrap_or(0))
        .max()
        .unwrap_or(0);
    let admissible = hi(ecc)?;
    let window = match params.window {
        None => Window {
            center: v0,
            radius: admissible,
            admissible_radius: admissible,
        },
        Some((center, radius)) if center == v0 => Window {
            center,
            radius: radius.max(admissible),
            admissible_radius: admissible,
        },
        Some((center, radius)) => {
            let offset = distance(g, center, v0, radius)?.exact().ok_or_else(|| {
                Error::Precondition(format!("first pin image {v0} lies outside the window"))
            })?;
            if offset + admissible > radius {
                return Err(Error::Precondition(format!(
                    "window radius {radius} around {center} does not contain the admissible ball of radius {admissible} around {v0}; need at least {}",
                    offset + admissible
                )));
            }
            Window {
                center,
                radius,
                admissible_radius: admissible,
            }
        }
    };

    // candidates: B(v0, admissible); distances resolved up to `far` inside
    // B(v0, admissible + far), which contains every such geodesic
    let far = hi(diam)? + 1;
    let ex = explore(g, v0, admissible + far)?;
    let mut cand: Vec<VertexId> = ex
        .dist
        .iter()
        .filter(|(_, d)| **d <= admissible)
        .map(|(v, _)| *v)
        .collect();
    cand.sort_unstable();
    let m = cand.len();
    let cidx: FxHashMap<VertexId, usize> = cand.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let rows: Vec<Vec<u32>> = cand
        .par_iter()
        .map(|&s| {
            let mut dist: FxHashMap<VertexId, u32> = FxHashMap::default();
            dist.insert(s, 0);
            let mut frontier = vec![s];
            for depth in 1..far {
                let mut next = Vec::new();
                for v in &frontier {
                    for u in &ex.adj[v] {
                        if !dist.contains_key(u) {
                            dist.insert(*u, depth);
                            next.push(*u);
                        }
                    }
                }
                frontier = next;
            }
            cand.iter()
                .map(|c| dist.get(c).copied().unwrap_or(far))
                .collect()
        })
        .collect();
    let cd: Vec<u32> = rows.into_iter().flatten().collect();

    // BFS order from the first pin, ties by vertex id
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&j| (domain.d(i0, j).unwrap_or(u32::MAX), domain.points()[j]));
    let mut bounds = Vec::with_capacity(n);
    let mut parent = Vec::with_capacity(n);
    let mut fixed = Vec::with_capacity(n);
    for (p, &i) in order.iter().enumerate() {
        let mut row = Vec::with_capacity(p);
        let mut best = (u32::MAX, 0);
        for (q, &j) in order[..p].iter().enumerate() {
            let d = domain.d(i, j).expect("connected");
            row.push((lo(d), hi(d)?));
            best = best.min((d, q));
        }
        bounds.push(row);
        parent.push(best.1);
        fixed.push(pinned.get(&i).map(|v| cidx.get(v).copied()));
    }
    Ok((
        Problem {
            order,
            fixed,
            bounds,
            parent,
            cand,
            cd,
            m,
        },
        window,
    ))
}

/// Exhaustive search for an `(L, A)` embedding of `domain` into `g`
/// respecting the pins.
///
/// Points are assigned in BFS order from the first pin, candidates tried
/// in vertex order, so a `Found` map is the least one in that order. The
/// subtrees below the first free point are searched in parallel; the
/// outcome and node count equal those of the sequential search.
pub fn search_embedding<G: GraphOracle + ?Sized>(
    domain: &FiniteMetric,
    g: &G,
    params: &SearchParams,
) -> Result<SearchOutcome> {
    if params.l < Constant::ONE {
        return Err(Error::Precondition(format!(
            "L must be at least 1, got {}",
            params.l
        )));
    }
    let (pb, window) = build_problem(domain, g, params)?;
    let n = pb.order.len();
    let budget = params.budget;
    let over = |nodes| SearchOutcome::BudgetExceeded {
        nodes_explored: nodes,
        budget,
        window,
    };

    // forced prefix of pinned points
    let mut head = Dfs {
        pb: &pb,
        assign: Vec::new(),
        nodes: 0,
        budget,
        cancel: None,
    };
    let mut split = 0;
    while split < n {
        let Some(pin) = pb.fixed[split] else { break };
        match pin {
            Some(c) if split == 0 || head.consistent(split, c) => {
                head.nodes += 1;
                head.assign.push(c);
                split += 1;
            }
            _ => {
                return Ok(SearchOutcome::RefutedByExhaustion {
                    nodes_explored: head.nodes,
                    window,
                })
            }
        }
    }
    if head.nodes > budget {
        return Ok(over(budget));
    }
    let assignment = if split == n {
        Some(head.assign.clone())
    } else {
        let branches: Vec<usize> = (0..pb.m).filter(|&c| head.consistent(split, c)).collect();
        let prefix = head.nodes;
        let decided = AtomicUsize::new(usize::MAX);
        let results: Vec<Branch> = branches
            .par_iter()
            .enumerate()
            .map(|(b, &c)| {
                if decided.load(Ordering::Relaxed) < b {
                    return Branch::Cancelled;
                }
                let mut assign = head.assign.clone();
                assign.push(c);
                let mut dfs = Dfs {
                    pb: &pb,
                    assign,
                    nodes: 1,
                    budget: budget - prefix,
                    cancel: Some((&decided, b)),
                };
                match dfs.run(split + 1) {
                    Some(true) => {
                        decided.fetch_min(b, Ordering::Relaxed);
                        Branch::Found(dfs.assign, dfs.nodes)
                    }
                    Some(false) => Branch::Exhausted(dfs.nodes),
                    None if dfs.nodes > dfs.budget => {
                        decided.fetch_min(b, Ordering::Relaxed);
                        Branch::OverBudget
                    }
                    None => Branch::Cancelled,
                }
            })
            .collect();
        let mut total = prefix;
        let mut found = None;
        for r in results {
            match r {
                Branch::Exhausted(k) => total += k,
                Branch::Found(assign, k) => {
                    total += k;
                    found = Some(assign);
                    break;
                }
                Branch::OverBudget => return Ok(over(budget)),
                Branch::Cancelled => {
                    unreachable!("only branches after a decisive one are cancelled")
                }
            }
            if total > budget {
                return Ok(over(budget));
            }
        }
        if total > budget {
            return Ok(over(budget));
        }
        head.nodes = total;
        found
    };

    let Some(assign) = assignment else {
        return Ok(SearchOutcome::RefutedByExhaustion {
            nodes_explored: head.nodes,
            window,
        });
    };
    let mut images = vec![None; n];
    for (pos, &i) in pb.order.iter().enumerate() {
        images[i] = Some(pb.cand[assign[pos]]);
    }
    let map = QiMap::new(domain.clone(), images, params.l, params.a)?;
    let cap = map.default_cap()?;
    if let QiCheck::Violation(v) = check_qi(&map, g, cap)? {
        return Err(Error::Precondition(format!(
            "search produced a map failing its audit at ({}, {})",
            v.a, v.b
        )));
    }
    Ok(SearchOutcome::Found {
        map,
        nodes_explored: head.nodes,
        window,
    })
}
