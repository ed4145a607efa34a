//! Finite-scale quasi-isometric embeddings: audits, pinned search, the
//! endpoint census on intervals and the coarse-transitivity refutation.

mod census;
mod search;
mod transitivity;

use std::collections::VecDeque;

use rayon::prelude::*;
use rustc_hash::FxHashSet;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::constant::Constant;
use crate::decorate::DecoratedOracle;
use crate::error::{Error, Result};
use crate::graph::{checked_neighbors, distance, Distance, FiniteMetric, GraphOracle};
use crate::vertex::VertexId;

pub use census::{endpoint_order_census, Census};
pub use search::{search_embedding, SearchOutcome, SearchParams, Window, DEFAULT_BUDGET};
pub use transitivity::{refute_coarse_transitivity, PinAttempt, TransitivityOutcome};

/// A map from a finite metric space into a graph, with declared constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QiMap {
    pub domain: FiniteMetric,
    pub assignment: Vec<Option<VertexId>>,
    pub l: Constant,
    pub a: Constant,
}

impl Serialize for QiMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<(VertexId, Option<VertexId>)> = self
            .domain
            .points()
            .iter()
            .copied()
            .zip(self.assignment.iter().copied())
            .collect();
        let mut st = s.serialize_struct("QiMap", 3)?;
        st.serialize_field("L", &self.l)?;
        st.serialize_field("A", &self.a)?;
        st.serialize_field("assignment", &pairs)?;
        st.end()
    }
}

impl QiMap {
    pub fn new(
        domain: FiniteMetric,
        assignment: Vec<Option<VertexId>>,
        l: Constant,
        a: Constant,
    ) -> Result<Self> {
        if assignment.len() != domain.len() {
            return Err(Error::Precondition(format!(
                "assignment has {} entries for {} domain points",
                assignment.len(),
                domain.len()
            )));
        }
        if l < Constant::ONE {
            return Err(Error::Precondition(format!(
                "L must be at least 1, got {l}"
            )));
        }
        Ok(QiMap {
            domain,
            assignment,
            l,
            a,
        })
    }

    /// A total map given as a function of the domain points.
    pub fn from_fn(
        domain: FiniteMetric,
        l: Constant,
        a: Constant,
        f: impl Fn(&VertexId) -> VertexId,
    ) -> Result<Self> {
        let assignment = domain.points().iter().map(|p| Some(f(p))).collect();
        Self::new(domain, assignment, l, a)
    }

    pub fn image(&self, p: &VertexId) -> Option<VertexId> {
        self.domain.index_of(p).and_then(|i| self.assignment[i])
    }

    pub fn is_total(&self) -> bool {
        self.assignment.iter().all(Option::is_some)
    }

    /// Same assignment, other constants.
    pub fn with_constants(&self, l: Constant, a: Constant) -> Result<Self> {
        Self::new(self.domain.clone(), self.assignment.clone(), l, a)
    }

    /// Largest upper bound `floor(L·d + A)` over domain pairs, plus one:
    /// any passing map has all image distances below it.
    pub fn default_cap(&self) -> Result<u32> {
        let diam = self
            .domain
            .diameter()
            .ok_or_else(|| Error::Precondition("domain metric is disconnected".into()))?;
        let hi = Constant::upper_bound(self.l, self.a, diam);
        u32::try_from(hi + 1).map_err(|_| Error::Overflow("distance cap".into()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `d(f(a), f(b)) < d(a, b)/L - A`
    Lower,
    /// `d(f(a), f(b)) > L·d(a, b) + A`
    Upper,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QiViolation {
    pub a: VertexId,
    pub b: VertexId,
    pub side: Side,
    pub d_domain: u32,
    pub d_image: u32,
    /// Integer bound that was missed.
    pub bound: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum QiCheck {
    Pass {
        pairs: usize,
    },
    /// The pair missing its bound by the most; ties go to the first pair in
    /// domain order.
    Violation(QiViolation),
}

impl QiCheck {
    pub fn passed(&self) -> bool {
        matches!(self, QiCheck::Pass { .. })
    }
}

/// Exact audit of both inequalities over every pair of domain points.
/// Image distances above `cap` are an error.
pub fn check_qi<G: GraphOracle + ?Sized>(map: &QiMap, g: &G, cap: u32) -> Result<QiCheck> {
    let n = map.domain.len();
    let images: Vec<VertexId> = map
        .assignment
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.ok_or_else(|| {
                Error::Precondition(format!("{} is unassigned", map.domain.points()[i]))
            })
        })
        .collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let results: Vec<Result<Option<(i64, QiViolation)>>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let pts = map.domain.points();
            let d = map.domain.d(i, j).ok_or_else(|| {
                Error::Precondition(format!(
                    "domain points {} and {} are disconnected",
                    pts[i], pts[j]
                ))
            })?;
            let dc = match distance(g, images[i], images[j], cap)? {
                Distance::Exact(x) => x,
                Distance::AboveCap => {
                    return Err(Error::AboveCap {
                        u: images[i],
                        v: images[j],
                        cap,
                    })
                }
            };
            let hi = Constant::upper_bound(map.l, map.a, d);
            let lo = Constant::lower_bound(map.l, map.a, d);
            let violation = |side, bound: i64, deficit: i64| {
                (
                    deficit,
                    QiViolation {
                        a: pts[i],
                        b: pts[j],
                        side,
                        d_domain: d,
                        d_image: dc,
                        bound,
                    },
                )
            };
            Ok(if (dc as i64) > hi {
                Some(violation(Side::Upper, hi, dc as i64 - hi))
            } else if (dc as i64) < lo {
                Some(violation(Side::Lower, lo, lo - dc as i64))
            } else {
                None
            })
        })
        .collect();
    let mut worst: Option<(i64, QiViolation)> = None;
    for r in results {
        if let Some((deficit, v)) = r? {
            if worst.as_ref().is_none_or(|(w, _)| deficit > *w) {
                worst = Some((deficit, v));
            }
        }
    }
    Ok(match worst {
        Some((_, v)) => QiCheck::Violation(v),
        None => QiCheck::Pass { pairs: pairs.len() },
    })
}

/// Re-pins a `(K, K)` map so that `x ↦ y`, returning it with constants `(K, 2K)`.
pub fn adjust_pin<G: GraphOracle + ?Sized>(
    map: &QiMap,
    g: &G,
    x: &VertexId,
    y: VertexId,
    k: Constant,
) -> Result<QiMap> {
    let idx = map
        .domain
        .index_of(x)
        .ok_or_else(|| Error::Precondition(format!("{x} is not a domain point")))?;
    let kk = map.with_constants(k, k)?;
    let cap = kk.default_cap()?;
    if let QiCheck::Violation(v) = check_qi(&kk, g, cap)? {
        return Err(Error::Precondition(format!(
            "map is not a ({k}, {k}) embedding: pair ({}, {}) fails the {:?} side",
            v.a, v.b, v.side
        )));
    }
    let fx = map.assignment[idx].expect("audited maps are total");
    let kf = k.floor().max(0) as u32;
    if distance(g, fx, y, kf)?.exact().is_none() {
        return Err(Error::Precondition(format!(
            "d(f({x}), {y}) exceeds K = {k}"
        )));
    }
    let mut assignment = map.assignment.clone();
    assignment[idx] = Some(y);
    let pinned = QiMap::new(map.domain.clone(), assignment, k, k + k)?;
    let cap = pinned.default_cap()?;
    match check_qi(&pinned, g, cap)? {
        QiCheck::Pass { .. } => Ok(pinned),
        QiCheck::Violation(v) => Err(Error::Precondition(format!(
            "re-pinned map fails at ({}, {}); the input audit was inconsistent",
            v.a, v.b
        ))),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BaseProximity {
    pub sup_distance_to_base: u32,
    /// A domain point attaining the supremum.
    pub witness: VertexId,
    /// `L³ + 2L²A + A`.
    pub bound: Constant,
    pub pass: bool,
}

/// BFS distance from `v` to the nearest vertex of the base graph.
fn distance_to_base<G: GraphOracle + ?Sized>(g: &G, v: VertexId) -> Result<u32> {
    let mut seen = FxHashSet::default();
    seen.insert(v);
    let mut queue = VecDeque::from([(v, 0u32)]);
    while let Some((u, d)) = queue.pop_front() {
        if u.is_base() {
            return Ok(d);
        }
        for w in checked_neighbors(g, &u)? {
            if seen.insert(w) {
                queue.push_back((w, d + 1));
            }
        }
    }
    Err(Error::Precondition(format!(
        "no base vertex reachable from {v}"
    )))
}

/// Audits `map` as an `(L, A)` embedding into `X_alpha`, then measures how
/// far its image strays from the base graph.
pub fn base_proximity_audit(map: &QiMap, xa: &DecoratedOracle) -> Result<BaseProximity> {
    if let QiCheck::Violation(v) = check_qi(map, xa, map.default_cap()?)? {
        return Err(Error::Precondition(format!(
            "map does not audit at ({}, {}): pair ({}, {}) fails the {:?} side",
            map.l, map.a, v.a, v.b, v.side
        )));
    }
    let mut sup = 0;
    let mut witness = map.domain.points()[0];
    for (p, img) in map.domain.points().iter().zip(&map.assignment) {
        let d = distance_to_base(xa, img.expect("audited maps are total"))?;
        if d > sup {
            sup = d;
            witness = *p;
        }
    }
    let (l, a) = (map.l, map.a);
    let bound = l * l * l + Constant::int(2) * l * l * a + a;
    Ok(BaseProximity {
        sup_distance_to_base: sup,
        witness,
        bound,
        pass: Constant::int(sup as i64) <= bound,
    })
}
