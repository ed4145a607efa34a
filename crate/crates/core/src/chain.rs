//! Ball chains in two-ended graphs: a separating radius, the chain
//! `x_k` with `d(x_k, x_{k+1}) = 2r + 1`, and an audit of `k ↦ x_k`.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, VecDeque};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::Serialize;

use crate::constant::Constant;
use crate::error::{Error, Result};
use crate::graph::{
    annulus_components, bfs_ball, boundary_components, checked_neighbors, distance, explore,
    sphere_counts, Component, Distance, FiniteMetric, GraphOracle,
};
use crate::qi::{check_qi, QiCheck, QiMap};
use crate::vertex::VertexId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", content = "r", rename_all = "snake_case")]
pub enum SeparationRadius {
    Found(u32),
    NotFound,
}

/// Smallest `r` in `1..=r_max` such that removing `B(s, r)` leaves exactly
/// two horizon components at radius `big_r` for every sample `s`.
pub fn find_separation_radius<G: GraphOracle + ?Sized>(
    g: &G,
    samples: &[VertexId],
    big_r: u32,
    r_max: u32,
) -> Result<SeparationRadius> {
    if samples.is_empty() {
        return Err(Error::Precondition("no sample vertices".into()));
    }
    for r in 1..=r_max.min(big_r.saturating_sub(1)) {
        let counts: Vec<Result<usize>> = samples
            .par_iter()
            .map(|s| {
                Ok(boundary_components(g, *s, r, big_r)?
                    .iter()
                    .filter(|c| c.touches_horizon)
                    .count())
            })
            .collect();
        let mut all_two = true;
        for c in counts {
            all_two &= c? == 2;
        }
        if all_two {
            return Ok(SeparationRadius::Found(r));
        }
    }
    Ok(SeparationRadius::NotFound)
}

/// `count` distinct vertices of `B(center, radius)` drawn with a seeded
/// ChaCha8 stream, sorted.
pub fn sample_vertices<G: GraphOracle + ?Sized>(
    g: &G,
    center: VertexId,
    radius: u32,
    count: usize,
    seed: u64,
) -> Result<Vec<VertexId>> {
    let ball = bfs_ball(g, center, radius)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<VertexId> = sample(&mut rng, ball.len(), count.min(ball.len()))
        .into_iter()
        .map(|i| ball.vertices[i].0)
        .collect();
    out.sort_unstable();
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    P,
    N,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SideLabel {
    pub k: i64,
    /// `x_k` was chosen in `P_{k-1}` (for `k > 0`) or `N_{k+1}` (for `k < 0`).
    pub side: Side,
    /// Horizon radius at which the two components were separated.
    pub horizon: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainResult {
    pub r: u32,
    pub step: u32,
    /// `(k, x_k)` for `k` in `k_min..=k_max`.
    pub points: Vec<(i64, VertexId)>,
    pub side_labels: Vec<SideLabel>,
    /// Horizon components are a finite proxy for unbounded ones.
    pub horizon_note: String,
}

impl ChainResult {
    pub fn x(&self, k: i64) -> Option<VertexId> {
        self.points.iter().find(|(j, _)| *j == k).map(|(_, v)| *v)
    }

    pub fn k_range(&self) -> (i64, i64) {
        (self.points[0].0, self.points[self.points.len() - 1].0)
    }
}

/// Largest horizon ball the chain builder will materialize.
pub const MAX_HORIZON_BALL: u128 = 4_000_000;

/// The two horizon components of `B(center, H) \ B(center, r)`.
fn split_at<G: GraphOracle + ?Sized>(
    g: &G,
    center: VertexId,
    r: u32,
    horizon: u32,
    k: i64,
) -> Result<(Vec<Component>, FxHashMap<VertexId, u32>, u32)> {
    let size: u128 = sphere_counts(g, center, horizon)?.iter().sum();
    if size > MAX_HORIZON_BALL {
        return Err(Error::Budget(format!(
            "B(x_{k}, {horizon}) has {size} vertices, above the limit {MAX_HORIZON_BALL}"
        )));
    }
    let ex = explore(g, center, horizon)?;
    let comps: Vec<Component> = annulus_components(&ex, r, horizon)
        .into_iter()
        .filter(|c| c.touches_horizon)
        .collect();
    if comps.len() != 2 {
        return Err(Error::Chain {
            k,
            reason: format!(
                "removing B(x_k, {r}) leaves {} horizon components at radius {horizon}, not 2",
                comps.len()
            ),
        });
    }
    Ok((comps, ex.dist, horizon))
}

fn component_of(comps: &[Component], v: &VertexId) -> Option<usize> {
    comps
        .iter()
        .position(|c| c.vertices.binary_search(v).is_ok())
}

/// Least vertex of `comp` at distance exactly `step` from the center.
fn next_point(
    comp: &Component,
    dist: &FxHashMap<VertexId, u32>,
    step: u32,
    k: i64,
) -> Result<VertexId> {
    comp.vertices
        .iter()
        .find(|v| dist[v] == step)
        .copied()
        .ok_or_else(|| Error::Chain {
            k,
            reason: format!("no vertex at distance {step} on the chosen side"),
        })
}

/// Builds `x_k` for `k` in `k_min..=k_max` starting from `x_0 = x0`.
///
/// At `x_0` the horizon component holding the least horizon vertex is `N_0`,
/// the other `P_0`. Each further point is the least vertex at distance
/// `2r + 1` on the far side of the previous ball, and every earlier chain
/// point is checked to lie on the near side.
pub fn build_chain<G: GraphOracle + ?Sized>(
    g: &G,
    x0: VertexId,
    r: u32,
    k_min: i64,
    k_max: i64,
) -> Result<ChainResult> {
    if r < 1 || k_min > 0 || k_max < 0 {
        return Err(Error::Precondition(
            "need r >= 1 and k_min <= 0 <= k_max".into(),
        ));
    }
    let step = 2 * r + 1;
    let reach = k_min.unsigned_abs().max(k_max as u64);
    let horizon = u32::try_from(reach * step as u64 + 10 * r as u64)
        .map_err(|_| Error::Overflow("chain horizon".into()))?;

    let (comps, dist, h0) = split_at(g, x0, r, horizon, 0)?;
    let least_horizon = |c: &Component| c.vertices.iter().filter(|v| dist[v] == h0).min().copied();
    let n_idx = if least_horizon(&comps[0]) < least_horizon(&comps[1]) {
        0
    } else {
        1
    };
    let start = [(Side::P, &comps[1 - n_idx]), (Side::N, &comps[n_idx])];

    let mut forward = Vec::new();
    let mut backward = Vec::new();
    let mut labels = Vec::new();
    for (side, comp) in start {
        let (sign, count, out) = match side {
            Side::P => (1i64, k_max, &mut forward),
            Side::N => (-1, -k_min, &mut backward),
        };
        if count == 0 {
            continue;
        }
        let mut chain = vec![x0, next_point(comp, &dist, step, sign)?];
        labels.push(SideLabel {
            k: sign,
            side,
            horizon: h0,
        });
        for j in 1..count {
            let k = sign * j;
            let xk = chain[j as usize];
            let (comps, dist, h) = split_at(g, xk, r, horizon, k)?;
            let prev = chain[j as usize - 1];
            let back = component_of(&comps, &prev).ok_or_else(|| Error::Chain {
                k,
                reason: format!(
                    "x_{} is not in a horizon component of X \\ B(x_k, {r})",
                    k - sign
                ),
            })?;
            let ahead = 1 - back;
            for earlier in &chain[..j as usize] {
                if component_of(&comps, earlier) == Some(ahead) {
                    return Err(Error::Chain {
                        k,
                        reason: format!(
                            "earlier chain point {earlier} is not separated from the far side"
                        ),
                    });
                }
            }
            let next = next_point(&comps[ahead], &dist, step, k + sign)?;
            chain.push(next);
            labels.push(SideLabel {
                k: k + sign,
                side,
                horizon: h,
            });
        }
        out.extend(chain.into_iter().skip(1));
    }
    let mut points: Vec<(i64, VertexId)> = backward
        .iter()
        .enumerate()
        .map(|(i, v)| (-(i as i64) - 1, *v))
        .collect();
    points.reverse();
    points.push((0, x0));
    points.extend(forward.iter().enumerate().map(|(i, v)| (i as i64 + 1, *v)));
    labels.sort_by_key(|l| l.k);
    Ok(ChainResult {
        r,
        step,
        points,
        side_labels: labels,
        horizon_note: format!("components touching radius {horizon} were taken as unbounded"),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairViolation {
    pub m: i64,
    pub n: i64,
    pub d: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainAudit {
    pub r: u32,
    pub step: u32,
    pub pairs_checked: usize,
    pub consecutive_exact: bool,
    /// Smallest distance between distinct chain points; above `2r` means disjoint balls.
    pub min_pair_distance: u32,
    /// Pairs outside `|n - m| <= d(x_m, x_n) <= (2r + 1)|n - m|`.
    pub bound_violations: Vec<PairViolation>,
    /// `(m, j, n)` where the BFS geodesic from `x_m` to `x_n` misses `B(x_j, r)`.
    pub separation_failures: Vec<(i64, i64, i64)>,
    pub separation_checks: usize,
    pub window_radius: u32,
    pub max_gap: u32,
    pub gap_bound: u32,
    /// `(gap, number of window vertices)`.
    pub gap_histogram: Vec<(u32, usize)>,
    /// `k ↦ x_k` audited as a `(2r + 1, 0)` embedding.
    pub qi: QiCheck,
    pub pass: bool,
}

/// BFS geodesic from `u` to `v`, choosing the least predecessor at each step.
fn geodesic<G: GraphOracle + ?Sized>(
    g: &G,
    u: VertexId,
    v: VertexId,
    d: u32,
) -> Result<Vec<VertexId>> {
    let ex = explore(g, u, d)?;
    let mut path = vec![v];
    let mut cur = v;
    for depth in (0..d).rev() {
        cur = ex.adj[&cur]
            .iter()
            .filter(|w| ex.dist.get(w) == Some(&depth))
            .min()
            .copied()
            .expect("a BFS predecessor exists");
        path.push(cur);
    }
    path.reverse();
    Ok(path)
}

fn exact<G: GraphOracle + ?Sized>(g: &G, u: VertexId, v: VertexId, cap: u32) -> Result<u32> {
    match distance(g, u, v, cap)? {
        Distance::Exact(d) => Ok(d),
        Distance::AboveCap => Err(Error::AboveCap { u, v, cap }),
    }
}

/// Pair bounds, disjointness, monotone separation along BFS geodesics,
/// the surjectivity gap on `B(x_0, window_radius)`, and a `(2r + 1, 0)` audit.
pub fn audit_chain<G: GraphOracle + ?Sized>(
    chain: &ChainResult,
    g: &G,
    window_radius: u32,
) -> Result<ChainAudit> {
    let (r, step) = (chain.r, chain.step);
    let pts = &chain.points;
    let len = pts.len();
    let (k_min, k_max) = chain.k_range();
    let cap = step * (k_max - k_min) as u32 + 1;
    let pairs: Vec<(usize, usize)> = (0..len)
        .flat_map(|i| (i + 1..len).map(move |j| (i, j)))
        .collect();

    let dists: Vec<Result<u32>> = pairs
        .par_iter()
        .map(|&(i, j)| exact(g, pts[i].1, pts[j].1, cap))
        .collect();
    let mut bound_violations = Vec::new();
    let mut consecutive_exact = true;
    let mut min_pair_distance = u32::MAX;
    let mut d_of = FxHashMap::default();
    for (&(i, j), d) in pairs.iter().zip(dists) {
        let d = d?;
        let gap = (pts[j].0 - pts[i].0) as u32;
        if gap == 1 {
            consecutive_exact &= d == step;
        }
        min_pair_distance = min_pair_distance.min(d);
        if d < gap || d > step * gap {
            bound_violations.push(PairViolation {
                m: pts[i].0,
                n: pts[j].0,
                d,
            });
        }
        d_of.insert((i, j), d);
    }

    // monotone separation along the geodesics BFS produces
    let balls: Vec<FxHashSet<VertexId>> = pts
        .par_iter()
        .map(|(_, x)| Ok(explore(g, *x, r)?.dist.into_keys().collect()))
        .collect::<Result<_>>()?;
    let sep: Vec<Result<(Vec<VertexId>, usize, usize)>> = pairs
        .par_iter()
        .filter(|(i, j)| j - i >= 2)
        .map(|&(i, j)| Ok((geodesic(g, pts[i].1, pts[j].1, d_of[&(i, j)])?, i, j)))
        .collect();
    let mut separation_failures = Vec::new();
    let mut separation_checks = 0;
    let mut cover: FxHashSet<VertexId> = pts.iter().map(|(_, v)| *v).collect();
    for s in sep {
        let (path, i, j) = s?;
        for (mid, ball) in balls.iter().enumerate().take(j).skip(i + 1) {
            separation_checks += 1;
            if !path.iter().any(|v| ball.contains(v)) {
                separation_failures.push((pts[i].0, pts[mid].0, pts[j].0));
            }
        }
    }
    for i in 0..len.saturating_sub(1) {
        cover.extend(geodesic(g, pts[i].1, pts[i + 1].1, step)?);
    }

    // distance from each window vertex to the chain points and connecting geodesics
    let x0 = chain.x(0).expect("chain contains x_0");
    let window = explore(g, x0, window_radius)?;
    let mut gap: FxHashMap<VertexId, u32> = cover.iter().map(|v| (*v, 0)).collect();
    let mut queue: VecDeque<VertexId> = {
        let mut seeds: Vec<VertexId> = cover.iter().copied().collect();
        seeds.sort_unstable();
        seeds.into()
    };
    let mut remaining = window.dist.keys().filter(|v| !gap.contains_key(*v)).count();
    while remaining > 0 {
        let Some(v) = queue.pop_front() else { break };
        let dv = gap[&v];
        for u in checked_neighbors(g, &v)? {
            if let Entry::Vacant(e) = gap.entry(u) {
                e.insert(dv + 1);
                if window.in_ball(&u) {
                    remaining -= 1;
                }
                queue.push_back(u);
            }
        }
    }
    let mut histogram: BTreeMap<u32, usize> = BTreeMap::new();
    for v in window.dist.keys() {
        *histogram.entry(gap[v]).or_default() += 1;
    }
    let max_gap = histogram.keys().next_back().copied().unwrap_or(0);
    let gap_bound = 3 * r + 1;

    let domain_points: Vec<VertexId> = pts.iter().map(|(k, _)| VertexId::int(*k)).collect();
    let line = FiniteMetric::from_matrix(
        domain_points,
        pts.iter()
            .flat_map(|(a, _)| pts.iter().map(move |(b, _)| Some(a.abs_diff(*b) as u32)))
            .collect(),
    )?;
    let map = QiMap::new(
        line,
        pts.iter().map(|(_, v)| Some(*v)).collect(),
        Constant::int(step as i64),
        Constant::ZERO,
    )?;
    let qi = check_qi(&map, g, map.default_cap()?)?;

    let pass = bound_violations.is_empty()
        && consecutive_exact
        && (len < 2 || min_pair_distance > 2 * r)
        && separation_failures.is_empty()
        && max_gap <= gap_bound
        && qi.passed();
    Ok(ChainAudit {
        r,
        step,
        pairs_checked: pairs.len(),
        consecutive_exact,
        min_pair_distance,
        bound_violations,
        separation_failures,
        separation_checks,
        window_radius,
        max_gap,
        gap_bound,
        gap_histogram: histogram.into_iter().collect(),
        qi,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{make_grid, make_ladder, make_tree};

    fn xs(chain: &ChainResult) -> Vec<VertexId> {
        chain.points.iter().map(|(_, v)| *v).collect()
    }

    #[test]
    fn separation_radius_examples() {
        let z = make_grid(1).unwrap();
        let samples: Vec<VertexId> = (-10..=10).map(VertexId::int).collect();
        assert_eq!(
            find_separation_radius(&z, &samples, 40, 5).unwrap(),
            SeparationRadius::Found(1)
        );
        let ladder = make_ladder();
        let samples = [
            VertexId::base(&[0, 0]),
            VertexId::base(&[3, 1]),
            VertexId::base(&[-7, 1]),
        ];
        assert_eq!(
            find_separation_radius(&ladder, &samples, 40, 5).unwrap(),
            SeparationRadius::Found(1)
        );
        let t = make_tree(3).unwrap();
        assert_eq!(
            find_separation_radius(&t, &[t.basepoint()], 8, 4).unwrap(),
            SeparationRadius::NotFound
        );
    }

    #[test]
    fn line_chains() {
        let z = make_grid(1).unwrap();
        let c = build_chain(&z, VertexId::int(0), 1, -5, 5).unwrap();
        assert_eq!(
            xs(&c),
            (-5..=5).map(|k| VertexId::int(3 * k)).collect::<Vec<_>>()
        );
        let c = build_chain(&z, VertexId::int(0), 2, -3, 3).unwrap();
        assert_eq!(
            xs(&c),
            (-3..=3).map(|k| VertexId::int(5 * k)).collect::<Vec<_>>()
        );
        let audit = audit_chain(&c, &z, 20).unwrap();
        assert!(audit.pass, "{audit:?}");
        // upper bounds hold with equality on a line
        assert_eq!(audit.min_pair_distance, 5);
    }

    #[test]
    fn ladder_chain_uses_least_vertex_tie_break() {
        let ladder = make_ladder();
        let c = build_chain(&ladder, VertexId::base(&[0, 0]), 1, -4, 4).unwrap();
        for (k, v) in &c.points {
            let expected = if *k > 0 {
                VertexId::base(&[2 * k, k.rem_euclid(2)])
            } else {
                VertexId::base(&[3 * k, 0])
            };
            assert_eq!(*v, expected, "k = {k}");
        }
        // the forward chain ends at (8, 0), so the window must stop near it
        let audit = audit_chain(&c, &ladder, 8).unwrap();
        assert!(audit.pass, "{audit:?}");
        assert!(audit.max_gap <= 4);
        assert!(!audit_chain(&c, &ladder, 20).unwrap().pass);
        let c = build_chain(&ladder, VertexId::base(&[0, 0]), 1, -8, 8).unwrap();
        let audit = audit_chain(&c, &ladder, 20).unwrap();
        assert!(audit.pass, "{audit:?}");
    }

    #[test]
    fn degenerate_window() {
        let z = make_grid(1).unwrap();
        let c = build_chain(&z, VertexId::int(0), 1, -2, 2).unwrap();
        let audit = audit_chain(&c, &z, 0).unwrap();
        assert_eq!(audit.gap_histogram, vec![(0, 1)]);
        assert_eq!(audit.max_gap, 0);
    }

    #[test]
    fn tree_is_not_two_ended() {
        let t = make_tree(3).unwrap();
        assert!(matches!(
            build_chain(&t, t.basepoint(), 1, -2, 2),
            Err(Error::Chain { k: 0, .. })
        ));
        assert!(matches!(
            build_chain(&t, t.basepoint(), 1, -8, 8),
            Err(Error::Budget(_))
        ));
    }
}
