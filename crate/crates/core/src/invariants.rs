//! Growth series, domination checks, ends profiles and the isometric
//! embedding of the decorated spine into the 3-regular tree.

use std::collections::hash_map::Entry;
use std::collections::VecDeque;

use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::Serialize;

use crate::decorate::DecoratedOracle;
use crate::error::{Error, Result};
use crate::generators::{make_tree, Tree};
use crate::graph::{annulus_components, distance, explore, sphere_counts, Distance, GraphOracle};
use crate::vertex::VertexId;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthSeries {
    pub graph: String,
    pub basepoint: VertexId,
    /// `values[n] = |B(x0, n)|`.
    pub values: Vec<u128>,
}

impl GrowthSeries {
    /// `|S(x0, n)|` recovered from consecutive ball sizes.
    pub fn spheres(&self) -> Vec<u128> {
        let mut out = Vec::with_capacity(self.values.len());
        let mut prev = 0;
        for v in &self.values {
            out.push(v - prev);
            prev = *v;
        }
        out
    }

    pub fn n_max(&self) -> usize {
        self.values.len().saturating_sub(1)
    }
}

pub fn growth_series<G: GraphOracle + ?Sized>(
    g: &G,
    x0: VertexId,
    n_max: u32,
) -> Result<GrowthSeries> {
    if n_max < 1 {
        return Err(Error::Precondition("growth series need n_max >= 1".into()));
    }
    let spheres = sphere_counts(g, x0, n_max)?;
    let mut values = Vec::with_capacity(spheres.len());
    let mut acc: u128 = 0;
    for s in spheres {
        acc = acc
            .checked_add(s)
            .ok_or_else(|| Error::Overflow("ball size".into()))?;
        values.push(acc);
    }
    Ok(GrowthSeries {
        graph: g.name(),
        basepoint: x0,
        values,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Dominance {
    pub c: u64,
    pub holds: bool,
    /// Smallest `n` with `f[n] > c·h[c·n + c]`.
    pub first_failure: Option<usize>,
    /// Largest `n` at which both sides could be evaluated, if any.
    pub evaluated_up_to: Option<usize>,
    /// True when `f` is longer than what `h` can be evaluated against.
    pub truncated: bool,
}

/// `f(n) <= c·h(c·n + c)` over every `n` for which both sides are known.
pub fn dominates(f: &[u128], h: &[u128], c: u64) -> Dominance {
    assert!(c >= 1, "domination constant must be positive");
    let c128 = c as u128;
    let mut evaluated_up_to = None;
    let mut first_failure = None;
    for (n, fv) in f.iter().enumerate() {
        let Some(idx) = (n as u64).checked_mul(c).and_then(|x| x.checked_add(c)) else {
            break;
        };
        let Some(hv) = h.get(idx as usize) else {
            break;
        };
        evaluated_up_to = Some(n);
        let rhs = hv.saturating_mul(c128);
        if *fv > rhs {
            first_failure = Some(n);
            break;
        }
    }
    let truncated =
        first_failure.is_none() && evaluated_up_to.map_or(!f.is_empty(), |n| n + 1 < f.len());
    Dominance {
        c,
        holds: first_failure.is_none(),
        first_failure,
        evaluated_up_to,
        truncated,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SandwichSide {
    /// `|B_X(x0, n)| <= |B_{X_alpha}(x0, n)|`
    BallLower,
    /// `|B_{X_alpha}(x0, n)| <= 2|B_X(x0, n)|`
    BallUpper,
    /// `|S_{X_alpha}(x0, n)| <= |S_X(x0, n)| + 1`
    Sphere,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SandwichViolation {
    pub n: usize,
    pub side: SandwichSide,
    pub lhs: u128,
    pub rhs: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SandwichReport {
    pub base: GrowthSeries,
    pub decorated: GrowthSeries,
    pub n_max: u32,
    pub pass: bool,
    pub first_violation: Option<SandwichViolation>,
}

/// Checks both ball inequalities and the sphere bound for every `n <= n_max`,
/// with both graphs based at `x_0`.
pub fn check_growth_sandwich<G: GraphOracle + ?Sized>(
    base: &G,
    decorated: &DecoratedOracle,
    n_max: u32,
) -> Result<SandwichReport> {
    let x0 = decorated.basepoint();
    let bx = growth_series(base, x0, n_max)?;
    let bxa = growth_series(decorated, x0, n_max)?;
    let (sx, sxa) = (bx.spheres(), bxa.spheres());
    let mut first_violation = None;
    for n in 0..=n_max as usize {
        let checks = [
            (SandwichSide::BallLower, bx.values[n], bxa.values[n]),
            (
                SandwichSide::BallUpper,
                bxa.values[n],
                bx.values[n].saturating_mul(2),
            ),
            (SandwichSide::Sphere, sxa[n], sx[n].saturating_add(1)),
        ];
        if let Some((side, lhs, rhs)) = checks.into_iter().find(|(_, l, r)| l > r) {
            first_violation = Some(SandwichViolation { n, side, lhs, rhs });
            break;
        }
    }
    Ok(SandwichReport {
        base: bx,
        decorated: bxa,
        n_max,
        pass: first_violation.is_none(),
        first_violation,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EndsRow {
    pub r: u32,
    #[serde(rename = "R")]
    pub big_r: u32,
    pub count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StableCount {
    pub r: u32,
    pub count: usize,
    /// The horizon radii over which the count was constant.
    pub window: (u32, u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndsProfile {
    pub graph: String,
    pub basepoint: VertexId,
    /// Ordered by `r`, then `R`.
    pub rows: Vec<EndsRow>,
    /// One entry per `r` whose last `window` counts agree.
    pub stabilized: Vec<StableCount>,
}

impl EndsProfile {
    pub fn stable_count(&self, r: u32) -> Option<usize> {
        self.stabilized.iter().find(|s| s.r == r).map(|s| s.count)
    }

    pub fn counts_for(&self, r: u32) -> Vec<(u32, usize)> {
        self.rows
            .iter()
            .filter(|row| row.r == r)
            .map(|row| (row.big_r, row.count))
            .collect()
    }
}

pub const DEFAULT_ENDS_WINDOW: u32 = 5;

/// Horizon-component counts of `B(x0, R) \ B(x0, r)` for every `r` in
/// `r_list` and `R = r+1 ..= r_max`.
pub fn ends_profile<G: GraphOracle + ?Sized>(
    g: &G,
    x0: VertexId,
    r_list: &[u32],
    r_max: u32,
    window: u32,
) -> Result<EndsProfile> {
    let top = r_list.iter().copied().max().unwrap_or(0);
    if window == 0 || r_max <= top + window {
        return Err(Error::Precondition(format!(
            "need R_max > max(r) + window, got R_max = {r_max}, max(r) = {top}, window = {window}"
        )));
    }
    let ex = explore(g, x0, r_max)?;
    let mut radii: Vec<u32> = r_list.to_vec();
    radii.sort_unstable();
    radii.dedup();
    let per_r: Vec<(Vec<EndsRow>, Option<StableCount>)> = radii
        .par_iter()
        .map(|&r| {
            let rows: Vec<EndsRow> = (r + 1..=r_max)
                .map(|big_r| EndsRow {
                    r,
                    big_r,
                    count: annulus_components(&ex, r, big_r)
                        .iter()
                        .filter(|c| c.touches_horizon)
                        .count(),
                })
                .collect();
            let tail = &rows[rows.len() - window as usize..];
            let stable = tail
                .iter()
                .all(|row| row.count == tail[0].count)
                .then(|| StableCount {
                    r,
                    count: tail[0].count,
                    window: (tail[0].big_r, r_max),
                });
            (rows, stable)
        })
        .collect();
    let mut rows = Vec::new();
    let mut stabilized = Vec::new();
    for (r_rows, stable) in per_r {
        rows.extend(r_rows);
        stabilized.extend(stable);
    }
    Ok(EndsProfile {
        graph: g.name(),
        basepoint: x0,
        rows,
        stabilized,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeEmbedding {
    pub radius: u32,
    /// `(vertex of Y, image in the 3-regular tree)`, sorted by the first entry.
    pub map: Vec<(VertexId, VertexId)>,
    pub pairs_checked: usize,
    pub violations: usize,
}

/// Image of a vertex of `Y` in the 3-regular tree: the spine goes to the
/// tree's spine, segment `n` to the first-child ray below spine vertex `n²`.
fn tree_image(xa: &DecoratedOracle, v: &VertexId) -> Option<VertexId> {
    match *v {
        VertexId::Seg { n, k } => Some(Tree::vertex((n * n) as i64, k as i64, 0)),
        _ => xa.labeling().index_of(v).map(|i| Tree::vertex(i, 0, 0)),
    }
}

/// Neighbors of `v` inside `Y` (geodesic plus segments).
fn y_neighbors(xa: &DecoratedOracle, v: &VertexId) -> Result<Vec<VertexId>> {
    match *v {
        VertexId::Seg { .. } => xa.neighbors(v),
        _ => {
            let i = xa
                .labeling()
                .index_of(v)
                .ok_or_else(|| Error::InvalidVertex {
                    vertex: *v,
                    reason: "not on the decorated geodesic".into(),
                })?;
            let mut out = vec![xa.labeling().embed(i - 1), xa.labeling().embed(i + 1)];
            if let Some(n) = xa.segment_at(v) {
                out.push(VertexId::Seg { n, k: 1 });
            }
            Ok(out)
        }
    }
}

/// Maps `Y ∩ B_Y(x_0, radius)` into the 3-regular tree and verifies
/// `d_Y(u, v) = d_T(image u, image v)` on every pair.
pub fn embed_y_in_tree(xa: &DecoratedOracle, radius: u32) -> Result<TreeEmbedding> {
    if radius < 1 {
        return Err(Error::Precondition("radius must be positive".into()));
    }
    // B_Y(x_0, radius) by BFS inside Y
    let x0 = xa.labeling().embed(0);
    let mut dist: FxHashMap<VertexId, u32> = FxHashMap::default();
    let mut order = vec![x0];
    dist.insert(x0, 0);
    let mut queue = VecDeque::from([x0]);
    while let Some(v) = queue.pop_front() {
        let dv = dist[&v];
        if dv == radius {
            continue;
        }
        for u in y_neighbors(xa, &v)? {
            if let Entry::Vacant(e) = dist.entry(u) {
                e.insert(dv + 1);
                order.push(u);
                queue.push_back(u);
            }
        }
    }
    order.sort_unstable();
    let members: FxHashSet<VertexId> = order.iter().copied().collect();
    let map: Vec<(VertexId, VertexId)> = order
        .iter()
        .map(|v| {
            tree_image(xa, v)
                .map(|t| (*v, t))
                .ok_or_else(|| Error::InvalidVertex {
                    vertex: *v,
                    reason: "no tree image".into(),
                })
        })
        .collect::<Result<_>>()?;

    let tree = make_tree(3)?;
    let cap = 2 * radius + 2;
    let rows: Vec<Result<usize>> = (0..order.len())
        .into_par_iter()
        .map(|i| {
            // d_Y from order[i], by BFS restricted to the ball (balls in a tree are convex)
            let mut dy: FxHashMap<VertexId, u32> = FxHashMap::default();
            dy.insert(order[i], 0);
            let mut queue = VecDeque::from([order[i]]);
            while let Some(v) = queue.pop_front() {
                let dv = dy[&v];
                for u in y_neighbors(xa, &v)? {
                    if members.contains(&u) && !dy.contains_key(&u) {
                        dy.insert(u, dv + 1);
                        queue.push_back(u);
                    }
                }
            }
            let mut checked = 0;
            for j in i + 1..order.len() {
                let d_y = dy[&order[j]];
                let d_t = distance(&tree, map[i].1, map[j].1, cap)?;
                if d_t != Distance::Exact(d_y) {
                    return Err(Error::TreeEmbedding {
                        u: order[i],
                        v: order[j],
                        d_y,
                        d_t: format!("{d_t:?}"),
                    });
                }
                checked += 1;
            }
            Ok(checked)
        })
        .collect();
    let mut pairs_checked = 0;
    for r in rows {
        pairs_checked += r?;
    }
    Ok(TreeEmbedding {
        radius,
        map,
        pairs_checked,
        violations: 0,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::decorate::decorate;
    use crate::generators::{make_grid, make_tree};

    fn series<G: GraphOracle>(g: &G, n: u32) -> Vec<u128> {
        growth_series(g, g.basepoint(), n).unwrap().values
    }

    #[test]
    fn growth_examples() {
        assert_eq!(series(&make_grid(1).unwrap(), 3), vec![1, 3, 5, 7]);
        assert_eq!(series(&make_grid(2).unwrap(), 2), vec![1, 5, 13]);
        assert_eq!(series(&make_tree(3).unwrap(), 3), vec![1, 4, 10, 22]);
        assert!(growth_series(&make_grid(1).unwrap(), VertexId::int(0), 0).is_err());
    }

    #[test]
    fn tree_growth_closed_form_far_out() {
        // |B(n)| = 1 + 3(2^n - 1) in the 3-regular tree
        let s = series(&make_tree(3).unwrap(), 100);
        for (n, v) in s.iter().enumerate() {
            assert_eq!(*v, 1 + 3 * ((1u128 << n) - 1));
        }
    }

    #[test]
    fn dominance_examples() {
        let z = series(&make_grid(1).unwrap(), 50);
        let z2 = series(&make_grid(2).unwrap(), 50);
        let d = dominates(&z[..21], &z2, 1);
        assert!(d.holds && !d.truncated);
        assert!(dominates(&z2, &z2, 1).holds);
        let d = dominates(&z2[..21], &z, 2);
        assert!(!d.holds);
        // 2n²+2n+1 <= 2(2(2n+2)+1) first fails at n = 5
        assert_eq!(d.first_failure, Some(5));
    }

    #[test]
    fn dominance_reports_truncation() {
        let z = series(&make_grid(1).unwrap(), 10);
        let d = dominates(&z, &z, 2);
        assert!(d.holds);
        assert!(d.truncated);
        assert_eq!(d.evaluated_up_to, Some(4));
    }

    #[test]
    fn sandwich_on_line_and_first_sphere() {
        let z = make_grid(1).unwrap();
        let xa = decorate(Arc::new(z.clone()), Arc::new(z.labeling()), 1.0).unwrap();
        let report = check_growth_sandwich(&z, &xa, 100).unwrap();
        assert!(report.pass, "{:?}", report.first_violation);
        let (s, sa) = (report.base.spheres(), report.decorated.spheres());
        assert_eq!(s[1], sa[1]);
    }

    #[test]
    fn ends_examples() {
        let z = make_grid(1).unwrap();
        let p = ends_profile(&z, z.basepoint(), &[1], 20, 5).unwrap();
        assert_eq!(p.stable_count(1), Some(2));
        let z2 = make_grid(2).unwrap();
        let p = ends_profile(&z2, z2.basepoint(), &[1, 2, 3], 20, 5).unwrap();
        for r in 1..=3 {
            assert_eq!(p.stable_count(r), Some(1));
        }
        assert!(ends_profile(&z, z.basepoint(), &[3], 8, 5).is_err());
    }

    #[test]
    fn decorated_line_keeps_two_ends() {
        let z = make_grid(1).unwrap();
        let xa = decorate(Arc::new(z.clone()), Arc::new(z.labeling()), 1.0).unwrap();
        let p = ends_profile(&xa, xa.basepoint(), &[1, 5, 10], 60, 5).unwrap();
        for r in [1, 5, 10] {
            assert_eq!(p.stable_count(r), Some(2));
        }
    }

    #[test]
    fn y_embedding_examples() {
        let z = make_grid(1).unwrap();
        let xa = decorate(Arc::new(z.clone()), Arc::new(z.labeling()), 1.0).unwrap();
        let emb = embed_y_in_tree(&xa, 25).unwrap();
        assert_eq!(emb.violations, 0);
        let n = emb.map.len();
        assert_eq!(emb.pairs_checked, n * (n - 1) / 2);
        // d(t_2, t_3) = 1 + 5 + 2 in both Y and T
        let t = make_tree(3).unwrap();
        let image = |v: VertexId| emb.map.iter().find(|(y, _)| *y == v).unwrap().1;
        let d = distance(&t, image(xa.tip(2)), image(xa.tip(3)), 50).unwrap();
        assert_eq!(d, Distance::Exact(8));
        assert_eq!(
            distance(&xa, xa.tip(2), xa.tip(3), 50).unwrap(),
            Distance::Exact(8)
        );
    }
}
