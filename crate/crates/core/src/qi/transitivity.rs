//! Local obstruction to coarse transitivity: no `(K, K)` embedding of
//! `B(x, R)` into `g` sends `x` within `K` of `y`.

use serde::Serialize;

use super::search::{search_embedding, SearchOutcome, SearchParams, Window};
use super::QiMap;
use crate::constant::Constant;
use crate::error::{Error, Result};
use crate::graph::{bfs_ball, FiniteMetric, GraphOracle};
use crate::vertex::VertexId;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PinAttempt {
    pub image: VertexId,
    pub nodes_explored: u64,
    pub window: Window,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum TransitivityOutcome {
    /// Every admissible image of `x` was refuted by exhaustive search.
    Refuted {
        x: VertexId,
        y: VertexId,
        k: u32,
        r: u32,
        domain_size: usize,
        attempts: Vec<PinAttempt>,
    },
    /// A local embedding exists (`found`) or the budget ran out first.
    Inconclusive {
        x: VertexId,
        y: VertexId,
        k: u32,
        r: u32,
        found: Option<QiMap>,
        note: String,
    },
}

impl TransitivityOutcome {
    pub fn is_refuted(&self) -> bool {
        matches!(self, TransitivityOutcome::Refuted { .. })
    }
}

/// Searches for a `(K, K)` embedding of the ball `B(x, R)`, with the
/// metric of `g`, into `g` that sends `x` to some `y'` with `d(y, y') <= K`.
pub fn refute_coarse_transitivity<G: GraphOracle + ?Sized>(
    g: &G,
    x: VertexId,
    y: VertexId,
    k: u32,
    r: u32,
    budget: u64,
) -> Result<TransitivityOutcome> {
    if r < 1 || k < 1 {
        return Err(Error::Precondition("need R >= 1 and K >= 1".into()));
    }
    let ball = bfs_ball(g, x, r)?;
    let points: Vec<VertexId> = ball.vertices.iter().map(|(v, _)| *v).collect();
    let domain = FiniteMetric::from_oracle(g, points, 2 * r)?;
    let kc = Constant::int(k as i64);
    let mut targets: Vec<VertexId> = bfs_ball(g, y, k)?
        .vertices
        .iter()
        .map(|(v, _)| *v)
        .collect();
    targets.sort_unstable();

    let mut attempts = Vec::new();
    let mut remaining = budget;
    for target in targets {
        let mut params = SearchParams::new(kc, kc, vec![(x, target)]);
        params.budget = remaining;
        match search_embedding(&domain, g, &params)? {
            SearchOutcome::Found { map, .. } => {
                return Ok(TransitivityOutcome::Inconclusive {
                    x,
                    y,
                    k,
                    r,
                    found: Some(map),
                    note: format!("a local ({k}, {k}) embedding sends {x} to {target}"),
                })
            }
            SearchOutcome::RefutedByExhaustion {
                nodes_explored,
                window,
            } => {
                remaining -= nodes_explored;
                attempts.push(PinAttempt {
                    image: target,
                    nodes_explored,
                    window,
                });
            }
            SearchOutcome::BudgetExceeded { .. } => {
                return Ok(TransitivityOutcome::Inconclusive {
                    x,
                    y,
                    k,
                    r,
                    found: None,
                    note: format!("node budget {budget} exhausted while pinning {x} to {target}"),
                })
            }
        }
    }
    Ok(TransitivityOutcome::Refuted {
        x,
        y,
        k,
        r,
        domain_size: domain.len(),
        attempts,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::decorate::decorate;
    use crate::generators::{make_cone, make_grid};
    use crate::qi::{check_qi, DEFAULT_BUDGET};

    #[test]
    fn line_is_inconclusive_with_a_translation() {
        let z = make_grid(1).unwrap();
        let out = refute_coarse_transitivity(
            &z,
            VertexId::int(0),
            VertexId::int(17),
            1,
            5,
            DEFAULT_BUDGET,
        )
        .unwrap();
        let TransitivityOutcome::Inconclusive {
            found: Some(map), ..
        } = out
        else {
            panic!("{out:?}");
        };
        assert!(check_qi(&map, &z, 30).unwrap().passed());
    }

    #[test]
    fn branch_point_cannot_go_to_a_plain_spine_vertex() {
        let z = make_grid(1).unwrap();
        let xa = decorate(Arc::new(z.clone()), Arc::new(z.labeling()), 1.0).unwrap();
        // x_3025 carries a segment of length 5; x_2970 sits between x_2916 and x_3025
        assert_eq!(xa.segment_len(55), 5);
        let out = refute_coarse_transitivity(
            &xa,
            VertexId::int(3025),
            VertexId::int(2970),
            1,
            4,
            DEFAULT_BUDGET,
        )
        .unwrap();
        assert!(out.is_refuted(), "{out:?}");
        let TransitivityOutcome::Refuted { attempts, .. } = out else {
            unreachable!()
        };
        assert_eq!(attempts.len(), 3);
    }

    #[test]
    fn cone_is_not_coarsely_transitive_at_small_scale() {
        let cone = make_cone();
        let out = refute_coarse_transitivity(
            &cone,
            VertexId::base(&[6, 0]),
            VertexId::base(&[0, 0]),
            1,
            3,
            DEFAULT_BUDGET,
        )
        .unwrap();
        assert!(out.is_refuted(), "{out:?}");
    }
}
