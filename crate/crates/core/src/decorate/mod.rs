//! Decorated graphs: a base graph with a segment of length `g_alpha(n)`
//! hung at the geodesic vertex `x_{n²}` for every `n >= 1`.

mod cubical;
mod numeric;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{checked_neighbors, distance, Cone, Distance, GraphOracle, SharedOracle};
use crate::vertex::{Coords, VertexId};

pub use cubical::{cubical_distortion_audit, cubicalize, CubicalAudit, Cubicalized};
pub use numeric::{
    check_alpha, find_threshold, g_alpha, g_alpha_real, ratio_series, tip_distance, Affine,
    Polynomial, ThresholdQuery, ThresholdReport, TIE_EPSILON,
};

/// A bi-infinite geodesic `n ↦ x_n` in a base graph.
pub trait Labeling: Send + Sync + fmt::Debug {
    fn embed(&self, n: i64) -> VertexId;

    /// The `n` with `x_n == v`, if `v` is on the geodesic.
    fn index_of(&self, v: &VertexId) -> Option<i64>;
}

/// `x_n` is `template` with coordinate `axis` replaced by `n`.
#[derive(Clone, Debug)]
pub struct AxisLabeling {
    template: Coords,
    axis: usize,
}

impl AxisLabeling {
    pub fn new(template: Coords, axis: usize) -> Self {
        assert!(axis < template.len(), "axis out of range");
        AxisLabeling { template, axis }
    }
}

impl Labeling for AxisLabeling {
    fn embed(&self, n: i64) -> VertexId {
        VertexId::Base(self.template.with(self.axis, n))
    }

    fn index_of(&self, v: &VertexId) -> Option<i64> {
        let c = v.coords()?;
        if c.len() != self.template.len() {
            return None;
        }
        let n = c.get(self.axis);
        (self.template.with(self.axis, n) == *c).then_some(n)
    }
}

/// Range of the geodesic audit run before decorating.
#[derive(Clone, Copy, Debug)]
pub struct GeodesicAudit {
    /// Indices `-window..=window` are checked.
    pub window: i64,
    /// Distances are checked on pairs `(m, m + span)`.
    pub span: i64,
    pub stride: i64,
}

impl Default for GeodesicAudit {
    fn default() -> Self {
        GeodesicAudit {
            window: 200,
            span: 40,
            stride: 20,
        }
    }
}

/// Checks `d(x_m, x_n) = |m - n|` on the audit pairs: every consecutive
/// pair, and windows of length `span` starting every `stride` steps.
pub fn audit_geodesic<G: GraphOracle + ?Sized>(
    g: &G,
    labeling: &dyn Labeling,
    audit: GeodesicAudit,
) -> Result<()> {
    let w = audit.window;
    for m in -w..w {
        let (a, b) = (labeling.embed(m), labeling.embed(m + 1));
        if !checked_neighbors(g, &a)?.contains(&b) {
            return Err(Error::GeodesicAudit {
                m,
                n: m + 1,
                found: "not adjacent".into(),
                expected: 1,
            });
        }
    }
    let span = audit.span.min(2 * w).max(1);
    let mut m = -w;
    while m + span <= w {
        let found = distance(g, labeling.embed(m), labeling.embed(m + span), span as u32)?;
        if found != Distance::Exact(span as u32) {
            return Err(Error::GeodesicAudit {
                m,
                n: m + span,
                found: format!("{found:?}"),
                expected: span as u64,
            });
        }
        m += audit.stride.max(1);
    }
    Ok(())
}

/// The decorated graph `X_alpha` over a base oracle.
#[derive(Clone)]
pub struct DecoratedOracle {
    base: SharedOracle,
    labeling: Arc<dyn Labeling>,
    alpha: f64,
}

impl fmt::Debug for DecoratedOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DecoratedOracle")
            .field("base", &self.base.name())
            .field("alpha", &self.alpha)
            .finish()
    }
}

pub fn decorate(
    base: SharedOracle,
    labeling: Arc<dyn Labeling>,
    alpha: f64,
) -> Result<DecoratedOracle> {
    decorate_with(base, labeling, alpha, GeodesicAudit::default())
}

pub fn decorate_with(
    base: SharedOracle,
    labeling: Arc<dyn Labeling>,
    alpha: f64,
    audit: GeodesicAudit,
) -> Result<DecoratedOracle> {
    check_alpha(alpha)?;
    audit_geodesic(base.as_ref(), labeling.as_ref(), audit)?;
    Ok(DecoratedOracle {
        base,
        labeling,
        alpha,
    })
}

fn exact_sqrt(m: u64) -> Option<u64> {
    let r = (m as f64).sqrt() as u64;
    (r.saturating_sub(1)..=r + 1).find(|c| c.checked_mul(*c) == Some(m))
}

impl DecoratedOracle {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn base(&self) -> &SharedOracle {
        &self.base
    }

    pub fn labeling(&self) -> &dyn Labeling {
        self.labeling.as_ref()
    }

    /// Length of the segment hung at `x_{n²}`.
    pub fn segment_len(&self, n: u64) -> u64 {
        g_alpha(self.alpha, n).expect("alpha validated at construction")
    }

    pub fn attachment(&self, n: u64) -> VertexId {
        self.labeling.embed((n * n) as i64)
    }

    /// Far end of segment `n`; the attachment vertex when the segment is empty.
    pub fn tip(&self, n: u64) -> VertexId {
        match self.segment_len(n) {
            0 => self.attachment(n),
            k => VertexId::Seg { n, k },
        }
    }

    /// The `n` whose nonempty segment hangs at `v`, if any.
    pub fn segment_at(&self, v: &VertexId) -> Option<u64> {
        let m = self.labeling.index_of(v)?;
        if m < 1 {
            return None;
        }
        let n = exact_sqrt(m as u64)?;
        (self.segment_len(n) >= 1).then_some(n)
    }

    fn check_seg(&self, v: &VertexId, n: u64, k: u64) -> Result<u64> {
        let len = if n >= 1 { self.segment_len(n) } else { 0 };
        if n == 0 || k == 0 || k > len || n > i64::MAX as u64 / n.max(1) {
            return Err(Error::InvalidVertex {
                vertex: *v,
                reason: format!("segment {n} has length {len}"),
            });
        }
        Ok(len)
    }
}

impl GraphOracle for DecoratedOracle {
    fn name(&self) -> String {
        format!("decorate:{}:alpha={}", self.base.name(), self.alpha)
    }

    fn basepoint(&self) -> VertexId {
        self.labeling.embed(0)
    }

    fn degree_bound(&self) -> usize {
        self.base.degree_bound() + 1
    }

    fn neighbors(&self, v: &VertexId) -> Result<Vec<VertexId>> {
        match *v {
            VertexId::Base(_) => {
                let mut out = self.base.neighbors(v)?;
                if let Some(n) = self.segment_at(v) {
                    out.push(VertexId::Seg { n, k: 1 });
                }
                Ok(out)
            }
            VertexId::Seg { n, k } => {
                let len = self.check_seg(v, n, k)?;
                let mut out = Vec::with_capacity(2);
                out.push(if k == 1 {
                    self.attachment(n)
                } else {
                    VertexId::Seg { n, k: k - 1 }
                });
                if k < len {
                    out.push(VertexId::Seg { n, k: k + 1 });
                }
                Ok(out)
            }
            VertexId::Gadget { .. } => Err(Error::InvalidVertex {
                vertex: *v,
                reason: "decorated graphs have no gadget vertices".into(),
            }),
        }
    }

    fn tree_cone(&self, v: &VertexId) -> Option<Cone> {
        if !v.is_base() || self.segment_at(v).is_some() {
            return None;
        }
        self.base.tree_cone(v)
    }
}
