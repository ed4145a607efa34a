//! Degree reduction: every vertex of degree `d >= 4` becomes a path of `d`
//! gadget vertices, port `i` carrying the edge to its `i`-th neighbor.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{bfs_ball, checked_neighbors, distance, GraphOracle, SharedOracle};
use crate::vertex::VertexId;

/// Vertices of degree at most this keep their identity.
const MAX_DEGREE: usize = 3;

#[derive(Clone)]
pub struct Cubicalized {
    inner: SharedOracle,
}

pub fn cubicalize(g: SharedOracle) -> Cubicalized {
    Cubicalized { inner: g }
}

impl Cubicalized {
    pub fn inner(&self) -> &SharedOracle {
        &self.inner
    }

    /// Image of an original vertex: itself, or port 0 of its gadget.
    pub fn image(&self, v: &VertexId) -> Result<VertexId> {
        let ns = checked_neighbors(self.inner.as_ref(), v)?;
        self.gadget_or_self(v, ns.len(), 0)
    }

    fn gadget_or_self(&self, v: &VertexId, degree: usize, port: usize) -> Result<VertexId> {
        if degree <= MAX_DEGREE {
            return Ok(*v);
        }
        match v {
            VertexId::Base(base) if port < u8::MAX as usize => Ok(VertexId::Gadget {
                base: *base,
                port: port as u8,
            }),
            _ => Err(Error::InvalidVertex {
                vertex: *v,
                reason: "only base vertices of degree < 255 can be replaced by gadgets".into(),
            }),
        }
    }

    /// Where the edge `{v, u}` lands on `u`'s side.
    fn far_end(&self, v: &VertexId, u: &VertexId) -> Result<VertexId> {
        let nu = checked_neighbors(self.inner.as_ref(), u)?;
        if nu.len() <= MAX_DEGREE {
            return Ok(*u);
        }
        let port = nu
            .iter()
            .position(|w| w == v)
            .ok_or(Error::Asymmetric { from: *v, to: *u })?;
        self.gadget_or_self(u, nu.len(), port)
    }
}

impl GraphOracle for Cubicalized {
    fn name(&self) -> String {
        format!("cubical({})", self.inner.name())
    }

    fn basepoint(&self) -> VertexId {
        self.image(&self.inner.basepoint())
            .expect("basepoint is valid")
    }

    fn degree_bound(&self) -> usize {
        MAX_DEGREE
    }

    fn neighbors(&self, v: &VertexId) -> Result<Vec<VertexId>> {
        match *v {
            VertexId::Gadget { base, port } => {
                let orig = VertexId::Base(base);
                let ns = checked_neighbors(self.inner.as_ref(), &orig)?;
                let d = ns.len();
                let p = port as usize;
                if d <= MAX_DEGREE || p >= d {
                    return Err(Error::InvalidVertex {
                        vertex: *v,
                        reason: format!("original vertex has degree {d}"),
                    });
                }
                let mut out = Vec::with_capacity(3);
                if p > 0 {
                    out.push(VertexId::Gadget {
                        base,
                        port: port - 1,
                    });
                }
                if p + 1 < d {
                    out.push(VertexId::Gadget {
                        base,
                        port: port + 1,
                    });
                }
                out.push(self.far_end(&orig, &ns[p])?);
                out.sort_unstable();
                Ok(out)
            }
            _ => {
                let ns = checked_neighbors(self.inner.as_ref(), v)?;
                if ns.len() > MAX_DEGREE {
                    return Err(Error::InvalidVertex {
                        vertex: *v,
                        reason: "replaced by a gadget path; address its ports".into(),
                    });
                }
                let mut out = ns
                    .iter()
                    .map(|u| self.far_end(v, u))
                    .collect::<Result<Vec<_>>>()?;
                out.sort_unstable();
                Ok(out)
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CubicalAudit {
    pub seed: u64,
    pub center: VertexId,
    pub radius: u32,
    /// `(u, v, d_original, d_cubical)`.
    pub pairs: Vec<(VertexId, VertexId, u32, u32)>,
    /// Distortion constant: `d <= d_cubical <= factor·d + factor`.
    pub factor: u32,
    pub max_degree_seen: usize,
    pub pass: bool,
}

/// Compares distances before and after cubicalization on `pairs` seeded
/// random pairs from `B(center, radius)`, and checks the degree bound on
/// the image of that ball.
pub fn cubical_distortion_audit(
    original: SharedOracle,
    center: VertexId,
    radius: u32,
    pairs: usize,
    seed: u64,
) -> Result<CubicalAudit> {
    let cub = cubicalize(original.clone());
    let ball = bfs_ball(original.as_ref(), center, radius)?;
    let factor = original.degree_bound() as u32;
    let cap = factor * 2 * radius + factor + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(pairs);
    let mut pass = true;
    for _ in 0..pairs {
        let u = ball.vertices[rng.random_range(0..ball.len())].0;
        let v = ball.vertices[rng.random_range(0..ball.len())].0;
        let d = distance(original.as_ref(), u, v, 2 * radius)?
            .exact()
            .ok_or(Error::AboveCap {
                u,
                v,
                cap: 2 * radius,
            })?;
        let (cu, cv) = (cub.image(&u)?, cub.image(&v)?);
        let dc = distance(&cub, cu, cv, cap)?
            .exact()
            .ok_or(Error::AboveCap { u: cu, v: cv, cap })?;
        pass &= d <= dc && dc <= factor * d + factor;
        out.push((u, v, d, dc));
    }
    let image_center = cub.image(&center)?;
    let image_ball = bfs_ball(&cub, image_center, radius)?;
    let mut max_degree_seen = 0;
    for (w, _) in &image_ball.vertices {
        max_degree_seen = max_degree_seen.max(cub.neighbors(w)?.len());
    }
    pass &= max_degree_seen <= MAX_DEGREE;
    Ok(CubicalAudit {
        seed,
        center,
        radius,
        pairs: out,
        factor,
        max_degree_seen,
        pass,
    })
}
