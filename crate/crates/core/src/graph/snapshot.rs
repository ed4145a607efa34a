//! Plain-text edge-list snapshots of a ball.
//!
//! ```text
//! # center=b:0,0 radius=1
//! b:-1,0 b:0,0
//! b:0,-1 b:0,0
//! ```

use super::FiniteBall;
use crate::error::{Error, Result};
use crate::vertex::VertexId;

pub fn write_snapshot(ball: &FiniteBall) -> String {
    let mut out = format!("# center={} radius={}\n", ball.center, ball.radius);
    for (u, v) in &ball.edges {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// `(center, radius, edges)` as read back from a snapshot.
pub type Snapshot = (VertexId, u32, Vec<(VertexId, VertexId)>);

/// Inverse of [`write_snapshot`].
pub fn parse_snapshot(text: &str) -> Result<Snapshot> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::parse("snapshot", text, "empty input"))?;
    let fields = header.strip_prefix("# ").ok_or_else(|| {
        Error::parse(
            "snapshot header",
            header,
            "expected '# center=.. radius=..'",
        )
    })?;
    let mut center = None;
    let mut radius = None;
    for field in fields.split_whitespace() {
        match field.split_once('=') {
            Some(("center", v)) => center = Some(v.parse::<VertexId>()?),
            Some(("radius", r)) => {
                radius = Some(
                    r.parse::<u32>()
                        .map_err(|e| Error::parse("snapshot radius", r, e.to_string()))?,
                )
            }
            _ => return Err(Error::parse("snapshot header", header, "unknown field")),
        }
    }
    let (Some(center), Some(radius)) = (center, radius) else {
        return Err(Error::parse(
            "snapshot header",
            header,
            "missing center or radius",
        ));
    };
    let mut edges = Vec::new();
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let (a, b) = line
            .split_once(' ')
            .ok_or_else(|| Error::parse("snapshot edge", line, "expected '<vid> <vid>'"))?;
        edges.push((a.parse()?, b.trim().parse()?));
    }
    Ok((center, radius, edges))
}
