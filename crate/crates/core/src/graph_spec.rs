//! Textual graph specs: `grid:d`, `tree:q`, `cone`, `ladder`,
//! `interval:n`, `tripod:n` and `decorate:<base>:alpha=<a>`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::decorate::{decorate, DecoratedOracle, Labeling};
use crate::error::{Error, Result};
use crate::generators::{make_cone, make_finite, make_grid, make_ladder, make_tree, FiniteShape};
use crate::graph::{FiniteMetric, SharedOracle};

#[derive(Clone, Debug, PartialEq)]
pub enum GraphSpec {
    Grid(usize),
    Tree(u32),
    Cone,
    Ladder,
    Finite(FiniteShape),
    Decorated { base: Box<GraphSpec>, alpha: f64 },
}

/// An infinite graph built from a spec, with its distinguished geodesic.
#[derive(Clone)]
pub struct BuiltGraph {
    pub oracle: SharedOracle,
    pub labeling: Arc<dyn Labeling>,
    /// Set when the spec was a decoration.
    pub decorated: Option<DecoratedOracle>,
}

impl GraphSpec {
    pub fn is_finite(&self) -> bool {
        matches!(self, GraphSpec::Finite(_))
    }

    /// Builds an infinite graph; finite shapes are rejected.
    pub fn build(&self) -> Result<BuiltGraph> {
        let plain = |oracle: SharedOracle, labeling: Arc<dyn Labeling>| BuiltGraph {
            oracle,
            labeling,
            decorated: None,
        };
        Ok(match self {
            GraphSpec::Grid(d) => {
                let g = make_grid(*d)?;
                let l = g.labeling();
                plain(Arc::new(g), Arc::new(l))
            }
            GraphSpec::Tree(q) => {
                let g = make_tree(*q)?;
                let l = g.labeling();
                plain(Arc::new(g), Arc::new(l))
            }
            GraphSpec::Cone => {
                let g = make_cone();
                let l = g.labeling();
                plain(Arc::new(g), Arc::new(l))
            }
            GraphSpec::Ladder => {
                let g = make_ladder();
                let l = g.labeling();
                plain(Arc::new(g), Arc::new(l))
            }
            GraphSpec::Finite(shape) => {
                return Err(Error::Precondition(format!(
                    "{shape} is a finite shape, not an infinite graph"
                )))
            }
            GraphSpec::Decorated { base, alpha } => {
                let b = base.build()?;
                let xa = decorate(b.oracle, b.labeling.clone(), *alpha)?;
                BuiltGraph {
                    oracle: Arc::new(xa.clone()),
                    labeling: b.labeling,
                    decorated: Some(xa),
                }
            }
        })
    }

    pub fn finite(&self) -> Result<(FiniteShape, FiniteMetric)> {
        match self {
            GraphSpec::Finite(shape) => Ok((*shape, make_finite(*shape)?)),
            other => Err(Error::Precondition(format!(
                "{other} is not a finite shape"
            ))),
        }
    }
}

impl FromStr for GraphSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: &str| Error::parse("graph spec", s, reason);
        if let Some(rest) = s.strip_prefix("decorate:") {
            let (base, alpha) = rest
                .rsplit_once(":alpha=")
                .ok_or_else(|| bad("expected decorate:<base>:alpha=<a>"))?;
            let alpha: f64 = alpha.parse().map_err(|_| bad("alpha is not a number"))?;
            let base: GraphSpec = base.parse()?;
            if base.is_finite() {
                return Err(bad("only infinite graphs can be decorated"));
            }
            return Ok(GraphSpec::Decorated {
                base: Box::new(base),
                alpha,
            });
        }
        let (kind, arg) = match s.split_once(':') {
            Some((k, a)) => (k, Some(a)),
            None => (s, None),
        };
        let num = |what: &str| -> Result<u32> {
            arg.ok_or_else(|| bad(&format!("{kind} needs {what}")))?
                .parse()
                .map_err(|_| bad(&format!("{what} is not a nonnegative integer")))
        };
        match (kind, arg) {
            ("grid", _) => Ok(GraphSpec::Grid(num("a dimension")? as usize)),
            ("tree", _) => Ok(GraphSpec::Tree(num("a degree")?)),
            ("cone", None) => Ok(GraphSpec::Cone),
            ("ladder", None) => Ok(GraphSpec::Ladder),
            ("interval", _) => Ok(GraphSpec::Finite(FiniteShape::Interval(num("a length")?))),
            ("tripod", _) => Ok(GraphSpec::Finite(FiniteShape::Tripod(num("a leg length")?))),
            _ => Err(bad("unknown graph")),
        }
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::Grid(d) => write!(f, "grid:{d}"),
            GraphSpec::Tree(q) => write!(f, "tree:{q}"),
            GraphSpec::Cone => write!(f, "cone"),
            GraphSpec::Ladder => write!(f, "ladder"),
            GraphSpec::Finite(shape) => write!(f, "{shape}"),
            GraphSpec::Decorated { base, alpha } => write!(f, "decorate:{base}:alpha={alpha}"),
        }
    }
}
