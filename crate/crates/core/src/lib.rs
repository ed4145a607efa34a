//! Finite-scale laboratory for the coarse geometry of infinite, locally
//! finite graphs.
//!
//! Graphs are lazy neighbor oracles ([`graph::GraphOracle`]); every
//! computation runs on BFS snapshots of explicit radius. On top of that:
//! growth series and ends profiles ([`invariants`]), the decorated graphs
//! `X_alpha` ([`decorate`]), bounded quasi-isometric embedding search
//! ([`qi`]) and the ball-chain quasi-isometry to `Z` for two-ended graphs
//! ([`chain`]).

pub mod chain;
pub mod constant;
pub mod decorate;
pub mod error;
pub mod generators;
pub mod graph;
pub mod graph_spec;
pub mod invariants;
pub mod qi;
pub mod vertex;

pub use error::{Error, Result};
pub use vertex::{Coords, VertexId};
