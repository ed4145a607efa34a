//! Subcommand definitions and their drivers.

use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::Subcommand;
use serde::Serialize;

use coarselab::chain::{
    audit_chain, build_chain, find_separation_radius, sample_vertices, SeparationRadius,
};
use coarselab::constant::Constant;
use coarselab::decorate::{
    cubical_distortion_audit, decorate, find_threshold, g_alpha, ratio_series, tip_distance,
    Affine, DecoratedOracle, Polynomial, ThresholdQuery,
};
use coarselab::graph::{bfs_ball, distance, write_snapshot, Distance, FiniteMetric, GraphOracle};
use coarselab::graph_spec::{BuiltGraph, GraphSpec};
use coarselab::invariants::{
    check_growth_sandwich, embed_y_in_tree, ends_profile, growth_series, DEFAULT_ENDS_WINDOW,
};
use coarselab::qi::{
    base_proximity_audit, endpoint_order_census, refute_coarse_transitivity, search_embedding,
    SearchOutcome, SearchParams, TransitivityOutcome, DEFAULT_BUDGET,
};
use coarselab::{Coords, VertexId};

use crate::output::{Sink, Table};

pub enum Status {
    Pass,
    Violation(String),
    Budget(String),
}

/// Domain of a search: a finite shape, or a ball `ball:<R>:<graph>` around
/// the graph's basepoint with the restricted metric.
#[derive(Clone, Debug)]
pub enum DomainSpec {
    Shape(GraphSpec),
    Ball { radius: u32, graph: GraphSpec },
}

impl FromStr for DomainSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if let Some(rest) = s.strip_prefix("ball:") {
            let (r, g) = rest
                .split_once(':')
                .ok_or_else(|| format!("expected ball:<R>:<graph>, got {s:?}"))?;
            let radius = r.parse().map_err(|_| format!("bad ball radius {r:?}"))?;
            let graph: GraphSpec = g.parse().map_err(|e| format!("{e}"))?;
            if graph.is_finite() {
                return Err("ball domains need an infinite graph".into());
            }
            return Ok(DomainSpec::Ball { radius, graph });
        }
        let spec: GraphSpec = s.parse().map_err(|e| format!("{e}"))?;
        if !spec.is_finite() {
            return Err(format!("{s} is not a finite shape; use ball:<R>:{s}"));
        }
        Ok(DomainSpec::Shape(spec))
    }
}

impl std::fmt::Display for DomainSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DomainSpec::Shape(s) => write!(f, "{s}"),
            DomainSpec::Ball { radius, graph } => write!(f, "ball:{radius}:{graph}"),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Ball sizes |B(x0, n)| for n = 0..=N.
    Growth {
        graph: GraphSpec,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        basepoint: Option<String>,
    },
    /// Horizon-component counts of B(x0, R) minus B(x0, r).
    Ends {
        graph: GraphSpec,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        r: Vec<u32>,
        #[arg(long = "R-max", default_value_t = 40)]
        r_max: u32,
        #[arg(long, default_value_t = DEFAULT_ENDS_WINDOW)]
        window: u32,
        #[arg(long)]
        basepoint: Option<String>,
    },
    /// Table of g_alpha(m) and tip distances m² + g_alpha(m).
    DecorateInfo {
        #[arg(long, default_value = "grid:1")]
        base: GraphSpec,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 12)]
        m: u64,
        /// Also measure each tip distance by BFS and compare.
        #[arg(long)]
        verify: bool,
    },
    /// Compare growth of a graph and its decoration.
    Sandwich {
        #[arg(long)]
        base: GraphSpec,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        n: u32,
    },
    /// Pinned search for an (L, A)-quasi-isometric embedding.
    Qisearch {
        #[arg(long)]
        domain: DomainSpec,
        #[arg(long)]
        codomain: GraphSpec,
        #[arg(long = "L")]
        l: Constant,
        #[arg(long = "A")]
        a: Constant,
        /// `<domain point>:<codomain vertex>`; `center` names the domain center.
        #[arg(long, required = true)]
        pin: Vec<String>,
        #[arg(long)]
        window_center: Option<String>,
        #[arg(long)]
        window_radius: Option<u32>,
        #[arg(long)]
        budget: Option<u64>,
        /// For decorated codomains, audit distance to the base of any map found.
        #[arg(long)]
        proximity: bool,
    },
    /// All (L, A) maps of the n-tripod into the line with f(0) = 0.
    Census {
        #[arg(long)]
        n: u32,
        #[arg(long = "L")]
        l: Constant,
        #[arg(long = "A")]
        a: Constant,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Look for a ball around x admitting no (K, K) map with x near y.
    RefuteCt {
        graph: GraphSpec,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long = "K")]
        k: u32,
        #[arg(long = "R")]
        r: u32,
        /// Retry with R + 1, ... up to this radius while inconclusive.
        #[arg(long = "R-max")]
        r_max: Option<u32>,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Bi-infinite chain of separating balls, with its audit.
    Chain {
        graph: GraphSpec,
        #[arg(long)]
        x0: Option<String>,
        /// Ball radius; found from seeded samples when omitted.
        #[arg(long)]
        r: Option<u32>,
        #[arg(long, default_value_t = -8, allow_hyphen_values = true)]
        k_min: i64,
        #[arg(long, default_value_t = 8, allow_hyphen_values = true)]
        k_max: i64,
        #[arg(long, default_value_t = 20)]
        window: u32,
        #[arg(long, default_value_t = 8)]
        samples: usize,
        #[arg(long, default_value_t = 10)]
        sample_radius: u32,
        /// Horizon radius for the separation test.
        #[arg(long = "R", default_value_t = 12)]
        big_r: u32,
        #[arg(long, default_value_t = 5)]
        r_max: u32,
    },
    /// Smallest N past which g_beta beats the (L, A, M, D) bound.
    Threshold {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long = "L")]
        l: f64,
        #[arg(long = "A")]
        a: f64,
        #[arg(long = "M")]
        m: f64,
        #[arg(long = "D")]
        d: f64,
        #[arg(long, default_value_t = 10)]
        check_factor: u64,
        #[arg(long, default_value_t = 10_000_000)]
        ceiling: u64,
    },
    /// T(g_alpha(p(x))) / g_beta(x) at the given points.
    Ratio {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        /// Points, plain numbers or `e^k`.
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<String>,
        /// `a,b` for T(y) = a·y + b.
        #[arg(long, allow_hyphen_values = true)]
        affine: Option<String>,
        /// Coefficients of p, lowest degree first.
        #[arg(long, allow_hyphen_values = true)]
        poly: Option<String>,
        /// Exit 1 unless the ratios strictly decrease.
        #[arg(long)]
        require_decreasing: bool,
    },
    /// Isometric embedding of the spine-and-segments subgraph into the cubic tree.
    EmbedTree {
        #[arg(long, default_value = "grid:1")]
        base: GraphSpec,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 25)]
        radius: u32,
    },
    /// Distance distortion of the bounded-degree replacement on sampled pairs.
    CubicalizeAudit {
        graph: GraphSpec,
        #[arg(long, default_value_t = 6)]
        radius: u32,
        #[arg(long, default_value_t = 50)]
        pairs: usize,
        #[arg(long)]
        center: Option<String>,
    },
    /// Edge list of a ball, in the snapshot text format.
    ExportSnapshot {
        graph: GraphSpec,
        #[arg(long)]
        radius: u32,
        #[arg(long)]
        center: Option<String>,
    },
}

fn budget(flag: Option<u64>) -> Result<u64> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var("COARSELAB_BUDGET") {
        Ok(s) => s
            .trim()
            .parse()
            .with_context(|| format!("COARSELAB_BUDGET={s:?} is not a node count")),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

/// `x:n` is the n-th vertex of the distinguished geodesic, `b:..`, `s:n:k`
/// and `g:..` are tagged vertex ids, and bare `1,2` is a base vertex.
fn parse_vertex(s: &str, graph: Option<&BuiltGraph>) -> Result<VertexId> {
    if let Some(n) = s.strip_prefix("x:") {
        let g = graph.context("x:<n> needs a graph with a geodesic")?;
        let n: i64 = n
            .parse()
            .with_context(|| format!("bad geodesic index {n:?}"))?;
        return Ok(g.labeling.embed(n));
    }
    if s.contains(':') {
        return Ok(s.parse()?);
    }
    Ok(VertexId::Base(s.parse::<Coords>()?))
}

fn vertex_or_basepoint(s: &Option<String>, g: &BuiltGraph) -> Result<VertexId> {
    match s {
        Some(s) => parse_vertex(s, Some(g)),
        None => Ok(g.oracle.basepoint()),
    }
}

fn decorated(base: &GraphSpec, alpha: f64) -> Result<(BuiltGraph, DecoratedOracle)> {
    let b = base.build()?;
    let xa = decorate(b.oracle.clone(), b.labeling.clone(), alpha)?;
    Ok((b, xa))
}

fn parse_point(s: &str) -> Result<f64> {
    let s = s.trim();
    if let Some(k) = s.strip_prefix("e^") {
        let k: f64 = k
            .parse()
            .with_context(|| format!("bad exponent in {s:?}"))?;
        return Ok(k.exp());
    }
    s.parse().with_context(|| format!("bad number {s:?}"))
}

fn parse_floats(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(parse_point).collect()
}

#[derive(Serialize)]
struct Report<'a, P: Serialize, T: Serialize> {
    command: &'a str,
    params: P,
    result: T,
}

fn emit<P: Serialize, T: Serialize>(
    sink: &Sink,
    command: &str,
    params: P,
    result: T,
) -> Result<()> {
    sink.json(&Report {
        command,
        params,
        result,
    })
}

pub fn run(cmd: &Command, sink: &Sink, seed: u64) -> Result<Status> {
    match cmd {
        Command::Growth {
            graph,
            n,
            basepoint,
        } => {
            let g = graph.build()?;
            let x0 = vertex_or_basepoint(basepoint, &g)?;
            let s = growth_series(g.oracle.as_ref(), x0, *n)?;
            let mut t = Table::new(&["n", "ball", "sphere"]);
            t.log_y = true;
            for (i, (b, sp)) in s.values.iter().zip(s.spheres()).enumerate() {
                t.push(vec![i.to_string(), b.to_string(), sp.to_string()]);
            }
            #[derive(Serialize)]
            struct Out<'a> {
                graph: &'a str,
                basepoint: VertexId,
                series: &'a [u128],
            }
            let name = s.graph.clone();
            let p = serde_json::json!({ "graph": graph.to_string(), "n": n });
            emit(
                sink,
                "growth",
                p,
                Out {
                    graph: &name,
                    basepoint: s.basepoint,
                    series: &s.values,
                },
            )?;
            sink.table(Some(&t), &format!("growth of {graph}"))?;
            Ok(Status::Pass)
        }
        Command::Ends {
            graph,
            r,
            r_max,
            window,
            basepoint,
        } => {
            let g = graph.build()?;
            let x0 = vertex_or_basepoint(basepoint, &g)?;
            let p = ends_profile(g.oracle.as_ref(), x0, r, *r_max, *window)?;
            let mut header = vec!["R".to_string()];
            header.extend(r.iter().map(|r| format!("r={r}")));
            let mut t = Table {
                header,
                rows: Vec::new(),
                log_y: false,
            };
            let top = r.iter().copied().min().unwrap_or(0);
            for big in top + 1..=*r_max {
                let mut row = vec![big.to_string()];
                for rr in r {
                    let c = p.rows.iter().find(|x| x.r == *rr && x.big_r == big);
                    row.push(c.map(|c| c.count.to_string()).unwrap_or_default());
                }
                t.push(row);
            }
            let params = serde_json::json!({
                "graph": graph.to_string(), "r": r, "R_max": r_max, "window": window,
            });
            emit(sink, "ends", params, &p)?;
            sink.table(Some(&t), &format!("ends of {graph}"))?;
            Ok(Status::Pass)
        }
        Command::DecorateInfo {
            base,
            alpha,
            m,
            verify,
        } => {
            let (_, xa) = decorated(base, *alpha)?;
            #[derive(Serialize)]
            struct Row {
                m: u64,
                g_alpha: u64,
                tip_distance: u64,
                bfs_distance: Option<u32>,
            }
            let mut rows = Vec::new();
            let mut bad = Vec::new();
            let mut t = Table::new(&["m", "g_alpha", "tip_distance"]);
            for m in 1..=*m {
                let want = tip_distance(*alpha, m)?;
                let bfs = if *verify {
                    let cap =
                        u32::try_from(want + 1).context("tip distance too large to verify")?;
                    let d = distance(&xa, xa.basepoint(), xa.tip(m), cap)?;
                    if d != Distance::Exact(want as u32) {
                        bad.push(m);
                    }
                    d.exact()
                } else {
                    None
                };
                let g = g_alpha(*alpha, m)?;
                t.push(vec![m.to_string(), g.to_string(), want.to_string()]);
                rows.push(Row {
                    m,
                    g_alpha: g,
                    tip_distance: want,
                    bfs_distance: bfs,
                });
            }
            let params = serde_json::json!({
                "base": base.to_string(), "alpha": alpha, "m": m, "verify": verify,
            });
            emit(sink, "decorate-info", params, &rows)?;
            sink.table(Some(&t), &format!("decoration of {base} at alpha={alpha}"))?;
            if bad.is_empty() {
                Ok(Status::Pass)
            } else {
                Ok(Status::Violation(format!(
                    "BFS tip distance differs at m = {bad:?}"
                )))
            }
        }
        Command::Sandwich { base, alpha, n } => {
            let (b, xa) = decorated(base, *alpha)?;
            let report = check_growth_sandwich(b.oracle.as_ref(), &xa, *n)?;
            let t = if sink.csv.is_some() {
                let x0 = xa.basepoint();
                let gb = growth_series(b.oracle.as_ref(), x0, *n)?;
                let gd = growth_series(&xa, x0, *n)?;
                let mut t = Table::new(&["n", "base_ball", "decorated_ball", "twice_base_ball"]);
                t.log_y = true;
                for (i, (u, v)) in gb.values.iter().zip(&gd.values).enumerate() {
                    t.push(vec![
                        i.to_string(),
                        u.to_string(),
                        v.to_string(),
                        (2 * u).to_string(),
                    ]);
                }
                Some(t)
            } else {
                None
            };
            let params = serde_json::json!({ "base": base.to_string(), "alpha": alpha, "n": n });
            emit(sink, "sandwich", params, &report)?;
            sink.table(t.as_ref(), &format!("growth sandwich for {base}"))?;
            if report.pass {
                Ok(Status::Pass)
            } else {
                Ok(Status::Violation(format!("{:?}", report.first_violation)))
            }
        }
        Command::Qisearch {
            domain,
            codomain,
            l,
            a,
            pin,
            window_center,
            window_radius,
            budget: b,
            proximity,
        } => {
            let cod = codomain.build()?;
            let (dom, dom_graph, center) = match domain {
                DomainSpec::Shape(s) => {
                    let (shape, metric) = s.finite()?;
                    (metric, None, shape.center())
                }
                DomainSpec::Ball { radius, graph } => {
                    let g = graph.build()?;
                    let x0 = g.oracle.basepoint();
                    let ball = bfs_ball(g.oracle.as_ref(), x0, *radius)?;
                    let pts: Vec<VertexId> = ball.vertices.iter().map(|(v, _)| *v).collect();
                    let metric = FiniteMetric::from_oracle(g.oracle.as_ref(), pts, 2 * radius)?;
                    (metric, Some(g), x0)
                }
            };
            let mut pins = Vec::new();
            for p in pin {
                let (x, y) = p
                    .split_once(':')
                    .with_context(|| format!("pin {p:?} is not <domain point>:<vertex>"))?;
                let x = if x == "center" {
                    center
                } else {
                    parse_vertex(x, dom_graph.as_ref())?
                };
                pins.push((x, parse_vertex(y, Some(&cod))?));
            }
            let mut params = SearchParams::new(*l, *a, pins);
            params.budget = budget(*b)?;
            params.window = match (window_center, window_radius) {
                (None, None) => None,
                (c, Some(r)) => {
                    let c = match c {
                        Some(c) => parse_vertex(c, Some(&cod))?,
                        None => params.pins[0].1,
                    };
                    Some((c, *r))
                }
                (Some(_), None) => bail!("--window-center needs --window-radius"),
            };
            let outcome = search_embedding(&dom, cod.oracle.as_ref(), &params)?;
            let mut prox = None;
            if *proximity {
                if let (Some(map), Some(xa)) = (outcome.found(), cod.decorated.as_ref()) {
                    prox = Some(base_proximity_audit(map, xa)?);
                }
            }
            #[derive(Serialize)]
            struct Out<'a> {
                #[serde(flatten)]
                outcome: &'a SearchOutcome,
                #[serde(skip_serializing_if = "Option::is_none")]
                base_proximity: Option<coarselab::qi::BaseProximity>,
            }
            let pparams = serde_json::json!({
                "domain": domain.to_string(),
                "codomain": codomain.to_string(),
                "L": l.to_string(),
                "A": a.to_string(),
                "pins": params.pins.iter().map(|(x, y)| (x.to_string(), y.to_string())).collect::<Vec<_>>(),
                "budget": params.budget,
            });
            let failed_prox = prox.as_ref().is_some_and(|p| !p.pass);
            emit(
                sink,
                "qisearch",
                pparams,
                Out {
                    outcome: &outcome,
                    base_proximity: prox,
                },
            )?;
            sink.table(None, "")?;
            if let SearchOutcome::BudgetExceeded {
                nodes_explored,
                budget,
                ..
            } = outcome
            {
                return Ok(Status::Budget(format!(
                    "{nodes_explored} nodes explored, budget {budget}"
                )));
            }
            if failed_prox {
                return Ok(Status::Violation(
                    "found map strays too far from the base".into(),
                ));
            }
            Ok(Status::Pass)
        }
        Command::Census { n, l, a, budget: b } => {
            let c = endpoint_order_census(*n, *l, *a, budget(*b)?)?;
            let threshold = *l * *l + Constant::int(2) * *l * *a;
            let params = serde_json::json!({ "n": n, "L": l.to_string(), "A": a.to_string() });
            emit(sink, "census", params, &c)?;
            sink.table(None, "")?;
            if Constant::int(*n as i64) > threshold && c.order_violations > 0 {
                Ok(Status::Violation(format!(
                    "{} order violations with n > L² + 2LA",
                    c.order_violations
                )))
            } else {
                Ok(Status::Pass)
            }
        }
        Command::RefuteCt {
            graph,
            x,
            y,
            k,
            r,
            r_max,
            budget: b,
        } => {
            let g = graph.build()?;
            let (xv, yv) = (parse_vertex(x, Some(&g))?, parse_vertex(y, Some(&g))?);
            let budget = budget(*b)?;
            let top = r_max.unwrap_or(*r).max(*r);
            let mut tried = Vec::new();
            let mut outcome = None;
            for rr in *r..=top {
                let o = refute_coarse_transitivity(g.oracle.as_ref(), xv, yv, *k, rr, budget)?;
                tried.push(rr);
                let done = o.is_refuted();
                outcome = Some(o);
                if done {
                    break;
                }
            }
            let outcome: TransitivityOutcome = outcome.expect("at least one radius");
            let params = serde_json::json!({
                "graph": graph.to_string(), "x": xv.to_string(), "y": yv.to_string(),
                "K": k, "R": r, "R_max": top, "radii_tried": tried, "budget": budget,
            });
            emit(sink, "refute-ct", params, &outcome)?;
            sink.table(None, "")?;
            Ok(Status::Pass)
        }
        Command::Chain {
            graph,
            x0,
            r,
            k_min,
            k_max,
            window,
            samples,
            sample_radius,
            big_r,
            r_max,
        } => {
            let g = graph.build()?;
            let x0 = vertex_or_basepoint(x0, &g)?;
            let mut sampled = None;
            let r = match r {
                Some(r) => *r,
                None => {
                    let s = sample_vertices(g.oracle.as_ref(), x0, *sample_radius, *samples, seed)?;
                    let found = find_separation_radius(g.oracle.as_ref(), &s, *big_r, *r_max)?;
                    sampled = Some(s);
                    match found {
                        SeparationRadius::Found(r) => r,
                        SeparationRadius::NotFound => {
                            let params =
                                serde_json::json!({ "graph": graph.to_string(), "seed": seed });
                            emit(sink, "chain", params, found)?;
                            return Ok(Status::Violation(format!(
                                "no radius up to {r_max} separates every sample into two sides"
                            )));
                        }
                    }
                }
            };
            let chain = build_chain(g.oracle.as_ref(), x0, r, *k_min, *k_max)?;
            let audit = audit_chain(&chain, g.oracle.as_ref(), *window)?;
            let mut t = Table::new(&["gap", "count"]);
            for (gap, count) in &audit.gap_histogram {
                t.push(vec![gap.to_string(), count.to_string()]);
            }
            #[derive(Serialize)]
            struct Out<'a, C: Serialize, A: Serialize> {
                chain: &'a C,
                audit: &'a A,
            }
            let params = serde_json::json!({
                "graph": graph.to_string(), "x0": x0.to_string(), "r": r, "k_min": k_min,
                "k_max": k_max, "window": window, "seed": seed,
                "samples": sampled.map(|s| s.iter().map(|v| v.to_string()).collect::<Vec<_>>()),
            });
            emit(
                sink,
                "chain",
                params,
                Out {
                    chain: &chain,
                    audit: &audit,
                },
            )?;
            sink.table(Some(&t), &format!("chain gaps on {graph}"))?;
            if audit.pass {
                Ok(Status::Pass)
            } else {
                Ok(Status::Violation("chain audit failed".into()))
            }
        }
        Command::Threshold {
            alpha,
            beta,
            l,
            a,
            m,
            d,
            check_factor,
            ceiling,
        } => {
            let mut q = ThresholdQuery::new(*alpha, *beta, *l, *a, *m, *d);
            q.check_factor = *check_factor;
            q.ceiling = *ceiling;
            let report = find_threshold(&q)?;
            println!("{}", report.threshold);
            let rec = Report {
                command: "threshold",
                params: q,
                result: &report,
            };
            match &sink.out {
                Some(_) => sink.json(&rec)?,
                None => eprint!("{}", crate::output::to_json(&rec)?),
            }
            Ok(Status::Pass)
        }
        Command::Ratio {
            alpha,
            beta,
            x,
            affine,
            poly,
            require_decreasing,
        } => {
            let xs: Vec<f64> = x.iter().map(|s| parse_point(s)).collect::<Result<_>>()?;
            let t = match affine {
                Some(s) => match parse_floats(s)?.as_slice() {
                    [a, b] => Affine { a: *a, b: *b },
                    _ => bail!("--affine takes two numbers a,b"),
                },
                None => Affine::IDENTITY,
            };
            let p = match poly {
                Some(s) => Polynomial(parse_floats(s)?),
                None => Polynomial::identity(),
            };
            let values = ratio_series(*alpha, *beta, t, &p, &xs)?;
            let decreasing = values.windows(2).all(|w| w[1] < w[0]);
            let mut table = Table::new(&["x", "ratio"]);
            for (xv, v) in xs.iter().zip(&values) {
                table.push(vec![xv.to_string(), v.to_string()]);
            }
            #[derive(Serialize)]
            struct Out<'a> {
                x: &'a [f64],
                ratio: &'a [f64],
                strictly_decreasing: bool,
            }
            let params = serde_json::json!({
                "alpha": alpha, "beta": beta, "affine": t, "poly": p,
            });
            emit(
                sink,
                "ratio",
                params,
                Out {
                    x: &xs,
                    ratio: &values,
                    strictly_decreasing: decreasing,
                },
            )?;
            sink.table(Some(&table), &format!("ratio alpha={alpha} beta={beta}"))?;
            if *require_decreasing && !decreasing {
                Ok(Status::Violation("ratios do not strictly decrease".into()))
            } else {
                Ok(Status::Pass)
            }
        }
        Command::EmbedTree {
            base,
            alpha,
            radius,
        } => {
            let (_, xa) = decorated(base, *alpha)?;
            let e = embed_y_in_tree(&xa, *radius)?;
            let params =
                serde_json::json!({ "base": base.to_string(), "alpha": alpha, "radius": radius });
            emit(sink, "embed-tree", params, &e)?;
            sink.table(None, "")?;
            if e.violations == 0 {
                Ok(Status::Pass)
            } else {
                Ok(Status::Violation(format!(
                    "{} pairs distorted",
                    e.violations
                )))
            }
        }
        Command::CubicalizeAudit {
            graph,
            radius,
            pairs,
            center,
        } => {
            let g = graph.build()?;
            let c = vertex_or_basepoint(center, &g)?;
            let audit = cubical_distortion_audit(g.oracle.clone(), c, *radius, *pairs, seed)?;
            let params = serde_json::json!({
                "graph": graph.to_string(), "radius": radius, "pairs": pairs, "seed": seed,
            });
            emit(sink, "cubicalize-audit", params, &audit)?;
            sink.table(None, "")?;
            if audit.pass {
                Ok(Status::Pass)
            } else {
                Ok(Status::Violation(
                    "distortion or degree bound exceeded".into(),
                ))
            }
        }
        Command::ExportSnapshot {
            graph,
            radius,
            center,
        } => {
            let g = graph.build()?;
            let c = vertex_or_basepoint(center, &g)?;
            let ball = bfs_ball(g.oracle.as_ref(), c, *radius)?;
            let text = write_snapshot(&ball);
            match &sink.out {
                Some(p) => {
                    std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?
                }
                None => print!("{text}"),
            }
            Ok(Status::Pass)
        }
    }
}
