//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Criteria 1-10 run on an 8-thread pool and again on a 1-thread
//! pool; criterion 11 compares the two sets of JSON payloads.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use coarselab::chain::{audit_chain, build_chain};
use coarselab::constant::Constant;
use coarselab::decorate::{
    decorate, find_threshold, ratio_series, tip_distance, Affine, DecoratedOracle, Labeling,
    Polynomial, ThresholdQuery,
};
use coarselab::generators::{
    make_cone, make_finite, make_grid, make_ladder, make_tree, FiniteShape,
};
use coarselab::graph::{bfs_ball, distance, Distance, FiniteMetric, GraphOracle, SharedOracle};
use coarselab::invariants::{check_growth_sandwich, embed_y_in_tree, ends_profile};
use coarselab::qi::{
    base_proximity_audit, check_qi, endpoint_order_census, refute_coarse_transitivity,
    search_embedding, QiMap, SearchOutcome, SearchParams, TransitivityOutcome, DEFAULT_BUDGET,
};
use coarselab::VertexId;
use serde::Serialize;

struct Outcome {
    pass: bool,
    detail: String,
    payload: String,
}

fn outcome<T: Serialize>(pass: bool, detail: impl Into<String>, payload: &T) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
        payload: serde_json::to_string(payload).expect("payload serializes"),
    }
}

type Criterion = fn() -> Outcome;

fn base_graph(d: usize) -> (SharedOracle, Arc<dyn Labeling>) {
    let g = make_grid(d).unwrap();
    let l = g.labeling();
    (Arc::new(g), Arc::new(l))
}

fn decorated_line(alpha: f64) -> DecoratedOracle {
    let (g, l) = base_graph(1);
    decorate(g, l, alpha).unwrap()
}

const ALPHAS: [f64; 3] = [0.25, 0.5, 1.0];

fn c1_sandwich() -> Outcome {
    let start = Instant::now();
    let tree = make_tree(3).unwrap();
    let tree_parts: (SharedOracle, Arc<dyn Labeling>) =
        (Arc::new(tree.clone()), Arc::new(tree.labeling()));
    let bases = [(base_graph(1), 100), (base_graph(2), 60), (tree_parts, 100)];
    let mut reports = Vec::new();
    let mut failed = Vec::new();
    for ((g, l), n) in &bases {
        for alpha in ALPHAS {
            let xa = decorate(g.clone(), l.clone(), alpha).unwrap();
            let r = check_growth_sandwich(g.as_ref(), &xa, *n).unwrap();
            if !r.pass {
                failed.push(format!(
                    "{} alpha={alpha}: {:?}",
                    g.name(),
                    r.first_violation
                ));
            }
            reports.push(r);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = failed.is_empty() && secs < 60.0;
    let detail = if failed.is_empty() {
        format!("9 pairs, n <= 100 (grid:2 n <= 60), {secs:.1} s")
    } else {
        failed.join("; ")
    };
    outcome(pass, detail, &reports)
}

fn c2_tip_distance() -> Outcome {
    let mut rows = Vec::new();
    let mut bad = Vec::new();
    for d in [1usize, 2] {
        for alpha in ALPHAS {
            let (g, l) = base_graph(d);
            let xa = decorate(g, l, alpha).unwrap();
            for m in 1..=12u64 {
                let want = tip_distance(alpha, m).unwrap() as u32;
                let got = distance(&xa, xa.basepoint(), xa.tip(m), want + 1).unwrap();
                if got != Distance::Exact(want) {
                    bad.push(format!("grid:{d} alpha={alpha} m={m}: {got:?} vs {want}"));
                }
                rows.push((d, alpha, m, want, got.exact()));
            }
        }
    }
    let detail = if bad.is_empty() {
        "m <= 12 on grid:1 and grid:2 for 3 exponents".to_string()
    } else {
        bad.join("; ")
    };
    outcome(bad.is_empty(), detail, &rows)
}

fn c3_ends() -> Outcome {
    let mut notes = Vec::new();
    let mut profiles = Vec::new();
    for (d, want) in [(1usize, 2usize), (2, 1)] {
        let (g, _) = base_graph(d);
        let p = ends_profile(g.as_ref(), g.basepoint(), &[1, 2, 3], 30, 5).unwrap();
        for r in 1..=3 {
            if p.stable_count(r) != Some(want) {
                notes.push(format!("grid:{d} r={r}: {:?}", p.stable_count(r)));
            }
        }
        profiles.push(p);
    }
    let tree = make_tree(3).unwrap();
    let p = ends_profile(&tree, tree.basepoint(), &[1, 2, 3], 9, 5).unwrap();
    let counts: Vec<Option<usize>> = (1..=3).map(|r| p.stable_count(r)).collect();
    let growing = counts.windows(2).all(|w| w[0] < w[1]);
    if !(counts.iter().all(|c| c.is_some_and(|c| c >= 6)) && growing) {
        notes.push(format!("tree:3 counts {counts:?}"));
    }
    profiles.push(p);
    for d in [1usize, 2] {
        let (g, l) = base_graph(d);
        let base = ends_profile(g.as_ref(), g.basepoint(), &[1, 2], 60, 5).unwrap();
        for alpha in ALPHAS {
            let xa = decorate(g.clone(), l.clone(), alpha).unwrap();
            let prof = ends_profile(&xa, xa.basepoint(), &[1, 2], 60, 5).unwrap();
            if prof.rows != base.rows || prof.stabilized != base.stabilized {
                notes.push(format!("grid:{d} alpha={alpha} differs from its base"));
            }
            profiles.push(prof);
        }
        profiles.push(base);
    }
    let detail = if notes.is_empty() {
        format!("grid:1 -> 2, grid:2 -> 1, tree:3 -> {counts:?}; decorations match for R <= 60")
    } else {
        notes.join("; ")
    };
    outcome(notes.is_empty(), detail, &profiles)
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn c4_census() -> Outcome {
    let (big, t_big) =
        timed(|| endpoint_order_census(4, Constant::ONE, Constant::ONE, DEFAULT_BUDGET).unwrap());
    let (small, t_small) =
        timed(|| endpoint_order_census(1, Constant::ONE, Constant::ONE, DEFAULT_BUDGET).unwrap());
    let limit = Duration::from_secs(10);
    let pass = big.order_violations == 0
        && small.order_violations >= 1
        && t_big < limit
        && t_small < limit;
    let detail = format!(
        "n=4: {} feasible, {} violations ({:.2} s); n=1: {} violations ({:.2} s)",
        big.feasible_count,
        big.order_violations,
        t_big.as_secs_f64(),
        small.order_violations,
        t_small.as_secs_f64()
    );
    outcome(pass, detail, &(big, small))
}

fn line_search(shape: FiniteShape, l: i64, a: i64) -> SearchOutcome {
    let dom = make_finite(shape).unwrap();
    let z = make_grid(1).unwrap();
    let params = SearchParams::new(
        Constant::int(l),
        Constant::int(a),
        vec![(shape.center(), VertexId::int(0))],
    );
    search_embedding(&dom, &z, &params).unwrap()
}

fn c5_tripod() -> Outcome {
    let (outs, elapsed) = timed(|| {
        [
            line_search(FiniteShape::Tripod(4), 1, 1),
            line_search(FiniteShape::Tripod(1), 1, 0),
            line_search(FiniteShape::Interval(4), 1, 1),
        ]
    });
    let z = make_grid(1).unwrap();
    let found_ok = outs[2]
        .found()
        .is_some_and(|m| check_qi(m, &z, 100).unwrap().passed());
    let pass = outs[0].is_refuted()
        && outs[1].is_refuted()
        && found_ok
        && elapsed < Duration::from_secs(30);
    let detail =
        format!(
        "tripod:4 (1,1) {}, tripod:1 (1,0) {}, interval:4 (1,1) {}; {} + {} + {} nodes, {:.2} s",
        if outs[0].is_refuted() { "refuted" } else { "NOT refuted" },
        if outs[1].is_refuted() { "refuted" } else { "NOT refuted" },
        if found_ok { "found" } else { "NOT found" },
        outs[0].nodes_explored(),
        outs[1].nodes_explored(),
        outs[2].nodes_explored(),
        elapsed.as_secs_f64()
    );
    outcome(pass, detail, &outs)
}

fn c6_transitivity() -> Outcome {
    let xa = decorated_line(1.0);
    let branch = refute_coarse_transitivity(
        &xa,
        VertexId::int(3025),
        VertexId::int(2970),
        1,
        4,
        DEFAULT_BUDGET,
    )
    .unwrap();
    let z = make_grid(1).unwrap();
    let line =
        refute_coarse_transitivity(&z, VertexId::int(0), VertexId::int(7), 1, 5, DEFAULT_BUDGET)
            .unwrap();
    let translation = matches!(
        &line,
        TransitivityOutcome::Inconclusive { found: Some(_), .. }
    );
    let cone = make_cone();
    let cone_out = refute_coarse_transitivity(
        &cone,
        VertexId::base(&[6, 0]),
        VertexId::base(&[0, 0]),
        1,
        3,
        DEFAULT_BUDGET,
    )
    .unwrap();
    let pass = branch.is_refuted() && translation && cone_out.is_refuted();
    let detail = format!(
        "X_1(Z) x_3025 -> x_2970 {}, grid:1 {}, cone (6,0) -> (0,0) {}",
        if branch.is_refuted() {
            "refuted"
        } else {
            "NOT refuted"
        },
        if translation {
            "inconclusive with a map"
        } else {
            "NO map"
        },
        if cone_out.is_refuted() {
            "refuted"
        } else {
            "NOT refuted"
        },
    );
    outcome(pass, detail, &(branch, line, cone_out))
}

fn ball_domain(center: i64, radius: u32) -> FiniteMetric {
    let z = make_grid(1).unwrap();
    let ball = bfs_ball(&z, VertexId::int(center), radius).unwrap();
    let pts: Vec<VertexId> = ball.vertices.iter().map(|(v, _)| *v).collect();
    FiniteMetric::from_oracle(&z, pts, 2 * radius).unwrap()
}

fn c7_base_proximity() -> Outcome {
    let xa = decorated_line(1.0);
    let mut notes = Vec::new();
    let mut reports = Vec::new();

    let dom20 = ball_domain(0, 20);
    let inclusion = QiMap::from_fn(dom20.clone(), Constant::ONE, Constant::ZERO, |p| *p).unwrap();
    let coord = |p: &VertexId| p.coords().unwrap().get(0);
    let shift = QiMap::from_fn(dom20, Constant::ONE, Constant::ZERO, |p| {
        VertexId::int(coord(p) + 5)
    })
    .unwrap();
    let lifted = QiMap::from_fn(
        ball_domain(0, 10),
        Constant::ONE,
        Constant::int(2),
        |p| match coord(p) {
            0 => VertexId::Seg { n: 9, k: 1 },
            k => VertexId::int(81 + k),
        },
    )
    .unwrap();
    for (name, map, sup) in [
        ("inclusion", &inclusion, 0),
        ("shift", &shift, 0),
        ("lifted", &lifted, 1),
    ] {
        let r = base_proximity_audit(map, &xa).unwrap();
        if !r.pass || r.sup_distance_to_base != sup {
            notes.push(format!(
                "{name}: sup {} bound {}",
                r.sup_distance_to_base, r.bound
            ));
        }
        reports.push(r);
    }

    let mut searched = 0;
    for alpha in [0.5, 1.0] {
        let xa = decorated_line(alpha);
        for (center, pin, l, a) in [
            (0i64, VertexId::int(0), 1, 0),
            (0, VertexId::int(81), 1, 1),
            (0, VertexId::Seg { n: 9, k: 1 }, 1, 2),
            (3, VertexId::Seg { n: 7, k: 1 }, 1, 3),
            (0, VertexId::int(49), 2, 1),
        ] {
            let dom = ball_domain(center, 5);
            let params = SearchParams::new(
                Constant::int(l),
                Constant::int(a),
                vec![(VertexId::int(center), pin)],
            );
            match search_embedding(&dom, &xa, &params).unwrap() {
                SearchOutcome::Found { map, .. } => {
                    searched += 1;
                    let r = base_proximity_audit(&map, &xa).unwrap();
                    if !r.pass {
                        notes.push(format!(
                            "alpha={alpha} pin {pin}: sup {}",
                            r.sup_distance_to_base
                        ));
                    }
                    reports.push(r);
                }
                other => notes.push(format!(
                    "alpha={alpha} pin {pin}: no map ({} nodes)",
                    other.nodes_explored()
                )),
            }
        }
    }
    let detail = if notes.is_empty() {
        format!("3 worked examples and {searched} searched maps within L^3 + 2L^2A + A")
    } else {
        notes.join("; ")
    };
    outcome(notes.is_empty(), detail, &reports)
}

fn c8_chains() -> Outcome {
    let z = make_grid(1).unwrap();
    let ladder = make_ladder();
    let cases: [(&dyn GraphOracle, VertexId, u32); 3] = [
        (&z, VertexId::int(0), 1),
        (&z, VertexId::int(0), 2),
        (&ladder, VertexId::base(&[0, 0]), 1),
    ];
    let mut notes = Vec::new();
    let mut audits = Vec::new();
    for (g, x0, r) in cases {
        let chain = build_chain(g, x0, r, -8, 8).unwrap();
        let audit = audit_chain(&chain, g, 20).unwrap();
        let ok = audit.pass
            && audit.consecutive_exact
            && audit.bound_violations.is_empty()
            && audit.max_gap <= 3 * r + 1;
        notes.push(format!(
            "{} r={r}: {} (gap {} <= {})",
            g.name(),
            if ok { "ok" } else { "FAILED" },
            audit.max_gap,
            audit.gap_bound
        ));
        audits.push((chain, audit, ok));
    }
    let pass = audits.iter().all(|(_, _, ok)| *ok);
    outcome(pass, notes.join(", "), &audits)
}

fn c9_tree_embedding() -> Outcome {
    let xa = decorated_line(1.0);
    match embed_y_in_tree(&xa, 25) {
        Ok(e) => outcome(
            e.violations == 0,
            format!(
                "{} vertices, {} pairs, {} violations",
                e.map.len(),
                e.pairs_checked,
                e.violations
            ),
            &e,
        ),
        Err(err) => outcome(false, err.to_string(), &err.to_string()),
    }
}

fn c10_threshold() -> Outcome {
    let report = find_threshold(&ThresholdQuery::new(0.5, 1.0, 1.0, 0.0, 0.0, 0.0)).unwrap();
    let xs: Vec<f64> = [4.0f64, 16.0, 36.0].iter().map(|k| k.exp()).collect();
    let ratios = ratio_series(0.5, 1.0, Affine::IDENTITY, &Polynomial::identity(), &xs).unwrap();
    let decreasing = ratios.windows(2).all(|w| w[1] < w[0]);
    let pass = report.threshold == 21 && report.certified_window == (21, 210) && decreasing;
    let detail = format!(
        "N = {} certified on [{}, {}]; ratios {:?}",
        report.threshold, report.certified_window.0, report.certified_window.1, ratios
    );
    outcome(pass, detail, &(report, ratios))
}

const CRITERIA: [(&str, Criterion); 10] = [
    ("growth sandwich", c1_sandwich),
    ("tip distances", c2_tip_distance),
    ("ends profiles", c3_ends),
    ("endpoint order census", c4_census),
    ("tripod obstruction", c5_tripod),
    ("coarse transitivity refutation", c6_transitivity),
    ("base proximity", c7_base_proximity),
    ("ball chains", c8_chains),
    ("tree embedding of Y", c9_tree_embedding),
    ("threshold and ratio", c10_threshold),
];

fn run_guarded(f: Criterion) -> Outcome {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Outcome {
            pass: false,
            detail: format!("panicked: {msg}"),
            payload: String::new(),
        }
    })
}

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
}

fn report(i: usize, name: &str, pass: bool, detail: &str, secs: f64) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("{tag} [{i:>2}] {name}: {detail} ({secs:.2} s)");
}

fn main() -> ExitCode {
    let many = pool(8);
    let mut all_pass = true;
    let mut payloads = Vec::new();
    for (i, (name, f)) in CRITERIA.iter().enumerate() {
        let t = Instant::now();
        let out = many.install(|| run_guarded(*f));
        report(
            i + 1,
            name,
            out.pass,
            &out.detail,
            t.elapsed().as_secs_f64(),
        );
        all_pass &= out.pass;
        payloads.push(out.payload);
    }

    let one = pool(1);
    let t = Instant::now();
    let mut mismatched = Vec::new();
    for (i, (_, f)) in CRITERIA.iter().enumerate() {
        let out = one.install(|| run_guarded(*f));
        if out.payload.is_empty() || out.payload != payloads[i] {
            mismatched.push(i + 1);
        }
    }
    let same = mismatched.is_empty();
    let bytes: usize = payloads.iter().map(String::len).sum();
    let detail = if same {
        format!("criteria 1-10 payloads identical at 1 and 8 threads ({bytes} bytes)")
    } else {
        format!("payloads differ for criteria {mismatched:?}")
    };
    report(11, "determinism", same, &detail, t.elapsed().as_secs_f64());
    all_pass &= same;

    if all_pass {
        println!("acceptance: all 11 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}
