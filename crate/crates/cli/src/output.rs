//! Rendering of reports as human-readable text or JSON documents.

use serde_json::{json, Value};

use ccc::bounds::{BoundValue, BoundsReport, Threshold};
use ccc::clustering::{Annotation, Clustering, EvalReport};
use ccc::codec;
use ccc::constraint::ViolationPair;
use ccc::error::Result;
use ccc::oracle::{FuzzReport, OracleReport};
use ccc::{index_bits, make_params, CodeParams};

use crate::Format;

pub fn print_check(
    params: &CodeParams,
    e: usize,
    t: usize,
    violations: &[ViolationPair],
    format: Format,
) -> Result<()> {
    let satisfies = violations.is_empty();
    match format {
        Format::Text => {
            println!("parameters: L={} M={} e={e} t={t}", params.l(), params.m());
            for v in violations {
                println!(
                    "violation: i={} j={} index_distance={} data_distance={}",
                    v.i, v.j, v.index_distance, v.data_distance
                );
            }
            println!("violations: {}", violations.len());
            println!(
                "verdict: {}",
                if satisfies { "satisfies" } else { "violates" }
            );
        }
        Format::Json => {
            let doc = json!({
                "params": {"L": params.l(), "M": params.m(), "e": e, "t": t},
                "violations": violations.iter().map(|v| json!({
                    "i": v.i,
                    "j": v.j,
                    "index_distance": v.index_distance,
                    "data_distance": v.data_distance,
                })).collect::<Vec<_>>(),
                "satisfies": satisfies,
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
        }
    }
    Ok(())
}

fn annotation_json(a: &Annotation) -> Value {
    match a {
        Annotation::Inlier => json!("inlier"),
        Annotation::Outlier => json!("outlier"),
        Annotation::Unresolved => json!("unresolved"),
        Annotation::Reassigned { from, to } => json!({"reassigned": {"from": from, "to": to}}),
    }
}

pub fn cluster_report_json(
    clustering: &Clustering,
    tau: usize,
    rho: usize,
    evaluation: Option<&EvalReport>,
) -> Value {
    let log_m = clustering.m().trailing_zeros() as usize;
    let label = |i: usize| index_bits(i, log_m).expect("cluster label").to_string();

    let mut reads = Vec::new();
    let mut cluster_rows = Vec::new();
    let mut outliers = 0usize;
    let mut reassigned = 0usize;
    let mut unresolved = 0usize;
    for (c, members) in clustering.clusters().iter().enumerate() {
        let mut inliers_here = 0usize;
        let mut reassigned_in = 0usize;
        let mut unresolved_here = 0usize;
        for (r, member) in members.iter().enumerate() {
            let distances: Vec<usize> = members
                .iter()
                .enumerate()
                .filter(|(o, _)| *o != r)
                .map(|(_, other)| member.read.data.distance_to(&other.read.data))
                .collect();
            match member.annotation {
                Annotation::Inlier => inliers_here += 1,
                Annotation::Reassigned { .. } => {
                    reassigned_in += 1;
                    reassigned += 1;
                }
                Annotation::Unresolved => {
                    unresolved_here += 1;
                    unresolved += 1;
                }
                Annotation::Outlier => outliers += 1,
            }
            let mut row = json!({
                "cluster": label(c),
                "index": member.read.index.to_string(),
                "data": member.read.data.to_string(),
                "annotation": annotation_json(&member.annotation),
                "distances": distances,
            });
            if let Some(src) = member.read.source {
                row["src"] = json!(src);
            }
            reads.push(row);
        }
        cluster_rows.push(json!({
            "index": label(c),
            "size": members.len(),
            "inliers": inliers_here,
            "reassigned_in": reassigned_in,
            "unresolved": unresolved_here,
        }));
    }

    let mut doc = json!({
        "tau": tau,
        "rho": rho,
        "m": clustering.m(),
        "reads": reads,
        "clusters": cluster_rows,
        "totals": {
            "reads": clustering.total_reads(),
            "outliers_detected": outliers + reassigned + unresolved,
            "reassigned": reassigned,
            "unresolved": unresolved,
        },
    });
    if let Some(eval) = evaluation {
        doc["evaluation"] = json!({
            "total_reads": eval.total_reads,
            "correctly_placed": eval.correctly_placed,
            "outliers_detected": eval.outliers_detected,
            "reassigned": eval.reassigned,
            "missed_outliers": eval.missed_outliers,
            "false_positive_outliers": eval.false_positive_outliers,
            "wrong_reassignments": eval.wrong_reassignments,
            "unresolved": eval.unresolved,
        });
    }
    doc
}

pub fn print_cluster_summary(clustering: &Clustering, evaluation: Option<&EvalReport>) {
    let log_m = clustering.m().trailing_zeros() as usize;
    println!(
        "reads: {}  clusters: {}",
        clustering.total_reads(),
        clustering.m()
    );
    let mut flagged = 0usize;
    let mut moved = 0usize;
    let mut unresolved = 0usize;
    for (c, members) in clustering.clusters().iter().enumerate() {
        let label = index_bits(c, log_m).expect("cluster label");
        let mut parts = Vec::new();
        for member in members {
            match member.annotation {
                Annotation::Inlier => parts.push(member.read.data.to_string()),
                Annotation::Reassigned { from, .. } => {
                    moved += 1;
                    flagged += 1;
                    let from = index_bits(from, log_m).expect("cluster label");
                    parts.push(format!("{} (moved from {from})", member.read.data));
                }
                Annotation::Unresolved => {
                    unresolved += 1;
                    flagged += 1;
                    parts.push(format!("{} (unresolved)", member.read.data));
                }
                Annotation::Outlier => {
                    flagged += 1;
                    parts.push(format!("{} (outlier)", member.read.data));
                }
            }
        }
        println!("cluster {label}: [{}]", parts.join(", "));
    }
    println!("outliers detected: {flagged}  reassigned: {moved}  unresolved: {unresolved}");
    if let Some(eval) = evaluation {
        println!(
            "evaluation: correctly placed {}/{}, missed outliers {}, false positives {}, wrong reassignments {}, unresolved {}",
            eval.correctly_placed,
            eval.total_reads,
            eval.missed_outliers,
            eval.false_positive_outliers,
            eval.wrong_reassignments,
            eval.unresolved
        );
    }
}

fn bound_value_json(v: &BoundValue) -> Value {
    match v {
        BoundValue::Value(b) => {
            let mut row = json!({"log2": b.log2, "deficit": b.deficit});
            if let Some(exact) = &b.exact {
                row["exact"] = json!(exact.to_string());
            }
            row
        }
        BoundValue::Degenerate(msg) => json!({"degenerate": msg}),
        BoundValue::NotApplicable(msg) => json!({"not_applicable": msg}),
    }
}

fn bound_value_text(v: &BoundValue) -> String {
    match v {
        BoundValue::Value(b) => match &b.exact {
            Some(exact) => format!("{exact} (log2 = {:.4})", b.log2),
            None => format!("log2 = {:.4} (deficit {:.6})", b.log2, b.deficit),
        },
        BoundValue::Degenerate(msg) => format!("degenerate ({msg})"),
        BoundValue::NotApplicable(msg) => format!("not applicable ({msg})"),
    }
}

fn threshold_text(t: &Threshold) -> String {
    match t {
        Threshold::Value(v) => v.to_string(),
        Threshold::NotApplicable(msg) => format!("not applicable ({msg})"),
    }
}

fn threshold_json(t: &Threshold) -> Value {
    match t {
        Threshold::Value(v) => json!(v),
        Threshold::NotApplicable(msg) => json!({"not_applicable": msg}),
    }
}

fn bounds_point_json(report: &BoundsReport, max_t: usize) -> Value {
    let p = &report.params;
    json!({
        "params": {
            "L": p.l(), "M": p.m(), "e": p.e(), "t": p.t(),
            "log2_m": p.log_m(), "data_len": p.data_len(), "beta": p.beta(),
        },
        "b1": report.b1.to_string(),
        "b2": report.b2.to_string(),
        "d": report.d.to_string(),
        "size_lower": bound_value_json(&report.lower),
        "size_upper": bound_value_json(&report.upper),
        "asymptotic_upper_main_term": bound_value_json(&report.asymptotic_upper),
        "redundancy_upper": report.r_upper,
        "redundancy_lower": report.r_lower,
        "unit_redundancy_tmax": threshold_json(&report.tmax_unit_redundancy),
        "unit_redundancy_tmin": threshold_json(&report.tmin_unit_redundancy),
        "max_feasible_t": max_t,
        "notes": report.notes,
    })
}

pub fn print_bounds_point(report: &BoundsReport, max_t: usize, format: Format) -> Result<()> {
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&bounds_point_json(report, max_t)).expect("json")
        ),
        Format::Text => {
            let p = &report.params;
            println!(
                "parameters: L={} M={} e={} t={} (log2 M = {}, data bits = {}, beta = {:.4})",
                p.l(),
                p.m(),
                p.e(),
                p.t(),
                p.log_m(),
                p.data_len(),
                p.beta()
            );
            println!("B1 = {}  B2 = {}  D = {}", report.b1, report.b2, report.d);
            println!("size lower bound: {}", bound_value_text(&report.lower));
            println!("size upper bound: {}", bound_value_text(&report.upper));
            println!(
                "asymptotic upper bound (main term): {}",
                bound_value_text(&report.asymptotic_upper)
            );
            match report.r_upper {
                Some(r) => println!("redundancy upper bound: {r:.6}"),
                None => println!("redundancy upper bound: degenerate"),
            }
            match report.r_lower {
                Some(r) => println!("redundancy lower bound: {r:.6}"),
                None => println!("redundancy lower bound: degenerate"),
            }
            println!(
                "unit-redundancy t range: r <= 1 up to t = {}, r >= 1 from t = {}",
                threshold_text(&report.tmax_unit_redundancy),
                threshold_text(&report.tmin_unit_redundancy)
            );
            println!("max feasible t (single-bit construction): {max_t}");
        }
    }
    Ok(())
}

const GRID_BETAS: [f64; 4] = [0.1, 0.2, 0.25, 0.3];
const GRID_LENGTHS: [usize; 3] = [32, 64, 128];

/// One row per grid point: unit-redundancy thresholds at the exact beta,
/// plus per-e feasibility and bound deficits at the realizable parameters
/// (log2 M rounded to the nearest integer).
pub fn print_bounds_grid(format: Format) -> Result<i32> {
    let mut rows = Vec::new();
    for &beta in &GRID_BETAS {
        for &l in &GRID_LENGTHS {
            let tmax = ccc::bounds::unit_redundancy_tmax(beta, l as f64)?;
            let tmin = ccc::bounds::unit_redundancy_tmin(beta, l as f64)?;
            let log_m = (beta * l as f64).round().max(1.0) as usize;
            let m = 1usize << log_m;
            let mut e_rows = Vec::new();
            for e in 1..=2usize {
                if e > log_m {
                    continue;
                }
                let max_t = codec::max_feasible_t(l, m, e)?;
                let mut t_rows = Vec::new();
                for t in 1..=max_t {
                    let params = make_params(l, m, e, t)?;
                    let report = ccc::bounds::report(&params)?;
                    t_rows.push(json!({
                        "t": t,
                        "size_lower": bound_value_json(&report.lower),
                        "size_upper": bound_value_json(&report.upper),
                    }));
                }
                e_rows.push(json!({"e": e, "max_feasible_t": max_t, "bounds": t_rows}));
            }
            rows.push(json!({
                "beta": beta,
                "L": l,
                "log2_m": log_m,
                "unit_redundancy_tmax": threshold_json(&tmax),
                "unit_redundancy_tmin": threshold_json(&tmin),
                "per_e": e_rows,
            }));
        }
    }
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&Value::Array(rows)).expect("json")
        ),
        Format::Text => {
            println!(
                "{:>6} {:>5} {:>7} {:>6} {:>6}  feasible t by e",
                "beta", "L", "log2 M", "tmax", "tmin"
            );
            for row in &rows {
                let fmt_thr = |v: &Value| match v {
                    Value::Number(n) => n.to_string(),
                    _ => "n/a".into(),
                };
                let per_e = row["per_e"]
                    .as_array()
                    .expect("rows")
                    .iter()
                    .map(|er| format!("e={}: t<={}", er["e"], er["max_feasible_t"]))
                    .collect::<Vec<_>>()
                    .join("  ");
                println!(
                    "{:>6} {:>5} {:>7} {:>6} {:>6}  {}",
                    row["beta"].to_string(),
                    row["L"].to_string(),
                    row["log2_m"].to_string(),
                    fmt_thr(&row["unit_redundancy_tmax"]),
                    fmt_thr(&row["unit_redundancy_tmin"]),
                    per_e
                );
            }
        }
    }
    Ok(0)
}

pub fn print_oracle_count(report: &OracleReport, format: Format) {
    match format {
        Format::Json => {
            let doc = json!({
                "params": {"M": report.m, "L": report.l, "e": report.e, "t": report.t},
                "exact_count": report.exact_count.to_string(),
                "log2": (report.exact_count as f64).log2(),
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
        }
        Format::Text => {
            println!(
                "parameters: M={} L={} e={} t={}",
                report.m, report.l, report.e, report.t
            );
            println!("exact count: {}", report.exact_count);
            println!("log2: {:.4}", (report.exact_count as f64).log2());
        }
    }
}

pub fn print_oracle_fuzz(
    m: usize,
    l: usize,
    e: usize,
    t: usize,
    seed: u64,
    report: &FuzzReport,
    format: Format,
) {
    match format {
        Format::Json => {
            let doc = json!({
                "params": {"M": m, "L": l, "e": e, "t": t},
                "seed": seed,
                "trials": report.trials,
                "corrections_seen": report.corrections_seen,
                "failures": 0,
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
        }
        Format::Text => {
            println!("parameters: M={m} L={l} e={e} t={t}  seed: {seed}");
            println!("trials: {}", report.trials);
            println!("corrections seen: {}", report.corrections_seen);
            println!("failures: 0");
        }
    }
}
