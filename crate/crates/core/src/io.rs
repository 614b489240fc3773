//! Text artifacts: CSV tables and JSON documents carrying a schema version.

use serde::Serialize;

use crate::geometry::{EqualAreaPartition, Patch, PointSet};
use crate::gram::EigStats;
use crate::mz::{MzReport, RandomMzOutcome};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: u32,
    kind: &'a str,
    #[serde(flatten)]
    body: &'a T,
}

/// Pretty JSON `{"schema": 1, "kind": kind, ...body}` with a final newline.
/// `body` must serialize as a map.
pub fn json_document<T: Serialize>(kind: &str, body: &T) -> String {
    let mut out = serde_json::to_string_pretty(&Envelope { schema: SCHEMA_VERSION, kind, body })
        .expect("report types serialize infallibly");
    out.push('\n');
    out
}

/// Shortest round-trip decimal, switching to exponent form outside
/// `[1e-5, 1e16)` so tiny values do not print as long zero runs.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn join(values: impl IntoIterator<Item = String>) -> String {
    values.into_iter().collect::<Vec<_>>().join(",")
}

/// Header `x0,…,xq` and one row per point.
pub fn points_csv(points: &PointSet) -> String {
    let mut out = join((0..points.dim()).map(|k| format!("x{k}")));
    out.push('\n');
    for x in points.rows() {
        out.push_str(&join(x.iter().map(|&v| fmt_f64(v))));
        out.push('\n');
    }
    out
}

pub fn points_json(points: &PointSet, seed: u64) -> String {
    #[derive(Serialize)]
    struct Body<'a> {
        q: usize,
        count: usize,
        seed: u64,
        points: Vec<&'a [f64]>,
    }
    json_document("points", &Body { q: points.q(), count: points.len(), seed, points: points.rows().collect() })
}

pub fn partition_json(partition: &EqualAreaPartition) -> String {
    #[derive(Serialize)]
    struct Body {
        q: usize,
        count: usize,
        area_each: f64,
        partition_norm: f64,
        patches: Vec<Patch>,
    }
    json_document(
        "partition",
        &Body {
            q: partition.q(),
            count: partition.len(),
            area_each: partition.area_each(),
            partition_norm: partition.partition_norm_bound(),
            patches: partition.patches().collect(),
        },
    )
}

/// One row per patch: index, area, diameter bound and center coordinates.
pub fn partition_csv(partition: &EqualAreaPartition) -> String {
    let dim = partition.q() + 1;
    let mut out = join(["index", "area", "diameter_bound"].map(String::from).into_iter().chain((0..dim).map(|k| format!("c{k}"))));
    out.push('\n');
    for p in partition.patches() {
        let head = [p.index.to_string(), fmt_f64(p.area), fmt_f64(p.diameter_bound)];
        out.push_str(&join(head.into_iter().chain(p.center.iter().map(|&v| fmt_f64(v)))));
        out.push('\n');
    }
    out
}

/// The eigenvalue table `n,lMin1,lMinM,lMin99,lMax1,lMaxM,lMax99`.
pub fn eig_table_csv(rows: &[EigStats]) -> String {
    let mut out = format!("{}\n", EigStats::CSV_HEADER);
    for s in rows {
        let cells = [s.min.q01, s.min.mean, s.min.q99, s.max.q01, s.max.mean, s.max.q99].map(fmt_f64);
        out.push_str(&format!("{},{}\n", s.n, join(cells)));
    }
    out
}

pub const BATCH_HEADER: &str = "seed,status,p,worst_lower,worst_upper,eta,pass";

/// One row per `(seed, p)`; runs without a check emit a single row with
/// empty ratio cells.
pub fn batch_csv(runs: &[(u64, RandomMzOutcome)]) -> String {
    let mut out = format!("{BATCH_HEADER}\n");
    for (seed, outcome) in runs {
        match outcome {
            RandomMzOutcome::Checked { report, .. } => out.push_str(&report_rows(*seed, "checked", report)),
            RandomMzOutcome::OccupancyFailure { .. } => out.push_str(&format!("{seed},occupancy_failure,,,,,false\n")),
            RandomMzOutcome::Infeasible { .. } => out.push_str(&format!("{seed},infeasible,,,,,false\n")),
        }
    }
    out
}

fn report_rows(seed: u64, status: &str, report: &MzReport) -> String {
    let window = |lo: f64, hi: f64| lo >= 1.0 - report.eta && hi <= 1.0 + report.eta;
    report
        .per_p
        .iter()
        .map(|r| {
            format!(
                "{seed},{status},{},{},{},{},{}\n",
                r.p,
                fmt_f64(r.worst_lower),
                fmt_f64(r.worst_upper),
                fmt_f64(report.eta),
                window(r.worst_lower, r.worst_upper)
            )
        })
        .collect()
}

/// Per-exponent rows of a single report, same columns as [`batch_csv`].
pub fn report_csv(seed: u64, report: &MzReport) -> String {
    format!("{BATCH_HEADER}\n{}", report_rows(seed, "checked", report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{equal_area_partition, sample_uniform};

    #[test]
    fn floats_round_trip() {
        for x in [0.0, 1.0, -2.5, 0.1 + 0.2, 1e-300, 6.02e23, f64::MIN_POSITIVE, 123456.789] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_f64(0.25), "0.25");
        assert_eq!(fmt_f64(1e-300), "1e-300");
    }

    #[test]
    fn documents_carry_schema() {
        let pts = sample_uniform(2, 3, 1);
        let v: serde_json::Value = serde_json::from_str(&points_json(&pts, 1)).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["points"].as_array().unwrap().len(), 3);
        let v: serde_json::Value = serde_json::from_str(&partition_json(&equal_area_partition(2, 5).unwrap())).unwrap();
        assert_eq!(v["count"], 5);
        assert_eq!(v["patches"].as_array().unwrap().len(), 5);
    }

    #[test]
    fn csv_shapes() {
        let pts = sample_uniform(3, 4, 2);
        let text = points_csv(&pts);
        assert_eq!(text.lines().count(), 5);
        assert!(text.starts_with("x0,x1,x2,x3\n"));
        let text = partition_csv(&equal_area_partition(2, 6).unwrap());
        assert_eq!(text.lines().next().unwrap(), "index,area,diameter_bound,c0,c1,c2");
        assert_eq!(text.lines().count(), 7);
    }
}
