//! Output files of a run: archive.csv, boxes.json, lower_bounds.json,
//! history.jsonl, manifest.json, plus the timings.jsonl sidecar.
//!
//! Every payload except timings.jsonl is byte-deterministic for a given
//! manifest: floats are written with the shortest round-trip representation
//! and all collections are emitted in id/insertion order.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::Context;
use serde::Serialize;

use paretobb::bounding::LowerBoundSet;
use paretobb::dominance::ObjectiveVector;
use paretobb::engine::{IterationStats, Termination};
use paretobb::geometry::Subregion;

use crate::manifest::RunManifest;

/// Unified result of any algorithm spec (branch-and-bound or standalone
/// evolutionary baseline).
#[derive(Debug)]
pub struct RunArtifacts {
    pub history: Vec<IterationStats>,
    pub archive: Vec<ObjectiveVector>,
    pub boxes: Vec<Subregion>,
    pub lower_bounds: Vec<LowerBoundSet>,
    pub termination: Termination,
    /// Archive entries whose preimages satisfy every constraint within 1e-9.
    pub feasible_count: usize,
    pub total_wall_ms: u64,
}

#[derive(Serialize)]
struct HistoryRow {
    k: usize,
    bnv: usize,
    archive_size: usize,
    gap: Option<f64>,
}

#[derive(Serialize)]
struct TimingRow {
    k: usize,
    wall_ms: u64,
}

fn finite(gap: f64) -> Option<f64> {
    gap.is_finite().then_some(gap)
}

/// `k,bnv,archive_size,gap` per iteration as JSON lines; gap is null while
/// either bound set is empty.
pub fn history_jsonl(history: &[IterationStats]) -> String {
    let mut out = String::new();
    for s in history {
        let row = HistoryRow {
            k: s.k,
            bnv: s.bnv,
            archive_size: s.archive_size,
            gap: finite(s.gap),
        };
        out.push_str(&serde_json::to_string(&row).expect("history row serializes"));
        out.push('\n');
    }
    out
}

/// Wall-clock sidecar; the only non-deterministic payload.
pub fn timings_jsonl(history: &[IterationStats]) -> String {
    let mut out = String::new();
    for s in history {
        let row = TimingRow {
            k: s.k,
            wall_ms: s.wall_ms,
        };
        out.push_str(&serde_json::to_string(&row).expect("timing row serializes"));
        out.push('\n');
    }
    out
}

/// CSV with columns `f1..fm,x1..xn,box_id`; empty cells for missing
/// preimages or origins.
pub fn archive_csv(archive: &[ObjectiveVector], m: usize, n: usize) -> String {
    let mut out = String::new();
    let mut headers = Vec::with_capacity(m + n + 1);
    for i in 1..=m {
        headers.push(format!("f{i}"));
    }
    for i in 1..=n {
        headers.push(format!("x{i}"));
    }
    headers.push("box_id".into());
    out.push_str(&headers.join(","));
    out.push('\n');
    for e in archive {
        let mut cells: Vec<String> = e.values.iter().map(|v| v.to_string()).collect();
        match &e.preimage {
            Some(x) => cells.extend(x.iter().map(|v| v.to_string())),
            None => cells.extend(std::iter::repeat_n(String::new(), n)),
        }
        cells.push(
            e.origin_box
                .map(|id| id.to_string())
                .unwrap_or_default(),
        );
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

pub fn boxes_json(boxes: &[Subregion]) -> String {
    serde_json::to_string_pretty(boxes).expect("boxes serialize")
}

pub fn lower_bounds_json(lower_bounds: &[LowerBoundSet]) -> String {
    serde_json::to_string_pretty(lower_bounds).expect("lower bounds serialize")
}

pub fn write_run(dir: &Path, manifest: &RunManifest, artifacts: &RunArtifacts) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let write = |name: &str, payload: String| -> anyhow::Result<()> {
        fs::write(dir.join(name), payload).with_context(|| format!("writing {name}"))
    };
    let problem = manifest.build_problem()?;
    write("archive.csv", archive_csv(&artifacts.archive, problem.m, problem.n))?;
    write("boxes.json", boxes_json(&artifacts.boxes))?;
    write("lower_bounds.json", lower_bounds_json(&artifacts.lower_bounds))?;
    write("history.jsonl", history_jsonl(&artifacts.history))?;
    write("timings.jsonl", timings_jsonl(&artifacts.history))?;
    write(
        "manifest.json",
        serde_json::to_string_pretty(manifest).expect("manifest serializes") + "\n",
    )?;
    Ok(())
}
