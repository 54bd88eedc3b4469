//! JSON Lines and CSV renderings of resonance sets.

use std::io::Write;

use serde::Serialize;

use super::types::{Quartet, ResonanceSet, Triad};
use crate::lattice::{DispersionId, WaveVector};
use crate::Result;

#[derive(Serialize)]
struct QuartetRecord<'a> {
    disp: DispersionId,
    side_a: &'a [WaveVector; 2],
    side_b: &'a [WaveVector; 2],
    kind: super::Kind,
    form: super::Form,
    q: Vec<serde_json::Value>,
    gamma: &'a [i128; 4],
}

#[derive(Serialize)]
struct TriadRecord {
    disp: DispersionId,
    k1: WaveVector,
    k2: WaveVector,
    k3: WaveVector,
}

// Kernels can exceed the 53-bit range of JSON readers; small ones stay numeric.
fn kernel_json(q: u128) -> serde_json::Value {
    match u64::try_from(q) {
        Ok(x) if x < (1 << 53) => serde_json::Value::from(x),
        _ => serde_json::Value::from(q.to_string()),
    }
}

pub fn quartet_json(disp: DispersionId, q: &Quartet) -> String {
    let rec = QuartetRecord {
        disp,
        side_a: &q.side_a,
        side_b: &q.side_b,
        kind: q.kind,
        form: q.form,
        q: q.kernels.iter().map(|&k| kernel_json(k)).collect(),
        gamma: &q.gammas,
    };
    serde_json::to_string(&rec).expect("record serializes")
}

pub fn triad_json(disp: DispersionId, t: &Triad) -> String {
    serde_json::to_string(&TriadRecord {
        disp,
        k1: t.k1,
        k2: t.k2,
        k3: t.k3,
    })
    .expect("record serializes")
}

/// One JSON record per solution, in canonical order.
pub fn write_jsonl(set: &ResonanceSet, out: &mut impl Write) -> Result<()> {
    for q in set.quartets() {
        writeln!(out, "{}", quartet_json(set.disp, q))?;
    }
    for t in set.triads() {
        writeln!(out, "{}", triad_json(set.disp, t))?;
    }
    Ok(())
}

pub const CSV_HEADER: &str = "disp,D,mode,total,scale,angle,runtime_ms";

pub fn csv_row(set: &ResonanceSet, runtime_ms: u128) -> String {
    format!(
        "{},{},{},{},{},{},{}",
        set.disp,
        set.domain.half_width(),
        set.domain.mode_name(),
        set.counts.total,
        set.counts.scale,
        set.counts.angle,
        runtime_ms
    )
}
