//! Naive verifiers that walk every line of the plane and count memberships
//! point by point. Slow, independent of the pair-joining fast paths, and used
//! to cross-check them.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hermitian::HermitianModel;
use crate::plane::PlaneIndex;
use crate::pointset::PointSet;
use crate::semioval::{codes, BlockingReport, LineWitness, PointWitness, SemiovalReport, MAX_WITNESSES};

fn plane_set(model: &HermitianModel, s: &PointSet) -> Result<PointSet> {
    match s.domain() {
        crate::pointset::Domain::Curve => model.to_plane_set(s),
        crate::pointset::Domain::Plane => Ok(s.clone()),
    }
}

/// `(line, |ℓ ∩ S|, first point of S on ℓ)` for every line.
fn line_scan(model: &HermitianModel, s: &PointSet) -> Vec<(PlaneIndex, u32, PlaneIndex)> {
    let plane = model.plane();
    (0..plane.size())
        .into_par_iter()
        .map(|li| {
            let l = plane.line_at(li).unwrap();
            let mut count = 0;
            let mut first = PlaneIndex::MAX;
            for p in plane.points_on_line(&l) {
                let pi = plane.point_index(&p);
                if s.contains(pi) {
                    count += 1;
                    first = first.min(pi);
                }
            }
            (li, count, first)
        })
        .collect()
}

/// Semioval verdict from per-line counts.
pub fn oracle_semioval(s: &PointSet, model: &HermitianModel) -> Result<SemiovalReport> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    let start = Instant::now();
    let s = plane_set(model, s)?;
    let mut tangents: BTreeMap<PlaneIndex, Vec<PlaneIndex>> = s.iter().map(|p| (p, Vec::new())).collect();
    for (li, count, first) in line_scan(model, &s) {
        if count == 1 {
            tangents.get_mut(&first).unwrap().push(li);
        }
    }
    let mut hist = BTreeMap::new();
    let mut witnesses = Vec::new();
    for (p, ls) in &tangents {
        *hist.entry(ls.len() as u64).or_default() += 1;
        if ls.len() != 1 && witnesses.len() < MAX_WITNESSES {
            witnesses.push(PointWitness {
                point_index: *p,
                coords: codes(model.plane().point_at(*p)?.0),
                tangent_count: ls.len() as u64,
                tangent_lines: ls.iter().copied().take(MAX_WITNESSES).collect(),
            });
        }
    }
    Ok(SemiovalReport {
        size: s.len(),
        is_semioval: hist.keys().all(|&k| k == 1),
        tangent_histogram: hist,
        witnesses,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// 2-blocking verdict from per-line counts, classifying secants by counting
/// their curve points.
pub fn oracle_2blocking(b: &PointSet, model: &HermitianModel) -> Result<BlockingReport> {
    let start = Instant::now();
    let curve = model.to_curve_set(b)?;
    let s = plane_set(model, &curve)?;
    let full = model.q() + 1;
    let plane = model.plane();
    let mut histogram: BTreeMap<u32, u64> = BTreeMap::new();
    let mut witnesses = Vec::new();
    let mut contained_witnesses = Vec::new();
    for (li, count, _) in line_scan(model, &s) {
        let l = plane.line_at(li)?;
        if model.curve_points_on_line(&l).len() as u32 != full {
            continue;
        }
        *histogram.entry(count).or_default() += 1;
        let w = LineWitness { line_index: li, coords: codes(l.0), count };
        if count < 2 && witnesses.len() < MAX_WITNESSES {
            witnesses.push(w.clone());
        }
        if count == full && contained_witnesses.len() < MAX_WITNESSES {
            contained_witnesses.push(w);
        }
    }
    let min_count = *histogram.keys().next().unwrap_or(&0);
    Ok(BlockingReport {
        size: curve.len(),
        min_count,
        max_count: *histogram.keys().next_back().unwrap_or(&0),
        is_2blocking: min_count >= 2,
        contained_secants: histogram.get(&full).copied().unwrap_or(0),
        histogram,
        witnesses,
        contained_witnesses,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}
