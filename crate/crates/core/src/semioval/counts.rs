//! Intersection numbers of curve secants with a subset of the curve.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hermitian::HermitianModel;
use crate::plane::{LineTally, PlaneIndex, ProjPoint};
use crate::pointset::PointSet;

/// `|ℓ ∩ B|` for every (q+1)-secant ℓ of the curve and a fixed `B ⊆ H`.
///
/// Lines with at least two points of `B` come from joining pairs; lines with
/// exactly one come from the pencils of the points of `B`; the number of
/// secants missing `B` is what is left over.
#[derive(Clone, Debug)]
pub struct SecantCounts {
    /// `(line, k)` with `k ≥ 1`, increasing by line.
    hits: Vec<(PlaneIndex, u32)>,
    missed: u64,
}

/// Pair tally over the lines joining points of `pts`.
pub(crate) fn pair_tally(model: &HermitianModel, pts: &[ProjPoint]) -> LineTally {
    let plane = model.plane();
    let n = pts.len();
    let threads = rayon::current_num_threads().max(1);
    let min_len = (n / (4 * threads)).max(1);
    (0..n)
        .into_par_iter()
        .with_min_len(min_len)
        .fold(
            || LineTally::for_plane(plane),
            |mut t, a| {
                for b in a + 1..n {
                    t.bump(plane.join_index(&pts[a].0, &pts[b].0).expect("distinct points"));
                }
                t
            },
        )
        .reduce_with(LineTally::merge)
        .unwrap_or_else(|| LineTally::for_plane(plane))
}

/// Inverse of `k ↦ k(k−1)/2` on triangular numbers.
pub fn points_from_pairs(c: u32) -> Option<u32> {
    let k = ((1.0 + (1.0 + 8.0 * c as f64).sqrt()) / 2.0).round() as u32;
    (k * (k - 1) / 2 == c).then_some(k)
}

impl SecantCounts {
    pub fn compute(model: &HermitianModel, set: &PointSet) -> Result<SecantCounts> {
        let set = model.to_curve_set(set)?;
        let locals: Vec<u32> = set.iter().map(|k| k as u32).collect();
        let pts: Vec<ProjPoint> = locals.iter().map(|&k| model.point(k)).collect();
        let plane = model.plane();
        let pairs = pair_tally(model, &pts);
        let mut hits: Vec<(PlaneIndex, u32)> = pairs
            .nonzero()
            .into_iter()
            .map(|(l, c)| {
                points_from_pairs(c)
                    .map(|k| (l, k))
                    .ok_or_else(|| Error::InvariantViolation(format!("line {l} has {c} pairs")))
            })
            .collect::<Result<_>>()?;
        let singles: Vec<PlaneIndex> = locals
            .par_iter()
            .flat_map_iter(|&k| {
                let tangent = model.tangent_index(k);
                let pairs = &pairs;
                plane
                    .lines_through_point(&model.point(k))
                    .map(move |l| plane.line_index(&l))
                    .filter(move |&li| li != tangent && pairs.get(li) == 0)
            })
            .collect();
        hits.extend(singles.into_iter().map(|l| (l, 1)));
        hits.sort_unstable();
        let missed = model.num_secants() - hits.len() as u64;
        Ok(SecantCounts { hits, missed })
    }

    /// `|ℓ ∩ B|` for a secant `ℓ`; zero for lines not met.
    pub fn get(&self, line: PlaneIndex) -> u32 {
        match self.hits.binary_search_by_key(&line, |&(l, _)| l) {
            Ok(i) => self.hits[i].1,
            Err(_) => 0,
        }
    }

    /// Secants meeting `B`, with their counts, increasing by line.
    pub fn hits(&self) -> &[(PlaneIndex, u32)] {
        &self.hits
    }

    /// Number of secants disjoint from `B`.
    pub fn missed(&self) -> u64 {
        self.missed
    }
}
