//! Semioval and 2-blocking verification, deletion and add-back, and
//! exhaustive search for small q.

mod counts;
mod search;
mod spectrum;

pub use counts::{points_from_pairs, SecantCounts};
pub use search::{exhaustive_search, SearchOptions, SearchResult};
pub use spectrum::{derive_constraints, fill_size, regenerate, spectrum_fill, AddBackPlan, SpectrumEntry, SpectrumResult};

use std::collections::BTreeMap;
use std::ops::Range;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::HermitianModel;
use crate::plane::{Plane, PlaneIndex, ProjPoint};
use crate::pointset::PointSet;

/// Number of witnesses kept in a report.
pub const MAX_WITNESSES: usize = 10;

/// A point of the set whose tangent count is not one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointWitness {
    pub point_index: PlaneIndex,
    pub coords: [u32; 3],
    pub tangent_count: u64,
    /// Up to `MAX_WITNESSES` tangent lines at the point, increasing.
    pub tangent_lines: Vec<PlaneIndex>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SemiovalReport {
    pub size: usize,
    /// tangent count → number of points of the set with that many tangents.
    pub tangent_histogram: BTreeMap<u64, u64>,
    pub is_semioval: bool,
    /// The lowest-indexed offending points.
    pub witnesses: Vec<PointWitness>,
    pub wall_time_ms: f64,
}

impl SemiovalReport {
    fn empty() -> Self {
        SemiovalReport {
            size: 0,
            tangent_histogram: BTreeMap::new(),
            is_semioval: true,
            witnesses: Vec::new(),
            wall_time_ms: 0.0,
        }
    }

    /// Combines reports over disjoint sets of centre points.
    pub fn merge(mut self, other: SemiovalReport) -> SemiovalReport {
        self.size += other.size;
        for (k, v) in other.tangent_histogram {
            *self.tangent_histogram.entry(k).or_default() += v;
        }
        self.is_semioval &= other.is_semioval;
        self.witnesses.extend(other.witnesses);
        self.witnesses.sort_by_key(|w| w.point_index);
        self.witnesses.truncate(MAX_WITNESSES);
        self.wall_time_ms += other.wall_time_ms;
        self
    }

    /// Equality ignoring timing.
    pub fn same_verdict(&self, other: &SemiovalReport) -> bool {
        self.size == other.size
            && self.tangent_histogram == other.tangent_histogram
            && self.is_semioval == other.is_semioval
            && self.witnesses == other.witnesses
    }
}

/// A curve secant meeting the set in fewer than two or in all q+1 points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineWitness {
    pub line_index: PlaneIndex,
    pub coords: [u32; 3],
    pub count: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockingReport {
    pub size: usize,
    /// `|ℓ ∩ B|` → number of (q+1)-secants ℓ with that intersection.
    pub histogram: BTreeMap<u32, u64>,
    pub min_count: u32,
    pub max_count: u32,
    pub is_2blocking: bool,
    /// Number of secants entirely inside the set.
    pub contained_secants: u64,
    /// Lowest-indexed secants meeting the set in fewer than two points.
    pub witnesses: Vec<LineWitness>,
    /// Lowest-indexed secants contained in the set.
    pub contained_witnesses: Vec<LineWitness>,
    pub wall_time_ms: f64,
}

impl BlockingReport {
    pub fn same_verdict(&self, other: &BlockingReport) -> bool {
        self.size == other.size
            && self.histogram == other.histogram
            && self.is_2blocking == other.is_2blocking
            && self.contained_secants == other.contained_secants
            && self.witnesses == other.witnesses
            && self.contained_witnesses == other.contained_witnesses
    }
}

pub(crate) fn codes(v: [crate::gf::Elem; 3]) -> [u32; 3] {
    v.map(|e| e.0)
}

fn elapsed_ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

/// Tangent lines at `p` with respect to `pts`, increasing.
fn tangent_lines_at(plane: &Plane, p: &ProjPoint, pts: &[ProjPoint]) -> Vec<PlaneIndex> {
    let mut hit: Vec<PlaneIndex> = pts.iter().filter(|r| *r != p).filter_map(|r| plane.join_index(&p.0, &r.0)).collect();
    hit.sort_unstable();
    hit.dedup();
    plane
        .lines_through_point(p)
        .map(|l| plane.line_index(&l))
        .filter(|l| hit.binary_search(l).is_err())
        .take(MAX_WITNESSES)
        .collect()
}

/// Counts the distinct lines from `pts[c]` to the other points, for `c` in `centers`.
fn pencil_report(plane: &Plane, pts: &[ProjPoint], centers: Range<usize>) -> SemiovalReport {
    let start = Instant::now();
    let lines_per_point = plane.order() as u64 + 1;
    let size = plane.size();
    let dense = size <= 1 << 26;
    let per_point: Vec<(usize, u64)> = centers
        .clone()
        .into_par_iter()
        .with_min_len(16)
        .map_init(
            || (if dense { vec![0u32; size as usize] } else { Vec::new() }, 0u32),
            |(stamp, epoch), c| {
                let p = &pts[c].0;
                let distinct = if dense {
                    *epoch += 1;
                    let mut d = 0u64;
                    for (j, r) in pts.iter().enumerate() {
                        if j == c {
                            continue;
                        }
                        let l = plane.join_index(p, &r.0).expect("distinct points") as usize;
                        if stamp[l] != *epoch {
                            stamp[l] = *epoch;
                            d += 1;
                        }
                    }
                    d
                } else {
                    let mut ls: Vec<PlaneIndex> = pts
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != c)
                        .map(|(_, r)| plane.join_index(p, &r.0).expect("distinct points"))
                        .collect();
                    ls.sort_unstable();
                    ls.dedup();
                    ls.len() as u64
                };
                (c, lines_per_point - distinct)
            },
        )
        .collect();
    let mut report = SemiovalReport::empty();
    report.size = centers.len();
    let mut bad: Vec<(PlaneIndex, usize, u64)> = Vec::new();
    for (c, t) in per_point {
        *report.tangent_histogram.entry(t).or_default() += 1;
        if t != 1 {
            bad.push((plane.point_index(&pts[c]), c, t));
        }
    }
    report.is_semioval = bad.is_empty();
    bad.sort_unstable();
    report.witnesses = bad
        .into_iter()
        .take(MAX_WITNESSES)
        .map(|(idx, c, t)| PointWitness {
            point_index: idx,
            coords: codes(pts[c].0),
            tangent_count: t,
            tangent_lines: tangent_lines_at(plane, &pts[c], pts),
        })
        .collect();
    report.wall_time_ms = elapsed_ms(start);
    report
}

/// Exact semioval test: every point of `s` must lie on exactly one line
/// meeting `s` only there. `s` may be any plane set.
pub fn verify_semioval(s: &PointSet, model: &HermitianModel) -> Result<SemiovalReport> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    let pts = model.points_of(s)?;
    Ok(pencil_report(model.plane(), &pts, 0..pts.len()))
}

/// The same test restricted to the points of `s` at positions `centers`
/// (in increasing index order). Reports over a partition merge to the full one.
pub fn verify_semioval_partial(s: &PointSet, model: &HermitianModel, centers: Range<usize>) -> Result<SemiovalReport> {
    let pts = model.points_of(s)?;
    if centers.end > pts.len() {
        return Err(Error::BadParameters(format!("centre range {centers:?} exceeds |S| = {}", pts.len())));
    }
    Ok(pencil_report(model.plane(), &pts, centers))
}

/// Exact 2-blocking test over all (q+1)-secants of the curve.
pub fn verify_2blocking(b: &PointSet, model: &HermitianModel) -> Result<BlockingReport> {
    let start = Instant::now();
    let curve = model.to_curve_set(b)?;
    let counts = SecantCounts::compute(model, &curve)?;
    Ok(blocking_report_from(model, &curve, &counts, start))
}

pub(crate) fn blocking_report_from(model: &HermitianModel, curve: &PointSet, counts: &SecantCounts, start: Instant) -> BlockingReport {
    let plane = model.plane();
    let full = model.q() + 1;
    let mut histogram: BTreeMap<u32, u64> = BTreeMap::new();
    if counts.missed() > 0 {
        histogram.insert(0, counts.missed());
    }
    for &(_, k) in counts.hits() {
        *histogram.entry(k).or_default() += 1;
    }
    let min_count = *histogram.keys().next().unwrap_or(&0);
    let max_count = *histogram.keys().next_back().unwrap_or(&0);
    let is_2blocking = min_count >= 2;
    let contained_secants = histogram.get(&full).copied().unwrap_or(0);
    let witness = |l: PlaneIndex, k: u32| LineWitness { line_index: l, coords: codes(plane.line_at(l).unwrap().0), count: k };
    let mut witnesses = Vec::new();
    if !is_2blocking {
        for l in 0..plane.size() {
            if witnesses.len() == MAX_WITNESSES {
                break;
            }
            let k = counts.get(l);
            if k < 2 && !model.is_tangent_line(&plane.line_at(l).unwrap()) {
                witnesses.push(witness(l, k));
            }
        }
    }
    let contained_witnesses = counts
        .hits()
        .iter()
        .filter(|&&(_, k)| k == full)
        .take(MAX_WITNESSES)
        .map(|&(l, k)| witness(l, k))
        .collect();
    BlockingReport {
        size: curve.len(),
        histogram,
        min_count,
        max_count,
        is_2blocking,
        contained_secants,
        witnesses,
        contained_witnesses,
        wall_time_ms: elapsed_ms(start),
    }
}

/// Deletion test: `T ⊆ S` may be removed from the semioval `S` when every
/// line meeting `S` in at least two points keeps at least two of them.
///
/// When the test passes, `S ∖ T` is verified as well; a failure there is
/// reported as an invariant violation.
pub fn deletable_check(s: &PointSet, t: &PointSet, model: &HermitianModel) -> Result<bool> {
    let s = model.to_curve_set(s)?;
    let t = model.to_curve_set(t)?;
    if !t.is_subset(&s)? {
        return Err(Error::NotSubset);
    }
    if t.is_empty() {
        return Ok(true);
    }
    let plane = model.plane();
    let pts_s: Vec<ProjPoint> = s.iter().map(|k| model.point(k as u32)).collect();
    let pts_t: Vec<ProjPoint> = t.iter().map(|k| model.point(k as u32)).collect();
    let s_pairs = counts::pair_tally(model, &pts_s);
    let t_pairs = counts::pair_tally(model, &pts_t);
    let k_of = |c: u32| counts::points_from_pairs(c).unwrap_or(0);
    // every line meeting T lies in the pencil of some point of T
    let ok = pts_t.par_iter().all(|p| {
        plane.lines_through_point(p).all(|l| {
            let li = plane.line_index(&l);
            let ks = match s_pairs.get(li) {
                0 => 1,
                c => k_of(c),
            };
            let kt = match t_pairs.get(li) {
                0 => 1,
                c => k_of(c),
            };
            ks < 2 || ks >= kt + 2
        })
    });
    if ok {
        let rest = s.difference(&t)?;
        if !rest.is_empty() && !verify_semioval(&rest, model)?.is_semioval {
            return Err(Error::InvariantViolation("deletion left a set that is not a semioval".into()));
        }
    }
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::Frame;
    use crate::pointset::Domain;

    #[test]
    fn full_curve_is_semioval_and_blocking() {
        for q in [2, 3] {
            let m = HermitianModel::for_q(q, Frame::Standard).unwrap();
            let s = PointSet::full_curve(q);
            let r = verify_semioval(&s, &m).unwrap();
            assert!(r.is_semioval);
            assert_eq!(r.size as u32, q * q * q + 1);
            let b = verify_2blocking(&s, &m).unwrap();
            assert!(b.is_2blocking);
            assert_eq!(b.min_count, q + 1);
            assert_eq!(b.contained_secants, m.num_secants());
        }
    }

    #[test]
    fn curve_minus_point() {
        let m = HermitianModel::for_q(2, Frame::Standard).unwrap();
        let mut s = PointSet::full_curve(2);
        s.remove(4);
        assert!(verify_semioval(&s, &m).unwrap().is_semioval);
        let b = verify_2blocking(&s, &m).unwrap();
        assert!(b.is_2blocking);
        assert_eq!(b.min_count, 2);
    }

    #[test]
    fn collinear_points_fail_with_witnesses() {
        let m = HermitianModel::for_q(3, Frame::Standard).unwrap();
        let l = m.plane().line_through(&m.point(0), &m.point(1)).unwrap();
        let pts = m.curve_points_on_line(&l);
        assert_eq!(pts.len(), 4);
        let s = PointSet::from_indices(Domain::Curve, 3, 28, pts.iter().map(|&k| k as u64)).unwrap();
        let r = verify_semioval(&s, &m).unwrap();
        assert!(!r.is_semioval);
        assert_eq!(r.tangent_histogram, BTreeMap::from([(9, 4)]));
        assert_eq!(r.witnesses.len(), 4);
        assert!(r.witnesses.iter().all(|w| w.tangent_count == 9 && w.tangent_lines.len() == 9));
    }

    #[test]
    fn empty_set_is_rejected() {
        let m = HermitianModel::for_q(2, Frame::Standard).unwrap();
        assert_eq!(verify_semioval(&PointSet::curve(2), &m), Err(Error::EmptySet));
    }

    #[test]
    fn deletion_examples() {
        let m3 = HermitianModel::for_q(3, Frame::Standard).unwrap();
        let h3 = PointSet::full_curve(3);
        assert!(deletable_check(&h3, &PointSet::curve(3), &m3).unwrap());
        let one = PointSet::from_indices(Domain::Curve, 3, 28, [5]).unwrap();
        assert!(deletable_check(&h3, &one, &m3).unwrap());

        let m2 = HermitianModel::for_q(2, Frame::Standard).unwrap();
        let h2 = PointSet::full_curve(2);
        let l = m2.plane().line_through(&m2.point(0), &m2.point(1)).unwrap();
        assert_eq!(m2.curve_points_on_line(&l).len(), 3);
        let two = PointSet::from_indices(Domain::Curve, 2, 9, [0, 1]).unwrap();
        assert!(!deletable_check(&h2, &two, &m2).unwrap());
        let outside = PointSet::from_indices(Domain::Curve, 2, 9, [0]).unwrap();
        assert_eq!(deletable_check(&outside, &two, &m2), Err(Error::NotSubset));
    }
}
