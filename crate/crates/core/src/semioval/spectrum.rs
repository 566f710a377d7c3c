//! Adding points back to a semioval contained in the curve.
//!
//! For `S ⊆ H` a line through a point of `S` other than the curve tangent is a
//! secant of `H`, so `S` is a semioval iff no secant of `H` meets it in
//! exactly one point. Starting from a semioval `base`, a subset `U` of a pool
//! can therefore be added iff every secant missing `base` meets `U` in a
//! number of points different from one.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::counts::SecantCounts;
use super::verify_semioval;
use crate::error::{Error, Result};
use crate::hermitian::HermitianModel;
use crate::plane::PlaneIndex;
use crate::pointset::PointSet;

/// A base semioval, a disjoint pool and the lines constraining additions.
#[derive(Clone, Debug)]
pub struct AddBackPlan {
    pub base: PointSet,
    pub pool: PointSet,
    /// Secants of the curve missing `base` and meeting `pool`, increasing.
    pub constraint_lines: Vec<PlaneIndex>,
    /// Pool points (curve-local) on each constraint line.
    pub line_points: Vec<Vec<u32>>,
}

/// Derives the constraint lines for adding points of `pool` to `base`.
pub fn derive_constraints(model: &HermitianModel, base: &PointSet, pool: &PointSet) -> Result<AddBackPlan> {
    let base = model.to_curve_set(base)?;
    let pool = model.to_curve_set(pool)?;
    if !base.is_disjoint(&pool)? {
        return Err(Error::BadParameters("pool meets the base".into()));
    }
    let counts = SecantCounts::compute(model, &base)?;
    let plane = model.plane();
    let pairs: Vec<(PlaneIndex, u32)> = pool
        .to_vec()
        .par_iter()
        .flat_map_iter(|&k| {
            let k = k as u32;
            let tangent = model.tangent_index(k);
            let counts = &counts;
            plane
                .lines_through_point(&model.point(k))
                .map(move |l| plane.line_index(&l))
                .filter(move |&li| li != tangent && counts.get(li) == 0)
                .map(move |li| (li, k))
        })
        .collect();
    let mut by_line: BTreeMap<PlaneIndex, Vec<u32>> = BTreeMap::new();
    for (l, k) in pairs {
        by_line.entry(l).or_default().push(k);
    }
    let (constraint_lines, mut line_points): (Vec<_>, Vec<_>) = by_line.into_iter().unzip();
    for v in &mut line_points {
        v.sort_unstable();
    }
    Ok(AddBackPlan { base, pool, constraint_lines, line_points })
}

/// Lexicographically first add-back subset (include-first search over the
/// pool in curve-local order) of the given size, honouring every constraint line.
struct Filler<'a> {
    pool: Vec<u32>,
    /// constraint lines through each pool position
    lines_of: Vec<Vec<usize>>,
    count: Vec<u32>,
    remaining: Vec<u32>,
    /// lines whose current count is exactly one
    ones: usize,
    /// max constraint lines per point over positions ≥ i
    suffix_max: Vec<usize>,
    chosen: Vec<bool>,
    target: usize,
    plan: &'a AddBackPlan,
}

impl<'a> Filler<'a> {
    fn new(plan: &'a AddBackPlan, target: usize) -> Self {
        let pool: Vec<u32> = plan.pool.iter().map(|k| k as u32).collect();
        let mut pos = BTreeMap::new();
        for (i, &k) in pool.iter().enumerate() {
            pos.insert(k, i);
        }
        let mut lines_of = vec![Vec::new(); pool.len()];
        let mut remaining = vec![0u32; plan.constraint_lines.len()];
        for (li, pts) in plan.line_points.iter().enumerate() {
            for k in pts {
                lines_of[pos[k]].push(li);
            }
            remaining[li] = pts.len() as u32;
        }
        let mut suffix_max = vec![0usize; pool.len() + 1];
        for i in (0..pool.len()).rev() {
            suffix_max[i] = suffix_max[i + 1].max(lines_of[i].len());
        }
        Filler {
            chosen: vec![false; pool.len()],
            count: vec![0; plan.constraint_lines.len()],
            pool,
            lines_of,
            remaining,
            ones: 0,
            suffix_max,
            target,
            plan,
        }
    }

    fn decide(&mut self, i: usize, take: bool) -> bool {
        let mut ok = true;
        for &l in &self.lines_of[i] {
            self.remaining[l] -= 1;
            if take {
                self.count[l] += 1;
                match self.count[l] {
                    1 => self.ones += 1,
                    2 => self.ones -= 1,
                    _ => {}
                }
            }
            ok &= !(self.remaining[l] == 0 && self.count[l] == 1);
        }
        self.chosen[i] = take;
        ok
    }

    fn undo(&mut self, i: usize, take: bool) {
        for &l in &self.lines_of[i] {
            self.remaining[l] += 1;
            if take {
                match self.count[l] {
                    1 => self.ones -= 1,
                    2 => self.ones += 1,
                    _ => {}
                }
                self.count[l] -= 1;
            }
        }
        self.chosen[i] = false;
    }

    fn search(&mut self, i: usize, taken: usize) -> bool {
        if taken == self.target {
            return self.ones == 0;
        }
        let n = self.pool.len();
        if taken + (n - i) < self.target || self.ones > (self.target - taken) * self.suffix_max[i] {
            return false;
        }
        for take in [true, false] {
            let ok = self.decide(i, take);
            if ok && self.search(i + 1, taken + take as usize) {
                return true;
            }
            self.undo(i, take);
        }
        false
    }

    fn run(mut self) -> Option<Vec<u32>> {
        if self.plan.constraint_lines.is_empty() {
            return (self.target <= self.pool.len()).then(|| self.pool[..self.target].to_vec());
        }
        self.search(0, 0).then(|| {
            self.pool.iter().zip(&self.chosen).filter(|(_, &c)| c).map(|(&k, _)| k).collect()
        })
    }
}

/// Add-back subset (curve-local indices) giving a semioval of size `k`.
pub fn fill_size(plan: &AddBackPlan, k: usize) -> Result<Vec<u32>> {
    let lo = plan.base.len();
    let hi = lo + plan.pool.len();
    if k < lo || k > hi {
        return Err(Error::UnachievableSize(k));
    }
    Filler::new(plan, k - lo).run().ok_or(Error::UnachievableSize(k))
}

/// Rebuilds `base ∪ added` and verifies it.
pub fn regenerate(model: &HermitianModel, plan: &AddBackPlan, added: &[u32]) -> Result<PointSet> {
    let mut s = plan.base.clone();
    for &k in added {
        if !plan.pool.contains(k as u64) {
            return Err(Error::NotSubset);
        }
        s.insert(k as u64);
    }
    if !verify_semioval(&s, model)?.is_semioval {
        return Err(Error::InvariantViolation(format!("add-back set of size {} is not a semioval", s.len())));
    }
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub k: usize,
    pub achieved: bool,
    pub recipe_id: String,
    /// Pool points added to the base, curve-local.
    pub added: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub base_id: String,
    pub base_size: usize,
    pub pool_size: usize,
    pub constraint_lines: usize,
    pub entries: Vec<SpectrumEntry>,
}

impl SpectrumResult {
    pub fn achieved(&self) -> Vec<usize> {
        self.entries.iter().filter(|e| e.achieved).map(|e| e.k).collect()
    }

    /// `k,achieved,recipe-id` rows with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,achieved,recipe-id\n");
        for e in &self.entries {
            out.push_str(&format!("{},{},{}\n", e.k, e.achieved, e.recipe_id));
        }
        out
    }
}

/// Fills each requested size, verifying every achieved set.
pub fn spectrum_fill(model: &HermitianModel, plan: &AddBackPlan, base_id: &str, ks: &[usize]) -> Result<SpectrumResult> {
    let mut entries = Vec::with_capacity(ks.len());
    for &k in ks {
        match fill_size(plan, k) {
            Ok(added) => {
                regenerate(model, plan, &added)?;
                entries.push(SpectrumEntry { k, achieved: true, recipe_id: format!("{base_id}+k{k}"), added });
            }
            Err(Error::UnachievableSize(_)) => {
                entries.push(SpectrumEntry { k, achieved: false, recipe_id: String::new(), added: Vec::new() })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(SpectrumResult {
        base_id: base_id.to_string(),
        base_size: plan.base.len(),
        pool_size: plan.pool.len(),
        constraint_lines: plan.constraint_lines.len(),
        entries,
    })
}
