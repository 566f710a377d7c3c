//! Complete size spectrum of semiovals inside H_q for q ≤ 3.
//!
//! A subset of the curve is a semioval iff no (q+1)-secant meets it in
//! exactly one point. Points are decided in a fixed order; a branch dies as
//! soon as a fully decided secant holds exactly one chosen point.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{arc_decomposition, HermitianModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Fix a Singer-subgroup orbit representative into the set.
    pub symmetry: bool,
    /// Skip subtrees whose reachable sizes have all been seen.
    pub prune_found_sizes: bool,
    /// Keep every semioval found (only sensible for q = 2).
    pub collect_all: bool,
}

impl SearchOptions {
    pub fn for_q(q: u32) -> SearchOptions {
        if q <= 2 {
            SearchOptions { symmetry: false, prune_found_sizes: false, collect_all: true }
        } else {
            SearchOptions { symmetry: true, prune_found_sizes: true, collect_all: false }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub q: u32,
    pub sizes: Vec<usize>,
    /// First semioval met of each size, curve-local indices.
    pub witnesses: BTreeMap<usize, Vec<u32>>,
    /// Every semioval, when collected.
    pub all: Option<Vec<Vec<u32>>>,
    pub nodes: u64,
    pub wall_time_ms: f64,
}

struct Searcher {
    n: usize,
    /// order[d] = curve-local index decided at depth d
    order: Vec<u32>,
    /// secant masks over positions in `order`
    secants_of: Vec<Vec<u64>>,
    reps: u64,
    opts: SearchOptions,
    found: u64,
    witnesses: BTreeMap<usize, Vec<u32>>,
    all: Vec<Vec<u32>>,
    nodes: u64,
}

impl Searcher {
    fn set_of(&self, chosen: u64) -> Vec<u32> {
        let mut v: Vec<u32> = (0..self.n).filter(|&d| chosen >> d & 1 == 1).map(|d| self.order[d]).collect();
        v.sort_unstable();
        v
    }

    fn run(&mut self, d: usize, chosen: u64, decided: u64) {
        self.nodes += 1;
        let size = chosen.count_ones() as usize;
        if d == self.n {
            if size == 0 {
                return;
            }
            if self.found >> size & 1 == 0 {
                self.found |= 1 << size;
                self.witnesses.insert(size, self.set_of(chosen));
            }
            if self.opts.collect_all {
                self.all.push(self.set_of(chosen));
            }
            return;
        }
        if self.opts.prune_found_sizes {
            let hi = size + (self.n - d);
            let span = if hi >= 63 { u64::MAX } else { (1u64 << (hi + 1)) - 1 };
            let reach = span & !((1u64 << size) - 1);
            if reach & !self.found == 0 {
                return;
            }
        }
        if self.opts.symmetry && decided & self.reps == self.reps && chosen & self.reps == 0 {
            return;
        }
        let bit = 1u64 << d;
        let decided = decided | bit;
        for take in [true, false] {
            let chosen = if take { chosen | bit } else { chosen };
            let dead = self.secants_of[d]
                .iter()
                .any(|&m| m & !decided == 0 && (m & chosen).count_ones() == 1);
            if !dead {
                self.run(d + 1, chosen, decided);
            }
        }
    }
}

/// Exhaustive semioval search inside the curve for q ∈ {2, 3}.
pub fn exhaustive_search(model: &HermitianModel, opts: SearchOptions) -> Result<SearchResult> {
    let q = model.q();
    if q > 3 {
        return Err(Error::TooLarge(q));
    }
    let start = Instant::now();
    let n = model.num_points() as usize;
    let plane = model.plane();

    let reps_local: Vec<u32> = if opts.symmetry { arc_decomposition(model)?.representatives() } else { Vec::new() };
    let mut order = reps_local.clone();
    order.extend((0..n as u32).filter(|k| !reps_local.contains(k)));
    let mut pos = vec![0usize; n];
    for (d, &k) in order.iter().enumerate() {
        pos[k as usize] = d;
    }

    let mut secant_masks = Vec::new();
    for l in plane.lines() {
        let pts = model.curve_points_on_line(&l);
        if pts.len() > 1 {
            secant_masks.push(pts.iter().fold(0u64, |m, &k| m | 1 << pos[k as usize]));
        }
    }
    if secant_masks.len() as u64 != model.num_secants() {
        return Err(Error::InvariantViolation("secant count".into()));
    }
    let secants_of = (0..n).map(|d| secant_masks.iter().copied().filter(|m| m >> d & 1 == 1).collect()).collect();
    let reps = (0..reps_local.len()).fold(0u64, |m, d| m | 1 << d);

    let mut s = Searcher {
        n,
        order,
        secants_of,
        reps,
        opts,
        found: 0,
        witnesses: BTreeMap::new(),
        all: Vec::new(),
        nodes: 0,
    };
    s.run(0, 0, 0);
    let sizes = (1..=n).filter(|&k| s.found >> k & 1 == 1).collect();
    let all = opts.collect_all.then(|| {
        let mut v = std::mem::take(&mut s.all);
        v.sort();
        v
    });
    Ok(SearchResult {
        q,
        sizes,
        witnesses: s.witnesses,
        all,
        nodes: s.nodes,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::Frame;

    #[test]
    fn q2_spectrum() {
        let m = HermitianModel::for_q(2, Frame::Standard).unwrap();
        let r = exhaustive_search(&m, SearchOptions::for_q(2)).unwrap();
        assert_eq!(r.sizes, vec![6, 8, 9]);
        let all = r.all.unwrap();
        // full curve, 9 deletions of one point, and the size-6 sets
        assert_eq!(all.iter().filter(|s| s.len() == 9).count(), 1);
        assert_eq!(all.iter().filter(|s| s.len() == 8).count(), 9);
    }

    #[test]
    fn q2_symmetry_agrees() {
        let m = HermitianModel::for_q(2, Frame::Affine).unwrap();
        let opts = SearchOptions { symmetry: true, prune_found_sizes: true, collect_all: false };
        assert_eq!(exhaustive_search(&m, opts).unwrap().sizes, vec![6, 8, 9]);
    }

    #[test]
    fn rejects_large_q() {
        let m = HermitianModel::for_q(4, Frame::Standard).unwrap();
        assert_eq!(exhaustive_search(&m, SearchOptions::for_q(4)).unwrap_err(), Error::TooLarge(4));
    }
}
