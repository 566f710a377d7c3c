//! Semiovals from unions of arcs of the decomposition, bound arithmetic, and
//! a 2-blocking set built from the fibre set B.
//!
//! A union of arcs is a semioval as soon as every secant of the curve is a
//! bisecant of one of the chosen arcs, so picking arcs amounts to a
//! dominating set in the bipartite graph (secants, arcs).

mod blocking;
mod bounds;

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{ArcDecomposition, HermitianModel};
use crate::plane::PlaneIndex;
use crate::pointset::PointSet;
use crate::semioval::{verify_semioval, SemiovalReport};

pub use blocking::{two_blocking, two_blocking_bracket, HorizontalIncidence, TwoBlocking, TwoBlockingReport};
pub use bounds::{
    prior_bound, arc_bound, ceil_mul_ln, compare_bounds, smallest_winner, stein_bound, BoundReport, PRECISION_BITS,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphStats {
    /// Number of secants (vertex set A).
    pub a: u64,
    /// Number of arcs (vertex set B).
    pub b: u64,
    pub min_degree: u32,
    pub max_degree: u32,
    pub degree_histogram: BTreeMap<u32, u64>,
    pub degree_sum: u64,
}

/// Secants of the curve against the arcs they are bisecants of.
#[derive(Clone, Debug)]
pub struct ArcLineGraph {
    q: u32,
    arcs: usize,
    lines: Vec<PlaneIndex>,
    /// bit `i` set iff the line is a bisecant of arc `i`
    adj: Vec<u64>,
    stats: GraphStats,
}

impl ArcLineGraph {
    /// Streams every secant and counts its points on each arc.
    ///
    /// The result is cross-checked against the decomposition's own bisecant
    /// tables and by double counting.
    pub fn build(model: &HermitianModel, decomp: &ArcDecomposition) -> Result<ArcLineGraph> {
        let q = model.q();
        if q % 2 == 0 {
            return Err(Error::BadParameters(format!("the arc-line graph needs odd q (got {q})")));
        }
        let arcs = decomp.len();
        if arcs != q as usize + 1 || arcs > 64 {
            return Err(Error::BadParameters(format!("{arcs} arcs")));
        }
        let plane = model.plane();
        let rows: Vec<(PlaneIndex, u64)> = (0..plane.size())
            .into_par_iter()
            .filter_map(|li| {
                let pts = model.curve_points_on_line(&plane.line_at(li).unwrap());
                if pts.len() < 2 {
                    return None;
                }
                let mut per_arc = [0u8; 64];
                for k in pts {
                    per_arc[decomp.arc_of(k)] += 1;
                }
                let mask = (0..arcs).filter(|&i| per_arc[i] == 2).fold(0u64, |m, i| m | 1 << i);
                Some((li, mask))
            })
            .collect();
        let (lines, adj): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
        if lines.len() as u64 != model.num_secants() {
            return Err(Error::InvariantViolation(format!("{} secants streamed", lines.len())));
        }
        let mismatch = lines
            .par_iter()
            .zip(&adj)
            .any(|(&l, &m)| (0..arcs).any(|i| decomp.is_bisecant(i, l) != (m >> i & 1 == 1)));
        if mismatch {
            return Err(Error::InvariantViolation("bisecant tables disagree with counting".into()));
        }
        let mut degree_histogram = BTreeMap::new();
        for m in &adj {
            *degree_histogram.entry(m.count_ones()).or_default() += 1;
        }
        let degree_sum: u64 = degree_histogram.iter().map(|(&d, &n)| d as u64 * n).sum();
        let per_arc: u64 = (0..arcs).map(|i| decomp.bisecant_count(i)).sum();
        if degree_sum != per_arc {
            return Err(Error::InvariantViolation(format!("degree sum {degree_sum} != {per_arc}")));
        }
        let stats = GraphStats {
            a: lines.len() as u64,
            b: arcs as u64,
            min_degree: *degree_histogram.keys().next().unwrap_or(&0),
            max_degree: *degree_histogram.keys().next_back().unwrap_or(&0),
            degree_histogram,
            degree_sum,
        };
        Ok(ArcLineGraph { q, arcs, lines, adj, stats })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn stats(&self) -> &GraphStats {
        &self.stats
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs
    }

    /// Secant line indices, increasing.
    pub fn lines(&self) -> &[PlaneIndex] {
        &self.lines
    }

    /// Arcs of which the `i`-th secant is a bisecant, as a bit mask.
    pub fn arcs_of_line(&self, i: usize) -> u64 {
        self.adj[i]
    }

    /// True iff every vertex degree is `(q−1)/2` or `(q+1)/2`.
    pub fn degrees_as_expected(&self) -> bool {
        let lo = (self.q - 1) / 2;
        self.stats.degree_histogram.keys().all(|&d| d == lo || d == lo + 1)
    }

    /// Stein bound `⌈|B|·ln|A| / d⌉` with `d` the minimum secant degree.
    pub fn stein_bound(&self) -> Result<u64> {
        stein_bound(self.stats.a, self.stats.b, self.stats.min_degree as u64)
    }

    /// Number of secants that are a bisecant of no selected arc.
    pub fn uncovered(&self, selected: &[usize]) -> u64 {
        let mask = selected.iter().fold(0u64, |m, &i| m | 1 << i);
        self.adj.par_iter().filter(|&&m| m & mask == 0).count() as u64
    }

    fn check_coverable(&self) -> Result<()> {
        match self.adj.iter().position(|&m| m == 0) {
            Some(i) => Err(Error::CoverImpossible(format!("secant {} is a bisecant of no arc", self.lines[i]))),
            None => Ok(()),
        }
    }
}

/// Greedy maximum coverage: repeatedly take the arc that is a bisecant of
/// the most uncovered secants, ties to the smallest arc index.
pub fn greedy_dominating_arcs(graph: &ArcLineGraph) -> Result<Vec<usize>> {
    graph.check_coverable()?;
    let n = graph.arcs;
    let mut covered = vec![false; graph.adj.len()];
    let mut selected = Vec::new();
    let mut mask = 0u64;
    loop {
        let gains = graph
            .adj
            .par_iter()
            .zip(&covered)
            .fold(
                || vec![0u64; n],
                |mut g, (&m, &c)| {
                    if !c {
                        for (i, gi) in g.iter_mut().enumerate() {
                            *gi += m >> i & 1;
                        }
                    }
                    g
                },
            )
            .reduce(|| vec![0u64; n], |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect());
        let (best, gain) = gains
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 0)
            .fold((usize::MAX, 0u64), |acc, (i, &g)| if g > acc.1 { (i, g) } else { acc });
        if gain == 0 {
            break;
        }
        selected.push(best);
        mask |= 1 << best;
        covered.par_iter_mut().zip(&graph.adj).for_each(|(c, &m)| *c |= m >> best & 1 == 1);
    }
    if graph.uncovered(&selected) != 0 {
        return Err(Error::InvariantViolation("greedy cover left a secant uncovered".into()));
    }
    Ok(selected)
}

/// Arcs taken in a seeded random order until every secant is covered.
pub fn random_dominating_arcs(graph: &ArcLineGraph, seed: u64) -> Result<Vec<usize>> {
    graph.check_coverable()?;
    let mut order: Vec<usize> = (0..graph.arcs).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut selected = Vec::new();
    for i in order {
        selected.push(i);
        if graph.uncovered(&selected) == 0 {
            break;
        }
    }
    Ok(selected)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoverMethod {
    Greedy,
    Random,
}

impl std::str::FromStr for CoverMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greedy" => Ok(CoverMethod::Greedy),
            "random" => Ok(CoverMethod::Random),
            _ => Err(Error::BadParameters(format!("unknown cover method {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverReport {
    pub q: u32,
    pub method: CoverMethod,
    pub seed: Option<u64>,
    pub graph: GraphStats,
    pub degrees_as_expected: bool,
    pub selected: Vec<usize>,
    pub uncovered: u64,
    pub stein_bound: u64,
    pub within_stein_bound: bool,
    /// `(q²−q+1)·⌈8(q+1)/(q−1)·ln q⌉`
    pub arc_bound: u64,
    pub size: usize,
    pub semioval: SemiovalReport,
}

/// Selects arcs, forms their union and verifies it as a semioval.
pub fn dominating_cover(
    model: &HermitianModel,
    decomp: &ArcDecomposition,
    graph: &ArcLineGraph,
    method: CoverMethod,
    seed: u64,
) -> Result<(PointSet, CoverReport)> {
    let selected = match method {
        CoverMethod::Greedy => greedy_dominating_arcs(graph)?,
        CoverMethod::Random => random_dominating_arcs(graph, seed)?,
    };
    let mut union = PointSet::curve(model.q());
    for &i in &selected {
        union = union.union(decomp.arc(i))?;
    }
    let semioval = verify_semioval(&union, model)?;
    let stein = graph.stein_bound()?;
    let report = CoverReport {
        q: model.q(),
        method,
        seed: (method == CoverMethod::Random).then_some(seed),
        graph: graph.stats.clone(),
        degrees_as_expected: graph.degrees_as_expected(),
        uncovered: graph.uncovered(&selected),
        within_stein_bound: selected.len() as u64 <= stein,
        stein_bound: stein,
        arc_bound: arc_bound(model.q() as u64),
        size: union.len(),
        selected,
        semioval,
    };
    Ok((union, report))
}
