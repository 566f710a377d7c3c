//! A 2-blocking set of the curve from the fibre set B and the arcs.
//!
//! Affine frame only. Horizontal lines `Y = y0` all pass through `(1:0:0)`;
//! the line `Y = y0` holds the q affine points of the fibre over `y0`.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::constructions::main_b_set;
use crate::error::{Error, Result};
use crate::hermitian::{ArcDecomposition, Frame, HermitianModel};
use crate::numtheory::ceil_log2_plus_one;
use crate::pointset::PointSet;
use crate::semioval::{verify_2blocking, BlockingReport, SecantCounts};

/// Which horizontal lines each arc meets in an affine point.
#[derive(Clone, Debug)]
pub struct HorizontalIncidence {
    q: u32,
    /// `meets[arc][y]`
    meets: Vec<Vec<bool>>,
}

impl HorizontalIncidence {
    pub fn new(model: &HermitianModel, decomp: &ArcDecomposition) -> Result<HorizontalIncidence> {
        if model.frame() != Frame::Affine || decomp.frame() != Frame::Affine {
            return Err(Error::BadParameters("horizontal lines need the affine frame".into()));
        }
        let q = model.q();
        let qq = (q * q) as usize;
        let mut meets = vec![vec![false; qq]; decomp.len()];
        for local in 0..q * q * q {
            meets[decomp.arc_of(local)][(local / q) as usize] = true;
        }
        Ok(HorizontalIncidence { q, meets })
    }

    /// Affine points of arc `arc` on the line `Y = y`.
    pub fn points_on(&self, decomp: &ArcDecomposition, arc: usize, y: u32) -> Vec<u32> {
        (y * self.q..(y + 1) * self.q).filter(|&k| decomp.arc_of(k) == arc).collect()
    }

    /// Number of the given lines each arc meets.
    pub fn hits(&self, ys: &[u32]) -> Vec<usize> {
        self.meets.iter().map(|m| ys.iter().filter(|&&y| m[y as usize]).count()).collect()
    }

    /// Some arc meets at least `⌈k/2⌉` of the `k` given lines.
    pub fn halving_holds(&self, ys: &[u32]) -> bool {
        self.hits(ys).into_iter().max().unwrap_or(0) >= ys.len().div_ceil(2)
    }

    /// Greedy arc family meeting every given line; ties go to the smallest
    /// arc index.
    pub fn greedy_cover(&self, ys: &[u32]) -> Result<Vec<usize>> {
        let mut left: Vec<u32> = ys.to_vec();
        let mut chosen = Vec::new();
        while !left.is_empty() {
            let hits = self.hits(&left);
            let (best, &gain) = hits.iter().enumerate().rev().max_by_key(|(_, &h)| h).unwrap();
            if gain == 0 {
                return Err(Error::CoverImpossible(format!("no arc meets Y = {}", left[0])));
            }
            chosen.push(best);
            left.retain(|&y| !self.meets[best][y as usize]);
        }
        Ok(chosen)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoBlockingReport {
    pub q: u32,
    pub r: u32,
    pub size: usize,
    pub bracket: (i64, i64),
    pub in_bracket: bool,
    pub b_size: usize,
    /// Index of the arc through `(1:0:0)`.
    pub arc_c: usize,
    pub bar_size: usize,
    /// Every non-horizontal secant meets B̄ in 2..=q points.
    pub bar_blocks_non_horizontal: bool,
    /// Horizontal lines meeting B in affine points, counted directly.
    pub s_direct: u64,
    /// `q + q(q−1)/r`
    pub s_fibres: u64,
    /// `q + q(q+1)/r` (rounded down when not integral)
    pub s_stated: u64,
    pub k1: usize,
    pub k2: usize,
    pub arcs1: Vec<usize>,
    pub arcs2: Vec<usize>,
    /// `⌈log₂k+1⌉` for k1 and k2 (0 when the class is empty).
    pub log_caps: (u64, u64),
    pub b1_size: usize,
    pub b2_size: usize,
    pub hypothesis_holds: bool,
    pub blocking: BlockingReport,
    pub warnings: Vec<String>,
    pub wall_time_ms: f64,
}

#[derive(Clone, Debug)]
pub struct TwoBlocking {
    pub set: PointSet,
    pub report: TwoBlockingReport,
}

/// Size bracket for the final set:
/// `(q³−3q²−2q)/r + 2q² ∓ q + 2 ∓ 2⌈log₂q+1⌉`, rounded inwards.
pub fn two_blocking_bracket(q: u32, r: u32) -> (i64, i64) {
    let (q, r) = (q as i64, r as i64);
    let l = ceil_log2_plus_one(q as u64) as i64;
    let head = q * q * q - 3 * q * q - 2 * q;
    let lo = head + r * (2 * q * q - q + 2 - 2 * l);
    let hi = head + r * (2 * q * q + q + 2 + 2 * l);
    (lo.div_euclid(r) + (lo.rem_euclid(r) != 0) as i64, hi.div_euclid(r))
}

/// `1 < r < √q/2 − (2·log₂q + 1)/4`, i.e. `4r + 1 + 2·log₂q < 2√q`.
fn hypothesis(q: u32, r: u32) -> bool {
    let q = q as f64;
    r > 1 && 4.0 * r as f64 + 1.0 + 2.0 * q.log2() < 2.0 * q.sqrt()
}

fn cap(k: usize) -> u64 {
    if k == 0 {
        0
    } else {
        ceil_log2_plus_one(k as u64)
    }
}

/// Builds B̃ from B, the arc C through `(1:0:0)` and two greedy arc families
/// for the under-blocked and the fully contained horizontal lines.
pub fn two_blocking(model: &HermitianModel, decomp: &ArcDecomposition, r: u32, force: bool) -> Result<TwoBlocking> {
    let start = Instant::now();
    let q = model.q();
    if q % 2 == 0 || r < 2 || (q - 1) % r != 0 {
        return Err(Error::BadParameters(format!("need q odd and 1 < r | q-1 (got q = {q}, r = {r})")));
    }
    let incidence = HorizontalIncidence::new(model, decomp)?;
    let mut warnings = Vec::new();
    let hypothesis_holds = hypothesis(q, r);
    if !hypothesis_holds {
        let msg = format!("q = {q}, r = {r}: r < sqrt(q)/2 - (2 log2 q + 1)/4 fails");
        if !force {
            return Err(Error::HypothesisViolated(msg));
        }
        warnings.push(msg);
    }

    let inf = (q * q * q) as u64;
    let b = main_b_set(model, r)?;
    let arc_c = decomp.arc_of(inf as u32);
    let mut bar = b.symmetric_difference(decomp.arc(arc_c))?;
    bar.insert(inf);

    let qq = q * q;
    let fibre = |y: u32| (y * q..(y + 1) * q).map(|k| k as u64);
    let s_direct = (0..qq).filter(|&y| fibre(y).any(|k| b.contains(k))).count() as u64;
    let mut class1 = Vec::new();
    let mut class2 = Vec::new();
    for y in 0..qq {
        match fibre(y).filter(|&k| bar.contains(k)).count() as u32 {
            0 => class1.push(y),
            c if c == q => class2.push(y),
            _ => {}
        }
    }
    let (k1, k2) = (class1.len(), class2.len());
    if k1 + k2 > q as usize {
        return Err(Error::InvariantViolation(format!("k1 + k2 = {} > q", k1 + k2)));
    }

    let counts = SecantCounts::compute(model, &bar)?;
    let plane = model.plane();
    let good = counts
        .hits()
        .iter()
        .filter(|&&(l, c)| c >= 2 && c <= q && !model.is_horizontal(&plane.line_at(l).unwrap()))
        .count() as u64;
    let bar_blocks_non_horizontal = good == model.num_secants() - qq as u64;

    let arcs1 = incidence.greedy_cover(&class1)?;
    let arcs2 = incidence.greedy_cover(&class2)?;
    let log_caps = (cap(k1), cap(k2));
    if arcs1.len() as u64 > log_caps.0 || arcs2.len() as u64 > log_caps.1 {
        return Err(Error::InvariantViolation(format!(
            "greedy line cover used {} / {} arcs, caps {:?}",
            arcs1.len(),
            arcs2.len(),
            log_caps
        )));
    }
    let incidence = &incidence;
    let collect = |ys: &[u32], arcs: &[usize]| -> Vec<u64> {
        ys.iter()
            .flat_map(|&y| arcs.iter().flat_map(move |&a| incidence.points_on(decomp, a, y)))
            .map(|k| k as u64)
            .collect()
    };
    let b1 = collect(&class1, &arcs1);
    let b2 = collect(&class2, &arcs2);

    let mut set = bar.clone();
    for &k in &b2 {
        set.remove(k);
    }
    for &k in &b1 {
        set.insert(k);
    }
    set.insert(inf);

    let blocking = verify_2blocking(&set, model)?;
    let bracket = two_blocking_bracket(q, r);
    let size = set.len();
    let (q64, r64) = (q as u64, r as u64);
    let report = TwoBlockingReport {
        q,
        r,
        size,
        bracket,
        in_bracket: bracket.0 <= size as i64 && size as i64 <= bracket.1,
        b_size: b.len(),
        arc_c,
        bar_size: bar.len(),
        bar_blocks_non_horizontal,
        s_direct,
        s_fibres: q64 + q64 * (q64 - 1) / r64,
        s_stated: q64 + q64 * (q64 + 1) / r64,
        k1,
        k2,
        arcs1,
        arcs2,
        log_caps,
        b1_size: b1.len(),
        b2_size: b2.len(),
        hypothesis_holds,
        blocking,
        warnings,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    Ok(TwoBlocking { set, report })
}
