//! Explicit semiovals inside the curve and their size formulas.
//!
//! Every construction returns a base semioval, the pool of deleted curve
//! points it may be refilled from, and the lines on which refilling must not
//! add exactly one point. All free choices are made by smallest code or index.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::Elem;
use crate::hermitian::{Frame, HermitianModel};
use crate::numtheory::{exact_sqrt, isqrt};
use crate::plane::{PlaneIndex, ProjLine, ProjPoint};
use crate::pointset::PointSet;
use crate::semioval::{points_from_pairs, verify_semioval, SecantCounts, SemiovalReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstructionId {
    /// Delete the curve points of q−1 secants through one point.
    Primo,
    /// Delete `(1:u:cu^(q+1)+m)`, u ∈ GF(q), m ≠ 0, then q−3 lines through `(0:1:0)`.
    Secondo,
    /// Delete the sets `T_v` for ⌊(q−1)/2⌋ values of v.
    Terzo,
    /// Horizontal fibres over `y = u^r + iv` plus one point per empty fibre.
    Main,
    /// `Main` with the largest admissible r for an odd square q.
    Best,
}

impl std::str::FromStr for ConstructionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "primo" => ConstructionId::Primo,
            "secondo" => ConstructionId::Secondo,
            "terzo" => ConstructionId::Terzo,
            "main" => ConstructionId::Main,
            "best" => ConstructionId::Best,
            _ => return Err(Error::BadParameters(format!("unknown construction {s:?}"))),
        })
    }
}

impl std::fmt::Display for ConstructionId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ConstructionId::Primo => "primo",
            ConstructionId::Secondo => "secondo",
            ConstructionId::Terzo => "terzo",
            ConstructionId::Main => "main",
            ConstructionId::Best => "best",
        };
        f.write_str(s)
    }
}

/// Sizes a construction guarantees: `[min, max]` minus `excluded`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeSpec {
    pub min: usize,
    pub max: usize,
    pub excluded: Vec<usize>,
}

impl SizeSpec {
    pub fn contains(&self, k: usize) -> bool {
        (self.min..=self.max).contains(&k) && !self.excluded.contains(&k)
    }

    pub fn sizes(&self) -> Vec<usize> {
        (self.min..=self.max).filter(|k| !self.excluded.contains(k)).collect()
    }

    /// Both endpoints plus up to `interior` distinct interior sizes drawn
    /// with a seeded generator, increasing.
    pub fn sample(&self, interior: usize, seed: u64) -> Vec<usize> {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let inner: Vec<usize> = self.sizes().into_iter().filter(|&k| k > self.min && k < self.max).collect();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut ks: Vec<usize> = inner.choose_multiple(&mut rng, interior).copied().collect();
        ks.push(self.min);
        ks.push(self.max);
        ks.sort_unstable();
        ks.dedup();
        ks
    }
}

fn cube(q: u64) -> u64 {
    q * q * q
}

/// `r` for the best construction at an odd square `q = s²`: `(s−1)/2`.
pub fn best_r(q: u32) -> Result<u32> {
    let s = exact_sqrt(q as u64).filter(|s| s % 2 == 1).ok_or_else(|| Error::BadParameters(format!("q = {q} is not an odd square")))?;
    Ok(((s - 1) / 2) as u32)
}

/// Size of the set B: `(q + q(q−1)/r)·q + 1`.
pub fn main_b_size(q: u32, r: u32) -> u64 {
    let q = q as u64;
    let r = r as u64;
    (q + q * (q - 1) / r) * q + 1
}

/// Closed-form size range of a construction.
pub fn expected_size(id: ConstructionId, q: u32, r: Option<u32>) -> Result<SizeSpec> {
    let odd = q % 2 == 1;
    let qq = q as u64;
    let top = (cube(qq) + 1) as usize;
    let spec = |min: u64, excluded: Vec<usize>| SizeSpec { min: min as usize, max: top, excluded };
    match id {
        ConstructionId::Primo => {
            if q < 2 {
                return Err(Error::BadParameters("q >= 2 required".into()));
            }
            let min = cube(qq) - qq * qq + qq;
            Ok(spec(min, vec![min as usize + 1]))
        }
        ConstructionId::Secondo => {
            if q < 3 {
                return Err(Error::BadParameters("q >= 3 required".into()));
            }
            let min = if odd { cube(qq) - 2 * qq * qq + 5 * qq - 2 } else { cube(qq) - 2 * qq * qq + 4 * qq + 1 };
            Ok(spec(min, vec![]))
        }
        ConstructionId::Terzo => {
            if q < 3 {
                return Err(Error::BadParameters("q > 2 required".into()));
            }
            let min = if odd { (cube(qq) + 2 * qq * qq - qq + 2) / 2 } else { (cube(qq) + 3 * qq * qq - 2 * qq + 2) / 2 };
            Ok(spec(min, vec![]))
        }
        ConstructionId::Main => {
            let r = r.ok_or_else(|| Error::BadParameters("r is required".into()))?;
            if r == 0 || (q - 1) % r != 0 {
                return Err(Error::BadParameters(format!("r = {r} does not divide q-1 = {}", q - 1)));
            }
            let rr = r as u64;
            let y = qq + (qq - 1) * qq / rr;
            Ok(spec(y * (qq - 1) + qq * qq + 1, vec![]))
        }
        ConstructionId::Best => {
            let s = best_r(q)? as u64 * 2 + 1;
            Ok(spec(2 * qq * qq * s + 4 * qq * qq - 2 * qq * s - 3 * qq + 1, vec![]))
        }
    }
}

/// Parameters and choices of a construction run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecipeParams {
    pub id: ConstructionId,
    pub q: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    pub frame: Frame,
    /// Curve-local index of the chosen base point, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base_point: Option<u32>,
    /// Deleted lines (plane line indices) in the order chosen.
    pub lines: Vec<PlaneIndex>,
    /// Codes of the chosen v values.
    pub v_list: Vec<u32>,
    pub forced: bool,
    pub expected: SizeSpec,
}

/// A constructed semioval with the data needed to refill it.
#[derive(Clone, Debug)]
pub struct ConstructionRecipe {
    pub params: RecipeParams,
    pub base: PointSet,
    pub pool: PointSet,
    /// Lines on which a refill must not add exactly one point.
    pub declared_constraints: Vec<PlaneIndex>,
    pub report: SemiovalReport,
    /// Diagnostic facts from intermediate checks.
    pub notes: Vec<String>,
    pub warnings: Vec<String>,
}

impl ConstructionRecipe {
    pub fn recipe_id(&self) -> String {
        match self.params.r {
            Some(r) => format!("{}-q{}-r{}", self.params.id, self.params.q, r),
            None => format!("{}-q{}", self.params.id, self.params.q),
        }
    }
}

fn require_frame(model: &HermitianModel, frame: Frame) -> Result<()> {
    if model.frame() != frame {
        return Err(Error::BadParameters(format!("construction needs the {frame:?} frame")));
    }
    Ok(())
}

fn invariant(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvariantViolation(msg()))
    }
}

/// Checks size and verdict; under `forced` only records them.
fn finish(
    model: &HermitianModel,
    params: RecipeParams,
    base: PointSet,
    declared_constraints: Vec<PlaneIndex>,
    notes: Vec<String>,
    mut warnings: Vec<String>,
) -> Result<ConstructionRecipe> {
    let mut pool = PointSet::full_curve(model.q());
    pool = pool.difference(&base)?;
    let report = verify_semioval(&base, model)?;
    let size_ok = base.len() == params.expected.min;
    if params.forced {
        if !size_ok {
            warnings.push(format!("size {} differs from the formula {}", base.len(), params.expected.min));
        }
        if !report.is_semioval {
            warnings.push("base is not a semioval".into());
        }
    } else {
        invariant(size_ok, || format!("{} base has size {}, expected {}", params.id, base.len(), params.expected.min))?;
        invariant(report.is_semioval, || format!("{} base is not a semioval", params.id))?;
    }
    Ok(ConstructionRecipe { params, base, pool, declared_constraints, report, notes, warnings })
}

/// Curve minus the points of the first q−1 secants through curve point 0.
pub fn construct_primo(model: &HermitianModel) -> Result<ConstructionRecipe> {
    let q = model.q();
    let expected = expected_size(ConstructionId::Primo, q, None)?;
    let plane = model.plane();
    let p = model.point(0);
    let tangent = model.tangent_index(0);
    let lines: Vec<PlaneIndex> = plane
        .lines_through_point(&p)
        .map(|l| plane.line_index(&l))
        .filter(|&l| l != tangent)
        .take(q as usize - 1)
        .collect();
    let mut base = PointSet::full_curve(q);
    for &l in &lines {
        for k in model.curve_points_on_line(&plane.line_at(l)?) {
            base.remove(k as u64);
        }
    }
    let params = RecipeParams {
        id: ConstructionId::Primo,
        q,
        r: None,
        frame: model.frame(),
        base_point: Some(0),
        lines: lines.clone(),
        v_list: vec![],
        forced: false,
        expected,
    };
    finish(model, params, base, lines, vec![], vec![])
}

/// Curve points `(1 : u+iv : c·N(u+iv) + m)` with `u ∈ GF(q)`, `m ∈ M∖{0}`.
fn t_set(model: &HermitianModel, v: Elem) -> Result<Vec<u32>> {
    let f = model.field();
    let mut out = Vec::new();
    for u in f.subfield() {
        let y = f.compose(u, v);
        let base = f.mul(f.c(), f.norm(y));
        for &m in model.traceless().iter().filter(|m| !m.is_zero()) {
            let p = ProjPoint([Elem::ONE, y, f.add(base, m)]);
            out.push(model.local_index(&p).ok_or(Error::NotOnCurve)?);
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Largest number of points of `pts` on one line avoiding `(0:0:1)`.
fn max_on_lines_avoiding_p(model: &HermitianModel, pts: &[u32]) -> u32 {
    let plane = model.plane();
    let mut best = pts.len().min(1) as u32;
    let mut per_line = std::collections::HashMap::new();
    for (a, &x) in pts.iter().enumerate() {
        for &y in &pts[a + 1..] {
            let l = plane.join_triple(&model.point(x).0, &model.point(y).0).unwrap();
            if !l[2].is_zero() {
                *per_line.entry(l).or_insert(0u32) += 1;
            }
        }
    }
    for c in per_line.values() {
        best = best.max(points_from_pairs(*c).unwrap_or(0));
    }
    best
}

/// Curve minus T, and for q > 3 also minus the lines `X2 = (c+m_j)X0`, j ≤ q−3.
pub fn construct_secondo(model: &HermitianModel, force: bool) -> Result<ConstructionRecipe> {
    require_frame(model, Frame::Standard)?;
    let q = model.q();
    let mut warnings = Vec::new();
    let expected = match expected_size(ConstructionId::Secondo, q, None) {
        Ok(e) => e,
        Err(e) if !force => return Err(e),
        Err(e) => {
            warnings.push(format!("outside hypothesis: {e}"));
            SizeSpec { min: 0, max: model.num_points() as usize, excluded: vec![] }
        }
    };
    let f = model.field();
    let t = t_set(model, Elem::ZERO)?;
    let mut notes = vec![format!("|T| = {}", t.len())];
    let max_t = max_on_lines_avoiding_p(model, &t);
    notes.push(format!("max |T ∩ ℓ| over lines avoiding (0:0:1) = {max_t}"));
    if !force {
        invariant(t.len() as u32 == q * (q - 1), || format!("|T| = {}", t.len()))?;
        invariant(max_t <= 2, || format!("a line avoiding (0:0:1) meets T in {max_t} points"))?;
    }
    let mut base = PointSet::full_curve(q);
    for &k in &t {
        base.remove(k as u64);
    }
    let plane = model.plane();
    let mut lines = Vec::new();
    if q > 3 {
        for &m in model.traceless().iter().filter(|m| !m.is_zero()).take(q as usize - 3) {
            let l: ProjLine = plane.line([f.add(f.c(), m), Elem::ZERO, f.neg(Elem::ONE)])?;
            lines.push(plane.line_index(&l));
            for k in model.curve_points_on_line(&l) {
                base.remove(k as u64);
            }
        }
    }
    let params = RecipeParams {
        id: ConstructionId::Secondo,
        q,
        r: None,
        frame: Frame::Standard,
        base_point: None,
        lines: lines.clone(),
        v_list: vec![],
        forced: force && !warnings.is_empty(),
        expected,
    };
    finish(model, params, base, lines, notes, warnings)
}

/// Curve minus `T_v` for the ⌊(q−1)/2⌋ smallest v ∈ GF(q).
pub fn construct_terzo(model: &HermitianModel, force: bool) -> Result<ConstructionRecipe> {
    require_frame(model, Frame::Standard)?;
    let q = model.q();
    let mut warnings = Vec::new();
    let expected = match expected_size(ConstructionId::Terzo, q, None) {
        Ok(e) => e,
        Err(e) if !force => return Err(e),
        Err(e) => {
            warnings.push(format!("outside hypothesis: {e}"));
            SizeSpec { min: 0, max: model.num_points() as usize, excluded: vec![] }
        }
    };
    let v_list: Vec<u32> = (0..(q - 1) / 2).collect();
    terzo_with(model, &v_list, expected, force && !warnings.is_empty(), warnings)
}

/// The same construction for an explicit list of distinct v codes in GF(q).
pub fn construct_terzo_with(model: &HermitianModel, v_list: &[u32]) -> Result<ConstructionRecipe> {
    require_frame(model, Frame::Standard)?;
    let q = model.q();
    let mut sorted = v_list.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != v_list.len() || sorted.len() as u32 != (q - 1) / 2 || sorted.iter().any(|&v| v >= q) {
        return Err(Error::BadParameters(format!("need {} distinct elements of GF(q)", (q - 1) / 2)));
    }
    let expected = expected_size(ConstructionId::Terzo, q, None)?;
    terzo_with(model, v_list, expected, false, vec![])
}

fn terzo_with(model: &HermitianModel, v_list: &[u32], expected: SizeSpec, forced: bool, warnings: Vec<String>) -> Result<ConstructionRecipe> {
    let q = model.q();
    let mut base = PointSet::full_curve(q);
    let mut notes = Vec::new();
    let mut union = Vec::new();
    for &v in v_list {
        let t = t_set(model, Elem(v))?;
        let max_t = max_on_lines_avoiding_p(model, &t);
        notes.push(format!("v = {v}: |T_v| = {}, max on lines avoiding (0:0:1) = {max_t}", t.len()));
        if !forced {
            invariant(max_t <= 2, || format!("a line avoiding (0:0:1) meets T_{v} in {max_t} points"))?;
        }
        union.extend(t);
    }
    for &k in &union {
        base.remove(k as u64);
    }
    // lines X1 = αX0 through (0:0:1): the points of T with second coordinate α
    let mut per_alpha = std::collections::HashMap::new();
    for &k in &union {
        *per_alpha.entry(model.point(k).0[1]).or_insert(0u32) += 1;
    }
    let worst = per_alpha.values().copied().max().unwrap_or(0);
    notes.push(format!("max |∪T_v ∩ ℓ| over lines through (0:0:1) = {worst}"));
    if !forced {
        invariant(worst < q, || format!("a line through (0:0:1) meets the union in {worst} points"))?;
    }
    let params = RecipeParams {
        id: ConstructionId::Terzo,
        q,
        r: None,
        frame: Frame::Standard,
        base_point: None,
        lines: vec![],
        v_list: v_list.to_vec(),
        forced,
        expected,
    };
    finish(model, params, base, vec![], notes, warnings)
}

/// The second coordinates `u^r + iv`, sorted by code.
pub fn fibre_values(model: &HermitianModel, r: u32) -> Vec<Elem> {
    let f = model.field();
    let mut ys: Vec<Elem> = f
        .subfield()
        .flat_map(|u| f.subfield().map(move |v| (u, v)))
        .map(|(u, v)| f.compose(f.pow(u, r as u64), v))
        .collect();
    ys.sort_unstable();
    ys.dedup();
    ys
}

/// The set B: affine curve points with `y = u^r + iv`, plus `(1:0:0)`.
pub fn main_b_set(model: &HermitianModel, r: u32) -> Result<PointSet> {
    require_frame(model, Frame::Affine)?;
    let q = model.q();
    let mut b = PointSet::curve(q);
    for y in fibre_values(model, r) {
        for rank in 0..q {
            b.insert((y.0 * q + rank) as u64);
        }
    }
    b.insert(cube(q as u64));
    Ok(b)
}

/// Admissibility of `r` for the main construction: `r | q−1` and `4r² < q`.
pub fn main_hypothesis(q: u32, r: u32) -> std::result::Result<(), String> {
    if r == 0 || (q - 1) % r != 0 {
        return Err(format!("r = {r} does not divide q-1 = {}", q - 1));
    }
    if r > 1 && 4 * (r as u64) * (r as u64) >= q as u64 {
        return Err(format!("r = {r} is not below sqrt(q)/2 for q = {q}"));
    }
    Ok(())
}

/// Lower bound `t ≥ (q − (2r−2)√q)/r` decided exactly.
pub fn meets_weil_bound(q: u32, r: u32, t: u32) -> bool {
    let lhs = q as i64 - (r as i64) * (t as i64);
    lhs <= 0 || (lhs * lhs) as u128 <= ((2 * r as i64 - 2).pow(2) as u128) * q as u128
}

/// Smallest integer satisfying [`meets_weil_bound`].
pub fn weil_threshold(q: u32, r: u32) -> u32 {
    (0..=q).find(|&t| meets_weil_bound(q, r, t)).unwrap()
}

/// B plus the first curve point on each horizontal line B misses.
pub fn construct_main(model: &HermitianModel, r: u32, force: bool) -> Result<ConstructionRecipe> {
    require_frame(model, Frame::Affine)?;
    let q = model.q();
    let mut warnings = Vec::new();
    if let Err(msg) = main_hypothesis(q, r) {
        if !force || r == 0 || (q - 1) % r != 0 {
            return Err(Error::BadParameters(msg));
        }
        warnings.push(format!("outside hypothesis: {msg}"));
    }
    let expected = expected_size(ConstructionId::Main, q, Some(r))?;
    let ys = fibre_values(model, r);
    let b = main_b_set(model, r)?;
    let mut notes = vec![
        format!("|Y| = {} horizontal fibres, |B| = {}", ys.len(), b.len()),
    ];
    let forced = !warnings.is_empty();
    if !forced {
        invariant(b.len() as u64 == main_b_size(q, r), || format!("|B| = {}", b.len()))?;
    }

    let plane = model.plane();
    let counts = SecantCounts::compute(model, &b)?;
    let threshold = weil_threshold(q, r);
    let min_non_horizontal = if counts.missed() > 0 {
        0
    } else {
        counts
            .hits()
            .iter()
            .filter(|(l, _)| !model.is_horizontal(&plane.line_at(*l).unwrap()))
            .map(|&(_, k)| k)
            .min()
            .unwrap_or(0)
    };
    notes.push(format!("min |ℓ ∩ B| over non-horizontal secants = {min_non_horizontal}, bound {threshold}"));
    if !meets_weil_bound(q, r, min_non_horizontal) {
        let msg = format!("a non-horizontal secant meets B in {min_non_horizontal} < {threshold} points");
        if forced {
            warnings.push(msg);
        } else {
            return Err(Error::InvariantViolation(msg));
        }
    }

    let mut s0 = b.clone();
    let in_y: std::collections::HashSet<u32> = ys.iter().map(|y| y.0).collect();
    for y0 in 0..model.field().order() {
        if !in_y.contains(&y0) {
            s0.insert((y0 * q) as u64);
        }
    }
    let s0_counts = SecantCounts::compute(model, &s0)?;
    let horizontal_min = (0..model.field().order())
        .map(|y| s0_counts.get(plane.line_index(&model.horizontal_line(Elem(y)))))
        .min()
        .unwrap();
    notes.push(format!("min |ℓ ∩ S0| over horizontal lines = {horizontal_min}, secants missing S0 = {}", s0_counts.missed()));
    if !forced {
        invariant(horizontal_min >= 2, || "a horizontal line meets S0 in fewer than 2 points".into())?;
        invariant(s0_counts.missed() == 0, || "a secant misses S0".into())?;
    }
    let params = RecipeParams {
        id: ConstructionId::Main,
        q,
        r: Some(r),
        frame: Frame::Affine,
        base_point: None,
        lines: vec![],
        v_list: vec![],
        forced,
        expected,
    };
    finish(model, params, s0, vec![], notes, warnings)
}

/// The main construction with `r = (√q−1)/2`; `r = 1` is rejected unless forced.
pub fn best_construction(model: &HermitianModel, force: bool) -> Result<ConstructionRecipe> {
    let q = model.q();
    let r = best_r(q)?;
    if r <= 1 && !force {
        return Err(Error::BadParameters(format!("q = {q} gives r = {r}: the set is the whole curve")));
    }
    let mut rec = construct_main(model, r.max(1), force)?;
    if r > 1 {
        let best = expected_size(ConstructionId::Best, q, None)?;
        invariant(best.min == rec.params.expected.min, || "size differs from the main formula".into())?;
    } else {
        rec.warnings.push("degenerate parameter r = 1".into());
    }
    rec.params.id = ConstructionId::Best;
    Ok(rec)
}

/// Dispatches on the construction id; builds a model in the required frame.
pub fn construct(id: ConstructionId, q: u32, r: Option<u32>, force: bool) -> Result<(HermitianModel, ConstructionRecipe)> {
    let frame = match id {
        ConstructionId::Main | ConstructionId::Best => Frame::Affine,
        _ => Frame::Standard,
    };
    let model = HermitianModel::for_q(q, frame)?;
    let rec = match id {
        ConstructionId::Primo => construct_primo(&model)?,
        ConstructionId::Secondo => construct_secondo(&model, force)?,
        ConstructionId::Terzo => construct_terzo(&model, force)?,
        ConstructionId::Main => construct_main(&model, r.ok_or_else(|| Error::BadParameters("--r is required".into()))?, force)?,
        ConstructionId::Best => best_construction(&model, force)?,
    };
    Ok((model, rec))
}

/// Floor of `√q`, exposed for reporting.
pub fn sqrt_floor(q: u32) -> u32 {
    isqrt(q as u64) as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formulas() {
        assert_eq!(expected_size(ConstructionId::Primo, 3, None).unwrap().min, 21);
        assert_eq!(expected_size(ConstructionId::Secondo, 3, None).unwrap().min, 22);
        assert_eq!(expected_size(ConstructionId::Secondo, 4, None).unwrap().min, 49);
        assert_eq!(expected_size(ConstructionId::Secondo, 5, None).unwrap().min, 98);
        assert_eq!(expected_size(ConstructionId::Terzo, 3, None).unwrap().min, 22);
        assert_eq!(expected_size(ConstructionId::Terzo, 4, None).unwrap().min, 53);
        assert_eq!(expected_size(ConstructionId::Terzo, 5, None).unwrap().min, 86);
        assert_eq!(expected_size(ConstructionId::Main, 25, Some(2)).unwrap().min, 8426);
        assert_eq!(expected_size(ConstructionId::Main, 17, Some(2)).unwrap().min, 2738);
        assert_eq!(expected_size(ConstructionId::Best, 25, None).unwrap().min, 8426);
        assert_eq!(main_b_size(25, 2), 8126);
        assert!(expected_size(ConstructionId::Main, 25, Some(5)).is_err());
        assert!(expected_size(ConstructionId::Best, 16, None).is_err());
    }

    #[test]
    fn terzo_formula_matches_deletion_count() {
        for q in 3u64..=9 {
            let odd = q % 2 == 1;
            let by_count = if odd { q * q * q + 1 - q * (q - 1) * (q - 1) / 2 } else { q * q * q + 1 - q * (q - 1) * (q - 2) / 2 };
            if crate::numtheory::prime_power(q).is_some() {
                assert_eq!(expected_size(ConstructionId::Terzo, q as u32, None).unwrap().min as u64, by_count);
            }
        }
    }

    #[test]
    fn weil_threshold_values() {
        assert_eq!(weil_threshold(25, 2), 8);
        assert_eq!(weil_threshold(17, 2), 5);
        assert_eq!(weil_threshold(25, 1), 25);
    }

    #[test]
    fn small_constructions() {
        let std3 = HermitianModel::for_q(3, Frame::Standard).unwrap();
        assert_eq!(construct_primo(&std3).unwrap().base.len(), 21);
        assert_eq!(construct_secondo(&std3, false).unwrap().base.len(), 22);
        assert_eq!(construct_terzo(&std3, false).unwrap().base.len(), 22);
        let m2 = HermitianModel::for_q(2, Frame::Standard).unwrap();
        assert_eq!(construct_primo(&m2).unwrap().base.len(), 6);
        assert!(construct_secondo(&m2, false).is_err());
    }

    #[test]
    fn main_with_r1_is_the_curve() {
        let m = HermitianModel::for_q(5, Frame::Affine).unwrap();
        let rec = construct_main(&m, 1, false).unwrap();
        assert_eq!(rec.base.len(), 126);
        assert!(rec.pool.is_empty());
    }

    #[test]
    fn best_rejects_degenerate_q9() {
        let m = HermitianModel::for_q(9, Frame::Affine).unwrap();
        assert!(matches!(best_construction(&m, false), Err(Error::BadParameters(_))));
        let forced = best_construction(&m, true).unwrap();
        assert_eq!(forced.base.len(), 730);
    }
}
