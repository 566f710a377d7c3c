//! Partition of the curve into q+1 disjoint (q²−q+1)-arcs.
//!
//! The order-(q²−q+1) Singer subgroup fixes a Hermitian curve H' built from the
//! trace form of GF(q⁶) over GF(q²); its q+1 orbits on H' are arcs. A
//! projectivity carrying H' onto the model curve transports them.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::singer::{inverse, mat_vec, Cubic, Mat3, SingerGroup};
use super::{Frame, HermitianModel};
use crate::error::{Error, Result};
use crate::gf::{Elem, FieldSpec};
use crate::plane::{PlaneIndex, ProjPoint};
use crate::pointset::PointSet;

/// Histograms describing how the arcs sit against the curve's secants.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TangencyProfile {
    /// degree → number of secants that are bisecants of exactly that many arcs.
    pub degree_hist: BTreeMap<u32, u64>,
    /// For each point P of an arc C and each non-curve tangent to C at P:
    /// number of other arcs that line is tangent to → number of such (P, line) pairs.
    pub other_tangent_hist: BTreeMap<u32, u64>,
}

impl TangencyProfile {
    /// Every tangent to an arc, other than the curve tangent, is tangent to
    /// exactly one other arc.
    pub fn tangent_to_exactly_one_other(&self) -> bool {
        self.other_tangent_hist.keys().eq([1u32].iter())
    }
}

#[derive(Clone, Debug)]
pub struct ArcDecomposition {
    q: u32,
    frame: Frame,
    arcs: Vec<PointSet>,
    arc_of: Vec<u32>,
    /// Per arc, a bitset over plane line indices of its bisecants.
    bisecants: Vec<Vec<u64>>,
    /// Action of the Singer subgroup generator on curve-local indices.
    sigma: Vec<u32>,
    profile: TangencyProfile,
}

/// Gram matrix of the σ-invariant Hermitian form `Σ h_ij x_i x_j^q`.
fn invariant_gram(group: &SingerGroup) -> Mat3 {
    let ext = group.ext();
    let f = group.plane().field();
    let q = f.q() as u64;
    let t: Cubic = [Elem::ZERO, Elem::ONE, Elem::ZERO];
    let tau = ext.pow(&t, q * q * q);
    let one: Cubic = [Elem::ONE, Elem::ZERO, Elem::ZERO];
    let tp = [one, t, ext.mul(&t, &t)];
    let taup = [one, tau, ext.mul(&tau, &tau)];
    let mut g = [[Elem::ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            g[i][j] = ext.trace(&ext.mul(&tp[i], &taup[j]));
        }
    }
    g
}

fn sesq(f: &FieldSpec, g: &Mat3, x: &[Elem; 3], y: &[Elem; 3]) -> Elem {
    let yb = y.map(|e| f.frobenius(e));
    let gy = mat_vec(f, g, &yb);
    (0..3).fold(Elem::ZERO, |acc, k| f.add(acc, f.mul(x[k], gy[k])))
}

fn cross(f: &FieldSpec, a: &[Elem; 3], b: &[Elem; 3]) -> [Elem; 3] {
    [
        f.sub(f.mul(a[1], b[2]), f.mul(a[2], b[1])),
        f.sub(f.mul(a[2], b[0]), f.mul(a[0], b[2])),
        f.sub(f.mul(a[0], b[1]), f.mul(a[1], b[0])),
    ]
}

/// Matrix E (columns e0, e1, e2) with `H'(E·y) = y2·y0^q + y2^q·y0 + y1^(q+1)`.
fn standard_basis(f: &FieldSpec, g: &Mat3, e0: [Elem; 3]) -> Result<Mat3> {
    let missing = || Error::DecompositionNotFound("Hermitian form is degenerate".into());
    let basis = [
        [Elem::ONE, Elem::ZERO, Elem::ZERO],
        [Elem::ZERO, Elem::ONE, Elem::ZERO],
        [Elem::ZERO, Elem::ZERO, Elem::ONE],
    ];
    let w = *basis.iter().find(|w| !sesq(f, g, w, &e0).is_zero()).ok_or_else(missing)?;
    let a = sesq(f, g, &e0, &w);
    let target = f.neg(sesq(f, g, &w, &w));
    let z = f.elements().find(|&z| f.trace(z) == target).ok_or_else(missing)?;
    let alpha = f.div(z, a)?;
    let beta = f.inv(sesq(f, g, &w, &e0));
    let e2 = [0, 1, 2].map(|k| f.mul(beta, f.add(w[k], f.mul(alpha, e0[k]))));
    let ge0 = mat_vec(f, g, &e0.map(|e| f.frobenius(e)));
    let ge2 = mat_vec(f, g, &e2.map(|e| f.frobenius(e)));
    let e1 = cross(f, &ge0, &ge2);
    let n1 = sesq(f, g, &e1, &e1);
    let want = f.try_inv(n1).map_err(|_| missing())?;
    let gamma = f.elements().find(|&x| f.norm(x) == want).ok_or_else(missing)?;
    let e1 = e1.map(|e| f.mul(gamma, e));
    let mut m = [[Elem::ZERO; 3]; 3];
    for i in 0..3 {
        m[i] = [e0[i], e1[i], e2[i]];
    }
    Ok(m)
}

/// Builds and certifies the decomposition.
pub fn arc_decomposition(model: &HermitianModel) -> Result<ArcDecomposition> {
    let fail = |msg: String| Error::DecompositionNotFound(msg);
    let f = model.field();
    let plane = model.plane();
    let q = model.q();
    let arc_len = (q * q - q + 1) as usize;

    let group = SingerGroup::build(f.clone())?;
    let g = invariant_gram(&group);
    let orbits = group.orbits()?;
    let on_form = |p: &ProjPoint| sesq(f, &g, &p.0, &p.0).is_zero();
    let curve_orbits: Vec<&Vec<PlaneIndex>> =
        orbits.iter().filter(|o| on_form(&plane.point_at(o[0]).unwrap())).collect();
    if curve_orbits.len() != q as usize + 1 {
        return Err(fail(format!("{} orbits on the invariant curve", curve_orbits.len())));
    }

    let e0 = plane.point_at(curve_orbits[0][0])?.0;
    let e = standard_basis(f, &g, e0)?;
    let e_inv = inverse(f, &e)?;
    let to_model = |idx: PlaneIndex| -> Result<u32> {
        let p = plane.point_at(idx)?;
        if !on_form(&p) {
            return Err(fail(format!("orbit point {idx} is off the invariant curve")));
        }
        let y = ProjPoint(plane.normalize(mat_vec(f, &e_inv, &p.0))?);
        model.local_index(&y).ok_or_else(|| fail("transport left the curve".into()))
    };

    let mut parts: Vec<Vec<u32>> = curve_orbits
        .iter()
        .map(|o| o.iter().map(|&i| to_model(i)).collect::<Result<Vec<u32>>>())
        .collect::<Result<_>>()?;
    for p in &mut parts {
        p.sort_unstable();
    }
    parts.sort_by_key(|p| p[0]);

    let n = model.num_points() as usize;
    let mut arc_of = vec![u32::MAX; n];
    for (a, part) in parts.iter().enumerate() {
        if part.len() != arc_len {
            return Err(fail(format!("arc {a} has {} points", part.len())));
        }
        for &k in part {
            if arc_of[k as usize] != u32::MAX {
                return Err(fail(format!("curve point {k} lies in two arcs")));
            }
            arc_of[k as usize] = a as u32;
        }
    }
    if arc_of.iter().any(|&a| a == u32::MAX) {
        return Err(fail("arcs do not cover the curve".into()));
    }

    let sigma_std = {
        let tmp = mat3_mul(f, group.sigma(), &e);
        mat3_mul(f, &e_inv, &tmp)
    };
    let sigma: Vec<u32> = model
        .points()
        .iter()
        .map(|p| {
            let y = ProjPoint(plane.normalize(mat_vec(f, &sigma_std, &p.0)).unwrap());
            model.local_index(&y).ok_or_else(|| fail("σ does not fix the curve".into()))
        })
        .collect::<Result<_>>()?;

    let words = plane.size().div_ceil(64) as usize;
    let bisecants: Vec<Vec<u64>> = parts
        .par_iter()
        .map(|part| {
            let pts: Vec<[Elem; 3]> = part.iter().map(|&k| model.point(k).0).collect();
            let mut bits = vec![0u64; words];
            let mut distinct = 0usize;
            for a in 0..pts.len() {
                for b in a + 1..pts.len() {
                    let l = plane.join_index(&pts[a], &pts[b]).unwrap();
                    let w = &mut bits[(l >> 6) as usize];
                    let bit = 1u64 << (l & 63);
                    distinct += (*w & bit == 0) as usize;
                    *w |= bit;
                }
            }
            (bits, distinct)
        })
        .map(|(bits, distinct)| {
            if distinct != arc_len * (arc_len - 1) / 2 {
                return Err(fail("three collinear points in an arc".into()));
            }
            Ok(bits)
        })
        .collect::<Result<_>>()?;

    let arcs = parts
        .iter()
        .map(|p| PointSet::from_indices(crate::pointset::Domain::Curve, q, n as u64, p.iter().map(|&k| k as u64)))
        .collect::<Result<_>>()?;

    let mut d = ArcDecomposition {
        q,
        frame: model.frame(),
        arcs,
        arc_of,
        bisecants,
        sigma,
        profile: TangencyProfile::default(),
    };
    d.profile = d.compute_profile(model);
    if q % 2 == 1 {
        let lo = (q - 1) / 2;
        if d.profile.degree_hist.keys().any(|&k| k != lo && k != lo + 1) {
            return Err(fail(format!("bisecant degrees {:?}", d.profile.degree_hist)));
        }
        if !d.profile.tangent_to_exactly_one_other() {
            return Err(fail(format!("tangency counts {:?}", d.profile.other_tangent_hist)));
        }
    }
    Ok(d)
}

fn mat3_mul(f: &FieldSpec, a: &Mat3, b: &Mat3) -> Mat3 {
    let mut m = [[Elem::ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                m[i][j] = f.add(m[i][j], f.mul(a[i][k], b[k][j]));
            }
        }
    }
    m
}

impl ArcDecomposition {
    fn compute_profile(&self, model: &HermitianModel) -> TangencyProfile {
        let plane = model.plane();
        let q = self.q;
        let degree_hist = (0..plane.size())
            .into_par_iter()
            .filter(|&i| !model.is_tangent_line(&plane.line_at(i).unwrap()))
            .fold(BTreeMap::new, |mut h: BTreeMap<u32, u64>, i| {
                *h.entry(self.degree(i)).or_default() += 1;
                h
            })
            .reduce(BTreeMap::new, merge_hist);
        let other_tangent_hist = (0..model.num_points())
            .into_par_iter()
            .fold(BTreeMap::new, |mut h: BTreeMap<u32, u64>, k| {
                let arc = self.arc_of[k as usize] as usize;
                let tangent = model.tangent_index(k);
                for l in plane.lines_through_point(&model.point(k)) {
                    let li = plane.line_index(&l);
                    if li == tangent || self.is_bisecant(arc, li) {
                        continue;
                    }
                    // q+1 curve points: P, two per bisected arc, one per other tangent arc
                    let others = q - 2 * self.degree(li);
                    *h.entry(others).or_default() += 1;
                }
                h
            })
            .reduce(BTreeMap::new, merge_hist);
        TangencyProfile { degree_hist, other_tangent_hist }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn arcs(&self) -> &[PointSet] {
        &self.arcs
    }

    pub fn arc(&self, i: usize) -> &PointSet {
        &self.arcs[i]
    }

    /// Index of the arc containing a curve point.
    pub fn arc_of(&self, local: u32) -> usize {
        self.arc_of[local as usize] as usize
    }

    /// Smallest curve-local index of each arc.
    pub fn representatives(&self) -> Vec<u32> {
        self.arcs.iter().map(|a| a.iter().next().unwrap() as u32).collect()
    }

    /// Image of a curve point under the Singer subgroup generator.
    pub fn sigma(&self, local: u32) -> u32 {
        self.sigma[local as usize]
    }

    #[inline]
    pub fn is_bisecant(&self, arc: usize, line: PlaneIndex) -> bool {
        self.bisecants[arc][(line >> 6) as usize] >> (line & 63) & 1 == 1
    }

    /// Number of arcs for which the line is a bisecant.
    pub fn degree(&self, line: PlaneIndex) -> u32 {
        (0..self.arcs.len()).filter(|&a| self.is_bisecant(a, line)).count() as u32
    }

    /// Number of bisecants of one arc.
    pub fn bisecant_count(&self, arc: usize) -> u64 {
        self.bisecants[arc].iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Bisecant line indices of one arc, increasing.
    pub fn bisecant_lines(&self, arc: usize) -> impl Iterator<Item = PlaneIndex> + '_ {
        self.bisecants[arc].iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let t = bits.trailing_zeros() as u64;
                bits &= bits - 1;
                Some(wi as u64 * 64 + t)
            })
        })
    }

    pub fn profile(&self) -> &TangencyProfile {
        &self.profile
    }

    /// Arcs as sorted curve-local index lists.
    pub fn to_lists(&self) -> Vec<Vec<u64>> {
        self.arcs.iter().map(|a| a.to_vec()).collect()
    }
}

fn merge_hist(mut a: BTreeMap<u32, u64>, b: BTreeMap<u32, u64>) -> BTreeMap<u32, u64> {
    for (k, v) in b {
        *a.entry(k).or_default() += v;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_decompositions() {
        for q in [2u32, 3, 4, 5] {
            let m = HermitianModel::for_q(q, Frame::Standard).unwrap();
            let d = arc_decomposition(&m).unwrap();
            assert_eq!(d.len(), q as usize + 1);
            for a in d.arcs() {
                assert_eq!(a.len() as u32, q * q - q + 1);
            }
            let total: usize = d.arcs().iter().map(|a| a.len()).sum();
            assert_eq!(total as u32, m.num_points());
        }
    }

    #[test]
    fn sigma_preserves_each_arc() {
        let m = HermitianModel::for_q(3, Frame::Affine).unwrap();
        let d = arc_decomposition(&m).unwrap();
        for k in 0..m.num_points() {
            assert_eq!(d.arc_of(d.sigma(k)), d.arc_of(k));
        }
        // σ acts regularly on each arc
        let rep = d.representatives()[0];
        let mut x = rep;
        let mut steps = 0;
        loop {
            x = d.sigma(x);
            steps += 1;
            if x == rep {
                break;
            }
        }
        assert_eq!(steps, 7);
    }

    #[test]
    fn degrees_by_streaming() {
        let m = HermitianModel::for_q(3, Frame::Standard).unwrap();
        let d = arc_decomposition(&m).unwrap();
        let mut sum_deg = 0u64;
        for l in m.plane().lines() {
            let pts = m.curve_points_on_line(&l);
            if pts.len() == 1 {
                continue;
            }
            let li = m.plane().line_index(&l);
            let mut per_arc = vec![0u32; d.len()];
            for k in pts {
                per_arc[d.arc_of(k)] += 1;
            }
            assert!(per_arc.iter().all(|&c| c <= 2));
            let deg = per_arc.iter().filter(|&&c| c == 2).count() as u32;
            assert_eq!(deg, d.degree(li));
            sum_deg += deg as u64;
        }
        let bis: u64 = (0..d.len()).map(|a| d.bisecant_count(a)).sum();
        assert_eq!(sum_deg, bis);
    }
}
