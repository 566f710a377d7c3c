//! The projective plane PG(2,q²): normalized points and lines, joins, meets,
//! and streaming enumeration.
//!
//! Points are triples normalized so that the first nonzero coordinate is one.
//! With `Q = q²` the canonical index of `(1:y:z)` is `Q·y + z`, of `(0:1:z)`
//! is `Q² + z`, and `(0:0:1)` is last at `Q² + Q`. Lines use the same scheme
//! on their dual coordinates, so `[a0:a1:a2]` contains `(x0:x1:x2)` iff
//! `a0·x0 + a1·x1 + a2·x2 = 0`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Elem, FieldSpec};

/// Canonical index of a point or line of the plane.
pub type PlaneIndex = u64;

/// Planes up to this many lines get dense incidence tables on request.
pub const INCIDENCE_TABLE_MAX_ORDER: u32 = 169;

/// A normalized point `(x0:x1:x2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProjPoint(pub [Elem; 3]);

/// A normalized line `[a0:a1:a2]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProjLine(pub [Elem; 3]);

impl ProjPoint {
    pub fn coords(&self) -> [Elem; 3] {
        self.0
    }
}

impl ProjLine {
    pub fn coords(&self) -> [Elem; 3] {
        self.0
    }
}

#[derive(Clone, Debug)]
pub struct Plane {
    field: FieldSpec,
}

impl Plane {
    pub fn new(field: FieldSpec) -> Self {
        Plane { field }
    }

    #[inline]
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// Order of the plane, q².
    #[inline]
    pub fn order(&self) -> u32 {
        self.field.order()
    }

    /// Number of points, which equals the number of lines.
    pub fn size(&self) -> u64 {
        let n = self.order() as u64;
        n * n + n + 1
    }

    /// Scales a nonzero triple so that its first nonzero coordinate is one.
    pub fn normalize(&self, v: [Elem; 3]) -> Result<[Elem; 3]> {
        let f = &self.field;
        for &x in &v {
            f.check(x)?;
        }
        let lead = v.iter().copied().find(|x| !x.is_zero()).ok_or_else(|| {
            Error::InvalidCoordinates("all coordinates are zero".into())
        })?;
        Ok(self.scale_to_lead(v, lead))
    }

    #[inline]
    fn scale_to_lead(&self, v: [Elem; 3], lead: Elem) -> [Elem; 3] {
        if lead == Elem::ONE {
            return v;
        }
        let f = &self.field;
        let inv = f.inv(lead);
        [f.mul(v[0], inv), f.mul(v[1], inv), f.mul(v[2], inv)]
    }

    pub fn point(&self, v: [Elem; 3]) -> Result<ProjPoint> {
        self.normalize(v).map(ProjPoint)
    }

    pub fn line(&self, v: [Elem; 3]) -> Result<ProjLine> {
        self.normalize(v).map(ProjLine)
    }

    /// Index of a normalized triple.
    #[inline]
    pub fn triple_index(&self, v: &[Elem; 3]) -> PlaneIndex {
        let n = self.order() as u64;
        if v[0] == Elem::ONE {
            n * v[1].0 as u64 + v[2].0 as u64
        } else if v[1] == Elem::ONE {
            n * n + v[2].0 as u64
        } else {
            n * n + n
        }
    }

    /// Normalized triple for an index in `0..size()`.
    pub fn triple_at(&self, idx: PlaneIndex) -> Result<[Elem; 3]> {
        let n = self.order() as u64;
        if idx >= self.size() {
            return Err(Error::InvalidCoordinates(format!("index {idx} out of range")));
        }
        Ok(if idx < n * n {
            [Elem::ONE, Elem((idx / n) as u32), Elem((idx % n) as u32)]
        } else if idx < n * n + n {
            [Elem::ZERO, Elem::ONE, Elem((idx - n * n) as u32)]
        } else {
            [Elem::ZERO, Elem::ZERO, Elem::ONE]
        })
    }

    pub fn point_index(&self, p: &ProjPoint) -> PlaneIndex {
        self.triple_index(&p.0)
    }

    pub fn line_index(&self, l: &ProjLine) -> PlaneIndex {
        self.triple_index(&l.0)
    }

    pub fn point_at(&self, idx: PlaneIndex) -> Result<ProjPoint> {
        self.triple_at(idx).map(ProjPoint)
    }

    pub fn line_at(&self, idx: PlaneIndex) -> Result<ProjLine> {
        self.triple_at(idx).map(ProjLine)
    }

    #[inline]
    pub fn dot(&self, a: &[Elem; 3], b: &[Elem; 3]) -> Elem {
        let f = &self.field;
        f.add(f.add(f.mul(a[0], b[0]), f.mul(a[1], b[1])), f.mul(a[2], b[2]))
    }

    pub fn incident(&self, p: &ProjPoint, l: &ProjLine) -> bool {
        self.dot(&p.0, &l.0).is_zero()
    }

    #[inline]
    fn cross(&self, a: &[Elem; 3], b: &[Elem; 3]) -> [Elem; 3] {
        let f = &self.field;
        [
            f.sub(f.mul(a[1], b[2]), f.mul(a[2], b[1])),
            f.sub(f.mul(a[2], b[0]), f.mul(a[0], b[2])),
            f.sub(f.mul(a[0], b[1]), f.mul(a[1], b[0])),
        ]
    }

    /// Normalized cross product, or `None` when the inputs are proportional.
    #[inline]
    pub fn join_triple(&self, a: &[Elem; 3], b: &[Elem; 3]) -> Option<[Elem; 3]> {
        let v = self.cross(a, b);
        let lead = v.iter().copied().find(|x| !x.is_zero())?;
        Some(self.scale_to_lead(v, lead))
    }

    /// Index of the line through two distinct normalized points (or, dually,
    /// of the meet of two distinct lines). Hot path of every verifier.
    #[inline]
    pub fn join_index(&self, a: &[Elem; 3], b: &[Elem; 3]) -> Option<PlaneIndex> {
        self.join_triple(a, b).map(|v| self.triple_index(&v))
    }

    pub fn line_through(&self, p: &ProjPoint, q: &ProjPoint) -> Result<ProjLine> {
        self.join_triple(&p.0, &q.0).map(ProjLine).ok_or(Error::EqualPoints)
    }

    pub fn meet(&self, l: &ProjLine, m: &ProjLine) -> Result<ProjPoint> {
        self.join_triple(&l.0, &m.0).map(ProjPoint).ok_or(Error::EqualPoints)
    }

    /// The q²+1 points of a line in increasing index order.
    pub fn points_on_line(&self, l: &ProjLine) -> impl Iterator<Item = ProjPoint> + '_ {
        IncidentTriples::new(self, l.0).map(ProjPoint)
    }

    /// The q²+1 lines through a point in increasing index order.
    pub fn lines_through_point(&self, p: &ProjPoint) -> impl Iterator<Item = ProjLine> + '_ {
        IncidentTriples::new(self, p.0).map(ProjLine)
    }

    pub fn points(&self) -> impl Iterator<Item = ProjPoint> + '_ {
        (0..self.size()).map(move |i| ProjPoint(self.triple_at(i).unwrap()))
    }

    pub fn lines(&self) -> impl Iterator<Item = ProjLine> + '_ {
        (0..self.size()).map(move |i| ProjLine(self.triple_at(i).unwrap()))
    }

    /// Dense incidence lists, only for small planes.
    pub fn incidence_table(&self) -> Option<IncidenceTable> {
        (self.order() <= INCIDENCE_TABLE_MAX_ORDER).then(|| IncidenceTable::new(self))
    }
}

/// All normalized triples `x` with `a·x = 0`, in increasing index order.
struct IncidentTriples<'a> {
    plane: &'a Plane,
    a: [Elem; 3],
    k: u32,
    /// Coefficients for the first branch: z = s + t·y.
    s: Elem,
    t: Elem,
}

impl<'a> IncidentTriples<'a> {
    fn new(plane: &'a Plane, a: [Elem; 3]) -> Self {
        let f = plane.field();
        let (mut s, mut t) = (Elem::ZERO, Elem::ZERO);
        if !a[2].is_zero() {
            let inv = f.inv(a[2]);
            s = f.neg(f.mul(a[0], inv));
            t = f.neg(f.mul(a[1], inv));
        } else if !a[1].is_zero() {
            s = f.neg(f.mul(a[0], f.inv(a[1])));
        }
        IncidentTriples { plane, a, k: 0, s, t }
    }
}

impl Iterator for IncidentTriples<'_> {
    type Item = [Elem; 3];

    fn next(&mut self) -> Option<[Elem; 3]> {
        let n = self.plane.order();
        if self.k > n {
            return None;
        }
        let f = self.plane.field();
        let k = self.k;
        self.k += 1;
        let a = &self.a;
        Some(if !a[2].is_zero() {
            if k < n {
                let y = Elem(k);
                [Elem::ONE, y, f.add(self.s, f.mul(self.t, y))]
            } else {
                // (0:1:z) with a1 + a2 z = 0; t = -a1/a2
                [Elem::ZERO, Elem::ONE, self.t]
            }
        } else if !a[1].is_zero() {
            if k < n {
                [Elem::ONE, self.s, Elem(k)]
            } else {
                [Elem::ZERO, Elem::ZERO, Elem::ONE]
            }
        } else if k < n {
            [Elem::ZERO, Elem::ONE, Elem(k)]
        } else {
            [Elem::ZERO, Elem::ZERO, Elem::ONE]
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.plane.order() + 1).saturating_sub(self.k) as usize;
        (left, Some(left))
    }
}

/// Point lists of every line, indexed by line index.
#[derive(Clone, Debug)]
pub struct IncidenceTable {
    line_points: Vec<Vec<PlaneIndex>>,
}

impl IncidenceTable {
    fn new(plane: &Plane) -> Self {
        let line_points = plane
            .lines()
            .map(|l| plane.points_on_line(&l).map(|p| plane.point_index(&p)).collect())
            .collect();
        IncidenceTable { line_points }
    }

    pub fn points_of(&self, line: PlaneIndex) -> &[PlaneIndex] {
        &self.line_points[line as usize]
    }

    pub fn num_lines(&self) -> usize {
        self.line_points.len()
    }
}

/// Per-line tallies with dense storage when the plane is small enough.
#[derive(Clone, Debug)]
pub enum LineTally {
    Dense(Vec<u32>),
    Sparse(HashMap<PlaneIndex, u32>),
}

/// Above this many lines, tallies fall back to a hash map.
const DENSE_TALLY_LIMIT: u64 = 1 << 26;

impl LineTally {
    pub fn for_plane(plane: &Plane) -> Self {
        let n = plane.size();
        if n <= DENSE_TALLY_LIMIT {
            LineTally::Dense(vec![0; n as usize])
        } else {
            LineTally::Sparse(HashMap::new())
        }
    }

    #[inline]
    pub fn bump(&mut self, line: PlaneIndex) -> u32 {
        match self {
            LineTally::Dense(v) => {
                let c = &mut v[line as usize];
                *c += 1;
                *c
            }
            LineTally::Sparse(m) => {
                let c = m.entry(line).or_insert(0);
                *c += 1;
                *c
            }
        }
    }

    #[inline]
    pub fn get(&self, line: PlaneIndex) -> u32 {
        match self {
            LineTally::Dense(v) => v[line as usize],
            LineTally::Sparse(m) => m.get(&line).copied().unwrap_or(0),
        }
    }

    /// Adds another tally into this one.
    pub fn merge(mut self, other: LineTally) -> LineTally {
        match (&mut self, other) {
            (LineTally::Dense(a), LineTally::Dense(b)) => {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
            }
            (LineTally::Sparse(a), LineTally::Sparse(b)) => {
                for (k, v) in b {
                    *a.entry(k).or_insert(0) += v;
                }
            }
            _ => unreachable!("tallies of one plane share a representation"),
        }
        self
    }

    /// Nonzero entries in increasing line order.
    pub fn nonzero(&self) -> Vec<(PlaneIndex, u32)> {
        match self {
            LineTally::Dense(v) => v
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(i, &c)| (i as PlaneIndex, c))
                .collect(),
            LineTally::Sparse(m) => {
                let mut out: Vec<_> = m.iter().map(|(&k, &v)| (k, v)).collect();
                out.sort_unstable();
                out
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn plane(q: u32) -> Plane {
        Plane::new(FieldSpec::for_q(q).unwrap())
    }

    #[test]
    fn axes() {
        let pl = plane(3);
        let x = pl.point([Elem::ONE, Elem::ZERO, Elem::ZERO]).unwrap();
        let y = pl.point([Elem::ZERO, Elem::ONE, Elem::ZERO]).unwrap();
        let l = pl.line_through(&x, &y).unwrap();
        assert_eq!(l, ProjLine([Elem::ZERO, Elem::ZERO, Elem::ONE]));
        assert!(pl.incident(&x, &l) && pl.incident(&y, &l));
        assert_eq!(pl.line_through(&x, &x), Err(Error::EqualPoints));
    }

    #[test]
    fn normalization() {
        let pl = plane(3);
        let two = Elem(2);
        let p = pl.point([Elem::ZERO, two, Elem(5)]).unwrap();
        assert_eq!(p.0[1], Elem::ONE);
        assert_eq!(pl.point(p.0).unwrap(), p);
        assert!(pl.point([Elem::ZERO; 3]).is_err());
        assert!(pl.point([Elem(9), Elem::ONE, Elem::ONE]).is_err());
    }

    #[test]
    fn index_round_trip_is_exhaustive_for_small_q() {
        for q in [2, 3] {
            let pl = plane(q);
            let n = pl.size();
            assert_eq!(n, (q as u64).pow(4) + (q as u64).pow(2) + 1);
            for i in 0..n {
                let t = pl.triple_at(i).unwrap();
                assert_eq!(pl.normalize(t).unwrap(), t);
                assert_eq!(pl.triple_index(&t), i);
            }
            assert!(pl.triple_at(n).is_err());
        }
    }

    #[test]
    fn line_sizes_and_order() {
        for q in [2, 3, 4] {
            let pl = plane(q);
            for l in pl.lines() {
                let pts: Vec<_> = pl.points_on_line(&l).map(|p| pl.point_index(&p)).collect();
                assert_eq!(pts.len() as u32, q * q + 1);
                assert!(pts.windows(2).all(|w| w[0] < w[1]));
                for p in pl.points_on_line(&l) {
                    assert!(pl.incident(&p, &l));
                }
            }
        }
    }

    #[test]
    fn pencils() {
        let pl = plane(3);
        let p = pl.point([Elem::ZERO, Elem::ZERO, Elem::ONE]).unwrap();
        let pencil: Vec<_> = pl.lines_through_point(&p).collect();
        assert_eq!(pencil.len(), 10);
        assert!(pencil.contains(&ProjLine([Elem::ONE, Elem::ZERO, Elem::ZERO])));
        // the pencil covers the plane, each other point exactly once
        let mut seen = vec![0u32; pl.size() as usize];
        for l in &pencil {
            for x in pl.points_on_line(l) {
                seen[pl.point_index(&x) as usize] += 1;
            }
        }
        let pi = pl.point_index(&p) as usize;
        assert_eq!(seen[pi], 10);
        assert!(seen.iter().enumerate().all(|(i, &c)| i == pi || c == 1));
    }

    #[test]
    fn any_two_points_share_exactly_one_line() {
        for q in [2, 3] {
            let pl = plane(q);
            let table = pl.incidence_table().unwrap();
            let n = pl.size() as usize;
            let mut common = vec![0u8; n * n];
            for l in 0..table.num_lines() {
                let pts = table.points_of(l as u64);
                for &a in pts {
                    for &b in pts {
                        common[a as usize * n + b as usize] += 1;
                    }
                }
            }
            for a in 0..n {
                for b in 0..n {
                    let expect = if a == b { q * q + 1 } else { 1 };
                    assert_eq!(common[a * n + b] as u32, expect);
                }
            }
        }
    }

    #[test]
    fn line_through_agrees_with_exhaustive_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for q in [2, 3, 4] {
            let pl = plane(q);
            let table = pl.incidence_table().unwrap();
            for _ in 0..1000 {
                let a = rng.gen_range(0..pl.size());
                let b = rng.gen_range(0..pl.size());
                if a == b {
                    continue;
                }
                let pa = pl.point_at(a).unwrap();
                let pb = pl.point_at(b).unwrap();
                let l = pl.line_index(&pl.line_through(&pa, &pb).unwrap());
                let scanned: Vec<u64> = (0..pl.size())
                    .filter(|&li| {
                        let pts = table.points_of(li);
                        pts.binary_search(&a).is_ok() && pts.binary_search(&b).is_ok()
                    })
                    .collect();
                assert_eq!(scanned, vec![l]);
                // meet is the dual operation
                let l2 = pl.line_at((l + 1) % pl.size()).unwrap();
                let m = pl.meet(&pl.line_at(l).unwrap(), &l2).unwrap();
                assert!(pl.incident(&m, &l2));
            }
        }
    }

    #[test]
    fn duality_sampled() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let pl = plane(5);
        for _ in 0..200 {
            let l = pl.line_at(rng.gen_range(0..pl.size())).unwrap();
            let p = pl.point_at(rng.gen_range(0..pl.size())).unwrap();
            let on = pl.points_on_line(&l).any(|x| x == p);
            let through = pl.lines_through_point(&p).any(|m| m == l);
            assert_eq!(on, through);
            assert_eq!(on, pl.incident(&p, &l));
        }
    }

    #[test]
    fn tallies_merge() {
        let pl = plane(2);
        let mut a = LineTally::for_plane(&pl);
        let mut b = LineTally::for_plane(&pl);
        a.bump(3);
        b.bump(3);
        b.bump(5);
        let m = a.merge(b);
        assert_eq!(m.nonzero(), vec![(3, 2), (5, 1)]);
        let mut s = LineTally::Sparse(HashMap::new());
        s.bump(9);
        assert_eq!(s.get(9), 1);
        assert_eq!(s.merge(LineTally::Sparse(HashMap::new())).nonzero(), vec![(9, 1)]);
    }
}
