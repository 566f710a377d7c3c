//! The Hermitian curve `X2·X0^q + X2^q·X0 + X1^(q+1) = 0` in PG(2,q²).
//!
//! Two coordinatizations of the same point set are supported, differing only
//! in how curve-local indices are assigned:
//!
//! * [`Frame::Standard`]: points `(1 : u : c·u^(q+1) + m)` for `u ∈ GF(q²)`,
//!   `m ∈ M`, indexed `q·code(u) + rank(m)`, followed by `(0:0:1)`.
//! * [`Frame::Affine`]: affine points `(x, y) = (x : y : 1)` of
//!   `X^q + X + Y^(q+1) = 0`, indexed `q·code(y) + rank(x − x₀(y))` where
//!   `x₀(y)` is the smallest solution over `y`, followed by `(1:0:0)`.
//!   Horizontal lines `Y = y₀` all pass through `(1:0:0)`.

mod arcs;
mod singer;

pub use arcs::{arc_decomposition, ArcDecomposition, TangencyProfile};
pub use singer::{singer_orbits, SingerGroup};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Elem, FieldSpec};
use crate::plane::{Plane, PlaneIndex, ProjLine, ProjPoint};
use crate::pointset::{Domain, PointSet};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    #[default]
    Standard,
    Affine,
}

impl std::str::FromStr for Frame {
    type Err = Error;

    fn from_str(s: &str) -> Result<Frame> {
        match s {
            "standard" => Ok(Frame::Standard),
            "affine" => Ok(Frame::Affine),
            other => Err(Error::BadParameters(format!("unknown frame {other:?}"))),
        }
    }
}

/// How a line meets the curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LineClass {
    /// Meets the curve only in the given curve-local point.
    Tangent(u32),
    /// Meets the curve in exactly q+1 points, listed by curve-local index.
    Secant(Vec<u32>),
}

/// Line-type totals over the whole plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LineCensus {
    pub tangents: u64,
    pub secants: u64,
}

const NO_RANK: u32 = u32::MAX;

/// The curve H_q with its point list and tangent map.
#[derive(Clone, Debug)]
pub struct HermitianModel {
    plane: Plane,
    frame: Frame,
    /// M = { m : m^q + m = 0 } in code order.
    traceless: Vec<Elem>,
    /// code → rank in `traceless`, or `NO_RANK`.
    m_rank: Vec<u32>,
    /// GF(q) code t → smallest x with x^q + x = t.
    trace_preimage: Vec<Elem>,
    points: Vec<ProjPoint>,
    tangents: Vec<ProjLine>,
}

impl HermitianModel {
    /// Builds the curve and checks its point count, the curve equation at
    /// every point, the index map, and that each tangent meets the curve once.
    pub fn build(field: FieldSpec, frame: Frame) -> Result<HermitianModel> {
        let plane = Plane::new(field);
        let f = plane.field();
        let q = f.q();
        let traceless = f.traceless_set();
        let mut m_rank = vec![NO_RANK; f.order() as usize];
        for (r, m) in traceless.iter().enumerate() {
            m_rank[m.0 as usize] = r as u32;
        }
        let mut trace_preimage = vec![None; q as usize];
        for x in f.elements() {
            let t = f.trace(x);
            trace_preimage[t.0 as usize].get_or_insert(x);
        }
        let trace_preimage: Vec<Elem> = trace_preimage.into_iter().map(|x| x.expect("trace is onto GF(q)")).collect();

        let mut model = HermitianModel {
            plane,
            frame,
            traceless,
            m_rank,
            trace_preimage,
            points: Vec::new(),
            tangents: Vec::new(),
        };
        model.points = model.enumerate_points();
        model.tangents = model.points.iter().map(|p| model.polar(p)).collect();
        model.check()?;
        Ok(model)
    }

    /// Convenience constructor from a prime power.
    pub fn for_q(q: u32, frame: Frame) -> Result<HermitianModel> {
        HermitianModel::build(FieldSpec::for_q(q)?, frame)
    }

    fn enumerate_points(&self) -> Vec<ProjPoint> {
        let f = self.field();
        let c = f.c();
        let mut pts = Vec::with_capacity(self.num_points() as usize);
        match self.frame {
            Frame::Standard => {
                for u in f.elements() {
                    let base = f.mul(c, f.norm(u));
                    for &m in &self.traceless {
                        pts.push(ProjPoint([Elem::ONE, u, f.add(base, m)]));
                    }
                }
                pts.push(ProjPoint([Elem::ZERO, Elem::ZERO, Elem::ONE]));
            }
            Frame::Affine => {
                for y in f.elements() {
                    let x0 = self.base_x(y);
                    for &m in &self.traceless {
                        pts.push(self.affine_point(f.add(x0, m), y));
                    }
                }
                pts.push(ProjPoint([Elem::ONE, Elem::ZERO, Elem::ZERO]));
            }
        }
        pts
    }

    fn check(&self) -> Result<()> {
        let q = self.q() as u64;
        if self.points.len() as u64 != q * q * q + 1 {
            return Err(Error::InvariantViolation(format!("curve has {} points", self.points.len())));
        }
        let bad = self.points.par_iter().enumerate().find_any(|(k, p)| {
            if !self.form(&p.0).is_zero() || self.local_index(p) != Some(*k as u32) {
                return true;
            }
            let on_tangent = self.curve_points_on_line(&self.tangents[*k]);
            on_tangent != [*k as u32]
        });
        match bad {
            Some((k, _)) => Err(Error::InvariantViolation(format!("curve point {k} failed the build checks"))),
            None => Ok(()),
        }
    }

    pub fn plane(&self) -> &Plane {
        &self.plane
    }

    pub fn field(&self) -> &FieldSpec {
        self.plane.field()
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn q(&self) -> u32 {
        self.field().q()
    }

    /// q³ + 1.
    pub fn num_points(&self) -> u32 {
        let q = self.q();
        q * q * q + 1
    }

    /// Number of (q+1)-secants, q⁴ − q³ + q².
    pub fn num_secants(&self) -> u64 {
        let q = self.q() as u64;
        q * q * q * q - q * q * q + q * q
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn point(&self, local: u32) -> ProjPoint {
        self.points[local as usize]
    }

    pub fn traceless(&self) -> &[Elem] {
        &self.traceless
    }

    /// Value of the Hermitian form at a coordinate triple.
    #[inline]
    pub fn form(&self, v: &[Elem; 3]) -> Elem {
        let f = self.field();
        let a = f.mul(v[2], f.frobenius(v[0]));
        let b = f.mul(f.frobenius(v[2]), v[0]);
        f.add(f.add(a, b), f.norm(v[1]))
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.form(&p.0).is_zero()
    }

    /// Smallest x with x^q + x + y^(q+1) = 0.
    fn base_x(&self, y: Elem) -> Elem {
        let f = self.field();
        self.trace_preimage[f.neg(f.norm(y)).0 as usize]
    }

    /// Curve-local index of a normalized point, if it lies on the curve.
    #[inline]
    pub fn local_index(&self, p: &ProjPoint) -> Option<u32> {
        let f = self.field();
        let q = self.q();
        let v = &p.0;
        match self.frame {
            Frame::Standard => {
                if v[0] == Elem::ONE {
                    let m = f.sub(v[2], f.mul(f.c(), f.norm(v[1])));
                    let r = self.m_rank[m.0 as usize];
                    (r != NO_RANK).then(|| v[1].0 * q + r)
                } else if v[1].is_zero() {
                    Some(q * q * q)
                } else {
                    None
                }
            }
            Frame::Affine => {
                if !v[2].is_zero() {
                    let inv = f.inv(v[2]);
                    let x = f.mul(v[0], inv);
                    let y = f.mul(v[1], inv);
                    let r = self.m_rank[f.sub(x, self.base_x(y)).0 as usize];
                    (r != NO_RANK).then(|| y.0 * q + r)
                } else if v[0] == Elem::ONE && v[1].is_zero() {
                    Some(q * q * q)
                } else {
                    None
                }
            }
        }
    }

    /// Curve-local index of a plane index.
    pub fn local_of_plane(&self, idx: PlaneIndex) -> Option<u32> {
        self.local_index(&self.plane.point_at(idx).ok()?)
    }

    pub fn plane_index(&self, local: u32) -> PlaneIndex {
        self.plane.point_index(&self.points[local as usize])
    }

    fn polar(&self, p: &ProjPoint) -> ProjLine {
        let f = self.field();
        let v = p.0;
        let l = [f.frobenius(v[2]), f.frobenius(v[1]), f.frobenius(v[0])];
        self.plane.line(l).expect("polar of a point is a line")
    }

    /// Point whose polar is the given line.
    fn pole(&self, l: &ProjLine) -> ProjPoint {
        let f = self.field();
        let a = l.0;
        ProjPoint(self.plane.normalize([f.frobenius(a[2]), f.frobenius(a[1]), f.frobenius(a[0])]).unwrap())
    }

    /// Tangent line at a curve point.
    pub fn tangent(&self, local: u32) -> ProjLine {
        self.tangents[local as usize]
    }

    pub fn tangent_index(&self, local: u32) -> PlaneIndex {
        self.plane.line_index(&self.tangents[local as usize])
    }

    /// Tangent line at a point given by coordinates.
    pub fn tangent_at(&self, p: &ProjPoint) -> Result<ProjLine> {
        self.local_index(p).map(|k| self.tangent(k)).ok_or(Error::NotOnCurve)
    }

    /// True iff the line is tangent to the curve (its pole lies on the curve).
    #[inline]
    pub fn is_tangent_line(&self, l: &ProjLine) -> bool {
        self.contains(&self.pole(l))
    }

    /// Curve points on a line, by streaming its q²+1 points.
    pub fn curve_points_on_line(&self, l: &ProjLine) -> Vec<u32> {
        self.plane.points_on_line(l).filter_map(|p| self.local_index(&p)).collect()
    }

    /// Classification by direct intersection counting.
    pub fn classify_line(&self, l: &ProjLine) -> Result<LineClass> {
        let pts = self.curve_points_on_line(l);
        match pts.len() {
            1 => Ok(LineClass::Tangent(pts[0])),
            n if n as u32 == self.q() + 1 => Ok(LineClass::Secant(pts)),
            n => Err(Error::InvariantViolation(format!("line meets the curve in {n} points"))),
        }
    }

    /// Counts tangents and secants over every line of the plane.
    pub fn line_census(&self) -> Result<LineCensus> {
        let q1 = self.q() as usize + 1;
        let counts = (0..self.plane.size())
            .into_par_iter()
            .map(|i| {
                let l = self.plane.line_at(i).unwrap();
                match self.curve_points_on_line(&l).len() {
                    1 => Ok((1, 0)),
                    n if n == q1 => Ok((0, 1)),
                    n => Err(Error::InvariantViolation(format!("line {i} meets the curve in {n} points"))),
                }
            })
            .try_reduce(|| (0u64, 0u64), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;
        Ok(LineCensus { tangents: counts.0, secants: counts.1 })
    }

    /// Affine point `(x, y)` as `(x : y : 1)`, normalized.
    pub fn affine_point(&self, x: Elem, y: Elem) -> ProjPoint {
        ProjPoint(self.plane.normalize([x, y, Elem::ONE]).unwrap())
    }

    /// Affine coordinates `(x, y)` of a point off the line `X2 = 0`.
    pub fn affine_coords(&self, p: &ProjPoint) -> Option<(Elem, Elem)> {
        let f = self.field();
        let v = p.0;
        if v[2].is_zero() {
            return None;
        }
        let inv = f.inv(v[2]);
        Some((f.mul(v[0], inv), f.mul(v[1], inv)))
    }

    /// The point `(1:0:0)`, the affine frame's point at infinity.
    pub fn infinite_point(&self) -> ProjPoint {
        ProjPoint([Elem::ONE, Elem::ZERO, Elem::ZERO])
    }

    /// The horizontal affine line `Y = y0`, i.e. `X1 − y0·X2 = 0`.
    pub fn horizontal_line(&self, y0: Elem) -> ProjLine {
        ProjLine([Elem::ZERO, Elem::ONE, self.field().neg(y0)])
    }

    /// True iff the line is `Y = y0` for some y0.
    pub fn is_horizontal(&self, l: &ProjLine) -> bool {
        l.0[0].is_zero() && l.0[1] == Elem::ONE
    }

    /// The affine line `X = n·Y + d`, i.e. `X0 − n·X1 − d·X2 = 0`.
    pub fn affine_line(&self, n: Elem, d: Elem) -> ProjLine {
        let f = self.field();
        ProjLine([Elem::ONE, f.neg(n), f.neg(d)])
    }

    /// `(n, d)` for a non-horizontal affine line `X = n·Y + d`.
    pub fn affine_line_params(&self, l: &ProjLine) -> Option<(Elem, Elem)> {
        let f = self.field();
        (l.0[0] == Elem::ONE).then(|| (f.neg(l.0[1]), f.neg(l.0[2])))
    }

    /// Algebraic tangency test for `X = n·Y + d`: tangent iff `n^(q+1) = d^q + d`.
    ///
    /// Counting is the ground truth; this predicate is cross-checked against it.
    pub fn affine_tangency_predicate(&self, n: Elem, d: Elem) -> bool {
        let f = self.field();
        f.norm(n) == f.trace(d)
    }

    /// Plane points of a curve-domain set.
    pub fn points_of(&self, s: &PointSet) -> Result<Vec<ProjPoint>> {
        match s.domain() {
            Domain::Curve => {
                self.check_curve_set(s)?;
                Ok(s.iter().map(|k| self.points[k as usize]).collect())
            }
            Domain::Plane => {
                if s.q() != self.q() {
                    return Err(Error::DomainMismatch(format!("set for q={} on model q={}", s.q(), self.q())));
                }
                s.iter().map(|i| self.plane.point_at(i)).collect()
            }
        }
    }

    fn check_curve_set(&self, s: &PointSet) -> Result<()> {
        if s.q() != self.q() || s.universe() != self.num_points() as u64 {
            return Err(Error::DomainMismatch(format!("curve set for q={} on model q={}", s.q(), self.q())));
        }
        Ok(())
    }

    /// Re-expresses a set as a curve-domain set; fails if a point is off the curve.
    pub fn to_curve_set(&self, s: &PointSet) -> Result<PointSet> {
        match s.domain() {
            Domain::Curve => {
                self.check_curve_set(s)?;
                Ok(s.clone())
            }
            Domain::Plane => {
                let mut out = PointSet::curve(self.q());
                for i in s.iter() {
                    let k = self.local_of_plane(i).ok_or(Error::NotSubsetOfCurve)?;
                    out.insert(k as u64);
                }
                Ok(out)
            }
        }
    }

    /// Re-expresses a curve-domain set over plane indices.
    pub fn to_plane_set(&self, s: &PointSet) -> Result<PointSet> {
        self.check_curve_set(s)?;
        let mut out = PointSet::plane(self.q());
        for k in s.iter() {
            out.insert(self.plane_index(k as u32));
        }
        Ok(out)
    }

    /// Builds a curve-domain set from points, failing on points off the curve.
    pub fn curve_set_of(&self, pts: impl IntoIterator<Item = ProjPoint>) -> Result<PointSet> {
        let mut out = PointSet::curve(self.q());
        for p in pts {
            out.insert(self.local_index(&p).ok_or(Error::NotOnCurve)? as u64);
        }
        Ok(out)
    }
}
