//! Singer cycles of PG(2,q²) from a cubic extension of GF(q²).

use crate::error::{Error, Result};
use crate::gf::{Elem, FieldSpec};
use crate::numtheory::prime_factors;
use crate::plane::{Plane, PlaneIndex, ProjPoint};

/// Element of GF(q⁶) as `x0 + x1·t + x2·t²` modulo a monic cubic.
pub(crate) type Cubic = [Elem; 3];

/// 3×3 matrix over GF(q²), row-major.
pub type Mat3 = [[Elem; 3]; 3];

/// Arithmetic in GF(Q)[t]/(t³ + f2·t² + f1·t + f0).
#[derive(Clone, Debug)]
pub(crate) struct CubicExt<'a> {
    f: &'a FieldSpec,
    /// `[f0, f1, f2]`.
    pub(crate) modulus: [Elem; 3],
}

impl<'a> CubicExt<'a> {
    pub(crate) fn mul(&self, a: &Cubic, b: &Cubic) -> Cubic {
        let f = self.f;
        let mut c = [Elem::ZERO; 5];
        for i in 0..3 {
            for j in 0..3 {
                c[i + j] = f.add(c[i + j], f.mul(a[i], b[j]));
            }
        }
        for k in (3..5).rev() {
            let top = c[k];
            if top.is_zero() {
                continue;
            }
            for (s, &m) in self.modulus.iter().enumerate() {
                c[k - 3 + s] = f.sub(c[k - 3 + s], f.mul(top, m));
            }
        }
        [c[0], c[1], c[2]]
    }

    pub(crate) fn pow(&self, a: &Cubic, mut n: u64) -> Cubic {
        let mut base = *a;
        let mut acc = [Elem::ONE, Elem::ZERO, Elem::ZERO];
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    /// Relative trace to GF(Q): `z + z^Q + z^(Q²)`, returned as a scalar.
    pub(crate) fn trace(&self, z: &Cubic) -> Elem {
        let big_q = self.f.order() as u64;
        let z1 = self.pow(z, big_q);
        let z2 = self.pow(&z1, big_q);
        let s = [0, 1, 2].map(|k| self.f.add(self.f.add(z[k], z1[k]), z2[k]));
        debug_assert!(s[1].is_zero() && s[2].is_zero());
        s[0]
    }
}

fn is_scalar(a: &Cubic) -> bool {
    a[1].is_zero() && a[2].is_zero()
}

const T: Cubic = [Elem::ZERO, Elem::ONE, Elem::ZERO];

/// A Singer cycle `t` of PG(2,q²) and the generator `σ = t^(q²+q+1)` of its
/// subgroup of order q²−q+1.
#[derive(Clone, Debug)]
pub struct SingerGroup {
    plane: Plane,
    modulus: [Elem; 3],
    sigma: Mat3,
}

impl SingerGroup {
    /// Uses the least monic irreducible cubic (by `f0 + Q·f1 + Q²·f2`) whose
    /// root has projective order Q²+Q+1.
    pub fn build(field: FieldSpec) -> Result<SingerGroup> {
        let f = &field;
        let big_q = f.order() as u64;
        let n = big_q * big_q + big_q + 1;
        let primes = prime_factors(n);
        let mut found = None;
        'search: for code in 0..big_q * big_q * big_q {
            let m = [
                Elem((code % big_q) as u32),
                Elem(((code / big_q) % big_q) as u32),
                Elem((code / (big_q * big_q)) as u32),
            ];
            if m[0].is_zero() {
                continue;
            }
            for x in f.elements() {
                let v = f.add(f.mul(f.add(f.mul(f.add(x, m[2]), x), m[1]), x), m[0]);
                if v.is_zero() {
                    continue 'search;
                }
            }
            let ext = CubicExt { f, modulus: m };
            if primes.iter().all(|r| !is_scalar(&ext.pow(&T, n / r))) {
                found = Some(m);
                break;
            }
        }
        let modulus = found.ok_or_else(|| Error::DecompositionNotFound("no Singer cubic".into()))?;
        let ext = CubicExt { f, modulus };
        let q = f.q() as u64;
        let g = ext.pow(&T, q * q + q + 1);
        let mut sigma = [[Elem::ZERO; 3]; 3];
        let mut col: Cubic = [Elem::ONE, Elem::ZERO, Elem::ZERO];
        for j in 0..3 {
            let img = ext.mul(&g, &col);
            for i in 0..3 {
                sigma[i][j] = img[i];
            }
            col = ext.mul(&col, &T);
        }
        Ok(SingerGroup { plane: Plane::new(field), modulus, sigma })
    }

    pub fn plane(&self) -> &Plane {
        &self.plane
    }

    /// The cubic `[f0, f1, f2]` of `t³ + f2·t² + f1·t + f0`.
    pub fn modulus(&self) -> [Elem; 3] {
        self.modulus
    }

    /// Matrix of σ acting on coordinate vectors in the basis 1, t, t².
    pub fn sigma(&self) -> &Mat3 {
        &self.sigma
    }

    /// Order of σ as a projectivity.
    pub fn subgroup_order(&self) -> u64 {
        let q = self.plane.field().q() as u64;
        q * q - q + 1
    }

    pub(crate) fn ext(&self) -> CubicExt<'_> {
        CubicExt { f: self.plane.field(), modulus: self.modulus }
    }

    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        ProjPoint(self.plane.normalize(mat_vec(self.plane.field(), &self.sigma, &p.0)).unwrap())
    }

    /// σ-orbits of plane points, each listed from its smallest index in
    /// generation order; orbits sorted by smallest index.
    pub fn orbits(&self) -> Result<Vec<Vec<PlaneIndex>>> {
        let size = self.plane.size();
        let len = self.subgroup_order() as usize;
        let mut seen = vec![false; size as usize];
        let mut out = Vec::with_capacity((size / len as u64) as usize);
        for start in 0..size {
            if seen[start as usize] {
                continue;
            }
            let mut orbit = Vec::with_capacity(len);
            let mut p = self.plane.point_at(start)?;
            loop {
                let idx = self.plane.point_index(&p);
                if seen[idx as usize] {
                    break;
                }
                seen[idx as usize] = true;
                orbit.push(idx);
                p = self.apply(&p);
            }
            if orbit.len() != len || self.plane.point_index(&p) != start {
                return Err(Error::InvariantViolation(format!("orbit of {start} has size {}", orbit.len())));
            }
            out.push(orbit);
        }
        Ok(out)
    }
}

/// Orbits of the order-(q²−q+1) Singer subgroup on PG(2,q²).
pub fn singer_orbits(field: &FieldSpec) -> Result<Vec<Vec<PlaneIndex>>> {
    SingerGroup::build(field.clone())?.orbits()
}

pub(crate) fn mat_vec(f: &FieldSpec, m: &Mat3, v: &[Elem; 3]) -> [Elem; 3] {
    let mut out = [Elem::ZERO; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i] = f.add(out[i], f.mul(m[i][j], v[j]));
        }
    }
    out
}

pub(crate) fn det(f: &FieldSpec, m: &Mat3) -> Elem {
    let minor = |a: usize, b: usize, c: usize, d: usize| f.sub(f.mul(m[1][a], m[2][b]), f.mul(m[1][c], m[2][d]));
    let t0 = f.mul(m[0][0], minor(1, 2, 2, 1));
    let t1 = f.mul(m[0][1], minor(0, 2, 2, 0));
    let t2 = f.mul(m[0][2], minor(0, 1, 1, 0));
    f.add(f.sub(t0, t1), t2)
}

pub(crate) fn inverse(f: &FieldSpec, m: &Mat3) -> Result<Mat3> {
    let d = f.try_inv(det(f, m))?;
    let mut out = [[Elem::ZERO; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            // cofactor of m[j][i]
            let rows: Vec<usize> = (0..3).filter(|&r| r != j).collect();
            let cols: Vec<usize> = (0..3).filter(|&c| c != i).collect();
            let minor = f.sub(
                f.mul(m[rows[0]][cols[0]], m[rows[1]][cols[1]]),
                f.mul(m[rows[0]][cols[1]], m[rows[1]][cols[0]]),
            );
            let signed = if (i + j) % 2 == 0 { minor } else { f.neg(minor) };
            *cell = f.mul(signed, d);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbit_counts() {
        for (q, count, size) in [(2u32, 7usize, 3usize), (3, 13, 7), (4, 21, 13)] {
            let f = FieldSpec::for_q(q).unwrap();
            let orbits = singer_orbits(&f).unwrap();
            assert_eq!(orbits.len(), count);
            assert!(orbits.iter().all(|o| o.len() == size));
            let mut all: Vec<_> = orbits.concat();
            all.sort();
            all.dedup();
            assert_eq!(all.len() as u64, Plane::new(f).size());
        }
    }

    #[test]
    fn singer_root_has_full_projective_order() {
        // t generates a cyclic group acting regularly on the 91 points of PG(2,9)
        let f = FieldSpec::for_q(3).unwrap();
        let g = SingerGroup::build(f.clone()).unwrap();
        let ext = g.ext();
        let mut seen = std::collections::HashSet::new();
        let mut x: Cubic = [Elem::ONE, Elem::ZERO, Elem::ZERO];
        for _ in 0..91 {
            let p = g.plane().point(x).unwrap();
            assert!(seen.insert(g.plane().point_index(&p)));
            x = ext.mul(&x, &T);
        }
        assert!(is_scalar(&x));
    }

    #[test]
    fn matrix_inverse_roundtrip() {
        let f = FieldSpec::for_q(3).unwrap();
        let g = SingerGroup::build(f.clone()).unwrap();
        let s = *g.sigma();
        let inv = inverse(&f, &s).unwrap();
        for v in [[Elem(1), Elem(2), Elem(3)], [Elem(0), Elem(7), Elem(1)]] {
            assert_eq!(mat_vec(&f, &inv, &mat_vec(&f, &s, &v)), v);
        }
    }
}
