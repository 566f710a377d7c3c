//! Dense bitsets over plane indices or curve-local indices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    /// Keys are canonical plane indices.
    Plane,
    /// Keys are curve-local indices `0..=q³` of a [`crate::hermitian::HermitianModel`].
    Curve,
}

/// Set of points as a bitset with a cached cardinality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    domain: Domain,
    q: u32,
    universe: u64,
    words: Vec<u64>,
    len: usize,
}

impl PointSet {
    pub fn new(domain: Domain, q: u32, universe: u64) -> Self {
        PointSet {
            domain,
            q,
            universe,
            words: vec![0; universe.div_ceil(64) as usize],
            len: 0,
        }
    }

    /// Empty set over the curve-local indices of H_q.
    pub fn curve(q: u32) -> Self {
        let q = q as u64;
        PointSet::new(Domain::Curve, q as u32, q * q * q + 1)
    }

    /// Empty set over the points of PG(2,q²).
    pub fn plane(q: u32) -> Self {
        let n = (q as u64) * (q as u64);
        PointSet::new(Domain::Plane, q, n * n + n + 1)
    }

    pub fn full_curve(q: u32) -> Self {
        let mut s = PointSet::curve(q);
        for i in 0..s.universe {
            s.insert(i);
        }
        s
    }

    pub fn from_indices(domain: Domain, q: u32, universe: u64, idx: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut s = PointSet::new(domain, q, universe);
        for i in idx {
            if i >= universe {
                return Err(Error::InvalidCoordinates(format!("index {i} outside 0..{universe}")));
            }
            s.insert(i);
        }
        Ok(s)
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn universe(&self) -> u64 {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, i: u64) -> bool {
        i < self.universe && self.words[(i >> 6) as usize] >> (i & 63) & 1 == 1
    }

    /// Returns true if the element was newly inserted.
    pub fn insert(&mut self, i: u64) -> bool {
        assert!(i < self.universe, "index {i} outside 0..{}", self.universe);
        let w = &mut self.words[(i >> 6) as usize];
        let bit = 1u64 << (i & 63);
        let fresh = *w & bit == 0;
        *w |= bit;
        self.len += fresh as usize;
        fresh
    }

    pub fn remove(&mut self, i: u64) -> bool {
        if i >= self.universe {
            return false;
        }
        let w = &mut self.words[(i >> 6) as usize];
        let bit = 1u64 << (i & 63);
        let present = *w & bit != 0;
        *w &= !bit;
        self.len -= present as usize;
        present
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
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

    pub fn to_vec(&self) -> Vec<u64> {
        self.iter().collect()
    }

    fn check_compatible(&self, other: &PointSet) -> Result<()> {
        if self.domain != other.domain || self.q != other.q || self.universe != other.universe {
            return Err(Error::DomainMismatch(format!(
                "{:?}(q={}) vs {:?}(q={})",
                self.domain, self.q, other.domain, other.q
            )));
        }
        Ok(())
    }

    fn zip_with(&self, other: &PointSet, op: impl Fn(u64, u64) -> u64) -> Result<PointSet> {
        self.check_compatible(other)?;
        let words: Vec<u64> = self.words.iter().zip(&other.words).map(|(&a, &b)| op(a, b)).collect();
        let len = words.iter().map(|w| w.count_ones() as usize).sum();
        Ok(PointSet { words, len, ..self.clone_empty() })
    }

    fn clone_empty(&self) -> PointSet {
        PointSet { domain: self.domain, q: self.q, universe: self.universe, words: Vec::new(), len: 0 }
    }

    pub fn union(&self, other: &PointSet) -> Result<PointSet> {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &PointSet) -> Result<PointSet> {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &PointSet) -> Result<PointSet> {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn symmetric_difference(&self, other: &PointSet) -> Result<PointSet> {
        self.zip_with(other, |a, b| a ^ b)
    }

    pub fn is_subset(&self, other: &PointSet) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self.words.iter().zip(&other.words).all(|(&a, &b)| a & !b == 0))
    }

    pub fn is_disjoint(&self, other: &PointSet) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self.words.iter().zip(&other.words).all(|(&a, &b)| a & b == 0))
    }

    /// `|self ∩ other|` without materializing the intersection.
    pub fn intersection_len(&self, other: &PointSet) -> Result<usize> {
        self.check_compatible(other)?;
        Ok(self.words.iter().zip(&other.words).map(|(&a, &b)| (a & b).count_ones() as usize).sum())
    }

    /// `|self ∖ other|` without materializing the difference.
    pub fn difference_len(&self, other: &PointSet) -> Result<usize> {
        self.check_compatible(other)?;
        Ok(self.words.iter().zip(&other.words).map(|(&a, &b)| (a & !b).count_ones() as usize).sum())
    }
}

/// Wire form: `{domain, q, indices}`; the coordinate triples are attached by
/// the I/O layer that knows the model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSetRecord {
    pub domain: Domain,
    pub q: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<crate::hermitian::Frame>,
    pub indices: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<[u32; 3]>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basic_membership() {
        let mut s = PointSet::curve(3);
        assert_eq!(s.universe(), 28);
        assert!(s.insert(5));
        assert!(!s.insert(5));
        assert!(s.insert(27));
        assert_eq!(s.len(), 2);
        assert_eq!(s.to_vec(), vec![5, 27]);
        assert!(s.remove(5));
        assert!(!s.remove(5));
        assert!(!s.remove(1000));
        assert_eq!(s.len(), 1);
        assert_eq!(PointSet::full_curve(2).len(), 9);
    }

    #[test]
    fn domains_are_checked() {
        let a = PointSet::curve(3);
        let b = PointSet::plane(3);
        assert!(matches!(a.union(&b), Err(Error::DomainMismatch(_))));
        let c = PointSet::curve(2);
        assert!(a.intersection(&c).is_err());
        assert!(PointSet::from_indices(Domain::Curve, 2, 9, [9]).is_err());
    }

    proptest! {
        #[test]
        fn set_algebra_matches_btreeset(xs in prop::collection::vec(0u64..200, 0..80), ys in prop::collection::vec(0u64..200, 0..80)) {
            use std::collections::BTreeSet;
            let a = PointSet::from_indices(Domain::Curve, 0, 200, xs.iter().copied()).unwrap();
            let b = PointSet::from_indices(Domain::Curve, 0, 200, ys.iter().copied()).unwrap();
            let sa: BTreeSet<u64> = xs.into_iter().collect();
            let sb: BTreeSet<u64> = ys.into_iter().collect();
            prop_assert_eq!(a.len(), sa.len());
            prop_assert_eq!(a.union(&b).unwrap().to_vec(), sa.union(&sb).copied().collect::<Vec<_>>());
            prop_assert_eq!(a.intersection(&b).unwrap().to_vec(), sa.intersection(&sb).copied().collect::<Vec<_>>());
            prop_assert_eq!(a.difference(&b).unwrap().to_vec(), sa.difference(&sb).copied().collect::<Vec<_>>());
            let sym = a.symmetric_difference(&b).unwrap();
            prop_assert_eq!(sym.len(), sa.symmetric_difference(&sb).count());
            prop_assert_eq!(a.intersection_len(&b).unwrap(), sa.intersection(&sb).count());
            prop_assert_eq!(a.is_subset(&a.union(&b).unwrap()).unwrap(), true);
        }
    }
}
