//! Coordinate bands of `R^n` and their band projections.
//!
//! Every band of `R^n` is a coordinate band, so a band is just a subset of
//! the coordinates. Supports are stored 0-based and exposed 1-based in all
//! serialized forms.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::scalar::Scalar;
use crate::vector::FinVector;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Band {
    dim: usize,
    support: BTreeSet<usize>,
}

impl Band {
    /// Band from 0-based coordinate indices.
    pub fn new(dim: usize, support: impl IntoIterator<Item = usize>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let support: BTreeSet<usize> = support.into_iter().collect();
        if let Some(&bad) = support.iter().find(|&&i| i >= dim) {
            return Err(Error::IndexOutOfRange {
                index: bad + 1,
                dim,
            });
        }
        Ok(Band { dim, support })
    }

    /// Band from 1-based coordinate indices, as used in external formats.
    pub fn from_one_based(dim: usize, support: &[usize]) -> Result<Self> {
        if let Some(&bad) = support.iter().find(|&&i| i == 0 || i > dim) {
            return Err(Error::IndexOutOfRange { index: bad, dim });
        }
        Band::new(dim, support.iter().map(|i| i - 1))
    }

    pub fn full(dim: usize) -> Self {
        Band::new(dim, 0..dim).expect("positive dimension")
    }

    pub fn empty(dim: usize) -> Self {
        Band::new(dim, []).expect("positive dimension")
    }

    /// The band `{1..k}` of the first `k` coordinates.
    pub fn initial(dim: usize, k: usize) -> Self {
        Band::new(dim, 0..k.min(dim)).expect("positive dimension")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn support(&self) -> &BTreeSet<usize> {
        &self.support
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.support.iter().map(|i| i + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.support.len() == self.dim
    }

    pub fn contains(&self, index: usize) -> bool {
        self.support.contains(&index)
    }

    pub fn is_subband_of(&self, other: &Band) -> Result<bool> {
        check_dim(self.dim, other.dim)?;
        Ok(self.support.is_subset(&other.support))
    }

    pub fn complement(&self) -> Band {
        Band {
            dim: self.dim,
            support: (0..self.dim)
                .filter(|i| !self.support.contains(i))
                .collect(),
        }
    }

    pub fn join(&self, other: &Band) -> Result<Band> {
        check_dim(self.dim, other.dim)?;
        Ok(Band {
            dim: self.dim,
            support: self.support.union(&other.support).copied().collect(),
        })
    }

    pub fn meet(&self, other: &Band) -> Result<Band> {
        check_dim(self.dim, other.dim)?;
        Ok(Band {
            dim: self.dim,
            support: self.support.intersection(&other.support).copied().collect(),
        })
    }

    /// The band projection `P_B`: keeps the coordinates in the band.
    pub fn project(&self, u: &FinVector) -> Result<FinVector> {
        check_dim(self.dim, u.dim())?;
        let coords = u
            .coords()
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if self.support.contains(&i) {
                    c.clone()
                } else {
                    Scalar::zero()
                }
            })
            .collect();
        FinVector::new(coords)
    }

    /// Indicator vector of the band.
    pub fn indicator(&self) -> FinVector {
        let coords = (0..self.dim)
            .map(|i| {
                if self.support.contains(&i) {
                    Scalar::one()
                } else {
                    Scalar::zero()
                }
            })
            .collect();
        FinVector::new(coords).expect("positive dimension")
    }

    /// Every band of `R^dim`, ordered by bitmask.
    pub fn all(dim: usize) -> Vec<Band> {
        assert!(
            dim < usize::BITS as usize,
            "dimension too large to enumerate"
        );
        (0..(1usize << dim))
            .map(|mask| Band::new(dim, (0..dim).filter(|i| mask >> i & 1 == 1)).unwrap())
            .collect()
    }
}

/// Free-function form of [`Band::project`].
pub fn band_projection(band: &Band, u: &FinVector) -> Result<FinVector> {
    band.project(u)
}

/// `S^d` for a set of vectors: the band of coordinates where every element
/// of `S` vanishes.
pub fn disjoint_complement(dim: usize, set: &[FinVector]) -> Result<Band> {
    let mut covered = BTreeSet::new();
    for u in set {
        check_dim(dim, u.dim())?;
        covered.extend(u.support());
    }
    Band::new(dim, (0..dim).filter(|i| !covered.contains(i)))
}

impl fmt::Debug for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.support.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, "}}⊂R^{}", self.dim)
    }
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.support.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, "}}")
    }
}

/// Serialized as a sorted array of 1-based indices. The dimension is not
/// part of the wire form; see [`Band::from_one_based`] for the inverse.
impl Serialize for Band {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn band(dim: usize, one_based: &[usize]) -> Band {
        Band::from_one_based(dim, one_based).unwrap()
    }

    #[test]
    fn projection() {
        let u = FinVector::from_ints(&[4, 5, 6]);
        assert_eq!(
            band(3, &[1, 3]).project(&u).unwrap(),
            FinVector::from_ints(&[4, 0, 6])
        );
        assert_eq!(Band::full(3).project(&u).unwrap(), u);
        assert!(Band::empty(3).project(&u).unwrap().is_zero());
        assert!(Band::full(2).project(&u).is_err());
    }

    #[test]
    fn boolean_ops() {
        assert_eq!(band(3, &[1, 2]).complement(), band(3, &[3]));
        assert_eq!(
            band(3, &[1]).join(&band(3, &[2])).unwrap(),
            band(3, &[1, 2])
        );
        let a = band(4, &[2, 4]);
        assert!(a.meet(&a.complement()).unwrap().is_empty());
        assert!(a.join(&band(3, &[1])).is_err());
    }

    #[test]
    fn disjoint_complements() {
        assert_eq!(
            disjoint_complement(3, &[FinVector::from_ints(&[1, 0, 0])]).unwrap(),
            band(3, &[2, 3])
        );
        assert_eq!(disjoint_complement(3, &[]).unwrap(), Band::full(3));
        let set = [FinVector::from_ints(&[1, 0]), FinVector::from_ints(&[0, 1])];
        assert!(disjoint_complement(2, &set).unwrap().is_empty());
        assert!(disjoint_complement(2, &[FinVector::zeros(3)]).is_err());
    }

    #[test]
    fn bounds_checked() {
        assert!(Band::from_one_based(3, &[0]).is_err());
        assert!(Band::from_one_based(3, &[4]).is_err());
        assert!(Band::new(0, []).is_err());
    }

    #[test]
    fn enumerate_all() {
        let all = Band::all(3);
        assert_eq!(all.len(), 8);
        assert!(all[0].is_empty());
        assert!(all[7].is_full());
    }

    #[test]
    fn json_format() {
        let b = band(4, &[1, 3]);
        let json = serde_json::to_string(&b).unwrap();
        assert_eq!(json, "[1,3]");
        let idx: Vec<usize> = serde_json::from_str(&json).unwrap();
        assert_eq!(Band::from_one_based(4, &idx).unwrap(), b);
    }
}
