//! Finite coordinate vectors in `R^n` with the coordinatewise lattice order.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::scalar::Scalar;

/// An element of the coordinate lattice `R^n`, `n >= 1`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Scalar>", into = "Vec<Scalar>")]
pub struct FinVector {
    coords: Vec<Scalar>,
}

impl FinVector {
    pub fn new(coords: Vec<Scalar>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::ZeroDimension);
        }
        Ok(FinVector { coords })
    }

    /// Convenience constructor from integers. Panics on an empty slice.
    pub fn from_ints(values: &[i64]) -> Self {
        FinVector::new(values.iter().map(|&v| Scalar::from_int(v)).collect())
            .expect("non-empty integer vector")
    }

    /// Panics if `dim == 0`.
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "zero-dimensional vector");
        FinVector {
            coords: vec![Scalar::zero(); dim],
        }
    }

    pub fn constant(dim: usize, value: Scalar) -> Self {
        assert!(dim > 0, "zero-dimensional vector");
        FinVector {
            coords: vec![value; dim],
        }
    }

    /// Unit vector at 0-based coordinate `index`.
    pub fn unit(dim: usize, index: usize) -> Self {
        let mut v = FinVector::zeros(dim);
        v.coords[index] = Scalar::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Scalar> {
        self.coords
    }

    /// 0-based coordinate access.
    pub fn get(&self, index: usize) -> &Scalar {
        &self.coords[index]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }

    /// `u >= 0`.
    pub fn is_positive(&self) -> bool {
        self.coords.iter().all(|c| !c.is_negative())
    }

    /// 0-based indices of nonzero coordinates.
    pub fn support(&self) -> BTreeSet<usize> {
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    fn zip_with(
        &self,
        other: &FinVector,
        f: impl Fn(&Scalar, &Scalar) -> Scalar,
    ) -> Result<FinVector> {
        check_dim(self.dim(), other.dim())?;
        Ok(FinVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> FinVector {
        FinVector {
            coords: self.coords.iter().map(f).collect(),
        }
    }

    pub fn join(&self, other: &FinVector) -> Result<FinVector> {
        self.zip_with(other, Scalar::join)
    }

    pub fn meet(&self, other: &FinVector) -> Result<FinVector> {
        self.zip_with(other, Scalar::meet)
    }

    pub fn abs(&self) -> FinVector {
        self.map(Scalar::abs)
    }

    /// `u ∨ 0`.
    pub fn pos_part(&self) -> FinVector {
        self.map(|c| c.join(&Scalar::zero()))
    }

    /// `(-u) ∨ 0`.
    pub fn neg_part(&self) -> FinVector {
        self.map(|c| (-c).join(&Scalar::zero()))
    }

    pub fn add(&self, other: &FinVector) -> Result<FinVector> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &FinVector) -> Result<FinVector> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, factor: &Scalar) -> FinVector {
        self.map(|c| c * factor)
    }

    pub fn neg(&self) -> FinVector {
        self.map(|c| -c)
    }

    /// The pairing `Σ u_i v_i`.
    pub fn dot(&self, other: &FinVector) -> Result<Scalar> {
        check_dim(self.dim(), other.dim())?;
        Ok(self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum())
    }

    /// Coordinatewise `u <= v`.
    pub fn leq(&self, other: &FinVector) -> Result<bool> {
        check_dim(self.dim(), other.dim())?;
        Ok(self.coords.iter().zip(&other.coords).all(|(a, b)| a <= b))
    }

    /// `|u| ∧ |v| = 0`.
    pub fn disjoint(&self, other: &FinVector) -> Result<bool> {
        Ok(self.abs().meet(&other.abs())?.is_zero())
    }

    /// Whether `v` lies in the ideal generated by `u`, i.e. `|v| <= λ|u|`
    /// for some `λ >= 0`.
    pub fn principal_ideal_contains(&self, v: &FinVector) -> Result<bool> {
        check_dim(self.dim(), v.dim())?;
        Ok(v.support().is_subset(&self.support()))
    }

    /// Keeps the first `dim` coordinates, padding with zeros if needed.
    pub fn resized(&self, dim: usize) -> FinVector {
        assert!(dim > 0, "zero-dimensional vector");
        let mut coords: Vec<Scalar> = self.coords.iter().take(dim).cloned().collect();
        coords.resize(dim, Scalar::zero());
        FinVector { coords }
    }
}

impl TryFrom<Vec<Scalar>> for FinVector {
    type Error = Error;
    fn try_from(coords: Vec<Scalar>) -> Result<Self> {
        FinVector::new(coords)
    }
}

impl From<FinVector> for Vec<Scalar> {
    fn from(v: FinVector) -> Self {
        v.coords
    }
}

impl fmt::Debug for FinVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:?}", c)?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for FinVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> FinVector {
        FinVector::from_ints(xs)
    }

    #[test]
    fn lattice_ops() {
        assert_eq!(v(&[1, -2]).join(&v(&[0, 3])).unwrap(), v(&[1, 3]));
        let u = v(&[4, -1, 0]);
        assert_eq!(u.meet(&u).unwrap(), u);
        assert_eq!(v(&[-2, 5]).abs(), v(&[2, 5]));
        assert_eq!(v(&[-2, 5]).pos_part(), v(&[0, 5]));
        assert_eq!(v(&[-2, 5]).neg_part(), v(&[2, 0]));
    }

    #[test]
    fn dimension_mismatch() {
        let err = v(&[1]).join(&v(&[1, 2])).unwrap_err();
        assert_eq!(
            err,
            Error::DimensionMismatch {
                expected: 1,
                found: 2
            }
        );
        assert!(v(&[1]).leq(&v(&[1, 2])).is_err());
        assert!(v(&[1]).disjoint(&v(&[1, 2])).is_err());
        assert!(FinVector::new(vec![]).is_err());
    }

    #[test]
    fn order() {
        assert!(v(&[0, 0]).leq(&v(&[1, 2])).unwrap());
        assert!(!v(&[1, 0]).leq(&v(&[0, 1])).unwrap());
        assert!(!v(&[0, 1]).leq(&v(&[1, 0])).unwrap());
        let u = v(&[3, -7]);
        assert!(u.leq(&u).unwrap());
    }

    #[test]
    fn disjointness() {
        assert!(v(&[1, 0]).disjoint(&v(&[0, -3])).unwrap());
        assert!(!v(&[1, 1]).disjoint(&v(&[0, 1])).unwrap());
        assert!(v(&[5, -2]).disjoint(&FinVector::zeros(2)).unwrap());
    }

    #[test]
    fn principal_ideal() {
        assert!(v(&[1, 1, 0])
            .principal_ideal_contains(&v(&[5, -7, 0]))
            .unwrap());
        assert!(!v(&[1, 0]).principal_ideal_contains(&v(&[0, 1])).unwrap());
        assert!(v(&[0, 2])
            .principal_ideal_contains(&FinVector::zeros(2))
            .unwrap());
    }

    #[test]
    fn json_format() {
        let u = FinVector::new(vec![Scalar::ratio(3, 2), Scalar::from_int(-1)]).unwrap();
        assert_eq!(serde_json::to_string(&u).unwrap(), r#"["3/2","-1/1"]"#);
        let back: FinVector = serde_json::from_str(r#"["3/2","-1"]"#).unwrap();
        assert_eq!(back, u);
        assert!(serde_json::from_str::<FinVector>("[]").is_err());
    }
}
