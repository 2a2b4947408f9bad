//! Elements of the direct limit of a [`DirectSystem`].
//!
//! An element is a germ: a pair `(level n, u ∈ R^{d_n})`, where `(n, u)`
//! and `(m, v)` are identified once their images agree at a common later
//! level. When the steps are injective, two germs agree iff their images at
//! the larger of their two levels agree, so every decision is made there.
//! Equality, canonical forms and positivity therefore require injective
//! steps and fail with [`Error::InjectivityRequired`] otherwise. Injectivity
//! is checked on steps `1..=m`, where `m` is the largest level involved.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::scalar::Scalar;
use crate::system::{DirectSystem, SequentialSystem, SystemMorphism};
use crate::vector::FinVector;

#[derive(Clone)]
pub struct ColimElement {
    system: DirectSystem,
    level: usize,
    vector: FinVector,
}

/// Wire form `{"level": n, "coords": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GermRepr {
    pub level: usize,
    pub coords: FinVector,
}

impl ColimElement {
    /// The germ of `(level, u)`, i.e. `e_level(u)`.
    pub fn embed(system: &DirectSystem, level: usize, u: FinVector) -> Result<Self> {
        check_dim(system.dim(level)?, u.dim())?;
        Ok(ColimElement {
            system: system.clone(),
            level,
            vector: u,
        })
    }

    pub fn zero(system: &DirectSystem) -> Result<Self> {
        ColimElement::embed(system, 1, FinVector::zeros(system.dim(1)?))
    }

    pub fn from_repr(system: &DirectSystem, repr: GermRepr) -> Result<Self> {
        ColimElement::embed(system, repr.level, repr.coords)
    }

    pub fn to_repr(&self) -> GermRepr {
        GermRepr {
            level: self.level,
            coords: self.vector.clone(),
        }
    }

    pub fn system(&self) -> &DirectSystem {
        &self.system
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn vector(&self) -> &FinVector {
        &self.vector
    }

    /// The same germ represented at level `m >= self.level`.
    pub fn promote(&self, m: usize) -> Result<ColimElement> {
        let h = self.system.connecting(self.level, m)?;
        Ok(ColimElement {
            system: self.system.clone(),
            level: m,
            vector: h.apply(&self.vector)?,
        })
    }

    fn require_injective(&self, upto: usize) -> Result<()> {
        match self.system.first_non_injective(upto + 1)? {
            Some(level) => Err(Error::InjectivityRequired { level }),
            None => Ok(()),
        }
    }

    fn same_system(&self, other: &ColimElement) -> Result<()> {
        if self.system.same_system(&other.system) {
            Ok(())
        } else {
            Err(Error::SystemMismatch)
        }
    }

    /// Both operands at their common level `max(levels)`.
    fn aligned(&self, other: &ColimElement) -> Result<(FinVector, FinVector, usize)> {
        self.same_system(other)?;
        let m = self.level.max(other.level);
        Ok((self.promote(m)?.vector, other.promote(m)?.vector, m))
    }

    fn at(&self, level: usize, vector: FinVector) -> ColimElement {
        ColimElement {
            system: self.system.clone(),
            level,
            vector,
        }
    }

    /// Germ equality.
    pub fn equal(&self, other: &ColimElement) -> Result<bool> {
        let (a, b, m) = self.aligned(other)?;
        self.require_injective(m)?;
        Ok(a == b)
    }

    /// The representative at the least level whose connecting map hits this
    /// germ's vector, with its unique preimage there.
    pub fn canonical_form(&self) -> Result<ColimElement> {
        self.require_injective(self.level)?;
        for n in 1..self.level {
            if let Some(u) = self
                .system
                .connecting(n, self.level)?
                .preimage(&self.vector)?
            {
                return Ok(self.at(n, u));
            }
        }
        Ok(self.clone())
    }

    pub fn is_zero(&self) -> Result<bool> {
        self.require_injective(self.level)?;
        Ok(self.vector.is_zero())
    }

    /// `a >= 0`. Injective lattice homomorphisms reflect positivity, so any
    /// representative decides it.
    pub fn is_positive(&self) -> Result<bool> {
        self.require_injective(self.level)?;
        Ok(self.vector.is_positive())
    }

    pub fn join(&self, other: &ColimElement) -> Result<ColimElement> {
        let (a, b, m) = self.aligned(other)?;
        Ok(self.at(m, a.join(&b)?))
    }

    pub fn meet(&self, other: &ColimElement) -> Result<ColimElement> {
        let (a, b, m) = self.aligned(other)?;
        Ok(self.at(m, a.meet(&b)?))
    }

    pub fn add(&self, other: &ColimElement) -> Result<ColimElement> {
        let (a, b, m) = self.aligned(other)?;
        Ok(self.at(m, a.add(&b)?))
    }

    pub fn sub(&self, other: &ColimElement) -> Result<ColimElement> {
        let (a, b, m) = self.aligned(other)?;
        Ok(self.at(m, a.sub(&b)?))
    }

    pub fn scale(&self, factor: &Scalar) -> ColimElement {
        self.at(self.level, self.vector.scale(factor))
    }

    pub fn abs(&self) -> ColimElement {
        self.at(self.level, self.vector.abs())
    }

    pub fn pos_part(&self) -> ColimElement {
        self.at(self.level, self.vector.pos_part())
    }

    /// Image under the map of limits induced by a levelwise morphism into
    /// `target`: `(n, u) ↦ (n, T_n u)`.
    pub fn map_through(&self, t: &SystemMorphism, target: &DirectSystem) -> Result<ColimElement> {
        ColimElement::embed(target, self.level, t.at(self.level)?.apply(&self.vector)?)
    }
}

impl fmt::Debug for ColimElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{}, {:?}⟩", self.level, self.vector)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::CanonicalHom;
    use crate::system::ExtensionRule;

    fn v(xs: &[i64]) -> FinVector {
        FinVector::from_ints(xs)
    }

    fn germ(s: &DirectSystem, n: usize, xs: &[i64]) -> ColimElement {
        ColimElement::embed(s, n, v(xs)).unwrap()
    }

    #[test]
    fn embedding() {
        let s = DirectSystem::inclusion_chain(1);
        let a = germ(&s, 2, &[1, 2]);
        assert_eq!(a.level(), 2);
        assert!(ColimElement::embed(&s, 2, v(&[1])).is_err());
        let z = ColimElement::zero(&s).unwrap();
        for m in 1..5 {
            assert!(z
                .equal(&ColimElement::embed(&s, m, FinVector::zeros(m)).unwrap())
                .unwrap());
        }
        let promoted = a.promote(5).unwrap();
        assert_eq!(promoted.vector(), &v(&[1, 2, 0, 0, 0]));
        assert!(promoted.equal(&a).unwrap());
    }

    #[test]
    fn equality() {
        let s = DirectSystem::inclusion_chain(1);
        assert!(germ(&s, 2, &[1, 2])
            .equal(&germ(&s, 4, &[1, 2, 0, 0]))
            .unwrap());
        assert!(!germ(&s, 2, &[1, 2])
            .equal(&germ(&s, 3, &[1, 2, 1]))
            .unwrap());
        let other = DirectSystem::inclusion_chain(1);
        assert_eq!(
            germ(&s, 1, &[1]).equal(&germ(&other, 1, &[1])).unwrap_err(),
            Error::SystemMismatch
        );
    }

    #[test]
    fn canonical_forms() {
        let s = DirectSystem::inclusion_chain(1);
        let c = germ(&s, 4, &[1, 2, 0, 0]).canonical_form().unwrap();
        assert_eq!((c.level(), c.vector().clone()), (2, v(&[1, 2])));
        let c = germ(&s, 4, &[0, 0, 0, 5]).canonical_form().unwrap();
        assert_eq!(c.level(), 4);
        assert!(germ(&s, 3, &[0, 0, 0]).canonical_form().unwrap().level() == 1);
    }

    #[test]
    fn operations() {
        let s = DirectSystem::inclusion_chain(1);
        let j = germ(&s, 1, &[1]).join(&germ(&s, 2, &[0, 3])).unwrap();
        assert!(j.equal(&germ(&s, 2, &[1, 3])).unwrap());
        let a = germ(&s, 3, &[1, -4, 2]);
        assert!(a
            .add(&a.scale(&Scalar::from_int(-1)))
            .unwrap()
            .is_zero()
            .unwrap());
        assert!(germ(&s, 3, &[0, 1, 0]).is_positive().unwrap());
        assert!(!germ(&s, 2, &[1, -1]).is_positive().unwrap());
        assert!(a.abs().is_positive().unwrap());
    }

    #[test]
    fn requires_injective_steps() {
        let collapse = CanonicalHom::new(2, vec![Some((0, Scalar::one()))]).unwrap();
        let s = DirectSystem::from_prefix(vec![2, 1], vec![collapse], ExtensionRule::None).unwrap();
        let a = germ(&s, 1, &[0, 1]);
        assert_eq!(
            a.is_zero().unwrap_err(),
            Error::InjectivityRequired { level: 1 }
        );
        assert_eq!(
            a.equal(&germ(&s, 2, &[0])).unwrap_err(),
            Error::InjectivityRequired { level: 1 }
        );
        // Operations that do not decide equality still work.
        assert!(a.join(&a).is_ok());
    }

    #[test]
    fn json_form() {
        let s = DirectSystem::inclusion_chain(1);
        let a = germ(&s, 2, &[1, -2]);
        let json = serde_json::to_string(&a.to_repr()).unwrap();
        assert_eq!(json, r#"{"level":2,"coords":["1/1","-2/1"]}"#);
        let back = ColimElement::from_repr(&s, serde_json::from_str(&json).unwrap()).unwrap();
        assert!(back.equal(&a).unwrap());
    }
}
