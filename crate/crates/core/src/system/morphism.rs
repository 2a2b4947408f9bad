use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::error::{check_dim, Error, Result};
use crate::hom::CanonicalHom;

use super::{Orientation, SequentialSystem};

type LevelFn = dyn Fn(usize) -> Result<CanonicalHom> + Send + Sync;

/// Levelwise lattice homomorphisms `T_k` between the same-index components
/// of two systems.
#[derive(Clone)]
pub struct SystemMorphism {
    levels: Arc<LevelFn>,
    memo: Arc<RwLock<HashMap<usize, CanonicalHom>>>,
}

impl SystemMorphism {
    pub fn from_fn(f: impl Fn(usize) -> Result<CanonicalHom> + Send + Sync + 'static) -> Self {
        SystemMorphism {
            levels: Arc::new(f),
            memo: Arc::default(),
        }
    }

    /// `levels[k-1]` is `T_k`; levels past the end are exhausted.
    pub fn from_levels(levels: Vec<CanonicalHom>) -> Self {
        SystemMorphism::from_fn(move |k| {
            levels
                .get(k - 1)
                .cloned()
                .ok_or(Error::ExtensionExhausted { level: k })
        })
    }

    pub fn identity<S: SequentialSystem + 'static>(s: &S) -> Self {
        let s = s.clone();
        SystemMorphism::from_fn(move |k| Ok(CanonicalHom::identity(s.dim(k)?)))
    }

    /// `T_k`.
    pub fn at(&self, level: usize) -> Result<CanonicalHom> {
        if level == 0 {
            return Err(Error::InvalidLevels { from: 0, to: 0 });
        }
        if let Some(h) = self.memo.read().expect("memo lock").get(&level) {
            return Ok(h.clone());
        }
        let h = (self.levels)(level)?;
        self.memo
            .write()
            .expect("memo lock")
            .insert(level, h.clone());
        Ok(h)
    }

    /// Levelwise inverses, when every `T_k` is a lattice isomorphism.
    pub fn inverse(&self) -> SystemMorphism {
        let this = self.clone();
        SystemMorphism::from_fn(move |k| {
            this.at(k)?
                .inverse()
                .ok_or_else(|| Error::InvalidHom(format!("T_{} is not invertible", k)))
        })
    }
}

/// Verifies the commuting squares on levels `1..=depth`:
/// `T_{k+1} ∘ e_k = e'_k ∘ T_k` for direct systems and
/// `T_k ∘ p_k = p'_k ∘ T_{k+1}` for inverse systems.
pub fn check_morphism<S: SequentialSystem>(
    src: &S,
    dst: &S,
    t: &SystemMorphism,
    depth: usize,
) -> Result<()> {
    for k in 1..=depth {
        let tk = t.at(k)?;
        check_dim(src.dim(k)?, tk.dom_dim())?;
        check_dim(dst.dim(k)?, tk.cod_dim())?;
    }
    for k in 1..depth {
        let (tk, tk1) = (t.at(k)?, t.at(k + 1)?);
        let (a, b) = match S::ORIENTATION {
            Orientation::Direct => (tk1.compose(&src.step(k)?)?, dst.step(k)?.compose(&tk)?),
            Orientation::Inverse => (tk.compose(&src.step(k)?)?, dst.step(k)?.compose(&tk1)?),
        };
        // Canonical form is unique, so equality of forms is equality of maps.
        if a != b {
            return Err(Error::SquareFails { level: k });
        }
    }
    Ok(())
}
