//! Step generators: where the dimensions and connecting maps of a
//! sequential system come from.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hom::{canonicalize, CanonicalHom, Row};
use crate::scalar::Scalar;

use super::{ChainCore, ExtensionRule, Orientation};

/// Supplies `dim(k)` and the step between levels `k` and `k + 1`.
///
/// For a direct system the step maps `dim(k) -> dim(k+1)`, for an inverse
/// system `dim(k+1) -> dim(k)`. Levels start at 1. Implementations must be
/// deterministic: results are memoized and may be recomputed concurrently.
pub trait StepGenerator: Send + Sync {
    fn dim(&self, level: usize) -> Result<usize>;
    fn step(&self, level: usize) -> Result<CanonicalHom>;

    /// The extension rule, for generators that are a finite prefix plus a
    /// rule. Other generators cannot be written to a system file beyond
    /// their materialized levels.
    fn extension_rule(&self) -> Option<ExtensionRule> {
        None
    }

    /// Number of explicitly given levels, if any.
    fn prefix_levels(&self) -> Option<usize> {
        None
    }
}

/// A finite explicit prefix continued by a closed extension rule.
pub(crate) struct Explicit {
    pub(crate) orientation: Orientation,
    pub(crate) dims: Vec<usize>,
    pub(crate) steps: Vec<CanonicalHom>,
    pub(crate) rule: ExtensionRule,
}

impl Explicit {
    pub(crate) fn new(
        orientation: Orientation,
        dims: Vec<usize>,
        steps: Vec<CanonicalHom>,
        rule: ExtensionRule,
    ) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::ZeroDimension);
        }
        if steps.len() + 1 != dims.len() {
            return Err(Error::InvalidHom(format!(
                "{} levels need {} steps, got {}",
                dims.len(),
                dims.len() - 1,
                steps.len()
            )));
        }
        for (i, h) in steps.iter().enumerate() {
            let (dom, cod) = orientation.step_dims(dims[i], dims[i + 1]);
            crate::error::check_dim(dom, h.dom_dim())?;
            crate::error::check_dim(cod, h.cod_dim())?;
        }
        match (rule, orientation) {
            (ExtensionRule::Inclusion, Orientation::Inverse)
            | (ExtensionRule::Restriction, Orientation::Direct) => {
                return Err(Error::InvalidHom(format!(
                    "extension rule `{}` does not fit a {} system",
                    rule.name(),
                    orientation.name()
                )));
            }
            (ExtensionRule::RepeatLast, _) => {
                let l = dims.len();
                if l < 2 {
                    return Err(Error::InvalidHom(
                        "repeat_last needs at least one explicit step".into(),
                    ));
                }
                if dims[l - 1] < dims[l - 2] {
                    return Err(Error::InvalidHom(
                        "repeat_last needs non-decreasing dimensions".into(),
                    ));
                }
            }
            _ => {}
        }
        Ok(Explicit {
            orientation,
            dims,
            steps,
            rule,
        })
    }

    fn growth(&self) -> usize {
        let l = self.dims.len();
        self.dims[l - 1] - self.dims[l - 2]
    }
}

impl StepGenerator for Explicit {
    fn dim(&self, level: usize) -> Result<usize> {
        let l = self.dims.len();
        if level <= l {
            return Ok(self.dims[level - 1]);
        }
        let last = self.dims[l - 1];
        match self.rule {
            ExtensionRule::None => Err(Error::ExtensionExhausted { level }),
            ExtensionRule::Inclusion | ExtensionRule::Restriction => Ok(last + (level - l)),
            ExtensionRule::RepeatLast => Ok(last + (level - l) * self.growth()),
        }
    }

    fn step(&self, level: usize) -> Result<CanonicalHom> {
        let l = self.dims.len();
        if level < l {
            return Ok(self.steps[level - 1].clone());
        }
        let (lo, hi) = (self.dim(level)?, self.dim(level + 1)?);
        match self.rule {
            ExtensionRule::None => Err(Error::ExtensionExhausted { level: level + 1 }),
            ExtensionRule::Inclusion => Ok(CanonicalHom::inclusion(lo, hi)),
            ExtensionRule::Restriction => Ok(CanonicalHom::restriction(hi, lo)),
            ExtensionRule::RepeatLast => {
                // Identity on the leading coordinates, the last explicit step
                // replayed on the trailing ones.
                let last = &self.steps[l - 2];
                let offset = lo - self.dims[l - 2];
                let mut rows: Vec<Row> = (0..offset).map(|x| Some((x, Scalar::one()))).collect();
                rows.extend(
                    last.rows()
                        .iter()
                        .map(|r| r.as_ref().map(|(j, w)| (j + offset, w.clone()))),
                );
                let dom = match self.orientation {
                    Orientation::Direct => lo,
                    Orientation::Inverse => hi,
                };
                CanonicalHom::new(dom, rows)
            }
        }
    }

    fn extension_rule(&self) -> Option<ExtensionRule> {
        Some(self.rule)
    }

    fn prefix_levels(&self) -> Option<usize> {
        Some(self.dims.len())
    }
}

/// Closure-backed generator for programmatic construction.
pub struct FnGenerator<D, S> {
    dim: D,
    step: S,
}

impl<D, S> FnGenerator<D, S>
where
    D: Fn(usize) -> Result<usize> + Send + Sync,
    S: Fn(usize) -> Result<CanonicalHom> + Send + Sync,
{
    pub fn new(dim: D, step: S) -> Self {
        FnGenerator { dim, step }
    }
}

impl<D, S> StepGenerator for FnGenerator<D, S>
where
    D: Fn(usize) -> Result<usize> + Send + Sync,
    S: Fn(usize) -> Result<CanonicalHom> + Send + Sync,
{
    fn dim(&self, level: usize) -> Result<usize> {
        (self.dim)(level)
    }

    fn step(&self, level: usize) -> Result<CanonicalHom> {
        (self.step)(level)
    }
}

/// The dual system: same dimensions, transposed steps.
pub(crate) struct Adjoint {
    pub(crate) source: Arc<ChainCore>,
}

impl StepGenerator for Adjoint {
    fn dim(&self, level: usize) -> Result<usize> {
        self.source.dim(level)
    }

    fn step(&self, level: usize) -> Result<CanonicalHom> {
        canonicalize(&self.source.step(level)?.adjoint())
    }

    fn prefix_levels(&self) -> Option<usize> {
        self.source.generator.prefix_levels()
    }
}
