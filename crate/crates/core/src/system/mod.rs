//! Sequential direct and inverse systems of coordinate lattices over `N`.
//!
//! A system is backed by a [`StepGenerator`] and memoizes every dimension
//! and step it materializes, so explicit finite prefixes and lazily defined
//! infinite chains share one representation.

mod chain;
mod file;
mod morphism;

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock, RwLock};

use serde::Serialize;

use crate::band::Band;
use crate::error::{check_dim, Error, Result};
use crate::hom::CanonicalHom;

pub use chain::{FnGenerator, StepGenerator};
pub use file::{emit_system, parse_system, AnySystem};
pub use morphism::{check_morphism, SystemMorphism};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Direct,
    Inverse,
}

impl Orientation {
    pub fn name(self) -> &'static str {
        match self {
            Orientation::Direct => "direct",
            Orientation::Inverse => "inverse",
        }
    }

    /// `(dom, cod)` of the step between levels of dimensions `lo` and `hi`.
    pub(crate) fn step_dims(self, lo: usize, hi: usize) -> (usize, usize) {
        match self {
            Orientation::Direct => (lo, hi),
            Orientation::Inverse => (hi, lo),
        }
    }

    pub fn dual(self) -> Orientation {
        match self {
            Orientation::Direct => Orientation::Inverse,
            Orientation::Inverse => Orientation::Direct,
        }
    }
}

/// How an explicit prefix continues past its last level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExtensionRule {
    /// No levels beyond the prefix.
    None,
    /// `dim(k+1) = dim(k) + 1`, step is the inclusion onto the first
    /// coordinates (direct systems).
    Inclusion,
    /// `dim(k+1) = dim(k) + 1`, step drops the last coordinate (inverse
    /// systems).
    Restriction,
    /// The dimension growth of the last explicit step repeats; each new step
    /// is the identity on the leading coordinates and the last explicit step
    /// on the trailing ones.
    RepeatLast,
}

impl ExtensionRule {
    pub fn name(self) -> &'static str {
        match self {
            ExtensionRule::None => "none",
            ExtensionRule::Inclusion => "inclusion",
            ExtensionRule::Restriction => "restriction",
            ExtensionRule::RepeatLast => "repeat_last",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "none" => ExtensionRule::None,
            "inclusion" => ExtensionRule::Inclusion,
            "restriction" => ExtensionRule::Restriction,
            "repeat_last" => ExtensionRule::RepeatLast,
            _ => return None,
        })
    }
}

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

pub(crate) struct ChainCore {
    id: u64,
    orientation: Orientation,
    generator: Box<dyn StepGenerator>,
    dims: RwLock<HashMap<usize, usize>>,
    steps: RwLock<HashMap<usize, CanonicalHom>>,
}

impl ChainCore {
    fn new(orientation: Orientation, generator: Box<dyn StepGenerator>) -> Self {
        ChainCore {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            orientation,
            generator,
            dims: RwLock::default(),
            steps: RwLock::default(),
        }
    }

    pub(crate) fn dim(&self, level: usize) -> Result<usize> {
        if level == 0 {
            return Err(Error::InvalidLevels {
                from: level,
                to: level,
            });
        }
        if let Some(&d) = self.dims.read().expect("dims lock").get(&level) {
            return Ok(d);
        }
        let d = self.generator.dim(level)?;
        if d == 0 {
            return Err(Error::ZeroDimension);
        }
        self.dims.write().expect("dims lock").insert(level, d);
        Ok(d)
    }

    pub(crate) fn step(&self, level: usize) -> Result<CanonicalHom> {
        if level == 0 {
            return Err(Error::InvalidLevels {
                from: level,
                to: level + 1,
            });
        }
        if let Some(h) = self.steps.read().expect("steps lock").get(&level) {
            return Ok(h.clone());
        }
        let h = self.generator.step(level)?;
        let (dom, cod) = self
            .orientation
            .step_dims(self.dim(level)?, self.dim(level + 1)?);
        check_dim(dom, h.dom_dim())?;
        check_dim(cod, h.cod_dim())?;
        self.steps
            .write()
            .expect("steps lock")
            .entry(level)
            .or_insert_with(|| h.clone());
        Ok(h)
    }
}

struct ChainInner {
    core: Arc<ChainCore>,
    dual: OnceLock<Chain>,
}

/// Shared handle; clones refer to the same system.
#[doc(hidden)]
#[derive(Clone)]
pub struct Chain(Arc<ChainInner>);

impl Chain {
    fn new(orientation: Orientation, generator: Box<dyn StepGenerator>) -> Self {
        Chain(Arc::new(ChainInner {
            core: Arc::new(ChainCore::new(orientation, generator)),
            dual: OnceLock::new(),
        }))
    }

    fn core(&self) -> &ChainCore {
        &self.0.core
    }

    /// The dual system, created once and shared by every clone.
    fn dual(&self) -> Chain {
        self.0
            .dual
            .get_or_init(|| {
                let gen = chain::Adjoint {
                    source: Arc::clone(&self.0.core),
                };
                Chain::new(self.core().orientation.dual(), Box::new(gen))
            })
            .clone()
    }
}

/// Operations shared by direct and inverse systems.
pub trait SequentialSystem: Clone + Send + Sync {
    const ORIENTATION: Orientation;

    #[doc(hidden)]
    fn chain(&self) -> &Chain;

    /// Identity of the system; clones share it.
    fn id(&self) -> u64 {
        self.chain().core().id
    }

    fn same_system(&self, other: &Self) -> bool {
        self.id() == other.id()
    }

    fn dim(&self, level: usize) -> Result<usize> {
        self.chain().core().dim(level)
    }

    /// The step between levels `level` and `level + 1`.
    fn step(&self, level: usize) -> Result<CanonicalHom> {
        self.chain().core().step(level)
    }

    fn extension_rule(&self) -> Option<ExtensionRule> {
        self.chain().core().generator.extension_rule()
    }

    fn prefix_levels(&self) -> Option<usize> {
        self.chain().core().generator.prefix_levels()
    }

    /// `depth` capped at the number of levels the system actually has.
    fn available_depth(&self, depth: usize) -> usize {
        match (self.extension_rule(), self.prefix_levels()) {
            (Some(ExtensionRule::None), Some(levels)) => depth.min(levels),
            _ => depth,
        }
    }

    /// Per-step predicates over levels `1..=depth`.
    fn classify(&self, depth: usize) -> Result<Classification> {
        if depth == 0 {
            return Err(Error::InvalidLevels { from: 1, to: depth });
        }
        let mut steps = Vec::with_capacity(depth.saturating_sub(1));
        for k in 1..depth {
            let h = self.step(k)?;
            steps.push(StepInfo {
                level: k,
                dom_dim: h.dom_dim(),
                cod_dim: h.cod_dim(),
                injective: h.is_injective(),
                surjective: h.is_surjective(),
                interval_preserving: h.is_interval_preserving(),
                image_band: h.image_band(),
            });
        }
        Ok(Classification::from_steps(Self::ORIENTATION, depth, steps))
    }

    /// First step in `1..depth` that is not injective. A finite prefix
    /// without extension simply has no further steps.
    fn first_non_injective(&self, depth: usize) -> Result<Option<usize>> {
        first_failing(self, depth, CanonicalHom::is_injective)
    }

    fn first_non_surjective(&self, depth: usize) -> Result<Option<usize>> {
        first_failing(self, depth, CanonicalHom::is_surjective)
    }
}

fn first_failing<S: SequentialSystem>(
    s: &S,
    depth: usize,
    pred: fn(&CanonicalHom) -> bool,
) -> Result<Option<usize>> {
    for k in 1..depth {
        match s.step(k) {
            Ok(h) if !pred(&h) => return Ok(Some(k)),
            Ok(_) => {}
            Err(Error::ExtensionExhausted { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepInfo {
    pub level: usize,
    pub dom_dim: usize,
    pub cod_dim: usize,
    pub injective: bool,
    pub surjective: bool,
    pub interval_preserving: bool,
    pub image_band: Option<Band>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub orientation: Orientation,
    pub depth: usize,
    pub all_injective: bool,
    pub all_surjective: bool,
    pub all_interval_preserving: bool,
    pub images_are_bands: bool,
    pub steps: Vec<StepInfo>,
}

impl Classification {
    fn from_steps(orientation: Orientation, depth: usize, steps: Vec<StepInfo>) -> Self {
        Classification {
            orientation,
            depth,
            all_injective: steps.iter().all(|s| s.injective),
            all_surjective: steps.iter().all(|s| s.surjective),
            all_interval_preserving: steps.iter().all(|s| s.interval_preserving),
            images_are_bands: steps.iter().all(|s| s.image_band.is_some()),
            steps,
        }
    }
}

/// A direct system `(R^{d_k}, e_{k,k+1})` over `N`.
#[derive(Clone)]
pub struct DirectSystem(Chain);

/// An inverse system `(R^{d_k}, p_{k+1,k})` over `N`.
#[derive(Clone)]
pub struct InverseSystem(Chain);

impl SequentialSystem for DirectSystem {
    const ORIENTATION: Orientation = Orientation::Direct;
    fn chain(&self) -> &Chain {
        &self.0
    }
}

impl SequentialSystem for InverseSystem {
    const ORIENTATION: Orientation = Orientation::Inverse;
    fn chain(&self) -> &Chain {
        &self.0
    }
}

impl DirectSystem {
    /// Explicit levels `1..=dims.len()`; `steps[k-1]` maps level `k` to `k+1`.
    pub fn from_prefix(
        dims: Vec<usize>,
        steps: Vec<CanonicalHom>,
        rule: ExtensionRule,
    ) -> Result<Self> {
        let gen = chain::Explicit::new(Orientation::Direct, dims, steps, rule)?;
        Ok(DirectSystem(Chain::new(Orientation::Direct, Box::new(gen))))
    }

    pub fn from_generator(gen: impl StepGenerator + 'static) -> Self {
        DirectSystem(Chain::new(Orientation::Direct, Box::new(gen)))
    }

    /// `R^start ↪ R^{start+1} ↪ ...` by coordinate inclusions.
    pub fn inclusion_chain(start: usize) -> Self {
        DirectSystem::from_prefix(vec![start], vec![], ExtensionRule::Inclusion)
            .expect("valid inclusion chain")
    }

    /// The connecting map `e_{n,m}`, `n <= m`.
    pub fn connecting(&self, n: usize, m: usize) -> Result<CanonicalHom> {
        if n == 0 || n > m {
            return Err(Error::InvalidLevels { from: n, to: m });
        }
        let mut h = CanonicalHom::identity(self.dim(n)?);
        for k in n..m {
            h = self.step(k)?.compose(&h)?;
        }
        Ok(h)
    }

    /// The dual inverse system with adjoint steps. Fails if an explicit step
    /// is not interval preserving (its adjoint is then not a lattice
    /// homomorphism); generated levels are checked when materialized.
    pub fn dual(&self) -> Result<InverseSystem> {
        let dual = InverseSystem(self.0.dual());
        if let Some(l) = self.prefix_levels() {
            for k in 1..l {
                dual.step(k)?;
            }
        }
        Ok(dual)
    }
}

impl InverseSystem {
    /// Explicit levels `1..=dims.len()`; `steps[k-1]` maps level `k+1` to `k`.
    pub fn from_prefix(
        dims: Vec<usize>,
        steps: Vec<CanonicalHom>,
        rule: ExtensionRule,
    ) -> Result<Self> {
        let gen = chain::Explicit::new(Orientation::Inverse, dims, steps, rule)?;
        Ok(InverseSystem(Chain::new(
            Orientation::Inverse,
            Box::new(gen),
        )))
    }

    pub fn from_generator(gen: impl StepGenerator + 'static) -> Self {
        InverseSystem(Chain::new(Orientation::Inverse, Box::new(gen)))
    }

    /// `R^start <- R^{start+1} <- ...` by dropping the last coordinate.
    pub fn restriction_chain(start: usize) -> Self {
        InverseSystem::from_prefix(vec![start], vec![], ExtensionRule::Restriction)
            .expect("valid restriction chain")
    }

    /// The connecting map `p_{m,n}`, `m >= n`.
    pub fn connecting(&self, m: usize, n: usize) -> Result<CanonicalHom> {
        if n == 0 || n > m {
            return Err(Error::InvalidLevels { from: m, to: n });
        }
        let mut h = CanonicalHom::identity(self.dim(m)?);
        for k in (n..m).rev() {
            h = self.step(k)?.compose(&h)?;
        }
        Ok(h)
    }

    /// The dual direct system with adjoint steps.
    pub fn dual(&self) -> Result<DirectSystem> {
        let dual = DirectSystem(self.0.dual());
        if let Some(l) = self.prefix_levels() {
            for k in 1..l {
                dual.step(k)?;
            }
        }
        Ok(dual)
    }
}

/// Free-function forms matching the usual names.
pub fn connecting(s: &DirectSystem, n: usize, m: usize) -> Result<CanonicalHom> {
    s.connecting(n, m)
}

pub fn connecting_inv(s: &InverseSystem, m: usize, n: usize) -> Result<CanonicalHom> {
    s.connecting(m, n)
}

pub fn dual_of_direct(s: &DirectSystem) -> Result<InverseSystem> {
    s.dual()
}

pub fn dual_of_inverse(s: &InverseSystem) -> Result<DirectSystem> {
    s.dual()
}

impl fmt::Debug for DirectSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DirectSystem#{}", self.id())
    }
}

impl fmt::Debug for InverseSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "InverseSystem#{}", self.id())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn duplication_chain() -> DirectSystem {
        let dup =
            CanonicalHom::new(1, vec![Some((0, Scalar::one())), Some((0, Scalar::one()))]).unwrap();
        DirectSystem::from_prefix(
            vec![1, 2, 3],
            vec![dup, CanonicalHom::inclusion(2, 3)],
            ExtensionRule::Inclusion,
        )
        .unwrap()
    }

    #[test]
    fn connecting_maps() {
        let s = DirectSystem::inclusion_chain(1);
        assert_eq!(s.connecting(2, 4).unwrap(), CanonicalHom::inclusion(2, 4));
        assert_eq!(s.connecting(3, 3).unwrap(), CanonicalHom::identity(3));
        let composed = s
            .connecting(2, 3)
            .unwrap()
            .compose(&s.connecting(1, 2).unwrap())
            .unwrap();
        assert_eq!(s.connecting(1, 3).unwrap(), composed);
        assert!(s.connecting(3, 2).is_err());
        assert!(s.connecting(0, 2).is_err());
    }

    #[test]
    fn connecting_inverse_maps() {
        let s = InverseSystem::restriction_chain(1);
        assert_eq!(s.connecting(4, 2).unwrap(), CanonicalHom::restriction(4, 2));
        assert_eq!(s.connecting(3, 3).unwrap(), CanonicalHom::identity(3));
        let composed = s
            .connecting(2, 1)
            .unwrap()
            .compose(&s.connecting(3, 2).unwrap())
            .unwrap();
        assert_eq!(s.connecting(3, 1).unwrap(), composed);
    }

    #[test]
    fn exhausted_prefix() {
        let s = DirectSystem::from_prefix(
            vec![1, 2],
            vec![CanonicalHom::inclusion(1, 2)],
            ExtensionRule::None,
        )
        .unwrap();
        assert!(s.step(1).is_ok());
        assert_eq!(
            s.step(2).unwrap_err(),
            Error::ExtensionExhausted { level: 3 }
        );
        assert!(matches!(
            s.classify(10),
            Err(Error::ExtensionExhausted { .. })
        ));
        assert!(s.classify(2).is_ok());
    }

    #[test]
    fn classification() {
        let c = DirectSystem::inclusion_chain(1).classify(10).unwrap();
        assert!(
            c.all_injective && !c.all_surjective && c.all_interval_preserving && c.images_are_bands
        );
        let c = InverseSystem::restriction_chain(1).classify(10).unwrap();
        assert!(
            !c.all_injective && c.all_surjective && c.all_interval_preserving && c.images_are_bands
        );
        let c = duplication_chain().classify(10).unwrap();
        assert!(!c.all_interval_preserving && !c.images_are_bands && c.all_injective);
    }

    #[test]
    fn classify_monotone_in_depth() {
        let s = duplication_chain();
        let shallow = s.classify(1).unwrap();
        assert!(shallow.all_interval_preserving);
        assert!(!s.classify(2).unwrap().all_interval_preserving);
    }

    #[test]
    fn duals() {
        let inc = DirectSystem::inclusion_chain(1);
        let d = inc.dual().unwrap();
        let res = InverseSystem::restriction_chain(1);
        for k in 1..8 {
            assert_eq!(d.step(k).unwrap(), res.step(k).unwrap());
        }
        // The dual is shared between calls.
        assert!(d.same_system(&inc.dual().unwrap()));

        let two = Scalar::from_int(2);
        let weighted = DirectSystem::from_generator(FnGenerator::new(Ok, move |k| {
            CanonicalHom::inclusion(k, k + 1).scaled(&two)
        }));
        let wd = weighted.dual().unwrap();
        assert_eq!(
            wd.step(3).unwrap(),
            CanonicalHom::restriction(4, 3)
                .scaled(&Scalar::from_int(2))
                .unwrap()
        );

        let back = wd.dual().unwrap();
        for k in 1..6 {
            assert_eq!(
                back.step(k).unwrap().to_matrix(),
                weighted.step(k).unwrap().to_matrix()
            );
        }
        assert!(matches!(
            duplication_chain().dual(),
            Err(Error::NotLatticeHom { .. })
        ));
    }

    #[test]
    fn repeat_last_rule() {
        let dup =
            CanonicalHom::new(1, vec![Some((0, Scalar::one())), Some((0, Scalar::one()))]).unwrap();
        let s =
            DirectSystem::from_prefix(vec![1, 2], vec![dup], ExtensionRule::RepeatLast).unwrap();
        assert_eq!(s.dim(5).unwrap(), 5);
        let h = s.step(3).unwrap();
        // identity on coordinates 1..2, duplication of coordinate 3
        assert_eq!(h.dom_dim(), 3);
        assert_eq!(h.cod_dim(), 4);
        assert_eq!(h.idx(0), Some(0));
        assert_eq!(h.idx(2), Some(2));
        assert_eq!(h.idx(3), Some(2));
        assert!(!h.is_interval_preserving());

        let inc = DirectSystem::from_prefix(
            vec![1, 2],
            vec![CanonicalHom::inclusion(1, 2)],
            ExtensionRule::RepeatLast,
        )
        .unwrap();
        for k in 1..6 {
            assert_eq!(inc.step(k).unwrap(), CanonicalHom::inclusion(k, k + 1));
        }
    }

    #[test]
    fn rejects_bad_prefix() {
        assert!(DirectSystem::from_prefix(vec![1, 2], vec![], ExtensionRule::None).is_err());
        assert!(DirectSystem::from_prefix(
            vec![1, 2],
            vec![CanonicalHom::restriction(2, 1)],
            ExtensionRule::None
        )
        .is_err());
        assert!(DirectSystem::from_prefix(vec![1], vec![], ExtensionRule::Restriction).is_err());
        assert!(InverseSystem::from_prefix(vec![1], vec![], ExtensionRule::Inclusion).is_err());
        assert!(InverseSystem::from_prefix(vec![1], vec![], ExtensionRule::RepeatLast).is_err());
    }

    #[test]
    fn generator_dims_are_checked() {
        let bad =
            DirectSystem::from_generator(FnGenerator::new(Ok, |k| Ok(CanonicalHom::identity(k))));
        assert!(matches!(bad.step(1), Err(Error::DimensionMismatch { .. })));
    }
}
