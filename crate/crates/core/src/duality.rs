//! Order duals of sequential limits, represented through the dual systems.
//!
//! * A functional on the direct limit of `D` is a thread of the dual
//!   inverse system `D~`: a compatible family `(φ_n)` acting on a germ
//!   `(n, u)` by `φ_n · u`.
//! * A functional on the inverse limit of `I` (surjective steps) is a germ
//!   of the dual direct system `I~`: a pair `(n, ψ)` acting on a thread by
//!   `ψ · u_n`.
//!
//! Every functional on these limits arises this way, so these are the only
//! representations offered; evaluator-style functionals enter through
//! [`ColimFunctional::from_evaluator`]. On finite-dimensional components the
//! order dual and the order continuous dual coincide, so no separate
//! normal-dual variant exists.

use std::sync::Arc;

use serde::Serialize;

use crate::colimit::{ColimElement, GermRepr};
use crate::error::{Error, Result};
use crate::hom::{canonicalize, CanonicalHom, PositiveMatrix};
use crate::limit::{Thread, ThreadPrefix};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::system::{DirectSystem, InverseSystem, SequentialSystem};
use crate::vector::FinVector;

/// A functional on the direct limit of `primal`, held as a thread of the
/// dual inverse system.
#[derive(Clone, Debug)]
pub struct ColimFunctional {
    primal: DirectSystem,
    thread: Thread,
}

impl ColimFunctional {
    pub fn new(primal: &DirectSystem, thread: Thread) -> Result<Self> {
        if !thread.system().same_system(&primal.dual()?) {
            return Err(Error::SystemMismatch);
        }
        Ok(ColimFunctional {
            primal: primal.clone(),
            thread,
        })
    }

    pub fn primal(&self) -> &DirectSystem {
        &self.primal
    }

    pub fn thread(&self) -> &Thread {
        &self.thread
    }

    /// `φ((n, u)) = φ_n · u`. The thread must be verified to depth `n`.
    pub fn eval(&self, a: &ColimElement) -> Result<Scalar> {
        if !a.system().same_system(&self.primal) {
            return Err(Error::SystemMismatch);
        }
        let available = self.thread.verified_depth();
        if available < a.level() {
            return Err(Error::DepthInsufficient {
                required: a.level(),
                available,
            });
        }
        self.thread.projection(a.level())?.dot(a.vector())
    }

    /// The dual thread of a functional given by its values on germs:
    /// `φ_n[j] = f(e_n(basis_j))`. The result is verified to `depth`;
    /// a non-linear or inconsistent `f` surfaces as a compatibility error.
    pub fn from_evaluator(
        primal: &DirectSystem,
        f: impl Fn(&ColimElement) -> Result<Scalar> + Send + Sync + 'static,
        depth: usize,
    ) -> Result<Self> {
        let s = primal.clone();
        let f = Arc::new(f);
        let thread = Thread::from_rule(&primal.dual()?, "evaluator", move |n| {
            let d = s.dim(n)?;
            let coords = (0..d)
                .map(|j| f(&ColimElement::embed(&s, n, FinVector::unit(d, j))?))
                .collect::<Result<Vec<_>>>()?;
            FinVector::new(coords)
        });
        thread.verify(depth)?;
        ColimFunctional::new(primal, thread)
    }

    pub fn join(&self, other: &ColimFunctional) -> Result<ColimFunctional> {
        ColimFunctional::new(&self.primal, self.thread.join(&other.thread)?)
    }

    pub fn meet(&self, other: &ColimFunctional) -> Result<ColimFunctional> {
        ColimFunctional::new(&self.primal, self.thread.meet(&other.thread)?)
    }

    pub fn add(&self, other: &ColimFunctional) -> Result<ColimFunctional> {
        ColimFunctional::new(&self.primal, self.thread.add(&other.thread)?)
    }

    pub fn to_wire(&self, depth: usize) -> Result<FunctionalWire> {
        Ok(FunctionalWire::ColimFunctional(self.thread.prefix(depth)?))
    }
}

/// A functional on the inverse limit of `primal`, held as a germ of the
/// dual direct system.
#[derive(Clone, Debug)]
pub struct LimFunctional {
    primal: InverseSystem,
    germ: ColimElement,
}

impl LimFunctional {
    pub fn new(primal: &InverseSystem, level: usize, psi: FinVector) -> Result<Self> {
        Ok(LimFunctional {
            primal: primal.clone(),
            germ: ColimElement::embed(&primal.dual()?, level, psi)?,
        })
    }

    pub fn from_germ(primal: &InverseSystem, germ: ColimElement) -> Result<Self> {
        if !germ.system().same_system(&primal.dual()?) {
            return Err(Error::SystemMismatch);
        }
        Ok(LimFunctional {
            primal: primal.clone(),
            germ,
        })
    }

    pub fn germ(&self) -> &ColimElement {
        &self.germ
    }

    pub fn level(&self) -> usize {
        self.germ.level()
    }

    /// `ψ(t) = ψ_n · p_n(t)`. The thread must be verified to depth `n`.
    pub fn eval(&self, t: &Thread) -> Result<Scalar> {
        if !t.system().same_system(&self.primal) {
            return Err(Error::SystemMismatch);
        }
        let available = t.verified_depth();
        if available < self.level() {
            return Err(Error::DepthInsufficient {
                required: self.level(),
                available,
            });
        }
        self.germ.vector().dot(&t.projection(self.level())?)
    }

    /// Germ equality in the dual direct system. Its steps are injective
    /// exactly when the primal steps are surjective.
    pub fn equal(&self, other: &LimFunctional) -> Result<bool> {
        self.germ.equal(&other.germ).map_err(|e| match e {
            Error::InjectivityRequired { level } => Error::SurjectivityRequired { level },
            e => e,
        })
    }

    pub fn promote(&self, level: usize) -> Result<LimFunctional> {
        Ok(LimFunctional {
            primal: self.primal.clone(),
            germ: self.germ.promote(level)?,
        })
    }

    pub fn sub(&self, other: &LimFunctional) -> Result<LimFunctional> {
        Ok(LimFunctional {
            primal: self.primal.clone(),
            germ: self.germ.sub(&other.germ)?,
        })
    }

    pub fn to_wire(&self) -> FunctionalWire {
        FunctionalWire::LimFunctional(self.germ.to_repr())
    }
}

/// Free-function form of [`ColimFunctional::from_evaluator`].
pub fn functional_to_dual_thread(
    primal: &DirectSystem,
    f: impl Fn(&ColimElement) -> Result<Scalar> + Send + Sync + 'static,
    depth: usize,
) -> Result<ColimFunctional> {
    ColimFunctional::from_evaluator(primal, f, depth)
}

/// Wire form: the underlying thread prefix or germ, tagged by kind.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionalWire {
    ColimFunctional(ThreadPrefix),
    LimFunctional(GermRepr),
}

/// A dual germ that is nonzero on `t`, from the first nonzero component
/// within `depth`. `None` if `t` vanishes on `1..=depth`.
pub fn separating_germ(t: &Thread, depth: usize) -> Result<Option<LimFunctional>> {
    for n in 1..=depth {
        let u = t.projection(n)?;
        if let Some(&j) = u.support().iter().next() {
            return LimFunctional::new(t.system(), n, FinVector::unit(u.dim(), j)).map(Some);
        }
    }
    Ok(None)
}

/// A dual thread that is nonzero on the germ `a`: the section of the dual
/// system through the unit functional at a coordinate where `a` is nonzero,
/// extended by zero. Needs surjective dual steps, i.e. injective interval
/// preserving primal steps.
pub fn separating_thread(a: &ColimElement, depth: usize) -> Result<Option<ColimFunctional>> {
    let Some(&j) = a.vector().support().iter().next() else {
        return Ok(None);
    };
    let dual = a.system().dual()?;
    let t = Thread::section(&dual, a.level(), FinVector::unit(a.vector().dim(), j))?;
    t.verify(depth.max(a.level()))?;
    ColimFunctional::new(a.system(), t).map(Some)
}

/// A thread `t` with `t_k >= x_k` for `k = 1..=xs.len()`, built from
/// positive sections. Needs surjective steps below level `xs.len()`.
pub fn majorant_upto(s: &InverseSystem, xs: &[FinVector]) -> Result<Thread> {
    let top = xs.len();
    if top == 0 {
        return Err(Error::PreconditionViolated("nothing to majorise".into()));
    }
    let mut acc = xs[top - 1].abs();
    for (i, x) in xs.iter().enumerate().take(top - 1) {
        let mut lifted = x.abs();
        for level in i + 1..top {
            let sec = s
                .step(level)?
                .zero_extension_section()
                .ok_or(Error::SurjectivityRequired { level })?;
            lifted = sec.apply(&lifted)?;
        }
        acc = acc.add(&lifted)?;
    }
    let t = Thread::section(s, top, acc)?;
    t.verify(top)?;
    Ok(t)
}

/// Whether `t_k >= x_k` for every `k = 1..=xs.len()`.
pub fn majorises_upto(t: &Thread, xs: &[FinVector]) -> Result<bool> {
    for (i, x) in xs.iter().enumerate() {
        if !x.leq(&t.projection(i + 1)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SumProductReport {
    pub dims: Vec<usize>,
    pub total_dim: usize,
    /// `S`: functionals on the product, restricted to each factor.
    pub s_is_lattice_hom: bool,
    /// `T`: a family of factor functionals, summed through the projections.
    pub t_is_lattice_hom: bool,
    pub s_after_t_is_identity: bool,
    pub t_after_s_is_identity: bool,
    /// `T(ψ)(u) = Σ ψ_α(π_α u)` on every pair of basis vectors.
    pub pairing_consistent: bool,
}

impl SumProductReport {
    pub fn passed(&self) -> bool {
        self.s_is_lattice_hom
            && self.t_is_lattice_hom
            && self.s_after_t_is_identity
            && self.t_after_s_is_identity
            && self.pairing_consistent
    }
}

/// Checks on the coordinate model of a finite family `(R^{d_α})` that the
/// maps `S(φ) = (φ ∘ ι_α)_α` and `T(ψ) = Σ ψ_α ∘ π_α` between the dual of the
/// product (equivalently of the sum) and the family of duals are mutually
/// inverse lattice homomorphisms.
pub fn truncated_sum_product_duality(dims: &[usize]) -> Result<SumProductReport> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::ZeroDimension);
    }
    let total: usize = dims.iter().sum();
    let mut offset = 0;
    let mut injections = Vec::new();
    let mut projections = Vec::new();
    for &d in dims {
        let iota = CanonicalHom::new(
            d,
            (0..total)
                .map(|x| {
                    (offset..offset + d)
                        .contains(&x)
                        .then(|| (x - offset, Scalar::one()))
                })
                .collect(),
        )?;
        let pi = CanonicalHom::new(
            total,
            (0..d).map(|x| Some((offset + x, Scalar::one()))).collect(),
        )?;
        injections.push(iota);
        projections.push(pi);
        offset += d;
    }

    // S stacks the adjoints of the injections; T places the adjoints of the
    // projections side by side.
    let mut s = Matrix::zeros(total, total);
    let mut t = Matrix::zeros(total, total);
    let mut row = 0;
    for (iota, pi) in injections.iter().zip(&projections) {
        let ia = iota.adjoint();
        let pa = pi.adjoint();
        for r in 0..ia.rows() {
            for c in 0..total {
                s.set(row + r, c, ia.matrix().get(r, c).clone());
                t.set(c, row + r, pa.matrix().get(c, r).clone());
            }
        }
        row += ia.rows();
    }
    let s = PositiveMatrix::new(s)?;
    let t = PositiveMatrix::new(t)?;

    let mut pairing_consistent = true;
    for (a, (pi, &d)) in projections.iter().zip(dims).enumerate() {
        let start: usize = dims[..a].iter().sum();
        for j in 0..d {
            let mut psi = vec![Scalar::zero(); total];
            psi[start + j] = Scalar::one();
            let t_psi = t.apply(&FinVector::new(psi)?)?;
            for i in 0..total {
                let u = FinVector::unit(total, i);
                let lhs = t_psi.dot(&u)?;
                let rhs = FinVector::unit(d, j).dot(&pi.apply(&u)?)?;
                pairing_consistent &= lhs == rhs;
            }
        }
    }

    Ok(SumProductReport {
        dims: dims.to_vec(),
        total_dim: total,
        s_is_lattice_hom: canonicalize(&s).is_ok(),
        t_is_lattice_hom: canonicalize(&t).is_ok(),
        s_after_t_is_identity: s.compose(&t)?.matrix().is_identity(),
        t_after_s_is_identity: t.compose(&s)?.matrix().is_identity(),
        pairing_consistent,
    })
}
