//! Elements of the inverse limit of an [`InverseSystem`].
//!
//! An element is a thread: a family `(u_k)` with `p_k(u_{k+1}) = u_k` for
//! every `k`. Threads are generated lazily by a rule and memoized. Since a
//! thread is infinite, compatibility is certified to a depth: a thread with
//! verified depth `d` satisfies the identity for every `k < d`.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex, RwLock};

use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::scalar::Scalar;
use crate::system::{InverseSystem, SequentialSystem, SystemMorphism};
use crate::vector::FinVector;

type Rule = dyn Fn(usize) -> Result<FinVector> + Send + Sync;

/// Named rules that serialize by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BuiltinRule {
    /// `u_k = 0`.
    Zero,
    /// `u_k = (1, ..., 1)`.
    Ones,
    /// `u_k = (1, 1/2, ..., 1/d_k)`.
    Harmonic,
}

impl BuiltinRule {
    pub fn name(self) -> &'static str {
        match self {
            BuiltinRule::Zero => "zero",
            BuiltinRule::Ones => "ones",
            BuiltinRule::Harmonic => "harmonic",
        }
    }
}

/// Where a thread came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Builtin(BuiltinRule),
    Rule(String),
    /// Built through `u` at level `level` using the zero-extension right
    /// inverse of each step above it.
    Section {
        level: usize,
    },
    Combination(&'static str),
}

struct ThreadInner {
    system: InverseSystem,
    rule: Box<Rule>,
    memo: RwLock<HashMap<usize, FinVector>>,
    verified: AtomicUsize,
    provenance: Provenance,
}

#[derive(Clone)]
pub struct Thread(Arc<ThreadInner>);

/// Finite prefix wire form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThreadPrefix {
    pub depth: usize,
    pub components: Vec<FinVector>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule: Option<&'static str>,
}

impl Thread {
    /// An unverified thread whose `k`-th component is `rule(k)`.
    pub fn from_rule(
        system: &InverseSystem,
        name: impl Into<String>,
        rule: impl Fn(usize) -> Result<FinVector> + Send + Sync + 'static,
    ) -> Thread {
        Thread::build(system, Provenance::Rule(name.into()), 0, Box::new(rule))
    }

    fn build(
        system: &InverseSystem,
        provenance: Provenance,
        verified: usize,
        rule: Box<Rule>,
    ) -> Thread {
        Thread(Arc::new(ThreadInner {
            system: system.clone(),
            rule,
            memo: RwLock::default(),
            verified: AtomicUsize::new(verified),
            provenance,
        }))
    }

    pub fn builtin(system: &InverseSystem, which: BuiltinRule) -> Thread {
        let s = system.clone();
        let rule: Box<Rule> = match which {
            BuiltinRule::Zero => Box::new(move |k| Ok(FinVector::zeros(s.dim(k)?))),
            BuiltinRule::Ones => {
                Box::new(move |k| Ok(FinVector::constant(s.dim(k)?, Scalar::one())))
            }
            BuiltinRule::Harmonic => Box::new(move |k| {
                FinVector::new(
                    (1..=s.dim(k)?)
                        .map(|i| Scalar::ratio(1, i as i64))
                        .collect(),
                )
            }),
        };
        Thread::build(system, Provenance::Builtin(which), 0, rule)
    }

    /// The thread through `u` at level `n0`: components below `n0` are images
    /// under the connecting maps, components above are obtained by the
    /// zero-extension right inverse of each step. Steps above `n0` must be
    /// surjective; a non-surjective step is reported when reached.
    pub fn section(system: &InverseSystem, n0: usize, u: FinVector) -> Result<Thread> {
        check_dim(system.dim(n0)?, u.dim())?;
        let s = system.clone();
        let upward: Mutex<Vec<FinVector>> = Mutex::new(vec![u.clone()]);
        let rule = move |k: usize| -> Result<FinVector> {
            if k <= n0 {
                return s.connecting(n0, k)?.apply(&u);
            }
            let mut up = upward.lock().expect("section cache");
            while up.len() <= k - n0 {
                let level = n0 + up.len() - 1;
                let sec = s
                    .step(level)?
                    .zero_extension_section()
                    .ok_or(Error::SurjectivityRequired { level })?;
                let next = sec.apply(up.last().expect("seeded"))?;
                up.push(next);
            }
            Ok(up[k - n0].clone())
        };
        Ok(Thread::build(
            system,
            Provenance::Section { level: n0 },
            0,
            Box::new(rule),
        ))
    }

    pub fn system(&self) -> &InverseSystem {
        &self.0.system
    }

    pub fn provenance(&self) -> &Provenance {
        &self.0.provenance
    }

    /// Levels `k < verified_depth()` are certified compatible.
    pub fn verified_depth(&self) -> usize {
        self.0.verified.load(Ordering::Acquire)
    }

    /// The component `p_n(t)`.
    pub fn projection(&self, n: usize) -> Result<FinVector> {
        if let Some(v) = self.0.memo.read().expect("thread memo").get(&n) {
            return Ok(v.clone());
        }
        let d = self.0.system.dim(n)?;
        let v = (self.0.rule)(n)?;
        check_dim(d, v.dim())?;
        self.0
            .memo
            .write()
            .expect("thread memo")
            .entry(n)
            .or_insert_with(|| v.clone());
        Ok(v)
    }

    /// Checks `p_k(u_{k+1}) = u_k` for `k = 1..depth-1`.
    pub fn verify(&self, depth: usize) -> Result<()> {
        if depth == 0 {
            return Err(Error::InvalidLevels { from: 1, to: 0 });
        }
        let start = self.verified_depth().max(1);
        if depth > start {
            self.projection(start)?;
        }
        for k in start..depth {
            let lower = self.projection(k)?;
            let upper = self.projection(k + 1)?;
            if self.0.system.step(k)?.apply(&upper)? != lower {
                return Err(Error::CompatibilityError { level: k });
            }
        }
        self.0.verified.fetch_max(depth, Ordering::AcqRel);
        Ok(())
    }

    fn same_system(&self, other: &Thread) -> Result<()> {
        if self.0.system.same_system(&other.0.system) {
            Ok(())
        } else {
            Err(Error::SystemMismatch)
        }
    }

    fn combine(
        &self,
        other: &Thread,
        what: &'static str,
        f: fn(&FinVector, &FinVector) -> Result<FinVector>,
    ) -> Result<Thread> {
        self.same_system(other)?;
        let (a, b) = (self.clone(), other.clone());
        // Steps are lattice homomorphisms, so compatibility of the inputs
        // carries over to the combination.
        let verified = a.verified_depth().min(b.verified_depth());
        let rule = move |k| f(&a.projection(k)?, &b.projection(k)?);
        Ok(Thread::build(
            &self.0.system,
            Provenance::Combination(what),
            verified,
            Box::new(rule),
        ))
    }

    fn map(
        &self,
        what: &'static str,
        f: impl Fn(&FinVector) -> FinVector + Send + Sync + 'static,
    ) -> Thread {
        let a = self.clone();
        let rule = move |k| Ok(f(&a.projection(k)?));
        Thread::build(
            &self.0.system,
            Provenance::Combination(what),
            self.verified_depth(),
            Box::new(rule),
        )
    }

    pub fn join(&self, other: &Thread) -> Result<Thread> {
        self.combine(other, "join", FinVector::join)
    }

    pub fn meet(&self, other: &Thread) -> Result<Thread> {
        self.combine(other, "meet", FinVector::meet)
    }

    pub fn add(&self, other: &Thread) -> Result<Thread> {
        self.combine(other, "add", FinVector::add)
    }

    pub fn sub(&self, other: &Thread) -> Result<Thread> {
        self.combine(other, "sub", FinVector::sub)
    }

    pub fn scale(&self, factor: &Scalar) -> Thread {
        let factor = factor.clone();
        self.map("scale", move |v| v.scale(&factor))
    }

    pub fn abs(&self) -> Thread {
        self.map("abs", FinVector::abs)
    }

    /// Pointwise supremum of finitely many threads of one system.
    pub fn sup(threads: &[Thread]) -> Result<Thread> {
        let (first, rest) = threads
            .split_first()
            .ok_or_else(|| Error::PreconditionViolated("supremum of an empty family".into()))?;
        rest.iter().try_fold(first.clone(), |acc, t| acc.join(t))
    }

    /// Componentwise equality on levels `1..=depth`.
    pub fn equal_upto(&self, other: &Thread, depth: usize) -> Result<bool> {
        self.same_system(other)?;
        for k in 1..=depth {
            if self.projection(k)? != other.projection(k)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Image under the map of limits induced by a levelwise morphism into
    /// `target`: `(u_k) ↦ (T_k u_k)`. Verified depth is reset.
    pub fn map_through(&self, t: &SystemMorphism, target: &InverseSystem) -> Thread {
        let (a, t) = (self.clone(), t.clone());
        let rule = move |k| t.at(k)?.apply(&a.projection(k)?);
        Thread::build(
            target,
            Provenance::Combination("induced"),
            0,
            Box::new(rule),
        )
    }

    pub fn prefix(&self, depth: usize) -> Result<ThreadPrefix> {
        let components = (1..=depth)
            .map(|k| self.projection(k))
            .collect::<Result<_>>()?;
        let rule = match self.0.provenance {
            Provenance::Builtin(b) => Some(b.name()),
            _ => None,
        };
        Ok(ThreadPrefix {
            depth,
            components,
            rule,
        })
    }
}

impl fmt::Debug for Thread {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Thread({:?}, verified to {})",
            self.0.provenance,
            self.verified_depth()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> FinVector {
        FinVector::from_ints(xs)
    }

    #[test]
    fn builtin_threads() {
        let s = InverseSystem::restriction_chain(1);
        let ones = Thread::builtin(&s, BuiltinRule::Ones);
        assert_eq!(ones.projection(3).unwrap(), v(&[1, 1, 1]));
        assert_eq!(ones.verified_depth(), 0);
        ones.verify(10).unwrap();
        assert_eq!(ones.verified_depth(), 10);
        assert!(Thread::builtin(&s, BuiltinRule::Zero)
            .projection(4)
            .unwrap()
            .is_zero());
        let h = Thread::builtin(&s, BuiltinRule::Harmonic);
        h.verify(10).unwrap();
        assert_eq!(h.projection(2).unwrap().get(1), &Scalar::ratio(1, 2));
    }

    #[test]
    fn incompatible_rule() {
        let s = InverseSystem::restriction_chain(1);
        let t = Thread::from_rule(&s, "k*ones", |k| {
            Ok(FinVector::constant(k, Scalar::from_int(k as i64)))
        });
        assert_eq!(
            t.verify(10).unwrap_err(),
            Error::CompatibilityError { level: 1 }
        );
        assert_eq!(t.verified_depth(), 0);
        let bad_dim = Thread::from_rule(&s, "short", |_| Ok(v(&[1])));
        assert!(matches!(
            bad_dim.projection(2),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn sections() {
        let s = InverseSystem::restriction_chain(1);
        let t = Thread::section(&s, 2, v(&[4, 5])).unwrap();
        assert_eq!(t.projection(1).unwrap(), v(&[4]));
        assert_eq!(t.projection(2).unwrap(), v(&[4, 5]));
        assert_eq!(t.projection(4).unwrap(), v(&[4, 5, 0, 0]));
        t.verify(12).unwrap();
        assert_eq!(t.provenance(), &Provenance::Section { level: 2 });
        assert!(Thread::section(&s, 2, v(&[1])).is_err());
    }

    #[test]
    fn section_needs_surjective_steps() {
        use crate::hom::CanonicalHom;
        use crate::system::ExtensionRule;
        let zero_row = CanonicalHom::new(2, vec![None]).unwrap();
        let s =
            InverseSystem::from_prefix(vec![1, 2], vec![zero_row], ExtensionRule::None).unwrap();
        let t = Thread::section(&s, 1, v(&[1])).unwrap();
        assert_eq!(
            t.projection(2).unwrap_err(),
            Error::SurjectivityRequired { level: 1 }
        );
    }

    #[test]
    fn pointwise_operations() {
        let s = InverseSystem::restriction_chain(1);
        let ones = Thread::builtin(&s, BuiltinRule::Ones);
        let zero = Thread::builtin(&s, BuiltinRule::Zero);
        ones.verify(6).unwrap();
        zero.verify(8).unwrap();
        let j = ones.join(&zero).unwrap();
        assert_eq!(j.verified_depth(), 6);
        assert!(j.equal_upto(&ones, 10).unwrap());
        let cancel = ones.add(&ones.scale(&Scalar::from_int(-1))).unwrap();
        assert!(cancel.equal_upto(&zero, 10).unwrap());
        assert_eq!(
            ones.join(&Thread::builtin(
                &InverseSystem::restriction_chain(1),
                BuiltinRule::Ones
            ))
            .unwrap_err(),
            Error::SystemMismatch
        );
        assert_eq!(
            j.projection(3).unwrap(),
            ones.projection(3)
                .unwrap()
                .join(&zero.projection(3).unwrap())
                .unwrap()
        );
    }

    #[test]
    fn equality_to_depth() {
        let s = InverseSystem::restriction_chain(1);
        let a = Thread::builtin(&s, BuiltinRule::Ones);
        let b = Thread::from_rule(&s, "ones again", |k| {
            Ok(FinVector::constant(k, Scalar::one()))
        });
        assert!(a.equal_upto(&b, 12).unwrap());
        assert!(!a
            .equal_upto(&Thread::builtin(&s, BuiltinRule::Zero), 1)
            .unwrap());
    }

    #[test]
    fn prefix_form() {
        let s = InverseSystem::restriction_chain(1);
        let p = Thread::builtin(&s, BuiltinRule::Ones).prefix(2).unwrap();
        assert_eq!(
            serde_json::to_string(&p).unwrap(),
            r#"{"depth":2,"components":[["1/1"],["1/1","1/1"]],"rule":"ones"}"#
        );
        let sec = Thread::section(&s, 1, v(&[2])).unwrap().prefix(1).unwrap();
        assert_eq!(sec.rule, None);
    }
}
