//! Seeded generators for random lattice data.
//!
//! Scalars have numerators and denominators bounded by 16. Every trial of a
//! suite draws from its own generator, seeded from the run seed and the
//! trial index, so results do not depend on trial order.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::hom::{CanonicalHom, PositiveMatrix};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::system::{
    DirectSystem, ExtensionRule, FnGenerator, InverseSystem, SequentialSystem, SystemMorphism,
};
use crate::vector::FinVector;

pub const BOUND: i64 = 16;

pub type Gen = ChaCha8Rng;

pub fn generator(seed: u64) -> Gen {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent sub-seed for trial `index` of a run seeded with `seed`.
pub fn sub_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn trial_generator(seed: u64, index: u64) -> Gen {
    generator(sub_seed(seed, index))
}

/// A strictly positive rational.
pub fn positive_scalar(rng: &mut Gen) -> Scalar {
    Scalar::ratio(rng.gen_range(1..=BOUND), rng.gen_range(1..=BOUND))
}

/// A rational in `[-16, 16]`, zero about a fifth of the time.
pub fn scalar(rng: &mut Gen) -> Scalar {
    if rng.gen_ratio(1, 5) {
        return Scalar::zero();
    }
    Scalar::ratio(rng.gen_range(-BOUND..=BOUND), rng.gen_range(1..=BOUND))
}

pub fn nonnegative_scalar(rng: &mut Gen) -> Scalar {
    scalar(rng).abs()
}

pub fn vector(rng: &mut Gen, dim: usize) -> FinVector {
    FinVector::new((0..dim).map(|_| scalar(rng)).collect()).expect("dim >= 1")
}

pub fn nonnegative_vector(rng: &mut Gen, dim: usize) -> FinVector {
    FinVector::new((0..dim).map(|_| nonnegative_scalar(rng)).collect()).expect("dim >= 1")
}

/// Any canonical hom `R^dom -> R^cod`; about a quarter of the rows vanish.
pub fn canonical_hom(rng: &mut Gen, dom: usize, cod: usize) -> CanonicalHom {
    let rows = (0..cod)
        .map(|_| (!rng.gen_ratio(1, 4)).then(|| (rng.gen_range(0..dom), positive_scalar(rng))))
        .collect();
    CanonicalHom::new(dom, rows).expect("rows in range")
}

/// A nonnegative matrix, for probing the canonicalizer.
pub fn positive_matrix(rng: &mut Gen, rows: usize, cols: usize) -> PositiveMatrix {
    let mut m = Matrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            if rng.gen_ratio(1, 3) {
                m.set(r, c, positive_scalar(rng));
            }
        }
    }
    PositiveMatrix::new(m).expect("entries nonnegative")
}

/// Injective and interval preserving `R^n -> R^m`, `m >= n`: each input
/// coordinate feeds exactly one output row, the other rows vanish.
pub fn injective_ip_hom(rng: &mut Gen, n: usize, m: usize) -> CanonicalHom {
    assert!(m >= n, "needs m >= n");
    let mut targets: Vec<usize> = (0..m).collect();
    targets.shuffle(rng);
    let mut rows = vec![None; m];
    for (j, &x) in targets.iter().take(n).enumerate() {
        rows[x] = Some((j, positive_scalar(rng)));
    }
    CanonicalHom::new(n, rows).expect("rows in range")
}

/// Surjective `R^m -> R^n`, `m >= n`: every output row reads a distinct
/// input coordinate.
pub fn surjective_hom(rng: &mut Gen, m: usize, n: usize) -> CanonicalHom {
    assert!(m >= n, "needs m >= n");
    let mut sources: Vec<usize> = (0..m).collect();
    sources.shuffle(rng);
    let rows = sources
        .iter()
        .take(n)
        .map(|&j| Some((j, positive_scalar(rng))))
        .collect();
    CanonicalHom::new(m, rows).expect("rows in range")
}

/// A weighted permutation of `R^n`.
pub fn level_iso(rng: &mut Gen, n: usize) -> CanonicalHom {
    surjective_hom(rng, n, n)
}

fn growing_dims(rng: &mut Gen, levels: usize) -> Vec<usize> {
    let mut dims = vec![rng.gen_range(1..=3)];
    for _ in 1..levels {
        let last = *dims.last().expect("nonempty");
        dims.push(last + rng.gen_range(0..=1));
    }
    dims
}

/// Direct system with random injective interval preserving steps on the
/// first `levels` levels, continued by replaying the last step.
pub fn injective_ip_chain(rng: &mut Gen, levels: usize) -> DirectSystem {
    let dims = growing_dims(rng, levels.max(2));
    let steps = dims
        .windows(2)
        .map(|w| injective_ip_hom(rng, w[0], w[1]))
        .collect();
    DirectSystem::from_prefix(dims, steps, ExtensionRule::RepeatLast).expect("valid prefix")
}

/// Inverse system with random surjective steps on the first `levels`
/// levels, continued by replaying the last step.
pub fn surjective_chain(rng: &mut Gen, levels: usize) -> InverseSystem {
    let dims = growing_dims(rng, levels.max(2));
    let steps = dims
        .windows(2)
        .map(|w| surjective_hom(rng, w[1], w[0]))
        .collect();
    InverseSystem::from_prefix(dims, steps, ExtensionRule::RepeatLast).expect("valid prefix")
}

/// A levelwise isomorphism `T` out of `s`, drawn lazily from `seed`, and
/// the system it transports `s` to: `e'_k = T_{k+1} e_k T_k^{-1}`.
pub fn transported_direct(s: &DirectSystem, seed: u64) -> (DirectSystem, SystemMorphism) {
    let (t, inv) = random_isos(s, seed);
    let (src, dims) = (s.clone(), s.clone());
    let (t2, inv2) = (t.clone(), inv);
    let target = DirectSystem::from_generator(FnGenerator::new(
        move |k| dims.dim(k),
        move |k| t2.at(k + 1)?.compose(&src.step(k)?)?.compose(&inv2.at(k)?),
    ));
    (target, t)
}

/// As [`transported_direct`] for inverse systems: `p'_k = T_k p_k T_{k+1}^{-1}`.
pub fn transported_inverse(s: &InverseSystem, seed: u64) -> (InverseSystem, SystemMorphism) {
    let (t, inv) = random_isos(s, seed);
    let (src, dims) = (s.clone(), s.clone());
    let (t2, inv2) = (t.clone(), inv);
    let target = InverseSystem::from_generator(FnGenerator::new(
        move |k| dims.dim(k),
        move |k| t2.at(k)?.compose(&src.step(k)?)?.compose(&inv2.at(k + 1)?),
    ));
    (target, t)
}

fn random_isos<S: SequentialSystem + 'static>(
    s: &S,
    seed: u64,
) -> (SystemMorphism, SystemMorphism) {
    let src = s.clone();
    let t = SystemMorphism::from_fn(move |k| -> Result<CanonicalHom> {
        Ok(level_iso(&mut trial_generator(seed, k as u64), src.dim(k)?))
    });
    let inv = t.inverse();
    (t, inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::check_morphism;

    #[test]
    fn determinism() {
        let a = canonical_hom(&mut generator(7), 4, 5);
        let b = canonical_hom(&mut generator(7), 4, 5);
        assert_eq!(a, b);
        assert_ne!(sub_seed(1, 0), sub_seed(1, 1));
    }

    #[test]
    fn shapes() {
        let mut rng = generator(3);
        for _ in 0..50 {
            let (n, m) = (rng.gen_range(1..=4), rng.gen_range(4..=6));
            let h = injective_ip_hom(&mut rng, n, m);
            assert!(h.is_injective() && h.is_interval_preserving());
            let s = surjective_hom(&mut rng, m, n);
            assert!(s.is_surjective());
            let x = scalar(&mut rng);
            assert!(x.numer().magnitude() <= &16u32.into() && x.denom() <= &16.into());
        }
    }

    #[test]
    fn chains() {
        let mut rng = generator(11);
        let d = injective_ip_chain(&mut rng, 4);
        let c = d.classify(9).unwrap();
        assert!(c.all_injective && c.all_interval_preserving);
        let i = surjective_chain(&mut rng, 4);
        assert!(i.classify(9).unwrap().all_surjective);
    }

    #[test]
    fn transports_commute() {
        let mut rng = generator(5);
        let d = injective_ip_chain(&mut rng, 3);
        let (d2, t) = transported_direct(&d, 99);
        check_morphism(&d, &d2, &t, 6).unwrap();
        let i = surjective_chain(&mut rng, 3);
        let (i2, t) = transported_inverse(&i, 99);
        check_morphism(&i, &i2, &t, 6).unwrap();
        assert!(i2.classify(6).unwrap().all_surjective);
    }
}
