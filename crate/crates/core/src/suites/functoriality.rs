use rand::Rng;
use serde_json::json;

use super::{ensure, Config, Prop};
use crate::colimit::ColimElement;
use crate::error::Result;
use crate::limit::Thread;
use crate::random;
use crate::system::{check_morphism, SequentialSystem};

pub(super) fn run(cfg: &Config) -> Vec<Prop> {
    let depth = cfg.depth;
    let mut squares = Prop::new("levelwise_squares_commute");
    let mut embeddings = Prop::new("colimit_map_commutes_with_embeddings");
    let mut colim_iso = Prop::new("colimit_map_is_lattice_isomorphism");
    let mut projections = Prop::new("limit_map_commutes_with_projections");
    let mut lim_iso = Prop::new("limit_map_is_lattice_isomorphism");

    for trial in 0..cfg.trials {
        let rng = &mut random::trial_generator(cfg.seed, trial as u64);
        let iso_seed = rng.gen();
        if trial % 2 == 0 {
            let s = random::injective_ip_chain(rng, depth);
            let (target, t) = random::transported_direct(&s, iso_seed);
            let back = t.inverse();
            squares.record(
                check_morphism(&s, &target, &t, depth)
                    .and_then(|()| check_morphism(&target, &s, &back, depth))
                    .map(|()| None),
            );

            let random_germ = |rng: &mut random::Gen| -> Result<ColimElement> {
                let level = rng.gen_range(1..=depth);
                ColimElement::embed(&s, level, random::vector(rng, s.dim(level)?))
            };
            embeddings.record((|| {
                let a = random_germ(rng)?;
                let m = rng.gen_range(a.level()..=depth);
                let lhs = a.map_through(&t, &target)?.promote(m)?;
                let rhs = a.promote(m)?.map_through(&t, &target)?;
                ensure(
                    lhs.vector() == rhs.vector(),
                    || json!({ "germ": a.to_repr(), "to": m }),
                )
            })());
            colim_iso.record((|| {
                let (a, b) = (random_germ(rng)?, random_germ(rng)?);
                let round = a.map_through(&t, &target)?.map_through(&back, &s)?;
                let joined = a.join(&b)?.map_through(&t, &target)?;
                let separate = a
                    .map_through(&t, &target)?
                    .join(&b.map_through(&t, &target)?)?;
                let ok = round.equal(&a)? && joined.equal(&separate)?;
                ensure(ok, || json!({ "a": a.to_repr(), "b": b.to_repr() }))
            })());
        } else {
            let s = random::surjective_chain(rng, depth);
            let (target, t) = random::transported_inverse(&s, iso_seed);
            let back = t.inverse();
            squares.record(
                check_morphism(&s, &target, &t, depth)
                    .and_then(|()| check_morphism(&target, &s, &back, depth))
                    .map(|()| None),
            );

            let random_thread = |rng: &mut random::Gen| -> Result<Thread> {
                let level = rng.gen_range(1..=depth);
                let th = Thread::section(&s, level, random::vector(rng, s.dim(level)?))?;
                th.verify(depth)?;
                Ok(th)
            };
            projections.record((|| {
                let a = random_thread(rng)?;
                let image = a.map_through(&t, &target);
                image.verify(depth)?;
                for k in 1..=depth {
                    if image.projection(k)? != t.at(k)?.apply(&a.projection(k)?)? {
                        return Ok(Some(json!({ "thread": a.prefix(depth)?, "level": k })));
                    }
                }
                Ok(None)
            })());
            lim_iso.record((|| {
                let (a, b) = (random_thread(rng)?, random_thread(rng)?);
                let round = a.map_through(&t, &target).map_through(&back, &s);
                round.verify(depth)?;
                let joined = a.join(&b)?.map_through(&t, &target);
                let separate = a
                    .map_through(&t, &target)
                    .join(&b.map_through(&t, &target))?;
                let ok = round.equal_upto(&a, depth)? && joined.equal_upto(&separate, depth)?;
                ensure(
                    ok,
                    || json!({ "a": a.prefix(depth).ok(), "b": b.prefix(depth).ok() }),
                )
            })());
        }
    }
    vec![squares, embeddings, colim_iso, projections, lim_iso]
}
