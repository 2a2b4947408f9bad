use rand::Rng;
use serde_json::json;

use super::oracle::riesz_kantorovich_sup;
use super::{ensure, Config, Outcome, Prop};
use crate::colimit::ColimElement;
use crate::duality::{
    majorant_upto, majorises_upto, separating_germ, separating_thread,
    truncated_sum_product_duality, ColimFunctional, LimFunctional,
};
use crate::error::Result;
use crate::limit::Thread;
use crate::random::{self, Gen};
use crate::system::{DirectSystem, InverseSystem, SequentialSystem};
use crate::vector::FinVector;

/// Largest level dimension handled by vertex enumeration.
const BRUTE_DIM: usize = 3;

/// A verified thread of `s` through a random vector at a random level.
fn random_section(rng: &mut Gen, s: &InverseSystem, depth: usize) -> Result<Thread> {
    let level = rng.gen_range(1..=depth);
    let t = Thread::section(s, level, random::vector(rng, s.dim(level)?))?;
    t.verify(depth)?;
    Ok(t)
}

fn random_germ(rng: &mut Gen, s: &DirectSystem, depth: usize) -> Result<ColimElement> {
    let level = rng.gen_range(1..=depth);
    ColimElement::embed(s, level, random::vector(rng, s.dim(level)?))
}

pub(super) fn colimit(cfg: &Config) -> Vec<Prop> {
    let depth = cfg.depth;
    let mut independence = Prop::new("evaluation_is_representative_independent");
    let mut injective = Prop::new("nonzero_dual_thread_has_basis_germ_witness");
    let mut round_trip = Prop::new("evaluator_round_trip_is_identity");
    let mut lattice = Prop::new("join_matches_riesz_kantorovich_supremum");
    let mut separation = Prop::new("nonzero_germ_is_separated");

    let fixed = [
        DirectSystem::inclusion_chain(1),
        DirectSystem::inclusion_chain(2),
    ];
    for trial in 0..fixed.len() + cfg.trials {
        let rng = &mut random::trial_generator(cfg.seed, trial as u64);
        let s = match fixed.get(trial) {
            Some(s) => s.clone(),
            None => random::injective_ip_chain(rng, depth),
        };
        let case = |rng: &mut Gen| -> Result<(InverseSystem, ColimFunctional, ColimFunctional)> {
            let dual = s.dual()?;
            let phi = ColimFunctional::new(&s, random_section(rng, &dual, depth)?)?;
            let psi = ColimFunctional::new(&s, random_section(rng, &dual, depth)?)?;
            Ok((dual, phi, psi))
        };
        let (_, phi, psi) = match case(rng) {
            Ok(c) => c,
            Err(e) => {
                independence.record(Err(e));
                continue;
            }
        };

        independence.record((|| {
            let a = random_germ(rng, &s, depth)?;
            let b = a.promote(rng.gen_range(a.level()..=depth))?;
            let (x, y) = (phi.eval(&a)?, phi.eval(&b)?);
            ensure(
                x == y,
                || json!({ "germ": format!("{a:?}"), "promoted": b.level(), "values": [x, y] }),
            )
        })());

        injective.record((|| {
            for n in 1..=depth {
                let c = phi.thread().projection(n)?;
                if let Some(&j) = c.support().iter().next() {
                    let value =
                        phi.eval(&ColimElement::embed(&s, n, FinVector::unit(c.dim(), j))?)?;
                    return ensure(
                        value == *c.get(j),
                        || json!({ "level": n, "coordinate": j + 1 }),
                    );
                }
            }
            Ok(None)
        })());

        round_trip.record((|| {
            let f = phi.clone();
            let back = ColimFunctional::from_evaluator(&s, move |a| f.eval(a), depth)?;
            ensure(
                back.thread().equal_upto(phi.thread(), depth)?,
                || json!({ "depth": depth }),
            )
        })());

        lattice.record((|| {
            let joined = phi.join(&psi)?;
            for n in 1..=depth {
                let d = s.dim(n)?;
                if d > BRUTE_DIM {
                    break;
                }
                let a = ColimElement::embed(&s, n, random::nonnegative_vector(rng, d))?;
                let lhs = joined.eval(&a)?;
                // Splittings at every later level small enough to enumerate.
                for m in n..=depth {
                    if s.dim(m)? > BRUTE_DIM {
                        break;
                    }
                    let am = a.promote(m)?;
                    let (pm, qm) = (phi.thread().projection(m)?, psi.thread().projection(m)?);
                    let rhs = riesz_kantorovich_sup(&pm, &qm, am.vector())?;
                    if lhs != rhs {
                        return Ok(Some(json!({ "germ": format!("{a:?}"), "level": m, "join": lhs, "sup": rhs })));
                    }
                }
            }
            Ok(None)
        })());

        separation.record((|| {
            let a = random_germ(rng, &s, depth)?;
            if a.is_zero()? {
                return Ok(None);
            }
            match separating_thread(&a, depth)? {
                Some(phi) => ensure(
                    !phi.eval(&a)?.is_zero(),
                    || json!({ "germ": format!("{a:?}") }),
                ),
                None => Ok(Some(
                    json!({ "germ": format!("{a:?}"), "missing": "separating thread" }),
                )),
            }
        })());
    }
    vec![independence, injective, round_trip, lattice, separation]
}

pub(super) fn limit(cfg: &Config) -> Vec<Prop> {
    let depth = cfg.depth;
    let mut sections = Prop::new("section_projects_to_seed");
    let mut well_defined = Prop::new("dual_germ_evaluation_is_well_defined");
    let mut distinct = Prop::new("germ_distinct_functionals_differ_on_a_section");
    let mut separation = Prop::new("nonzero_thread_is_separated");
    let mut majorant = Prop::new("finite_families_are_majorised");

    let fixed = [
        InverseSystem::restriction_chain(1),
        InverseSystem::restriction_chain(2),
    ];
    for trial in 0..fixed.len() + cfg.trials {
        let rng = &mut random::trial_generator(cfg.seed, trial as u64);
        let s = match fixed.get(trial) {
            Some(s) => s.clone(),
            None => random::surjective_chain(rng, depth),
        };

        sections.record((|| {
            let level = rng.gen_range(1..=depth);
            let u = random::vector(rng, s.dim(level)?);
            let t = Thread::section(&s, level, u.clone())?;
            t.verify(depth)?;
            ensure(
                t.projection(level)? == u,
                || json!({ "level": level, "seed": u }),
            )
        })());

        well_defined.record((|| {
            let level = rng.gen_range(1..=depth);
            let psi = LimFunctional::new(&s, level, random::vector(rng, s.dim(level)?))?;
            let later = psi.promote(rng.gen_range(level..=depth))?;
            if !psi.equal(&later)? {
                return Ok(Some(
                    json!({ "germ": psi.to_wire(), "reason": "promotion changed the germ" }),
                ));
            }
            for _ in 0..5 {
                let t = random_section(rng, &s, depth)?;
                if psi.eval(&t)? != later.eval(&t)? {
                    return Ok(Some(
                        json!({ "germ": psi.to_wire(), "promoted": later.level() }),
                    ));
                }
            }
            Ok(None)
        })());

        distinct.record((|| {
            let (l1, l2) = (rng.gen_range(1..=depth), rng.gen_range(1..=depth));
            let a = LimFunctional::new(&s, l1, random::vector(rng, s.dim(l1)?))?;
            let b = LimFunctional::new(&s, l2, random::vector(rng, s.dim(l2)?))?;
            if a.equal(&b)? {
                return Ok(None);
            }
            // Zero extension of a unit vector where the difference is nonzero.
            let diff = a.sub(&b)?;
            let m = diff.level();
            let Some(&j) = diff.germ().vector().support().iter().next() else {
                return Ok(Some(
                    json!({ "reason": "distinct germs with zero difference" }),
                ));
            };
            let w = Thread::section(&s, m, FinVector::unit(s.dim(m)?, j))?;
            w.verify(depth)?;
            ensure(
                a.eval(&w)? != b.eval(&w)?,
                || json!({ "a": a.to_wire(), "b": b.to_wire() }),
            )
        })());

        separation.record((|| {
            let t = random_section(rng, &s, depth)?;
            let nonzero = (1..=depth)
                .map(|k| t.projection(k))
                .collect::<Result<Vec<_>>>()?
                .iter()
                .any(|c| !c.is_zero());
            match separating_germ(&t, depth)? {
                Some(psi) => ensure(
                    !psi.eval(&t)?.is_zero(),
                    || json!({ "thread": t.prefix(depth).ok() }),
                ),
                None => ensure(
                    !nonzero,
                    || json!({ "thread": t.prefix(depth).ok(), "missing": "separating germ" }),
                ),
            }
        })());

        majorant.record((|| {
            let xs = (1..=depth)
                .map(|k| Ok(random::vector(rng, s.dim(k)?)))
                .collect::<Result<Vec<_>>>()?;
            let t = majorant_upto(&s, &xs)?;
            ensure(majorises_upto(&t, &xs)?, || json!({ "family": xs }))
        })());
    }
    vec![sections, well_defined, distinct, separation, majorant]
}

pub(super) fn sum_product(cfg: &Config) -> Vec<Prop> {
    let mut s_then_t = Prop::new("s_after_t_is_identity");
    let mut t_then_s = Prop::new("t_after_s_is_identity");
    let mut homs = Prop::new("s_and_t_are_lattice_homs");
    let mut pairing = Prop::new("pairing_is_consistent");

    let fixed: [&[usize]; 2] = [&[1, 1, 1], &[2]];
    for trial in 0..fixed.len() + cfg.trials {
        let rng = &mut random::trial_generator(cfg.seed, trial as u64);
        let dims: Vec<usize> = match fixed.get(trial) {
            Some(d) => d.to_vec(),
            None => (0..rng.gen_range(1..=5))
                .map(|_| rng.gen_range(1..=4))
                .collect(),
        };
        let report = truncated_sum_product_duality(&dims);
        let field = |p: &mut Prop, pick: fn(&crate::duality::SumProductReport) -> bool| {
            let outcome: Outcome = match &report {
                Ok(r) => ensure(pick(r), || json!({ "dims": dims })),
                Err(e) => Err(e.clone()),
            };
            p.record(outcome);
        };
        field(&mut s_then_t, |r| r.s_after_t_is_identity);
        field(&mut t_then_s, |r| r.t_after_s_is_identity);
        field(&mut homs, |r| r.s_is_lattice_hom && r.t_is_lattice_hom);
        field(&mut pairing, |r| r.pairing_consistent);
    }
    vec![s_then_t, t_then_s, homs, pairing]
}
