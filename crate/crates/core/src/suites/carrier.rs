use rand::Rng;
use serde_json::{json, Value};

use super::{ensure, Config, Prop};
use crate::band::Band;
use crate::carrier::{
    self as c, band_limit, c00, finite_carrier_limit_iso, pm_map, pm_order_dense_witness,
    pm_preimage, Model, ModelElement, Preimage,
};
use crate::colimit::ColimElement;
use crate::error::Result;
use crate::limit::{BuiltinRule, Thread};
use crate::random::{self, Gen};
use crate::system::SequentialSystem;
use crate::vector::FinVector;

/// A positive compatible family over `{1..k}`, verified to `depth`.
fn random_family(rng: &mut Gen, depth: usize) -> Result<Thread> {
    let t = match rng.gen_range(0..4) {
        0 => Thread::builtin(band_limit(), BuiltinRule::Ones),
        1 => Thread::builtin(band_limit(), BuiltinRule::Harmonic),
        _ => {
            let level = rng.gen_range(1..=depth);
            Thread::section(band_limit(), level, random::vector(rng, level))?
        }
    };
    t.verify(depth)?;
    Ok(t)
}

pub(super) fn pm_scenarios(cfg: &Config) -> Vec<Prop> {
    let depth = cfg.depth;
    let mut romega = Prop::new("romega_families_have_preimages");
    let mut gap = Prop::new("c00_ones_family_not_in_image");
    let mut c00_round_trip = Prop::new("c00_germ_families_recover_the_germ");
    let mut dense = Prop::new("order_dense_witness_lies_below_family");
    let mut hom = Prop::new("pm_map_is_lattice_hom");
    let mut compatible = Prop::new("pm_map_compatible_with_band_projections");

    // One fixed scenario: the all-ones family against every support bound.
    let ones = Thread::builtin(band_limit(), BuiltinRule::Ones);
    gap.record((|| {
        ones.verify(depth + 1)?;
        for bound in 1..=depth {
            match pm_preimage(Model::C00, &ones, bound)? {
                Preimage::NotInImage { level, coordinate }
                    if level == bound + 1 && coordinate == bound + 1 => {}
                other => {
                    return Ok(Some(
                        json!({ "bound": bound, "outcome": format!("{other:?}") }),
                    ))
                }
            }
        }
        Ok(None)
    })());

    for trial in 0..cfg.trials {
        let rng = &mut random::trial_generator(cfg.seed, trial as u64);

        romega.record((|| {
            let t = random_family(rng, depth)?;
            let Preimage::Found(u) = pm_preimage(Model::ROmega, &t, depth)? else {
                return Ok(Some(json!({ "family": t.prefix(depth)? })));
            };
            let back = pm_map(Model::ROmega, &u)?
                .thread()
                .expect("sequential")
                .clone();
            ensure(
                back.equal_upto(&t, depth)?,
                || json!({ "family": t.prefix(depth).ok() }),
            )
        })());

        c00_round_trip.record((|| {
            let level = rng.gen_range(1..=depth);
            let germ = ColimElement::embed(c00(), level, random::vector(rng, level))?;
            let t = pm_map(Model::C00, &ModelElement::C00(germ.clone()))?
                .thread()
                .expect("sequential")
                .clone();
            t.verify(depth + 1)?;
            match pm_preimage(Model::C00, &t, level)? {
                Preimage::Found(ModelElement::C00(back)) => {
                    ensure(back.equal(&germ)?, || json!({ "germ": germ.to_repr() }))
                }
                other => Ok(Some(
                    json!({ "germ": germ.to_repr(), "outcome": format!("{other:?}") }),
                )),
            }
        })());

        dense.record((|| {
            let t = random_family(rng, depth)?.abs();
            if (1..=depth).all(|k| t.projection(k).map(|c| c.is_zero()).unwrap_or(false)) {
                return Ok(None);
            }
            let v = pm_order_dense_witness(&t, depth)?;
            let image = pm_map(Model::C00, &ModelElement::C00(v.clone()))?
                .thread()
                .expect("sequential")
                .clone();
            let mut ok = !v.is_zero()?;
            for k in 1..=depth {
                let ck = image.projection(k)?;
                ok &= ck.is_positive() && ck.leq(&t.projection(k)?)?;
            }
            ensure(
                ok,
                || json!({ "family": t.prefix(depth).ok(), "witness": v.to_repr() }),
            )
        })());

        hom.record((|| {
            let n = rng.gen_range(1..=6);
            let (u, v) = (random::vector(rng, n), random::vector(rng, n));
            let model = Model::Finite(n);
            let map = |x: &FinVector| pm_map(model, &ModelElement::Finite(x.clone()));
            let (pu, pv, pj, pm) = (map(&u)?, map(&v)?, map(&u.join(&v)?)?, map(&u.meet(&v)?)?);
            for band in Band::all(n) {
                let (a, b) = (pu.component(&band)?, pv.component(&band)?);
                if pj.component(&band)? != a.join(&b)? || pm.component(&band)? != a.meet(&b)? {
                    return Ok(Some(json!({ "u": u, "v": v, "band": band })));
                }
            }
            // The c00 model, through germs at different levels.
            let (l1, l2) = (rng.gen_range(1..=depth), rng.gen_range(1..=depth));
            let a = ColimElement::embed(c00(), l1, random::vector(rng, l1))?;
            let b = ColimElement::embed(c00(), l2, random::vector(rng, l2))?;
            let image = |g: &ColimElement| -> Result<Thread> {
                Ok(pm_map(Model::C00, &ModelElement::C00(g.clone()))?
                    .thread()
                    .expect("sequential")
                    .clone())
            };
            let joined = image(&a.join(&b)?)?;
            let separate = image(&a)?.join(&image(&b)?)?;
            ensure(
                joined.equal_upto(&separate, depth)?,
                || json!({ "a": a.to_repr(), "b": b.to_repr() }),
            )
        })());

        compatible.record((|| {
            let n = rng.gen_range(1..=4);
            let u = random::vector(rng, n);
            let fam = pm_map(Model::Finite(n), &ModelElement::Finite(u.clone()))?;
            for small in Band::all(n) {
                for big in Band::all(n) {
                    if small.is_subband_of(&big)?
                        && small.project(&fam.component(&big)?)? != fam.component(&small)?
                    {
                        return Ok(Some(json!({ "u": u, "small": small, "big": big })));
                    }
                }
            }
            let t = pm_map(
                Model::C00,
                &ModelElement::C00(ColimElement::embed(c00(), n, u.clone())?),
            )?;
            let t = t.thread().expect("sequential");
            t.verify(depth)?;
            ensure(band_limit().same_system(t.system()), || json!({ "u": u }))
        })());
    }
    vec![romega, gap, c00_round_trip, dense, hom, compatible]
}

pub(super) fn disjointify(cfg: &Config) -> Vec<Prop> {
    let mut disjoint = Prop::new("parts_are_disjoint");
    let mut below_phi = Prop::new("first_part_below_phi");
    let mut below_psi = Prop::new("second_part_below_psi");
    let mut supremum = Prop::new("supremum_is_preserved");
    let mut carriers = Prop::new("positive_on_carrier");
    let mut separating = Prop::new("band_restriction_separates");

    for trial in 0..cfg.trials {
        let rng = &mut random::trial_generator(cfg.seed, trial as u64);
        let n = rng.gen_range(1..=8);
        let (phi, psi) = (
            random::nonnegative_vector(rng, n),
            random::nonnegative_vector(rng, n),
        );
        let ce = || json!({ "phi": phi, "psi": psi });
        match c::disjointify(&phi, &psi) {
            Ok((p, q)) => {
                disjoint.record(
                    p.meet(&q)
                        .map(|m| m.is_zero())
                        .and_then(|ok| ensure(ok, ce)),
                );
                below_phi.record(p.leq(&phi).and_then(|ok| ensure(ok, ce)));
                below_psi.record(q.leq(&psi).and_then(|ok| ensure(ok, ce)));
                supremum.record((|| ensure(p.join(&q)? == phi.join(&psi)?, ce))());
            }
            Err(e) => {
                for p in [&mut disjoint, &mut below_phi, &mut below_psi, &mut supremum] {
                    p.record(Err(e.clone()));
                }
            }
        }

        carriers.record((|| {
            let (car, null) = (c::carrier(&phi), c::null_ideal(&phi));
            let partition = car.meet(&null)?.is_empty() && car.join(&null)?.is_full();
            let positive = car.support().iter().all(|&i| phi.get(i).is_positive());
            ensure(partition && positive, || json!({ "phi": phi }))
        })());

        separating.record((|| {
            let strict = FinVector::new((0..n).map(|_| random::positive_scalar(rng)).collect())?;
            let u = random::vector(rng, n);
            if u.is_zero() {
                return Ok(None);
            }
            let eta = c::separating_restriction(&strict, &u)?;
            let ok = eta.is_positive() && eta.leq(&strict)? && !eta.dot(&u)?.is_zero();
            ensure(ok, || json!({ "phi": strict, "u": u }))
        })());
    }
    vec![
        disjoint, below_phi, below_psi, supremum, carriers, separating,
    ]
}

pub(super) fn finite_iso() -> Result<(Vec<Prop>, Value)> {
    let mut carriers = Prop::new("bands_are_carriers_of_positive_functionals");
    let mut ideal = Prop::new("carriers_form_an_ideal_of_bands");
    let mut onto = Prop::new("pm_is_bijective_onto_compatible_families");
    let mut lattice = Prop::new("pm_and_inverse_are_lattice_homs");
    let mut tables = Vec::new();
    for n in 1..=3 {
        let r = finite_carrier_limit_iso(n)?;
        let ce = || json!({ "n": n });
        carriers.record(ensure(r.bands_are_carriers, ce));
        ideal.record(ensure(r.bands_form_ideal, ce));
        onto.record(ensure(
            r.family_space_dim == n && r.pm_rank == n && r.pm_lands_in_families,
            || json!({ "n": n, "family_space_dim": r.family_space_dim, "rank": r.pm_rank }),
        ));
        lattice.record(ensure(
            r.pm_is_lattice_hom && r.inverse_is_lattice_hom && r.joins_preserved,
            ce,
        ));
        tables.push(json!({ "n": n, "bands": r.table }));
    }
    Ok((vec![carriers, ideal, onto, lattice], Value::Array(tables)))
}
