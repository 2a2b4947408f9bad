use rand::Rng;
use serde_json::json;

use super::oracle::{lattice_probes, preserves_joins, vanishes_on};
use super::{ensure, Config, Outcome, Prop};
use crate::feasibility::{box_feasible, Method};
use crate::hom::{
    canonicalize, interval_preserving_oracle, interval_witness, CanonicalHom, PositiveMatrix,
};
use crate::random::{self, Gen};
use crate::scalar::Scalar;
use crate::vector::FinVector;

const PROBES: usize = 20;
const MAX_DIM: usize = 6;

fn dbg(h: &CanonicalHom) -> String {
    format!("{h:?}")
}

/// `0 <= v <= A u` with `v_x = t_x (A u)_x`, `t_x ∈ {0, 1/4, ..., 1}`.
fn probe(rng: &mut Gen, a: &PositiveMatrix) -> (FinVector, FinVector) {
    let u = random::nonnegative_vector(rng, a.cols());
    let au = a.apply(&u).expect("dims match");
    let v = FinVector::new(
        au.coords()
            .iter()
            .map(|c| c * &Scalar::ratio(rng.gen_range(0..=4), 4))
            .collect(),
    )
    .expect("nonempty");
    (u, v)
}

fn oracle_on_probes(rng: &mut Gen, a: &PositiveMatrix) -> Outcome {
    for _ in 0..PROBES {
        let (u, v) = probe(rng, a);
        if !interval_preserving_oracle(a, &u, &v)? {
            return Ok(Some(json!({ "matrix": format!("{a:?}"), "u": u, "v": v })));
        }
    }
    Ok(None)
}

pub(super) fn adjoints(cfg: &Config) -> Vec<Prop> {
    let mut positive = Prop::new("adjoint_is_positive");
    let mut pairing = Prop::new("adjoint_pairing_identity");
    let mut involution = Prop::new("adjoint_is_involutive");
    let mut homomorphism = Prop::new("apply_preserves_join_and_meet");
    let mut ip_to_hom = Prop::new("interval_preserving_adjoint_is_lattice_hom");
    let mut hom_to_ip = Prop::new("lattice_hom_adjoint_is_interval_preserving");
    let mut annihilator = Prop::new("adjoint_image_is_annihilator_of_kernel");

    for trial in 0..cfg.trials {
        let rng = &mut random::trial_generator(cfg.seed, trial as u64);
        let (n, m) = (rng.gen_range(1..=MAX_DIM), rng.gen_range(1..=MAX_DIM));
        let h = random::canonical_hom(rng, n, m);
        let adj = h.adjoint();

        positive.record(ensure(
            adj.matrix().entries().iter().all(|x| !x.is_negative()),
            || json!(dbg(&h)),
        ));

        pairing.record((|| {
            let (phi, u) = (random::vector(rng, m), random::vector(rng, n));
            let lhs = adj.apply(&phi)?.dot(&u)?;
            let rhs = phi.dot(&h.apply(&u)?)?;
            ensure(lhs == rhs, || json!({ "hom": dbg(&h), "phi": phi, "u": u }))
        })());

        involution.record(ensure(adj.transpose() == h.to_matrix(), || json!(dbg(&h))));

        homomorphism.record((|| {
            let (u, v) = (random::vector(rng, n), random::vector(rng, n));
            let join_ok = h.apply(&u.join(&v)?)? == h.apply(&u)?.join(&h.apply(&v)?)?;
            let meet_ok = h.apply(&u.meet(&v)?)? == h.apply(&u)?.meet(&h.apply(&v)?)?;
            ensure(
                join_ok && meet_ok,
                || json!({ "hom": dbg(&h), "u": u, "v": v }),
            )
        })());

        if h.is_interval_preserving() {
            ip_to_hom.record((|| {
                let canonical = canonicalize(&adj).is_ok();
                let brute = preserves_joins(adj.matrix(), &lattice_probes(m))?;
                ensure(
                    canonical && brute,
                    || json!({ "hom": dbg(&h), "canonicalizes": canonical, "joins": brute }),
                )
            })());
        }

        hom_to_ip.record(
            oracle_on_probes(rng, &adj).map(|r| r.map(|ce| json!({ "hom": dbg(&h), "probe": ce }))),
        );

        // ψ lies in the image of the adjoint iff it vanishes on ker h.
        let s = random::surjective_hom(rng, n.max(m), n.min(m));
        annihilator.record((|| {
            let a = s.to_matrix();
            let kernel = a.matrix().kernel_basis();
            let adj = s.adjoint();
            let in_image = adj.apply(&random::vector(rng, s.cod_dim()))?;
            let arbitrary = random::vector(rng, s.dom_dim());
            for psi in [in_image, arbitrary] {
                let solvable = adj.matrix().solve(psi.coords())?.is_some();
                if solvable != vanishes_on(&psi, &kernel)? {
                    return Ok(Some(
                        json!({ "hom": dbg(&s), "psi": psi, "in_image": solvable }),
                    ));
                }
            }
            Ok(None)
        })());
    }
    vec![
        positive,
        pairing,
        involution,
        homomorphism,
        ip_to_hom,
        hom_to_ip,
        annihilator,
    ]
}

pub(super) fn interval_oracle(cfg: &Config) -> Vec<Prop> {
    let mut agreement = Prop::new("predicate_implies_oracle_feasible");
    let mut witness = Prop::new("violation_witness_is_infeasible");
    let mut methods = Prop::new("fourier_motzkin_agrees_with_simplex");
    let mut image_band = Prop::new("injective_ip_image_is_band");
    let mut preimage = Prop::new("preimage_inverts_apply");

    for trial in 0..cfg.trials {
        let rng = &mut random::trial_generator(cfg.seed, trial as u64);
        let (n, m) = (rng.gen_range(1..=MAX_DIM), rng.gen_range(1..=MAX_DIM));
        let h = random::canonical_hom(rng, n, m);
        let a = h.to_matrix();

        if h.is_interval_preserving() {
            agreement.record(
                oracle_on_probes(rng, &a)
                    .map(|r| r.map(|ce| json!({ "hom": dbg(&h), "probe": ce }))),
            );
        } else {
            witness.record((|| match h.interval_violation() {
                Some((u, v)) => {
                    let feasible = interval_preserving_oracle(&a, &u, &v)?;
                    ensure(!feasible, || json!({ "hom": dbg(&h), "u": u, "v": v }))
                }
                None => Ok(Some(json!({ "hom": dbg(&h), "missing": "witness" }))),
            })());
        }

        methods.record((|| {
            // Targets need not lie below A u here, so both outcomes occur.
            let u = random::nonnegative_vector(rng, n);
            let v = random::nonnegative_vector(rng, m);
            let fm = box_feasible(a.matrix(), u.coords(), v.coords(), Method::FourierMotzkin)?;
            let sx = box_feasible(a.matrix(), u.coords(), v.coords(), Method::Simplex)?;
            let valid = |x: &Option<Vec<Scalar>>| -> crate::Result<bool> {
                Ok(match x {
                    None => true,
                    Some(x) => {
                        let x = FinVector::new(x.clone())?;
                        x.is_positive() && x.leq(&u)? && a.apply(&x)? == v
                    }
                })
            };
            let ok = fm.is_some() == sx.is_some() && valid(&fm)? && valid(&sx)?;
            ensure(ok, || json!({ "hom": dbg(&h), "u": u, "v": v }))
        })());

        // Injective interval preserving maps.
        let k = rng.gen_range(1..=5);
        let m = rng.gen_range(k..=MAX_DIM);
        let g = random::injective_ip_hom(rng, k, m);
        image_band.record((|| {
            let Some(band) = g.image_band() else {
                return Ok(Some(json!({ "hom": dbg(&g), "missing": "image band" })));
            };
            // Every unit of the band is hit, and images stay inside it.
            let mut ok = band.len() == k;
            for &x in band.support() {
                ok &= g.preimage(&FinVector::unit(g.cod_dim(), x))?.is_some();
            }
            let u = random::vector(rng, k);
            ok &= g.apply(&u)?.support().is_subset(band.support());
            // A lattice isomorphism onto the band.
            let v = random::vector(rng, k);
            ok &= g.apply(&u.join(&v)?)? == g.apply(&u)?.join(&g.apply(&v)?)?;
            ok &= interval_witness(
                &g.to_matrix(),
                &u.abs(),
                &g.apply(&u.pos_part())?,
                Method::Simplex,
            )?
            .is_some();
            ensure(ok, || json!({ "hom": dbg(&g), "band": band }))
        })());
        preimage.record((|| {
            let u = random::vector(rng, k);
            let image = g.apply(&u)?;
            let back = g.preimage(&image)?;
            let solved = g
                .to_matrix()
                .matrix()
                .solve(image.coords())?
                .map(FinVector::new)
                .transpose()?;
            let ok = back.as_ref() == Some(&u) && solved.as_ref() == Some(&u);
            ensure(ok, || json!({ "hom": dbg(&g), "u": u }))
        })());
    }
    vec![agreement, witness, methods, image_band, preimage]
}
