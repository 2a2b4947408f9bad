//! Worked scenarios behind `riesz-limits demo`.

use crate::carrier::{
    band_limit, c00, perfect_certificate, pm_map, pm_preimage, Model, ModelElement, Preimage,
};
use crate::colimit::ColimElement;
use crate::duality::{separating_thread, ColimFunctional};
use crate::error::{Error, Result};
use crate::hom::CanonicalHom;
use crate::limit::{BuiltinRule, Thread};
use crate::scalar::Scalar;
use crate::system::{DirectSystem, FnGenerator, SequentialSystem};
use crate::vector::FinVector;

pub const DEMOS: [&str; 4] = ["romega-pm", "c00-pm-gap", "lp-blocks", "c00-dual"];

pub fn run(name: &str, depth: usize) -> Result<String> {
    if depth == 0 {
        return Err(Error::PreconditionViolated(
            "depth must be at least 1".into(),
        ));
    }
    match name {
        "romega-pm" => romega_pm(depth),
        "c00-pm-gap" => c00_pm_gap(depth),
        "lp-blocks" => lp_blocks(depth),
        "c00-dual" => c00_dual(depth),
        other => Err(Error::UnknownDemo(other.to_string())),
    }
}

fn line(out: &mut String, text: impl AsRef<str>) {
    out.push_str(text.as_ref());
    out.push('\n');
}

fn romega_pm(depth: usize) -> Result<String> {
    let mut out = String::new();
    line(
        &mut out,
        "Band projections P_k onto {1..k} send a sequence u to the family (u_1..u_k)_k.",
    );
    line(
        &mut out,
        "Every compatible family comes from a sequence: read off the diagonal.",
    );
    let harmonic = Thread::builtin(band_limit(), BuiltinRule::Harmonic);
    let cut = Thread::section(band_limit(), 3, FinVector::from_ints(&[2, -1, 5]))?;
    for (label, t) in [("harmonic", harmonic), ("section through (2, -1, 5)", cut)] {
        t.verify(depth)?;
        line(
            &mut out,
            format!("\nfamily: {label}, verified to depth {depth}"),
        );
        for k in 1..=depth.min(4) {
            line(&mut out, format!("  component {k}: {}", t.projection(k)?));
        }
        let Preimage::Found(u) = pm_preimage(Model::ROmega, &t, depth)? else {
            return Err(Error::PreconditionViolated("no preimage in R^ω".into()));
        };
        let ModelElement::Sequence(seq) = &u else {
            unreachable!("R^ω preimages are sequences")
        };
        line(
            &mut out,
            format!(
                "  reconstructed sequence, first {depth} terms: {}",
                seq.prefix(depth)?
            ),
        );
        let back = pm_map(Model::ROmega, &u)?
            .thread()
            .expect("sequential")
            .clone();
        let same = back.equal_upto(&t, depth)?;
        line(
            &mut out,
            format!(
                "  P_M of the sequence agrees with the family up to depth {depth}: {}",
                yes(same)
            ),
        );
    }
    Ok(out)
}

fn c00_pm_gap(depth: usize) -> Result<String> {
    let mut out = String::new();
    line(
        &mut out,
        "The all-ones family (1..1)_k is compatible for the bands {1..k}.",
    );
    line(&mut out, "A finitely supported preimage with support in {1..K} would need component K+1 to vanish at K+1.");
    let ones = Thread::builtin(band_limit(), BuiltinRule::Ones);
    ones.verify(depth + 1)?;
    for k in 1..=depth.min(4) {
        line(
            &mut out,
            format!("  component {k}: {}", ones.projection(k)?),
        );
    }
    for bound in 1..=depth {
        match pm_preimage(Model::C00, &ones, bound)? {
            Preimage::NotInImage { level, coordinate } => line(
                &mut out,
                format!("  support bound {bound}: not in image, component {level} is 1 at coordinate {coordinate}"),
            ),
            Preimage::Found(_) => line(&mut out, format!("  support bound {bound}: unexpected preimage")),
        }
    }
    line(
        &mut out,
        "So the all-ones family lies outside P_M[c00], although every family lies in P_M[R^ω].",
    );
    Ok(out)
}

/// `R^{2k}` at level `k`: counting measure on the first `k` blocks of two
/// points each, with the block inclusions.
fn block_system() -> DirectSystem {
    DirectSystem::from_generator(FnGenerator::new(
        |k| Ok(2 * k),
        |k| Ok(CanonicalHom::inclusion(2 * k, 2 * k + 2)),
    ))
}

fn lp_blocks(depth: usize) -> Result<String> {
    let mut out = String::new();
    line(
        &mut out,
        "Functions supported on finitely many blocks of two points, with counting measure.",
    );
    line(
        &mut out,
        "Level k is R^(2k); the steps include level k as the first k blocks of level k+1.",
    );
    line(
        &mut out,
        "Dual steps are the adjoints, restricting a functional to the first k blocks.",
    );
    let s = block_system();
    let dual = s.dual()?;
    let harmonic = Thread::builtin(&dual, BuiltinRule::Harmonic);
    harmonic.verify(depth)?;
    let phi = ColimFunctional::new(&s, harmonic)?;
    line(
        &mut out,
        "\nsquare at each level: <e~ φ_(k+1), u> = <φ_(k+1), e u> with φ harmonic, u = (1, 2, ..)",
    );
    for k in 1..depth.min(5) {
        let u = FinVector::new((1..=2 * k).map(|i| Scalar::from_int(i as i64)).collect())?;
        let e = s.step(k)?;
        let phi_next = phi.thread().projection(k + 1)?;
        let left = e.adjoint().apply(&phi_next)?.dot(&u)?;
        let right = phi_next.dot(&e.apply(&u)?)?;
        line(
            &mut out,
            format!(
                "  level {k}: {} = {}  {}",
                left.to_literal(),
                right.to_literal(),
                yes(left == right)
            ),
        );
    }
    let a = ColimElement::embed(&s, 2, FinVector::from_ints(&[1, 2, 3, 4]))?;
    let far = a.promote(depth.max(2))?;
    line(
        &mut out,
        format!(
            "evaluation of φ on {:?} at levels 2 and {}: {} and {}",
            a,
            far.level(),
            phi.eval(&a)?.to_literal(),
            phi.eval(&far)?.to_literal()
        ),
    );
    match perfect_certificate(&s, depth, 4) {
        Ok(cert) => line(
            &mut out,
            format!(
                "perfect certificate: issued to depth {}, bidual checks {}",
                cert.depth,
                pass(cert.all_checks_pass())
            ),
        ),
        Err(e) => line(&mut out, format!("perfect certificate: {e}")),
    }
    Ok(out)
}

fn c00_dual(depth: usize) -> Result<String> {
    let mut out = String::new();
    line(
        &mut out,
        "c00 is the direct limit of R^1 -> R^2 -> ... by coordinate inclusions.",
    );
    line(
        &mut out,
        "Its order dual is the inverse limit of the restrictions, i.e. all sequences.",
    );
    let s = c00();
    let a = ColimElement::embed(s, 3, FinVector::from_ints(&[1, 2, 3]))?;
    for rule in [BuiltinRule::Ones, BuiltinRule::Harmonic] {
        let t = Thread::builtin(&s.dual()?, rule);
        t.verify(depth.max(3))?;
        let phi = ColimFunctional::new(s, t)?;
        line(
            &mut out,
            format!(
                "  {} functional on {:?}: {}",
                rule.name(),
                a,
                phi.eval(&a)?.to_literal()
            ),
        );
    }
    let sum = ColimFunctional::from_evaluator(
        s,
        |g| Ok(g.vector().coords().iter().cloned().sum()),
        depth,
    )?;
    let ones = Thread::builtin(&s.dual()?, BuiltinRule::Ones);
    line(
        &mut out,
        format!(
            "  'sum of coordinates' as a dual thread equals the ones thread to depth {depth}: {}",
            yes(sum.thread().equal_upto(&ones, depth)?)
        ),
    );
    let b = ColimElement::embed(s, 4, FinVector::from_ints(&[0, 0, -2, 0]))?;
    if let Some(sep) = separating_thread(&b, depth)? {
        line(
            &mut out,
            format!(
                "  separating functional for {:?} takes the value {}",
                b,
                sep.eval(&b)?.to_literal()
            ),
        );
    }
    match perfect_certificate(s, depth, 4) {
        Ok(cert) => line(
            &mut out,
            format!(
                "perfect certificate: issued to depth {}, bidual checks {}",
                cert.depth,
                pass(cert.all_checks_pass())
            ),
        ),
        Err(e) => line(&mut out, format!("perfect certificate: {e}")),
    }
    Ok(out)
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn pass(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "fail"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_demos_run() {
        for name in DEMOS {
            let text = run(name, 6).unwrap();
            assert!(
                !text.contains(" no\n") && !text.contains("fail"),
                "{name}:\n{text}"
            );
        }
        assert_eq!(
            run("nosuch", 3).unwrap_err(),
            Error::UnknownDemo("nosuch".into())
        );
    }

    #[test]
    fn gap_lists_every_bound() {
        let text = run("c00-pm-gap", 8).unwrap();
        assert!(text.contains("support bound 8: not in image, component 9 is 1 at coordinate 9"));
    }
}
