//! Null ideals, carriers and the band-ideal inverse system.
//!
//! A functional on `R^n` is a vector acting by the dot product. Its null
//! ideal and carrier are coordinate bands. A directed family of bands `M`
//! gives the map `P_M: u -> (P_B u)_{B in M}` into the inverse limit of the
//! bands; two models are supported:
//!
//! * finite: every coordinate band of `R^N`;
//! * sequential: the bands `{1..k}` of the sequence space, whose compatible
//!   families form the restriction chain. The model space is either all
//!   sequences (`R^ω`, given by coordinate rules) or the finitely supported
//!   ones (`c00`, germs of the inclusion chain).

use std::collections::BTreeSet;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::band::Band;
use crate::colimit::ColimElement;
use crate::duality::{ColimFunctional, LimFunctional};
use crate::error::{check_dim, Error, Result};
use crate::hom::{canonicalize, PositiveMatrix};
use crate::limit::Thread;
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::system::{DirectSystem, InverseSystem, SequentialSystem};
use crate::vector::FinVector;

pub type Functional = FinVector;

/// Coordinates where `|φ|` vanishes.
pub fn null_ideal(phi: &Functional) -> Band {
    carrier(phi).complement()
}

/// Support of `|φ|`, the disjoint complement of the null ideal.
pub fn carrier(phi: &Functional) -> Band {
    Band::new(phi.dim(), phi.support()).expect("support lies in range")
}

/// In the coordinate model the annihilator of a band is the complementary
/// band of the dual.
pub fn annihilator(a: &Band) -> Band {
    a.complement()
}

fn require_positive(phi: &Functional, what: &str) -> Result<()> {
    if phi.is_positive() {
        Ok(())
    } else {
        Err(Error::PreconditionViolated(format!(
            "{what} must be positive"
        )))
    }
}

/// Disjoint `φ₁ <= φ`, `ψ₁ <= ψ` with `φ₁ ∨ ψ₁ = φ ∨ ψ`. Each coordinate
/// goes to the larger input; ties go to `φ₁`.
pub fn disjointify(phi: &Functional, psi: &Functional) -> Result<(Functional, Functional)> {
    check_dim(phi.dim(), psi.dim())?;
    require_positive(phi, "φ")?;
    require_positive(psi, "ψ")?;
    let (a, b): (Vec<_>, Vec<_>) = phi
        .coords()
        .iter()
        .zip(psi.coords())
        .map(|(p, q)| {
            if p >= q {
                (p.clone(), Scalar::zero())
            } else {
                (Scalar::zero(), q.clone())
            }
        })
        .unzip();
    Ok((FinVector::new(a)?, FinVector::new(b)?))
}

pub fn strictly_positive(phi: &Functional) -> Result<bool> {
    require_positive(phi, "φ")?;
    Ok(phi.coords().iter().all(Scalar::is_positive))
}

/// For strictly positive `φ` and `u != 0`, the functional `η = φ ∘ P_B` with
/// `B` the carrier of `u⁺` (or of `u⁻` when `u⁺ = 0`). It satisfies
/// `0 <= η <= φ` and `η(u) != 0`.
pub fn separating_restriction(phi: &Functional, u: &FinVector) -> Result<Functional> {
    check_dim(phi.dim(), u.dim())?;
    if !strictly_positive(phi)? {
        return Err(Error::PreconditionViolated(
            "φ must be strictly positive".into(),
        ));
    }
    if u.is_zero() {
        return Err(Error::PreconditionViolated("u must be nonzero".into()));
    }
    let plus = u.pos_part();
    let part = if plus.is_zero() { u.neg_part() } else { plus };
    carrier(&part).project(phi)
}

/// Downward closed and upward directed: an ideal in the Boolean algebra of
/// bands of `R^dim`.
pub fn is_band_ideal(dim: usize, family: &[Band]) -> Result<bool> {
    let members: BTreeSet<Vec<usize>> = family.iter().map(Band::one_based).collect();
    for b in family {
        check_dim(dim, b.dim())?;
        for sub in Band::all(dim) {
            if sub.is_subband_of(b)? && !members.contains(&sub.one_based()) {
                return Ok(false);
            }
        }
        for c in family {
            let upper = b.join(c)?;
            if !family
                .iter()
                .any(|m| upper.is_subband_of(m).unwrap_or(false))
            {
                return Ok(false);
            }
        }
    }
    Ok(!family.is_empty())
}

/// Carriers of all positive functionals on `R^dim`, found by running over
/// the 0/1 functionals (each positive functional has the carrier of one).
pub fn carriers_of_positive_functionals(dim: usize) -> Vec<Band> {
    Band::all(dim)
        .iter()
        .map(|b| carrier(&b.indicator()))
        .collect()
}

/// The model spaces for `P_M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    /// `R^N` with all coordinate bands.
    Finite(usize),
    /// All real sequences with the bands `{1..k}`.
    ROmega,
    /// Finitely supported sequences with the bands `{1..k}`.
    C00,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Finite(_) => "finite",
            Model::ROmega => "romega",
            Model::C00 => "c00",
        }
    }
}

/// The index family `M` of a model.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BandFamily {
    Finite(usize),
    /// `{1..k}` for `k >= 1`, identified with `k`.
    Initial,
}

impl BandFamily {
    pub fn of(model: Model) -> BandFamily {
        match model {
            Model::Finite(n) => BandFamily::Finite(n),
            Model::ROmega | Model::C00 => BandFamily::Initial,
        }
    }

    /// Membership of a band of `R^dim`; for the sequential family `dim` is
    /// any truncation length covering the band.
    pub fn contains(&self, band: &Band) -> bool {
        match self {
            BandFamily::Finite(n) => band.dim() == *n,
            BandFamily::Initial => {
                let k = band.len();
                band.support().iter().copied().eq(0..k)
            }
        }
    }

    /// The members enumerated in a directed order, up to `depth` for the
    /// sequential family.
    pub fn bands_upto(&self, depth: usize) -> Vec<Band> {
        match self {
            BandFamily::Finite(n) => Band::all(*n),
            BandFamily::Initial => (1..=depth).map(Band::full).collect(),
        }
    }
}

/// The inverse system carrying compatible families over the sequential band
/// family: the restriction chain from dimension 1.
pub fn band_limit() -> &'static InverseSystem {
    static SYSTEM: OnceLock<InverseSystem> = OnceLock::new();
    SYSTEM.get_or_init(|| InverseSystem::restriction_chain(1))
}

/// The inclusion chain from dimension 1, whose limit is `c00`.
pub fn c00() -> &'static DirectSystem {
    static SYSTEM: OnceLock<DirectSystem> = OnceLock::new();
    SYSTEM.get_or_init(|| DirectSystem::inclusion_chain(1))
}

/// A sequence given by its coordinates `i -> x_i` (1-based).
#[derive(Clone)]
pub struct Sequence {
    name: String,
    coordinate: Arc<dyn Fn(usize) -> Result<Scalar> + Send + Sync>,
}

impl Sequence {
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(usize) -> Result<Scalar> + Send + Sync + 'static,
    ) -> Self {
        Sequence {
            name: name.into(),
            coordinate: Arc::new(f),
        }
    }

    pub fn ones() -> Self {
        Sequence::new("ones", |_| Ok(Scalar::one()))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn coordinate(&self, i: usize) -> Result<Scalar> {
        (self.coordinate)(i)
    }

    pub fn prefix(&self, k: usize) -> Result<FinVector> {
        FinVector::new((1..=k).map(|i| self.coordinate(i)).collect::<Result<_>>()?)
    }
}

impl fmt::Debug for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sequence({})", self.name)
    }
}

#[derive(Clone, Debug)]
pub enum ModelElement {
    Finite(FinVector),
    Sequence(Sequence),
    C00(ColimElement),
}

/// `P_M u`: the finite model keeps `u` and projects on demand; the
/// sequential models give a thread of [`band_limit`].
#[derive(Clone, Debug)]
pub enum PmFamily {
    Finite(FinVector),
    Sequential(Thread),
}

impl PmFamily {
    /// The component at `band`.
    pub fn component(&self, band: &Band) -> Result<FinVector> {
        match self {
            PmFamily::Finite(u) => {
                check_dim(u.dim(), band.dim())?;
                band.project(u)
            }
            PmFamily::Sequential(t) => {
                if !BandFamily::Initial.contains(band) || band.is_empty() {
                    return Err(Error::ModelMismatch {
                        expected: "a band {1..k}",
                    });
                }
                t.projection(band.len())
            }
        }
    }

    pub fn thread(&self) -> Option<&Thread> {
        match self {
            PmFamily::Sequential(t) => Some(t),
            PmFamily::Finite(_) => None,
        }
    }
}

pub fn pm_map(model: Model, u: &ModelElement) -> Result<PmFamily> {
    match (model, u) {
        (Model::Finite(n), ModelElement::Finite(v)) => {
            if v.dim() != n {
                return Err(Error::ModelMismatch {
                    expected: "a vector of the model dimension",
                });
            }
            Ok(PmFamily::Finite(v.clone()))
        }
        (Model::ROmega, ModelElement::Sequence(seq)) => {
            let seq = seq.clone();
            let t = Thread::from_rule(band_limit(), format!("P_M {}", seq.name()), move |k| {
                seq.prefix(k)
            });
            Ok(PmFamily::Sequential(t))
        }
        (Model::C00, ModelElement::C00(a)) => {
            if !a.system().same_system(c00()) {
                return Err(Error::ModelMismatch {
                    expected: "a germ of the c00 inclusion chain",
                });
            }
            let u = a.vector().clone();
            let t = Thread::from_rule(band_limit(), "P_M germ", move |k| Ok(u.resized(k)));
            Ok(PmFamily::Sequential(t))
        }
        (Model::Finite(_), _) => Err(Error::ModelMismatch {
            expected: "a finite vector",
        }),
        (Model::ROmega, _) => Err(Error::ModelMismatch {
            expected: "a coordinate sequence",
        }),
        (Model::C00, _) => Err(Error::ModelMismatch {
            expected: "a c00 germ",
        }),
    }
}

/// A finitely supported `v` with `0 < P_M v <= t` on `1..=depth`, built
/// from the first nonzero component of the positive family `t`.
pub fn pm_order_dense_witness(t: &Thread, depth: usize) -> Result<ColimElement> {
    if !t.system().same_system(band_limit()) {
        return Err(Error::ModelMismatch {
            expected: "a family over the bands {1..k}",
        });
    }
    t.verify(depth)?;
    for k in 1..=depth {
        let c = t.projection(k)?;
        require_positive(&c, "the family")?;
        if let Some(&j) = c.support().iter().next() {
            let v = FinVector::unit(k, j).scale(c.get(j));
            return ColimElement::embed(c00(), k, v);
        }
    }
    Err(Error::AllZeroUpToDepth { depth })
}

#[derive(Clone, Debug)]
pub enum Preimage {
    Found(ModelElement),
    /// The component at band `{1..level}` is nonzero at `coordinate`
    /// (1-based), beyond the admissible support.
    NotInImage {
        level: usize,
        coordinate: usize,
    },
}

/// A model element whose `P_M` image agrees with `t` on every verified
/// level. In `c00` the candidate has support in `{1..bound}`; a nonzero
/// coordinate beyond the bound in a verified component proves there is
/// none. In `R^ω` every family has a preimage.
pub fn pm_preimage(model: Model, t: &Thread, bound: usize) -> Result<Preimage> {
    if !t.system().same_system(band_limit()) {
        return Err(Error::ModelMismatch {
            expected: "a family over the bands {1..k}",
        });
    }
    let depth = t.verified_depth();
    match model {
        Model::C00 => {
            if depth <= bound {
                return Err(Error::DepthInsufficient {
                    required: bound + 1,
                    available: depth,
                });
            }
            for k in bound + 1..=depth {
                let c = t.projection(k)?;
                if let Some(&j) = c.support().iter().find(|&&j| j >= bound) {
                    return Ok(Preimage::NotInImage {
                        level: k,
                        coordinate: j + 1,
                    });
                }
            }
            Ok(Preimage::Found(ModelElement::C00(ColimElement::embed(
                c00(),
                bound,
                t.projection(bound)?,
            )?)))
        }
        Model::ROmega => {
            let source = t.clone();
            let seq = Sequence::new("diagonal", move |i| {
                Ok(source.projection(i)?.get(i - 1).clone())
            });
            Ok(Preimage::Found(ModelElement::Sequence(seq)))
        }
        Model::Finite(_) => Err(Error::ModelMismatch {
            expected: "a sequential model",
        }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoRow {
    pub band: Band,
    /// The 0/1 functional whose carrier is this band.
    pub carrier_of: FinVector,
    /// `P_B` applied to `(1, 2, ..., N)`.
    pub sample_component: FinVector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteIsoReport {
    pub n: usize,
    pub band_count: usize,
    pub bands_are_carriers: bool,
    pub bands_form_ideal: bool,
    /// Dimension of the space of compatible families.
    pub family_space_dim: usize,
    pub pm_rank: usize,
    pub pm_lands_in_families: bool,
    pub pm_is_lattice_hom: bool,
    pub inverse_is_lattice_hom: bool,
    pub joins_preserved: bool,
    pub table: Vec<IsoRow>,
}

impl FiniteIsoReport {
    pub fn passed(&self) -> bool {
        self.bands_are_carriers
            && self.bands_form_ideal
            && self.family_space_dim == self.n
            && self.pm_rank == self.n
            && self.pm_lands_in_families
            && self.pm_is_lattice_hom
            && self.inverse_is_lattice_hom
            && self.joins_preserved
    }
}

/// `P_M` for the family of all carriers of positive functionals on `R^N`,
/// checked exhaustively to be a lattice isomorphism onto the compatible
/// families. A family is stored as the concatenation of its components,
/// the component at `B` having `|B|` coordinates.
pub fn finite_carrier_limit_iso(n: usize) -> Result<FiniteIsoReport> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    if n > 3 {
        return Err(Error::PreconditionViolated(
            "exhaustive check needs N <= 3".into(),
        ));
    }
    let bands = Band::all(n);
    let carriers = carriers_of_positive_functionals(n);
    let offsets: Vec<usize> = bands
        .iter()
        .scan(0, |acc, b| {
            let o = *acc;
            *acc += b.len();
            Some(o)
        })
        .collect();
    let total: usize = bands.iter().map(Band::len).sum();
    let slot = |b: usize, i: usize| {
        offsets[b]
            + bands[b]
                .support()
                .iter()
                .position(|&x| x == i)
                .expect("member")
    };

    // One equation per pair B ⊂ B' and coordinate of B.
    let mut equations = Vec::new();
    for (small, b) in bands.iter().enumerate() {
        for (big, c) in bands.iter().enumerate() {
            if small != big && b.is_subband_of(c)? {
                for &i in b.support() {
                    let mut row = vec![Scalar::zero(); total];
                    row[slot(big, i)] = Scalar::one();
                    row[slot(small, i)] = Scalar::from_int(-1);
                    equations.push(row);
                }
            }
        }
    }
    if equations.is_empty() {
        equations.push(vec![Scalar::zero(); total]);
    }
    let constraints = Matrix::from_rows(equations)?;
    let family_space_dim = constraints.kernel_basis().len();

    let mut pm = Matrix::zeros(total, n);
    for (b, band) in bands.iter().enumerate() {
        for &i in band.support() {
            pm.set(slot(b, i), i, Scalar::one());
        }
    }
    let pm_rank = pm.rank();
    let pm_lands_in_families = constraints.mul(&pm)?.entries().iter().all(Scalar::is_zero);
    let pm_is_lattice_hom = canonicalize(&PositiveMatrix::new(pm.clone())?).is_ok();

    // The inverse reads off the component at the full band.
    let full = bands
        .iter()
        .position(Band::is_full)
        .expect("full band present");
    let mut inv = Matrix::zeros(n, total);
    for i in 0..n {
        inv.set(i, slot(full, i), Scalar::one());
    }
    let inverse_is_lattice_hom =
        canonicalize(&PositiveMatrix::new(inv.clone())?).is_ok() && inv.mul(&pm)?.is_identity();

    let apply = |u: &FinVector| -> Result<FinVector> { pm.mul_vec(u) };
    let mut samples: Vec<FinVector> = (0..n).map(|i| FinVector::unit(n, i)).collect();
    samples.push(FinVector::new(
        (0..n)
            .map(|i| Scalar::ratio(if i % 2 == 0 { 3 } else { -2 }, i as i64 + 1))
            .collect(),
    )?);
    samples.push(FinVector::new(
        (0..n).map(|i| Scalar::from_int(1 - i as i64)).collect(),
    )?);
    let mut joins_preserved = true;
    for u in &samples {
        for v in &samples {
            joins_preserved &= apply(&u.join(v)?)? == apply(u)?.join(&apply(v)?)?;
        }
    }

    let sample = FinVector::new((1..=n).map(|i| Scalar::from_int(i as i64)).collect())?;
    let table = bands
        .iter()
        .map(|b| {
            Ok(IsoRow {
                band: b.clone(),
                carrier_of: b.indicator(),
                sample_component: b.project(&sample)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(FiniteIsoReport {
        n,
        band_count: bands.len(),
        bands_are_carriers: carriers == bands,
        bands_form_ideal: is_band_ideal(n, &carriers)?,
        family_space_dim,
        pm_rank,
        pm_lands_in_families,
        pm_is_lattice_hom,
        inverse_is_lattice_hom,
        joins_preserved,
        table,
    })
}

/// One sampled germ `u` paired with one sampled dual thread `φ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaCheck {
    pub level: usize,
    pub vector: FinVector,
    pub functional_level: usize,
    /// The bidual germ of `u` evaluates `φ` to `φ(u)`.
    pub pairing_realized: bool,
    /// Evaluating `φ ↦ φ(u)` on section threads recovers the germ of `u`.
    pub round_trip: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PerfectCertificate {
    pub depth: usize,
    pub steps_injective: bool,
    pub images_are_bands: bool,
    pub checks: Vec<SigmaCheck>,
}

impl PerfectCertificate {
    pub fn all_checks_pass(&self) -> bool {
        self.checks
            .iter()
            .all(|c| c.pairing_realized && c.round_trip)
    }
}

/// Certifies that the direct limit of `s` is perfect from the structural
/// hypotheses (injective steps whose images are bands, checked on the
/// steps below `depth`) and runs `samples` spot checks of the embedding
/// into the bidual.
pub fn perfect_certificate(
    s: &DirectSystem,
    depth: usize,
    samples: usize,
) -> Result<PerfectCertificate> {
    let depth = s.available_depth(depth);
    let c = s.classify(depth)?;
    if !c.all_injective {
        return Err(Error::CertificateRefused {
            flag: "steps_injective",
        });
    }
    if !c.images_are_bands {
        return Err(Error::CertificateRefused {
            flag: "images_are_bands",
        });
    }
    let dual = s.dual()?;
    let mut checks = Vec::with_capacity(samples);
    for i in 0..samples {
        let level = 1 + i % depth;
        let d = s.dim(level)?;
        let u = FinVector::new(
            (0..d)
                .map(|j| Scalar::ratio(((i + 2 * j) % 5) as i64 - 2, (j % 3) as i64 + 1))
                .collect(),
        )?;
        let germ = ColimElement::embed(s, level, u.clone())?;

        let functional_level = 1 + (i * 7 + 3) % depth;
        let fd = dual.dim(functional_level)?;
        let phi = Thread::section(&dual, functional_level, FinVector::unit(fd, i % fd))?;
        phi.verify(depth)?;
        let phi = ColimFunctional::new(s, phi)?;
        let sigma = LimFunctional::new(&dual, level, u.clone())?;
        let pairing_realized = sigma.eval(phi.thread())? == phi.eval(&germ)?;

        let coords = (0..d)
            .map(|j| {
                let basis = Thread::section(&dual, level, FinVector::unit(d, j))?;
                basis.verify(level)?;
                ColimFunctional::new(s, basis)?.eval(&germ)
            })
            .collect::<Result<Vec<_>>>()?;
        let recovered = ColimElement::embed(s, level, FinVector::new(coords)?)?;
        let round_trip = recovered.equal(&germ)?;

        checks.push(SigmaCheck {
            level,
            vector: u,
            functional_level,
            pairing_realized,
            round_trip,
        });
    }
    Ok(PerfectCertificate {
        depth,
        steps_injective: true,
        images_are_bands: true,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::CanonicalHom;
    use crate::limit::BuiltinRule;
    use crate::system::ExtensionRule;

    fn v(xs: &[i64]) -> FinVector {
        FinVector::from_ints(xs)
    }

    fn b(dim: usize, xs: &[usize]) -> Band {
        Band::from_one_based(dim, xs).unwrap()
    }

    #[test]
    fn carriers_and_null_ideals() {
        let phi = v(&[0, 5, 0, 2]);
        assert_eq!(null_ideal(&phi), b(4, &[1, 3]));
        assert_eq!(carrier(&phi), b(4, &[2, 4]));
        assert!(carrier(&v(&[1, 1])).is_full());
        assert!(carrier(&v(&[0, 0])).is_empty());
        assert_eq!(carrier(&v(&[0, -3])), b(2, &[2]));
    }

    #[test]
    fn annihilators() {
        assert_eq!(annihilator(&b(3, &[1, 2])), b(3, &[3]));
        assert!(annihilator(&Band::full(3)).is_empty());
        assert!(annihilator(&Band::empty(3)).is_full());
        let a = b(4, &[2, 3]);
        assert_eq!(annihilator(&annihilator(&a)), a);
    }

    #[test]
    fn disjointification() {
        let (p, q) = disjointify(&v(&[2, 1, 3]), &v(&[1, 4, 3])).unwrap();
        assert_eq!(p, v(&[2, 0, 3]));
        assert_eq!(q, v(&[0, 4, 0]));
        let (p, q) = disjointify(&v(&[1, 0]), &v(&[0, 2])).unwrap();
        assert_eq!((p, q), (v(&[1, 0]), v(&[0, 2])));
        let (p, q) = disjointify(&v(&[1, 2]), &v(&[0, 0])).unwrap();
        assert_eq!((p, q), (v(&[1, 2]), v(&[0, 0])));
        assert!(matches!(
            disjointify(&v(&[-1]), &v(&[1])),
            Err(Error::PreconditionViolated(_))
        ));
        assert!(disjointify(&v(&[1]), &v(&[1, 1])).is_err());
    }

    #[test]
    fn strict_positivity() {
        let phi = FinVector::new(vec![
            Scalar::one(),
            Scalar::ratio(1, 2),
            Scalar::from_int(3),
        ])
        .unwrap();
        assert!(strictly_positive(&phi).unwrap());
        assert!(!strictly_positive(&v(&[1, 0])).unwrap());
        assert!(strictly_positive(&v(&[-1, 1])).is_err());
    }

    #[test]
    fn separating_restrictions() {
        let phi = v(&[1, 2, 3]);
        for u in [v(&[1, -1, 0]), v(&[0, 0, -4]), v(&[2, 5, -9])] {
            let eta = separating_restriction(&phi, &u).unwrap();
            assert!(eta.is_positive() && eta.leq(&phi).unwrap());
            assert!(!eta.dot(&u).unwrap().is_zero());
        }
        assert!(separating_restriction(&phi, &v(&[0, 0, 0])).is_err());
        assert!(separating_restriction(&v(&[1, 0, 1]), &v(&[1, 1, 1])).is_err());
    }

    #[test]
    fn band_ideals() {
        for n in 1..=3 {
            assert!(is_band_ideal(n, &carriers_of_positive_functionals(n)).unwrap());
        }
        // {1,2} without its subband {2}.
        let not_closed = vec![Band::empty(2), b(2, &[1]), b(2, &[1, 2])];
        assert!(!is_band_ideal(2, &not_closed).unwrap());
        // Two atoms without an upper bound.
        let not_directed = vec![Band::empty(2), b(2, &[1]), b(2, &[2])];
        assert!(!is_band_ideal(2, &not_directed).unwrap());
    }

    #[test]
    fn band_family_membership() {
        assert!(BandFamily::Initial.contains(&b(5, &[1, 2, 3])));
        assert!(!BandFamily::Initial.contains(&b(5, &[1, 3])));
        assert!(BandFamily::Finite(3).contains(&b(3, &[2])));
        assert_eq!(BandFamily::Finite(2).bands_upto(9).len(), 4);
        assert_eq!(BandFamily::Initial.bands_upto(4).len(), 4);
    }

    #[test]
    fn pm_map_models() {
        let fam = pm_map(Model::Finite(3), &ModelElement::Finite(v(&[1, 2, 3]))).unwrap();
        assert_eq!(fam.component(&b(3, &[1, 3])).unwrap(), v(&[1, 0, 3]));

        let ones = pm_map(Model::ROmega, &ModelElement::Sequence(Sequence::ones())).unwrap();
        let t = ones.thread().unwrap();
        t.verify(6).unwrap();
        assert!(t
            .equal_upto(&Thread::builtin(band_limit(), BuiltinRule::Ones), 6)
            .unwrap());

        let germ = ColimElement::embed(c00(), 2, v(&[4, 5])).unwrap();
        let fam = pm_map(Model::C00, &ModelElement::C00(germ)).unwrap();
        assert_eq!(fam.component(&Band::full(1)).unwrap(), v(&[4]));
        assert_eq!(fam.component(&Band::full(4)).unwrap(), v(&[4, 5, 0, 0]));

        assert_eq!(
            pm_map(Model::C00, &ModelElement::Finite(v(&[1]))).unwrap_err(),
            Error::ModelMismatch {
                expected: "a c00 germ"
            }
        );
        let other = ColimElement::embed(&DirectSystem::inclusion_chain(1), 1, v(&[1])).unwrap();
        assert!(pm_map(Model::C00, &ModelElement::C00(other)).is_err());
        assert!(pm_map(Model::Finite(2), &ModelElement::Finite(v(&[1]))).is_err());
    }

    #[test]
    fn pm_compatibility_with_band_projections() {
        let u = v(&[3, -1, 2]);
        let fam = pm_map(Model::Finite(3), &ModelElement::Finite(u)).unwrap();
        for small in Band::all(3) {
            for big in Band::all(3) {
                if small.is_subband_of(&big).unwrap() {
                    let via = small.project(&fam.component(&big).unwrap()).unwrap();
                    assert_eq!(via, fam.component(&small).unwrap());
                }
            }
        }
    }

    #[test]
    fn order_dense_witnesses() {
        let ones = Thread::builtin(band_limit(), BuiltinRule::Ones);
        let w = pm_order_dense_witness(&ones, 5).unwrap();
        assert_eq!((w.level(), w.vector().clone()), (1, v(&[1])));

        let late = Thread::section(band_limit(), 3, v(&[0, 0, 2])).unwrap();
        let w = pm_order_dense_witness(&late, 5).unwrap();
        assert_eq!(w.vector(), &v(&[0, 0, 2]));
        let fam = pm_map(Model::C00, &ModelElement::C00(w)).unwrap();
        for k in 1..=5 {
            let c = fam.thread().unwrap().projection(k).unwrap();
            assert!(c.leq(&late.projection(k).unwrap()).unwrap());
        }

        let zero = Thread::builtin(band_limit(), BuiltinRule::Zero);
        assert_eq!(
            pm_order_dense_witness(&zero, 5).unwrap_err(),
            Error::AllZeroUpToDepth { depth: 5 }
        );
    }

    #[test]
    fn preimages() {
        let ones = Thread::builtin(band_limit(), BuiltinRule::Ones);
        ones.verify(12).unwrap();
        for bound in 1..=8 {
            match pm_preimage(Model::C00, &ones, bound).unwrap() {
                Preimage::NotInImage { level, coordinate } => {
                    assert_eq!((level, coordinate), (bound + 1, bound + 1))
                }
                other => panic!("unexpected {other:?}"),
            }
        }
        match pm_preimage(Model::ROmega, &ones, 8).unwrap() {
            Preimage::Found(ModelElement::Sequence(s)) => assert_eq!(
                s.prefix(10).unwrap(),
                FinVector::constant(10, Scalar::one())
            ),
            other => panic!("unexpected {other:?}"),
        }

        let germ = ColimElement::embed(c00(), 3, v(&[1, 0, 7])).unwrap();
        let t = pm_map(Model::C00, &ModelElement::C00(germ.clone()))
            .unwrap()
            .thread()
            .unwrap()
            .clone();
        assert!(matches!(
            pm_preimage(Model::C00, &t, 3),
            Err(Error::DepthInsufficient { .. })
        ));
        t.verify(10).unwrap();
        match pm_preimage(Model::C00, &t, 3).unwrap() {
            Preimage::Found(ModelElement::C00(back)) => assert!(back.equal(&germ).unwrap()),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            pm_preimage(Model::C00, &t, 2).unwrap(),
            Preimage::NotInImage {
                level: 3,
                coordinate: 3
            }
        ));
    }

    #[test]
    fn finite_iso() {
        for n in 1..=3 {
            let r = finite_carrier_limit_iso(n).unwrap();
            assert!(r.passed(), "{r:?}");
            assert_eq!(r.table.len(), 1 << n);
        }
        assert!(finite_carrier_limit_iso(4).is_err());
    }

    #[test]
    fn certificates() {
        let cert = perfect_certificate(&DirectSystem::inclusion_chain(1), 6, 8).unwrap();
        assert!(cert.all_checks_pass());

        let two = Scalar::from_int(2);
        let weighted =
            DirectSystem::from_generator(crate::system::FnGenerator::new(Ok, move |k| {
                CanonicalHom::inclusion(k, k + 1).scaled(&two)
            }));
        assert!(perfect_certificate(&weighted, 6, 8)
            .unwrap()
            .all_checks_pass());

        let dup =
            CanonicalHom::new(1, vec![Some((0, Scalar::one())), Some((0, Scalar::one()))]).unwrap();
        let s = DirectSystem::from_prefix(vec![1, 2], vec![dup], ExtensionRule::None).unwrap();
        assert_eq!(
            perfect_certificate(&s, 6, 4).unwrap_err(),
            Error::CertificateRefused {
                flag: "images_are_bands"
            }
        );

        let zero = CanonicalHom::zero(1, 1);
        let s = DirectSystem::from_prefix(vec![1, 1], vec![zero], ExtensionRule::None).unwrap();
        assert_eq!(
            perfect_certificate(&s, 6, 4).unwrap_err(),
            Error::CertificateRefused {
                flag: "steps_injective"
            }
        );
    }
}
