//! Lattice homomorphisms between coordinate lattices.
//!
//! A positive operator `R^n -> R^m` is a lattice homomorphism exactly when
//! every row of its matrix has at most one nonzero entry. Such a map is
//! stored in canonical form: a nonnegative weight per output coordinate and,
//! on the rows with positive weight, the input coordinate that row reads:
//!
//! ```text
//! (T u)_x = w_x * u_{p(x)}   if w_x > 0
//!         = 0                otherwise
//! ```
//!
//! Every positive operator between finite-dimensional coordinate lattices is
//! order continuous, so there is no separate notion of a normal homomorphism
//! at this level; the distinction only matters for limit objects.

use std::collections::BTreeSet;
use std::fmt;

use crate::band::Band;
use crate::error::{check_dim, Error, Result};
use crate::feasibility::{self, Method, FOURIER_MOTZKIN_MAX_VARS};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::vector::FinVector;

/// One output row: the 0-based input coordinate it reads and its positive
/// weight, or `None` for a row that is identically zero.
pub type Row = Option<(usize, Scalar)>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CanonicalHom {
    dom_dim: usize,
    rows: Vec<Row>,
}

impl CanonicalHom {
    pub fn new(dom_dim: usize, rows: Vec<Row>) -> Result<Self> {
        if dom_dim == 0 || rows.is_empty() {
            return Err(Error::ZeroDimension);
        }
        for (x, row) in rows.iter().enumerate() {
            if let Some((j, w)) = row {
                if *j >= dom_dim {
                    return Err(Error::IndexOutOfRange {
                        index: j + 1,
                        dim: dom_dim,
                    });
                }
                if !w.is_positive() {
                    return Err(Error::InvalidHom(format!(
                        "row {} has non-positive weight {}",
                        x + 1,
                        w
                    )));
                }
            }
        }
        Ok(CanonicalHom { dom_dim, rows })
    }

    pub fn identity(n: usize) -> Self {
        CanonicalHom::new(n, (0..n).map(|i| Some((i, Scalar::one()))).collect())
            .expect("valid identity")
    }

    pub fn zero(dom_dim: usize, cod_dim: usize) -> Self {
        CanonicalHom::new(dom_dim, vec![None; cod_dim]).expect("valid zero map")
    }

    /// `R^n -> R^m`, `n <= m`, onto the first `n` coordinates.
    pub fn inclusion(n: usize, m: usize) -> Self {
        assert!(n <= m, "inclusion needs n <= m");
        CanonicalHom::new(
            n,
            (0..m)
                .map(|x| (x < n).then(|| (x, Scalar::one())))
                .collect(),
        )
        .expect("valid inclusion")
    }

    /// `R^m -> R^n`, `n <= m`, keeping the first `n` coordinates.
    pub fn restriction(m: usize, n: usize) -> Self {
        assert!(n <= m, "restriction needs n <= m");
        CanonicalHom::new(m, (0..n).map(|x| Some((x, Scalar::one()))).collect())
            .expect("valid restriction")
    }

    /// The band projection `P_B` viewed as an operator `R^n -> R^n`.
    pub fn band_projection(band: &Band) -> Self {
        let n = band.dim();
        CanonicalHom::new(
            n,
            (0..n)
                .map(|x| band.contains(x).then(|| (x, Scalar::one())))
                .collect(),
        )
        .expect("valid projection")
    }

    pub fn dom_dim(&self) -> usize {
        self.dom_dim
    }

    pub fn cod_dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    /// The weight vector `w`.
    pub fn weight(&self) -> FinVector {
        FinVector::new(
            self.rows
                .iter()
                .map(|r| r.as_ref().map_or_else(Scalar::zero, |(_, w)| w.clone()))
                .collect(),
        )
        .expect("positive codomain")
    }

    /// The index map `p` at 0-based row `x`; defined exactly on `coz(w)`.
    pub fn idx(&self, x: usize) -> Option<usize> {
        self.rows[x].as_ref().map(|(j, _)| *j)
    }

    /// `coz(w)`, 0-based.
    pub fn cozero_rows(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.is_some())
            .map(|(x, _)| x)
    }

    pub fn apply(&self, u: &FinVector) -> Result<FinVector> {
        check_dim(self.dom_dim, u.dim())?;
        FinVector::new(
            self.rows
                .iter()
                .map(|r| match r {
                    Some((j, w)) => w * u.get(*j),
                    None => Scalar::zero(),
                })
                .collect(),
        )
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &CanonicalHom) -> Result<CanonicalHom> {
        check_dim(self.dom_dim, inner.cod_dim())?;
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let (j, w) = r.as_ref()?;
                let (k, w2) = inner.rows[*j].as_ref()?;
                Some((*k, w * w2))
            })
            .collect();
        CanonicalHom::new(inner.dom_dim, rows)
    }

    /// Multiplies every weight by `factor > 0`.
    pub fn scaled(&self, factor: &Scalar) -> Result<CanonicalHom> {
        if !factor.is_positive() {
            return Err(Error::InvalidHom(format!(
                "scaling factor {} is not positive",
                factor
            )));
        }
        Ok(CanonicalHom {
            dom_dim: self.dom_dim,
            rows: self
                .rows
                .iter()
                .map(|r| r.as_ref().map(|(j, w)| (*j, w * factor)))
                .collect(),
        })
    }

    pub fn to_matrix(&self) -> PositiveMatrix {
        let mut m = Matrix::zeros(self.cod_dim(), self.dom_dim);
        for (x, r) in self.rows.iter().enumerate() {
            if let Some((j, w)) = r {
                m.set(x, *j, w.clone());
            }
        }
        PositiveMatrix(m)
    }

    /// Injective iff every input coordinate is read by some row.
    pub fn is_injective(&self) -> bool {
        let hit: BTreeSet<usize> = self.rows.iter().flatten().map(|(j, _)| *j).collect();
        hit.len() == self.dom_dim
    }

    /// Surjective iff no row is zero and no two rows read the same input.
    pub fn is_surjective(&self) -> bool {
        self.rows.iter().all(Option::is_some) && self.is_interval_preserving()
    }

    /// Interval preserving iff `p` is injective on `coz(w)`.
    pub fn is_interval_preserving(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.rows.iter().flatten().all(|(j, _)| seen.insert(*j))
    }

    /// Order adjoint: the transpose, as an operator between the duals.
    pub fn adjoint(&self) -> PositiveMatrix {
        self.to_matrix().transpose()
    }

    /// When the map is interval preserving its image is the band `coz(w)`.
    pub fn image_band(&self) -> Option<Band> {
        self.is_interval_preserving()
            .then(|| Band::new(self.cod_dim(), self.cozero_rows()).expect("rows in range"))
    }

    /// Some `u` with `T u = v`, if one exists. Uncovered input coordinates
    /// are set to zero.
    pub fn preimage(&self, v: &FinVector) -> Result<Option<FinVector>> {
        check_dim(self.cod_dim(), v.dim())?;
        let mut u: Vec<Option<Scalar>> = vec![None; self.dom_dim];
        for (x, r) in self.rows.iter().enumerate() {
            match r {
                None if !v.get(x).is_zero() => return Ok(None),
                None => {}
                Some((j, w)) => {
                    let want = v.get(x) / w;
                    match &u[*j] {
                        Some(prev) if *prev != want => return Ok(None),
                        _ => u[*j] = Some(want),
                    }
                }
            }
        }
        Ok(Some(FinVector::new(
            u.into_iter().map(Option::unwrap_or_default).collect(),
        )?))
    }

    /// The positive right inverse that writes `v_x / w_x` at coordinate
    /// `p(x)` and zero elsewhere. Requires a surjective map.
    pub fn zero_extension_section(&self) -> Option<CanonicalHom> {
        if !self.is_surjective() {
            return None;
        }
        let mut rows: Vec<Row> = vec![None; self.dom_dim];
        for (x, r) in self.rows.iter().enumerate() {
            let (j, w) = r.as_ref().expect("surjective maps have no zero rows");
            rows[*j] = Some((x, w.recip().expect("positive weight")));
        }
        Some(CanonicalHom::new(self.cod_dim(), rows).expect("valid section"))
    }

    /// Inverse lattice isomorphism, when the map is bijective.
    pub fn inverse(&self) -> Option<CanonicalHom> {
        (self.is_injective() && self.is_surjective())
            .then(|| self.zero_extension_section())
            .flatten()
    }

    /// For a map that is not interval preserving: two rows sharing an input
    /// coordinate `j` give `u = e_j` and `v` equal to the first row's weight
    /// at that row, zero elsewhere. Then `0 <= v <= T u` but no `0 <= x <= u`
    /// has `T x = v`.
    pub fn interval_violation(&self) -> Option<(FinVector, FinVector)> {
        let mut first_reader: Vec<Option<usize>> = vec![None; self.dom_dim];
        for (x, r) in self.rows.iter().enumerate() {
            if let Some((j, _)) = r {
                if let Some(x1) = first_reader[*j] {
                    let u = FinVector::unit(self.dom_dim, *j);
                    let mut v = vec![Scalar::zero(); self.cod_dim()];
                    v[x1] = self.rows[x1].as_ref().expect("cozero row").1.clone();
                    return Some((u, FinVector::new(v).expect("positive codomain")));
                }
                first_reader[*j] = Some(x);
            }
        }
        None
    }
}

impl fmt::Debug for CanonicalHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R^{} -> R^{} [", self.dom_dim, self.cod_dim())?;
        for (x, r) in self.rows.iter().enumerate() {
            if x > 0 {
                write!(f, ", ")?;
            }
            match r {
                Some((j, w)) => write!(f, "{}: {} {:?}", x + 1, j + 1, w)?,
                None => write!(f, "{}: -", x + 1)?,
            }
        }
        write!(f, "]")
    }
}

/// A matrix with nonnegative entries, i.e. a positive operator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PositiveMatrix(Matrix);

impl PositiveMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                if m.get(r, c).is_negative() {
                    return Err(Error::PreconditionViolated(format!(
                        "entry ({}, {}) of a positive matrix is negative",
                        r + 1,
                        c + 1
                    )));
                }
            }
        }
        Ok(PositiveMatrix(m))
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Result<Self> {
        PositiveMatrix::new(Matrix::from_int_rows(rows)?)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn rows(&self) -> usize {
        self.0.rows()
    }

    pub fn cols(&self) -> usize {
        self.0.cols()
    }

    pub fn transpose(&self) -> PositiveMatrix {
        PositiveMatrix(self.0.transpose())
    }

    pub fn apply(&self, u: &FinVector) -> Result<FinVector> {
        self.0.mul_vec(u)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PositiveMatrix) -> Result<PositiveMatrix> {
        Ok(PositiveMatrix(self.0.mul(&inner.0)?))
    }
}

impl fmt::Debug for PositiveMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

/// Converts a positive matrix to canonical form. Fails with the 1-based
/// index of the first row holding two or more nonzero entries.
pub fn canonicalize(a: &PositiveMatrix) -> Result<CanonicalHom> {
    let m = a.matrix();
    if m.cols() == 0 || m.rows() == 0 {
        return Err(Error::ZeroDimension);
    }
    let mut rows = Vec::with_capacity(m.rows());
    for r in 0..m.rows() {
        let mut nz = m.row(r).iter().enumerate().filter(|(_, v)| !v.is_zero());
        let first = nz.next().map(|(j, w)| (j, w.clone()));
        if nz.next().is_some() {
            return Err(Error::NotLatticeHom { row: r + 1 });
        }
        rows.push(first);
    }
    CanonicalHom::new(m.cols(), rows)
}

/// Decides whether `v` lies in `A[[0, u]]`, i.e. whether some
/// `0 <= x <= u` has `A x = v`, and returns that `x`.
///
/// Requires `u >= 0` and `0 <= v <= A u`.
pub fn interval_witness(
    a: &PositiveMatrix,
    u: &FinVector,
    v: &FinVector,
    method: Method,
) -> Result<Option<FinVector>> {
    check_dim(a.cols(), u.dim())?;
    check_dim(a.rows(), v.dim())?;
    if !u.is_positive() {
        return Err(Error::PreconditionViolated("u must be positive".into()));
    }
    let au = a.apply(u)?;
    if !v.is_positive() || !v.leq(&au)? {
        return Err(Error::PreconditionViolated(
            "v must satisfy 0 <= v <= A u".into(),
        ));
    }
    let x = feasibility::box_feasible(a.matrix(), u.coords(), v.coords(), method)?;
    x.map(FinVector::new).transpose()
}

/// Exact interval-preservation probe at `(u, v)`. Fourier–Motzkin is used
/// up to [`FOURIER_MOTZKIN_MAX_VARS`] unknowns, the simplex route above.
pub fn interval_preserving_oracle(
    a: &PositiveMatrix,
    u: &FinVector,
    v: &FinVector,
) -> Result<bool> {
    let method = if a.cols() <= FOURIER_MOTZKIN_MAX_VARS {
        Method::FourierMotzkin
    } else {
        Method::Simplex
    };
    Ok(interval_witness(a, u, v, method)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: i64) -> Scalar {
        Scalar::from_int(x)
    }

    fn v(xs: &[i64]) -> FinVector {
        FinVector::from_ints(xs)
    }

    /// `2 -> 3`, `w = (2,0,3)`, `p = {1 -> 1, 3 -> 2}`.
    fn sample() -> CanonicalHom {
        CanonicalHom::new(2, vec![Some((0, s(2))), None, Some((1, s(3)))]).unwrap()
    }

    fn duplication() -> CanonicalHom {
        CanonicalHom::new(1, vec![Some((0, s(1))), Some((0, s(1)))]).unwrap()
    }

    #[test]
    fn apply_formula() {
        assert_eq!(sample().apply(&v(&[5, 7])).unwrap(), v(&[10, 0, 21]));
        assert_eq!(
            CanonicalHom::identity(3).apply(&v(&[1, -2, 3])).unwrap(),
            v(&[1, -2, 3])
        );
        assert!(CanonicalHom::zero(2, 3)
            .apply(&v(&[4, 4]))
            .unwrap()
            .is_zero());
        assert!(sample().apply(&v(&[1])).is_err());
    }

    #[test]
    fn rejects_malformed() {
        assert!(CanonicalHom::new(1, vec![Some((1, s(1)))]).is_err());
        assert!(CanonicalHom::new(1, vec![Some((0, s(0)))]).is_err());
        assert!(CanonicalHom::new(1, vec![Some((0, s(-1)))]).is_err());
    }

    #[test]
    fn compose_laws() {
        let f = sample();
        assert_eq!(CanonicalHom::identity(3).compose(&f).unwrap(), f);
        let inc = CanonicalHom::inclusion(3, 5)
            .compose(&CanonicalHom::inclusion(2, 3))
            .unwrap();
        assert_eq!(inc, CanonicalHom::inclusion(2, 5));
        // Matrix product route.
        let g = CanonicalHom::new(
            3,
            vec![
                Some((2, s(5))),
                Some((1, s(1))),
                Some((0, Scalar::ratio(1, 2))),
            ],
        )
        .unwrap();
        let gf = g.compose(&f).unwrap();
        assert_eq!(
            gf.to_matrix(),
            g.to_matrix().compose(&f.to_matrix()).unwrap()
        );
        assert!(f.compose(&g).is_err());
    }

    #[test]
    fn canonicalize_rows() {
        let bad = PositiveMatrix::from_int_rows(&[&[1, 1], &[0, 2]]).unwrap();
        assert_eq!(
            canonicalize(&bad).unwrap_err(),
            Error::NotLatticeHom { row: 1 }
        );
        // Brute check: T(e1 ∨ e2) differs from T(e1) ∨ T(e2).
        let lhs = bad.apply(&v(&[1, 0]).join(&v(&[0, 1])).unwrap()).unwrap();
        let rhs = bad
            .apply(&v(&[1, 0]))
            .unwrap()
            .join(&bad.apply(&v(&[0, 1])).unwrap())
            .unwrap();
        assert_ne!(lhs, rhs);

        let good = PositiveMatrix::from_int_rows(&[&[2, 0], &[0, 0], &[0, 3]]).unwrap();
        assert_eq!(canonicalize(&good).unwrap(), sample());
        let zero = PositiveMatrix::from_int_rows(&[&[0, 0], &[0, 0]]).unwrap();
        assert_eq!(canonicalize(&zero).unwrap(), CanonicalHom::zero(2, 2));
        assert!(PositiveMatrix::from_int_rows(&[&[-1]]).is_err());
    }

    #[test]
    fn injectivity() {
        assert!(CanonicalHom::inclusion(2, 3).is_injective());
        let collapse = CanonicalHom::new(2, vec![Some((0, s(1)))]).unwrap();
        assert!(!collapse.is_injective());
        assert!(duplication().is_injective());
        // Kernel solve agrees.
        assert!(duplication().to_matrix().matrix().kernel_basis().is_empty());
        assert_eq!(collapse.to_matrix().matrix().kernel_basis().len(), 1);
    }

    #[test]
    fn surjectivity() {
        assert!(CanonicalHom::restriction(3, 2).is_surjective());
        assert!(!duplication().is_surjective());
        assert_eq!(duplication().preimage(&v(&[1, 0])).unwrap(), None);
        assert!(!sample().is_surjective());
    }

    #[test]
    fn interval_preservation() {
        assert!(CanonicalHom::inclusion(2, 3).is_interval_preserving());
        assert!(!duplication().is_interval_preserving());
        let band = Band::from_one_based(3, &[1, 3]).unwrap();
        assert!(CanonicalHom::band_projection(&band).is_interval_preserving());
    }

    #[test]
    fn adjoints() {
        let inc = CanonicalHom::inclusion(2, 3);
        assert_eq!(
            canonicalize(&inc.adjoint()).unwrap(),
            CanonicalHom::restriction(3, 2)
        );
        let dup_adj = duplication().adjoint();
        assert_eq!(dup_adj, PositiveMatrix::from_int_rows(&[&[1, 1]]).unwrap());
        assert!(canonicalize(&dup_adj).is_err());
        // Not a lattice homomorphism, yet interval preserving: probe [0, u].
        for (u, w) in [
            (v(&[1, 1]), v(&[2])),
            (v(&[3, 0]), v(&[1])),
            (v(&[1, 2]), v(&[0])),
        ] {
            assert!(interval_preserving_oracle(&dup_adj, &u, &w).unwrap());
        }
        assert_eq!(sample().adjoint().transpose(), sample().to_matrix());
    }

    #[test]
    fn oracle_examples() {
        let inc = CanonicalHom::inclusion(2, 3).to_matrix();
        let x =
            interval_witness(&inc, &v(&[1, 1]), &v(&[1, 0, 0]), Method::FourierMotzkin).unwrap();
        assert_eq!(x, Some(v(&[1, 0])));
        let dup = duplication().to_matrix();
        assert!(!interval_preserving_oracle(&dup, &v(&[1]), &v(&[1, 0])).unwrap());
        assert!(matches!(
            interval_preserving_oracle(&dup, &v(&[1]), &v(&[2, 0])),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn violation_witness_is_infeasible() {
        let (u, w) = duplication().interval_violation().unwrap();
        assert_eq!((u.clone(), w.clone()), (v(&[1]), v(&[1, 0])));
        assert!(!interval_preserving_oracle(&duplication().to_matrix(), &u, &w).unwrap());
        assert!(sample().interval_violation().is_none());
    }

    #[test]
    fn image_bands() {
        assert_eq!(
            CanonicalHom::inclusion(2, 3).image_band(),
            Some(Band::from_one_based(3, &[1, 2]).unwrap())
        );
        assert_eq!(duplication().image_band(), None);
        // The image of the duplication is the diagonal: (1,1) is hit, (1,0) is not.
        assert!(duplication().preimage(&v(&[1, 1])).unwrap().is_some());
        assert_eq!(CanonicalHom::zero(2, 2).image_band(), Some(Band::empty(2)));
    }

    #[test]
    fn sections_and_inverses() {
        let r = CanonicalHom::new(3, vec![Some((2, s(2))), Some((0, s(1)))]).unwrap();
        let sec = r.zero_extension_section().unwrap();
        let u = v(&[4, 5]);
        assert_eq!(r.apply(&sec.apply(&u).unwrap()).unwrap(), u);
        assert_eq!(
            sec.apply(&u).unwrap(),
            FinVector::new(vec![s(5), s(0), s(2)]).unwrap()
        );
        let perm = CanonicalHom::new(2, vec![Some((1, s(3))), Some((0, s(2)))]).unwrap();
        let inv = perm.inverse().unwrap();
        assert_eq!(inv.compose(&perm).unwrap(), CanonicalHom::identity(2));
        assert!(duplication().inverse().is_none());
    }
}
