//! Brute-force reference computations the suites compare against. None of
//! them goes through the canonical form or the feasibility solvers.

use crate::error::Result;
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::vector::FinVector;

/// `sup { φ(v) + ψ(u - v) : 0 <= v <= u }` for `u >= 0`, by enumerating
/// the vertices `v_i ∈ {0, u_i}` of the box. A linear function on a box
/// attains its maximum at a vertex.
pub fn riesz_kantorovich_sup(phi: &FinVector, psi: &FinVector, u: &FinVector) -> Result<Scalar> {
    let d = u.dim();
    assert!(d <= 16, "vertex enumeration is exponential");
    let mut best: Option<Scalar> = None;
    for mask in 0u32..(1 << d) {
        let v = FinVector::new(
            (0..d)
                .map(|i| {
                    if mask >> i & 1 == 1 {
                        u.get(i).clone()
                    } else {
                        Scalar::zero()
                    }
                })
                .collect(),
        )?;
        let value = phi.dot(&v)? + psi.dot(&u.sub(&v)?)?;
        best = Some(match best {
            Some(b) if b >= value => b,
            _ => value,
        });
    }
    Ok(best.expect("at least one vertex"))
}

/// Whether `x -> A x` preserves joins of every pair drawn from `samples`.
pub fn preserves_joins(a: &Matrix, samples: &[FinVector]) -> Result<bool> {
    let apply = |u: &FinVector| a.mul_vec(u);
    for u in samples {
        for v in samples {
            if apply(&u.join(v)?)? != apply(u)?.join(&apply(v)?)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Unit vectors and their pairwise differences: a lattice homomorphism
/// test set, since `A(e_i ∨ -e_j)` exposes any row mixing two columns.
pub fn lattice_probes(dim: usize) -> Vec<FinVector> {
    let mut out: Vec<FinVector> = (0..dim).map(|i| FinVector::unit(dim, i)).collect();
    for i in 0..dim {
        for j in 0..dim {
            if i != j {
                out.push(
                    FinVector::unit(dim, i)
                        .sub(&FinVector::unit(dim, j))
                        .expect("same dim"),
                );
            }
        }
    }
    out
}

/// Whether `ψ` vanishes on every vector of `basis`.
pub fn vanishes_on(psi: &FinVector, basis: &[Vec<Scalar>]) -> Result<bool> {
    for b in basis {
        if !psi.dot(&FinVector::new(b.clone())?)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sup_of_two_functionals() {
        // (φ ∨ ψ)(u) coordinatewise for u >= 0.
        let phi = FinVector::from_ints(&[3, -1, 0]);
        let psi = FinVector::from_ints(&[1, 2, -5]);
        let u = FinVector::from_ints(&[2, 1, 4]);
        assert_eq!(
            riesz_kantorovich_sup(&phi, &psi, &u).unwrap(),
            Scalar::from_int(8)
        );
    }

    #[test]
    fn join_probes() {
        let mix = Matrix::from_int_rows(&[&[1, 1]]).unwrap();
        assert!(!preserves_joins(&mix, &lattice_probes(2)).unwrap());
        let ok = Matrix::from_int_rows(&[&[0, 2], &[1, 0], &[1, 0]]).unwrap();
        assert!(preserves_joins(&ok, &lattice_probes(2)).unwrap());
    }
}
