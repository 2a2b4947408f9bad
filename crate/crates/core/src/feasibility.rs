//! Exact rational linear feasibility.
//!
//! Two independent deciders: Fourier–Motzkin elimination over a general
//! system of equalities and inequalities, and a phase-one simplex over
//! `{A x = b, x >= 0}` with Bland's rule. Both return a witness point when
//! the system is feasible.

use std::collections::HashSet;

use crate::error::{check_dim, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// `coeffs · x <= rhs` (or `=` when stored as an equality).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub coeffs: Vec<Scalar>,
    pub rhs: Scalar,
}

impl Constraint {
    fn eval(&self, x: &[Scalar]) -> Scalar {
        self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// Scales so that the first nonzero coefficient has absolute value 1.
    fn normalized(mut self) -> Self {
        if let Some(lead) = self.coeffs.iter().find(|c| !c.is_zero()) {
            let f = lead.abs().recip().expect("nonzero");
            for c in &mut self.coeffs {
                *c = &*c * &f;
            }
            self.rhs = &self.rhs * &f;
        }
        self
    }
}

#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    vars: usize,
    inequalities: Vec<Constraint>,
    equalities: Vec<Constraint>,
}

/// Record of `x_pivot = constant + Σ coeffs_k x_k` produced while removing
/// equalities.
struct Substitution {
    pivot: usize,
    coeffs: Vec<Scalar>,
    constant: Scalar,
}

impl LinearSystem {
    pub fn new(vars: usize) -> Self {
        LinearSystem {
            vars,
            ..Default::default()
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    /// `coeffs · x <= rhs`.
    pub fn add_le(&mut self, coeffs: Vec<Scalar>, rhs: Scalar) -> Result<()> {
        check_dim(self.vars, coeffs.len())?;
        self.inequalities.push(Constraint { coeffs, rhs });
        Ok(())
    }

    /// `coeffs · x >= rhs`.
    pub fn add_ge(&mut self, coeffs: Vec<Scalar>, rhs: Scalar) -> Result<()> {
        self.add_le(coeffs.into_iter().map(|c| -c).collect(), -rhs)
    }

    pub fn add_eq(&mut self, coeffs: Vec<Scalar>, rhs: Scalar) -> Result<()> {
        check_dim(self.vars, coeffs.len())?;
        self.equalities.push(Constraint { coeffs, rhs });
        Ok(())
    }

    /// `lo <= x_var <= hi`.
    pub fn add_bounds(&mut self, var: usize, lo: Scalar, hi: Scalar) -> Result<()> {
        let mut e = vec![Scalar::zero(); self.vars];
        e[var] = Scalar::one();
        self.add_ge(e.clone(), lo)?;
        self.add_le(e, hi)
    }

    pub fn is_satisfied_by(&self, x: &[Scalar]) -> bool {
        x.len() == self.vars
            && self.inequalities.iter().all(|c| c.eval(x) <= c.rhs)
            && self.equalities.iter().all(|c| c.eval(x) == c.rhs)
    }

    /// Decides feasibility by Fourier–Motzkin elimination, returning a
    /// witness point if one exists.
    pub fn fourier_motzkin(&self) -> Option<Vec<Scalar>> {
        let n = self.vars;
        let mut eqs = self.equalities.clone();
        let mut ineqs = self.inequalities.clone();
        let mut subs: Vec<Substitution> = Vec::new();

        // Gaussian substitution for the equalities.
        while let Some(eq) = eqs.pop() {
            let Some(p) = eq.coeffs.iter().position(|c| !c.is_zero()) else {
                if eq.rhs.is_zero() {
                    continue;
                }
                return None;
            };
            let inv = eq.coeffs[p].recip().expect("nonzero pivot");
            let mut coeffs: Vec<Scalar> = eq.coeffs.iter().map(|c| -(c * &inv)).collect();
            coeffs[p] = Scalar::zero();
            let sub = Substitution {
                pivot: p,
                coeffs,
                constant: &eq.rhs * &inv,
            };
            for c in eqs.iter_mut().chain(ineqs.iter_mut()) {
                substitute(c, &sub);
            }
            subs.push(sub);
        }

        // Elimination stages: (variable, constraints mentioning it).
        let mut stages: Vec<(usize, Vec<Constraint>)> = Vec::new();
        let mut current = dedup(ineqs)?;
        let mut remaining: Vec<usize> = (0..n)
            .filter(|v| subs.iter().all(|s| s.pivot != *v))
            .collect();
        while !remaining.is_empty() {
            // Cheapest variable first: fewest generated constraints.
            let (pos_in_remaining, var) = remaining
                .iter()
                .enumerate()
                .min_by_key(|(_, &v)| {
                    let pos = current.iter().filter(|c| c.coeffs[v].is_positive()).count();
                    let neg = current.iter().filter(|c| c.coeffs[v].is_negative()).count();
                    pos * neg
                })
                .map(|(i, &v)| (i, v))
                .expect("non-empty");
            remaining.swap_remove(pos_in_remaining);

            let (with, without): (Vec<_>, Vec<_>) =
                current.into_iter().partition(|c| !c.coeffs[var].is_zero());
            let uppers: Vec<&Constraint> = with
                .iter()
                .filter(|c| c.coeffs[var].is_positive())
                .collect();
            let lowers: Vec<&Constraint> = with
                .iter()
                .filter(|c| c.coeffs[var].is_negative())
                .collect();
            let mut next = without;
            for up in &uppers {
                let fu = up.coeffs[var].recip().expect("nonzero");
                for lo in &lowers {
                    let fl = (-&lo.coeffs[var]).recip().expect("nonzero");
                    let coeffs = up
                        .coeffs
                        .iter()
                        .zip(&lo.coeffs)
                        .map(|(a, b)| &(a * &fu) + &(b * &fl))
                        .collect();
                    next.push(Constraint {
                        coeffs,
                        rhs: &(&up.rhs * &fu) + &(&lo.rhs * &fl),
                    });
                }
            }
            stages.push((var, with));
            current = dedup(next)?;
        }

        // Back substitution in reverse elimination order.
        let mut x = vec![Scalar::zero(); n];
        for (var, constraints) in stages.iter().rev() {
            let mut lower: Option<Scalar> = None;
            let mut upper: Option<Scalar> = None;
            for c in constraints {
                let a = &c.coeffs[*var];
                let rest: Scalar = c
                    .coeffs
                    .iter()
                    .zip(&x)
                    .enumerate()
                    .filter(|(k, _)| k != var)
                    .map(|(_, (ck, xk))| ck * xk)
                    .sum();
                let bound = &(&c.rhs - &rest) / a;
                if a.is_positive() {
                    upper = Some(upper.map_or(bound.clone(), |u| u.meet(&bound)));
                } else {
                    lower = Some(lower.map_or(bound.clone(), |l| l.join(&bound)));
                }
            }
            x[*var] = lower.or(upper).unwrap_or_else(Scalar::zero);
        }
        for sub in subs.iter().rev() {
            let v: Scalar = sub.coeffs.iter().zip(&x).map(|(a, b)| a * b).sum();
            x[sub.pivot] = &sub.constant + &v;
        }
        debug_assert!(self.is_satisfied_by(&x));
        Some(x)
    }
}

fn substitute(c: &mut Constraint, sub: &Substitution) {
    let a = c.coeffs[sub.pivot].clone();
    if a.is_zero() {
        return;
    }
    c.coeffs[sub.pivot] = Scalar::zero();
    for (k, d) in sub.coeffs.iter().enumerate() {
        if !d.is_zero() {
            c.coeffs[k] = &c.coeffs[k] + &(&a * d);
        }
    }
    c.rhs = &c.rhs - &(&a * &sub.constant);
}

/// Normalizes, removes duplicates and trivially true rows. `None` if a row
/// reads `0 <= negative`.
fn dedup(constraints: Vec<Constraint>) -> Option<Vec<Constraint>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for c in constraints {
        if c.coeffs.iter().all(Scalar::is_zero) {
            if c.rhs.is_negative() {
                return None;
            }
            continue;
        }
        let c = c.normalized();
        if seen.insert(c.clone()) {
            out.push(c);
        }
    }
    Some(out)
}

/// Phase-one simplex for `{A x = b, x >= 0}` with Bland's rule. Returns a
/// feasible `x` or `None`.
pub fn simplex_phase_one(a: &Matrix, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    check_dim(a.rows(), b.len())?;
    let (m, n) = (a.rows(), a.cols());
    let width = n + m + 1;
    // Tableau rows: [A | I | b] with each row sign-normalized so b >= 0.
    let mut t: Vec<Vec<Scalar>> = (0..m)
        .map(|r| {
            let flip = b[r].is_negative();
            let mut row = vec![Scalar::zero(); width];
            for c in 0..n {
                row[c] = if flip {
                    -a.get(r, c)
                } else {
                    a.get(r, c).clone()
                };
            }
            row[n + r] = Scalar::one();
            row[width - 1] = if flip { -&b[r] } else { b[r].clone() };
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();
    // Objective row: minimize the sum of artificials, written as reduced
    // costs on the original columns.
    let mut z: Vec<Scalar> = (0..width)
        .map(|c| {
            if (n..n + m).contains(&c) {
                Scalar::zero()
            } else {
                t.iter().map(|row| row[c].clone()).sum()
            }
        })
        .collect();

    while let Some(enter) = (0..n).find(|&c| z[c].is_positive()) {
        let mut leave: Option<usize> = None;
        for r in 0..m {
            if !t[r][enter].is_positive() {
                continue;
            }
            let ratio = &t[r][width - 1] / &t[r][enter];
            leave = match leave {
                None => Some(r),
                Some(l) => {
                    let best = &t[l][width - 1] / &t[l][enter];
                    if ratio < best || (ratio == best && basis[r] < basis[l]) {
                        Some(r)
                    } else {
                        Some(l)
                    }
                }
            };
        }
        let Some(pr) = leave else {
            // Unbounded direction in phase one cannot occur: the objective is
            // bounded below by zero.
            unreachable!("phase-one objective is bounded");
        };
        let inv = t[pr][enter].recip().expect("positive pivot");
        for v in t[pr].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = t[pr].clone();
        for (r, row) in t.iter_mut().enumerate() {
            if r != pr && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v = &*v - &(&f * p);
                }
            }
        }
        if !z[enter].is_zero() {
            let f = z[enter].clone();
            for (v, p) in z.iter_mut().zip(&pivot_row) {
                *v = &*v - &(&f * p);
            }
        }
        basis[pr] = enter;
    }

    if !z[width - 1].is_zero() {
        return Ok(None);
    }
    let mut x = vec![Scalar::zero(); n];
    for (r, &var) in basis.iter().enumerate() {
        if var < n {
            x[var] = t[r][width - 1].clone();
        }
    }
    Ok(Some(x))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    FourierMotzkin,
    Simplex,
}

/// Above this many unknowns the simplex route is used by default.
pub const FOURIER_MOTZKIN_MAX_VARS: usize = 8;

/// Feasibility of `{0 <= x <= upper, A x = target}`.
pub fn box_feasible(
    a: &Matrix,
    upper: &[Scalar],
    target: &[Scalar],
    method: Method,
) -> Result<Option<Vec<Scalar>>> {
    let n = a.cols();
    check_dim(n, upper.len())?;
    check_dim(a.rows(), target.len())?;
    match method {
        Method::FourierMotzkin => {
            let mut sys = LinearSystem::new(n);
            for r in 0..a.rows() {
                sys.add_eq(a.row(r).to_vec(), target[r].clone())?;
            }
            for (j, u) in upper.iter().enumerate() {
                sys.add_bounds(j, Scalar::zero(), u.clone())?;
            }
            Ok(sys.fourier_motzkin())
        }
        Method::Simplex => {
            // Variables (x, s) with x + s = upper, all nonnegative.
            let m = a.rows();
            let mut big = Matrix::zeros(m + n, 2 * n);
            let mut rhs = Vec::with_capacity(m + n);
            for r in 0..m {
                for c in 0..n {
                    big.set(r, c, a.get(r, c).clone());
                }
                rhs.push(target[r].clone());
            }
            for j in 0..n {
                big.set(m + j, j, Scalar::one());
                big.set(m + j, n + j, Scalar::one());
                rhs.push(upper[j].clone());
            }
            Ok(simplex_phase_one(&big, &rhs)?.map(|mut x| {
                x.truncate(n);
                x
            }))
        }
    }
}
