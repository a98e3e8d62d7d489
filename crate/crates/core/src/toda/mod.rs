//! The generalized Toda lattice with signs.
//!
//! In coordinates `a_i = f_i'` and `b_i = ε_i exp(-Σ_j C[i][j] f_j)` the flow
//! reads `a_i' = b_i`, `b_i' = -b_i Σ_j C[i][j] a_j`. For type `A_l` the Lax
//! matrix in the defining representation is tridiagonal and its
//! characteristic polynomial is conserved.

mod integrate;

pub use integrate::{integrate, BlowupEvent, IntegrateOptions, Trajectory};

use crate::error::{Error, Result};
use crate::rootsys::RootSystem;

#[derive(Debug, Clone, PartialEq)]
pub struct TodaState {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub epsilon: Vec<i32>,
    pub t: f64,
}

impl TodaState {
    /// Checks lengths and that every nonzero `b_i` has sign `ε_i`.
    pub fn new(a: Vec<f64>, b: Vec<f64>, epsilon: Vec<i32>) -> Result<Self> {
        if b.len() != a.len() {
            return Err(Error::LengthMismatch {
                expected: a.len(),
                got: b.len(),
            });
        }
        if epsilon.len() != a.len() {
            return Err(Error::LengthMismatch {
                expected: a.len(),
                got: epsilon.len(),
            });
        }
        for (i, (&bi, &e)) in b.iter().zip(&epsilon).enumerate() {
            if e != 1 && e != -1 {
                return Err(Error::InvalidArgument(format!("sign {e} is not ±1")));
            }
            if !bi.is_finite() || !a[i].is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "non-finite value at index {}",
                    i + 1
                )));
            }
            if bi != 0.0 && bi.signum() as i32 != e {
                return Err(Error::InvalidArgument(format!(
                    "b_{} = {bi} does not have sign {e}",
                    i + 1
                )));
            }
        }
        Ok(TodaState {
            a,
            b,
            epsilon,
            t: 0.0,
        })
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }
}

/// `(a', b')` at the given state, for any Cartan matrix.
pub fn toda_rhs(rs: &RootSystem, state: &TodaState) -> (Vec<f64>, Vec<f64>) {
    let mut da = vec![0.0; rs.rank()];
    let mut db = vec![0.0; rs.rank()];
    rhs_into(rs.cartan(), &state.a, &state.b, &mut da, &mut db);
    (da, db)
}

pub(crate) fn rhs_into(c: &[Vec<i32>], a: &[f64], b: &[f64], da: &mut [f64], db: &mut [f64]) {
    for i in 0..a.len() {
        da[i] = b[i];
        let s: f64 = c[i].iter().zip(a).map(|(&cij, &aj)| cij as f64 * aj).sum();
        db[i] = -b[i] * s;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LaxPair {
    pub x: Vec<Vec<f64>>,
    pub p: Vec<Vec<f64>>,
}

/// The Lax matrix of a type `A_l` state: diagonal `a_k - a_{k-1}`,
/// subdiagonal `b`, superdiagonal ones.
pub fn lax_matrix(rs: &RootSystem, state: &TodaState) -> Result<Vec<Vec<f64>>> {
    if !rs.is_type_a() {
        return Err(Error::NotTypeA);
    }
    if state.rank() != rs.rank() {
        return Err(Error::LengthMismatch {
            expected: rs.rank(),
            got: state.rank(),
        });
    }
    Ok(lax_from_ab(&state.a, &state.b))
}

fn lax_from_ab(a: &[f64], b: &[f64]) -> Vec<Vec<f64>> {
    let l = a.len();
    let n = l + 1;
    let at = |k: usize| if k == 0 || k > l { 0.0 } else { a[k - 1] };
    let mut x = vec![vec![0.0; n]; n];
    for k in 0..n {
        x[k][k] = at(k + 1) - at(k);
        if k + 1 < n {
            x[k + 1][k] = b[k];
            x[k][k + 1] = 1.0;
        }
    }
    x
}

/// `X` together with `P = -(strictly lower part of X)`.
pub fn lax_pair(rs: &RootSystem, state: &TodaState) -> Result<LaxPair> {
    let x = lax_matrix(rs, state)?;
    let n = x.len();
    let mut p = vec![vec![0.0; n]; n];
    for k in 0..n - 1 {
        p[k + 1][k] = -x[k + 1][k];
    }
    Ok(LaxPair { x, p })
}

/// Coefficients `c_2, ..., c_n` of `det(λ - X) = λ^n + c_1 λ^{n-1} + ... + c_n`.
///
/// `c_1 = -tr X` vanishes for Lax matrices and is omitted.
pub fn invariants(x: &[Vec<f64>]) -> Vec<f64> {
    let n = x.len();
    // Faddeev-LeVerrier recursion.
    let mut m = vec![vec![0.0; n]; n];
    let mut c = vec![0.0; n + 1];
    c[0] = 1.0;
    for k in 1..=n {
        let mut next = matmul(x, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += c[k - 1];
        }
        m = next;
        let xm = matmul(x, &m);
        let tr: f64 = (0..n).map(|i| xm[i][i]).sum();
        c[k] = -tr / k as f64;
        if c[k] == 0.0 {
            c[k] = 0.0; // no negative zero in reports
        }
    }
    c[2..].to_vec()
}

fn matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] != 0.0 {
                for j in 0..n {
                    out[i][j] += a[i][k] * b[k][j];
                }
            }
        }
    }
    out
}

/// Conserved quantities of a type `A` state.
pub fn state_invariants(a: &[f64], b: &[f64]) -> Vec<f64> {
    invariants(&lax_from_ab(a, b))
}

/// `b_i = ε_i exp(-Σ_j C[i][j] f_j)`.
pub fn b_from_f(rs: &RootSystem, f: &[f64], epsilon: &[i32]) -> Result<Vec<f64>> {
    if f.len() != rs.rank() || epsilon.len() != rs.rank() {
        return Err(Error::LengthMismatch {
            expected: rs.rank(),
            got: if f.len() != rs.rank() {
                f.len()
            } else {
                epsilon.len()
            },
        });
    }
    Ok((0..rs.rank())
        .map(|i| {
            let s: f64 = (0..rs.rank()).map(|j| rs.c(i, j) as f64 * f[j]).sum();
            epsilon[i] as f64 * (-s).exp()
        })
        .collect())
}

/// Particle positions `q_i = f_i - f_{i+1}` with `f_{l+1} = 0`.
pub fn positions_from_f(f: &[f64]) -> Vec<f64> {
    (0..f.len())
        .map(|i| f[i] - f.get(i + 1).copied().unwrap_or(0.0))
        .collect()
}
