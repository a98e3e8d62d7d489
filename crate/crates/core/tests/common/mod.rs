//! Independent reference implementations used to cross-check the library.

#![allow(dead_code)]

use std::collections::BTreeMap;

use toda_topo::complex::ChainComplex;
use toda_topo::linalg::SparseMatrix;
use toda_topo::rootsys::{build_root_system, CartanType, RootSystem, TypeLabel};
use toda_topo::weyl::{enumerate_weyl, WeylGroup};

pub fn setup(label: &str) -> (RootSystem, WeylGroup) {
    let t: TypeLabel = label.parse().unwrap();
    let rs = build_root_system(t.kind, t.rank).unwrap();
    let w = enumerate_weyl(&rs).unwrap();
    (rs, w)
}

pub fn complex(label: &str) -> ChainComplex {
    let (rs, w) = setup(label);
    ChainComplex::build(rs, w).unwrap()
}

pub fn kind(label: &str) -> CartanType {
    label.parse::<TypeLabel>().unwrap().kind
}

/// Textbook Smith normal form: move the smallest entry to the corner, clear
/// its row and column by Euclid, and restart whenever an entry is not
/// divisible by the corner. Returns the nonzero invariant factors.
pub fn naive_snf(mut a: Vec<Vec<i128>>) -> Vec<i128> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j] != 0 && best.is_none_or(|(p, q)| a[i][j].abs() < a[p][q].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((p, q)) = best else {
                return out;
            };
            a.swap(t, p);
            for r in a.iter_mut() {
                r.swap(t, q);
            }
            let piv = a[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let f = a[i][t] / piv;
                for j in t..cols {
                    a[i][j] -= f * a[t][j];
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..cols {
                let f = a[t][j] / piv;
                for i in t..rows {
                    a[i][j] -= f * a[i][t];
                }
                clean &= a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // Divisibility: fold any offending row into the pivot row.
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % piv != 0));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        let x = a[i][j];
                        a[t][j] += x;
                    }
                }
                None => {
                    out.push(piv.abs());
                    break;
                }
            }
        }
    }
    out
}

pub fn dense_i128(m: &SparseMatrix) -> Vec<Vec<i128>> {
    m.to_dense()
        .into_iter()
        .map(|r| r.into_iter().map(i128::from).collect())
        .collect()
}

fn inv_mod(x: u64, p: u64) -> u64 {
    let (mut r, mut b, mut e) = (1u64, x % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Rank over `F_p` by incremental sparse row reduction.
pub fn rank_mod_p(m: &SparseMatrix, p: u64) -> usize {
    let mut pivots: BTreeMap<u32, Vec<(u32, u64)>> = BTreeMap::new();
    for row in m.row_lists() {
        let mut r: BTreeMap<u32, u64> = row
            .into_iter()
            .map(|(c, v)| (c, v.rem_euclid(p as i64) as u64))
            .filter(|&(_, v)| v != 0)
            .collect();
        while let Some((&lead, &v)) = r.iter().next() {
            match pivots.get(&lead) {
                Some(prow) => {
                    // prow is normalized to leading coefficient 1.
                    for &(c, x) in prow {
                        let e = r.entry(c).or_insert(0);
                        *e = (*e + p - v * x % p) % p;
                        if *e == 0 {
                            r.remove(&c);
                        }
                    }
                }
                None => {
                    let inv = inv_mod(v, p);
                    pivots.insert(lead, r.iter().map(|(&c, &x)| (c, x * inv % p)).collect());
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// `dim H_k(F_p)` from integral data by the universal coefficient theorem.
pub fn mod_p_dims(betti: &[usize], torsion: &[Vec<u64>], p: u64) -> Vec<usize> {
    (0..betti.len())
        .map(|k| {
            let tk = torsion[k].iter().filter(|&&d| d % p == 0).count();
            let tprev = if k == 0 {
                0
            } else {
                torsion[k - 1].iter().filter(|&&d| d % p == 0).count()
            };
            betti[k] + tk + tprev
        })
        .collect()
}

/// `dim H_k(F_p)` straight from ranks of the boundary matrices mod `p`.
pub fn mod_p_dims_from_ranks(cc: &ChainComplex, p: u64) -> Vec<usize> {
    let l = cc.rank();
    let ranks: Vec<usize> = (0..=l).map(|k| rank_mod_p(cc.boundary(k), p)).collect();
    (0..=l)
        .map(|k| cc.dims()[k] - ranks[k] - if k < l { ranks[k + 1] } else { 0 })
        .collect()
}

pub fn homology_summary(cc: &ChainComplex) -> (Vec<usize>, Vec<Vec<u64>>) {
    let h = cc.homology().unwrap();
    (
        h.iter().map(|g| g.betti).collect(),
        h.iter().map(|g| g.torsion_u64()).collect(),
    )
}

/// Rank-1 closed forms with `λ² = a² + b > 0`: `a' = λ² - a²`.
/// Returns `a(t)` and the pole time for the `|a| > λ` branch.
pub struct RankOneOracle {
    pub lambda: f64,
    pub a0: f64,
}

impl RankOneOracle {
    pub fn new(a0: f64, b0: f64) -> Self {
        let l2 = a0 * a0 + b0;
        assert!(l2 > 0.0);
        RankOneOracle {
            lambda: l2.sqrt(),
            a0,
        }
    }

    pub fn a(&self, t: f64) -> f64 {
        let l = self.lambda;
        if self.a0.abs() < l {
            // a = λ tanh(λ (t - t0)), tanh(-λ t0) = a0 / λ
            let t0 = -(self.a0 / l).atanh() / l;
            l * (l * (t - t0)).tanh()
        } else {
            let t0 = -(l / self.a0).atanh() / l;
            l / (l * (t - t0)).tanh()
        }
    }

    pub fn b(&self, t: f64) -> f64 {
        let a = self.a(t);
        self.lambda * self.lambda - a * a
    }

    /// Forward pole of the coth branch, if any.
    pub fn pole(&self) -> Option<f64> {
        let l = self.lambda;
        (self.a0 < -l).then(|| -(l / self.a0).atanh() / l)
    }
}
