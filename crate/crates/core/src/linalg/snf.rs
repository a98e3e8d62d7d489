//! Smith normal form of integer matrices.
//!
//! Pivots are eliminated first on the sparse matrix in machine integers,
//! preferring units and short columns and rows. A non-unit pivot is used only
//! when it divides its whole row and column. Whatever remains (entries without
//! such a pivot, or everything after an overflow) is finished densely with
//! arbitrary-precision integers.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::sparse::SparseMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    /// Nonzero invariant factors `d_1 | d_2 | ...`, all positive.
    pub factors: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.factors
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }
}

pub fn smith_normal_form(m: &SparseMatrix) -> SmithForm {
    let mut elim = Eliminator::new(m);
    let pivots = elim.run();
    let mut diag = dense_diagonal(elim.remainder());
    diag.retain(|d| !d.is_zero());
    let units = pivots.iter().filter(|&&p| p == 1).count();
    diag.extend(pivots.into_iter().filter(|&p| p != 1).map(BigInt::from));
    normalize_divisibility(&mut diag);
    let mut factors = vec![BigInt::one(); units];
    factors.extend(diag);
    SmithForm { factors }
}

pub fn smith_normal_form_dense(m: &[Vec<BigInt>]) -> SmithForm {
    let mut diag = dense_diagonal(m.to_vec());
    diag.retain(|d| !d.is_zero());
    normalize_divisibility(&mut diag);
    SmithForm { factors: diag }
}

/// Replaces a list of positive diagonal entries by the invariant factors of
/// the diagonal matrix they form.
fn normalize_divisibility(d: &mut [BigInt]) {
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            if !(&d[j] % &d[i]).is_zero() {
                let g = d[i].gcd(&d[j]);
                let l = &d[i] / &g * &d[j];
                d[i] = g;
                d[j] = l;
            }
        }
    }
    d.sort();
}

/// Diagonalizes by unimodular operations, returning the absolute diagonal
/// (not yet in divisibility order).
fn dense_diagonal(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // Smallest nonzero entry of the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                    if x.abs().is_one() {
                        break;
                    }
                }
            }
            if best.is_some_and(|(bi, bj)| a[bi][bj].abs().is_one()) {
                break;
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut done = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                let (head, tail) = a.split_at_mut(i);
                let prow = &head[t];
                for (x, p) in tail[0].iter_mut().zip(prow).skip(t) {
                    *x -= &q * p;
                }
                if !a[i][t].is_zero() {
                    done = false;
                    if a[i][t].abs() < a[t][t].abs() {
                        a.swap(t, i);
                    }
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    let p = row[t].clone();
                    row[j] -= &q * p;
                }
                if !a[t][j].is_zero() {
                    done = false;
                    if a[t][j].abs() < a[t][t].abs() {
                        for row in a.iter_mut() {
                            row.swap(t, j);
                        }
                    }
                }
            }
            if done {
                break;
            }
        }
        out.push(a[t][t].abs());
        t += 1;
    }
    out
}

/// Sparse elimination of unit pivots in `i64`.
struct Eliminator {
    rows: Vec<Vec<(u32, i64)>>,
    col_rows: Vec<HashSet<u32>>,
    row_alive: Vec<bool>,
    col_alive: Vec<bool>,
    overflowed: bool,
}

impl Eliminator {
    fn new(m: &SparseMatrix) -> Self {
        let rows = m.row_lists();
        let mut col_rows = vec![HashSet::new(); m.cols()];
        for (i, r) in rows.iter().enumerate() {
            for &(j, _) in r {
                col_rows[j as usize].insert(i as u32);
            }
        }
        Eliminator {
            row_alive: vec![true; rows.len()],
            col_alive: vec![true; m.cols()],
            rows,
            col_rows,
            overflowed: false,
        }
    }

    /// Eliminates pivots until none are left and returns their absolute
    /// values. Unit pivots are exhausted before larger ones are considered.
    fn run(&mut self) -> Vec<i64> {
        let mut pivots = Vec::new();
        loop {
            let before = pivots.len();
            self.sweep(false, &mut pivots);
            if !self.overflowed {
                self.sweep(true, &mut pivots);
            }
            if self.overflowed || pivots.len() == before {
                return pivots;
            }
        }
    }

    /// One pass over the columns, shortest first. With `general` set, any
    /// entry of least absolute value in its column that divides its whole row
    /// and column may serve as pivot; otherwise only units do.
    fn sweep(&mut self, general: bool, pivots: &mut Vec<i64>) {
        let mut heap: BinaryHeap<Reverse<(usize, u32)>> = (0..self.col_rows.len())
            .filter(|&j| self.col_alive[j] && !self.col_rows[j].is_empty())
            .map(|j| Reverse((self.col_rows[j].len(), j as u32)))
            .collect();
        while let Some(Reverse((n, j))) = heap.pop() {
            let ju = j as usize;
            if !self.col_alive[ju] || self.col_rows[ju].len() != n || n == 0 {
                continue;
            }
            let Some(pi) = self.choose_pivot(j, general) else {
                continue;
            };
            let p = self.entry(pi, j).unsigned_abs() as i64;
            let touched = self.pivot(pi, j);
            if self.overflowed {
                return;
            }
            pivots.push(p);
            for c in touched {
                if self.col_alive[c as usize] {
                    heap.push(Reverse((self.col_rows[c as usize].len(), c)));
                }
            }
        }
    }

    fn choose_pivot(&self, j: u32, general: bool) -> Option<usize> {
        let col = &self.col_rows[j as usize];
        let min = col
            .iter()
            .map(|&i| self.entry(i as usize, j).unsigned_abs())
            .min()?;
        if min != 1
            && (!general
                || col
                    .iter()
                    .any(|&i| !self.entry(i as usize, j).unsigned_abs().is_multiple_of(min)))
        {
            return None;
        }
        col.iter()
            .map(|&i| i as usize)
            .filter(|&i| self.entry(i, j).unsigned_abs() == min)
            .filter(|&i| {
                min == 1
                    || self.rows[i]
                        .iter()
                        .all(|&(_, v)| v.unsigned_abs() % min == 0)
            })
            .min_by_key(|&i| (self.rows[i].len(), i))
    }

    fn entry(&self, i: usize, j: u32) -> i64 {
        let r = &self.rows[i];
        r.binary_search_by_key(&j, |&(c, _)| c)
            .map_or(0, |k| r[k].1)
    }

    /// Clears column `j` using the entry in row `pi`, then retires both; the
    /// pivot divides its row, so clearing the row by column operations
    /// leaves the rest of the matrix alone.
    /// Returns the columns whose counts changed.
    fn pivot(&mut self, pi: usize, j: u32) -> Vec<u32> {
        let p = self.entry(pi, j);
        let prow = std::mem::take(&mut self.rows[pi]);
        let others: Vec<u32> = self.col_rows[j as usize]
            .iter()
            .copied()
            .filter(|&i| i as usize != pi)
            .collect();
        let mut touched: Vec<u32> = Vec::new();
        let mut delta = Delta::default();
        for i in others {
            let iu = i as usize;
            // p divides every entry of its column.
            let q = self.entry(iu, j) / p;
            delta.added.clear();
            delta.removed.clear();
            let Some(new_row) = sub_scaled(&self.rows[iu], &prow, q, &mut delta) else {
                self.overflowed = true;
                break;
            };
            for &c in &delta.added {
                self.col_rows[c as usize].insert(i);
            }
            for &c in &delta.removed {
                self.col_rows[c as usize].remove(&i);
            }
            touched.extend_from_slice(&delta.added);
            touched.extend_from_slice(&delta.removed);
            self.rows[iu] = new_row;
        }
        if self.overflowed {
            self.rows[pi] = prow;
            return Vec::new();
        }
        for &(c, _) in &prow {
            self.col_rows[c as usize].remove(&(pi as u32));
            touched.push(c);
        }
        self.row_alive[pi] = false;
        self.col_alive[j as usize] = false;
        touched.sort_unstable();
        touched.dedup();
        touched.retain(|&c| c != j);
        touched
    }

    /// The live part of the matrix as a dense big-integer array.
    fn remainder(&self) -> Vec<Vec<BigInt>> {
        let live_cols: Vec<usize> = (0..self.col_alive.len())
            .filter(|&j| self.col_alive[j] && !self.col_rows[j].is_empty())
            .collect();
        let mut pos = vec![usize::MAX; self.col_alive.len()];
        for (k, &j) in live_cols.iter().enumerate() {
            pos[j] = k;
        }
        self.rows
            .iter()
            .enumerate()
            .filter(|(i, r)| self.row_alive[*i] && !r.is_empty())
            .map(|(_, r)| {
                let mut dense = vec![BigInt::zero(); live_cols.len()];
                for &(c, v) in r {
                    dense[pos[c as usize]] = BigInt::from(v);
                }
                dense
            })
            .collect()
    }
}

/// Columns that became nonzero or cancelled in a row update.
#[derive(Default)]
struct Delta {
    added: Vec<u32>,
    removed: Vec<u32>,
}

/// `a - q * b` on sorted sparse rows, or `None` on overflow.
fn sub_scaled(
    a: &[(u32, i64)],
    b: &[(u32, i64)],
    q: i64,
    delta: &mut Delta,
) -> Option<Vec<(u32, i64)>> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut x, mut y) = (0, 0);
    while x < a.len() || y < b.len() {
        let take_a = y == b.len() || (x < a.len() && a[x].0 < b[y].0);
        let take_b = x == a.len() || (y < b.len() && b[y].0 < a[x].0);
        if take_a {
            out.push(a[x]);
            x += 1;
        } else if take_b {
            out.push((b[y].0, q.checked_mul(b[y].1)?.checked_neg()?));
            delta.added.push(b[y].0);
            y += 1;
        } else {
            let v = a[x].1.checked_sub(q.checked_mul(b[y].1)?)?;
            if v != 0 {
                out.push((a[x].0, v));
            } else {
                delta.removed.push(a[x].0);
            }
            x += 1;
            y += 1;
        }
    }
    Some(out)
}
