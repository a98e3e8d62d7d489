//! Column-major sparse integer matrices.

use std::collections::BTreeMap;
use std::fmt::Write as _;

/// A sparse integer matrix stored by columns; each column is sorted by row
/// and holds no zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(u32, i64)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    /// Builds from unsorted columns; duplicate rows are summed and zeros dropped.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(u32, i64)>>) -> Self {
        let cols = columns.len();
        let columns = columns
            .into_iter()
            .map(|c| {
                let mut acc: BTreeMap<u32, i64> = BTreeMap::new();
                for (r, v) in c {
                    assert!((r as usize) < rows, "row {r} out of range");
                    *acc.entry(r).or_default() += v;
                }
                acc.into_iter().filter(|&(_, v)| v != 0).collect()
            })
            .collect();
        SparseMatrix {
            rows,
            cols,
            columns,
        }
    }

    pub fn from_dense(m: &[Vec<i64>]) -> Self {
        let rows = m.len();
        let cols = m.first().map_or(0, |r| r.len());
        let columns = (0..cols)
            .map(|j| {
                (0..rows)
                    .filter(|&i| m[i][j] != 0)
                    .map(|i| (i as u32, m[i][j]))
                    .collect()
            })
            .collect();
        SparseMatrix {
            rows,
            cols,
            columns,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &[(u32, i64)] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Vec<(u32, i64)>] {
        &self.columns
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        let col = &self.columns[j];
        col.binary_search_by_key(&(i as u32), |&(r, _)| r)
            .map_or(0, |k| col[k].1)
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0; self.cols]; self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, v) in col {
                m[i as usize][j] = v;
            }
        }
        m
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut columns = vec![Vec::new(); self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, v) in col {
                columns[i as usize].push((j as u32, v));
            }
        }
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            columns,
        }
    }

    /// Row lists: entry `i` holds `(col, value)` pairs sorted by column.
    pub fn row_lists(&self) -> Vec<Vec<(u32, i64)>> {
        self.transpose().columns
    }

    /// Product `self * rhs`. Panics on overflow.
    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let columns = rhs
            .columns
            .iter()
            .map(|c| {
                let mut acc: BTreeMap<u32, i64> = BTreeMap::new();
                for &(k, x) in c {
                    for &(i, y) in &self.columns[k as usize] {
                        let e = acc.entry(i).or_default();
                        *e = x
                            .checked_mul(y)
                            .and_then(|p| e.checked_add(p))
                            .expect("overflow in sparse product");
                    }
                }
                acc.into_iter().filter(|&(_, v)| v != 0).collect()
            })
            .collect();
        SparseMatrix {
            rows: self.rows,
            cols: rhs.cols,
            columns,
        }
    }

    /// `self * v` for a sparse vector given as sorted `(index, value)` pairs.
    pub fn apply(&self, v: &BTreeMap<usize, i64>) -> BTreeMap<usize, i64> {
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        for (&k, &x) in v {
            for &(i, y) in &self.columns[k] {
                *acc.entry(i as usize).or_default() += x * y;
            }
        }
        acc.retain(|_, v| *v != 0);
        acc
    }

    /// Nonzero entries as `(row, col, value)` sorted by row then column.
    pub fn triplets(&self) -> Vec<(usize, usize, i64)> {
        let mut t: Vec<(usize, usize, i64)> = self
            .columns
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |&(i, v)| (i as usize, j, v)))
            .collect();
        t.sort_unstable();
        t
    }

    /// One `row col value` line per nonzero entry, in [`triplets`](Self::triplets) order.
    pub fn to_triplet_text(&self) -> String {
        let mut s = String::new();
        for (i, j, v) in self.triplets() {
            writeln!(s, "{i} {j} {v}").unwrap();
        }
        s
    }
}
