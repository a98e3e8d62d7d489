//! The cellular chain complex of the compactified split Cartan subgroup.
//!
//! Degree `k` is spanned by cells `(D, w•)` where `D` is a colored diagram
//! with `l - k` colored vertices `S` and `w•` runs over minimal
//! representatives of `W / W_S`. Every basis cell carries orientation `+1`;
//! signs live in the coefficients.
//!
//! Basis order within a degree: colored set `S` in lexicographic order, then
//! the coset representative by [`ElemId`], then the red pattern as a bitmask.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::diagram::{boundary_pieces, oriented_action_word, ColoredDiagram, OrientedDiagram};
use crate::error::{Error, Result};
use crate::linalg::rational::{self, Q};
use crate::linalg::{smith_normal_form, SparseMatrix};
use crate::rootsys::RootSystem;
use crate::weyl::{ConjugacyClass, ElemId, ParabolicCosets, VertexSet, WeylGroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cell {
    pub diagram: ColoredDiagram,
    /// Minimal representative of the coset `w W_S`.
    pub coset: ElemId,
}

impl Cell {
    pub fn dimension(&self) -> usize {
        self.diagram.rank() - self.diagram.colored().len()
    }
}

/// A sparse integer chain in a fixed degree, keyed by basis index.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Chain {
    pub degree: usize,
    pub coeffs: BTreeMap<usize, i64>,
}

impl Chain {
    pub fn new(degree: usize) -> Self {
        Chain {
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn basis(degree: usize, index: usize) -> Self {
        let mut c = Chain::new(degree);
        c.coeffs.insert(index, 1);
        c
    }

    pub fn add(&mut self, index: usize, value: i64) {
        let e = self.coeffs.entry(index).or_insert(0);
        *e += value;
        if *e == 0 {
            self.coeffs.remove(&index);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scaled(&self, k: i64) -> Chain {
        let mut c = Chain::new(self.degree);
        if k != 0 {
            c.coeffs = self.coeffs.iter().map(|(&i, &v)| (i, v * k)).collect();
        }
        c
    }

    pub fn sub(&self, other: &Chain) -> Chain {
        let mut c = self.clone();
        for (&i, &v) in &other.coeffs {
            c.add(i, -v);
        }
        c
    }
}

/// Cells of one colored set inside a degree.
#[derive(Debug, Clone)]
struct Block {
    subset: VertexSet,
    offset: usize,
    cosets: ParabolicCosets,
}

#[derive(Debug, Clone)]
pub struct ChainComplex {
    rs: RootSystem,
    weyl: WeylGroup,
    /// `blocks[k]` lists the colored sets of degree `k` in basis order.
    blocks: Vec<Vec<Block>>,
    block_of: HashMap<VertexSet, (usize, usize)>,
    dims: Vec<usize>,
    /// `boundaries[k]` is `∂_k : M_k → M_{k-1}`; entry 0 is the zero map to the empty space.
    boundaries: Vec<SparseMatrix>,
}

pub fn build_complex(rs: &RootSystem, weyl: &WeylGroup) -> Result<ChainComplex> {
    ChainComplex::build(rs.clone(), weyl.clone())
}

impl ChainComplex {
    pub fn build(rs: RootSystem, weyl: WeylGroup) -> Result<Self> {
        let l = rs.rank();
        let mut blocks: Vec<Vec<Block>> = vec![Vec::new(); l + 1];
        let mut block_of = HashMap::new();
        let mut dims = vec![0; l + 1];
        for (k, degree_blocks) in blocks.iter_mut().enumerate() {
            let subsets = VertexSet::subsets_of_size(l, l - k);
            let built: Vec<ParabolicCosets> = subsets
                .par_iter()
                .map(|&s| weyl.parabolic_cosets(s))
                .collect();
            for (s, cosets) in subsets.into_iter().zip(built) {
                block_of.insert(s, (k, degree_blocks.len()));
                let size = cosets.num_cosets() << s.len();
                degree_blocks.push(Block {
                    subset: s,
                    offset: dims[k],
                    cosets,
                });
                dims[k] += size;
            }
        }
        let mut cc = ChainComplex {
            rs,
            weyl,
            blocks,
            block_of,
            dims,
            boundaries: Vec::new(),
        };
        let boundaries: Vec<SparseMatrix> = (0..=l)
            .into_par_iter()
            .map(|k| cc.assemble_boundary(k))
            .collect::<Result<_>>()?;
        cc.boundaries = boundaries;
        Ok(cc)
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn weyl(&self) -> &WeylGroup {
        &self.weyl
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    /// `dim M_k` for `k = 0..=l`.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `∂_k : M_k → M_{k-1}` for `1 ≤ k ≤ l`; `∂_0` is the zero map.
    pub fn boundary(&self, k: usize) -> &SparseMatrix {
        &self.boundaries[k]
    }

    pub fn index_of(&self, cell: &Cell) -> Option<usize> {
        let s = cell.diagram.colored();
        let &(k, b) = self.block_of.get(&s)?;
        let block = &self.blocks[k][b];
        let pos = block.cosets.reps.binary_search(&cell.coset).ok()?;
        Some(block.offset + (pos << s.len()) + cell.diagram.red_bits() as usize)
    }

    pub fn cell(&self, degree: usize, index: usize) -> Cell {
        let blocks = &self.blocks[degree];
        let b = blocks.partition_point(|x| x.offset <= index) - 1;
        let block = &blocks[b];
        let local = index - block.offset;
        let n = block.subset.len();
        Cell {
            diagram: ColoredDiagram::from_coloring(
                self.rank(),
                block.subset,
                (local & ((1 << n) - 1)) as u32,
            ),
            coset: block.cosets.reps[local >> n],
        }
    }

    pub fn cells(&self, degree: usize) -> Vec<Cell> {
        (0..self.dims[degree])
            .map(|i| self.cell(degree, i))
            .collect()
    }

    fn cosets(&self, s: VertexSet) -> &ParabolicCosets {
        let (k, b) = self.block_of[&s];
        &self.blocks[k][b].cosets
    }

    /// Moves `(D, w)` for an arbitrary `w` to its basis cell and sign.
    pub fn normalize(&self, diagram: ColoredDiagram, w: ElemId) -> (usize, i32) {
        let (rep, rest) = self.cosets(diagram.colored()).decompose(w);
        let od = oriented_action_word(
            &self.rs,
            self.weyl.word(rest),
            &OrientedDiagram::new(diagram, 1),
        )
        .expect("parabolic letters act on colored vertices");
        let idx = self
            .index_of(&Cell {
                diagram: od.diagram,
                coset: rep,
            })
            .expect("normalized cell lies in the basis");
        (idx, od.orientation)
    }

    fn assemble_boundary(&self, k: usize) -> Result<SparseMatrix> {
        if k == 0 {
            return Ok(SparseMatrix::zeros(0, self.dims[0]));
        }
        let columns: Vec<Vec<(u32, i64)>> = (0..self.dims[k])
            .into_par_iter()
            .map(|idx| {
                let cell = self.cell(k, idx);
                let pieces = boundary_pieces(&cell.diagram)?;
                Ok(pieces
                    .into_iter()
                    .map(|p| {
                        let (row, o) = self.normalize(p.diagram, cell.coset);
                        (row as u32, (p.sign * o) as i64)
                    })
                    .collect())
            })
            .collect::<Result<_>>()?;
        Ok(SparseMatrix::from_columns(self.dims[k - 1], columns))
    }

    pub fn boundary_of(&self, chain: &Chain) -> Chain {
        if chain.degree == 0 {
            return Chain::new(0);
        }
        Chain {
            degree: chain.degree - 1,
            coeffs: self.boundaries[chain.degree].apply(&chain.coeffs),
        }
    }

    /// Image of basis cell `index` of degree `k` under `w`, as `(index, sign)`.
    pub fn act_on_cell(&self, w: ElemId, degree: usize, index: usize) -> (usize, i32) {
        let cell = self.cell(degree, index);
        self.normalize(cell.diagram, self.weyl.mul(w, cell.coset))
    }

    /// The signed permutation of the degree-`k` basis induced by `w`.
    pub fn action_table(&self, w: ElemId, degree: usize) -> Vec<(usize, i32)> {
        (0..self.dims[degree])
            .map(|i| self.act_on_cell(w, degree, i))
            .collect()
    }

    pub fn weyl_action_on_chain(&self, w: ElemId, chain: &Chain) -> Chain {
        let mut out = Chain::new(chain.degree);
        for (&i, &v) in &chain.coeffs {
            let (j, s) = self.act_on_cell(w, chain.degree, i);
            out.add(j, v * s as i64);
        }
        out
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.dims.clone()
    }

    pub fn euler_characteristic(&self) -> i64 {
        alternating_sum(self.dims.iter().map(|&d| d as i64))
    }

    pub fn verify_d_squared(&self) -> bool {
        self.first_nonzero_square().is_none()
    }

    /// Smallest `k` with `∂_{k-1} ∂_k ≠ 0`.
    pub fn first_nonzero_square(&self) -> Option<usize> {
        (2..=self.rank()).find(|&k| !self.boundaries[k - 1].mul(&self.boundaries[k]).is_zero())
    }

    /// Checks `∂(s x) = s ∂(x)` for every simple reflection and basis cell.
    pub fn verify_equivariance(&self) -> bool {
        (0..self.rank()).into_par_iter().all(|i| {
            let s = self.weyl.generator(i);
            (1..=self.rank()).all(|k| {
                let below = self.action_table(s, k - 1);
                let here = self.action_table(s, k);
                (0..self.dims[k]).all(|x| {
                    let (sx, sign) = here[x];
                    let lhs = self.boundaries[k]
                        .column(sx)
                        .iter()
                        .map(|&(r, v)| (r as usize, v * sign as i64));
                    let mut lhs: BTreeMap<usize, i64> = lhs.collect();
                    for &(r, v) in self.boundaries[k].column(x) {
                        let (t, ts) = below[r as usize];
                        *lhs.entry(t).or_default() -= v * ts as i64;
                    }
                    lhs.values().all(|&v| v == 0)
                })
            })
        })
    }

    /// `c_l = Σ_w (-1)^ℓ(w) (uncolored, w)` and its boundary.
    pub fn top_cycle(&self) -> TopCycle {
        let l = self.rank();
        let d = ColoredDiagram::uncolored(l);
        let mut cycle = Chain::new(l);
        for w in self.weyl.elements() {
            let idx = self
                .index_of(&Cell {
                    diagram: d,
                    coset: w,
                })
                .expect("top cell");
            cycle.add(
                idx,
                if self.weyl.length(w).is_multiple_of(2) {
                    1
                } else {
                    -1
                },
            );
        }
        let boundary = self.boundary_of(&cycle);
        let half = boundary.coeffs.values().all(|v| v % 2 == 0).then(|| Chain {
            degree: boundary.degree,
            coeffs: boundary.coeffs.iter().map(|(&i, &v)| (i, v / 2)).collect(),
        });
        TopCycle {
            cycle,
            boundary,
            half,
        }
    }

    /// Integral homology in every degree.
    pub fn homology(&self) -> Result<Vec<HomologyGroup>> {
        if let Some(k) = self.first_nonzero_square() {
            return Err(Error::ComplexInconsistent { degree: k });
        }
        let l = self.rank();
        let forms: Vec<_> = (0..=l)
            .into_par_iter()
            .map(|k| smith_normal_form(&self.boundaries[k]))
            .collect();
        Ok((0..=l)
            .map(|k| {
                let rank_out = forms[k].rank();
                let (rank_in, torsion) = match forms.get(k + 1) {
                    Some(f) => (f.rank(), f.torsion()),
                    None => (0, Vec::new()),
                };
                HomologyGroup {
                    degree: k,
                    betti: self.dims[k] - rank_out - rank_in,
                    torsion,
                }
            })
            .collect())
    }

    /// Trace of `w` on `M_k`.
    pub fn chain_trace(&self, w: ElemId, degree: usize) -> i64 {
        (0..self.dims[degree])
            .map(|i| {
                let (j, s) = self.act_on_cell(w, degree, i);
                if i == j {
                    s as i64
                } else {
                    0
                }
            })
            .sum()
    }

    /// Character of `W` on `H_k(Q)`, one trace per conjugacy class.
    ///
    /// Uses exact rational arithmetic on dense matrices, so it is meant for
    /// small complexes.
    pub fn rational_character(&self, k: usize) -> Character {
        let to_q = |m: &SparseMatrix| -> Vec<Vec<Q>> {
            m.to_dense()
                .into_iter()
                .map(|r| r.into_iter().map(rational::q).collect())
                .collect()
        };
        let n = self.dims[k];
        let cycles = if k == 0 {
            identity_rows(n)
        } else {
            rational::kernel(&to_q(&self.boundaries[k]), n)
        };
        let bounds: Vec<Vec<Q>> = if k == self.rank() {
            Vec::new()
        } else {
            let d = &self.boundaries[k + 1];
            (0..d.cols())
                .map(|j| {
                    let mut v = vec![Q::zero(); n];
                    for &(r, x) in d.column(j) {
                        v[r as usize] = rational::q(x);
                    }
                    v
                })
                .collect()
        };
        // Boundaries first, so the greedy choice extends a basis of B_k to Z_k.
        let mut family = bounds;
        let b_count = family.len();
        family.extend(cycles);
        let chosen = rational::independent_subset(&family);
        let b_rank = chosen.iter().take_while(|&&i| i < b_count).count();
        let basis: Vec<Vec<Q>> = chosen.iter().map(|&i| family[i].clone()).collect();
        let dim = basis.len() - b_rank;

        let classes = self.weyl.conjugacy_classes();
        let traces = if dim == 0 {
            vec![BigInt::zero(); classes.len()]
        } else {
            // Restrict to rows where the basis stays independent, then invert.
            let rows_of_basis: Vec<Vec<Q>> = (0..n)
                .map(|i| basis.iter().map(|v| v[i].clone()).collect())
                .collect();
            let rows = row_basis(&rows_of_basis);
            let square: Vec<Vec<Q>> = rows.iter().map(|&r| rows_of_basis[r].clone()).collect();
            let inv = rational::inverse(&square).expect("basis restricted to pivot rows");
            classes
                .iter()
                .map(|c| {
                    let table = self.action_table(c.representative, k);
                    let mut tr = Q::zero();
                    for h in b_rank..basis.len() {
                        let mut image = vec![Q::zero(); n];
                        for (i, x) in basis[h].iter().enumerate() {
                            if !x.is_zero() {
                                let (j, s) = table[i];
                                image[j] += x * rational::q(s as i64);
                            }
                        }
                        let coeff: Q = rows.iter().zip(&inv[h]).map(|(&r, a)| a * &image[r]).sum();
                        tr += coeff;
                    }
                    assert!(tr.is_integer(), "character values are integers");
                    tr.to_integer()
                })
                .collect()
        };
        Character {
            degree: k,
            dimension: dim,
            classes: classes.into_iter().zip(traces).collect(),
            group_order: self.weyl.order(),
        }
    }
}

fn identity_rows(n: usize) -> Vec<Vec<Q>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Q::one() } else { Q::zero() })
                .collect()
        })
        .collect()
}

/// Indices of a maximal set of linearly independent rows.
fn row_basis(rows: &[Vec<Q>]) -> Vec<usize> {
    rational::independent_subset(rows)
}

fn alternating_sum<I: Iterator<Item = i64>>(it: I) -> i64 {
    it.enumerate()
        .map(|(k, x)| if k % 2 == 0 { x } else { -x })
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopCycle {
    pub cycle: Chain,
    pub boundary: Chain,
    /// `∂c_l / 2` when every coefficient is even.
    pub half: Option<Chain>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyGroup {
    pub degree: usize,
    pub betti: usize,
    /// Invariant factors greater than one, each dividing the next.
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn torsion_u64(&self) -> Vec<u64> {
        self.torsion
            .iter()
            .map(|d| d.to_u64().expect("torsion coefficient fits in u64"))
            .collect()
    }
}

pub fn euler_from_betti(groups: &[HomologyGroup]) -> i64 {
    alternating_sum(groups.iter().map(|g| g.betti as i64))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    pub degree: usize,
    pub dimension: usize,
    pub classes: Vec<(ConjugacyClass, BigInt)>,
    pub group_order: usize,
}

impl Character {
    pub fn trace_of_identity(&self) -> BigInt {
        self.classes
            .iter()
            .find(|(c, _)| c.representative == ElemId::IDENTITY)
            .map(|(_, t)| t.clone())
            .unwrap_or_default()
    }

    /// `<χ, ψ> = |W|^{-1} Σ_g χ(g) ψ(g)` for real-valued `ψ` given per class.
    pub fn inner_product(&self, other: &[BigInt]) -> BigRational {
        let total: BigInt = self
            .classes
            .iter()
            .zip(other)
            .map(|((c, t), o)| BigInt::from(c.size) * t * o)
            .sum();
        BigRational::new(total, BigInt::from(self.group_order))
    }

    pub fn traces(&self) -> Vec<BigInt> {
        self.classes.iter().map(|(_, t)| t.clone()).collect()
    }
}

/// The sign character `(-1)^ℓ(w)` per conjugacy class.
pub fn sign_character(weyl: &WeylGroup) -> Vec<BigInt> {
    weyl.conjugacy_classes()
        .iter()
        .map(|c| {
            BigInt::from(if weyl.length(c.representative).is_multiple_of(2) {
                1
            } else {
                -1
            })
        })
        .collect()
}

/// The reflection character: trace of `w` on the span of the simple roots.
pub fn reflection_character(rs: &RootSystem, weyl: &WeylGroup) -> Vec<BigInt> {
    weyl.conjugacy_classes()
        .iter()
        .map(|c| {
            let m = weyl.root_matrix(rs, c.representative);
            BigInt::from((0..rs.rank()).map(|i| m[i][i] as i64).sum::<i64>())
        })
        .collect()
}
