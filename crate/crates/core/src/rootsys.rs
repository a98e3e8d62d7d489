//! Root systems of the finite simple types and their Cartan data.
//!
//! Vertices follow the Bourbaki numbering. Indices in the API are 0-based,
//! so vertex `i` here is the simple root `α_{i+1}`.
//!
//! | type  | diagram (1-based)                       | notes                  |
//! |-------|-----------------------------------------|------------------------|
//! | A_l   | 1 - 2 - ... - l                         |                        |
//! | B_l   | 1 - ... - (l-1) => l                    | α_l short              |
//! | C_l   | 1 - ... - (l-1) <= l                    | α_l long               |
//! | D_l   | 1 - ... - (l-2), (l-2) - (l-1), (l-2) - l | l ≥ 3               |
//! | E_l   | 1 - 3 - 4 - ... - l, 2 - 4              | l = 6, 7, 8            |
//! | F_4   | 1 - 2 => 3 - 4                          | α_1, α_2 long          |
//! | G_2   | 1 <= 2                                  | α_1 short              |
//!
//! The Cartan matrix is `C[i][j] = <α_i, α_j^∨>`, so a simple reflection acts
//! on the simple-root basis by `s_i(α_j) = α_j - C[j][i] α_i`.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CartanType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            CartanType::A => 'A',
            CartanType::B => 'B',
            CartanType::C => 'C',
            CartanType::D => 'D',
            CartanType::E => 'E',
            CartanType::F => 'F',
            CartanType::G => 'G',
        };
        write!(f, "{c}")
    }
}

/// A type label such as `A2` or `F4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeLabel {
    pub kind: CartanType,
    pub rank: usize,
}

impl TypeLabel {
    pub fn new(kind: CartanType, rank: usize) -> Self {
        TypeLabel { kind, rank }
    }

    /// Whether `(kind, rank)` names a finite simple type.
    pub fn is_valid(&self) -> bool {
        match self.kind {
            CartanType::A => self.rank >= 1,
            CartanType::B | CartanType::C => self.rank >= 2,
            CartanType::D => self.rank >= 3,
            CartanType::E => (6..=8).contains(&self.rank),
            CartanType::F => self.rank == 4,
            CartanType::G => self.rank == 2,
        }
    }

    pub fn positive_root_count(&self) -> usize {
        let l = self.rank;
        match self.kind {
            CartanType::A => l * (l + 1) / 2,
            CartanType::B | CartanType::C => l * l,
            CartanType::D => l * (l - 1),
            CartanType::E => match l {
                6 => 36,
                7 => 63,
                _ => 120,
            },
            CartanType::F => 24,
            CartanType::G => 6,
        }
    }

    pub fn weyl_order(&self) -> u128 {
        let l = self.rank as u128;
        let fact = |n: u128| (1..=n).product::<u128>();
        match self.kind {
            CartanType::A => fact(l + 1),
            CartanType::B | CartanType::C => (1u128 << l) * fact(l),
            CartanType::D => (1u128 << (l - 1)) * fact(l),
            CartanType::E => match l {
                6 => 51_840,
                7 => 2_903_040,
                _ => 696_729_600,
            },
            CartanType::F => 1152,
            CartanType::G => 12,
        }
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind, self.rank)
    }
}

impl FromStr for TypeLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let head = chars
            .next()
            .ok_or_else(|| Error::Parse("empty type label".into()))?;
        let kind = match head.to_ascii_uppercase() {
            'A' => CartanType::A,
            'B' => CartanType::B,
            'C' => CartanType::C,
            'D' => CartanType::D,
            'E' => CartanType::E,
            'F' => CartanType::F,
            'G' => CartanType::G,
            _ => return Err(Error::Parse(format!("unknown type letter in {s:?}"))),
        };
        let rank: usize = chars
            .as_str()
            .trim_start_matches('_')
            .parse()
            .map_err(|_| Error::Parse(format!("bad rank in type label {s:?}")))?;
        Ok(TypeLabel { kind, rank })
    }
}

/// Size limits applied when building root systems and Weyl groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub max_rank: usize,
    pub max_weyl_order: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_rank: 6,
            max_weyl_order: 1_000_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    label: TypeLabel,
    cartan: Vec<Vec<i32>>,
    coxeter_orders: Vec<Vec<u32>>,
    /// Positive roots followed by their negatives, in the simple-root basis.
    roots: Vec<Vec<i32>>,
    root_index: HashMap<Vec<i32>, usize>,
    /// `reflections[i][r]` is the index of `s_i(roots[r])`.
    reflections: Vec<Vec<u16>>,
}

/// Builds a root system with the default caps.
pub fn build_root_system(kind: CartanType, rank: usize) -> Result<RootSystem> {
    RootSystem::with_caps(TypeLabel::new(kind, rank), &Caps::default())
}

fn cartan_matrix(label: TypeLabel) -> Vec<Vec<i32>> {
    let l = label.rank;
    let mut c = vec![vec![0i32; l]; l];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize| {
        c[i][j] = -1;
        c[j][i] = -1;
    };
    match label.kind {
        CartanType::A | CartanType::B | CartanType::C => {
            for i in 0..l - 1 {
                link(i, i + 1);
            }
        }
        CartanType::D => {
            for i in 0..l - 2 {
                link(i, i + 1);
            }
            link(l - 3, l - 1);
        }
        CartanType::E => {
            link(0, 2);
            link(1, 3);
            for i in 2..l - 1 {
                link(i, i + 1);
            }
        }
        CartanType::F => {
            link(0, 1);
            link(1, 2);
            link(2, 3);
        }
        CartanType::G => link(0, 1),
    }
    match label.kind {
        CartanType::B => c[l - 2][l - 1] = -2,
        CartanType::C => c[l - 1][l - 2] = -2,
        CartanType::F => c[1][2] = -2,
        CartanType::G => c[1][0] = -3,
        _ => {}
    }
    c
}

fn coxeter_order(cij: i32, cji: i32) -> u32 {
    match cij * cji {
        0 => 2,
        1 => 3,
        2 => 4,
        3 => 6,
        p => unreachable!("Cartan product {p} outside the finite range"),
    }
}

impl RootSystem {
    pub fn with_caps(label: TypeLabel, caps: &Caps) -> Result<Self> {
        if !label.is_valid() {
            return Err(Error::UnsupportedType {
                kind: label.kind,
                rank: label.rank,
            });
        }
        if label.rank > caps.max_rank {
            return Err(Error::RankCapExceeded {
                rank: label.rank,
                cap: caps.max_rank,
            });
        }
        Ok(Self::from_cartan(label, cartan_matrix(label)))
    }

    fn from_cartan(label: TypeLabel, cartan: Vec<Vec<i32>>) -> Self {
        let l = label.rank;
        let coxeter_orders = (0..l)
            .map(|i| {
                (0..l)
                    .map(|j| {
                        if i == j {
                            1
                        } else {
                            coxeter_order(cartan[i][j], cartan[j][i])
                        }
                    })
                    .collect()
            })
            .collect();

        let positive = positive_roots_by_strings(&cartan);
        let mut roots = positive.clone();
        roots.extend(positive.iter().map(|r| r.iter().map(|x| -x).collect()));
        let root_index: HashMap<_, _> = roots
            .iter()
            .enumerate()
            .map(|(k, r)| (r.clone(), k))
            .collect();

        let reflections = (0..l)
            .map(|i| {
                roots
                    .iter()
                    .map(|r| {
                        let img = reflect_vec(&cartan, i, r);
                        root_index[&img] as u16
                    })
                    .collect()
            })
            .collect();

        RootSystem {
            label,
            cartan,
            coxeter_orders,
            roots,
            root_index,
            reflections,
        }
    }

    pub fn label(&self) -> TypeLabel {
        self.label
    }

    pub fn rank(&self) -> usize {
        self.label.rank
    }

    pub fn is_type_a(&self) -> bool {
        self.label.kind == CartanType::A
    }

    pub fn cartan(&self) -> &[Vec<i32>] {
        &self.cartan
    }

    /// `C_{i,j}` with 0-based indices.
    #[inline]
    pub fn c(&self, i: usize, j: usize) -> i32 {
        self.cartan[i][j]
    }

    /// Coxeter exponent `m_ij` (1 on the diagonal).
    pub fn coxeter_order(&self, i: usize, j: usize) -> u32 {
        self.coxeter_orders[i][j]
    }

    pub fn coxeter_orders(&self) -> &[Vec<u32>] {
        &self.coxeter_orders
    }

    pub fn num_positive(&self) -> usize {
        self.roots.len() / 2
    }

    pub fn positive_roots(&self) -> &[Vec<i32>] {
        &self.roots[..self.num_positive()]
    }

    /// All roots: positives first, then negatives in the same order.
    pub fn roots(&self) -> &[Vec<i32>] {
        &self.roots
    }

    pub fn root_index(&self, root: &[i32]) -> Option<usize> {
        self.root_index.get(root).copied()
    }

    pub fn is_positive_index(&self, r: usize) -> bool {
        r < self.num_positive()
    }

    /// The index of `α_i` in [`roots`](Self::roots).
    pub fn simple_root_index(&self, i: usize) -> usize {
        i
    }

    /// Permutation of the root list induced by `s_i`.
    pub fn reflection_perm(&self, i: usize) -> &[u16] {
        &self.reflections[i]
    }

    /// `<β, α_i^∨>` for `β` in the simple-root basis.
    pub fn pairing(&self, beta: &[i32], i: usize) -> i32 {
        beta.iter()
            .zip(&self.cartan)
            .map(|(b, row)| b * row[i])
            .sum()
    }

    pub fn reflect(&self, i: usize, beta: &[i32]) -> Vec<i32> {
        reflect_vec(&self.cartan, i, beta)
    }

    /// Checks that every simple reflection permutes the root set.
    pub fn self_test(&self) -> bool {
        let all: HashSet<&Vec<i32>> = self.roots.iter().collect();
        (0..self.rank()).all(|i| {
            let image: HashSet<Vec<i32>> = self.roots.iter().map(|r| self.reflect(i, r)).collect();
            image.len() == all.len() && image.iter().all(|r| all.contains(r))
        })
    }
}

fn reflect_vec(cartan: &[Vec<i32>], i: usize, beta: &[i32]) -> Vec<i32> {
    let p: i32 = beta.iter().zip(cartan).map(|(b, row)| b * row[i]).sum();
    let mut out = beta.to_vec();
    out[i] -= p;
    out
}

/// Positive roots grown height by height: `β + α_i` is a root exactly when the
/// `α_i`-string through `β` extends upward, i.e. `p - <β, α_i^∨> > 0` where `p`
/// counts how far the string reaches below `β`.
fn positive_roots_by_strings(cartan: &[Vec<i32>]) -> Vec<Vec<i32>> {
    let l = cartan.len();
    let mut known: HashSet<Vec<i32>> = HashSet::new();
    let mut layer: Vec<Vec<i32>> = (0..l)
        .map(|i| {
            let mut v = vec![0; l];
            v[i] = 1;
            v
        })
        .collect();
    let mut all = Vec::new();
    while !layer.is_empty() {
        // Simple roots come first; inside a height, larger coordinate vectors first.
        layer.sort_by(|a, b| b.cmp(a));
        for r in &layer {
            known.insert(r.clone());
        }
        all.extend(layer.iter().cloned());
        let mut next: Vec<Vec<i32>> = Vec::new();
        for beta in &layer {
            for i in 0..l {
                let is_simple_i = beta.iter().enumerate().all(|(k, &x)| x == (k == i) as i32);
                if is_simple_i {
                    continue;
                }
                let mut p = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if known.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let pair: i32 = beta.iter().zip(cartan).map(|(b, row)| b * row[i]).sum();
                if p - pair > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if !next.contains(&up) {
                        next.push(up);
                    }
                }
            }
        }
        layer = next;
    }
    all
}
