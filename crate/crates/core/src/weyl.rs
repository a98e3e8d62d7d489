//! Fully enumerated Weyl groups.
//!
//! Elements are stored as permutations of the root list of a [`RootSystem`]
//! and indexed in shortlex order of their lexicographically least reduced
//! word, so `ElemId(0)` is the identity and ids sort by length first.

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::rootsys::{Caps, RootSystem};

/// A set of simple roots, one bit per vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct VertexSet(pub u32);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn full(rank: usize) -> Self {
        VertexSet(((1u64 << rank) - 1) as u32)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        VertexSet(it.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    #[inline]
    pub fn with(self, i: usize) -> Self {
        VertexSet(self.0 | (1 << i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.contains(i))
    }

    /// Lexicographic order on the ascending index lists.
    pub fn lex_cmp(self, other: VertexSet) -> Ordering {
        self.iter().cmp(other.iter())
    }

    /// All subsets of `{0, .., rank-1}` with exactly `k` elements, in lex order.
    pub fn subsets_of_size(rank: usize, k: usize) -> Vec<VertexSet> {
        let mut out: Vec<VertexSet> = (0u32..(1 << rank))
            .map(VertexSet)
            .filter(|s| s.len() == k)
            .collect();
        out.sort_by(|a, b| a.lex_cmp(*b));
        out
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, i) in self.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElemId(pub u32);

impl ElemId {
    pub const IDENTITY: ElemId = ElemId(0);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone)]
pub struct WeylGroup {
    rank: usize,
    num_positive: usize,
    perms: Vec<Box<[u16]>>,
    index: HashMap<Box<[u16]>, u32>,
    lengths: Vec<u32>,
    words: Vec<Vec<u8>>,
    left: Vec<Vec<u32>>,
    right: Vec<Vec<u32>>,
    inverse: Vec<u32>,
}

pub fn enumerate_weyl(rs: &RootSystem) -> Result<WeylGroup> {
    WeylGroup::enumerate(rs, Caps::default().max_weyl_order)
}

fn compose(a: &[u16], b: &[u16]) -> Box<[u16]> {
    b.iter().map(|&x| a[x as usize]).collect()
}

impl WeylGroup {
    /// Closes the simple reflections under multiplication, failing once more
    /// than `cap` elements have been found.
    pub fn enumerate(rs: &RootSystem, cap: usize) -> Result<Self> {
        let rank = rs.rank();
        let npos = rs.num_positive();
        let nroots = rs.roots().len();
        let gens: Vec<&[u16]> = (0..rank).map(|i| rs.reflection_perm(i)).collect();

        let identity: Box<[u16]> = (0..nroots as u16).collect();
        let mut perms = vec![identity.clone()];
        let mut index: HashMap<Box<[u16]>, u32> = HashMap::new();
        index.insert(identity, 0);
        let mut depth = vec![0u32];
        let mut queue = VecDeque::from([0usize]);
        while let Some(w) = queue.pop_front() {
            for g in &gens {
                let p = compose(g, &perms[w]);
                if !index.contains_key(&p) {
                    if perms.len() >= cap {
                        return Err(Error::SizeCapExceeded { cap });
                    }
                    index.insert(p.clone(), perms.len() as u32);
                    perms.push(p);
                    depth.push(depth[w] + 1);
                    queue.push_back(perms.len() - 1);
                }
            }
        }

        // Length as the number of positive roots sent negative.
        let inversions: Vec<u32> = perms
            .iter()
            .map(|p| p[..npos].iter().filter(|&&x| x as usize >= npos).count() as u32)
            .collect();
        debug_assert_eq!(inversions, depth);

        // Lexicographically least reduced words: the first letter is the
        // smallest left descent. BFS order is by nondecreasing length.
        let n = perms.len();
        let mut words: Vec<Vec<u8>> = vec![Vec::new(); n];
        for w in 1..n {
            let (i, rest) = (0..rank)
                .find_map(|i| {
                    let u = index[&compose(gens[i], &perms[w])] as usize;
                    (inversions[u] < inversions[w]).then_some((i, u))
                })
                .expect("non-identity element has a left descent");
            let mut word = Vec::with_capacity(inversions[w] as usize);
            word.push(i as u8);
            word.extend_from_slice(&words[rest]);
            words[w] = word;
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            inversions[a]
                .cmp(&inversions[b])
                .then_with(|| words[a].cmp(&words[b]))
        });
        let perms: Vec<Box<[u16]>> = order.iter().map(|&k| perms[k].clone()).collect();
        let words: Vec<Vec<u8>> = order.iter().map(|&k| words[k].clone()).collect();
        let lengths: Vec<u32> = order.iter().map(|&k| inversions[k]).collect();
        let index: HashMap<Box<[u16]>, u32> = perms
            .iter()
            .enumerate()
            .map(|(k, p)| (p.clone(), k as u32))
            .collect();

        let left = gens
            .iter()
            .map(|g| perms.iter().map(|p| index[&compose(g, p)]).collect())
            .collect();
        let right = gens
            .iter()
            .map(|g| perms.iter().map(|p| index[&compose(p, g)]).collect())
            .collect();
        let inverse = perms
            .iter()
            .map(|p| {
                let mut inv = vec![0u16; p.len()];
                for (k, &x) in p.iter().enumerate() {
                    inv[x as usize] = k as u16;
                }
                index[inv.as_slice()]
            })
            .collect();

        Ok(WeylGroup {
            rank,
            num_positive: npos,
            perms,
            index,
            lengths,
            words,
            left,
            right,
            inverse,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> usize {
        self.perms.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = ElemId> {
        (0..self.perms.len() as u32).map(ElemId)
    }

    pub fn identity(&self) -> ElemId {
        ElemId::IDENTITY
    }

    pub fn generator(&self, i: usize) -> ElemId {
        ElemId(self.left[i][0])
    }

    pub fn length(&self, w: ElemId) -> u32 {
        self.lengths[w.index()]
    }

    /// Lexicographically least reduced word, 0-based generator indices.
    pub fn word(&self, w: ElemId) -> &[u8] {
        &self.words[w.index()]
    }

    /// The root permutation of `w`.
    pub fn perm(&self, w: ElemId) -> &[u16] {
        &self.perms[w.index()]
    }

    pub fn lookup(&self, perm: &[u16]) -> Option<ElemId> {
        self.index.get(perm).map(|&k| ElemId(k))
    }

    #[inline]
    pub fn left_mul_gen(&self, i: usize, w: ElemId) -> ElemId {
        ElemId(self.left[i][w.index()])
    }

    #[inline]
    pub fn right_mul_gen(&self, w: ElemId, i: usize) -> ElemId {
        ElemId(self.right[i][w.index()])
    }

    pub fn mul(&self, a: ElemId, b: ElemId) -> ElemId {
        let p = compose(self.perm(a), self.perm(b));
        ElemId(self.index[&p])
    }

    pub fn inverse(&self, w: ElemId) -> ElemId {
        ElemId(self.inverse[w.index()])
    }

    pub fn from_word(&self, word: &[usize]) -> ElemId {
        word.iter()
            .rev()
            .fold(self.identity(), |w, &i| self.left_mul_gen(i, w))
    }

    /// `ℓ(w s_i) < ℓ(w)`, equivalently `w(α_i) < 0`.
    #[inline]
    pub fn has_right_descent(&self, w: ElemId, i: usize) -> bool {
        self.perms[w.index()][i] as usize >= self.num_positive
    }

    /// `ℓ(s_i w) < ℓ(w)`.
    pub fn has_left_descent(&self, w: ElemId, i: usize) -> bool {
        self.has_right_descent(self.inverse(w), i)
    }

    /// Writes `w = w• · w_•` with `w•` minimal in `w W_S` and `w_• ∈ W_S`.
    pub fn decompose(&self, subset: VertexSet, w: ElemId) -> (ElemId, ElemId) {
        let mut u = w;
        'outer: loop {
            for s in subset.iter() {
                if self.has_right_descent(u, s) {
                    u = self.right_mul_gen(u, s);
                    continue 'outer;
                }
            }
            break;
        }
        (u, self.mul(self.inverse(u), w))
    }

    pub fn is_minimal_rep(&self, subset: VertexSet, w: ElemId) -> bool {
        subset.iter().all(|s| !self.has_right_descent(w, s))
    }

    /// The elements of `W_S`, sorted by id.
    pub fn parabolic_subgroup(&self, subset: VertexSet) -> Vec<ElemId> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut out = vec![self.identity()];
        let mut k = 0;
        while k < out.len() {
            let w = out[k];
            for s in subset.iter() {
                let v = self.right_mul_gen(w, s);
                if !seen[v.index()] {
                    seen[v.index()] = true;
                    out.push(v);
                }
            }
            k += 1;
        }
        out.sort();
        out
    }

    pub fn parabolic_cosets(&self, subset: VertexSet) -> ParabolicCosets {
        let members = self.parabolic_subgroup(subset);
        let reps: Vec<ElemId> = self
            .elements()
            .filter(|&w| self.is_minimal_rep(subset, w))
            .collect();
        let mut rep_pos = vec![u32::MAX; self.order()];
        for (k, r) in reps.iter().enumerate() {
            rep_pos[r.index()] = k as u32;
        }
        let split: Vec<(ElemId, ElemId)> =
            self.elements().map(|w| self.decompose(subset, w)).collect();
        let coset_of = split.iter().map(|(r, _)| rep_pos[r.index()]).collect();
        ParabolicCosets {
            subset,
            members,
            reps,
            split,
            coset_of,
        }
    }

    /// Matrix of `w` on the simple-root basis; column `j` is `w(α_j)`.
    pub fn root_matrix(&self, rs: &RootSystem, w: ElemId) -> Vec<Vec<i32>> {
        let p = self.perm(w);
        let cols: Vec<&Vec<i32>> = (0..self.rank)
            .map(|j| &rs.roots()[p[rs.simple_root_index(j)] as usize])
            .collect();
        (0..self.rank)
            .map(|i| cols.iter().map(|c| c[i]).collect())
            .collect()
    }

    /// Conjugacy classes ordered by their least element.
    pub fn conjugacy_classes(&self) -> Vec<ConjugacyClass> {
        let mut class_of = vec![u32::MAX; self.order()];
        let mut classes = Vec::new();
        for w in self.elements() {
            if class_of[w.index()] != u32::MAX {
                continue;
            }
            let id = classes.len() as u32;
            class_of[w.index()] = id;
            let mut members = vec![w];
            let mut k = 0;
            while k < members.len() {
                let x = members[k];
                for i in 0..self.rank {
                    let y = self.right_mul_gen(self.left_mul_gen(i, x), i);
                    if class_of[y.index()] == u32::MAX {
                        class_of[y.index()] = id;
                        members.push(y);
                    }
                }
                k += 1;
            }
            classes.push(ConjugacyClass {
                representative: w,
                size: members.len(),
            });
        }
        classes
    }

    pub fn format_word(&self, w: ElemId) -> String {
        format_word(self.word(w))
    }

    /// Parses `e`, `s1s2`, `s1 s2` or `1,2` into an element.
    pub fn parse_word(&self, text: &str) -> Result<ElemId> {
        let word = parse_word(text, self.rank)?;
        Ok(self.from_word(&word))
    }
}

pub fn format_word(word: &[u8]) -> String {
    if word.is_empty() {
        return "e".to_string();
    }
    word.iter().map(|i| format!("s{}", i + 1)).collect()
}

pub fn parse_word(text: &str, rank: usize) -> Result<Vec<usize>> {
    let t = text.trim();
    if t.is_empty() || t == "e" {
        return Ok(vec![]);
    }
    let mut out = Vec::new();
    for tok in t
        .split(|c: char| c == 's' || c == ',' || c.is_whitespace() || c == '*')
        .filter(|x| !x.is_empty())
    {
        let k: usize = tok
            .parse()
            .map_err(|_| Error::Parse(format!("bad generator {tok:?} in word {text:?}")))?;
        if k == 0 || k > rank {
            return Err(Error::Parse(format!(
                "generator s{k} out of range 1..={rank}"
            )));
        }
        out.push(k - 1);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConjugacyClass {
    pub representative: ElemId,
    pub size: usize,
}

/// The coset space `W / W_S` with its minimal representatives.
#[derive(Debug, Clone)]
pub struct ParabolicCosets {
    pub subset: VertexSet,
    /// Elements of `W_S`.
    pub members: Vec<ElemId>,
    /// Minimal-length coset representatives, sorted by id.
    pub reps: Vec<ElemId>,
    /// `split[w] = (w•, w_•)`.
    pub split: Vec<(ElemId, ElemId)>,
    coset_of: Vec<u32>,
}

impl ParabolicCosets {
    pub fn num_cosets(&self) -> usize {
        self.reps.len()
    }

    /// Position of the coset of `w` in [`reps`](Self::reps).
    pub fn coset_index(&self, w: ElemId) -> usize {
        self.coset_of[w.index()] as usize
    }

    pub fn decompose(&self, w: ElemId) -> (ElemId, ElemId) {
        self.split[w.index()]
    }
}
