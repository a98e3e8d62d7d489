//! Colored and signed-colored Dynkin diagrams.
//!
//! A colored diagram marks each simple root as uncolored, red or blue. Red
//! stands for the character value `-1` and blue for `+1`. Signed-colored
//! diagrams additionally label uncolored vertices with `+`, `-` or `0`.
//!
//! Text form: one character per vertex in Bourbaki order, drawn from
//! `u R B + - 0`. For example `Ru` is a red first vertex followed by an
//! uncolored one.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rootsys::RootSystem;
use crate::weyl::VertexSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Color {
    Uncolored,
    Red,
    Blue,
}

/// A colored diagram stored as two bitmasks; `red` is a subset of `colored`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ColoredDiagram {
    rank: u8,
    colored: VertexSet,
    red: VertexSet,
}

impl ColoredDiagram {
    pub fn uncolored(rank: usize) -> Self {
        ColoredDiagram {
            rank: rank as u8,
            colored: VertexSet::EMPTY,
            red: VertexSet::EMPTY,
        }
    }

    /// Diagram with colored set `colored`; bit `k` of `red_bits` (counted over
    /// the colored vertices in increasing order) marks the k-th one red.
    pub fn from_coloring(rank: usize, colored: VertexSet, red_bits: u32) -> Self {
        let red = VertexSet::from_indices(
            colored
                .iter()
                .enumerate()
                .filter(|(k, _)| red_bits >> k & 1 == 1)
                .map(|(_, v)| v),
        );
        ColoredDiagram {
            rank: rank as u8,
            colored,
            red,
        }
    }

    pub fn from_colors(colors: &[Color]) -> Self {
        let mut d = ColoredDiagram::uncolored(colors.len());
        for (i, &c) in colors.iter().enumerate() {
            d = d.with_color(i, c);
        }
        d
    }

    pub fn rank(&self) -> usize {
        self.rank as usize
    }

    pub fn color(&self, i: usize) -> Color {
        if !self.colored.contains(i) {
            Color::Uncolored
        } else if self.red.contains(i) {
            Color::Red
        } else {
            Color::Blue
        }
    }

    pub fn colors(&self) -> Vec<Color> {
        (0..self.rank()).map(|i| self.color(i)).collect()
    }

    pub fn with_color(self, i: usize, c: Color) -> Self {
        let bit = 1u32 << i;
        let (colored, red) = match c {
            Color::Uncolored => (self.colored.0 & !bit, self.red.0 & !bit),
            Color::Red => (self.colored.0 | bit, self.red.0 | bit),
            Color::Blue => (self.colored.0 | bit, self.red.0 & !bit),
        };
        ColoredDiagram {
            rank: self.rank,
            colored: VertexSet(colored),
            red: VertexSet(red),
        }
    }

    /// The colored set `S`.
    pub fn colored(&self) -> VertexSet {
        self.colored
    }

    pub fn red(&self) -> VertexSet {
        self.red
    }

    pub fn uncolored_vertices(&self) -> Vec<usize> {
        (0..self.rank())
            .filter(|&i| !self.colored.contains(i))
            .collect()
    }

    /// `η(i)`: `-1` for red, `+1` for blue, `None` when uncolored.
    pub fn eta(&self, i: usize) -> Option<i32> {
        match self.color(i) {
            Color::Uncolored => None,
            Color::Red => Some(-1),
            Color::Blue => Some(1),
        }
    }

    /// Index of the red pattern among colorings of `S`, as in [`from_coloring`](Self::from_coloring).
    pub fn red_bits(&self) -> u32 {
        self.colored
            .iter()
            .enumerate()
            .filter(|&(_, v)| self.red.contains(v))
            .fold(0, |m, (k, _)| m | (1 << k))
    }

    /// All `2^|S|` colorings of `S`, ordered by [`red_bits`](Self::red_bits).
    pub fn all_colorings(rank: usize, colored: VertexSet) -> Vec<ColoredDiagram> {
        (0..1u32 << colored.len())
            .map(|bits| ColoredDiagram::from_coloring(rank, colored, bits))
            .collect()
    }
}

impl fmt::Display for ColoredDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in self.colors() {
            let ch = match c {
                Color::Uncolored => 'u',
                Color::Red => 'R',
                Color::Blue => 'B',
            };
            write!(f, "{ch}")?;
        }
        Ok(())
    }
}

impl FromStr for ColoredDiagram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let colors = s
            .trim()
            .chars()
            .map(|ch| match ch {
                'u' => Ok(Color::Uncolored),
                'R' => Ok(Color::Red),
                'B' => Ok(Color::Blue),
                _ => Err(Error::Parse(format!(
                    "bad colored-diagram character {ch:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        if colors.is_empty() || colors.len() > 31 {
            return Err(Error::Parse(format!("bad diagram length in {s:?}")));
        }
        Ok(ColoredDiagram::from_colors(&colors))
    }
}

/// A colored diagram together with an orientation sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OrientedDiagram {
    pub diagram: ColoredDiagram,
    pub orientation: i32,
}

impl OrientedDiagram {
    pub fn new(diagram: ColoredDiagram, orientation: i32) -> Self {
        debug_assert!(orientation == 1 || orientation == -1);
        OrientedDiagram {
            diagram,
            orientation,
        }
    }
}

/// One term of the boundary of a colored diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryPiece {
    /// 1-based position of the colored vertex among the uncolored ones.
    pub j: usize,
    /// 1 for red, 2 for blue.
    pub c: usize,
    /// `(-1)^(j+c+1)`.
    pub sign: i32,
    /// The vertex that gets colored (0-based).
    pub vertex: usize,
    pub diagram: ColoredDiagram,
}

pub fn boundary_pieces(d: &ColoredDiagram) -> Result<Vec<BoundaryPiece>> {
    let free = d.uncolored_vertices();
    if free.is_empty() {
        return Err(Error::NoUncoloredVertices);
    }
    let mut out = Vec::with_capacity(2 * free.len());
    for (k, &v) in free.iter().enumerate() {
        let j = k + 1;
        for c in 1..=2 {
            let color = if c == 1 { Color::Red } else { Color::Blue };
            out.push(BoundaryPiece {
                j,
                c,
                sign: if (j + c + 1) % 2 == 0 { 1 } else { -1 },
                vertex: v,
                diagram: d.with_color(v, color),
            });
        }
    }
    Ok(out)
}

/// Vertices `j != i` whose Cartan entry `C[j][i]` is odd.
fn odd_neighbors(rs: &RootSystem, i: usize) -> VertexSet {
    VertexSet::from_indices((0..rs.rank()).filter(|&j| j != i && rs.c(j, i) % 2 != 0))
}

/// `s_i D` with `ε'_j = ε_j ε_i^{-C[j][i]}` on the colored vertices.
pub fn color_action(rs: &RootSystem, i: usize, d: &ColoredDiagram) -> Result<ColoredDiagram> {
    Ok(oriented_action(rs, i, &OrientedDiagram::new(*d, 1))?.diagram)
}

/// `s_i (D, o) = (s_i D, ε_i^r o)` where `r` counts uncolored vertices `j`
/// with `C[j][i]` odd.
pub fn oriented_action(rs: &RootSystem, i: usize, od: &OrientedDiagram) -> Result<OrientedDiagram> {
    let d = od.diagram;
    if !d.colored.contains(i) {
        return Err(Error::VertexNotColored { vertex: i });
    }
    if !d.red.contains(i) {
        return Ok(*od);
    }
    let odd = odd_neighbors(rs, i);
    let flip = odd.0 & d.colored.0;
    let r = (odd.0 & !d.colored.0).count_ones();
    Ok(OrientedDiagram {
        diagram: ColoredDiagram {
            rank: d.rank,
            colored: d.colored,
            red: VertexSet(d.red.0 ^ flip),
        },
        orientation: if r % 2 == 1 {
            -od.orientation
        } else {
            od.orientation
        },
    })
}

/// Acts by a word in the generators, applying the rightmost letter first.
pub fn oriented_action_word(
    rs: &RootSystem,
    word: &[u8],
    od: &OrientedDiagram,
) -> Result<OrientedDiagram> {
    word.iter()
        .rev()
        .try_fold(*od, |acc, &i| oriented_action(rs, i as usize, &acc))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxeterFailure {
    pub diagram: OrientedDiagram,
    /// 0-based generator pair; equal entries mean the involution check failed.
    pub generators: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxeterReport {
    pub subset: VertexSet,
    /// Number of (diagram, relation) checks performed.
    pub checks: usize,
    pub failure: Option<CoxeterFailure>,
}

impl CoxeterReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks the Coxeter relations of the oriented action of `W_S` on every
/// oriented diagram with colored set `S`.
pub fn verify_coxeter(rs: &RootSystem, subset: VertexSet) -> CoxeterReport {
    let gens: Vec<usize> = subset.iter().collect();
    let mut checks = 0;
    for d in ColoredDiagram::all_colorings(rs.rank(), subset) {
        for o in [1, -1] {
            let od = OrientedDiagram::new(d, o);
            for (a, &i) in gens.iter().enumerate() {
                for &j in &gens[a..] {
                    let m = if i == j { 1 } else { rs.coxeter_order(i, j) };
                    let mut x = od;
                    for _ in 0..m {
                        x = oriented_action(rs, j, &x).expect("generator in S");
                        x = oriented_action(rs, i, &x).expect("generator in S");
                    }
                    checks += 1;
                    if x != od {
                        return CoxeterReport {
                            subset,
                            checks,
                            failure: Some(CoxeterFailure {
                                diagram: od,
                                generators: (i, j),
                            }),
                        };
                    }
                }
            }
        }
    }
    CoxeterReport {
        subset,
        checks,
        failure: None,
    }
}

/// [`verify_coxeter`] for every nonempty subset, in increasing bitmask order.
pub fn verify_coxeter_all(rs: &RootSystem) -> Vec<CoxeterReport> {
    (1..1u32 << rs.rank())
        .map(|bits| verify_coxeter(rs, VertexSet(bits)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    /// Uncolored with no sign specified; stands for the union over signs and zero.
    Free,
    R,
    B,
    Plus,
    Minus,
    Zero,
}

impl Label {
    pub fn to_char(self) -> char {
        match self {
            Label::Free => 'u',
            Label::R => 'R',
            Label::B => 'B',
            Label::Plus => '+',
            Label::Minus => '-',
            Label::Zero => '0',
        }
    }

    pub fn from_char(ch: char) -> Result<Self> {
        Ok(match ch {
            'u' => Label::Free,
            'R' => Label::R,
            'B' => Label::B,
            '+' => Label::Plus,
            '-' => Label::Minus,
            '0' => Label::Zero,
            _ => return Err(Error::Parse(format!("bad diagram character {ch:?}"))),
        })
    }

    pub fn is_colored(self) -> bool {
        matches!(self, Label::R | Label::B)
    }

    /// Sign value: `-1` for `R` and `-`, `+1` for `B` and `+`.
    pub fn sign(self) -> Option<i32> {
        match self {
            Label::R | Label::Minus => Some(-1),
            Label::B | Label::Plus => Some(1),
            Label::Free | Label::Zero => None,
        }
    }

    fn flipped(self) -> Self {
        match self {
            Label::R => Label::B,
            Label::B => Label::R,
            Label::Plus => Label::Minus,
            Label::Minus => Label::Plus,
            other => other,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedColoredDiagram {
    labels: Vec<Label>,
}

impl SignedColoredDiagram {
    pub fn new(labels: Vec<Label>) -> Self {
        SignedColoredDiagram { labels }
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    /// The colored set `S`.
    pub fn colored(&self) -> VertexSet {
        VertexSet::from_indices((0..self.rank()).filter(|&i| self.labels[i].is_colored()))
    }

    /// The zero set `A`.
    pub fn zeros(&self) -> VertexSet {
        VertexSet::from_indices((0..self.rank()).filter(|&i| self.labels[i] == Label::Zero))
    }

    /// Forgets the sign and zero labels.
    pub fn coloring(&self) -> ColoredDiagram {
        let colors: Vec<Color> = self
            .labels
            .iter()
            .map(|l| match l {
                Label::R => Color::Red,
                Label::B => Color::Blue,
                _ => Color::Uncolored,
            })
            .collect();
        ColoredDiagram::from_colors(&colors)
    }
}

impl From<&ColoredDiagram> for SignedColoredDiagram {
    fn from(d: &ColoredDiagram) -> Self {
        SignedColoredDiagram::new(
            d.colors()
                .into_iter()
                .map(|c| match c {
                    Color::Uncolored => Label::Free,
                    Color::Red => Label::R,
                    Color::Blue => Label::B,
                })
                .collect(),
        )
    }
}

impl fmt::Display for SignedColoredDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.labels {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl FromStr for SignedColoredDiagram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let labels = s
            .trim()
            .chars()
            .map(Label::from_char)
            .collect::<Result<Vec<_>>>()?;
        if labels.is_empty() || labels.len() > 31 {
            return Err(Error::Parse(format!("bad diagram length in {s:?}")));
        }
        Ok(SignedColoredDiagram::new(labels))
    }
}

/// The sign rule on signed-colored diagrams, reading `-` like `R` and `+`
/// like `B`. Zero labels are fixed.
pub fn signed_action(
    rs: &RootSystem,
    i: usize,
    d: &SignedColoredDiagram,
) -> Result<SignedColoredDiagram> {
    if d.rank() != rs.rank() {
        return Err(Error::LengthMismatch {
            expected: rs.rank(),
            got: d.rank(),
        });
    }
    let sign = match d.labels[i] {
        Label::Zero => return Err(Error::ZeroVertexAction { vertex: i }),
        Label::Free => {
            return Err(Error::InvalidArgument(format!(
                "vertex {} carries no sign to act with",
                i + 1
            )))
        }
        l => l.sign().expect("signed label"),
    };
    if sign == 1 {
        return Ok(d.clone());
    }
    let odd = odd_neighbors(rs, i);
    let labels = d
        .labels
        .iter()
        .enumerate()
        .map(|(j, &l)| if odd.contains(j) { l.flipped() } else { l })
        .collect();
    Ok(SignedColoredDiagram::new(labels))
}
