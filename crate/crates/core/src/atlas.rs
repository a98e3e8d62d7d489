//! Charts on the compactified Cartan subgroup.
//!
//! Each chamber `w` carries a chart onto `[-1, 1]^l` whose coordinates are
//! simple-root character values. A coordinate equal to `-1` lies on a red
//! face, `+1` on a blue wall and `0` on a Levi stratum; interior values only
//! record a sign. Points of different chambers are glued by moving the
//! chamber to its minimal coset representative.

use std::collections::HashSet;
use std::fmt;

use crate::diagram::{signed_action, ColoredDiagram, Label, SignedColoredDiagram};
use crate::error::{Error, Result};
use crate::rootsys::RootSystem;
use crate::weyl::{ElemId, VertexSet, WeylGroup};

#[derive(Debug, Clone, PartialEq)]
pub struct ChartPoint {
    pub chamber: ElemId,
    pub coords: Vec<f64>,
}

/// One factor of a chart box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Interval {
    Point(f64),
    Open(f64, f64),
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        match *self {
            Interval::Point(p) => x == p,
            Interval::Open(a, b) => a < x && x < b,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Interval::Point(p) => write!(f, "{{{p}}}"),
            Interval::Open(a, b) => write!(f, "({a},{b})"),
        }
    }
}

/// A product of points and open intervals inside `[-1, 1]^l`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartBox {
    pub factors: Vec<Interval>,
}

impl ChartBox {
    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.factors.len() && self.factors.iter().zip(x).all(|(f, &v)| f.contains(v))
    }

    /// The point with relative position `u_i ∈ (0, 1)` in each open factor.
    pub fn point_at(&self, u: &[f64]) -> Vec<f64> {
        self.factors
            .iter()
            .zip(u)
            .map(|(f, &t)| match *f {
                Interval::Point(p) => p,
                Interval::Open(a, b) => a + (b - a) * t,
            })
            .collect()
    }

    pub fn dimension(&self) -> usize {
        self.factors
            .iter()
            .filter(|f| matches!(f, Interval::Open(..)))
            .count()
    }
}

impl fmt::Display for ChartBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, x) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, " x ")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

pub fn classify_coordinate(index: usize, t: f64) -> Result<Label> {
    Ok(if t == -1.0 {
        Label::R
    } else if t == 1.0 {
        Label::B
    } else if t == 0.0 {
        Label::Zero
    } else if t > 0.0 && t < 1.0 {
        Label::Plus
    } else if t < 0.0 && t > -1.0 {
        Label::Minus
    } else {
        return Err(Error::OutOfChart { index, value: t });
    })
}

/// The stratum label of a chart point; boundary values are compared exactly.
pub fn classify_point(p: &ChartPoint) -> Result<SignedColoredDiagram> {
    let labels = p
        .coords
        .iter()
        .enumerate()
        .map(|(i, &t)| classify_coordinate(i, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(SignedColoredDiagram::new(labels))
}

pub fn label_interval(l: Label) -> Interval {
    match l {
        Label::R => Interval::Point(-1.0),
        Label::B => Interval::Point(1.0),
        Label::Zero => Interval::Point(0.0),
        Label::Plus => Interval::Open(0.0, 1.0),
        Label::Minus => Interval::Open(-1.0, 0.0),
        Label::Free => Interval::Open(-1.0, 1.0),
    }
}

/// The chart box of a cell label; uncolored vertices without a sign fill `(-1, 1)`.
pub fn chart_image(d: &SignedColoredDiagram) -> ChartBox {
    ChartBox {
        factors: d.labels().iter().map(|&l| label_interval(l)).collect(),
    }
}

/// Moves `(w, D)` to the minimal representative of `w W_S`, acting on `D`
/// by the parabolic part. `S` is the set of `R`/`B` vertices of `D`.
pub fn canonicalize_cell(
    rs: &RootSystem,
    weyl: &WeylGroup,
    w: ElemId,
    d: &SignedColoredDiagram,
) -> Result<(SignedColoredDiagram, ElemId)> {
    if d.rank() != rs.rank() {
        return Err(Error::LengthMismatch {
            expected: rs.rank(),
            got: d.rank(),
        });
    }
    let (rep, rest) = weyl.decompose(d.colored(), w);
    let mut out = d.clone();
    for &i in weyl.word(rest).iter().rev() {
        out = signed_action(rs, i as usize, &out)?;
    }
    Ok((out, rep))
}

pub fn canonicalize_colored(
    rs: &RootSystem,
    weyl: &WeylGroup,
    w: ElemId,
    d: &ColoredDiagram,
) -> Result<(ColoredDiagram, ElemId)> {
    let (s, rep) = canonicalize_cell(rs, weyl, w, &SignedColoredDiagram::from(d))?;
    Ok((s.coloring(), rep))
}

/// Number of distinct cells per dimension, found by canonicalizing every
/// pair of a chamber and a colored diagram.
pub fn count_cells(rs: &RootSystem, weyl: &WeylGroup) -> Result<Vec<usize>> {
    let l = rs.rank();
    let mut counts = vec![0; l + 1];
    for bits in 0..1u32 << l {
        let s = VertexSet(bits);
        let mut seen = HashSet::new();
        for d in ColoredDiagram::all_colorings(l, s) {
            for w in weyl.elements() {
                seen.insert(canonicalize_colored(rs, weyl, w, &d)?);
            }
        }
        counts[l - s.len()] += seen.len();
    }
    Ok(counts)
}

/// The sign vector after `b_i` blows up: `ε'_j = ε_j ε_i^{-C[j][i]}`.
pub fn blowup_transition(rs: &RootSystem, eps: &[i32], i: usize) -> Result<Vec<i32>> {
    if eps.len() != rs.rank() {
        return Err(Error::LengthMismatch {
            expected: rs.rank(),
            got: eps.len(),
        });
    }
    if i >= rs.rank() {
        return Err(Error::InvalidArgument(format!(
            "vertex {} out of range",
            i + 1
        )));
    }
    Ok(eps
        .iter()
        .enumerate()
        .map(|(j, &e)| {
            if eps[i] == -1 && rs.c(j, i) % 2 != 0 {
                -e
            } else {
                e
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{build_root_system, CartanType};
    use crate::weyl::enumerate_weyl;

    fn setup(k: CartanType, l: usize) -> (RootSystem, WeylGroup) {
        let rs = build_root_system(k, l).unwrap();
        let w = enumerate_weyl(&rs).unwrap();
        (rs, w)
    }

    fn sd(s: &str) -> SignedColoredDiagram {
        s.parse().unwrap()
    }

    #[test]
    fn classify_examples() {
        let p = |c: &[f64]| ChartPoint {
            chamber: ElemId::IDENTITY,
            coords: c.to_vec(),
        };
        assert_eq!(classify_point(&p(&[-1.0, 0.5])).unwrap(), sd("R+"));
        assert_eq!(classify_point(&p(&[0.0, -0.3])).unwrap(), sd("0-"));
        assert_eq!(classify_point(&p(&[0.0, 0.0, 0.0])).unwrap(), sd("000"));
        assert_eq!(
            classify_point(&p(&[0.2, 1.5])),
            Err(Error::OutOfChart {
                index: 1,
                value: 1.5
            })
        );
        assert!(classify_point(&p(&[f64::NAN])).is_err());
    }

    #[test]
    fn chart_image_examples() {
        assert_eq!(
            chart_image(&sd("u")).factors,
            vec![Interval::Open(-1.0, 1.0)]
        );
        assert_eq!(
            chart_image(&sd("Ru")).factors,
            vec![Interval::Point(-1.0), Interval::Open(-1.0, 1.0)]
        );
        let b = chart_image(&sd("RB"));
        assert_eq!(b.factors, vec![Interval::Point(-1.0), Interval::Point(1.0)]);
        assert_eq!(b.dimension(), 0);
        assert_eq!(chart_image(&sd("Ru")).to_string(), "{-1} x (-1,1)");
    }

    #[test]
    fn gluing_identification() {
        let (rs, w) = setup(CartanType::A, 2);
        let s1 = w.generator(0);
        assert_eq!(
            canonicalize_cell(&rs, &w, s1, &sd("R+")).unwrap(),
            (sd("R-"), ElemId::IDENTITY)
        );
        assert_eq!(
            canonicalize_cell(&rs, &w, ElemId::IDENTITY, &sd("B0")).unwrap(),
            (sd("B0"), ElemId::IDENTITY)
        );
    }

    /// Minimum over the orbit `{(w u, u^{-1} D) : u ∈ W_S}`.
    fn orbit_min(
        rs: &RootSystem,
        w: &WeylGroup,
        x: ElemId,
        d: &SignedColoredDiagram,
    ) -> (ElemId, SignedColoredDiagram) {
        w.parabolic_subgroup(d.colored())
            .into_iter()
            .map(|u| {
                let uinv = w.inverse(u);
                let mut e = d.clone();
                for &i in w.word(uinv).iter().rev() {
                    e = signed_action(rs, i as usize, &e).unwrap();
                }
                (w.mul(x, u), e)
            })
            .min_by_key(|(y, _)| *y)
            .unwrap()
    }

    #[test]
    fn canonicalize_matches_orbit_minimum() {
        let (rs, w) = setup(CartanType::A, 2);
        let x = w.from_word(&[0, 1]);
        let (d, rep) = canonicalize_cell(&rs, &w, x, &sd("BB")).unwrap();
        assert_eq!((rep, d.clone()), orbit_min(&rs, &w, x, &sd("BB")));
        assert_eq!(rep, ElemId::IDENTITY);

        let (rs, w) = setup(CartanType::B, 3);
        for s in ["R+B", "BR0", "RRR", "-B+", "RBu"] {
            for x in w.elements() {
                let (d, rep) = canonicalize_cell(&rs, &w, x, &sd(s)).unwrap();
                assert_eq!((rep, d.clone()), orbit_min(&rs, &w, x, &sd(s)));
                assert_eq!(canonicalize_cell(&rs, &w, rep, &d).unwrap(), (d, rep));
            }
        }
    }

    #[test]
    fn counts_match_coset_formula() {
        let (rs, w) = setup(CartanType::A, 2);
        assert_eq!(count_cells(&rs, &w).unwrap(), vec![4, 12, 6]);
        let (rs, w) = setup(CartanType::A, 1);
        assert_eq!(count_cells(&rs, &w).unwrap(), vec![2, 2]);
        let (rs, w) = setup(CartanType::D, 4);
        let expected: Vec<usize> = (0..=4)
            .map(|k| {
                VertexSet::subsets_of_size(4, 4 - k)
                    .into_iter()
                    .map(|s| (w.order() / w.parabolic_subgroup(s).len()) << s.len())
                    .sum()
            })
            .collect();
        assert_eq!(count_cells(&rs, &w).unwrap(), expected);
    }

    #[test]
    fn blowup_examples() {
        let (a2, _) = setup(CartanType::A, 2);
        assert_eq!(blowup_transition(&a2, &[-1, 1], 0).unwrap(), vec![-1, -1]);
        assert_eq!(blowup_transition(&a2, &[1, 1], 1).unwrap(), vec![1, 1]);
        let (g2, _) = setup(CartanType::G, 2);
        assert_eq!(g2.c(1, 0), -3);
        assert_eq!(blowup_transition(&g2, &[-1, 1], 0).unwrap(), vec![-1, -1]);
        let (b2, _) = setup(CartanType::B, 2);
        assert_eq!(blowup_transition(&b2, &[1, -1], 1).unwrap(), vec![1, -1]);
    }

    #[test]
    fn blowup_is_an_involution() {
        let (f4, _) = setup(CartanType::F, 4);
        for bits in 0..16 {
            let eps: Vec<i32> = (0..4)
                .map(|j| if bits >> j & 1 == 1 { -1 } else { 1 })
                .collect();
            for i in 0..4 {
                let once = blowup_transition(&f4, &eps, i).unwrap();
                assert_eq!(blowup_transition(&f4, &once, i).unwrap(), eps);
            }
        }
    }
}
