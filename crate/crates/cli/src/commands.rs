//! One function per subcommand, each returning the text to print.

use anyhow::{bail, ensure, Context, Result};
use num_bigint::BigInt;
use serde::Serialize;
use toda_topo::atlas::{canonicalize_cell, chart_image, classify_point, count_cells, ChartPoint};
use toda_topo::complex::{euler_from_betti, ChainComplex, Character, HomologyGroup};
use toda_topo::diagram::{verify_coxeter_all, SignedColoredDiagram};
use toda_topo::rootsys::{Caps, RootSystem, TypeLabel};
use toda_topo::toda::{integrate, IntegrateOptions, TodaState};
use toda_topo::weyl::{VertexSet, WeylGroup};

use crate::config::{
    BoundaryArgs, CellsArgs, ClassifyArgs, Format, HomologyArgs, InfoArgs, SimulateArgs, VerifyArgs,
};

const SCHEMA: &str = "1";

/// Exact characters use dense rational matrices; beyond this many cells in
/// one degree they take too long to be useful.
const CHARACTER_CELL_LIMIT: usize = 1000;

fn root_system(label: TypeLabel, caps: &Caps) -> Result<RootSystem> {
    Ok(RootSystem::with_caps(label, caps)?)
}

fn group(label: TypeLabel, caps: &Caps) -> Result<(RootSystem, WeylGroup)> {
    let rs = root_system(label, caps)?;
    let w = WeylGroup::enumerate(&rs, caps.max_weyl_order)?;
    Ok((rs, w))
}

fn complex(label: TypeLabel, caps: &Caps) -> Result<ChainComplex> {
    let (rs, w) = group(label, caps)?;
    Ok(ChainComplex::build(rs, w)?)
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn to_i64(x: &BigInt) -> Result<i64> {
    i64::try_from(x).context("value does not fit in 64 bits")
}

#[derive(Serialize)]
struct Info {
    schema: &'static str,
    #[serde(rename = "type")]
    label: String,
    rank: usize,
    cartan: Vec<Vec<i32>>,
    coxeter_matrix: Vec<Vec<u32>>,
    weyl_order: u128,
    positive_roots: Vec<Vec<i32>>,
}

pub fn rootsys_info(args: &InfoArgs, caps: &Caps, format: Format) -> Result<String> {
    let rs = root_system(args.type_label, caps)?;
    let info = Info {
        schema: SCHEMA,
        label: args.type_label.to_string(),
        rank: rs.rank(),
        cartan: rs.cartan().to_vec(),
        coxeter_matrix: rs.coxeter_orders().to_vec(),
        weyl_order: args.type_label.weyl_order(),
        positive_roots: rs.positive_roots().to_vec(),
    };
    if format == Format::Json {
        return json(&info);
    }
    let mut out = format!("type {}\nrank {}\nCartan matrix\n", info.label, info.rank);
    for row in &info.cartan {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:>3}")).collect();
        out += &format!("{}\n", cells.join(""));
    }
    out += &format!(
        "|W| = {}\npositive roots {}\n",
        info.weyl_order,
        info.positive_roots.len()
    );
    Ok(out)
}

#[derive(Serialize)]
struct CellEntry {
    dimension: usize,
    index: usize,
    diagram: String,
    chamber: String,
    chart_box: String,
}

#[derive(Serialize)]
struct Cells {
    schema: &'static str,
    #[serde(rename = "type")]
    label: String,
    dims: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cells: Option<Vec<CellEntry>>,
}

pub fn cells(args: &CellsArgs, caps: &Caps, format: Format) -> Result<String> {
    let cc = complex(args.type_label, caps)?;
    let w = cc.weyl();
    let list = args.list.then(|| {
        (0..=cc.rank())
            .flat_map(|k| {
                cc.cells(k)
                    .into_iter()
                    .enumerate()
                    .map(move |(index, cell)| (k, index, cell))
            })
            .map(|(dimension, index, cell)| CellEntry {
                dimension,
                index,
                diagram: cell.diagram.to_string(),
                chamber: w.format_word(cell.coset),
                chart_box: chart_image(&SignedColoredDiagram::from(&cell.diagram)).to_string(),
            })
            .collect::<Vec<_>>()
    });
    let report = Cells {
        schema: SCHEMA,
        label: args.type_label.to_string(),
        dims: cc.dims().to_vec(),
        cells: list,
    };
    if format == Format::Json {
        return json(&report);
    }
    let mut out = String::new();
    for (k, d) in report.dims.iter().enumerate() {
        out += &format!("dim {k}: {d} cells\n");
    }
    for c in report.cells.iter().flatten() {
        out += &format!(
            "{} {} {} [{}] {}\n",
            c.dimension, c.index, c.diagram, c.chamber, c.chart_box
        );
    }
    Ok(out)
}

#[derive(Serialize)]
struct Classification {
    schema: &'static str,
    #[serde(rename = "type")]
    label: String,
    chamber: String,
    point: Vec<f64>,
    stratum: String,
    chart_box: String,
    dimension: usize,
    canonical_diagram: String,
    canonical_chamber: String,
}

pub fn classify(args: &ClassifyArgs, caps: &Caps, format: Format) -> Result<String> {
    let (rs, w) = group(args.type_label, caps)?;
    let point = &args.point.0;
    ensure!(
        point.len() == rs.rank(),
        "point has {} coordinates, {} needs {}",
        point.len(),
        args.type_label,
        rs.rank()
    );
    let chamber = w.parse_word(&args.chamber)?;
    let p = ChartPoint {
        chamber,
        coords: point.clone(),
    };
    let stratum = classify_point(&p)?;
    let (canon, rep) = canonicalize_cell(&rs, &w, chamber, &stratum)?;
    let report = Classification {
        schema: SCHEMA,
        label: args.type_label.to_string(),
        chamber: w.format_word(chamber),
        point: point.clone(),
        stratum: stratum.to_string(),
        chart_box: chart_image(&stratum).to_string(),
        dimension: rs.rank() - stratum.colored().len(),
        canonical_diagram: canon.to_string(),
        canonical_chamber: w.format_word(rep),
    };
    if format == Format::Json {
        return json(&report);
    }
    Ok(format!(
        "stratum {} in chamber [{}]\nchart box {}\ncell dimension {}\ncanonical ({}, [{}])\n",
        report.stratum,
        report.chamber,
        report.chart_box,
        report.dimension,
        report.canonical_diagram,
        report.canonical_chamber
    ))
}

#[derive(Serialize)]
struct ClassEntry {
    representative: String,
    size: usize,
}

#[derive(Serialize)]
struct CharacterEntry {
    degree: usize,
    dimension: usize,
    traces: Vec<i64>,
}

#[derive(Serialize)]
struct Characters {
    classes: Vec<ClassEntry>,
    degrees: Vec<CharacterEntry>,
}

#[derive(Serialize)]
struct Homology {
    schema: &'static str,
    #[serde(rename = "type")]
    label: String,
    dims: Vec<usize>,
    betti: Vec<usize>,
    torsion: Vec<Vec<u64>>,
    euler: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    characters: Option<Characters>,
}

fn group_text(g: &HomologyGroup) -> String {
    let mut parts = Vec::new();
    match g.betti {
        0 => {}
        1 => parts.push("Z".to_string()),
        b => parts.push(format!("Z^{b}")),
    }
    parts.extend(g.torsion.iter().map(|d| format!("Z/{d}")));
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn characters(cc: &ChainComplex) -> Result<Characters> {
    if let Some((k, &n)) = cc
        .dims()
        .iter()
        .enumerate()
        .find(|(_, &n)| n > CHARACTER_CELL_LIMIT)
    {
        bail!("degree {k} has {n} cells; exact characters are limited to {CHARACTER_CELL_LIMIT}");
    }
    let w = cc.weyl();
    let chars: Vec<Character> = (0..=cc.rank()).map(|k| cc.rational_character(k)).collect();
    let classes = w
        .conjugacy_classes()
        .into_iter()
        .map(|c| ClassEntry {
            representative: w.format_word(c.representative),
            size: c.size,
        })
        .collect();
    let degrees = chars
        .iter()
        .map(|c| {
            Ok(CharacterEntry {
                degree: c.degree,
                dimension: c.dimension,
                traces: c.traces().iter().map(to_i64).collect::<Result<_>>()?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(Characters { classes, degrees })
}

pub fn homology(args: &HomologyArgs, caps: &Caps, format: Format) -> Result<String> {
    let cc = complex(args.type_label, caps)?;
    let h = cc.homology()?;
    let report = Homology {
        schema: SCHEMA,
        label: args.type_label.to_string(),
        dims: cc.dims().to_vec(),
        betti: h.iter().map(|g| g.betti).collect(),
        torsion: h.iter().map(|g| g.torsion_u64()).collect(),
        euler: cc.euler_characteristic(),
        characters: if args.characters {
            Some(characters(&cc)?)
        } else {
            None
        },
    };
    if format == Format::Json {
        return json(&report);
    }
    let mut out = format!(
        "cells {:?}, Euler characteristic {}\n",
        report.dims, report.euler
    );
    for g in &h {
        out += &format!("H_{} = {}\n", g.degree, group_text(g));
    }
    if let Some(ch) = &report.characters {
        let reps: Vec<&str> = ch
            .classes
            .iter()
            .map(|c| c.representative.as_str())
            .collect();
        out += &format!("classes {}\n", reps.join(" "));
        for d in &ch.degrees {
            out += &format!("chi_{} {:?}\n", d.degree, d.traces);
        }
    }
    Ok(out)
}

pub fn boundary(args: &BoundaryArgs, caps: &Caps) -> Result<String> {
    let cc = complex(args.type_label, caps)?;
    ensure!(
        args.degree <= cc.rank(),
        "degree {} is above the dimension {}",
        args.degree,
        cc.rank()
    );
    Ok(cc.boundary(args.degree).to_triplet_text())
}

#[derive(Serialize)]
struct CheckEntry {
    name: String,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
}

#[derive(Serialize)]
struct Verification {
    schema: &'static str,
    #[serde(rename = "type")]
    label: String,
    passed: bool,
    checks: Vec<CheckEntry>,
}

/// Runs the checks; the boolean is true when all of them passed.
pub fn verify(args: &VerifyArgs, caps: &Caps, format: Format) -> Result<(String, bool)> {
    let cc = complex(args.type_label, caps)?;
    let (rs, w) = (cc.root_system(), cc.weyl());
    let l = cc.rank();
    let mut checks = Vec::new();
    let mut check = |name: &str, passed: bool, detail: Option<String>| {
        checks.push(CheckEntry {
            name: name.into(),
            passed,
            detail: if passed { None } else { detail },
        })
    };

    check("root system closed under reflections", rs.self_test(), None);
    check(
        "Weyl group order",
        w.order() as u128 == args.type_label.weyl_order(),
        Some(format!("enumerated {} elements", w.order())),
    );
    let expected: Vec<usize> = (0..=l)
        .map(|k| {
            VertexSet::subsets_of_size(l, l - k)
                .into_iter()
                .map(|s| (w.order() / w.parabolic_subgroup(s).len()) << s.len())
                .sum()
        })
        .collect();
    check(
        "cell counts follow the coset formula",
        cc.dims() == expected,
        Some(format!("{:?} vs {expected:?}", cc.dims())),
    );
    let square = cc.first_nonzero_square();
    check(
        "boundary squares to zero",
        square.is_none(),
        square.map(|k| format!("nonzero at degree {k}")),
    );
    check(
        "boundary commutes with the Weyl group action",
        cc.verify_equivariance(),
        None,
    );

    if args.all {
        let failure = verify_coxeter_all(rs).into_iter().find(|r| !r.passed());
        check(
            "Coxeter relations of the oriented action on every subset",
            failure.is_none(),
            failure.map(|r| format!("subset {}: {:?}", r.subset, r.failure)),
        );
        let counted = count_cells(rs, w)?;
        check(
            "chart gluing yields the same cells",
            counted == cc.dims(),
            Some(format!("{counted:?}")),
        );
        let tc = cc.top_cycle();
        let law = if l == 1 {
            tc.boundary.is_zero()
        } else {
            !tc.boundary.is_zero()
                && tc
                    .half
                    .as_ref()
                    .is_some_and(|h| cc.boundary_of(h).is_zero())
        };
        check("top-cycle law", law, None);
        let h = cc.homology()?;
        check(
            "Euler characteristic matches Betti numbers",
            euler_from_betti(&h) == cc.euler_characteristic(),
            None,
        );
        check(
            "H_0 = Z",
            h[0].betti == 1 && h[0].torsion.is_empty(),
            Some(group_text(&h[0])),
        );
        let top_ok = if l == 1 {
            h[1].betti == 1 && h[1].torsion.is_empty()
        } else {
            h[l].betti == 0 && h[l].torsion.is_empty()
        };
        check(
            if l == 1 {
                "H_1 = Z"
            } else {
                "top homology vanishes"
            },
            top_ok,
            Some(group_text(&h[l])),
        );
        let mod2: Vec<usize> = (0..=l)
            .map(|k| {
                let t = |j: usize| {
                    h[j].torsion
                        .iter()
                        .filter(|d| (*d % 2u32) == BigInt::from(0))
                        .count()
                };
                h[k].betti + t(k) + if k > 0 { t(k - 1) } else { 0 }
            })
            .collect();
        let reversed: Vec<usize> = mod2.iter().rev().copied().collect();
        check(
            "mod 2 Poincaré duality",
            mod2 == reversed,
            Some(format!("{mod2:?}")),
        );
    }

    let passed = checks.iter().all(|c| c.passed);
    let report = Verification {
        schema: SCHEMA,
        label: args.type_label.to_string(),
        passed,
        checks,
    };
    if format == Format::Json {
        return Ok((json(&report)?, passed));
    }
    let mut out = String::new();
    for c in &report.checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        match &c.detail {
            Some(d) => out += &format!("{status} {}: {d}\n", c.name),
            None => out += &format!("{status} {}\n", c.name),
        }
    }
    Ok((out, passed))
}

#[derive(Serialize)]
struct Sample {
    t: f64,
    a: Vec<f64>,
    b: Vec<f64>,
}

#[derive(Serialize)]
struct Event {
    /// 1-based vertex of the diverging coordinate.
    vertex: usize,
    t_star: f64,
    t_detected: f64,
    epsilon_after: Vec<i32>,
}

#[derive(Serialize)]
struct Simulation {
    schema: &'static str,
    #[serde(rename = "type")]
    label: String,
    epsilon: Vec<i32>,
    t_end: f64,
    tol: f64,
    initial_invariants: Option<Vec<f64>>,
    invariant_drift: Option<f64>,
    accepted_steps: usize,
    rejected_steps: usize,
    events: Vec<Event>,
    samples: Vec<Sample>,
}

pub fn simulate(args: &SimulateArgs, caps: &Caps, format: Format) -> Result<String> {
    let rs = root_system(args.type_label, caps)?;
    let l = rs.rank();
    for (name, n) in [
        ("signs", args.signs.0.len()),
        ("a", args.a.0.len()),
        ("b", args.b.0.len()),
    ] {
        ensure!(
            n == l,
            "--{name} has {n} entries, {} needs {l}",
            args.type_label
        );
    }
    if let Some(dt) = args.dt {
        ensure!(dt > 0.0, "--dt must be positive");
    }
    let state = TodaState::new(args.a.0.clone(), args.b.0.clone(), args.signs.0.clone())?;
    let tr = integrate(&rs, &state, &IntegrateOptions::new(args.t_end, args.tol))?;
    let states = match args.dt {
        Some(dt) => tr.resample(dt),
        None => tr.samples.clone(),
    };
    let report = Simulation {
        schema: SCHEMA,
        label: args.type_label.to_string(),
        epsilon: args.signs.0.clone(),
        t_end: args.t_end,
        tol: args.tol,
        initial_invariants: tr.initial_invariants.clone(),
        invariant_drift: tr.invariant_drift,
        accepted_steps: tr.samples.len() - 1,
        rejected_steps: tr.rejected_steps,
        events: tr
            .events
            .iter()
            .map(|e| Event {
                vertex: e.index + 1,
                t_star: e.t_star,
                t_detected: e.t_detected,
                epsilon_after: e.epsilon_after.clone(),
            })
            .collect(),
        samples: states
            .into_iter()
            .map(|s| Sample {
                t: s.t,
                a: s.a,
                b: s.b,
            })
            .collect(),
    };
    match format {
        Format::Json => json(&report),
        Format::Csv => {
            let mut header = vec!["t".to_string()];
            header.extend((1..=l).map(|i| format!("a{i}")));
            header.extend((1..=l).map(|i| format!("b{i}")));
            let mut out = header.join(",") + "\n";
            for s in &report.samples {
                let row: Vec<String> = std::iter::once(s.t)
                    .chain(s.a.iter().copied())
                    .chain(s.b.iter().copied())
                    .map(|x| x.to_string())
                    .collect();
                out += &(row.join(",") + "\n");
            }
            Ok(out)
        }
        Format::Text => {
            let last = report.samples.last().expect("at least the initial state");
            let mut out = format!(
                "{} steps accepted, {} rejected\nfinal t = {}\na = {:?}\nb = {:?}\n",
                report.accepted_steps, report.rejected_steps, last.t, last.a, last.b
            );
            if let Some(d) = report.invariant_drift {
                out += &format!("invariant drift {d:e}\n");
            }
            for e in &report.events {
                out += &format!(
                    "b_{} blows up at t* = {} (detected at {}); signs afterwards {:?}\n",
                    e.vertex, e.t_star, e.t_detected, e.epsilon_after
                );
            }
            Ok(out)
        }
    }
}
