//! Command-line configuration and its canonical argument form.

use std::fmt;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use toda_topo::rootsys::{Caps, TypeLabel};

#[derive(Parser, Debug, Clone, PartialEq)]
#[command(
    name = "toda-topo",
    version,
    about = "Homology of compactified split Cartan subgroups and indefinite Toda flows"
)]
pub struct Config {
    /// Largest rank accepted for any type.
    #[arg(long, global = true, default_value_t = 6)]
    pub max_rank: usize,

    /// Largest Weyl group that will be enumerated.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub max_weyl_order: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone, PartialEq)]
pub enum Command {
    /// Root system data.
    Rootsys {
        #[command(subcommand)]
        action: RootsysCommand,
    },
    /// Cell counts, optionally listing every cell with its chart box.
    Cells(CellsArgs),
    /// Stratum and canonical cell of a chart point.
    Classify(ClassifyArgs),
    /// Integral homology of the compactification.
    Homology(HomologyArgs),
    /// A boundary matrix as sorted `row col value` triplets.
    Boundary(BoundaryArgs),
    /// Run the consistency checks for one type.
    Verify(VerifyArgs),
    /// Toda lattice flows.
    Toda {
        #[command(subcommand)]
        action: TodaCommand,
    },
}

#[derive(Subcommand, Debug, Clone, PartialEq)]
pub enum RootsysCommand {
    /// Cartan matrix, Weyl group order and positive roots.
    Info(InfoArgs),
}

#[derive(Subcommand, Debug, Clone, PartialEq)]
pub enum TodaCommand {
    /// Integrate the signed Toda flow from one initial state.
    Simulate(SimulateArgs),
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct InfoArgs {
    #[arg(long = "type", value_parser = parse_type)]
    pub type_label: TypeLabel,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct CellsArgs {
    #[arg(long = "type", value_parser = parse_type)]
    pub type_label: TypeLabel,
    /// List every cell instead of only the counts.
    #[arg(long)]
    pub list: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct ClassifyArgs {
    #[arg(long = "type", value_parser = parse_type)]
    pub type_label: TypeLabel,
    /// Chamber as a word in the simple reflections, e.g. `s1s2` or `e`.
    #[arg(long)]
    pub chamber: String,
    /// Chart coordinates, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub point: FloatList,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct HomologyArgs {
    #[arg(long = "type", value_parser = parse_type)]
    pub type_label: TypeLabel,
    #[arg(long)]
    pub json: bool,
    /// Also report the Weyl group characters on rational homology.
    #[arg(long)]
    pub characters: bool,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct BoundaryArgs {
    #[arg(long = "type", value_parser = parse_type)]
    pub type_label: TypeLabel,
    /// Source degree `k` of `∂_k`.
    #[arg(long)]
    pub degree: usize,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct VerifyArgs {
    #[arg(long = "type", value_parser = parse_type)]
    pub type_label: TypeLabel,
    /// Add the Coxeter relations, the top-cycle law and the homology checks.
    #[arg(long)]
    pub all: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct SimulateArgs {
    #[arg(long = "type", value_parser = parse_type)]
    pub type_label: TypeLabel,
    /// One `+` or `-` per simple root.
    #[arg(long, allow_hyphen_values = true)]
    pub signs: Signs,
    #[arg(long, allow_hyphen_values = true)]
    pub a: FloatList,
    #[arg(long, allow_hyphen_values = true)]
    pub b: FloatList,
    #[arg(long)]
    pub t_end: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Resample on a uniform grid instead of reporting every accepted step.
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long, conflicts_with = "csv")]
    pub json: bool,
    #[arg(long)]
    pub csv: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl Format {
    fn from_flags(json: bool, csv: bool) -> Self {
        match (json, csv) {
            (true, _) => Format::Json,
            (_, true) => Format::Csv,
            _ => Format::Text,
        }
    }
}

fn parse_type(s: &str) -> Result<TypeLabel, String> {
    s.parse().map_err(|e: toda_topo::Error| e.to_string())
}

#[derive(Debug, Clone, PartialEq)]
pub struct FloatList(pub Vec<f64>);

impl FromStr for FloatList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(FloatList(Vec::new()));
        }
        s.split(',')
            .map(|x| {
                x.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("bad number {x:?}"))
            })
            .collect::<Result<_, _>>()
            .map(FloatList)
    }
}

impl fmt::Display for FloatList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(f64::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signs(pub Vec<i32>);

impl FromStr for Signs {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.trim()
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                _ => Err(format!("sign {c:?} is not + or -")),
            })
            .collect::<Result<_, _>>()
            .map(Signs)
    }
}

impl fmt::Display for Signs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &e in &self.0 {
            write!(f, "{}", if e < 0 { '-' } else { '+' })?;
        }
        Ok(())
    }
}

impl Config {
    pub fn caps(&self) -> Caps {
        Caps {
            max_rank: self.max_rank,
            max_weyl_order: self.max_weyl_order,
        }
    }

    pub fn format(&self) -> Format {
        match &self.command {
            Command::Rootsys {
                action: RootsysCommand::Info(a),
            } => Format::from_flags(a.json, false),
            Command::Cells(a) => Format::from_flags(a.json, false),
            Command::Classify(a) => Format::from_flags(a.json, false),
            Command::Homology(a) => Format::from_flags(a.json, false),
            Command::Boundary(_) => Format::Text,
            Command::Verify(a) => Format::from_flags(a.json, false),
            Command::Toda {
                action: TodaCommand::Simulate(a),
            } => Format::from_flags(a.json, a.csv),
        }
    }

    /// The canonical argument list: every option spelled out, global flags
    /// first, `--name=value` for values.
    pub fn to_argv(&self) -> Vec<String> {
        let mut v = vec![
            "toda-topo".to_string(),
            format!("--max-rank={}", self.max_rank),
            format!("--max-weyl-order={}", self.max_weyl_order),
        ];
        let flag = |v: &mut Vec<String>, on: bool, name: &str| {
            if on {
                v.push(format!("--{name}"));
            }
        };
        match &self.command {
            Command::Rootsys {
                action: RootsysCommand::Info(a),
            } => {
                v.extend([
                    "rootsys".into(),
                    "info".into(),
                    format!("--type={}", a.type_label),
                ]);
                flag(&mut v, a.json, "json");
            }
            Command::Cells(a) => {
                v.extend(["cells".into(), format!("--type={}", a.type_label)]);
                flag(&mut v, a.list, "list");
                flag(&mut v, a.json, "json");
            }
            Command::Classify(a) => {
                v.extend([
                    "classify".into(),
                    format!("--type={}", a.type_label),
                    format!("--chamber={}", a.chamber),
                    format!("--point={}", a.point),
                ]);
                flag(&mut v, a.json, "json");
            }
            Command::Homology(a) => {
                v.extend(["homology".into(), format!("--type={}", a.type_label)]);
                flag(&mut v, a.json, "json");
                flag(&mut v, a.characters, "characters");
            }
            Command::Boundary(a) => {
                v.extend([
                    "boundary".into(),
                    format!("--type={}", a.type_label),
                    format!("--degree={}", a.degree),
                ]);
            }
            Command::Verify(a) => {
                v.extend(["verify".into(), format!("--type={}", a.type_label)]);
                flag(&mut v, a.all, "all");
                flag(&mut v, a.json, "json");
            }
            Command::Toda {
                action: TodaCommand::Simulate(a),
            } => {
                v.extend([
                    "toda".into(),
                    "simulate".into(),
                    format!("--type={}", a.type_label),
                    format!("--signs={}", a.signs),
                    format!("--a={}", a.a),
                    format!("--b={}", a.b),
                    format!("--t-end={}", a.t_end),
                    format!("--tol={}", a.tol),
                ]);
                if let Some(dt) = a.dt {
                    v.push(format!("--dt={dt}"));
                }
                flag(&mut v, a.json, "json");
                flag(&mut v, a.csv, "csv");
            }
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use toda_topo::rootsys::CartanType;

    fn parse(args: &[&str]) -> Config {
        Config::try_parse_from(args).unwrap()
    }

    #[test]
    fn documented_invocations_parse() {
        let c = parse(&["toda-topo", "homology", "--type", "A2", "--json"]);
        assert_eq!(c.format(), Format::Json);
        let c = parse(&[
            "toda-topo",
            "toda",
            "simulate",
            "--type",
            "A2",
            "--signs",
            "+-",
            "--a",
            "0,0",
            "--b",
            "1,-1",
            "--t-end",
            "10",
            "--tol",
            "1e-10",
            "--json",
        ]);
        let Command::Toda {
            action: TodaCommand::Simulate(s),
        } = &c.command
        else {
            panic!("wrong command");
        };
        assert_eq!(s.signs, Signs(vec![1, -1]));
        assert_eq!(s.b, FloatList(vec![1.0, -1.0]));
        let c = parse(&[
            "toda-topo",
            "classify",
            "--type",
            "A2",
            "--chamber",
            "s1",
            "--point",
            "-1,0.5",
        ]);
        assert_eq!(c.format(), Format::Text);
        assert_eq!(c.max_rank, 6);
    }

    #[test]
    fn normalization_is_a_fixed_point() {
        let c = parse(&[
            "toda-topo",
            "cells",
            "--json",
            "--type",
            "a_3",
            "--max-rank",
            "4",
        ]);
        let argv = c.to_argv();
        assert_eq!(
            argv,
            [
                "toda-topo",
                "--max-rank=4",
                "--max-weyl-order=1000000",
                "cells",
                "--type=A3",
                "--json"
            ]
        );
        let again = Config::try_parse_from(&argv).unwrap();
        assert_eq!(again, c);
        assert_eq!(again.to_argv(), argv);
    }

    #[test]
    fn usage_errors() {
        for args in [
            vec!["toda-topo"],
            vec!["toda-topo", "homology"],
            vec!["toda-topo", "homology", "--type", "Q2"],
            vec!["toda-topo", "frobnicate"],
            vec!["toda-topo", "boundary", "--type", "A2", "--degree", "x"],
        ] {
            assert!(Config::try_parse_from(&args).is_err(), "{args:?}");
        }
    }

    fn type_label() -> impl Strategy<Value = TypeLabel> {
        (0usize..7, 1usize..9).prop_map(|(k, r)| {
            let kind = [
                CartanType::A,
                CartanType::B,
                CartanType::C,
                CartanType::D,
                CartanType::E,
                CartanType::F,
                CartanType::G,
            ][k];
            TypeLabel::new(kind, r)
        })
    }

    fn floats() -> impl Strategy<Value = FloatList> {
        prop::collection::vec(
            prop_oneof![-1e6f64..1e6, Just(0.0), Just(-1.0), Just(1e-300)],
            1..5,
        )
        .prop_map(FloatList)
    }

    fn command() -> impl Strategy<Value = Command> {
        let t = type_label;
        prop_oneof![
            (t(), any::<bool>()).prop_map(|(type_label, json)| Command::Rootsys {
                action: RootsysCommand::Info(InfoArgs { type_label, json })
            }),
            (t(), any::<bool>(), any::<bool>()).prop_map(|(type_label, list, json)| {
                Command::Cells(CellsArgs {
                    type_label,
                    list,
                    json,
                })
            }),
            (t(), "e|(s[1-8]){1,6}", floats(), any::<bool>()).prop_map(
                |(type_label, chamber, point, json)| Command::Classify(ClassifyArgs {
                    type_label,
                    chamber,
                    point,
                    json
                })
            ),
            (t(), any::<bool>(), any::<bool>()).prop_map(|(type_label, json, characters)| {
                Command::Homology(HomologyArgs {
                    type_label,
                    json,
                    characters,
                })
            }),
            (t(), 0usize..9).prop_map(|(type_label, degree)| Command::Boundary(BoundaryArgs {
                type_label,
                degree
            })),
            (t(), any::<bool>(), any::<bool>()).prop_map(
                |(type_label, all, json)| Command::Verify(VerifyArgs {
                    type_label,
                    all,
                    json
                })
            ),
            (
                t(),
                "[+-]{1,8}",
                floats(),
                floats(),
                0.0f64..100.0,
                1e-14f64..1e-2,
                prop::option::of(1e-3f64..1.0),
                0u8..3,
            )
                .prop_map(|(type_label, signs, a, b, t_end, tol, dt, fmt)| {
                    Command::Toda {
                        action: TodaCommand::Simulate(SimulateArgs {
                            type_label,
                            signs: signs.parse().unwrap(),
                            a,
                            b,
                            t_end,
                            tol,
                            dt,
                            json: fmt == 1,
                            csv: fmt == 2,
                        }),
                    }
                }),
        ]
    }

    proptest! {
        #[test]
        fn argv_round_trip(command in command(), max_rank in 1usize..20, max_weyl_order in 1usize..10_000_000) {
            let c = Config { max_rank, max_weyl_order, command };
            let argv = c.to_argv();
            let parsed = Config::try_parse_from(&argv).unwrap();
            prop_assert_eq!(&parsed, &c);
            prop_assert_eq!(parsed.to_argv(), argv);
        }
    }
}
