//! The v1 game-spec file format and its conversion to library objects.

use jkssi_core::games::{build_point_veto, build_table_game, build_veto_set, build_weighted};
use jkssi_core::interval::{Step, StepIntervalGame};
use jkssi_core::rational::{format_rational, parse_rational, rational_from_f64};
use jkssi_core::{GameBody, GameCombo, GameShape, JKGame, Profile, Rational};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: &str = "v1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(flatten)]
    pub body: SpecBody,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum SpecBody {
    Table { values: Vec<u32> },
    PointVeto { a: Vec<u32> },
    VetoSet { thresholds: Vec<Vec<u32>> },
    Weighted { quota: String, weights: Vec<String> },
    Combo { terms: Vec<ComboTerm> },
    IntervalStep { steps: Vec<StepSpec> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComboTerm {
    pub weight: String,
    pub game: GameSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepSpec {
    pub threshold: Vec<Number>,
    pub level: String,
}

/// Threshold coordinates may be JSON numbers or `"p/q"` strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Float(f64),
    Text(String),
}

/// A parsed and validated input.
#[derive(Clone, Debug)]
pub enum Loaded {
    Game(JKGame),
    Combo(GameCombo),
    Interval(StepIntervalGame),
}

impl Loaded {
    pub fn kind(&self) -> &'static str {
        match self {
            Loaded::Game(_) => "jk-game",
            Loaded::Combo(_) => "combo",
            Loaded::Interval(_) => "interval-step",
        }
    }
}

/// `"p"` or `"p/q"` with decimal integers; the value is reduced.
pub fn parse_exact(s: &str) -> Result<Rational, CliError> {
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    let body = s.strip_prefix('-').unwrap_or(s);
    let ok = match body.split_once('/') {
        Some((p, q)) => digits(p) && digits(q),
        None => digits(body),
    };
    if !ok {
        return Err(CliError::Parse(format!("expected a \"p/q\" rational, got {s:?}")));
    }
    parse_rational(s).map_err(CliError::from)
}

pub fn parse_document(bytes: &[u8]) -> Result<GameSpec, CliError> {
    serde_json::from_slice(bytes).map_err(|e| CliError::Parse(format!("game spec: {e}")))
}

impl GameSpec {
    fn shape(&self) -> Result<GameShape, CliError> {
        let (Some(j), Some(k)) = (self.j, self.k) else {
            return Err(CliError::Parse("fields j and k are required for this game type".into()));
        };
        Ok(GameShape::new(self.n, j, k)?)
    }

    pub fn load(&self) -> Result<Loaded, CliError> {
        if let Some(v) = &self.schema {
            if v != SCHEMA_VERSION {
                return Err(CliError::Parse(format!("unsupported schema {v:?}, expected {SCHEMA_VERSION:?}")));
            }
        }
        match &self.body {
            SpecBody::IntervalStep { steps } => {
                let steps = steps
                    .iter()
                    .map(|s| {
                        let threshold = s
                            .threshold
                            .iter()
                            .map(|c| match c {
                                Number::Float(x) => rational_from_f64(*x).map_err(CliError::from),
                                Number::Text(t) => parse_exact(t),
                            })
                            .collect::<Result<_, _>>()?;
                        Ok(Step { threshold, level: parse_exact(&s.level)? })
                    })
                    .collect::<Result<Vec<_>, CliError>>()?;
                Ok(Loaded::Interval(StepIntervalGame::new(self.n, steps)?))
            }
            SpecBody::Combo { terms } => {
                let mut flat = Vec::new();
                for t in terms {
                    let w = parse_exact(&t.weight)?;
                    match t.game.load()? {
                        Loaded::Game(g) => flat.push((w, g)),
                        Loaded::Combo(c) => flat.extend(c.terms().iter().map(|(x, g)| (&w * x, g.clone()))),
                        Loaded::Interval(_) => return Err(CliError::Parse("combo terms must be (j,k) games".into())),
                    }
                }
                let combo = GameCombo::new(flat)?;
                let s = combo.shape();
                if s.n() != self.n || self.j.is_some_and(|j| j != s.j()) || self.k.is_some_and(|k| k != s.k()) {
                    return Err(CliError::Validation("ShapeMismatch: combo terms disagree with the outer n/j/k".into()));
                }
                Ok(Loaded::Combo(combo))
            }
            body => {
                let shape = self.shape()?;
                let profile = |levels: &Vec<u32>| Profile::new(levels.clone(), &shape);
                let game = match body {
                    SpecBody::Table { values } => build_table_game(shape, values.clone())?,
                    SpecBody::PointVeto { a } => build_point_veto(profile(a)?, shape)?,
                    SpecBody::VetoSet { thresholds } => {
                        build_veto_set(shape, thresholds.iter().map(profile).collect::<Result<_, _>>()?)?
                    }
                    SpecBody::Weighted { quota, weights } => {
                        build_weighted(shape, parse_exact(quota)?, weights.iter().map(|w| parse_exact(w)).collect::<Result<_, _>>()?)?
                    }
                    SpecBody::Combo { .. } | SpecBody::IntervalStep { .. } => unreachable!("handled above"),
                };
                Ok(Loaded::Game(game))
            }
        }
    }
}

/// The spec that reproduces `g`, keeping its representation.
pub fn game_to_spec(g: &JKGame) -> GameSpec {
    let s = g.shape();
    let levels = |p: &Profile| p.levels().to_vec();
    let body = match g.body() {
        GameBody::Table(values) => SpecBody::Table { values: values.clone() },
        GameBody::PointVeto(a) => SpecBody::PointVeto { a: levels(a) },
        GameBody::VetoSet(e) => SpecBody::VetoSet { thresholds: e.iter().map(levels).collect() },
        GameBody::Weighted { quota, weights } => {
            SpecBody::Weighted { quota: format_rational(quota), weights: weights.iter().map(format_rational).collect() }
        }
    };
    GameSpec { schema: None, n: s.n(), j: Some(s.j()), k: Some(s.k()), body }
}

pub fn combo_to_spec(c: &GameCombo) -> GameSpec {
    let s = c.shape();
    let terms = c.terms().iter().map(|(w, g)| ComboTerm { weight: format_rational(w), game: game_to_spec(g) }).collect();
    GameSpec { schema: Some(SCHEMA_VERSION.into()), n: s.n(), j: Some(s.j()), k: Some(s.k()), body: SpecBody::Combo { terms } }
}

pub fn interval_to_spec(v: &StepIntervalGame) -> GameSpec {
    let steps = v
        .steps()
        .iter()
        .map(|s| StepSpec {
            threshold: s.threshold.iter().map(|t| Number::Text(format_rational(t))).collect(),
            level: format_rational(&s.level),
        })
        .collect();
    GameSpec { schema: None, n: v.n(), j: None, k: None, body: SpecBody::IntervalStep { steps } }
}

#[cfg(test)]
mod tests {
    use super::*;
    use jkssi_core::builtin::{example1, golden_games};

    #[test]
    fn strict_rationals() {
        assert_eq!(parse_exact("6/8").unwrap(), jkssi_core::rational::rat(3, 4));
        assert_eq!(parse_exact("-2").unwrap(), jkssi_core::rational::rat(-2, 1));
        for bad in ["0.5", "1/0", "", "1/", "/2", "a/b", "+1/2"] {
            assert!(parse_exact(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn golden_games_survive_a_round_trip() {
        for (name, g) in golden_games() {
            let text = serde_json::to_string(&game_to_spec(&g)).unwrap();
            match parse_document(text.as_bytes()).unwrap().load().unwrap() {
                Loaded::Game(h) => assert_eq!(h, g, "{name}"),
                other => panic!("{name}: loaded as {}", other.kind()),
            }
        }
    }

    #[test]
    fn example1_table_document() {
        let doc = br#"{"n":2,"j":3,"k":3,"type":"table","values":[0,1,2,0,1,2,2,2,2]}"#;
        let Loaded::Game(g) = parse_document(doc).unwrap().load().unwrap() else { panic!() };
        assert_eq!(g, example1());
    }

    #[test]
    fn interval_thresholds_accept_numbers_and_strings() {
        let doc = br#"{"n":2,"type":"interval-step","steps":[{"threshold":[0.25,"3/4"],"level":"1"}]}"#;
        let Loaded::Interval(v) = parse_document(doc).unwrap().load().unwrap() else { panic!() };
        assert_eq!(v.steps()[0].threshold, vec![jkssi_core::rational::rat(1, 4), jkssi_core::rational::rat(3, 4)]);
    }

    #[test]
    fn missing_shape_is_a_parse_error() {
        let doc = br#"{"n":2,"type":"point-veto","a":[1,1]}"#;
        assert!(matches!(parse_document(doc).unwrap().load(), Err(CliError::Parse(_))));
    }

    #[test]
    fn nested_combos_flatten() {
        let inner = combo_to_spec(&GameCombo::new(vec![(jkssi_core::rational::rat(1, 2), example1())]).unwrap());
        let outer = GameSpec {
            schema: None,
            n: 2,
            j: Some(3),
            k: Some(3),
            body: SpecBody::Combo { terms: vec![ComboTerm { weight: "2/1".into(), game: inner }] },
        };
        let Loaded::Combo(c) = outer.load().unwrap() else { panic!() };
        assert_eq!(c.terms().len(), 1);
        assert_eq!(c.terms()[0].0, jkssi_core::rational::rat(1, 1));
    }
}
