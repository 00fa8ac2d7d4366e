//! Scenario files: a game (concrete, symbolic, or the signalling model) plus
//! analysis options, stored as JSON.

use serde::{Deserialize, Serialize};

use pubmarket::game::{DominanceKind, IedsPolicy, NormalFormGame, PlayerOrder};
use pubmarket::models::BesancenotParams;
use pubmarket::ordinal::{Constraint, OrderingConstraintSet, Relation, SymbolicGame, Term};
use pubmarket::Rational;

use crate::CliError;

pub const SCENARIO_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioFile {
    pub schema_version: u32,
    pub name: String,
    pub game: GameSpec,
    #[serde(default, skip_serializing_if = "Options::is_empty")]
    pub options: Options,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GameSpec {
    Concrete {
        row_player: String,
        col_player: String,
        row_strategies: Vec<String>,
        col_strategies: Vec<String>,
        /// `payoffs[i][j] = [row payoff, column payoff]`.
        payoffs: Vec<Vec<[Rational; 2]>>,
    },
    Symbolic {
        row_player: String,
        col_player: String,
        row_strategies: Vec<String>,
        col_strategies: Vec<String>,
        cells: Vec<Vec<[Term; 2]>>,
        /// One relation or chain per entry, e.g. `"alpha > alpha_star ~= omega_star"`.
        constraints: Vec<String>,
    },
    Besancenot {
        params: BesancenotParams,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IedsKind {
    Strict,
    Weak,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IedsOrder {
    RowFirst,
    ColFirst,
    Alternating,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IedsOption {
    pub kind: IedsKind,
    pub order: IedsOrder,
}

impl IedsOption {
    pub fn policy(self) -> IedsPolicy {
        IedsPolicy::new(
            match self.kind {
                IedsKind::Strict => DominanceKind::Strict,
                IedsKind::Weak => DominanceKind::Weak,
            },
            match self.order {
                IedsOrder::RowFirst => PlayerOrder::RowFirst,
                IedsOrder::ColFirst => PlayerOrder::ColFirst,
                IedsOrder::Alternating => PlayerOrder::Alternating,
            },
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DynamicsOptions {
    /// Starting profile as `[row label, column label]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub init: Option<[Rational; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub herd_weight: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub payoff_shift: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Options {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ieds: Option<IedsOption>,
    /// Symbolic games: anchor every cell symbol above 0.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nonnegativity: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dynamics: Option<DynamicsOptions>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Options {
    pub fn is_empty(&self) -> bool {
        *self == Options::default()
    }
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        if text.trim().is_empty() {
            return Err(CliError::Parse {
                line: 1,
                column: 1,
                message: "empty scenario".into(),
            });
        }
        let scenario: ScenarioFile = serde_json::from_str(text).map_err(|e| CliError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if scenario.schema_version != SCENARIO_SCHEMA_VERSION {
            return Err(CliError::Parse {
                line: 1,
                column: 1,
                message: format!("unsupported schema_version {}", scenario.schema_version),
            });
        }
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn emit(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("scenario serializes");
        s.push('\n');
        s
    }

    pub fn validate(&self) -> Result<(), CliError> {
        match &self.game {
            GameSpec::Concrete { .. } => self.concrete_game().map(|_| ()),
            GameSpec::Symbolic { .. } => self.symbolic_game().map(|_| ()),
            GameSpec::Besancenot { params } => params
                .validate()
                .map_err(|e| CliError::Domain(e.to_string())),
        }
    }

    pub fn concrete_game(&self) -> Result<NormalFormGame, CliError> {
        let GameSpec::Concrete {
            row_player,
            col_player,
            row_strategies,
            col_strategies,
            payoffs,
        } = &self.game
        else {
            return Err(CliError::Shape(
                "scenario does not hold a concrete game".into(),
            ));
        };
        let rows: Vec<&str> = row_strategies.iter().map(String::as_str).collect();
        let cols: Vec<&str> = col_strategies.iter().map(String::as_str).collect();
        let cells = payoffs
            .iter()
            .map(|r| r.iter().map(|[a, b]| (a.clone(), b.clone())).collect())
            .collect();
        NormalFormGame::from_labels(row_player, col_player, &rows, &cols, cells)
            .map_err(|e| CliError::Shape(e.to_string()))
    }

    /// The symbolic game and its constraint set, nonnegativity anchors included.
    pub fn symbolic_game(&self) -> Result<(SymbolicGame, OrderingConstraintSet), CliError> {
        let GameSpec::Symbolic {
            row_player,
            col_player,
            row_strategies,
            col_strategies,
            cells,
            constraints,
        } = &self.game
        else {
            return Err(CliError::Shape(
                "scenario does not hold a symbolic game".into(),
            ));
        };
        let rows: Vec<&str> = row_strategies.iter().map(String::as_str).collect();
        let cols: Vec<&str> = col_strategies.iter().map(String::as_str).collect();
        let cells = cells
            .iter()
            .map(|r| r.iter().map(|[a, b]| (a.clone(), b.clone())).collect())
            .collect();
        let game = SymbolicGame::new(row_player, col_player, &rows, &cols, cells)
            .map_err(|e| CliError::Shape(e.to_string()))?;
        let mut set =
            OrderingConstraintSet::parse_lines(constraints).map_err(CliError::from_ordinal)?;
        if self.options.nonnegativity.unwrap_or(false) {
            for s in game.all_symbols() {
                set.add(Constraint::new(
                    Term::Symbol(s),
                    Relation::Greater,
                    Term::lit(0),
                ));
            }
        }
        for s in game.all_symbols() {
            set.add_symbol(s);
        }
        set.validate().map_err(CliError::from_ordinal)?;
        Ok((game, set))
    }
}

pub fn concrete_scenario(name: &str, game: &NormalFormGame, options: Options) -> ScenarioFile {
    use pubmarket::game::Player;
    ScenarioFile {
        schema_version: SCENARIO_SCHEMA_VERSION,
        name: name.to_string(),
        game: GameSpec::Concrete {
            row_player: game.row_label().to_string(),
            col_player: game.col_label().to_string(),
            row_strategies: game.strategies(Player::Row).to_vec(),
            col_strategies: game.strategies(Player::Col).to_vec(),
            payoffs: game
                .payoff_matrix()
                .iter()
                .map(|r| r.iter().map(|(a, b)| [a.clone(), b.clone()]).collect())
                .collect(),
        },
        options,
    }
}

pub fn symbolic_scenario(
    name: &str,
    game: &SymbolicGame,
    constraints: &OrderingConstraintSet,
    options: Options,
) -> ScenarioFile {
    ScenarioFile {
        schema_version: SCENARIO_SCHEMA_VERSION,
        name: name.to_string(),
        game: GameSpec::Symbolic {
            row_player: game.row_label.clone(),
            col_player: game.col_label.clone(),
            row_strategies: game.row_strategies.clone(),
            col_strategies: game.col_strategies.clone(),
            cells: game
                .cells
                .iter()
                .map(|r| r.iter().map(|(a, b)| [a.clone(), b.clone()]).collect())
                .collect(),
            constraints: constraints.to_lines(),
        },
        options,
    }
}

/// Parses `a,b,c` into rationals (integers, fractions or decimals).
pub fn parse_rational_list(text: &str) -> Result<Vec<Rational>, CliError> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<Rational>()
                .map_err(|_| CliError::Domain(format!("`{}` is not a number", t.trim())))
        })
        .collect()
}
