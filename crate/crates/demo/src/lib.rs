//! Browser demo. Each operation takes and returns JSON text; the functions in
//! this module run natively and the `wasm` module re-exports them to
//! JavaScript.

use serde::{Deserialize, Serialize};

use pubmarket::dynamics::{
    br_dynamics, habermann_cycle_conditions, replicator_simulate, CycleConditions,
    ReplicatorParams, ShareState, Terminal, UpdateRule,
};
use pubmarket::game::{NormalFormGame, ParetoStatus, Player, StrategyProfile};
use pubmarket::mixed::{support_enumeration, EquilibriumKind, MAX_SUPPORT_ENUMERATION_SIZE};
use pubmarket::models::{
    canonical_publishing_instantiation, habermann_game, publishing_game_3x3, HabermannParams,
};
use pubmarket::Rational;

#[derive(Debug, Deserialize)]
pub struct GameInput {
    pub row_strategies: Vec<String>,
    pub col_strategies: Vec<String>,
    /// `payoffs[i][j] = [row, col]`, numbers or `"p/q"` strings.
    pub payoffs: Vec<Vec<[Rational; 2]>>,
}

#[derive(Debug, Serialize, PartialEq, Eq)]
pub struct PureOut {
    pub row: String,
    pub col: String,
    pub payoffs: [String; 2],
    pub pareto_optimal: bool,
}

#[derive(Debug, Serialize, PartialEq, Eq)]
pub struct MixedOut {
    pub row: Vec<String>,
    pub col: Vec<String>,
    pub kind: String,
}

#[derive(Debug, Serialize, PartialEq, Eq)]
pub struct SolveOut {
    pub pure_nash: Vec<PureOut>,
    pub mixed: Vec<MixedOut>,
    /// Set when the game is too large for support enumeration.
    pub mixed_skipped: bool,
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn analyse(g: &NormalFormGame) -> SolveOut {
    let pure_nash = g
        .pure_nash()
        .into_iter()
        .map(|p| {
            let (a, b) = g.cell(p);
            PureOut {
                row: g.strategies(Player::Row)[p.row].clone(),
                col: g.strategies(Player::Col)[p.col].clone(),
                payoffs: [a.to_string(), b.to_string()],
                pareto_optimal: matches!(g.pareto_status(p), Ok(ParetoStatus::Optimal)),
            }
        })
        .collect();
    let (m, n) = g.shape();
    let skipped = m.max(n) > MAX_SUPPORT_ENUMERATION_SIZE;
    let mixed = if skipped {
        Vec::new()
    } else {
        support_enumeration(g)
            .expect("size checked")
            .into_iter()
            .map(|e| MixedOut {
                row: strings(&e.profile.row),
                col: strings(&e.profile.col),
                kind: match e.kind {
                    EquilibriumKind::PureCorner => "pure",
                    EquilibriumKind::InteriorMixed => "mixed",
                    EquilibriumKind::ComponentDegenerate => "degenerate",
                }
                .into(),
            })
            .collect()
    };
    SolveOut {
        pure_nash,
        mixed,
        mixed_skipped: skipped,
    }
}

/// Pure and mixed equilibria of a bimatrix game.
pub fn solve_game(input: &str) -> Result<String, String> {
    let inp: GameInput = serde_json::from_str(input).map_err(|e| e.to_string())?;
    let rows: Vec<&str> = inp.row_strategies.iter().map(String::as_str).collect();
    let cols: Vec<&str> = inp.col_strategies.iter().map(String::as_str).collect();
    let cells = inp
        .payoffs
        .into_iter()
        .map(|r| r.into_iter().map(|[a, b]| (a, b)).collect())
        .collect();
    let g = NormalFormGame::from_labels("row", "column", &rows, &cols, cells)
        .map_err(|e| e.to_string())?;
    Ok(serde_json::to_string(&analyse(&g)).expect("serializes"))
}

#[derive(Debug, Deserialize)]
pub struct ReplicatorInput {
    /// 3x3 row payoffs; defaults to the canonical publishing game.
    #[serde(default)]
    pub payoffs: Option<Vec<Vec<Rational>>>,
    pub init: [f64; 3],
    #[serde(default)]
    pub herd: f64,
    #[serde(default)]
    pub shift: f64,
    pub steps: usize,
}

#[derive(Debug, Serialize)]
pub struct ReplicatorOut {
    pub labels: [String; 3],
    pub states: Vec<[f64; 3]>,
    pub converged_to: Option<String>,
    pub time_to_threshold: Option<usize>,
    pub max_slope: f64,
}

pub const MAX_DEMO_STEPS: usize = 20_000;

/// Market-share trajectory of the three business models.
pub fn replicator(input: &str) -> Result<String, String> {
    let inp: ReplicatorInput = serde_json::from_str(input).map_err(|e| e.to_string())?;
    if inp.steps > MAX_DEMO_STEPS {
        return Err(format!("at most {MAX_DEMO_STEPS} steps"));
    }
    let canonical =
        publishing_game_3x3(&canonical_publishing_instantiation()).expect("canonical values");
    let g = match inp.payoffs {
        None => canonical,
        Some(rows) => {
            let cells = rows
                .into_iter()
                .map(|r| r.into_iter().map(|a| (a, Rational::zero())).collect())
                .collect();
            let labels = canonical.strategies(Player::Row).to_vec();
            let l: Vec<&str> = labels.iter().map(String::as_str).collect();
            NormalFormGame::from_labels("institution", "publisher", &l, &l, cells)
                .map_err(|e| e.to_string())?
        }
    };
    let [a, b, c] = inp.init;
    let params = ReplicatorParams {
        herd_weight: inp.herd,
        payoff_shift: inp.shift,
        steps: inp.steps,
    };
    let t = replicator_simulate(&g, ShareState::new(a, b, c), params).map_err(|e| e.to_string())?;
    let names = g.strategies(Player::Row);
    let out = ReplicatorOut {
        labels: [names[0].clone(), names[1].clone(), names[2].clone()],
        states: t.states.iter().map(|s| s.shares).collect(),
        converged_to: t.stats.converged_to.map(|i| names[i].clone()),
        time_to_threshold: t.stats.time_to_threshold,
        max_slope: t.stats.max_slope,
    };
    Ok(serde_json::to_string(&out).expect("serializes"))
}

#[derive(Debug, Serialize)]
pub struct HabermannOut {
    /// `cells[i][j] = [author, publisher]`.
    pub cells: Vec<Vec<[String; 2]>>,
    pub equilibria: SolveOut,
    pub br_path: String,
    pub cycles: bool,
    pub conditions: CycleConditions,
}

/// Author/publisher game: equilibria, best-response path from (s1, p1), and
/// the inequalities that make that path cycle.
pub fn habermann(input: &str) -> Result<String, String> {
    let params: HabermannParams = serde_json::from_str(input).map_err(|e| e.to_string())?;
    let g = habermann_game(&params).map_err(|e| e.to_string())?;
    let trace = br_dynamics(
        &g,
        StrategyProfile::new(0, 0),
        UpdateRule::AlternatingRowFirst,
        50,
    )
    .map_err(|e| e.to_string())?;
    let out = HabermannOut {
        cells: g
            .payoff_matrix()
            .iter()
            .map(|r| {
                r.iter()
                    .map(|(a, b)| [a.to_string(), b.to_string()])
                    .collect()
            })
            .collect(),
        equilibria: analyse(&g),
        br_path: trace.render(&g),
        cycles: matches!(trace.terminal, Terminal::Cycle { .. }),
        conditions: habermann_cycle_conditions(&params).map_err(|e| e.to_string())?,
    };
    Ok(serde_json::to_string(&out).expect("serializes"))
}

#[cfg(target_arch = "wasm32")]
mod wasm {
    use wasm_bindgen::prelude::*;

    #[wasm_bindgen(js_name = solveGame)]
    pub fn solve_game(input: &str) -> Result<String, JsError> {
        super::solve_game(input).map_err(|e| JsError::new(&e))
    }

    #[wasm_bindgen]
    pub fn replicator(input: &str) -> Result<String, JsError> {
        super::replicator(input).map_err(|e| JsError::new(&e))
    }

    #[wasm_bindgen]
    pub fn habermann(input: &str) -> Result<String, JsError> {
        super::habermann(input).map_err(|e| JsError::new(&e))
    }
}
