//! Finite two-player normal-form games and the pure-strategy solution
//! concepts: best response, pure Nash, dominance, IEDS and Pareto status.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GameError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("duplicate strategy label `{label}` for the {player} player")]
    DuplicateLabel { player: Player, label: String },
    #[error("index {index} out of bounds for the {player} player ({len} strategies)")]
    IndexOutOfBounds {
        player: Player,
        index: usize,
        len: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Player {
    Row,
    Col,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::Row => Player::Col,
            Player::Col => Player::Row,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Row => "row",
            Player::Col => "column",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StrategyProfile {
    pub row: usize,
    pub col: usize,
}

impl StrategyProfile {
    pub fn new(row: usize, col: usize) -> Self {
        StrategyProfile { row, col }
    }

    /// The index this profile assigns to `player`.
    pub fn of(&self, player: Player) -> usize {
        match player {
            Player::Row => self.row,
            Player::Col => self.col,
        }
    }
}

/// A validated bimatrix game. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalFormGame {
    row_label: String,
    col_label: String,
    row_strategies: Vec<String>,
    col_strategies: Vec<String>,
    payoffs: Vec<Vec<(Rational, Rational)>>,
}

impl NormalFormGame {
    pub fn new(
        row_label: impl Into<String>,
        col_label: impl Into<String>,
        row_strategies: Vec<String>,
        col_strategies: Vec<String>,
        payoffs: Vec<Vec<(Rational, Rational)>>,
    ) -> Result<Self, GameError> {
        if row_strategies.is_empty() || col_strategies.is_empty() {
            return Err(GameError::DimensionMismatch(
                "each player needs at least one strategy".into(),
            ));
        }
        if payoffs.len() != row_strategies.len() {
            return Err(GameError::DimensionMismatch(format!(
                "{} payoff rows for {} row strategies",
                payoffs.len(),
                row_strategies.len()
            )));
        }
        for (i, row) in payoffs.iter().enumerate() {
            if row.len() != col_strategies.len() {
                return Err(GameError::DimensionMismatch(format!(
                    "payoff row {i} has {} cells for {} column strategies",
                    row.len(),
                    col_strategies.len()
                )));
            }
        }
        for (player, labels) in [
            (Player::Row, &row_strategies),
            (Player::Col, &col_strategies),
        ] {
            let mut seen = BTreeSet::new();
            for l in labels {
                if !seen.insert(l) {
                    return Err(GameError::DuplicateLabel {
                        player,
                        label: l.clone(),
                    });
                }
            }
        }
        Ok(NormalFormGame {
            row_label: row_label.into(),
            col_label: col_label.into(),
            row_strategies,
            col_strategies,
            payoffs,
        })
    }

    /// Convenience constructor from `&str` labels.
    pub fn from_labels(
        row_label: &str,
        col_label: &str,
        row_strategies: &[&str],
        col_strategies: &[&str],
        payoffs: Vec<Vec<(Rational, Rational)>>,
    ) -> Result<Self, GameError> {
        Self::new(
            row_label,
            col_label,
            row_strategies.iter().map(|s| s.to_string()).collect(),
            col_strategies.iter().map(|s| s.to_string()).collect(),
            payoffs,
        )
    }

    /// Integer payoffs with generated labels `r0.. / c0..`; handy for tests.
    pub fn from_integers(payoffs: &[Vec<(i64, i64)>]) -> Result<Self, GameError> {
        let m = payoffs.len();
        let n = payoffs.first().map_or(0, |r| r.len());
        Self::new(
            "row",
            "col",
            (0..m).map(|i| format!("r{i}")).collect(),
            (0..n).map(|j| format!("c{j}")).collect(),
            payoffs
                .iter()
                .map(|r| r.iter().map(|&(a, b)| (a.into(), b.into())).collect())
                .collect(),
        )
    }

    pub fn row_label(&self) -> &str {
        &self.row_label
    }

    pub fn col_label(&self) -> &str {
        &self.col_label
    }

    pub fn player_label(&self, player: Player) -> &str {
        match player {
            Player::Row => &self.row_label,
            Player::Col => &self.col_label,
        }
    }

    pub fn strategies(&self, player: Player) -> &[String] {
        match player {
            Player::Row => &self.row_strategies,
            Player::Col => &self.col_strategies,
        }
    }

    pub fn num_strategies(&self, player: Player) -> usize {
        self.strategies(player).len()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.row_strategies.len(), self.col_strategies.len())
    }

    pub fn cell(&self, profile: StrategyProfile) -> &(Rational, Rational) {
        &self.payoffs[profile.row][profile.col]
    }

    pub fn payoff_matrix(&self) -> &[Vec<(Rational, Rational)>] {
        &self.payoffs
    }

    pub fn payoff(&self, player: Player, profile: StrategyProfile) -> &Rational {
        let (a, b) = self.cell(profile);
        match player {
            Player::Row => a,
            Player::Col => b,
        }
    }

    /// Payoff to `player` for playing `own` while the opponent plays `opp`.
    pub fn payoff_against(&self, player: Player, own: usize, opp: usize) -> &Rational {
        self.payoff(player, profile_for(player, own, opp))
    }

    pub fn strategy_index(&self, player: Player, label: &str) -> Option<usize> {
        self.strategies(player).iter().position(|s| s == label)
    }

    pub fn profile_label(&self, p: StrategyProfile) -> String {
        format!(
            "({}, {})",
            self.row_strategies[p.row], self.col_strategies[p.col]
        )
    }

    fn check_index(&self, player: Player, index: usize) -> Result<(), GameError> {
        let len = self.num_strategies(player);
        if index >= len {
            Err(GameError::IndexOutOfBounds { player, index, len })
        } else {
            Ok(())
        }
    }

    fn check_profile(&self, p: StrategyProfile) -> Result<(), GameError> {
        self.check_index(Player::Row, p.row)?;
        self.check_index(Player::Col, p.col)
    }

    /// Every profile, row-major.
    pub fn profiles(&self) -> impl Iterator<Item = StrategyProfile> + '_ {
        let (m, n) = self.shape();
        (0..m).flat_map(move |r| (0..n).map(move |c| StrategyProfile::new(r, c)))
    }

    /// Keeps the listed strategies (in the given order).
    pub fn subgame(&self, rows: &[usize], cols: &[usize]) -> Result<NormalFormGame, GameError> {
        for &r in rows {
            self.check_index(Player::Row, r)?;
        }
        for &c in cols {
            self.check_index(Player::Col, c)?;
        }
        NormalFormGame::new(
            self.row_label.clone(),
            self.col_label.clone(),
            rows.iter()
                .map(|&r| self.row_strategies[r].clone())
                .collect(),
            cols.iter()
                .map(|&c| self.col_strategies[c].clone())
                .collect(),
            rows.iter()
                .map(|&r| cols.iter().map(|&c| self.payoffs[r][c].clone()).collect())
                .collect(),
        )
    }

    /// Best responses of `player` to the opponent's `opposing` strategy,
    /// ties included, sorted ascending.
    pub fn best_responses(&self, player: Player, opposing: usize) -> Result<Vec<usize>, GameError> {
        self.check_index(player.other(), opposing)?;
        let k = self.num_strategies(player);
        let best = (0..k)
            .map(|s| self.payoff_against(player, s, opposing))
            .max()
            .expect("at least one strategy");
        Ok((0..k)
            .filter(|&s| self.payoff_against(player, s, opposing) == best)
            .collect())
    }

    /// Mutual best-response profiles, sorted lexicographically.
    pub fn pure_nash(&self) -> Vec<StrategyProfile> {
        let (m, n) = self.shape();
        let row_br: Vec<Vec<usize>> = (0..n)
            .map(|c| self.best_responses(Player::Row, c).expect("in bounds"))
            .collect();
        let col_br: Vec<Vec<usize>> = (0..m)
            .map(|r| self.best_responses(Player::Col, r).expect("in bounds"))
            .collect();
        self.profiles()
            .filter(|p| row_br[p.col].contains(&p.row) && col_br[p.row].contains(&p.col))
            .collect()
    }

    /// Does `dominator` dominate `dominated` for `player` under `kind`?
    pub fn dominates(
        &self,
        player: Player,
        dominator: usize,
        dominated: usize,
        kind: DominanceKind,
    ) -> bool {
        if dominator == dominated {
            return false;
        }
        let opp = self.num_strategies(player.other());
        let mut strictly_somewhere = false;
        for o in 0..opp {
            let a = self.payoff_against(player, dominator, o);
            let b = self.payoff_against(player, dominated, o);
            match kind {
                DominanceKind::Strict if a <= b => return false,
                DominanceKind::Weak if a < b => return false,
                _ => {}
            }
            if a > b {
                strictly_somewhere = true;
            }
        }
        strictly_somewhere
    }

    /// One verdict per strategy of `player`, indexed by strategy. For `Weak`
    /// queries a strict dominator is reported when one exists; the lowest
    /// index dominator is chosen in each category.
    pub fn dominated_strategies(
        &self,
        player: Player,
        kind: DominanceKind,
    ) -> Vec<DominanceVerdict> {
        let k = self.num_strategies(player);
        (0..k)
            .map(|s| {
                let strict = (0..k).find(|&d| self.dominates(player, d, s, DominanceKind::Strict));
                if let Some(d) = strict {
                    return DominanceVerdict::strictly(d);
                }
                if kind == DominanceKind::Weak {
                    if let Some(d) =
                        (0..k).find(|&d| self.dominates(player, d, s, DominanceKind::Weak))
                    {
                        return DominanceVerdict::weakly(d);
                    }
                }
                DominanceVerdict::not_dominated()
            })
            .collect()
    }

    /// Every profile weakly better for both and strictly better for one.
    pub fn pareto_status(&self, profile: StrategyProfile) -> Result<ParetoStatus, GameError> {
        self.check_profile(profile)?;
        let (a, b) = self.cell(profile);
        let dominators: Vec<StrategyProfile> = self
            .profiles()
            .filter(|&q| {
                let (x, y) = self.cell(q);
                x >= a && y >= b && (x > a || y > b)
            })
            .collect();
        Ok(if dominators.is_empty() {
            ParetoStatus::Optimal
        } else {
            ParetoStatus::DominatedBy(dominators)
        })
    }

    /// Iterated elimination of dominated strategies, one strategy per step.
    pub fn ieds(&self, policy: IedsPolicy) -> (NormalFormGame, EliminationTrace) {
        let (m, n) = self.shape();
        let mut alive: [Vec<usize>; 2] = [(0..m).collect(), (0..n).collect()];
        let mut steps: Vec<EliminationStep> = Vec::new();
        let mut round = 0u32;
        let mut last_player: Option<Player> = None;
        let mut turn = match policy.order {
            PlayerOrder::ColFirst => Player::Col,
            _ => Player::Row,
        };
        loop {
            let current = self
                .subgame(&alive[0], &alive[1])
                .expect("alive indices valid");
            let candidates = match policy.order {
                PlayerOrder::RowFirst => [Player::Row, Player::Col],
                PlayerOrder::ColFirst => [Player::Col, Player::Row],
                PlayerOrder::Alternating => [turn, turn.other()],
            };
            let found = candidates.iter().find_map(|&player| {
                let verdicts = current.dominated_strategies(player, policy.kind);
                verdicts
                    .iter()
                    .enumerate()
                    .find_map(|(s, v)| v.dominator.map(|d| (player, s, d, v.kind)))
            });
            let Some((player, s, d, verdict_kind)) = found else {
                break;
            };
            if last_player != Some(player) {
                round += 1;
                last_player = Some(player);
            }
            let idx = player_slot(player);
            let removed = alive[idx][s];
            let dominator = alive[idx][d];
            let labels = self.strategies(player);
            steps.push(EliminationStep {
                round,
                player,
                removed: labels[removed].clone(),
                removed_index: removed,
                dominator: labels[dominator].clone(),
                dominator_index: dominator,
                kind: match verdict_kind {
                    VerdictKind::StrictlyDominated => DominanceKind::Strict,
                    _ => DominanceKind::Weak,
                },
            });
            alive[idx].remove(s);
            turn = player.other();
        }
        let terminal = self
            .subgame(&alive[0], &alive[1])
            .expect("alive indices valid");
        (
            terminal.clone(),
            EliminationTrace {
                steps,
                terminal_game: terminal,
                surviving_rows: alive[0].clone(),
                surviving_cols: alive[1].clone(),
            },
        )
    }
}

impl fmt::Display for NormalFormGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (m, n) = self.shape();
        let cells: Vec<Vec<String>> = self
            .payoffs
            .iter()
            .map(|r| r.iter().map(|(a, b)| format!("({a}, {b})")).collect())
            .collect();
        let label_w = self
            .row_strategies
            .iter()
            .map(|s| s.chars().count())
            .max()
            .unwrap_or(0);
        let col_w: Vec<usize> = (0..n)
            .map(|c| {
                (0..m)
                    .map(|r| cells[r][c].chars().count())
                    .chain(std::iter::once(self.col_strategies[c].chars().count()))
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        writeln!(f, "{} \\ {}", self.row_label, self.col_label)?;
        write!(f, "{:label_w$}", "")?;
        for c in 0..n {
            write!(f, "  {:>w$}", self.col_strategies[c], w = col_w[c])?;
        }
        writeln!(f)?;
        for r in 0..m {
            write!(f, "{:label_w$}", self.row_strategies[r])?;
            for c in 0..n {
                write!(f, "  {:>w$}", cells[r][c], w = col_w[c])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn player_slot(player: Player) -> usize {
    match player {
        Player::Row => 0,
        Player::Col => 1,
    }
}

pub(crate) fn profile_for(player: Player, own: usize, opp: usize) -> StrategyProfile {
    match player {
        Player::Row => StrategyProfile::new(own, opp),
        Player::Col => StrategyProfile::new(opp, own),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DominanceKind {
    Strict,
    Weak,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictKind {
    StrictlyDominated,
    WeaklyDominated,
    NotDominated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominanceVerdict {
    pub kind: VerdictKind,
    /// Present iff `kind != NotDominated`.
    pub dominator: Option<usize>,
}

impl DominanceVerdict {
    fn strictly(d: usize) -> Self {
        DominanceVerdict {
            kind: VerdictKind::StrictlyDominated,
            dominator: Some(d),
        }
    }

    fn weakly(d: usize) -> Self {
        DominanceVerdict {
            kind: VerdictKind::WeaklyDominated,
            dominator: Some(d),
        }
    }

    fn not_dominated() -> Self {
        DominanceVerdict {
            kind: VerdictKind::NotDominated,
            dominator: None,
        }
    }

    pub fn is_dominated(&self) -> bool {
        self.dominator.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParetoStatus {
    Optimal,
    DominatedBy(Vec<StrategyProfile>),
}

/// Whose strategies are examined first at each elimination step.
///
/// `RowFirst` / `ColFirst` give one player priority: that player is
/// reduced as far as possible before the other is examined, and regains
/// priority after every elimination by the other. `Alternating` hands the
/// turn over after each elimination and skips a player with nothing to remove.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlayerOrder {
    RowFirst,
    ColFirst,
    Alternating,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IedsPolicy {
    pub kind: DominanceKind,
    pub order: PlayerOrder,
}

impl IedsPolicy {
    pub fn new(kind: DominanceKind, order: PlayerOrder) -> Self {
        IedsPolicy { kind, order }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationStep {
    /// Increments whenever the eliminating player changes.
    pub round: u32,
    pub player: Player,
    pub removed: String,
    pub removed_index: usize,
    pub dominator: String,
    pub dominator_index: usize,
    pub kind: DominanceKind,
}

impl fmt::Display for EliminationStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let how = match self.kind {
            DominanceKind::Strict => "strictly",
            DominanceKind::Weak => "weakly",
        };
        write!(
            f,
            "round {}: {} player removes {} ({} dominated by {})",
            self.round, self.player, self.removed, how, self.dominator
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationTrace {
    pub steps: Vec<EliminationStep>,
    pub terminal_game: NormalFormGame,
    /// Original indices of the strategies left standing.
    pub surviving_rows: Vec<usize>,
    pub surviving_cols: Vec<usize>,
}

impl EliminationTrace {
    /// The single surviving profile (original indices), if IEDS was solvable.
    pub fn solution(&self) -> Option<StrategyProfile> {
        match (
            self.surviving_rows.as_slice(),
            self.surviving_cols.as_slice(),
        ) {
            ([r], [c]) => Some(StrategyProfile::new(*r, *c)),
            _ => None,
        }
    }
}
