//! Best-response dynamics and a discrete replicator with a herding term.
//!
//! The replicator runs in `f64` with renormalisation after every step;
//! exact rationals would grow without bound along a trajectory.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::game::{GameError, NormalFormGame, Player, StrategyProfile};
use crate::models::HabermannParams;
use crate::rational::Rational;

/// Shares must sum to one within this after every step.
pub const SIMPLEX_TOLERANCE: f64 = 1e-12;

/// Default share a model needs before it counts as having taken the market.
pub const DEFAULT_CONVERGENCE_THRESHOLD: f64 = 0.99;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("domain error: {0}")]
    DomainError(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UpdateRule {
    AlternatingRowFirst,
    AlternatingColFirst,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum Terminal {
    FixedPoint { profile: StrategyProfile },
    Cycle { period: usize, first_index: usize },
    Truncated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrDynamicsTrace {
    /// Profiles visited; a new entry is recorded only when someone moves.
    pub path: Vec<StrategyProfile>,
    pub terminal: Terminal,
}

impl BrDynamicsTrace {
    pub fn render(&self, game: &NormalFormGame) -> String {
        let short = |p: &StrategyProfile| {
            format!(
                "({},{})",
                game.strategies(Player::Row)[p.row],
                game.strategies(Player::Col)[p.col]
            )
        };
        match &self.terminal {
            Terminal::FixedPoint { profile } => format!(
                "Fixed point {} after {}",
                short(profile),
                self.path.iter().map(short).collect::<Vec<_>>().join("→")
            ),
            Terminal::Cycle {
                period,
                first_index,
            } => {
                let cycle: Vec<String> = self.path[*first_index..first_index + period]
                    .iter()
                    .map(short)
                    .collect();
                format!("Cycle period {period}: {}→…", cycle.join("→"))
            }
            Terminal::Truncated => format!(
                "Truncated after {} moves: {}",
                self.path.len() - 1,
                self.path.iter().map(short).collect::<Vec<_>>().join("→")
            ),
        }
    }
}

/// Alternating best-response dynamics. The mover stays put whenever its
/// current strategy is already a best response; otherwise it switches to the
/// lowest-index best response. Each turn counts as one step.
pub fn br_dynamics(
    game: &NormalFormGame,
    start: StrategyProfile,
    rule: UpdateRule,
    max_steps: usize,
) -> Result<BrDynamicsTrace, DynamicsError> {
    let (m, n) = game.shape();
    if start.row >= m {
        return Err(GameError::IndexOutOfBounds {
            player: Player::Row,
            index: start.row,
            len: m,
        }
        .into());
    }
    if start.col >= n {
        return Err(GameError::IndexOutOfBounds {
            player: Player::Col,
            index: start.col,
            len: n,
        }
        .into());
    }
    if max_steps == 0 {
        return Err(DynamicsError::DomainError(
            "max_steps must be at least 1".into(),
        ));
    }
    let mut turn = match rule {
        UpdateRule::AlternatingRowFirst => Player::Row,
        UpdateRule::AlternatingColFirst => Player::Col,
    };
    let mut path = vec![start];
    let mut current = start;
    // (profile, player to move) -> path index where that state began.
    let mut seen: BTreeMap<(StrategyProfile, Player), usize> = BTreeMap::new();
    seen.insert((current, turn), 0);
    let mut idle_turns = 0;
    for _ in 0..max_steps {
        let opp = current.of(turn.other());
        let br = game.best_responses(turn, opp)?;
        let own = current.of(turn);
        if br.contains(&own) {
            idle_turns += 1;
            if idle_turns >= 2 {
                return Ok(BrDynamicsTrace {
                    path,
                    terminal: Terminal::FixedPoint { profile: current },
                });
            }
        } else {
            idle_turns = 0;
            current = match turn {
                Player::Row => StrategyProfile::new(br[0], current.col),
                Player::Col => StrategyProfile::new(current.row, br[0]),
            };
            path.push(current);
        }
        turn = turn.other();
        let here = path.len() - 1;
        if let Some(&first) = seen.get(&(current, turn)) {
            if first < here {
                return Ok(BrDynamicsTrace {
                    path,
                    terminal: Terminal::Cycle {
                        period: here - first,
                        first_index: first,
                    },
                });
            }
        } else {
            seen.insert((current, turn), here);
        }
    }
    Ok(BrDynamicsTrace {
        path,
        terminal: Terminal::Truncated,
    })
}

/// The three deviation inequalities behind the four-step author/publisher
/// oscillation starting at (s1, p1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleConditions {
    /// r + L/2 > tau: the author leaves (s1, p1).
    pub author_leaves_open: bool,
    /// G + P + tau > r + L: the author leaves (s2, p2).
    pub author_returns_to_open: bool,
    /// G + I - L/2 > 0: the publisher leaves (s1, p2).
    pub publisher_returns_to_open: bool,
}

impl CycleConditions {
    pub fn all(&self) -> bool {
        self.author_leaves_open && self.author_returns_to_open && self.publisher_returns_to_open
    }
}

pub fn habermann_cycle_conditions(
    params: &HabermannParams,
) -> Result<CycleConditions, DynamicsError> {
    params
        .validate()
        .map_err(|e| DynamicsError::DomainError(e.to_string()))?;
    let half_l = &params.l / &Rational::from_integer(2);
    Ok(CycleConditions {
        author_leaves_open: &params.r + &half_l > params.tau,
        author_returns_to_open: &(&params.g + &params.p) + &params.tau > &params.r + &params.l,
        publisher_returns_to_open: &(&params.g + &params.i) - &half_l > Rational::zero(),
    })
}

/// Market shares of the three business models (OA, C, H).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShareState {
    pub shares: [f64; 3],
}

impl ShareState {
    pub fn new(oa: f64, c: f64, h: f64) -> Self {
        ShareState { shares: [oa, c, h] }
    }

    pub fn uniform() -> Self {
        ShareState {
            shares: [1.0 / 3.0; 3],
        }
    }

    pub fn sum(&self) -> f64 {
        self.shares.iter().sum()
    }

    fn on_simplex(&self, tol: f64) -> bool {
        self.shares.iter().all(|x| x.is_finite() && *x >= 0.0) && (self.sum() - 1.0).abs() <= tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceStats {
    pub converged_to: Option<usize>,
    /// Present iff `converged_to` is.
    pub time_to_threshold: Option<usize>,
    /// Largest one-step increase of the leading share.
    pub max_slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShareTrajectory {
    pub states: Vec<ShareState>,
    pub stats: ConvergenceStats,
}

impl ShareTrajectory {
    /// `step,x_oa,x_c,x_h`, one line per state, 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,x_oa,x_c,x_h\n");
        for (t, s) in self.states.iter().enumerate() {
            let _ = writeln!(
                out,
                "{t},{},{},{}",
                sig12(s.shares[0]),
                sig12(s.shares[1]),
                sig12(s.shares[2])
            );
        }
        out
    }
}

/// 12 significant digits: plain decimal, or scientific below 1e-6.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    if x.abs() < 1e-6 {
        return format!("{x:.11e}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // Rounding can carry into a new digit (9.99... -> 10.0...).
    let digits = s
        .chars()
        .filter(|c| c.is_ascii_digit())
        .skip_while(|&c| c == '0')
        .count();
    if digits > 12 && decimals > 0 {
        let d = decimals - 1;
        format!("{x:.d$}")
    } else {
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReplicatorParams {
    /// Weight of the popularity term; 0 gives the plain replicator.
    pub herd_weight: f64,
    /// Added to every fitness so adjusted fitnesses stay positive.
    pub payoff_shift: f64,
    pub steps: usize,
}

/// Discrete replicator with herding on the row player's payoffs: fitness
/// `f_i = (A x)_i`, adjusted `g_i = f_i + shift + herd * x_i`, update
/// `x_i' = x_i g_i / sum_j x_j g_j`.
pub fn replicator_simulate(
    game: &NormalFormGame,
    init: ShareState,
    params: ReplicatorParams,
) -> Result<ShareTrajectory, DynamicsError> {
    if game.shape() != (3, 3) {
        let (m, n) = game.shape();
        return Err(DynamicsError::DomainError(format!(
            "expected a 3x3 game, got {m}x{n}"
        )));
    }
    if !init.on_simplex(1e-9) {
        return Err(DynamicsError::DomainError(format!(
            "initial shares {:?} are not on the simplex",
            init.shares
        )));
    }
    if params.herd_weight < 0.0
        || !params.herd_weight.is_finite()
        || !params.payoff_shift.is_finite()
    {
        return Err(DynamicsError::DomainError(
            "herd weight must be finite and nonnegative".into(),
        ));
    }
    let a: Vec<Vec<f64>> = (0..3)
        .map(|i| {
            (0..3)
                .map(|j| {
                    game.payoff(Player::Row, StrategyProfile::new(i, j))
                        .to_f64()
                })
                .collect()
        })
        .collect();
    let mut x = init.shares;
    let s = x.iter().sum::<f64>();
    x.iter_mut().for_each(|v| *v /= s);
    let mut states = vec![ShareState { shares: x }];
    for step in 0..params.steps {
        let mut g = [0.0; 3];
        for i in 0..3 {
            let f: f64 = (0..3).map(|j| a[i][j] * x[j]).sum();
            g[i] = f + params.payoff_shift + params.herd_weight * x[i];
            if x[i] > 0.0 && g[i] < 0.0 {
                return Err(DynamicsError::DomainError(format!(
                    "adjusted fitness of model {i} is negative ({:.6}) at step {step}; raise the payoff shift",
                    g[i]
                )));
            }
        }
        let mean: f64 = (0..3).map(|i| x[i] * g[i]).sum();
        if mean <= 0.0 {
            return Err(DynamicsError::DomainError(format!(
                "mean adjusted fitness is not positive at step {step}"
            )));
        }
        for i in 0..3 {
            x[i] = x[i] * g[i] / mean;
        }
        let total: f64 = x.iter().sum();
        x.iter_mut().for_each(|v| *v /= total);
        states.push(ShareState { shares: x });
    }
    let stats = convergence_stats(&states, DEFAULT_CONVERGENCE_THRESHOLD);
    Ok(ShareTrajectory { states, stats })
}

/// The leading model at the end of the trajectory, when it first crossed
/// `threshold`, and the steepest one-step rise of its share.
pub fn convergence_stats(states: &[ShareState], threshold: f64) -> ConvergenceStats {
    let Some(last) = states.last() else {
        return ConvergenceStats {
            converged_to: None,
            time_to_threshold: None,
            max_slope: 0.0,
        };
    };
    let leader = (0..3).fold(0, |best, i| {
        if last.shares[i] > last.shares[best] {
            i
        } else {
            best
        }
    });
    let max_slope = states
        .windows(2)
        .map(|w| w[1].shares[leader] - w[0].shares[leader])
        .fold(0.0, f64::max);
    let converged = last.shares[leader] >= threshold;
    let time_to_threshold = converged
        .then(|| states.iter().position(|s| s.shares[leader] >= threshold))
        .flatten();
    ConvergenceStats {
        converged_to: converged.then_some(leader),
        time_to_threshold,
        max_slope,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_game(cells: &[Vec<(i64, i64)>]) -> NormalFormGame {
        NormalFormGame::from_integers(cells).unwrap()
    }

    fn institution_game() -> NormalFormGame {
        int_game(&[
            vec![(6, 3), (5, 0), (5, 2)],
            vec![(6, 6), (3, 5), (4, 7)],
            vec![(5, 8), (5, 0), (2, 8)],
        ])
    }

    #[test]
    fn strict_nash_start_is_fixed_in_one_round() {
        let pd = int_game(&[vec![(5, 5), (3, 6)], vec![(6, 3), (4, 4)]]);
        let t = br_dynamics(
            &pd,
            StrategyProfile::new(1, 1),
            UpdateRule::AlternatingRowFirst,
            10,
        )
        .unwrap();
        assert_eq!(t.path, vec![StrategyProfile::new(1, 1)]);
        assert_eq!(
            t.terminal,
            Terminal::FixedPoint {
                profile: StrategyProfile::new(1, 1)
            }
        );
        for start in pd.profiles() {
            let t = br_dynamics(&pd, start, UpdateRule::AlternatingColFirst, 10).unwrap();
            assert_eq!(
                t.terminal,
                Terminal::FixedPoint {
                    profile: StrategyProfile::new(1, 1)
                }
            );
        }
    }

    #[test]
    fn matching_pennies_cycles() {
        let mp = int_game(&[vec![(1, -1), (-1, 1)], vec![(-1, 1), (1, -1)]]);
        let t = br_dynamics(
            &mp,
            StrategyProfile::new(0, 0),
            UpdateRule::AlternatingRowFirst,
            50,
        )
        .unwrap();
        assert_eq!(
            t.terminal,
            Terminal::Cycle {
                period: 4,
                first_index: 0
            }
        );
        assert_eq!(t.path.len(), 5);
    }

    #[test]
    fn truncation_and_errors() {
        let mp = int_game(&[vec![(1, -1), (-1, 1)], vec![(-1, 1), (1, -1)]]);
        let t = br_dynamics(
            &mp,
            StrategyProfile::new(0, 0),
            UpdateRule::AlternatingRowFirst,
            2,
        )
        .unwrap();
        assert_eq!(t.terminal, Terminal::Truncated);
        assert!(t.path.len() <= 3);
        assert!(br_dynamics(
            &mp,
            StrategyProfile::new(2, 0),
            UpdateRule::AlternatingRowFirst,
            2
        )
        .is_err());
        assert!(br_dynamics(
            &mp,
            StrategyProfile::new(0, 0),
            UpdateRule::AlternatingRowFirst,
            0
        )
        .is_err());
    }

    #[test]
    fn corners_are_fixed() {
        let p = ReplicatorParams {
            herd_weight: 3.0,
            payoff_shift: 0.0,
            steps: 20,
        };
        let t =
            replicator_simulate(&institution_game(), ShareState::new(1.0, 0.0, 0.0), p).unwrap();
        assert!(t.states.iter().all(|s| s.shares == [1.0, 0.0, 0.0]));
        assert_eq!(t.stats.time_to_threshold, Some(0));
        assert_eq!(t.stats.max_slope, 0.0);
    }

    #[test]
    fn plain_replicator_reaches_oa() {
        let p = ReplicatorParams {
            herd_weight: 0.0,
            payoff_shift: 0.0,
            steps: 1000,
        };
        let t = replicator_simulate(&institution_game(), ShareState::uniform(), p).unwrap();
        assert_eq!(t.states.len(), 1001);
        assert_eq!(t.stats.converged_to, Some(0));
        let slope = t
            .states
            .windows(2)
            .map(|w| w[1].shares[0] - w[0].shares[0])
            .fold(f64::MIN, f64::max);
        assert_eq!(t.stats.max_slope, slope);
        assert!(slope > 0.0);
    }

    #[test]
    fn strong_herding_locks_in_subscription() {
        let p = ReplicatorParams {
            herd_weight: 50.0,
            payoff_shift: 0.0,
            steps: 1000,
        };
        let t =
            replicator_simulate(&institution_game(), ShareState::new(0.05, 0.9, 0.05), p).unwrap();
        assert_eq!(t.stats.converged_to, Some(1));
    }

    #[test]
    fn replicator_domain_errors() {
        let p = ReplicatorParams {
            herd_weight: 0.0,
            payoff_shift: 0.0,
            steps: 5,
        };
        assert!(
            replicator_simulate(&institution_game(), ShareState::new(0.5, 0.6, 0.2), p).is_err()
        );
        let negative = int_game(&[vec![(-5, 0); 3], vec![(-5, 0); 3], vec![(-5, 0); 3]]);
        assert!(replicator_simulate(&negative, ShareState::uniform(), p).is_err());
        let shifted = ReplicatorParams {
            payoff_shift: 6.0,
            ..p
        };
        assert!(replicator_simulate(&negative, ShareState::uniform(), shifted).is_ok());
    }

    #[test]
    fn oscillation_is_not_converged() {
        let states: Vec<ShareState> = (0..10)
            .map(|t| {
                if t % 2 == 0 {
                    ShareState::new(0.6, 0.3, 0.1)
                } else {
                    ShareState::new(0.3, 0.6, 0.1)
                }
            })
            .collect();
        let stats = convergence_stats(&states, 0.99);
        assert_eq!(stats.converged_to, None);
        assert_eq!(stats.time_to_threshold, None);
    }

    #[test]
    fn csv_export_format() {
        let t = ShareTrajectory {
            states: vec![ShareState::uniform(), ShareState::new(1.0, 0.0, 0.0)],
            stats: convergence_stats(&[], 0.99),
        };
        let csv = t.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "step,x_oa,x_c,x_h");
        assert_eq!(lines[1], "0,0.333333333333,0.333333333333,0.333333333333");
        assert_eq!(lines[2], "1,1.00000000000,0,0");
        assert_eq!(sig12(9.9999999999999), "10.0000000000");
        assert_eq!(sig12(2.5e-80), "2.50000000000e-80");
    }
}
