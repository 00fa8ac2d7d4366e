//! Mixed-strategy equilibria in exact arithmetic.
//!
//! [`mixed_2x2`] works from the two players' payoff differences directly;
//! [`support_enumeration`] handles any game up to 4x4 by enumerating the
//! vertices of both best-response polytopes and pairing the completely
//! labelled ones. In degenerate games that yields the extreme points of each
//! equilibrium component.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::game::{NormalFormGame, Player, StrategyProfile};
use crate::rational::Rational;

pub const MAX_SUPPORT_ENUMERATION_SIZE: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MixedError {
    #[error("shape error: {0}")]
    ShapeError(String),
    #[error("invalid mixed profile: {0}")]
    InvalidProfile(String),
}

/// Probabilities over each player's strategies.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MixedProfile {
    pub row: Vec<Rational>,
    pub col: Vec<Rational>,
}

impl MixedProfile {
    pub fn pure(game: &NormalFormGame, p: StrategyProfile) -> Self {
        let (m, n) = game.shape();
        MixedProfile {
            row: unit(m, p.row),
            col: unit(n, p.col),
        }
    }

    /// Probability `p` on the first row, `q` on the first column.
    pub fn from_pq(p: Rational, q: Rational) -> Self {
        MixedProfile {
            row: vec![p.clone(), &Rational::one() - &p],
            col: vec![q.clone(), &Rational::one() - &q],
        }
    }

    pub fn validate(&self, game: &NormalFormGame) -> Result<(), MixedError> {
        let (m, n) = game.shape();
        if self.row.len() != m || self.col.len() != n {
            return Err(MixedError::InvalidProfile(format!(
                "distribution lengths {}x{} for a {m}x{n} game",
                self.row.len(),
                self.col.len()
            )));
        }
        for dist in [&self.row, &self.col] {
            if dist.iter().any(|x| x.is_negative() || *x > Rational::one()) {
                return Err(MixedError::InvalidProfile(
                    "probability outside [0, 1]".into(),
                ));
            }
            if dist.iter().sum::<Rational>() != Rational::one() {
                return Err(MixedError::InvalidProfile(
                    "probabilities do not sum to 1".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn support(&self, player: Player) -> Vec<usize> {
        let dist = match player {
            Player::Row => &self.row,
            Player::Col => &self.col,
        };
        dist.iter()
            .enumerate()
            .filter(|(_, x)| x.is_positive())
            .map(|(i, _)| i)
            .collect()
    }
}

impl fmt::Display for MixedProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |d: &[Rational]| {
            d.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        write!(f, "row ({}) / col ({})", show(&self.row), show(&self.col))
    }
}

fn unit(len: usize, at: usize) -> Vec<Rational> {
    (0..len)
        .map(|i| {
            if i == at {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EquilibriumKind {
    PureCorner,
    InteriorMixed,
    ComponentDegenerate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquilibriumResult {
    pub kind: EquilibriumKind,
    pub profile: MixedProfile,
    pub support: (Vec<usize>, Vec<usize>),
    pub degeneracy_note: Option<String>,
}

impl EquilibriumResult {
    fn classify(game: &NormalFormGame, profile: MixedProfile) -> Self {
        let support = (profile.support(Player::Row), profile.support(Player::Col));
        let row_br = best_responses_to_mixed(game, Player::Row, &profile.col);
        let col_br = best_responses_to_mixed(game, Player::Col, &profile.row);
        let degenerate = row_br.len() > support.1.len() || col_br.len() > support.0.len();
        let pure = support.0.len() == 1 && support.1.len() == 1;
        let kind = if pure {
            EquilibriumKind::PureCorner
        } else if degenerate {
            EquilibriumKind::ComponentDegenerate
        } else {
            EquilibriumKind::InteriorMixed
        };
        let degeneracy_note = degenerate.then(|| {
            format!(
                "{} row best responses against a {}-strategy column mix, {} column best responses against a {}-strategy row mix; this point may be the end of a continuum of equilibria",
                row_br.len(),
                support.1.len(),
                col_br.len(),
                support.0.len()
            )
        });
        EquilibriumResult {
            kind,
            profile,
            support,
            degeneracy_note,
        }
    }
}

/// Expected payoffs `(row, col)` under a mixed profile.
pub fn expected_payoffs(game: &NormalFormGame, profile: &MixedProfile) -> (Rational, Rational) {
    let mut a = Rational::zero();
    let mut b = Rational::zero();
    for p in game.profiles() {
        let w = &profile.row[p.row] * &profile.col[p.col];
        if w.is_zero() {
            continue;
        }
        let (x, y) = game.cell(p);
        a += &(&w * x);
        b += &(&w * y);
    }
    (a, b)
}

/// Payoff of each pure strategy of `player` against the opponent's mix.
pub fn pure_payoffs_against(
    game: &NormalFormGame,
    player: Player,
    opponent: &[Rational],
) -> Vec<Rational> {
    (0..game.num_strategies(player))
        .map(|s| {
            opponent
                .iter()
                .enumerate()
                .filter(|(_, w)| !w.is_zero())
                .map(|(o, w)| w * game.payoff_against(player, s, o))
                .sum()
        })
        .collect()
}

pub fn best_responses_to_mixed(
    game: &NormalFormGame,
    player: Player,
    opponent: &[Rational],
) -> Vec<usize> {
    let values = pure_payoffs_against(game, player, opponent);
    let best = values.iter().max().expect("nonempty").clone();
    (0..values.len()).filter(|&i| values[i] == best).collect()
}

/// No pure deviation gains, for either player.
pub fn is_equilibrium(game: &NormalFormGame, profile: &MixedProfile) -> bool {
    if profile.validate(game).is_err() {
        return false;
    }
    let row_br = best_responses_to_mixed(game, Player::Row, &profile.col);
    let col_br = best_responses_to_mixed(game, Player::Col, &profile.row);
    profile
        .support(Player::Row)
        .iter()
        .all(|i| row_br.contains(i))
        && profile
            .support(Player::Col)
            .iter()
            .all(|j| col_br.contains(j))
}

fn require_2x2(game: &NormalFormGame) -> Result<(), MixedError> {
    if game.shape() != (2, 2) {
        let (m, n) = game.shape();
        return Err(MixedError::ShapeError(format!(
            "expected a 2x2 game, got {m}x{n}"
        )));
    }
    Ok(())
}

/// Does either player have a strategy that strictly dominates the other one?
/// Only then is the 2x2 equilibrium set fixed by the payoff ranking alone.
pub fn has_strictly_dominant_strategy(game: &NormalFormGame) -> bool {
    use crate::game::DominanceKind::Strict;
    game.shape() == (2, 2)
        && [Player::Row, Player::Col]
            .iter()
            .any(|&p| game.dominates(p, 0, 1, Strict) || game.dominates(p, 1, 0, Strict))
}

/// Row advantage of the first strategy over the second when the column plays
/// its first strategy with probability `q`; symmetrically for the column.
struct Differences {
    // D_row(q) = q * row_at_first + (1 - q) * row_at_second
    row_at_first: Rational,
    row_at_second: Rational,
    col_at_first: Rational,
    col_at_second: Rational,
}

impl Differences {
    fn of(game: &NormalFormGame) -> Self {
        let a = |r, c| game.payoff(Player::Row, StrategyProfile::new(r, c)).clone();
        let b = |r, c| game.payoff(Player::Col, StrategyProfile::new(r, c)).clone();
        Differences {
            row_at_first: &a(0, 0) - &a(1, 0),
            row_at_second: &a(0, 1) - &a(1, 1),
            col_at_first: &b(0, 0) - &b(0, 1),
            col_at_second: &b(1, 0) - &b(1, 1),
        }
    }

    fn row(&self, q: &Rational) -> Rational {
        &(q * &self.row_at_first) + &(&(&Rational::one() - q) * &self.row_at_second)
    }

    fn col(&self, p: &Rational) -> Rational {
        &(p * &self.col_at_first) + &(&(&Rational::one() - p) * &self.col_at_second)
    }
}

/// Root in [0, 1] of `t * at_first + (1 - t) * at_second`, if it is isolated.
fn root_in_unit(at_first: &Rational, at_second: &Rational) -> Option<Rational> {
    let denom = at_first - at_second;
    if denom.is_zero() {
        return None;
    }
    let t = &(-at_second) / &denom;
    (!t.is_negative() && t <= Rational::one()).then_some(t)
}

fn best_reply_contains(diff: &Rational, prob_first: &Rational) -> bool {
    if diff.is_positive() {
        *prob_first == Rational::one()
    } else if diff.is_negative() {
        prob_first.is_zero()
    } else {
        true
    }
}

/// All equilibria of a 2x2 game, sorted by `(p, q)` descending, where `p`
/// and `q` are the probabilities of the first row and first column.
pub fn mixed_2x2(game: &NormalFormGame) -> Result<Vec<EquilibriumResult>, MixedError> {
    require_2x2(game)?;
    let d = Differences::of(game);
    let mut ps = vec![Rational::zero(), Rational::one()];
    ps.extend(root_in_unit(&d.col_at_first, &d.col_at_second));
    let mut qs = vec![Rational::zero(), Rational::one()];
    qs.extend(root_in_unit(&d.row_at_first, &d.row_at_second));
    let mut points: Vec<(Rational, Rational)> = Vec::new();
    for p in &ps {
        for q in &qs {
            if best_reply_contains(&d.row(q), p) && best_reply_contains(&d.col(p), q) {
                points.push((p.clone(), q.clone()));
            }
        }
    }
    points.sort();
    points.dedup();
    points.reverse();
    Ok(points
        .into_iter()
        .map(|(p, q)| EquilibriumResult::classify(game, MixedProfile::from_pq(p, q)))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum Threshold {
    At(Rational),
    /// One strategy weakly dominates, or the equalizing value is outside [0, 1].
    NoneDueToDominance,
    /// The two strategies pay the same against everything.
    AnyProbability,
}

/// `(q_star, p_star)`: the column mix making the row player indifferent,
/// and the row mix making the column player indifferent.
pub fn indifference_thresholds(
    game: &NormalFormGame,
) -> Result<(Threshold, Threshold), MixedError> {
    use crate::game::DominanceKind::Weak;
    require_2x2(game)?;
    let d = Differences::of(game);
    let one = |player: Player, at_first: &Rational, at_second: &Rational| {
        if at_first.is_zero() && at_second.is_zero() {
            Threshold::AnyProbability
        } else if game.dominates(player, 0, 1, Weak) || game.dominates(player, 1, 0, Weak) {
            Threshold::NoneDueToDominance
        } else {
            root_in_unit(at_first, at_second).map_or(Threshold::NoneDueToDominance, Threshold::At)
        }
    };
    Ok((
        one(Player::Row, &d.row_at_first, &d.row_at_second),
        one(Player::Col, &d.col_at_first, &d.col_at_second),
    ))
}

/// Unique solution of a square system, or `None` when singular.
pub fn solve_linear(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip().expect("nonzero pivot");
        for k in col..n {
            a[col][k] = &a[col][k] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for k in col..n {
                let delta = &factor * &a[col][k];
                a[r][k] -= &delta;
            }
            let delta = &factor * &b[col];
            b[r] -= &delta;
        }
    }
    Some(b)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Mixed strategies of the opponent of `player` that are vertices of the
/// best-response region: `player` is indifferent over `tight` (and those are
/// best responses), the opponent plays only `support`.
fn polytope_vertices(game: &NormalFormGame, player: Player) -> Vec<Vec<Rational>> {
    let own = game.num_strategies(player);
    let opp = game.num_strategies(player.other());
    let mut out: Vec<Vec<Rational>> = Vec::new();
    for k in 1..=own.min(opp) {
        for tight in subsets(own, k) {
            for support in subsets(opp, k) {
                // Unknowns: weights on `support`, then the common payoff.
                let mut a = Vec::with_capacity(k + 1);
                let mut b = Vec::with_capacity(k + 1);
                for &s in &tight {
                    let mut row: Vec<Rational> = support
                        .iter()
                        .map(|&o| game.payoff_against(player, s, o).clone())
                        .collect();
                    row.push(-Rational::one());
                    a.push(row);
                    b.push(Rational::zero());
                }
                let mut sum_row = vec![Rational::one(); k];
                sum_row.push(Rational::zero());
                a.push(sum_row);
                b.push(Rational::one());
                let Some(sol) = solve_linear(a, b) else {
                    continue;
                };
                if sol[..k].iter().any(|w| w.is_negative()) {
                    continue;
                }
                let mut dist = vec![Rational::zero(); opp];
                for (i, &o) in support.iter().enumerate() {
                    dist[o] = sol[i].clone();
                }
                let value = &sol[k];
                let payoffs = pure_payoffs_against(game, player, &dist);
                if payoffs.iter().any(|v| v > value) {
                    continue;
                }
                if !out.contains(&dist) {
                    out.push(dist);
                }
            }
        }
    }
    out
}

/// All extreme equilibria of a game up to 4x4, sorted by the row and
/// column distributions in descending lexicographic order.
pub fn support_enumeration(game: &NormalFormGame) -> Result<Vec<EquilibriumResult>, MixedError> {
    let (m, n) = game.shape();
    if m > MAX_SUPPORT_ENUMERATION_SIZE || n > MAX_SUPPORT_ENUMERATION_SIZE {
        return Err(MixedError::ShapeError(format!(
            "{m}x{n} exceeds the {MAX_SUPPORT_ENUMERATION_SIZE}x{MAX_SUPPORT_ENUMERATION_SIZE} limit"
        )));
    }
    // Column mixes at which the row player's best responses are pinned down,
    // and row mixes likewise.
    let col_mixes = polytope_vertices(game, Player::Row);
    let row_mixes = polytope_vertices(game, Player::Col);
    let mut found: Vec<MixedProfile> = Vec::new();
    for x in &row_mixes {
        let col_br = best_responses_to_mixed(game, Player::Col, x);
        for y in &col_mixes {
            let row_br = best_responses_to_mixed(game, Player::Row, y);
            let labelled = x
                .iter()
                .enumerate()
                .all(|(i, w)| w.is_zero() || row_br.contains(&i))
                && y.iter()
                    .enumerate()
                    .all(|(j, w)| w.is_zero() || col_br.contains(&j));
            if labelled {
                found.push(MixedProfile {
                    row: x.clone(),
                    col: y.clone(),
                });
            }
        }
    }
    found.sort();
    found.dedup();
    found.reverse();
    Ok(found
        .into_iter()
        .map(|p| EquilibriumResult::classify(game, p))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn int_game(cells: [[(i64, i64); 2]; 2]) -> NormalFormGame {
        NormalFormGame::from_integers(&cells.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
            .unwrap()
    }

    fn habermann() -> NormalFormGame {
        int_game([[(9, 7), (11, 0)], [(11, 5), (7, 11)]])
    }

    fn publishing_2x2() -> NormalFormGame {
        int_game([[(6, 3), (5, 2)], [(5, 8), (2, 8)]])
    }

    fn matching_pennies() -> NormalFormGame {
        int_game([[(1, -1), (-1, 1)], [(-1, 1), (1, -1)]])
    }

    #[test]
    fn publishing_2x2_collapses_to_corner() {
        let eqs = mixed_2x2(&publishing_2x2()).unwrap();
        assert_eq!(eqs.len(), 1);
        assert_eq!(eqs[0].kind, EquilibriumKind::PureCorner);
        assert_eq!(eqs[0].profile, MixedProfile::from_pq(rat(1, 1), rat(1, 1)));
        let (q, p) = indifference_thresholds(&publishing_2x2()).unwrap();
        assert_eq!(q, Threshold::NoneDueToDominance);
        assert_eq!(p, Threshold::NoneDueToDominance);
    }

    #[test]
    fn matching_pennies_half_half() {
        let eqs = mixed_2x2(&matching_pennies()).unwrap();
        assert_eq!(eqs.len(), 1);
        assert_eq!(eqs[0].kind, EquilibriumKind::InteriorMixed);
        assert_eq!(eqs[0].profile, MixedProfile::from_pq(rat(1, 2), rat(1, 2)));
        assert_eq!(
            indifference_thresholds(&matching_pennies()).unwrap(),
            (Threshold::At(rat(1, 2)), Threshold::At(rat(1, 2)))
        );
    }

    #[test]
    fn habermann_interior_point() {
        let g = habermann();
        let eqs = mixed_2x2(&g).unwrap();
        assert_eq!(eqs.len(), 1);
        assert_eq!(eqs[0].profile, MixedProfile::from_pq(rat(6, 13), rat(2, 3)));
        assert_eq!(
            indifference_thresholds(&g).unwrap(),
            (Threshold::At(rat(2, 3)), Threshold::At(rat(6, 13)))
        );
        assert_eq!(support_enumeration(&g).unwrap(), eqs);
        // Both players exactly indifferent.
        let row = pure_payoffs_against(&g, Player::Row, &eqs[0].profile.col);
        assert_eq!(row[0], row[1]);
        let col = pure_payoffs_against(&g, Player::Col, &eqs[0].profile.row);
        assert_eq!(col[0], col[1]);
    }

    #[test]
    fn shape_errors() {
        let g = NormalFormGame::from_integers(&vec![vec![(0, 0); 3]; 2]).unwrap();
        assert!(matches!(mixed_2x2(&g), Err(MixedError::ShapeError(_))));
        assert!(matches!(
            indifference_thresholds(&g),
            Err(MixedError::ShapeError(_))
        ));
        let big = NormalFormGame::from_integers(&vec![vec![(0, 0); 5]; 5]).unwrap();
        assert!(matches!(
            support_enumeration(&big),
            Err(MixedError::ShapeError(_))
        ));
    }

    #[test]
    fn dominant_strategies_force_single_corner() {
        // Prisoner's dilemma: defect strictly dominant for both.
        let g = int_game([[(5, 5), (3, 6)], [(6, 3), (4, 4)]]);
        let eqs = support_enumeration(&g).unwrap();
        assert_eq!(eqs.len(), 1);
        assert_eq!(eqs[0].kind, EquilibriumKind::PureCorner);
        assert_eq!(eqs[0].support, (vec![1], vec![1]));
    }

    #[test]
    fn indifferent_player_yields_component_endpoints() {
        // Row player indifferent everywhere; column matches row.
        let g = int_game([[(1, 1), (1, 0)], [(1, 0), (1, 1)]]);
        let a = mixed_2x2(&g).unwrap();
        let b = support_enumeration(&g).unwrap();
        assert_eq!(a, b);
        assert!(a
            .iter()
            .any(|e| e.kind == EquilibriumKind::ComponentDegenerate));
        for e in &a {
            assert!(is_equilibrium(&g, &e.profile));
        }
        assert_eq!(
            indifference_thresholds(&g).unwrap().0,
            Threshold::AnyProbability
        );
    }

    #[test]
    fn rock_paper_scissors_uniform() {
        let rps = NormalFormGame::from_integers(&[
            vec![(0, 0), (-1, 1), (1, -1)],
            vec![(1, -1), (0, 0), (-1, 1)],
            vec![(-1, 1), (1, -1), (0, 0)],
        ])
        .unwrap();
        let eqs = support_enumeration(&rps).unwrap();
        assert_eq!(eqs.len(), 1);
        assert_eq!(eqs[0].profile.row, vec![rat(1, 3); 3]);
        assert_eq!(eqs[0].kind, EquilibriumKind::InteriorMixed);
    }

    #[test]
    fn solver_detects_singular_systems() {
        let a = vec![vec![rat(1, 1), rat(2, 1)], vec![rat(2, 1), rat(4, 1)]];
        assert_eq!(solve_linear(a, vec![rat(1, 1), rat(2, 1)]), None);
        let a = vec![vec![rat(2, 1), rat(1, 1)], vec![rat(1, 1), rat(3, 1)]];
        assert_eq!(
            solve_linear(a, vec![rat(3, 1), rat(5, 1)]),
            Some(vec![rat(4, 5), rat(7, 5)])
        );
    }
}
