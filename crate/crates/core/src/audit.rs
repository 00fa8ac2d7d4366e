//! Registry of the equilibrium claims made about the publishing game, each
//! checked against the solvers over every admissible ranking of payoffs.

use std::fmt;
use std::thread;

use serde::{Deserialize, Serialize};

use crate::dynamics::{replicator_simulate, ReplicatorParams, ShareState};
use crate::game::{
    DominanceKind, IedsPolicy, NormalFormGame, ParetoStatus, Player, PlayerOrder, StrategyProfile,
};
use crate::mixed::{indifference_thresholds, mixed_2x2, Threshold};
use crate::models::{
    default_constraints, publishing_symbolic_2x2, publishing_symbolic_3x3, PublishingPayoffSymbols,
};
use crate::ordinal::{
    count_scoped_extensions, holds_for_all, sample_instantiation, scoped_canonical_instantiations,
    Constraint, Instantiation, OrderingConstraintSet, OrdinalError, Predicate, Relation,
    SymbolicGame, Term, Verdict,
};
use crate::rational::Rational;

pub const MAX_REPAIR_EDITS: usize = 3;
/// Sampled instantiations used to compare printed threshold formulas.
pub const THRESHOLD_SAMPLES: u64 = 64;
const REPORT_REPAIR_EDITS: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AuditError {
    #[error("unknown claim `{0}`")]
    UnknownClaim(String),
    #[error("claim {0} is a textual inconsistency; no constraint edit applies")]
    UnrepairableTextual(String),
    #[error("claim {0} does not depend on the ordering alone; repair search does not apply")]
    NotRepairable(String),
    #[error("at most {MAX_REPAIR_EDITS} edits are searched, got {0}")]
    TooManyEdits(usize),
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GameScope {
    /// The full OA/C/H game.
    Full,
    /// The OA/H restriction.
    Reduced,
}

impl GameScope {
    pub fn game(self) -> SymbolicGame {
        match self {
            GameScope::Full => publishing_symbolic_3x3(),
            GameScope::Reduced => publishing_symbolic_2x2(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimPart {
    pub predicate: Predicate,
    /// Appended to explanations, e.g. a symbol mismatch between prose and matrix.
    pub note: Option<&'static str>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClaimCheck {
    Ordinal {
        scope: GameScope,
        parts: Vec<ClaimPart>,
    },
    /// Printed closed-form thresholds against computed indifference points.
    PrintedThreshold,
    /// Two statements of the same result that disagree.
    StaticText { explanation: &'static str },
    /// Unique mixed equilibrium plus replicator convergence to OA.
    ReplicatorConvergence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StatusKind {
    HoldsForAll,
    HoldsConditionally,
    FailsWithCounterexample,
    NotWellFormed,
    TextualInconsistency,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub id: &'static str,
    /// Where the claim is made.
    pub anchor: &'static str,
    /// The claim, restated formally.
    pub statement: &'static str,
    pub expected_per_paper: &'static str,
    pub check: ClaimCheck,
    /// Status this implementation reports, with nonnegativity off and on.
    pub documented: [StatusKind; 2],
}

impl Claim {
    pub fn documented_status(&self, nonnegativity: bool) -> StatusKind {
        self.documented[usize::from(nonnegativity)]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ClaimStatus {
    HoldsForAll,
    HoldsConditionally {
        condition: String,
    },
    FailsWithCounterexample {
        instantiation: Instantiation,
        explanation: String,
    },
    NotWellFormed {
        explanation: String,
    },
    TextualInconsistency {
        explanation: String,
    },
}

impl ClaimStatus {
    pub fn kind(&self) -> StatusKind {
        match self {
            ClaimStatus::HoldsForAll => StatusKind::HoldsForAll,
            ClaimStatus::HoldsConditionally { .. } => StatusKind::HoldsConditionally,
            ClaimStatus::FailsWithCounterexample { .. } => StatusKind::FailsWithCounterexample,
            ClaimStatus::NotWellFormed { .. } => StatusKind::NotWellFormed,
            ClaimStatus::TextualInconsistency { .. } => StatusKind::TextualInconsistency,
        }
    }

    pub fn summary(&self) -> String {
        match self {
            ClaimStatus::HoldsForAll => "holds for all".into(),
            ClaimStatus::HoldsConditionally { condition } => format!("holds if {condition}"),
            ClaimStatus::FailsWithCounterexample { .. } => "fails".into(),
            ClaimStatus::NotWellFormed { .. } => "not well formed".into(),
            ClaimStatus::TextualInconsistency { .. } => "textual inconsistency".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartRecord {
    pub description: String,
    pub status: ClaimStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditRecord {
    pub id: String,
    pub anchor: String,
    pub statement: String,
    pub expected_per_paper: String,
    pub status: ClaimStatus,
    pub parts: Vec<PartRecord>,
    pub documented_status: StatusKind,
    /// Smallest constraint edit found that makes the claim hold.
    pub repair: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub nonnegativity: bool,
    pub records: Vec<AuditRecord>,
}

impl AuditReport {
    pub fn record(&self, id: &str) -> Option<&AuditRecord> {
        self.records.iter().find(|r| r.id == id)
    }

    /// True when every status has its documented kind.
    pub fn matches_documentation(&self) -> bool {
        self.records
            .iter()
            .all(|r| r.status.kind() == r.documented_status)
    }
}

const OA: usize = 0;
const C: usize = 1;
const H: usize = 2;

const ALPHA_P_NOTE: &str =
    "evaluated with the matrix entry alpha_p; the accompanying prose compares a different symbol against omega_pp";

fn part(predicate: Predicate) -> ClaimPart {
    ClaimPart {
        predicate,
        note: None,
    }
}

fn weak(order: PlayerOrder, row: usize, col: usize) -> Predicate {
    Predicate::IedsReducesTo {
        policy: IedsPolicy::new(DominanceKind::Weak, order),
        profile: StrategyProfile::new(row, col),
    }
}

fn dominated(player: Player, strategy: usize, kind: DominanceKind, by: usize) -> ClaimPart {
    part(Predicate::StrategyDominated {
        player,
        strategy,
        kind,
        by: Some(by),
    })
}

/// Every claim, sorted by id.
pub fn registry() -> Vec<Claim> {
    use StatusKind::*;
    vec![
        Claim {
            id: "C1",
            anchor: "summary of elimination results, institution-first row",
            statement: "weak IEDS removing institution strategies first leaves exactly (OA, OA)",
            expected_per_paper: "holds",
            check: ClaimCheck::Ordinal {
                scope: GameScope::Full,
                parts: vec![ClaimPart { predicate: weak(PlayerOrder::RowFirst, OA, OA), note: Some(ALPHA_P_NOTE) }],
            },
            documented: [FailsWithCounterexample, HoldsConditionally],
        },
        Claim {
            id: "C2",
            anchor: "summary of elimination results, publisher-first row, equilibrium column",
            statement: "weak IEDS removing publisher strategies first leaves exactly (OA, H)",
            expected_per_paper: "holds",
            check: ClaimCheck::Ordinal {
                scope: GameScope::Full,
                parts: vec![part(weak(PlayerOrder::ColFirst, OA, H))],
            },
            documented: [FailsWithCounterexample, FailsWithCounterexample],
        },
        Claim {
            id: "C3",
            anchor: "full game, pure equilibrium discussion",
            statement: "(OA, OA) and (C, OA) are both pure Nash equilibria",
            expected_per_paper: "holds",
            check: ClaimCheck::Ordinal {
                scope: GameScope::Full,
                parts: vec![
                    ClaimPart {
                        predicate: Predicate::ProfileIsPureNash { profile: StrategyProfile::new(OA, OA) },
                        note: Some(ALPHA_P_NOTE),
                    },
                    part(Predicate::ProfileIsPureNash { profile: StrategyProfile::new(C, OA) }),
                ],
            },
            documented: [FailsWithCounterexample, FailsWithCounterexample],
        },
        Claim {
            id: "C4",
            anchor: "concluding discussion of the pure equilibria",
            statement: "(OA, OA) and (C, OA) are Pareto optimal",
            expected_per_paper: "holds",
            check: ClaimCheck::Ordinal {
                scope: GameScope::Full,
                parts: vec![
                    part(Predicate::ProfileParetoOptimal { profile: StrategyProfile::new(OA, OA) }),
                    part(Predicate::ProfileParetoOptimal { profile: StrategyProfile::new(C, OA) }),
                ],
            },
            documented: [FailsWithCounterexample, FailsWithCounterexample],
        },
        Claim {
            id: "C5",
            anchor: "mixed-strategy analysis of the OA/H game, conclusion",
            statement: "the OA/H game has the unique equilibrium p = q = 1",
            expected_per_paper: "holds",
            check: ClaimCheck::Ordinal {
                scope: GameScope::Reduced,
                parts: vec![part(Predicate::Mixed2x2EquilibriumEquals { p: Rational::one(), q: Rational::one() })],
            },
            documented: [HoldsForAll, HoldsForAll],
        },
        Claim {
            id: "C6",
            anchor: "dominance summaries for institutions and publishers",
            statement: "institution: OA weakly dominates C and strictly dominates H; publisher: OA is strictly dominated by C and weakly dominated by H",
            expected_per_paper: "holds",
            check: ClaimCheck::Ordinal {
                scope: GameScope::Full,
                parts: vec![
                    dominated(Player::Row, C, DominanceKind::Weak, OA),
                    dominated(Player::Row, H, DominanceKind::Strict, OA),
                    dominated(Player::Col, OA, DominanceKind::Strict, C),
                    dominated(Player::Col, OA, DominanceKind::Weak, H),
                ],
            },
            documented: [FailsWithCounterexample, FailsWithCounterexample],
        },
        Claim {
            id: "C7",
            anchor: "mixed-strategy analysis of the OA/H game, printed thresholds",
            statement: "the institution is indifferent at q = (alpha - alpha_star - omega_star + omega_p) / (omega_p + alpha_star), and publisher indifference reduces to alpha_p = omega_pp",
            expected_per_paper: "holds",
            check: ClaimCheck::PrintedThreshold,
            documented: [FailsWithCounterexample, FailsWithCounterexample],
        },
        Claim {
            id: "C8",
            anchor: "summary of elimination results, publisher-first row, comment column",
            statement: "publisher-first IEDS leads to the two equilibria (C, H) and (H, H)",
            expected_per_paper: "holds",
            check: ClaimCheck::StaticText {
                explanation: "the same row lists (OA, H) as its single equilibrium while its comment names (C, H) and (H, H); the two statements cannot both describe one elimination",
            },
            documented: [TextualInconsistency, TextualInconsistency],
        },
        Claim {
            id: "C9",
            anchor: "generalization to a population of players",
            statement: "all players converge on the OA model",
            expected_per_paper: "holds",
            check: ClaimCheck::ReplicatorConvergence,
            documented: [HoldsForAll, HoldsForAll],
        },
    ]
}

pub fn find_claim(id: &str) -> Option<Claim> {
    registry().into_iter().find(|c| c.id == id)
}

fn labels(game: &NormalFormGame) -> (Vec<String>, Vec<String>) {
    (
        game.strategies(Player::Row).to_vec(),
        game.strategies(Player::Col).to_vec(),
    )
}

/// Why `predicate` is false on `game`, in concrete payoffs.
pub fn explain_failure(predicate: &Predicate, game: &NormalFormGame) -> String {
    let (rows, cols) = labels(game);
    let prof = |p: StrategyProfile| game.profile_label(p);
    match predicate {
        Predicate::ProfileIsPureNash { profile } => {
            for player in [Player::Row, Player::Col] {
                let own = profile.of(player);
                let opp = profile.of(player.other());
                let current = game.payoff_against(player, own, opp);
                let names = if player == Player::Row { &rows } else { &cols };
                for alt in 0..game.num_strategies(player) {
                    let v = game.payoff_against(player, alt, opp);
                    if v > current {
                        return format!(
                            "at {}, the {player} player gains by deviating from {} to {}: {v} > {current}",
                            prof(*profile),
                            names[own],
                            names[alt]
                        );
                    }
                }
            }
            format!("{} is an equilibrium", prof(*profile))
        }
        Predicate::ProfileIsNotPureNash { profile } => {
            format!("{} is a pure Nash equilibrium", prof(*profile))
        }
        Predicate::IedsReducesTo { policy, .. } => {
            let (_, trace) = game.ieds(*policy);
            let left: Vec<String> = trace
                .surviving_rows
                .iter()
                .flat_map(|&r| {
                    trace
                        .surviving_cols
                        .iter()
                        .map(move |&c| StrategyProfile::new(r, c))
                })
                .map(prof)
                .collect();
            let steps: Vec<String> = trace.steps.iter().map(|s| s.to_string()).collect();
            format!(
                "elimination leaves {{{}}}; steps: {}",
                left.join(", "),
                steps.join("; ")
            )
        }
        Predicate::StrategyDominated {
            player,
            strategy,
            kind,
            by,
        } => {
            let names = if *player == Player::Row { &rows } else { &cols };
            let dominators: Vec<usize> = match by {
                Some(d) => vec![*d],
                None => (0..game.num_strategies(*player))
                    .filter(|d| d != strategy)
                    .collect(),
            };
            let mut out = Vec::new();
            for d in dominators {
                let opp_names = if *player == Player::Row { &cols } else { &rows };
                for opp in 0..game.num_strategies(player.other()) {
                    let a = game.payoff_against(*player, d, opp);
                    let b = game.payoff_against(*player, *strategy, opp);
                    let blocks = match kind {
                        DominanceKind::Strict => a <= b,
                        DominanceKind::Weak => a < b,
                    };
                    if blocks {
                        let rel = if a == b { "=" } else { "<" };
                        out.push(format!(
                            "against {}, {} pays {a} {rel} {b} for {}",
                            opp_names[opp], names[d], names[*strategy]
                        ));
                        break;
                    }
                }
                if out.is_empty() {
                    // Weak dominance failing with no worse cell: all ties.
                    out.push(format!(
                        "{} and {} pay the same everywhere",
                        names[d], names[*strategy]
                    ));
                }
            }
            out.join("; ")
        }
        Predicate::ProfileParetoOptimal { profile } => match game.pareto_status(*profile) {
            Ok(ParetoStatus::DominatedBy(better)) => {
                let (a, b) = game.cell(*profile);
                let list: Vec<String> = better
                    .iter()
                    .map(|p| {
                        let (x, y) = game.cell(*p);
                        format!("{} with ({x}, {y})", prof(*p))
                    })
                    .collect();
                format!(
                    "{} pays ({a}, {b}) and is Pareto-dominated by {}",
                    prof(*profile),
                    list.join(", ")
                )
            }
            _ => format!("{} is Pareto optimal", prof(*profile)),
        },
        Predicate::Mixed2x2EquilibriumEquals { .. } => match mixed_2x2(game) {
            Ok(eqs) => {
                let list: Vec<String> = eqs.iter().map(|e| e.profile.to_string()).collect();
                format!("equilibria found: {}", list.join(", "))
            }
            Err(e) => e.to_string(),
        },
    }
}

fn anchor_zero(symbol: &str) -> Constraint {
    Constraint::new(Term::sym(symbol), Relation::Greater, Term::lit(0))
}

fn holds(
    game: &SymbolicGame,
    constraints: &OrderingConstraintSet,
    predicate: &Predicate,
) -> Result<bool, OrdinalError> {
    Ok(holds_for_all(game, constraints, predicate)?.holds())
}

/// Status of one ordinal predicate. A predicate that holds only because of
/// nonnegativity anchors is reported with the weakest single anchor that
/// suffices on its own.
fn evaluate_part(
    game: &SymbolicGame,
    admissible: &OrderingConstraintSet,
    relaxed: &OrderingConstraintSet,
    part: &ClaimPart,
) -> ClaimStatus {
    let with_note = |text: String| match part.note {
        Some(n) => format!("{text} ({n})"),
        None => text,
    };
    match holds_for_all(game, admissible, &part.predicate) {
        Err(e) => ClaimStatus::NotWellFormed {
            explanation: e.to_string(),
        },
        Ok(Verdict::Counterexample {
            extension_index,
            instantiation,
        }) => {
            let concrete = game
                .instantiate(&instantiation)
                .expect("counterexample covers every symbol");
            ClaimStatus::FailsWithCounterexample {
                explanation: with_note(format!(
                    "ranking #{extension_index}: {}",
                    explain_failure(&part.predicate, &concrete)
                )),
                instantiation,
            }
        }
        Ok(Verdict::HoldsForAll { .. }) => {
            if admissible == relaxed || holds(game, relaxed, &part.predicate).unwrap_or(false) {
                return ClaimStatus::HoldsForAll;
            }
            let mut best: Option<(usize, Constraint)> = None;
            for s in PublishingPayoffSymbols::all() {
                let anchor = anchor_zero(s);
                if !admissible.contains(&anchor) {
                    continue;
                }
                let mut set = relaxed.clone();
                set.add(anchor.clone());
                if holds(game, &set, &part.predicate).unwrap_or(false) {
                    let n = count_scoped_extensions(game, &set).unwrap_or(0);
                    if best.as_ref().is_none_or(|(m, _)| n > *m) {
                        best = Some((n, anchor));
                    }
                }
            }
            ClaimStatus::HoldsConditionally {
                condition: with_note(match best {
                    Some((_, c)) => c.to_string(),
                    None => "every payoff is positive".to_string(),
                }),
            }
        }
    }
}

fn combine(parts: &[PartRecord]) -> ClaimStatus {
    let failing: Vec<&PartRecord> = parts
        .iter()
        .filter(|p| p.status.kind() == StatusKind::FailsWithCounterexample)
        .collect();
    if let Some(first) = failing.first() {
        let ClaimStatus::FailsWithCounterexample { instantiation, .. } = &first.status else {
            unreachable!()
        };
        let explanation = failing
            .iter()
            .map(|p| match &p.status {
                ClaimStatus::FailsWithCounterexample { explanation, .. } => {
                    format!("{}: {explanation}", p.description)
                }
                _ => unreachable!(),
            })
            .collect::<Vec<_>>()
            .join(" | ");
        let total = parts.len();
        let explanation = if failing.len() < total {
            format!("{} of {total} parts fail. {explanation}", failing.len())
        } else {
            explanation
        };
        return ClaimStatus::FailsWithCounterexample {
            instantiation: instantiation.clone(),
            explanation,
        };
    }
    if let Some(p) = parts
        .iter()
        .find(|p| p.status.kind() == StatusKind::NotWellFormed)
    {
        return p.status.clone();
    }
    let conditions: Vec<String> = parts
        .iter()
        .filter_map(|p| match &p.status {
            ClaimStatus::HoldsConditionally { condition } => Some(condition.clone()),
            _ => None,
        })
        .collect();
    if conditions.is_empty() {
        ClaimStatus::HoldsForAll
    } else {
        ClaimStatus::HoldsConditionally {
            condition: conditions.join("; "),
        }
    }
}

fn value(inst: &Instantiation, name: &str) -> Rational {
    inst.value(name)
        .cloned()
        .expect("publishing symbol instantiated")
}

/// The printed institution threshold, or `None` when its denominator vanishes.
pub fn printed_institution_threshold(inst: &Instantiation) -> Option<Rational> {
    let num = &(&(&value(inst, "alpha") - &value(inst, "alpha_star")) - &value(inst, "omega_star"))
        + &value(inst, "omega_p");
    let den = &value(inst, "omega_p") + &value(inst, "alpha_star");
    num.checked_div(&den)
}

fn threshold_text(t: &Threshold) -> String {
    match t {
        Threshold::At(v) => format!("q = {v}"),
        Threshold::NoneDueToDominance => "no indifference point in [0, 1]".into(),
        Threshold::AnyProbability => "indifference for every mix".into(),
    }
}

fn evaluate_printed_threshold(admissible: &OrderingConstraintSet) -> ClaimStatus {
    let game = publishing_symbolic_2x2();
    for seed in 0..THRESHOLD_SAMPLES {
        let inst = match sample_instantiation(admissible, seed) {
            Ok(i) => i,
            Err(e) => {
                return ClaimStatus::NotWellFormed {
                    explanation: e.to_string(),
                }
            }
        };
        let concrete = game.instantiate(&inst).expect("sample covers every symbol");
        let (q_star, p_star) = indifference_thresholds(&concrete).expect("2x2 game");
        let printed = printed_institution_threshold(&inst);
        let q_matches = printed
            .as_ref()
            .is_some_and(|v| q_star == Threshold::At(v.clone()));
        let (ap, wpp) = (value(&inst, "alpha_p"), value(&inst, "omega_pp"));
        let p_matches = ap == wpp && p_star == Threshold::AnyProbability;
        if !(q_matches && p_matches) {
            let printed_text = printed.map_or("undefined (zero denominator)".to_string(), |v| {
                v.to_string()
            });
            return ClaimStatus::FailsWithCounterexample {
                explanation: format!(
                    "sample {seed}: printed q evaluates to {printed_text}, computed institution threshold: {}; \
                     printed publisher condition alpha_p = omega_pp reads {ap} = {wpp}, \
                     contradicting alpha_p > omega_pp; computed publisher threshold: {}",
                    threshold_text(&q_star),
                    threshold_text(&p_star).replace("q =", "p =")
                ),
                instantiation: inst,
            };
        }
    }
    ClaimStatus::HoldsForAll
}

fn evaluate_convergence(admissible: &OrderingConstraintSet) -> ClaimStatus {
    let full = publishing_symbolic_3x3();
    let reduced = publishing_symbolic_2x2();
    let insts = match scoped_canonical_instantiations(&full, admissible) {
        Ok(i) => i,
        Err(e) => {
            return ClaimStatus::NotWellFormed {
                explanation: e.to_string(),
            }
        }
    };
    let params = ReplicatorParams {
        herd_weight: 0.0,
        payoff_shift: 0.0,
        steps: 1000,
    };
    for (k, inst) in insts.into_iter().enumerate() {
        let small = reduced
            .instantiate(&inst)
            .expect("canonical covers every symbol");
        let unique = mixed_2x2(&small).map(|e| {
            e.len() == 1
                && e[0].profile.row[0] == Rational::one()
                && e[0].profile.col[0] == Rational::one()
        });
        if unique != Ok(true) {
            return ClaimStatus::FailsWithCounterexample {
                explanation: format!(
                    "ranking #{k}: {}",
                    explain_failure(
                        &Predicate::Mixed2x2EquilibriumEquals {
                            p: Rational::one(),
                            q: Rational::one()
                        },
                        &small
                    )
                ),
                instantiation: inst,
            };
        }
        let big = full
            .instantiate(&inst)
            .expect("canonical covers every symbol");
        let outcome = replicator_simulate(&big, ShareState::uniform(), params);
        let failure = match outcome {
            Ok(t) if t.stats.converged_to == Some(OA) => None,
            Ok(t) => Some(format!(
                "replicator from uniform shares ends at {:?} after {} steps",
                t.states.last().map(|s| s.shares),
                params.steps
            )),
            Err(e) => Some(e.to_string()),
        };
        if let Some(why) = failure {
            return ClaimStatus::FailsWithCounterexample {
                explanation: format!("ranking #{k}: {why}"),
                instantiation: inst,
            };
        }
    }
    ClaimStatus::HoldsForAll
}

fn evaluate_claim(claim: &Claim, nonnegativity: bool) -> AuditRecord {
    let admissible = default_constraints(nonnegativity);
    let relaxed = default_constraints(false);
    let mut parts = Vec::new();
    let status = match &claim.check {
        ClaimCheck::Ordinal {
            scope,
            parts: claim_parts,
        } => {
            let game = scope.game();
            let (rows, cols) = (game.row_strategies.clone(), game.col_strategies.clone());
            for p in claim_parts {
                parts.push(PartRecord {
                    description: p.predicate.describe(&rows, &cols),
                    status: evaluate_part(&game, &admissible, &relaxed, p),
                });
            }
            combine(&parts)
        }
        ClaimCheck::PrintedThreshold => evaluate_printed_threshold(&admissible),
        ClaimCheck::StaticText { explanation } => ClaimStatus::TextualInconsistency {
            explanation: explanation.to_string(),
        },
        ClaimCheck::ReplicatorConvergence => evaluate_convergence(&admissible),
    };
    let repair = if status.kind() == StatusKind::FailsWithCounterexample
        && matches!(claim.check, ClaimCheck::Ordinal { .. })
    {
        repair_search(claim.id, &admissible, REPORT_REPAIR_EDITS)
            .ok()
            .and_then(|r| r.into_iter().next())
            .map(|r| r.describe())
    } else {
        None
    };
    AuditRecord {
        id: claim.id.to_string(),
        anchor: claim.anchor.to_string(),
        statement: claim.statement.to_string(),
        expected_per_paper: claim.expected_per_paper.to_string(),
        status,
        parts,
        documented_status: claim.documented_status(nonnegativity),
        repair,
    }
}

/// Evaluates every registered claim. With `nonnegativity`, every payoff
/// symbol is anchored above 0.
pub fn run_audit(nonnegativity: bool) -> AuditReport {
    let claims = registry();
    let mut records: Vec<AuditRecord> = thread::scope(|scope| {
        let handles: Vec<_> = claims
            .iter()
            .map(|c| scope.spawn(move || evaluate_claim(c, nonnegativity)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("claim evaluation panicked"))
            .collect()
    });
    records.sort_by(|a, b| a.id.cmp(&b.id));
    AuditReport {
        nonnegativity,
        records,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "edit", rename_all = "snake_case")]
pub enum ConstraintEdit {
    /// `upper > lower` becomes `lower > upper`; neighbours are rewired so
    /// the chain stays connected.
    Swap { upper: String, lower: String },
    /// `upper > lower` becomes `upper ~= lower`.
    Relax { upper: String, lower: String },
    /// A literal anchor changes side.
    MoveAnchor { from: Constraint, to: Constraint },
}

impl fmt::Display for ConstraintEdit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintEdit::Swap { upper, lower } => {
                write!(f, "swap {upper} and {lower} (make {lower} > {upper})")
            }
            ConstraintEdit::Relax { upper, lower } => {
                write!(f, "relax {upper} > {lower} to {upper} ~= {lower}")
            }
            ConstraintEdit::MoveAnchor { from, to } => write!(f, "replace {from} with {to}"),
        }
    }
}

impl ConstraintEdit {
    fn original(&self) -> Constraint {
        match self {
            ConstraintEdit::Swap { upper, lower } | ConstraintEdit::Relax { upper, lower } => {
                Constraint::gt(upper, lower)
            }
            ConstraintEdit::MoveAnchor { from, .. } => from.clone(),
        }
    }

    /// Applies the edit; false when its constraint is no longer present.
    fn apply(&self, set: &mut OrderingConstraintSet) -> bool {
        if !set.remove(&self.original()) {
            return false;
        }
        match self {
            ConstraintEdit::Swap { upper, lower } => {
                let strict = set.strict_relations();
                set.add(Constraint::gt(lower, upper));
                for (a, b) in &strict {
                    if b.as_str() == upper && a.as_str() != lower {
                        set.add(Constraint::gt(a.as_str(), lower));
                    }
                    if a.as_str() == lower && b.as_str() != upper {
                        set.add(Constraint::gt(upper, b.as_str()));
                    }
                }
            }
            ConstraintEdit::Relax { upper, lower } => {
                set.add(Constraint::eq(upper, lower));
            }
            ConstraintEdit::MoveAnchor { to, .. } => {
                set.add(to.clone());
            }
        }
        true
    }
}

/// Edits available on `constraints`, in constraint order.
pub fn candidate_edits(constraints: &OrderingConstraintSet) -> Vec<ConstraintEdit> {
    let mut out = Vec::new();
    for c in constraints.constraints() {
        match (&c.left, c.rel, &c.right) {
            (Term::Symbol(a), Relation::Greater, Term::Symbol(b)) => {
                let (upper, lower) = (a.to_string(), b.to_string());
                out.push(ConstraintEdit::Swap {
                    upper: upper.clone(),
                    lower: lower.clone(),
                });
                out.push(ConstraintEdit::Relax { upper, lower });
            }
            (Term::Symbol(_), Relation::Greater, Term::Literal(_))
            | (Term::Literal(_), Relation::Greater, Term::Symbol(_)) => {
                out.push(ConstraintEdit::MoveAnchor {
                    from: c.clone(),
                    to: Constraint::new(c.right.clone(), Relation::Greater, c.left.clone()),
                })
            }
            _ => {}
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Repair {
    pub edits: Vec<ConstraintEdit>,
    pub constraints: OrderingConstraintSet,
}

impl Repair {
    pub fn describe(&self) -> String {
        self.edits
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join("; ")
    }
}

fn ordinal_parts(claim: &Claim) -> Result<(SymbolicGame, Vec<Predicate>), AuditError> {
    match &claim.check {
        ClaimCheck::Ordinal { scope, parts } => Ok((
            scope.game(),
            parts.iter().map(|p| p.predicate.clone()).collect(),
        )),
        ClaimCheck::StaticText { .. } => Err(AuditError::UnrepairableTextual(claim.id.to_string())),
        _ => Err(AuditError::NotRepairable(claim.id.to_string())),
    }
}

/// True when every part of the claim holds over all rankings of `constraints`.
pub fn claim_holds(
    claim_id: &str,
    constraints: &OrderingConstraintSet,
) -> Result<bool, AuditError> {
    let claim =
        find_claim(claim_id).ok_or_else(|| AuditError::UnknownClaim(claim_id.to_string()))?;
    let (game, predicates) = ordinal_parts(&claim)?;
    for p in &predicates {
        if !holds(&game, constraints, p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Smallest sets of edits (at most `max_edits`) after which the claim holds
/// for every ranking. Empty when it already holds; every minimal set is
/// returned, in the order the edits are enumerated.
pub fn repair_search(
    claim_id: &str,
    constraints: &OrderingConstraintSet,
    max_edits: usize,
) -> Result<Vec<Repair>, AuditError> {
    let claim =
        find_claim(claim_id).ok_or_else(|| AuditError::UnknownClaim(claim_id.to_string()))?;
    let (game, predicates) = ordinal_parts(&claim)?;
    if max_edits > MAX_REPAIR_EDITS {
        return Err(AuditError::TooManyEdits(max_edits));
    }
    constraints.validate()?;
    let all_hold = |set: &OrderingConstraintSet| -> bool {
        predicates
            .iter()
            .all(|p| holds(&game, set, p).unwrap_or(false))
    };
    if all_hold(constraints) {
        return Ok(Vec::new());
    }
    let edits = candidate_edits(constraints);
    for size in 1..=max_edits {
        let mut found = Vec::new();
        for combo in combinations(edits.len(), size) {
            let mut set = constraints.clone();
            let chosen: Vec<ConstraintEdit> = combo.iter().map(|&i| edits[i].clone()).collect();
            if !chosen.iter().all(|e| e.apply(&mut set)) || set.validate().is_err() {
                continue;
            }
            if all_hold(&set) {
                found.push(Repair {
                    edits: chosen,
                    constraints: set,
                });
            }
        }
        if !found.is_empty() {
            return Ok(found);
        }
    }
    Ok(Vec::new())
}

/// Index subsets of size `k` from `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            go(i + 1, n, k, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}
