//! Report documents: the sections a command fills in, rendered either as
//! plain text or as versioned JSON.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use pubmarket::audit::{AuditReport, ClaimStatus};
use pubmarket::ordinal::Instantiation;
use pubmarket::Rational;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub game: Option<GameTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equilibria: Option<EquilibriaSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dominance: Option<Vec<DominanceEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ieds: Option<IedsSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mixed: Option<MixedSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbolic: Option<SymbolicSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dynamics: Option<DynamicsSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub besancenot: Option<BesancenotSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub audit: Option<AuditReport>,
}

impl ReportDocument {
    pub fn new(command: &str, scenario: Option<&str>) -> Self {
        ReportDocument {
            schema_version: REPORT_SCHEMA_VERSION,
            command: command.to_string(),
            scenario: scenario.map(str::to_string),
            game: None,
            equilibria: None,
            dominance: None,
            ieds: None,
            mixed: None,
            symbolic: None,
            dynamics: None,
            besancenot: None,
            audit: None,
        }
    }

    pub fn to_machine(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_machine(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameTable {
    pub row_player: String,
    pub col_player: String,
    pub row_strategies: Vec<String>,
    pub col_strategies: Vec<String>,
    /// Each cell as `"a, b"`.
    pub cells: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PureEntry {
    pub profile: [String; 2],
    pub payoffs: [Rational; 2],
    pub pareto_optimal: bool,
    pub pareto_dominated_by: Vec<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquilibriaSection {
    pub pure_nash: Vec<PureEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominanceEntry {
    pub player: String,
    pub strategy: String,
    /// `strictly_dominated`, `weakly_dominated` or `not_dominated`.
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dominator: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IedsSection {
    pub kind: String,
    pub order: String,
    pub steps: Vec<String>,
    pub surviving_rows: Vec<String>,
    pub surviving_cols: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedEntry {
    pub row: Vec<Rational>,
    pub col: Vec<Rational>,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedSection {
    pub equilibria: Vec<MixedEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileCount {
    pub profile: [String; 2],
    /// Rankings in which the profile is a pure Nash equilibrium.
    pub nash_in: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicSection {
    pub constraints: Vec<String>,
    pub rankings: usize,
    pub profiles: Vec<ProfileCount>,
    /// Values of the first ranking; the concrete sections use them.
    pub first_ranking: Instantiation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DynamicsSection {
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<Vec<[String; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terminal: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub converged_to: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_to_threshold: Option<usize>,
    /// Floats are kept as 12-significant-digit strings.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_slope: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub final_shares: Option<[String; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trajectory_file: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RevenueEntry {
    pub equilibrium: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UtilityEntry {
    pub author: String,
    pub strategy: String,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreferenceEntry {
    pub journal: String,
    pub equilibria: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BesancenotSection {
    pub revenues: Vec<RevenueEntry>,
    /// Equilibrium 5 with the `(1 - phi)` weight instead of the printed `(1 + phi)`.
    pub revenue_5_corrected: Rational,
    pub utilities: Vec<UtilityEntry>,
    pub preferences: Vec<PreferenceEntry>,
}

fn profile(p: &[String; 2]) -> String {
    format!("({}, {})", p[0], p[1])
}

fn vector(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn render_game(out: &mut String, g: &GameTable) {
    let _ = writeln!(
        out,
        "game: {} (rows) vs {} (columns)",
        g.row_player, g.col_player
    );
    let width = g
        .cells
        .iter()
        .flatten()
        .map(String::len)
        .chain(g.col_strategies.iter().map(String::len))
        .max()
        .unwrap_or(1);
    let label_width = g.row_strategies.iter().map(String::len).max().unwrap_or(1);
    let _ = write!(out, "  {:label_width$}", "");
    for c in &g.col_strategies {
        let _ = write!(out, "  {c:>width$}");
    }
    out.push('\n');
    for (r, row) in g.row_strategies.iter().zip(&g.cells) {
        let _ = write!(out, "  {r:label_width$}");
        for cell in row {
            let _ = write!(out, "  {cell:>width$}");
        }
        out.push('\n');
    }
}

fn render_audit(out: &mut String, audit: &AuditReport) {
    let _ = writeln!(
        out,
        "audit (nonnegativity {}):",
        if audit.nonnegativity { "on" } else { "off" }
    );
    for r in &audit.records {
        let _ = writeln!(out, "  {}  {}", r.id, r.status.summary());
        let _ = writeln!(out, "      claim: {}", r.statement);
        let _ = writeln!(out, "      where: {}", r.anchor);
        for p in &r.parts {
            let _ = writeln!(out, "      part: {}: {}", p.description, p.status.summary());
        }
        match &r.status {
            ClaimStatus::FailsWithCounterexample {
                instantiation,
                explanation,
            } => {
                let _ = writeln!(out, "      why: {explanation}");
                let _ = writeln!(out, "      counterexample: {instantiation}");
            }
            ClaimStatus::NotWellFormed { explanation }
            | ClaimStatus::TextualInconsistency { explanation } => {
                let _ = writeln!(out, "      why: {explanation}");
            }
            _ => {}
        }
        if let Some(fix) = &r.repair {
            let _ = writeln!(out, "      repair: {fix}");
        }
    }
}

/// Human-readable rendering; sections appear in a fixed order.
pub fn render_text(doc: &ReportDocument) -> String {
    let mut out = String::new();
    if let Some(name) = &doc.scenario {
        let _ = writeln!(out, "scenario: {name}");
    }
    if let Some(s) = &doc.symbolic {
        let _ = writeln!(out, "constraints:");
        for c in &s.constraints {
            let _ = writeln!(out, "  {c}");
        }
        let _ = writeln!(out, "rankings: {}", s.rankings);
        let _ = writeln!(out, "pure Nash equilibria by ranking:");
        for p in &s.profiles {
            let when = if p.nash_in == s.rankings {
                "all".to_string()
            } else if p.nash_in == 0 {
                "none".to_string()
            } else {
                format!("{} of {}", p.nash_in, s.rankings)
            };
            let _ = writeln!(out, "  {}: {when}", profile(&p.profile));
        }
        let _ = writeln!(out, "first ranking: {}", s.first_ranking);
    }
    if let Some(g) = &doc.game {
        render_game(&mut out, g);
    }
    if let Some(eq) = &doc.equilibria {
        if eq.pure_nash.is_empty() {
            let _ = writeln!(out, "no pure Nash equilibrium");
        } else {
            let _ = writeln!(out, "pure Nash equilibria:");
            for e in &eq.pure_nash {
                let pareto = if e.pareto_optimal {
                    "Pareto optimal".to_string()
                } else {
                    let by: Vec<String> = e.pareto_dominated_by.iter().map(profile).collect();
                    format!("Pareto-dominated by {{{}}}", by.join(", "))
                };
                let _ = writeln!(
                    out,
                    "  {} payoffs ({}, {}); {pareto}",
                    profile(&e.profile),
                    e.payoffs[0],
                    e.payoffs[1]
                );
            }
        }
    }
    if let Some(dom) = &doc.dominance {
        let _ = writeln!(out, "dominance:");
        for d in dom {
            let verdict = d.verdict.replace('_', " ");
            match &d.dominator {
                Some(by) => {
                    let _ = writeln!(out, "  {} {}: {verdict} by {by}", d.player, d.strategy);
                }
                None => {
                    let _ = writeln!(out, "  {} {}: {verdict}", d.player, d.strategy);
                }
            }
        }
    }
    if let Some(ieds) = &doc.ieds {
        let _ = writeln!(out, "IEDS ({}, {}):", ieds.kind, ieds.order);
        for s in &ieds.steps {
            let _ = writeln!(out, "  {s}");
        }
        let _ = writeln!(
            out,
            "  survivors: rows {{{}}}, columns {{{}}}",
            ieds.surviving_rows.join(", "),
            ieds.surviving_cols.join(", ")
        );
    }
    if let Some(m) = &doc.mixed {
        if let Some(why) = &m.skipped {
            let _ = writeln!(out, "mixed equilibria: skipped ({why})");
        } else {
            let _ = writeln!(out, "mixed equilibria:");
            for e in &m.equilibria {
                let head = if e.row.len() == 2 && e.col.len() == 2 {
                    format!("p = {}, q = {}", e.row[0], e.col[0])
                } else {
                    format!("row {}, column {}", vector(&e.row), vector(&e.col))
                };
                let _ = write!(out, "  {head} [{}]", e.kind);
                if let Some(n) = &e.note {
                    let _ = write!(out, " {n}");
                }
                out.push('\n');
            }
        }
    }
    if let Some(d) = &doc.dynamics {
        let _ = writeln!(out, "dynamics ({}):", d.mode);
        if let Some(t) = &d.terminal {
            let _ = writeln!(out, "  {t}");
        }
        if let Some(steps) = d.steps {
            let _ = writeln!(out, "  steps: {steps}");
        }
        if let Some(f) = &d.final_shares {
            let _ = writeln!(out, "  final shares: OA {}, C {}, H {}", f[0], f[1], f[2]);
        }
        if d.mode == "shares" {
            let _ = writeln!(
                out,
                "  converged_to={}",
                d.converged_to.as_deref().unwrap_or("none")
            );
            if let Some(t) = d.time_to_threshold {
                let _ = writeln!(out, "  time_to_threshold={t}");
            }
            if let Some(s) = &d.max_slope {
                let _ = writeln!(out, "  max_slope={s}");
            }
        }
        if let Some(f) = &d.trajectory_file {
            let _ = writeln!(out, "  trajectory written to {f}");
        }
    }
    if let Some(b) = &doc.besancenot {
        let _ = writeln!(out, "publisher revenue by equilibrium:");
        for r in &b.revenues {
            match (&r.value, &r.error) {
                (Some(v), _) => {
                    let _ = writeln!(out, "  R{} = {v}", r.equilibrium);
                }
                (None, Some(e)) => {
                    let _ = writeln!(out, "  R{}: {e}", r.equilibrium);
                }
                _ => {}
            }
        }
        let _ = writeln!(out, "  R5 with (1 - phi) = {}", b.revenue_5_corrected);
        let _ = writeln!(out, "author utilities:");
        for u in &b.utilities {
            let _ = writeln!(
                out,
                "  type {} playing {}: {}",
                u.author, u.strategy, u.value
            );
        }
        let _ = writeln!(out, "preferred equilibria:");
        for p in &b.preferences {
            let ids: Vec<String> = p.equilibria.iter().map(u8::to_string).collect();
            let _ = writeln!(out, "  {}: {{{}}}", p.journal, ids.join(", "));
        }
    }
    if let Some(a) = &doc.audit {
        render_audit(&mut out, a);
    }
    out
}
