//! Command-line front end: reads scenarios, runs the solvers, dynamics and
//! audit, and emits deterministic reports.

pub mod builtins;
pub mod report;
pub mod scenario;

use std::fs;
use std::io::Read;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pubmarket::audit::run_audit;
use pubmarket::dynamics::{
    br_dynamics, replicator_simulate, sig12, ReplicatorParams, ShareState, Terminal, UpdateRule,
};
use pubmarket::game::{
    DominanceKind, NormalFormGame, ParetoStatus, Player, StrategyProfile, VerdictKind,
};
use pubmarket::mixed::{support_enumeration, EquilibriumKind, MAX_SUPPORT_ENUMERATION_SIZE};
use pubmarket::models::{
    besancenot_preferences, besancenot_revenue, besancenot_utility,
    canonical_publishing_instantiation, default_constraints, habermann_game, hanauske_game,
    publishing_game_3x3, publishing_symbolic_3x3, AuthorStrategy, AuthorType, BesancenotParams,
    HabermannParams, HanauskeParams, JournalType,
};
use pubmarket::ordinal::{scoped_canonical_instantiations, OrdinalError};
use pubmarket::Rational;

use report::{
    render_text, BesancenotSection, DominanceEntry, DynamicsSection, EquilibriaSection, GameTable,
    IedsSection, MixedEntry, MixedSection, PreferenceEntry, ProfileCount, PureEntry,
    ReportDocument, RevenueEntry, SymbolicSection, UtilityEntry,
};
use scenario::{
    concrete_scenario, parse_rational_list, symbolic_scenario, GameSpec, Options, ScenarioFile,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("{0}")]
    Domain(String),
    #[error("limit exceeded: {0}")]
    Limit(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Limit(_) => 2,
            _ => 1,
        }
    }

    pub fn from_ordinal(e: OrdinalError) -> Self {
        match e {
            OrdinalError::Parse {
                line,
                column,
                message,
            } => CliError::Parse {
                line,
                column,
                message,
            },
            OrdinalError::ExtensionLimitExceeded(_) | OrdinalError::TooManyWeakRelations(_) => {
                CliError::Limit(e.to_string())
            }
            other => CliError::Domain(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "pubmarket",
    version,
    about = "Exact analysis of two-player games with ordinal payoffs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Equilibria, dominance, IEDS and mixed equilibria of a scenario.
    Solve {
        /// Scenario file, `-` for standard input, or a bundled scenario name.
        scenario: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Checks every registered claim about the publishing game.
    Audit {
        /// Anchor every payoff symbol above 0.
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        nonnegativity: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Best-response paths or market-share trajectories.
    Dynamics {
        #[command(subcommand)]
        mode: DynamicsMode,
    },
    /// Prints a scenario generated from model parameters.
    Model {
        #[command(subcommand)]
        model: ModelCommand,
    },
    /// Lists the bundled scenarios.
    Builtins,
}

#[derive(Debug, Subcommand)]
pub enum DynamicsMode {
    Br {
        scenario: String,
        /// Starting profile as `row,column` labels.
        #[arg(long)]
        start: Option<String>,
        /// Move the column player first.
        #[arg(long)]
        col_first: bool,
        #[arg(long, default_value_t = 100)]
        max_steps: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    Shares {
        scenario: String,
        /// Initial shares of OA, C, H, e.g. `1/3,1/3,1/3`.
        #[arg(long)]
        init: Option<String>,
        /// Herding weight.
        #[arg(long = "h")]
        herd: Option<String>,
        /// Constant added to every fitness.
        #[arg(long)]
        shift: Option<String>,
        #[arg(long)]
        steps: Option<usize>,
        /// Write the trajectory (`step,x_oa,x_c,x_h`) to this file.
        #[arg(long)]
        out: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug, Subcommand)]
pub enum ModelCommand {
    Hanauske {
        #[arg(long, allow_hyphen_values = true)]
        r: String,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        #[arg(long, allow_hyphen_values = true)]
        delta: String,
    },
    Habermann(HabermannArgs),
    Besancenot(BesancenotArgs),
    Publishing {
        /// Emit the canonical concrete game instead of the symbolic one.
        #[arg(long)]
        canonical: bool,
        /// Symbolic form only: anchor every symbol above 0.
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        nonnegativity: bool,
    },
}

#[derive(Debug, Args)]
pub struct HabermannArgs {
    #[arg(long = "R", default_value = "10")]
    big_r: String,
    #[arg(long, default_value = "2")]
    r: String,
    #[arg(long = "I", default_value = "5")]
    i: String,
    #[arg(long, default_value = "1")]
    tau: String,
    #[arg(long = "L", default_value = "2")]
    l: String,
    #[arg(long = "G", default_value = "3")]
    g: String,
    #[arg(long = "P", default_value = "4")]
    p: String,
}

#[derive(Debug, Args)]
pub struct BesancenotArgs {
    #[arg(long, default_value = "3/10")]
    mu: String,
    #[arg(long, default_value = "2")]
    theta_h: String,
    #[arg(long, default_value = "1")]
    theta_l: String,
    #[arg(long, default_value = "1/4")]
    lambda: String,
    #[arg(long, default_value = "2")]
    delta_a: String,
    #[arg(long, default_value = "1")]
    delta_t: String,
    #[arg(long, default_value = "1/2")]
    c: String,
    #[arg(long, default_value = "1/2")]
    phi: String,
    /// Publisher's expected quality after observing A.
    #[arg(long, default_value = "2")]
    belief_a: Option<String>,
    /// Publisher's expected quality after observing T.
    #[arg(long, default_value = "1")]
    belief_t: Option<String>,
}

/// Result of one invocation: exit code and the two output streams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the tool on `args` (program name first) with the given standard input.
pub fn run<I, S>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let code = if e.use_stderr() { 1 } else { 0 };
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match execute(cli.command, stdin) {
        Ok(stdout) => Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn emit(doc: &ReportDocument, format: Format) -> String {
    match format {
        Format::Text => render_text(doc),
        Format::Machine => doc.to_machine(),
    }
}

fn execute(command: Command, stdin: &mut dyn Read) -> Result<String, CliError> {
    match command {
        Command::Solve { scenario, format } => {
            let s = load_scenario(&scenario, stdin)?;
            Ok(emit(&cmd_solve(&s)?, format))
        }
        Command::Audit {
            nonnegativity,
            format,
        } => Ok(emit(&cmd_audit(nonnegativity), format)),
        Command::Dynamics { mode } => match mode {
            DynamicsMode::Br {
                scenario,
                start,
                col_first,
                max_steps,
                format,
            } => {
                let s = load_scenario(&scenario, stdin)?;
                Ok(emit(
                    &cmd_dynamics_br(&s, start.as_deref(), col_first, max_steps)?,
                    format,
                ))
            }
            DynamicsMode::Shares {
                scenario,
                init,
                herd,
                shift,
                steps,
                out,
                format,
            } => {
                let s = load_scenario(&scenario, stdin)?;
                let request = SharesRequest {
                    init: init.as_deref().map(parse_rational_list).transpose()?,
                    herd: herd.as_deref().map(parse_number).transpose()?,
                    shift: shift.as_deref().map(parse_number).transpose()?,
                    steps,
                };
                let (mut doc, csv) = cmd_dynamics_shares(&s, &request)?;
                if let Some(path) = out {
                    fs::write(&path, csv)
                        .map_err(|e| CliError::Io(format!("cannot write {path}: {e}")))?;
                    if let Some(d) = doc.dynamics.as_mut() {
                        d.trajectory_file = Some(path);
                    }
                }
                Ok(emit(&doc, format))
            }
        },
        Command::Model { model } => Ok(cmd_model(model)?.emit()),
        Command::Builtins => Ok(builtins::BUILTIN_NAMES
            .iter()
            .map(|n| format!("{n}\n"))
            .collect()),
    }
}

/// `-` reads standard input; an existing path is read from disk; otherwise
/// the argument names a bundled scenario.
pub fn load_scenario(arg: &str, stdin: &mut dyn Read) -> Result<ScenarioFile, CliError> {
    if arg == "-" {
        let mut text = String::new();
        stdin
            .read_to_string(&mut text)
            .map_err(|e| CliError::Io(format!("cannot read standard input: {e}")))?;
        return ScenarioFile::parse(&text);
    }
    if Path::new(arg).exists() {
        let text =
            fs::read_to_string(arg).map_err(|e| CliError::Io(format!("cannot read {arg}: {e}")))?;
        return ScenarioFile::parse(&text);
    }
    builtins::builtin(arg).ok_or_else(|| {
        CliError::Io(format!(
            "no file or bundled scenario named `{arg}` (bundled: {})",
            builtins::BUILTIN_NAMES.join(", ")
        ))
    })
}

fn parse_number(text: &str) -> Result<Rational, CliError> {
    text.trim()
        .parse()
        .map_err(|_| CliError::Domain(format!("`{text}` is not a number")))
}

fn labels(g: &NormalFormGame, p: StrategyProfile) -> [String; 2] {
    [
        g.strategies(Player::Row)[p.row].clone(),
        g.strategies(Player::Col)[p.col].clone(),
    ]
}

fn game_table(g: &NormalFormGame) -> GameTable {
    GameTable {
        row_player: g.row_label().to_string(),
        col_player: g.col_label().to_string(),
        row_strategies: g.strategies(Player::Row).to_vec(),
        col_strategies: g.strategies(Player::Col).to_vec(),
        cells: g
            .payoff_matrix()
            .iter()
            .map(|r| r.iter().map(|(a, b)| format!("{a}, {b}")).collect())
            .collect(),
    }
}

fn fill_concrete(doc: &mut ReportDocument, g: &NormalFormGame, options: &Options) {
    doc.game = Some(game_table(g));
    let pure = g
        .pure_nash()
        .into_iter()
        .map(|p| {
            let (a, b) = g.cell(p).clone();
            let (optimal, by) = match g.pareto_status(p).expect("profile in range") {
                ParetoStatus::Optimal => (true, Vec::new()),
                ParetoStatus::DominatedBy(v) => {
                    (false, v.into_iter().map(|q| labels(g, q)).collect())
                }
            };
            PureEntry {
                profile: labels(g, p),
                payoffs: [a, b],
                pareto_optimal: optimal,
                pareto_dominated_by: by,
            }
        })
        .collect();
    doc.equilibria = Some(EquilibriaSection { pure_nash: pure });

    let mut dominance = Vec::new();
    for player in [Player::Row, Player::Col] {
        let names = g.strategies(player);
        for (s, v) in g
            .dominated_strategies(player, DominanceKind::Weak)
            .iter()
            .enumerate()
        {
            let verdict = match v.kind {
                VerdictKind::StrictlyDominated => "strictly_dominated",
                VerdictKind::WeaklyDominated => "weakly_dominated",
                VerdictKind::NotDominated => "not_dominated",
            };
            dominance.push(DominanceEntry {
                player: g.player_label(player).to_string(),
                strategy: names[s].clone(),
                verdict: verdict.to_string(),
                dominator: v.dominator.map(|d| names[d].clone()),
            });
        }
    }
    doc.dominance = Some(dominance);

    if let Some(opt) = options.ieds {
        let (_, trace) = g.ieds(opt.policy());
        let kind = serde_json::to_value(opt.kind)
            .expect("enum")
            .as_str()
            .unwrap_or_default()
            .to_string();
        let order = serde_json::to_value(opt.order)
            .expect("enum")
            .as_str()
            .unwrap_or_default()
            .to_string();
        doc.ieds = Some(IedsSection {
            kind,
            order,
            steps: trace.steps.iter().map(|s| s.to_string()).collect(),
            surviving_rows: trace
                .surviving_rows
                .iter()
                .map(|&r| g.strategies(Player::Row)[r].clone())
                .collect(),
            surviving_cols: trace
                .surviving_cols
                .iter()
                .map(|&c| g.strategies(Player::Col)[c].clone())
                .collect(),
        });
    }

    let (m, n) = g.shape();
    doc.mixed = Some(if m.max(n) > MAX_SUPPORT_ENUMERATION_SIZE {
        MixedSection {
            equilibria: Vec::new(),
            skipped: Some(format!(
                "games larger than {MAX_SUPPORT_ENUMERATION_SIZE}x{MAX_SUPPORT_ENUMERATION_SIZE}"
            )),
        }
    } else {
        let eqs = support_enumeration(g).expect("size checked");
        MixedSection {
            equilibria: eqs
                .into_iter()
                .map(|e| MixedEntry {
                    row: e.profile.row,
                    col: e.profile.col,
                    kind: match e.kind {
                        EquilibriumKind::PureCorner => "pure corner",
                        EquilibriumKind::InteriorMixed => "interior mixed",
                        EquilibriumKind::ComponentDegenerate => "degenerate component",
                    }
                    .to_string(),
                    note: e.degeneracy_note,
                })
                .collect(),
            skipped: None,
        }
    });
}

fn besancenot_section(params: &BesancenotParams) -> Result<BesancenotSection, CliError> {
    let domain = |e: pubmarket::models::ModelError| CliError::Domain(e.to_string());
    let revenues = (1..=5)
        .map(|id| match besancenot_revenue(params, id, false) {
            Ok(v) => RevenueEntry {
                equilibrium: id,
                value: Some(v),
                error: None,
            },
            Err(e) => RevenueEntry {
                equilibrium: id,
                value: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    let mut utilities = Vec::new();
    for (ty, ty_name) in [(AuthorType::H, "H"), (AuthorType::L, "L")] {
        for (st, st_name, belief) in [
            (AuthorStrategy::A, "A", &params.belief_a),
            (AuthorStrategy::T, "T", &params.belief_t),
        ] {
            if belief.is_some() {
                utilities.push(UtilityEntry {
                    author: ty_name.into(),
                    strategy: st_name.into(),
                    value: besancenot_utility(params, ty, st).map_err(domain)?,
                });
            }
        }
    }
    let preferences = [
        (JournalType::Leading, "leading"),
        (JournalType::SpecializedGood, "specialized good"),
        (JournalType::SecondTier, "second tier"),
    ]
    .into_iter()
    .map(|(j, name)| PreferenceEntry {
        journal: name.into(),
        equilibria: besancenot_preferences(j).into_iter().collect(),
    })
    .collect();
    Ok(BesancenotSection {
        revenues,
        revenue_5_corrected: besancenot_revenue(params, 5, true).map_err(domain)?,
        utilities,
        preferences,
    })
}

/// The concrete game a scenario stands for; symbolic games use the values
/// of their first ranking.
fn scenario_game(s: &ScenarioFile) -> Result<NormalFormGame, CliError> {
    match &s.game {
        GameSpec::Concrete { .. } => s.concrete_game(),
        GameSpec::Symbolic { .. } => {
            let (game, set) = s.symbolic_game()?;
            let insts =
                scoped_canonical_instantiations(&game, &set).map_err(CliError::from_ordinal)?;
            let first = insts
                .first()
                .ok_or_else(|| CliError::Domain("constraints admit no ranking".into()))?;
            game.instantiate(first).map_err(CliError::from_ordinal)
        }
        GameSpec::Besancenot { .. } => Err(CliError::Shape(
            "the signalling model has no payoff matrix".into(),
        )),
    }
}

pub fn cmd_solve(s: &ScenarioFile) -> Result<ReportDocument, CliError> {
    let mut doc = ReportDocument::new("solve", Some(&s.name));
    match &s.game {
        GameSpec::Concrete { .. } => fill_concrete(&mut doc, &s.concrete_game()?, &s.options),
        GameSpec::Symbolic { .. } => {
            let (game, set) = s.symbolic_game()?;
            let insts =
                scoped_canonical_instantiations(&game, &set).map_err(CliError::from_ordinal)?;
            let first = insts
                .first()
                .ok_or_else(|| CliError::Domain("constraints admit no ranking".into()))?;
            let games: Vec<NormalFormGame> = insts
                .iter()
                .map(|i| game.instantiate(i).map_err(CliError::from_ordinal))
                .collect::<Result<_, _>>()?;
            let concrete = &games[0];
            let profiles = concrete
                .profiles()
                .map(|p| ProfileCount {
                    profile: labels(concrete, p),
                    nash_in: games.iter().filter(|g| g.pure_nash().contains(&p)).count(),
                })
                .collect();
            doc.symbolic = Some(SymbolicSection {
                constraints: set.to_lines(),
                rankings: insts.len(),
                profiles,
                first_ranking: first.clone(),
            });
            fill_concrete(&mut doc, concrete, &s.options);
        }
        GameSpec::Besancenot { params } => doc.besancenot = Some(besancenot_section(params)?),
    }
    Ok(doc)
}

pub fn cmd_audit(nonnegativity: bool) -> ReportDocument {
    let mut doc = ReportDocument::new("audit", None);
    doc.audit = Some(run_audit(nonnegativity));
    doc
}

fn find_strategy(g: &NormalFormGame, player: Player, label: &str) -> Result<usize, CliError> {
    g.strategy_index(player, label.trim()).ok_or_else(|| {
        CliError::Domain(format!(
            "{} has no strategy `{}`",
            g.player_label(player),
            label.trim()
        ))
    })
}

pub fn cmd_dynamics_br(
    s: &ScenarioFile,
    start: Option<&str>,
    col_first: bool,
    max_steps: usize,
) -> Result<ReportDocument, CliError> {
    let g = scenario_game(s)?;
    let start_labels: Option<[String; 2]> = match start {
        Some(text) => {
            let parts: Vec<&str> = text.split(',').collect();
            let [r, c] = parts[..] else {
                return Err(CliError::Domain(format!(
                    "start `{text}` must be `row,column`"
                )));
            };
            Some([r.to_string(), c.to_string()])
        }
        None => s.options.dynamics.as_ref().and_then(|d| d.start.clone()),
    };
    let profile = match start_labels {
        Some([r, c]) => StrategyProfile::new(
            find_strategy(&g, Player::Row, &r)?,
            find_strategy(&g, Player::Col, &c)?,
        ),
        None => StrategyProfile::new(0, 0),
    };
    let rule = if col_first {
        UpdateRule::AlternatingColFirst
    } else {
        UpdateRule::AlternatingRowFirst
    };
    let trace =
        br_dynamics(&g, profile, rule, max_steps).map_err(|e| CliError::Domain(e.to_string()))?;
    let mut doc = ReportDocument::new("dynamics br", Some(&s.name));
    doc.dynamics = Some(DynamicsSection {
        mode: "br".into(),
        path: Some(trace.path.iter().map(|p| labels(&g, *p)).collect()),
        terminal: Some(trace.render(&g)),
        converged_to: match trace.terminal {
            Terminal::FixedPoint { profile } => Some(format!(
                "({}, {})",
                labels(&g, profile)[0],
                labels(&g, profile)[1]
            )),
            _ => None,
        },
        time_to_threshold: None,
        max_slope: None,
        final_shares: None,
        steps: Some(trace.path.len() - 1),
        trajectory_file: None,
    });
    Ok(doc)
}

#[derive(Debug, Clone, Default)]
pub struct SharesRequest {
    pub init: Option<Vec<Rational>>,
    pub herd: Option<Rational>,
    pub shift: Option<Rational>,
    pub steps: Option<usize>,
}

/// Runs the replicator; returns the report and the trajectory export.
pub fn cmd_dynamics_shares(
    s: &ScenarioFile,
    req: &SharesRequest,
) -> Result<(ReportDocument, String), CliError> {
    let g = scenario_game(s)?;
    let defaults = s.options.dynamics.clone().unwrap_or_default();
    let init: Vec<Rational> = match &req.init {
        Some(v) => v.clone(),
        None => defaults
            .init
            .map(|a| a.to_vec())
            .unwrap_or_else(|| vec![Rational::new(1, 3); 3]),
    };
    let [a, b, c] = &init[..] else {
        return Err(CliError::Domain(format!(
            "expected 3 initial shares, got {}",
            init.len()
        )));
    };
    let as_f64 = |r: &Rational| r.to_f64();
    let params = ReplicatorParams {
        herd_weight: req
            .herd
            .as_ref()
            .or(defaults.herd_weight.as_ref())
            .map_or(0.0, as_f64),
        payoff_shift: req
            .shift
            .as_ref()
            .or(defaults.payoff_shift.as_ref())
            .map_or(0.0, as_f64),
        steps: req.steps.or(defaults.steps).unwrap_or(1000),
    };
    let state = ShareState::new(a.to_f64(), b.to_f64(), c.to_f64());
    let t = replicator_simulate(&g, state, params).map_err(|e| CliError::Domain(e.to_string()))?;
    let names = g.strategies(Player::Row);
    let last = t.states.last().expect("initial state present").shares;
    let mut doc = ReportDocument::new("dynamics shares", Some(&s.name));
    doc.dynamics = Some(DynamicsSection {
        mode: "shares".into(),
        path: None,
        terminal: None,
        converged_to: t.stats.converged_to.map(|i| names[i].clone()),
        time_to_threshold: t.stats.time_to_threshold,
        max_slope: Some(sig12(t.stats.max_slope)),
        final_shares: Some(last.map(sig12)),
        steps: Some(params.steps),
        trajectory_file: None,
    });
    Ok((doc, t.to_csv()))
}

fn num(text: &str) -> Result<Rational, CliError> {
    parse_number(text)
}

pub fn cmd_model(model: ModelCommand) -> Result<ScenarioFile, CliError> {
    let domain = |e: pubmarket::models::ModelError| CliError::Domain(e.to_string());
    Ok(match model {
        ModelCommand::Hanauske {
            r,
            alpha,
            beta,
            delta,
        } => {
            let p = HanauskeParams::new(num(&r)?, num(&alpha)?, num(&beta)?, num(&delta)?);
            concrete_scenario(
                "hanauske",
                &hanauske_game(&p).map_err(domain)?,
                Options::default(),
            )
        }
        ModelCommand::Habermann(a) => {
            let p = HabermannParams {
                big_r: num(&a.big_r)?,
                r: num(&a.r)?,
                i: num(&a.i)?,
                tau: num(&a.tau)?,
                l: num(&a.l)?,
                g: num(&a.g)?,
                p: num(&a.p)?,
            };
            concrete_scenario(
                "habermann",
                &habermann_game(&p).map_err(domain)?,
                Options::default(),
            )
        }
        ModelCommand::Besancenot(a) => {
            let params = BesancenotParams {
                mu: num(&a.mu)?,
                theta_h: num(&a.theta_h)?,
                theta_l: num(&a.theta_l)?,
                lambda_w: num(&a.lambda)?,
                delta_a: num(&a.delta_a)?,
                delta_t: num(&a.delta_t)?,
                c: num(&a.c)?,
                phi: num(&a.phi)?,
                belief_a: a.belief_a.as_deref().map(num).transpose()?,
                belief_t: a.belief_t.as_deref().map(num).transpose()?,
            };
            params.validate().map_err(domain)?;
            ScenarioFile {
                schema_version: scenario::SCENARIO_SCHEMA_VERSION,
                name: "besancenot".into(),
                game: GameSpec::Besancenot { params },
                options: Options::default(),
            }
        }
        ModelCommand::Publishing {
            canonical,
            nonnegativity,
        } => {
            if canonical {
                let g =
                    publishing_game_3x3(&canonical_publishing_instantiation()).map_err(domain)?;
                concrete_scenario("publishing_canonical", &g, Options::default())
            } else {
                symbolic_scenario(
                    "publishing_symbolic",
                    &publishing_symbolic_3x3(),
                    &default_constraints(false),
                    Options {
                        nonnegativity: Some(nonnegativity),
                        ..Default::default()
                    },
                )
            }
        }
    })
}
