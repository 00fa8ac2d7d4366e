//! Game generators and formula evaluators: the three-model publishing market
//! game between institutions and publishers, plus the reputation game
//! (Hanauske), the author/publisher game (Habermann) and the signalling
//! model of open access (Besancenot).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::game::NormalFormGame;
use crate::ordinal::{
    canonical_instantiation, Constraint, Instantiation, OrderingConstraintSet, OrdinalError,
    Relation, SymbolicGame, Term,
};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("division by zero: {0}")]
    DivisionByZero(String),
    #[error("missing payoff symbol `{0}`")]
    MissingSymbol(String),
    #[error("unknown journal `{0}`")]
    UnknownJournal(String),
    #[error("no equilibrium with id {0} (expected 1..=5)")]
    UnknownEquilibrium(u8),
}

impl From<OrdinalError> for ModelError {
    fn from(e: OrdinalError) -> Self {
        match e {
            OrdinalError::MissingSymbol(s) => ModelError::MissingSymbol(s),
            other => ModelError::DomainError(other.to_string()),
        }
    }
}

fn domain(cond: bool, msg: impl Into<String>) -> Result<(), ModelError> {
    if cond {
        Ok(())
    } else {
        Err(ModelError::DomainError(msg.into()))
    }
}

fn half() -> Rational {
    Rational::new(1, 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BusinessModel {
    #[serde(rename = "OA")]
    OpenAccess,
    #[serde(rename = "C")]
    Subscription,
    #[serde(rename = "H")]
    Hybrid,
}

impl BusinessModel {
    pub const ALL: [BusinessModel; 3] = [
        BusinessModel::OpenAccess,
        BusinessModel::Subscription,
        BusinessModel::Hybrid,
    ];

    pub fn label(self) -> &'static str {
        match self {
            BusinessModel::OpenAccess => "OA",
            BusinessModel::Subscription => "C",
            BusinessModel::Hybrid => "H",
        }
    }
}

impl fmt::Display for BusinessModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Raised when inputs produce a utility ranking that contradicts the
/// assumed order of the three business models.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyWarning {
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evaluated {
    pub value: Rational,
    pub warning: Option<ConsistencyWarning>,
}

/// Market primitives seen by an institution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublishingPrimitives {
    pub p_oa: Rational,
    pub p_c: Rational,
    pub a_oa: Rational,
    pub a_c: Rational,
    /// OA share within a hybrid journal, in (0, 1/2).
    pub lambda_share: Rational,
    pub impact_oa: Rational,
    pub impact_c: Rational,
    pub impact_h: Rational,
    /// Notoriety has no numeric form; kept as an annotation.
    #[serde(default)]
    pub notoriety_note: String,
    pub cost_oa: Rational,
    pub cost_c: Rational,
    pub cost_h: Rational,
}

impl PublishingPrimitives {
    /// Costs built from their components: APC for OA, subscription `s` for
    /// C, and `phi * apc + s` for a hybrid journal.
    pub fn costs_from_components(
        apc: &Rational,
        s: &Rational,
        phi: &Rational,
    ) -> (Rational, Rational, Rational) {
        (apc.clone(), s.clone(), &(phi * apc) + s)
    }

    pub fn p_h(&self) -> Rational {
        self.mix(&self.p_oa, &self.p_c)
    }

    pub fn a_h(&self) -> Rational {
        self.mix(&self.a_oa, &self.a_c)
    }

    fn mix(&self, oa: &Rational, c: &Rational) -> Rational {
        &(&self.lambda_share * oa) + &(&(&Rational::one() - &self.lambda_share) * c)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        domain(
            self.lambda_share.is_positive() && self.lambda_share < half(),
            "hybrid OA share must lie in (0, 1/2)",
        )?;
        domain(
            self.p_oa > self.p_h() && self.p_h() > self.p_c,
            "publication counts must satisfy P_OA > P_H > P_C",
        )?;
        domain(
            self.a_oa > self.a_h() && self.a_h() > self.a_c,
            "accessibility must satisfy A_OA > A_H > A_C",
        )?;
        domain(
            self.cost_h > self.cost_c && self.cost_c > self.cost_oa,
            "costs must satisfy C_H > C_C > C_OA",
        )?;
        domain(
            self.impact_oa > self.impact_c && self.impact_h > self.impact_c,
            "impact of OA and hybrid must exceed subscription impact",
        )
    }

    fn raw_institution_utility(&self, model: BusinessModel) -> Rational {
        match model {
            BusinessModel::OpenAccess => {
                &(&(&self.p_oa + &self.a_oa) + &self.impact_oa) - &self.cost_oa
            }
            BusinessModel::Subscription => {
                &(&(&self.p_c + &self.a_c) + &self.impact_c) - &self.cost_c
            }
            BusinessModel::Hybrid => {
                &(&(&self.p_h() + &self.a_h()) + &self.impact_h) - &self.cost_h
            }
        }
    }
}

fn ranking_warning(
    values: &BTreeMap<BusinessModel, Rational>,
    expected: [BusinessModel; 3],
    who: &str,
) -> Option<ConsistencyWarning> {
    let ok =
        values[&expected[0]] > values[&expected[1]] && values[&expected[1]] > values[&expected[2]];
    (!ok).then(|| ConsistencyWarning {
        message: format!(
            "{who} utilities {} = {}, {} = {}, {} = {} break the expected order {} > {} > {}",
            expected[0],
            values[&expected[0]],
            expected[1],
            values[&expected[1]],
            expected[2],
            values[&expected[2]],
            expected[0],
            expected[1],
            expected[2]
        ),
    })
}

/// Institution utility: publications plus access plus impact minus cost,
/// with a hybrid journal mixing the OA and subscription levels.
pub fn institution_utility(
    primitives: &PublishingPrimitives,
    model: BusinessModel,
) -> Result<Evaluated, ModelError> {
    primitives.validate()?;
    let values: BTreeMap<BusinessModel, Rational> = BusinessModel::ALL
        .iter()
        .map(|&m| (m, primitives.raw_institution_utility(m)))
        .collect();
    Ok(Evaluated {
        value: values[&model].clone(),
        warning: ranking_warning(
            &values,
            [
                BusinessModel::OpenAccess,
                BusinessModel::Subscription,
                BusinessModel::Hybrid,
            ],
            "institution",
        ),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelLine {
    /// All submissions, rejected ones included.
    pub submissions: Rational,
    pub published: Rational,
    pub price: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JournalRecord {
    pub fixed_cost: Rational,
    pub unit_variable_cost: Rational,
    pub lines: BTreeMap<BusinessModel, ModelLine>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PublisherLedger {
    pub journals: BTreeMap<String, JournalRecord>,
}

impl PublisherLedger {
    pub fn validate(&self) -> Result<(), ModelError> {
        for (name, j) in &self.journals {
            domain(
                !j.fixed_cost.is_negative() && !j.unit_variable_cost.is_negative(),
                format!("journal `{name}`: costs must be nonnegative"),
            )?;
            for (m, line) in &j.lines {
                domain(
                    line.submissions >= line.published && !line.published.is_negative(),
                    format!("journal `{name}`, model {m}: need submissions >= published >= 0"),
                )?;
            }
        }
        Ok(())
    }
}

/// Revenue minus fixed cost and a variable cost linear in submissions.
pub fn publisher_profit(
    ledger: &PublisherLedger,
    journal: &str,
    model: BusinessModel,
) -> Result<Rational, ModelError> {
    ledger.validate()?;
    let j = ledger
        .journals
        .get(journal)
        .ok_or_else(|| ModelError::UnknownJournal(journal.to_string()))?;
    let (revenue, submissions) = match j.lines.get(&model) {
        Some(l) => (&l.published * &l.price, l.submissions.clone()),
        None => (Rational::zero(), Rational::zero()),
    };
    let variable = &j.unit_variable_cost * &submissions;
    Ok(&revenue - &(&j.fixed_cost + &variable))
}

fn model_impact(primitives: &PublishingPrimitives, model: BusinessModel) -> &Rational {
    match model {
        BusinessModel::OpenAccess => &primitives.impact_oa,
        BusinessModel::Subscription => &primitives.impact_c,
        BusinessModel::Hybrid => &primitives.impact_h,
    }
}

/// Profit under the model plus the journal impact it brings.
pub fn publisher_utility(
    ledger: &PublisherLedger,
    journal: &str,
    primitives: &PublishingPrimitives,
    model: BusinessModel,
) -> Result<Evaluated, ModelError> {
    primitives.validate()?;
    let mut values = BTreeMap::new();
    for m in BusinessModel::ALL {
        values.insert(
            m,
            &publisher_profit(ledger, journal, m)? + model_impact(primitives, m),
        );
    }
    Ok(Evaluated {
        value: values[&model].clone(),
        warning: ranking_warning(
            &values,
            [
                BusinessModel::Hybrid,
                BusinessModel::Subscription,
                BusinessModel::OpenAccess,
            ],
            "publisher",
        ),
    })
}

/// Payoff symbols of the publishing game. Primes are spelled `_p`, `_pp`,
/// `_ppp`; stars `_star`.
pub struct PublishingPayoffSymbols;

impl PublishingPayoffSymbols {
    /// Institution ranking, best first; `alpha_star` and `omega_star` tie.
    pub const INSTITUTION: [&'static str; 6] = [
        "alpha",
        "alpha_star",
        "omega_star",
        "beta_star",
        "beta",
        "omega",
    ];
    /// Publisher ranking, best first. `alpha_pp` is ranked but sits in no cell.
    pub const PUBLISHER: [&'static str; 7] = [
        "omega_p", "beta_ppp", "beta_pp", "beta_p", "alpha_pp", "alpha_p", "omega_pp",
    ];
    pub const STRATEGIES: [&'static str; 3] = ["OA", "C", "H"];

    pub fn all() -> impl Iterator<Item = &'static str> {
        Self::INSTITUTION
            .iter()
            .chain(Self::PUBLISHER.iter())
            .copied()
    }

    /// Cell layout `(institution, publisher)` for rows/columns OA, C, H.
    pub fn layout_3x3() -> [[(&'static str, &'static str); 3]; 3] {
        [
            [
                ("alpha", "alpha_p"),
                ("alpha_star", "0"),
                ("alpha_star", "omega_pp"),
            ],
            [
                ("alpha", "beta_pp"),
                ("beta", "beta_p"),
                ("beta_star", "beta_ppp"),
            ],
            [
                ("omega_star", "omega_p"),
                ("alpha_star", "0"),
                ("omega", "omega_p"),
            ],
        ]
    }
}

/// Both preference chains; with `nonnegativity`, every symbol is also
/// anchored above 0.
pub fn default_constraints(nonnegativity: bool) -> OrderingConstraintSet {
    let mut set = OrderingConstraintSet::new();
    set.add(Constraint::gt("alpha", "alpha_star"));
    set.add(Constraint::eq("alpha_star", "omega_star"));
    set.add_chain(&["omega_star", "beta_star", "beta", "omega"]);
    set.add_chain(&PublishingPayoffSymbols::PUBLISHER);
    if nonnegativity {
        for s in PublishingPayoffSymbols::all() {
            set.add(Constraint::new(
                Term::sym(s),
                Relation::Greater,
                Term::lit(0),
            ));
        }
    }
    set
}

pub fn publishing_symbolic_3x3() -> SymbolicGame {
    let cells = PublishingPayoffSymbols::layout_3x3()
        .iter()
        .map(|r| {
            r.iter()
                .map(|(a, b)| {
                    (
                        a.parse().expect("symbol"),
                        b.parse().expect("symbol or literal"),
                    )
                })
                .collect()
        })
        .collect();
    let s = PublishingPayoffSymbols::STRATEGIES;
    SymbolicGame::new("institution", "publisher", &s, &s, cells).expect("3x3 layout")
}

/// The OA/H restriction.
pub fn publishing_symbolic_2x2() -> SymbolicGame {
    publishing_symbolic_3x3().restrict(&[0, 2], &[0, 2])
}

pub fn publishing_game_3x3(values: &Instantiation) -> Result<NormalFormGame, ModelError> {
    Ok(publishing_symbolic_3x3().instantiate(values)?)
}

pub fn publishing_game_2x2(values: &Instantiation) -> Result<NormalFormGame, ModelError> {
    Ok(publishing_symbolic_2x2().instantiate(values)?)
}

/// Canonical values of the single ranking left by the positive chains:
/// alpha=6, alpha_star=omega_star=5, ..., omega=2 and omega_p=8, ..., omega_pp=2.
pub fn canonical_publishing_instantiation() -> Instantiation {
    let scoped = crate::ordinal::scoped_extensions(
        &publishing_symbolic_3x3(),
        &default_constraints(true),
        10,
    )
    .expect("default constraints are valid");
    let mut inst = Instantiation::new();
    for group in scoped {
        for (s, v) in canonical_instantiation(&group[0]).iter() {
            inst.insert(s.clone(), v.clone());
        }
    }
    inst
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HanauskeParams {
    pub r: Rational,
    pub alpha: Rational,
    pub beta: Rational,
    pub delta: Rational,
}

impl HanauskeParams {
    pub fn new(r: Rational, alpha: Rational, beta: Rational, delta: Rational) -> Self {
        HanauskeParams {
            r,
            alpha,
            beta,
            delta,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        domain(
            !self.alpha.is_negative() && !self.beta.is_negative(),
            "reputation changes alpha and beta must be nonnegative",
        )
    }
}

/// Symmetric researcher game, strategies O (open access) and ∅ (not).
pub fn hanauske_game(params: &HanauskeParams) -> Result<NormalFormGame, ModelError> {
    params.validate()?;
    let HanauskeParams {
        r,
        alpha,
        beta,
        delta,
    } = params;
    let both = r + delta;
    let loser = r - alpha;
    let winner = r + beta;
    Ok(NormalFormGame::from_labels(
        "A",
        "B",
        &["O", "∅"],
        &["O", "∅"],
        vec![
            vec![(both.clone(), both), (loser.clone(), winner.clone())],
            vec![(winner, loser), (r.clone(), r.clone())],
        ],
    )
    .expect("2x2 layout"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HanauskeRegime {
    DefectDominant,
    StagHunt,
    Degenerate,
}

pub fn hanauske_regime(params: &HanauskeParams) -> Result<HanauskeRegime, ModelError> {
    params.validate()?;
    Ok(
        if !params.alpha.is_positive() || params.beta == params.delta {
            HanauskeRegime::Degenerate
        } else if params.beta > params.delta {
            HanauskeRegime::DefectDominant
        } else {
            HanauskeRegime::StagHunt
        },
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HabermannParams {
    /// Author reputation.
    #[serde(rename = "R")]
    pub big_r: Rational,
    /// Reputation lost by publishing open access.
    pub r: Rational,
    #[serde(rename = "I")]
    pub i: Rational,
    /// Impact lost under the traditional model.
    pub tau: Rational,
    /// Open-access expenditure, shared when both go open.
    #[serde(rename = "L")]
    pub l: Rational,
    /// Subscription or APC price.
    #[serde(rename = "G")]
    pub g: Rational,
    /// Excess profit of expensive traditional journals.
    #[serde(rename = "P")]
    pub p: Rational,
}

impl HabermannParams {
    pub fn from_integers(big_r: i64, r: i64, i: i64, tau: i64, l: i64, g: i64, p: i64) -> Self {
        HabermannParams {
            big_r: big_r.into(),
            r: r.into(),
            i: i.into(),
            tau: tau.into(),
            l: l.into(),
            g: g.into(),
            p: p.into(),
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let zero = Rational::zero();
        domain(self.big_r > zero, "R > 0 required")?;
        domain(self.r > zero && self.r < self.big_r, "0 < r < R required")?;
        domain(self.tau > zero && self.tau < self.i, "0 < tau < I required")?;
        domain(self.l > zero, "L > 0 required")?;
        domain(self.g > zero, "G > 0 required")?;
        domain(self.p > zero, "P > 0 required")
    }
}

/// Author (rows s1 = open, s2 = traditional) against publisher
/// (columns p1 = open, p2 = traditional).
pub fn habermann_game(params: &HabermannParams) -> Result<NormalFormGame, ModelError> {
    params.validate()?;
    let HabermannParams {
        big_r,
        r,
        i,
        tau,
        l,
        g,
        p,
    } = params;
    let half_l = l * &half();
    let open_rep = big_r - r;
    let closed_impact = i - tau;
    let author = [
        &(&(&open_rep + i) - &half_l) - g,
        &(&open_rep + i) - l,
        &(big_r + &closed_impact) - g,
        &(&(big_r + &closed_impact) - g) - p,
    ];
    let publisher = [
        &(g + i) - &half_l,
        Rational::zero(),
        &(g + &closed_impact) - l,
        &(g + &closed_impact) + p,
    ];
    let [a11, a12, a21, a22] = author;
    let [b11, b12, b21, b22] = publisher;
    Ok(NormalFormGame::from_labels(
        "author",
        "publisher",
        &["s1", "s2"],
        &["p1", "p2"],
        vec![vec![(a11, b11), (a12, b12)], vec![(a21, b21), (a22, b22)]],
    )
    .expect("2x2 layout"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AuthorType {
    H,
    L,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AuthorStrategy {
    /// Open access, paying the APC.
    A,
    /// Traditional.
    T,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BesancenotParams {
    /// Share of high-quality papers, in (0, 1/2).
    pub mu: Rational,
    pub theta_h: Rational,
    pub theta_l: Rational,
    /// Weight on perceived quality, in [0, 1/2).
    pub lambda_w: Rational,
    pub delta_a: Rational,
    pub delta_t: Rational,
    /// APC price.
    pub c: Rational,
    /// Frequency of open-access authors, in [0, 1].
    pub phi: Rational,
    pub belief_a: Option<Rational>,
    pub belief_t: Option<Rational>,
}

impl BesancenotParams {
    pub fn validate(&self) -> Result<(), ModelError> {
        let zero = Rational::zero();
        domain(self.mu > zero && self.mu < half(), "0 < mu < 1/2 required")?;
        domain(
            self.theta_h > self.theta_l && self.theta_l > zero,
            "theta_H > theta_L > 0 required",
        )?;
        domain(
            !self.lambda_w.is_negative() && self.lambda_w < half(),
            "0 <= lambda < 1/2 required",
        )?;
        domain(
            self.delta_a > self.delta_t && self.delta_t > zero,
            "delta_A > delta_T > 0 required",
        )?;
        domain(!self.c.is_negative(), "c >= 0 required")?;
        domain(
            !self.phi.is_negative() && self.phi <= Rational::one(),
            "0 <= phi <= 1 required",
        )
    }

    /// Expected quality of the traditional pool when everyone stays there.
    pub fn expected_quality(&self) -> Rational {
        &(&self.mu * &self.theta_h) + &(&(&Rational::one() - &self.mu) * &self.theta_l)
    }
}

/// `delta_S [(1 - lambda) theta_i + lambda E(theta | S)] - [S = A] c`.
pub fn besancenot_utility(
    params: &BesancenotParams,
    author: AuthorType,
    strategy: AuthorStrategy,
) -> Result<Rational, ModelError> {
    params.validate()?;
    let theta = match author {
        AuthorType::H => &params.theta_h,
        AuthorType::L => &params.theta_l,
    };
    let (readership, belief, fee) = match strategy {
        AuthorStrategy::A => (&params.delta_a, &params.belief_a, params.c.clone()),
        AuthorStrategy::T => (&params.delta_t, &params.belief_t, Rational::zero()),
    };
    let belief = belief.as_ref().ok_or_else(|| {
        ModelError::DomainError(format!("belief for strategy {strategy:?} not supplied"))
    })?;
    let quality = &(&(&Rational::one() - &params.lambda_w) * theta) + &(&params.lambda_w * belief);
    Ok(&(readership * &quality) - &fee)
}

/// Publisher revenue at equilibrium `id` (1 separating, 2 pooling on OA,
/// 3 pooling on traditional, 4 and 5 hybrid). Id 5 is evaluated with the
/// `(1 + phi)` factor unless `as_corrected` selects `(1 - phi)`.
pub fn besancenot_revenue(
    params: &BesancenotParams,
    id: u8,
    as_corrected: bool,
) -> Result<Rational, ModelError> {
    params.validate()?;
    let one = Rational::one();
    let BesancenotParams {
        mu,
        theta_h,
        theta_l,
        lambda_w,
        delta_a,
        delta_t,
        c,
        phi,
        ..
    } = params;
    Ok(match id {
        1 => &(c * mu) + &(&(&one - mu) * theta_l),
        2 => c.clone(),
        3 => params.expected_quality(),
        4 => {
            let denom = c - &(&(delta_a - delta_t) * theta_l);
            let ratio = (theta_l - c).checked_div(&denom).ok_or_else(|| {
                ModelError::DivisionByZero("c = (delta_A - delta_T) theta_L".into())
            })?;
            let spread = &(&(&(mu * lambda_w) * delta_a) * &(theta_h - theta_l)) * &ratio;
            theta_l - &spread
        }
        5 => {
            let weight = if as_corrected { &one - phi } else { &one + phi };
            &(phi * c) + &(&weight * &params.expected_quality())
        }
        other => return Err(ModelError::UnknownEquilibrium(other)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum JournalType {
    Leading,
    SpecializedGood,
    SecondTier,
}

/// Equilibria each journal type prefers.
pub fn besancenot_preferences(journal: JournalType) -> BTreeSet<u8> {
    match journal {
        JournalType::Leading => BTreeSet::from([1]),
        JournalType::SpecializedGood => BTreeSet::from([1, 2]),
        JournalType::SecondTier => BTreeSet::from([1, 3]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{Player, StrategyProfile};
    use crate::ordinal::linear_extensions;
    use crate::rational::rat;

    fn primitives() -> PublishingPrimitives {
        PublishingPrimitives {
            p_oa: rat(10, 1),
            p_c: rat(6, 1),
            a_oa: rat(10, 1),
            a_c: rat(6, 1),
            lambda_share: rat(1, 4),
            impact_oa: rat(5, 1),
            impact_c: rat(3, 1),
            impact_h: rat(5, 1),
            notoriety_note: String::new(),
            cost_oa: rat(3, 1),
            cost_c: rat(4, 1),
            cost_h: rat(9, 1),
        }
    }

    #[test]
    fn institution_utilities() {
        let p = primitives();
        assert_eq!(
            institution_utility(&p, BusinessModel::OpenAccess)
                .unwrap()
                .value,
            rat(22, 1)
        );
        let h = institution_utility(&p, BusinessModel::Hybrid).unwrap();
        assert_eq!(h.value, rat(10, 1));
        // OA 22 > C 11 > H 10: consistent.
        assert_eq!(h.warning, None);
        let cheap_hybrid = PublishingPrimitives {
            cost_h: rat(5, 1),
            ..p
        };
        assert!(institution_utility(&cheap_hybrid, BusinessModel::Hybrid)
            .unwrap()
            .warning
            .is_some());
    }

    #[test]
    fn primitives_domain() {
        let bad = PublishingPrimitives {
            lambda_share: rat(1, 2),
            ..primitives()
        };
        assert!(matches!(bad.validate(), Err(ModelError::DomainError(_))));
        let bad = PublishingPrimitives {
            cost_oa: rat(5, 1),
            ..primitives()
        };
        assert!(bad.validate().is_err());
        let (oa, c, h) =
            PublishingPrimitives::costs_from_components(&rat(2, 1), &rat(3, 1), &rat(1, 2));
        assert_eq!((oa, c, h), (rat(2, 1), rat(3, 1), rat(4, 1)));
    }

    fn ledger(price_oa: i64) -> PublisherLedger {
        let line = |sub: i64, publ: i64, price: i64| ModelLine {
            submissions: sub.into(),
            published: publ.into(),
            price: price.into(),
        };
        PublisherLedger {
            journals: BTreeMap::from([(
                "j".to_string(),
                JournalRecord {
                    fixed_cost: rat(50, 1),
                    unit_variable_cost: rat(1, 1),
                    lines: BTreeMap::from([
                        (BusinessModel::OpenAccess, line(150, 100, price_oa)),
                        (BusinessModel::Subscription, line(150, 100, 3)),
                        (BusinessModel::Hybrid, line(150, 100, 4)),
                    ]),
                },
            )]),
        }
    }

    #[test]
    fn profit_examples() {
        assert_eq!(
            publisher_profit(&ledger(2), "j", BusinessModel::OpenAccess).unwrap(),
            rat(0, 1)
        );
        assert_eq!(
            publisher_profit(&ledger(0), "j", BusinessModel::OpenAccess).unwrap(),
            rat(-200, 1)
        );
        let mut empty = ledger(2);
        empty.journals.get_mut("j").unwrap().lines.clear();
        assert_eq!(
            publisher_profit(&empty, "j", BusinessModel::Hybrid).unwrap(),
            rat(-50, 1)
        );
        assert!(matches!(
            publisher_profit(&ledger(2), "x", BusinessModel::Hybrid),
            Err(ModelError::UnknownJournal(_))
        ));
    }

    #[test]
    fn publisher_utility_and_warning() {
        let u =
            publisher_utility(&ledger(2), "j", &primitives(), BusinessModel::OpenAccess).unwrap();
        assert_eq!(u.value, rat(5, 1));
        assert_eq!(u.warning, None);
        let u =
            publisher_utility(&ledger(9), "j", &primitives(), BusinessModel::OpenAccess).unwrap();
        assert!(u.warning.is_some());
    }

    #[test]
    fn canonical_publishing_values() {
        let inst = canonical_publishing_instantiation();
        let expect = [
            ("alpha", 6),
            ("alpha_star", 5),
            ("omega_star", 5),
            ("beta_star", 4),
            ("beta", 3),
            ("omega", 2),
            ("omega_p", 8),
            ("beta_ppp", 7),
            ("beta_pp", 6),
            ("beta_p", 5),
            ("alpha_pp", 4),
            ("alpha_p", 3),
            ("omega_pp", 2),
        ];
        for (s, v) in expect {
            assert_eq!(inst.value(s), Some(&rat(v, 1)), "{s}");
        }
        let g = publishing_game_3x3(&inst).unwrap();
        assert_eq!(
            g,
            NormalFormGame::from_labels(
                "institution",
                "publisher",
                &["OA", "C", "H"],
                &["OA", "C", "H"],
                [
                    [(6, 3), (5, 0), (5, 2)],
                    [(6, 6), (3, 5), (4, 7)],
                    [(5, 8), (5, 0), (2, 8)]
                ]
                .iter()
                .map(|r| r.iter().map(|&(a, b)| (a.into(), b.into())).collect())
                .collect()
            )
            .unwrap()
        );
        let small = publishing_game_2x2(&inst).unwrap();
        assert_eq!(small, g.subgame(&[0, 2], &[0, 2]).unwrap());
    }

    #[test]
    fn layout_cells_pin_symbols() {
        let g = publishing_symbolic_3x3();
        assert_eq!(g.cells[0][1], (Term::sym("alpha_star"), Term::lit(0)));
        assert_eq!(g.cells[2][1], (Term::sym("alpha_star"), Term::lit(0)));
        assert_eq!(
            g.cells[1][2],
            (Term::sym("beta_star"), Term::sym("beta_ppp"))
        );
        assert!(!g
            .symbols(Player::Col)
            .contains(&crate::ordinal::PayoffSymbol::new("alpha_pp")));
    }

    #[test]
    fn missing_and_degenerate_instantiations() {
        let mut inst = canonical_publishing_instantiation();
        let mut partial = Instantiation::new();
        for (s, v) in inst.iter() {
            if s.as_str() != "beta_ppp" {
                partial.insert(s.clone(), v.clone());
            }
        }
        assert_eq!(
            publishing_game_3x3(&partial),
            Err(ModelError::MissingSymbol("beta_ppp".into()))
        );
        for s in PublishingPayoffSymbols::all() {
            inst.set(s, 0);
        }
        let zero = publishing_game_2x2(&inst).unwrap();
        assert!(zero
            .profiles()
            .all(|p| zero.cell(p) == &(Rational::zero(), Rational::zero())));
        for s in PublishingPayoffSymbols::all() {
            inst.set(s, 0);
        }
    }

    #[test]
    fn all_equal_symbols_make_every_profile_nash() {
        let mut inst = Instantiation::new();
        for s in PublishingPayoffSymbols::all() {
            inst.set(s, 0);
        }
        let g = publishing_game_3x3(&inst).unwrap();
        assert_eq!(g.pure_nash().len(), 9);
    }

    #[test]
    fn default_constraint_extension_counts() {
        let publisher: BTreeSet<_> = PublishingPayoffSymbols::PUBLISHER
            .iter()
            .map(|s| crate::ordinal::PayoffSymbol::new(*s))
            .collect();
        let mut on = default_constraints(true).restricted_to(&publisher);
        on.add_free_literal(Rational::zero());
        assert_eq!(linear_extensions(&on, 100).unwrap().len(), 1);
        let mut off = default_constraints(false).restricted_to(&publisher);
        off.add_free_literal(Rational::zero());
        assert_eq!(linear_extensions(&off, 100).unwrap().len(), 8);
        assert!(default_constraints(true).validate().is_ok());
        assert!(default_constraints(false).validate().is_ok());
    }

    #[test]
    fn hanauske_games() {
        let p = HanauskeParams::new(rat(4, 1), rat(1, 1), rat(2, 1), rat(1, 1));
        let g = hanauske_game(&p).unwrap();
        assert_eq!(
            g,
            NormalFormGame::from_labels(
                "A",
                "B",
                &["O", "∅"],
                &["O", "∅"],
                vec![
                    vec![(5.into(), 5.into()), (3.into(), 6.into())],
                    vec![(6.into(), 3.into()), (4.into(), 4.into())],
                ]
            )
            .unwrap()
        );
        assert_eq!(hanauske_regime(&p).unwrap(), HanauskeRegime::DefectDominant);
        assert_eq!(g.pure_nash(), vec![StrategyProfile::new(1, 1)]);

        let stag = HanauskeParams::new(rat(4, 1), rat(1, 1), rat(1, 1), rat(2, 1));
        let g = hanauske_game(&stag).unwrap();
        assert_eq!(g.cell(StrategyProfile::new(0, 0)), &(rat(6, 1), rat(6, 1)));
        assert_eq!(g.cell(StrategyProfile::new(0, 1)), &(rat(3, 1), rat(5, 1)));
        assert_eq!(hanauske_regime(&stag).unwrap(), HanauskeRegime::StagHunt);
        assert_eq!(
            g.pure_nash(),
            vec![StrategyProfile::new(0, 0), StrategyProfile::new(1, 1)]
        );

        let flat = HanauskeParams::new(rat(4, 1), rat(0, 1), rat(0, 1), rat(0, 1));
        let g = hanauske_game(&flat).unwrap();
        assert!(g.profiles().all(|p| g.cell(p) == &(rat(4, 1), rat(4, 1))));
        assert_eq!(hanauske_regime(&flat).unwrap(), HanauskeRegime::Degenerate);
        let tie = HanauskeParams::new(rat(4, 1), rat(1, 1), rat(2, 1), rat(2, 1));
        assert_eq!(hanauske_regime(&tie).unwrap(), HanauskeRegime::Degenerate);
        let bad = HanauskeParams::new(rat(4, 1), rat(-1, 1), rat(2, 1), rat(2, 1));
        assert!(hanauske_game(&bad).is_err());
    }

    #[test]
    fn habermann_default_game() {
        let g = habermann_game(&HabermannParams::from_integers(10, 2, 5, 1, 2, 3, 4)).unwrap();
        let cells: Vec<(Rational, Rational)> = g.profiles().map(|p| g.cell(p).clone()).collect();
        let expect: Vec<(Rational, Rational)> = [(9, 7), (11, 0), (11, 5), (7, 11)]
            .iter()
            .map(|&(a, b)| (a.into(), b.into()))
            .collect();
        assert_eq!(cells, expect);
        assert!(g.pure_nash().is_empty());
        let bad = HabermannParams {
            l: Rational::zero(),
            ..HabermannParams::from_integers(10, 2, 5, 1, 2, 3, 4)
        };
        assert!(matches!(
            habermann_game(&bad),
            Err(ModelError::DomainError(_))
        ));
    }

    fn besancenot() -> BesancenotParams {
        BesancenotParams {
            mu: rat(3, 10),
            theta_h: rat(2, 1),
            theta_l: rat(1, 1),
            lambda_w: rat(1, 4),
            delta_a: rat(2, 1),
            delta_t: rat(1, 1),
            c: rat(1, 2),
            phi: rat(1, 2),
            belief_a: Some(rat(2, 1)),
            belief_t: Some(rat(1, 1)),
        }
    }

    #[test]
    fn besancenot_utility_examples() {
        let p = besancenot();
        assert_eq!(
            besancenot_utility(&p, AuthorType::H, AuthorStrategy::A).unwrap(),
            rat(7, 2)
        );
        // Traditional: no APC whatever c is.
        let t = besancenot_utility(&p, AuthorType::L, AuthorStrategy::T).unwrap();
        let pricey = BesancenotParams {
            c: rat(100, 1),
            ..p.clone()
        };
        assert_eq!(
            besancenot_utility(&pricey, AuthorType::L, AuthorStrategy::T).unwrap(),
            t
        );
        let no_weight = BesancenotParams {
            lambda_w: Rational::zero(),
            ..p.clone()
        };
        let other_belief = BesancenotParams {
            belief_a: Some(rat(9, 1)),
            ..no_weight.clone()
        };
        assert_eq!(
            besancenot_utility(&no_weight, AuthorType::H, AuthorStrategy::A).unwrap(),
            besancenot_utility(&other_belief, AuthorType::H, AuthorStrategy::A).unwrap()
        );
        let unknown = BesancenotParams {
            belief_a: None,
            ..p
        };
        assert!(besancenot_utility(&unknown, AuthorType::H, AuthorStrategy::A).is_err());
    }

    #[test]
    fn besancenot_revenue_examples() {
        let p = BesancenotParams {
            c: rat(2, 1),
            ..besancenot()
        };
        assert_eq!(besancenot_revenue(&p, 1, false).unwrap(), rat(13, 10));
        assert_eq!(besancenot_revenue(&p, 3, false).unwrap(), rat(13, 10));
        let q = BesancenotParams {
            c: rat(7, 2),
            ..besancenot()
        };
        assert_eq!(besancenot_revenue(&q, 2, false).unwrap(), rat(7, 2));
        // c = (delta_A - delta_T) theta_L = 1 hits the pole.
        let pole = BesancenotParams {
            c: rat(1, 1),
            ..besancenot()
        };
        assert!(matches!(
            besancenot_revenue(&pole, 4, false),
            Err(ModelError::DivisionByZero(_))
        ));
        assert!(matches!(
            besancenot_revenue(&p, 6, false),
            Err(ModelError::UnknownEquilibrium(6))
        ));
        // phi = 1/2, c = 2, E = 13/10: printed 1 + 39/20, corrected 1 + 13/20.
        assert_eq!(besancenot_revenue(&p, 5, false).unwrap(), rat(59, 20));
        assert_eq!(besancenot_revenue(&p, 5, true).unwrap(), rat(33, 20));
    }

    #[test]
    fn journal_preferences() {
        assert_eq!(
            besancenot_preferences(JournalType::Leading),
            BTreeSet::from([1])
        );
        assert_eq!(
            besancenot_preferences(JournalType::SpecializedGood),
            BTreeSet::from([1, 2])
        );
        assert_eq!(
            besancenot_preferences(JournalType::SecondTier),
            BTreeSet::from([1, 3])
        );
    }
}
