//! Games whose payoffs are known only up to order.
//!
//! An [`OrderingConstraintSet`] collects relations between payoff symbols and
//! literal anchors. Its linear extensions are the complete rankings it allows;
//! since dominance, best responses and Pareto comparisons only look at the
//! order of payoffs, checking one representative per ranking settles an
//! ordinal claim for every admissible payoff assignment.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::game::{
    DominanceKind, GameError, IedsPolicy, NormalFormGame, ParetoStatus, Player, StrategyProfile,
};
use crate::mixed;
use crate::rational::Rational;

/// Default cap on enumerated linear extensions.
pub const DEFAULT_EXTENSION_LIMIT: usize = 100_000;

/// Instantiations drawn per ranking when a predicate is not order-determined.
const SAMPLES_PER_EXTENSION: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrdinalError {
    #[error("ordering cycle: {}", .0.join(" > "))]
    CycleDetected(Vec<String>),
    #[error("`{0}` and `{1}` are declared equal and strictly ordered")]
    EqualityStrictConflict(String, String),
    #[error("more than {0} linear extensions")]
    ExtensionLimitExceeded(usize),
    #[error("too many weak relations to enumerate ({0})")]
    TooManyWeakRelations(usize),
    #[error("no value for payoff symbol `{0}`")]
    MissingSymbol(String),
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("predicate does not fit the game: {0}")]
    NotWellFormed(String),
    #[error(transparent)]
    Game(#[from] GameError),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PayoffSymbol(String);

impl PayoffSymbol {
    pub fn new(name: impl Into<String>) -> Self {
        let name = name.into();
        assert!(is_identifier(&name), "invalid payoff symbol `{name}`");
        PayoffSymbol(name)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for PayoffSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A payoff cell entry or constraint operand.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Symbol(PayoffSymbol),
    Literal(Rational),
}

impl Term {
    pub fn sym(name: &str) -> Term {
        Term::Symbol(PayoffSymbol::new(name))
    }

    pub fn lit(value: impl Into<Rational>) -> Term {
        Term::Literal(value.into())
    }

    fn value_in(&self, inst: &Instantiation) -> Result<Rational, OrdinalError> {
        match self {
            Term::Literal(v) => Ok(v.clone()),
            Term::Symbol(s) => inst
                .get(s)
                .cloned()
                .ok_or_else(|| OrdinalError::MissingSymbol(s.to_string())),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Symbol(s) => write!(f, "{s}"),
            Term::Literal(v) => write!(f, "{v}"),
        }
    }
}

impl FromStr for Term {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if is_identifier(t) {
            Ok(Term::Symbol(PayoffSymbol(t.to_string())))
        } else {
            t.parse::<Rational>()
                .map(Term::Literal)
                .map_err(|_| format!("`{t}` is neither a symbol nor a rational literal"))
        }
    }
}

impl Serialize for Term {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Int(n) => Ok(Term::Literal(n.into())),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Relation {
    Greater,
    AtLeast,
    Equal,
}

impl Relation {
    fn token(self) -> &'static str {
        match self {
            Relation::Greater => ">",
            Relation::AtLeast => ">=",
            Relation::Equal => "~=",
        }
    }

    fn holds(self, a: &Rational, b: &Rational) -> bool {
        match self {
            Relation::Greater => a > b,
            Relation::AtLeast => a >= b,
            Relation::Equal => a == b,
        }
    }
}

/// `left REL right`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Constraint {
    pub left: Term,
    pub rel: Relation,
    pub right: Term,
}

impl Constraint {
    pub fn new(left: Term, rel: Relation, right: Term) -> Self {
        Constraint { left, rel, right }
    }

    pub fn gt(a: &str, b: &str) -> Self {
        Constraint::new(Term::sym(a), Relation::Greater, Term::sym(b))
    }

    pub fn eq(a: &str, b: &str) -> Self {
        Constraint::new(Term::sym(a), Relation::Equal, Term::sym(b))
    }

    pub fn is_satisfied_by(&self, inst: &Instantiation) -> Result<bool, OrdinalError> {
        Ok(self
            .rel
            .holds(&self.left.value_in(inst)?, &self.right.value_in(inst)?))
    }

    fn symbols(&self) -> impl Iterator<Item = &PayoffSymbol> {
        [&self.left, &self.right]
            .into_iter()
            .filter_map(|t| match t {
                Term::Symbol(s) => Some(s),
                Term::Literal(_) => None,
            })
    }

    fn literals(&self) -> impl Iterator<Item = &Rational> {
        [&self.left, &self.right]
            .into_iter()
            .filter_map(|t| match t {
                Term::Literal(v) => Some(v),
                Term::Symbol(_) => None,
            })
    }

    fn is_anchor(&self) -> bool {
        self.literals().count() == 1
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.left, self.rel.token(), self.right)
    }
}

impl Serialize for Constraint {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl FromStr for Constraint {
    type Err = OrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut found = parse_relation_line(s, 1)?;
        if found.len() != 1 {
            return Err(OrdinalError::Parse {
                line: 1,
                column: 1,
                message: "expected a single relation".into(),
            });
        }
        Ok(found.remove(0))
    }
}

impl<'de> Deserialize<'de> for Constraint {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Serialized form: relation lines plus every registered symbol.
#[derive(Serialize, Deserialize)]
struct ConstraintSetRepr {
    relations: Vec<String>,
    #[serde(default)]
    symbols: Vec<String>,
    #[serde(default)]
    free_literals: Vec<Rational>,
}

impl Serialize for OrderingConstraintSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ConstraintSetRepr {
            relations: self.to_lines(),
            symbols: self.symbols.iter().map(|s| s.to_string()).collect(),
            free_literals: self.free_literals.iter().cloned().collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for OrderingConstraintSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = ConstraintSetRepr::deserialize(deserializer)?;
        let mut set = OrderingConstraintSet::parse_lines(&repr.relations)
            .map_err(serde::de::Error::custom)?;
        for s in repr.symbols {
            if !is_identifier(&s) {
                return Err(serde::de::Error::custom(format!(
                    "`{s}` is not a symbol name"
                )));
            }
            set.add_symbol(PayoffSymbol::new(s));
        }
        for v in repr.free_literals {
            set.add_free_literal(v);
        }
        Ok(set)
    }
}

/// Symbols, order relations between them, and literal anchors.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OrderingConstraintSet {
    symbols: BTreeSet<PayoffSymbol>,
    constraints: BTreeSet<Constraint>,
    /// Literal nodes that take part in rankings without being constrained.
    free_literals: BTreeSet<Rational>,
}

impl OrderingConstraintSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_symbol(&mut self, s: PayoffSymbol) -> &mut Self {
        self.symbols.insert(s);
        self
    }

    pub fn add(&mut self, c: Constraint) -> &mut Self {
        for s in c.symbols() {
            self.symbols.insert(s.clone());
        }
        self.constraints.insert(c);
        self
    }

    pub fn remove(&mut self, c: &Constraint) -> bool {
        self.constraints.remove(c)
    }

    pub fn add_free_literal(&mut self, v: Rational) -> &mut Self {
        self.free_literals.insert(v);
        self
    }

    /// `a > b > c ...` as consecutive strict relations.
    pub fn add_chain(&mut self, chain: &[&str]) -> &mut Self {
        for w in chain.windows(2) {
            self.add(Constraint::gt(w[0], w[1]));
        }
        self
    }

    pub fn symbols(&self) -> &BTreeSet<PayoffSymbol> {
        &self.symbols
    }

    pub fn constraints(&self) -> impl Iterator<Item = &Constraint> {
        self.constraints.iter()
    }

    pub fn free_literals(&self) -> &BTreeSet<Rational> {
        &self.free_literals
    }

    pub fn contains(&self, c: &Constraint) -> bool {
        self.constraints.contains(c)
    }

    /// Strict symbol-to-symbol relations `(a, b)` meaning `a > b`.
    pub fn strict_relations(&self) -> Vec<(PayoffSymbol, PayoffSymbol)> {
        self.constraints
            .iter()
            .filter_map(|c| match (&c.left, c.rel, &c.right) {
                (Term::Symbol(a), Relation::Greater, Term::Symbol(b)) => {
                    Some((a.clone(), b.clone()))
                }
                _ => None,
            })
            .collect()
    }

    pub fn equalities(&self) -> Vec<(PayoffSymbol, PayoffSymbol)> {
        self.constraints
            .iter()
            .filter_map(|c| match (&c.left, c.rel, &c.right) {
                (Term::Symbol(a), Relation::Equal, Term::Symbol(b)) => Some((a.clone(), b.clone())),
                _ => None,
            })
            .collect()
    }

    /// Relations between a symbol and a literal.
    pub fn anchors(&self) -> Vec<&Constraint> {
        self.constraints.iter().filter(|c| c.is_anchor()).collect()
    }

    /// Parses one relation (or a chain such as `a > b ~= c`) per line.
    /// `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, OrdinalError> {
        let mut set = OrderingConstraintSet::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            for c in parse_relation_line(line, lineno + 1)? {
                set.add(c);
            }
        }
        Ok(set)
    }

    /// Parses a list of lines, as stored in scenario files.
    pub fn parse_lines<S: AsRef<str>>(lines: &[S]) -> Result<Self, OrdinalError> {
        let mut set = OrderingConstraintSet::new();
        for (i, l) in lines.iter().enumerate() {
            let line = l.as_ref().split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            for c in parse_relation_line(line, i + 1)? {
                set.add(c);
            }
        }
        Ok(set)
    }

    pub fn to_lines(&self) -> Vec<String> {
        self.constraints.iter().map(|c| c.to_string()).collect()
    }

    /// `Ok` iff equalities and strict relations are compatible and the
    /// strict order is acyclic.
    pub fn validate(&self) -> Result<(), OrdinalError> {
        PartialOrder::build(self).map(|_| ())
    }

    /// Every symbol-to-symbol equality replaced by one of the two strict
    /// orders; used to probe how much a claim leans on exact ties.
    pub fn split_equalities(&self) -> Vec<OrderingConstraintSet> {
        let eqs: Vec<Constraint> = self
            .constraints
            .iter()
            .filter(|c| c.rel == Relation::Equal && !c.is_anchor())
            .cloned()
            .collect();
        (0..1usize << eqs.len())
            .map(|mask| {
                let mut set = self.clone();
                for (i, c) in eqs.iter().enumerate() {
                    set.remove(c);
                    let (a, b) = if mask & (1 << i) == 0 {
                        (c.left.clone(), c.right.clone())
                    } else {
                        (c.right.clone(), c.left.clone())
                    };
                    set.add(Constraint::new(a, Relation::Greater, b));
                }
                set
            })
            .collect()
    }

    /// The part of the set that mentions only the given symbols.
    pub fn restricted_to(&self, symbols: &BTreeSet<PayoffSymbol>) -> OrderingConstraintSet {
        let mut set = OrderingConstraintSet::new();
        for s in symbols.intersection(&self.symbols) {
            set.add_symbol(s.clone());
        }
        for c in &self.constraints {
            let mut syms = c.symbols().peekable();
            if syms.peek().is_some() && c.symbols().all(|s| symbols.contains(s)) {
                set.add(c.clone());
            }
        }
        set
    }
}

impl fmt::Display for OrderingConstraintSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.constraints {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

fn parse_relation_line(line: &str, lineno: usize) -> Result<Vec<Constraint>, OrdinalError> {
    let err = |column: usize, message: String| OrdinalError::Parse {
        line: lineno,
        column,
        message,
    };
    let mut terms: Vec<(usize, Term)> = Vec::new();
    let mut ops: Vec<(usize, Relation)> = Vec::new();
    let bytes = line.as_bytes();
    let mut i = 0;
    let mut expect_term = true;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if expect_term {
            let start = i;
            while i < bytes.len()
                && !(bytes[i] as char).is_whitespace()
                && !matches!(bytes[i], b'>' | b'~')
            {
                i += 1;
            }
            if start == i {
                return Err(err(
                    start + 1,
                    format!("expected a symbol or literal, found `{c}`"),
                ));
            }
            let tok = &line[start..i];
            let term = tok.parse::<Term>().map_err(|m| err(start + 1, m))?;
            terms.push((start + 1, term));
            expect_term = false;
        } else {
            let rest = &line[i..];
            let (rel, len) = if rest.starts_with(">=") {
                (Relation::AtLeast, 2)
            } else if rest.starts_with("~=") {
                (Relation::Equal, 2)
            } else if rest.starts_with('>') {
                (Relation::Greater, 1)
            } else {
                return Err(err(i + 1, "expected `>`, `>=` or `~=`".into()));
            };
            ops.push((i + 1, rel));
            i += len;
            expect_term = true;
        }
    }
    if terms.len() < 2 || expect_term {
        return Err(err(line.len() + 1, "incomplete relation".into()));
    }
    Ok(ops
        .iter()
        .enumerate()
        .map(|(k, &(_, rel))| Constraint::new(terms[k].1.clone(), rel, terms[k + 1].1.clone()))
        .collect())
}

/// One position of a ranking: tied symbols, possibly pinned to a literal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Level {
    pub symbols: Vec<PayoffSymbol>,
    pub literal: Option<Rational>,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.symbols.iter().map(|s| s.to_string()).collect();
        if let Some(v) = &self.literal {
            parts.push(v.to_string());
        }
        f.write_str(&parts.join(" ~= "))
    }
}

/// A complete ranking, highest level first, strictly decreasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinearExtension {
    pub levels: Vec<Level>,
}

impl fmt::Display for LinearExtension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.levels.iter().map(|l| l.to_string()).collect();
        f.write_str(&parts.join(" > "))
    }
}

impl LinearExtension {
    pub fn position_of(&self, s: &PayoffSymbol) -> Option<usize> {
        self.levels.iter().position(|l| l.symbols.contains(s))
    }

    /// Ranking that `inst` induces on the same symbols and literals.
    pub fn induced_by(&self, inst: &Instantiation) -> Result<LinearExtension, OrdinalError> {
        let mut by_value: BTreeMap<Rational, Level> = BTreeMap::new();
        for level in &self.levels {
            for s in &level.symbols {
                let v = inst
                    .get(s)
                    .ok_or_else(|| OrdinalError::MissingSymbol(s.to_string()))?;
                by_value
                    .entry(v.clone())
                    .or_insert_with(|| Level {
                        symbols: vec![],
                        literal: None,
                    })
                    .symbols
                    .push(s.clone());
            }
            if let Some(v) = &level.literal {
                by_value
                    .entry(v.clone())
                    .or_insert_with(|| Level {
                        symbols: vec![],
                        literal: None,
                    })
                    .literal = Some(v.clone());
            }
        }
        let levels = by_value
            .into_iter()
            .rev()
            .map(|(_, mut l)| {
                l.symbols.sort();
                l
            })
            .collect();
        Ok(LinearExtension { levels })
    }
}

/// A concrete payoff value per symbol.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Instantiation(BTreeMap<PayoffSymbol, Rational>);

impl Instantiation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, s: &PayoffSymbol) -> Option<&Rational> {
        self.0.get(s)
    }

    pub fn value(&self, name: &str) -> Option<&Rational> {
        self.0.get(&PayoffSymbol::new(name))
    }

    pub fn insert(&mut self, s: PayoffSymbol, v: Rational) {
        self.0.insert(s, v);
    }

    pub fn set(&mut self, name: &str, v: impl Into<Rational>) -> &mut Self {
        self.0.insert(PayoffSymbol::new(name), v.into());
        self
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PayoffSymbol, &Rational)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn extend(&mut self, other: Instantiation) {
        self.0.extend(other.0);
    }

    /// The first violated constraint, if any.
    pub fn check(&self, constraints: &OrderingConstraintSet) -> Result<(), OrdinalError> {
        for c in constraints.constraints() {
            if !c.is_satisfied_by(self)? {
                return Err(OrdinalError::NotWellFormed(format!(
                    "instantiation violates `{c}`"
                )));
            }
        }
        Ok(())
    }

    pub fn satisfies(&self, constraints: &OrderingConstraintSet) -> bool {
        self.check(constraints).is_ok()
    }
}

impl fmt::Display for Instantiation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
        f.write_str(&parts.join(", "))
    }
}

/// Internal node: a set of atoms forced equal.
#[derive(Debug, Clone)]
struct Node {
    symbols: Vec<PayoffSymbol>,
    literal: Option<Rational>,
}

impl Node {
    fn label(&self) -> String {
        Level {
            symbols: self.symbols.clone(),
            literal: self.literal.clone(),
        }
        .to_string()
    }
}

/// Constraint set compiled to a graph over equality classes.
#[derive(Debug, Clone)]
struct PartialOrder {
    nodes: Vec<Node>,
    strict: BTreeSet<(usize, usize)>,
    weak: BTreeSet<(usize, usize)>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

impl PartialOrder {
    fn build(set: &OrderingConstraintSet) -> Result<PartialOrder, OrdinalError> {
        let mut literals: BTreeSet<Rational> = set.free_literals.clone();
        for c in &set.constraints {
            literals.extend(c.literals().cloned());
        }
        let symbols: Vec<PayoffSymbol> = set.symbols.iter().cloned().collect();
        // Literals listed from the largest down.
        let literals: Vec<Rational> = literals.into_iter().rev().collect();
        let n_sym = symbols.len();
        let atom_of = |t: &Term| -> usize {
            match t {
                Term::Symbol(s) => symbols.binary_search(s).expect("symbol registered"),
                Term::Literal(v) => {
                    n_sym
                        + literals
                            .iter()
                            .position(|l| l == v)
                            .expect("literal registered")
                }
            }
        };
        let n_atoms = n_sym + literals.len();
        let mut uf = UnionFind::new(n_atoms);
        for c in set.constraints.iter().filter(|c| c.rel == Relation::Equal) {
            uf.union(atom_of(&c.left), atom_of(&c.right));
        }
        let atom_label = |a: usize| -> String {
            if a < n_sym {
                symbols[a].to_string()
            } else {
                literals[a - n_sym].to_string()
            }
        };
        // Two literals in one class contradict each other.
        for i in 0..literals.len() {
            for j in i + 1..literals.len() {
                if uf.find(n_sym + i) == uf.find(n_sym + j) {
                    return Err(OrdinalError::EqualityStrictConflict(
                        literals[i].to_string(),
                        literals[j].to_string(),
                    ));
                }
            }
        }
        let mut strict_atoms: Vec<(usize, usize)> = Vec::new();
        let mut weak_atoms: Vec<(usize, usize)> = Vec::new();
        for c in &set.constraints {
            let (a, b) = (atom_of(&c.left), atom_of(&c.right));
            match c.rel {
                Relation::Greater => {
                    if uf.find(a) == uf.find(b) {
                        return Err(OrdinalError::EqualityStrictConflict(
                            atom_label(a),
                            atom_label(b),
                        ));
                    }
                    strict_atoms.push((a, b));
                }
                Relation::AtLeast => weak_atoms.push((a, b)),
                Relation::Equal => {}
            }
        }
        for i in 0..literals.len() {
            for j in i + 1..literals.len() {
                strict_atoms.push((n_sym + i, n_sym + j));
            }
        }
        let mut po = PartialOrder::from_atoms(
            &mut uf,
            n_atoms,
            &symbols,
            &literals,
            &strict_atoms,
            &weak_atoms,
        );
        po.check_cycles()?;
        po.collapse_weak_cycles();
        Ok(po)
    }

    fn from_atoms(
        uf: &mut UnionFind,
        n_atoms: usize,
        symbols: &[PayoffSymbol],
        literals: &[Rational],
        strict: &[(usize, usize)],
        weak: &[(usize, usize)],
    ) -> PartialOrder {
        let n_sym = symbols.len();
        let mut node_of_root: BTreeMap<usize, usize> = BTreeMap::new();
        let mut nodes: Vec<Node> = Vec::new();
        for a in 0..n_atoms {
            let r = uf.find(a);
            let idx = *node_of_root.entry(r).or_insert_with(|| {
                nodes.push(Node {
                    symbols: vec![],
                    literal: None,
                });
                nodes.len() - 1
            });
            if a < n_sym {
                nodes[idx].symbols.push(symbols[a].clone());
            } else {
                nodes[idx].literal = Some(literals[a - n_sym].clone());
            }
        }
        let mut node = |a: usize| node_of_root[&uf.find(a)];
        let strict = strict.iter().map(|&(a, b)| (node(a), node(b))).collect();
        let weak = weak
            .iter()
            .map(|&(a, b)| (node(a), node(b)))
            .filter(|(a, b)| a != b)
            .collect();
        PartialOrder {
            nodes,
            strict,
            weak,
        }
    }

    fn successors(&self, include_weak: bool) -> Vec<Vec<(usize, bool)>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for &(a, b) in &self.strict {
            adj[a].push((b, true));
        }
        if include_weak {
            for &(a, b) in &self.weak {
                adj[a].push((b, false));
            }
        }
        for list in &mut adj {
            list.sort();
            list.dedup();
        }
        adj
    }

    /// Strongly connected components (Tarjan), as a component id per node.
    fn components(&self) -> Vec<usize> {
        let adj = self.successors(true);
        let n = self.nodes.len();
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut comp = vec![usize::MAX; n];
        let mut next_index = 0;
        let mut next_comp = 0;

        fn visit(
            v: usize,
            adj: &[Vec<(usize, bool)>],
            index: &mut [usize],
            low: &mut [usize],
            on_stack: &mut [bool],
            stack: &mut Vec<usize>,
            comp: &mut [usize],
            next_index: &mut usize,
            next_comp: &mut usize,
        ) {
            index[v] = *next_index;
            low[v] = *next_index;
            *next_index += 1;
            stack.push(v);
            on_stack[v] = true;
            for &(w, _) in &adj[v] {
                if index[w] == usize::MAX {
                    visit(
                        w, adj, index, low, on_stack, stack, comp, next_index, next_comp,
                    );
                    low[v] = low[v].min(low[w]);
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            }
            if low[v] == index[v] {
                while let Some(w) = stack.pop() {
                    on_stack[w] = false;
                    comp[w] = *next_comp;
                    if w == v {
                        break;
                    }
                }
                *next_comp += 1;
            }
        }

        for v in 0..n {
            if index[v] == usize::MAX {
                visit(
                    v,
                    &adj,
                    &mut index,
                    &mut low,
                    &mut on_stack,
                    &mut stack,
                    &mut comp,
                    &mut next_index,
                    &mut next_comp,
                );
            }
        }
        comp
    }

    fn check_cycles(&self) -> Result<(), OrdinalError> {
        let comp = self.components();
        let Some(&(a, b)) = self.strict.iter().find(|&&(a, b)| comp[a] == comp[b]) else {
            return Ok(());
        };
        // Path b -> ... -> a inside the component closes the cycle.
        let adj = self.successors(true);
        let mut prev = vec![usize::MAX; self.nodes.len()];
        let mut queue = std::collections::VecDeque::from([b]);
        prev[b] = b;
        while let Some(v) = queue.pop_front() {
            if v == a {
                break;
            }
            for &(w, _) in &adj[v] {
                if comp[w] == comp[a] && prev[w] == usize::MAX {
                    prev[w] = v;
                    queue.push_back(w);
                }
            }
        }
        let mut path = vec![a];
        let mut v = a;
        while v != b {
            v = prev[v];
            path.push(v);
        }
        path.reverse();
        let mut labels: Vec<String> = vec![self.nodes[a].label()];
        labels.extend(path.iter().map(|&v| self.nodes[v].label()));
        Err(OrdinalError::CycleDetected(labels))
    }

    /// Weak relations that close a cycle force equality.
    fn collapse_weak_cycles(&mut self) {
        let comp = self.components();
        let mut uf = UnionFind::new(self.nodes.len());
        for i in 0..self.nodes.len() {
            for j in i + 1..self.nodes.len() {
                if comp[i] == comp[j] {
                    uf.union(i, j);
                }
            }
        }
        *self = self.merged(&mut uf);
    }

    /// Nodes merged per `uf`; weak edges inside a merged node disappear.
    fn merged(&self, uf: &mut UnionFind) -> PartialOrder {
        let mut index: BTreeMap<usize, usize> = BTreeMap::new();
        let mut nodes: Vec<Node> = Vec::new();
        for i in 0..self.nodes.len() {
            let r = uf.find(i);
            let idx = *index.entry(r).or_insert_with(|| {
                nodes.push(Node {
                    symbols: vec![],
                    literal: None,
                });
                nodes.len() - 1
            });
            nodes[idx]
                .symbols
                .extend(self.nodes[i].symbols.iter().cloned());
            if self.nodes[i].literal.is_some() {
                nodes[idx].literal = self.nodes[i].literal.clone();
            }
        }
        for n in &mut nodes {
            n.symbols.sort();
        }
        let mut map = |i: usize| index[&uf.find(i)];
        let strict = self.strict.iter().map(|&(a, b)| (map(a), map(b))).collect();
        let weak = self
            .weak
            .iter()
            .map(|&(a, b)| (map(a), map(b)))
            .filter(|(a, b)| a != b)
            .collect();
        PartialOrder {
            nodes,
            strict,
            weak,
        }
    }

    /// Rankings where each weak relation is resolved as strict or tie.
    fn enumerate(&self, limit: usize) -> Result<Vec<LinearExtension>, OrdinalError> {
        let weak: Vec<(usize, usize)> = self.weak.iter().copied().collect();
        if weak.len() > 16 {
            return Err(OrdinalError::TooManyWeakRelations(weak.len()));
        }
        let mut out = Vec::new();
        for mask in 0..1usize << weak.len() {
            let mut uf = UnionFind::new(self.nodes.len());
            let mut strict: BTreeSet<(usize, usize)> = self.strict.clone();
            for (i, &(a, b)) in weak.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    uf.union(a, b);
                } else {
                    strict.insert((a, b));
                }
            }
            let resolved = PartialOrder {
                nodes: self.nodes.clone(),
                strict,
                weak: BTreeSet::new(),
            };
            // Two literals, or a strict pair, inside one merged node: infeasible.
            let mut feasible = true;
            for i in 0..self.nodes.len() {
                for j in i + 1..self.nodes.len() {
                    if uf.find(i) == uf.find(j)
                        && self.nodes[i].literal.is_some()
                        && self.nodes[j].literal.is_some()
                    {
                        feasible = false;
                    }
                }
            }
            if resolved
                .strict
                .iter()
                .any(|&(a, b)| uf.find(a) == uf.find(b))
            {
                feasible = false;
            }
            if !feasible {
                continue;
            }
            let merged = resolved.merged(&mut uf);
            if merged.check_cycles().is_err() {
                continue;
            }
            merged.topological_orders(limit, &mut out)?;
        }
        Ok(out)
    }

    fn topological_orders(
        &self,
        limit: usize,
        out: &mut Vec<LinearExtension>,
    ) -> Result<(), OrdinalError> {
        let n = self.nodes.len();
        let mut indegree = vec![0usize; n];
        let adj = self.successors(false);
        for list in &adj {
            for &(w, _) in list {
                indegree[w] += 1;
            }
        }
        // Deterministic: candidates tried in node order.
        let mut order: Vec<usize> = Vec::with_capacity(n);
        let mut used = vec![false; n];
        self.orders_rec(&adj, &mut indegree, &mut used, &mut order, limit, out)
    }

    fn orders_rec(
        &self,
        adj: &[Vec<(usize, bool)>],
        indegree: &mut [usize],
        used: &mut [bool],
        order: &mut Vec<usize>,
        limit: usize,
        out: &mut Vec<LinearExtension>,
    ) -> Result<(), OrdinalError> {
        let n = self.nodes.len();
        if order.len() == n {
            if out.len() >= limit {
                return Err(OrdinalError::ExtensionLimitExceeded(limit));
            }
            out.push(LinearExtension {
                levels: order
                    .iter()
                    .map(|&i| Level {
                        symbols: self.nodes[i].symbols.clone(),
                        literal: self.nodes[i].literal.clone(),
                    })
                    .collect(),
            });
            return Ok(());
        }
        for v in 0..n {
            if used[v] || indegree[v] != 0 {
                continue;
            }
            used[v] = true;
            order.push(v);
            for &(w, _) in &adj[v] {
                indegree[w] -= 1;
            }
            let r = self.orders_rec(adj, indegree, used, order, limit, out);
            for &(w, _) in &adj[v] {
                indegree[w] += 1;
            }
            order.pop();
            used[v] = false;
            r?;
        }
        Ok(())
    }
}

/// All complete rankings consistent with `constraints`, in a fixed order.
pub fn linear_extensions(
    constraints: &OrderingConstraintSet,
    limit: usize,
) -> Result<Vec<LinearExtension>, OrdinalError> {
    PartialOrder::build(constraints)?.enumerate(limit)
}

/// Consecutive integers by rank (the top level gets the number of levels,
/// the bottom gets 1); literal levels keep their value and the levels
/// around them are moved just enough to stay strictly ordered.
pub fn canonical_instantiation(ext: &LinearExtension) -> Instantiation {
    let n = ext.levels.len();
    let default = |i: usize| Rational::from_integer((n - i) as i64);
    let mut values: Vec<Rational> = (0..n).map(default).collect();
    let lits: Vec<usize> = (0..n)
        .filter(|&i| ext.levels[i].literal.is_some())
        .collect();
    if let (Some(&first), Some(&last)) = (lits.first(), lits.last()) {
        for &k in &lits {
            values[k] = ext.levels[k].literal.clone().expect("literal level");
        }
        if first > 0 && values[first - 1] <= values[first] {
            let shift = &values[first] + &Rational::one() - &values[first - 1];
            for v in values.iter_mut().take(first) {
                *v = &*v + &shift;
            }
        }
        for w in lits.windows(2) {
            let (a, b) = (w[0], w[1]);
            let gap_count = b - a - 1;
            let fits = gap_count == 0 || (values[a] > values[a + 1] && values[b - 1] > values[b]);
            if !fits {
                let (top, bottom) = (values[a].clone(), values[b].clone());
                let steps = Rational::from_integer(gap_count as i64 + 1);
                for j in 1..=gap_count {
                    let frac = &Rational::from_integer(j as i64) / &steps;
                    values[a + j] = &top - &(&(&top - &bottom) * &frac);
                }
            }
        }
        if last + 1 < n && values[last + 1] >= values[last] {
            for (d, v) in values.iter_mut().enumerate().skip(last + 1) {
                *v = &values_last(&ext.levels[last]) - &Rational::from_integer((d - last) as i64);
            }
        }
    }
    let mut inst = Instantiation::new();
    for (level, v) in ext.levels.iter().zip(values) {
        for s in &level.symbols {
            inst.insert(s.clone(), v.clone());
        }
    }
    inst
}

fn values_last(level: &Level) -> Rational {
    level.literal.clone().expect("literal level")
}

fn random_gap(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(1..=20), rng.gen_range(1..=5))
}

/// Random values inducing exactly `ext`.
pub fn sample_in_extension(ext: &LinearExtension, rng: &mut ChaCha8Rng) -> Instantiation {
    let n = ext.levels.len();
    let mut values: Vec<Option<Rational>> = ext.levels.iter().map(|l| l.literal.clone()).collect();
    let lits: Vec<usize> = (0..n).filter(|&i| values[i].is_some()).collect();
    if lits.is_empty() && n > 0 {
        let base = Rational::new(rng.gen_range(-40..=40), rng.gen_range(1..=4));
        values[n - 1] = Some(base);
    }
    let anchor_top = lits.first().copied().unwrap_or(n.saturating_sub(1));
    for i in (0..anchor_top).rev() {
        let below = values[i + 1].clone().expect("filled");
        values[i] = Some(&below + &random_gap(rng));
    }
    if let Some(&last) = lits.last() {
        for i in last + 1..n {
            let above = values[i - 1].clone().expect("filled");
            values[i] = Some(&above - &random_gap(rng));
        }
    }
    for w in lits.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b - a <= 1 {
            continue;
        }
        let weights: Vec<Rational> = (a..b).map(|_| random_gap(rng)).collect();
        let total: Rational = weights.iter().sum();
        let top = values[a].clone().expect("literal");
        let span = &top - values[b].as_ref().expect("literal");
        let mut acc = Rational::zero();
        for (j, w) in weights.iter().take(b - a - 1).enumerate() {
            acc += w;
            values[a + j + 1] = Some(&top - &(&span * &(&acc / &total)));
        }
    }
    let mut inst = Instantiation::new();
    for (level, v) in ext.levels.iter().zip(values) {
        let v = v.expect("every level valued");
        for s in &level.symbols {
            inst.insert(s.clone(), v.clone());
        }
    }
    inst
}

/// Random rationals along a random ranking; deterministic per seed.
pub fn sample_instantiation(
    constraints: &OrderingConstraintSet,
    seed: u64,
) -> Result<Instantiation, OrdinalError> {
    let exts = linear_extensions(constraints, DEFAULT_EXTENSION_LIMIT)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if exts.is_empty() {
        return Err(OrdinalError::NotWellFormed(
            "constraint set admits no ranking".into(),
        ));
    }
    let ext = &exts[rng.gen_range(0..exts.len())];
    Ok(sample_in_extension(ext, &mut rng))
}

/// A 2-player game whose cells hold payoff symbols or literals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicGame {
    pub row_label: String,
    pub col_label: String,
    pub row_strategies: Vec<String>,
    pub col_strategies: Vec<String>,
    pub cells: Vec<Vec<(Term, Term)>>,
}

impl SymbolicGame {
    pub fn new(
        row_label: &str,
        col_label: &str,
        row_strategies: &[&str],
        col_strategies: &[&str],
        cells: Vec<Vec<(Term, Term)>>,
    ) -> Result<Self, OrdinalError> {
        let g = SymbolicGame {
            row_label: row_label.into(),
            col_label: col_label.into(),
            row_strategies: row_strategies.iter().map(|s| s.to_string()).collect(),
            col_strategies: col_strategies.iter().map(|s| s.to_string()).collect(),
            cells,
        };
        g.check_shape()?;
        Ok(g)
    }

    pub fn check_shape(&self) -> Result<(), OrdinalError> {
        // Shape and label checks are shared with the concrete game.
        let zero = Rational::zero();
        NormalFormGame::new(
            self.row_label.clone(),
            self.col_label.clone(),
            self.row_strategies.clone(),
            self.col_strategies.clone(),
            self.cells
                .iter()
                .map(|r| r.iter().map(|_| (zero.clone(), zero.clone())).collect())
                .collect(),
        )?;
        Ok(())
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.row_strategies.len(), self.col_strategies.len())
    }

    fn player_terms(&self, player: Player) -> impl Iterator<Item = &Term> {
        self.cells.iter().flatten().map(move |(a, b)| match player {
            Player::Row => a,
            Player::Col => b,
        })
    }

    pub fn symbols(&self, player: Player) -> BTreeSet<PayoffSymbol> {
        self.player_terms(player)
            .filter_map(|t| match t {
                Term::Symbol(s) => Some(s.clone()),
                Term::Literal(_) => None,
            })
            .collect()
    }

    pub fn literals(&self, player: Player) -> BTreeSet<Rational> {
        self.player_terms(player)
            .filter_map(|t| match t {
                Term::Literal(v) => Some(v.clone()),
                Term::Symbol(_) => None,
            })
            .collect()
    }

    pub fn all_symbols(&self) -> BTreeSet<PayoffSymbol> {
        let mut s = self.symbols(Player::Row);
        s.extend(self.symbols(Player::Col));
        s
    }

    pub fn instantiate(&self, inst: &Instantiation) -> Result<NormalFormGame, OrdinalError> {
        let cells = self
            .cells
            .iter()
            .map(|r| {
                r.iter()
                    .map(|(a, b)| Ok((a.value_in(inst)?, b.value_in(inst)?)))
                    .collect::<Result<Vec<_>, OrdinalError>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(NormalFormGame::new(
            self.row_label.clone(),
            self.col_label.clone(),
            self.row_strategies.clone(),
            self.col_strategies.clone(),
            cells,
        )?)
    }

    /// Drops strategies, keeping the listed ones in order.
    pub fn restrict(&self, rows: &[usize], cols: &[usize]) -> SymbolicGame {
        SymbolicGame {
            row_label: self.row_label.clone(),
            col_label: self.col_label.clone(),
            row_strategies: rows
                .iter()
                .map(|&r| self.row_strategies[r].clone())
                .collect(),
            col_strategies: cols
                .iter()
                .map(|&c| self.col_strategies[c].clone())
                .collect(),
            cells: rows
                .iter()
                .map(|&r| cols.iter().map(|&c| self.cells[r][c].clone()).collect())
                .collect(),
        }
    }
}

/// An ordinal statement about a game, checkable on any instantiation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum Predicate {
    ProfileIsPureNash {
        profile: StrategyProfile,
    },
    ProfileIsNotPureNash {
        profile: StrategyProfile,
    },
    /// Elimination under `policy` leaves exactly `profile`.
    IedsReducesTo {
        policy: IedsPolicy,
        profile: StrategyProfile,
    },
    /// `strategy` is dominated under `kind`; by `by` when given, else by anything.
    StrategyDominated {
        player: Player,
        strategy: usize,
        kind: DominanceKind,
        by: Option<usize>,
    },
    ProfileParetoOptimal {
        profile: StrategyProfile,
    },
    /// The 2x2 game has exactly one equilibrium, at row/column probabilities
    /// `p`, `q` on the first strategies.
    Mixed2x2EquilibriumEquals {
        p: Rational,
        q: Rational,
    },
}

impl Predicate {
    pub fn check_well_formed(&self, shape: (usize, usize)) -> Result<(), OrdinalError> {
        let (m, n) = shape;
        let in_bounds = |p: &StrategyProfile| p.row < m && p.col < n;
        let ok = match self {
            Predicate::ProfileIsPureNash { profile }
            | Predicate::ProfileIsNotPureNash { profile }
            | Predicate::ProfileParetoOptimal { profile }
            | Predicate::IedsReducesTo { profile, .. } => in_bounds(profile),
            Predicate::StrategyDominated {
                player,
                strategy,
                by,
                ..
            } => {
                let k = if *player == Player::Row { m } else { n };
                *strategy < k && by.is_none_or(|b| b < k && b != *strategy)
            }
            Predicate::Mixed2x2EquilibriumEquals { p, q } => {
                shape == (2, 2)
                    && !p.is_negative()
                    && !q.is_negative()
                    && *p <= Rational::one()
                    && *q <= Rational::one()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(OrdinalError::NotWellFormed(format!(
                "{self:?} on a {m}x{n} game"
            )))
        }
    }

    pub fn evaluate(&self, game: &NormalFormGame) -> bool {
        match self {
            Predicate::ProfileIsPureNash { profile } => game.pure_nash().contains(profile),
            Predicate::ProfileIsNotPureNash { profile } => !game.pure_nash().contains(profile),
            Predicate::IedsReducesTo { policy, profile } => {
                game.ieds(*policy).1.solution() == Some(*profile)
            }
            Predicate::StrategyDominated {
                player,
                strategy,
                kind,
                by,
            } => match by {
                Some(d) => game.dominates(*player, *d, *strategy, *kind),
                None => (0..game.num_strategies(*player))
                    .any(|d| game.dominates(*player, d, *strategy, *kind)),
            },
            Predicate::ProfileParetoOptimal { profile } => {
                matches!(game.pareto_status(*profile), Ok(ParetoStatus::Optimal))
            }
            Predicate::Mixed2x2EquilibriumEquals { p, q } => match mixed::mixed_2x2(game) {
                Ok(eqs) => {
                    eqs.len() == 1 && eqs[0].profile.row[0] == *p && eqs[0].profile.col[0] == *q
                }
                Err(_) => false,
            },
        }
    }

    /// True when the predicate's value is fixed by the payoff ranking alone.
    fn order_determined(&self, game: &NormalFormGame) -> bool {
        match self {
            Predicate::Mixed2x2EquilibriumEquals { .. } => {
                mixed::has_strictly_dominant_strategy(game)
            }
            _ => true,
        }
    }

    pub fn describe(&self, row: &[String], col: &[String]) -> String {
        let prof = |p: &StrategyProfile| format!("({}, {})", row[p.row], col[p.col]);
        match self {
            Predicate::ProfileIsPureNash { profile } => {
                format!("{} is a pure Nash equilibrium", prof(profile))
            }
            Predicate::ProfileIsNotPureNash { profile } => {
                format!("{} is not a pure Nash equilibrium", prof(profile))
            }
            Predicate::IedsReducesTo { policy, profile } => format!(
                "{:?} IEDS with {:?} order reduces to {}",
                policy.kind,
                policy.order,
                prof(profile)
            ),
            Predicate::StrategyDominated {
                player,
                strategy,
                kind,
                by,
            } => {
                let labels = if *player == Player::Row { row } else { col };
                let how = if *kind == DominanceKind::Strict {
                    "strictly"
                } else {
                    "weakly"
                };
                match by {
                    Some(d) => format!(
                        "{player} strategy {} is {how} dominated by {}",
                        labels[*strategy], labels[*d]
                    ),
                    None => format!("{player} strategy {} is {how} dominated", labels[*strategy]),
                }
            }
            Predicate::ProfileParetoOptimal { profile } => {
                format!("{} is Pareto optimal", prof(profile))
            }
            Predicate::Mixed2x2EquilibriumEquals { p, q } => {
                format!("the unique equilibrium plays the first strategies with p = {p}, q = {q}")
            }
        }
    }
}

/// Outcome of checking a predicate over every admissible ranking.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum Verdict {
    HoldsForAll {
        extensions: usize,
        /// False when some ranking needed sampling (cardinal predicate).
        exhaustive: bool,
    },
    Counterexample {
        extension_index: usize,
        instantiation: Instantiation,
    },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::HoldsForAll { .. })
    }
}

/// Rankings of the symbols that matter for `game`, one list per independent
/// group of symbols. Symbols in the same player's cells, or linked by a
/// relation, share a group; literals in a player's cells join that player's
/// group as unconstrained nodes.
pub fn scoped_extensions(
    game: &SymbolicGame,
    constraints: &OrderingConstraintSet,
    limit: usize,
) -> Result<Vec<Vec<LinearExtension>>, OrdinalError> {
    constraints.validate()?;
    for s in game.all_symbols() {
        if !constraints.symbols().contains(&s) {
            return Err(OrdinalError::MissingSymbol(s.to_string()));
        }
    }
    let symbols: Vec<PayoffSymbol> = constraints.symbols().iter().cloned().collect();
    let idx = |s: &PayoffSymbol| symbols.binary_search(s).expect("registered");
    let mut uf = UnionFind::new(symbols.len());
    for player in [Player::Row, Player::Col] {
        let own: Vec<usize> = game.symbols(player).iter().map(idx).collect();
        for w in own.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    for c in constraints.constraints() {
        let syms: Vec<usize> = c.symbols().map(idx).collect();
        if let [a, b] = syms[..] {
            uf.union(a, b);
        }
    }
    let mut groups: BTreeMap<usize, BTreeSet<PayoffSymbol>> = BTreeMap::new();
    for (i, s) in symbols.iter().enumerate() {
        groups.entry(uf.find(i)).or_default().insert(s.clone());
    }
    let mut out = Vec::new();
    let mut total: usize = 1;
    for group in groups.values() {
        let players: Vec<Player> = [Player::Row, Player::Col]
            .into_iter()
            .filter(|&p| !game.symbols(p).is_disjoint(group))
            .collect();
        if players.is_empty() {
            continue;
        }
        let mut sub = constraints.restricted_to(group);
        for &p in &players {
            for v in game.literals(p) {
                sub.add_free_literal(v);
            }
        }
        let exts = linear_extensions(&sub, limit)?;
        total = total.saturating_mul(exts.len().max(1));
        if total > limit {
            return Err(OrdinalError::ExtensionLimitExceeded(limit));
        }
        out.push(exts);
    }
    Ok(out)
}

/// Calls `visit` with each combined ranking's index and canonical values.
fn for_each_combined<F>(scoped: &[Vec<LinearExtension>], mut visit: F) -> Option<usize>
where
    F: FnMut(usize, &[&LinearExtension], Instantiation) -> bool,
{
    if scoped.iter().any(|g| g.is_empty()) {
        return Some(0);
    }
    let mut counters = vec![0usize; scoped.len()];
    let mut index = 0usize;
    loop {
        let picks: Vec<&LinearExtension> =
            scoped.iter().zip(&counters).map(|(g, &i)| &g[i]).collect();
        let mut inst = Instantiation::new();
        for e in &picks {
            inst.extend(canonical_instantiation(e));
        }
        if !visit(index, &picks, inst) {
            return None;
        }
        index += 1;
        // Odometer increment, last group fastest.
        let mut k = scoped.len();
        loop {
            if k == 0 {
                return Some(index);
            }
            k -= 1;
            counters[k] += 1;
            if counters[k] < scoped[k].len() {
                break;
            }
            counters[k] = 0;
        }
    }
}

/// Checks `predicate` on the canonical instantiation of every admissible
/// ranking. Predicates that depend on more than the ranking are also checked
/// on sampled instantiations, and the verdict is marked non-exhaustive.
pub fn holds_for_all(
    game: &SymbolicGame,
    constraints: &OrderingConstraintSet,
    predicate: &Predicate,
) -> Result<Verdict, OrdinalError> {
    holds_for_all_with_limit(game, constraints, predicate, DEFAULT_EXTENSION_LIMIT)
}

pub fn holds_for_all_with_limit(
    game: &SymbolicGame,
    constraints: &OrderingConstraintSet,
    predicate: &Predicate,
    limit: usize,
) -> Result<Verdict, OrdinalError> {
    predicate.check_well_formed(game.shape())?;
    let scoped = scoped_extensions(game, constraints, limit)?;
    let mut exhaustive = true;
    let mut failure: Option<(usize, Instantiation)> = None;
    let mut error: Option<OrdinalError> = None;
    let count = for_each_combined(&scoped, |index, picks, inst| {
        let concrete = match game.instantiate(&inst) {
            Ok(g) => g,
            Err(e) => {
                error = Some(e);
                return false;
            }
        };
        if !predicate.evaluate(&concrete) {
            failure = Some((index, inst));
            return false;
        }
        if !predicate.order_determined(&concrete) {
            exhaustive = false;
            let mut rng = ChaCha8Rng::seed_from_u64(index as u64);
            for _ in 0..SAMPLES_PER_EXTENSION {
                let mut sample = Instantiation::new();
                for e in picks {
                    sample.extend(sample_in_extension(e, &mut rng));
                }
                let g = game
                    .instantiate(&sample)
                    .expect("same symbols as canonical");
                if !predicate.evaluate(&g) {
                    failure = Some((index, sample));
                    return false;
                }
            }
        }
        true
    });
    if let Some(e) = error {
        return Err(e);
    }
    if let Some((extension_index, instantiation)) = failure {
        return Ok(Verdict::Counterexample {
            extension_index,
            instantiation,
        });
    }
    Ok(Verdict::HoldsForAll {
        extensions: count.unwrap_or(0),
        exhaustive,
    })
}

/// Number of combined rankings `holds_for_all` would visit.
pub fn count_scoped_extensions(
    game: &SymbolicGame,
    constraints: &OrderingConstraintSet,
) -> Result<usize, OrdinalError> {
    let scoped = scoped_extensions(game, constraints, DEFAULT_EXTENSION_LIMIT)?;
    Ok(scoped.iter().map(|g| g.len()).product())
}

/// Canonical instantiations of every combined ranking, in visiting order.
pub fn scoped_canonical_instantiations(
    game: &SymbolicGame,
    constraints: &OrderingConstraintSet,
) -> Result<Vec<Instantiation>, OrdinalError> {
    let scoped = scoped_extensions(game, constraints, DEFAULT_EXTENSION_LIMIT)?;
    let mut out = Vec::new();
    for_each_combined(&scoped, |_, _, inst| {
        out.push(inst);
        true
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    const PUBLISHER: [&str; 7] = [
        "omega_p", "beta_ppp", "beta_pp", "beta_p", "alpha_pp", "alpha_p", "omega_pp",
    ];

    fn institution_chain() -> OrderingConstraintSet {
        OrderingConstraintSet::parse("alpha > alpha_star ~= omega_star > beta_star > beta > omega")
            .unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(institution_chain().validate().is_ok());
        let cyc = OrderingConstraintSet::parse("a > b\nb > a").unwrap();
        assert!(matches!(
            cyc.validate(),
            Err(OrdinalError::CycleDetected(_))
        ));
        let conflict = OrderingConstraintSet::parse("a ~= b\na > b").unwrap();
        assert!(matches!(
            conflict.validate(),
            Err(OrdinalError::EqualityStrictConflict(_, _))
        ));
    }

    #[test]
    fn cycle_path_is_reported() {
        let cyc = OrderingConstraintSet::parse("a > b\nb > c\nc >= a").unwrap();
        match cyc.validate() {
            Err(OrdinalError::CycleDetected(path)) => {
                assert_eq!(path.first(), path.last());
                assert!(path.len() >= 3);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn literal_contradictions() {
        let s = OrderingConstraintSet::parse("a ~= 1\na ~= 2").unwrap();
        assert!(s.validate().is_err());
        let s = OrderingConstraintSet::parse("0 > a\na > 1").unwrap();
        assert!(matches!(s.validate(), Err(OrdinalError::CycleDetected(_))));
    }

    #[test]
    fn parse_errors_carry_position() {
        match OrderingConstraintSet::parse("a > b\nc < d") {
            Err(OrdinalError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(OrderingConstraintSet::parse("a >").is_err());
        assert!(OrderingConstraintSet::parse("> a").is_err());
    }

    #[test]
    fn extension_counts() {
        let mut publisher = OrderingConstraintSet::new();
        publisher
            .add_chain(&PUBLISHER)
            .add_free_literal(Rational::zero());
        assert_eq!(linear_extensions(&publisher, 100).unwrap().len(), 8);

        let mut chain = OrderingConstraintSet::new();
        chain.add_chain(&["a", "b", "c", "d"]);
        assert_eq!(linear_extensions(&chain, 100).unwrap().len(), 1);

        let mut free = OrderingConstraintSet::new();
        for s in ["x", "y", "z"] {
            free.add_symbol(PayoffSymbol::new(s));
        }
        assert_eq!(linear_extensions(&free, 100).unwrap().len(), 6);
        assert_eq!(
            linear_extensions(&free, 5),
            Err(OrdinalError::ExtensionLimitExceeded(5))
        );
    }

    #[test]
    fn weak_relations_allow_ties() {
        let s = OrderingConstraintSet::parse("a >= b").unwrap();
        let exts = linear_extensions(&s, 10).unwrap();
        assert_eq!(exts.len(), 2);
        assert!(exts.iter().any(|e| e.levels.len() == 1));
        let s = OrderingConstraintSet::parse("a >= 0\n0 >= a").unwrap();
        let exts = linear_extensions(&s, 10).unwrap();
        assert_eq!(exts.len(), 1);
        assert_eq!(
            canonical_instantiation(&exts[0]).value("a"),
            Some(&Rational::zero())
        );
    }

    #[test]
    fn canonical_institution_values() {
        let exts = linear_extensions(&institution_chain(), 10).unwrap();
        assert_eq!(exts.len(), 1);
        let inst = canonical_instantiation(&exts[0]);
        // Without the positivity anchor the bottom class gets 1.
        assert_eq!(inst.value("alpha"), Some(&rat(5, 1)));
        assert_eq!(inst.value("omega"), Some(&rat(1, 1)));
        assert_eq!(inst.value("alpha_star"), inst.value("omega_star"));
        assert!(inst.satisfies(&institution_chain()));
    }

    #[test]
    fn canonical_publisher_with_zero_below() {
        let mut s = OrderingConstraintSet::new();
        s.add_chain(&PUBLISHER);
        s.add(Constraint::new(
            Term::sym("omega_pp"),
            Relation::Greater,
            Term::lit(0),
        ));
        let exts = linear_extensions(&s, 10).unwrap();
        assert_eq!(exts.len(), 1);
        let inst = canonical_instantiation(&exts[0]);
        let expected = [8, 7, 6, 5, 4, 3, 2];
        for (name, v) in PUBLISHER.iter().zip(expected) {
            assert_eq!(inst.value(name), Some(&rat(v, 1)), "{name}");
        }
    }

    #[test]
    fn canonical_single_symbol() {
        let mut s = OrderingConstraintSet::new();
        s.add_symbol(PayoffSymbol::new("x"));
        let exts = linear_extensions(&s, 10).unwrap();
        assert_eq!(
            canonical_instantiation(&exts[0]).value("x"),
            Some(&rat(1, 1))
        );
    }

    #[test]
    fn canonical_handles_crowded_literals() {
        let s = OrderingConstraintSet::parse("1 > a > b > 0\nc > 5\n0 > d").unwrap();
        for e in linear_extensions(&s, 1000).unwrap() {
            let inst = canonical_instantiation(&e);
            assert!(inst.satisfies(&s), "{e}: {inst}");
            assert_eq!(e.induced_by(&inst).unwrap(), e);
        }
    }

    #[test]
    fn every_placement_round_trips() {
        let mut s = OrderingConstraintSet::new();
        s.add_chain(&PUBLISHER).add_free_literal(Rational::zero());
        for e in linear_extensions(&s, 100).unwrap() {
            let inst = canonical_instantiation(&e);
            assert!(inst.satisfies(&s));
            assert_eq!(e.induced_by(&inst).unwrap(), e);
        }
    }

    #[test]
    fn sampling_is_seeded_and_valid() {
        let mut s = institution_chain();
        s.add_chain(&PUBLISHER);
        s.add(Constraint::new(
            Term::sym("omega_pp"),
            Relation::Greater,
            Term::lit(0),
        ));
        let a = sample_instantiation(&s, 7).unwrap();
        assert_eq!(a, sample_instantiation(&s, 7).unwrap());
        assert_ne!(a, sample_instantiation(&s, 8).unwrap());
        assert!(a.satisfies(&s));
    }

    #[test]
    fn split_equalities_gives_two_strict_variants() {
        let variants = institution_chain().split_equalities();
        assert_eq!(variants.len(), 2);
        for v in &variants {
            assert!(v.equalities().is_empty());
            assert!(v.validate().is_ok());
        }
        assert_eq!(linear_extensions(&variants[0], 10).unwrap().len(), 1);
        assert!(linear_extensions(&variants[1], 100).unwrap().len() > 1);
    }

    #[test]
    fn text_roundtrip() {
        let s = OrderingConstraintSet::parse("alpha_p > 0\nalpha_star ~= omega_star\nx >= 1/2")
            .unwrap();
        assert_eq!(OrderingConstraintSet::parse(&s.to_string()).unwrap(), s);
        assert_eq!(s.anchors().len(), 2);
    }
}
