//! Exact-arithmetic analysis of small two-player games whose payoffs are
//! only known up to an ordering, applied to a model of the scholarly
//! publishing market.

pub mod audit;
pub mod dynamics;
pub mod game;
pub mod mixed;
pub mod models;
pub mod ordinal;
pub mod rational;

pub use game::{NormalFormGame, Player, StrategyProfile};
pub use rational::{rat, Rational};
