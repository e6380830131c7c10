//! Exact equilibrium engine for discrete-Richman bidding games.
//!
//! The centre of the crate is unitary Bidding Cumulative Subtraction: a heap of
//! pebbles, one pebble per move, and the right to move sold by sealed-bid
//! Richman auction over a fixed integer total budget with a tie-breaking
//! marker. Everything is computed in exact integer arithmetic.
//!
//! - [`position`]: budgets, positions, bid resolution.
//! - [`table`]: outcome rows and tables shared by the solvers and the CLI.
//! - [`general`]: maximin / minimax on arbitrary finite acyclic rulesets and the
//!   uniqueness-property check.
//! - [`unitary`]: the fast reduced dynamic program for unitary games.
//! - [`oracle`]: an independent full bid-matrix evaluator and play replayer.
//! - [`automaton`]: closed forms, the 0-bidding automaton and convergence bound.
//! - [`analysis`]: the invariant suite, forced-win thresholds and bid graphs.

pub mod analysis;
pub mod automaton;
pub mod error;
pub mod general;
pub mod oracle;
pub mod position;
pub mod table;
pub mod unitary;

pub use error::{BcsError, Result};
pub use position::{classify_bid, BidPair, Resolution, RichmanPosition, Score, Side, TotalBudget, Winner};
pub use table::{OutcomeRow, OutcomeTable};
