use thiserror::Error;

pub type Result<T, E = BcsError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BcsError {
    #[error("heap size {0} is negative")]
    HeapNegative(i64),

    #[error("left budget {p} outside 0..={tb}")]
    BudgetOutOfRange { p: i64, tb: usize },

    #[error("infeasible bid: left bids {left_bid} of {left_budget}, right bids {right_bid} of {right_budget}")]
    InfeasibleBid {
        left_bid: usize,
        right_bid: usize,
        left_budget: usize,
        right_budget: usize,
    },

    #[error("operation requires Left to hold the marker")]
    RequiresLeftMarker,

    #[error("heap {heap} is outside the solved range 0..={x_max}")]
    OutOfRange { heap: usize, x_max: usize },

    #[error("heap is empty; there is nothing to bid for")]
    EmptyHeap,

    #[error("closed form expects a {expected} argument, got {delta}")]
    ParityError { delta: i64, expected: &'static str },

    #[error("rows at heap {lower} and {upper} differ for tb={tb}")]
    ConvergenceBoundExceeded { tb: usize, lower: usize, upper: usize },

    #[error("no player can bid at node {node} with left budget {p}")]
    InvalidRuleset { node: String, p: usize },

    #[error("move graph contains a cycle through node {0}")]
    CyclicRuleset(String),

    #[error("ruleset error: {0}")]
    Ruleset(String),

    #[error("bid {index}: left bids {left_bid}, right bids {right_bid}, budgets ({left_budget}, {right_budget})")]
    ReplayInfeasible {
        index: usize,
        left_bid: usize,
        right_bid: usize,
        left_budget: usize,
        right_budget: usize,
    },

    #[error("bid {index}: the heap is already empty")]
    GameAlreadyOver { index: usize },
}
