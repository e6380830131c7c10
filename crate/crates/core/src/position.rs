//! Budgets, positions and the resolution of a single sealed-bid round.

use serde::{Deserialize, Serialize};

use crate::error::{BcsError, Result};

/// Score in pebble-difference units, positive for Left.
pub type Score = i64;

/// The fixed number of dollars shared by the two players.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TotalBudget(usize);

impl TotalBudget {
    pub const fn new(tb: usize) -> Self {
        TotalBudget(tb)
    }

    pub const fn get(self) -> usize {
        self.0
    }

    /// The partner budget of `p`.
    pub const fn complement(self, p: usize) -> usize {
        self.0 - p
    }
}

impl From<usize> for TotalBudget {
    fn from(tb: usize) -> Self {
        TotalBudget(tb)
    }
}

impl std::fmt::Display for TotalBudget {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub const fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    pub const fn letter(self) -> char {
        match self {
            Side::Left => 'L',
            Side::Right => 'R',
        }
    }
}

/// A heap size together with the budget partition and the marker holder.
///
/// Only Left's budget is stored; Right's is always `tb - left_budget`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RichmanPosition {
    tb: TotalBudget,
    heap: usize,
    left_budget: usize,
    marker: Side,
}

impl RichmanPosition {
    pub fn new(tb: TotalBudget, heap: i64, p: i64, marker: Side) -> Result<Self> {
        if heap < 0 {
            return Err(BcsError::HeapNegative(heap));
        }
        if p < 0 || p as u64 > tb.get() as u64 {
            return Err(BcsError::BudgetOutOfRange { p, tb: tb.get() });
        }
        Ok(RichmanPosition {
            tb,
            heap: heap as usize,
            left_budget: p as usize,
            marker,
        })
    }

    /// Unchecked-in-type constructor for callers that already hold `usize`
    /// values; still rejects `p > tb`.
    pub fn from_parts(tb: usize, heap: usize, p: usize, marker: Side) -> Result<Self> {
        if p > tb {
            return Err(BcsError::BudgetOutOfRange { p: p as i64, tb });
        }
        Ok(RichmanPosition {
            tb: TotalBudget(tb),
            heap,
            left_budget: p,
            marker,
        })
    }

    pub fn tb(&self) -> TotalBudget {
        self.tb
    }

    pub fn heap(&self) -> usize {
        self.heap
    }

    pub fn left_budget(&self) -> usize {
        self.left_budget
    }

    pub fn right_budget(&self) -> usize {
        self.tb.complement(self.left_budget)
    }

    pub fn marker(&self) -> Side {
        self.marker
    }

    pub fn budget_of(&self, side: Side) -> usize {
        match side {
            Side::Left => self.left_budget(),
            Side::Right => self.right_budget(),
        }
    }
}

impl std::fmt::Display for RichmanPosition {
    /// `(2, 1^)` when Left holds the marker, `(2, 1)` otherwise.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.marker {
            Side::Left => write!(f, "({}, {}^)", self.heap, self.left_budget),
            Side::Right => write!(f, "({}, {})", self.heap, self.left_budget),
        }
    }
}

/// Who took the move, and whether it was decided by the marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Winner {
    LeftStrict,
    LeftTie,
    RightStrict,
    RightTie,
}

impl Winner {
    pub const fn side(self) -> Side {
        match self {
            Winner::LeftStrict | Winner::LeftTie => Side::Left,
            Winner::RightStrict | Winner::RightTie => Side::Right,
        }
    }

    pub const fn is_tie(self) -> bool {
        matches!(self, Winner::LeftTie | Winner::RightTie)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BidPair {
    pub left_bid: usize,
    pub right_bid: usize,
    pub winner: Winner,
}

impl BidPair {
    /// The amount the winner hands to the loser.
    pub fn payment(&self) -> usize {
        match self.winner.side() {
            Side::Left => self.left_bid,
            Side::Right => self.right_bid,
        }
    }
}

/// A resolved round: the bid pair and the budget/marker state that follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resolution {
    pub bid: BidPair,
    pub next_left_budget: usize,
    pub next_marker: Side,
}

impl Resolution {
    pub fn mover(&self) -> Side {
        self.bid.winner.side()
    }
}

/// Resolve the sealed bids `(left_bid, right_bid)` at `pos`.
///
/// The higher bid wins; equal bids go to the marker holder, who then hands the
/// marker over together with the payment.
pub fn classify_bid(pos: &RichmanPosition, left_bid: usize, right_bid: usize) -> Result<Resolution> {
    let p = pos.left_budget();
    let q = pos.right_budget();
    if left_bid > p || right_bid > q {
        return Err(BcsError::InfeasibleBid {
            left_bid,
            right_bid,
            left_budget: p,
            right_budget: q,
        });
    }
    let winner = match left_bid.cmp(&right_bid) {
        std::cmp::Ordering::Greater => Winner::LeftStrict,
        std::cmp::Ordering::Less => Winner::RightStrict,
        std::cmp::Ordering::Equal => match pos.marker() {
            Side::Left => Winner::LeftTie,
            Side::Right => Winner::RightTie,
        },
    };
    let next_left_budget = match winner.side() {
        Side::Left => p - left_bid,
        Side::Right => p + right_bid,
    };
    let next_marker = if winner.is_tie() {
        pos.marker().other()
    } else {
        pos.marker()
    };
    Ok(Resolution {
        bid: BidPair {
            left_bid,
            right_bid,
            winner,
        },
        next_left_budget,
        next_marker,
    })
}
