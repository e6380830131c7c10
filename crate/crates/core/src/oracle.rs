//! Brute-force evaluator for unitary games.
//!
//! Every cell is the maximin of the complete `(ℓ, r)` bid matrix, including
//! Left strict wins, and both marker sides are evaluated by their own
//! recursion rather than through the zero-sum flip. Nothing here is shared
//! with [`crate::unitary`], so the two can be checked against each other.

use dashmap::DashMap;
use serde::{Deserialize, Serialize};

use crate::error::{BcsError, Result};
use crate::position::{classify_bid, BidPair, RichmanPosition, Score, Side, TotalBudget};

/// Memoised full-matrix evaluator for one total budget.
///
/// The memo is keyed on `(heap, left budget, marker)`; the running score is
/// additive and kept out of the state. It is safe to share between threads.
#[derive(Debug)]
pub struct Oracle {
    tb: TotalBudget,
    memo: DashMap<(usize, usize, Side), Score>,
}

impl Oracle {
    pub fn new(tb: TotalBudget) -> Self {
        Oracle {
            tb,
            memo: DashMap::new(),
        }
    }

    pub fn tb(&self) -> TotalBudget {
        self.tb
    }

    pub fn value(&self, heap: usize, p: usize, marker: Side) -> Score {
        if heap == 0 {
            return 0;
        }
        if let Some(v) = self.memo.get(&(heap, p, marker)) {
            return *v;
        }
        let pos = RichmanPosition::from_parts(self.tb.get(), heap, p, marker).expect("p within tb");
        let v = self.matrix_at(&pos).maximin;
        self.memo.insert((heap, p, marker), v);
        v
    }

    fn entry(&self, pos: &RichmanPosition, l: usize, r: usize) -> Score {
        let res = classify_bid(pos, l, r).expect("bids within budgets");
        let removal = match res.mover() {
            Side::Left => 1,
            Side::Right => -1,
        };
        removal + self.value(pos.heap() - 1, res.next_left_budget, res.next_marker)
    }

    fn matrix_at(&self, pos: &RichmanPosition) -> BidMatrix {
        let (p, q) = (pos.left_budget(), pos.right_budget());
        let entries: Vec<Vec<Score>> = (0..=q)
            .map(|r| (0..=p).map(|l| self.entry(pos, l, r)).collect())
            .collect();
        let column_mins: Vec<Score> = (0..=p)
            .map(|l| entries.iter().map(|row| row[l]).min().unwrap())
            .collect();
        let row_maxes: Vec<Score> = entries.iter().map(|row| *row.iter().max().unwrap()).collect();
        BidMatrix {
            heap: pos.heap(),
            left_budget: p,
            marker: pos.marker(),
            maximin: *column_mins.iter().max().unwrap(),
            minimax: *row_maxes.iter().min().unwrap(),
            entries,
            column_mins,
            row_maxes,
        }
    }

    /// The continuation matrix at `pos` (heap at least 1).
    pub fn bid_matrix(&self, pos: &RichmanPosition) -> Result<BidMatrix> {
        if pos.heap() == 0 {
            return Err(BcsError::EmptyHeap);
        }
        Ok(self.matrix_at(pos))
    }
}

/// Continuation values of every bid pair at one position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BidMatrix {
    pub heap: usize,
    pub left_budget: usize,
    pub marker: Side,
    /// `entries[r][ℓ]`.
    pub entries: Vec<Vec<Score>>,
    /// Minimum over `r` for each `ℓ`.
    pub column_mins: Vec<Score>,
    /// Maximum over `ℓ` for each `r`.
    pub row_maxes: Vec<Score>,
    pub maximin: Score,
    pub minimax: Score,
}

impl BidMatrix {
    /// Maximin with every Left strict win (`ℓ > r`) struck out; `ℓ` columns
    /// left without entries are skipped.
    pub fn maximin_without_left_wins(&self) -> Option<Score> {
        (0..self.column_mins.len())
            .filter_map(|l| {
                self.entries
                    .iter()
                    .enumerate()
                    .filter(|&(r, _)| r >= l)
                    .map(|(_, row)| row[l])
                    .min()
            })
            .max()
    }
}

pub fn oracle_value(tb: TotalBudget, pos: &RichmanPosition) -> Score {
    Oracle::new(tb).value(pos.heap(), pos.left_budget(), pos.marker())
}

pub fn bid_matrix(tb: TotalBudget, pos: &RichmanPosition) -> Result<BidMatrix> {
    Oracle::new(tb).bid_matrix(pos)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlayStep {
    pub position: RichmanPosition,
    pub bid: BidPair,
    /// `+1` when Left took the pebble, `-1` when Right did.
    pub removal: Score,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlayTrace {
    pub steps: Vec<PlayStep>,
    pub final_position: RichmanPosition,
    /// Signed sum of removals.
    pub utility: Score,
}

impl PlayTrace {
    pub fn is_complete(&self) -> bool {
        self.final_position.heap() == 0
    }
}

/// Play `bids` from `start`, one pebble per round.
pub fn replay(start: &RichmanPosition, bids: &[(usize, usize)]) -> Result<PlayTrace> {
    let mut position = *start;
    let mut steps = Vec::with_capacity(bids.len());
    for (index, &(left_bid, right_bid)) in bids.iter().enumerate() {
        if position.heap() == 0 {
            return Err(BcsError::GameAlreadyOver { index });
        }
        let res = classify_bid(&position, left_bid, right_bid).map_err(|_| BcsError::ReplayInfeasible {
            index,
            left_bid,
            right_bid,
            left_budget: position.left_budget(),
            right_budget: position.right_budget(),
        })?;
        let removal = match res.mover() {
            Side::Left => 1,
            Side::Right => -1,
        };
        steps.push(PlayStep {
            position,
            bid: res.bid,
            removal,
        });
        position = RichmanPosition::from_parts(
            position.tb().get(),
            position.heap() - 1,
            res.next_left_budget,
            res.next_marker,
        )?;
    }
    Ok(PlayTrace {
        utility: steps.iter().map(|s| s.removal).sum(),
        steps,
        final_position: position,
    })
}
