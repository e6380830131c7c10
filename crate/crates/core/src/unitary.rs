//! Bottom-up dynamic program for unitary games (one pebble per move, every bid
//! in `0..=tb` allowed).
//!
//! Only marker-Left values `ô_p(x)` are stored. Marker-Right values follow from
//! the zero-sum identity `o_p(x) = -ô_{tb-p}(x)`. The recursion considers only
//! Left tie-wins and Right strict wins; a Left bid that Right cannot match
//! (`ℓ > q`) is never needed, since the same value is available through a tie.

use serde::{Deserialize, Serialize};

use crate::automaton::convergence_bound;
use crate::error::{BcsError, Result};
use crate::position::{classify_bid, BidPair, RichmanPosition, Score, Side, TotalBudget, Winner};
use crate::table::OutcomeTable;

/// Next marker-Left row from the previous one.
pub fn next_row(prev: &[Score]) -> Vec<Score> {
    let tb = prev.len() - 1;
    let mut row = Vec::with_capacity(tb + 1);
    // suffix[r] = min over r' >= r of prev[p + r'], rebuilt per p.
    let mut suffix = vec![Score::MAX; tb + 2];
    for p in 0..=tb {
        let q = tb - p;
        suffix[q + 1] = Score::MAX;
        for r in (0..=q).rev() {
            suffix[r] = suffix[r + 1].min(prev[p + r]);
        }
        let best = (0..=p.min(q))
            .map(|l| {
                let tie = 1 - prev[q + l];
                let right_win = suffix[l + 1].saturating_sub(1);
                tie.min(right_win)
            })
            .max()
            .expect("bid 0 is always available");
        row.push(best);
    }
    row
}

/// Streams marker-Left rows `x = 0, 1, 2, ...` keeping only the previous row.
#[derive(Debug, Clone)]
pub struct RowStream {
    prev: Option<Vec<Score>>,
    tb: usize,
}

impl RowStream {
    pub fn new(tb: TotalBudget) -> Self {
        RowStream {
            prev: None,
            tb: tb.get(),
        }
    }
}

impl Iterator for RowStream {
    type Item = Vec<Score>;

    fn next(&mut self) -> Option<Vec<Score>> {
        let row = match &self.prev {
            None => vec![0; self.tb + 1],
            Some(prev) => next_row(prev),
        };
        self.prev = Some(row.clone());
        Some(row)
    }
}

/// Marker-Left value rows for `x = 0..=x_max`.
pub fn solve_values(tb: TotalBudget, x_max: usize) -> Vec<Vec<Score>> {
    RowStream::new(tb).take(x_max + 1).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquilibriumCell {
    pub value: Score,
    /// Sorted by `(left_bid, right_bid)`; empty only on the empty heap.
    pub equilibrium_bids: Vec<BidPair>,
    pub canonical_bid: Option<BidPair>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitaryTable {
    tb: TotalBudget,
    /// `cells[x][p]`, Left holding the marker.
    cells: Vec<Vec<EquilibriumCell>>,
}

/// Heap size up to which open-ended queries are solved by default.
pub fn default_x_max(tb: TotalBudget) -> usize {
    convergence_bound(tb) + 2
}

/// Solve the full table of equilibrium cells for `x = 0..=x_max`.
pub fn solve(tb: TotalBudget, x_max: usize) -> UnitaryTable {
    let rows = solve_values(tb, x_max);
    let mut cells = Vec::with_capacity(rows.len());
    cells.push(
        rows[0]
            .iter()
            .map(|&value| EquilibriumCell {
                value,
                equilibrium_bids: Vec::new(),
                canonical_bid: None,
            })
            .collect(),
    );
    for x in 1..rows.len() {
        let prev = &rows[x - 1];
        let row = (0..=tb.get())
            .map(|p| {
                let value = rows[x][p];
                let equilibrium_bids = reduced_equilibrium_bids(prev, p, value);
                debug_assert!(!equilibrium_bids.is_empty());
                EquilibriumCell {
                    value,
                    canonical_bid: equilibrium_bids.first().copied(),
                    equilibrium_bids,
                }
            })
            .collect();
        cells.push(row);
    }
    UnitaryTable { tb, cells }
}

/// Every `(ℓ, r)` of the reduced recursion realising `value` at `(x, p^)`,
/// where `prev` is row `x - 1`.
fn reduced_equilibrium_bids(prev: &[Score], p: usize, value: Score) -> Vec<BidPair> {
    let tb = prev.len() - 1;
    let q = tb - p;
    let mut bids = Vec::new();
    for l in 0..=p.min(q) {
        let tie = 1 - prev[q + l];
        let wins: Vec<(usize, Score)> = (l + 1..=q).map(|r| (r, prev[p + r] - 1)).collect();
        let column_min = wins.iter().map(|&(_, v)| v).fold(tie, Score::min);
        if column_min != value {
            continue;
        }
        if tie == column_min {
            bids.push(BidPair {
                left_bid: l,
                right_bid: l,
                winner: Winner::LeftTie,
            });
        }
        bids.extend(wins.iter().filter(|&&(_, v)| v == column_min).map(|&(r, _)| BidPair {
            left_bid: l,
            right_bid: r,
            winner: Winner::RightStrict,
        }));
    }
    bids
}

impl UnitaryTable {
    pub fn tb(&self) -> TotalBudget {
        self.tb
    }

    pub fn x_max(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn cell(&self, x: usize, p: usize) -> &EquilibriumCell {
        &self.cells[x][p]
    }

    /// Marker-Left value `ô_p(x)`.
    pub fn marker_left(&self, x: usize, p: usize) -> Score {
        self.cells[x][p].value
    }

    pub fn row(&self, x: usize) -> Vec<Score> {
        self.cells[x].iter().map(|c| c.value).collect()
    }

    pub fn rows(&self) -> Vec<Vec<Score>> {
        (0..=self.x_max()).map(|x| self.row(x)).collect()
    }

    pub fn outcome_table(&self) -> OutcomeTable {
        OutcomeTable::from_marker_left_rows(self.tb, self.rows())
    }

    fn check(&self, pos: &RichmanPosition) -> Result<()> {
        if pos.tb() != self.tb {
            return Err(BcsError::BudgetOutOfRange {
                p: pos.left_budget() as i64,
                tb: self.tb.get(),
            });
        }
        if pos.heap() > self.x_max() {
            return Err(BcsError::OutOfRange {
                heap: pos.heap(),
                x_max: self.x_max(),
            });
        }
        Ok(())
    }

    /// Value with the marker at either side, Left-positive.
    fn value_at(&self, x: usize, p: usize, marker: Side) -> Score {
        match marker {
            Side::Left => self.marker_left(x, p),
            Side::Right => -self.marker_left(x, self.tb.complement(p)),
        }
    }

    /// Value of resolving `(ℓ, r)` at `pos` and continuing in equilibrium.
    fn continuation(&self, pos: &RichmanPosition, l: usize, r: usize) -> Result<Score> {
        let res = classify_bid(pos, l, r)?;
        let gain = match res.mover() {
            Side::Left => 1,
            Side::Right => -1,
        };
        Ok(gain + self.value_at(pos.heap() - 1, res.next_left_budget, res.next_marker))
    }

    /// The complete continuation matrix, `[r][ℓ]`.
    fn matrix(&self, pos: &RichmanPosition) -> Vec<Vec<Score>> {
        (0..=pos.right_budget())
            .map(|r| {
                (0..=pos.left_budget())
                    .map(|l| self.continuation(pos, l, r).expect("bids within budgets"))
                    .collect()
            })
            .collect()
    }
}

pub fn value(table: &UnitaryTable, pos: &RichmanPosition) -> Result<Score> {
    table.check(pos)?;
    Ok(table.value_at(pos.heap(), pos.left_budget(), pos.marker()))
}

/// All bid pairs consistent with the maximin at `pos`.
///
/// With Left holding the marker these are the pairs of the reduced recursion.
/// With Right holding it, Left still declares first and the full bid matrix
/// is scanned.
pub fn equilibrium_bids(table: &UnitaryTable, pos: &RichmanPosition) -> Result<Vec<BidPair>> {
    table.check(pos)?;
    if pos.heap() == 0 {
        return Err(BcsError::EmptyHeap);
    }
    match pos.marker() {
        Side::Left => Ok(table.cell(pos.heap(), pos.left_budget()).equilibrium_bids.clone()),
        Side::Right => {
            let m = table.matrix(pos);
            let column_min = |l: usize| m.iter().map(|row| row[l]).min().unwrap();
            let best = (0..=pos.left_budget()).map(column_min).max().unwrap();
            let mut bids = Vec::new();
            for l in (0..=pos.left_budget()).filter(|&l| column_min(l) == best) {
                for (r, row) in m.iter().enumerate() {
                    if row[l] == best {
                        bids.push(classify_bid(pos, l, r)?.bid);
                    }
                }
            }
            Ok(bids)
        }
    }
}

/// Value of `pos` given that both players tie at `ℓ` and then play on in
/// equilibrium: `1 - ô_{q+ℓ}(x-1)`.
pub fn tie_conditioned_value(table: &UnitaryTable, pos: &RichmanPosition, l: usize) -> Result<Score> {
    table.check(pos)?;
    if pos.marker() != Side::Left {
        return Err(BcsError::RequiresLeftMarker);
    }
    if pos.heap() == 0 {
        return Err(BcsError::EmptyHeap);
    }
    let (p, q) = (pos.left_budget(), pos.right_budget());
    if l > p || l > q {
        return Err(BcsError::InfeasibleBid {
            left_bid: l,
            right_bid: l,
            left_budget: p,
            right_budget: q,
        });
    }
    Ok(1 - table.marker_left(pos.heap() - 1, q + l))
}

/// The sealed bid an optimal engine places for `side` at `pos`: the smallest
/// maximin bid for Left, the smallest minimax bid for Right. Neither depends on
/// the opponent's bid.
pub fn engine_bid(table: &UnitaryTable, pos: &RichmanPosition, side: Side) -> Result<usize> {
    table.check(pos)?;
    if pos.heap() == 0 {
        return Err(BcsError::EmptyHeap);
    }
    let m = table.matrix(pos);
    let bid = match side {
        Side::Left => {
            let mins: Vec<Score> = (0..=pos.left_budget())
                .map(|l| m.iter().map(|row| row[l]).min().unwrap())
                .collect();
            let best = *mins.iter().max().unwrap();
            mins.iter().position(|&v| v == best).unwrap()
        }
        Side::Right => {
            let maxes: Vec<Score> = m.iter().map(|row| *row.iter().max().unwrap()).collect();
            let best = *maxes.iter().min().unwrap();
            maxes.iter().position(|&v| v == best).unwrap()
        }
    };
    Ok(bid)
}

/// Stabilised marker-Left rows for large even and odd heaps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitRows {
    pub tb: TotalBudget,
    /// Indexed by `p`.
    pub even: Vec<Score>,
    pub odd: Vec<Score>,
    /// Smallest heap from which every row equals the row two heaps later.
    pub x_star: usize,
    pub bound: usize,
}

impl LimitRows {
    pub fn row(&self, odd: bool) -> &[Score] {
        if odd {
            &self.odd
        } else {
            &self.even
        }
    }
}

/// Solve up to `B(tb) + 2` and read off the period-2 limit rows.
pub fn limit_rows(tb: TotalBudget) -> Result<LimitRows> {
    let bound = convergence_bound(tb);
    let last = bound + 2;
    let mut history: [Vec<Score>; 2] = [Vec::new(), Vec::new()];
    let mut last_change = 0;
    for (x, row) in RowStream::new(tb).take(last + 1).enumerate() {
        if x >= 2 && row != history[x % 2] {
            last_change = x;
        }
        history[x % 2] = row;
    }
    if last_change > bound {
        return Err(BcsError::ConvergenceBoundExceeded {
            tb: tb.get(),
            lower: last_change - 2,
            upper: last_change,
        });
    }
    let [even, odd] = history;
    Ok(LimitRows {
        tb,
        even,
        odd,
        x_star: last_change,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tb(n: usize) -> TotalBudget {
        TotalBudget::new(n)
    }

    fn pos(t: usize, x: usize, p: usize, marker: Side) -> RichmanPosition {
        RichmanPosition::from_parts(t, x, p, marker).unwrap()
    }

    /// Display order `p = tb, ..., 0`.
    fn reversed(row: &[Score]) -> Vec<Score> {
        row.iter().rev().copied().collect()
    }

    #[test]
    fn budget_five_small_heaps() {
        let rows = solve_values(tb(5), 2);
        assert_eq!(reversed(&rows[0]), vec![0; 6]);
        assert_eq!(reversed(&rows[1]), vec![1, 1, 1, -1, -1, -1]);
        assert_eq!(reversed(&rows[2]), vec![2, 2, 0, 0, 0, -2]);
    }

    #[test]
    fn zero_budget_alternates() {
        let rows = solve_values(tb(0), 9);
        for (x, row) in rows.iter().enumerate() {
            assert_eq!(row, &vec![(x % 2) as Score]);
        }
    }

    #[test]
    fn budget_nine_heap_nine() {
        let table = solve(tb(9), 9);
        assert_eq!(value(&table, &pos(9, 9, 6, Side::Left)).unwrap(), 1);
        assert_eq!(value(&table, &pos(9, 9, 4, Side::Right)).unwrap(), -1);
    }

    #[test]
    fn value_lookups() {
        let table = solve(tb(5), 2);
        assert_eq!(value(&table, &pos(5, 1, 2, Side::Left)).unwrap(), -1);
        assert_eq!(value(&table, &pos(5, 1, 2, Side::Right)).unwrap(), -1);
        assert_eq!(value(&table, &pos(5, 0, 3, Side::Right)).unwrap(), 0);
        assert_eq!(
            value(&table, &pos(5, 3, 3, Side::Right)),
            Err(BcsError::OutOfRange { heap: 3, x_max: 2 })
        );
    }

    #[test]
    fn equilibrium_bid_examples() {
        let table = solve(tb(9), 9);
        let bids = equilibrium_bids(&table, &pos(9, 9, 6, Side::Left)).unwrap();
        let mut lefts: Vec<usize> = bids.iter().map(|b| b.left_bid).collect();
        lefts.dedup();
        assert_eq!(lefts, vec![0, 1, 2]);
        assert_eq!(table.cell(9, 6).canonical_bid.unwrap().left_bid, 0);

        let table = solve(tb(5), 2);
        let c = table.cell(2, 1);
        assert_eq!(c.value, 0);
        assert_eq!(
            c.canonical_bid,
            Some(BidPair {
                left_bid: 1,
                right_bid: 1,
                winner: Winner::LeftTie
            })
        );

        let table = solve(tb(4), 1);
        let bids = equilibrium_bids(&table, &pos(4, 1, 4, Side::Left)).unwrap();
        assert!(bids.contains(&BidPair {
            left_bid: 0,
            right_bid: 0,
            winner: Winner::LeftTie
        }));
        assert_eq!(equilibrium_bids(&table, &pos(4, 0, 4, Side::Left)), Err(BcsError::EmptyHeap));
    }

    #[test]
    fn equilibrium_bids_realise_value() {
        let table = solve(tb(7), 12);
        for x in 1..=12 {
            for p in 0..=7 {
                for marker in [Side::Left, Side::Right] {
                    let at = pos(7, x, p, marker);
                    let v = value(&table, &at).unwrap();
                    let bids = equilibrium_bids(&table, &at).unwrap();
                    assert!(!bids.is_empty());
                    for b in bids {
                        assert_eq!(table.continuation(&at, b.left_bid, b.right_bid).unwrap(), v);
                    }
                }
            }
        }
    }

    #[test]
    fn tie_conditioned_examples() {
        let table = solve(tb(5), 2);
        assert_eq!(tie_conditioned_value(&table, &pos(5, 2, 1, Side::Left), 1).unwrap(), 0);
        // Right would deviate from this tie, so it is not the cell value.
        assert_eq!(tie_conditioned_value(&table, &pos(5, 2, 1, Side::Left), 0).unwrap(), 0);
        assert_eq!(tie_conditioned_value(&table, &pos(5, 1, 5, Side::Left), 0).unwrap(), 1);
        assert!(matches!(
            tie_conditioned_value(&table, &pos(5, 2, 1, Side::Left), 2),
            Err(BcsError::InfeasibleBid { .. })
        ));
        assert_eq!(
            tie_conditioned_value(&table, &pos(5, 2, 1, Side::Right), 0),
            Err(BcsError::RequiresLeftMarker)
        );
    }

    #[test]
    fn engine_bids() {
        let table = solve(tb(5), 2);
        assert_eq!(engine_bid(&table, &pos(5, 2, 1, Side::Left), Side::Left).unwrap(), 1);
        let table = solve(tb(9), 9);
        assert_eq!(engine_bid(&table, &pos(9, 9, 6, Side::Left), Side::Left).unwrap(), 0);
        let table = solve(tb(0), 3);
        assert_eq!(engine_bid(&table, &pos(0, 3, 0, Side::Left), Side::Right).unwrap(), 0);
    }

    #[test]
    fn limit_rows_budget_eight() {
        let limits = limit_rows(tb(8)).unwrap();
        assert_eq!(reversed(&limits.even), vec![4, 4, 2, 2, 0, 0, -2, -2, -4]);
        assert_eq!(reversed(&limits.odd), vec![5, 3, 3, 1, 1, -1, -1, -3, -3]);
        assert_eq!(limits.bound, 17);
        assert!(limits.x_star <= 19);
    }

    #[test]
    fn limit_rows_budget_nine() {
        let limits = limit_rows(tb(9)).unwrap();
        assert_eq!(reversed(&limits.even), vec![6, 4, 4, 2, 2, 0, -2, -2, -4, -4]);
        assert_eq!(reversed(&limits.odd), vec![5, 5, 3, 3, 1, -1, -1, -3, -3, -5]);
    }

    #[test]
    fn limit_rows_budget_zero() {
        let limits = limit_rows(tb(0)).unwrap();
        assert_eq!(limits.even, vec![0]);
        assert_eq!(limits.odd, vec![1]);
        assert!(limits.x_star <= 2);
    }

    #[test]
    fn stream_matches_table() {
        let table = solve(tb(6), 15);
        assert_eq!(table.rows(), solve_values(tb(6), 15));
        assert!(table.outcome_table().rows.iter().all(|r| r.is_zero_sum()));
    }
}
