use serde::{Deserialize, Serialize};

use crate::position::{Score, TotalBudget};

/// Equilibrium values for one heap size, indexed by Left's budget `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeRow {
    pub heap: usize,
    /// Left holds the marker.
    pub marker_left: Vec<Score>,
    /// Right holds the marker.
    pub marker_right: Vec<Score>,
}

impl OutcomeRow {
    /// Build a row of a symmetric game from its marker-Left half.
    pub fn from_marker_left(heap: usize, marker_left: Vec<Score>) -> Self {
        let marker_right = marker_left.iter().rev().map(|v| -v).collect();
        OutcomeRow {
            heap,
            marker_left,
            marker_right,
        }
    }

    /// `marker_right[p] == -marker_left[tb - p]` for every `p`.
    pub fn is_zero_sum(&self) -> bool {
        let tb = self.marker_left.len().saturating_sub(1);
        self.marker_left.len() == self.marker_right.len()
            && (0..=tb).all(|p| self.marker_right[p] == -self.marker_left[tb - p])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeTable {
    pub tb: TotalBudget,
    pub rows: Vec<OutcomeRow>,
}

impl OutcomeTable {
    pub fn from_marker_left_rows(tb: TotalBudget, rows: Vec<Vec<Score>>) -> Self {
        OutcomeTable {
            tb,
            rows: rows
                .into_iter()
                .enumerate()
                .map(|(x, row)| OutcomeRow::from_marker_left(x, row))
                .collect(),
        }
    }

    pub fn x_max(&self) -> usize {
        self.rows.len().saturating_sub(1)
    }

    pub fn marker_left_rows(&self) -> Vec<Vec<Score>> {
        self.rows.iter().map(|r| r.marker_left.clone()).collect()
    }
}
