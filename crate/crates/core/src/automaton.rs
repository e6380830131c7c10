//! Closed forms for limit outcomes, the 0-bidding automaton and the explicit
//! convergence bound.
//!
//! The automaton has one node per Left budget `p` and a state per heap parity.
//! Its only transition is the 0-tie `(j, p) -> (j^c, tb - p)` with update
//! `A(j, p) = 1 - A(j^c, tb - p)`.

use serde::{Deserialize, Serialize};

use crate::error::{BcsError, Result};
use crate::position::{Score, TotalBudget};
use crate::unitary::limit_rows;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(x: usize) -> Parity {
        if x.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn other(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

/// How `δ mod 4` is classified for negative `δ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResidueMode {
    /// Non-negative residue, `δ.rem_euclid(4)`.
    Euclidean,
    /// Sign-following remainder, `δ % 4`.
    Truncated,
}

impl ResidueMode {
    pub const ALL: [ResidueMode; 2] = [ResidueMode::Euclidean, ResidueMode::Truncated];

    fn residue(self, delta: i64) -> i64 {
        match self {
            ResidueMode::Euclidean => delta.rem_euclid(4),
            ResidueMode::Truncated => delta % 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ResidueMode::Euclidean => "euclidean",
            ResidueMode::Truncated => "truncated",
        }
    }
}

fn floor_half(a: i64) -> i64 {
    a.div_euclid(2)
}

fn ceil_half(a: i64) -> i64 {
    -(-a).div_euclid(2)
}

fn require_even(delta: i64) -> Result<()> {
    if delta % 2 != 0 {
        return Err(BcsError::ParityError {
            delta,
            expected: "even",
        });
    }
    Ok(())
}

/// Limit value for even heaps and even `tb`, at `δ = 2p - tb`.
pub fn alpha_even(delta: i64) -> Result<Score> {
    require_even(delta)?;
    Ok(if delta.rem_euclid(4) == 0 {
        floor_half(delta + 1)
    } else {
        ceil_half(delta + 1)
    })
}

/// Limit value for odd heaps and even `tb`, at `δ = 2p - tb`.
pub fn alpha_odd(delta: i64) -> Result<Score> {
    require_even(delta)?;
    Ok(if delta.rem_euclid(4) == 0 {
        ceil_half(delta + 1)
    } else {
        floor_half(delta + 1)
    })
}

/// Closed form for odd `tb`, at odd `δ = 2p - tb`.
pub fn beta(delta: i64, mode: ResidueMode) -> Result<Score> {
    if delta % 2 == 0 {
        return Err(BcsError::ParityError {
            delta,
            expected: "odd",
        });
    }
    let positive = Score::from(delta > 0);
    Ok(if mode.residue(delta) == 1 {
        floor_half(delta) + positive
    } else {
        ceil_half(delta) + positive
    })
}

/// `B(tb)`: heap size by which the outcome rows have reached period 2.
///
/// For odd `tb` the `tb/2` term is taken as `⌊tb/2⌋`.
pub fn convergence_bound(tb: TotalBudget) -> usize {
    let tb = tb.get();
    let half = tb / 2;
    if tb.is_multiple_of(2) {
        1 + (half + 1) * half - half
    } else {
        let up = tb.div_ceil(2);
        1 + up * up - half
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomatonTable {
    pub tb: TotalBudget,
    /// `A(even, p)` indexed by `p`.
    pub even: Vec<Score>,
    pub odd: Vec<Score>,
}

impl AutomatonTable {
    pub fn get(&self, parity: Parity, p: usize) -> Score {
        match parity {
            Parity::Even => self.even[p],
            Parity::Odd => self.odd[p],
        }
    }

    /// `A(j, p) = 1 - A(j^c, tb - p)` for both states and every node.
    pub fn update_consistent(&self) -> bool {
        let tb = self.tb.get();
        (0..=tb).all(|p| {
            self.even[p] == 1 - self.odd[tb - p] && self.odd[p] == 1 - self.even[tb - p]
        })
    }

    /// Apply the 0-tie update to fill the odd states from the even ones.
    fn from_even(tb: TotalBudget, even: Vec<Score>) -> Self {
        let n = tb.get();
        let odd = (0..=n).map(|p| 1 - even[n - p]).collect();
        AutomatonTable { tb, even, odd }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Seed {
    /// Even states from `α_even` (even `tb`) or `β` (odd `tb`).
    AlphaBeta(ResidueMode),
    /// Both states copied from the solver's limit rows.
    FromSolverLimits,
}

pub fn automaton_fixed_point(tb: TotalBudget, seed: Seed) -> Result<AutomatonTable> {
    let n = tb.get();
    let delta = |p: usize| 2 * p as i64 - n as i64;
    match seed {
        Seed::AlphaBeta(mode) => {
            let even = (0..=n)
                .map(|p| {
                    if n.is_multiple_of(2) {
                        alpha_even(delta(p))
                    } else {
                        beta(delta(p), mode)
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(AutomatonTable::from_even(tb, even))
        }
        Seed::FromSolverLimits => {
            let limits = limit_rows(tb)?;
            Ok(AutomatonTable {
                tb,
                even: limits.even,
                odd: limits.odd,
            })
        }
    }
}

/// `A(parity, p)` of the closed-form automaton (Euclidean residues).
///
/// Claimed as an upper bound on `ô_p(x)` when `2p >= tb` and a lower bound
/// otherwise, for heaps of the given parity.
pub fn outcome_bounds(tb: TotalBudget, p: usize, parity: Parity) -> Score {
    let table = automaton_fixed_point(tb, Seed::AlphaBeta(ResidueMode::Euclidean))
        .expect("closed forms are defined for every budget");
    table.get(parity, p)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellDiff {
    pub parity: Parity,
    pub p: usize,
    pub automaton: Score,
    pub limit: Score,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    /// `alpha`, `beta-euclidean` or `beta-truncated`.
    pub label: String,
    pub duality_holds: bool,
    pub matches: bool,
    pub diffs: Vec<CellDiff>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub tb: TotalBudget,
    pub bound: usize,
    pub x_star: Option<usize>,
    pub limits_match_automaton: bool,
    pub comparisons: Vec<Comparison>,
    /// Solver limits satisfy the automaton update rule.
    pub update_rule_closure: bool,
    /// Set when the limit rows could not be established.
    pub error: Option<String>,
}

fn compare(label: String, duality_holds: bool, automaton: &AutomatonTable, limits: &AutomatonTable) -> Comparison {
    let mut diffs = Vec::new();
    for parity in [Parity::Even, Parity::Odd] {
        for p in 0..=automaton.tb.get() {
            let (a, l) = (automaton.get(parity, p), limits.get(parity, p));
            if a != l {
                diffs.push(CellDiff {
                    parity,
                    p,
                    automaton: a,
                    limit: l,
                });
            }
        }
    }
    Comparison {
        label,
        duality_holds,
        matches: diffs.is_empty(),
        diffs,
    }
}

/// Compare the solver's limit rows with the closed-form automaton. Never
/// fails: mismatches are reported cell by cell.
pub fn test_conjecture(tb: TotalBudget) -> ConvergenceReport {
    let bound = convergence_bound(tb);
    let limits = match automaton_fixed_point(tb, Seed::FromSolverLimits) {
        Ok(l) => l,
        Err(e) => {
            return ConvergenceReport {
                tb,
                bound,
                x_star: None,
                limits_match_automaton: false,
                comparisons: Vec::new(),
                update_rule_closure: false,
                error: Some(e.to_string()),
            }
        }
    };
    let x_star = limit_rows(tb).ok().map(|l| l.x_star);
    let comparisons: Vec<Comparison> = if tb.get().is_multiple_of(2) {
        let a = automaton_fixed_point(tb, Seed::AlphaBeta(ResidueMode::Euclidean)).expect("closed form");
        vec![compare("alpha".into(), alpha_duality_holds(tb), &a, &limits)]
    } else {
        ResidueMode::ALL
            .iter()
            .map(|&mode| {
                let a = automaton_fixed_point(tb, Seed::AlphaBeta(mode)).expect("closed form");
                compare(format!("beta-{}", mode.name()), beta_duality_holds(tb, mode), &a, &limits)
            })
            .collect()
    };
    ConvergenceReport {
        tb,
        bound,
        x_star,
        limits_match_automaton: comparisons.iter().any(|c| c.matches),
        comparisons,
        update_rule_closure: limits.update_consistent(),
        error: None,
    }
}

/// `α_even(δ) = 1 - α_odd(-δ)` over the even `δ` in `[-tb, tb]`.
pub fn alpha_duality_holds(tb: TotalBudget) -> bool {
    let n = tb.get() as i64;
    (-n..=n)
        .filter(|d| d % 2 == 0)
        .all(|d| alpha_even(d).unwrap() == 1 - alpha_odd(-d).unwrap())
}

/// `β(δ) = 1 - β(-δ)` over the odd `δ` in `[-tb, tb]`.
pub fn beta_duality_holds(tb: TotalBudget, mode: ResidueMode) -> bool {
    let n = tb.get() as i64;
    (-n..=n)
        .filter(|d| d % 2 != 0)
        .all(|d| beta(d, mode).unwrap() == 1 - beta(-d, mode).unwrap())
}
