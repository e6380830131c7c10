//! Invariant checks over solved unitary tables, forced-win thresholds and
//! the feasible/dominated bid graphs.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::position::{Score, Side, TotalBudget};
use crate::unitary::solve_values;

/// A failing cell and the values that were compared there.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub x: usize,
    pub p: usize,
    pub values: Vec<Score>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub name: String,
    pub tb: usize,
    /// Inclusive heap range checked.
    pub x_range: (usize, usize),
    /// Inclusive budget range checked.
    pub p_range: (usize, usize),
    pub passed: bool,
    pub counterexample: Option<Counterexample>,
}

/// Names of the invariants checked by [`check_invariants`], in report order.
pub const INVARIANTS: [&str; 10] = [
    "budget_monotonicity",
    "tie_monotonicity",
    "marker_monotonicity",
    "marker_dominance",
    "marker_worth",
    "sign_border",
    "bounded_outcome",
    "parity",
    "heap_monotonicity",
    "budget_increment",
];

struct View<'a> {
    tb: usize,
    rows: &'a [Vec<Score>],
}

impl View<'_> {
    fn hat(&self, x: usize, p: usize) -> Score {
        self.rows[x][p]
    }

    /// Right holds the marker.
    fn plain(&self, x: usize, p: usize) -> Score {
        -self.rows[x][self.tb - p]
    }
}

type Check = fn(&View, usize, usize) -> Option<(Vec<Score>, String)>;

fn budget_monotonicity(v: &View, x: usize, p: usize) -> Option<(Vec<Score>, String)> {
    if p == 0 {
        return None;
    }
    let (a, b) = (v.hat(x, p), v.hat(x, p - 1));
    if a < b {
        return Some((vec![a, b], "marker-Left value drops as p grows".into()));
    }
    let (a, b) = (v.plain(x, p), v.plain(x, p - 1));
    (a < b).then(|| (vec![a, b], "marker-Right value drops as p grows".into()))
}

fn tie_monotonicity(v: &View, x: usize, p: usize) -> Option<(Vec<Score>, String)> {
    if x == 0 {
        return None;
    }
    let q = v.tb - p;
    (1..=p).find_map(|l| {
        let t = 1 - v.hat(x - 1, q + l);
        let t_less = 1 - v.hat(x - 1, q + l - 1);
        (t > t_less).then(|| (vec![t, t_less], format!("tie at {l} beats tie at {}", l - 1)))
    })
}

fn marker_monotonicity(v: &View, x: usize, p: usize) -> Option<(Vec<Score>, String)> {
    let (h, n) = (v.hat(x, p), v.plain(x, p));
    (!(n <= h && h <= n + 2)).then(|| (vec![h, n], "marker worth outside [0, 2]".into()))
}

fn marker_dominance(v: &View, x: usize, p: usize) -> Option<(Vec<Score>, String)> {
    let q = v.tb - p;
    let h = v.hat(x, p);
    (0..=p).find_map(|l| {
        let other = -v.hat(x, q + l);
        (h < other).then(|| (vec![h, other], format!("below the negated value at budget {}", q + l)))
    })
}

fn marker_worth(v: &View, x: usize, p: usize) -> Option<(Vec<Score>, String)> {
    if p == v.tb {
        return None;
    }
    let (h, n) = (v.hat(x, p), v.plain(x, p + 1));
    (h > n).then(|| (vec![h, n], "marker worth more than a dollar".into()))
}

fn sign_border(v: &View, x: usize, p: usize) -> Option<(Vec<Score>, String)> {
    let h = v.hat(x, p);
    let strict = x % 2 == 1;
    let ok = if 2 * p >= v.tb {
        h > 0 || (!strict && h == 0)
    } else {
        h < 0 || (!strict && h == 0)
    };
    (!ok).then(|| (vec![h], "wrong side of the sign border".into()))
}

fn bounded_outcome(v: &View, x: usize, p: usize) -> Option<(Vec<Score>, String)> {
    let h = v.hat(x, p);
    let lower = -((v.tb / 2) as Score);
    let upper = v.tb.div_ceil(2) as Score + 1;
    (!(lower <= h && h <= upper)).then(|| (vec![h, lower, upper], "outside the outcome bounds".into()))
}

fn parity(v: &View, x: usize, p: usize) -> Option<(Vec<Score>, String)> {
    let h = v.hat(x, p);
    (h.rem_euclid(2) as usize != x % 2).then(|| (vec![h], "parity differs from the heap".into()))
}

fn heap_monotonicity(v: &View, x: usize, p: usize) -> Option<(Vec<Score>, String)> {
    if x < 2 {
        return None;
    }
    let (now, before) = (v.hat(x, p), v.hat(x - 2, p));
    let ok = if 2 * p >= v.tb { now >= before } else { now <= before };
    (!ok).then(|| (vec![now, before], "moves against the sign border".into()))
}

fn budget_increment(v: &View, x: usize, p: usize) -> Option<(Vec<Score>, String)> {
    if p == v.tb {
        return None;
    }
    let (a, b) = (v.hat(x, p), v.hat(x, p + 1));
    (a + 2 < b).then(|| (vec![a, b], "one dollar gains more than two".into()))
}

const CHECKS: [Check; 10] = [
    budget_monotonicity,
    tie_monotonicity,
    marker_monotonicity,
    marker_dominance,
    marker_worth,
    sign_border,
    bounded_outcome,
    parity,
    heap_monotonicity,
    budget_increment,
];

/// Check every invariant on marker-Left rows `rows[x][p]`, `x = 0..`.
pub fn check_invariants(tb: TotalBudget, rows: &[Vec<Score>]) -> Vec<InvariantReport> {
    let tb = tb.get();
    let view = View { tb, rows };
    let x_max = rows.len().saturating_sub(1);
    INVARIANTS
        .iter()
        .zip(CHECKS)
        .map(|(name, check)| {
            let counterexample = (0..rows.len())
                .flat_map(|x| (0..=tb).map(move |p| (x, p)))
                .find_map(|(x, p)| {
                    check(&view, x, p).map(|(values, detail)| Counterexample { x, p, values, detail })
                });
            InvariantReport {
                name: name.to_string(),
                tb,
                x_range: (0, x_max),
                p_range: (0, tb),
                passed: counterexample.is_none(),
                counterexample,
            }
        })
        .collect()
}

pub fn run_invariant_suite(tb: TotalBudget, x_max: usize) -> Vec<InvariantReport> {
    check_invariants(tb, &solve_values(tb, x_max))
}

/// Marker-Left values from the full three-branch recursion with every
/// dominated bid removed: `ℓ ≤ q + 1` and `r ≤ p + 1`.
pub fn undominated_values(tb: TotalBudget, x_max: usize) -> Vec<Vec<Score>> {
    let tb = tb.get();
    let mut hat = vec![vec![0 as Score; tb + 1]];
    let mut plain = vec![0 as Score; tb + 1];
    for _ in 1..=x_max {
        let prev_hat = hat.last().unwrap().clone();
        let prev_plain = plain.clone();
        let mut next_hat = vec![0; tb + 1];
        let mut next_plain = vec![0; tb + 1];
        for p in 0..=tb {
            let q = tb - p;
            let value = |marker: Side| {
                (0..=p.min(q + 1))
                    .map(|l| {
                        (0..=q.min(p + 1))
                            .map(|r| match (l.cmp(&r), marker) {
                                (std::cmp::Ordering::Greater, Side::Left) => prev_hat[p - l] + 1,
                                (std::cmp::Ordering::Greater, Side::Right) => prev_plain[p - l] + 1,
                                (std::cmp::Ordering::Equal, Side::Left) => prev_plain[p - l] + 1,
                                (std::cmp::Ordering::Equal, Side::Right) => prev_hat[p + r] - 1,
                                (std::cmp::Ordering::Less, Side::Left) => prev_hat[p + r] - 1,
                                (std::cmp::Ordering::Less, Side::Right) => prev_plain[p + r] - 1,
                            })
                            .min()
                            .unwrap()
                    })
                    .max()
                    .unwrap()
            };
            next_hat[p] = value(Side::Left);
            next_plain[p] = value(Side::Right);
        }
        hat.push(next_hat);
        plain = next_plain;
    }
    hat
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForcedWinThreshold {
    pub x: usize,
    pub q: usize,
    pub marker: Side,
    pub threshold: usize,
}

/// The least Left budget that wins the last `x` moves against `q`.
pub fn forced_win_threshold(x: usize, q: usize, marker: Side) -> ForcedWinThreshold {
    assert!(x >= 1, "at least one move");
    let span = (1usize << x) - 1;
    let threshold = match marker {
        Side::Left => span * q + (1 << (x - 1)) - 1,
        Side::Right => span * (q + 1),
    };
    ForcedWinThreshold { x, q, marker, threshold }
}

/// Exhaustive search: can Left win each of the next `x` bids whatever Right
/// bids?
#[derive(Debug, Default)]
pub struct ForcedWinSearch {
    memo: HashMap<(usize, usize, usize, Side), bool>,
}

impl ForcedWinSearch {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn forced(&mut self, x: usize, p: usize, q: usize, marker: Side) -> bool {
        if x == 0 {
            return true;
        }
        if let Some(&v) = self.memo.get(&(x, p, q, marker)) {
            return v;
        }
        let v = (0..=p).any(|l| {
            (0..=q).all(|r| {
                let wins = l > r || (l == r && marker == Side::Left);
                let next_marker = if l == r { marker.other() } else { marker };
                wins && self.forced(x - 1, p - l, q + l, next_marker)
            })
        });
        self.memo.insert((x, p, q, marker), v);
        v
    }
}

/// Compare the search with the closed-form threshold on every split of `tb`.
pub fn verify_forced_wins(tb: TotalBudget, x: usize) -> InvariantReport {
    let tb = tb.get();
    let mut search = ForcedWinSearch::new();
    let counterexample = (0..=tb)
        .flat_map(|p| [Side::Left, Side::Right].map(|m| (p, m)))
        .find_map(|(p, marker)| {
            let q = tb - p;
            let threshold = forced_win_threshold(x, q, marker).threshold;
            let forced = search.forced(x, p, q, marker);
            (forced != (p >= threshold)).then(|| Counterexample {
                x,
                p,
                values: vec![threshold as Score, forced as Score],
                detail: format!("marker {marker:?}: threshold {threshold}, search says forced = {forced}"),
            })
        });
    InvariantReport {
        name: "forced_wins".into(),
        tb,
        x_range: (x, x),
        p_range: (0, tb),
        passed: counterexample.is_none(),
        counterexample,
    }
}

/// The threshold forces the win and one dollar less does not.
pub fn threshold_is_sharp(search: &mut ForcedWinSearch, x: usize, q: usize, marker: Side) -> bool {
    let t = forced_win_threshold(x, q, marker).threshold;
    search.forced(x, t, q, marker) && (t == 0 || !search.forced(x, t - 1, q, marker))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BidKind {
    Tie,
    HolderWins,
    OpponentWins,
}

impl BidKind {
    fn suffix(self) -> char {
        match self {
            BidKind::Tie => 'T',
            BidKind::HolderWins | BidKind::OpponentWins => 'W',
        }
    }
}

/// A transition between marker-holder budgets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BidEdge {
    pub kind: BidKind,
    pub bid: usize,
    pub from: usize,
    pub to: usize,
    pub dominated: bool,
}

impl BidEdge {
    pub fn label(&self) -> String {
        format!("{}{}", self.bid, self.kind.suffix())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BidGraph {
    pub tb: usize,
    pub kind: BidKind,
    pub bid: usize,
    pub reduced: bool,
    pub nodes: Vec<usize>,
    pub edges: Vec<BidEdge>,
}

/// Nodes are the marker holder's budget `m`; the opponent holds `tb - m`.
pub fn bid_graph(tb: TotalBudget, kind: BidKind, bid: usize, reduced: bool) -> BidGraph {
    let tb = tb.get();
    let edges = (0..=tb)
        .filter_map(|m| {
            let opp = tb - m;
            match kind {
                BidKind::Tie => (bid <= m && bid <= opp).then(|| (opp + bid, false)),
                BidKind::HolderWins => (bid >= 1 && bid <= m).then(|| (m - bid, bid > opp + 1)),
                BidKind::OpponentWins => (bid >= 1 && bid <= opp).then(|| (m + bid, bid > m + 1)),
            }
            .map(|(to, dominated)| BidEdge {
                kind,
                bid,
                from: m,
                to,
                dominated,
            })
        })
        .filter(|e| !(reduced && e.dominated))
        .collect();
    BidGraph {
        tb,
        kind,
        bid,
        reduced,
        nodes: (0..=tb).collect(),
        edges,
    }
}

impl BidGraph {
    /// DOT digraph; an edge present in both directions is drawn once with
    /// `dir=both`.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph bids_tb{}_{}{} {{", self.tb, self.bid, self.kind.suffix());
        let _ = writeln!(out, "  rankdir=RL;");
        for n in &self.nodes {
            let _ = writeln!(out, "  {n} [label=\"{n}\"];");
        }
        let mut drawn = vec![false; self.edges.len()];
        for (i, e) in self.edges.iter().enumerate() {
            if drawn[i] {
                continue;
            }
            drawn[i] = true;
            let twin = (e.from != e.to)
                .then(|| {
                    self.edges
                        .iter()
                        .enumerate()
                        .position(|(j, o)| !drawn[j] && o.from == e.to && o.to == e.from)
                })
                .flatten();
            let style = if e.dominated { ", style=dashed" } else { "" };
            match twin {
                Some(j) => {
                    drawn[j] = true;
                    let _ = writeln!(out, "  {} -> {} [label=\"{}\", dir=both{style}];", e.from, e.to, e.label());
                }
                None => {
                    let _ = writeln!(out, "  {} -> {} [label=\"{}\"{style}];", e.from, e.to, e.label());
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tb(n: usize) -> TotalBudget {
        TotalBudget::new(n)
    }

    #[test]
    fn suite_passes_even_budgets() {
        for (t, x_max) in [(0, 10), (4, 20), (8, 30)] {
            for r in run_invariant_suite(tb(t), x_max) {
                assert!(r.passed, "tb={t}: {r:?}");
            }
        }
    }

    #[test]
    fn budget_five_fails_only_the_lower_bound() {
        let reports = run_invariant_suite(tb(5), 30);
        for r in &reports {
            assert_eq!(r.passed, r.name != "bounded_outcome", "{r:?}");
        }
        let c = reports[6].counterexample.as_ref().unwrap();
        assert_eq!((c.x, c.p), (5, 0));
        assert_eq!(c.values, vec![-3, -2, 4]);
    }

    #[test]
    fn suite_catches_a_planted_fault() {
        let mut rows = solve_values(tb(5), 6);
        rows[3][4] = 7;
        let failed: Vec<String> = check_invariants(tb(5), &rows)
            .into_iter()
            .filter(|r| !r.passed)
            .map(|r| r.name)
            .collect();
        assert!(failed.contains(&"bounded_outcome".to_string()));
        assert!(failed.contains(&"budget_increment".to_string()));
    }

    #[test]
    fn odd_budget_lower_bound_is_exceeded() {
        let reports = run_invariant_suite(tb(9), 24);
        let bound = reports.iter().find(|r| r.name == "bounded_outcome").unwrap();
        let c = bound.counterexample.as_ref().unwrap();
        assert_eq!(c.values[1], -4);
        assert!(c.values[0] < -4);
        assert!(reports.iter().filter(|r| r.name != "bounded_outcome").all(|r| r.passed));
    }

    #[test]
    fn thresholds() {
        assert_eq!(forced_win_threshold(1, 7, Side::Left).threshold, 7);
        assert_eq!(forced_win_threshold(2, 1, Side::Left).threshold, 4);
        assert_eq!(forced_win_threshold(2, 1, Side::Right).threshold, 6);
        assert_eq!(forced_win_threshold(5, 0, Side::Left).threshold, 15);
        for q in 0..5 {
            assert_eq!(forced_win_threshold(2, q, Side::Left).threshold, 3 * q + 1);
            assert_eq!(forced_win_threshold(3, q, Side::Left).threshold, 7 * q + 3);
            assert_eq!(forced_win_threshold(2, q, Side::Right).threshold, 3 * q + 3);
            assert_eq!(forced_win_threshold(3, q, Side::Right).threshold, 7 * q + 7);
        }
    }

    #[test]
    fn forced_win_examples() {
        let mut s = ForcedWinSearch::new();
        assert!(s.forced(5, 15, 0, Side::Left));
        assert!(!s.forced(5, 14, 0, Side::Left));
        assert!(s.forced(1, 2, 2, Side::Left));
        assert!(!s.forced(1, 1, 3, Side::Left));
        assert!(verify_forced_wins(tb(31), 5).passed);
        assert!(verify_forced_wins(tb(4), 1).passed);
        assert!(verify_forced_wins(tb(7), 2).passed);
        for x in 1..=4 {
            for q in 0..=6 {
                assert!(threshold_is_sharp(&mut s, x, q, Side::Left), "x={x} q={q}");
                assert!(threshold_is_sharp(&mut s, x, q, Side::Right), "x={x} q={q}");
            }
        }
    }

    fn pairs(g: &BidGraph) -> Vec<(usize, usize)> {
        g.edges.iter().map(|e| (e.from, e.to)).collect()
    }

    #[test]
    fn tie_graphs() {
        let g = bid_graph(tb(5), BidKind::Tie, 0, false);
        assert_eq!(pairs(&g), vec![(0, 5), (1, 4), (2, 3), (3, 2), (4, 1), (5, 0)]);
        let g = bid_graph(tb(5), BidKind::Tie, 2, false);
        assert_eq!(pairs(&g), vec![(2, 5), (3, 4)]);
        let g = bid_graph(tb(5), BidKind::Tie, 1, false);
        assert_eq!(pairs(&g), vec![(1, 5), (2, 4), (3, 3), (4, 2)]);
        assert!(bid_graph(tb(1), BidKind::Tie, 1, false).edges.is_empty());
    }

    #[test]
    fn zero_tie_is_an_involution() {
        for t in 0..12 {
            let g = bid_graph(tb(t), BidKind::Tie, 0, false);
            let next: HashMap<usize, usize> = g.edges.iter().map(|e| (e.from, e.to)).collect();
            assert_eq!(next.len(), t + 1);
            assert!(next.iter().all(|(a, b)| next[b] == *a));
        }
    }

    #[test]
    fn reduced_win_graphs() {
        let g = bid_graph(tb(5), BidKind::HolderWins, 3, true);
        assert_eq!(pairs(&g), vec![(3, 0)]);
        let g = bid_graph(tb(5), BidKind::HolderWins, 2, true);
        assert_eq!(pairs(&g), vec![(2, 0), (3, 1), (4, 2)]);
        assert!(bid_graph(tb(5), BidKind::HolderWins, 4, true).edges.is_empty());
        let g = bid_graph(tb(5), BidKind::OpponentWins, 2, true);
        assert_eq!(pairs(&g), vec![(1, 3), (2, 4), (3, 5)]);
        let g = bid_graph(tb(5), BidKind::OpponentWins, 3, true);
        assert_eq!(pairs(&g), vec![(2, 5)]);
        assert_eq!(bid_graph(tb(5), BidKind::OpponentWins, 1, true).edges.len(), 5);
    }

    #[test]
    fn dot_merges_bidirectional_edges() {
        let dot = bid_graph(tb(5), BidKind::Tie, 0, false).to_dot();
        assert_eq!(dot.matches("dir=both").count(), 3);
        assert_eq!(dot.matches("->").count(), 3);
        assert!(dot.contains("label=\"0T\""));
        let dot = bid_graph(tb(5), BidKind::Tie, 1, false).to_dot();
        assert!(dot.contains("3 -> 3 [label=\"1T\"]"));
        assert!(dot.contains("1 -> 5 [label=\"1T\"]"));
        let dot = bid_graph(tb(5), BidKind::HolderWins, 2, false).to_dot();
        assert!(dot.contains("label=\"2W\""));
        assert!(dot.contains("style=dashed"));
    }

    #[test]
    fn dominated_bids_do_not_matter() {
        for t in 0..=8 {
            assert_eq!(undominated_values(tb(t), 24), solve_values(tb(t), 24), "tb={t}");
        }
    }
}
