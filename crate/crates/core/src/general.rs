//! Maximin and minimax evaluation on arbitrary finite acyclic rulesets.
//!
//! A ruleset is a directed acyclic move graph with separate Left and Right
//! edges, an integer weight per edge, a penalty per node (scored when the
//! player who wins the bid has no move there) and a common set of legal bids.
//! Values are computed bottom-up over a topological order, one vector of
//! `tb + 1` entries per node and marker holder.

use std::collections::HashMap;

use petgraph::algo::toposort;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};

use crate::error::{BcsError, Result};
use crate::position::{RichmanPosition, Score, Side, TotalBudget};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    pub to: usize,
    pub weight: Score,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralRuleset {
    tb: TotalBudget,
    names: Vec<String>,
    left: Vec<Vec<Move>>,
    right: Vec<Vec<Move>>,
    penalty: Vec<Score>,
    bids: Vec<usize>,
    /// Successors before predecessors.
    order: Vec<usize>,
}

/// Incremental construction of a [`GeneralRuleset`]. Nodes are created on
/// first mention and keep their insertion index.
#[derive(Debug, Clone, Default)]
pub struct RulesetBuilder {
    names: Vec<String>,
    index: HashMap<String, usize>,
    left: Vec<Vec<Move>>,
    right: Vec<Vec<Move>>,
    penalty: Vec<Score>,
    tb: Option<usize>,
    bids: Option<Vec<usize>>,
}

impl RulesetBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        self.left.push(Vec::new());
        self.right.push(Vec::new());
        self.penalty.push(0);
        i
    }

    pub fn terminal(&mut self, name: &str, penalty: Score) -> &mut Self {
        let i = self.node(name);
        self.penalty[i] = penalty;
        self
    }

    pub fn edge(&mut self, side: Side, from: &str, to: &str, weight: Score) -> &mut Self {
        let from = self.node(from);
        let to = self.node(to);
        let list = match side {
            Side::Left => &mut self.left[from],
            Side::Right => &mut self.right[from],
        };
        list.push(Move { to, weight });
        self
    }

    pub fn tb(&mut self, tb: usize) -> &mut Self {
        self.tb = Some(tb);
        self
    }

    /// Legal bids; `None` restores the default of every amount `0..=tb`.
    pub fn bids(&mut self, bids: Option<Vec<usize>>) -> &mut Self {
        self.bids = bids;
        self
    }

    pub fn build(&self) -> Result<GeneralRuleset> {
        let tb = self.tb.ok_or_else(|| BcsError::Ruleset("missing total budget".into()))?;
        let mut bids = self.bids.clone().unwrap_or_else(|| (0..=tb).collect());
        bids.sort_unstable();
        bids.dedup();
        if bids.is_empty() {
            return Err(BcsError::Ruleset("empty bid set".into()));
        }
        if let Some(&b) = bids.iter().find(|&&b| b > tb) {
            return Err(BcsError::Ruleset(format!("bid {b} exceeds total budget {tb}")));
        }
        if self.names.is_empty() {
            return Err(BcsError::Ruleset("no nodes".into()));
        }

        let mut graph = DiGraph::<usize, ()>::with_capacity(self.names.len(), 0);
        let ids: Vec<_> = (0..self.names.len()).map(|i| graph.add_node(i)).collect();
        for (from, moves) in self.left.iter().chain(self.right.iter()).enumerate() {
            let from = from % self.names.len();
            for m in moves {
                graph.add_edge(ids[from], ids[m.to], ());
            }
        }
        let sorted = toposort(&graph, None)
            .map_err(|cycle| BcsError::CyclicRuleset(self.names[graph[cycle.node_id()]].clone()))?;
        let order = sorted.into_iter().rev().map(|id| graph[id]).collect();

        Ok(GeneralRuleset {
            tb: TotalBudget::new(tb),
            names: self.names.clone(),
            left: self.left.clone(),
            right: self.right.clone(),
            penalty: self.penalty.clone(),
            bids,
            order,
        })
    }
}

impl GeneralRuleset {
    /// Subtraction game on heaps `0..=x_max`: either player may remove any
    /// `s` in `subtraction`, scoring `s` for Left and `-s` for Right. Node `x`
    /// is named and indexed by its heap size.
    pub fn subtraction(tb: usize, subtraction: &[usize], x_max: usize, bids: Option<Vec<usize>>) -> Result<Self> {
        let mut b = RulesetBuilder::new();
        for x in 0..=x_max {
            b.node(&x.to_string());
        }
        for x in 0..=x_max {
            for &s in subtraction {
                if s >= 1 && s <= x {
                    let (from, to) = (x.to_string(), (x - s).to_string());
                    b.edge(Side::Left, &from, &to, s as Score);
                    b.edge(Side::Right, &from, &to, -(s as Score));
                }
            }
        }
        b.tb(tb).bids(bids).build()
    }

    /// The unitary game: subtract one pebble, every bid legal.
    pub fn unitary(tb: usize, x_max: usize) -> Result<Self> {
        Self::subtraction(tb, &[1], x_max, None)
    }

    pub fn tb(&self) -> TotalBudget {
        self.tb
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, node: usize) -> &str {
        &self.names[node]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn bids(&self) -> &[usize] {
        &self.bids
    }

    pub fn moves(&self, side: Side, node: usize) -> &[Move] {
        match side {
            Side::Left => &self.left[node],
            Side::Right => &self.right[node],
        }
    }

    pub fn penalty(&self, node: usize) -> Score {
        self.penalty[node]
    }

    /// Same moves for both players, `w_R = -w_L`, and all penalties zero.
    pub fn is_symmetric(&self) -> bool {
        (0..self.len()).all(|x| {
            let mut l: Vec<(usize, Score)> = self.left[x].iter().map(|m| (m.to, m.weight)).collect();
            let mut r: Vec<(usize, Score)> = self.right[x].iter().map(|m| (m.to, -m.weight)).collect();
            l.sort_unstable();
            r.sort_unstable();
            l == r && self.penalty[x] == 0
        })
    }

    fn feasible_bids(&self, budget: usize) -> impl Iterator<Item = usize> + Clone + '_ {
        self.bids.iter().copied().take_while(move |&b| b <= budget)
    }
}

/// Which player commits first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Order {
    /// Left declares `(ℓ, y)`, Right responds.
    Maximin,
    /// Right declares `(r, z)`, Left responds.
    Minimax,
}

/// A node value, or the `(node, p)` of an unplayable state it depends on.
type Cell = std::result::Result<Score, (usize, usize)>;

fn fold_cells(cells: impl Iterator<Item = Cell>, pick: fn(Score, Score) -> Score) -> Option<Cell> {
    let mut acc: Option<Score> = None;
    for c in cells {
        let v = match c {
            Ok(v) => v,
            Err(e) => return Some(Err(e)),
        };
        acc = Some(acc.map_or(v, |a| pick(a, v)));
    }
    acc.map(Ok)
}

/// Value vectors for every node: `hat` with Left holding the marker, `plain`
/// with Right holding it, both indexed by Left's budget.
#[derive(Debug, Clone)]
pub struct GeneralValues {
    tb: TotalBudget,
    hat: Vec<Vec<Cell>>,
    plain: Vec<Vec<Cell>>,
}

impl GeneralValues {
    fn get(&self, ruleset: &GeneralRuleset, node: usize, p: usize, marker: Side) -> Result<Score> {
        let cell = match marker {
            Side::Left => self.hat[node][p],
            Side::Right => self.plain[node][p],
        };
        cell.map_err(|(n, p)| BcsError::InvalidRuleset {
            node: ruleset.name(n).to_string(),
            p,
        })
    }

    pub fn tb(&self) -> TotalBudget {
        self.tb
    }
}

struct Evaluator<'a> {
    rs: &'a GeneralRuleset,
    hat: Vec<Vec<Cell>>,
    plain: Vec<Vec<Cell>>,
}

impl Evaluator<'_> {
    fn lookup(&self, node: usize, p: usize, marker: Side) -> Cell {
        match marker {
            Side::Left => self.hat[node][p],
            Side::Right => self.plain[node][p],
        }
    }

    /// Outcome when `winner` moves from `x` along `mv` (or ends the game when
    /// it has no move), leaving Left with `p_next` and the marker with `marker`.
    fn after(&self, x: usize, mv: Option<Move>, p_next: usize, marker: Side) -> Cell {
        match mv {
            None => Ok(self.rs.penalty[x]),
            Some(m) => self.lookup(m.to, p_next, marker).map(|v| v + m.weight),
        }
    }

    fn options(&self, side: Side, x: usize) -> Vec<Option<Move>> {
        let moves = self.rs.moves(side, x);
        if moves.is_empty() {
            vec![None]
        } else {
            moves.iter().copied().map(Some).collect()
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn outcome(&self, x: usize, p: usize, marker: Side, l: usize, y: Option<Move>, r: usize, z: Option<Move>) -> Cell {
        let left_wins = l > r || (l == r && marker == Side::Left);
        let next_marker = if l == r { marker.other() } else { marker };
        if left_wins {
            self.after(x, y, p - l, next_marker)
        } else {
            self.after(x, z, p + r, next_marker)
        }
    }

    fn cell(&self, x: usize, p: usize, marker: Side, order: Order) -> Cell {
        let rs = self.rs;
        if rs.left[x].is_empty() && rs.right[x].is_empty() {
            return Ok(rs.penalty[x]);
        }
        let q = rs.tb.complement(p);
        let lbids: Vec<usize> = rs.feasible_bids(p).collect();
        let rbids: Vec<usize> = rs.feasible_bids(q).collect();
        let ys = self.options(Side::Left, x);
        let zs = self.options(Side::Right, x);

        match (lbids.is_empty(), rbids.is_empty()) {
            (true, true) => return Err((x, p)),
            (false, true) => {
                let all = lbids
                    .iter()
                    .flat_map(|&l| ys.iter().map(move |&y| self.after(x, y, p - l, marker)));
                return fold_cells(all, Score::max).unwrap_or(Err((x, p)));
            }
            (true, false) => {
                let all = rbids
                    .iter()
                    .flat_map(|&r| zs.iter().map(move |&z| self.after(x, z, p + r, marker)));
                return fold_cells(all, Score::min).unwrap_or(Err((x, p)));
            }
            (false, false) => {}
        }

        let lefts: Vec<(usize, Option<Move>)> = lbids.iter().flat_map(|&l| ys.iter().map(move |&y| (l, y))).collect();
        let rights: Vec<(usize, Option<Move>)> = rbids.iter().flat_map(|&r| zs.iter().map(move |&z| (r, z))).collect();
        let v = match order {
            Order::Maximin => fold_cells(
                lefts.iter().map(|&(l, y)| {
                    fold_cells(
                        rights.iter().map(|&(r, z)| self.outcome(x, p, marker, l, y, r, z)),
                        Score::min,
                    )
                    .expect("non-empty responses")
                }),
                Score::max,
            ),
            Order::Minimax => fold_cells(
                rights.iter().map(|&(r, z)| {
                    fold_cells(
                        lefts.iter().map(|&(l, y)| self.outcome(x, p, marker, l, y, r, z)),
                        Score::max,
                    )
                    .expect("non-empty responses")
                }),
                Score::min,
            ),
        };
        v.expect("non-empty declarations")
    }
}

/// Evaluate every node, budget and marker holder.
pub fn evaluate(ruleset: &GeneralRuleset, order: Order) -> GeneralValues {
    let n = ruleset.len();
    let width = ruleset.tb.get() + 1;
    let mut ev = Evaluator {
        rs: ruleset,
        hat: vec![vec![Ok(0); width]; n],
        plain: vec![vec![Ok(0); width]; n],
    };
    for &x in &ruleset.order {
        for p in 0..width {
            ev.hat[x][p] = ev.cell(x, p, Side::Left, order);
            ev.plain[x][p] = ev.cell(x, p, Side::Right, order);
        }
    }
    GeneralValues {
        tb: ruleset.tb,
        hat: ev.hat,
        plain: ev.plain,
    }
}

fn node_of(ruleset: &GeneralRuleset, pos: &RichmanPosition) -> Result<usize> {
    if pos.tb() != ruleset.tb {
        return Err(BcsError::Ruleset(format!(
            "position has total budget {}, ruleset has {}",
            pos.tb(),
            ruleset.tb
        )));
    }
    if pos.heap() >= ruleset.len() {
        return Err(BcsError::OutOfRange {
            heap: pos.heap(),
            x_max: ruleset.len() - 1,
        });
    }
    Ok(pos.heap())
}

/// `ν̂_p(x)` or `ν_p(x)` at the node whose index is `pos.heap()`.
pub fn general_maximin(ruleset: &GeneralRuleset, pos: &RichmanPosition) -> Result<Score> {
    let node = node_of(ruleset, pos)?;
    evaluate(ruleset, Order::Maximin).get(ruleset, node, pos.left_budget(), pos.marker())
}

/// As [`general_maximin`] with Right declaring first.
pub fn general_minimax(ruleset: &GeneralRuleset, pos: &RichmanPosition) -> Result<Score> {
    let node = node_of(ruleset, pos)?;
    evaluate(ruleset, Order::Minimax).get(ruleset, node, pos.left_budget(), pos.marker())
}

impl GeneralValues {
    pub fn value(&self, ruleset: &GeneralRuleset, node: usize, p: usize, marker: Side) -> Result<Score> {
        self.get(ruleset, node, p, marker)
    }

    /// Both vectors at `node`, or the first unplayable state they depend on.
    pub fn vectors(&self, ruleset: &GeneralRuleset, node: usize) -> Result<(Vec<Score>, Vec<Score>)> {
        let width = self.tb.get() + 1;
        let hat = (0..width)
            .map(|p| self.get(ruleset, node, p, Side::Left))
            .collect::<Result<_>>()?;
        let plain = (0..width)
            .map(|p| self.get(ruleset, node, p, Side::Right))
            .collect::<Result<_>>()?;
        Ok((hat, plain))
    }
}

/// Marker-Left values from the tie/Right-win reduction, valid for symmetric
/// rulesets with property U. Marker-Right values follow by `ν_p = -ν̂_q`.
pub fn reduced_maximin(ruleset: &GeneralRuleset) -> Result<Vec<Vec<Score>>> {
    if !ruleset.is_symmetric() {
        return Err(BcsError::Ruleset("reduced form needs a symmetric ruleset".into()));
    }
    let tb = ruleset.tb.get();
    let mut hat: Vec<Vec<Score>> = vec![vec![0; tb + 1]; ruleset.len()];
    let invalid = |x: usize, p: usize| BcsError::InvalidRuleset {
        node: ruleset.name(x).to_string(),
        p,
    };
    for &x in &ruleset.order {
        if ruleset.left[x].is_empty() {
            continue;
        }
        for p in 0..=tb {
            hat[x][p] = reduced_cell(ruleset, &hat, x, p).ok_or_else(|| invalid(x, p))?;
        }
    }
    Ok(hat)
}

fn reduced_cell(ruleset: &GeneralRuleset, hat: &[Vec<Score>], x: usize, p: usize) -> Option<Score> {
    let q = ruleset.tb.complement(p);
    let lbids: Vec<usize> = ruleset.feasible_bids(p).collect();
    let rbids: Vec<usize> = ruleset.feasible_bids(q).collect();
    let left_move = |l: usize| ruleset.left[x].iter().map(move |m| hat[m.to][p - l] + m.weight);
    let right_win = |r: usize| ruleset.right[x].iter().map(move |m| hat[m.to][p + r] + m.weight);
    match (lbids.is_empty(), rbids.is_empty()) {
        (true, true) => None,
        (false, true) => lbids.iter().flat_map(|&l| left_move(l)).max(),
        (true, false) => rbids.iter().flat_map(|&r| right_win(r)).min(),
        (false, false) => {
            let mut best: Option<Score> = None;
            for &l in &lbids {
                let outbid = rbids.iter().filter(|&&r| r > l).flat_map(|&r| right_win(r)).min();
                let tie_feasible = rbids.contains(&l);
                for m in &ruleset.left[x] {
                    let tie = tie_feasible.then(|| m.weight - hat[m.to][q + l]);
                    if let Some(v) = tie.into_iter().chain(outbid).min() {
                        best = Some(best.map_or(v, |b| b.max(v)));
                    }
                }
            }
            best
        }
    }
}

/// One of the four inequalities making up property U.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UProperty {
    /// `ν̂_p ≥ ν̂_{p-1}`.
    BudgetMonotonicityMarker,
    /// `ν_p ≥ ν_{p-1}`.
    BudgetMonotonicity,
    /// `ν̂_p ≥ ν_p`.
    MarkerMonotonicity,
    /// `ν̂_p ≤ ν_{p+1}`.
    MarkerWorth,
}

impl UProperty {
    pub const fn letter(self) -> char {
        match self {
            UProperty::BudgetMonotonicityMarker | UProperty::BudgetMonotonicity => 'A',
            UProperty::MarkerMonotonicity => 'B',
            UProperty::MarkerWorth => 'C',
        }
    }
}

/// All failures of one inequality at one node. `lhs` and `rhs` belong to the
/// largest witness budget.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub property: UProperty,
    pub node: String,
    pub budgets: Vec<usize>,
    pub lhs: Score,
    pub rhs: Score,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UReport {
    pub holds: bool,
    pub violations: Vec<Violation>,
}

/// Budget, left-hand side and right-hand side of one failed comparison.
type Witness = (usize, Score, Score);

/// Check property U on every node and budget of `ruleset`.
pub fn check_property_u(ruleset: &GeneralRuleset) -> Result<UReport> {
    let values = evaluate(ruleset, Order::Maximin);
    let tb = ruleset.tb.get();
    let mut violations = Vec::new();
    for x in 0..ruleset.len() {
        let (hat, plain) = values.vectors(ruleset, x)?;
        let checks: [(UProperty, Vec<Witness>); 4] = [
            (
                UProperty::BudgetMonotonicityMarker,
                (1..=tb).map(|p| (p, hat[p], hat[p - 1])).filter(|t| t.1 < t.2).collect(),
            ),
            (
                UProperty::BudgetMonotonicity,
                (1..=tb).map(|p| (p, plain[p], plain[p - 1])).filter(|t| t.1 < t.2).collect(),
            ),
            (
                UProperty::MarkerMonotonicity,
                (0..=tb).map(|p| (p, hat[p], plain[p])).filter(|t| t.1 < t.2).collect(),
            ),
            (
                UProperty::MarkerWorth,
                (0..tb).map(|p| (p, hat[p], plain[p + 1])).filter(|t| t.1 > t.2).collect(),
            ),
        ];
        for (property, failures) in checks {
            if let Some(&(_, lhs, rhs)) = failures.last() {
                violations.push(Violation {
                    property,
                    node: ruleset.name(x).to_string(),
                    budgets: failures.iter().map(|t| t.0).collect(),
                    lhs,
                    rhs,
                });
            }
        }
    }
    Ok(UReport {
        holds: violations.is_empty(),
        violations,
    })
}
