//! Acceptance criteria, one verdict line each.
//!
//! Run with `cargo test -p bcs-core --test acceptance`. The process exits
//! nonzero if any hard criterion fails; the conjecture harness is reported but
//! never gates.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use bcs_core::analysis::{forced_win_threshold, run_invariant_suite, threshold_is_sharp, ForcedWinSearch};
use bcs_core::automaton::{alpha_even, alpha_odd, automaton_fixed_point, convergence_bound, test_conjecture, ResidueMode, Seed};
use bcs_core::general::{check_property_u, RulesetBuilder, UProperty};
use bcs_core::oracle::{bid_matrix, Oracle};
use bcs_core::unitary::{limit_rows, solve, solve_values};
use bcs_core::{RichmanPosition, Score, Side, TotalBudget};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn tb(n: usize) -> TotalBudget {
    TotalBudget::new(n)
}

fn pos(t: usize, x: usize, p: usize, marker: Side) -> RichmanPosition {
    RichmanPosition::from_parts(t, x, p, marker).unwrap()
}

fn reversed(row: &[Score]) -> Vec<Score> {
    row.iter().rev().copied().collect()
}

fn sorted(row: &[Score]) -> Vec<Score> {
    let mut v = row.to_vec();
    v.sort_unstable();
    v
}

fn golden_budget_five() -> Verdict {
    let table = solve(tb(5), 2);
    let rows: Vec<Vec<Score>> = (0..=2).map(|x| reversed(&table.row(x))).collect();
    let expected = vec![vec![0; 6], vec![1, 1, 1, -1, -1, -1], vec![2, 2, 0, 0, 0, -2]];
    verdict(
        rows == expected && table.marker_left(2, 1) == 0,
        format!("rows p=5..0: {rows:?}"),
    )
}

fn golden_matrices_budget_nine() -> Verdict {
    let first = bid_matrix(tb(9), &pos(9, 9, 6, Side::Left)).unwrap();
    let first_ok = first.entries
        == vec![
            vec![1, 1, 1, 1, -1, -1, -3],
            vec![1, 1, 1, 1, -1, -1, -3],
            vec![3, 3, 1, 1, -1, -1, -3],
            vec![3, 3, 3, -1, -1, -1, -3],
        ]
        && first.row_maxes == vec![1, 1, 3, 3]
        && first.column_mins == vec![1, 1, 1, -1, -1, -1, -3]
        && first.maximin == 1
        && first.minimax == 1;

    let second_expected: Vec<Vec<Score>> = vec![
        vec![1, 1, -1, -1, -1],
        vec![-1, 1, -1, -1, -1],
        vec![-1, -1, -1, -1, -1],
        vec![1, 1, 1, -1, -1],
        vec![1, 1, 1, 1, -3],
        vec![3, 3, 3, 3, 3],
    ];
    let second = bid_matrix(tb(9), &pos(9, 9, 4, Side::Right)).unwrap();
    let second_ok = second.entries == second_expected && second.maximin == -1 && second.minimax == -1;
    let mismatched = second
        .entries
        .iter()
        .zip(&second_expected)
        .map(|(a, b)| a.iter().zip(b).filter(|(u, v)| u != v).count())
        .sum::<usize>();
    let elsewhere = bid_matrix(tb(9), &pos(9, 5, 4, Side::Left)).unwrap().entries == second_expected;
    verdict(
        first_ok && second_ok,
        format!(
            "first table {}; second table at (9, 4) with Right's marker: value {} ({} of 30 entries differ; \
             the printed matrix is the one at (5, 4^): {elsewhere})",
            if first_ok { "exact" } else { "differs" },
            second.maximin,
            mismatched
        ),
    )
}

fn limits_budget_eight() -> Verdict {
    let limits = limit_rows(tb(8)).unwrap();
    let figure_even = vec![4, 4, 2, 2, 0, 0, -2, -2, -4];
    let figure_odd = vec![5, 3, 3, 1, 1, -1, -1, -3, -3];
    let automaton = automaton_fixed_point(tb(8), Seed::AlphaBeta(ResidueMode::Euclidean)).unwrap();
    let ok = reversed(&limits.even) == figure_even
        && reversed(&limits.odd) == figure_odd
        && automaton.even == limits.even
        && automaton.odd == limits.odd
        && limits.x_star <= convergence_bound(tb(8)) + 2;
    verdict(ok, format!("x_star = {}, B + 2 = {}", limits.x_star, limits.bound + 2))
}

fn limits_budget_nine() -> Verdict {
    let limits = limit_rows(tb(9)).unwrap();
    let figure_rows = [vec![5, 5, 3, 3, 1, -1, -1, -3, -3, -5], vec![6, 4, 4, 2, 2, 0, -2, -2, -4, -4]];
    let (fig_odd, fig_even): (Vec<_>, Vec<_>) = figure_rows.iter().partition(|r| r[0] % 2 != 0);
    let multisets = sorted(&limits.even) == sorted(fig_even[0]) && sorted(&limits.odd) == sorted(fig_odd[0]);
    let n = 9;
    let update = (0..=n).all(|p| limits.even[p] == 1 - limits.odd[n - p] && limits.odd[p] == 1 - limits.even[n - p]);
    verdict(
        multisets && update,
        format!("multisets per parity {multisets}, update rule {update}"),
    )
}

fn oracle_equivalence() -> Verdict {
    let mut cells = 0usize;
    for t in 0..=8 {
        let rows = solve_values(tb(t), 40);
        let oracle = Oracle::new(tb(t));
        for (x, row) in rows.iter().enumerate() {
            for p in 0..=t {
                let left = oracle.value(x, p, Side::Left);
                let right = oracle.value(x, p, Side::Right);
                if left != row[p] || right != -row[t - p] {
                    return verdict(false, format!("tb={t} x={x} p={p}: solver {} oracle {left}/{right}", row[p]));
                }
                cells += 2;
            }
        }
    }
    verdict(true, format!("{cells} cells agree"))
}

fn invariant_suite() -> Verdict {
    let mut failures = Vec::new();
    for t in 0..=12 {
        for r in run_invariant_suite(tb(t), convergence_bound(tb(t)) + 2) {
            if !r.passed {
                let c = r.counterexample.unwrap();
                failures.push(format!("tb={t} {} at x={} p={} {:?}", r.name, c.x, c.p, c.values));
            }
        }
    }
    verdict(
        failures.is_empty(),
        if failures.is_empty() {
            "10 invariants on every cell".to_string()
        } else {
            format!("{} failures: {}", failures.len(), failures.join("; "))
        },
    )
}

fn convergence() -> Verdict {
    for t in 0..=12 {
        let bound = convergence_bound(tb(t));
        let limits = match limit_rows(tb(t)) {
            Ok(l) => l,
            Err(e) => return verdict(false, format!("tb={t}: {e}")),
        };
        let rows = solve_values(tb(t), bound + 3);
        if limits.x_star > bound + 2 || rows[bound] != rows[bound + 2] || rows[bound + 1] != rows[bound + 3] {
            return verdict(false, format!("tb={t}: x_star={} B={bound}", limits.x_star));
        }
    }
    verdict(true, "x_star <= B(tb) for tb <= 12")
}

fn forced_wins() -> Verdict {
    let mut search = ForcedWinSearch::new();
    for x in 1..=4 {
        for q in 0..=6 {
            for marker in [Side::Left, Side::Right] {
                if !threshold_is_sharp(&mut search, x, q, marker) {
                    return verdict(false, format!("x={x} q={q} {marker:?}"));
                }
            }
        }
    }
    let constants = (0..=6).all(|q| {
        forced_win_threshold(2, q, Side::Left).threshold == 3 * q + 1
            && forced_win_threshold(3, q, Side::Left).threshold == 7 * q + 3
            && forced_win_threshold(2, q, Side::Right).threshold == 3 * q + 3
            && forced_win_threshold(3, q, Side::Right).threshold == 7 * q + 7
    });
    verdict(constants, "thresholds sharp for x <= 4, q <= 6")
}

fn property_u_counterexample() -> Verdict {
    let mut b = RulesetBuilder::new();
    b.node("x1");
    b.terminal("x2", 0);
    b.edge(Side::Right, "x1", "x2", 1).tb(1);
    let report = check_property_u(&b.build().unwrap()).unwrap();
    let ok = report.violations.len() == 1
        && report.violations[0].property == UProperty::MarkerMonotonicity
        && report.violations[0].node == "x1"
        && (report.violations[0].lhs, report.violations[0].rhs) == (0, 1);
    verdict(ok, format!("{:?}", report.violations))
}

fn alpha_duality() -> Verdict {
    let bad: Vec<i64> = (-50..=50)
        .map(|k| 2 * k)
        .filter(|&d| alpha_even(d).unwrap() != 1 - alpha_odd(-d).unwrap())
        .collect();
    verdict(bad.is_empty(), format!("101 even deltas, failures {bad:?}"))
}

fn conjecture_harness() -> Verdict {
    let mut lines = Vec::new();
    let mut eight = false;
    for t in 0..=12 {
        let report = test_conjecture(tb(t));
        let summary: Vec<String> = report
            .comparisons
            .iter()
            .map(|c| format!("{}:{}", c.label, if c.matches { "match".into() } else { format!("{} diffs", c.diffs.len()) }))
            .collect();
        if t == 8 {
            eight = report.limits_match_automaton;
        }
        lines.push(format!("tb={t} [{}]", summary.join(",")));
    }
    verdict(eight, lines.join(" "))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, &'static str, Duration, bool, fn() -> Verdict);
    let criteria: [Criterion; 11] = [
        ("C1", "golden table tb=5", Duration::from_millis(1), true, golden_budget_five),
        ("C2", "golden matrices tb=9 x=9", Duration::from_secs(1), true, golden_matrices_budget_nine),
        ("C3", "limit rows tb=8", Duration::from_secs(1), true, limits_budget_eight),
        ("C4", "limit rows tb=9", Duration::from_secs(1), true, limits_budget_nine),
        ("C5", "oracle equivalence tb<=8 x<=40", Duration::from_secs(30), true, oracle_equivalence),
        ("C6", "invariant suite tb<=12", Duration::from_secs(60), true, invariant_suite),
        ("C7", "convergence within bound", Duration::from_secs(60), true, convergence),
        ("C8", "forced-win thresholds", Duration::from_secs(10), true, forced_wins),
        ("C9", "property U counterexample", Duration::from_millis(1), true, property_u_counterexample),
        ("C10", "alpha duality", Duration::from_secs(1), true, alpha_duality),
        ("C11", "conjecture harness (report)", Duration::from_secs(60), false, conjecture_harness),
    ];
    let mut hard_failures = 0;
    for (id, name, limit, hard, run) in criteria {
        let start = Instant::now();
        let v = run();
        let elapsed = start.elapsed();
        let pass = v.pass && elapsed <= limit;
        if hard && !pass {
            hard_failures += 1;
        }
        let tag = match (pass, hard) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "NOTE",
        };
        println!(
            "{tag} {id:<3} {name} [{:.3} ms, limit {} ms] {}",
            elapsed.as_secs_f64() * 1e3,
            limit.as_millis(),
            v.detail
        );
    }
    println!("{hard_failures} hard criteria failed");
    if hard_failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
