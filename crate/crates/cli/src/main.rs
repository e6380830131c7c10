use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use bcs_core::analysis::{bid_graph, check_invariants, BidKind, InvariantReport};
use bcs_core::automaton::{automaton_fixed_point, convergence_bound, test_conjecture, Parity, ResidueMode, Seed};
use bcs_core::general::{check_property_u, evaluate, GeneralRuleset, Order, UReport};
use bcs_core::oracle::{replay, Oracle};
use bcs_core::unitary::{limit_rows, solve_values};
use bcs_core::{BcsError, RichmanPosition, Score, Side, TotalBudget};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

mod output;
mod play;
mod ruleset;

use output::{JsonTable, SCHEMA_VERSION};

#[derive(Parser)]
#[command(name = "bcs", version, about = "Exact equilibria of discrete Richman bidding subtraction games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Marker-Left value table of the unitary game.
    Solve {
        #[arg(long)]
        tb: usize,
        #[arg(long)]
        x_max: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Period-2 limit rows and the heap from which they hold.
    Limits {
        #[arg(long)]
        tb: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Invariant suite, oracle comparison and property U.
    Check(CheckArgs),
    /// The 0-bidding automaton built from the closed forms.
    Automaton {
        #[arg(long)]
        tb: usize,
        #[arg(long, value_enum, default_value_t = Mode::Euclidean)]
        mode: Mode,
        #[command(flatten)]
        out: Output,
    },
    /// Compare solver limits with the automaton.
    Conjecture {
        #[arg(long)]
        tb: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Feasible and dominated bids between marker-holder budgets.
    Bids {
        #[arg(long)]
        tb: usize,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        bid: usize,
        /// Drop dominated bids.
        #[arg(long)]
        reduced: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Play against the engine on standard input.
    Play {
        #[command(flatten)]
        start: Start,
        /// Side played by the engine.
        #[arg(long, value_enum, default_value_t = Player::Left)]
        engine: Player,
        /// Write the bid pairs here, one `left right` line per round.
        #[arg(long)]
        transcript: Option<PathBuf>,
    },
    /// Replay a transcript and print the trace.
    Replay {
        #[command(flatten)]
        start: Start,
        #[arg(long)]
        file: PathBuf,
    },
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, required_unless_present_any = ["ruleset", "from_json"], conflicts_with_all = ["ruleset", "from_json"])]
    tb: Option<usize>,
    #[arg(long, requires = "tb")]
    x_max: Option<usize>,
    /// Also compare every cell with the brute-force oracle.
    #[arg(long)]
    with_oracle: bool,
    /// Check property U on a ruleset file.
    #[arg(long, conflicts_with = "from_json")]
    ruleset: Option<PathBuf>,
    /// Run the invariant suite on a table written by `solve --format json`.
    #[arg(long)]
    from_json: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Start {
    #[arg(long)]
    tb: usize,
    #[arg(long)]
    x: i64,
    /// Left's budget.
    #[arg(long)]
    p: i64,
    #[arg(long, value_enum, default_value_t = Player::Left)]
    marker: Player,
}

impl Start {
    fn position(&self) -> Result<RichmanPosition> {
        RichmanPosition::new(TotalBudget::new(self.tb), self.x, self.p, self.marker.into()).map_err(usage)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Euclidean,
    Truncated,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Tie,
    HolderWin,
    OpponentWin,
}

#[derive(Clone, Copy, ValueEnum)]
enum Player {
    Left,
    Right,
}

impl From<Player> for Side {
    fn from(p: Player) -> Side {
        match p {
            Player::Left => Side::Left,
            Player::Right => Side::Right,
        }
    }
}

/// Bad parameters: exit code 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(e: impl std::fmt::Display) -> anyhow::Error {
    Usage(e.to_string()).into()
}

fn unsupported(format: Format, command: &str) -> anyhow::Error {
    let name = format.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    usage(format!("format `{name}` is not available for `{command}`"))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn cmd_solve(tb: usize, x_max: usize, out: &Output) -> Result<u8> {
    let rows = solve_values(TotalBudget::new(tb), x_max);
    let text = match out.format {
        Format::Table => {
            let labelled: Vec<(String, Vec<Score>)> = rows.iter().enumerate().map(|(x, r)| (x.to_string(), r.clone())).collect();
            output::text_table(tb, &labelled)
        }
        Format::Csv => output::csv(&rows),
        Format::Json => serde_json::to_string(&JsonTable::new(tb, &rows))? + "\n",
        Format::Dot => return Err(unsupported(out.format, "solve")),
    };
    emit(&out.out, &text)?;
    Ok(0)
}

#[derive(Serialize)]
struct LimitsJson<'a> {
    schema_version: u32,
    tb: usize,
    even: &'a [Score],
    odd: &'a [Score],
    x_star: usize,
    bound: usize,
}

fn cmd_limits(tb: usize, out: &Output) -> Result<u8> {
    let limits = limit_rows(TotalBudget::new(tb))?;
    let text = match out.format {
        Format::Table => {
            let mut t = output::text_table(
                tb,
                &[("even".into(), limits.even.clone()), ("odd".into(), limits.odd.clone())],
            );
            t.push_str(&format!("x_star {}\nB(tb) {}\n", limits.x_star, limits.bound));
            t
        }
        Format::Json => to_json(&LimitsJson {
            schema_version: SCHEMA_VERSION,
            tb,
            even: &limits.even,
            odd: &limits.odd,
            x_star: limits.x_star,
            bound: limits.bound,
        })?,
        Format::Csv => {
            let mut t = String::from("parity,p,value\n");
            for (name, row) in [("even", &limits.even), ("odd", &limits.odd)] {
                for (p, v) in row.iter().enumerate() {
                    t.push_str(&format!("{name},{p},{v}\n"));
                }
            }
            t
        }
        Format::Dot => return Err(unsupported(out.format, "limits")),
    };
    emit(&out.out, &text)?;
    Ok(0)
}

#[derive(Serialize)]
struct OracleSummary {
    cells: usize,
    mismatches: Vec<(usize, usize, Side, Score, Score)>,
}

#[derive(Serialize)]
struct CheckJson {
    schema_version: u32,
    tb: Option<usize>,
    passed: bool,
    invariants: Vec<InvariantReport>,
    oracle: Option<OracleSummary>,
    property_u: Option<UReport>,
}

fn oracle_summary(tb: usize, rows: &[Vec<Score>]) -> OracleSummary {
    let oracle = Oracle::new(TotalBudget::new(tb));
    let mut mismatches = Vec::new();
    let mut cells = 0;
    for (x, row) in rows.iter().enumerate() {
        for p in 0..=tb {
            for (marker, expected) in [(Side::Left, row[p]), (Side::Right, -row[tb - p])] {
                let got = oracle.value(x, p, marker);
                if got != expected {
                    mismatches.push((x, p, marker, expected, got));
                }
                cells += 1;
            }
        }
    }
    OracleSummary { cells, mismatches }
}

fn u_report_text(report: &UReport) -> String {
    let mut t = format!("property U: {}\n", if report.holds { "holds" } else { "fails" });
    for v in &report.violations {
        t.push_str(&format!(
            "  U({}) {:?} at {} for p in {:?}: {} vs {}\n",
            v.property.letter(),
            v.property,
            v.node,
            v.budgets,
            v.lhs,
            v.rhs
        ));
    }
    t
}

fn cmd_check(args: &CheckArgs) -> Result<u8> {
    if matches!(args.format, Format::Csv | Format::Dot) {
        return Err(unsupported(args.format, "check"));
    }
    let mut report = CheckJson {
        schema_version: SCHEMA_VERSION,
        tb: None,
        passed: true,
        invariants: Vec::new(),
        oracle: None,
        property_u: None,
    };
    let mut text = String::new();

    if let Some(path) = &args.ruleset {
        let rs = ruleset::parse(&read(path)?).map_err(usage)?;
        let u = check_property_u(&rs)?;
        text.push_str(&format!("ruleset {} ({} nodes, tb {})\n", path.display(), rs.len(), rs.tb()));
        let values = evaluate(&rs, Order::Maximin);
        for x in 0..rs.len() {
            let (hat, plain) = values.vectors(&rs, x)?;
            text.push_str(&format!("  {}: marker Left {hat:?}, marker Right {plain:?}\n", rs.name(x)));
        }
        text.push_str(&u_report_text(&u));
        report.tb = Some(rs.tb().get());
        report.passed = u.holds;
        report.property_u = Some(u);
    } else {
        let (tb, rows) = match (&args.from_json, args.tb) {
            (Some(path), _) => JsonTable::parse(&read(path)?).map_err(usage)?,
            (None, Some(tb)) => {
                let x_max = args.x_max.unwrap_or_else(|| convergence_bound(TotalBudget::new(tb)) + 2);
                (tb, solve_values(TotalBudget::new(tb), x_max))
            }
            (None, None) => return Err(usage("one of --tb, --ruleset or --from-json is required")),
        };
        report.tb = Some(tb);
        report.invariants = check_invariants(TotalBudget::new(tb), &rows);
        for r in &report.invariants {
            match &r.counterexample {
                None => text.push_str(&format!("PASS {}\n", r.name)),
                Some(c) => text.push_str(&format!(
                    "FAIL {} at x={} p={}: {} {:?}\n",
                    r.name, c.x, c.p, c.detail, c.values
                )),
            }
        }
        report.passed = report.invariants.iter().all(|r| r.passed);
        if args.from_json.is_none() {
            let rs = GeneralRuleset::unitary(tb, rows.len() - 1)?;
            let u = check_property_u(&rs)?;
            text.push_str(&u_report_text(&u));
            report.passed &= u.holds;
            report.property_u = Some(u);
        }
        if args.with_oracle {
            let summary = oracle_summary(tb, &rows);
            text.push_str(&format!(
                "oracle: {} cells, {} mismatches\n",
                summary.cells,
                summary.mismatches.len()
            ));
            report.passed &= summary.mismatches.is_empty();
            report.oracle = Some(summary);
        }
    }

    text.push_str(if report.passed { "all checks passed\n" } else { "some checks failed\n" });
    let rendered = if args.format == Format::Json { to_json(&report)? } else { text };
    emit(&args.out, &rendered)?;
    Ok(if report.passed { 0 } else { 1 })
}

fn cmd_automaton(tb: usize, mode: Mode, out: &Output) -> Result<u8> {
    let mode = match mode {
        Mode::Euclidean => ResidueMode::Euclidean,
        Mode::Truncated => ResidueMode::Truncated,
    };
    let table = automaton_fixed_point(TotalBudget::new(tb), Seed::AlphaBeta(mode))?;
    let bound = convergence_bound(TotalBudget::new(tb));
    let text = match out.format {
        Format::Table => {
            let mut t = output::text_table(
                tb,
                &[
                    ("even".into(), (0..=tb).map(|p| table.get(Parity::Even, p)).collect()),
                    ("odd".into(), (0..=tb).map(|p| table.get(Parity::Odd, p)).collect()),
                ],
            );
            t.push_str(&format!(
                "B(tb) {bound}\nupdate rule consistent {}\n",
                table.update_consistent()
            ));
            t
        }
        Format::Json => {
            #[derive(Serialize)]
            struct AutomatonJson<'a> {
                schema_version: u32,
                tb: usize,
                residue: &'a str,
                even: &'a [Score],
                odd: &'a [Score],
                bound: usize,
                update_consistent: bool,
            }
            to_json(&AutomatonJson {
                schema_version: SCHEMA_VERSION,
                tb,
                residue: mode.name(),
                even: &table.even,
                odd: &table.odd,
                bound,
                update_consistent: table.update_consistent(),
            })?
        }
        _ => return Err(unsupported(out.format, "automaton")),
    };
    emit(&out.out, &text)?;
    Ok(0)
}

fn cmd_conjecture(tb: usize, out: &Output) -> Result<u8> {
    let report = test_conjecture(TotalBudget::new(tb));
    let text = match out.format {
        Format::Json => to_json(&report)?,
        Format::Table => {
            let mut t = format!("tb {tb}\nB(tb) {}\n", report.bound);
            match report.x_star {
                Some(x) => t.push_str(&format!("x_star {x}\n")),
                None => t.push_str(&format!("x_star unavailable: {}\n", report.error.as_deref().unwrap_or("?"))),
            }
            t.push_str(&format!("update rule holds on solver limits: {}\n", report.update_rule_closure));
            for c in &report.comparisons {
                t.push_str(&format!(
                    "{}: duality {}, {}\n",
                    c.label,
                    if c.duality_holds { "holds" } else { "fails" },
                    if c.matches { "matches limits".to_string() } else { format!("{} cells differ", c.diffs.len()) }
                ));
                for d in &c.diffs {
                    t.push_str(&format!("  {:?} p={}: automaton {} limit {}\n", d.parity, d.p, d.automaton, d.limit));
                }
            }
            t
        }
        _ => return Err(unsupported(out.format, "conjecture")),
    };
    emit(&out.out, &text)?;
    Ok(0)
}

fn cmd_bids(tb: usize, kind: Kind, bid: usize, reduced: bool, out: &Output) -> Result<u8> {
    if bid > tb {
        return Err(usage(format!("bid {bid} exceeds total budget {tb}")));
    }
    let kind = match kind {
        Kind::Tie => BidKind::Tie,
        Kind::HolderWin => BidKind::HolderWins,
        Kind::OpponentWin => BidKind::OpponentWins,
    };
    let graph = bid_graph(TotalBudget::new(tb), kind, bid, reduced);
    let text = match out.format {
        Format::Dot | Format::Table => graph.to_dot(),
        Format::Json => to_json(&graph)?,
        Format::Csv => return Err(unsupported(out.format, "bids")),
    };
    emit(&out.out, &text)?;
    Ok(0)
}

fn cmd_play(start: &Start, engine: Player, transcript: &Option<PathBuf>) -> Result<u8> {
    let pos = start.position()?;
    let stdin = io::stdin();
    let stdout = io::stdout();
    match play::run(stdin.lock(), stdout.lock(), pos, engine.into())? {
        Some(trace) => {
            if let Some(path) = transcript {
                fs::write(path, play::transcript(&trace)).with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(0)
        }
        None => Ok(0),
    }
}

fn cmd_replay(start: &Start, file: &Path) -> Result<u8> {
    let pos = start.position()?;
    let bids = play::parse_transcript(&read(file)?).map_err(usage)?;
    let trace = replay(&pos, &bids)?;
    let mut t = String::new();
    for s in &trace.steps {
        t.push_str(&format!(
            "{} bids {} {} -> {:?} {:+}\n",
            s.position, s.bid.left_bid, s.bid.right_bid, s.bid.winner, s.removal
        ));
    }
    t.push_str(&format!("final {} utility {:+}\n", trace.final_position, trace.utility));
    emit(&None, &t)?;
    Ok(0)
}

fn run(cli: Cli) -> Result<u8> {
    match &cli.command {
        Command::Solve { tb, x_max, out } => cmd_solve(*tb, *x_max, out),
        Command::Limits { tb, out } => cmd_limits(*tb, out),
        Command::Check(args) => cmd_check(args),
        Command::Automaton { tb, mode, out } => cmd_automaton(*tb, *mode, out),
        Command::Conjecture { tb, out } => cmd_conjecture(*tb, out),
        Command::Bids {
            tb,
            kind,
            bid,
            reduced,
            out,
        } => cmd_bids(*tb, *kind, *bid, *reduced, out),
        Command::Play { start, engine, transcript } => cmd_play(start, *engine, transcript),
        Command::Replay { start, file } => cmd_replay(start, file),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = if e.is::<Usage>() {
                2
            } else if matches!(e.downcast_ref::<BcsError>(), Some(BcsError::ConvergenceBoundExceeded { .. })) {
                3
            } else {
                1
            };
            ExitCode::from(code)
        }
    }
}
