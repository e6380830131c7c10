//! Human against the equilibrium engine, one sealed bid per pebble.

use std::io::{BufRead, Write};

use anyhow::Result;
use bcs_core::oracle::{replay, PlayTrace};
use bcs_core::unitary::{engine_bid, solve};
use bcs_core::{classify_bid, RichmanPosition, Side, Winner};

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Left => "Left",
        Side::Right => "Right",
    }
}

fn state_line(pos: &RichmanPosition, score: i64) -> String {
    let hat = |side: Side| if pos.marker() == side { "^" } else { "" };
    format!(
        "heap {}  Left ${}{}  Right ${}{}  score {:+}",
        pos.heap(),
        pos.left_budget(),
        hat(Side::Left),
        pos.right_budget(),
        hat(Side::Right),
        score
    )
}

/// Run a game from `start` with the engine playing `engine`. Returns `None`
/// when the input ends before the game does.
pub fn run<R: BufRead, W: Write>(mut input: R, mut out: W, start: RichmanPosition, engine: Side) -> Result<Option<PlayTrace>> {
    let table = solve(start.tb(), start.heap());
    let human = engine.other();
    let mut pos = start;
    let mut score = 0;
    let mut bids = Vec::new();
    let mut line = String::new();

    while pos.heap() > 0 {
        writeln!(out, "{}", state_line(&pos, score))?;
        let engine_amount = engine_bid(&table, &pos, engine)?;
        let budget = pos.budget_of(human);
        let human_amount = loop {
            write!(out, "{} bid (0..={budget}): ", side_name(human))?;
            out.flush()?;
            line.clear();
            if input.read_line(&mut line)? == 0 {
                writeln!(out)?;
                writeln!(out, "input closed; game abandoned")?;
                return Ok(None);
            }
            match line.trim().parse::<usize>() {
                Ok(b) if b <= budget => break b,
                _ => writeln!(out, "enter a whole number between 0 and {budget}")?,
            }
        };
        let (l, r) = match engine {
            Side::Left => (engine_amount, human_amount),
            Side::Right => (human_amount, engine_amount),
        };
        let res = classify_bid(&pos, l, r)?;
        let how = match res.bid.winner {
            Winner::LeftStrict | Winner::RightStrict => "outbids",
            Winner::LeftTie | Winner::RightTie => "wins the tie",
        };
        let gain = if res.mover() == Side::Left { 1 } else { -1 };
        score += gain;
        writeln!(
            out,
            "Left bid {l}, Right bid {r}: {} {how} and takes a pebble ({gain:+})",
            side_name(res.mover())
        )?;
        bids.push((l, r));
        pos = RichmanPosition::from_parts(pos.tb().get(), pos.heap() - 1, res.next_left_budget, res.next_marker)?;
    }

    let trace = replay(&start, &bids)?;
    writeln!(out, "{}", state_line(&pos, score))?;
    writeln!(out, "final score {:+}", trace.utility)?;
    Ok(Some(trace))
}

/// One `left right` pair per line.
pub fn transcript(trace: &PlayTrace) -> String {
    trace
        .steps
        .iter()
        .map(|s| format!("{} {}\n", s.bid.left_bid, s.bid.right_bid))
        .collect()
}

pub fn parse_transcript(text: &str) -> Result<Vec<(usize, usize)>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let parts: Vec<&str> = l.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
            match parts.as_slice() {
                [a, b] => Ok((a.parse()?, b.parse()?)),
                _ => anyhow::bail!("expected `left right`, got `{l}`"),
            }
        })
        .collect()
}
