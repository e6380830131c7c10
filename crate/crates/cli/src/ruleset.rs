//! Line-oriented ruleset files.
//!
//! ```text
//! # comment
//! tb 1
//! bids all            # or: bids 0,1,3
//! node x1
//! node x2 terminal 0
//! edge R x1 x2 1
//! ```

use anyhow::{anyhow, bail, Context, Result};
use bcs_core::general::{GeneralRuleset, RulesetBuilder};
use bcs_core::Side;

pub fn parse(text: &str) -> Result<GeneralRuleset> {
    let mut builder = RulesetBuilder::new();
    let mut seen_tb = false;
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        let at = || format!("line {}: `{}`", n + 1, raw.trim());
        match words.as_slice() {
            ["tb", v] => {
                builder.tb(v.parse().with_context(at)?);
                seen_tb = true;
            }
            ["bids", "all"] => {
                builder.bids(None);
            }
            ["bids", rest @ ..] if !rest.is_empty() => {
                let bids = rest
                    .concat()
                    .split(',')
                    .map(|b| b.trim().parse::<usize>())
                    .collect::<Result<Vec<_>, _>>()
                    .with_context(at)?;
                builder.bids(Some(bids));
            }
            ["node", name] => {
                builder.node(name);
            }
            ["node", name, "terminal", penalty] => {
                builder.terminal(name, penalty.parse().with_context(at)?);
            }
            ["edge", side, from, to, weight] => {
                let side = match *side {
                    "L" => Side::Left,
                    "R" => Side::Right,
                    other => bail!("{}: side must be L or R, got {other}", at()),
                };
                builder.edge(side, from, to, weight.parse().with_context(at)?);
            }
            _ => bail!("{}: unrecognised directive", at()),
        }
    }
    if !seen_tb {
        return Err(anyhow!("ruleset has no `tb` line"));
    }
    Ok(builder.build()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_b() {
        let rs = parse("tb 1\nbids all\nnode x1\nnode x2 terminal 0\nedge R x1 x2 1\n").unwrap();
        assert_eq!(rs.len(), 2);
        assert_eq!(rs.bids(), &[0, 1]);
        assert_eq!(rs.moves(Side::Right, 0).len(), 1);
        assert!(rs.moves(Side::Left, 0).is_empty());
    }

    #[test]
    fn comments_and_bid_lists() {
        let rs = parse("# two nodes\ntb 3\nbids 0, 2\nedge L a b 2 # trailing\n").unwrap();
        assert_eq!(rs.bids(), &[0, 2]);
        assert_eq!(rs.node_index("b"), Some(1));
    }

    #[test]
    fn errors_name_the_line() {
        let err = parse("tb 2\nedge X a b 1\n").unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
        assert!(parse("node a\n").is_err());
        assert!(parse("tb 1\nfrobnicate\n").is_err());
        assert!(parse("tb 1\nedge L a b 1\nedge L b a 1\n").is_err());
    }
}
