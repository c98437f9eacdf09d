//! Support code for the `geodrg` binary: argument parsing helpers, file
//! loading, exit codes and the candidate enumerator.

pub mod enumerate;

use std::fs;
use std::ops::RangeInclusive;
use std::path::Path;

use anyhow::{bail, Context, Result};

use geodrg_core::filters::Status;
use geodrg_core::rational::parse as parse_rational;
use geodrg_core::{ClassicalParameterSet, GeometricArray};
use geodrg_graphs::graph::{Graph, LineCover};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INDETERMINATE: u8 = 3;

pub fn exit_code(status: Status) -> u8 {
    match status {
        Status::Fail => EXIT_FAIL,
        Status::Indeterminate => EXIT_INDETERMINATE,
        Status::Pass | Status::NotApplicable => EXIT_PASS,
    }
}

/// Comma-separated integers, optionally wrapped in parentheses.
pub fn parse_list(s: &str) -> Result<Vec<i64>> {
    let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|t| t.trim().parse::<i64>().with_context(|| format!("not an integer: {t:?}")))
        .collect()
}

/// `a..b` (inclusive), `a..=b`, or a single value `a`. `a > b` is an empty range.
pub fn parse_range(s: &str) -> Result<RangeInclusive<i64>> {
    let num = |t: &str| t.trim().parse::<i64>().with_context(|| format!("bad range bound {t:?} in {s:?}"));
    match s.split_once("..") {
        Some((a, b)) => Ok(num(a)?..=num(b.trim_start_matches('='))?),
        None => {
            let v = num(s)?;
            Ok(v..=v)
        }
    }
}

pub fn geometric_from_parts(phi: &str, tau: &str, beta: i64) -> Result<GeometricArray> {
    Ok(GeometricArray::new(parse_list(phi)?, parse_list(tau)?, beta)?)
}

/// `D,b,alpha,beta` with rational `alpha` and `beta`.
pub fn parse_classical(s: &str) -> Result<ClassicalParameterSet> {
    let parts: Vec<&str> = s.trim().trim_start_matches('(').trim_end_matches(')').split(',').map(str::trim).collect();
    let [d, b, alpha, beta] = parts[..] else {
        bail!("classical parameters are D,b,alpha,beta; got {s:?}");
    };
    let alpha = parse_rational(alpha).with_context(|| format!("bad alpha {alpha:?}"))?;
    let beta = parse_rational(beta).with_context(|| format!("bad beta {beta:?}"))?;
    Ok(ClassicalParameterSet::new(d.parse().context("bad D")?, b.parse().context("bad b")?, alpha, beta)?)
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Graph::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn read_cover(path: &Path, n: usize) -> Result<LineCover> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    LineCover::parse(&text, n).with_context(|| format!("parsing {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_and_ranges() {
        assert_eq!(parse_list("(1,2, 3)").unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_list("").unwrap(), Vec::<i64>::new());
        assert!(parse_list("1,x").is_err());
        assert_eq!(parse_range("2..7").unwrap(), 2..=7);
        assert_eq!(parse_range("2..=7").unwrap(), 2..=7);
        assert_eq!(parse_range("4").unwrap(), 4..=4);
        assert!(parse_range("5..1").unwrap().is_empty());
        assert!(parse_range("a..1").is_err());
    }

    #[test]
    fn classical_parameters() {
        assert_eq!(parse_classical("3,1,1,5").unwrap().to_string(), "(3,1,1,5)");
        assert_eq!(parse_classical("(3,2,1/2,7)").unwrap().alpha.to_string(), "1/2");
        assert!(parse_classical("3,1,1").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(Status::Pass), 0);
        assert_eq!(exit_code(Status::Fail), 1);
        assert_eq!(exit_code(Status::Indeterminate), 3);
    }
}
