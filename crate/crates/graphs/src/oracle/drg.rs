use rayon::prelude::*;
use serde::Serialize;

use geodrg_core::IntersectionArray;

use super::distance::DistanceData;
use super::OracleError;
use crate::graph::Graph;

/// A vertex pair whose intersection number disagrees with the reference.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DrgViolation {
    pub x: u32,
    pub y: u32,
    pub distance: usize,
    /// `"b"` or `"c"`.
    pub parameter: &'static str,
    pub expected: i64,
    pub found: i64,
}

impl std::fmt::Display for DrgViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}_{} not constant: pair ({}, {}) has {} but expected {}",
            self.parameter, self.distance, self.x, self.y, self.found, self.expected
        )
    }
}

/// Outcome of the brute-force distance-regularity test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DrgOutcome {
    Regular(IntersectionArray),
    Violation(DrgViolation),
}

/// `(c_i, b_i)` seen from `x`, or the first pair where they vary.
fn profile(g: &Graph, dist: &DistanceData, x: u32) -> Result<Vec<(i64, i64)>, DrgViolation> {
    let row = dist.row(x);
    let mut seen: Vec<Option<(i64, i64, u32)>> = vec![None; dist.diameter() + 1];
    for y in 0..g.n() as u32 {
        let i = row[y as usize] as usize;
        let (mut c, mut b) = (0, 0);
        for &z in g.neighbors(y) {
            let dz = row[z as usize] as usize;
            if dz + 1 == i {
                c += 1;
            } else if dz == i + 1 {
                b += 1;
            }
        }
        match seen[i] {
            None => seen[i] = Some((c, b, y)),
            Some((c0, b0, _)) => {
                if c != c0 {
                    return Err(DrgViolation { x, y, distance: i, parameter: "c", expected: c0, found: c });
                }
                if b != b0 {
                    return Err(DrgViolation { x, y, distance: i, parameter: "b", expected: b0, found: b });
                }
            }
        }
    }
    Ok(seen.into_iter().map_while(|s| s.map(|(c, b, _)| (c, b))).collect())
}

/// Checks every ordered pair; the reported violation has the lowest source
/// vertex and, within it, the lowest target.
pub fn verify_drg(g: &Graph, dist: &DistanceData) -> Result<DrgOutcome, OracleError> {
    let profiles: Vec<Result<Vec<(i64, i64)>, DrgViolation>> =
        (0..g.n() as u32).into_par_iter().map(|x| profile(g, dist, x)).collect();
    let mut reference: Option<&Vec<(i64, i64)>> = None;
    for (x, p) in profiles.iter().enumerate() {
        let p = match p {
            Err(v) => return Ok(DrgOutcome::Violation(v.clone())),
            Ok(p) => p,
        };
        let Some(r) = reference else {
            reference = Some(p);
            continue;
        };
        let len = r.len().max(p.len());
        for i in 0..len {
            let (a, b) = (r.get(i).copied(), p.get(i).copied());
            if a != b {
                let x = x as u32;
                let y = dist.sphere(x, i.min(p.len().saturating_sub(1)))[0];
                let (exp, found) = (a.unwrap_or((0, 0)), b.unwrap_or((0, 0)));
                let (parameter, expected, found) =
                    if exp.0 != found.0 { ("c", exp.0, found.0) } else { ("b", exp.1, found.1) };
                return Ok(DrgOutcome::Violation(DrgViolation { x, y, distance: i, parameter, expected, found }));
            }
        }
    }
    let r = reference.ok_or(OracleError::Empty)?;
    let d = r.len() - 1;
    let b: Vec<i64> = r[..d].iter().map(|&(_, b)| b).collect();
    let c: Vec<i64> = r[1..].iter().map(|&(c, _)| c).collect();
    IntersectionArray::new(b, c).map(DrgOutcome::Regular).map_err(|e| OracleError::Array(e.to_string()))
}
