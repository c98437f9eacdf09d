//! The subgraph `Σ(x,y)` spanned by `x`, the lines of `[x,y]`, and every
//! `z` at distance 2 from `x` with `[x,z] = [x,y]`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::distance::DistanceData;
use super::lines::LineSets;
use crate::graph::{BitSet, Graph, LineCover};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaSubgraph {
    pub x: u32,
    pub y: u32,
    pub lines: Vec<u32>,
    pub vertices: Vec<u32>,
}

pub fn build_sigma(dist: &DistanceData, cover: &LineCover, sets: &LineSets, x: u32, y: u32) -> Option<SigmaSubgraph> {
    if dist.d(x, y) != 2 {
        return None;
    }
    let m = sets.get(x, y)?;
    let lines = sets.lines(cover, x, y);
    let mut vs: BTreeSet<u32> = BTreeSet::from([x]);
    for &l in &lines {
        vs.extend(cover.line(l).iter().copied());
    }
    vs.extend(sets.at(x).iter().filter(|&&(_, mz)| mz == m).map(|&(z, _)| z));
    Some(SigmaSubgraph { x, y, lines, vertices: vs.into_iter().collect() })
}

/// Measured properties of one `Σ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaCheck {
    pub order: usize,
    /// `None` if the induced subgraph is disconnected.
    pub diameter: Option<usize>,
    /// A shortest path `u - w - ... - v` leaving `Σ`, as `(u, v, w)`.
    pub geodetic_escape: Option<(u32, u32, u32)>,
    /// A line meeting `Σ` in at least two but not all of its vertices.
    pub partial_line: Option<u32>,
    /// `(v, k, λ, μ)` when strongly regular.
    pub srg: Result<(i64, i64, i64, i64), String>,
}

pub fn check_sigma(g: &Graph, dist: &DistanceData, cover: &LineCover, s: &SigmaSubgraph) -> SigmaCheck {
    let vs = &s.vertices;
    let inside = BitSet::from_iter(g.n(), vs.iter().copied());
    let h = g.induced(vs);
    let hd = DistanceData::new(&h).ok();

    let mut geodetic_escape = None;
    'outer: for (i, &u) in vs.iter().enumerate() {
        for &v in &vs[i + 1..] {
            let d = dist.d(u, v);
            if d < 2 {
                continue;
            }
            let w = if d == 2 {
                g.neighbor_set(u).and(g.neighbor_set(v)).and_not(&inside).iter().next()
            } else {
                (0..g.n() as u32).find(|&w| !inside.contains(w) && dist.d(u, w) + dist.d(w, v) == d)
            };
            if let Some(w) = w {
                geodetic_escape = Some((u, v, w));
                break 'outer;
            }
        }
    }

    let mut touched: BTreeMap<u32, usize> = BTreeMap::new();
    for &v in vs {
        for &l in cover.through(v) {
            *touched.entry(l).or_default() += 1;
        }
    }
    let partial_line = touched.into_iter().find(|&(l, k)| k >= 2 && k < cover.line(l).len()).map(|(l, _)| l);

    SigmaCheck {
        order: vs.len(),
        diameter: hd.map(|d| d.diameter()),
        geodetic_escape,
        partial_line,
        srg: srg_parameters(&h),
    }
}

/// `(v, k, λ, μ)` of a strongly regular graph, or the first irregularity.
pub fn srg_parameters(h: &Graph) -> Result<(i64, i64, i64, i64), String> {
    let k = h.regular_degree().ok_or("not regular")?;
    let (mut lambda, mut mu) = (None, None);
    for a in 0..h.n() as u32 {
        for b in a + 1..h.n() as u32 {
            let c = h.neighbor_set(a).intersection_len(h.neighbor_set(b));
            let slot = if h.adjacent(a, b) { &mut lambda } else { &mut mu };
            match *slot {
                None => *slot = Some(c),
                Some(e) if e != c => return Err(format!("pair ({a}, {b}) has {c} common neighbours, expected {e}")),
                _ => {}
            }
        }
    }
    let mu = mu.ok_or("complete graph")?;
    Ok((h.n() as i64, k as i64, lambda.unwrap_or(0) as i64, mu as i64))
}

/// Counts, over a family of `Σ` vertex sets, how many contain each pair of
/// intersecting lines. Fails if a pair lies in two of them or, when the
/// family is complete, in none.
pub fn check_intersecting_lines(
    g: &Graph,
    cover: &LineCover,
    family: &[Vec<u32>],
    complete: bool,
) -> Result<usize, ((u32, u32), usize)> {
    let mut counts: BTreeMap<(u32, u32), usize> = BTreeMap::new();
    if complete {
        for v in 0..g.n() as u32 {
            let t = cover.through(v);
            for (i, &a) in t.iter().enumerate() {
                for &b in &t[i + 1..] {
                    counts.insert((a, b), 0);
                }
            }
        }
    }
    for s in family {
        let inside = BitSet::from_iter(g.n(), s.iter().copied());
        let full: Vec<u32> = (0..cover.len() as u32)
            .filter(|&l| cover.line(l).iter().all(|&v| inside.contains(v)))
            .collect();
        for (i, &a) in full.iter().enumerate() {
            for &b in &full[i + 1..] {
                let la = cover.line(a);
                if cover.line(b).iter().any(|v| la.binary_search(v).is_ok()) {
                    *counts.entry((a, b)).or_default() += 1;
                }
            }
        }
    }
    match counts.iter().find(|&(_, &c)| c > 1 || (complete && c == 0)) {
        Some((&p, &c)) => Err((p, c)),
        None => Ok(counts.len()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_grid, build_johnson};
    use crate::oracle::cover::LineGeometry;

    #[test]
    fn johnson_sigma_is_triangular_graph() {
        let (g, c) = build_johnson(8, 3).unwrap();
        let dist = DistanceData::new(&g).unwrap();
        let geom = LineGeometry::new(&dist, &c);
        let sets = LineSets::new(&dist, &geom, &c).unwrap();
        let y = dist.sphere(0, 2)[0];
        let s = build_sigma(&dist, &c, &sets, 0, y).unwrap();
        assert_eq!((s.lines.len(), s.vertices.len()), (2, 21));
        assert!(build_sigma(&dist, &c, &sets, 0, g.neighbors(0)[0]).is_none());
        let chk = check_sigma(&g, &dist, &c, &s);
        assert_eq!(chk.diameter, Some(2));
        assert_eq!(chk.geodetic_escape, None);
        assert_eq!(chk.partial_line, None);
        assert_eq!(chk.srg, Ok((21, 10, 5, 4)));
        assert_eq!(check_intersecting_lines(&g, &c, &[s.vertices.clone()], false).map(|n| n > 0), Ok(true));
        assert!(check_intersecting_lines(&g, &c, &[s.vertices.clone(), s.vertices], false).is_err());
    }

    #[test]
    fn srg_recognition() {
        assert_eq!(srg_parameters(&build_grid(3, 3).unwrap()), Ok((9, 4, 1, 2)));
        assert!(srg_parameters(&build_grid(2, 3).unwrap()).is_err());
    }
}
