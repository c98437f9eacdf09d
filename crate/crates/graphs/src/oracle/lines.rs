//! Line sets `[x,y]`, the equal-line-set property, the dual Pasch axiom and
//! the pair design on the lines through a vertex.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use super::cover::LineGeometry;
use super::distance::DistanceData;
use crate::graph::{Graph, LineCover};

/// `[x,y]` for every `y` at distance 2 from `x`, as a bitmask over the
/// positions in `cover.through(x)`.
#[derive(Clone, Debug)]
pub struct LineSets {
    per_vertex: Vec<Vec<(u32, u64)>>,
}

impl LineSets {
    /// `None` if some vertex lies on more than 64 lines.
    pub fn new(dist: &DistanceData, geom: &LineGeometry, cover: &LineCover) -> Option<Self> {
        if (0..dist.n() as u32).any(|x| cover.through(x).len() > 64) {
            return None;
        }
        let per_vertex = (0..dist.n() as u32)
            .into_par_iter()
            .map(|x| {
                let through = cover.through(x);
                dist.sphere(x, 2)
                    .into_iter()
                    .map(|y| {
                        let m = through
                            .iter()
                            .enumerate()
                            .filter(|(_, &l)| geom.d(y, l) == 1)
                            .fold(0u64, |m, (i, _)| m | 1 << i);
                        (y, m)
                    })
                    .collect()
            })
            .collect();
        Some(LineSets { per_vertex })
    }

    pub fn get(&self, x: u32, y: u32) -> Option<u64> {
        let v = &self.per_vertex[x as usize];
        v.binary_search_by_key(&y, |&(z, _)| z).ok().map(|i| v[i].1)
    }

    pub fn at(&self, x: u32) -> &[(u32, u64)] {
        &self.per_vertex[x as usize]
    }

    /// Line indices of `[x,y]`.
    pub fn lines(&self, cover: &LineCover, x: u32, y: u32) -> Vec<u32> {
        let m = self.get(x, y).unwrap_or(0);
        cover.through(x).iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, &l)| l).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ElsViolation {
    pub x: u32,
    pub line: u32,
    pub y1: u32,
    pub y2: u32,
}

/// Every line at distance 1 from `x` has all its distance-2 points seeing
/// the same `[x,y]`. Returns the violation with the lowest `x`.
pub fn check_els(
    dist: &DistanceData,
    geom: &LineGeometry,
    cover: &LineCover,
    sets: &LineSets,
) -> Result<(), ElsViolation> {
    let found: Vec<Option<ElsViolation>> = (0..dist.n() as u32)
        .into_par_iter()
        .map(|x| {
            let row = dist.row(x);
            for (li, l) in cover.lines().iter().enumerate() {
                if geom.d(x, li as u32) != 1 {
                    continue;
                }
                let mut far = l.iter().filter(|&&y| row[y as usize] == 2);
                let Some(&y1) = far.next() else { continue };
                let m1 = sets.get(x, y1);
                if let Some(&y2) = far.find(|&&y| sets.get(x, y) != m1) {
                    return Some(ElsViolation { x, line: li as u32, y1, y2 });
                }
            }
            None
        })
        .collect();
    match found.into_iter().flatten().next() {
        Some(v) => Err(v),
        None => Ok(()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PaschViolation {
    pub x: u32,
    pub y: u32,
    pub u: u32,
    pub v: u32,
}

/// For every edge `xy`, common neighbours off the line through `x` and `y`
/// are pairwise adjacent.
pub fn check_dual_pasch(g: &Graph, cover: &LineCover) -> Result<(), PaschViolation> {
    let found: Vec<Option<PaschViolation>> = (0..g.n() as u32)
        .into_par_iter()
        .map(|x| {
            for &y in g.neighbors(x).iter().filter(|&&y| y > x) {
                let Some(l) = cover.line_of(x, y) else { continue };
                let line = cover.line(l);
                let off: Vec<u32> = g
                    .neighbor_set(x)
                    .and(g.neighbor_set(y))
                    .iter()
                    .filter(|w| line.binary_search(w).is_err())
                    .collect();
                for (i, &u) in off.iter().enumerate() {
                    if let Some(&v) = off[i + 1..].iter().find(|&&v| !g.adjacent(u, v)) {
                        return Some(PaschViolation { x, y, u, v });
                    }
                }
            }
            None
        })
        .collect();
    match found.into_iter().flatten().next() {
        Some(v) => Err(v),
        None => Ok(()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum DesignViolation {
    /// A block whose size differs from the expected block size.
    BlockSize { x: u32, block: Vec<u32>, expected: usize },
    /// A pair of lines through `x` covered `count` times.
    PairCount { x: u32, lines: (u32, u32), count: usize },
}

/// Points: the lines through `x`. Blocks: the distinct `[x,z]` for `z` at
/// distance 2. Checks the 2-(r, block_size, 1) design axioms; returns the
/// number of blocks.
pub fn verify_design(cover: &LineCover, sets: &LineSets, x: u32, block_size: usize) -> Result<usize, DesignViolation> {
    let through = cover.through(x);
    let blocks: BTreeSet<u64> = sets.at(x).iter().map(|&(_, m)| m).collect();
    let expand = |m: u64| -> Vec<u32> {
        through.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, &l)| l).collect()
    };
    if let Some(&m) = blocks.iter().find(|m| m.count_ones() as usize != block_size) {
        return Err(DesignViolation::BlockSize { x, block: expand(m), expected: block_size });
    }
    let r = through.len();
    for i in 0..r {
        for j in i + 1..r {
            let pair = 1u64 << i | 1u64 << j;
            let count = blocks.iter().filter(|&&m| m & pair == pair).count();
            if count != 1 {
                return Err(DesignViolation::PairCount { x, lines: (through[i], through[j]), count });
            }
        }
    }
    Ok(blocks.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_hamming, build_johnson};

    fn setup(g: &Graph, c: &LineCover) -> (DistanceData, LineGeometry, LineSets) {
        let dist = DistanceData::new(g).unwrap();
        let geom = LineGeometry::new(&dist, c);
        let sets = LineSets::new(&dist, &geom, c).unwrap();
        (dist, geom, sets)
    }

    #[test]
    fn johnson_has_els_pasch_and_designs() {
        let (g, c) = build_johnson(8, 3).unwrap();
        let (dist, geom, sets) = setup(&g, &c);
        assert_eq!(check_els(&dist, &geom, &c, &sets), Ok(()));
        assert_eq!(check_dual_pasch(&g, &c), Ok(()));
        for x in 0..g.n() as u32 {
            assert_eq!(verify_design(&c, &sets, x, 2), Ok(3));
        }
        let y = dist.sphere(0, 2)[0];
        assert_eq!(sets.lines(&c, 0, y).len(), 2);
    }

    #[test]
    fn hamming_line_sets_are_axis_pairs() {
        let (g, c) = build_hamming(3, 3).unwrap();
        let (dist, geom, sets) = setup(&g, &c);
        assert_eq!(check_els(&dist, &geom, &c, &sets), Ok(()));
        assert_eq!(check_dual_pasch(&g, &c), Ok(()));
        assert!(sets.at(0).iter().all(|&(_, m)| m.count_ones() == 2));
    }

    #[test]
    fn design_rejects_wrong_block_size() {
        let (g, c) = build_johnson(8, 3).unwrap();
        let (_, _, sets) = setup(&g, &c);
        assert!(matches!(verify_design(&c, &sets, 0, 3), Err(DesignViolation::BlockSize { .. })));
    }
}
