//! Local graphs `Δ_x`: block structure and the smallest-eigenvalue bound.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use geodrg_core::rational::to_f64;
use geodrg_core::Rational;

use crate::graph::{Graph, LineCover};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalViolation {
    pub x: u32,
    pub pair: Option<(u32, u32)>,
    pub reason: String,
}

fn first_violation(n: usize, f: impl Fn(u32) -> Option<LocalViolation> + Sync + Send) -> Result<(), LocalViolation> {
    match (0..n as u32).into_par_iter().find_map_first(f) {
        Some(v) => Err(v),
        None => Ok(()),
    }
}

/// Every local graph is a disjoint union of `r` cliques of size `beta`.
pub fn check_local_disjoint_cliques(g: &Graph, r: usize, beta: usize) -> Result<(), LocalViolation> {
    first_violation(g.n(), |x| {
        let nb = g.neighbors(x);
        let mut seen = vec![false; nb.len()];
        let mut blocks = 0;
        for start in 0..nb.len() {
            if seen[start] {
                continue;
            }
            blocks += 1;
            let block: Vec<usize> = (0..nb.len()).filter(|&j| j == start || g.adjacent(nb[start], nb[j])).collect();
            if block.len() != beta {
                return Some(LocalViolation {
                    x,
                    pair: None,
                    reason: format!("block of {} has size {}, expected {beta}", nb[start], block.len()),
                });
            }
            for (i, &a) in block.iter().enumerate() {
                seen[a] = true;
                if let Some(&b) = block[i + 1..].iter().find(|&&b| !g.adjacent(nb[a], nb[b])) {
                    return Some(LocalViolation { x, pair: Some((nb[a], nb[b])), reason: "block is not a clique".into() });
                }
            }
        }
        (blocks != r).then(|| LocalViolation { x, pair: None, reason: format!("{blocks} blocks, expected {r}") })
    })
}

/// Shape of a recognised clique extension of a grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GridShape {
    pub rows: usize,
    pub cols: usize,
    pub extension: usize,
}

/// Certifies that every `Δ_x` is the `(φ₁-1)`-clique extension of a
/// `(β/(φ₁-1)) × r` grid: each neighbour lies in one line and one assembly
/// through `x`, adjacency in `Δ_x` means sharing one of them, and every
/// line/assembly cell has `φ₁ - 1` vertices.
pub fn check_local_grid(
    g: &Graph,
    cover: &LineCover,
    assemblies: &[Vec<u32>],
    assembly_incidence: &[Vec<u32>],
    phi1: usize,
) -> Result<GridShape, LocalViolation> {
    let shape = GridShape {
        rows: assembly_incidence.first().map_or(0, Vec::len),
        cols: cover.through(0).len(),
        extension: phi1.saturating_sub(1),
    };
    first_violation(g.n(), |x| {
        let lines = cover.through(x);
        let asm = &assembly_incidence[x as usize];
        if asm.len() != shape.rows || lines.len() != shape.cols {
            return Some(LocalViolation {
                x,
                pair: None,
                reason: format!("{} assemblies and {} lines, expected {}x{}", asm.len(), lines.len(), shape.rows, shape.cols),
            });
        }
        let nb = g.neighbors(x);
        let mut cell = Vec::with_capacity(nb.len());
        for &y in nb {
            let li: Vec<usize> = (0..lines.len()).filter(|&i| cover.line(lines[i]).binary_search(&y).is_ok()).collect();
            let ai: Vec<usize> =
                (0..asm.len()).filter(|&i| assemblies[asm[i] as usize].binary_search(&y).is_ok()).collect();
            if li.len() != 1 || ai.len() != 1 {
                return Some(LocalViolation {
                    x,
                    pair: Some((x, y)),
                    reason: format!("neighbour on {} lines and {} assemblies through x", li.len(), ai.len()),
                });
            }
            cell.push((ai[0], li[0]));
        }
        let mut sizes = vec![0usize; shape.rows * shape.cols];
        for &(a, l) in &cell {
            sizes[a * shape.cols + l] += 1;
        }
        if let Some(i) = sizes.iter().position(|&s| s != shape.extension) {
            return Some(LocalViolation {
                x,
                pair: None,
                reason: format!("cell ({}, {}) has {} vertices, expected {}", i / shape.cols, i % shape.cols, sizes[i], shape.extension),
            });
        }
        for i in 0..nb.len() {
            for j in i + 1..nb.len() {
                let share = cell[i].0 == cell[j].0 || cell[i].1 == cell[j].1;
                if share != g.adjacent(nb[i], nb[j]) {
                    return Some(LocalViolation {
                        x,
                        pair: Some((nb[i], nb[j])),
                        reason: format!("adjacent = {}, but share line or assembly = {share}", !share),
                    });
                }
            }
        }
        None
    })
    .map(|()| shape)
}

/// Result of the local smallest-eigenvalue bound over all vertices.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalEigenvalue {
    /// Smallest local eigenvalue seen, from the floating-point solver.
    pub min: f64,
    pub vertex: u32,
    /// Vertex where the bound fails, if any.
    pub violation: Option<u32>,
    /// Vertices whose float value fell within the slack and were decided exactly.
    pub escalated: usize,
}

pub const EIGEN_SLACK: f64 = 1e-6;

/// `θ_min(Δ_x) ≥ bound` for every `x`. Values within `EIGEN_SLACK` of the
/// bound are settled exactly by testing `A - bound·I` for positive
/// semidefiniteness with fraction-free elimination.
pub fn check_local_eigenvalue(g: &Graph, bound: &Rational) -> LocalEigenvalue {
    let t = to_f64(bound);
    let per: Vec<(f64, bool, bool)> = (0..g.n() as u32)
        .into_par_iter()
        .map(|x| {
            let nb = g.neighbors(x);
            let m = nb.len();
            if m == 0 {
                return (0.0, true, false);
            }
            let a = DMatrix::from_fn(m, m, |i, j| if g.adjacent(nb[i], nb[j]) { 1.0 } else { 0.0 });
            let min = a.symmetric_eigen().eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
            if min >= t + EIGEN_SLACK {
                (min, true, false)
            } else if min < t - EIGEN_SLACK {
                (min, false, false)
            } else {
                (min, shifted_is_psd(g, nb, bound), true)
            }
        })
        .collect();
    let (vertex, min) = per
        .iter()
        .enumerate()
        .map(|(i, p)| (i as u32, p.0))
        .fold((0, f64::INFINITY), |acc, (i, m)| if m < acc.1 { (i, m) } else { acc });
    LocalEigenvalue {
        min,
        vertex,
        violation: per.iter().position(|p| !p.1).map(|i| i as u32),
        escalated: per.iter().filter(|p| p.2).count(),
    }
}

/// Whether `den·A - num·I` is positive semidefinite, where `bound = num/den`
/// and `A` is the adjacency matrix of the subgraph induced on `vs`.
fn shifted_is_psd(g: &Graph, vs: &[u32], bound: &Rational) -> bool {
    let (num, den) = (bound.numer().clone(), bound.denom().clone());
    let m = vs.len();
    let mut a: Vec<Vec<BigInt>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let adj = if g.adjacent(vs[i], vs[j]) { den.clone() } else { BigInt::zero() };
                    if i == j {
                        adj - &num
                    } else {
                        adj
                    }
                })
                .collect()
        })
        .collect();
    is_psd(&mut a)
}

/// Symmetric Bareiss elimination. A zero pivot is allowed only when its
/// whole remaining row vanishes, in which case the index is skipped.
pub fn is_psd(a: &mut [Vec<BigInt>]) -> bool {
    let m = a.len();
    let mut prev = BigInt::from(1);
    let mut active: Vec<usize> = (0..m).collect();
    while let Some(k) = active.first().copied() {
        active.remove(0);
        let p = a[k][k].clone();
        if p.is_negative() {
            return false;
        }
        if p.is_zero() {
            if active.iter().any(|&j| !a[k][j].is_zero()) {
                return false;
            }
            continue;
        }
        for &i in &active {
            for &j in &active {
                let v = (&p * &a[i][j] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = p;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_grid, build_hamming};
    use crate::graph::Graph;
    use geodrg_core::rational::rat;

    fn matrix(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn psd_test_handles_singular_matrices() {
        assert!(is_psd(&mut matrix(&[&[1, 1], &[1, 1]])));
        assert!(is_psd(&mut matrix(&[&[0, 0], &[0, 2]])));
        assert!(!is_psd(&mut matrix(&[&[0, 1], &[1, 0]])));
        assert!(!is_psd(&mut matrix(&[&[1, 2], &[2, 1]])));
        assert!(is_psd(&mut matrix(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]])));
    }

    #[test]
    fn hamming_local_graphs() {
        let (g, _) = build_hamming(3, 3).unwrap();
        assert_eq!(check_local_disjoint_cliques(&g, 3, 2), Ok(()));
        assert!(check_local_disjoint_cliques(&g, 2, 3).is_err());
        let e = check_local_eigenvalue(&g, &rat(-2));
        assert!((e.min + 1.0).abs() < 1e-9);
        assert_eq!((e.violation, e.escalated), (None, 0));
    }

    #[test]
    fn equality_is_decided_exactly() {
        // the 5x3 grid has smallest eigenvalue exactly -2
        let grid = build_grid(5, 3).unwrap();
        let cone: Vec<Vec<u32>> = std::iter::once((1..=15).collect())
            .chain((0..15u32).map(|v| {
                let mut nb: Vec<u32> = grid.neighbors(v).iter().map(|w| w + 1).collect();
                nb.push(0);
                nb
            }))
            .collect();
        let g = Graph::from_adjacency(cone, None).unwrap();
        let at = check_local_eigenvalue(&g, &rat(-2));
        assert_eq!(at.violation, None);
        assert!(at.escalated >= 1);
        let above = check_local_eigenvalue(&g, &geodrg_core::rational::ratio(-19, 10));
        assert!(above.violation.is_some());
    }
}
