//! Johnson, Grassmann, Hamming and bilinear forms graphs with their
//! constructive line covers, plus grids and clique extensions.
//!
//! Vertices are indexed by the lexicographic rank of their canonical label:
//! sorted element lists for Johnson, RREF matrices for Grassmann, words for
//! Hamming and row-major matrices for bilinear forms.

use std::collections::HashMap;

use rayon::prelude::*;
use thiserror::Error;

use geodrg_core::{gaussian_bracket, ClassicalParameterSet};

use crate::gf::{combinations, vectors, Field};
use crate::graph::{Graph, GraphError, LineCover};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("q = {0} is not a supported prime power")]
    NotPrimePower(u64),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub type Built = (Graph, LineCover);

fn params(ok: bool, msg: impl FnOnce() -> String) -> Result<(), FamilyError> {
    if ok {
        Ok(())
    } else {
        Err(FamilyError::Params(msg()))
    }
}

fn field(q: u64) -> Result<Field, FamilyError> {
    Field::new(q).ok_or(FamilyError::NotPrimePower(q))
}

fn mask(set: &[usize]) -> u64 {
    set.iter().fold(0, |m, &i| m | 1 << i)
}

fn adjacency_by(n: usize, adjacent: impl Fn(usize, usize) -> bool + Sync) -> Vec<Vec<u32>> {
    (0..n).into_par_iter().map(|a| (0..n).filter(|&b| b != a && adjacent(a, b)).map(|b| b as u32).collect()).collect()
}

fn set_label(set: &[usize]) -> String {
    let parts: Vec<String> = set.iter().map(usize::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

fn matrix_label(m: &[u8], rows: usize, cols: usize) -> String {
    let rows: Vec<String> =
        (0..rows).map(|r| m[r * cols..(r + 1) * cols].iter().map(|x| x.to_string()).collect::<String>()).collect();
    rows.join("/")
}

/// `D`-subsets of an `n`-set, adjacent when they share `D - 1` elements.
pub fn build_johnson(n: usize, d: usize) -> Result<Built, FamilyError> {
    params(d >= 2 && n >= 2 * d && n <= 64, || format!("Johnson needs n >= 2D >= 4 (n <= 64), got n={n}, D={d}"))?;
    let sets = combinations(n, d);
    let masks: Vec<u64> = sets.iter().map(|s| mask(s)).collect();
    let index: HashMap<u64, u32> = masks.iter().enumerate().map(|(i, &m)| (m, i as u32)).collect();
    let adj = adjacency_by(sets.len(), |a, b| (masks[a] & masks[b]).count_ones() as usize == d - 1);
    let labels = sets.iter().map(|s| set_label(s)).collect();
    let graph = Graph::from_adjacency(adj, Some(labels))?;

    let lines = combinations(n, d - 1)
        .iter()
        .map(|t| {
            let m = mask(t);
            (0..n).filter(|x| m >> x & 1 == 0).map(|x| index[&(m | 1 << x)]).collect()
        })
        .collect();
    let cover = LineCover::new(graph.n(), lines)?;
    Ok((graph, cover))
}

/// The other maximal-clique family of J(n, D): the `D`-subsets of a fixed
/// `(D+1)`-set. These cliques have size `D + 1`.
pub fn johnson_top_cliques(n: usize, d: usize) -> Result<LineCover, FamilyError> {
    params(d >= 2 && n >= 2 * d && n <= 64, || format!("Johnson needs n >= 2D >= 4, got n={n}, D={d}"))?;
    let index: HashMap<u64, u32> =
        combinations(n, d).iter().enumerate().map(|(i, s)| (mask(s), i as u32)).collect();
    let lines = combinations(n, d + 1)
        .iter()
        .map(|s| {
            let m = mask(s);
            s.iter().map(|&x| index[&(m & !(1 << x))]).collect()
        })
        .collect();
    Ok(LineCover::new(index.len(), lines)?)
}

/// `D`-subspaces of GF(q)^n, adjacent when they meet in a `(D-1)`-subspace.
pub fn build_grassmann(q: u64, n: usize, d: usize) -> Result<Built, FamilyError> {
    let f = field(q)?;
    params(d >= 2 && n >= 2 * d, || format!("Grassmann needs n >= 2D >= 4, got n={n}, D={d}"))?;
    let spaces = f.subspaces(n, d);
    let stacked_rank = |a: &[u8], b: &[u8]| {
        let mut m = a.to_vec();
        m.extend_from_slice(b);
        f.rank(&m, a.len() / n + b.len() / n, n)
    };
    let adj = adjacency_by(spaces.len(), |a, b| stacked_rank(&spaces[a], &spaces[b]) == d + 1);
    let labels = spaces.iter().map(|s| matrix_label(s, d, n)).collect();
    let graph = Graph::from_adjacency(adj, Some(labels))?;

    let lines = f
        .subspaces(n, d - 1)
        .par_iter()
        .map(|t| (0..spaces.len() as u32).filter(|&v| stacked_rank(&spaces[v as usize], t) == d).collect())
        .collect();
    let cover = LineCover::new(graph.n(), lines)?;
    Ok((graph, cover))
}

/// Words of length `D` over an `e`-letter alphabet, adjacent when they differ
/// in one position; lines fix all coordinates but one.
pub fn build_hamming(d: usize, e: usize) -> Result<Built, FamilyError> {
    params(d >= 1 && e >= 2, || format!("Hamming needs D >= 1 and e >= 2, got D={d}, e={e}"))?;
    let words: Vec<Vec<u8>> = vectors(e, d).collect();
    let adj = adjacency_by(words.len(), |a, b| words[a].iter().zip(&words[b]).filter(|(x, y)| x != y).count() == 1);
    let labels = words.iter().map(|w| w.iter().map(|x| x.to_string()).collect()).collect();
    let graph = Graph::from_adjacency(adj, Some(labels))?;

    let stride = |pos: usize| e.pow((d - 1 - pos) as u32);
    let mut lines = Vec::new();
    for (v, w) in words.iter().enumerate() {
        for (pos, &x) in w.iter().enumerate() {
            if x == 0 {
                lines.push((0..e).map(|t| (v + t * stride(pos)) as u32).collect());
            }
        }
    }
    let cover = LineCover::new(graph.n(), lines)?;
    Ok((graph, cover))
}

/// `d × e` matrices over GF(q), adjacent when their difference has rank 1.
/// The line through `A` in direction `u` is `{A + u wᵀ : w ∈ GF(q)^e}`.
pub fn build_bilinear(d: usize, e: usize, q: u64) -> Result<Built, FamilyError> {
    let f = field(q)?;
    params(1 <= d && d <= e, || format!("bilinear forms need 1 <= d <= e, got d={d}, e={e}"))?;
    let qs = f.q();
    let mats: Vec<Vec<u8>> = vectors(qs, d * e).collect();
    let index = |m: &[u8]| m.iter().fold(0usize, |acc, &x| acc * qs + x as usize) as u32;
    let diff = |a: &[u8], b: &[u8]| a.iter().zip(b).map(|(&x, &y)| f.sub(x, y)).collect::<Vec<u8>>();
    let adj = adjacency_by(mats.len(), |a, b| f.rank(&diff(&mats[a], &mats[b]), d, e) == 1);
    let labels = mats.iter().map(|m| matrix_label(m, d, e)).collect();
    let graph = Graph::from_adjacency(adj, Some(labels))?;

    let dirs = f.projective_points(d);
    let ws: Vec<Vec<u8>> = vectors(qs, e).collect();
    let mut lines: Vec<Vec<u32>> = Vec::new();
    for a in &mats {
        for u in &dirs {
            let mut line: Vec<u32> = ws
                .iter()
                .map(|w| {
                    let m: Vec<u8> =
                        (0..d * e).map(|i| f.add(a[i], f.mul(u[i / e], w[i % e]))).collect();
                    index(&m)
                })
                .collect();
            line.sort_unstable();
            lines.push(line);
        }
    }
    lines.sort();
    lines.dedup();
    let cover = LineCover::new(graph.n(), lines)?;
    Ok((graph, cover))
}

/// Index of the Grassmann vertex `rowspace [I | A]` for each bilinear vertex
/// `A`, given the vertex labels of both graphs.
pub fn bilinear_embedding(bil: &Graph, grass: &Graph, d: usize, e: usize) -> Option<Vec<u32>> {
    let pos: HashMap<&str, u32> = grass.labels().iter().enumerate().map(|(i, l)| (l.as_str(), i as u32)).collect();
    bil.labels()
        .iter()
        .map(|l| {
            let rows: Vec<String> = l
                .split('/')
                .enumerate()
                .map(|(i, r)| {
                    let ident: String = (0..d).map(|j| if i == j { '1' } else { '0' }).collect();
                    format!("{ident}{r}")
                })
                .collect();
            debug_assert!(rows.iter().all(|r| r.len() == d + e));
            pos.get(rows.join("/").as_str()).copied()
        })
        .collect()
}

/// The rook's graph `K_m □ K_n`; vertex `(i, j)` has index `i * n + j`.
pub fn build_grid(m: usize, n: usize) -> Result<Graph, FamilyError> {
    params(m >= 1 && n >= 1, || format!("grid needs m, n >= 1, got {m}x{n}"))?;
    let adj = adjacency_by(m * n, |a, b| a / n == b / n || a % n == b % n);
    let labels = (0..m * n).map(|v| format!("({},{})", v / n, v % n)).collect();
    Ok(Graph::from_adjacency(adj, Some(labels))?)
}

/// Rows and columns of the `m × n` grid.
pub fn grid_lines(m: usize, n: usize) -> Result<LineCover, FamilyError> {
    let rows = (0..m).map(|i| (0..n).map(|j| (i * n + j) as u32).collect());
    let cols = (0..n).map(|j| (0..m).map(|i| (i * n + j) as u32).collect());
    Ok(LineCover::new(m * n, rows.chain(cols).collect())?)
}

/// Replaces each vertex by an `s`-clique; vertex `(v, t)` has index `v * s + t`.
pub fn clique_extension(g: &Graph, s: usize) -> Result<Graph, FamilyError> {
    params(s >= 1, || "clique extension needs s >= 1".to_string())?;
    let n = g.n() * s;
    let adj = (0..n)
        .map(|x| {
            let v = (x / s) as u32;
            let mut nb: Vec<u32> = (0..s).map(|t| (v as usize * s + t) as u32).filter(|&y| y as usize != x).collect();
            for &w in g.neighbors(v) {
                nb.extend((0..s).map(|t| (w as usize * s + t) as u32));
            }
            nb
        })
        .collect();
    let labels = if s == 1 {
        g.labels().to_vec()
    } else {
        (0..n).map(|x| format!("{}#{}", g.label((x / s) as u32), x % s)).collect()
    };
    Ok(Graph::from_adjacency(adj, Some(labels))?)
}

/// A named family with its parameters, as given on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Johnson { n: usize, d: usize },
    Grassmann { q: u64, n: usize, d: usize },
    Hamming { d: usize, e: usize },
    Bilinear { d: usize, e: usize, q: u64 },
    Grid { m: usize, n: usize },
    /// `s`-clique extension of the `m × n` grid.
    CliqueExtension { m: usize, n: usize, s: usize },
}

impl Family {
    pub const NAMES: [&'static str; 6] = ["johnson", "grassmann", "hamming", "bilinear", "grid", "clique-extension"];

    pub fn from_args(name: &str, args: &[u64]) -> Result<Family, FamilyError> {
        let want = match name {
            "johnson" | "hamming" | "grid" => 2,
            "grassmann" | "bilinear" | "clique-extension" => 3,
            _ => return Err(FamilyError::Params(format!("unknown family {name:?}; expected one of {}", Self::NAMES.join(", ")))),
        };
        params(args.len() == want, || format!("{name} takes {want} parameters, got {}", args.len()))?;
        let u = |i: usize| args[i] as usize;
        Ok(match name {
            "johnson" => Family::Johnson { n: u(0), d: u(1) },
            "grassmann" => Family::Grassmann { q: args[0], n: u(1), d: u(2) },
            "hamming" => Family::Hamming { d: u(0), e: u(1) },
            "bilinear" => Family::Bilinear { d: u(0), e: u(1), q: args[2] },
            "grid" => Family::Grid { m: u(0), n: u(1) },
            _ => Family::CliqueExtension { m: u(0), n: u(1), s: u(2) },
        })
    }

    /// File stem such as `johnson-8-3`.
    pub fn stem(&self) -> String {
        match *self {
            Family::Johnson { n, d } => format!("johnson-{n}-{d}"),
            Family::Grassmann { q, n, d } => format!("grassmann-{q}-{n}-{d}"),
            Family::Hamming { d, e } => format!("hamming-{d}-{e}"),
            Family::Bilinear { d, e, q } => format!("bilinear-{d}-{e}-{q}"),
            Family::Grid { m, n } => format!("grid-{m}-{n}"),
            Family::CliqueExtension { m, n, s } => format!("clique-extension-{m}-{n}-{s}"),
        }
    }

    /// The graph and, where one is known, its line cover.
    pub fn build(&self) -> Result<(Graph, Option<LineCover>), FamilyError> {
        let with = |b: Built| (b.0, Some(b.1));
        Ok(match *self {
            Family::Johnson { n, d } => with(build_johnson(n, d)?),
            Family::Grassmann { q, n, d } => with(build_grassmann(q, n, d)?),
            Family::Hamming { d, e } => with(build_hamming(d, e)?),
            Family::Bilinear { d, e, q } => with(build_bilinear(d, e, q)?),
            Family::Grid { m, n } => (build_grid(m, n)?, Some(grid_lines(m, n)?)),
            Family::CliqueExtension { m, n, s } => (clique_extension(&build_grid(m, n)?, s)?, None),
        })
    }

    /// Classical parameters `(D, b, alpha, beta)` of the four distance-regular families.
    pub fn classical(&self) -> Option<ClassicalParameterSet> {
        let cp = match *self {
            Family::Johnson { n, d } => ClassicalParameterSet::from_ints(d, 1, 1, n as i64 - d as i64),
            Family::Hamming { d, e } => ClassicalParameterSet::from_ints(d, 1, 0, e as i64 - 1),
            Family::Grassmann { q, n, d } => {
                let q = q as i64;
                let beta = gaussian_bracket(n.checked_sub(d)? as u32 + 1, q).ok()? - 1;
                ClassicalParameterSet::from_ints(d, q, q, beta)
            }
            Family::Bilinear { d, e, q } => {
                let q = q as i64;
                ClassicalParameterSet::from_ints(d, q, q - 1, q.checked_pow(e as u32)? - 1)
            }
            Family::Grid { .. } | Family::CliqueExtension { .. } => return None,
        };
        cp.ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn summary(g: &Graph, c: &LineCover) -> (usize, Option<usize>, usize, usize) {
        (g.n(), g.regular_degree(), c.lines()[0].len(), c.through(0).len())
    }

    #[test]
    fn johnson_counts() {
        let (g, c) = build_johnson(6, 3).unwrap();
        assert_eq!(summary(&g, &c), (20, Some(9), 4, 3));
        let (g, c) = build_johnson(8, 3).unwrap();
        assert_eq!(summary(&g, &c), (56, Some(15), 6, 3));
        assert_eq!(g.label(0), "{0,1,2}");
        let (g, c) = build_johnson(4, 2).unwrap();
        assert_eq!(summary(&g, &c), (6, Some(4), 3, 2));
        assert!(build_johnson(5, 3).is_err());
        let top = johnson_top_cliques(8, 3).unwrap();
        assert_eq!((top.len(), top.lines()[0].len()), (70, 4));
    }

    #[test]
    fn grassmann_counts() {
        let (g, c) = build_grassmann(2, 4, 2).unwrap();
        assert_eq!((g.n(), c.lines()[0].len()), (35, 7));
        let (g, c) = build_grassmann(3, 4, 2).unwrap();
        assert_eq!((g.n(), c.lines()[0].len()), (130, 13));
        assert_eq!(build_grassmann(6, 4, 2).unwrap_err(), FamilyError::NotPrimePower(6));
    }

    #[test]
    fn hamming_counts() {
        let (g, c) = build_hamming(3, 3).unwrap();
        assert_eq!(summary(&g, &c), (27, Some(6), 3, 3));
        let (g, c) = build_hamming(2, 2).unwrap();
        assert_eq!((g.n(), g.edge_count(), c.len()), (4, 4, 4));
        let (g, c) = build_hamming(1, 5).unwrap();
        assert_eq!((g.n(), g.edge_count(), c.len()), (5, 10, 1));
    }

    #[test]
    fn bilinear_counts() {
        let (g, c) = build_bilinear(2, 2, 2).unwrap();
        assert_eq!(summary(&g, &c), (16, Some(9), 4, 3));
        let (g, c) = build_bilinear(1, 3, 2).unwrap();
        assert_eq!((g.n(), g.regular_degree(), c.len()), (8, Some(7), 1));
    }

    #[test]
    fn bilinear_embeds_in_grassmann() {
        let (bil, _) = build_bilinear(2, 2, 2).unwrap();
        let (grass, _) = build_grassmann(2, 4, 2).unwrap();
        let map = bilinear_embedding(&bil, &grass, 2, 2).unwrap();
        for a in 0..bil.n() as u32 {
            for b in 0..bil.n() as u32 {
                assert_eq!(bil.adjacent(a, b), grass.adjacent(map[a as usize], map[b as usize]));
            }
        }
    }

    #[test]
    fn grids_and_extensions() {
        let g = build_grid(7, 7).unwrap();
        assert_eq!((g.n(), g.regular_degree()), (49, Some(12)));
        let x = clique_extension(&build_grid(3, 4).unwrap(), 2).unwrap();
        assert_eq!((x.n(), x.regular_degree()), (24, Some(11)));
        let h = build_hamming(3, 3).unwrap().0;
        assert_eq!(clique_extension(&h, 1).unwrap(), h);
        assert_eq!(grid_lines(3, 4).unwrap().len(), 7);
    }

    #[test]
    fn rebuilds_are_identical() {
        assert_eq!(build_bilinear(2, 2, 2).unwrap(), build_bilinear(2, 2, 2).unwrap());
        assert_eq!(build_johnson(6, 3).unwrap().0.to_text(), build_johnson(6, 3).unwrap().0.to_text());
    }

    #[test]
    fn family_arguments_and_classical_parameters() {
        let j = Family::from_args("johnson", &[8, 3]).unwrap();
        assert_eq!(j.stem(), "johnson-8-3");
        assert_eq!(j.classical().unwrap().to_string(), "(3,1,1,5)");
        let g = Family::from_args("grassmann", &[2, 6, 3]).unwrap();
        assert_eq!(g.classical().unwrap().to_string(), "(3,2,2,14)");
        let b = Family::from_args("bilinear", &[3, 3, 2]).unwrap();
        assert_eq!(b.classical().unwrap().to_string(), "(3,2,1,7)");
        assert!(Family::from_args("johnson", &[8]).is_err());
        assert!(Family::from_args("petersen", &[]).is_err());
        assert!(Family::from_args("johnson", &[5, 3]).unwrap().build().is_err());
        let (g, c) = Family::from_args("clique-extension", &[2, 3, 2]).unwrap().build().unwrap();
        assert_eq!((g.n(), c), (12, None));
    }
}
