use rayon::prelude::*;
use serde::Serialize;

use geodrg_core::filters::CheckVerdict;
use geodrg_core::rational::rat;
use geodrg_core::spectrum::standard_sequence;
use geodrg_core::{Eigenvalue, IntersectionArray};

use super::distance::DistanceData;
use crate::graph::{Graph, LineCover};

/// Distances from every vertex to every line of a cover.
#[derive(Clone, Debug)]
pub struct LineGeometry {
    lines: usize,
    dist: Vec<u8>,
}

impl LineGeometry {
    pub fn new(dist: &DistanceData, cover: &LineCover) -> Self {
        let lines = cover.len();
        let rows: Vec<Vec<u8>> = (0..dist.n() as u32)
            .into_par_iter()
            .map(|x| {
                let row = dist.row(x);
                cover.lines().iter().map(|l| l.iter().map(|&c| row[c as usize]).min().unwrap_or(u8::MAX)).collect()
            })
            .collect();
        LineGeometry { lines, dist: rows.concat() }
    }

    #[inline]
    pub fn d(&self, x: u32, line: u32) -> usize {
        self.dist[x as usize * self.lines + line as usize] as usize
    }

    pub fn max_distance(&self) -> usize {
        self.dist.iter().copied().max().unwrap_or(0) as usize
    }
}

/// Clause-by-clause check that a cover consists of Delsarte cliques
/// partitioning the edges, `r` through each vertex.
pub fn verify_cover(g: &Graph, cover: &LineCover, r: i64, beta: i64) -> Vec<CheckVerdict> {
    let mut out = Vec::new();

    let non_clique = cover.lines().iter().enumerate().find(|(_, l)| !g.is_clique(l));
    out.push(match non_clique {
        None => CheckVerdict::compare("cover_cliques", cover.len(), "lines are", "cliques", true),
        Some((i, l)) => {
            let (a, b) = l
                .iter()
                .enumerate()
                .flat_map(|(k, &a)| l[k + 1..].iter().map(move |&b| (a, b)))
                .find(|&(a, b)| !g.adjacent(a, b))
                .expect("non-clique has a non-edge");
            CheckVerdict::compare("cover_cliques", format!("line {i}"), "is", "a clique", false)
                .with("non_adjacent", format!("{a},{b}"))
        }
    });

    let want = (beta + 1) as usize;
    let bad_size = cover.lines().iter().enumerate().find(|(_, l)| l.len() != want);
    out.push(match bad_size {
        None if !cover.is_empty() => CheckVerdict::compare("cover_line_size", want, "=", format!("1 + k/r = {want}"), true),
        None => CheckVerdict::compare("cover_line_size", "no lines", "=", want, false),
        Some((i, l)) => CheckVerdict::compare("cover_line_size", l.len(), "=", want, false).with("line", i),
    });

    let bad_edge = g.edges().find(|&(a, b)| {
        let (la, lb) = (cover.through(a), cover.through(b));
        la.iter().filter(|l| lb.binary_search(l).is_ok()).count() != 1
    });
    out.push(match bad_edge {
        None => CheckVerdict::compare("cover_edge_partition", g.edge_count(), "edges in exactly one line", "", true),
        Some((a, b)) => {
            let (la, lb) = (cover.through(a), cover.through(b));
            let n = la.iter().filter(|l| lb.binary_search(l).is_ok()).count();
            CheckVerdict::compare("cover_edge_partition", n, "=", 1, false).with("edge", format!("{a},{b}"))
        }
    });

    let bad_vertex = (0..g.n() as u32).find(|&v| cover.through(v).len() as i64 != r);
    out.push(match bad_vertex {
        None => CheckVerdict::compare("cover_lines_per_vertex", r, "=", r, true),
        Some(v) => CheckVerdict::compare("cover_lines_per_vertex", cover.through(v).len(), "=", r, false).with("vertex", v),
    });
    out
}

/// A pair on which a supposedly constant count differs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountViolation {
    pub x: u32,
    /// The line (for φ) or the second vertex (for τ).
    pub other: u32,
    pub index: usize,
    pub expected: i64,
    pub found: i64,
}

impl std::fmt::Display for CountViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "index {} at ({}, {}): found {}, expected {}", self.index, self.x, self.other, self.found, self.expected)
    }
}

/// Merges per-source tables `index -> value`, keeping the lowest-index
/// disagreement.
fn merge(
    per_x: Vec<Result<Vec<Option<(i64, u32)>>, CountViolation>>,
    len: usize,
    from: usize,
) -> Result<Vec<i64>, CountViolation> {
    let mut out: Vec<Option<i64>> = vec![None; len];
    for (x, t) in per_x.into_iter().enumerate() {
        for (j, v) in t?.into_iter().enumerate() {
            let Some((v, other)) = v else { continue };
            match out[j] {
                None => out[j] = Some(v),
                Some(e) if e != v => {
                    return Err(CountViolation { x: x as u32, other, index: j, expected: e, found: v });
                }
                _ => {}
            }
        }
    }
    Ok(out.into_iter().skip(from).map_while(|v| v).collect())
}

fn record(slot: &mut Option<(i64, u32)>, v: i64, other: u32, x: u32, j: usize) -> Result<(), CountViolation> {
    match *slot {
        None => *slot = Some((v, other)),
        Some((e, _)) if e != v => return Err(CountViolation { x, other, index: j, expected: e, found: v }),
        _ => {}
    }
    Ok(())
}

/// `φ_j` over every vertex/line pair at distance `j`; returns `φ_0, φ_1, ...`.
pub fn measure_phi(dist: &DistanceData, geom: &LineGeometry, cover: &LineCover) -> Result<Vec<i64>, CountViolation> {
    let len = geom.max_distance() + 1;
    let per_x = (0..dist.n() as u32)
        .into_par_iter()
        .map(|x| {
            let row = dist.row(x);
            let mut t = vec![None; len];
            for (li, l) in cover.lines().iter().enumerate() {
                let j = geom.d(x, li as u32);
                let count = l.iter().filter(|&&c| row[c as usize] as usize == j).count() as i64;
                record(&mut t[j], count, li as u32, x, j)?;
            }
            Ok(t)
        })
        .collect();
    merge(per_x, len, 0)
}

/// `τ_i` over every ordered vertex pair at distance `i`; returns `τ_1..τ_D`.
pub fn measure_tau(dist: &DistanceData, geom: &LineGeometry, cover: &LineCover) -> Result<Vec<i64>, CountViolation> {
    let len = dist.diameter() + 1;
    let per_x = (0..dist.n() as u32)
        .into_par_iter()
        .map(|x| {
            let row = dist.row(x);
            let mut t = vec![None; len];
            for y in 0..dist.n() as u32 {
                let i = row[y as usize] as usize;
                if i == 0 {
                    continue;
                }
                let count = cover.through(y).iter().filter(|&&l| geom.d(x, l) == i - 1).count() as i64;
                record(&mut t[i], count, y, x, i)?;
            }
            Ok(t)
        })
        .collect();
    merge(per_x, len, 1)
}

/// `c_i = τ_i φ_{i-1}` against the measured array.
pub fn check_c_factorization(arr: &IntersectionArray, phi: &[i64], tau: &[i64]) -> CheckVerdict {
    let d = arr.diameter();
    let bad = (1..=d).find(|&i| tau.get(i - 1).zip(phi.get(i - 1)).map(|(t, p)| t * p) != Some(arr.c(i)));
    let c: Vec<String> = arr.c_slice().iter().map(i64::to_string).collect();
    match bad {
        None => CheckVerdict::compare("c_equals_tau_phi", c.join(","), "=", "tau_i*phi_{i-1}", true),
        Some(i) => {
            let prod = tau.get(i - 1).zip(phi.get(i - 1)).map(|(t, p)| (t * p).to_string()).unwrap_or("missing".into());
            CheckVerdict::compare("c_equals_tau_phi", arr.c(i), "=", prod, false).with("i", i)
        }
    }
}

/// `(u_{j+1} - u_j) φ_j = (β+1) u_{j+1}` at `θ_min = -r`, exactly, for all `j`.
pub fn check_phi_standard_sequence(arr: &IntersectionArray, r: i64, beta: i64, phi: &[i64]) -> CheckVerdict {
    let name = "phi_standard_sequence";
    let u = match standard_sequence(arr, &Eigenvalue::Exact(rat(-r))).map(|s| s.exact()) {
        Ok(Some(u)) => u,
        Ok(None) => return CheckVerdict::not_applicable(name, "standard sequence is not rational"),
        Err(e) => return CheckVerdict::not_applicable(name, e.to_string()),
    };
    let d = arr.diameter();
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for j in 0..d {
        let Some(&p) = phi.get(j) else {
            return CheckVerdict::compare(name, format!("phi_{j}"), "measured", "missing", false);
        };
        let l = (&u[j + 1] - &u[j]) * rat(p);
        let r = rat(beta + 1) * &u[j + 1];
        if l != r {
            return CheckVerdict::compare(name, l, "=", r, false).with("j", j).with("phi_j", p);
        }
        lhs.push(l.to_string());
        rhs.push(r.to_string());
    }
    CheckVerdict::compare(name, lhs.join(","), "=", rhs.join(","), true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_hamming, build_johnson, johnson_top_cliques};
    use geodrg_core::filters::Status;

    #[test]
    fn johnson_measurements() {
        let (g, c) = build_johnson(8, 3).unwrap();
        let dist = DistanceData::new(&g).unwrap();
        assert!(verify_cover(&g, &c, 3, 5).iter().all(|v| v.status == Status::Pass));
        let geom = LineGeometry::new(&dist, &c);
        assert_eq!(geom.max_distance(), 2);
        assert_eq!(measure_phi(&dist, &geom, &c).unwrap(), vec![1, 2, 3]);
        assert_eq!(measure_tau(&dist, &geom, &c).unwrap(), vec![1, 2, 3]);
        let arr: IntersectionArray = "{15,8,3;1,4,9}".parse().unwrap();
        assert_eq!(check_c_factorization(&arr, &[1, 2, 3], &[1, 2, 3]).status, Status::Pass);
        let v = check_phi_standard_sequence(&arr, 3, 5, &[1, 2, 3]);
        assert_eq!(v.status, Status::Pass, "{v:?}");
        assert_eq!(check_phi_standard_sequence(&arr, 3, 5, &[1, 2, 2]).status, Status::Fail);
    }

    #[test]
    fn hamming_measurements() {
        let (g, c) = build_hamming(3, 3).unwrap();
        let dist = DistanceData::new(&g).unwrap();
        let geom = LineGeometry::new(&dist, &c);
        assert_eq!(measure_phi(&dist, &geom, &c).unwrap(), vec![1, 1, 1]);
        assert_eq!(measure_tau(&dist, &geom, &c).unwrap(), vec![1, 2, 3]);
    }

    #[test]
    fn top_cliques_are_not_delsarte() {
        let (g, _) = build_johnson(8, 3).unwrap();
        let top = johnson_top_cliques(8, 3).unwrap();
        let v = verify_cover(&g, &top, 3, 5);
        let size = v.iter().find(|c| c.name == "cover_line_size").unwrap();
        assert_eq!((size.status, size.lhs.as_deref(), size.rhs.as_deref()), (Status::Fail, Some("4"), Some("6")));
    }

    #[test]
    fn broken_cover_is_witnessed() {
        let (g, c) = build_hamming(3, 3).unwrap();
        let mut lines = c.lines().to_vec();
        lines.pop();
        let short = LineCover::new(g.n(), lines).unwrap();
        let v = verify_cover(&g, &short, 3, 2);
        assert_eq!(v[2].status, Status::Fail);
        assert_eq!(v[3].status, Status::Fail);
    }
}
