//! Maximal cliques by pivoted Bron–Kerbosch, assemblies, and an exact-cover
//! search for Delsarte covers.

use std::collections::HashMap;

use rayon::prelude::*;

use geodrg_core::filters::CheckVerdict;

use crate::graph::{BitSet, Graph, LineCover};

fn expand(g: &Graph, r: &mut Vec<u32>, mut p: BitSet, mut x: BitSet, min: usize, out: &mut Vec<Vec<u32>>) {
    if p.is_empty() {
        if x.is_empty() && r.len() >= min {
            let mut c = r.clone();
            c.sort_unstable();
            out.push(c);
        }
        return;
    }
    if r.len() + p.len() < min {
        return;
    }
    let pivot = p.iter().chain(x.iter()).max_by_key(|&u| p.intersection_len(g.neighbor_set(u))).unwrap();
    let candidates: Vec<u32> = p.and_not(g.neighbor_set(pivot)).iter().collect();
    for v in candidates {
        let nv = g.neighbor_set(v);
        r.push(v);
        expand(g, r, p.and(nv), x.and(nv), min, out);
        r.pop();
        p.remove(v);
        x.insert(v);
    }
}

/// All maximal cliques with at least `min` vertices, each sorted, listed in
/// lexicographic order.
pub fn maximal_cliques(g: &Graph, min: usize) -> Vec<Vec<u32>> {
    let n = g.n();
    let mut out: Vec<Vec<u32>> = (0..n as u32)
        .into_par_iter()
        .map(|v| {
            let nv = g.neighbor_set(v);
            let later = BitSet::from_iter(n, nv.iter().filter(|&w| w > v));
            let earlier = BitSet::from_iter(n, nv.iter().filter(|&w| w < v));
            let mut found = Vec::new();
            expand(g, &mut vec![v], later, earlier, min, &mut found);
            found
        })
        .flatten()
        .collect();
    out.sort();
    out
}

/// Maximal cliques that are not lines, with the structural checks on them.
#[derive(Clone, Debug)]
pub struct Assemblies {
    pub cliques: Vec<Vec<u32>>,
    /// Assemblies through each vertex.
    pub incidence: Vec<Vec<u32>>,
    pub verdicts: Vec<CheckVerdict>,
}

pub fn find_assemblies(g: &Graph, cover: &LineCover, r: i64, beta: i64, phi1: i64) -> Assemblies {
    let n = g.n();
    let cliques: Vec<Vec<u32>> =
        maximal_cliques(g, 2).into_iter().filter(|c| cover.lines().binary_search(c).is_err()).collect();
    let mut incidence = vec![Vec::new(); n];
    for (i, c) in cliques.iter().enumerate() {
        for &v in c {
            incidence[v as usize].push(i as u32);
        }
    }
    let order = ((phi1 - 1) * r + 1) as usize;
    let per_vertex = beta / (phi1 - 1);
    let mut verdicts = Vec::new();

    let bad = cliques.iter().enumerate().find(|(_, c)| c.len() != order);
    verdicts.push(match bad {
        None if !cliques.is_empty() => CheckVerdict::compare("assembly_order", order, "=", "(phi_1-1)r+1", true),
        None => CheckVerdict::compare("assembly_order", "no assemblies", "=", order, false),
        Some((i, c)) => CheckVerdict::compare("assembly_order", c.len(), "=", order, false).with("assembly", i),
    });

    let bad = (0..n).find(|&v| incidence[v].len() as i64 != per_vertex);
    verdicts.push(match bad {
        None => CheckVerdict::compare("assemblies_per_vertex", per_vertex, "=", "beta/(phi_1-1)", true),
        Some(v) => CheckVerdict::compare("assemblies_per_vertex", incidence[v].len(), "=", per_vertex, false).with("vertex", v),
    });

    let count_on = |a: u32, b: u32| {
        let (ia, ib) = (&incidence[a as usize], &incidence[b as usize]);
        ia.iter().filter(|m| ib.binary_search(m).is_ok()).count()
    };
    let bad = g.edges().find(|&(a, b)| count_on(a, b) != 1);
    verdicts.push(match bad {
        None => CheckVerdict::compare("assembly_per_edge", g.edge_count(), "edges in exactly one assembly", "", true),
        Some((a, b)) => CheckVerdict::compare("assembly_per_edge", count_on(a, b), "=", 1, false).with("edge", format!("{a},{b}")),
    });

    let sets: Vec<BitSet> = cliques.iter().map(|c| BitSet::from_iter(n, c.iter().copied())).collect();
    let line_meet = cover.lines().iter().enumerate().find_map(|(li, l)| {
        let mut ms: Vec<u32> = l.iter().flat_map(|&v| incidence[v as usize].iter().copied()).collect();
        ms.sort_unstable();
        ms.dedup();
        ms.into_iter().find_map(|m| {
            let k = l.iter().filter(|&&v| sets[m as usize].contains(v)).count() as i64;
            (k != phi1).then_some((li, m, k))
        })
    });
    verdicts.push(match line_meet {
        None => CheckVerdict::compare("line_meets_assembly", phi1, "=", "phi_1", true),
        Some((l, m, k)) => CheckVerdict::compare("line_meets_assembly", k, "=", phi1, false).with("line", l).with("assembly", m),
    });

    let outside = cliques.par_iter().enumerate().find_map_first(|(mi, _)| {
        let m = &sets[mi];
        (0..n as u32).filter(|&u| !m.contains(u)).find_map(|u| {
            let k = g.neighbor_set(u).intersection_len(m) as i64;
            if k == 0 {
                return None;
            }
            let meeting = cover.through(u).iter().filter(|&&l| cover.line(l).iter().any(|&v| m.contains(v))).count();
            (k != phi1 || meeting != 1).then_some((mi, u, k, meeting))
        })
    });
    verdicts.push(match outside {
        None => CheckVerdict::compare("outside_neighbors_in_assembly", phi1, "=", "phi_1, one meeting line", true),
        Some((m, u, k, meeting)) => CheckVerdict::compare("outside_neighbors_in_assembly", k, "=", phi1, false)
            .with("assembly", m)
            .with("vertex", u)
            .with("meeting_lines", meeting),
    });

    let lhs = cliques.len() as i64 * order as i64;
    let rhs = n as i64 * per_vertex;
    verdicts.push(CheckVerdict::compare("assembly_count", lhs, "=", rhs, lhs == rhs && beta % (phi1 - 1) == 0));

    Assemblies { cliques, incidence, verdicts }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverSearch {
    Found(LineCover),
    /// The search space was exhausted without a cover.
    None,
    /// The node budget ran out first.
    BudgetExceeded { nodes: usize },
}

/// Exact cover of the edge set by cliques of `size` vertices, choosing the
/// most constrained uncovered edge first.
pub fn find_cover(g: &Graph, size: usize, budget: usize) -> CoverSearch {
    let cands: Vec<Vec<u32>> = maximal_cliques(g, size).into_iter().filter(|c| c.len() == size).collect();
    let edges: Vec<(u32, u32)> = g.edges().collect();
    let edge_id: HashMap<(u32, u32), usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let cand_edges: Vec<Vec<usize>> = cands
        .iter()
        .map(|c| {
            let mut es = Vec::new();
            for (i, &a) in c.iter().enumerate() {
                for &b in &c[i + 1..] {
                    es.push(edge_id[&(a, b)]);
                }
            }
            es
        })
        .collect();
    let mut by_edge = vec![Vec::new(); edges.len()];
    for (ci, es) in cand_edges.iter().enumerate() {
        for &e in es {
            by_edge[e].push(ci);
        }
    }

    struct Search<'a> {
        cand_edges: &'a [Vec<usize>],
        by_edge: &'a [Vec<usize>],
        covered: Vec<bool>,
        chosen: Vec<usize>,
        nodes: usize,
        budget: usize,
    }
    impl Search<'_> {
        fn fits(&self, c: usize) -> bool {
            self.cand_edges[c].iter().all(|&e| !self.covered[e])
        }
        /// `Some(true)` solved, `Some(false)` dead end, `None` out of budget.
        fn go(&mut self) -> Option<bool> {
            self.nodes += 1;
            if self.nodes > self.budget {
                return None;
            }
            let mut best: Option<(usize, usize)> = None;
            for e in (0..self.covered.len()).filter(|&e| !self.covered[e]) {
                let k = self.by_edge[e].iter().filter(|&&c| self.fits(c)).count();
                if best.is_none_or(|(_, bk)| k < bk) {
                    best = Some((e, k));
                    if k <= 1 {
                        break;
                    }
                }
            }
            let Some((e, _)) = best else { return Some(true) };
            let options: Vec<usize> = self.by_edge[e].iter().copied().filter(|&c| self.fits(c)).collect();
            for c in options {
                for &x in &self.cand_edges[c] {
                    self.covered[x] = true;
                }
                self.chosen.push(c);
                match self.go() {
                    Some(true) => return Some(true),
                    None => return None,
                    Some(false) => {}
                }
                self.chosen.pop();
                for &x in &self.cand_edges[c] {
                    self.covered[x] = false;
                }
            }
            Some(false)
        }
    }

    let mut s = Search {
        cand_edges: &cand_edges,
        by_edge: &by_edge,
        covered: vec![false; edges.len()],
        chosen: Vec::new(),
        nodes: 0,
        budget,
    };
    match s.go() {
        Some(true) => {
            let lines = s.chosen.iter().map(|&c| cands[c].clone()).collect();
            CoverSearch::Found(LineCover::new(g.n(), lines).expect("cliques of a valid graph"))
        }
        Some(false) => CoverSearch::None,
        None => CoverSearch::BudgetExceeded { nodes: s.nodes - 1 },
    }
}
