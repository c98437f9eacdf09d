//! Simple undirected graphs with a bitset adjacency index, line covers, and
//! the line-oriented text formats used for fixtures.

use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for n = {n}")]
    OutOfRange { vertex: u32, n: usize },
    #[error("loop at vertex {0}")]
    Loop(u32),
    #[error("edge {0}-{1} is not symmetric")]
    Asymmetric(u32, u32),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Fixed-width bitset over vertex indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(n: usize) -> Self {
        BitSet { words: vec![0; n.div_ceil(64)] }
    }

    pub fn from_iter(n: usize, it: impl IntoIterator<Item = u32>) -> Self {
        let mut s = BitSet::new(n);
        for v in it {
            s.insert(v);
        }
        s
    }

    #[inline]
    pub fn insert(&mut self, v: u32) {
        self.words[v as usize / 64] |= 1 << (v % 64);
    }

    #[inline]
    pub fn remove(&mut self, v: u32) {
        self.words[v as usize / 64] &= !(1 << (v % 64));
    }

    #[inline]
    pub fn contains(&self, v: u32) -> bool {
        self.words[v as usize / 64] >> (v % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn and(&self, o: &BitSet) -> BitSet {
        BitSet { words: self.words.iter().zip(&o.words).map(|(a, b)| a & b).collect() }
    }

    pub fn and_not(&self, o: &BitSet) -> BitSet {
        BitSet { words: self.words.iter().zip(&o.words).map(|(a, b)| a & !b).collect() }
    }

    pub fn intersection_len(&self, o: &BitSet) -> usize {
        self.words.iter().zip(&o.words).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros();
                w &= w - 1;
                Some(i as u32 * 64 + t)
            })
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
    labels: Vec<String>,
    bits: Vec<BitSet>,
}

impl Graph {
    /// Validates symmetry and looplessness; neighbor lists are sorted and deduplicated.
    pub fn from_adjacency(mut adj: Vec<Vec<u32>>, labels: Option<Vec<String>>) -> Result<Self, GraphError> {
        let n = adj.len();
        for (v, nb) in adj.iter_mut().enumerate() {
            nb.sort_unstable();
            nb.dedup();
            if let Some(&w) = nb.iter().find(|&&w| w as usize >= n) {
                return Err(GraphError::OutOfRange { vertex: w, n });
            }
            if nb.binary_search(&(v as u32)).is_ok() {
                return Err(GraphError::Loop(v as u32));
            }
        }
        for (v, nb) in adj.iter().enumerate() {
            for &w in nb {
                if adj[w as usize].binary_search(&(v as u32)).is_err() {
                    return Err(GraphError::Asymmetric(v as u32, w));
                }
            }
        }
        let labels = labels.unwrap_or_else(|| (0..n).map(|i| i.to_string()).collect());
        let bits = adj.iter().map(|nb| BitSet::from_iter(n, nb.iter().copied())).collect();
        Ok(Graph { adj, labels, bits })
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n];
        for (a, b) in edges {
            for v in [a, b] {
                if v as usize >= n {
                    return Err(GraphError::OutOfRange { vertex: v, n });
                }
            }
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        Self::from_adjacency(adj, None)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    pub fn neighbor_set(&self, v: u32) -> &BitSet {
        &self.bits[v as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    #[inline]
    pub fn adjacent(&self, a: u32, b: u32) -> bool {
        self.bits[a as usize].contains(b)
    }

    pub fn label(&self, v: u32) -> &str {
        &self.labels[v as usize]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Edges `(a, b)` with `a < b` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(a, nb)| nb.iter().filter(move |&&b| b > a as u32).map(move |&b| (a as u32, b)))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Valency if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let k = self.adj.first().map_or(0, Vec::len);
        self.adj.iter().all(|nb| nb.len() == k).then_some(k)
    }

    /// Induced subgraph on `vs` (in the given order), relabelled 0..len.
    pub fn induced(&self, vs: &[u32]) -> Graph {
        let pos: std::collections::HashMap<u32, u32> = vs.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect();
        let adj = vs
            .iter()
            .map(|&v| {
                let mut nb: Vec<u32> = self.neighbors(v).iter().filter_map(|w| pos.get(w).copied()).collect();
                nb.sort_unstable();
                nb
            })
            .collect();
        let labels = vs.iter().map(|&v| self.labels[v as usize].clone()).collect();
        Graph::from_adjacency(adj, Some(labels)).expect("induced subgraph of a valid graph")
    }

    pub fn without_edge(&self, a: u32, b: u32) -> Graph {
        let mut adj = self.adj.clone();
        adj[a as usize].retain(|&w| w != b);
        adj[b as usize].retain(|&w| w != a);
        Graph::from_adjacency(adj, Some(self.labels.clone())).expect("edge removal keeps validity")
    }

    pub fn is_clique(&self, vs: &[u32]) -> bool {
        vs.iter().enumerate().all(|(i, &a)| vs[i + 1..].iter().all(|&b| self.adjacent(a, b)))
    }

    /// `n <count>` header followed by `i: j k l` per vertex.
    pub fn to_text(&self) -> String {
        let mut s = format!("n {}\n", self.n());
        for (i, nb) in self.adj.iter().enumerate() {
            let _ = write!(s, "{i}:");
            for w in nb {
                let _ = write!(s, " {w}");
            }
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<Graph, GraphError> {
        let err = |line: usize, msg: String| GraphError::Parse { line, msg };
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or_else(|| err(1, "missing header `n <count>`".into()))?;
        let n: usize = header
            .trim()
            .strip_prefix("n ")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| err(hl + 1, format!("expected `n <count>`, got `{header}`")))?;
        let mut adj: Vec<Option<Vec<u32>>> = vec![None; n];
        for (ln, l) in lines {
            let (head, rest) = l.split_once(':').ok_or_else(|| err(ln + 1, "expected `i: neighbors`".into()))?;
            let i: usize = head.trim().parse().map_err(|_| err(ln + 1, format!("bad vertex index `{head}`")))?;
            if i >= n {
                return Err(err(ln + 1, format!("vertex {i} out of range")));
            }
            if adj[i].is_some() {
                return Err(err(ln + 1, format!("vertex {i} listed twice")));
            }
            let nb = rest
                .split_whitespace()
                .map(|t| t.parse::<u32>().map_err(|_| err(ln + 1, format!("bad neighbor `{t}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            adj[i] = Some(nb);
        }
        let adj = adj.into_iter().map(Option::unwrap_or_default).collect();
        Graph::from_adjacency(adj, None)
    }
}

/// A claimed set of Delsarte cliques with its vertex incidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineCover {
    lines: Vec<Vec<u32>>,
    incidence: Vec<Vec<u32>>,
}

impl LineCover {
    /// Lines are sorted internally and then listed in lexicographic order.
    pub fn new(n: usize, mut lines: Vec<Vec<u32>>) -> Result<Self, GraphError> {
        for l in &mut lines {
            l.sort_unstable();
            l.dedup();
            if let Some(&v) = l.iter().find(|&&v| v as usize >= n) {
                return Err(GraphError::OutOfRange { vertex: v, n });
            }
        }
        lines.sort();
        let mut incidence = vec![Vec::new(); n];
        for (i, l) in lines.iter().enumerate() {
            for &v in l {
                incidence[v as usize].push(i as u32);
            }
        }
        Ok(LineCover { lines, incidence })
    }

    pub fn lines(&self) -> &[Vec<u32>] {
        &self.lines
    }

    pub fn line(&self, i: u32) -> &[u32] {
        &self.lines[i as usize]
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// Lines through `v`, ascending.
    pub fn through(&self, v: u32) -> &[u32] {
        &self.incidence[v as usize]
    }

    /// The line containing both endpoints, if exactly one does.
    pub fn line_of(&self, a: u32, b: u32) -> Option<u32> {
        let (la, lb) = (self.through(a), self.through(b));
        let mut common = la.iter().filter(|l| lb.binary_search(l).is_ok());
        let first = common.next().copied();
        if common.next().is_some() {
            None
        } else {
            first
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for l in &self.lines {
            let parts: Vec<String> = l.iter().map(u32::to_string).collect();
            s.push_str(&parts.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str, n: usize) -> Result<LineCover, GraphError> {
        let mut lines = Vec::new();
        for (ln, l) in text.lines().enumerate() {
            if l.trim().is_empty() || l.starts_with('#') {
                continue;
            }
            let line = l
                .split_whitespace()
                .map(|t| t.parse::<u32>().map_err(|_| GraphError::Parse { line: ln + 1, msg: format!("bad vertex `{t}`") }))
                .collect::<Result<Vec<_>, _>>()?;
            if let Some(&v) = line.iter().find(|&&v| v as usize >= n) {
                return Err(GraphError::Parse { line: ln + 1, msg: format!("vertex {v} out of range for n = {n}") });
            }
            lines.push(line);
        }
        LineCover::new(n, lines)
    }
}
