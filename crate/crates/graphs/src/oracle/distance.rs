use rayon::prelude::*;

use super::OracleError;
use crate::graph::Graph;

const UNREACHED: u8 = u8::MAX;

/// All-pairs distances from one breadth-first search per source.
#[derive(Clone, Debug)]
pub struct DistanceData {
    n: usize,
    dist: Vec<u8>,
    diameter: usize,
}

impl DistanceData {
    pub fn new(g: &Graph) -> Result<Self, OracleError> {
        let n = g.n();
        let rows: Vec<Vec<u8>> = (0..n as u32).into_par_iter().map(|s| bfs(g, s)).collect();
        let mut dist = Vec::with_capacity(n * n);
        for (x, row) in rows.iter().enumerate() {
            if let Some(y) = row.iter().position(|&d| d == UNREACHED) {
                return Err(OracleError::Disconnected { x: x as u32, y: y as u32 });
            }
            dist.extend_from_slice(row);
        }
        let diameter = dist.iter().copied().max().unwrap_or(0) as usize;
        Ok(DistanceData { n, dist, diameter })
    }

    #[inline]
    pub fn d(&self, x: u32, y: u32) -> usize {
        self.dist[x as usize * self.n + y as usize] as usize
    }

    pub fn row(&self, x: u32) -> &[u8] {
        &self.dist[x as usize * self.n..(x as usize + 1) * self.n]
    }

    pub fn diameter(&self) -> usize {
        self.diameter
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `Γ_i(x)`, ascending.
    pub fn sphere(&self, x: u32, i: usize) -> Vec<u32> {
        self.row(x).iter().enumerate().filter(|(_, &d)| d as usize == i).map(|(y, _)| y as u32).collect()
    }
}

fn bfs(g: &Graph, s: u32) -> Vec<u8> {
    let mut dist = vec![UNREACHED; g.n()];
    dist[s as usize] = 0;
    let mut frontier = vec![s];
    let mut level = 0u8;
    while !frontier.is_empty() {
        level += 1;
        let mut next = Vec::new();
        for &v in &frontier {
            for &w in g.neighbors(v) {
                if dist[w as usize] == UNREACHED {
                    dist[w as usize] = level;
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_distances() {
        let g = Graph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        let d = DistanceData::new(&g).unwrap();
        assert_eq!(d.diameter(), 2);
        assert_eq!(d.d(0, 2), 2);
        assert_eq!(d.d(3, 3), 0);
        assert_eq!(d.sphere(0, 2), vec![2, 3]);
    }

    #[test]
    fn disconnected_is_an_error() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(DistanceData::new(&g).unwrap_err(), OracleError::Disconnected { x: 0, y: 2 });
    }
}
