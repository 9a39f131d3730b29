//! Edmonds–Karp max-flow on unit-capacity multigraphs.

use std::collections::VecDeque;

use super::Edge;

struct Arc {
    to: usize,
    cap: u64,
    rev: usize,
}

struct Residual {
    adj: Vec<Vec<Arc>>,
}

impl Residual {
    fn new(n: usize) -> Self {
        Residual { adj: (0..n).map(|_| Vec::new()).collect() }
    }

    fn add(&mut self, from: usize, to: usize, cap: u64) {
        let rev_from = self.adj[to].len();
        let rev_to = self.adj[from].len();
        self.adj[from].push(Arc { to, cap, rev: rev_from });
        self.adj[to].push(Arc { to: from, cap: 0, rev: rev_to });
    }

    /// Shortest augmenting path by BFS; returns the arcs used as (node, arc index).
    fn augmenting_path(&self, s: usize, t: usize) -> Option<Vec<(usize, usize)>> {
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; self.adj.len()];
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for (i, arc) in self.adj[v].iter().enumerate() {
                if arc.cap > 0 && !seen[arc.to] {
                    seen[arc.to] = true;
                    prev[arc.to] = Some((v, i));
                    if arc.to == t {
                        let mut path = Vec::new();
                        let mut cur = t;
                        while let Some((u, j)) = prev[cur] {
                            path.push((u, j));
                            cur = u;
                        }
                        return Some(path);
                    }
                    queue.push_back(arc.to);
                }
            }
        }
        None
    }
}

/// Maximum number of edge-disjoint paths from any node in `sources` to `sink`.
pub(crate) fn max_flow(n: usize, edges: &[Edge], sources: &[usize], sink: usize) -> u64 {
    let super_source = n;
    let mut g = Residual::new(n + 1);
    for e in edges {
        g.add(e.tail, e.head, 1);
    }
    for &s in sources {
        g.add(super_source, s, edges.len() as u64 + 1);
    }
    let mut total = 0;
    while let Some(path) = g.augmenting_path(super_source, sink) {
        let bottleneck = path.iter().map(|&(v, i)| g.adj[v][i].cap).min().unwrap();
        for &(v, i) in &path {
            g.adj[v][i].cap -= bottleneck;
            let (to, rev) = (g.adj[v][i].to, g.adj[v][i].rev);
            g.adj[to][rev].cap += bottleneck;
        }
        total += bottleneck;
    }
    total
}
