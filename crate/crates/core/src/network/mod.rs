//! Single-receiver acyclic multigraph networks, cuts and capacity bounds.
//!
//! File format, one declaration per line:
//!
//! ```text
//! # comment
//! node s1 source
//! node s2 source
//! node v
//! node rho receiver
//! edge s1 v
//! edge s2 v
//! edge v rho
//! ```
//!
//! Sources are ordered by declaration; edges get ids `0, 1, ...` in file
//! order and repeated `edge` lines create parallel edges.

mod bounds;
mod flow;
pub mod standard;

use std::collections::{HashMap, VecDeque};
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::functions::FunctionError;

pub use bounds::{BoundReport, BoundValue, CapacityStatement, FootprintBound, LogQuotient, Quantity, Relation};

/// Default cap on the number of edge subsets examined by [`Network::enumerate_cuts`].
pub const DEFAULT_CUT_BUDGET: u64 = 1 << 20;

#[derive(Debug, Error)]
pub enum NetworkError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown node `{name}`")]
    UnknownNode { line: usize, name: String },
    #[error("line {line}: node `{name}` declared twice")]
    DuplicateNode { line: usize, name: String },
    #[error("no receiver declared")]
    NoReceiver,
    #[error("more than one receiver declared (`{0}` and `{1}`)")]
    MultipleReceivers(String, String),
    #[error("receiver `{0}` is also listed as a source")]
    ReceiverIsSource(String),
    #[error("network has no sources")]
    NoSources,
    #[error("receiver has out-edge to `{0}`, which then has no path to the receiver")]
    ReceiverOutEdge(String),
    #[error("network contains a directed cycle through `{0}`")]
    Cycle(String),
    #[error("node `{0}` has no path to the receiver")]
    NoPathToReceiver(String),
    #[error("node `{0}` has no in-edges but is not a source")]
    OrphanNode(String),
    #[error("cut enumeration needs 2^{edges} subsets, budget is {budget}")]
    BudgetExceeded { edges: usize, budget: u64 },
    #[error("target function has arity {arity} but the network has {sources} sources")]
    ArityMismatch { arity: usize, sources: usize },
    #[error(transparent)]
    Function(#[from] FunctionError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    nodes: Vec<String>,
    edges: Vec<Edge>,
    sources: Vec<usize>,
    receiver: usize,
    /// Nodes in a topological order (stable by declaration).
    order: Vec<usize>,
}

/// An edge set separating at least one source from the receiver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cut {
    /// Edge ids, ascending.
    pub edges: Vec<usize>,
    /// 1-based indices of the separated sources, ascending.
    pub separated: Vec<usize>,
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "edges {{{}}} separating sources {{{}}}", join(&self.edges), join(&self.separated))
    }
}

impl Network {
    pub fn parse(text: &str) -> Result<Network, NetworkError> {
        let mut nodes = Vec::new();
        let mut index = HashMap::new();
        let mut sources = Vec::new();
        let mut receivers: Vec<usize> = Vec::new();
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap().trim();
            if content.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = content.split_whitespace().collect();
            let syntax = |message: &str| NetworkError::Syntax { line, message: message.into() };
            match tokens[0] {
                "node" => {
                    if !edges.is_empty() {
                        return Err(syntax("node declarations must precede edges"));
                    }
                    let name = *tokens.get(1).ok_or_else(|| syntax("node without a name"))?;
                    if index.contains_key(name) {
                        return Err(NetworkError::DuplicateNode { line, name: name.into() });
                    }
                    let id = nodes.len();
                    let roles = &tokens[2..];
                    for role in roles {
                        if !matches!(*role, "source" | "receiver") {
                            return Err(syntax(&format!("unknown node role `{role}`")));
                        }
                    }
                    let is_source = roles.contains(&"source");
                    let is_receiver = roles.contains(&"receiver");
                    if is_source && is_receiver {
                        return Err(NetworkError::ReceiverIsSource(name.into()));
                    }
                    if roles.len() > 1 {
                        return Err(syntax("node role repeated"));
                    }
                    if is_source {
                        sources.push(id);
                    }
                    if is_receiver {
                        receivers.push(id);
                    }
                    index.insert(name.to_string(), id);
                    nodes.push(name.to_string());
                }
                "edge" => {
                    if tokens.len() != 3 {
                        return Err(syntax("expected `edge <tail> <head>`"));
                    }
                    let lookup = |name: &str| {
                        index
                            .get(name)
                            .copied()
                            .ok_or_else(|| NetworkError::UnknownNode { line, name: name.into() })
                    };
                    edges.push(Edge { tail: lookup(tokens[1])?, head: lookup(tokens[2])? });
                }
                other => return Err(syntax(&format!("unknown directive `{other}`"))),
            }
        }
        let receiver = match receivers.as_slice() {
            [] => return Err(NetworkError::NoReceiver),
            [r] => *r,
            [a, b, ..] => return Err(NetworkError::MultipleReceivers(nodes[*a].clone(), nodes[*b].clone())),
        };
        Network::new(nodes, edges, sources, receiver)
    }

    /// Builds and validates a network from node names, edges, source node
    /// ids (in source order) and the receiver id.
    pub fn new(
        nodes: Vec<String>,
        edges: Vec<Edge>,
        sources: Vec<usize>,
        receiver: usize,
    ) -> Result<Network, NetworkError> {
        if sources.is_empty() {
            return Err(NetworkError::NoSources);
        }
        if sources.contains(&receiver) {
            return Err(NetworkError::ReceiverIsSource(nodes[receiver].clone()));
        }
        if let Some(e) = edges.iter().find(|e| e.tail == receiver) {
            return Err(NetworkError::ReceiverOutEdge(nodes[e.head].clone()));
        }
        let order = topological_order(nodes.len(), &edges).map_err(|v| NetworkError::Cycle(nodes[v].clone()))?;
        let reaches = reaches_receiver(nodes.len(), &edges, receiver, |_| true);
        if let Some(v) = (0..nodes.len()).find(|&v| !reaches[v]) {
            return Err(NetworkError::NoPathToReceiver(nodes[v].clone()));
        }
        if let Some(v) = (0..nodes.len()).find(|&v| !sources.contains(&v) && !edges.iter().any(|e| e.head == v)) {
            return Err(NetworkError::OrphanNode(nodes[v].clone()));
        }
        Ok(Network { nodes, edges, sources, receiver, order })
    }

    /// Canonical text form; `parse(serialize(n)) == n`.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (v, name) in self.nodes.iter().enumerate() {
            out.push_str("node ");
            out.push_str(name);
            if self.sources.contains(&v) {
                out.push_str(" source");
            } else if v == self.receiver {
                out.push_str(" receiver");
            }
            out.push('\n');
        }
        for e in &self.edges {
            out.push_str(&format!("edge {} {}\n", self.nodes[e.tail], self.nodes[e.head]));
        }
        out
    }

    pub fn node_names(&self) -> &[String] {
        &self.nodes
    }

    pub fn node_id(&self, name: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n == name)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Source node ids in source order.
    pub fn sources(&self) -> &[usize] {
        &self.sources
    }

    pub fn num_sources(&self) -> usize {
        self.sources.len()
    }

    /// 0-based position of `node` in the source order.
    pub fn source_index(&self, node: usize) -> Option<usize> {
        self.sources.iter().position(|&s| s == node)
    }

    pub fn receiver(&self) -> usize {
        self.receiver
    }

    /// In-edge ids of `node`, ascending.
    pub fn in_edges(&self, node: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| self.edges[e].head == node).collect()
    }

    /// Out-edge ids of `node`, ascending.
    pub fn out_edges(&self, node: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| self.edges[e].tail == node).collect()
    }

    /// Edge ids ordered by the topological position of their tails, ties by id.
    pub fn edges_in_topological_order(&self) -> Vec<usize> {
        let mut rank = vec![0; self.nodes.len()];
        for (i, &v) in self.order.iter().enumerate() {
            rank[v] = i;
        }
        let mut ids: Vec<usize> = (0..self.edges.len()).collect();
        ids.sort_by_key(|&e| (rank[self.edges[e].tail], e));
        ids
    }

    pub fn edge_label(&self, e: usize) -> String {
        let edge = self.edges[e];
        format!("{}({}->{})", e, self.nodes[edge.tail], self.nodes[edge.head])
    }

    /// 1-based indices of the sources that cannot reach the receiver once the
    /// edges flagged in `removed` are deleted.
    pub fn separated_sources(&self, removed: &[bool]) -> Vec<usize> {
        let reach = reaches_receiver(self.nodes.len(), &self.edges, self.receiver, |e| !removed[e]);
        (0..self.sources.len()).filter(|&i| !reach[self.sources[i]]).map(|i| i + 1).collect()
    }

    /// All cuts, ordered by ascending edge-subset bitmask (bit `i` = edge `i`).
    pub fn enumerate_cuts(&self, budget: u64) -> Result<Vec<Cut>, NetworkError> {
        let m = self.edges.len();
        if m >= 64 || (1u64 << m) > budget {
            return Err(NetworkError::BudgetExceeded { edges: m, budget });
        }
        Ok((0..1u64 << m)
            .into_par_iter()
            .filter_map(|mask| {
                let removed: Vec<bool> = (0..m).map(|i| mask >> i & 1 == 1).collect();
                let separated = self.separated_sources(&removed);
                (!separated.is_empty()).then(|| Cut {
                    edges: (0..m).filter(|&i| removed[i]).collect(),
                    separated,
                })
            })
            .collect())
    }

    /// Unit-capacity max-flow from the sources with 1-based `indices` to the receiver.
    pub fn max_flow_from(&self, indices: &[usize]) -> u64 {
        let nodes: Vec<usize> = indices.iter().map(|&i| self.sources[i - 1]).collect();
        flow::max_flow(self.nodes.len(), &self.edges, &nodes, self.receiver)
    }

    /// `min_{C} |C| / |I_C|`, computed as the minimum over nonempty source
    /// sets `S` of `maxflow(S -> receiver) / |S|`.
    pub fn routing_capacity(&self) -> num_rational::Ratio<u64> {
        let s = self.sources.len();
        assert!(s < 32, "too many sources for subset enumeration");
        (1u64..1 << s)
            .map(|mask| {
                let set: Vec<usize> = (0..s).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
                num_rational::Ratio::new(self.max_flow_from(&set), set.len() as u64)
            })
            .min()
            .unwrap()
    }

    /// Brute-force `min_{C} |C| / |I_C|` over [`Network::enumerate_cuts`].
    pub fn routing_capacity_by_cuts(&self, budget: u64) -> Result<num_rational::Ratio<u64>, NetworkError> {
        Ok(self
            .enumerate_cuts(budget)?
            .iter()
            .map(|c| num_rational::Ratio::new(c.edges.len() as u64, c.separated.len() as u64))
            .min()
            .unwrap())
    }

    /// `min_{C} |C|`, the smallest single-source max-flow.
    pub fn min_cut_size(&self) -> u64 {
        (1..=self.sources.len()).map(|i| self.max_flow_from(&[i])).min().unwrap()
    }
}

impl fmt::Display for Network {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

/// Kahn's algorithm, smallest ready node first; on a cycle returns a node on it.
fn topological_order(n: usize, edges: &[Edge]) -> Result<Vec<usize>, usize> {
    let mut indegree = vec![0usize; n];
    for e in edges {
        indegree[e.head] += 1;
    }
    let mut ready: std::collections::BTreeSet<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop_first() {
        order.push(v);
        for e in edges.iter().filter(|e| e.tail == v) {
            indegree[e.head] -= 1;
            if indegree[e.head] == 0 {
                ready.insert(e.head);
            }
        }
    }
    if order.len() == n {
        Ok(order)
    } else {
        Err((0..n).find(|&v| indegree[v] > 0).unwrap())
    }
}

/// Nodes with a path to `receiver` through edges accepted by `keep`.
fn reaches_receiver(n: usize, edges: &[Edge], receiver: usize, keep: impl Fn(usize) -> bool) -> Vec<bool> {
    let mut seen = vec![false; n];
    seen[receiver] = true;
    let mut queue = VecDeque::from([receiver]);
    while let Some(v) = queue.pop_front() {
        for (i, e) in edges.iter().enumerate() {
            if e.head == v && keep(i) && !seen[e.tail] {
                seen[e.tail] = true;
                queue.push_back(e.tail);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    pub(crate) use super::standard::{relay, REVERSE_BUTTERFLY};

    #[test]
    fn parse_examples() {
        let n = relay(3);
        assert_eq!(n.num_sources(), 3);
        assert_eq!(n.edges().len(), 4);
        let rb = Network::parse(REVERSE_BUTTERFLY).unwrap();
        assert_eq!(rb.edges().len(), 9);
        assert_eq!(rb.serialize(), REVERSE_BUTTERFLY);
    }

    #[test]
    fn comments_and_round_trip() {
        let text = "# line network\nnode s1 source # first\n\nnode s2 source\nnode r receiver\nedge s1 s2\nedge s2 r\n";
        let n = Network::parse(text).unwrap();
        assert_eq!(Network::parse(&n.serialize()).unwrap(), n);
        assert_eq!(n.serialize(), "node s1 source\nnode s2 source\nnode r receiver\nedge s1 s2\nedge s2 r\n");
    }

    #[test]
    fn invalid_networks() {
        let base = "node s1 source\nnode v\nnode rho receiver\nedge s1 v\nedge v rho\n";
        let err = Network::parse(&format!("{base}edge rho v\n")).unwrap_err();
        assert!(matches!(err, NetworkError::ReceiverOutEdge(ref n) if n == "v"));
        assert!(err.to_string().contains("receiver has out-edge"));
        assert!(matches!(
            Network::parse("node a source\nnode b\nnode r receiver\nedge a b\nedge b a\nedge b r\n"),
            Err(NetworkError::Cycle(_))
        ));
        assert!(matches!(
            Network::parse("node a source\nnode b source\nnode r receiver\nedge a r\n"),
            Err(NetworkError::NoPathToReceiver(ref n)) if n == "b"
        ));
        assert!(matches!(
            Network::parse("node a source\nnode r receiver\nedge a x\n"),
            Err(NetworkError::UnknownNode { line: 3, .. })
        ));
        assert!(matches!(Network::parse("node a\nnode r receiver\nedge a r\n"), Err(NetworkError::NoSources)));
        assert!(matches!(
            Network::parse("node a source\nnode r receiver source\nedge a r\n"),
            Err(NetworkError::ReceiverIsSource(_))
        ));
        assert!(matches!(
            Network::parse("node a source\nnode b\nnode r receiver\nedge a r\nedge b r\n"),
            Err(NetworkError::OrphanNode(ref n)) if n == "b"
        ));
        assert!(matches!(Network::parse("node a source\n"), Err(NetworkError::NoReceiver)));
    }

    #[test]
    fn cut_examples() {
        let n = relay(2);
        let cuts = n.enumerate_cuts(DEFAULT_CUT_BUDGET).unwrap();
        // edges: 0 = s1->v, 1 = s2->v, 2 = v->rho
        let find = |edges: &[usize]| cuts.iter().find(|c| c.edges == edges).map(|c| c.separated.clone());
        assert_eq!(find(&[2]), Some(vec![1, 2]));
        assert_eq!(find(&[0]), Some(vec![1]));
        assert_eq!(find(&[]), None);
        let rb = Network::parse(REVERSE_BUTTERFLY).unwrap();
        let cuts = rb.enumerate_cuts(DEFAULT_CUT_BUDGET).unwrap();
        assert_eq!(cuts.iter().find(|c| c.edges == [7, 8]).unwrap().separated, vec![1, 2]);
        assert!(matches!(rb.enumerate_cuts(256), Err(NetworkError::BudgetExceeded { edges: 9, .. })));
    }

    #[test]
    fn capacities() {
        for s in 2..=5 {
            assert_eq!(relay(s).routing_capacity(), Ratio::new(1, s as u64));
            assert_eq!(relay(s).min_cut_size(), 1);
        }
        let rb = Network::parse(REVERSE_BUTTERFLY).unwrap();
        assert_eq!(rb.routing_capacity(), Ratio::from_integer(1));
        assert_eq!(rb.min_cut_size(), 2);
        let line = Network::parse("node s1 source\nnode s2 source\nnode r receiver\nedge s1 s2\nedge s2 r\n").unwrap();
        assert_eq!(line.routing_capacity(), Ratio::new(1, 2));
        let direct = Network::parse("node s1 source\nnode s2 source\nnode r receiver\nedge s1 r\nedge s2 r\n").unwrap();
        assert_eq!(direct.min_cut_size(), 1);
        assert_eq!(direct.routing_capacity(), Ratio::from_integer(1));
        for net in [relay(3), rb, line, direct] {
            assert_eq!(net.routing_capacity(), net.routing_capacity_by_cuts(DEFAULT_CUT_BUDGET).unwrap());
        }
    }

    #[test]
    fn topological_edge_order() {
        let rb = Network::parse(REVERSE_BUTTERFLY).unwrap();
        let order = rb.edges_in_topological_order();
        let pos = |e: usize| order.iter().position(|&x| x == e).unwrap();
        for (i, ei) in rb.edges().iter().enumerate() {
            for (j, ej) in rb.edges().iter().enumerate() {
                if ei.head == ej.tail {
                    assert!(pos(i) < pos(j));
                }
            }
        }
    }
}
