//! Brute-force reference for the flow alternation rule.
//!
//! A flow graph alternates correctly when
//! - no chain `x -> c1 -> ... -> cn -> y` of distinct interior connectors
//!   (n >= 0) joins two states or two operators (`x == y` included),
//! - every connector with flows has both incoming and outgoing flows,
//! - no cycle runs through connectors only.
//!
//! Every condition is checked by enumerating node sequences outright.

use fpd_core::{ConnectorKind, ConnectorNode, Flow, Model, Placement, Process, ProcessOperator, StateKind, StateNode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Kind {
    State,
    Operator,
    Fork,
    Join,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::State, Kind::Operator, Kind::Fork, Kind::Join];

    fn is_connector(self) -> bool {
        matches!(self, Kind::Fork | Kind::Join)
    }
}

/// A small flow graph: node kinds and directed edges between node indices.
#[derive(Debug, Clone)]
pub struct Graph {
    pub kinds: Vec<Kind>,
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    fn has(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a, b))
    }

    pub fn to_model(&self) -> Model {
        let mut p = Process::new("p", "P", "b");
        for (i, k) in self.kinds.iter().enumerate() {
            let id = format!("n{i}");
            match k {
                Kind::State => p
                    .states
                    .push(StateNode::new(id, "", StateKind::Product, Placement::Boundary)),
                Kind::Operator => p.operators.push(ProcessOperator::new(id, "")),
                Kind::Fork => p.connectors.push(ConnectorNode::new(id, "", ConnectorKind::Fork)),
                Kind::Join => p.connectors.push(ConnectorNode::new(id, "", ConnectorKind::Join)),
            }
        }
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            p.flows
                .push(Flow::new(format!("f{i}"), format!("n{a}"), format!("n{b}")));
        }
        Model::build(vec![p]).expect("oracle graphs build")
    }
}

/// All orderings of every subset of `items` with at least `min` elements.
fn arrangements(items: &[usize], min: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(items: &[usize], used: &mut Vec<bool>, current: &mut Vec<usize>, min: usize, out: &mut Vec<Vec<usize>>) {
        if current.len() >= min {
            out.push(current.clone());
        }
        for i in 0..items.len() {
            if !used[i] {
                used[i] = true;
                current.push(items[i]);
                rec(items, used, current, min, out);
                current.pop();
                used[i] = false;
            }
        }
    }
    rec(items, &mut vec![false; items.len()], &mut current, min, &mut out);
    out
}

/// True when the graph violates flow alternation.
pub fn violates(g: &Graph) -> bool {
    let n = g.kinds.len();
    let connectors: Vec<usize> = (0..n).filter(|&i| g.kinds[i].is_connector()).collect();
    let ends: Vec<usize> = (0..n).filter(|&i| !g.kinds[i].is_connector()).collect();
    let interiors = arrangements(&connectors, 0);

    for &x in &ends {
        for &y in &ends {
            if g.kinds[x] != g.kinds[y] {
                continue;
            }
            for inner in &interiors {
                let chain: Vec<usize> = std::iter::once(x)
                    .chain(inner.iter().copied())
                    .chain(std::iter::once(y))
                    .collect();
                if chain.windows(2).all(|w| g.has(w[0], w[1])) {
                    return true;
                }
            }
        }
    }

    for &c in &connectors {
        let has_in = (0..n).any(|a| g.has(a, c));
        let has_out = (0..n).any(|b| g.has(c, b));
        if has_in != has_out {
            return true;
        }
    }

    arrangements(&connectors, 2)
        .iter()
        .any(|cycle| cycle.windows(2).all(|w| g.has(w[0], w[1])) && g.has(*cycle.last().unwrap(), cycle[0]))
}

/// Every graph over `kinds` (one edge subset per call of `f`).
pub fn for_each_edge_subset(kinds: &[Kind], mut f: impl FnMut(Graph)) {
    let n = kinds.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    for mask in 0u32..(1 << pairs.len()) {
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &e)| e)
            .collect();
        f(Graph {
            kinds: kinds.to_vec(),
            edges,
        });
    }
}

/// Node kind multisets of size 1..=max_nodes, in sorted order. Relabelling
/// nodes maps any kind assignment onto one of these.
pub fn kind_multisets(max_nodes: usize) -> Vec<Vec<Kind>> {
    let mut out = Vec::new();
    fn rec(start: usize, current: &mut Vec<Kind>, max: usize, out: &mut Vec<Vec<Kind>>) {
        if !current.is_empty() {
            out.push(current.clone());
        }
        if current.len() == max {
            return;
        }
        for (i, &k) in Kind::ALL.iter().enumerate().skip(start) {
            current.push(k);
            rec(i, current, max, out);
            current.pop();
        }
    }
    rec(0, &mut Vec::new(), max_nodes, &mut out);
    out
}
