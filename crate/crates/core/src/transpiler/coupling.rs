use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use super::TranspileError;

/// Undirected adjacency between physical qubits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CouplingMap {
    num_physical: usize,
    edges: BTreeSet<(usize, usize)>,
    #[serde(skip)]
    adjacency: Vec<Vec<usize>>,
}

impl CouplingMap {
    /// Builds a map, rejecting self-loops, out-of-range endpoints and
    /// disconnected graphs.
    pub fn new(
        num_physical: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<CouplingMap, TranspileError> {
        if num_physical == 0 {
            return Err(TranspileError::Coupling("no physical qubits".into()));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(TranspileError::Coupling(format!("self-loop on qubit {a}")));
            }
            if a >= num_physical || b >= num_physical {
                return Err(TranspileError::Coupling(format!(
                    "edge ({a}, {b}) out of range for {num_physical} qubits"
                )));
            }
            set.insert((a.min(b), a.max(b)));
        }
        let mut adjacency = vec![Vec::new(); num_physical];
        for &(a, b) in &set {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let map = CouplingMap {
            num_physical,
            edges: set,
            adjacency,
        };
        let reached = map.bfs_parents(0).iter().filter(|p| p.is_some()).count();
        if reached != num_physical {
            return Err(TranspileError::Disconnected);
        }
        Ok(map)
    }

    /// `0 - 1 - ... - (n-1)`.
    pub fn line(n: usize) -> CouplingMap {
        CouplingMap::new(n, (1..n).map(|i| (i - 1, i))).expect("line is connected")
    }

    pub fn ring(n: usize) -> CouplingMap {
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        if n > 2 {
            edges.push((n - 1, 0));
        }
        CouplingMap::new(n, edges).expect("ring is connected")
    }

    pub fn star(n: usize, center: usize) -> CouplingMap {
        CouplingMap::new(n, (0..n).filter(|&q| q != center).map(|q| (center, q)))
            .expect("star is connected")
    }

    pub fn all_to_all(n: usize) -> CouplingMap {
        CouplingMap::new(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))))
            .expect("complete graph is connected")
    }

    /// Parses `qubits <n>` followed by one `u v` edge per line; `#` starts a comment.
    pub fn parse(text: &str) -> Result<CouplingMap, TranspileError> {
        let mut num: Option<usize> = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = body.split_whitespace().collect();
            let bad = |msg: &str| TranspileError::Coupling(format!("line {line}: {msg}"));
            match (num, tokens.as_slice()) {
                (None, ["qubits", n]) => {
                    num = Some(n.parse().map_err(|_| bad("invalid qubit count"))?);
                }
                (None, _) => return Err(bad("expected header `qubits <n>`")),
                (Some(_), [a, b]) => {
                    let a = a.parse().map_err(|_| bad("invalid qubit index"))?;
                    let b = b.parse().map_err(|_| bad("invalid qubit index"))?;
                    edges.push((a, b));
                }
                (Some(_), _) => return Err(bad("expected an edge `u v`")),
            }
        }
        let n =
            num.ok_or_else(|| TranspileError::Coupling("missing header `qubits <n>`".into()))?;
        CouplingMap::new(n, edges)
    }

    pub fn render(&self) -> String {
        let mut out = format!("qubits {}\n", self.num_physical);
        for (a, b) in &self.edges {
            out.push_str(&format!("{a} {b}\n"));
        }
        out
    }

    pub fn num_physical(&self) -> usize {
        self.num_physical
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn neighbors(&self, q: usize) -> &[usize] {
        &self.adjacency[q]
    }

    pub fn degree(&self, q: usize) -> usize {
        self.adjacency[q].len()
    }

    pub fn is_adjacent(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    fn bfs_parents(&self, from: usize) -> Vec<Option<usize>> {
        let mut parent = vec![None; self.num_physical];
        parent[from] = Some(from);
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if parent[v].is_none() {
                    parent[v] = Some(u);
                    queue.push_back(v);
                }
            }
        }
        parent
    }

    /// Shortest path `from ..= to`, exploring neighbours in ascending order.
    pub fn shortest_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let parent = self.bfs_parents(from);
        parent[to]?;
        let mut path = vec![to];
        let mut cur = to;
        while cur != from {
            cur = parent[cur]?;
            path.push(cur);
        }
        path.reverse();
        Some(path)
    }
}
