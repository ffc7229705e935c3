//! Undirected graph representation, generation, decomposition and
//! structural diagnostics.

use crate::error::{Error, Result};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

/// Simple undirected graph on dense node ids `0..n`.
///
/// Immutable after construction; edges are stored as normalized pairs
/// `(min, max)` in insertion order, with derived adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl UndirectedGraph {
    /// Build a graph from a node count and an edge list.
    /// Rejects self-loops, duplicate edges and out-of-range ids.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut normalized = Vec::with_capacity(edges.len());
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a == b {
                return Err(Error::InvalidArgument(format!("self-loop at node {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge ({a}, {b}) out of range for n = {n}"
                )));
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate edge ({}, {})",
                    e.0, e.1
                )));
            }
            normalized.push(e);
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        Ok(Self {
            n,
            edges: normalized,
            adjacency,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    /// `Some(d)` when every node has degree `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degree(0);
        (0..self.n).all(|v| self.degree(v) == d).then_some(d)
    }

    /// Number of connected components (isolated nodes count).
    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.n];
        let mut count = 0;
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(u) = stack.pop() {
                for &v in self.neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.component_count() == 1
    }

    /// Cycle graph C_L on nodes `0..l`.
    pub fn cycle(l: usize) -> Self {
        let edges: Vec<_> = (0..l).map(|i| (i, (i + 1) % l)).collect();
        Self::new(l, &edges).expect("cycle edges are simple")
    }

    /// Path graph on nodes `0..n`.
    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
        Self::new(n, &edges).expect("path edges are simple")
    }

    /// Complete graph K_n.
    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                edges.push((i, j));
            }
        }
        Self::new(n, &edges).expect("complete-graph edges are simple")
    }

    /// Parse the edge-list text format: an optional `N M` header line,
    /// then one `i j` pair per line; `#` starts a comment.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut declared: Option<(usize, usize)> = None;
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let mut saw_payload = false;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected two fields, got {}", fields.len()),
                });
            }
            let a: usize = fields[0].parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("invalid integer {:?}", fields[0]),
            })?;
            let b: usize = fields[1].parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("invalid integer {:?}", fields[1]),
            })?;
            if !saw_payload && edges.is_empty() && declared.is_none() {
                // Record the first line as a header candidate; whether it
                // really is one ("N M" with M = remaining edge count) is
                // resolved after the whole file is read.
                declared = Some((a, b));
                saw_payload = true;
                continue;
            }
            saw_payload = true;
            edges.push((a, b));
        }
        // The candidate is a header iff it matches the observed edge count
        // (and declares at least one node); otherwise it was the first edge.
        let (n, edges) = match declared {
            Some((dn, dm)) if dm == edges.len() && dn > 0 => {
                for (k, &(a, b)) in edges.iter().enumerate() {
                    if a >= dn || b >= dn {
                        return Err(Error::Parse {
                            line: k + 2,
                            msg: format!("node id {} >= declared n {}", a.max(b), dn),
                        });
                    }
                }
                (dn, edges)
            }
            Some(first) => {
                let mut all = vec![first];
                all.extend(edges);
                let n = all.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
                (n, all)
            }
            None => (0, edges),
        };
        Self::new(n, &edges).map_err(|e| match e {
            Error::InvalidArgument(msg) => Error::Parse { line: 0, msg },
            other => other,
        })
    }

    /// Serialize to the edge-list format with a header line; parses back to
    /// an equal graph and is byte-stable.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for &(a, b) in &self.edges {
            out.push_str(&format!("{a} {b}\n"));
        }
        out
    }

    /// Generate a uniform random simple `d`-regular graph via the pairing
    /// (configuration) model: `n*d` stubs are matched uniformly and the whole
    /// matching is rejected on any self-loop or duplicate edge.
    pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Self> {
        const RETRY_CAP: usize = 10_000;
        if n * d % 2 != 0 {
            return Err(Error::Infeasible(format!(
                "n*d = {} is odd; no {d}-regular graph on {n} nodes",
                n * d
            )));
        }
        if d >= n {
            return Err(Error::Infeasible(format!(
                "degree {d} must be smaller than node count {n}"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut stubs: Vec<usize> = (0..n * d).map(|s| s / d).collect();
        for _ in 0..RETRY_CAP {
            stubs.shuffle(&mut rng);
            let mut seen = HashSet::new();
            let mut edges = Vec::with_capacity(n * d / 2);
            let mut ok = true;
            for pair in stubs.chunks_exact(2) {
                let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
                if a == b || !seen.insert((a, b)) {
                    ok = false;
                    break;
                }
                edges.push((a, b));
            }
            if ok {
                return Self::new(n, &edges);
            }
        }
        Err(Error::RetryCapExceeded { cap: RETRY_CAP })
    }
}

/// One biconnected block: the nodes and edges of a maximal 2-connected
/// subgraph with at least two edges.
#[derive(Debug, Clone)]
pub struct Block {
    pub nodes: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

/// Reference to one component of the block-cut tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentRef {
    Block(usize),
    Bridge(usize),
}

/// Decomposition of a connected graph into bridges and biconnected blocks.
#[derive(Debug, Clone)]
pub struct BlockDecomposition {
    pub bridges: Vec<(usize, usize)>,
    pub blocks: Vec<Block>,
    pub articulation_nodes: Vec<usize>,
    /// Block-cut tree edges: (component, articulation node it contains).
    pub block_cut_tree: Vec<(ComponentRef, usize)>,
}

/// Hopcroft–Tarjan biconnected components by iterative DFS with an edge
/// stack; linear in N + M.
pub fn biconnected_components(g: &UndirectedGraph) -> Result<BlockDecomposition> {
    let components = g.component_count();
    if components != 1 {
        return Err(Error::Disconnected { components });
    }
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut parent = vec![usize::MAX; n];
    let mut is_articulation = vec![false; n];
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();
    let mut component_edge_sets: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut timer = 0usize;

    // Iterative DFS frame: (node, neighbor cursor).
    let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
    disc[0] = 0;
    low[0] = 0;
    timer += 1;
    let mut root_children = 0usize;
    while let Some(&mut (u, ref mut cursor)) = stack.last_mut() {
        if *cursor < g.neighbors(u).len() {
            let v = g.neighbors(u)[*cursor];
            *cursor += 1;
            if disc[v] == usize::MAX {
                parent[v] = u;
                disc[v] = timer;
                low[v] = timer;
                timer += 1;
                if u == 0 {
                    root_children += 1;
                }
                edge_stack.push((u, v));
                stack.push((v, 0));
            } else if v != parent[u] && disc[v] < disc[u] {
                // Back edge to an ancestor.
                edge_stack.push((u, v));
                low[u] = low[u].min(disc[v]);
            }
        } else {
            stack.pop();
            if let Some(&(p, _)) = stack.last() {
                low[p] = low[p].min(low[u]);
                if low[u] >= disc[p] {
                    if p != 0 {
                        is_articulation[p] = true;
                    }
                    // Pop one biconnected component off the edge stack.
                    let mut comp = Vec::new();
                    while let Some(&(a, b)) = edge_stack.last() {
                        if disc[a] >= disc[u] || (a == p && b == u) {
                            comp.push((a.min(b), a.max(b)));
                            edge_stack.pop();
                            if a == p && b == u {
                                break;
                            }
                        } else {
                            break;
                        }
                    }
                    component_edge_sets.push(comp);
                }
            }
        }
    }
    if root_children > 1 {
        is_articulation[0] = true;
    }

    let mut bridges = Vec::new();
    let mut blocks = Vec::new();
    let mut block_cut_tree = Vec::new();
    for comp in component_edge_sets {
        let mut nodes: Vec<usize> = comp.iter().flat_map(|&(a, b)| [a, b]).collect();
        nodes.sort_unstable();
        nodes.dedup();
        let component = if comp.len() == 1 {
            bridges.push(comp[0]);
            ComponentRef::Bridge(bridges.len() - 1)
        } else {
            blocks.push(Block {
                nodes: nodes.clone(),
                edges: comp,
            });
            ComponentRef::Block(blocks.len() - 1)
        };
        for &v in &nodes {
            if is_articulation[v] {
                block_cut_tree.push((component, v));
            }
        }
    }
    let articulation_nodes: Vec<usize> = (0..n).filter(|&v| is_articulation[v]).collect();
    Ok(BlockDecomposition {
        bridges,
        blocks,
        articulation_nodes,
        block_cut_tree,
    })
}

/// Stitch per-block MaxCut assignments into a global assignment.
///
/// Blocks are traversed over the block-cut tree; whenever a block disagrees
/// with the already-fixed value at its connecting articulation node, the
/// whole block assignment is flipped (a cut is invariant under complement).
/// Bridges are always oriented to be cut, so the global cut equals
/// `|bridges| + Σ_block cut(block)`.
pub fn combine_block_solutions(
    g: &UndirectedGraph,
    dec: &BlockDecomposition,
    per_block: &[Vec<u8>],
) -> Result<Vec<u8>> {
    if per_block.len() != dec.blocks.len() {
        return Err(Error::LengthMismatch {
            expected: dec.blocks.len(),
            got: per_block.len(),
        });
    }
    for (b, block) in dec.blocks.iter().enumerate() {
        if per_block[b].len() != block.nodes.len() {
            return Err(Error::LengthMismatch {
                expected: block.nodes.len(),
                got: per_block[b].len(),
            });
        }
    }
    let n = g.n();
    let mut assigned: Vec<Option<u8>> = vec![None; n];

    // Adjacency of the block-cut tree: components touching each articulation
    // node, plus (for bridges) plain endpoints shared between components.
    let n_components = dec.blocks.len() + dec.bridges.len();
    let component_nodes = |c: usize| -> Vec<usize> {
        if c < dec.blocks.len() {
            dec.blocks[c].nodes.clone()
        } else {
            let (a, b) = dec.bridges[c - dec.blocks.len()];
            vec![a, b]
        }
    };
    let mut node_components: Vec<Vec<usize>> = vec![Vec::new(); n];
    for c in 0..n_components {
        for v in component_nodes(c) {
            node_components[v].push(c);
        }
    }

    let mut done = vec![false; n_components];
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(0);
    done[0] = true;
    while let Some(c) = queue.pop_front() {
        if c < dec.blocks.len() {
            let block = &dec.blocks[c];
            // Flip the block if it contradicts an already-fixed node.
            let flip = block
                .nodes
                .iter()
                .zip(&per_block[c])
                .find_map(|(&v, &bit)| assigned[v].map(|fixed| fixed != bit))
                .unwrap_or(false);
            for (&v, &bit) in block.nodes.iter().zip(&per_block[c]) {
                let value = if flip { 1 - bit } else { bit };
                assigned[v] = Some(value);
            }
        } else {
            let (a, b) = dec.bridges[c - dec.blocks.len()];
            match (assigned[a], assigned[b]) {
                (Some(x), None) => assigned[b] = Some(1 - x),
                (None, Some(x)) => assigned[a] = Some(1 - x),
                (None, None) => {
                    assigned[a] = Some(0);
                    assigned[b] = Some(1);
                }
                (Some(_), Some(_)) => {}
            }
        }
        for v in component_nodes(c) {
            for &next in &node_components[v] {
                if !done[next] {
                    done[next] = true;
                    queue.push_back(next);
                }
            }
        }
    }
    Ok(assigned
        .into_iter()
        .map(|bit| bit.unwrap_or(0))
        .collect())
}

/// Result of [`count_simple_cycles`]: exact, or a lower bound when the cap
/// was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleCount {
    Exact(u64),
    ExceededCap(u64),
}

/// Count simple cycles by rooted DFS path enumeration: each cycle is
/// discovered exactly once from its minimum node, walking only through
/// larger node ids and closing back to the root with the direction fixed by
/// requiring the first path node to be smaller than the last.
pub fn count_simple_cycles(g: &UndirectedGraph, cap: u64) -> CycleCount {
    let n = g.n();
    let mut count = 0u64;
    let mut in_path = vec![false; n];
    // Path stack of (node, neighbor cursor); path[0] is the root.
    let mut path: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        path.push((root, 0));
        in_path[root] = true;
        while let Some(&mut (u, ref mut cursor)) = path.last_mut() {
            if *cursor < g.neighbors(u).len() {
                let v = g.neighbors(u)[*cursor];
                *cursor += 1;
                if v == root && path.len() >= 3 {
                    // Count each cycle once: fix the traversal direction.
                    if path[1].0 < u {
                        count += 1;
                        if count >= cap {
                            return CycleCount::ExceededCap(count);
                        }
                    }
                } else if v > root && !in_path[v] {
                    in_path[v] = true;
                    path.push((v, 0));
                }
            } else {
                in_path[u] = false;
                path.pop();
            }
        }
    }
    CycleCount::Exact(count)
}

/// Default cap for [`count_simple_cycles`].
pub const DEFAULT_CYCLE_CAP: u64 = 10_000_000;

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;
    use rand::SeedableRng;
    use std::collections::HashSet;

    /// Random connected graph helper for tests: random tree plus extra edges.
    pub(crate) fn random_connected(n: usize, m: usize, seed: u64) -> UndirectedGraph {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e3779b97f4a7c15);
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let mut seen = HashSet::new();
        for v in 1..n {
            let u = rng.gen_range(0..v);
            edges.push((u, v));
            seen.insert((u, v));
        }
        let mut guard = 0;
        while edges.len() < m && guard < 10 * m + 100 {
            guard += 1;
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            if a == b {
                continue;
            }
            let e = (a.min(b), a.max(b));
            if seen.insert(e) {
                edges.push(e);
            }
        }
        UndirectedGraph::new(n, &edges).unwrap()
    }
}
