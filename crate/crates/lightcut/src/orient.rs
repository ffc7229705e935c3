//! Acyclic orientations: BFS light-cone orientation, bipolar
//! (st-)orientations, validation and degree diagnostics.

use crate::error::{Error, Result};
use crate::graph::{biconnected_components, UndirectedGraph};

/// An acyclic orientation of an undirected graph.
///
/// `direction[e]` is the `(tail, head)` pair of edge `e` (same index as
/// `base.edges()`); the directed edge `i → j` later realizes the gate
/// `e^{-iθ Z_i Y_j / 2}` with Z on the tail and Y on the head.
///
/// `topo_order` is stored in *gate-scheduling* order: gates are arranged
/// from the right end of the circuit starting with the first node of the
/// order, so heads precede their tails in `topo_order` (the BFS root /
/// bipolar sink comes first) and the application-order circuit is obtained
/// by walking the order backwards, emitting each node's entering gates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedDag {
    base: UndirectedGraph,
    direction: Vec<(usize, usize)>,
    topo_order: Vec<usize>,
    sources: Vec<usize>,
    sinks: Vec<usize>,
    in_degree: Vec<usize>,
    out_degree: Vec<usize>,
    /// Entering edges per node as (tail, edge index), tail ascending.
    in_edges: Vec<Vec<(usize, usize)>>,
    /// Leaving edges per node as (head, edge index), head ascending.
    out_edges: Vec<Vec<(usize, usize)>>,
}

impl OrientedDag {
    /// Build from an explicit direction per base edge. Fails if the
    /// orientation contains a directed cycle.
    pub fn from_directions(base: UndirectedGraph, direction: Vec<(usize, usize)>) -> Result<Self> {
        if direction.len() != base.m() {
            return Err(Error::LengthMismatch {
                expected: base.m(),
                got: direction.len(),
            });
        }
        for (&(a, b), &(t, h)) in base.edges().iter().zip(&direction) {
            if (t.min(h), t.max(h)) != (a, b) {
                return Err(Error::InvalidArgument(format!(
                    "direction ({t}, {h}) does not match edge ({a}, {b})"
                )));
            }
        }
        let n = base.n();
        let mut in_degree = vec![0usize; n];
        let mut out_degree = vec![0usize; n];
        let mut in_edges = vec![Vec::new(); n];
        let mut out_edges = vec![Vec::new(); n];
        for (e, &(t, h)) in direction.iter().enumerate() {
            out_degree[t] += 1;
            in_degree[h] += 1;
            in_edges[h].push((t, e));
            out_edges[t].push((h, e));
        }
        for v in 0..n {
            in_edges[v].sort_unstable();
            out_edges[v].sort_unstable();
        }
        let topo_order = scheduling_order(n, &direction)
            .ok_or_else(|| Error::InvalidArgument("orientation contains a cycle".into()))?;
        let sources = (0..n)
            .filter(|&v| in_degree[v] == 0 && base.degree(v) > 0)
            .collect();
        let sinks = (0..n)
            .filter(|&v| out_degree[v] == 0 && base.degree(v) > 0)
            .collect();
        Ok(Self {
            base,
            direction,
            topo_order,
            sources,
            sinks,
            in_degree,
            out_degree,
            in_edges,
            out_edges,
        })
    }

    pub fn base(&self) -> &UndirectedGraph {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn m(&self) -> usize {
        self.base.m()
    }

    /// Directed edges as (tail, head), index-aligned with `base().edges()`.
    pub fn directions(&self) -> &[(usize, usize)] {
        &self.direction
    }

    /// Node order used for gate scheduling (heads first; see type docs).
    pub fn topo_order(&self) -> &[usize] {
        &self.topo_order
    }

    pub fn sources(&self) -> &[usize] {
        &self.sources
    }

    pub fn sinks(&self) -> &[usize] {
        &self.sinks
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_degree[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_degree[v]
    }

    /// Entering edges of `v` as (tail, edge index), tail ascending.
    pub fn in_edges(&self, v: usize) -> &[(usize, usize)] {
        &self.in_edges[v]
    }

    /// Leaving edges of `v` as (head, edge index), head ascending.
    pub fn out_edges(&self, v: usize) -> &[(usize, usize)] {
        &self.out_edges[v]
    }

    /// The same graph with every edge direction reversed (sources and sinks
    /// swap roles; the scheduling order flips).
    pub fn reversed(&self) -> Self {
        let direction = self.direction.iter().map(|&(t, h)| (h, t)).collect();
        Self::from_directions(self.base.clone(), direction)
            .expect("reversal of a DAG is a DAG")
    }

    /// `(deg⁺(tail), deg⁻(head))` of a directed edge of this DAG.
    pub fn degree_pair(&self, tail: usize, head: usize) -> Result<(usize, usize)> {
        if self.direction.contains(&(tail, head)) {
            Ok((self.out_degree[tail], self.in_degree[head]))
        } else {
            Err(Error::InvalidArgument(format!(
                "({tail} -> {head}) is not a directed edge of this DAG"
            )))
        }
    }

    /// Averaged heads in-degree I_h = (1/M) Σ_{(i→j)} (deg⁻(j) − 1),
    /// returned as an exact reduced fraction.
    pub fn averaged_heads_in_degree(&self) -> (i64, i64) {
        let sum: i64 = self
            .direction
            .iter()
            .map(|&(_, h)| self.in_degree[h] as i64 - 1)
            .sum();
        reduce(sum, self.m() as i64)
    }

    /// Serialize as "i -> j" lines plus an "order:" line; byte-stable.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for &(t, h) in &self.direction {
            out.push_str(&format!("{t} -> {h}\n"));
        }
        let order: Vec<String> = self.topo_order.iter().map(|v| v.to_string()).collect();
        out.push_str(&format!("order: {}\n", order.join(" ")));
        out
    }

    /// Parse the [`serialize`](Self::serialize) format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut direction = Vec::new();
        let mut order: Option<Vec<usize>> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("order:") {
                let parsed: std::result::Result<Vec<usize>, _> =
                    rest.split_whitespace().map(str::parse).collect();
                order = Some(parsed.map_err(|_| Error::Parse {
                    line: idx + 1,
                    msg: "invalid order line".into(),
                })?);
            } else {
                let parts: Vec<&str> = line.split("->").collect();
                if parts.len() != 2 {
                    return Err(Error::Parse {
                        line: idx + 1,
                        msg: format!("expected \"i -> j\", got {line:?}"),
                    });
                }
                let t: usize = parts[0].trim().parse().map_err(|_| Error::Parse {
                    line: idx + 1,
                    msg: "invalid tail".into(),
                })?;
                let h: usize = parts[1].trim().parse().map_err(|_| Error::Parse {
                    line: idx + 1,
                    msg: "invalid head".into(),
                })?;
                direction.push((t, h));
            }
        }
        let n = order
            .as_ref()
            .map(|o| o.len())
            .unwrap_or_else(|| {
                direction
                    .iter()
                    .map(|&(t, h)| t.max(h) + 1)
                    .max()
                    .unwrap_or(0)
            });
        let edges: Vec<(usize, usize)> = direction
            .iter()
            .map(|&(t, h)| (t.min(h), t.max(h)))
            .collect();
        let base = UndirectedGraph::new(n, &edges)?;
        let dag = Self::from_directions(base, direction)?;
        if let Some(o) = order {
            if o != dag.topo_order {
                return Err(Error::Parse {
                    line: 0,
                    msg: "order line is not the scheduling order of the orientation".into(),
                });
            }
        }
        Ok(dag)
    }
}

/// Report of [`validate_bipolar`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BipolarReport {
    pub acyclic: bool,
    pub n_plus: usize,
    pub n_minus: usize,
}

impl BipolarReport {
    pub fn is_bipolar(&self) -> bool {
        self.acyclic && self.n_plus == 1 && self.n_minus == 1
    }
}

/// Check acyclicity (by topological sort over the raw directions) and count
/// sources / sinks.
pub fn validate_bipolar(dag: &OrientedDag) -> BipolarReport {
    let acyclic = scheduling_order(dag.n(), dag.directions()).is_some();
    BipolarReport {
        acyclic,
        n_plus: dag.sources().len(),
        n_minus: dag.sinks().len(),
    }
}

/// Gate-scheduling order: a topological order of the *reversed* DAG (heads
/// before tails), built by Kahn's algorithm with ascending-id tie-breaks.
/// Returns `None` when the directions contain a cycle.
fn scheduling_order(n: usize, direction: &[(usize, usize)]) -> Option<Vec<usize>> {
    let mut remaining_out = vec![0usize; n];
    let mut in_nbrs: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(t, h) in direction {
        remaining_out[t] += 1;
        in_nbrs[h].push(t);
    }
    let mut heap = std::collections::BinaryHeap::new();
    for v in 0..n {
        if remaining_out[v] == 0 {
            heap.push(std::cmp::Reverse(v));
        }
    }
    let mut order = Vec::with_capacity(n);
    while let Some(std::cmp::Reverse(v)) = heap.pop() {
        order.push(v);
        for &t in &in_nbrs[v] {
            remaining_out[t] -= 1;
            if remaining_out[t] == 0 {
                heap.push(std::cmp::Reverse(t));
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// BFS light-cone orientation rooted at `root`: BFS layers are built with
/// ascending-id tie-breaks, every inter-layer edge is oriented from the
/// deeper layer toward the shallower one, and intra-layer edges are oriented
/// from the larger id to the smaller. The root is the unique sink.
pub fn bfs_lightcone_orientation(g: &UndirectedGraph, root: usize) -> Result<OrientedDag> {
    let components = g.component_count();
    if components != 1 {
        return Err(Error::Disconnected { components });
    }
    if root >= g.n() {
        return Err(Error::InvalidArgument(format!("root {root} out of range")));
    }
    let mut layer = vec![usize::MAX; g.n()];
    layer[root] = 0;
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbors(u) {
            if layer[v] == usize::MAX {
                layer[v] = layer[u] + 1;
                queue.push_back(v);
            }
        }
    }
    let direction = g
        .edges()
        .iter()
        .map(|&(a, b)| {
            use std::cmp::Ordering;
            match layer[a].cmp(&layer[b]) {
                Ordering::Greater => (a, b),
                Ordering::Less => (b, a),
                // Same layer: orient toward the smaller id (stays acyclic:
                // no directed edge ever increases the (layer, id) key).
                Ordering::Equal => (a.max(b), a.min(b)),
            }
        })
        .collect();
    OrientedDag::from_directions(g.clone(), direction)
}

/// Bipolar (st-)orientation by the Even–Tarjan st-numbering algorithm:
/// one DFS from `s` whose first tree edge is (s, t) computes lowpoint
/// vertices, then a signed linked-list pass produces an st-ordering; edges
/// are oriented from the lower-ordered endpoint to the higher.
pub fn bipolar_orientation_dfs(g: &UndirectedGraph, s: usize, t: usize) -> Result<OrientedDag> {
    check_bipolar_input(g, s, t)?;
    let n = g.n();

    // DFS from s with (s, t) forced first; record preorder, parent and the
    // lowpoint *vertex* (the vertex of smallest preorder reachable via tree
    // edges then one back edge).
    let mut pre = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut low_vertex: Vec<usize> = (0..n).collect();
    let mut preorder = Vec::with_capacity(n);
    let mut timer = 0usize;
    pre[s] = timer;
    timer += 1;
    preorder.push(s);
    // Frames of (node, neighbor cursor); the forced first edge is handled by
    // seeding t's frame directly.
    pre[t] = timer;
    timer += 1;
    preorder.push(t);
    parent[t] = s;
    let mut stack: Vec<(usize, usize)> = vec![(s, 0), (t, 0)];
    while let Some(&mut (u, ref mut cursor)) = stack.last_mut() {
        if *cursor < g.neighbors(u).len() {
            let v = g.neighbors(u)[*cursor];
            *cursor += 1;
            if u == s && v == t {
                continue; // forced first tree edge, already traversed
            }
            if pre[v] == usize::MAX {
                pre[v] = timer;
                timer += 1;
                preorder.push(v);
                parent[v] = u;
                stack.push((v, 0));
            } else if v != parent[u] && pre[v] < pre[low_vertex[u]] {
                low_vertex[u] = v;
            }
        } else {
            stack.pop();
            if let Some(&(p, _)) = stack.last() {
                if pre[low_vertex[u]] < pre[low_vertex[p]] {
                    low_vertex[p] = low_vertex[u];
                }
            }
        }
    }

    // Signed list pass: minus = insert before parent.
    let mut next = vec![usize::MAX; n];
    let mut prev = vec![usize::MAX; n];
    next[s] = t;
    prev[t] = s;
    let mut sign_plus = vec![false; n]; // false = minus
    sign_plus[s] = false;
    for &v in preorder.iter().skip(2) {
        let p = parent[v];
        if !sign_plus[low_vertex[v]] {
            // insert v immediately before p
            let before = prev[p];
            if before != usize::MAX {
                next[before] = v;
            }
            prev[v] = before;
            next[v] = p;
            prev[p] = v;
            sign_plus[p] = true;
        } else {
            // insert v immediately after p
            let after = next[p];
            if after != usize::MAX {
                prev[after] = v;
            }
            next[v] = after;
            prev[v] = p;
            next[p] = v;
            sign_plus[p] = false;
        }
    }
    let mut position = vec![0usize; n];
    let mut cursor = s;
    let mut pos = 0;
    while cursor != usize::MAX {
        position[cursor] = pos;
        pos += 1;
        cursor = next[cursor];
    }
    debug_assert_eq!(pos, n);
    orient_by_position(g, &position)
}

/// Bipolar (st-)orientation via an open-ear decomposition driven by BFS:
/// starting from the ear (s, t), repeatedly find a shortest path through
/// unplaced nodes between two distinct placed nodes and splice its interior
/// into the st-order between them. Short ears keep the longest s→t path —
/// and hence the two-qubit depth of the resulting ansatz — small.
pub fn bipolar_orientation_bfs(g: &UndirectedGraph, s: usize, t: usize) -> Result<OrientedDag> {
    check_bipolar_input(g, s, t)?;
    let n = g.n();
    // st-order maintained as a linked list from s to t.
    let mut next = vec![usize::MAX; n];
    let mut placed = vec![false; n];
    next[s] = t;
    placed[s] = true;
    placed[t] = true;
    let mut placed_count = 2;
    while placed_count < n {
        let ear = find_shortest_ear(g, &placed)
            .ok_or_else(|| Error::NotBiconnected("no open ear found".into()))?;
        // ear = [u, w1, ..., wk, v] with u, v placed and the interior not.
        let (u, v) = (ear[0], ear[ear.len() - 1]);
        // Splice the interior after whichever endpoint comes first.
        let first = {
            let mut cursor = s;
            loop {
                if cursor == u || cursor == v {
                    break cursor;
                }
                cursor = next[cursor];
            }
        };
        let interior: Vec<usize> = if first == u {
            ear[1..ear.len() - 1].to_vec()
        } else {
            ear[1..ear.len() - 1].iter().rev().copied().collect()
        };
        let mut cursor = first;
        for &w in &interior {
            let after = next[cursor];
            next[cursor] = w;
            next[w] = after;
            placed[w] = true;
            placed_count += 1;
            cursor = w;
        }
    }
    let mut position = vec![0usize; n];
    let mut cursor = s;
    let mut pos = 0;
    while cursor != usize::MAX {
        position[cursor] = pos;
        pos += 1;
        cursor = next[cursor];
    }
    debug_assert_eq!(pos, n);
    orient_by_position(g, &position)
}

/// Multi-source BFS from the placed set through unplaced nodes; returns the
/// first (shortest) path [placed, unplaced..., placed] with distinct
/// endpoints.
fn find_shortest_ear(g: &UndirectedGraph, placed: &[bool]) -> Option<Vec<usize>> {
    let n = g.n();
    let mut root = vec![usize::MAX; n]; // BFS-tree origin (a placed node)
    let mut parent = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    for v in 0..n {
        if placed[v] {
            root[v] = v;
            queue.push_back(v);
        }
    }
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbors(u) {
            if placed[v] {
                if !placed[u] && v != root[u] {
                    // Ear found: walk back from u to its origin.
                    let mut path = vec![v];
                    let mut cursor = u;
                    while cursor != usize::MAX {
                        path.push(cursor);
                        if placed[cursor] {
                            break;
                        }
                        cursor = parent[cursor];
                    }
                    path.reverse();
                    return Some(path);
                }
            } else if root[v] == usize::MAX {
                root[v] = root[u];
                parent[v] = u;
                queue.push_back(v);
            } else if root[v] != root[u] && !placed[u] {
                // Two BFS regions meet at the unplaced edge (u, v): the
                // concatenated walk is an ear with distinct endpoints.
                let mut left = Vec::new();
                let mut cursor = u;
                while cursor != usize::MAX {
                    left.push(cursor);
                    if placed[cursor] {
                        break;
                    }
                    cursor = parent[cursor];
                }
                left.reverse();
                let mut path = left;
                cursor = v;
                while cursor != usize::MAX {
                    path.push(cursor);
                    if placed[cursor] {
                        break;
                    }
                    cursor = parent[cursor];
                }
                return Some(path);
            }
        }
    }
    None
}

fn check_bipolar_input(g: &UndirectedGraph, s: usize, t: usize) -> Result<()> {
    if s == t || s >= g.n() || t >= g.n() {
        return Err(Error::InvalidArgument(format!(
            "invalid source/sink pair ({s}, {t})"
        )));
    }
    if !g.has_edge(s, t) {
        return Err(Error::InvalidArgument(format!(
            "({s}, {t}) is not an edge; bipolar orientation requires an adjacent pair"
        )));
    }
    let dec = biconnected_components(g)?;
    if !dec.bridges.is_empty() || dec.blocks.len() != 1 {
        return Err(Error::NotBiconnected(format!(
            "{} bridges, {} blocks",
            dec.bridges.len(),
            dec.blocks.len()
        )));
    }
    Ok(())
}

/// Orient every edge from lower `position` to higher.
fn orient_by_position(g: &UndirectedGraph, position: &[usize]) -> Result<OrientedDag> {
    let direction = g
        .edges()
        .iter()
        .map(|&(a, b)| {
            if position[a] < position[b] {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();
    OrientedDag::from_directions(g.clone(), direction)
}

fn reduce(num: i64, den: i64) -> (i64, i64) {
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }
    let g = gcd(num, den);
    if g == 0 {
        (0, 1)
    } else {
        (num / g, den / g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lightcone_star() {
        // K_{1,3} rooted at the center: all edges enter the center.
        let g = UndirectedGraph::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let dag = bfs_lightcone_orientation(&g, 0).unwrap();
        assert!(dag.directions().iter().all(|&(_, h)| h == 0));
        let report = validate_bipolar(&dag);
        assert_eq!((report.acyclic, report.n_plus, report.n_minus), (true, 3, 1));
    }

    #[test]
    fn lightcone_path() {
        let g = UndirectedGraph::path(3);
        let dag = bfs_lightcone_orientation(&g, 0).unwrap();
        assert_eq!(dag.directions(), &[(1, 0), (2, 1)]);
        assert_eq!(dag.topo_order(), &[0, 1, 2]);
    }

    #[test]
    fn lightcone_unique_sink_on_random_graphs() {
        for seed in 0..30 {
            let g = crate::graph::testutil::random_connected(12, 18, seed);
            for root in [0, 5, 11] {
                let dag = bfs_lightcone_orientation(&g, root).unwrap();
                let report = validate_bipolar(&dag);
                assert!(report.acyclic);
                assert_eq!(report.n_minus, 1);
                assert_eq!(dag.sinks(), &[root]);
            }
        }
    }

    #[test]
    fn bipolar_triangle() {
        let g = UndirectedGraph::cycle(3);
        let dag = bipolar_orientation_dfs(&g, 0, 2).unwrap();
        assert_eq!(dag.directions(), &[(0, 1), (1, 2), (0, 2)]);
        assert!(validate_bipolar(&dag).is_bipolar());
    }

    #[test]
    fn bipolar_c4_adjacent_pair() {
        let g = UndirectedGraph::cycle(4);
        for builder in [bipolar_orientation_dfs, bipolar_orientation_bfs] {
            let dag = builder(&g, 0, 3).unwrap();
            // Forced orientation: two directed paths 0→1→2→3 and 0→3.
            assert_eq!(dag.directions(), &[(0, 1), (1, 2), (2, 3), (0, 3)]);
        }
    }

    #[test]
    fn bipolar_rejects_non_edge_and_non_biconnected() {
        let g = UndirectedGraph::cycle(4);
        assert!(bipolar_orientation_dfs(&g, 0, 2).is_err());
        assert!(bipolar_orientation_bfs(&g, 0, 2).is_err());
        let path = UndirectedGraph::path(4);
        assert!(bipolar_orientation_dfs(&path, 0, 1).is_err());
    }

    #[test]
    fn bipolar_k4_valid() {
        let g = UndirectedGraph::complete(4);
        for builder in [bipolar_orientation_dfs, bipolar_orientation_bfs] {
            let dag = builder(&g, 1, 3).unwrap();
            let report = validate_bipolar(&dag);
            assert!(report.is_bipolar());
            assert_eq!(dag.sources(), &[1]);
            assert_eq!(dag.sinks(), &[3]);
        }
    }

    #[test]
    fn bipolar_random_regular_ensemble() {
        // Randomized validity check over biconnected 3-regular graphs.
        let mut checked = 0;
        for seed in 0..1000 {
            if checked >= 500 {
                break;
            }
            let g = match UndirectedGraph::random_regular(12, 3, seed) {
                Ok(g) => g,
                Err(_) => continue,
            };
            if !g.is_connected() {
                continue;
            }
            let dec = match biconnected_components(&g) {
                Ok(d) => d,
                Err(_) => continue,
            };
            if !dec.bridges.is_empty() || dec.blocks.len() != 1 {
                continue;
            }
            let (s, t) = (g.edges()[seed as usize % g.m()].0, g.edges()[seed as usize % g.m()].1);
            for builder in [bipolar_orientation_dfs, bipolar_orientation_bfs] {
                let dag = builder(&g, s, t).unwrap();
                let report = validate_bipolar(&dag);
                assert!(report.is_bipolar(), "seed {seed}: {report:?}");
                assert_eq!(dag.sources(), &[s]);
                assert_eq!(dag.sinks(), &[t]);
            }
            checked += 2;
        }
        assert!(checked >= 500);
    }

    #[test]
    fn validate_detects_cycle() {
        let g = UndirectedGraph::cycle(3);
        let dag = OrientedDag::from_directions(g, vec![(0, 1), (1, 2), (2, 0)]);
        assert!(dag.is_err());
    }

    #[test]
    fn averaged_heads_in_degree_examples() {
        // Directed path 0→1→2: every head has in-degree 1.
        let dag =
            OrientedDag::from_directions(UndirectedGraph::path(3), vec![(0, 1), (1, 2)]).unwrap();
        assert_eq!(dag.averaged_heads_in_degree(), (0, 1));
        // Star with all edges entering the center.
        let star = UndirectedGraph::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let dag = bfs_lightcone_orientation(&star, 0).unwrap();
        assert_eq!(dag.averaged_heads_in_degree(), (2, 1));
        // Bipolar K4: I_h = 4/3 = 2/3 + 4(N_+ + N_-)/(3N).
        let dag = bipolar_orientation_dfs(&UndirectedGraph::complete(4), 0, 1).unwrap();
        assert_eq!(dag.averaged_heads_in_degree(), (4, 3));
    }

    #[test]
    fn three_regular_ih_identity_exact() {
        // I_h = 2/3 + 4(N_+ + N_-)/(3N) exactly for 3-regular DAGs.
        let mut tested = 0;
        for seed in 0..200 {
            let g = match UndirectedGraph::random_regular(14, 3, seed) {
                Ok(g) if g.is_connected() => g,
                _ => continue,
            };
            let dag = bfs_lightcone_orientation(&g, 0).unwrap();
            let (num, den) = dag.averaged_heads_in_degree();
            let n = g.n() as i64;
            let k = (dag.sources().len() + dag.sinks().len()) as i64;
            // 2/3 + 4k/(3n) = (2n + 4k) / (3n)
            let expect = super::reduce(2 * n + 4 * k, 3 * n);
            assert_eq!((num, den), expect, "seed {seed}");
            tested += 1;
        }
        assert!(tested > 50);
    }

    #[test]
    fn degree_pair_examples() {
        let dag =
            OrientedDag::from_directions(UndirectedGraph::path(3), vec![(0, 1), (1, 2)]).unwrap();
        assert_eq!(dag.degree_pair(1, 2).unwrap(), (1, 1));
        assert!(dag.degree_pair(2, 1).is_err());
        let k4 = bipolar_orientation_dfs(&UndirectedGraph::complete(4), 0, 3).unwrap();
        let t = 3;
        for &(tail, head) in k4.directions() {
            if head == t {
                assert_eq!(k4.degree_pair(tail, head).unwrap().1, 3);
            }
            let (dp, dm) = k4.degree_pair(tail, head).unwrap();
            assert!((1..=3).contains(&dp) && (1..=3).contains(&dm));
        }
    }

    #[test]
    fn serialization_round_trip() {
        let dag = bipolar_orientation_dfs(&UndirectedGraph::complete(4), 0, 2).unwrap();
        let text = dag.serialize();
        let back = OrientedDag::parse(&text).unwrap();
        assert_eq!(dag, back);
        assert_eq!(text, back.serialize());
    }

    #[test]
    fn scheduling_order_heads_first() {
        // Every directed edge's head appears before its tail.
        let g = UndirectedGraph::complete(5);
        let dag = bipolar_orientation_dfs(&g, 0, 1).unwrap();
        let pos: Vec<usize> = {
            let mut p = vec![0; dag.n()];
            for (i, &v) in dag.topo_order().iter().enumerate() {
                p[v] = i;
            }
            p
        };
        for &(tail, head) in dag.directions() {
            assert!(pos[head] < pos[tail]);
        }
    }
}
