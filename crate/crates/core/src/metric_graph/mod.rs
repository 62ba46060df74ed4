//! Exact optimization primitives on the complete team graph: minimum spanning
//! tree, minimum-weight perfect matching and a Christofides Hamilton cycle.

mod blossom;

pub use blossom::max_weight_matching;

use crate::instance::{Instance, Length};

/// A perfect matching of the teams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    /// Pairs `(a, b)` with `a < b`, sorted.
    pub pairs: Vec<(usize, usize)>,
    pub weight: Length,
}

impl Matching {
    /// Partner of every team.
    pub fn mates(&self, n: usize) -> Vec<usize> {
        let mut mate = vec![usize::MAX; n];
        for &(a, b) in &self.pairs {
            mate[a] = b;
            mate[b] = a;
        }
        mate
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningTree {
    pub edges: Vec<(usize, usize)>,
    pub weight: Length,
}

impl SpanningTree {
    pub fn degrees(&self, n: usize) -> Vec<usize> {
        let mut deg = vec![0; n];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HamiltonCycle {
    /// Every team exactly once; the cycle closes from the last back to the first.
    pub order: Vec<usize>,
    pub length: Length,
}

/// Length of the closed tour visiting `order` cyclically.
pub fn cycle_length(inst: &Instance, order: &[usize]) -> Length {
    if order.len() < 2 {
        return 0;
    }
    order
        .iter()
        .zip(order.iter().cycle().skip(1))
        .map(|(&a, &b)| inst.d(a, b))
        .sum()
}

/// Prim's algorithm. Among equal-weight candidates the lexicographically
/// smallest edge `(min, max)` is taken.
pub fn min_spanning_tree(inst: &Instance) -> SpanningTree {
    let n = inst.n();
    let mut in_tree = vec![false; n];
    let mut best: Vec<(Length, usize)> = (0..n).map(|v| (inst.d(0, v), 0)).collect();
    in_tree[0] = true;
    let mut edges = Vec::with_capacity(n - 1);
    let mut weight = 0;
    for _ in 1..n {
        let v = (0..n)
            .filter(|&v| !in_tree[v])
            .min_by_key(|&v| {
                let (w, p) = best[v];
                (w, p.min(v), p.max(v))
            })
            .expect("a vertex remains outside the tree");
        let (w, p) = best[v];
        in_tree[v] = true;
        weight += w;
        edges.push((p.min(v), p.max(v)));
        for u in 0..n {
            if !in_tree[u] {
                let cand = (inst.d(v, u), v);
                let cur = best[u];
                if cand.0 < cur.0 || (cand.0 == cur.0 && v.min(u) < cur.1.min(u)) {
                    best[u] = cand;
                }
            }
        }
    }
    SpanningTree { edges, weight }
}

/// Exact minimum-weight perfect matching of the vertex subset `vertices`
/// (even size) under the weight function `w`.
pub fn min_perfect_matching_on(
    vertices: &[usize],
    w: impl Fn(usize, usize) -> Length,
) -> Vec<(usize, usize)> {
    let k = vertices.len();
    assert!(k % 2 == 0, "perfect matching needs an even vertex count");
    if k == 0 {
        return Vec::new();
    }
    let mut edges = Vec::with_capacity(k * (k - 1) / 2);
    let mut max_w = 0;
    for a in 0..k {
        for b in a + 1..k {
            max_w = max_w.max(w(vertices[a], vertices[b]));
        }
    }
    for a in 0..k {
        for b in a + 1..k {
            edges.push((a, b, max_w - w(vertices[a], vertices[b])));
        }
    }
    let mate = max_weight_matching(k, &edges, true);
    let mut pairs: Vec<(usize, usize)> = (0..k)
        .filter_map(|a| {
            let b = mate[a].expect("complete graph on an even vertex set has a perfect matching");
            (a < b).then(|| {
                let (x, y) = (vertices[a], vertices[b]);
                (x.min(y), x.max(y))
            })
        })
        .collect();
    pairs.sort_unstable();
    pairs
}

/// Exact minimum-weight perfect matching on all teams.
pub fn min_perfect_matching(inst: &Instance) -> Matching {
    let all: Vec<usize> = (0..inst.n()).collect();
    let pairs = min_perfect_matching_on(&all, |a, b| inst.d(a, b));
    let weight = pairs.iter().map(|&(a, b)| inst.d(a, b)).sum();
    Matching { pairs, weight }
}

/// Christofides: tree plus a minimum matching on its odd-degree vertices,
/// an Euler tour from the lowest team, shortcut to first visits.
pub fn christofides_cycle(inst: &Instance, tree: &SpanningTree) -> HamiltonCycle {
    let n = inst.n();
    let deg = tree.degrees(n);
    let odd: Vec<usize> = (0..n).filter(|&v| deg[v] % 2 == 1).collect();
    let extra = min_perfect_matching_on(&odd, |a, b| inst.d(a, b));

    // Multigraph adjacency with edge ids so parallel edges stay distinct.
    let all_edges: Vec<(usize, usize)> = tree.edges.iter().chain(extra.iter()).copied().collect();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (id, &(a, b)) in all_edges.iter().enumerate() {
        adj[a].push((b, id));
        adj[b].push((a, id));
    }
    for list in &mut adj {
        list.sort_unstable();
        list.reverse();
    }
    let mut used = vec![false; all_edges.len()];
    let mut stack = vec![0usize];
    let mut circuit = Vec::with_capacity(all_edges.len() + 1);
    while let Some(&v) = stack.last() {
        let mut advanced = false;
        while let Some((u, id)) = adj[v].pop() {
            if !used[id] {
                used[id] = true;
                stack.push(u);
                advanced = true;
                break;
            }
        }
        if !advanced {
            circuit.push(stack.pop().unwrap());
        }
    }
    circuit.reverse();

    let mut seen = vec![false; n];
    let order: Vec<usize> = circuit
        .into_iter()
        .filter(|&v| !std::mem::replace(&mut seen[v], true))
        .collect();
    debug_assert_eq!(order.len(), n);
    let length = cycle_length(inst, &order);
    HamiltonCycle { order, length }
}

/// Weight of a minimum perfect matching on the odd-degree vertices of `tree`.
pub fn odd_vertex_matching_weight(inst: &Instance, tree: &SpanningTree) -> Length {
    let deg = tree.degrees(inst.n());
    let odd: Vec<usize> = (0..inst.n()).filter(|&v| deg[v] % 2 == 1).collect();
    min_perfect_matching_on(&odd, |a, b| inst.d(a, b))
        .iter()
        .map(|&(a, b)| inst.d(a, b))
        .sum()
}
