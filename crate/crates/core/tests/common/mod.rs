#![allow(dead_code)]

use ttp2::schedule::{total_distance, validate_all, Game, Schedule};
use ttp2::{Instance, Length};

/// Minimum perfect matching weight by enumerating every matching.
pub fn brute_matching(inst: &Instance) -> Length {
    fn rec(inst: &Instance, free: &mut Vec<usize>) -> Length {
        if free.is_empty() {
            return 0;
        }
        let a = free.remove(0);
        let mut best = Length::MAX;
        for k in 0..free.len() {
            let b = free.remove(k);
            best = best.min(inst.d(a, b) + rec(inst, free));
            free.insert(k, b);
        }
        free.insert(0, a);
        best
    }
    rec(inst, &mut (0..inst.n()).collect())
}

/// Minimum spanning tree weight over all labeled trees via Pruefer codes.
pub fn brute_mst(inst: &Instance) -> Length {
    let n = inst.n();
    if n == 2 {
        return inst.d(0, 1);
    }
    let len = n - 2;
    let total = n.pow(len as u32);
    let mut best = Length::MAX;
    let mut code = vec![0usize; len];
    for idx in 0..total {
        let mut x = idx;
        for c in code.iter_mut() {
            *c = x % n;
            x /= n;
        }
        best = best.min(pruefer_weight(inst, &code));
    }
    best
}

fn pruefer_weight(inst: &Instance, code: &[usize]) -> Length {
    let n = inst.n();
    let mut deg = vec![1usize; n];
    for &c in code {
        deg[c] += 1;
    }
    let mut w = 0;
    for &c in code {
        let leaf = (0..n).find(|&v| deg[v] == 1).unwrap();
        w += inst.d(leaf, c);
        deg[leaf] -= 1;
        deg[c] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| deg[v] == 1).collect();
    w + inst.d(rest[0], rest[1])
}

/// Cycle-property certificate: a spanning tree is minimum iff every
/// non-tree edge is at least as heavy as each tree edge on the path
/// between its ends.
pub fn tree_is_minimum(inst: &Instance, edges: &[(usize, usize)]) -> bool {
    let n = inst.n();
    if edges.len() != n - 1 {
        return false;
    }
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    for src in 0..n {
        // Heaviest edge on the tree path from src to every vertex.
        let mut heavy = vec![None::<Length>; n];
        heavy[src] = Some(0);
        let mut stack = vec![src];
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if heavy[u].is_none() {
                    heavy[u] = Some(heavy[v].unwrap().max(inst.d(v, u)));
                    stack.push(u);
                }
            }
        }
        for dst in 0..n {
            match heavy[dst] {
                None => return false,
                Some(h) if dst != src && inst.d(src, dst) < h => return false,
                _ => {}
            }
        }
    }
    true
}

/// Every schedule for four teams built from six oriented one-factors,
/// filtered by the validators. Returns the best value and the count.
pub fn brute_four(inst: &Instance) -> (Option<Length>, usize) {
    let factors = [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]];
    let mut choices = Vec::new();
    for f in factors {
        for bits in 0..4 {
            let g: Vec<(usize, usize)> = f
                .iter()
                .enumerate()
                .map(|(k, &(a, b))| if bits >> k & 1 == 1 { (a, b) } else { (b, a) })
                .collect();
            choices.push(g);
        }
    }
    let mut best = None;
    let mut feasible = 0;
    let total = choices.len().pow(6);
    for idx in 0..total {
        let mut x = idx;
        let mut rows = vec![Vec::with_capacity(6); 4];
        for _ in 0..6 {
            for &(h, a) in &choices[x % choices.len()] {
                rows[h].push((a, true));
                rows[a].push((h, false));
            }
            x /= choices.len();
        }
        let s = Schedule::from_rows(
            rows.into_iter()
                .map(|r| {
                    r.into_iter()
                        .map(|(o, home)| if home { Game::home(o) } else { Game::away(o) })
                        .collect()
                })
                .collect(),
        )
        .unwrap();
        if validate_all(&s, 2).is_empty() {
            feasible += 1;
            let v = total_distance(&s, inst);
            best = Some(best.map_or(v, |b: Length| b.min(v)));
        }
    }
    (best, feasible)
}
