//! Independent reference implementations for the metric suite.
//!
//! These deliberately avoid the production code paths: betweenness comes
//! from exhaustive enumeration of every shortest path, clustering from
//! cubic triangle counting over a dense adjacency matrix, and eigenvector
//! centrality from a dense symmetric eigendecomposition (nalgebra). Only
//! usable at toy sizes, which is the point.

use coedit_core::graph::CollabGraph;
use nalgebra::{DMatrix, SymmetricEigen};

/// Dense boolean adjacency straight from the edge list.
pub fn adjacency_matrix(g: &CollabGraph) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut m = vec![vec![false; n]; n];
    for e in &g.edges {
        m[e.u][e.v] = true;
        m[e.v][e.u] = true;
    }
    m
}

/// Every shortest path between `s` and `t`, found by exhaustive DFS over
/// simple paths.
fn all_shortest_paths(adj: &[Vec<bool>], s: usize, t: usize) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut best = usize::MAX;
    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut path = vec![s];
    let mut on_path = vec![false; n];
    on_path[s] = true;

    fn dfs(
        adj: &[Vec<bool>],
        t: usize,
        path: &mut Vec<usize>,
        on_path: &mut Vec<bool>,
        best: &mut usize,
        found: &mut Vec<Vec<usize>>,
    ) {
        let v = *path.last().unwrap();
        if v == t {
            let len = path.len() - 1;
            if len < *best {
                *best = len;
                found.clear();
            }
            if len == *best {
                found.push(path.clone());
            }
            return;
        }
        if path.len() > *best {
            return; // cannot improve
        }
        for w in 0..adj.len() {
            if adj[v][w] && !on_path[w] {
                on_path[w] = true;
                path.push(w);
                dfs(adj, t, path, on_path, best, found);
                path.pop();
                on_path[w] = false;
            }
        }
    }
    dfs(adj, t, &mut path, &mut on_path, &mut best, &mut found);
    found
}

/// Betweenness by brute force: for each unordered pair, the fraction of
/// shortest paths through every interior node.
pub fn betweenness_exhaustive(g: &CollabGraph) -> Vec<f64> {
    let n = g.node_count();
    let adj = adjacency_matrix(g);
    let mut bc = vec![0.0f64; n];
    for s in 0..n {
        for t in (s + 1)..n {
            let paths = all_shortest_paths(&adj, s, t);
            if paths.is_empty() {
                continue;
            }
            let sigma = paths.len() as f64;
            for (v, score) in bc.iter_mut().enumerate() {
                if v == s || v == t {
                    continue;
                }
                let through = paths
                    .iter()
                    .filter(|p| p[1..p.len() - 1].contains(&v))
                    .count();
                *score += through as f64 / sigma;
            }
        }
    }
    bc
}

/// Local and global clustering by cubic triangle enumeration.
pub fn clustering_exhaustive(g: &CollabGraph) -> (Vec<f64>, f64) {
    let n = g.node_count();
    let adj = adjacency_matrix(g);
    let mut local = vec![0.0f64; n];
    for v in 0..n {
        let d = (0..n).filter(|&w| adj[v][w]).count();
        if d < 2 {
            continue;
        }
        let mut triangles = 0u64;
        for a in 0..n {
            for b in (a + 1)..n {
                if adj[v][a] && adj[v][b] && adj[a][b] {
                    triangles += 1;
                }
            }
        }
        local[v] = 2.0 * triangles as f64 / (d * (d - 1)) as f64;
    }
    let global = if n == 0 {
        0.0
    } else {
        local.iter().sum::<f64>() / n as f64
    };
    (local, global)
}

/// Eigenvector centrality from a dense symmetric eigendecomposition of the
/// largest component (ties toward the component holding the smallest node
/// id), max-scaled to 1, zeros elsewhere.
pub fn eigenvector_dense(g: &CollabGraph) -> Vec<f64> {
    let n = g.node_count();
    if n == 0 {
        return Vec::new();
    }
    if g.edge_count() == 0 {
        return vec![0.0; n];
    }
    let adj = adjacency_matrix(g);
    // own component sweep, independent of the library's
    let mut comp = vec![usize::MAX; n];
    let mut count = 0;
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        comp[start] = count;
        while let Some(v) = stack.pop() {
            for w in 0..n {
                if adj[v][w] && comp[w] == usize::MAX {
                    comp[w] = count;
                    stack.push(w);
                }
            }
        }
        count += 1;
    }
    let mut sizes = vec![0usize; count];
    for &c in &comp {
        sizes[c] += 1;
    }
    let mut target = 0;
    for c in 1..count {
        if sizes[c] > sizes[target] {
            target = c;
        }
    }
    let members: Vec<usize> = (0..n).filter(|&v| comp[v] == target).collect();
    let k = members.len();
    let m = DMatrix::<f64>::from_fn(k, k, |i, j| {
        if adj[members[i]][members[j]] {
            1.0
        } else {
            0.0
        }
    });
    let eigen = SymmetricEigen::new(m);
    let mut top = 0;
    for i in 1..k {
        if eigen.eigenvalues[i] > eigen.eigenvalues[top] {
            top = i;
        }
    }
    let v = eigen.eigenvectors.column(top);
    let max_abs = v.iter().map(|x| x.abs()).fold(0.0f64, f64::max);
    let mut out = vec![0.0; n];
    for (i, &node) in members.iter().enumerate() {
        out[node] = v[i].abs() / max_abs;
    }
    out
}

/// The density formula, straight from the counts.
pub fn density_formula(g: &CollabGraph) -> f64 {
    let n = g.node_count();
    if n <= 1 {
        return 0.0;
    }
    2.0 * g.edge_count() as f64 / (n * (n - 1)) as f64
}
