//! Social-network measures over a [`CollabGraph`]: degree, betweenness, and
//! eigenvector centrality, density, clustering coefficients, and the
//! assembled per-graph report.
//!
//! All measures run on the unweighted skeleton; edge weights carry tie
//! strength but do not alter paths or adjacency counts.

use serde::Serialize;
use std::collections::VecDeque;
use thiserror::Error;

use crate::graph::CollabGraph;

/// Default convergence tolerance for eigenvector centrality.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
/// Default iteration cap for eigenvector centrality.
pub const DEFAULT_MAX_ITER: usize = 1000;

/// Errors from metric computation.
#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("eigenvector centrality did not converge after {iterations} iterations (residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },
}

/// Per-node measures, one row per node in id order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeMetrics {
    pub id: usize,
    pub email: String,
    pub affiliation: String,
    pub degree: usize,
    pub degree_centrality: f64,
    pub betweenness: f64,
    pub betweenness_normalized: f64,
    pub eigenvector: f64,
    pub clustering: f64,
}

/// Whole-graph measures.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphMetrics {
    pub node_count: usize,
    pub edge_count: usize,
    pub density: f64,
    pub global_clustering: f64,
    pub component_count: usize,
}

/// Everything [`graph_summary`] computes for one graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub graph: GraphMetrics,
    pub nodes: Vec<NodeMetrics>,
}

/// Degree per node and degree normalized by `n - 1` (0 when `n < 2`).
pub fn degree_centrality(g: &CollabGraph) -> (Vec<usize>, Vec<f64>) {
    let n = g.node_count();
    let mut degree = vec![0usize; n];
    for e in &g.edges {
        degree[e.u] += 1;
        degree[e.v] += 1;
    }
    let normalized = if n >= 2 {
        degree.iter().map(|&d| d as f64 / (n - 1) as f64).collect()
    } else {
        vec![0.0; n]
    };
    (degree, normalized)
}

/// Betweenness centrality over unweighted shortest paths (Brandes).
///
/// Each unordered pair is counted once. Normalization divides by
/// `(n-1)(n-2)/2` when `n >= 3`; smaller graphs normalize to all zeros.
pub fn betweenness_centrality(g: &CollabGraph, normalized: bool) -> Vec<f64> {
    let n = g.node_count();
    let adj = g.adjacency();
    let mut bc = vec![0.0f64; n];

    // buffers reused across sources
    let mut stack: Vec<usize> = Vec::with_capacity(n);
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![-1i64; n];
    let mut delta = vec![0.0f64; n];
    let mut queue: VecDeque<usize> = VecDeque::with_capacity(n);

    for s in 0..n {
        stack.clear();
        queue.clear();
        for v in 0..n {
            pred[v].clear();
            sigma[v] = 0.0;
            dist[v] = -1;
            delta[v] = 0.0;
        }
        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            stack.push(v);
            for &w in &adj[v] {
                if dist[w] < 0 {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    pred[w].push(v);
                }
            }
        }
        while let Some(w) = stack.pop() {
            for &v in &pred[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                bc[w] += delta[w];
            }
        }
    }
    // the loop above counted every unordered pair from both endpoints
    for b in &mut bc {
        *b *= 0.5;
    }
    if normalized {
        if n >= 3 {
            let scale = 2.0 / ((n - 1) * (n - 2)) as f64;
            for b in &mut bc {
                *b *= scale;
            }
        } else {
            bc.iter_mut().for_each(|b| *b = 0.0);
        }
    }
    bc
}

/// Eigenvector centrality of the unweighted adjacency matrix, scaled to a
/// maximum entry of 1.
///
/// Power iteration runs on `A + I` (the shift keeps bipartite components
/// from oscillating) starting from the uniform vector, L2-normalizing each
/// step. Iteration stops once the successive-iterate difference drops below
/// `tol` in the max norm *and* the returned vector satisfies
/// `max|Ax - lambda*x| <= tol * lambda`. On disconnected graphs the measure
/// is computed on the largest component (ties broken toward the component
/// containing the smallest node id); all other nodes score 0. An edgeless
/// graph scores all zeros immediately.
pub fn eigenvector_centrality(
    g: &CollabGraph,
    tol: f64,
    max_iter: usize,
) -> Result<Vec<f64>, MetricsError> {
    assert!(tol > 0.0, "tolerance must be positive");
    assert!(max_iter >= 1, "need at least one iteration");
    let n = g.node_count();
    if n == 0 {
        return Ok(Vec::new());
    }
    if g.edge_count() == 0 {
        return Ok(vec![0.0; n]);
    }
    let adj = g.adjacency();
    let (labels, count) = g.component_labels();
    let mut sizes = vec![0usize; count];
    for &l in &labels {
        sizes[l] += 1;
    }
    // components are labeled in ascending order of smallest member id, so
    // the first maximal size wins the tie toward the smallest node id
    let target = sizes
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .map(|(i, _)| i)
        .expect("non-empty graph has a component");
    let members: Vec<usize> = (0..n).filter(|&v| labels[v] == target).collect();
    let k = members.len();

    let mut x = vec![0.0f64; n];
    let init = 1.0 / (k as f64).sqrt();
    for &v in &members {
        x[v] = init;
    }
    let mut y = vec![0.0f64; n];
    let mut last_residual = f64::INFINITY;

    for _ in 0..max_iter {
        for &v in &members {
            let mut acc = x[v]; // the +I shift
            for &w in &adj[v] {
                acc += x[w];
            }
            y[v] = acc;
        }
        let norm = members.iter().map(|&v| y[v] * y[v]).sum::<f64>().sqrt();
        let mut diff = 0.0f64;
        for &v in &members {
            y[v] /= norm;
            diff = diff.max((y[v] - x[v]).abs());
        }
        for &v in &members {
            x[v] = y[v];
        }
        if diff < tol {
            // verify the fixed point on the max-scaled vector before accepting
            let max = members.iter().map(|&v| x[v]).fold(0.0f64, f64::max);
            let mut lambda = 0.0f64;
            let mut norm_sq = 0.0f64;
            for &v in &members {
                let z = x[v] / max;
                let az: f64 = adj[v].iter().map(|&w| x[w] / max).sum();
                lambda += z * az;
                norm_sq += z * z;
            }
            lambda /= norm_sq;
            let mut residual = 0.0f64;
            for &v in &members {
                let z = x[v] / max;
                let az: f64 = adj[v].iter().map(|&w| x[w] / max).sum();
                residual = residual.max((az - lambda * z).abs());
            }
            last_residual = residual;
            if residual <= tol * lambda {
                for &v in &members {
                    x[v] /= max;
                }
                return Ok(x);
            }
        }
    }
    Err(MetricsError::NonConvergence {
        iterations: max_iter,
        residual: last_residual,
    })
}

/// Edge density: `2|E| / (n(n-1))` for `n >= 2`, else 0.
pub fn density(g: &CollabGraph) -> f64 {
    let n = g.node_count();
    if n <= 1 {
        return 0.0;
    }
    2.0 * g.edge_count() as f64 / (n * (n - 1)) as f64
}

/// Local clustering coefficient per node and the global average.
///
/// Local value is `2*t(v) / (deg(v) * (deg(v)-1))` with 0 when
/// `deg(v) < 2`; the global value is the mean over all nodes (0 for the
/// empty graph).
pub fn clustering(g: &CollabGraph) -> (Vec<f64>, f64) {
    let n = g.node_count();
    let adj = g.adjacency();
    let mut local = vec![0.0f64; n];
    for v in 0..n {
        let d = adj[v].len();
        if d < 2 {
            continue;
        }
        // each triangle at v is seen from both of its other corners
        let mut twice_triangles = 0u64;
        for &u in &adj[v] {
            twice_triangles += sorted_intersection_count(&adj[v], &adj[u]);
        }
        let triangles = twice_triangles / 2;
        local[v] = 2.0 * triangles as f64 / (d * (d - 1)) as f64;
    }
    let global = if n == 0 {
        0.0
    } else {
        local.iter().sum::<f64>() / n as f64
    };
    (local, global)
}

fn sorted_intersection_count(a: &[usize], b: &[usize]) -> u64 {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Assemble every measure plus node/edge/component counts into one report.
pub fn graph_summary(g: &CollabGraph) -> Result<MetricsReport, MetricsError> {
    let (degree, degree_norm) = degree_centrality(g);
    let betweenness = betweenness_centrality(g, false);
    let betweenness_norm = betweenness_centrality(g, true);
    let eigenvector = eigenvector_centrality(g, DEFAULT_TOLERANCE, DEFAULT_MAX_ITER)?;
    let (local_clustering, global_clustering) = clustering(g);
    let (_, component_count) = g.component_labels();
    let nodes = g
        .nodes
        .iter()
        .map(|dev| NodeMetrics {
            id: dev.id,
            email: dev.email.clone(),
            affiliation: dev.affiliation.clone(),
            degree: degree[dev.id],
            degree_centrality: degree_norm[dev.id],
            betweenness: betweenness[dev.id],
            betweenness_normalized: betweenness_norm[dev.id],
            eigenvector: eigenvector[dev.id],
            clustering: local_clustering[dev.id],
        })
        .collect();
    Ok(MetricsReport {
        graph: GraphMetrics {
            node_count: g.node_count(),
            edge_count: g.edge_count(),
            density: density(g),
            global_clustering,
            component_count,
        },
        nodes,
    })
}
