//! Seeded force-directed layout (Fruchterman-Reingold style).

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::graph::CollabGraph;

/// Node positions in the unit square, plus the parameters that produced
/// them.
#[derive(Debug, Clone, PartialEq)]
pub struct LayoutResult {
    /// One (x, y) per node, indexed by node id, all within [0, 1].
    pub positions: Vec<(f64, f64)>,
    pub seed: u64,
    pub iterations: usize,
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Spring-embed the graph from seeded pseudo-random initial positions.
///
/// Repulsion `k^2/d` acts between every node pair, attraction `d^2/k`
/// along every edge, displacement capped by a linearly cooling temperature
/// `t = t0 * (1 - iter/iterations)`. The final frame is uniformly rescaled
/// and centered in the unit square, so a single node lands at (0.5, 0.5).
/// Identical graph, seed, and iteration count give identical coordinates.
pub fn layout_force_directed(g: &CollabGraph, seed: u64, iterations: usize) -> LayoutResult {
    assert!(iterations >= 1, "need at least one iteration");
    let n = g.node_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pos: Vec<(f64, f64)> = (0..n)
        .map(|_| (uniform(&mut rng), uniform(&mut rng)))
        .collect();
    if n == 0 {
        return LayoutResult {
            positions: pos,
            seed,
            iterations,
        };
    }

    let k = (1.0 / n as f64).sqrt();
    let t0 = 0.1;
    let mut disp = vec![(0.0f64, 0.0f64); n];

    for iter in 0..iterations {
        let temperature = t0 * (1.0 - iter as f64 / iterations as f64);
        disp.iter_mut().for_each(|d| *d = (0.0, 0.0));

        for v in 0..n {
            for u in (v + 1)..n {
                let (mut dx, mut dy) = (pos[v].0 - pos[u].0, pos[v].1 - pos[u].1);
                let mut dist = (dx * dx + dy * dy).sqrt();
                if dist < 1e-12 {
                    // deterministic nudge for coincident points
                    dx = 1e-6 * ((u - v) as f64);
                    dy = 1e-6;
                    dist = (dx * dx + dy * dy).sqrt();
                }
                let force = k * k / dist;
                let (fx, fy) = (dx / dist * force, dy / dist * force);
                disp[v].0 += fx;
                disp[v].1 += fy;
                disp[u].0 -= fx;
                disp[u].1 -= fy;
            }
        }
        for e in &g.edges {
            let (dx, dy) = (pos[e.u].0 - pos[e.v].0, pos[e.u].1 - pos[e.v].1);
            let dist = (dx * dx + dy * dy).sqrt();
            if dist < 1e-12 {
                continue;
            }
            let force = dist * dist / k;
            let (fx, fy) = (dx / dist * force, dy / dist * force);
            disp[e.u].0 -= fx;
            disp[e.u].1 -= fy;
            disp[e.v].0 += fx;
            disp[e.v].1 += fy;
        }
        for v in 0..n {
            let (dx, dy) = disp[v];
            let len = (dx * dx + dy * dy).sqrt();
            if len > 1e-12 {
                let step = len.min(temperature);
                pos[v].0 = (pos[v].0 + dx / len * step).clamp(0.0, 1.0);
                pos[v].1 = (pos[v].1 + dy / len * step).clamp(0.0, 1.0);
            }
        }
    }

    center_in_unit_square(&mut pos);
    LayoutResult {
        positions: pos,
        seed,
        iterations,
    }
}

/// Uniformly rescale and center the frame into [0.05, 0.95]^2. Uniform
/// scaling preserves relative distances; degenerate frames collapse to the
/// center.
fn center_in_unit_square(pos: &mut [(f64, f64)]) {
    if pos.is_empty() {
        return;
    }
    let (mut min_x, mut max_x) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut min_y, mut max_y) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pos.iter() {
        min_x = min_x.min(x);
        max_x = max_x.max(x);
        min_y = min_y.min(y);
        max_y = max_y.max(y);
    }
    let extent = (max_x - min_x).max(max_y - min_y);
    let (cx, cy) = ((min_x + max_x) / 2.0, (min_y + max_y) / 2.0);
    if extent < 1e-12 {
        pos.iter_mut().for_each(|p| *p = (0.5, 0.5));
        return;
    }
    let scale = 0.9 / extent;
    for p in pos.iter_mut() {
        p.0 = 0.5 + (p.0 - cx) * scale;
        p.1 = 0.5 + (p.1 - cy) * scale;
    }
}
