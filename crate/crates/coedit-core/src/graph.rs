//! Bipartite developer-file edit records and their projection into
//! undirected, weighted collaboration graphs.
//!
//! Two developers are connected when they edited the same file within the
//! same interval; the edge weight is the number of distinct files they
//! share there. Developers with no shared file stay in the graph as
//! isolated nodes.

use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, Utc};
use globset::{Glob, GlobSet, GlobSetBuilder};
use thiserror::Error;

use crate::affiliation::{AffiliationTable, Developer};
use crate::changelog::Contribution;
use crate::timeline::Slice;

/// Errors from building file-exclusion filters.
#[derive(Debug, Error)]
pub enum GraphError {
    #[error("bad exclude pattern {pattern:?}: {source}")]
    BadPattern {
        pattern: String,
        source: globset::Error,
    },
}

/// Glob-based file exclusion applied before co-edit projection.
///
/// The default excludes `**/ChangeLog*`: every committer touches the
/// ChangeLog files themselves, which would weld the graph into a
/// near-complete artifact.
#[derive(Debug, Clone)]
pub struct FileFilter {
    set: GlobSet,
    patterns: Vec<String>,
}

impl FileFilter {
    /// Default exclusion patterns.
    pub fn default_patterns() -> Vec<String> {
        vec!["**/ChangeLog*".to_string()]
    }

    /// Compile a pattern list into a filter.
    pub fn new<S: AsRef<str>>(patterns: &[S]) -> Result<Self, GraphError> {
        let mut builder = GlobSetBuilder::new();
        let mut kept = Vec::new();
        for p in patterns {
            let p = p.as_ref();
            let glob = Glob::new(p).map_err(|source| GraphError::BadPattern {
                pattern: p.to_string(),
                source,
            })?;
            builder.add(glob);
            kept.push(p.to_string());
        }
        let set = builder.build().map_err(|source| GraphError::BadPattern {
            pattern: kept.join(", "),
            source,
        })?;
        Ok(FileFilter { set, patterns: kept })
    }

    /// Filter that excludes nothing.
    pub fn none() -> Self {
        FileFilter::new::<&str>(&[]).expect("empty filter always builds")
    }

    /// The compiled pattern list.
    pub fn patterns(&self) -> &[String] {
        &self.patterns
    }

    /// True when `path` matches an exclusion pattern.
    pub fn is_excluded(&self, path: &str) -> bool {
        self.set.is_match(path)
    }
}

impl Default for FileFilter {
    fn default() -> Self {
        FileFilter::new(&Self::default_patterns()).expect("default patterns are valid")
    }
}

/// The deduplicated developer-file edit set for one interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteEdits {
    /// Developers in ascending email order; `id` equals the index here.
    pub developers: Vec<Developer>,
    /// Files in ascending path order.
    pub files: Vec<String>,
    /// Distinct (developer id, file id) pairs.
    pub edits: BTreeSet<(usize, usize)>,
    /// The interval `[start, end)` the edits were taken from.
    pub interval: (DateTime<Utc>, DateTime<Utc>),
}

/// One undirected weighted edge, stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    /// Number of distinct files the endpoints co-edited; always >= 1.
    pub weight: u32,
}

/// An undirected weighted collaboration graph for one interval.
///
/// Nodes are in ascending email order; edges are unique per unordered pair,
/// sorted lexicographically by `(u, v)`. Both orders are independent of
/// contribution input order, so identical inputs serialize identically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollabGraph {
    pub nodes: Vec<Developer>,
    pub edges: Vec<Edge>,
    pub interval: (DateTime<Utc>, DateTime<Utc>),
}

impl CollabGraph {
    /// Number of nodes.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Sorted neighbor lists indexed by node id.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Connected-component label per node (labels are dense, assigned in
    /// ascending order of each component's smallest node id) and the
    /// component count.
    pub fn component_labels(&self) -> (Vec<usize>, usize) {
        let n = self.nodes.len();
        let adj = self.adjacency();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        let mut stack = Vec::new();
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            stack.push(start);
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if label[w] == usize::MAX {
                        label[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        (label, next)
    }
}

/// Collect the in-interval, non-excluded (developer, file) edit pairs.
///
/// Developers are keyed by canonical email and resolved through the
/// affiliation table; repeat edits of the same file collapse to one pair.
pub fn build_bipartite(
    contribs: &[Contribution],
    interval: &Slice,
    table: &AffiliationTable,
    filter: &FileFilter,
) -> BipartiteEdits {
    let mut emails: BTreeSet<&str> = BTreeSet::new();
    let mut files: BTreeSet<&str> = BTreeSet::new();
    let mut pairs: BTreeSet<(&str, &str)> = BTreeSet::new();
    for c in contribs {
        if !interval.contains(c.timestamp) || filter.is_excluded(&c.file_path) {
            continue;
        }
        emails.insert(&c.email);
        files.insert(&c.file_path);
        pairs.insert((&c.email, &c.file_path));
    }
    let developers: Vec<Developer> = emails
        .iter()
        .enumerate()
        .map(|(id, email)| Developer {
            id,
            email: email.to_string(),
            affiliation: table.resolve(email).to_string(),
        })
        .collect();
    let email_ids: BTreeMap<&str, usize> =
        emails.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let file_list: Vec<String> = files.iter().map(|f| f.to_string()).collect();
    let file_ids: BTreeMap<&str, usize> = files.iter().enumerate().map(|(i, f)| (*f, i)).collect();
    let edits = pairs
        .iter()
        .map(|(e, f)| (email_ids[e], file_ids[f]))
        .collect();
    BipartiteEdits {
        developers,
        files: file_list,
        edits,
        interval: (interval.start, interval.end),
    }
}

/// Project the bipartite edit set into the collaboration graph: an edge
/// per developer pair sharing at least one file, weighted by the number
/// of distinct shared files.
pub fn project_collaboration(b: &BipartiteEdits) -> CollabGraph {
    let mut per_file: Vec<Vec<usize>> = vec![Vec::new(); b.files.len()];
    for &(dev, file) in &b.edits {
        per_file[file].push(dev);
    }
    let mut weights: BTreeMap<(usize, usize), u32> = BTreeMap::new();
    for devs in &per_file {
        // BTreeSet iteration already yields each file's developers in
        // ascending id order, so pairs come out with u < v.
        for (i, &u) in devs.iter().enumerate() {
            for &v in &devs[i + 1..] {
                *weights.entry((u, v)).or_insert(0) += 1;
            }
        }
    }
    let edges = weights
        .into_iter()
        .map(|((u, v), weight)| Edge { u, v, weight })
        .collect();
    CollabGraph {
        nodes: b.developers.clone(),
        edges,
        interval: b.interval,
    }
}

/// Build one collaboration graph per slice. A developer appears in a slice
/// graph only if they contributed within that slice.
pub fn slice_graphs(
    contribs: &[Contribution],
    slices: &[Slice],
    table: &AffiliationTable,
    filter: &FileFilter,
) -> Vec<CollabGraph> {
    slices
        .iter()
        .map(|s| project_collaboration(&build_bipartite(contribs, s, table, filter)))
        .collect()
}
