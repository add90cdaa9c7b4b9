//! Mining toolkit for temporal collaboration networks in software projects.
//!
//! The pipeline reconstructs who-worked-with-whom from version-control
//! change logs:
//!
//! 1. [`changelog`] parses ChangeLog files or tab-separated commit logs
//!    into [`Contribution`] records (email, timestamp, file path).
//! 2. [`affiliation`] canonicalizes emails and maps them to organizations.
//! 3. [`timeline`] partitions the observed span into half-open slices at
//!    industry-event dates.
//! 4. [`graph`] builds the per-slice bipartite developer-file edit sets and
//!    projects them into undirected weighted collaboration graphs.
//! 5. [`metrics`] computes degree, betweenness, and eigenvector centrality,
//!    density, and clustering coefficients.
//! 6. [`render`] lays graphs out deterministically and exports GraphML,
//!    DOT, SVG, and metrics CSV/JSON.
//!
//! [`synth`] provides seeded synthetic inputs for benchmarks and tests.

pub mod affiliation;
pub mod changelog;
pub mod graph;
pub mod metrics;
pub mod render;
pub mod synth;
pub mod timeline;

pub use affiliation::{AffiliationTable, Developer};
pub use changelog::{Contribution, ParseReport};
pub use graph::{BipartiteEdits, CollabGraph, Edge, FileFilter};
pub use metrics::MetricsReport;
pub use render::{LayoutResult, SizeMetric, StyleMap};
pub use timeline::{EventTimeline, Slice};
