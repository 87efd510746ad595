//! The exploration tree: one node per surviving candidate, rooted at the
//! undivided paramount problem.

use std::time::Duration;

use super::filter::FilterLevel;

/// Accounting for one node's child generation and filtering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChildrenStats {
    /// Candidates the generator emitted (after generator-integrated levels).
    pub generated: u64,
    /// Post-generation removals indexed by [`FilterLevel::slot`].
    pub removed_by_level: [u64; 3],
    /// Post-generation removals aligned with the layer's rule list.
    pub removed_by_rule: Vec<u64>,
    /// Level of the last removal, if filtering removed anything.
    pub last_removal: Option<FilterLevel>,
}

/// A node of the exploration tree.
///
/// The root carries no payload (it stands for the undivided problem); every
/// other node holds the partial solution that survived its layer's filters.
/// A node's `wall_time` is the time spent generating and filtering its
/// children, including any accounted synthetic evaluation cost.
#[derive(Debug, Clone)]
pub struct ExplorationNode<P> {
    /// Child indices from the root; empty for the root itself.
    pub path: Vec<u32>,
    /// The partial solution at this node; `None` only at the root.
    pub payload: Option<P>,
    /// Seed of this node's private random stream.
    pub stream_seed: u64,
    /// Time spent producing this node's children (zero for last-layer leaves).
    pub wall_time: Duration,
    /// Child accounting; `None` for last-layer leaves, which generate nothing.
    pub children_stats: Option<ChildrenStats>,
    pub children: Vec<ExplorationNode<P>>,
}

impl<P> ExplorationNode<P> {
    /// Layer of this node's payload; `None` for the root.
    pub fn layer(&self) -> Option<usize> {
        self.path.len().checked_sub(1)
    }

    /// Depth-first pre-order walk.
    pub fn walk<'a>(&'a self, visit: &mut impl FnMut(&'a ExplorationNode<P>)) {
        visit(self);
        for child in &self.children {
            child.walk(visit);
        }
    }

    /// Paths of all nodes in walk order; two trees with equal shapes explore
    /// the same candidates in the same arrangement.
    pub fn shape(&self) -> Vec<Vec<u32>> {
        let mut paths = Vec::new();
        self.walk(&mut |n| paths.push(n.path.clone()));
        paths
    }

    /// Payloads of all nodes at `layer`, in deterministic path order.
    pub fn payloads_at(&self, layer: usize) -> Vec<&P> {
        let mut out = Vec::new();
        self.walk(&mut |n| {
            if n.layer() == Some(layer) {
                if let Some(p) = &n.payload {
                    out.push(p);
                }
            }
        });
        out
    }

    /// Longest root-to-leaf chain of wall times: the duration of a fully
    /// parallelized run where every sibling sub-space proceeds concurrently.
    pub fn critical_path(&self) -> Duration {
        self.wall_time
            + self
                .children
                .iter()
                .map(|c| c.critical_path())
                .max()
                .unwrap_or(Duration::ZERO)
    }

    /// Sum of all wall times: the duration of a strictly sequential run.
    pub fn total_time(&self) -> Duration {
        let mut total = Duration::ZERO;
        self.walk(&mut |n| total += n.wall_time);
        total
    }
}
