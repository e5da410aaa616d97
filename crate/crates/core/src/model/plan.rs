use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::model::{LinkId, ObjectId};

/// Identifier of an ISP router that could host an internal cache.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RouterId(pub u32);

/// Cache sizing, object placement and path selection for one instance.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlacementPlan {
    /// Border cache size in front of each external link, in objects.
    pub border_sizes: BTreeMap<LinkId, u64>,
    /// Internal cache sizes. Always empty for plans produced by the planners.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub internal_sizes: BTreeMap<RouterId, u64>,
    /// `(link, object)` pairs stored in border caches.
    #[serde(rename = "placement")]
    pub border_placement: BTreeSet<(LinkId, ObjectId)>,
    /// External link each object's residual demand is sent to, indexed by object.
    pub path_selection: Vec<LinkId>,
}

impl PlacementPlan {
    /// A plan with no caches that routes every object as given.
    pub fn uncached(path_selection: Vec<LinkId>) -> Self {
        PlacementPlan { path_selection, ..Default::default() }
    }

    /// Places `objects` at their routed link and sizes the border caches by counting.
    pub fn with_cached_on_path(path_selection: Vec<LinkId>, objects: impl IntoIterator<Item = ObjectId>, links: impl IntoIterator<Item = LinkId>) -> Self {
        let mut border_sizes: BTreeMap<LinkId, u64> = links.into_iter().map(|l| (l, 0)).collect();
        let mut border_placement = BTreeSet::new();
        for o in objects {
            let l = path_selection[o.index()];
            if border_placement.insert((l, o)) {
                *border_sizes.entry(l).or_insert(0) += 1;
            }
        }
        PlacementPlan { border_sizes, internal_sizes: BTreeMap::new(), border_placement, path_selection }
    }

    pub fn total_border_size(&self) -> u64 {
        self.border_sizes.values().sum()
    }

    pub fn total_internal_size(&self) -> u64 {
        self.internal_sizes.values().sum()
    }

    pub fn total_size(&self) -> u64 {
        self.total_border_size() + self.total_internal_size()
    }

    pub fn border_size(&self, link: LinkId) -> u64 {
        self.border_sizes.get(&link).copied().unwrap_or(0)
    }

    pub fn cached_objects(&self) -> impl Iterator<Item = ObjectId> + '_ {
        self.border_placement.iter().map(|&(_, o)| o)
    }
}
