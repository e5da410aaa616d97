use std::fmt;

use crate::error::{Error, Result};
use crate::model::{LinkId, ObjectId, MAX_LINKS};

/// A set of link ids packed into a bitmask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinkSet(pub u64);

impl LinkSet {
    pub const EMPTY: LinkSet = LinkSet(0);

    pub fn single(id: LinkId) -> Self {
        LinkSet(1u64 << id.0)
    }

    #[inline]
    pub fn contains(self, id: LinkId) -> bool {
        id.index() < MAX_LINKS && self.0 & (1u64 << id.0) != 0
    }

    #[inline]
    pub fn insert(&mut self, id: LinkId) {
        self.0 |= 1u64 << id.0;
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: LinkSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: LinkSet) -> LinkSet {
        LinkSet(self.0 | other.0)
    }

    /// Members in ascending id order.
    #[inline]
    pub fn iter(self) -> impl Iterator<Item = LinkId> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let id = bits.trailing_zeros() as u8;
            bits &= bits - 1;
            Some(LinkId(id))
        })
    }
}

impl FromIterator<LinkId> for LinkSet {
    fn from_iter<I: IntoIterator<Item = LinkId>>(iter: I) -> Self {
        let mut set = LinkSet::EMPTY;
        for id in iter {
            set.insert(id);
        }
        set
    }
}

impl fmt::Display for LinkSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, id) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{id}")?;
        }
        f.write_str("}")
    }
}

/// For every object, the external links through which it can be retrieved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AvailabilityMap {
    sets: Vec<LinkSet>,
    union: LinkSet,
}

impl AvailabilityMap {
    /// Every set must be non-empty.
    pub fn new(sets: Vec<LinkSet>) -> Result<Self> {
        let mut union = LinkSet::EMPTY;
        for (o, s) in sets.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::InvalidAvailability(format!("availability[{o}] is empty: object {o} is not retrievable")));
            }
            union = union.union(*s);
        }
        Ok(AvailabilityMap { sets, union })
    }

    pub fn from_lists(lists: &[Vec<u32>]) -> Result<Self> {
        let mut sets = Vec::with_capacity(lists.len());
        for (o, list) in lists.iter().enumerate() {
            let mut set = LinkSet::EMPTY;
            for &l in list {
                if l as usize >= MAX_LINKS {
                    return Err(Error::InvalidAvailability(format!("availability[{o}] references link {l}, outside 0..{MAX_LINKS}")));
                }
                set.insert(LinkId(l as u8));
            }
            sets.push(set);
        }
        Self::new(sets)
    }

    #[inline]
    pub fn get(&self, object: ObjectId) -> LinkSet {
        self.sets[object.index()]
    }

    pub fn sets(&self) -> &[LinkSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Union of all per-object sets.
    pub fn links_used(&self) -> LinkSet {
        self.union
    }

    pub fn to_lists(&self) -> Vec<Vec<u32>> {
        self.sets.iter().map(|s| s.iter().map(|l| l.0 as u32).collect()).collect()
    }
}
