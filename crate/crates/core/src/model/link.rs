use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::LinkSet;
use crate::scalar::Scalar;

/// Largest number of external links a topology may hold; link sets are `u64` bitmasks.
pub const MAX_LINKS: usize = 64;

/// Identifier of an external link, in `0..64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LinkId(pub u8);

impl LinkId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for LinkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "l{}", self.0)
    }
}

/// Commercial relationship behind an external link.
///
/// Customer links bring revenue rather than cost and are not part of the model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkCategory {
    /// Settlement-free peering: zero price.
    Peering,
    /// Transit from a provider: strictly positive price.
    Provider,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Link<S> {
    pub id: LinkId,
    /// Cost of retrieving one object through this link.
    pub price: S,
    pub category: LinkCategory,
}

impl<S: Scalar> Link<S> {
    pub fn peering(id: u8) -> Self {
        Link { id: LinkId(id), price: S::zero(), category: LinkCategory::Peering }
    }

    pub fn provider(id: u8, price: S) -> Self {
        Link { id: LinkId(id), price, category: LinkCategory::Provider }
    }

    /// Builds a link whose category follows from its price.
    pub fn with_price(id: u8, price: S) -> Self {
        if price.is_zero() {
            Self::peering(id)
        } else {
            Self::provider(id, price)
        }
    }
}

/// The set of priced external links of an ISP.
#[derive(Clone, Debug)]
pub struct LinkTopology<S> {
    links: Vec<Link<S>>,
    slots: [u8; MAX_LINKS],
}

const NO_SLOT: u8 = u8::MAX;

impl<S: Scalar> LinkTopology<S> {
    pub fn new(mut links: Vec<Link<S>>) -> Result<Self> {
        if links.is_empty() {
            return Err(Error::InvalidTopology("at least one external link is required".into()));
        }
        links.sort_by_key(|l| l.id);
        let mut slots = [NO_SLOT; MAX_LINKS];
        for (slot, link) in links.iter().enumerate() {
            let id = link.id;
            if id.index() >= MAX_LINKS {
                return Err(Error::InvalidTopology(format!("link id {} out of range 0..{MAX_LINKS}", id.0)));
            }
            if slots[id.index()] != NO_SLOT {
                return Err(Error::InvalidTopology(format!("duplicate link id {}", id.0)));
            }
            if !link.price.is_finite_value() || link.price < S::zero() {
                return Err(Error::InvalidTopology(format!(
                    "link {}: price must be a finite non-negative number, got {}",
                    id.0, link.price
                )));
            }
            match link.category {
                LinkCategory::Peering if !link.price.is_zero() => {
                    return Err(Error::InvalidTopology(format!(
                        "link {}: peering links must have price 0, got {}",
                        id.0, link.price
                    )))
                }
                LinkCategory::Provider if link.price.is_zero() => {
                    return Err(Error::InvalidTopology(format!(
                        "link {}: provider links must have a positive price",
                        id.0
                    )))
                }
                _ => {}
            }
            slots[id.index()] = slot as u8;
        }
        Ok(LinkTopology { links, slots })
    }

    /// Links ordered by ascending id.
    pub fn links(&self) -> &[Link<S>] {
        &self.links
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    /// Position of `id` in [`links`](Self::links).
    #[inline]
    pub fn slot(&self, id: LinkId) -> Option<usize> {
        match self.slots.get(id.index()) {
            Some(&s) if s != NO_SLOT => Some(s as usize),
            _ => None,
        }
    }

    pub fn get(&self, id: LinkId) -> Option<&Link<S>> {
        self.slot(id).map(|s| &self.links[s])
    }

    pub fn contains(&self, id: LinkId) -> bool {
        self.slot(id).is_some()
    }

    /// Price of a link known to be in the topology.
    ///
    /// Panics on an unknown id.
    #[inline]
    pub fn price(&self, id: LinkId) -> S {
        self.links[self.slot(id).expect("link id not in topology")].price
    }

    pub fn ids(&self) -> impl Iterator<Item = LinkId> + '_ {
        self.links.iter().map(|l| l.id)
    }

    pub fn id_set(&self) -> LinkSet {
        self.ids().collect()
    }

    /// Same links with every price multiplied by `factor > 0`.
    pub fn scale_prices(&self, factor: S) -> Result<Self> {
        if factor <= S::zero() || !factor.is_finite_value() {
            return Err(Error::InvalidTopology(format!("price scale factor must be positive, got {factor}")));
        }
        Self::new(self.links.iter().map(|l| Link { price: l.price * factor, ..*l }).collect())
    }
}
