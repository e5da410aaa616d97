use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Index of an object in the catalog.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct ObjectId(pub u32);

impl ObjectId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Per-object request rates over one planning period.
#[derive(Clone, Debug, PartialEq)]
pub struct Catalog<S> {
    demands: Vec<S>,
    total: S,
}

impl<S: Scalar> Catalog<S> {
    pub fn new(demands: Vec<S>) -> Result<Self> {
        if demands.len() > u32::MAX as usize {
            return Err(Error::InvalidCatalog(format!("{} objects exceed the u32 object id range", demands.len())));
        }
        let mut any_positive = false;
        for (o, d) in demands.iter().enumerate() {
            if !d.is_finite_value() || *d < S::zero() {
                return Err(Error::InvalidCatalog(format!("demands[{o}] must be finite and non-negative, got {d}")));
            }
            any_positive |= *d > S::zero();
        }
        if !any_positive {
            return Err(Error::InvalidCatalog("at least one demand must be positive".into()));
        }
        let total = demands.iter().copied().sum();
        Ok(Catalog { demands, total })
    }

    pub fn demands(&self) -> &[S] {
        &self.demands
    }

    #[inline]
    pub fn demand(&self, object: ObjectId) -> S {
        self.demands[object.index()]
    }

    pub fn len(&self) -> usize {
        self.demands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.demands.is_empty()
    }

    pub fn total_demand(&self) -> S {
        self.total
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjectId> {
        (0..self.demands.len() as u32).map(ObjectId)
    }
}
