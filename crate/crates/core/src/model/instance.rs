use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::{AvailabilityMap, Catalog, LinkTopology};
use crate::scalar::Scalar;

/// A validated planning problem without its cache budget.
///
/// Catalog and availability are shared through `Arc` so that instances
/// differing only in prices can be built without copying per-object data.
#[derive(Clone, Debug)]
pub struct Instance<S> {
    topology: LinkTopology<S>,
    catalog: Arc<Catalog<S>>,
    availability: Arc<AvailabilityMap>,
}

impl<S: Scalar> Instance<S> {
    pub fn new(topology: LinkTopology<S>, catalog: impl Into<Arc<Catalog<S>>>, availability: impl Into<Arc<AvailabilityMap>>) -> Result<Self> {
        let catalog = catalog.into();
        let availability = availability.into();
        if catalog.len() != availability.len() {
            return Err(Error::InvalidInstance(format!(
                "availability lists {} objects but the catalog has {}",
                availability.len(),
                catalog.len()
            )));
        }
        let unknown = availability.links_used().0 & !topology.id_set().0;
        if unknown != 0 {
            let o = availability.sets().iter().position(|s| s.0 & unknown != 0).unwrap_or(0);
            return Err(Error::InvalidInstance(format!(
                "availability[{o}] = {} references a link missing from the topology",
                availability.sets()[o]
            )));
        }
        Ok(Instance { topology, catalog, availability })
    }

    pub fn topology(&self) -> &LinkTopology<S> {
        &self.topology
    }

    pub fn catalog(&self) -> &Catalog<S> {
        &self.catalog
    }

    pub fn availability(&self) -> &AvailabilityMap {
        &self.availability
    }

    pub fn shared_catalog(&self) -> Arc<Catalog<S>> {
        Arc::clone(&self.catalog)
    }

    pub fn shared_availability(&self) -> Arc<AvailabilityMap> {
        Arc::clone(&self.availability)
    }

    pub fn num_objects(&self) -> usize {
        self.catalog.len()
    }

    /// Same catalog and availability under a different price list.
    pub fn with_topology(&self, topology: LinkTopology<S>) -> Result<Self> {
        Self::new(topology, self.shared_catalog(), self.shared_availability())
    }
}
