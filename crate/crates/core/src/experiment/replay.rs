//! Request-level replay of a plan.
//!
//! Demands are quantized into whole requests, each request follows its
//! object's selected link and pays that link's price unless the border cache
//! there holds the object. This recomputes the retrieval cost as a sum over
//! individual requests, independently of the per-link aggregation in
//! [`evaluate`](crate::model::evaluate).

use crate::error::{Error, Result};
use crate::model::{validate, Catalog, Instance, ObjectId, PlacementPlan};
use crate::scalar::Scalar;

/// Requests for each object, `round(d_o / quantum)` of them, in object order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RequestTrace {
    runs: Vec<(ObjectId, u64)>,
    len: u64,
}

impl RequestTrace {
    pub fn quantize<S: Scalar>(catalog: &Catalog<S>, quantum: f64) -> Result<Self> {
        if !quantum.is_finite() || quantum <= 0.0 {
            return Err(Error::InvalidConfig(format!("replay quantum must be positive, got {quantum}")));
        }
        let runs: Vec<(ObjectId, u64)> = catalog
            .objects()
            .map(|o| (o, (catalog.demand(o).to_f64_lossy() / quantum).round() as u64))
            .filter(|&(_, count)| count > 0)
            .collect();
        let len = runs.iter().map(|&(_, c)| c).sum();
        if len == 0 {
            return Err(Error::EmptyTrace(quantum));
        }
        Ok(RequestTrace { runs, len })
    }

    /// Total number of requests.
    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn count(&self, object: ObjectId) -> u64 {
        self.runs.binary_search_by_key(&object, |&(o, _)| o).map_or(0, |i| self.runs[i].1)
    }

    /// Requested object ids, one per request.
    pub fn iter(&self) -> impl Iterator<Item = ObjectId> + '_ {
        self.runs.iter().flat_map(|&(o, c)| std::iter::repeat_n(o, c as usize))
    }
}

/// Largest demand divided by 10^4.
pub fn default_quantum<S: Scalar>(catalog: &Catalog<S>) -> f64 {
    catalog.demands().iter().map(|d| d.to_f64_lossy()).fold(0.0, f64::max) / 1e4
}

/// Retrieval cost of `plan` replayed request by request, scaled back by `quantum`.
pub fn replay_requests<S: Scalar>(instance: &Instance<S>, plan: &PlacementPlan, quantum: f64) -> Result<S> {
    let verdict = validate(instance, plan, u64::MAX);
    if !verdict.is_feasible() {
        return Err(Error::Infeasible(verdict));
    }
    let trace = RequestTrace::quantize(instance.catalog(), quantum)?;
    let topology = instance.topology();
    let mut total = S::zero();
    for object in trace.iter() {
        let link = plan.path_selection[object.index()];
        if !plan.border_placement.contains(&(link, object)) {
            total = total + topology.price(link);
        }
    }
    let quantum = S::from_f64(quantum).ok_or_else(|| Error::InvalidConfig(format!("quantum {quantum} is not representable")))?;
    Ok(total * quantum)
}

/// Bound on `|replay - evaluate|` from rounding each demand to the nearest
/// multiple of `quantum`: half a quantum per missed object, at its route price.
pub fn replay_error_bound<S: Scalar>(instance: &Instance<S>, plan: &PlacementPlan, quantum: f64) -> f64 {
    let topology = instance.topology();
    let catalog = instance.catalog();
    let missed_price: f64 = catalog
        .objects()
        .filter(|&o| catalog.demand(o) > S::zero())
        .map(|o| (o, plan.path_selection[o.index()]))
        .filter(|&(o, l)| !plan.border_placement.contains(&(l, o)))
        .map(|(_, l)| topology.price(l).to_f64_lossy())
        .sum();
    0.5 * quantum * missed_price
}
