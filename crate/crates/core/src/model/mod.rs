//! Domain types and the closed-form evaluation of plans.

mod availability;
mod catalog;
mod eval;
mod instance;
mod link;
mod plan;

pub use availability::{AvailabilityMap, LinkSet};
pub use catalog::{Catalog, ObjectId};
pub use eval::{evaluate, validate, EvaluationReport, Verdict, Violation};
pub use instance::Instance;
pub use link::{Link, LinkCategory, LinkId, LinkTopology, MAX_LINKS};
pub use plan::{PlacementPlan, RouterId};
