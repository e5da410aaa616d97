//! Cost-aware cache provisioning for an ISP with priced external links.
//!
//! Given per-object demands, link prices and which links can supply each
//! object, the planners choose border-cache sizes, which objects to store and
//! which link each object's misses leave through, either to minimize the
//! retrieval bill (MIN-COST) or to maximize the hit-ratio (MAX-HIT). Both are
//! exact greedy algorithms; [`oracle`] certifies them by enumeration on small
//! instances, and [`experiment`] runs the parameter sweeps comparing them.
//!
//! The numeric core is generic over [`Scalar`]; the aliases below fix the
//! common choices.

pub mod error;
pub mod experiment;
pub mod io;
pub mod model;
pub mod oracle;
pub mod planner;
pub mod scalar;
pub mod scenario;

pub use error::{Error, Result};
pub use model::{
    evaluate, validate, AvailabilityMap, Catalog, EvaluationReport, Instance, Link, LinkCategory, LinkId, LinkSet, LinkTopology, ObjectId,
    PlacementPlan, RouterId, Verdict, Violation,
};
pub use planner::{cheapest_links, lower_bound_cost, plan_max_hit, plan_min_cost, Objective, RankedObject, Ranking};
pub use scalar::{Rational, Scalar};

pub type Instance64 = Instance<f64>;
pub type Instance32 = Instance<f32>;
pub type ExactInstance = Instance<Rational>;

pub type Catalog64 = Catalog<f64>;
pub type Catalog32 = Catalog<f32>;
pub type ExactCatalog = Catalog<Rational>;

pub type LinkTopology64 = LinkTopology<f64>;
pub type LinkTopology32 = LinkTopology<f32>;
pub type ExactLinkTopology = LinkTopology<Rational>;

pub type EvaluationReport64 = EvaluationReport<f64>;
pub type ExactEvaluationReport = EvaluationReport<Rational>;
