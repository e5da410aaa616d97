//! Synthetic instances: Zipf catalogs, the three-link price topology and
//! random availability maps.
//!
//! All randomness comes from a ChaCha stream keyed by `(seed, scenario index)`,
//! so any scenario can be regenerated on its own, in any order.

use num_traits::Float;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AvailabilityMap, Catalog, Instance, Link, LinkId, LinkSet, LinkTopology};
use crate::scalar::Scalar;

/// Ids of the peering, cheap and expensive links of [`three_link_topology`].
pub const PEERING_LINK: LinkId = LinkId(1);
pub const CHEAP_LINK: LinkId = LinkId(2);
pub const EXPENSIVE_LINK: LinkId = LinkId(3);

pub const DEFAULT_AVAILABILITY_PROB: f64 = 0.5;

fn default_availability_prob() -> f64 {
    DEFAULT_AVAILABILITY_PROB
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub catalog_size: usize,
    pub zipf_alpha: f64,
    /// Price of the expensive link relative to the cheap one.
    pub price_ratio: f64,
    pub budget: u64,
    #[serde(default = "default_availability_prob")]
    pub availability_prob: f64,
    pub seed: u64,
    /// Index of the scenario within the seed's stream family.
    #[serde(default)]
    pub scenario: u64,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.catalog_size == 0 {
            return Err(Error::InvalidConfig("catalog_size must be at least 1".into()));
        }
        if !self.zipf_alpha.is_finite() || self.zipf_alpha < 0.0 {
            return Err(Error::InvalidConfig(format!("zipf_alpha must be a finite value >= 0, got {}", self.zipf_alpha)));
        }
        if !self.price_ratio.is_finite() || self.price_ratio < 1.0 {
            return Err(Error::InvalidConfig(format!("price_ratio must be a finite value >= 1, got {}", self.price_ratio)));
        }
        if !(0.0..=1.0).contains(&self.availability_prob) {
            return Err(Error::InvalidConfig(format!("availability_prob must lie in [0, 1], got {}", self.availability_prob)));
        }
        Ok(())
    }
}

/// Rank weights `d_o = rank^-alpha` for ranks `1..=n`, unnormalized.
pub fn zipf_catalog<F: Scalar + Float>(n: usize, alpha: F) -> Result<Catalog<F>> {
    if n == 0 {
        return Err(Error::InvalidConfig("catalog size must be at least 1".into()));
    }
    if !alpha.is_finite() || alpha < F::zero() {
        return Err(Error::InvalidConfig(format!("zipf exponent must be finite and >= 0, got {alpha}")));
    }
    let neg = -alpha;
    let demands = (1..=n).map(|rank| F::from_usize(rank).expect("rank fits the float type").powf(neg)).collect();
    Catalog::new(demands)
}

/// Peering link (price 0), cheap provider (price 1) and expensive provider (price `gamma`).
pub fn three_link_topology<S: Scalar>(gamma: S) -> Result<LinkTopology<S>> {
    if !gamma.is_finite_value() || gamma < S::one() {
        return Err(Error::InvalidConfig(format!("price ratio must be >= 1, got {gamma}")));
    }
    LinkTopology::new(vec![Link::peering(PEERING_LINK.0), Link::provider(CHEAP_LINK.0, S::one()), Link::provider(EXPENSIVE_LINK.0, gamma)])
}

/// Random stream for scenario `index` of a seed family.
pub fn scenario_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Includes each (object, link) pair independently with probability `prob`;
/// an object left with no link gets one link chosen uniformly.
pub fn sample_availability<R: Rng + ?Sized>(n: usize, links: &[LinkId], prob: f64, rng: &mut R) -> Result<AvailabilityMap> {
    if links.is_empty() {
        return Err(Error::InvalidConfig("availability sampling needs at least one link".into()));
    }
    if !(0.0..=1.0).contains(&prob) {
        return Err(Error::InvalidConfig(format!("availability probability must lie in [0, 1], got {prob}")));
    }
    let mut sets = Vec::with_capacity(n);
    for _ in 0..n {
        let mut set = LinkSet::EMPTY;
        for &l in links {
            if rng.random_bool(prob) {
                set.insert(l);
            }
        }
        if set.is_empty() {
            set.insert(links[rng.random_range(0..links.len())]);
        }
        sets.push(set);
    }
    AvailabilityMap::new(sets)
}

/// The availability map of one scenario over the three-link topology.
pub fn scenario_availability(catalog_size: usize, prob: f64, seed: u64, index: u64) -> Result<AvailabilityMap> {
    let mut rng = scenario_rng(seed, index);
    sample_availability(catalog_size, &[PEERING_LINK, CHEAP_LINK, EXPENSIVE_LINK], prob, &mut rng)
}

/// Builds the instance described by `config`.
pub fn generate(config: &ScenarioConfig) -> Result<Instance<f64>> {
    config.validate()?;
    let catalog = zipf_catalog(config.catalog_size, config.zipf_alpha)?;
    let topology = three_link_topology(config.price_ratio)?;
    let availability = scenario_availability(config.catalog_size, config.availability_prob, config.seed, config.scenario)?;
    Instance::new(topology, catalog, availability)
}
