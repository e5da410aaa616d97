//! Exhaustive reference solvers for toy instances.
//!
//! A configuration is a set `C` of cached objects (`|C| <= budget`), a cache
//! link in `L_o` for every `o` in `C`, and a route in `L_o` for every object.
//! A request is free when the object is cached on its route and costs the
//! route's price otherwise. Once `C` is fixed the objective separates over
//! objects, so every subset is enumerated and, inside it, every per-object
//! (cache link, route) option is tried. Nothing here uses potential costs or
//! any ranking.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use rand::Rng;

use crate::model::{evaluate, AvailabilityMap, Catalog, Instance, Link, LinkId, LinkSet, LinkTopology, ObjectId, PlacementPlan};
use crate::planner::{lower_bound_cost, plan_max_hit, plan_min_cost};
use crate::scalar::Scalar;

/// Size limits an instance must satisfy before the oracle will enumerate it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SmallInstanceLimits {
    pub max_objects: usize,
    pub max_links: usize,
    pub max_budget: u64,
    /// Largest number of per-object options the search may visit.
    pub max_states: u128,
}

impl Default for SmallInstanceLimits {
    fn default() -> Self {
        SmallInstanceLimits { max_objects: 20, max_links: 16, max_budget: 12, max_states: 10_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinCostOptimum<S> {
    pub cost: S,
    /// Best hit-ratio among cost-optimal configurations.
    pub hit_ratio: S,
    pub plan: PlacementPlan,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MaxHitOptimum<S> {
    pub hit_ratio: S,
    /// Lowest cost among hit-optimal configurations.
    pub cost: S,
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Number of per-object options the exhaustive search visits for `instance` and `budget`.
pub fn search_space_size<S: Scalar>(instance: &Instance<S>, budget: u64) -> u128 {
    let n = instance.num_objects() as u64;
    let sizes: Vec<u128> = instance.availability().sets().iter().map(|s| s.len() as u128).collect();
    let cached: u128 = sizes.iter().map(|s| s * s).sum();
    let uncached: u128 = sizes.iter().sum();
    (0..=budget.min(n))
        .map(|k| {
            let with = if k == 0 { 0 } else { binomial(n - 1, k - 1) };
            with * cached + binomial(n - 1, k) * uncached
        })
        .sum()
}

fn check_limits<S: Scalar>(instance: &Instance<S>, budget: u64, limits: &SmallInstanceLimits) -> Result<()> {
    let n = instance.num_objects();
    if n > limits.max_objects || n > 31 {
        return Err(Error::InstanceTooLarge(format!("{n} objects (limit {})", limits.max_objects.min(31))));
    }
    if instance.topology().len() > limits.max_links {
        return Err(Error::InstanceTooLarge(format!("{} links (limit {})", instance.topology().len(), limits.max_links)));
    }
    if budget.min(n as u64) > limits.max_budget {
        return Err(Error::InstanceTooLarge(format!("budget {budget} (limit {})", limits.max_budget)));
    }
    let states = search_space_size(instance, budget);
    if states > limits.max_states {
        return Err(Error::SearchSpaceTooLarge { states, limit: limits.max_states });
    }
    Ok(())
}

/// Outcome of one object's choice: retrieval cost and demand served from cache.
#[derive(Clone, Copy)]
struct Choice<S> {
    cost: S,
    hits: S,
    cache: Option<LinkId>,
    route: LinkId,
}

/// Best option for one object, lexicographically under `better`.
fn best_choice<S: Scalar>(
    instance: &Instance<S>,
    object: ObjectId,
    cached: bool,
    better: &impl Fn(S, S, S, S) -> bool,
) -> Choice<S> {
    let topology = instance.topology();
    let demand = instance.catalog().demand(object);
    let links = instance.availability().get(object);
    let caches: Vec<Option<LinkId>> = if cached { links.iter().map(Some).collect() } else { vec![None] };
    let mut best: Option<Choice<S>> = None;
    for cache in caches {
        for route in links.iter() {
            let hit = cache == Some(route);
            let (cost, hits) = if hit { (S::zero(), demand) } else { (demand * topology.price(route), S::zero()) };
            if best.as_ref().is_none_or(|b| better(cost, hits, b.cost, b.hits)) {
                best = Some(Choice { cost, hits, cache, route });
            }
        }
    }
    best.expect("availability sets are non-empty")
}

fn min_cost_first<S: Scalar>(cost: S, hits: S, best_cost: S, best_hits: S) -> bool {
    match cost.total_cmp_valid(&best_cost) {
        Ordering::Less => true,
        Ordering::Equal => hits > best_hits,
        Ordering::Greater => false,
    }
}

fn max_hit_first<S: Scalar>(cost: S, hits: S, best_cost: S, best_hits: S) -> bool {
    match hits.total_cmp_valid(&best_hits) {
        Ordering::Greater => true,
        Ordering::Equal => cost < best_cost,
        Ordering::Less => false,
    }
}

/// All bitmasks over `n` elements with at most `k` bits set, by increasing size.
fn subsets_up_to(n: u32, k: u32) -> impl Iterator<Item = u32> {
    let limit = 1u64 << n;
    (0..=k.min(n)).flat_map(move |size| {
        let first = (1u64 << size) - 1;
        std::iter::successors(Some(first), move |&v| {
            if v == 0 {
                return None;
            }
            // Gosper's hack: next larger integer with the same popcount.
            let c = v & v.wrapping_neg();
            let r = v + c;
            let next = (((r ^ v) >> 2) / c) | r;
            (next < limit).then_some(next)
        })
        .map(|v| v as u32)
    })
}

/// Enumerates all cached subsets and returns the lexicographic optimum with its choices.
fn search<S: Scalar>(
    instance: &Instance<S>,
    budget: u64,
    better: impl Fn(S, S, S, S) -> bool,
) -> (S, S, Vec<Choice<S>>) {
    let n = instance.num_objects();
    let max_cached = budget.min(n as u64) as u32;
    let mut best: Option<(S, S, Vec<Choice<S>>)> = None;
    for subset in subsets_up_to(n as u32, max_cached) {
        let choices: Vec<Choice<S>> = (0..n)
            .map(|o| best_choice(instance, ObjectId(o as u32), subset & (1 << o) != 0, &better))
            .collect();
        let cost: S = choices.iter().map(|c| c.cost).sum();
        let hits: S = choices.iter().map(|c| c.hits).sum();
        if best.as_ref().is_none_or(|(bc, bh, _)| better(cost, hits, *bc, *bh)) {
            best = Some((cost, hits, choices));
        }
    }
    best.expect("the empty subset is always enumerated")
}

fn plan_from_choices<S: Scalar>(instance: &Instance<S>, choices: &[Choice<S>]) -> PlacementPlan {
    let mut border_sizes: BTreeMap<LinkId, u64> = instance.topology().ids().map(|l| (l, 0)).collect();
    let mut border_placement = BTreeSet::new();
    for (o, c) in choices.iter().enumerate() {
        if let Some(l) = c.cache {
            border_placement.insert((l, ObjectId(o as u32)));
            *border_sizes.entry(l).or_insert(0) += 1;
        }
    }
    PlacementPlan {
        border_sizes,
        internal_sizes: BTreeMap::new(),
        border_placement,
        path_selection: choices.iter().map(|c| c.route).collect(),
    }
}

/// Exact minimum retrieval cost over every placement and routing within `budget`.
pub fn brute_force_min_cost<S: Scalar>(instance: &Instance<S>, budget: u64, limits: &SmallInstanceLimits) -> Result<MinCostOptimum<S>> {
    check_limits(instance, budget, limits)?;
    let (cost, hits, choices) = search(instance, budget, min_cost_first);
    Ok(MinCostOptimum { cost, hit_ratio: hits / instance.catalog().total_demand(), plan: plan_from_choices(instance, &choices) })
}

/// Exact maximum hit-ratio within `budget`, and the least cost attaining it.
pub fn brute_force_max_hit<S: Scalar>(instance: &Instance<S>, budget: u64, limits: &SmallInstanceLimits) -> Result<MaxHitOptimum<S>> {
    check_limits(instance, budget, limits)?;
    let (cost, hits, _) = search(instance, budget, max_hit_first);
    Ok(MaxHitOptimum { hit_ratio: hits / instance.catalog().total_demand(), cost })
}

/// Shape of the random toy instances used for certification.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ToyShape {
    pub max_objects: usize,
    pub max_links: usize,
    pub max_budget: u64,
}

impl Default for ToyShape {
    fn default() -> Self {
        ToyShape { max_objects: 8, max_links: 3, max_budget: 4 }
    }
}

/// Random toy instance and budget: prices in {0} ∪ [0.1, 10], demands in [0, 10)
/// with at least one positive, random non-empty availability.
pub fn random_toy_instance<R: Rng + ?Sized>(rng: &mut R, shape: &ToyShape) -> Result<(Instance<f64>, u64)> {
    if shape.max_objects == 0 || shape.max_links == 0 || shape.max_links > 16 {
        return Err(Error::InvalidConfig(format!("toy shape needs 1..=16 links and at least one object, got {shape:?}")));
    }
    let num_links = rng.random_range(1..=shape.max_links);
    let links = (0..num_links)
        .map(|i| {
            let price = if rng.random_bool(0.25) { 0.0 } else { rng.random_range(0.1..=10.0) };
            Link::with_price(i as u8, price)
        })
        .collect();
    let n = rng.random_range(1..=shape.max_objects);
    let mut demands: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..10.0)).collect();
    if demands.iter().all(|&d| d == 0.0) {
        demands[0] = 1.0;
    }
    let full = (1u64 << num_links) - 1;
    let sets = (0..n).map(|_| LinkSet(rng.random_range(1..=full))).collect();
    let budget = rng.random_range(0..=shape.max_budget);
    Ok((Instance::new(LinkTopology::new(links)?, Catalog::new(demands)?, AvailabilityMap::new(sets)?)?, budget))
}

/// Greedy planners, lower bound and oracle side by side on one instance.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub greedy_cost: f64,
    pub lower_bound: f64,
    pub oracle_cost: f64,
    pub greedy_hit_ratio: f64,
    pub oracle_hit_ratio: f64,
}

impl Certificate {
    /// Whether greedy, bound and oracle agree within relative tolerance `rel`.
    pub fn agrees(&self, rel: f64) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= rel * a.abs().max(b.abs());
        close(self.greedy_cost, self.oracle_cost) && close(self.lower_bound, self.oracle_cost) && close(self.greedy_hit_ratio, self.oracle_hit_ratio)
    }
}

pub fn certify(instance: &Instance<f64>, budget: u64, limits: &SmallInstanceLimits) -> Result<Certificate> {
    let min_cost = brute_force_min_cost(instance, budget, limits)?;
    let max_hit = brute_force_max_hit(instance, budget, limits)?;
    Ok(Certificate {
        greedy_cost: evaluate(instance, &plan_min_cost(instance, budget)?)?.total_cost,
        lower_bound: lower_bound_cost(instance, budget)?,
        oracle_cost: min_cost.cost,
        greedy_hit_ratio: evaluate(instance, &plan_max_hit(instance, budget)?)?.hit_ratio,
        oracle_hit_ratio: max_hit.hit_ratio,
    })
}
