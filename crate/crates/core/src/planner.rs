//! Greedy optimal planners.
//!
//! Both objectives share one procedure: route every object to its cheapest
//! available link, rank objects, and cache the first `budget` of them in the
//! border cache of their routed link. Only the ranking key differs:
//!
//! * MIN-COST ranks by potential cost `pc_o = d_o * p(l_o)`, then demand;
//! * MAX-HIT ranks by demand, then potential cost.
//!
//! Remaining ties go to the lower object id, so plans are reproducible.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AvailabilityMap, Instance, LinkId, LinkSet, LinkTopology, ObjectId, PlacementPlan};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    /// Minimize retrieval cost, then maximize hit-ratio.
    MinCost,
    /// Maximize hit-ratio, then minimize retrieval cost.
    MaxHit,
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Objective::MinCost => "min-cost",
            Objective::MaxHit => "max-hit",
        })
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min-cost" => Ok(Objective::MinCost),
            "max-hit" => Ok(Objective::MaxHit),
            other => Err(Error::InvalidConfig(format!("unknown objective {other:?} (expected min-cost or max-hit)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RankedObject<S> {
    pub object: ObjectId,
    /// Cost incurred if the object is never cached.
    pub potential_cost: S,
    pub demand: S,
    pub cheapest_link: LinkId,
}

impl<S: Scalar> RankedObject<S> {
    /// Ordering under `objective`: `Less` means ranked earlier.
    pub fn rank_cmp(&self, other: &Self, objective: Objective) -> Ordering {
        let (primary, secondary) = match objective {
            Objective::MinCost => (
                other.potential_cost.total_cmp_valid(&self.potential_cost),
                other.demand.total_cmp_valid(&self.demand),
            ),
            Objective::MaxHit => (
                other.demand.total_cmp_valid(&self.demand),
                other.potential_cost.total_cmp_valid(&self.potential_cost),
            ),
        };
        primary.then(secondary).then(self.object.cmp(&other.object))
    }
}

/// Cheapest available link for one object; ties go to the lowest id.
fn cheapest_in<S: Scalar>(topology: &LinkTopology<S>, set: LinkSet) -> Option<LinkId> {
    let mut best: Option<(LinkId, S)> = None;
    for id in set.iter() {
        let price = topology.get(id)?.price;
        match best {
            Some((_, p)) if price >= p => {}
            _ => best = Some((id, price)),
        }
    }
    best.map(|(id, _)| id)
}

/// For every object, the link of minimal price among those able to supply it.
///
/// Ties are broken by the lowest link id.
pub fn cheapest_links<S: Scalar>(topology: &LinkTopology<S>, availability: &AvailabilityMap) -> Result<Vec<LinkId>> {
    let fail = |o: usize, set: LinkSet| {
        if set.is_empty() {
            Error::InvalidAvailability(format!("availability[{o}] is empty"))
        } else {
            Error::InvalidAvailability(format!("availability[{o}] = {set} references a link missing from the topology"))
        }
    };
    let used = availability.links_used();
    let width = 64 - used.0.leading_zeros();
    if width <= 12 {
        // Few distinct masks: resolve each once.
        let table: Vec<Option<LinkId>> = (0..1u64 << width).map(|m| cheapest_in(topology, LinkSet(m))).collect();
        availability
            .sets()
            .iter()
            .enumerate()
            .map(|(o, s)| table[s.0 as usize].ok_or_else(|| fail(o, *s)))
            .collect()
    } else {
        availability
            .sets()
            .iter()
            .enumerate()
            .map(|(o, s)| cheapest_in(topology, *s).ok_or_else(|| fail(o, *s)))
            .collect()
    }
}

struct HeapEntry<S> {
    item: RankedObject<S>,
    objective: Objective,
}

impl<S: Scalar> PartialEq for HeapEntry<S> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<S: Scalar> Eq for HeapEntry<S> {}

impl<S: Scalar> PartialOrd for HeapEntry<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<S: Scalar> Ord for HeapEntry<S> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.item.rank_cmp(&other.item, self.objective)
    }
}

/// The first objects of the greedy order, together with the routing they were ranked under.
#[derive(Clone, Debug)]
pub struct Ranking<S> {
    objective: Objective,
    num_objects: usize,
    links: Vec<LinkId>,
    path_selection: Vec<LinkId>,
    ranked: Vec<RankedObject<S>>,
}

impl<S: Scalar> Ranking<S> {
    pub fn objective(&self) -> Objective {
        self.objective
    }

    /// Ranked prefix, best first.
    pub fn ranked(&self) -> &[RankedObject<S>] {
        &self.ranked
    }

    pub fn path_selection(&self) -> &[LinkId] {
        &self.path_selection
    }

    /// Largest budget this ranking can plan for.
    pub fn max_budget(&self) -> u64 {
        if self.ranked.len() == self.num_objects {
            u64::MAX
        } else {
            self.ranked.len() as u64
        }
    }

    /// Greedy plan for `budget`: the first `budget` ranked objects cached on their routed link.
    ///
    /// Panics if `budget` exceeds [`max_budget`](Self::max_budget).
    pub fn plan(&self, budget: u64) -> PlacementPlan {
        assert!(budget <= self.max_budget(), "ranking holds {} objects, budget {budget} needs more", self.ranked.len());
        let take = (budget.min(self.ranked.len() as u64)) as usize;
        PlacementPlan::with_cached_on_path(
            self.path_selection.clone(),
            self.ranked[..take].iter().map(|r| r.object),
            self.links.iter().copied(),
        )
    }
}

/// Ranks objects under `objective` given a routing, keeping the best `limit`.
pub fn rank_with_paths<S: Scalar>(instance: &Instance<S>, path_selection: Vec<LinkId>, objective: Objective, limit: usize) -> Ranking<S> {
    let topology = instance.topology();
    let catalog = instance.catalog();
    let n = catalog.len();
    let limit = limit.min(n);
    let prices: Vec<S> = (0..64u8).map(|id| topology.get(LinkId(id)).map_or(S::zero(), |l| l.price)).collect();
    let items = catalog.demands().iter().zip(&path_selection).enumerate().map(|(o, (&demand, &link))| RankedObject {
        object: ObjectId(o as u32),
        potential_cost: demand * prices[link.index()],
        demand,
        cheapest_link: link,
    });

    let ranked = if limit == 0 {
        Vec::new()
    } else if limit == n {
        let mut all: Vec<_> = items.collect();
        all.sort_unstable_by(|a, b| a.rank_cmp(b, objective));
        all
    } else {
        let mut heap: BinaryHeap<HeapEntry<S>> = BinaryHeap::with_capacity(limit + 1);
        for item in items {
            if heap.len() < limit {
                heap.push(HeapEntry { item, objective });
            } else {
                let mut worst = heap.peek_mut().expect("heap is full");
                if item.rank_cmp(&worst.item, objective) == Ordering::Less {
                    *worst = HeapEntry { item, objective };
                }
            }
        }
        heap.into_sorted_vec().into_iter().map(|e| e.item).collect()
    };

    Ranking { objective, num_objects: n, links: topology.ids().collect(), path_selection, ranked }
}

/// Routes by [`cheapest_links`] and ranks under `objective`, keeping the best `limit`.
pub fn rank<S: Scalar>(instance: &Instance<S>, objective: Objective, limit: usize) -> Result<Ranking<S>> {
    let paths = cheapest_links(instance.topology(), instance.availability())?;
    Ok(rank_with_paths(instance, paths, objective, limit))
}

fn clamp_budget(budget: u64, n: usize) -> usize {
    budget.min(n as u64) as usize
}

pub fn plan<S: Scalar>(instance: &Instance<S>, objective: Objective, budget: u64) -> Result<PlacementPlan> {
    Ok(rank(instance, objective, clamp_budget(budget, instance.num_objects()))?.plan(budget))
}

/// Cost-optimal plan; among cost-optimal plans, the one with the largest hit-ratio.
pub fn plan_min_cost<S: Scalar>(instance: &Instance<S>, budget: u64) -> Result<PlacementPlan> {
    plan(instance, Objective::MinCost, budget)
}

/// Hit-ratio-optimal plan; among those, the cheapest.
pub fn plan_max_hit<S: Scalar>(instance: &Instance<S>, budget: u64) -> Result<PlacementPlan> {
    plan(instance, Objective::MaxHit, budget)
}

/// Sum of potential costs outside the `budget` most expensive objects.
///
/// No plan within the budget can cost less, whatever its placement or routing.
pub fn lower_bound_cost<S: Scalar>(instance: &Instance<S>, budget: u64) -> Result<S> {
    let n = instance.num_objects();
    let ranking = rank(instance, Objective::MinCost, clamp_budget(budget, n))?;
    let mut top = vec![false; n];
    for r in ranking.ranked() {
        top[r.object.index()] = true;
    }
    let topology = instance.topology();
    Ok(instance
        .catalog()
        .demands()
        .iter()
        .zip(ranking.path_selection())
        .zip(&top)
        .filter(|(_, &kept)| !kept)
        .map(|((&d, &l), _)| d * topology.price(l))
        .sum())
}
