#![allow(dead_code)]

use cachecost::{AvailabilityMap, Catalog, Instance, Link, LinkId, LinkSet, LinkTopology, Scalar};
use rand::Rng;

/// Random toy instance: up to `max_objects` objects, up to `max_links` links,
/// prices drawn from {0} ∪ [0.1, 10] and non-empty random availability.
///
/// Demands are small integers half of the time so that ties in demand and
/// potential cost occur often.
pub fn random_small_instance<R: Rng>(rng: &mut R, max_objects: usize, max_links: usize) -> Instance<f64> {
    let num_links = rng.random_range(1..=max_links);
    let links: Vec<Link<f64>> = (0..num_links)
        .map(|i| {
            let price = if rng.random_bool(0.25) {
                0.0
            } else if rng.random_bool(0.3) {
                rng.random_range(1..=4) as f64
            } else {
                rng.random_range(0.1..=10.0)
            };
            Link::with_price(i as u8, price)
        })
        .collect();
    let n = rng.random_range(1..=max_objects);
    let integer_demands = rng.random_bool(0.5);
    let mut demands: Vec<f64> = (0..n)
        .map(|_| if integer_demands { rng.random_range(0..=4) as f64 } else { rng.random_range(0.0..10.0) })
        .collect();
    if demands.iter().all(|&d| d == 0.0) {
        demands[0] = 1.0;
    }
    let full = (1u64 << num_links) - 1;
    let sets = (0..n).map(|_| LinkSet(rng.random_range(1..=full))).collect();
    Instance::new(LinkTopology::new(links).unwrap(), Catalog::new(demands).unwrap(), AvailabilityMap::new(sets).unwrap()).unwrap()
}

/// The same instance with every number converted exactly to `S`.
pub fn convert<S: Scalar>(inst: &Instance<f64>) -> Instance<S> {
    let links = inst.topology().links().iter().map(|l| Link { id: l.id, price: S::from_f64(l.price).unwrap(), category: l.category }).collect();
    let demands = inst.catalog().demands().iter().map(|&d| S::from_f64(d).unwrap()).collect();
    Instance::new(LinkTopology::new(links).unwrap(), Catalog::new(demands).unwrap(), inst.availability().clone()).unwrap()
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs())
}

/// Instance with demands (4,3,2,1), links l1 (price 1) and l2 (price 5),
/// availability o1:{l1}, o2:{l2}, o3:{l1,l2}, o4:{l2}.
pub fn obj4<S: Scalar>() -> Instance<S> {
    let s = |x: i64| S::from_i64(x).unwrap();
    let topology = LinkTopology::new(vec![Link::provider(1, s(1)), Link::provider(2, s(5))]).unwrap();
    let catalog = Catalog::new(vec![s(4), s(3), s(2), s(1)]).unwrap();
    let availability = AvailabilityMap::new(vec![
        LinkSet::single(LinkId(1)),
        LinkSet::single(LinkId(2)),
        [LinkId(1), LinkId(2)].into_iter().collect(),
        LinkSet::single(LinkId(2)),
    ])
    .unwrap();
    Instance::new(topology, catalog, availability).unwrap()
}
