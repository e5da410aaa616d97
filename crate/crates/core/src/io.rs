//! Instance and plan files.
//!
//! Instances are exchanged as JSON:
//!
//! ```json
//! {"links": [{"id": 1, "price": 0.0, "category": "peering"}, ...],
//!  "demands": [1.0, 0.43, ...],
//!  "availability": [[1, 3], [2], ...],
//!  "budget": 100}
//! ```
//!
//! Large catalogs can also be stored in a compact little-endian binary form
//! (see [`write_instance_binary`]); [`read_instance`] accepts either.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AvailabilityMap, Catalog, Instance, Link, LinkCategory, LinkId, LinkSet, LinkTopology, PlacementPlan};
use crate::scalar::Scalar;

const BINARY_MAGIC: &[u8; 8] = b"CCOSTBIN";
const BINARY_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkRecord {
    pub id: u32,
    pub price: f64,
    pub category: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub links: Vec<LinkRecord>,
    pub demands: Vec<f64>,
    pub availability: Vec<Vec<u32>>,
    pub budget: u64,
    /// Generator settings, recorded for reproduction.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<serde_json::Value>,
}

fn category_name(c: LinkCategory) -> &'static str {
    match c {
        LinkCategory::Peering => "peering",
        LinkCategory::Provider => "provider",
    }
}

fn parse_category(i: usize, name: &str) -> Result<LinkCategory> {
    match name {
        "peering" => Ok(LinkCategory::Peering),
        "provider" => Ok(LinkCategory::Provider),
        "customer" => Err(Error::Format(format!(
            "links[{i}].category: customer links are not supported; they carry revenue, not retrieval cost, and must be left out of the instance"
        ))),
        other => Err(Error::Format(format!("links[{i}].category: unknown category {other:?} (expected peering or provider)"))),
    }
}

fn convert<S: Scalar>(field: &str, x: f64) -> Result<S> {
    S::from_f64(x).ok_or_else(|| Error::Format(format!("{field}: value {x} is not representable")))
}

impl InstanceFile {
    pub fn from_instance<S: Scalar>(instance: &Instance<S>, budget: u64) -> Self {
        InstanceFile {
            links: instance
                .topology()
                .links()
                .iter()
                .map(|l| LinkRecord { id: l.id.0 as u32, price: l.price.to_f64_lossy(), category: category_name(l.category).into() })
                .collect(),
            demands: instance.catalog().demands().iter().map(|d| d.to_f64_lossy()).collect(),
            availability: instance.availability().to_lists(),
            budget,
            config: None,
        }
    }

    /// Validates the file contents and builds the instance and its budget.
    pub fn into_instance<S: Scalar>(self) -> Result<(Instance<S>, u64)> {
        let mut links = Vec::with_capacity(self.links.len());
        for (i, rec) in self.links.iter().enumerate() {
            let category = parse_category(i, &rec.category)?;
            if rec.id as usize >= crate::model::MAX_LINKS {
                return Err(Error::Format(format!("links[{i}].id: {} is outside 0..{}", rec.id, crate::model::MAX_LINKS)));
            }
            let price = convert(&format!("links[{i}].price"), rec.price)?;
            links.push(Link { id: LinkId(rec.id as u8), price, category });
        }
        let topology = LinkTopology::new(links)?;
        let demands = self
            .demands
            .iter()
            .enumerate()
            .map(|(o, &d)| convert(&format!("demands[{o}]"), d))
            .collect::<Result<Vec<S>>>()?;
        let catalog = Catalog::new(demands)?;
        let availability = AvailabilityMap::from_lists(&self.availability)?;
        Ok((Instance::new(topology, catalog, availability)?, self.budget))
    }
}

pub fn write_instance_json<S: Scalar>(path: &Path, instance: &Instance<S>, budget: u64, config: Option<serde_json::Value>) -> Result<()> {
    let file = InstanceFile { config, ..InstanceFile::from_instance(instance, budget) };
    let mut out = BufWriter::new(File::create(path)?);
    serde_json::to_writer(&mut out, &file)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

/// Binary layout: magic, version, link count, links `(id u8, category u8, price f64)`,
/// budget u64, object count u64, demands f64 each, availability masks u64 each.
pub fn write_instance_binary<S: Scalar>(path: &Path, instance: &Instance<S>, budget: u64) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    out.write_all(BINARY_MAGIC)?;
    out.write_all(&BINARY_VERSION.to_le_bytes())?;
    out.write_all(&(instance.topology().len() as u32).to_le_bytes())?;
    for l in instance.topology().links() {
        out.write_all(&[l.id.0, matches!(l.category, LinkCategory::Provider) as u8])?;
        out.write_all(&l.price.to_f64_lossy().to_le_bytes())?;
    }
    out.write_all(&budget.to_le_bytes())?;
    out.write_all(&(instance.num_objects() as u64).to_le_bytes())?;
    for d in instance.catalog().demands() {
        out.write_all(&d.to_f64_lossy().to_le_bytes())?;
    }
    for s in instance.availability().sets() {
        out.write_all(&s.0.to_le_bytes())?;
    }
    out.flush()?;
    Ok(())
}

fn read_array<const K: usize>(r: &mut impl Read, what: &str) -> Result<[u8; K]> {
    let mut buf = [0u8; K];
    r.read_exact(&mut buf).map_err(|e| Error::Format(format!("binary instance truncated while reading {what}: {e}")))?;
    Ok(buf)
}

fn read_binary<S: Scalar>(r: &mut impl Read) -> Result<(Instance<S>, u64)> {
    let magic: [u8; 8] = read_array(r, "magic")?;
    if &magic != BINARY_MAGIC {
        return Err(Error::Format("not a binary instance file".into()));
    }
    let version = u32::from_le_bytes(read_array(r, "version")?);
    if version != BINARY_VERSION {
        return Err(Error::Format(format!("unsupported binary instance version {version}")));
    }
    let num_links = u32::from_le_bytes(read_array(r, "link count")?) as usize;
    let mut links = Vec::with_capacity(num_links.min(64));
    for i in 0..num_links {
        let [id, cat] = read_array::<2>(r, "link")?;
        let price = f64::from_le_bytes(read_array(r, "link price")?);
        let category = if cat == 1 { LinkCategory::Provider } else { LinkCategory::Peering };
        links.push(Link { id: LinkId(id), price: convert(&format!("links[{i}].price"), price)?, category });
    }
    let budget = u64::from_le_bytes(read_array(r, "budget")?);
    let n = u64::from_le_bytes(read_array(r, "object count")?) as usize;
    let mut demands = Vec::with_capacity(n);
    for o in 0..n {
        demands.push(convert(&format!("demands[{o}]"), f64::from_le_bytes(read_array(r, "demands")?))?);
    }
    let mut sets = Vec::with_capacity(n);
    for _ in 0..n {
        sets.push(LinkSet(u64::from_le_bytes(read_array(r, "availability")?)));
    }
    let instance = Instance::new(LinkTopology::new(links)?, Catalog::new(demands)?, AvailabilityMap::new(sets)?)?;
    Ok((instance, budget))
}

/// Reads a JSON or binary instance file, detected by content.
pub fn read_instance<S: Scalar>(path: &Path) -> Result<(Instance<S>, u64)> {
    let mut reader = BufReader::new(File::open(path)?);
    let mut head = [0u8; 8];
    let got = reader.read(&mut head)?;
    let mut chained = head[..got].chain(reader);
    if got == 8 && &head == BINARY_MAGIC {
        read_binary(&mut chained)
    } else {
        let file: InstanceFile = serde_json::from_reader(chained)?;
        file.into_instance()
    }
}

pub fn read_plan(path: &Path) -> Result<PlacementPlan> {
    Ok(serde_json::from_reader(BufReader::new(File::open(path)?))?)
}

pub fn write_plan(path: &Path, plan: &PlacementPlan) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    serde_json::to_writer(&mut out, plan)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}
