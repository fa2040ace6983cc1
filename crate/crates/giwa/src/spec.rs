//! JSON input documents: graphs, groups, voltage assignments and towers.
//!
//! Unknown fields are rejected everywhere so that typos surface as errors
//! instead of silently falling back to defaults.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use giwa_core::graph::{build_multigraph, EdgeSpec, Multigraph, Orientation};
use giwa_core::group::{
    cyclic, dihedral_8, permutation_group, product, sl2_level_quotient, FiniteGroup,
    DEFAULT_ORDER_CAP,
};
use giwa_core::iwasawa::Tower;
use giwa_core::series::{PadicTruncated, ZlValue};
use giwa_core::voltage::VoltageAssignment;

use crate::error::{Error, Result};

/// `{"vertices": [...], "edges": [[u, v], [u, v, id], ...]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EdgeEntry {
    Pair(String, String),
    Named(String, String, String),
}

impl GraphSpec {
    pub fn build(&self) -> Result<Multigraph> {
        let edges: Vec<EdgeSpec> = self
            .edges
            .iter()
            .map(|e| match e {
                EdgeEntry::Pair(u, v) => EdgeSpec::new(u, v),
                EdgeEntry::Named(u, v, id) => EdgeSpec {
                    from: u.clone(),
                    to: v.clone(),
                    id: Some(id.clone()),
                },
            })
            .collect();
        Ok(build_multigraph(&self.vertices, &edges)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupSpec {
    Cyclic {
        order: u64,
    },
    /// Left-nested direct product; elements are written `((a,b),c)`.
    Product {
        factors: Vec<GroupSpec>,
    },
    Dihedral8,
    /// Permutations of `1..=degree` in one-line notation.
    Permutation {
        degree: usize,
        generators: Vec<Vec<usize>>,
    },
    /// `ker(SL₂(ℤ/ℓ^{level+1}) → SL₂(ℤ/ℓ))`
    Sl2 {
        ell: u64,
        level: u32,
    },
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup> {
        Ok(match self {
            GroupSpec::Cyclic { order } => {
                if *order == 0 || *order > DEFAULT_ORDER_CAP {
                    return Err(Error::input(format!(
                        "cyclic group order {order} out of range"
                    )));
                }
                cyclic(*order)
            }
            GroupSpec::Product { factors } => {
                let mut it = factors.iter();
                let first = it
                    .next()
                    .ok_or_else(|| Error::input("product needs at least one factor"))?
                    .build()?;
                let mut g = first;
                for f in it {
                    g = product(g, f.build()?);
                    if g.order() as u64 > DEFAULT_ORDER_CAP {
                        return Err(Error::input("product group too large"));
                    }
                }
                g
            }
            GroupSpec::Dihedral8 => dihedral_8(),
            GroupSpec::Permutation { degree, generators } => {
                let mut gens = Vec::with_capacity(generators.len());
                for g in generators {
                    if g.contains(&0) {
                        return Err(Error::input("permutation points are numbered from 1"));
                    }
                    gens.push(g.iter().map(|&i| i - 1).collect());
                }
                permutation_group(*degree, &gens, DEFAULT_ORDER_CAP)?
            }
            GroupSpec::Sl2 { ell, level } => sl2_level_quotient(*ell, *level, DEFAULT_ORDER_CAP)?,
        })
    }
}

/// `{"graph", "orientation"?, "group", "alpha": {edge: element}}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VoltageSpec {
    pub graph: GraphSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<Vec<String>>,
    pub group: GroupSpec,
    pub alpha: BTreeMap<String, String>,
}

impl VoltageSpec {
    pub fn build(&self) -> Result<VoltageAssignment> {
        let graph = Arc::new(self.graph.build()?);
        let orientation = orientation(&graph, self.orientation.as_deref())?;
        let group = Arc::new(self.group.build()?);
        let values = assign(&graph, &orientation, &self.alpha, "alpha", |s| {
            Ok(group.parse(s)?)
        })?;
        Ok(VoltageAssignment::new(graph, orientation, group, values)?)
    }
}

/// A voltage in ℤ_ℓ: an integer, a decimal string (arbitrary size, or a
/// fraction `p/q` with `q` prime to ℓ), or an explicit truncation
/// `{"residue": "...", "precision": N}` meaning `residue mod ℓ^N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ZlSpec {
    Int(i64),
    Text(String),
    Truncated(TruncatedSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncatedSpec {
    pub residue: String,
    pub precision: u32,
}

/// Digits kept for fractions `p/q`.
pub const FRACTION_PRECISION: u32 = 200;

impl ZlSpec {
    pub fn to_value(&self, ell: u64) -> Result<ZlValue> {
        let parse = |s: &str| -> Result<BigInt> {
            s.trim()
                .parse()
                .map_err(|_| Error::input(format!("{s:?} is not an integer")))
        };
        Ok(match self {
            ZlSpec::Int(v) => ZlValue::exact(*v),
            ZlSpec::Text(s) => match s.split_once('/') {
                None => ZlValue::Exact(parse(s)?),
                Some((p, q)) => {
                    let (p, q) = (parse(p)?, parse(q)?);
                    let modulus = BigInt::from(ell).pow(FRACTION_PRECISION);
                    let inv = modular_inverse(&q, &modulus).ok_or_else(|| {
                        Error::input(format!("denominator {q} is divisible by {ell}"))
                    })?;
                    ZlValue::Truncated(PadicTruncated::new(ell, FRACTION_PRECISION, &(p * inv)))
                }
            },
            ZlSpec::Truncated(t) => {
                if t.precision == 0 {
                    return Err(Error::input("truncated voltage needs precision >= 1"));
                }
                ZlValue::Truncated(PadicTruncated::new(ell, t.precision, &parse(&t.residue)?))
            }
        })
    }
}

fn modular_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    use num_integer::Integer;
    let g = a.extended_gcd(m);
    (g.gcd == BigInt::from(1) || g.gcd == BigInt::from(-1)).then(|| (g.x * g.gcd).mod_floor(m))
}

/// `{"graph", "orientation"?, "ell", "alpha": {edge: ℤ_ℓ}, "group"?,
/// "beta"?: {edge: element}, "levels"?}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerSpec {
    pub graph: GraphSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<Vec<String>>,
    pub ell: u64,
    pub alpha: BTreeMap<String, ZlSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<u32>,
}

impl TowerSpec {
    pub fn build(&self) -> Result<Tower> {
        let graph = Arc::new(self.graph.build()?);
        let orientation = orientation(&graph, self.orientation.as_deref())?;
        let alpha = assign(&graph, &orientation, &self.alpha, "alpha", |v| {
            v.to_value(self.ell)
        })?;
        Ok(Tower::new(graph, orientation, self.ell, alpha)?)
    }

    /// The finite voltage assignment `β`, when the file gives one.
    pub fn beta(&self, tower: &Tower) -> Result<Option<VoltageAssignment>> {
        let (group, beta) = match (&self.group, &self.beta) {
            (Some(g), Some(b)) => (g, b),
            (None, None) => return Ok(None),
            (None, Some(_)) => return Err(Error::input("\"beta\" needs a \"group\"")),
            (Some(_), None) => return Err(Error::input("\"group\" given without \"beta\"")),
        };
        let group = Arc::new(group.build()?);
        let values = assign(tower.graph(), tower.orientation(), beta, "beta", |s| {
            Ok(group.parse(s)?)
        })?;
        Ok(Some(VoltageAssignment::new(
            tower.graph().clone(),
            tower.orientation().clone(),
            group,
            values,
        )?))
    }
}

fn orientation(graph: &Multigraph, ids: Option<&[String]>) -> Result<Orientation> {
    match ids {
        None => Ok(graph.orientation().clone()),
        Some(ids) => {
            let edges = ids
                .iter()
                .map(|id| {
                    graph.edge_index(id).ok_or_else(|| {
                        Error::input(format!("orientation names unknown edge {id:?}"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(graph.orientation_from(&edges)?)
        }
    }
}

/// Reads one value per orientation edge from a map keyed by edge id. An
/// entry for `~s` (the reverse of an oriented `s`) is rejected.
fn assign<V, T>(
    graph: &Multigraph,
    orientation: &Orientation,
    map: &BTreeMap<String, V>,
    what: &str,
    mut convert: impl FnMut(&V) -> Result<T>,
) -> Result<Vec<T>> {
    for key in map.keys() {
        match graph.edge_index(key) {
            Some(e) if orientation.position(e).is_some() => {}
            Some(_) => {
                return Err(Error::input(format!(
                    "{what} is keyed by {key:?}, which is not in the orientation"
                )))
            }
            None => return Err(Error::input(format!("{what} names unknown edge {key:?}"))),
        }
    }
    orientation
        .edges()
        .iter()
        .map(|&e| {
            let id = graph.edge_label(e);
            let v = map
                .get(id)
                .ok_or_else(|| Error::input(format!("{what} has no value for edge {id:?}")))?;
            convert(v).map_err(|err| err.context(format!("{what}[{id}]")))
        })
        .collect()
}

/// Parses a JSON document into `T`, reporting the line and column of the
/// first problem.
pub fn from_json<T: serde::de::DeserializeOwned>(text: &str, origin: &str) -> Result<T> {
    serde_json::from_str(text)
        .map_err(|e| Error::input(format!("{origin}:{}:{}: {e}", e.line(), e.column())))
}
