//! JSON encodings of ring and group descriptors, elements and chains.
//!
//! Elements are nested integer arrays shaped like the ring: a bare integer
//! for `Z_m`, `[re, im]` for Gaussian integers, `[c_0, ..., c_{r-1}]` for a
//! Galois ring, `n` rows of `n` base values for a matrix ring and one base
//! value per group element (canonical group order) for a group ring.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use unitlift_core::{CncChain, Element, Error as CoreError, FiniteGroup, GroupSpec, Ideal, Ring, RingKind};

use crate::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum RingDesc {
    Zmod {
        m: u64,
    },
    Gaussian {
        p: u64,
        k: u32,
    },
    /// `q` holds the monic modulus polynomial, ascending.
    Galois {
        p: u64,
        k: u32,
        q: Vec<u64>,
    },
    Matrix {
        n: usize,
        base: Box<RingDesc>,
    },
    GroupRing {
        group: GroupDesc,
        base: Box<RingDesc>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupDesc {
    Cyclic { n: usize },
    Symmetric { n: usize },
    Product { factors: Vec<GroupDesc> },
}

impl RingDesc {
    pub fn build(&self) -> Result<Arc<Ring>, Error> {
        Ok(match self {
            RingDesc::Zmod { m } => Ring::zmod(*m)?,
            RingDesc::Gaussian { p, k } => Ring::gaussian(*p, *k)?,
            RingDesc::Galois { p, k, q } => Ring::galois(*p, *k, q)?,
            RingDesc::Matrix { n, base } => Ring::matrix(*n, base.build()?)?,
            RingDesc::GroupRing { group, base } => Ring::group_ring(Arc::new(group.build()?), base.build()?)?,
        })
    }

    /// Descriptor of an existing ring. Groups built from raw tables have none.
    pub fn of(ring: &Ring) -> Result<RingDesc, Error> {
        Ok(match ring.kind() {
            RingKind::ZMod => RingDesc::Zmod { m: ring.modulus() },
            RingKind::Gaussian { p, k } => RingDesc::Gaussian { p: *p, k: *k },
            RingKind::Galois { p, k, poly } => RingDesc::Galois { p: *p, k: *k, q: poly.clone() },
            RingKind::Matrix { n, base } => RingDesc::Matrix { n: *n, base: Box::new(RingDesc::of(base)?) },
            RingKind::GroupRing { group, base } => {
                RingDesc::GroupRing { group: GroupDesc::of(group.spec())?, base: Box::new(RingDesc::of(base)?) }
            }
        })
    }
}

impl GroupDesc {
    pub fn build(&self) -> Result<FiniteGroup, Error> {
        Ok(match self {
            GroupDesc::Cyclic { n } => FiniteGroup::cyclic(*n)?,
            GroupDesc::Symmetric { n } => FiniteGroup::symmetric(*n)?,
            GroupDesc::Product { factors } => {
                let groups = factors.iter().map(GroupDesc::build).collect::<Result<Vec<_>, _>>()?;
                FiniteGroup::product_of(&groups)?
            }
        })
    }

    pub fn of(spec: &GroupSpec) -> Result<GroupDesc, Error> {
        Ok(match spec {
            GroupSpec::Cyclic(n) => GroupDesc::Cyclic { n: *n },
            GroupSpec::Symmetric(n) => GroupDesc::Symmetric { n: *n },
            GroupSpec::Product(f) => {
                GroupDesc::Product { factors: f.iter().map(GroupDesc::of).collect::<Result<_, _>>()? }
            }
            GroupSpec::Table => {
                return Err(CoreError::Unsupported("groups given by a raw table have no descriptor".into()).into())
            }
        })
    }
}

pub fn parse_ring(text: &str) -> Result<Arc<Ring>, Error> {
    let desc: RingDesc = serde_json::from_str(text).map_err(|e| Error::Json(format!("ring descriptor: {e}")))?;
    desc.build()
}

fn shape_error(ring: &Ring, v: &Value) -> Error {
    CoreError::ShapeMismatch(format!("{v} is not an element of {ring}")).into()
}

fn flatten(ring: &Ring, v: &Value, out: &mut Vec<i128>) -> Result<(), Error> {
    let list = |len: usize| match v.as_array() {
        Some(a) if a.len() == len => Ok(a),
        _ => Err(shape_error(ring, v)),
    };
    match ring.kind() {
        RingKind::ZMod => {
            let c = v
                .as_i64()
                .map(i128::from)
                .or_else(|| v.as_u64().map(i128::from))
                .ok_or_else(|| shape_error(ring, v))?;
            out.push(c);
        }
        RingKind::Gaussian { .. } | RingKind::Galois { .. } => {
            for c in list(ring.coord_len())? {
                let c = c.as_i64().map(i128::from).or_else(|| c.as_u64().map(i128::from));
                out.push(c.ok_or_else(|| shape_error(ring, v))?);
            }
        }
        RingKind::Matrix { n, base } => {
            for row in list(*n)? {
                let row = row.as_array().filter(|r| r.len() == *n).ok_or_else(|| shape_error(ring, v))?;
                for entry in row {
                    flatten(base, entry, out)?;
                }
            }
        }
        RingKind::GroupRing { group, base } => {
            for c in list(group.order())? {
                flatten(base, c, out)?;
            }
        }
    }
    Ok(())
}

pub fn element_from_json(ring: &Arc<Ring>, v: &Value) -> Result<Element, Error> {
    let mut coords = Vec::with_capacity(ring.coord_len());
    flatten(ring, v, &mut coords)?;
    Ok(Element::from_signed(ring, &coords)?)
}

pub fn parse_element(ring: &Arc<Ring>, text: &str) -> Result<Element, Error> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Json(format!("element: {e}")))?;
    element_from_json(ring, &v)
}

fn nest(ring: &Ring, c: &[u64]) -> Value {
    match ring.kind() {
        RingKind::ZMod => Value::from(c[0]),
        RingKind::Gaussian { .. } | RingKind::Galois { .. } => Value::from(c.to_vec()),
        RingKind::Matrix { n, base } => {
            let w = base.coord_len();
            let rows = c.chunks(n * w).map(|row| Value::Array(row.chunks(w).map(|e| nest(base, e)).collect()));
            Value::Array(rows.collect())
        }
        RingKind::GroupRing { base, .. } => Value::Array(c.chunks(base.coord_len()).map(|e| nest(base, e)).collect()),
    }
}

pub fn element_to_json(x: &Element) -> Value {
    nest(x.ring(), x.coords())
}

/// Exact integer; counts beyond `u64` become decimal strings.
pub fn count_to_json(n: u128) -> Value {
    u64::try_from(n).map(Value::from).unwrap_or_else(|_| Value::from(n.to_string()))
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ChainDesc {
    Power { chain: PowerChainDesc },
    Explicit { ideals: Vec<IdealDesc>, t: Vec<u32>, s: Vec<u64> },
}

/// `{<a>, ..., <a>^k}` with `t_i = 2`, `s_i = s`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerChainDesc {
    pub generator: Value,
    pub k: u32,
    pub s: u64,
}

/// `<a>^e`, `a` in the coefficient ring.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealDesc {
    pub generator: Value,
    #[serde(default = "one")]
    pub exponent: u32,
}

fn one() -> u32 {
    1
}

impl ChainDesc {
    pub fn build(&self, ring: &Arc<Ring>) -> Result<CncChain, Error> {
        let coefficients = ring.coefficient_ring();
        let chain_error = |e: Error| match e {
            Error::Core(CoreError::ShapeMismatch(m)) => Error::Core(CoreError::InvalidChain(m)),
            other => other,
        };
        Ok(match self {
            ChainDesc::Power { chain } => {
                let a = element_from_json(&coefficients, &chain.generator).map_err(chain_error)?;
                CncChain::power(ring, &a, chain.k, chain.s)?
            }
            ChainDesc::Explicit { ideals, t, s } => {
                let ideals = ideals
                    .iter()
                    .map(|i| {
                        let a = element_from_json(&coefficients, &i.generator).map_err(chain_error)?;
                        Ok(Ideal::power(ring, a, i.exponent)?)
                    })
                    .collect::<Result<Vec<_>, Error>>()?;
                CncChain::new(ideals, t.clone(), s.clone())?
            }
        })
    }
}

pub fn parse_chain(ring: &Arc<Ring>, text: &str) -> Result<CncChain, Error> {
    let desc: ChainDesc = serde_json::from_str(text).map_err(|e| Error::Json(format!("chain: {e}")))?;
    desc.build(ring)
}

/// JSON summary of a chain: generators, divisors and indices.
pub fn chain_to_json(chain: &CncChain) -> Value {
    let ideals: Vec<Value> = chain
        .ideals()
        .iter()
        .map(|i| {
            serde_json::json!({
                "generator": element_to_json(i.generator()),
                "exponent": i.exponent(),
                "divisor": i.divisor(),
            })
        })
        .collect();
    serde_json::json!({ "ideals": ideals, "t": chain.nilpotency_indices(), "s": chain.characteristics() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptors_round_trip() {
        let text = r#"{"type":"group_ring","group":{"type":"product","factors":[{"type":"cyclic","n":2},{"type":"symmetric","n":3}]},"base":{"type":"matrix","n":2,"base":{"type":"galois","p":2,"k":2,"q":[1,1,1]}}}"#;
        let desc: RingDesc = serde_json::from_str(text).unwrap();
        let ring = desc.build().unwrap();
        assert_eq!(RingDesc::of(&ring).unwrap(), desc);
        assert_eq!(serde_json::to_string(&desc).unwrap(), text);
    }

    #[test]
    fn elements_round_trip() {
        let ring = parse_ring(r#"{"type":"matrix","n":2,"base":{"type":"gaussian","p":3,"k":2}}"#).unwrap();
        let x = parse_element(&ring, "[[[1,2],[3,4]],[[5,6],[7,-1]]]").unwrap();
        assert_eq!(x.coords(), &[1, 2, 3, 4, 5, 6, 7, 8]);
        assert_eq!(element_to_json(&x).to_string(), "[[[1,2],[3,4]],[[5,6],[7,8]]]");
        assert!(parse_element(&ring, "[[1,2],[3,4]]").is_err());
        let z = parse_ring(r#"{"type":"zmod","m":27}"#).unwrap();
        assert_eq!(element_to_json(&parse_element(&z, "-17").unwrap()), Value::from(10));
    }

    #[test]
    fn bad_descriptors() {
        assert!(parse_ring(r#"{"type":"zmod","m":1}"#).is_err());
        assert!(parse_ring(r#"{"type":"zmod","n":5}"#).is_err());
        assert!(parse_ring(r#"{"type":"ring"}"#).is_err());
        assert!(parse_ring(r#"{"type":"gaussian","p":2,"k":2}"#).is_err());
    }

    #[test]
    fn chains() {
        let ring = parse_ring(r#"{"type":"matrix","n":2,"base":{"type":"zmod","m":27}}"#).unwrap();
        let power = parse_chain(&ring, r#"{"chain":{"generator":3,"k":3,"s":3}}"#).unwrap();
        assert_eq!(power.len(), 3);
        assert!(power.validate().passed());
        let explicit = parse_chain(&ring, r#"{"ideals":[{"generator":3},{"generator":0}],"t":[3],"s":[9]}"#).unwrap();
        assert_eq!(explicit.lifting_exponent().unwrap().value(), 9);
        assert!(parse_chain(&ring, r#"{"chain":{"generator":3,"k":2,"s":3}}"#).is_err());
        let json = chain_to_json(&power);
        assert_eq!(json["t"], serde_json::json!([2, 2]));
    }
}
