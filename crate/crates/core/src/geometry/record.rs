use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{BoolOp, Domain, GeometryError, Placed, Primitive};
use crate::vec2::Vec2;

/// JSON form of a domain: `{kind, params, children?, op?, rotations?, offsets?}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainRecord {
    pub kind: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub children: Option<Vec<DomainRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub op: Option<BoolOp>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotations: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offsets: Option<[[f64; 2]; 2]>,
}

impl From<&Domain> for DomainRecord {
    fn from(d: &Domain) -> Self {
        match d {
            Domain::Primitive(p) => {
                let params: Vec<(&str, f64)> = match *p {
                    Primitive::Disk { radius } => vec![("radius", radius)],
                    Primitive::Square { half } => vec![("half", half)],
                    Primitive::Rectangle { a, b } => vec![("a", a), ("b", b)],
                    Primitive::Ellipse { rx, ry } => vec![("rx", rx), ("ry", ry)],
                    Primitive::Annulus { r_in, r_out } => vec![("r_in", r_in), ("r_out", r_out)],
                    Primitive::Triangle { radius } | Primitive::Hexagon { radius } => {
                        vec![("radius", radius)]
                    }
                    Primitive::Stadium { half_len, radius } => {
                        vec![("half_len", half_len), ("radius", radius)]
                    }
                };
                DomainRecord {
                    kind: p.name().to_string(),
                    params: params.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
                    children: None,
                    op: None,
                    rotations: None,
                    offsets: None,
                }
            }
            Domain::Composed(c) => {
                let [a, b] = &c.children;
                DomainRecord {
                    kind: "composed".to_string(),
                    params: BTreeMap::new(),
                    children: Some(vec![(&a.domain).into(), (&b.domain).into()]),
                    op: Some(c.op),
                    rotations: Some([a.rotation, b.rotation]),
                    offsets: Some([a.offset.into(), b.offset.into()]),
                }
            }
        }
    }
}

impl TryFrom<&DomainRecord> for Domain {
    type Error = GeometryError;

    fn try_from(r: &DomainRecord) -> Result<Self, Self::Error> {
        let get = |name: &str| {
            r.params
                .get(name)
                .copied()
                .ok_or_else(|| GeometryError::Malformed(format!("{} is missing `{name}`", r.kind)))
        };
        let prim = match r.kind.as_str() {
            "disk" => Primitive::Disk { radius: get("radius")? },
            "square" => Primitive::Square { half: get("half")? },
            "rectangle" => Primitive::Rectangle {
                a: get("a")?,
                b: get("b")?,
            },
            "ellipse" => Primitive::Ellipse {
                rx: get("rx")?,
                ry: get("ry")?,
            },
            "annulus" => Primitive::Annulus {
                r_in: get("r_in")?,
                r_out: get("r_out")?,
            },
            "triangle" => Primitive::Triangle { radius: get("radius")? },
            "hexagon" => Primitive::Hexagon { radius: get("radius")? },
            "stadium" => Primitive::Stadium {
                half_len: get("half_len")?,
                radius: get("radius")?,
            },
            "composed" => {
                let missing = |f: &str| GeometryError::Malformed(format!("composed is missing `{f}`"));
                let children = r.children.as_ref().ok_or_else(|| missing("children"))?;
                if children.len() != 2 {
                    return Err(GeometryError::Malformed(format!(
                        "composed needs 2 children, got {}",
                        children.len()
                    )));
                }
                let op = r.op.ok_or_else(|| missing("op"))?;
                let rot = r.rotations.ok_or_else(|| missing("rotations"))?;
                let off = r.offsets.ok_or_else(|| missing("offsets"))?;
                let place = |i: usize| -> Result<Placed, GeometryError> {
                    Ok(Placed {
                        domain: Domain::try_from(&children[i])?,
                        rotation: rot[i],
                        offset: Vec2::from(off[i]),
                    })
                };
                return Ok(Domain::composed(op, place(0)?, place(1)?));
            }
            other => return Err(GeometryError::Malformed(format!("unknown domain kind `{other}`"))),
        };
        prim.validate()?;
        Ok(Domain::Primitive(prim))
    }
}
