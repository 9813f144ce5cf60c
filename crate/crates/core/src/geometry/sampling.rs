use std::f64::consts::TAU;

use super::{BoolOp, Domain, GeometryError, Placed, Primitive};
use crate::rng::RngStream;
use crate::vec2::Vec2;

/// Accepted interior points plus the number of bbox proposals spent.
#[derive(Clone, Debug)]
pub struct InteriorSample {
    pub points: Vec<Vec2>,
    pub proposals: usize,
}

impl InteriorSample {
    pub fn acceptance(&self) -> f64 {
        self.points.len() as f64 / self.proposals as f64
    }
}

/// Rejection-samples up to `n` uniform interior points from at most `64 n`
/// bbox proposals.
pub fn sample_interior(
    domain: &Domain,
    rng: &mut RngStream,
    n: usize,
) -> Result<InteriorSample, GeometryError> {
    let bbox = domain.bbox();
    let cap = 64 * n.max(1);
    let mut points = Vec::with_capacity(n);
    let mut proposals = 0;
    while points.len() < n && proposals < cap {
        proposals += 1;
        let p = Vec2::new(
            rng.range(bbox.min.x, bbox.max.x),
            rng.range(bbox.min.y, bbox.max.y),
        );
        if domain.sdf(p) > 0.0 {
            points.push(p);
        }
    }
    if points.is_empty() {
        return Err(GeometryError::EmptyDomain { proposals });
    }
    Ok(InteriorSample { points, proposals })
}

/// Number of uniform bbox samples, out of `n`, that fall strictly inside.
pub fn count_interior_hits(domain: &Domain, rng: &mut RngStream, n: usize) -> usize {
    let bbox = domain.bbox();
    (0..n)
        .filter(|_| {
            let p = Vec2::new(
                rng.range(bbox.min.x, bbox.max.x),
                rng.range(bbox.min.y, bbox.max.y),
            );
            domain.sdf(p) > 0.0
        })
        .count()
}

/// Random boundary points, uniform in arclength for primitives.
///
/// For composed domains child boundary points off the composed boundary
/// are discarded; at most `64 n` proposals are made.
pub fn sample_boundary(domain: &Domain, rng: &mut RngStream, n: usize) -> Vec<Vec2> {
    match domain {
        Domain::Primitive(p) => (0..n).map(|_| p.boundary_point(rng.uniform())).collect(),
        Domain::Composed(c) => {
            let weights = [c.children[0].domain.perimeter(), c.children[1].domain.perimeter()];
            let mut out = Vec::with_capacity(n);
            let mut proposals = 0;
            while out.len() < n && proposals < 64 * n.max(1) {
                proposals += 1;
                let i = rng.weighted_index(&weights);
                let child = &c.children[i];
                let local = sample_boundary(&child.domain, rng, 1);
                let w = child.to_world(local[0]);
                if c.on_boundary_of_child(i, w) {
                    out.push(w);
                }
            }
            out
        }
    }
}

/// Draws a primitive with generator parameter ranges.
pub fn sample_primitive(kind: usize, rng: &mut RngStream) -> Primitive {
    match kind {
        0 => Primitive::Disk { radius: 1.0 },
        1 => Primitive::Square { half: 1.0 },
        2 => Primitive::Rectangle {
            a: rng.range(0.6, 1.2),
            b: rng.range(0.6, 1.2),
        },
        3 => Primitive::Ellipse {
            rx: rng.range(0.6, 1.2),
            ry: rng.range(0.6, 1.2),
        },
        4 => Primitive::Annulus {
            r_in: rng.range(0.2, 0.6),
            r_out: rng.range(0.8, 1.4),
        },
        5 => Primitive::Triangle {
            radius: rng.range(0.6, 1.0),
        },
        6 => Primitive::Hexagon {
            radius: rng.range(0.6, 1.0),
        },
        _ => Primitive::Stadium {
            half_len: rng.range(0.2, 0.6),
            radius: rng.range(0.25, 0.5),
        },
    }
}

/// Composed-domain children are drawn from these primitive kinds.
const CHILD_KINDS: [usize; 4] = [0, 2, 3, 5];
/// Eight primitives at weight 1 each, composed at weight 3.
const DOMAIN_WEIGHTS: [f64; 9] = [1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 3.0];
const OP_WEIGHTS: [f64; 3] = [3.0, 2.0, 2.0];

/// Samples a generator domain: each primitive with probability 1/11, a
/// two-child Boolean composition with probability 3/11.
pub fn sample_domain(rng: &mut RngStream) -> Domain {
    let k = rng.weighted_index(&DOMAIN_WEIGHTS);
    if k < 8 {
        return Domain::Primitive(sample_primitive(k, rng));
    }
    let op = [BoolOp::Union, BoolOp::Intersection, BoolOp::Difference][rng.weighted_index(&OP_WEIGHTS)];
    let da = sample_primitive(CHILD_KINDS[rng.index(4)], rng);
    let db = sample_primitive(CHILD_KINDS[rng.index(4)], rng);
    let ra = rng.range(0.0, TAU);
    let rb = rng.range(0.0, TAU);
    let separation = rng.range(0.15, 0.55);
    let dir = rng.unit_vector();
    Domain::composed(
        op,
        Placed {
            domain: Domain::Primitive(da),
            rotation: ra,
            offset: dir * (0.5 * separation),
        },
        Placed {
            domain: Domain::Primitive(db),
            rotation: rb,
            offset: dir * (-0.5 * separation),
        },
    )
}
