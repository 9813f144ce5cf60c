//! Implicit planar domains.
//!
//! Signed distances are positive inside. Every primitive below is exact on
//! the interior except the ellipse, whose normalized approximation
//! `(1 - |x / r|) * min(rx, ry)` never overestimates; Boolean compositions are
//! conservative by construction.

mod record;
mod sampling;

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use thiserror::Error;

use crate::vec2::Vec2;

pub use record::DomainRecord;
pub use sampling::{
    count_interior_hits, sample_boundary, sample_domain, sample_interior, InteriorSample,
};

/// Boundary tolerance accepted by [`Domain::project_to_boundary`].
pub const PROJECTION_TOL: f64 = 1e-6;
const PROJECTION_MAX_ITERS: usize = 64;
const GRADIENT_STEP: f64 = 1e-5;
const COMPOSED_BBOX_PAD: f64 = 0.05;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("boundary projection did not converge (|sdf| = {residual:e} after {iterations} iterations)")]
    ProjectionDidNotConverge { residual: f64, iterations: usize },
    #[error("no interior point found in {proposals} proposals")]
    EmptyDomain { proposals: usize },
    #[error("parameter `{name}` = {value} outside [{lo}, {hi}] for {kind}")]
    ParameterOutOfRange {
        kind: &'static str,
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("malformed domain record: {0}")]
    Malformed(String),
}

/// Axis-aligned bounding box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Aabb {
    pub min: Vec2,
    pub max: Vec2,
}

impl Aabb {
    pub fn symmetric(hx: f64, hy: f64) -> Self {
        Self {
            min: Vec2::new(-hx, -hy),
            max: Vec2::new(hx, hy),
        }
    }

    pub fn union(self, o: Aabb) -> Aabb {
        Aabb {
            min: Vec2::new(self.min.x.min(o.min.x), self.min.y.min(o.min.y)),
            max: Vec2::new(self.max.x.max(o.max.x), self.max.y.max(o.max.y)),
        }
    }

    pub fn pad(self, d: f64) -> Aabb {
        Aabb {
            min: self.min - Vec2::new(d, d),
            max: self.max + Vec2::new(d, d),
        }
    }

    /// Box of the image of `self` under rotation then translation.
    pub fn transformed(self, rotation: f64, offset: Vec2) -> Aabb {
        let corners = [
            self.min,
            Vec2::new(self.max.x, self.min.y),
            self.max,
            Vec2::new(self.min.x, self.max.y),
        ];
        let mut out = Aabb {
            min: Vec2::new(f64::INFINITY, f64::INFINITY),
            max: Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        };
        for c in corners {
            let p = c.rotate(rotation) + offset;
            out.min = Vec2::new(out.min.x.min(p.x), out.min.y.min(p.y));
            out.max = Vec2::new(out.max.x.max(p.x), out.max.y.max(p.y));
        }
        out
    }

    pub fn contains(&self, p: Vec2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn area(&self) -> f64 {
        (self.max.x - self.min.x) * (self.max.y - self.min.y)
    }
}

/// Primitive shapes, all centred at the origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Primitive {
    Disk { radius: f64 },
    Square { half: f64 },
    /// Half-widths along x and y.
    Rectangle { a: f64, b: f64 },
    Ellipse { rx: f64, ry: f64 },
    Annulus { r_in: f64, r_out: f64 },
    /// Equilateral, circumradius `radius`, one vertex pointing up.
    Triangle { radius: f64 },
    /// Regular, circumradius `radius`, vertices on the x axis.
    Hexagon { radius: f64 },
    /// Capsule around the segment from `(-half_len, 0)` to `(half_len, 0)`.
    Stadium { half_len: f64, radius: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoolOp {
    Union,
    Intersection,
    Difference,
}

/// A child domain placed by rotation about the origin, then translation.
#[derive(Clone, Debug, PartialEq)]
pub struct Placed {
    pub domain: Domain,
    pub rotation: f64,
    pub offset: Vec2,
}

impl Placed {
    #[inline]
    fn to_local(&self, p: Vec2) -> Vec2 {
        (p - self.offset).rotate(-self.rotation)
    }

    #[inline]
    fn to_world(&self, p: Vec2) -> Vec2 {
        p.rotate(self.rotation) + self.offset
    }

    #[inline]
    fn sdf(&self, p: Vec2) -> f64 {
        self.domain.sdf(self.to_local(p))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Composed {
    pub op: BoolOp,
    pub children: [Placed; 2],
}

#[derive(Clone, Debug, PartialEq)]
pub enum Domain {
    Primitive(Primitive),
    Composed(Box<Composed>),
}

fn check_range(
    kind: &'static str,
    name: &'static str,
    value: f64,
    lo: f64,
    hi: f64,
) -> Result<(), GeometryError> {
    if (lo..=hi).contains(&value) {
        Ok(())
    } else {
        Err(GeometryError::ParameterOutOfRange {
            kind,
            name,
            value,
            lo,
            hi,
        })
    }
}

/// Vertices of a regular polygon, counter-clockwise.
fn polygon_vertices(sides: usize, radius: f64, first_angle: f64) -> Vec<Vec2> {
    (0..sides)
        .map(|k| Vec2::from_polar(radius, first_angle + TAU * k as f64 / sides as f64))
        .collect()
}

fn closest_on_segment(p: Vec2, a: Vec2, b: Vec2) -> Vec2 {
    let ab = b - a;
    let t = ((p - a).dot(ab) / ab.norm_sq()).clamp(0.0, 1.0);
    a + ab * t
}

impl Primitive {
    pub fn name(&self) -> &'static str {
        match self {
            Primitive::Disk { .. } => "disk",
            Primitive::Square { .. } => "square",
            Primitive::Rectangle { .. } => "rectangle",
            Primitive::Ellipse { .. } => "ellipse",
            Primitive::Annulus { .. } => "annulus",
            Primitive::Triangle { .. } => "triangle",
            Primitive::Hexagon { .. } => "hexagon",
            Primitive::Stadium { .. } => "stadium",
        }
    }

    /// Checks the parameter ranges used by the instance generator.
    pub fn validate(&self) -> Result<(), GeometryError> {
        let kind = self.name();
        match *self {
            Primitive::Disk { radius } => check_range(kind, "radius", radius, 1.0, 1.0),
            Primitive::Square { half } => check_range(kind, "half", half, 1.0, 1.0),
            Primitive::Rectangle { a, b } => {
                check_range(kind, "a", a, 0.6, 1.2)?;
                check_range(kind, "b", b, 0.6, 1.2)
            }
            Primitive::Ellipse { rx, ry } => {
                check_range(kind, "rx", rx, 0.6, 1.2)?;
                check_range(kind, "ry", ry, 0.6, 1.2)
            }
            Primitive::Annulus { r_in, r_out } => {
                check_range(kind, "r_in", r_in, 0.2, 0.6)?;
                check_range(kind, "r_out", r_out, 0.8, 1.4)
            }
            Primitive::Triangle { radius } | Primitive::Hexagon { radius } => {
                check_range(kind, "radius", radius, 0.6, 1.0)
            }
            Primitive::Stadium { half_len, radius } => {
                check_range(kind, "half_len", half_len, 0.2, 0.6)?;
                check_range(kind, "radius", radius, 0.25, 0.5)
            }
        }
    }

    /// `true` when the signed distance is exact inside the shape.
    pub fn is_exact(&self) -> bool {
        !matches!(self, Primitive::Ellipse { .. })
    }

    #[inline]
    pub fn sdf(&self, p: Vec2) -> f64 {
        match *self {
            Primitive::Disk { radius } => radius - p.norm(),
            Primitive::Square { half } => (half - p.x.abs()).min(half - p.y.abs()),
            Primitive::Rectangle { a, b } => (a - p.x.abs()).min(b - p.y.abs()),
            Primitive::Ellipse { rx, ry } => {
                (1.0 - (p.x / rx).hypot(p.y / ry)) * rx.min(ry)
            }
            Primitive::Annulus { r_in, r_out } => {
                let r = p.norm();
                (r_out - r).min(r - r_in)
            }
            Primitive::Triangle { radius } => regular_polygon_sdf(p, 3, radius, FRAC_PI_2),
            Primitive::Hexagon { radius } => regular_polygon_sdf(p, 6, radius, 0.0),
            Primitive::Stadium { half_len, radius } => {
                let qx = p.x.abs() - half_len;
                radius - Vec2::new(qx.max(0.0), p.y).norm()
            }
        }
    }

    pub fn bbox(&self) -> Aabb {
        match *self {
            Primitive::Disk { radius } => Aabb::symmetric(radius, radius),
            Primitive::Square { half } => Aabb::symmetric(half, half),
            Primitive::Rectangle { a, b } => Aabb::symmetric(a, b),
            Primitive::Ellipse { rx, ry } => Aabb::symmetric(rx, ry),
            Primitive::Annulus { r_out, .. } => Aabb::symmetric(r_out, r_out),
            Primitive::Triangle { radius } => {
                let v = polygon_vertices(3, radius, FRAC_PI_2);
                points_bbox(&v)
            }
            Primitive::Hexagon { radius } => {
                let v = polygon_vertices(6, radius, 0.0);
                points_bbox(&v)
            }
            Primitive::Stadium { half_len, radius } => {
                Aabb::symmetric(half_len + radius, radius)
            }
        }
    }

    /// Closed-form nearest boundary point, or `None` where no closed form is
    /// used (ellipse).
    pub fn closest_boundary_point(&self, p: Vec2) -> Option<Vec2> {
        Some(match *self {
            Primitive::Disk { radius } => radial(p, radius),
            Primitive::Square { half } => box_boundary(p, half, half),
            Primitive::Rectangle { a, b } => box_boundary(p, a, b),
            Primitive::Ellipse { .. } => return None,
            Primitive::Annulus { r_in, r_out } => {
                let r = p.norm();
                if (r_out - r).abs() <= (r - r_in).abs() {
                    radial(p, r_out)
                } else {
                    radial(p, r_in)
                }
            }
            Primitive::Triangle { radius } => {
                polygon_boundary(p, &polygon_vertices(3, radius, FRAC_PI_2))
            }
            Primitive::Hexagon { radius } => polygon_boundary(p, &polygon_vertices(6, radius, 0.0)),
            Primitive::Stadium { half_len, radius } => {
                let s = closest_on_segment(p, Vec2::new(-half_len, 0.0), Vec2::new(half_len, 0.0));
                let d = p - s;
                let n = d.norm();
                if n == 0.0 {
                    s + Vec2::new(0.0, radius)
                } else {
                    s + d * (radius / n)
                }
            }
        })
    }

    pub fn perimeter(&self) -> f64 {
        match *self {
            Primitive::Disk { radius } => TAU * radius,
            Primitive::Square { half } => 8.0 * half,
            Primitive::Rectangle { a, b } => 4.0 * (a + b),
            Primitive::Ellipse { rx, ry } => {
                // Ramanujan's second approximation.
                let h = ((rx - ry) / (rx + ry)).powi(2);
                PI * (rx + ry) * (1.0 + 3.0 * h / (10.0 + (4.0 - 3.0 * h).sqrt()))
            }
            Primitive::Annulus { r_in, r_out } => TAU * (r_in + r_out),
            Primitive::Triangle { radius } => 3.0 * radius * 3f64.sqrt(),
            Primitive::Hexagon { radius } => 6.0 * radius,
            Primitive::Stadium { half_len, radius } => 4.0 * half_len + TAU * radius,
        }
    }

    /// Exact area, used by sampling tests.
    pub fn area(&self) -> f64 {
        match *self {
            Primitive::Disk { radius } => PI * radius * radius,
            Primitive::Square { half } => 4.0 * half * half,
            Primitive::Rectangle { a, b } => 4.0 * a * b,
            Primitive::Ellipse { rx, ry } => PI * rx * ry,
            Primitive::Annulus { r_in, r_out } => PI * (r_out * r_out - r_in * r_in),
            Primitive::Triangle { radius } => 0.75 * 3f64.sqrt() * radius * radius,
            Primitive::Hexagon { radius } => 1.5 * 3f64.sqrt() * radius * radius,
            Primitive::Stadium { half_len, radius } => 4.0 * half_len * radius + PI * radius * radius,
        }
    }

    /// Point at arclength fraction `t` in [0, 1) along the boundary.
    pub fn boundary_point(&self, t: f64) -> Vec2 {
        let t = t.rem_euclid(1.0);
        match *self {
            Primitive::Disk { radius } => Vec2::from_polar(radius, TAU * t),
            Primitive::Square { half } => box_perimeter_point(half, half, t),
            Primitive::Rectangle { a, b } => box_perimeter_point(a, b, t),
            Primitive::Ellipse { rx, ry } => ellipse_arclength_point(rx, ry, t),
            Primitive::Annulus { r_in, r_out } => {
                let split = r_out / (r_in + r_out);
                if t < split {
                    Vec2::from_polar(r_out, TAU * t / split)
                } else {
                    Vec2::from_polar(r_in, TAU * (t - split) / (1.0 - split))
                }
            }
            Primitive::Triangle { radius } => {
                polyline_point(&polygon_vertices(3, radius, FRAC_PI_2), t)
            }
            Primitive::Hexagon { radius } => polyline_point(&polygon_vertices(6, radius, 0.0), t),
            Primitive::Stadium { half_len, radius } => {
                let total = self.perimeter();
                let mut s = t * total;
                let straight = 2.0 * half_len;
                let arc = PI * radius;
                if s < straight {
                    return Vec2::new(-half_len + s, -radius);
                }
                s -= straight;
                if s < arc {
                    return Vec2::new(half_len, 0.0)
                        + Vec2::from_polar(radius, -FRAC_PI_2 + s / radius);
                }
                s -= arc;
                if s < straight {
                    return Vec2::new(half_len - s, radius);
                }
                s -= straight;
                Vec2::new(-half_len, 0.0) + Vec2::from_polar(radius, FRAC_PI_2 + s / radius)
            }
        }
    }
}

fn points_bbox(v: &[Vec2]) -> Aabb {
    let mut b = Aabb {
        min: v[0],
        max: v[0],
    };
    for &p in &v[1..] {
        b.min = Vec2::new(b.min.x.min(p.x), b.min.y.min(p.y));
        b.max = Vec2::new(b.max.x.max(p.x), b.max.y.max(p.y));
    }
    b
}

#[inline]
fn regular_polygon_sdf(p: Vec2, sides: usize, radius: f64, first_vertex: f64) -> f64 {
    let apothem = radius * (PI / sides as f64).cos();
    let mut d = f64::INFINITY;
    for k in 0..sides {
        // Edge k sits between vertices k and k+1; its normal bisects them.
        let ang = first_vertex + TAU * (k as f64 + 0.5) / sides as f64;
        let (s, c) = ang.sin_cos();
        d = d.min(apothem - (c * p.x + s * p.y));
    }
    d
}

fn radial(p: Vec2, radius: f64) -> Vec2 {
    let r = p.norm();
    if r == 0.0 {
        Vec2::new(radius, 0.0)
    } else {
        p * (radius / r)
    }
}

fn box_boundary(p: Vec2, a: f64, b: f64) -> Vec2 {
    let inside = p.x.abs() <= a && p.y.abs() <= b;
    if !inside {
        return Vec2::new(p.x.clamp(-a, a), p.y.clamp(-b, b));
    }
    if a - p.x.abs() <= b - p.y.abs() {
        Vec2::new(a.copysign(p.x), p.y)
    } else {
        Vec2::new(p.x, b.copysign(p.y))
    }
}

fn polygon_boundary(p: Vec2, verts: &[Vec2]) -> Vec2 {
    let mut best = verts[0];
    let mut best_d = f64::INFINITY;
    for k in 0..verts.len() {
        let q = closest_on_segment(p, verts[k], verts[(k + 1) % verts.len()]);
        let d = (q - p).norm_sq();
        if d < best_d {
            best_d = d;
            best = q;
        }
    }
    best
}

fn box_perimeter_point(a: f64, b: f64, t: f64) -> Vec2 {
    let corners = [
        Vec2::new(-a, -b),
        Vec2::new(a, -b),
        Vec2::new(a, b),
        Vec2::new(-a, b),
    ];
    polyline_point(&corners, t)
}

/// Arclength-parametrized point on a closed polygon.
fn polyline_point(verts: &[Vec2], t: f64) -> Vec2 {
    let n = verts.len();
    let lens: Vec<f64> = (0..n).map(|k| verts[k].distance(verts[(k + 1) % n])).collect();
    let total: f64 = lens.iter().sum();
    let mut s = t * total;
    for k in 0..n {
        if s <= lens[k] || k == n - 1 {
            let a = verts[k];
            let b = verts[(k + 1) % n];
            return a + (b - a) * (s / lens[k]).min(1.0);
        }
        s -= lens[k];
    }
    unreachable!()
}

fn ellipse_arclength_point(rx: f64, ry: f64, t: f64) -> Vec2 {
    // Invert the arclength numerically on a fine table of the parameter.
    const STEPS: usize = 2048;
    let speed = |th: f64| (rx * th.sin()).hypot(ry * th.cos());
    let h = TAU / STEPS as f64;
    let mut cum = Vec::with_capacity(STEPS + 1);
    cum.push(0.0);
    for k in 0..STEPS {
        let a = k as f64 * h;
        let s = (speed(a) + 4.0 * speed(a + 0.5 * h) + speed(a + h)) * h / 6.0;
        cum.push(cum[k] + s);
    }
    let target = t * cum[STEPS];
    let k = cum.partition_point(|&c| c < target).clamp(1, STEPS);
    let frac = (target - cum[k - 1]) / (cum[k] - cum[k - 1]).max(f64::MIN_POSITIVE);
    let th = (k as f64 - 1.0 + frac) * h;
    Vec2::new(rx * th.cos(), ry * th.sin())
}

impl Domain {
    pub fn disk(radius: f64) -> Self {
        Domain::Primitive(Primitive::Disk { radius })
    }

    pub fn composed(op: BoolOp, a: Placed, b: Placed) -> Self {
        Domain::Composed(Box::new(Composed {
            op,
            children: [a, b],
        }))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Domain::Primitive(p) => p.name(),
            Domain::Composed(_) => "composed",
        }
    }

    pub fn is_composed(&self) -> bool {
        matches!(self, Domain::Composed(_))
    }

    /// Signed distance, positive inside.
    #[inline]
    pub fn sdf(&self, p: Vec2) -> f64 {
        match self {
            Domain::Primitive(prim) => prim.sdf(p),
            Domain::Composed(c) => {
                let a = c.children[0].sdf(p);
                let b = c.children[1].sdf(p);
                combine(c.op, a, b)
            }
        }
    }

    #[inline]
    pub fn contains(&self, p: Vec2) -> bool {
        self.sdf(p) > 0.0
    }

    pub fn bbox(&self) -> Aabb {
        match self {
            Domain::Primitive(prim) => prim.bbox(),
            Domain::Composed(c) => {
                let [a, b] = &c.children;
                a.domain
                    .bbox()
                    .transformed(a.rotation, a.offset)
                    .union(b.domain.bbox().transformed(b.rotation, b.offset))
                    .pad(COMPOSED_BBOX_PAD)
            }
        }
    }

    /// Central-difference gradient of the signed distance.
    pub fn sdf_gradient(&self, p: Vec2) -> Vec2 {
        let h = GRADIENT_STEP;
        let dx = self.sdf(p + Vec2::new(h, 0.0)) - self.sdf(p - Vec2::new(h, 0.0));
        let dy = self.sdf(p + Vec2::new(0.0, h)) - self.sdf(p - Vec2::new(0.0, h));
        Vec2::new(dx, dy) * (0.5 / h)
    }

    /// Nearest (or near-nearest) point with `|sdf| <= 1e-6`.
    pub fn project_to_boundary(&self, p: Vec2) -> Result<Vec2, GeometryError> {
        if let Domain::Primitive(prim) = self {
            if let Some(q) = prim.closest_boundary_point(p) {
                return Ok(q);
            }
        }
        self.project_iteratively(p)
    }

    fn project_iteratively(&self, start: Vec2) -> Result<Vec2, GeometryError> {
        let mut p = start;
        let mut s = self.sdf(p);
        for _ in 0..PROJECTION_MAX_ITERS {
            if s.abs() <= PROJECTION_TOL {
                return Ok(p);
            }
            let g = self.sdf_gradient(p);
            let g2 = g.norm_sq();
            if !(g2 > 1e-12) || !g2.is_finite() {
                break;
            }
            p = p - g * (s / g2);
            s = self.sdf(p);
        }
        if s.abs() <= PROJECTION_TOL {
            Ok(p)
        } else {
            Err(GeometryError::ProjectionDidNotConverge {
                residual: s.abs(),
                iterations: PROJECTION_MAX_ITERS,
            })
        }
    }

    /// Rough perimeter; exact for primitives, a sum over children otherwise.
    pub fn perimeter(&self) -> f64 {
        match self {
            Domain::Primitive(p) => p.perimeter(),
            Domain::Composed(c) => c.children.iter().map(|ch| ch.domain.perimeter()).sum(),
        }
    }

    /// Deterministic, arclength-uniform boundary points of a primitive.
    /// Composed domains return the child points that lie on the composed
    /// boundary, so fewer than `n` may come back.
    pub fn boundary_points(&self, n: usize) -> Vec<Vec2> {
        match self {
            Domain::Primitive(p) => (0..n).map(|k| p.boundary_point(k as f64 / n as f64)).collect(),
            Domain::Composed(c) => {
                let total = self.perimeter();
                let mut out = Vec::new();
                for (i, child) in c.children.iter().enumerate() {
                    let m = ((n as f64) * child.domain.perimeter() / total).ceil() as usize;
                    for q in child.domain.boundary_points(m) {
                        let w = child.to_world(q);
                        if c.on_boundary_of_child(i, w) {
                            out.push(w);
                        }
                    }
                }
                out
            }
        }
    }
}

#[inline]
fn combine(op: BoolOp, a: f64, b: f64) -> f64 {
    match op {
        BoolOp::Union => a.max(b),
        BoolOp::Intersection => a.min(b),
        BoolOp::Difference => a.min(-b),
    }
}

impl Composed {
    /// Whether a point on the boundary of child `i` lies on the composed boundary.
    fn on_boundary_of_child(&self, i: usize, w: Vec2) -> bool {
        let other = self.children[1 - i].sdf(w);
        match (self.op, i) {
            (BoolOp::Union, _) => other <= 0.0,
            (BoolOp::Intersection, _) => other >= 0.0,
            (BoolOp::Difference, 0) => other <= 0.0,
            (BoolOp::Difference, _) => other >= 0.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    fn disk_at(x: f64) -> Placed {
        Placed {
            domain: Domain::disk(1.0),
            rotation: 0.0,
            offset: Vec2::new(x, 0.0),
        }
    }

    fn all_primitives() -> Vec<Primitive> {
        vec![
            Primitive::Disk { radius: 1.0 },
            Primitive::Square { half: 1.0 },
            Primitive::Rectangle { a: 0.7, b: 1.1 },
            Primitive::Ellipse { rx: 1.2, ry: 0.65 },
            Primitive::Annulus { r_in: 0.4, r_out: 1.0 },
            Primitive::Triangle { radius: 0.9 },
            Primitive::Hexagon { radius: 0.8 },
            Primitive::Stadium { half_len: 0.5, radius: 0.3 },
        ]
    }

    #[test]
    fn sdf_examples() {
        assert_eq!(Domain::disk(1.0).sdf(Vec2::ZERO), 1.0);
        let ann = Primitive::Annulus { r_in: 0.4, r_out: 1.0 };
        assert!((ann.sdf(Vec2::from_polar(0.7, 1.3)) - 0.3).abs() < 1e-12);
        let u = Domain::composed(BoolOp::Union, disk_at(0.3), disk_at(-0.3));
        assert!((u.sdf(Vec2::ZERO) - 0.7).abs() < 1e-12);
    }

    #[test]
    fn composition_algebra_is_pointwise() {
        let a = disk_at(0.3);
        let b = Placed {
            domain: Domain::Primitive(Primitive::Rectangle { a: 0.6, b: 0.9 }),
            rotation: 0.4,
            offset: Vec2::new(-0.2, 0.1),
        };
        let mut rng = RngStream::from_seed(11);
        for op in [BoolOp::Union, BoolOp::Intersection, BoolOp::Difference] {
            let d = Domain::composed(op, a.clone(), b.clone());
            for _ in 0..200 {
                let p = Vec2::new(rng.range(-2.0, 2.0), rng.range(-2.0, 2.0));
                let (sa, sb) = (a.sdf(p), b.sdf(p));
                let want = match op {
                    BoolOp::Union => sa.max(sb),
                    BoolOp::Intersection => sa.min(sb),
                    BoolOp::Difference => sa.min(-sb),
                };
                assert_eq!(d.sdf(p), want);
            }
        }
    }

    #[test]
    fn closed_form_projections() {
        let d = Domain::disk(1.0);
        assert_eq!(d.project_to_boundary(Vec2::new(0.5, 0.0)).unwrap(), Vec2::new(1.0, 0.0));
        let sq = Domain::Primitive(Primitive::Square { half: 1.0 });
        let q = sq.project_to_boundary(Vec2::new(0.9, 0.2)).unwrap();
        assert!((q - Vec2::new(1.0, 0.2)).norm() < 1e-15);
    }

    #[test]
    fn projections_land_on_boundary() {
        let mut rng = RngStream::from_seed(5);
        let diff = Domain::composed(BoolOp::Difference, disk_at(0.0), {
            let mut p = disk_at(0.45);
            p.domain = Domain::Primitive(Primitive::Ellipse { rx: 0.6, ry: 0.7 });
            p
        });
        let mut domains: Vec<Domain> = all_primitives().into_iter().map(Domain::Primitive).collect();
        domains.push(diff);
        for d in &domains {
            let pts = sample_interior(d, &mut rng, 300).unwrap().points;
            let bnd = d.boundary_points(4096);
            for p in pts {
                let q = d.project_to_boundary(p).unwrap();
                assert!(d.sdf(q).abs() <= PROJECTION_TOL, "{} at {p:?}", d.name());
                // Nearest-ish: within twice the true distance, which is at
                // least the conservative sdf and at most the brute-force one.
                let brute = bnd
                    .iter()
                    .map(|b| b.distance(p))
                    .fold(f64::INFINITY, f64::min);
                assert!(q.distance(p) <= 2.0 * brute + 1e-3, "{}", d.name());
            }
        }
    }

    #[test]
    fn exact_primitives_match_brute_force() {
        let mut rng = RngStream::from_seed(8);
        for prim in all_primitives() {
            let d = Domain::Primitive(prim);
            let bnd = d.boundary_points(4096);
            for p in sample_interior(&d, &mut rng, 200).unwrap().points {
                let brute = bnd.iter().map(|b| b.distance(p)).fold(f64::INFINITY, f64::min);
                let s = d.sdf(p);
                if prim.is_exact() {
                    assert!((s - brute).abs() <= 1e-3, "{} {p:?}: {s} vs {brute}", prim.name());
                } else {
                    assert!(s <= brute + 1e-3);
                }
            }
        }
    }

    #[test]
    fn bbox_contains_nonnegative_set() {
        let mut rng = RngStream::from_seed(21);
        for _ in 0..50 {
            let d = sample_domain(&mut rng);
            let b = d.bbox();
            for _ in 0..400 {
                let p = Vec2::new(rng.range(-3.0, 3.0), rng.range(-3.0, 3.0));
                if d.sdf(p) >= 0.0 {
                    assert!(b.contains(p), "{:?}", d.name());
                }
            }
        }
    }

    #[test]
    fn boundary_points_lie_on_boundary() {
        for prim in all_primitives() {
            let d = Domain::Primitive(prim);
            for q in d.boundary_points(257) {
                assert!(d.sdf(q).abs() < 1e-9, "{} {q:?} {}", prim.name(), d.sdf(q));
            }
            let sum: f64 = {
                let pts = d.boundary_points(1000);
                (0..pts.len()).map(|k| pts[k].distance(pts[(k + 1) % pts.len()])).sum()
            };
            if !matches!(prim, Primitive::Annulus { .. }) {
                assert!((sum - prim.perimeter()).abs() / prim.perimeter() < 1e-3, "{}", prim.name());
            }
        }
    }

    #[test]
    fn validate_ranges() {
        assert!(Primitive::Rectangle { a: 0.8, b: 1.0 }.validate().is_ok());
        assert!(matches!(
            Primitive::Rectangle { a: 0.5, b: 1.0 }.validate(),
            Err(GeometryError::ParameterOutOfRange { name: "a", .. })
        ));
    }
}
