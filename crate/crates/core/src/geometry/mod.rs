//! Object families and closed/open intersection predicates.
//!
//! Every predicate is derived from a single signed [`separation`] value:
//! positive means the closed sets are apart, zero means they touch, negative
//! means they overlap. Closed intersection is `separation <= eta`; interiors
//! meet when `separation < -eta`.

mod sat;

use std::f64::consts::{FRAC_PI_2, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use sat::V2;

/// Comparison slack for every geometric predicate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub eta: f64,
}

impl Tolerance {
    pub const DEFAULT_ETA: f64 = 1e-9;

    pub fn new(eta: f64) -> Result<Self> {
        if !(eta.is_finite() && eta > 0.0) {
            return Err(Error::InvalidParams(format!("tolerance must be > 0, got {eta}")));
        }
        Ok(Tolerance { eta })
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { eta: Self::DEFAULT_ETA }
    }
}

/// A point in R^d, d >= 2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::InvalidShape(format!(
                "points need at least 2 coordinates, got {}",
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidShape("non-finite coordinate".into()));
        }
        Ok(Point(coords))
    }

    pub fn origin(d: usize) -> Self {
        Point(vec![0.0; d.max(2)])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn distance(&self, other: &Point) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    fn xy(&self) -> V2 {
        [self.0[0], self.0[1]]
    }
}

impl From<[f64; 2]> for Point {
    fn from(c: [f64; 2]) -> Self {
        Point(c.to_vec())
    }
}

impl From<[f64; 3]> for Point {
    fn from(c: [f64; 3]) -> Self {
        Point(c.to_vec())
    }
}

/// One geometric object.
///
/// `Box` is a hyper-cube of edge `side`, rotated by `angle` in the x1-x2
/// plane and axis-parallel in every other coordinate. `Polygon` is a regular
/// k-gon (2-D only); at `angle = 0` one vertex points along +x2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "lowercase")]
pub enum Shape {
    Ball {
        center: Point,
        radius: f64,
    },
    Box {
        center: Point,
        side: f64,
        #[serde(default)]
        angle: f64,
    },
    Polygon {
        center: Point,
        k: u32,
        circumradius: f64,
        #[serde(default)]
        angle: f64,
    },
}

impl Shape {
    pub fn ball(center: impl Into<Point>, radius: f64) -> Result<Self> {
        let s = Shape::Ball { center: center.into(), radius };
        s.validate()?;
        Ok(s)
    }

    pub fn cube(center: impl Into<Point>, side: f64, angle: f64) -> Result<Self> {
        let s = Shape::Box { center: center.into(), side, angle };
        s.validate()?;
        Ok(s)
    }

    pub fn polygon(center: impl Into<Point>, k: u32, circumradius: f64, angle: f64) -> Result<Self> {
        let s = Shape::Polygon { center: center.into(), k, circumradius, angle };
        s.validate()?;
        Ok(s)
    }

    pub fn unit_disk(x: f64, y: f64) -> Self {
        Shape::Ball { center: Point(vec![x, y]), radius: 1.0 }
    }

    /// Apex-up fixed-oriented triangle with circumradius 1.
    pub fn unit_triangle(x: f64, y: f64) -> Self {
        Shape::Polygon { center: Point(vec![x, y]), k: 3, circumradius: 1.0, angle: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        let center = self.center();
        if center.dim() < 2 || center.0.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidShape("center must be a finite point with d >= 2".into()));
        }
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidShape(format!("{name} must be > 0, got {v}")))
            }
        };
        match self {
            Shape::Ball { radius, .. } => positive("radius", *radius),
            Shape::Box { side, angle, .. } => {
                positive("side", *side)?;
                if !angle.is_finite() {
                    return Err(Error::InvalidShape("angle must be finite".into()));
                }
                Ok(())
            }
            Shape::Polygon { k, circumradius, angle, center } => {
                positive("circumradius", *circumradius)?;
                if *k < 3 {
                    return Err(Error::InvalidShape(format!("polygon needs k >= 3, got {k}")));
                }
                if center.dim() != 2 {
                    return Err(Error::InvalidShape("polygons live in the plane".into()));
                }
                if !angle.is_finite() {
                    return Err(Error::InvalidShape("angle must be finite".into()));
                }
                Ok(())
            }
        }
    }

    pub fn center(&self) -> &Point {
        match self {
            Shape::Ball { center, .. } | Shape::Box { center, .. } | Shape::Polygon { center, .. } => center,
        }
    }

    fn center_mut(&mut self) -> &mut Point {
        match self {
            Shape::Ball { center, .. } | Shape::Box { center, .. } | Shape::Polygon { center, .. } => center,
        }
    }

    pub fn dimension(&self) -> usize {
        self.center().dim()
    }

    /// Planar rotation angle; zero for balls.
    pub fn angle(&self) -> f64 {
        match self {
            Shape::Ball { .. } => 0.0,
            Shape::Box { angle, .. } | Shape::Polygon { angle, .. } => *angle,
        }
    }

    pub fn with_angle(&self, new_angle: f64) -> Shape {
        let mut s = self.clone();
        match &mut s {
            Shape::Ball { .. } => {}
            Shape::Box { angle, .. } | Shape::Polygon { angle, .. } => *angle = new_angle,
        }
        s
    }

    pub fn with_center(&self, c: Point) -> Result<Shape> {
        if c.dim() != self.dimension() {
            return Err(Error::DimensionMismatch { expected: self.dimension(), found: c.dim() });
        }
        let mut s = self.clone();
        *s.center_mut() = c;
        Ok(s)
    }

    /// Replace a single center coordinate.
    pub fn with_coordinate(&self, axis: usize, value: f64) -> Shape {
        let mut s = self.clone();
        s.center_mut().0[axis] = value;
        s
    }

    /// Same object embedded one dimension higher with `value` as the new last
    /// coordinate. Only boxes and balls lift.
    pub fn lifted(&self, value: f64) -> Result<Shape> {
        if let Shape::Polygon { .. } = self {
            return Err(Error::UnsupportedPair("polygons cannot be lifted above d = 2".into()));
        }
        let mut s = self.clone();
        s.center_mut().0.push(value);
        Ok(s)
    }

    /// Vertices of the x1-x2 cross-section for boxes and polygons, counter-clockwise.
    fn planar_vertices(&self) -> Option<Vec<V2>> {
        match self {
            Shape::Ball { .. } => None,
            Shape::Box { center, side, angle } => {
                let h = side / 2.0;
                let (s, c) = angle.sin_cos();
                let [cx, cy] = center.xy();
                Some(
                    [[-h, -h], [h, -h], [h, h], [-h, h]]
                        .iter()
                        .map(|[x, y]| [cx + c * x - s * y, cy + s * x + c * y])
                        .collect(),
                )
            }
            Shape::Polygon { center, k, circumradius, angle } => {
                let [cx, cy] = center.xy();
                Some(
                    (0..*k)
                        .map(|i| {
                            let t = FRAC_PI_2 + angle + TAU * i as f64 / *k as f64;
                            [cx + circumradius * t.cos(), cy + circumradius * t.sin()]
                        })
                        .collect(),
                )
            }
        }
    }

    /// Radius of a ball centered at `center()` that contains the shape.
    pub fn bounding_radius(&self) -> f64 {
        match self {
            Shape::Ball { radius, .. } => *radius,
            Shape::Box { side, center, .. } => side / 2.0 * (center.dim() as f64).sqrt(),
            Shape::Polygon { circumradius, .. } => *circumradius,
        }
    }
}

pub fn translate(s: &Shape, v: &[f64]) -> Result<Shape> {
    if v.len() != s.dimension() {
        return Err(Error::DimensionMismatch { expected: s.dimension(), found: v.len() });
    }
    let mut out = s.clone();
    for (c, dv) in out.center_mut().0.iter_mut().zip(v) {
        *c += dv;
    }
    Ok(out)
}

/// Signed separation between two shapes. Ball pairs measure the Euclidean
/// gap; planar convex pairs use the separating-axis gap (or the signed
/// center-to-polygon distance for polygon/disk); boxes in d >= 3 combine the
/// planar gap with the interval gaps of the remaining axes.
pub fn separation(a: &Shape, b: &Shape) -> Result<f64> {
    if a.dimension() != b.dimension() {
        return Err(Error::DimensionMismatch { expected: a.dimension(), found: b.dimension() });
    }
    let d = a.dimension();
    match (a, b) {
        (Shape::Ball { center: ca, radius: ra }, Shape::Ball { center: cb, radius: rb }) => {
            Ok(ca.distance(cb) - ra - rb)
        }
        (Shape::Box { center: ca, side: sa, .. }, Shape::Box { center: cb, side: sb, .. }) if d > 2 => {
            let planar = sat::sat_gap(&a.planar_vertices().unwrap(), &b.planar_vertices().unwrap());
            let half = (sa + sb) / 2.0;
            let axial = ca.0[2..]
                .iter()
                .zip(&cb.0[2..])
                .map(|(x, y)| (x - y).abs() - half)
                .fold(f64::NEG_INFINITY, f64::max);
            Ok(planar.max(axial))
        }
        (Shape::Ball { center, radius }, other) | (other, Shape::Ball { center, radius }) if d == 2 => {
            let poly = other.planar_vertices().expect("non-ball planar shape");
            Ok(sat::signed_distance(center.xy(), &poly) - radius)
        }
        _ if d == 2 => Ok(sat::sat_gap(&a.planar_vertices().unwrap(), &b.planar_vertices().unwrap())),
        _ => Err(Error::UnsupportedPair(format!(
            "{} x {} in d = {d}",
            a.variant_name(),
            b.variant_name()
        ))),
    }
}

impl Shape {
    pub fn variant_name(&self) -> &'static str {
        match self {
            Shape::Ball { .. } => "ball",
            Shape::Box { .. } => "box",
            Shape::Polygon { .. } => "polygon",
        }
    }
}

/// Closed-set intersection: touching counts.
pub fn intersects(a: &Shape, b: &Shape, tol: Tolerance) -> Result<bool> {
    Ok(separation(a, b)? <= tol.eta)
}

/// Open-set intersection: the two objects share interior points.
pub fn interiors_intersect(a: &Shape, b: &Shape, tol: Tolerance) -> Result<bool> {
    Ok(separation(a, b)? < -tol.eta)
}
