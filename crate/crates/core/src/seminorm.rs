//! The control body `U` in the plane `p`, its gauge `F` (Minkowski
//! functional) and support function `F_U`.
//!
//! Coordinates are taken in the canonical `(e1, e2)` frame unless a caller
//! converts them. Bodies need not be symmetric.

use std::fmt;

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::TOL;

/// Direction `s = ±1` of an abnormal one-parameter subgroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+1")]
    Plus,
    #[serde(rename = "-1")]
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// Body description as it appears in job configs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BodyShape {
    /// Vertices in counterclockwise order.
    Polygon(Vec<[f64; 2]>),
    /// `{c + S^{1/2} z : |z| <= 1}` with `S` symmetric positive definite.
    Ellipse { center: [f64; 2], matrix: [[f64; 2]; 2] },
    Disk { center: [f64; 2], radius: f64 },
}

#[derive(Clone, Debug, PartialEq)]
enum Geometry {
    /// Outward edge normals `n_i` with offsets `h_i = n_i . v_i > 0`.
    Polygon {
        vertices: Vec<[f64; 2]>,
        normals: Vec<[f64; 2]>,
        offsets: Vec<f64>,
    },
    Quadric {
        center: [f64; 2],
        s: Matrix2<f64>,
        p: Matrix2<f64>,
    },
}

/// A validated convex body with the origin in its interior.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BodyShape", into = "BodyShape")]
pub struct SeminormBody {
    shape: BodyShape,
    geom: Geometry,
}

impl TryFrom<BodyShape> for SeminormBody {
    type Error = Error;

    fn try_from(shape: BodyShape) -> Result<Self> {
        SeminormBody::new(shape)
    }
}

impl From<SeminormBody> for BodyShape {
    fn from(b: SeminormBody) -> Self {
        b.shape
    }
}

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn finite(xs: &[f64]) -> bool {
    xs.iter().all(|x| x.is_finite())
}

fn quadratic_form(m: &Matrix2<f64>, a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * (m[(0, 0)] * b[0] + m[(0, 1)] * b[1]) + a[1] * (m[(1, 0)] * b[0] + m[(1, 1)] * b[1])
}

impl SeminormBody {
    pub fn new(shape: BodyShape) -> Result<Self> {
        let (shape, geom) = match shape {
            BodyShape::Polygon(vertices) => Self::polygon_geometry(vertices)?,
            BodyShape::Ellipse { center, matrix } => {
                let s = Matrix2::new(matrix[0][0], matrix[0][1], matrix[1][0], matrix[1][1]);
                let geom = Self::quadric_geometry(center, s)?;
                (BodyShape::Ellipse { center, matrix }, geom)
            }
            BodyShape::Disk { center, radius } => {
                if !(radius.is_finite() && radius > 0.0) {
                    return Err(Error::InvalidBody(format!("radius {radius} must be positive")));
                }
                let geom = Self::quadric_geometry(center, Matrix2::identity() * (radius * radius))?;
                (BodyShape::Disk { center, radius }, geom)
            }
        };
        Ok(SeminormBody { shape, geom })
    }

    pub fn unit_disk() -> Self {
        Self::disk([0.0, 0.0], 1.0).expect("unit disk is valid")
    }

    pub fn disk(center: [f64; 2], radius: f64) -> Result<Self> {
        Self::new(BodyShape::Disk { center, radius })
    }

    pub fn ellipse(center: [f64; 2], matrix: [[f64; 2]; 2]) -> Result<Self> {
        Self::new(BodyShape::Ellipse { center, matrix })
    }

    pub fn polygon(vertices: Vec<[f64; 2]>) -> Result<Self> {
        Self::new(BodyShape::Polygon(vertices))
    }

    /// The square `[-h, h]^2`.
    pub fn square(h: f64) -> Result<Self> {
        Self::polygon(vec![[h, -h], [h, h], [-h, h], [-h, -h]])
    }

    fn polygon_geometry(mut vertices: Vec<[f64; 2]>) -> Result<(BodyShape, Geometry)> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::InvalidBody(format!("polygon needs at least 3 vertices, got {n}")));
        }
        if vertices.iter().any(|v| !finite(v)) {
            return Err(Error::InvalidBody("non-finite vertex".into()));
        }
        let area2: f64 = (0..n).map(|i| cross(vertices[i], vertices[(i + 1) % n])).sum();
        if area2 < 0.0 {
            vertices.reverse();
        }
        let scale = vertices.iter().fold(0.0f64, |m, v| m.max(v[0].abs()).max(v[1].abs()));
        let mut normals = Vec::with_capacity(n);
        let mut offsets = Vec::with_capacity(n);
        for i in 0..n {
            let (a, b, c) = (vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]);
            let d1 = [b[0] - a[0], b[1] - a[1]];
            let d2 = [c[0] - b[0], c[1] - b[1]];
            if cross(d1, d2) <= 1e-12 * scale * scale {
                return Err(Error::InvalidBody("polygon is not strictly convex".into()));
            }
            let normal = [d1[1], -d1[0]];
            let h = dot(normal, a);
            let len = dot(normal, normal).sqrt();
            if h <= TOL * len.max(1.0) {
                return Err(Error::InvalidBody("origin is not interior to the polygon".into()));
            }
            normals.push(normal);
            offsets.push(h);
        }
        Ok((
            BodyShape::Polygon(vertices.clone()),
            Geometry::Polygon {
                vertices,
                normals,
                offsets,
            },
        ))
    }

    fn quadric_geometry(center: [f64; 2], s: Matrix2<f64>) -> Result<Geometry> {
        if !finite(&center) || !s.iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidBody("non-finite ellipse data".into()));
        }
        let scale = s.abs().max().max(1.0);
        if (s[(0, 1)] - s[(1, 0)]).abs() > TOL * scale {
            return Err(Error::InvalidBody("ellipse matrix is not symmetric".into()));
        }
        let s = (s + s.transpose()) * 0.5;
        if !(s[(0, 0)] > 0.0 && s.determinant() > 0.0) {
            return Err(Error::InvalidBody("ellipse matrix is not positive definite".into()));
        }
        let p = s.try_inverse().ok_or_else(|| Error::InvalidBody("singular ellipse matrix".into()))?;
        if quadratic_form(&p, center, center) >= 1.0 - TOL {
            return Err(Error::InvalidBody("origin is not interior to the ellipse".into()));
        }
        Ok(Geometry::Quadric { center, s, p })
    }

    pub fn shape(&self) -> &BodyShape {
        &self.shape
    }

    pub fn is_polygon(&self) -> bool {
        matches!(self.geom, Geometry::Polygon { .. })
    }

    /// `F(v) = inf {l > 0 : v / l in U}`.
    pub fn gauge(&self, v: [f64; 2]) -> f64 {
        if v == [0.0, 0.0] {
            return 0.0;
        }
        match &self.geom {
            Geometry::Polygon { normals, offsets, .. } => normals
                .iter()
                .zip(offsets)
                .map(|(n, h)| dot(*n, v) / h)
                .fold(f64::NEG_INFINITY, f64::max),
            Geometry::Quadric { center, p, .. } => {
                // Largest m with (m v - c)^T P (m v - c) = 1; F = 1/m.
                let a = quadratic_form(p, v, v);
                let b = quadratic_form(p, v, *center);
                let c = quadratic_form(p, *center, *center) - 1.0;
                let disc = (b * b - a * c).max(0.0);
                let m = (b + disc.sqrt()) / a;
                1.0 / m
            }
        }
    }

    /// `F_U(w) = max_{u in U} <w, u>`.
    pub fn support(&self, w: [f64; 2]) -> f64 {
        match &self.geom {
            Geometry::Polygon { vertices, .. } => vertices
                .iter()
                .map(|v| dot(*v, w))
                .fold(f64::NEG_INFINITY, f64::max),
            Geometry::Quadric { center, s, .. } => {
                dot(*center, w) + quadratic_form(s, w, w).max(0.0).sqrt()
            }
        }
    }

    /// Boundary point on the ray through `v`.
    pub fn radial_boundary(&self, v: [f64; 2]) -> [f64; 2] {
        let g = self.gauge(v);
        [v[0] / g, v[1] / g]
    }

    /// `(F_U(0, s), 1 / F(0, s))`.
    pub fn axis_values(&self, s: Sign) -> (f64, f64) {
        let sv = s.value();
        (self.support([0.0, sv]), 1.0 / self.gauge([0.0, sv]))
    }

    /// `F_U(0, s) = 1 / F(0, s)`: the extreme point of `U` in direction `s e2`
    /// lies on the `e2` axis.
    pub fn axis_condition(&self, s: Sign) -> bool {
        let (sup, inv) = self.axis_values(s);
        (sup - inv).abs() <= TOL * sup.max(1.0)
    }

    /// Distance from the origin to the boundary (exact for polygons, sampled
    /// for ellipses).
    pub fn inradius(&self) -> f64 {
        match &self.geom {
            Geometry::Polygon { normals, offsets, .. } => normals
                .iter()
                .zip(offsets)
                .map(|(n, h)| h / dot(*n, *n).sqrt())
                .fold(f64::INFINITY, f64::min),
            Geometry::Quadric { .. } => (0..3600)
                .map(|i| {
                    let t = i as f64 * std::f64::consts::TAU / 3600.0;
                    1.0 / self.gauge([t.cos(), t.sin()])
                })
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// The polar body `{w : <w, u> <= 1 for all u in U}`.
    pub fn polar(&self) -> Result<SeminormBody> {
        match &self.geom {
            Geometry::Polygon { normals, offsets, .. } => {
                let vertices = normals
                    .iter()
                    .zip(offsets)
                    .map(|(n, h)| [n[0] / h, n[1] / h])
                    .collect();
                SeminormBody::polygon(vertices)
            }
            Geometry::Quadric { .. } => Err(Error::WrongBodyKind("polygon")),
        }
    }

    /// Image under the linear map `a` (rows of a 2x2 matrix).
    pub fn linear_image(&self, a: [[f64; 2]; 2]) -> Result<SeminormBody> {
        let m = Matrix2::new(a[0][0], a[0][1], a[1][0], a[1][1]);
        if m.determinant().abs() <= 1e-14 {
            return Err(Error::NotInvertible);
        }
        let map = |v: [f64; 2]| [a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]];
        match &self.geom {
            Geometry::Polygon { vertices, .. } => {
                SeminormBody::polygon(vertices.iter().map(|v| map(*v)).collect())
            }
            Geometry::Quadric { center, s, .. } => {
                let t = m * s * m.transpose();
                SeminormBody::ellipse(
                    map(*center),
                    [[t[(0, 0)], t[(0, 1)]], [t[(0, 1)], t[(1, 1)]]],
                )
            }
        }
    }

    /// `lambda U` for `lambda > 0`.
    pub fn scaled(&self, lambda: f64) -> Result<SeminormBody> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidArgument(format!("scale {lambda} must be positive")));
        }
        match &self.shape {
            BodyShape::Disk { center, radius } => {
                SeminormBody::disk([center[0] * lambda, center[1] * lambda], radius * lambda)
            }
            _ => self.linear_image([[lambda, 0.0], [0.0, lambda]]),
        }
    }

    /// Vertices for polygons.
    pub fn vertices(&self) -> Option<&[[f64; 2]]> {
        match &self.geom {
            Geometry::Polygon { vertices, .. } => Some(vertices),
            Geometry::Quadric { .. } => None,
        }
    }

    /// Outward normal of the supporting line at the boundary point `q`,
    /// normalized so that `<n, q> = 1`. At a polygon vertex the normal cone
    /// is a range; `None` is returned there.
    pub fn unit_normal_at(&self, q: [f64; 2]) -> Option<[f64; 2]> {
        match &self.geom {
            Geometry::Quadric { center, p, .. } => {
                let d = [q[0] - center[0], q[1] - center[1]];
                let n = [p[(0, 0)] * d[0] + p[(0, 1)] * d[1], p[(1, 0)] * d[0] + p[(1, 1)] * d[1]];
                let k = dot(n, q);
                Some([n[0] / k, n[1] / k])
            }
            Geometry::Polygon { normals, offsets, .. } => {
                let on: Vec<usize> = (0..normals.len())
                    .filter(|&i| (dot(normals[i], q) / offsets[i] - 1.0).abs() <= 1e-12)
                    .collect();
                match on.as_slice() {
                    [i] => Some([normals[*i][0] / offsets[*i], normals[*i][1] / offsets[*i]]),
                    _ => None,
                }
            }
        }
    }
}
