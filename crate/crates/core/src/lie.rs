//! Structure-constant arithmetic for four-dimensional real Lie algebras.
//!
//! An algebra is stored as the dense table `c[i][j][k]` with
//! `[E_i, E_j] = sum_k c[i][j][k] E_k`. Indices are zero-based in code; the
//! constructors that take bracket lists use the one-based `E_1..E_4` labels.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dimension of every algebra handled by this crate.
pub const DIM: usize = 4;

/// Absolute tolerance for floating comparisons on catalog-sized numbers.
pub const TOL: f64 = 1e-9;

/// Coordinates of an element of the algebra in a fixed basis.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector4(pub [f64; DIM]);

impl Vector4 {
    pub const ZERO: Vector4 = Vector4([0.0; DIM]);

    pub fn new(x1: f64, x2: f64, x3: f64, x4: f64) -> Self {
        Vector4([x1, x2, x3, x4])
    }

    /// The basis vector `E_k`, `k` in `1..=4`.
    pub fn e(k: usize) -> Self {
        assert!((1..=DIM).contains(&k), "basis index {k} out of range");
        let mut v = [0.0; DIM];
        v[k - 1] = 1.0;
        Vector4(v)
    }

    pub fn dot(&self, other: &Vector4) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    pub fn to_na(self) -> nalgebra::Vector4<f64> {
        nalgebra::Vector4::from(self.0)
    }

    pub fn from_na(v: &nalgebra::Vector4<f64>) -> Self {
        Vector4([v[0], v[1], v[2], v[3]])
    }
}

impl Index<usize> for Vector4 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for Vector4 {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl Add for Vector4 {
    type Output = Vector4;
    fn add(mut self, rhs: Vector4) -> Vector4 {
        self += rhs;
        self
    }
}

impl AddAssign for Vector4 {
    fn add_assign(&mut self, rhs: Vector4) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
    }
}

impl Sub for Vector4 {
    type Output = Vector4;
    fn sub(self, rhs: Vector4) -> Vector4 {
        self + (-rhs)
    }
}

impl Neg for Vector4 {
    type Output = Vector4;
    fn neg(self) -> Vector4 {
        Vector4(self.0.map(|x| -x))
    }
}

impl Mul<f64> for Vector4 {
    type Output = Vector4;
    fn mul(self, rhs: f64) -> Vector4 {
        Vector4(self.0.map(|x| x * rhs))
    }
}

impl Mul<Vector4> for f64 {
    type Output = Vector4;
    fn mul(self, rhs: Vector4) -> Vector4 {
        rhs * self
    }
}

impl fmt::Display for Vector4 {
    /// Renders as a combination of `E1..E4`, dropping zero terms.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &x) in self.0.iter().enumerate() {
            if x.abs() <= TOL {
                continue;
            }
            let sign = if x < 0.0 { "-" } else if first { "" } else { "+" };
            let mag = x.abs();
            if (mag - 1.0).abs() <= TOL {
                write!(f, "{sign}E{}", k + 1)?;
            } else {
                write!(f, "{sign}{mag}*E{}", k + 1)?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Bracket table of a four-dimensional algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants {
    c: [[[f64; DIM]; DIM]; DIM],
    label: Option<String>,
}

impl StructureConstants {
    /// The abelian algebra.
    pub fn abelian() -> Self {
        StructureConstants {
            c: [[[0.0; DIM]; DIM]; DIM],
            label: None,
        }
    }

    /// Validates a full table. Antisymmetry is checked to `TOL`.
    pub fn new(c: [[[f64; DIM]; DIM]; DIM], label: Option<String>) -> Result<Self> {
        for i in 0..DIM {
            for j in 0..DIM {
                for k in 0..DIM {
                    if !c[i][j][k].is_finite() {
                        return Err(Error::NonFinite("structure constants"));
                    }
                    if (c[i][j][k] + c[j][i][k]).abs() > TOL {
                        return Err(Error::NotAntisymmetric {
                            i,
                            j,
                            k,
                            a: c[i][j][k],
                            b: c[j][i][k],
                        });
                    }
                }
            }
        }
        Ok(StructureConstants { c, label })
    }

    /// Builds the table from its nonzero brackets `[E_i, E_j] = v`, with
    /// one-based `i != j`. The opposite entry is filled by antisymmetry.
    pub fn from_brackets<I>(brackets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Vector4)>,
    {
        let mut c = [[[0.0; DIM]; DIM]; DIM];
        for (i, j, v) in brackets {
            if !(1..=DIM).contains(&i) || !(1..=DIM).contains(&j) || i == j {
                return Err(Error::InvalidArgument(format!(
                    "bracket indices ({i}, {j}) out of range"
                )));
            }
            if !v.is_finite() {
                return Err(Error::NonFinite("bracket value"));
            }
            for k in 0..DIM {
                c[i - 1][j - 1][k] = v[k];
                c[j - 1][i - 1][k] = -v[k];
            }
        }
        Ok(StructureConstants { c, label: None })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// `c[i][j][k]`, zero-based.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[i][j][k]
    }

    pub fn table(&self) -> &[[[f64; DIM]; DIM]; DIM] {
        &self.c
    }

    /// `[E_{i+1}, E_{j+1}]`, zero-based.
    pub fn basis_bracket(&self, i: usize, j: usize) -> Vector4 {
        Vector4(self.c[i][j])
    }

    pub fn bracket(&self, x: &Vector4, y: &Vector4) -> Vector4 {
        let mut out = [0.0; DIM];
        for i in 0..DIM {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..DIM {
                let w = x[i] * y[j];
                if w == 0.0 {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    *o += w * self.c[i][j][k];
                }
            }
        }
        Vector4(out)
    }

    /// Largest Jacobiator over basis triples; zero exactly for Lie algebras.
    pub fn jacobi_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..DIM {
            for j in (i + 1)..DIM {
                for k in (j + 1)..DIM {
                    let (a, b, c) = (Vector4::e(i + 1), Vector4::e(j + 1), Vector4::e(k + 1));
                    let jac = self.bracket(&a, &self.bracket(&b, &c))
                        + self.bracket(&b, &self.bracket(&c, &a))
                        + self.bracket(&c, &self.bracket(&a, &b));
                    worst = worst.max(jac.norm());
                }
            }
        }
        worst
    }

    /// Matrix of `ad x = [x, .]`; column `j` is `[x, E_j]`.
    pub fn ad_matrix(&self, x: &Vector4) -> Matrix4<f64> {
        let mut m = Matrix4::zeros();
        for j in 0..DIM {
            let col = self.bracket(x, &Vector4::e(j + 1));
            for k in 0..DIM {
                m[(k, j)] = col[k];
            }
        }
        m
    }

    /// `K[i][j] = tr(ad E_i ad E_j)`.
    pub fn killing_matrix(&self) -> Matrix4<f64> {
        let ads: Vec<Matrix4<f64>> = (1..=DIM).map(|i| self.ad_matrix(&Vector4::e(i))).collect();
        Matrix4::from_fn(|i, j| (ads[i] * ads[j]).trace())
    }

    /// Max-entry defect of `m [E_i, E_j] - [m E_i, m E_j]` over basis pairs.
    pub fn automorphism_defect(&self, m: &AutomorphismMatrix) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..DIM {
            for j in (i + 1)..DIM {
                let lhs = m.apply(&self.basis_bracket(i, j));
                let rhs = self.bracket(&m.apply(&Vector4::e(i + 1)), &m.apply(&Vector4::e(j + 1)));
                worst = worst.max((lhs - rhs).max_abs());
            }
        }
        worst
    }
}

/// Invertible linear map on the algebra, with provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct AutomorphismMatrix {
    m: Matrix4<f64>,
    family: String,
    params: Vec<(String, f64)>,
}

impl AutomorphismMatrix {
    pub fn new(m: Matrix4<f64>, family: impl Into<String>, params: Vec<(String, f64)>) -> Result<Self> {
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("automorphism matrix"));
        }
        let scale = m.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        if scale == 0.0 || m.determinant().abs() <= 1e-12 * scale.powi(DIM as i32) {
            return Err(Error::NotInvertible);
        }
        Ok(AutomorphismMatrix {
            m,
            family: family.into(),
            params,
        })
    }

    pub fn identity() -> Self {
        AutomorphismMatrix {
            m: Matrix4::identity(),
            family: "identity".into(),
            params: Vec::new(),
        }
    }

    /// `exp(ad x)`, an inner automorphism of `alg`.
    pub fn inner(alg: &StructureConstants, x: &Vector4) -> Self {
        AutomorphismMatrix {
            m: alg.ad_matrix(x).exp(),
            family: alg.label().unwrap_or("algebra").to_string() + " inner",
            params: x.0.iter().enumerate().map(|(i, &v)| (format!("x{}", i + 1), v)).collect(),
        }
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.m
    }

    pub fn family(&self) -> &str {
        &self.family
    }

    pub fn params(&self) -> &[(String, f64)] {
        &self.params
    }

    pub fn apply(&self, v: &Vector4) -> Vector4 {
        Vector4::from_na(&(self.m * v.to_na()))
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &AutomorphismMatrix) -> AutomorphismMatrix {
        AutomorphismMatrix {
            m: self.m * other.m,
            family: format!("{} o {}", self.family, other.family),
            params: self.params.iter().chain(other.params.iter()).cloned().collect(),
        }
    }
}
