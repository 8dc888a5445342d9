//! Subspaces of the algebra: bracket generation, the canonical frame
//! `(e1, e2, e3 = [e1,e2], e4 = [e1,e3])`, normalizers and the Killing-form
//! typing of planes in `sl(2) + R` and `so(3) + R`.

use nalgebra::{DMatrix, Matrix2, Matrix3, Matrix4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{AutomorphismMatrix, StructureConstants, Vector4, DIM, TOL};
use crate::linalg;
use crate::seminorm::SeminormBody;

/// A subspace given by linearly independent spanning vectors, kept in the
/// order supplied (the order seeds the canonical frame).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Subspace {
    vectors: Vec<Vector4>,
}

impl Subspace {
    pub fn new(vectors: Vec<Vector4>) -> Result<Self> {
        if vectors.is_empty() || vectors.len() > DIM {
            return Err(Error::WrongDimension {
                expected: "1..4",
                got: vectors.len(),
            });
        }
        if vectors.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("subspace vector"));
        }
        if linalg::rank(&vectors) < vectors.len() {
            return Err(Error::DependentSpanningSet);
        }
        Ok(Subspace { vectors })
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vector4] {
        &self.vectors
    }

    pub fn contains(&self, v: &Vector4) -> bool {
        let (_, resid) = linalg::coordinates(&self.vectors, v);
        resid <= TOL * v.max_abs().max(1.0)
    }

    /// Image under a linear map (spanner order preserved).
    pub fn transform(&self, m: &AutomorphismMatrix) -> Result<Subspace> {
        Subspace::new(self.vectors.iter().map(|v| m.apply(v)).collect())
    }

    fn require_dim(&self, expected: &'static str, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::WrongDimension {
                expected,
                got: self.dim(),
            });
        }
        Ok(())
    }
}

/// Dimensions of `V0 = p, V_{i+1} = V_i + [V_i, V_i]`, ending at 4 or at the
/// first repeat.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagReport {
    pub generates: bool,
    pub dims: Vec<usize>,
}

pub fn generates(alg: &StructureConstants, p: &Subspace) -> FlagReport {
    let mut current = linalg::span_basis(p.vectors());
    let mut dims = vec![current.len()];
    while current.len() < DIM {
        let mut next = current.clone();
        for (i, a) in current.iter().enumerate() {
            for b in &current[i + 1..] {
                next.push(alg.bracket(a, b));
            }
        }
        let next = linalg::span_basis(&next);
        dims.push(next.len());
        if next.len() == current.len() {
            break;
        }
        current = next;
    }
    FlagReport {
        generates: current.len() == DIM,
        dims,
    }
}

/// The canonical frame of a generating plane.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CanonicalBasis {
    pub e1: Vector4,
    pub e2: Vector4,
    pub e3: Vector4,
    pub e4: Vector4,
    /// Coordinates of `[e2,e3]`, `[e1,e4]`, `[e2,e4]` in `(e1..e4)`.
    pub c23: [f64; DIM],
    pub c14: [f64; DIM],
    pub c24: [f64; DIM],
    /// Rows give `e1`, `e2` as combinations of the two given spanners.
    pub frame: [[f64; 2]; 2],
    /// The spanners were used in reverse order.
    pub swapped: bool,
    /// Coefficient `C2/C1` of the shift `e1 <- e1 + (C2/C1) e2`, when applied.
    pub shift: Option<f64>,
}

fn coords_in(basis: &Matrix4<f64>, v: &Vector4) -> Option<[f64; DIM]> {
    let x = basis.lu().solve(&v.to_na())?;
    Some([x[0], x[1], x[2], x[3]])
}

impl CanonicalBasis {
    fn build(
        alg: &StructureConstants,
        e1: Vector4,
        e2: Vector4,
        frame: [[f64; 2]; 2],
        swapped: bool,
        shift: Option<f64>,
    ) -> Option<CanonicalBasis> {
        let e3 = alg.bracket(&e1, &e2);
        let e4 = alg.bracket(&e1, &e3);
        if linalg::rank(&[e1, e2, e3, e4]) < DIM {
            return None;
        }
        let m = Matrix4::from_columns(&[e1.to_na(), e2.to_na(), e3.to_na(), e4.to_na()]);
        let c23 = coords_in(&m, &alg.bracket(&e2, &e3))?;
        let c14 = coords_in(&m, &alg.bracket(&e1, &e4))?;
        let c24 = coords_in(&m, &alg.bracket(&e2, &e4))?;
        Some(CanonicalBasis {
            e1,
            e2,
            e3,
            e4,
            c23,
            c14,
            c24,
            frame,
            swapped,
            shift,
        })
    }

    pub fn vectors(&self) -> [Vector4; DIM] {
        [self.e1, self.e2, self.e3, self.e4]
    }

    /// Coordinates of a catalog-frame vector in `(e1..e4)`.
    pub fn coordinates(&self, v: &Vector4) -> [f64; DIM] {
        let m = Matrix4::from_columns(&self.vectors().map(|e| e.to_na()));
        coords_in(&m, v).expect("canonical frame has rank 4")
    }

    /// `x e1 + y e2` in the catalog frame.
    pub fn plane_vector(&self, xy: [f64; 2]) -> Vector4 {
        self.e1 * xy[0] + self.e2 * xy[1]
    }

    /// Maps coordinates with respect to the given spanners to `(e1, e2)`
    /// coordinates.
    pub fn subspace_to_canonical(&self) -> Matrix2<f64> {
        let f = Matrix2::new(
            self.frame[0][0],
            self.frame[0][1],
            self.frame[1][0],
            self.frame[1][1],
        );
        f.transpose()
            .try_inverse()
            .expect("frame change is invertible")
    }

    /// Re-expresses a body given in spanner coordinates in the canonical frame.
    pub fn body_from_subspace_frame(&self, body: &SeminormBody) -> Result<SeminormBody> {
        let a = self.subspace_to_canonical();
        body.linear_image([[a[(0, 0)], a[(0, 1)]], [a[(1, 0)], a[(1, 1)]]])
    }

    /// Largest violation of the frame relations and the normalizations.
    pub fn frame_defect(&self, alg: &StructureConstants) -> f64 {
        let d1 = (alg.bracket(&self.e1, &self.e2) - self.e3).max_abs();
        let d2 = (alg.bracket(&self.e1, &self.e3) - self.e4).max_abs();
        let mut d = d1.max(d2).max(self.c23[3].abs());
        if self.c23[0].abs() > TOL {
            d = d.max(self.c23[1].abs());
        }
        d
    }
}

/// Builds the canonical frame of a generating plane, seeding `e1` with the
/// first spanner and falling back to the reverse order.
pub fn canonical_basis(alg: &StructureConstants, p: &Subspace) -> Result<CanonicalBasis> {
    p.require_dim("2", 2)?;
    let flag = generates(alg, p);
    if !flag.generates {
        return Err(Error::NotGenerating(flag.dims));
    }
    let (v1, v2) = (p.vectors()[0], p.vectors()[1]);
    let seeds = [
        (v1, v2, [[1.0, 0.0], [0.0, 1.0]], false),
        (v2, v1, [[0.0, 1.0], [1.0, 0.0]], true),
    ];
    let (mut b, swapped) = seeds
        .into_iter()
        .find_map(|(e1, e2, frame, sw)| {
            CanonicalBasis::build(alg, e1, e2, frame, sw, None).map(|b| (b, sw))
        })
        .ok_or(Error::CanonicalizationFailed)?;

    // e2 <- e2 - C4 e1 leaves e3 and e4 unchanged.
    let c4 = b.c23[3];
    if c4 != 0.0 {
        let e2 = b.e2 - b.e1 * c4;
        let f = b.frame;
        let frame = [f[0], [f[1][0] - c4 * f[0][0], f[1][1] - c4 * f[0][1]]];
        b = CanonicalBasis::build(alg, b.e1, e2, frame, swapped, None)
            .ok_or(Error::CanonicalizationFailed)?;
    }
    let (c1, c2) = (b.c23[0], b.c23[1]);
    if c1.abs() > TOL && c2 != 0.0 {
        let lambda = c2 / c1;
        let e1 = b.e1 + b.e2 * lambda;
        let f = b.frame;
        let frame = [[f[0][0] + lambda * f[1][0], f[0][1] + lambda * f[1][1]], f[1]];
        b = CanonicalBasis::build(alg, e1, b.e2, frame, swapped, Some(lambda))
            .ok_or(Error::CanonicalizationFailed)?;
    }
    // Roundoff from the solves; the relations hold exactly in exact arithmetic.
    if b.c23[3].abs() <= TOL {
        b.c23[3] = 0.0;
    }
    if b.c23[0].abs() > TOL && b.c23[1].abs() <= TOL {
        b.c23[1] = 0.0;
    }
    if b.frame_defect(alg) > TOL * (1.0 + b.e4.max_abs()) {
        return Err(Error::CanonicalizationFailed);
    }
    Ok(b)
}

/// Largest violation of `C1_24 = C2_24 = 0`, `C3_24 = C2_23`, `C4_24 = C3_23`.
pub fn check_prop2(b: &CanonicalBasis) -> f64 {
    [
        b.c24[0].abs(),
        b.c24[1].abs(),
        (b.c24[2] - b.c23[1]).abs(),
        (b.c24[3] - b.c23[2]).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

fn kernel_vectors(rows: Vec<[f64; DIM]>) -> Vec<Vector4> {
    if rows.is_empty() {
        return (1..=DIM).map(Vector4::e).collect();
    }
    let a = DMatrix::from_fn(rows.len(), DIM, |r, c| rows[r][c]);
    linalg::null_space(&a)
        .into_iter()
        .map(|v| Vector4([v[0], v[1], v[2], v[3]]))
        .collect()
}

/// Orthonormal basis of `N(p) = {X : [X, p] in p}`.
pub fn normalizer(alg: &StructureConstants, p: &Subspace) -> Vec<Vector4> {
    let comp = linalg::complement(p.vectors());
    let mut rows = Vec::new();
    for v in p.vectors() {
        for q in &comp {
            rows.push(std::array::from_fn(|i| q.dot(&alg.bracket(&Vector4::e(i + 1), v))));
        }
    }
    kernel_vectors(rows)
}

/// Orthonormal basis of `C(p) = {X : [X, p] = 0}`.
pub fn centralizer(alg: &StructureConstants, p: &Subspace) -> Vec<Vector4> {
    let mut rows = Vec::new();
    for v in p.vectors() {
        for k in 0..DIM {
            rows.push(std::array::from_fn(|i| alg.bracket(&Vector4::e(i + 1), v)[k]));
        }
    }
    kernel_vectors(rows)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sl2Tag {
    TypeI,
    TypeIIa,
    TypeIIb,
    TypeIIc,
    Degenerate,
}

/// Killing-form type of a plane in `g3 + g1` with simple `g3`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sl2SubspaceType {
    pub tag: Sl2Tag,
    /// The `g3` factor is compact (`Q = -k/2`) rather than split (`Q = k/2`).
    pub compact: bool,
    /// Gram matrix of `Q` on the projection `p1` (in an orthonormal basis of
    /// `p1`), when `p1` is two-dimensional.
    pub q_p1: Option<[[f64; 2]; 2]>,
    pub q_p1_eigenvalues: Option<[f64; 2]>,
    /// Spanning vector of `s = p ∩ g3` and `Q(s,s)/|s|^2`.
    pub s: Option<Vector4>,
    pub q_s: Option<f64>,
    /// First of the three conditions that fails (1: `p ⊄ g3`,
    /// 2: `dim p1 = 2`, 3: `Q|p1` nondegenerate).
    pub failed_condition: Option<u8>,
}

/// Types a plane in `g3,6 + g1` or `g3,7 + g1` by the form `Q` on `g3`.
pub fn classify_sl2(alg: &StructureConstants, p: &Subspace) -> Result<Sl2SubspaceType> {
    p.require_dim("2", 2)?;
    let e4 = Vector4::e(4);
    let g3_closed = (0..3).all(|i| (0..3).all(|j| alg.basis_bracket(i, j)[3].abs() <= TOL));
    let central = alg.ad_matrix(&e4).iter().all(|v| v.abs() <= TOL);
    let k = alg.killing_matrix();
    let k3: Matrix3<f64> = k.fixed_view::<3, 3>(0, 0).into_owned();
    let scale = k3.abs().max().max(1.0);
    if !g3_closed || !central || k3.determinant().abs() <= TOL * scale.powi(3) {
        return Err(Error::WrongAlgebra(format!(
            "{} is not a simple three-dimensional algebra plus a center",
            alg.label().unwrap_or("algebra")
        )));
    }
    let eig = k3.symmetric_eigenvalues();
    let compact = eig.iter().all(|l| *l < 0.0);
    let q: Matrix3<f64> = if compact { k3 * -0.5 } else { k3 * 0.5 };
    let qf = |a: &Vector4, b: &Vector4| -> f64 {
        let (x, y) = (nalgebra::Vector3::new(a[0], a[1], a[2]), nalgebra::Vector3::new(b[0], b[1], b[2]));
        x.dot(&(q * y))
    };

    let mut out = Sl2SubspaceType {
        tag: Sl2Tag::Degenerate,
        compact,
        q_p1: None,
        q_p1_eigenvalues: None,
        s: None,
        q_s: None,
        failed_condition: None,
    };
    let g3 = [Vector4::e(1), Vector4::e(2), Vector4::e(3)];
    if p.vectors().iter().all(|v| v[3].abs() <= TOL * v.max_abs().max(1.0)) {
        out.failed_condition = Some(1);
        return Ok(out);
    }
    let projected: Vec<Vector4> = p
        .vectors()
        .iter()
        .map(|v| Vector4([v[0], v[1], v[2], 0.0]))
        .collect();
    let p1 = linalg::span_basis(&projected);
    if p1.len() != 2 {
        out.failed_condition = Some(2);
        return Ok(out);
    }
    let gram = Matrix2::new(qf(&p1[0], &p1[0]), qf(&p1[0], &p1[1]), qf(&p1[1], &p1[0]), qf(&p1[1], &p1[1]));
    let ev = gram.symmetric_eigenvalues();
    let (lo, hi) = (ev[0].min(ev[1]), ev[0].max(ev[1]));
    out.q_p1 = Some([[gram[(0, 0)], gram[(0, 1)]], [gram[(1, 0)], gram[(1, 1)]]]);
    out.q_p1_eigenvalues = Some([lo, hi]);
    let qscale = q.abs().max();
    if lo.abs() <= TOL * qscale || hi.abs() <= TOL * qscale {
        out.failed_condition = Some(3);
        return Ok(out);
    }
    let s = linalg::intersection(p.vectors(), &g3);
    if let Some(sv) = s.first() {
        let qs = qf(sv, sv) / sv.dot(sv);
        out.s = Some(*sv);
        out.q_s = Some(qs);
        if lo > 0.0 {
            out.tag = Sl2Tag::TypeI;
        } else if qs > TOL * qscale {
            out.tag = Sl2Tag::TypeIIa;
        } else if qs < -TOL * qscale {
            out.tag = Sl2Tag::TypeIIb;
        } else {
            out.tag = Sl2Tag::TypeIIc;
        }
    } else if lo > 0.0 {
        out.tag = Sl2Tag::TypeI;
    }
    Ok(out)
}

/// Membership in the span of `basis` (an empty basis spans zero).
pub(crate) fn in_span(basis: &[Vector4], v: &Vector4) -> bool {
    if basis.is_empty() {
        return v.max_abs() <= TOL;
    }
    let (_, resid) = linalg::coordinates(basis, v);
    resid <= TOL * v.max_abs().max(1.0)
}
