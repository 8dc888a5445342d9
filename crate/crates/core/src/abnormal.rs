//! Abnormal extremals and their strictness.
//!
//! For a generating plane `p` every abnormal extremal is, up to left shift,
//! `exp(t u2 e2)` with `u2 = s / F(s e2)`, `s = ±1`. It is non-strictly
//! abnormal (also normal) exactly when `C1 = C2 = 0`, or `C1 != 0` and
//! `F_U(0, s) = 1 / F(0, s)`, where `Ck = C^k_23` in the canonical frame.
//!
//! For a three-dimensional `p` abnormal extremals exist iff
//! `p1 = p ∩ N(p) != 0`; they are strict iff `p1 ⊂ [p1, p]`.

use nalgebra::{DMatrix, DVector, Matrix3};
use serde::{Deserialize, Serialize};

use crate::adjoint::{witness_search, ControlSpec};
use crate::catalog::{AlgebraId, Catalog, Family};
use crate::error::{Error, Result};
use crate::lie::{StructureConstants, Vector4, DIM, TOL};
use crate::linalg;
use crate::seminorm::{SeminormBody, Sign};
use crate::subspace::{
    canonical_basis, classify_sl2, generates, in_span, normalizer, CanonicalBasis, Sl2Tag, Subspace,
};

/// Time span used when the oracle is consulted from a report.
pub const ORACLE_HORIZON: f64 = 5.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    NonStrict,
    Strict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Reason {
    C1C2Zero,
    AxisConditionHolds,
    AxisConditionFails,
    C1ZeroC2Nonzero,
}

/// `exp(t v)` with `v = s e2 / F(s e2)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtremalDescriptor {
    pub s: Sign,
    pub u2: f64,
    /// Velocity in the catalog basis.
    pub velocity: Vector4,
    /// Velocity in `(e1, e2, e3, e4)`.
    pub velocity_canonical: [f64; DIM],
    pub label: String,
}

/// Constant part of the normal covector: `psi1 = k`, `psi2 = 1/u2`, `psi3 = 0`,
/// `psi4 = phi4 e^{rate t}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CovectorWitness {
    pub k: f64,
    pub psi2: f64,
    pub phi4: f64,
    pub rate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DirectionVerdict {
    pub s: Sign,
    pub u2: f64,
    pub verdict: Verdict,
    pub reason: Reason,
    /// `(F_U(0, s), 1 / F(0, s))`.
    pub axis_values: (f64, f64),
    pub witness: Option<CovectorWitness>,
    /// PMP maximum: 1 for the normal witness, 0 for the abnormal covector alone.
    pub pmp_max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StrictnessReport {
    pub c23: [f64; DIM],
    pub directions: Vec<DirectionVerdict>,
    /// `NonStrict` only when both directions are.
    pub combined: Verdict,
}

impl StrictnessReport {
    pub fn verdict(&self, s: Sign) -> Verdict {
        self.directions
            .iter()
            .find(|d| d.s == s)
            .map(|d| d.verdict)
            .expect("both directions are reported")
    }
}

pub fn abnormal_extremals(
    alg: &StructureConstants,
    p: &Subspace,
    body: &SeminormBody,
) -> Result<Vec<ExtremalDescriptor>> {
    let basis = canonical_basis(alg, p)?;
    Ok(extremals_in(&basis, body))
}

/// Descriptors in a known canonical frame.
pub fn extremals_in(basis: &CanonicalBasis, body: &SeminormBody) -> Vec<ExtremalDescriptor> {
    Sign::BOTH
        .iter()
        .map(|&s| {
            let u2 = ControlSpec::from_body(body, s).u2;
            ExtremalDescriptor {
                s,
                u2,
                velocity: basis.e2 * u2,
                velocity_canonical: [0.0, u2, 0.0, 0.0],
                label: format!("one-parameter subgroup exp(t * {})", basis.e2 * u2),
            }
        })
        .collect()
}

/// Witness `k` from the supporting line of `U` at `s e2 / F(s e2)`.
fn supporting_k(body: &SeminormBody, u2: f64) -> f64 {
    let y = 1.0 / u2;
    let q = [0.0, u2];
    if let Some(n) = body.unit_normal_at(q) {
        return n[0];
    }
    // Polygon vertex: F_U(k, y) = max_j (k x_j + y y_j) <= 1 is an interval.
    let verts = body.vertices().expect("only polygon vertices lack a unique normal");
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for v in verts {
        let room = 1.0 - y * v[1];
        if v[0] > 0.0 {
            hi = hi.min(room / v[0]);
        } else if v[0] < 0.0 {
            lo = lo.max(room / v[0]);
        }
    }
    0.0f64.clamp(lo, hi.max(lo))
}

/// The criterion in a given canonical frame (body in `(e1, e2)` coordinates).
pub fn classify_basis(basis: &CanonicalBasis, body: &SeminormBody) -> StrictnessReport {
    let [c1, c2, c3, _] = basis.c23;
    let directions: Vec<DirectionVerdict> = Sign::BOTH
        .iter()
        .map(|&s| {
            let u2 = ControlSpec::from_body(body, s).u2;
            let axis_values = body.axis_values(s);
            let (verdict, reason, k) = if c1.abs() <= TOL && c2.abs() <= TOL {
                (Verdict::NonStrict, Reason::C1C2Zero, Some(supporting_k(body, u2)))
            } else if c1.abs() > TOL {
                if body.axis_condition(s) {
                    (Verdict::NonStrict, Reason::AxisConditionHolds, Some(0.0))
                } else {
                    (Verdict::Strict, Reason::AxisConditionFails, None)
                }
            } else {
                (Verdict::Strict, Reason::C1ZeroC2Nonzero, None)
            };
            DirectionVerdict {
                s,
                u2,
                verdict,
                reason,
                axis_values,
                witness: k.map(|k| CovectorWitness {
                    k,
                    psi2: 1.0 / u2,
                    phi4: 1.0,
                    rate: c3 * u2,
                }),
                pmp_max: if verdict == Verdict::NonStrict { 1.0 } else { 0.0 },
            }
        })
        .collect();
    let combined = if directions.iter().all(|d| d.verdict == Verdict::NonStrict) {
        Verdict::NonStrict
    } else {
        Verdict::Strict
    };
    StrictnessReport {
        c23: basis.c23,
        directions,
        combined,
    }
}

/// Canonical frame of `p`, then the criterion. `body` is in the canonical frame.
pub fn classify(alg: &StructureConstants, p: &Subspace, body: &SeminormBody) -> Result<StrictnessReport> {
    let basis = canonical_basis(alg, p)?;
    Ok(classify_basis(&basis, body))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Dim3Verdict {
    NonStrictForAllMetrics,
    StrictForAllMetrics,
    MetricDependent,
}

/// Result of testing one inner product on `p` in the metric-dependent case.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricCheck {
    pub non_strict: bool,
    /// Least-squares residual of the constant-covector system.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Dim3Report {
    pub exists: bool,
    /// Spanning vector of `p1 = p ∩ N(p)`.
    pub p1: Option<Vector4>,
    pub verdict: Option<Dim3Verdict>,
    /// `X` with `F(X) = 1` (Euclidean-normalized when no metric is given).
    pub extremal: Option<Vector4>,
    pub metric_check: Option<MetricCheck>,
}

/// Coordinates of `x` in the spanners of `p`.
fn coords_in_p(p: &Subspace, x: &Vector4) -> Vec<f64> {
    linalg::coordinates(p.vectors(), x).0
}

/// The three-dimensional case. `metric_inner` is a Gram matrix in the
/// spanners of `p`.
pub fn classify_dim3(
    alg: &StructureConstants,
    p: &Subspace,
    metric_inner: Option<[[f64; 3]; 3]>,
) -> Result<Dim3Report> {
    if p.dim() != 3 {
        return Err(Error::WrongDimension {
            expected: "3",
            got: p.dim(),
        });
    }
    let flag = generates(alg, p);
    if !flag.generates {
        return Err(Error::NotGenerating(flag.dims));
    }
    let gram = match metric_inner {
        Some(g) => {
            let m = Matrix3::from_fn(|r, c| g[r][c]);
            let sym = (m - m.transpose()).abs().max() <= TOL * m.abs().max().max(1.0);
            if !sym || !m.symmetric_eigenvalues().iter().all(|l| *l > 0.0) {
                return Err(Error::InvalidArgument("metric is not symmetric positive definite".into()));
            }
            Some(m)
        }
        None => None,
    };
    let p1 = linalg::intersection(p.vectors(), &normalizer(alg, p));
    if p1.is_empty() {
        return Ok(Dim3Report {
            exists: false,
            p1: None,
            verdict: None,
            extremal: None,
            metric_check: None,
        });
    }
    if p1.len() > 1 {
        return Err(Error::Internal(format!(
            "p ∩ N(p) has dimension {} (expected at most 1)",
            p1.len()
        )));
    }
    let x = p1[0];
    let image: Vec<Vector4> = p
        .vectors()
        .iter()
        .map(|v| alg.bracket(&x, v))
        .filter(|w| w.max_abs() > TOL)
        .collect();
    let image = linalg::span_basis(&image);
    let verdict = if image.is_empty() {
        Dim3Verdict::NonStrictForAllMetrics
    } else if in_span(&image, &x) {
        Dim3Verdict::StrictForAllMetrics
    } else {
        Dim3Verdict::MetricDependent
    };
    let (extremal, metric_check) = match gram {
        None => (x * (1.0 / x.norm()), None),
        Some(g) => {
            let xc = nalgebra::Vector3::from_vec(coords_in_p(p, &x));
            let nx = xc.dot(&(g * xc)).sqrt();
            let xn = x * (1.0 / nx);
            let check = (verdict == Dim3Verdict::MetricDependent)
                .then(|| metric_covector_check(alg, p, &xn, &g));
            (xn, check)
        }
    };
    Ok(Dim3Report {
        exists: true,
        p1: Some(x),
        verdict: Some(verdict),
        extremal: Some(extremal),
        metric_check,
    })
}

/// Searches for a covector `psi` with `psi|p = (X, .)` (so `psi(X) = 1` and
/// the maximum over the unit ball is 1) that is annihilated by every
/// `ad_X^k p`, `k >= 1`, which keeps `psi|p` fixed along `exp(tX)`.
fn metric_covector_check(
    alg: &StructureConstants,
    p: &Subspace,
    x: &Vector4,
    gram: &Matrix3<f64>,
) -> MetricCheck {
    let xc = nalgebra::Vector3::from_vec(coords_in_p(p, x));
    let targets = gram * xc;
    let mut rows: Vec<(Vector4, f64)> = p
        .vectors()
        .iter()
        .zip(targets.iter())
        .map(|(v, t)| (*v, *t))
        .collect();
    let mut layer: Vec<Vector4> = p.vectors().to_vec();
    for _ in 0..DIM {
        layer = layer.iter().map(|v| alg.bracket(x, v)).collect();
        rows.extend(layer.iter().map(|v| (*v, 0.0)));
    }
    let a = DMatrix::from_fn(rows.len(), DIM, |r, c| rows[r].0[c]);
    let b = DVector::from_iterator(rows.len(), rows.iter().map(|r| r.1));
    let svd = a.clone().svd(true, true);
    let sol = svd.solve(&b, 1e-12).unwrap_or_else(|_| DVector::zeros(DIM));
    let residual = (&a * sol - b).amax();
    MetricCheck {
        non_strict: residual <= 1e-9,
        residual,
    }
}

/// Which summary case covers an algebra and plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Theorem3Case {
    /// `g4.8` with `alpha = 0`.
    Case1_1,
    /// `g4.10`.
    Case1_2,
    /// `g3.2 + g1`, `g3.4 + g1`, `g3.5 + g1`.
    Case1_3,
    /// `g4.1` to `g4.6`.
    Case1_4,
    /// Non-strict iff the axis condition holds.
    Case2,
    /// `g3.6 + g1` with a sign-alternating Killing restriction: strict.
    Case3,
    /// No generating plane is expected here.
    NotCovered,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Theorem3Report {
    pub algebra: AlgebraId,
    pub case: Theorem3Case,
    pub sl2_type: Option<Sl2Tag>,
    /// Verdicts implied by the summary theorem, per `s`.
    pub theorem: Vec<(Sign, Verdict)>,
    pub classify: StrictnessReport,
    /// Verdicts from [`witness_search`], per `s`.
    pub oracle: Vec<(Sign, Verdict)>,
    /// All three agree.
    pub consistent: bool,
    /// The summary theorem and the criterion disagree on a type IIa/IIb
    /// plane of `g3.6 + g1`.
    pub tension: bool,
}

/// Runs the summary dispatch next to the criterion and the oracle.
pub fn theorem3_dispatch(
    catalog: &Catalog,
    id: &AlgebraId,
    p: &Subspace,
    body: &SeminormBody,
) -> Result<Theorem3Report> {
    let alg = catalog.instantiate(id)?;
    let basis = canonical_basis(&alg, p)?;
    let report = classify_basis(&basis, body);
    let sl2_type = match id.family {
        Family::G36 | Family::G37 => Some(classify_sl2(&alg, p)?.tag),
        _ => None,
    };
    let case = match id.family {
        Family::G48 if id.alpha == Some(0.0) => Theorem3Case::Case1_1,
        Family::G48 if id.alpha == Some(1.0) => Theorem3Case::NotCovered,
        Family::G410 => Theorem3Case::Case1_2,
        Family::G32 | Family::G34 | Family::G35 => Theorem3Case::Case1_3,
        Family::G41 | Family::G42 | Family::G43 | Family::G44 | Family::G45 | Family::G46 => {
            Theorem3Case::Case1_4
        }
        Family::G37 | Family::G47 | Family::G48 | Family::G49 => Theorem3Case::Case2,
        Family::G36 if sl2_type == Some(Sl2Tag::TypeI) => Theorem3Case::Case2,
        Family::G36 => Theorem3Case::Case3,
        Family::G31 | Family::G33 => Theorem3Case::NotCovered,
    };
    let theorem: Vec<(Sign, Verdict)> = Sign::BOTH
        .iter()
        .map(|&s| {
            let v = match case {
                Theorem3Case::Case2 if !body.axis_condition(s) => Verdict::Strict,
                Theorem3Case::Case3 => Verdict::Strict,
                Theorem3Case::NotCovered => report.verdict(s),
                _ => Verdict::NonStrict,
            };
            (s, v)
        })
        .collect();
    let oracle: Vec<(Sign, Verdict)> = Sign::BOTH
        .iter()
        .map(|&s| {
            let v = match witness_search(&basis, body, s, ORACLE_HORIZON) {
                Some(_) => Verdict::NonStrict,
                None => Verdict::Strict,
            };
            (s, v)
        })
        .collect();
    let consistent = Sign::BOTH.iter().enumerate().all(|(i, &s)| {
        theorem[i].1 == report.verdict(s) && oracle[i].1 == report.verdict(s)
    });
    let tension = matches!(sl2_type, Some(Sl2Tag::TypeIIa | Sl2Tag::TypeIIb))
        && id.family == Family::G36
        && !consistent;
    Ok(Theorem3Report {
        algebra: *id,
        case,
        sl2_type,
        theorem,
        classify: report,
        oracle,
        consistent,
        tension,
    })
}
