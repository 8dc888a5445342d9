//! The adjoint system along an abnormal one-parameter subgroup, in the
//! canonical frame, with control `u = (0, u2)`:
//!
//! ```text
//! psi1' = -u2 psi3
//! psi2' = 0
//! psi3' = u2 (C1 psi1 + C2 psi2 + C3 psi3 + C4 psi4)
//! psi4' = u2 (C2 psi3 + C3 psi4)
//! ```
//!
//! where `Ck = C^k_23`. Eliminating `psi3` gives
//! `psi1'' - u2 C3 psi1' + u2^2 (C1 psi1 + C2 psi2) = 0`.
//!
//! [`witness_search`] looks for a normal covector along the same curve
//! (`F_U(psi1, psi2) = 1` for all time) among the bounded solutions of that
//! equation. It serves as an oracle independent of the closed criterion in
//! [`crate::abnormal`].

use std::f64::consts::TAU;

use nalgebra::{Matrix4, Vector4 as NaVector4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{DIM, TOL};
use crate::seminorm::{SeminormBody, Sign};
use crate::subspace::CanonicalBasis;

/// Tolerance of the support identity along a candidate witness.
pub const SUPPORT_TOL: f64 = 1e-7;
/// Oscillation amplitudes below this are indistinguishable from a constant.
pub const MIN_AMPLITUDE: f64 = 1e-4;
const GRID_POINTS: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdjointState {
    pub t: f64,
    pub psi: [f64; DIM],
}

/// Constant control of an abnormal extremal: `u1 = 0`, `u2 = s / F(s e2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ControlSpec {
    pub s: Sign,
    pub u2: f64,
}

impl ControlSpec {
    pub fn new(s: Sign, u2: f64) -> Result<Self> {
        if !(u2.is_finite() && u2 != 0.0 && u2.signum() == s.value()) {
            return Err(Error::InvalidArgument(format!("u2 = {u2} does not match s = {s}")));
        }
        Ok(ControlSpec { s, u2 })
    }

    pub fn from_body(body: &SeminormBody, s: Sign) -> Self {
        let u2 = s.value() / body.gauge([0.0, s.value()]);
        ControlSpec { s, u2 }
    }
}

pub fn system_matrix(c23: &[f64; DIM], u2: f64) -> Matrix4<f64> {
    let [c1, c2, c3, c4] = *c23;
    Matrix4::new(
        0.0, 0.0, -u2, 0.0,
        0.0, 0.0, 0.0, 0.0,
        u2 * c1, u2 * c2, u2 * c3, u2 * c4,
        0.0, 0.0, u2 * c2, u2 * c3,
    )
}

/// Exact solution `exp(tA) psi0`.
pub fn exact_state(c23: &[f64; DIM], u2: f64, psi0: &[f64; DIM], t: f64) -> [f64; DIM] {
    let x = (system_matrix(c23, u2) * t).exp() * NaVector4::from_column_slice(psi0);
    [x[0], x[1], x[2], x[3]]
}

/// Fixed-step RK4 samples alongside the matrix-exponential solution.
#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    pub states: Vec<AdjointState>,
    pub exact: Vec<AdjointState>,
    /// `max_t max_i |rk4_i - exact_i|`.
    pub max_deviation: f64,
}

/// Integrates from `psi0` over `[0, horizon]` with `ceil(horizon / dt)`
/// uniform steps.
pub fn integrate(
    c23: &[f64; DIM],
    u2: f64,
    psi0: &[f64; DIM],
    horizon: f64,
    dt: f64,
) -> Result<Trajectory> {
    if !(dt.is_finite() && dt > 0.0 && horizon.is_finite() && horizon > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need positive step and horizon, got dt = {dt}, T = {horizon}"
        )));
    }
    if !(c23.iter().chain(psi0).all(|x| x.is_finite()) && u2.is_finite()) {
        return Err(Error::NonFinite("adjoint data"));
    }
    let a = system_matrix(c23, u2);
    let steps = (horizon / dt - 1e-9).ceil().max(1.0) as usize;
    let h = horizon / steps as f64;
    let step_map = (a * h).exp();
    let mut y = NaVector4::from_column_slice(psi0);
    let mut exact = y;
    let mut states = Vec::with_capacity(steps + 1);
    let mut exact_states = Vec::with_capacity(steps + 1);
    let mut dev: f64 = 0.0;
    let push = |v: &NaVector4<f64>, t: f64, out: &mut Vec<AdjointState>| {
        out.push(AdjointState {
            t,
            psi: [v[0], v[1], v[2], v[3]],
        })
    };
    push(&y, 0.0, &mut states);
    push(&exact, 0.0, &mut exact_states);
    for n in 1..=steps {
        let k1 = a * y;
        let k2 = a * (y + k1 * (h / 2.0));
        let k3 = a * (y + k2 * (h / 2.0));
        let k4 = a * (y + k3 * h);
        y += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        exact = step_map * exact;
        let t = n as f64 * h;
        dev = dev.max((y - exact).amax());
        push(&y, t, &mut states);
        push(&exact, t, &mut exact_states);
    }
    Ok(Trajectory {
        states,
        exact: exact_states,
        max_deviation: dev,
    })
}

/// Solution families of the `psi1` equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Psi1Case {
    /// `A1 e^{l1 t} + A2 e^{l2 t} + p`.
    BPos,
    /// `(A1 t + A2) e^{l t} + p`.
    BZero,
    /// `e^{r t} (A1 cos(w t) + A2 sin(w t)) + p`.
    BNeg,
    /// `C1 = 0`: `A1 e^{u2 C3 t} + a t + A2`, or `q t^2 + A1 t + A2` when `C3 = 0`.
    C1Zero,
}

/// Closed-form `psi1(t)` for given `A1`, `A2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosedFormPsi1 {
    pub case: Psi1Case,
    /// `B = C3^2 - 4 C1`.
    pub b: f64,
    pub c23: [f64; DIM],
    pub u2: f64,
    pub psi2: f64,
    pub a1: f64,
    pub a2: f64,
    /// Real roots (`BPos`; both equal for `BZero`).
    pub roots: Option<(f64, f64)>,
    /// Real part and frequency (`BNeg`).
    pub oscillation: Option<(f64, f64)>,
    /// Constant particular solution `-C2 psi2 / C1` (zero when `C1 = 0`).
    pub particular: f64,
}

/// The closed form with `psi2 = 1 / u2`.
pub fn closed_form_psi1(c23: &[f64; DIM], u2: f64, a1: f64, a2: f64) -> ClosedFormPsi1 {
    ClosedFormPsi1::new(c23, u2, 1.0 / u2, a1, a2)
}

impl ClosedFormPsi1 {
    pub fn new(c23: &[f64; DIM], u2: f64, psi2: f64, a1: f64, a2: f64) -> Self {
        let [c1, c2, c3, _] = *c23;
        let b = c3 * c3 - 4.0 * c1;
        let mut out = ClosedFormPsi1 {
            case: Psi1Case::C1Zero,
            b,
            c23: *c23,
            u2,
            psi2,
            a1,
            a2,
            roots: None,
            oscillation: None,
            particular: 0.0,
        };
        if c1.abs() <= TOL {
            if c3.abs() > TOL {
                out.roots = Some((u2 * c3, 0.0));
            }
            return out;
        }
        out.particular = -c2 * psi2 / c1;
        if b.abs() <= TOL {
            out.case = Psi1Case::BZero;
            let l = u2 * c3 / 2.0;
            out.roots = Some((l, l));
        } else if b > 0.0 {
            out.case = Psi1Case::BPos;
            out.roots = Some((u2 * (c3 + b.sqrt()) / 2.0, u2 * (c3 - b.sqrt()) / 2.0));
        } else {
            out.case = Psi1Case::BNeg;
            out.oscillation = Some((u2 * c3 / 2.0, u2 * (-b).sqrt() / 2.0));
        }
        out
    }

    /// Fits `A1`, `A2` to `psi1(0)` and `psi1'(0)`.
    pub fn from_initial(c23: &[f64; DIM], u2: f64, psi2: f64, psi1_0: f64, dpsi1_0: f64) -> Self {
        let mut f = ClosedFormPsi1::new(c23, u2, psi2, 0.0, 0.0);
        let y0 = psi1_0 - f.particular;
        let (a1, a2) = match f.case {
            Psi1Case::BPos => {
                let (l1, l2) = f.roots.expect("real roots");
                let a1 = (dpsi1_0 - l2 * y0) / (l1 - l2);
                (a1, y0 - a1)
            }
            Psi1Case::BZero => {
                let (l, _) = f.roots.expect("double root");
                (dpsi1_0 - l * y0, y0)
            }
            Psi1Case::BNeg => {
                let (r, w) = f.oscillation.expect("complex roots");
                (y0, (dpsi1_0 - r * y0) / w)
            }
            Psi1Case::C1Zero => match f.roots {
                Some((mu, _)) => {
                    let a1 = (dpsi1_0 - f.drift()) / mu;
                    (a1, psi1_0 - a1)
                }
                None => (dpsi1_0, psi1_0),
            },
        };
        f.a1 = a1;
        f.a2 = a2;
        f
    }

    /// Linear drift `a = u2 C2 psi2 / C3` of the `C1 = 0`, `C3 != 0` branch.
    fn drift(&self) -> f64 {
        let [_, c2, c3, _] = self.c23;
        self.u2 * c2 * self.psi2 / c3
    }

    /// Quadratic coefficient `-u2^2 C2 psi2 / 2` of the `C1 = C3 = 0` branch.
    fn quadratic(&self) -> f64 {
        -0.5 * self.u2 * self.u2 * self.c23[1] * self.psi2
    }

    /// `(psi1, psi1', psi1'')` at `t`.
    pub fn jet(&self, t: f64) -> (f64, f64, f64) {
        let (a1, a2, p) = (self.a1, self.a2, self.particular);
        match self.case {
            Psi1Case::BPos => {
                let (l1, l2) = self.roots.expect("real roots");
                let (x1, x2) = (a1 * (l1 * t).exp(), a2 * (l2 * t).exp());
                (x1 + x2 + p, l1 * x1 + l2 * x2, l1 * l1 * x1 + l2 * l2 * x2)
            }
            Psi1Case::BZero => {
                let (l, _) = self.roots.expect("double root");
                let e = (l * t).exp();
                let q = a1 * t + a2;
                (q * e + p, (a1 + l * q) * e, (2.0 * l * a1 + l * l * q) * e)
            }
            Psi1Case::BNeg => {
                let (r, w) = self.oscillation.expect("complex roots");
                let e = (r * t).exp();
                let (c, s) = ((w * t).cos(), (w * t).sin());
                let f = a1 * c + a2 * s;
                let df = -a1 * w * s + a2 * w * c;
                let ddf = -w * w * f;
                (e * f + p, e * (r * f + df), e * (r * r * f + 2.0 * r * df + ddf))
            }
            Psi1Case::C1Zero => match self.roots {
                Some((mu, _)) => {
                    let e = a1 * (mu * t).exp();
                    let a = self.drift();
                    (e + a * t + a2, mu * e + a, mu * mu * e)
                }
                None => {
                    let q = self.quadratic();
                    (q * t * t + a1 * t + a2, 2.0 * q * t + a1, 2.0 * q)
                }
            },
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.jet(t).0
    }

    /// `psi1'' - u2 C3 psi1' + u2^2 (C1 psi1 + C2 psi2)`.
    pub fn residual(&self, t: f64) -> f64 {
        let [c1, c2, c3, _] = self.c23;
        let (y, dy, ddy) = self.jet(t);
        ddy - self.u2 * c3 * dy + self.u2 * self.u2 * (c1 * y + c2 * self.psi2)
    }

    /// Bounded on the whole line: constants, or undamped oscillations.
    pub fn is_bounded(&self) -> bool {
        let nonconstant = self.a1 != 0.0 || self.a2 != 0.0;
        match self.case {
            Psi1Case::BNeg => !nonconstant || self.oscillation.is_some_and(|(r, _)| r.abs() <= TOL),
            Psi1Case::C1Zero => {
                // A2 is the constant term here.
                let forced = match self.roots {
                    Some(_) => self.drift() != 0.0,
                    None => self.quadratic() != 0.0,
                };
                !forced && self.a1 == 0.0
            }
            _ => !nonconstant,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WitnessKind {
    Constant,
    Oscillatory,
}

/// A normal covector along the abnormal curve:
/// `psi1 = k + a1 cos(w t) + a2 sin(w t)`, `psi2 = 1/u2`,
/// `psi3 = -psi1'/u2`, `psi4 = phi4 e^{C3 u2 t}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub kind: WitnessKind,
    pub s: Sign,
    pub u2: f64,
    pub c23: [f64; DIM],
    pub k: f64,
    pub a1: f64,
    pub a2: f64,
    pub omega: f64,
    pub phi4: f64,
    /// Largest `|F_U(psi1, psi2) - 1|` seen on the check grid.
    pub support_defect: f64,
    /// Time span of the check grid.
    pub checked_until: f64,
}

impl Witness {
    pub fn state(&self, t: f64) -> [f64; DIM] {
        let (c, s) = ((self.omega * t).cos(), (self.omega * t).sin());
        let psi1 = self.k + self.a1 * c + self.a2 * s;
        let dpsi1 = self.omega * (-self.a1 * s + self.a2 * c);
        [
            psi1,
            1.0 / self.u2,
            -dpsi1 / self.u2,
            self.phi4 * (self.c23[2] * self.u2 * t).exp(),
        ]
    }

    /// PMP maximum `F_U(psi1, psi2)` at `t`.
    pub fn hamiltonian(&self, body: &SeminormBody, t: f64) -> f64 {
        let psi = self.state(t);
        body.support([psi[0], psi[1]])
    }
}

fn level_defect(body: &SeminormBody, y: f64, psi1: impl Fn(f64) -> f64, horizon: f64) -> f64 {
    (0..=GRID_POINTS)
        .map(|i| {
            let t = horizon * i as f64 / GRID_POINTS as f64;
            (body.support([psi1(t), y]) - 1.0).abs()
        })
        .fold(0.0, f64::max)
}

/// Minimizes the convex function `k -> F_U(k, y)` by golden-section search.
fn slice_minimum(body: &SeminormBody, y: f64) -> (f64, f64) {
    let f = |k: f64| body.support([k, y]);
    let reach = 4.0 * y.abs().max(1.0) / body.inradius();
    let (mut lo, mut hi) = (-reach, reach);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    let k = 0.5 * (lo + hi);
    (k, f(k))
}

/// Half-widths `(left, right)` of `{k : F_U(k, y) <= 1}` around `k0`, found
/// by bisection.
fn level_interval(body: &SeminormBody, y: f64, k0: f64) -> (f64, f64) {
    let f = |k: f64| body.support([k, y]) - 1.0 - 1e-12;
    let reach = 4.0 * y.abs().max(1.0) / body.inradius() + k0.abs();
    let edge = |dir: f64| {
        let (mut inside, mut outside) = (0.0, reach);
        if f(k0 + dir * outside) <= 0.0 {
            return outside;
        }
        for _ in 0..200 {
            let mid = 0.5 * (inside + outside);
            if f(k0 + dir * mid) <= 0.0 {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        inside
    };
    (edge(-1.0), edge(1.0))
}

/// Every bounded branch of the closed-form family that satisfies
/// `F_U(psi1(t), 1/u2) = 1` on the check grid, constants first.
///
/// Boundedness is decided from the characteristic roots:
/// * `C1 != 0`: the constant `-C2 psi2 / C1`, plus undamped oscillations
///   around it when the roots are purely imaginary (`C3 = 0`, `C1 > 0`);
/// * `C1 = 0, C2 = 0`: any constant;
/// * `C1 = 0, C2 != 0`: nothing (every solution drifts).
pub fn bounded_witnesses(
    c23: &[f64; DIM],
    body: &SeminormBody,
    s: Sign,
    horizon: f64,
) -> Vec<Witness> {
    let control = ControlSpec::from_body(body, s);
    let u2 = control.u2;
    let y = 1.0 / u2;
    let [c1, c2, c3, _] = *c23;
    let base = Witness {
        kind: WitnessKind::Constant,
        s,
        u2,
        c23: *c23,
        k: 0.0,
        a1: 0.0,
        a2: 0.0,
        omega: 0.0,
        phi4: 1.0,
        support_defect: 0.0,
        checked_until: horizon,
    };
    let mut out = Vec::new();
    let k0 = if c1.abs() > TOL {
        -c2 * y / c1
    } else if c2.abs() > TOL {
        return out;
    } else {
        slice_minimum(body, y).0
    };
    let defect = level_defect(body, y, |_| k0, horizon);
    if defect <= SUPPORT_TOL {
        out.push(Witness {
            k: k0,
            support_defect: defect,
            ..base.clone()
        });
    }
    let closed = ClosedFormPsi1::new(c23, u2, y, 1.0, 0.0);
    let undamped = closed.case == Psi1Case::BNeg && c3.abs() <= TOL;
    if undamped && body.support([k0, y]) <= 1.0 + SUPPORT_TOL {
        let (left, right) = level_interval(body, y, k0);
        let amplitude = 0.999 * left.min(right);
        if amplitude >= MIN_AMPLITUDE {
            let (_, omega) = closed.oscillation.expect("complex roots");
            let span = horizon.max(TAU / omega.abs());
            let defect = level_defect(body, y, |t| k0 + amplitude * (omega * t).cos(), span);
            if defect <= SUPPORT_TOL {
                out.push(Witness {
                    kind: WitnessKind::Oscillatory,
                    k: k0,
                    a1: amplitude,
                    omega,
                    support_defect: defect,
                    checked_until: span,
                    ..base
                });
            }
        }
    }
    out
}

/// First witness found by [`bounded_witnesses`], if any.
pub fn witness_search(
    basis: &CanonicalBasis,
    body: &SeminormBody,
    s: Sign,
    horizon: f64,
) -> Option<Witness> {
    bounded_witnesses(&basis.c23, body, s, horizon).into_iter().next()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn shifted() -> SeminormBody {
        SeminormBody::disk([0.5, 0.0], 1.0).unwrap()
    }

    fn quad() -> SeminormBody {
        SeminormBody::polygon(vec![[1.0, 0.0], [0.0, 1.0], [-2.0, 0.0], [0.0, -1.0]]).unwrap()
    }

    #[test]
    fn engel_constants_keep_psi_constant() {
        let tr = integrate(&[0.0; 4], 1.0, &[0.3, 1.0, 0.0, -0.7], 5.0, 1e-3).unwrap();
        assert_eq!(tr.states.len(), 5001);
        let last = tr.states.last().unwrap();
        assert!((last.t - 5.0).abs() < 1e-12);
        assert_eq!(last.psi, [0.3, 1.0, 0.0, -0.7]);
    }

    #[test]
    fn psi4_decays_exponentially() {
        let u2 = 0.8;
        let tr = integrate(&[0.0, 0.0, -1.0, 0.0], u2, &[0.0, 1.0 / u2, 0.0, 2.0], 5.0, 1e-3).unwrap();
        for st in &tr.states {
            assert!((st.psi[3] - 2.0 * (-u2 * st.t).exp()).abs() < 1e-9);
        }
        assert!(tr.max_deviation < 1e-9);
    }

    #[test]
    fn oscillator_matches_cosine() {
        let u2 = 1.3;
        let c = [1.0, 0.0, 0.0, 0.0];
        let tr = integrate(&c, u2, &[1.0, 1.0 / u2, 0.0, 1.0], 5.0, 1e-3).unwrap();
        let cf = ClosedFormPsi1::from_initial(&c, u2, 1.0 / u2, 1.0, 0.0);
        assert_eq!(cf.case, Psi1Case::BNeg);
        for st in &tr.states {
            assert!((st.psi[0] - (u2 * st.t).cos()).abs() < 1e-6);
            assert!((st.psi[0] - cf.eval(st.t)).abs() < 1e-6);
        }
    }

    #[test]
    fn integrate_rejects_bad_steps() {
        assert!(integrate(&[0.0; 4], 1.0, &[0.0; 4], 5.0, 0.0).is_err());
        assert!(integrate(&[0.0; 4], 1.0, &[0.0; 4], -1.0, 0.1).is_err());
    }

    #[test]
    fn closed_form_cases() {
        let g47 = closed_form_psi1(&[1.0, 0.0, -2.0, 0.0], 1.0, 0.5, 2.0);
        assert_eq!(g47.case, Psi1Case::BZero);
        assert_eq!(g47.b, 0.0);
        let t: f64 = 0.7;
        assert!((g47.eval(t) - (0.5 * t + 2.0) * (-t).exp()).abs() < 1e-15);

        let osc = closed_form_psi1(&[1.0, 0.0, 0.0, 0.0], 2.0, 1.0, 0.5);
        assert_eq!(osc.case, Psi1Case::BNeg);
        assert_eq!(osc.b, -4.0);
        assert!((osc.eval(t) - ((2.0 * t).cos() + 0.5 * (2.0 * t).sin())).abs() < 1e-15);

        let c = 3.0;
        let u2 = 0.5;
        let quad = closed_form_psi1(&[0.0, c, 0.0, 0.0], u2, 1.0, 2.0);
        assert_eq!(quad.case, Psi1Case::C1Zero);
        assert!((quad.eval(t) - (-0.5 * c * u2 * t * t + t + 2.0)).abs() < 1e-15);

        let pos = closed_form_psi1(&[-1.0, 0.0, 0.0, 0.0], 1.0, 1.0, 1.0);
        assert_eq!(pos.case, Psi1Case::BPos);
        assert_eq!(pos.roots, Some((1.0, -1.0)));
    }

    #[test]
    fn boundedness_from_roots() {
        assert!(closed_form_psi1(&[1.0, 0.0, 0.0, 0.0], 1.0, 1.0, 0.0).is_bounded());
        assert!(!closed_form_psi1(&[1.0, 0.0, 0.5, 0.0], 1.0, 1.0, 0.0).is_bounded());
        assert!(!closed_form_psi1(&[-1.0, 0.0, 0.0, 0.0], 1.0, 1.0, 0.0).is_bounded());
        assert!(closed_form_psi1(&[-1.0, 0.0, 0.0, 0.0], 1.0, 0.0, 0.0).is_bounded());
        assert!(!closed_form_psi1(&[0.0, 1.0, 0.0, 0.0], 1.0, 0.0, 0.0).is_bounded());
        assert!(closed_form_psi1(&[0.0, 0.0, -1.0, 0.0], 1.0, 0.0, 3.0).is_bounded());
    }

    #[test]
    fn witnesses_for_examples() {
        let g47 = [1.0, 0.0, -2.0, 0.0];
        for s in Sign::BOTH {
            assert!(bounded_witnesses(&g47, &shifted(), s, 5.0).is_empty());
            let w = bounded_witnesses(&g47, &SeminormBody::unit_disk(), s, 5.0);
            assert_eq!(w[0].kind, WitnessKind::Constant);
            assert_eq!(w[0].k, 0.0);
        }
        let engel = [0.0; 4];
        for body in [shifted(), quad(), SeminormBody::square(1.0).unwrap()] {
            for s in Sign::BOTH {
                let w = &bounded_witnesses(&engel, &body, s, 5.0)[0];
                assert!((body.support([w.k, 1.0 / w.u2]) - 1.0).abs() < 1e-9);
            }
        }
        // C1 = 0, C2 != 0: every branch drifts.
        assert!(bounded_witnesses(&[0.0, -2.0, 0.0, 0.0], &SeminormBody::unit_disk(), Sign::Plus, 5.0).is_empty());
    }

    #[test]
    fn oscillating_witness_on_flat_top() {
        // The quadrilateral's polar has the top edge k in [-1/2, 1] at
        // height 1, so psi1 may oscillate with amplitude just under 1/2.
        let ws = bounded_witnesses(&[1.0, 0.0, 0.0, 0.0], &quad(), Sign::Plus, 5.0);
        let osc = ws.iter().find(|w| w.kind == WitnessKind::Oscillatory).unwrap();
        assert!((osc.a1 - 0.4995).abs() < 1e-6);
        assert!(osc.checked_until >= TAU / osc.omega);
        // A smooth body leaves no room to oscillate.
        let ws = bounded_witnesses(&[1.0, 0.0, 0.0, 0.0], &SeminormBody::unit_disk(), Sign::Plus, 5.0);
        assert!(ws.iter().all(|w| w.kind == WitnessKind::Constant));
    }

    #[test]
    fn witness_solves_the_system() {
        let c = [1.0, 0.0, 0.0, 0.0];
        for w in bounded_witnesses(&c, &quad(), Sign::Minus, 5.0) {
            let tr = integrate(&c, w.u2, &w.state(0.0), 5.0, 1e-3).unwrap();
            for st in &tr.states {
                let exact = w.state(st.t);
                for i in 0..DIM {
                    assert!((st.psi[i] - exact[i]).abs() < 1e-8);
                }
                assert!((quad().support([st.psi[0], st.psi[1]]) - 1.0).abs() < 1e-8);
            }
        }
    }

    proptest! {
        #[test]
        fn rk4_matches_exponential(c in prop::array::uniform4(-2.0f64..2.0), u2 in 0.2f64..2.0, psi in prop::array::uniform4(-1.0f64..1.0)) {
            let tr = integrate(&c, u2, &psi, 5.0, 1e-3).unwrap();
            let scale = tr.exact.iter().flat_map(|s| s.psi).fold(1.0f64, |m, x| m.max(x.abs()));
            prop_assert!(tr.max_deviation <= 1e-6 * scale);
            prop_assert!(tr.states.iter().all(|s| s.psi[1] == psi[1]));
        }

        #[test]
        fn closed_form_matches_integrator(c1 in -2.0f64..2.0, c2 in -2.0f64..2.0, c3 in -2.0f64..2.0, u2 in 0.2f64..2.0, p1 in -1.0f64..1.0, p3 in -1.0f64..1.0) {
            let c = [c1, c2, c3, 0.0];
            let psi2 = 1.0 / u2;
            let tr = integrate(&c, u2, &[p1, psi2, p3, 0.0], 5.0, 1e-3).unwrap();
            let cf = ClosedFormPsi1::from_initial(&c, u2, psi2, p1, -u2 * p3);
            for st in tr.states.iter().step_by(50) {
                let scale = st.psi[0].abs().max(1.0);
                prop_assert!((cf.eval(st.t) - st.psi[0]).abs() <= 1e-6 * scale);
                prop_assert!(cf.residual(st.t).abs() <= 1e-8 * scale * (1.0 + u2 * u2));
            }
        }
    }
}
