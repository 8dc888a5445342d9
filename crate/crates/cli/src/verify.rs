//! Catalog self-consistency suites behind `abnorm verify`.

use abnorm_core::catalog::{AlgebraId, Catalog};
use abnorm_core::error::Error;
use abnorm_core::lie::{Vector4, TOL};
use abnorm_core::{canonical_basis, check_prop2, generates, Subspace};
use rand::Rng;

pub const JACOBI_TOL: f64 = 1e-12;
pub const AUTOMORPHISM_TOL: f64 = 1e-10;
pub const PROP2_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct Settings {
    /// Replaces every per-suite threshold when set.
    pub tol: Option<f64>,
    pub draws: usize,
    pub samples: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            tol: None,
            draws: 100,
            samples: 1000,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub algebra: AlgebraId,
    pub suite: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn check(algebra: AlgebraId, suite: &'static str, pass: bool, detail: String) -> Check {
    Check {
        algebra,
        suite,
        pass,
        detail,
    }
}

pub fn random_plane<R: Rng + ?Sized>(rng: &mut R) -> Subspace {
    loop {
        let mut v = || Vector4(std::array::from_fn(|_| rng.random_range(-1.0..1.0)));
        if let Ok(p) = Subspace::new(vec![v(), v()]) {
            return p;
        }
    }
}

/// Runs every suite on one parameter point.
pub fn verify_id<R: Rng + ?Sized>(
    catalog: &Catalog,
    id: &AlgebraId,
    settings: &Settings,
    rng: &mut R,
) -> Vec<Check> {
    let mut out = Vec::new();
    let alg = match catalog.instantiate(id) {
        Ok(a) => a,
        Err(e) => {
            out.push(check(*id, "instantiate", false, e.to_string()));
            return out;
        }
    };

    let tol = settings.tol.unwrap_or(JACOBI_TOL);
    let defect = alg.jacobi_defect();
    out.push(check(*id, "jacobi", defect <= tol, format!("defect {defect:.3e}")));

    match catalog.automorphism_family(id) {
        Ok(fam) => {
            let tol = settings.tol.unwrap_or(AUTOMORPHISM_TOL);
            let mut worst: f64 = 0.0;
            let mut failure = None;
            for _ in 0..settings.draws {
                match fam.sample(rng) {
                    Ok(m) => worst = worst.max(alg.automorphism_defect(&m)),
                    Err(e) => {
                        failure = Some(e.to_string());
                        break;
                    }
                }
            }
            let (pass, detail) = match failure {
                Some(e) => (false, e),
                None => (
                    worst <= tol,
                    format!("{} draws, max defect {worst:.3e}", settings.draws),
                ),
            };
            out.push(check(*id, "automorphisms", pass, detail));
        }
        Err(Error::NoTableEntry(_)) => {
            out.push(check(*id, "automorphisms", true, "no table entry".into()));
        }
        Err(e) => out.push(check(*id, "automorphisms", false, e.to_string())),
    }

    let excluded = catalog.has_no_generator(id).unwrap_or(false);
    let planes = catalog.known_generating_subspaces(id).unwrap_or_default();
    if excluded {
        let hits = (0..settings.samples)
            .filter(|_| generates(&alg, &random_plane(rng)).generates)
            .count();
        out.push(check(
            *id,
            "no-generator",
            hits == 0 && planes.is_empty(),
            format!(
                "no generating 2D subspace among {} random samples ({hits} found)",
                settings.samples
            ),
        ));
        return out;
    }
    if planes.is_empty() {
        out.push(check(*id, "generation", false, "no generating plane listed".into()));
        return out;
    }
    let tol = settings.tol.unwrap_or(PROP2_TOL);
    for plane in planes {
        let name = plane.label.clone().unwrap_or_else(|| "plane".into());
        let p = match plane.subspace() {
            Ok(p) => p,
            Err(e) => {
                out.push(check(*id, "generation", false, format!("{name}: {e}")));
                continue;
            }
        };
        let flag = generates(&alg, &p);
        out.push(check(
            *id,
            "generation",
            flag.generates,
            format!("{name}: flag dims {:?}", flag.dims),
        ));
        if !flag.generates {
            continue;
        }
        match canonical_basis(&alg, &p) {
            Ok(b) => {
                let d = check_prop2(&b);
                let [c1, c2, _, c4] = b.c23;
                let shape = c4.abs() <= TOL && (c1.abs() <= TOL || c2.abs() <= TOL);
                out.push(check(
                    *id,
                    "prop2",
                    d <= tol && shape,
                    format!("{name}: defect {d:.3e}, C23 = {:?}", b.c23),
                ));
            }
            Err(e) => out.push(check(*id, "prop2", false, format!("{name}: {e}"))),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use abnorm_core::catalog::Family;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn engel_passes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let checks = verify_id(
            Catalog::builtin(),
            &AlgebraId::new(Family::G41),
            &Settings::default(),
            &mut rng,
        );
        assert!(checks.iter().all(|c| c.pass), "{checks:?}");
        assert!(checks.iter().any(|c| c.suite == "prop2"));
    }

    #[test]
    fn excluded_family_is_confirmed() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let checks = verify_id(
            Catalog::builtin(),
            &AlgebraId::with_params(Family::G45, 0.5, 1.0),
            &Settings::default(),
            &mut rng,
        );
        let c = checks.iter().find(|c| c.suite == "no-generator").unwrap();
        assert!(c.pass, "{c:?}");
    }

    #[test]
    fn absurd_tolerance_fails() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let settings = Settings {
            tol: Some(-1.0),
            ..Settings::default()
        };
        let checks = verify_id(Catalog::builtin(), &AlgebraId::new(Family::G410), &settings, &mut rng);
        assert!(checks.iter().any(|c| !c.pass));
    }
}
