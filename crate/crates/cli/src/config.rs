//! Job files for `classify`, `ode` and `sweep`.

use std::path::Path;

use abnorm_core::catalog::{AlgebraId, Catalog, KnownSubspace};
use abnorm_core::lie::Vector4;
use abnorm_core::{BodyShape, Sign, Subspace};
use serde::{Deserialize, Serialize};

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KnownTag {
    Known,
}

/// `"known"`, `{"known": "<label>"}` or explicit spanning vectors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SubspaceSpec {
    Known(KnownTag),
    Labeled { known: String },
    Vectors(Vec<[f64; 4]>),
}

/// Frame the body coordinates refer to.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BodyFrame {
    #[default]
    Canonical,
    /// Coordinates in the two given spanners.
    Subspace,
}

fn default_tol() -> f64 {
    1e-9
}

fn default_horizon() -> f64 {
    5.0
}

fn default_dt() -> f64 {
    1e-3
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobOptions {
    /// Threshold for the numerical self-checks recorded in the report.
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_horizon")]
    pub horizon: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    /// Initial covector for `ode`. Kept loose so a bad length is reported
    /// as a usage error rather than a parse failure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi0: Option<Vec<f64>>,
    #[serde(default = "default_sign")]
    pub s: Sign,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

fn default_sign() -> Sign {
    Sign::Plus
}

impl Default for JobOptions {
    fn default() -> Self {
        JobOptions {
            tol: default_tol(),
            horizon: default_horizon(),
            dt: default_dt(),
            psi0: None,
            s: default_sign(),
            out: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub algebra: AlgebraId,
    pub subspace: SubspaceSpec,
    /// Required for planes, ignored for 3-dimensional subspaces.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub body: Option<BodyShape>,
    #[serde(default)]
    pub body_frame: BodyFrame,
    /// Gram matrix on the spanners of a 3-dimensional subspace.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<[[f64; 3]; 3]>,
    #[serde(default)]
    pub options: JobOptions,
}

/// A subspace resolved against the catalog.
pub struct Resolved {
    pub subspace: Subspace,
    pub known: Option<KnownSubspace>,
}

impl JobConfig {
    pub fn from_path(path: &Path) -> Result<JobConfig, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
        JobConfig::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<JobConfig, Failure> {
        serde_json::from_str(text).map_err(|e| Failure::usage(format!("bad job config: {e}")))
    }

    pub fn resolve(&self, catalog: &Catalog) -> Result<Resolved, Failure> {
        catalog.validate(&self.algebra).map_err(Failure::usage_from)?;
        match &self.subspace {
            SubspaceSpec::Vectors(vs) => {
                if !(2..=3).contains(&vs.len()) {
                    return Err(Failure::usage(format!(
                        "subspace needs 2 or 3 vectors, got {}",
                        vs.len()
                    )));
                }
                let vectors = vs.iter().map(|v| Vector4(*v)).collect();
                let subspace = Subspace::new(vectors).map_err(Failure::usage_from)?;
                Ok(Resolved {
                    subspace,
                    known: None,
                })
            }
            SubspaceSpec::Known(_) | SubspaceSpec::Labeled { .. } => {
                let planes = catalog
                    .known_generating_subspaces(&self.algebra)
                    .map_err(Failure::usage_from)?;
                let pick = match &self.subspace {
                    SubspaceSpec::Labeled { known } => planes
                        .into_iter()
                        .find(|k| k.label.as_deref() == Some(known.as_str())),
                    _ => planes.into_iter().next(),
                };
                let known = pick.ok_or_else(|| {
                    Failure::usage(format!("no matching known plane for {}", self.algebra))
                })?;
                let subspace = known.subspace().map_err(Failure::internal_from)?;
                Ok(Resolved {
                    subspace,
                    known: Some(known),
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_in() {
        let c = JobConfig::from_json(
            r#"{"algebra": {"family": "g4.10"}, "subspace": "known",
                "body": {"disk": {"center": [0, 0], "radius": 1}}}"#,
        )
        .unwrap();
        assert_eq!(c.subspace, SubspaceSpec::Known(KnownTag::Known));
        assert_eq!(c.options, JobOptions::default());
        assert_eq!(c.body_frame, BodyFrame::Canonical);
    }

    #[test]
    fn labeled_and_explicit_subspaces() {
        let c = JobConfig::from_json(
            r#"{"algebra": {"family": "g3.6+g1"}, "subspace": {"known": "IIa"}}"#,
        )
        .unwrap();
        assert_eq!(
            c.subspace,
            SubspaceSpec::Labeled {
                known: "IIa".into()
            }
        );
        let c = JobConfig::from_json(
            r#"{"algebra": {"family": "g4.1"}, "subspace": [[0,0,0,1],[1,0,0,0]]}"#,
        )
        .unwrap();
        let r = c.resolve(Catalog::builtin()).unwrap();
        assert_eq!(r.subspace.dim(), 2);
    }

    #[test]
    fn unknown_keys_and_bad_strings_are_rejected() {
        assert!(JobConfig::from_json(r#"{"algebra": {"family": "g4.1"}, "subspace": "nope"}"#).is_err());
        assert!(JobConfig::from_json(
            r#"{"algebra": {"family": "g4.1"}, "subspace": "known", "extra": 1}"#
        )
        .is_err());
        let e = JobConfig::from_json(r#"{"algebra": {"family": "g9.9"}, "subspace": "known"}"#)
            .unwrap_err();
        assert_eq!(e.code, crate::EXIT_USAGE);
    }

    #[test]
    fn serialization_round_trips() {
        let c = JobConfig::from_json(
            r#"{"algebra": {"family": "g4.8", "alpha": 0.5}, "subspace": [[1,0,0,0],[0,1,0,0]],
                "body": {"polygon": [[1,0],[0,1],[-1,0],[0,-1]]}, "body_frame": "subspace",
                "options": {"psi0": [1, 2, 3, 4], "s": "-1"}}"#,
        )
        .unwrap();
        let back: JobConfig = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
    }
}
