//! Classification reports.

use abnorm_core::abnormal::{extremals_in, Dim3Verdict, ORACLE_HORIZON};
use abnorm_core::catalog::Catalog;
use abnorm_core::lie::Vector4;
use abnorm_core::{
    canonical_basis, check_prop2, classify_basis, classify_dim3, generates, theorem3_dispatch,
    witness_search, BodyShape, CanonicalBasis, Dim3Report, ExtremalDescriptor, FlagReport,
    SeminormBody, Sign, Sl2Tag, StrictnessReport, Theorem3Case, Verdict, Witness,
};
use serde::Serialize;

use crate::config::{BodyFrame, JobConfig};
use crate::{Failure, EXIT_NON_GENERATING};

#[derive(Clone, Debug, Serialize)]
pub struct CanonicalSection {
    pub basis: CanonicalBasis,
    pub prop2_defect: f64,
    pub frame_defect: f64,
    /// Both defects are within `options.tol`.
    pub checks_ok: bool,
    /// The body as used, in the canonical frame.
    pub body: BodyShape,
}

#[derive(Clone, Debug, Serialize)]
pub struct DispatchSummary {
    pub case: Theorem3Case,
    pub sl2_type: Option<Sl2Tag>,
    pub theorem: Vec<(Sign, Verdict)>,
    pub consistent: bool,
    pub tension: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleEntry {
    pub s: Sign,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
}

/// Everything `classify` learns about one job. Field order is the output order.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub config: JobConfig,
    pub algebra: String,
    pub subspace: Vec<Vector4>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subspace_label: Option<String>,
    pub flag: FlagReport,
    /// `strict`, `nonstrict`, `metric-dependent` or `non-generating`.
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub canonical: Option<CanonicalSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extremals: Option<Vec<ExtremalDescriptor>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strictness: Option<StrictnessReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim3: Option<Dim3Report>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theorem3: Option<DispatchSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<Vec<OracleEntry>>,
}

impl Report {
    pub fn generates(&self) -> bool {
        self.flag.generates
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report fields are serializable");
        s.push('\n');
        s
    }

    /// Exit status implied by the report alone.
    pub fn exit_code(&self) -> i32 {
        if self.generates() {
            0
        } else {
            EXIT_NON_GENERATING
        }
    }
}

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::Strict => "strict",
        Verdict::NonStrict => "nonstrict",
    }
}

/// Resolves the body of a planar job in the canonical frame.
pub fn canonical_body(config: &JobConfig, basis: &CanonicalBasis) -> Result<SeminormBody, Failure> {
    let shape = config
        .body
        .clone()
        .ok_or_else(|| Failure::usage("a planar subspace needs a body"))?;
    let body = SeminormBody::new(shape).map_err(Failure::usage_from)?;
    match config.body_frame {
        BodyFrame::Canonical => Ok(body),
        BodyFrame::Subspace => basis.body_from_subspace_frame(&body).map_err(Failure::internal_from),
    }
}

pub fn build_report(catalog: &Catalog, config: &JobConfig) -> Result<Report, Failure> {
    let resolved = config.resolve(catalog)?;
    let alg = catalog.instantiate(&config.algebra).map_err(Failure::usage_from)?;
    let p = resolved.subspace;
    let flag = generates(&alg, &p);
    let mut report = Report {
        config: config.clone(),
        algebra: config.algebra.to_string(),
        subspace: p.vectors().to_vec(),
        subspace_label: resolved.known.and_then(|k| k.label),
        flag: flag.clone(),
        verdict: "non-generating".into(),
        canonical: None,
        extremals: None,
        strictness: None,
        dim3: None,
        theorem3: None,
        oracle: None,
    };
    if !flag.generates {
        return Ok(report);
    }
    if p.dim() == 3 {
        let d3 = classify_dim3(&alg, &p, config.metric).map_err(Failure::internal_from)?;
        report.verdict = match (d3.verdict, &d3.metric_check) {
            (None, _) => "none".into(),
            (Some(Dim3Verdict::NonStrictForAllMetrics), _) => "nonstrict".into(),
            (Some(Dim3Verdict::StrictForAllMetrics), _) => "strict".into(),
            (Some(Dim3Verdict::MetricDependent), Some(m)) => {
                if m.non_strict { "nonstrict" } else { "strict" }.into()
            }
            (Some(Dim3Verdict::MetricDependent), None) => "metric-dependent".into(),
        };
        report.dim3 = Some(d3);
        return Ok(report);
    }

    let basis = canonical_basis(&alg, &p).map_err(Failure::internal_from)?;
    let body = canonical_body(config, &basis)?;
    let prop2 = check_prop2(&basis);
    let frame = basis.frame_defect(&alg);
    let strictness = classify_basis(&basis, &body);
    let dispatch = theorem3_dispatch(catalog, &config.algebra, &p, &body).map_err(Failure::internal_from)?;
    let oracle = Sign::BOTH
        .iter()
        .map(|&s| {
            let witness = witness_search(&basis, &body, s, ORACLE_HORIZON);
            OracleEntry {
                s,
                verdict: if witness.is_some() {
                    Verdict::NonStrict
                } else {
                    Verdict::Strict
                },
                witness,
            }
        })
        .collect();
    report.verdict = verdict_word(strictness.combined).into();
    report.extremals = Some(extremals_in(&basis, &body));
    report.canonical = Some(CanonicalSection {
        checks_ok: prop2 <= config.options.tol && frame <= config.options.tol,
        basis,
        prop2_defect: prop2,
        frame_defect: frame,
        body: body.shape().clone(),
    });
    report.strictness = Some(strictness);
    report.theorem3 = Some(DispatchSummary {
        case: dispatch.case,
        sl2_type: dispatch.sl2_type,
        theorem: dispatch.theorem,
        consistent: dispatch.consistent,
        tension: dispatch.tension,
    });
    report.oracle = Some(oracle);
    Ok(report)
}
