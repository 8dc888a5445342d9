use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use abnorm_core::catalog::{AlgebraId, Catalog, Family};
use abnorm_core::lie::TOL;
use abnorm_core::{
    canonical_basis, integrate, witness_search, ClosedFormPsi1, ControlSpec, Psi1Case, Sign,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::JobConfig;
use crate::report::{build_report, canonical_body, Report};
use crate::verify::{verify_id, Check, Settings};
use crate::{Failure, EXIT_DATA, EXIT_FAILED, EXIT_NON_GENERATING};

pub fn load_catalog() -> Result<Catalog, Failure> {
    Catalog::load().map_err(|e| Failure::new(EXIT_DATA, e.to_string()))
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::new(EXIT_FAILED, format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Failure::new(EXIT_FAILED, e.to_string()))
        }
    }
}

pub fn parse_family(s: &str) -> Result<Family, Failure> {
    s.parse().map_err(Failure::usage_from)
}

pub fn catalog_list(catalog: &Catalog) -> String {
    let mut out = String::new();
    for f in catalog.families() {
        let params = f.param_names();
        let params = if params.is_empty() {
            "-".to_string()
        } else {
            params.join(",")
        };
        let _ = writeln!(out, "{:<8} params: {:<11} constraint: {}", f.as_str(), params, catalog.constraint_text(f));
    }
    out
}

pub fn catalog_show(
    catalog: &Catalog,
    family: Family,
    alpha: Option<f64>,
    beta: Option<f64>,
) -> Result<String, Failure> {
    let mut out = String::new();
    let _ = writeln!(out, "{}", family.as_str());
    let _ = writeln!(out, "constraint: {}", catalog.constraint_text(family));
    for (when, brackets) in catalog.bracket_rows_text(family) {
        let _ = writeln!(out, "brackets (when {when}):");
        for b in brackets {
            let _ = writeln!(out, "  {b}");
        }
    }
    for (when, params, constraint, mats) in catalog.automorphism_rows_text(family) {
        let _ = writeln!(
            out,
            "automorphisms (when {when}; params {}; constraint {constraint}):",
            params.join(",")
        );
        for m in mats {
            for row in m {
                let _ = writeln!(out, "  [{}]", row.join(", "));
            }
            let _ = writeln!(out);
        }
    }
    if let Some(note) = catalog.no_generator_note(family) {
        let _ = writeln!(out, "no generating plane: {note}");
    }
    if family.param_names().is_empty() || alpha.is_some() {
        let id = AlgebraId {
            family,
            alpha,
            beta,
        };
        let planes = catalog.known_generating_subspaces(&id).map_err(Failure::usage_from)?;
        for k in planes {
            let _ = writeln!(
                out,
                "generating plane {}: span({}, {})",
                k.label.as_deref().unwrap_or("-"),
                k.span[0],
                k.span[1]
            );
        }
    }
    Ok(out)
}

fn scope_ids(
    catalog: &Catalog,
    scope: &str,
    alpha: Option<f64>,
    beta: Option<f64>,
) -> Result<Vec<AlgebraId>, Failure> {
    if scope == "all" {
        return Ok(catalog.families().flat_map(|f| catalog.parameter_grid(f)).collect());
    }
    let family = parse_family(scope)?;
    let id = AlgebraId {
        family,
        alpha,
        beta,
    };
    catalog.validate(&id).map_err(Failure::usage_from)?;
    Ok(vec![id])
}

/// Runs the suites over `scope` and renders the summary. Returns the text and
/// whether every check passed.
pub fn verify(
    catalog: &Catalog,
    scope: &str,
    alpha: Option<f64>,
    beta: Option<f64>,
    settings: &Settings,
    seed: u64,
) -> Result<(String, bool), Failure> {
    let ids = scope_ids(catalog, scope, alpha, beta)?;
    let checks: Vec<Vec<Check>> = ids
        .par_iter()
        .enumerate()
        .map(|(i, id)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            verify_id(catalog, id, settings, &mut rng)
        })
        .collect();
    let mut out = String::new();
    let all_pass = checks.iter().flatten().all(|c| c.pass);
    if ids.len() == 1 {
        for c in &checks[0] {
            let _ = writeln!(
                out,
                "{} {} {}: {}",
                if c.pass { "ok  " } else { "FAIL" },
                c.algebra,
                c.suite,
                c.detail
            );
        }
    } else {
        for f in catalog.families() {
            let fam: Vec<&Check> = checks.iter().flatten().filter(|c| c.algebra.family == f).collect();
            let points = ids.iter().filter(|id| id.family == f).count();
            let failed = fam.iter().filter(|c| !c.pass).count();
            let suites = |s: &str| fam.iter().filter(|c| c.suite == s).count();
            let _ = writeln!(
                out,
                "{} {:<8} {points} parameter points, {} checks (jacobi {}, automorphisms {}, planes {}, no-generator {})",
                if failed == 0 { "ok  " } else { "FAIL" },
                f.as_str(),
                fam.len(),
                suites("jacobi"),
                suites("automorphisms"),
                suites("prop2"),
                suites("no-generator"),
            );
            for c in fam.iter().filter(|c| !c.pass) {
                let _ = writeln!(out, "     {} {}: {}", c.algebra, c.suite, c.detail);
            }
        }
    }
    let _ = writeln!(out, "{}", if all_pass { "all checks passed" } else { "some checks failed" });
    Ok((out, all_pass))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expect {
    Strict,
    NonStrict,
}

impl Expect {
    fn word(self) -> &'static str {
        match self {
            Expect::Strict => "strict",
            Expect::NonStrict => "nonstrict",
        }
    }
}

/// Writes the report and returns the exit status.
pub fn classify(
    catalog: &Catalog,
    config_path: &Path,
    tol: Option<f64>,
    expect: Option<Expect>,
    out: Option<&Path>,
) -> Result<i32, Failure> {
    let mut config = JobConfig::from_path(config_path)?;
    if let Some(t) = tol {
        config.options.tol = t;
    }
    let report = build_report(catalog, &config)?;
    let out: Option<PathBuf> = out.map(Path::to_path_buf).or_else(|| config.options.out.as_ref().map(PathBuf::from));
    write_output(out.as_deref(), &report.to_json())?;
    if !report.generates() {
        eprintln!("subspace does not generate: flag dims {:?}", report.flag.dims);
        return Ok(EXIT_NON_GENERATING);
    }
    if let Some(e) = expect {
        if report.verdict != e.word() {
            eprintln!("expected {}, got {}", e.word(), report.verdict);
            return Ok(EXIT_FAILED);
        }
    }
    Ok(0)
}

pub fn parse_psi0(text: &str) -> Result<[f64; 4], Failure> {
    let values: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::usage(format!("bad initial covector `{text}`: {e}")))?;
    to_psi0(&values)
}

fn to_psi0(values: &[f64]) -> Result<[f64; 4], Failure> {
    <[f64; 4]>::try_from(values)
        .map_err(|_| Failure::usage(format!("initial covector needs 4 entries, got {}", values.len())))
}

pub struct OdeArgs<'a> {
    pub config: &'a Path,
    pub psi0: Option<&'a str>,
    pub horizon: Option<f64>,
    pub dt: Option<f64>,
    pub sign: Option<Sign>,
    pub out: Option<&'a Path>,
}

/// CSV of the RK4 trajectory plus comparison statistics.
pub fn ode_run(catalog: &Catalog, args: &OdeArgs) -> Result<(String, String), Failure> {
    let config = JobConfig::from_path(args.config)?;
    let psi0_override = match args.psi0 {
        Some(text) => Some(parse_psi0(text)?),
        None => config.options.psi0.as_deref().map(to_psi0).transpose()?,
    };
    let resolved = config.resolve(catalog)?;
    let alg = catalog.instantiate(&config.algebra).map_err(Failure::usage_from)?;
    let basis = match canonical_basis(&alg, &resolved.subspace) {
        Ok(b) => b,
        Err(abnorm_core::error::Error::NotGenerating(dims)) => {
            return Err(Failure::new(
                EXIT_NON_GENERATING,
                format!("subspace does not generate: flag dims {dims:?}"),
            ))
        }
        Err(e) => return Err(Failure::usage_from(e)),
    };
    let body = canonical_body(&config, &basis)?;
    let s = args.sign.unwrap_or(config.options.s);
    let u2 = ControlSpec::from_body(&body, s).u2;
    let c23 = basis.c23;
    let psi0 = psi0_override.unwrap_or_else(|| match witness_search(&basis, &body, s, config.options.horizon) {
        Some(w) => w.state(0.0),
        None => [0.0, 1.0 / u2, 0.0, 1.0],
    });
    let horizon = args.horizon.unwrap_or(config.options.horizon);
    let dt = args.dt.unwrap_or(config.options.dt);
    let traj = integrate(&c23, u2, &psi0, horizon, dt).map_err(Failure::usage_from)?;

    let mut csv = String::from("t,psi1,psi2,psi3,psi4\n");
    for st in &traj.states {
        let [a, b, c, d] = st.psi;
        let _ = writeln!(csv, "{},{a},{b},{c},{d}", st.t);
    }

    let mut stats = String::new();
    let _ = writeln!(stats, "C23 = {c23:?}, s = {s}, u2 = {u2}");
    let _ = writeln!(stats, "steps: {}", traj.states.len() - 1);
    let _ = writeln!(stats, "max deviation vs matrix exponential: {:.3e}", traj.max_deviation);
    // psi1' = -u2 psi3 and psi2 stays constant.
    let closed = ClosedFormPsi1::from_initial(&c23, u2, psi0[1], psi0[0], -u2 * psi0[2]);
    let dev1 = traj
        .states
        .iter()
        .map(|st| (st.psi[0] - closed.eval(st.t)).abs())
        .fold(0.0, f64::max);
    let _ = writeln!(stats, "closed-form psi1 ({:?}) max deviation: {dev1:.3e}", closed.case);
    if c23[1].abs() <= TOL {
        let rate = c23[2] * u2;
        let dev4 = traj
            .states
            .iter()
            .map(|st| (st.psi[3] - psi0[3] * (rate * st.t).exp()).abs())
            .fold(0.0, f64::max);
        let _ = writeln!(stats, "psi4 vs psi4(0) exp({rate} t) max deviation: {dev4:.3e}");
    }
    if closed.case == Psi1Case::BNeg {
        let (r, w) = closed.oscillation.expect("complex roots");
        let _ = writeln!(
            stats,
            "oscillation: frequency {w}, period {}, growth rate {r}",
            std::f64::consts::TAU / w
        );
    }
    Ok((csv, stats))
}

pub fn ode(catalog: &Catalog, args: &OdeArgs) -> Result<i32, Failure> {
    let (csv, stats) = ode_run(catalog, args)?;
    write_output(args.out, &csv)?;
    eprint!("{stats}");
    Ok(0)
}

/// `{"jobs": [...]}` or a bare array.
#[derive(Deserialize)]
#[serde(untagged)]
enum SweepFile {
    Wrapped { jobs: Vec<JobConfig> },
    Bare(Vec<JobConfig>),
}

#[derive(Serialize)]
pub struct SweepEntry {
    pub index: usize,
    pub exit_code: i32,
    pub verdict: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<Report>,
}

pub fn sweep_run(catalog: &Catalog, text: &str, tol: Option<f64>) -> Result<Vec<SweepEntry>, Failure> {
    let jobs = match serde_json::from_str::<SweepFile>(text)
        .map_err(|e| Failure::usage(format!("bad sweep file: {e}")))?
    {
        SweepFile::Wrapped { jobs } | SweepFile::Bare(jobs) => jobs,
    };
    Ok(jobs
        .into_par_iter()
        .enumerate()
        .map(|(index, mut job)| {
            if let Some(t) = tol {
                job.options.tol = t;
            }
            match build_report(catalog, &job) {
                Ok(r) => SweepEntry {
                    index,
                    exit_code: r.exit_code(),
                    verdict: Some(r.verdict.clone()),
                    error: None,
                    report: Some(r),
                },
                Err(f) => SweepEntry {
                    index,
                    exit_code: f.code,
                    verdict: None,
                    error: Some(f.message),
                    report: None,
                },
            }
        })
        .collect())
}

/// Exit 0 when every job produced a report, otherwise the largest job code.
pub fn sweep(catalog: &Catalog, path: &Path, tol: Option<f64>, out: Option<&Path>) -> Result<i32, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    let entries = sweep_run(catalog, &text, tol)?;
    let mut json = serde_json::to_string_pretty(&entries).expect("sweep entries are serializable");
    json.push('\n');
    write_output(out, &json)?;
    let errors = entries.iter().filter(|e| e.error.is_some()).count();
    eprintln!("{} jobs, {errors} errors", entries.len());
    Ok(entries
        .iter()
        .filter(|e| e.error.is_some())
        .map(|e| e.exit_code)
        .max()
        .unwrap_or(0))
}
