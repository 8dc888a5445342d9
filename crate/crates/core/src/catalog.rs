//! The classified four-dimensional algebras of the form `g3 + g1` and `g4`,
//! their automorphism families and the generating planes exhibited for them.
//!
//! Everything family-specific lives in `data/catalog.json`. Coefficients,
//! constraints and automorphism entries are arithmetic/boolean expressions over
//! `alpha`, `beta`, `a1..a7` and `sigma`; they are parsed once at load time.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::OnceLock;

use evalexpr::{
    build_operator_tree, ContextWithMutableVariables, DefaultNumericTypes, HashMapContext, Node,
    Value,
};
use nalgebra::Matrix4;
use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{AutomorphismMatrix, StructureConstants, Vector4, DIM};
use crate::subspace::{generates, Subspace};

/// Environment variable that points the loaders at a replacement data file.
pub const CATALOG_ENV: &str = "ABNORM_CATALOG";

const BUILTIN_JSON: &str = include_str!("../data/catalog.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    G31,
    G32,
    G33,
    G34,
    G35,
    G36,
    G37,
    G41,
    G42,
    G43,
    G44,
    G45,
    G46,
    G47,
    G48,
    G49,
    G410,
}

impl Family {
    pub const ALL: [Family; 17] = [
        Family::G31,
        Family::G32,
        Family::G33,
        Family::G34,
        Family::G35,
        Family::G36,
        Family::G37,
        Family::G41,
        Family::G42,
        Family::G43,
        Family::G44,
        Family::G45,
        Family::G46,
        Family::G47,
        Family::G48,
        Family::G49,
        Family::G410,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::G31 => "g3.1+g1",
            Family::G32 => "g3.2+g1",
            Family::G33 => "g3.3+g1",
            Family::G34 => "g3.4+g1",
            Family::G35 => "g3.5+g1",
            Family::G36 => "g3.6+g1",
            Family::G37 => "g3.7+g1",
            Family::G41 => "g4.1",
            Family::G42 => "g4.2",
            Family::G43 => "g4.3",
            Family::G44 => "g4.4",
            Family::G45 => "g4.5",
            Family::G46 => "g4.6",
            Family::G47 => "g4.7",
            Family::G48 => "g4.8",
            Family::G49 => "g4.9",
            Family::G410 => "g4.10",
        }
    }

    /// Parameter names, in order.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Family::G34 | Family::G35 | Family::G42 | Family::G48 | Family::G49 => &["alpha"],
            Family::G45 | Family::G46 => &["alpha", "beta"],
            _ => &[],
        }
    }

    /// `g3 + g1` rather than an indecomposable `g4`.
    pub fn is_decomposable(self) -> bool {
        matches!(
            self,
            Family::G31 | Family::G32 | Family::G33 | Family::G34 | Family::G35 | Family::G36 | Family::G37
        )
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    /// Accepts `g4.7`, `g47`, `g3.6+g1`, `g3.6`, `g36+g1` (case-insensitive).
    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s
            .trim()
            .to_ascii_lowercase()
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '_' && *c != ',')
            .collect();
        let norm = norm.trim_end_matches("+g1").trim_end_matches("+r");
        let flat = norm.replace('.', "");
        Family::ALL
            .iter()
            .copied()
            .find(|f| {
                let canon = f.as_str().trim_end_matches("+g1");
                canon == norm || canon.replace('.', "") == flat
            })
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

impl Serialize for Family {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Family {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `(when, parameter names, constraint, matrices)` as written in the data file.
pub type AutomorphismRowText = (String, Vec<String>, String, Vec<Vec<Vec<String>>>);

/// A family together with its parameter values.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraId {
    pub family: Family,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
}

impl AlgebraId {
    pub fn new(family: Family) -> Self {
        AlgebraId {
            family,
            alpha: None,
            beta: None,
        }
    }

    pub fn with_alpha(family: Family, alpha: f64) -> Self {
        AlgebraId {
            family,
            alpha: Some(alpha),
            beta: None,
        }
    }

    pub fn with_params(family: Family, alpha: f64, beta: f64) -> Self {
        AlgebraId {
            family,
            alpha: Some(alpha),
            beta: Some(beta),
        }
    }

    /// Named parameter values, checked against the family's parameter list.
    pub fn bindings(&self) -> Result<Vec<(&'static str, f64)>> {
        let names = self.family.param_names();
        let given = [("alpha", self.alpha), ("beta", self.beta)];
        let mut out = Vec::new();
        for (name, value) in given {
            match (names.contains(&name), value) {
                (true, Some(v)) if v.is_finite() => out.push((name, v)),
                (true, Some(_)) => return Err(self.invalid(format!("{name} is not finite"))),
                (true, None) => return Err(self.invalid(format!("missing parameter {name}"))),
                (false, Some(_)) => return Err(self.invalid(format!("unexpected parameter {name}"))),
                (false, None) => {}
            }
        }
        Ok(out)
    }

    fn invalid(&self, detail: String) -> Error {
        Error::InvalidParameters {
            family: self.family.to_string(),
            detail,
        }
    }
}

impl fmt::Display for AlgebraId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family)?;
        match (self.alpha, self.beta) {
            (Some(a), Some(b)) => write!(f, "(alpha={a}, beta={b})"),
            (Some(a), None) => write!(f, "(alpha={a})"),
            _ => Ok(()),
        }
    }
}

/// A generating plane exhibited for a family.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KnownSubspace {
    pub algebra: AlgebraId,
    pub span: [Vector4; 2],
    pub provenance: String,
    pub label: Option<String>,
}

impl KnownSubspace {
    pub fn subspace(&self) -> Result<Subspace> {
        Subspace::new(self.span.to_vec())
    }
}

#[derive(Clone, Debug)]
struct Expr {
    src: String,
    node: Node<DefaultNumericTypes>,
}

type Bindings<'a> = [(&'a str, f64)];

impl Expr {
    fn parse(src: &str) -> Result<Self> {
        let node = build_operator_tree::<DefaultNumericTypes>(src)
            .map_err(|e| Error::Catalog(format!("cannot parse `{src}`: {e}")))?;
        Ok(Expr {
            src: src.to_string(),
            node,
        })
    }

    fn eval(&self, vars: &Bindings) -> Result<Value<DefaultNumericTypes>> {
        let mut ctx = HashMapContext::<DefaultNumericTypes>::new();
        for (name, v) in vars {
            ctx.set_value((*name).to_string(), Value::Float(*v))
                .map_err(|e| Error::Catalog(e.to_string()))?;
        }
        self.node
            .eval_with_context(&ctx)
            .map_err(|e| Error::Catalog(format!("cannot evaluate `{}`: {e}", self.src)))
    }

    fn number(&self, vars: &Bindings) -> Result<f64> {
        let v = self.eval(vars)?;
        v.as_number()
            .map_err(|_| Error::Catalog(format!("`{}` is not numeric", self.src)))
    }

    fn truth(&self, vars: &Bindings) -> Result<bool> {
        let v = self.eval(vars)?;
        v.as_boolean()
            .map_err(|_| Error::Catalog(format!("`{}` is not a condition", self.src)))
    }
}

#[derive(Deserialize)]
struct RawCatalog {
    families: Vec<RawFamily>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFamily {
    family: String,
    params: Vec<String>,
    constraints: String,
    rows: Vec<RawRow>,
    #[serde(default)]
    automorphisms: Vec<RawAuto>,
    #[serde(default)]
    known_subspaces: Vec<RawKnown>,
    no_generator: String,
    #[serde(default)]
    no_generator_note: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRow {
    when: String,
    brackets: Vec<(usize, usize, Vec<String>)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAuto {
    when: String,
    params: Vec<String>,
    #[serde(default)]
    discrete: BTreeMap<String, Vec<String>>,
    constraint: String,
    matrices: Vec<Vec<Vec<String>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawKnown {
    when: String,
    span: Vec<Vec<f64>>,
    provenance: String,
    #[serde(default)]
    label: Option<String>,
}

#[derive(Clone, Debug)]
struct Row {
    when: Expr,
    brackets: Vec<(usize, usize, [Expr; DIM])>,
}

/// One row of the automorphism tables, bound to the algebra parameters.
#[derive(Clone, Debug)]
pub struct AutomorphismFamily {
    algebra: AlgebraId,
    when: Expr,
    params: Vec<String>,
    discrete: Vec<(String, Vec<f64>)>,
    constraint: Expr,
    matrices: Vec<[[Expr; DIM]; DIM]>,
}

#[derive(Clone, Debug)]
struct KnownEntry {
    when: Expr,
    span: [Vector4; 2],
    provenance: String,
    label: Option<String>,
}

#[derive(Clone, Debug)]
struct FamilyEntry {
    family: Family,
    constraints: Expr,
    rows: Vec<Row>,
    automorphisms: Vec<AutomorphismFamily>,
    known: Vec<KnownEntry>,
    no_generator: Expr,
    no_generator_note: Option<String>,
}

/// Parsed and validated catalog.
#[derive(Clone, Debug)]
pub struct Catalog {
    entries: Vec<FamilyEntry>,
}

fn parse_exprs<const N: usize>(items: &[String], what: &str) -> Result<[Expr; N]> {
    if items.len() != N {
        return Err(Error::Catalog(format!("{what}: expected {N} entries, got {}", items.len())));
    }
    let parsed: Vec<Expr> = items.iter().map(|s| Expr::parse(s)).collect::<Result<_>>()?;
    Ok(parsed.try_into().expect("length checked"))
}

impl Catalog {
    /// The catalog shipped with the crate.
    pub fn builtin() -> &'static Catalog {
        static BUILTIN: OnceLock<Catalog> = OnceLock::new();
        BUILTIN.get_or_init(|| Catalog::from_json(BUILTIN_JSON).expect("bundled catalog is valid"))
    }

    /// The file named by `ABNORM_CATALOG`, or the bundled catalog.
    pub fn load() -> Result<Catalog> {
        match std::env::var_os(CATALOG_ENV) {
            Some(path) => Catalog::from_path(path),
            None => Ok(Catalog::builtin().clone()),
        }
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Catalog> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Catalog(format!("{}: {e}", path.display())))?;
        Catalog::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Catalog> {
        let raw: RawCatalog =
            serde_json::from_str(text).map_err(|e| Error::Catalog(e.to_string()))?;
        let mut entries = Vec::new();
        for rf in raw.families {
            entries.push(Self::compile_family(rf)?);
        }
        for f in Family::ALL {
            match entries.iter().filter(|e| e.family == f).count() {
                1 => {}
                0 => return Err(Error::Catalog(format!("family {f} missing"))),
                _ => return Err(Error::Catalog(format!("family {f} listed twice"))),
            }
        }
        let catalog = Catalog { entries };
        catalog.self_check()?;
        Ok(catalog)
    }

    fn compile_family(rf: RawFamily) -> Result<FamilyEntry> {
        let family: Family = rf.family.parse().map_err(|_| {
            Error::Catalog(format!("unknown family `{}`", rf.family))
        })?;
        let expected: Vec<&str> = family.param_names().to_vec();
        if rf.params.iter().map(String::as_str).ne(expected.iter().copied()) {
            return Err(Error::Catalog(format!(
                "{family}: parameters {:?}, expected {expected:?}",
                rf.params
            )));
        }
        let mut rows = Vec::new();
        for row in rf.rows {
            let mut brackets = Vec::new();
            for (i, j, coeffs) in row.brackets {
                if !(1..=DIM).contains(&i) || !(1..=DIM).contains(&j) || i == j {
                    return Err(Error::Catalog(format!("{family}: bad bracket indices ({i}, {j})")));
                }
                brackets.push((i, j, parse_exprs::<DIM>(&coeffs, "bracket")?));
            }
            rows.push(Row {
                when: Expr::parse(&row.when)?,
                brackets,
            });
        }
        if rows.is_empty() {
            return Err(Error::Catalog(format!("{family}: no bracket rows")));
        }
        let mut automorphisms = Vec::new();
        for ra in rf.automorphisms {
            let mut matrices = Vec::new();
            for m in &ra.matrices {
                if m.len() != DIM {
                    return Err(Error::Catalog(format!("{family}: automorphism needs {DIM} rows")));
                }
                let rows: Vec<[Expr; DIM]> = m
                    .iter()
                    .map(|r| parse_exprs::<DIM>(r, "automorphism row"))
                    .collect::<Result<_>>()?;
                matrices.push(rows.try_into().expect("length checked"));
            }
            if matrices.is_empty() {
                return Err(Error::Catalog(format!("{family}: automorphism entry without matrices")));
            }
            let mut discrete = Vec::new();
            for (name, values) in ra.discrete {
                let vals = values
                    .iter()
                    .map(|s| Expr::parse(s)?.number(&[]))
                    .collect::<Result<Vec<f64>>>()?;
                discrete.push((name, vals));
            }
            automorphisms.push(AutomorphismFamily {
                algebra: AlgebraId::new(family),
                when: Expr::parse(&ra.when)?,
                params: ra.params,
                discrete,
                constraint: Expr::parse(&ra.constraint)?,
                matrices,
            });
        }
        let mut known = Vec::new();
        for rk in rf.known_subspaces {
            if rk.span.len() != 2 || rk.span.iter().any(|v| v.len() != DIM) {
                return Err(Error::Catalog(format!("{family}: known subspace must be two 4-vectors")));
            }
            let v = |k: usize| Vector4([rk.span[k][0], rk.span[k][1], rk.span[k][2], rk.span[k][3]]);
            known.push(KnownEntry {
                when: Expr::parse(&rk.when)?,
                span: [v(0), v(1)],
                provenance: rk.provenance,
                label: rk.label,
            });
        }
        Ok(FamilyEntry {
            family,
            constraints: Expr::parse(&rf.constraints)?,
            rows,
            automorphisms,
            known,
            no_generator: Expr::parse(&rf.no_generator)?,
            no_generator_note: rf.no_generator_note,
        })
    }

    /// Evaluates every expression over the parameter grid and checks that each
    /// listed plane generates and every bracket table satisfies Jacobi.
    fn self_check(&self) -> Result<()> {
        for entry in &self.entries {
            let grid = self.parameter_grid(entry.family);
            if grid.is_empty() {
                return Err(Error::Catalog(format!("{}: empty parameter grid", entry.family)));
            }
            for id in grid {
                let alg = self.instantiate(&id)?;
                let defect = alg.jacobi_defect();
                if defect > 1e-12 {
                    return Err(Error::Catalog(format!("{id}: Jacobi defect {defect:e}")));
                }
                for ks in self.known_generating_subspaces(&id)? {
                    let p = ks.subspace().map_err(|e| Error::Catalog(format!("{id}: {e}")))?;
                    if !generates(&alg, &p).generates {
                        return Err(Error::Catalog(format!(
                            "{id}: listed subspace {} / {} does not generate",
                            ks.span[0], ks.span[1]
                        )));
                    }
                }
                if let Some(af) = self.automorphism_family_opt(&id)? {
                    let mut probe: Vec<(String, f64)> =
                        af.params.iter().map(|p| (p.clone(), 1.0)).collect();
                    for (name, vals) in &af.discrete {
                        probe.push((name.clone(), vals[0]));
                    }
                    af.constraint_holds(&probe)?;
                    for component in 0..af.components() {
                        af.matrix(component, &probe)?;
                    }
                }
                self.has_no_generator(&id)?;
            }
        }
        Ok(())
    }

    fn entry(&self, family: Family) -> &FamilyEntry {
        self.entries
            .iter()
            .find(|e| e.family == family)
            .expect("catalog validated to contain every family")
    }

    pub fn families(&self) -> impl Iterator<Item = Family> + '_ {
        self.entries.iter().map(|e| e.family)
    }

    /// Constraint expression as written in the data file.
    pub fn constraint_text(&self, family: Family) -> &str {
        &self.entry(family).constraints.src
    }

    /// `(when, brackets)` with each bracket rendered like `[E2,E3] = E1 - (alpha)*E2`.
    pub fn bracket_rows_text(&self, family: Family) -> Vec<(String, Vec<String>)> {
        self.entry(family)
            .rows
            .iter()
            .map(|row| {
                let brackets = row
                    .brackets
                    .iter()
                    .map(|(i, j, coeffs)| format!("[E{i},E{j}] = {}", render_combination(coeffs)))
                    .collect();
                (row.when.src.clone(), brackets)
            })
            .collect()
    }

    /// Automorphism table rows as `(when, parameter names, constraint, matrices)`.
    pub fn automorphism_rows_text(&self, family: Family) -> Vec<AutomorphismRowText> {
        self.entry(family)
            .automorphisms
            .iter()
            .map(|a| {
                let mut names = a.params.clone();
                names.extend(a.discrete.iter().map(|(n, _)| n.clone()));
                let mats = a
                    .matrices
                    .iter()
                    .map(|m| m.iter().map(|r| r.iter().map(|e| e.src.clone()).collect()).collect())
                    .collect();
                (a.when.src.clone(), names, a.constraint.src.clone(), mats)
            })
            .collect()
    }

    pub fn no_generator_note(&self, family: Family) -> Option<&str> {
        self.entry(family).no_generator_note.as_deref()
    }

    /// Checks the parameter constraints of the family.
    pub fn validate(&self, id: &AlgebraId) -> Result<Vec<(&'static str, f64)>> {
        let vars = id.bindings()?;
        let entry = self.entry(id.family);
        if !entry.constraints.truth(&vars)? {
            return Err(Error::InvalidParameters {
                family: id.family.to_string(),
                detail: format!("{id} violates `{}`", entry.constraints.src),
            });
        }
        Ok(vars)
    }

    pub fn instantiate(&self, id: &AlgebraId) -> Result<StructureConstants> {
        let vars = self.validate(id)?;
        let entry = self.entry(id.family);
        for row in &entry.rows {
            if !row.when.truth(&vars)? {
                continue;
            }
            let mut brackets = Vec::with_capacity(row.brackets.len());
            for (i, j, coeffs) in &row.brackets {
                let mut v = Vector4::ZERO;
                for (k, c) in coeffs.iter().enumerate() {
                    v[k] = c.number(&vars)?;
                }
                brackets.push((*i, *j, v));
            }
            return Ok(StructureConstants::from_brackets(brackets)?.with_label(id.to_string()));
        }
        Err(Error::Catalog(format!("{id}: no bracket row applies")))
    }

    fn automorphism_family_opt(&self, id: &AlgebraId) -> Result<Option<AutomorphismFamily>> {
        let vars = self.validate(id)?;
        for af in &self.entry(id.family).automorphisms {
            if af.when.truth(&vars)? {
                let mut af = af.clone();
                af.algebra = *id;
                return Ok(Some(af));
            }
        }
        Ok(None)
    }

    /// The automorphism table row covering `id`.
    pub fn automorphism_family(&self, id: &AlgebraId) -> Result<AutomorphismFamily> {
        self.automorphism_family_opt(id)?
            .ok_or_else(|| Error::NoTableEntry(id.to_string()))
    }

    /// All generating planes listed for `id` (empty when none are listed).
    pub fn known_generating_subspaces(&self, id: &AlgebraId) -> Result<Vec<KnownSubspace>> {
        let vars = self.validate(id)?;
        let mut out = Vec::new();
        for k in &self.entry(id.family).known {
            if k.when.truth(&vars)? {
                out.push(KnownSubspace {
                    algebra: *id,
                    span: k.span,
                    provenance: k.provenance.clone(),
                    label: k.label.clone(),
                });
            }
        }
        Ok(out)
    }

    /// The representative plane for `id`, or `None` where no generating plane exists.
    pub fn known_generating_subspace(&self, id: &AlgebraId) -> Result<Option<KnownSubspace>> {
        Ok(self.known_generating_subspaces(id)?.into_iter().next())
    }

    /// True for the parameter values that admit no two-dimensional generating subspace.
    pub fn has_no_generator(&self, id: &AlgebraId) -> Result<bool> {
        let vars = self.validate(id)?;
        self.entry(id.family).no_generator.truth(&vars)
    }

    /// At least twenty valid parameter points per parametric family, including
    /// the boundary values the constraints single out.
    pub fn parameter_grid(&self, family: Family) -> Vec<AlgebraId> {
        let names = family.param_names();
        let mut candidates: Vec<f64> = (-30..=30).map(|i| i as f64 / 10.0).collect();
        candidates.extend([-0.999, 0.001, 0.999, 1.001, 5.0]);
        candidates.sort_by(f64::total_cmp);
        candidates.dedup();
        let ok = |id: &AlgebraId| self.validate(id).is_ok();
        match names.len() {
            0 => vec![AlgebraId::new(family)],
            1 => candidates
                .iter()
                .map(|&a| AlgebraId::with_alpha(family, a))
                .filter(ok)
                .collect(),
            _ => {
                let coarse = [-2.0, -1.0, -0.75, -0.5, -0.25, 0.25, 0.5, 0.75, 1.0, 2.0];
                let mut out = Vec::new();
                for &a in &coarse {
                    for &b in &coarse {
                        let id = AlgebraId::with_params(family, a, b);
                        if ok(&id) {
                            out.push(id);
                        }
                    }
                }
                out
            }
        }
    }

    /// A uniformly drawn valid parameter point (rejection sampling in [-3, 3]).
    pub fn sample_id<R: Rng + ?Sized>(&self, family: Family, rng: &mut R) -> AlgebraId {
        let grid = self.parameter_grid(family);
        for _ in 0..1000 {
            let id = match family.param_names().len() {
                0 => AlgebraId::new(family),
                1 => AlgebraId::with_alpha(family, rng.random_range(-3.0..3.0)),
                _ => AlgebraId::with_params(
                    family,
                    rng.random_range(-3.0..3.0),
                    rng.random_range(-3.0..3.0),
                ),
            };
            if self.validate(&id).is_ok() {
                return id;
            }
        }
        *grid.choose(rng).expect("grid is nonempty")
    }

    /// A random automorphism of `id`: a table automorphism when one is
    /// recorded, composed with an inner automorphism `exp(ad x)`.
    pub fn random_automorphism<R: Rng + ?Sized>(
        &self,
        id: &AlgebraId,
        rng: &mut R,
    ) -> Result<AutomorphismMatrix> {
        let alg = self.instantiate(id)?;
        let x = Vector4(std::array::from_fn(|_| rng.random_range(-0.7..0.7)));
        let inner = AutomorphismMatrix::inner(&alg, &x);
        let outer = match self.automorphism_family_opt(id)? {
            Some(af) => af.sample(rng)?,
            None if alg.ad_matrix(&Vector4::e(4)).iter().all(|v| *v == 0.0) => {
                // E4 spans a central summand: rescaling it is an automorphism.
                let c: f64 = rng.random_range(0.4..2.5) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                let mut m = Matrix4::identity();
                m[(3, 3)] = c;
                AutomorphismMatrix::new(m, format!("{} center scaling", id.family), vec![("c".into(), c)])?
            }
            None => AutomorphismMatrix::identity(),
        };
        Ok(outer.compose(&inner))
    }
}

impl AutomorphismFamily {
    pub fn algebra(&self) -> &AlgebraId {
        &self.algebra
    }

    /// Continuous parameter names (`a1`, `a2`, ...).
    pub fn params(&self) -> &[String] {
        &self.params
    }

    /// Number of matrix shapes (connected components listed separately).
    pub fn components(&self) -> usize {
        self.matrices.len()
    }

    fn bindings(&self, values: &[(String, f64)]) -> Result<Vec<(String, f64)>> {
        let mut vars: Vec<(String, f64)> = self.algebra.bindings()?.into_iter().map(|(n, v)| (n.to_string(), v)).collect();
        for name in &self.params {
            let v = values.iter().find(|(n, _)| n == name).map(|(_, v)| *v).unwrap_or(0.0);
            vars.push((name.clone(), v));
        }
        for (name, allowed) in &self.discrete {
            let v = values
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, v)| *v)
                .unwrap_or(allowed[0]);
            if !allowed.iter().any(|a| (a - v).abs() <= 1e-12) {
                return Err(Error::InvalidParameters {
                    family: self.algebra.family.to_string(),
                    detail: format!("{name} = {v} not in {allowed:?}"),
                });
            }
            vars.push((name.clone(), v));
        }
        for (n, _) in values {
            if !vars.iter().any(|(m, _)| m == n) {
                return Err(Error::InvalidParameters {
                    family: self.algebra.family.to_string(),
                    detail: format!("unknown automorphism parameter {n}"),
                });
            }
        }
        Ok(vars)
    }

    fn constraint_holds(&self, values: &[(String, f64)]) -> Result<bool> {
        let vars = self.bindings(values)?;
        let refs: Vec<(&str, f64)> = vars.iter().map(|(n, v)| (n.as_str(), *v)).collect();
        self.constraint.truth(&refs)
    }

    /// The matrix of component `component` at the given parameter values.
    /// Unlisted continuous parameters default to 0, discrete ones to their
    /// first allowed value.
    pub fn matrix(&self, component: usize, values: &[(String, f64)]) -> Result<AutomorphismMatrix> {
        let shape = self.matrices.get(component).ok_or_else(|| {
            Error::InvalidArgument(format!("component {component} out of range"))
        })?;
        let vars = self.bindings(values)?;
        let refs: Vec<(&str, f64)> = vars.iter().map(|(n, v)| (n.as_str(), *v)).collect();
        if !self.constraint.truth(&refs)? {
            return Err(Error::InvalidParameters {
                family: self.algebra.family.to_string(),
                detail: format!("automorphism parameters violate `{}`", self.constraint.src),
            });
        }
        let mut m = Matrix4::zeros();
        for (r, row) in shape.iter().enumerate() {
            for (c, e) in row.iter().enumerate() {
                m[(r, c)] = e.number(&refs)?;
            }
        }
        let params = vars
            .into_iter()
            .filter(|(n, _)| n != "alpha" && n != "beta")
            .collect();
        AutomorphismMatrix::new(m, format!("{} table", self.algebra), params)
    }

    /// Parameters drawn from [-3, 3]; draws that make the matrix nearly
    /// singular are rejected.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<AutomorphismMatrix> {
        for _ in 0..1000 {
            let mut values: Vec<(String, f64)> = self
                .params
                .iter()
                .map(|p| (p.clone(), rng.random_range(-3.0..3.0)))
                .collect();
            for (name, allowed) in &self.discrete {
                values.push((name.clone(), *allowed.choose(rng).expect("nonempty")));
            }
            if !self.constraint_holds(&values)? {
                continue;
            }
            let component = rng.random_range(0..self.components());
            let m = match self.matrix(component, &values) {
                Ok(m) => m,
                Err(Error::NotInvertible) => continue,
                Err(e) => return Err(e),
            };
            if m.matrix().determinant().abs() >= 1e-2 {
                return Ok(m);
            }
        }
        Err(Error::Internal(format!("could not sample an automorphism of {}", self.algebra)))
    }
}

fn render_combination(coeffs: &[Expr; DIM]) -> String {
    let mut out = String::new();
    for (k, c) in coeffs.iter().enumerate() {
        let s = c.src.trim();
        if s == "0" || s == "0.0" {
            continue;
        }
        let term = match s {
            "1" | "1.0" => format!("E{}", k + 1),
            "-1" | "-1.0" => format!("-E{}", k + 1),
            _ if s.parse::<f64>().is_ok() => format!("{s}E{}", k + 1),
            _ => format!("({s})E{}", k + 1),
        };
        if out.is_empty() {
            out = term;
        } else if let Some(rest) = term.strip_prefix('-') {
            out += &format!(" - {rest}");
        } else {
            out += &format!(" + {term}");
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
