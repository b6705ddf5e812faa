//! Curve schemes and the partition form.
//!
//! A scheme file describes a real plane curve of degree `2k` up to the data
//! the inequalities need: the partition components of `{f >= 0}` with the
//! Euler characteristics of their interiors, the real singular points with
//! their local forms and the regions their sectors fall in, the points the
//! curve ω passes through, and the Euler characteristic of the real part of
//! the double plane.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::catalog::{catalog_form, catalog_milnor, MilnorData, SingularityType};
use crate::local::{
    compute_qp, omega_twist, LocalError, MorsifiedLocalScheme, SectorSideAssignment,
};
use crate::qform::{FormError, RationalSymmetricForm};
use crate::rational::{int, RationalText};

/// Reserved region id for sectors outside every partition component.
pub const SINK: &str = "sink";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SchemeError {
    #[error("invalid scheme: {0}")]
    Invalid(String),
    #[error("cannot read `{path}`: {message}")]
    Io { path: String, message: String },
    #[error("singular point `{point}`: cannot resolve local form: {reason}")]
    UnresolvedLocalForm { point: String, reason: String },
    #[error("singular point `{point}`: {source}")]
    Local { point: String, source: LocalError },
    #[error("singular point `{0}` lies on omega but has no omega_sides")]
    MissingSides(String),
    #[error("missing data: {0}")]
    MissingData(String),
    #[error(
        "singular point `{0}` has no Milnor data; add `milnor` or a scheme-level `milnor_override`"
    )]
    MissingMilnorData(String),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, SchemeError> {
    Err(SchemeError::Invalid(msg.into()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Region {
    pub id: String,
    /// Euler characteristic of the interior of the component.
    pub chi_int: i64,
    pub orientable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum LocalFormSource {
    Catalog(SingularityType),
    /// Explicit matrix on labels `s1..sn`.
    Matrix(Vec<Vec<RationalText>>),
    /// Path to a morsification file, relative to the scheme file.
    Fixture(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sector {
    pub label: String,
    /// Region id, or `"sink"`.
    pub region: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingularPoint {
    pub id: String,
    pub real: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<LocalFormSource>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sectors: Vec<Sector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub milnor: Option<MilnorData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_sides: Option<BTreeMap<String, i64>>,
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScheme {
    degree: u32,
    r: u32,
    nu: u32,
    regions: Vec<Region>,
    #[serde(default)]
    singular_points: Vec<SingularPoint>,
    #[serde(default)]
    omega_points: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    chi_XR: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    chi_W: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    chi_branch_in_W: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    milnor_override: Option<MilnorData>,
}

/// A validated curve scheme.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawScheme", into = "RawScheme")]
pub struct CurveScheme {
    raw: RawScheme,
    #[serde(skip)]
    base_dir: Option<PathBuf>,
}

impl TryFrom<RawScheme> for CurveScheme {
    type Error = SchemeError;
    fn try_from(raw: RawScheme) -> Result<Self, SchemeError> {
        validate(&raw)?;
        Ok(Self {
            raw,
            base_dir: None,
        })
    }
}

impl From<CurveScheme> for RawScheme {
    fn from(s: CurveScheme) -> Self {
        s.raw
    }
}

fn validate(s: &RawScheme) -> Result<(), SchemeError> {
    if s.degree == 0 || s.degree % 2 == 1 {
        return invalid(format!(
            "degree must be even and positive, got {}",
            s.degree
        ));
    }
    let k = s.degree / 2;
    if s.r == 0 {
        return invalid("r must be positive");
    }
    if s.nu > 1 {
        return invalid(format!("nu must be 0 or 1, got {}", s.nu));
    }
    if s.r < s.nu {
        return invalid("r must be at least nu");
    }
    let mut regions = HashSet::new();
    for reg in &s.regions {
        if reg.id.is_empty() || reg.id == SINK {
            return invalid(format!("region id `{}` is empty or reserved", reg.id));
        }
        if !regions.insert(reg.id.as_str()) {
            return invalid(format!("duplicate region id `{}`", reg.id));
        }
        if k % 2 == 0 && !reg.orientable {
            return invalid(format!(
                "region `{}`: for even k only orientable components are listed",
                reg.id
            ));
        }
    }
    if k % 2 == 1 && !s.omega_points.is_empty() {
        return invalid("omega_points must be empty for odd k");
    }
    let omega: HashSet<&str> = s.omega_points.iter().map(String::as_str).collect();
    if omega.len() != s.omega_points.len() {
        return invalid("omega_points lists a point twice");
    }
    let mut points = HashSet::new();
    for p in &s.singular_points {
        if !points.insert(p.id.as_str()) {
            return invalid(format!("duplicate singular point id `{}`", p.id));
        }
        let on_omega = omega.contains(p.id.as_str());
        if !p.real {
            if !p.sectors.is_empty() || p.omega_sides.is_some() || on_omega {
                return invalid(format!(
                    "singular point `{}`: complex points carry only Milnor data",
                    p.id
                ));
            }
            continue;
        }
        if p.source.is_none() {
            return invalid(format!(
                "singular point `{}`: real points need a source",
                p.id
            ));
        }
        let mut labels = HashSet::new();
        for sec in &p.sectors {
            if !labels.insert(sec.label.as_str()) {
                return invalid(format!(
                    "singular point `{}`: sector `{}` listed twice",
                    p.id, sec.label
                ));
            }
            if sec.region != SINK && !regions.contains(sec.region.as_str()) {
                return invalid(format!(
                    "singular point `{}`: sector `{}` refers to unknown region `{}`",
                    p.id, sec.label, sec.region
                ));
            }
        }
        match (&p.omega_sides, on_omega) {
            (None, true) => return Err(SchemeError::MissingSides(p.id.clone())),
            (Some(_), false) => {
                return invalid(format!(
                    "singular point `{}` has omega_sides but is not in omega_points",
                    p.id
                ))
            }
            _ => {}
        }
    }
    if let Some(id) = s
        .omega_points
        .iter()
        .find(|id| !points.contains(id.as_str()))
    {
        return invalid(format!("omega_points refers to unknown point `{id}`"));
    }
    if s.chi_XR.is_none() && (s.chi_W.is_none() || s.chi_branch_in_W.is_none()) {
        return Err(SchemeError::MissingData(
            "give chi_XR, or chi_W together with chi_branch_in_W".into(),
        ));
    }
    Ok(())
}

/// A real singular point with its local form resolved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedPoint {
    pub id: String,
    pub local_form: RationalSymmetricForm,
    /// The form that enters the partition form (twisted on omega points).
    pub effective_form: RationalSymmetricForm,
}

impl CurveScheme {
    pub fn from_json(text: &str) -> Result<Self, SchemeError> {
        let raw: RawScheme =
            serde_json::from_str(text).map_err(|e| SchemeError::Invalid(e.to_string()))?;
        Self::try_from(raw)
    }

    /// Reads a scheme file; fixture paths resolve relative to its directory.
    pub fn load(path: &Path) -> Result<Self, SchemeError> {
        let text = fs::read_to_string(path).map_err(|e| SchemeError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        let mut s = Self::from_json(&text)?;
        s.base_dir = path.parent().map(Path::to_path_buf);
        Ok(s)
    }

    pub fn with_base_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.base_dir = Some(dir.into());
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("scheme serializes");
        s.push('\n');
        s
    }

    pub fn k(&self) -> u32 {
        self.raw.degree / 2
    }

    pub fn degree(&self) -> u32 {
        self.raw.degree
    }

    pub fn r(&self) -> u32 {
        self.raw.r
    }

    pub fn nu(&self) -> u32 {
        self.raw.nu
    }

    pub fn regions(&self) -> &[Region] {
        &self.raw.regions
    }

    pub fn singular_points(&self) -> &[SingularPoint] {
        &self.raw.singular_points
    }

    pub fn omega_points(&self) -> &[String] {
        &self.raw.omega_points
    }

    pub fn chi_w(&self) -> Option<i64> {
        self.raw.chi_W
    }

    pub fn milnor_override(&self) -> Option<MilnorData> {
        self.raw.milnor_override
    }

    /// Resolves the local form of every real singular point, checks that the
    /// sector map covers exactly its labels, and applies ω-twists.
    pub fn resolve_points(&self) -> Result<Vec<ResolvedPoint>, SchemeError> {
        let omega: HashSet<&str> = self.raw.omega_points.iter().map(String::as_str).collect();
        let mut out = Vec::new();
        for p in self.raw.singular_points.iter().filter(|p| p.real) {
            let local_form = self.local_form(p)?;
            let mapped: HashSet<&str> = p.sectors.iter().map(|s| s.label.as_str()).collect();
            let labels: HashSet<&str> = local_form.labels().iter().map(String::as_str).collect();
            if mapped != labels {
                let mut want: Vec<&str> = labels.into_iter().collect();
                want.sort();
                return invalid(format!(
                    "singular point `{}`: sectors must cover exactly the labels {want:?}",
                    p.id
                ));
            }
            let effective_form = if omega.contains(p.id.as_str()) {
                let sides = p
                    .omega_sides
                    .as_ref()
                    .ok_or_else(|| SchemeError::MissingSides(p.id.clone()))?;
                let local = |source| SchemeError::Local {
                    point: p.id.clone(),
                    source,
                };
                let sides = SectorSideAssignment::new(sides.iter().map(|(l, v)| (l.clone(), *v)))
                    .map_err(local)?;
                omega_twist(&local_form, &sides).map_err(local)?
            } else {
                local_form.clone()
            };
            out.push(ResolvedPoint {
                id: p.id.clone(),
                local_form,
                effective_form,
            });
        }
        Ok(out)
    }

    fn local_form(&self, p: &SingularPoint) -> Result<RationalSymmetricForm, SchemeError> {
        let unresolved = |reason: String| SchemeError::UnresolvedLocalForm {
            point: p.id.clone(),
            reason,
        };
        match p.source.as_ref() {
            None => Err(unresolved("no source".into())),
            Some(LocalFormSource::Catalog(t)) => Ok(catalog_form(t)),
            Some(LocalFormSource::Matrix(rows)) => {
                let rows = rows
                    .iter()
                    .map(|r| r.iter().map(|c| c.0.clone()).collect())
                    .collect();
                RationalSymmetricForm::from_rows(rows)
                    .map_err(|e: FormError| unresolved(e.to_string()))
            }
            Some(LocalFormSource::Fixture(rel)) => {
                let path = match &self.base_dir {
                    Some(dir) => dir.join(rel),
                    None => PathBuf::from(rel),
                };
                let text = fs::read_to_string(&path)
                    .map_err(|e| unresolved(format!("{}: {e}", path.display())))?;
                let fixture = MorsifiedLocalScheme::from_json(&text).map_err(|source| {
                    SchemeError::Local {
                        point: p.id.clone(),
                        source,
                    }
                })?;
                compute_qp(&fixture).map_err(|source| SchemeError::Local {
                    point: p.id.clone(),
                    source,
                })
            }
        }
    }

    /// The partition form on the listed regions, in file order.
    pub fn assemble_partition_form(&self) -> Result<RationalSymmetricForm, SchemeError> {
        let points = self.resolve_points()?;
        let index: HashMap<&str, usize> = self
            .raw
            .regions
            .iter()
            .enumerate()
            .map(|(i, r)| (r.id.as_str(), i))
            .collect();
        let n = self.raw.regions.len();
        let mut rows = vec![vec![int(0); n]; n];
        for (i, r) in self.raw.regions.iter().enumerate() {
            rows[i][i] -= int(2 * r.chi_int);
        }
        for (rp, p) in points
            .iter()
            .zip(self.raw.singular_points.iter().filter(|p| p.real))
        {
            let target: HashMap<&str, usize> = p
                .sectors
                .iter()
                .filter_map(|s| index.get(s.region.as_str()).map(|&i| (s.label.as_str(), i)))
                .collect();
            let q = &rp.effective_form;
            for (a, la) in q.labels().iter().enumerate() {
                let Some(&i) = target.get(la.as_str()) else {
                    continue;
                };
                for (b, lb) in q.labels().iter().enumerate() {
                    let Some(&j) = target.get(lb.as_str()) else {
                        continue;
                    };
                    rows[i][j] += q.entry(a, b);
                }
            }
        }
        let labels = self.raw.regions.iter().map(|r| r.id.clone()).collect();
        Ok(
            RationalSymmetricForm::new(labels, rows)
                .expect("sums of symmetric forms are symmetric"),
        )
    }

    /// Euler characteristic of the real part of the double plane.
    pub fn chi_xr(&self) -> Result<i64, SchemeError> {
        if let Some(c) = self.raw.chi_XR {
            return Ok(c);
        }
        match (self.raw.chi_W, self.raw.chi_branch_in_W) {
            (Some(w), Some(b)) => Ok(2 * w - b),
            _ => Err(SchemeError::MissingData(
                "give chi_XR, or chi_W together with chi_branch_in_W".into(),
            )),
        }
    }

    /// Inertia of the Milnor form summed over all singular points.
    pub fn total_milnor(&self) -> Result<MilnorData, SchemeError> {
        if let Some(m) = self.raw.milnor_override {
            return Ok(m);
        }
        self.raw
            .singular_points
            .iter()
            .map(|p| match (&p.milnor, &p.source) {
                (Some(m), _) => Ok(*m),
                (None, Some(LocalFormSource::Catalog(t))) => Ok(catalog_milnor(t)),
                _ => Err(SchemeError::MissingMilnorData(p.id.clone())),
            })
            .sum()
    }
}
