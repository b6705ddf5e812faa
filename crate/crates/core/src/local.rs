//! Local forms of real curve singularities computed from a real
//! morsification.
//!
//! A morsification is described combinatorially: the regions of
//! `{f̃ >= 0}` inside a small disk around the singular point, their Euler
//! characteristics, whether they stay inside the disk, and which pairs of
//! regions meet at each hyperbolic node. From that data the tilde form is
//! assembled, the interior regions are eliminated by a Schur complement, and
//! the identity is added twice to get the local form on the boundary
//! sectors.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::qform::{FormError, InertiaTriple, RationalSymmetricForm};
use crate::rational::{half, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LocalError {
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error(
        "not a Q-singularity: the tilde form restricted to the interior regions {0:?} is degenerate"
    )]
    NotQSingularity(Vec<String>),
    #[error("unknown sector label `{0}`")]
    UnknownLabel(String),
    #[error("sector label `{0}` has no side assigned")]
    MissingSide(String),
    #[error("side for `{label}` must be +1 or -1, got {value}")]
    InvalidSide { label: String, value: i64 },
    #[error("invalid morsification JSON: {0}")]
    Json(String),
}

/// A connected component of the interior of `{f̃ >= 0}` near the point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorsifiedRegion {
    pub id: String,
    /// True when the closed region lies inside the open disk.
    pub interior: bool,
    /// Euler characteristic of the closed region.
    pub euler: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScheme {
    mu: u32,
    rho: u32,
    regions: Vec<MorsifiedRegion>,
    nodes: Vec<[String; 2]>,
}

/// Combinatorial record of a real morsification with the maximal number
/// `(mu + rho - 1) / 2` of real hyperbolic nodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawScheme", into = "RawScheme")]
pub struct MorsifiedLocalScheme {
    mu: u32,
    rho: u32,
    regions: Vec<MorsifiedRegion>,
    nodes: Vec<[String; 2]>,
}

impl TryFrom<RawScheme> for MorsifiedLocalScheme {
    type Error = LocalError;
    fn try_from(raw: RawScheme) -> Result<Self, LocalError> {
        Self::new(raw.mu, raw.rho, raw.regions, raw.nodes)
    }
}

impl From<MorsifiedLocalScheme> for RawScheme {
    fn from(s: MorsifiedLocalScheme) -> Self {
        RawScheme {
            mu: s.mu,
            rho: s.rho,
            regions: s.regions,
            nodes: s.nodes,
        }
    }
}

impl MorsifiedLocalScheme {
    pub fn new(
        mu: u32,
        rho: u32,
        regions: Vec<MorsifiedRegion>,
        nodes: Vec<[String; 2]>,
    ) -> Result<Self, LocalError> {
        let bad = |m: String| Err(LocalError::InvariantViolation(m));
        if mu == 0 {
            return bad("Milnor number mu must be positive".into());
        }
        if (mu + rho) % 2 == 0 {
            return bad(format!("mu + rho must be odd (mu = {mu}, rho = {rho})"));
        }
        let delta = (mu + rho - 1) / 2;
        if nodes.len() as u32 != delta {
            return bad(format!(
                "node count {} != (mu + rho - 1)/2 = {delta}",
                nodes.len()
            ));
        }
        let mut ids = HashSet::new();
        for r in &regions {
            if r.id.is_empty() {
                return bad("region id must not be empty".into());
            }
            if !ids.insert(r.id.as_str()) {
                return bad(format!("duplicate region id `{}`", r.id));
            }
            if r.euler > 1 {
                return bad(format!(
                    "region `{}` has Euler characteristic {} > 1; planar regions have chi <= 1",
                    r.id, r.euler
                ));
            }
        }
        let boundary = regions.iter().filter(|r| !r.interior).count() as u32;
        if rho >= 1 && boundary != rho {
            return bad(format!(
                "{boundary} regions meet the boundary circle but rho = {rho} requires exactly {rho}"
            ));
        }
        if rho == 0 && boundary > 1 {
            return bad(format!(
                "{boundary} regions meet the boundary circle but rho = 0 allows at most one"
            ));
        }
        for [a, b] in &nodes {
            for id in [a, b] {
                if !ids.contains(id.as_str()) {
                    return bad(format!("node references unknown region `{id}`"));
                }
            }
            if a == b {
                log::warn!(
                    "node with both positive sectors in region `{a}`: it does not contribute to the tilde form"
                );
            }
        }
        Ok(Self {
            mu,
            rho,
            regions,
            nodes,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, LocalError> {
        serde_json::from_str(text).map_err(|e| LocalError::Json(e.to_string()))
    }

    /// Canonical pretty JSON, newline terminated.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn mu(&self) -> u32 {
        self.mu
    }

    pub fn rho(&self) -> u32 {
        self.rho
    }

    pub fn delta(&self) -> u32 {
        (self.mu + self.rho - 1) / 2
    }

    pub fn regions(&self) -> &[MorsifiedRegion] {
        &self.regions
    }

    pub fn nodes(&self) -> &[[String; 2]] {
        &self.nodes
    }

    pub fn interior_ids(&self) -> Vec<&str> {
        self.regions
            .iter()
            .filter(|r| r.interior)
            .map(|r| r.id.as_str())
            .collect()
    }

    pub fn boundary_ids(&self) -> Vec<&str> {
        self.regions
            .iter()
            .filter(|r| !r.interior)
            .map(|r| r.id.as_str())
            .collect()
    }

    /// Nodes whose two positive sectors lie in the same region.
    pub fn self_touching_nodes(&self) -> usize {
        self.nodes.iter().filter(|[a, b]| a == b).count()
    }
}

/// The tilde form on all regions, interior regions first.
///
/// Off the diagonal: half the number of nodes joining two regions. On the
/// diagonal: half the number of nodes joining the region to another one,
/// minus twice its Euler characteristic.
pub fn build_tilde_form(scheme: &MorsifiedLocalScheme) -> RationalSymmetricForm {
    let order: Vec<&MorsifiedRegion> = scheme
        .regions
        .iter()
        .filter(|r| r.interior)
        .chain(scheme.regions.iter().filter(|r| !r.interior))
        .collect();
    let pos: HashMap<&str, usize> = order
        .iter()
        .enumerate()
        .map(|(i, r)| (r.id.as_str(), i))
        .collect();
    let m = order.len();
    let mut rows = vec![vec![Rational::from_integer(0.into()); m]; m];
    let h = half();
    for [a, b] in &scheme.nodes {
        if a == b {
            continue;
        }
        let (i, j) = (pos[a.as_str()], pos[b.as_str()]);
        rows[i][j] += &h;
        rows[j][i] += &h;
        rows[i][i] += &h;
        rows[j][j] += &h;
    }
    for (i, r) in order.iter().enumerate() {
        rows[i][i] -= int(2 * r.euler);
    }
    let labels: Vec<String> = order.iter().map(|r| r.id.clone()).collect();
    RationalSymmetricForm::new(labels, rows).expect("tilde form is symmetric with unique labels")
}

/// Intermediate results of the local form computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalFormComputation {
    pub tilde: RationalSymmetricForm,
    pub core_inertia: InertiaTriple,
    pub projected: RationalSymmetricForm,
    pub qp: RationalSymmetricForm,
}

pub fn compute_qp_detailed(
    scheme: &MorsifiedLocalScheme,
) -> Result<LocalFormComputation, LocalError> {
    let tilde = build_tilde_form(scheme);
    let core = scheme.interior_ids();
    let core_inertia = tilde
        .restrict(&core)
        .expect("interior ids are labels of the tilde form")
        .inertia();
    if !core_inertia.is_nondegenerate() {
        return Err(LocalError::NotQSingularity(
            core.iter().map(|s| s.to_string()).collect(),
        ));
    }
    let projected = match tilde.schur_project(&core) {
        Ok(p) => p,
        Err(FormError::DegenerateCore(c)) => return Err(LocalError::NotQSingularity(c)),
        Err(e) => unreachable!("schur projection on known labels: {e}"),
    };
    let qp = projected.add_scaled_identity(&int(2));
    Ok(LocalFormComputation {
        tilde,
        core_inertia,
        projected,
        qp,
    })
}

/// The local form on the boundary sectors of a morsified singularity.
pub fn compute_qp(scheme: &MorsifiedLocalScheme) -> Result<RationalSymmetricForm, LocalError> {
    compute_qp_detailed(scheme).map(|c| c.qp)
}

/// Which of the two arcs cut out by ω each sector lies on.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SectorSideAssignment {
    sides: BTreeMap<String, i8>,
}

impl SectorSideAssignment {
    pub fn new<S: Into<String>>(
        sides: impl IntoIterator<Item = (S, i64)>,
    ) -> Result<Self, LocalError> {
        let mut map = BTreeMap::new();
        for (label, value) in sides {
            let label = label.into();
            let side = match value {
                1 => 1,
                -1 => -1,
                _ => return Err(LocalError::InvalidSide { label, value }),
            };
            map.insert(label, side);
        }
        Ok(Self { sides: map })
    }

    pub fn get(&self, label: &str) -> Option<i8> {
        self.sides.get(label).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, i8)> {
        self.sides.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.sides.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sides.is_empty()
    }
}

/// `D q D` with `D` the diagonal matrix of sides: entries between sectors on
/// opposite arcs change sign.
pub fn omega_twist(
    qp: &RationalSymmetricForm,
    sides: &SectorSideAssignment,
) -> Result<RationalSymmetricForm, LocalError> {
    if let Some((extra, _)) = sides.iter().find(|(l, _)| qp.index_of(l).is_none()) {
        return Err(LocalError::UnknownLabel(extra.to_string()));
    }
    let signs = qp
        .labels()
        .iter()
        .map(|l| {
            sides
                .get(l)
                .ok_or_else(|| LocalError::MissingSide(l.clone()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(qp.sign_conjugate(&signs))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphVertex {
    pub id: String,
    pub genus: u32,
}

/// Resolution graph of a surface singularity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionGraph {
    vertices: Vec<GraphVertex>,
    edges: Vec<(String, String)>,
}

impl ResolutionGraph {
    pub fn new(
        vertices: Vec<GraphVertex>,
        edges: Vec<(String, String)>,
    ) -> Result<Self, LocalError> {
        let mut ids = HashSet::new();
        for v in &vertices {
            if !ids.insert(v.id.as_str()) {
                return Err(LocalError::InvariantViolation(format!(
                    "duplicate vertex `{}`",
                    v.id
                )));
            }
        }
        for (a, b) in &edges {
            for id in [a, b] {
                if !ids.contains(id.as_str()) {
                    return Err(LocalError::InvariantViolation(format!(
                        "edge references unknown vertex `{id}`"
                    )));
                }
            }
            if a == b {
                return Err(LocalError::InvariantViolation(format!(
                    "self-loop at vertex `{a}`"
                )));
            }
        }
        Ok(Self { vertices, edges })
    }

    pub fn vertices(&self) -> &[GraphVertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(String, String)] {
        &self.edges
    }
}

/// True iff the graph is a tree all of whose vertices have genus zero.
pub fn is_q_singularity(graph: &ResolutionGraph) -> bool {
    let n = graph.vertices.len();
    if n == 0 || graph.edges.len() != n - 1 {
        return false;
    }
    if graph.vertices.iter().any(|v| v.genus != 0) {
        return false;
    }
    let index: HashMap<&str, usize> = graph
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.id.as_str(), i))
        .collect();
    // union-find: a graph with n - 1 edges and no cycle is a tree
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (a, b) in &graph.edges {
        let (ra, rb) = (
            find(&mut parent, index[a.as_str()]),
            find(&mut parent, index[b.as_str()]),
        );
        if ra == rb {
            return false;
        }
        parent[ra] = rb;
    }
    true
}
