//! Local forms of the simple (ADE) real curve singularities.
//!
//! Each row is named by its defining polynomial, with `n` recovered from the
//! Milnor number. Sector labels are `s1`, `s2`, ... except for the
//! asymmetric rows (`±x(x^{2n}-y^2)`, `x(x^{2n+1}±y^2)`, `±y(x^3±y^2)`),
//! where `s0` names the sector between two tangent real branches (angle zero)
//! and is listed last; it carries the lesser diagonal entry.
//!
//! The bundled morsifications are the combinatorial records of explicit
//! deformations, e.g. `(x^2 - e)^2 - y^2` for `x^4 - y^2`, Chebyshev sums
//! `T_3(y) + T_4(x)` for `E_6` and `T_5(x) + T_3(y)` for `E_8`, and products
//! with a shifted line for the `D` and `E_7` rows.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::local::{GraphVertex, MorsifiedLocalScheme, MorsifiedRegion, ResolutionGraph};
use crate::qform::RationalSymmetricForm;
use crate::rational::{frac, half, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown singularity type: {0}")]
    UnknownType(String),
    #[error("no bundled morsification for {0}")]
    NoFixture(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    D,
    E,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::A => "A",
            Family::D => "D",
            Family::E => "E",
        })
    }
}

/// Sign case of a catalog row, named by its defining polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    /// `-x^{2n}+y^2`, two tangent real branches, A_{2n-1}
    NegX2nPlusY2,
    /// `x^{2n}-y^2`
    X2nMinusY2,
    /// `x^{2n}+y^2`, isolated real point, f positive around it
    X2nPlusY2,
    /// `-x^{2n}-y^2`, isolated real point, f negative around it
    NegX2nMinusY2,
    /// `±x^{2n+1}+y^2`, A_{2n}
    X2n1PlusY2,
    /// `±x^{2n+1}-y^2`
    X2n1MinusY2,
    /// `±x(x^{2n}-y^2)`, D_{2n+2}
    XTimesX2nMinusY2,
    /// `±x(x^{2n}+y^2)`
    XTimesX2nPlusY2,
    /// `x(x^{2n+1}±y^2)`, D_{2n+3}
    XTimesX2n1,
    /// `-x(x^{2n+1}±y^2)`
    NegXTimesX2n1,
    /// `x^4±y^3`, E_6
    X4Y3,
    /// `-x^4±y^3`
    NegX4Y3,
    /// `±y(x^3±y^2)`, E_7
    YTimesX3Y2,
    /// `±x^5±y^3`, E_8
    X5Y3,
}

impl Variant {
    pub const ALL: [Variant; 14] = [
        Variant::NegX2nPlusY2,
        Variant::X2nMinusY2,
        Variant::X2nPlusY2,
        Variant::NegX2nMinusY2,
        Variant::X2n1PlusY2,
        Variant::X2n1MinusY2,
        Variant::XTimesX2nMinusY2,
        Variant::XTimesX2nPlusY2,
        Variant::XTimesX2n1,
        Variant::NegXTimesX2n1,
        Variant::X4Y3,
        Variant::NegX4Y3,
        Variant::YTimesX3Y2,
        Variant::X5Y3,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::NegX2nPlusY2 => "-x^{2n}+y^2",
            Variant::X2nMinusY2 => "x^{2n}-y^2",
            Variant::X2nPlusY2 => "x^{2n}+y^2",
            Variant::NegX2nMinusY2 => "-x^{2n}-y^2",
            Variant::X2n1PlusY2 => "±x^{2n+1}+y^2",
            Variant::X2n1MinusY2 => "±x^{2n+1}-y^2",
            Variant::XTimesX2nMinusY2 => "±x(x^{2n}-y^2)",
            Variant::XTimesX2nPlusY2 => "±x(x^{2n}+y^2)",
            Variant::XTimesX2n1 => "x(x^{2n+1}±y^2)",
            Variant::NegXTimesX2n1 => "-x(x^{2n+1}±y^2)",
            Variant::X4Y3 => "x^4±y^3",
            Variant::NegX4Y3 => "-x^4±y^3",
            Variant::YTimesX3Y2 => "±y(x^3±y^2)",
            Variant::X5Y3 => "±x^5±y^3",
        }
    }

    /// File-name friendly spelling, e.g. `x2n_minus_y2`.
    pub fn slug(self) -> &'static str {
        match self {
            Variant::NegX2nPlusY2 => "neg_x2n_plus_y2",
            Variant::X2nMinusY2 => "x2n_minus_y2",
            Variant::X2nPlusY2 => "x2n_plus_y2",
            Variant::NegX2nMinusY2 => "neg_x2n_minus_y2",
            Variant::X2n1PlusY2 => "x2n1_plus_y2",
            Variant::X2n1MinusY2 => "x2n1_minus_y2",
            Variant::XTimesX2nMinusY2 => "x_x2n_minus_y2",
            Variant::XTimesX2nPlusY2 => "x_x2n_plus_y2",
            Variant::XTimesX2n1 => "x_x2n1_pm_y2",
            Variant::NegXTimesX2n1 => "neg_x_x2n1_pm_y2",
            Variant::X4Y3 => "x4_pm_y3",
            Variant::NegX4Y3 => "neg_x4_pm_y3",
            Variant::YTimesX3Y2 => "y_x3_pm_y2",
            Variant::X5Y3 => "x5_pm_y3",
        }
    }

    /// The (family, parity) slot this variant belongs to. Parity is the
    /// Milnor number modulo 2 where it matters.
    fn slot(self) -> (Family, Option<u32>) {
        match self {
            Variant::NegX2nPlusY2
            | Variant::X2nMinusY2
            | Variant::X2nPlusY2
            | Variant::NegX2nMinusY2 => (Family::A, Some(1)),
            Variant::X2n1PlusY2 | Variant::X2n1MinusY2 => (Family::A, Some(0)),
            Variant::XTimesX2nMinusY2 | Variant::XTimesX2nPlusY2 => (Family::D, Some(0)),
            Variant::XTimesX2n1 | Variant::NegXTimesX2n1 => (Family::D, Some(1)),
            Variant::X4Y3 | Variant::NegX4Y3 => (Family::E, Some(6)),
            Variant::YTimesX3Y2 => (Family::E, Some(7)),
            Variant::X5Y3 => (Family::E, Some(8)),
        }
    }

    fn fits(self, family: Family, index: u32) -> bool {
        let (f, key) = self.slot();
        if f != family {
            return false;
        }
        match family {
            Family::A => index >= 1 && Some(index % 2) == key,
            Family::D => index >= 4 && Some(index % 2) == key,
            Family::E => Some(index) == key,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = CatalogError;

    /// Accepts the canonical spelling; `+-` and `+/-` stand for `±` and
    /// whitespace is ignored.
    fn from_str(s: &str) -> Result<Self, CatalogError> {
        let norm: String = s
            .replace("+/-", "±")
            .replace("+-", "±")
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect();
        Variant::ALL
            .into_iter()
            .find(|v| v.as_str() == norm)
            .ok_or_else(|| CatalogError::UnknownType(format!("variant `{s}`")))
    }
}

impl Serialize for Variant {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Variant {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawType {
    family: Family,
    milnor_index: u32,
    variant: Variant,
}

/// A row of the catalog: family, Milnor number and sign case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawType", into = "RawType")]
pub struct SingularityType {
    family: Family,
    milnor_index: u32,
    variant: Variant,
}

impl TryFrom<RawType> for SingularityType {
    type Error = CatalogError;
    fn try_from(r: RawType) -> Result<Self, CatalogError> {
        SingularityType::new(r.family, r.milnor_index, r.variant)
    }
}

impl From<SingularityType> for RawType {
    fn from(t: SingularityType) -> Self {
        RawType {
            family: t.family,
            milnor_index: t.milnor_index,
            variant: t.variant,
        }
    }
}

impl SingularityType {
    pub fn new(family: Family, milnor_index: u32, variant: Variant) -> Result<Self, CatalogError> {
        if !variant.fits(family, milnor_index) {
            return Err(CatalogError::UnknownType(format!(
                "{family}{milnor_index} has no variant `{variant}`"
            )));
        }
        Ok(Self {
            family,
            milnor_index,
            variant,
        })
    }

    /// Parses a name such as `A3` together with a variant spelling.
    pub fn parse(name: &str, variant: &str) -> Result<Self, CatalogError> {
        let (family, index) = parse_name(name)?;
        Self::new(family, index, variant.parse()?)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn milnor_index(&self) -> u32 {
        self.milnor_index
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// The parameter `n` of the row (0 for the exceptional types).
    pub fn n(&self) -> u32 {
        let m = self.milnor_index;
        match self.family {
            Family::A if m % 2 == 1 => m.div_ceil(2),
            Family::A => m / 2,
            Family::D if m % 2 == 0 => (m - 2) / 2,
            Family::D => (m - 3) / 2,
            Family::E => 0,
        }
    }

    /// Number of real branches through the point.
    pub fn real_branches(&self) -> u32 {
        match self.variant {
            Variant::NegX2nPlusY2 | Variant::X2nMinusY2 => 2,
            Variant::X2nPlusY2 | Variant::NegX2nMinusY2 => 0,
            Variant::X2n1PlusY2 | Variant::X2n1MinusY2 => 1,
            Variant::XTimesX2nMinusY2 => 3,
            Variant::XTimesX2nPlusY2 => 1,
            Variant::XTimesX2n1 | Variant::NegXTimesX2n1 => 2,
            Variant::X4Y3 | Variant::NegX4Y3 => 1,
            Variant::YTimesX3Y2 => 2,
            Variant::X5Y3 => 1,
        }
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.family, self.milnor_index)
    }

    /// Name of the bundled morsification file, e.g. `a3_x2n_minus_y2.json`.
    pub fn fixture_file_name(&self) -> String {
        format!(
            "{}_{}.json",
            self.name().to_lowercase(),
            self.variant.slug()
        )
    }
}

impl fmt::Display for SingularityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.name(), self.variant)
    }
}

/// Splits `A3`, `d5`, `E7` into family and Milnor number.
pub fn parse_name(name: &str) -> Result<(Family, u32), CatalogError> {
    let unknown = || CatalogError::UnknownType(format!("`{name}`"));
    let name = name.trim();
    let mut chars = name.chars();
    let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
        Some('A') => Family::A,
        Some('D') => Family::D,
        Some('E') => Family::E,
        _ => return Err(unknown()),
    };
    let index: u32 = chars.as_str().parse().map_err(|_| unknown())?;
    let valid = match family {
        Family::A => index >= 1,
        Family::D => index >= 4,
        Family::E => (6..=8).contains(&index),
    };
    if !valid {
        return Err(unknown());
    }
    Ok((family, index))
}

/// All catalog rows for one Dynkin type.
pub fn variants_for(family: Family, milnor_index: u32) -> Vec<SingularityType> {
    Variant::ALL
        .into_iter()
        .filter_map(|v| SingularityType::new(family, milnor_index, v).ok())
        .collect()
}

/// Every catalog row with Milnor number at most `max_index`.
pub fn all_types(max_index: u32) -> Vec<SingularityType> {
    let mut out = Vec::new();
    for m in 1..=max_index {
        out.extend(variants_for(Family::A, m));
    }
    for m in 4..=max_index {
        out.extend(variants_for(Family::D, m));
    }
    for m in 6..=max_index.min(8) {
        out.extend(variants_for(Family::E, m));
    }
    out
}

fn form(labels: &[&str], rows: Vec<Vec<Rational>>) -> RationalSymmetricForm {
    RationalSymmetricForm::new(labels.to_vec(), rows).expect("catalog matrices are symmetric")
}

/// The local form on the positive sectors.
pub fn catalog_form(t: &SingularityType) -> RationalSymmetricForm {
    let n = t.n() as i64;
    let single = |v: Rational| form(&["s1"], vec![vec![v]]);
    match t.variant {
        Variant::NegX2nPlusY2 => {
            let v = frac(n, 2);
            form(
                &["s1", "s2"],
                vec![vec![v.clone(), v.clone()], vec![v.clone(), v]],
            )
        }
        Variant::X2nMinusY2 => {
            let d = frac(2 * n - 1, 2 * n);
            let o = frac(1, 2 * n);
            form(&["s1", "s2"], vec![vec![d.clone(), o.clone()], vec![o, d]])
        }
        Variant::X2nPlusY2 => single(int(2 * n)),
        Variant::NegX2nMinusY2 => RationalSymmetricForm::zero_dim(),
        Variant::X2n1PlusY2 => single(int(2 * n)),
        Variant::X2n1MinusY2 => single(frac(2 * n, 2 * n + 1)),
        Variant::XTimesX2nMinusY2 => {
            let d = frac(n + 1, 2);
            let o = frac(n, 2);
            let h = half();
            form(
                &["s1", "s2", "s0"],
                vec![
                    vec![d.clone(), o.clone(), h.clone()],
                    vec![o, d, h.clone()],
                    vec![h.clone(), h, int(1)],
                ],
            )
        }
        // Morsifications (x - b)(y^2 + T_{2n}(x) - 1) give 2n here; the two
        // expressions agree at D4, the only row with a bundled fixture.
        Variant::XTimesX2nPlusY2 => single(int(4 * n - 2)),
        Variant::XTimesX2n1 => form(
            &["s1", "s0"],
            vec![vec![int(2 * n + 1), int(1)], vec![int(1), int(1)]],
        ),
        Variant::NegXTimesX2n1 => {
            let d = frac(2 * n + 3, 4);
            let o = frac(2 * n + 1, 4);
            form(&["s1", "s2"], vec![vec![d.clone(), o.clone()], vec![o, d]])
        }
        Variant::X4Y3 => single(int(6)),
        Variant::NegX4Y3 => single(int(2)),
        Variant::YTimesX3Y2 => form(
            &["s1", "s0"],
            vec![vec![frac(7, 2), frac(3, 2)], vec![frac(3, 2), frac(3, 2)]],
        ),
        Variant::X5Y3 => single(int(8)),
    }
}

/// Inertia of a Milnor form: `(mu_plus, mu_minus)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MilnorData {
    pub mu_plus: u32,
    pub mu_minus: u32,
}

impl std::ops::Add for MilnorData {
    type Output = MilnorData;
    fn add(self, o: MilnorData) -> MilnorData {
        MilnorData {
            mu_plus: self.mu_plus + o.mu_plus,
            mu_minus: self.mu_minus + o.mu_minus,
        }
    }
}

impl std::iter::Sum for MilnorData {
    fn sum<I: Iterator<Item = MilnorData>>(iter: I) -> MilnorData {
        iter.fold(MilnorData::default(), |a, b| a + b)
    }
}

/// Milnor inertia of the suspended surface singularity. ADE lattices are
/// negative definite, so this is `(0, mu)`.
pub fn catalog_milnor(t: &SingularityType) -> MilnorData {
    MilnorData {
        mu_plus: 0,
        mu_minus: t.milnor_index,
    }
}

/// Dynkin diagram of the type, which is also the resolution graph of the
/// suspended surface singularity.
pub fn catalog_resolution_graph(t: &SingularityType) -> ResolutionGraph {
    dynkin_graph(t.family, t.milnor_index)
}

pub fn dynkin_graph(family: Family, rank: u32) -> ResolutionGraph {
    let v = |i: u32| format!("v{i}");
    let vertices = (1..=rank)
        .map(|i| GraphVertex { id: v(i), genus: 0 })
        .collect();
    let mut edges = Vec::new();
    let (chain, branch) = match family {
        Family::A => (rank, None),
        Family::D => (rank - 1, Some(rank - 2)),
        Family::E => (rank - 1, Some(3)),
    };
    for i in 1..chain {
        edges.push((v(i), v(i + 1)));
    }
    if let Some(at) = branch {
        edges.push((v(at), v(rank)));
    }
    ResolutionGraph::new(vertices, edges).expect("Dynkin diagrams are simple graphs")
}

struct FixtureBuilder {
    regions: Vec<MorsifiedRegion>,
    nodes: Vec<[String; 2]>,
}

impl FixtureBuilder {
    fn new() -> Self {
        Self {
            regions: Vec::new(),
            nodes: Vec::new(),
        }
    }

    fn boundary(mut self, id: &str, euler: i64) -> Self {
        self.regions.push(MorsifiedRegion {
            id: id.into(),
            interior: false,
            euler,
        });
        self
    }

    fn interior(mut self, id: &str) -> Self {
        self.regions.push(MorsifiedRegion {
            id: id.into(),
            interior: true,
            euler: 1,
        });
        self
    }

    fn lobes(mut self, count: u32) -> Self {
        for i in 1..=count {
            self = self.interior(&format!("l{i}"));
        }
        self
    }

    fn node(mut self, a: &str, b: &str) -> Self {
        self.nodes.push([a.into(), b.into()]);
        self
    }

    fn nodes(mut self, a: &str, b: &str, times: u32) -> Self {
        for _ in 0..times {
            self = self.node(a, b);
        }
        self
    }

    fn path(mut self, ids: &[String]) -> Self {
        for w in ids.windows(2) {
            self = self.node(&w[0], &w[1]);
        }
        self
    }

    fn build(self, mu: u32, rho: u32) -> MorsifiedLocalScheme {
        MorsifiedLocalScheme::new(mu, rho, self.regions, self.nodes)
            .expect("bundled morsifications satisfy their invariants")
    }
}

fn chain(first: &str, count: u32, last: &str) -> Vec<String> {
    let mut ids = vec![first.to_string()];
    ids.extend((1..=count).map(|i| format!("l{i}")));
    ids.push(last.to_string());
    ids
}

/// A bundled real morsification realizing the catalog row.
pub fn catalog_morsification(t: &SingularityType) -> Result<MorsifiedLocalScheme, CatalogError> {
    let n = t.n();
    let mu = t.milnor_index;
    let rho = t.real_branches();
    let fb = FixtureBuilder::new();
    let scheme = match t.variant {
        // y^2 - P(x)^2, P with n simple real roots
        Variant::NegX2nPlusY2 => fb.boundary("s1", 1).boundary("s2", 1).nodes("s1", "s2", n),
        // P(x)^2 - y^2: n - 1 lenses between the branches
        Variant::X2nMinusY2 => {
            let ids = chain("s1", n - 1, "s2");
            fb.boundary("s1", 1)
                .lobes(n - 1)
                .boundary("s2", 1)
                .path(&ids)
        }
        // y^2 + T_{2n}(x) - 1: the collar touches itself at n - 1 nodes
        Variant::X2nPlusY2 => fb.boundary("s1", 1 - n as i64).nodes("s1", "s1", n - 1),
        Variant::NegX2nMinusY2 => {
            let ids: Vec<String> = (1..=n).map(|i| format!("l{i}")).collect();
            fb.lobes(n).path(&ids)
        }
        // y^2 + T_{2n+1}(x) - 1
        Variant::X2n1PlusY2 => fb.boundary("s1", 1 - n as i64).nodes("s1", "s1", n),
        // T_{2n+1}(x) + 1 - y^2: n lobes and a tail
        Variant::X2n1MinusY2 => {
            let mut ids: Vec<String> = (1..=n).map(|i| format!("l{i}")).collect();
            ids.push("s1".into());
            fb.lobes(n).boundary("s1", 1).path(&ids)
        }
        // (x - b)(P(x)^2 - y^2), b left of the roots of P
        Variant::XTimesX2nMinusY2 => {
            let ids = chain("t", n - 1, "s0");
            fb.boundary("s1", 1)
                .boundary("s2", 1)
                .boundary("s0", 1)
                .interior("t")
                .lobes(n - 1)
                .node("s1", "t")
                .node("s2", "t")
                .path(&ids)
        }
        Variant::XTimesX2nPlusY2 if n == 1 => {
            // (x - b)(x^2 + y^2 - e): the line cuts the oval
            fb.boundary("s1", 1).interior("h").nodes("h", "s1", 2)
        }
        Variant::XTimesX2nPlusY2 => return Err(CatalogError::NoFixture(t.to_string())),
        // (x - b)(T_{2n+1}(x) + 1 - y^2), the line cuts the first lobe
        Variant::XTimesX2n1 => {
            let ids = chain("h", n - 1, "s0");
            fb.boundary("s1", 1)
                .interior("h")
                .lobes(n - 1)
                .boundary("s0", 1)
                .nodes("s1", "h", 2)
                .path(&ids)
        }
        // -(x - b)(T_{2n+1}(x) + 1 - y^2)
        Variant::NegXTimesX2n1 => fb
            .boundary("s1", 1)
            .boundary("s2", 1)
            .interior("h")
            .node("h", "s1")
            .node("h", "s2")
            .nodes("s1", "s2", n),
        // T_3(y) + T_4(x)
        Variant::X4Y3 => fb.boundary("s1", 1).interior("h").nodes("s1", "h", 3),
        // T_3(y) - T_4(x)
        Variant::NegX4Y3 => fb
            .boundary("s1", 1)
            .lobes(2)
            .node("s1", "l1")
            .node("s1", "l2")
            .node("l1", "l2"),
        // (y - b)(y^2 + T_3(x) - 1)
        Variant::YTimesX3Y2 => fb
            .boundary("s1", 1)
            .boundary("s0", 1)
            .interior("h")
            .node("s0", "s1")
            .node("h", "s0")
            .nodes("h", "s1", 2),
        // T_5(x) + T_3(y)
        Variant::X5Y3 => fb
            .boundary("s1", 1)
            .lobes(2)
            .node("s1", "l1")
            .node("l1", "l2")
            .nodes("s1", "l2", 2),
    };
    Ok(scheme.build(mu, rho))
}
