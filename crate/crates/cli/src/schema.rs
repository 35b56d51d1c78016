//! Problem-file schema, version 1, and its conversion to engine types.
//!
//! Every scalar is a string: rationals as `"p/q"`, Gaussian rationals as
//! `"a/b+c/d i"`. Cones are named by their sorted ray-index lists, never by
//! internal cone ids, so a file does not depend on the engine's cone order.

use std::collections::BTreeMap;

use hyperloc::arith::{format_q, parse_q, Gq, Q};
use hyperloc::charcycle::{Covector, EmbeddedCell, EmbeddedComplex, TestFunction};
use hyperloc::conic::{ConicSheaf, Equivariant, Grading};
use hyperloc::euler::{Cell, CellComplex, CellularSheafModel, ConstructibleFn, FixedCellData, SelfMap};
use hyperloc::fan::Fan;
use hyperloc::fixtures::twisted;
use hyperloc::lefschetz::{CellNormalData, Embedding, FixedComponentModel};
use hyperloc::matrix::{GMatrix, Matrix, QMatrix};
use hyperloc::spectral::Subspace;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// Largest sector count accepted for parametric fixtures.
pub const MAX_K: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rat(pub Q);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cx(pub Gq);

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_q(&self.0))
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map(Rat).map_err(serde::de::Error::custom)
    }
}

impl Serialize for Cx {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Cx {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map(Cx).map_err(serde::de::Error::custom)
    }
}

pub type Vector = Vec<Rat>;
pub type MatrixDoc = Vec<Vec<Rat>>;
pub type CMatrixDoc = Vec<Vec<Cx>>;

/// A versioned problem file: `version`, an optional free-text `note`, and
/// exactly one of the keys `localization`, `contribution`, `verification`,
/// `charcycle` or `family`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFile", into = "RawFile")]
pub struct ProblemFile {
    pub version: u32,
    pub note: Option<String>,
    pub problem: ProblemDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    note: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    localization: Option<NormalDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    contribution: Option<ComponentDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    verification: Option<VerificationDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    charcycle: Option<CharCycleDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    family: Option<Family>,
}

impl TryFrom<RawFile> for ProblemFile {
    type Error = String;

    fn try_from(r: RawFile) -> Result<Self, String> {
        let mut found = Vec::new();
        found.extend(r.localization.map(ProblemDoc::Localization));
        found.extend(r.contribution.map(ProblemDoc::Contribution));
        found.extend(r.verification.map(ProblemDoc::Verification));
        found.extend(r.charcycle.map(ProblemDoc::Charcycle));
        found.extend(r.family.map(ProblemDoc::Family));
        if found.len() != 1 {
            return Err(format!(
                "expected exactly one of localization, contribution, verification, charcycle, family; found {}",
                found.len()
            ));
        }
        Ok(ProblemFile { version: r.version, note: r.note, problem: found.pop().expect("one problem") })
    }
}

impl From<ProblemFile> for RawFile {
    fn from(f: ProblemFile) -> RawFile {
        let mut r = RawFile {
            version: f.version,
            note: f.note,
            localization: None,
            contribution: None,
            verification: None,
            charcycle: None,
            family: None,
        };
        match f.problem {
            ProblemDoc::Localization(d) => r.localization = Some(d),
            ProblemDoc::Contribution(d) => r.contribution = Some(d),
            ProblemDoc::Verification(d) => r.verification = Some(d),
            ProblemDoc::Charcycle(d) => r.charcycle = Some(d),
            ProblemDoc::Family(d) => r.family = Some(d),
        }
        r
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ProblemDoc {
    Localization(NormalDoc),
    Contribution(ComponentDoc),
    Verification(VerificationDoc),
    Charcycle(CharCycleDoc),
    Family(Family),
}

/// A complete simplicial fan. `cones` may list only maximal cones; faces are
/// added.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FanDoc {
    pub ambient: usize,
    pub rays: Vec<Vector>,
    pub cones: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StalkDoc {
    pub cone: Vec<usize>,
    pub degree: i32,
    pub dim: usize,
}

/// Generization map from the stalk on `face` to the stalk on `coface`, a cone
/// having `face` as a facet. Missing pairs are zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerizationDoc {
    pub face: Vec<usize>,
    pub coface: Vec<usize>,
    pub degree: i32,
    pub matrix: CMatrixDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SheafDoc {
    pub stalks: Vec<StalkDoc>,
    #[serde(default)]
    pub generization: Vec<GenerizationDoc>,
}

/// Map from the stalk on `cone` to the stalk on its image cone.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EtaDoc {
    pub cone: Vec<usize>,
    pub degree: i32,
    pub matrix: CMatrixDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquivariantDoc {
    pub map: MatrixDoc,
    #[serde(default)]
    pub eta: Vec<EtaDoc>,
}

/// Conic normal data: fan, sheaf, map with equivariant structure, and
/// optional designated subspaces given by spanning vectors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalDoc {
    pub fan: FanDoc,
    pub sheaf: SheafDoc,
    pub equivariant: EquivariantDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expanding: Option<Vec<Vector>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shrinking: Option<Vec<Vector>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellDoc {
    pub dim: usize,
    #[serde(default)]
    pub faces: Vec<usize>,
}

/// Cells with their codimension-one faces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexDoc {
    pub compact: bool,
    pub cells: Vec<CellDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddedCellDoc {
    pub vertices: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rays: Vec<Vector>,
}

/// Each cell is the relative interior of the hull of its vertices plus the
/// cone of its rays. The first vertex of a cell is its base point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddedDoc {
    pub complex: ComplexDoc,
    pub ambient: usize,
    pub vertices: Vec<Vector>,
    pub cells: Vec<EmbeddedCellDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingDoc {
    pub refinement: EmbeddedDoc,
    pub parent: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentDoc {
    pub name: String,
    pub complex: ComplexDoc,
    pub cells: Vec<NormalDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding: Option<EmbeddingDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapDoc {
    Identity,
    Cellular { fixed: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedDataDoc {
    pub cell: usize,
    pub sign: i8,
    pub traces: BTreeMap<i32, Cx>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlobalDoc {
    pub complex: ComplexDoc,
    pub stalks: Vec<BTreeMap<i32, usize>>,
    pub map: MapDoc,
    pub fixed: Vec<FixedDataDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationDoc {
    pub global: GlobalDoc,
    pub components: Vec<ComponentDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CovectorDoc {
    pub cell: usize,
    pub xi: Vector,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestFunctionDoc {
    Height(Vector),
    Critical(Vec<CovectorDoc>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharCycleDoc {
    pub embedded: EmbeddedDoc,
    pub function: Vec<Cx>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub test_function: Option<TestFunctionDoc>,
}

/// Programmatically generated fixtures with an integer parameter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Family {
    /// North-pole component of the twisted map on `S¹ × D²` with `k` sectors.
    TwistedSectors { k: usize },
}

impl Family {
    pub fn k(&self) -> usize {
        match self {
            Family::TwistedSectors { k } => *k,
        }
    }

    pub fn with_k(&self, k: usize) -> Family {
        match self {
            Family::TwistedSectors { .. } => Family::TwistedSectors { k },
        }
    }

    fn check(&self) -> Result<(), CliError> {
        let k = self.k();
        if !(1..=MAX_K).contains(&k) {
            return Err(schema("family.k", format!("k = {k} is outside 1..={MAX_K}")));
        }
        Ok(())
    }

    /// Global model and fixed components.
    pub fn verification(&self) -> (CellularSheafModel, Vec<FixedComponentModel>) {
        match self {
            Family::TwistedSectors { k } => {
                let f = twisted(*k);
                (f.global, vec![f.component])
            }
        }
    }
}

/// A validated problem. Built once per invocation, so variant sizes do
/// not matter.
#[derive(Clone, Debug, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum Problem {
    Localization(CellNormalData),
    Contribution(FixedComponentModel),
    Verification { global: CellularSheafModel, components: Vec<FixedComponentModel> },
    CharCycle { complex: EmbeddedComplex, function: ConstructibleFn, test: Option<TestFunction> },
    Family(Family),
}

impl Problem {
    pub fn kind(&self) -> &'static str {
        match self {
            Problem::Localization(_) => "localization",
            Problem::Contribution(_) => "contribution",
            Problem::Verification { .. } => "verification",
            Problem::CharCycle { .. } => "charcycle",
            Problem::Family(_) => "family",
        }
    }

    pub fn from_file(f: &ProblemFile) -> Result<Problem, CliError> {
        if f.version != SCHEMA_VERSION {
            return Err(CliError::Version(f.version));
        }
        match &f.problem {
            ProblemDoc::Localization(d) => Ok(Problem::Localization(normal_from_doc("localization", d)?)),
            ProblemDoc::Contribution(d) => Ok(Problem::Contribution(component_from_doc("contribution", d)?)),
            ProblemDoc::Verification(d) => {
                let global = global_from_doc("verification.global", &d.global)?;
                let components = d
                    .components
                    .iter()
                    .enumerate()
                    .map(|(i, c)| component_from_doc(&format!("verification.components[{i}]"), c))
                    .collect::<Result<_, _>>()?;
                Ok(Problem::Verification { global, components })
            }
            ProblemDoc::Charcycle(d) => {
                let complex = embedded_from_doc("charcycle.embedded", &d.embedded)?;
                let values = d.function.iter().map(|c| c.0.clone()).collect();
                let function = ConstructibleFn::new(complex.complex().clone(), values)
                    .map_err(|e| CliError::engine("charcycle.function", e))?;
                let test = d.test_function.as_ref().map(test_from_doc);
                Ok(Problem::CharCycle { complex, function, test })
            }
            ProblemDoc::Family(fam) => {
                fam.check()?;
                Ok(Problem::Family(fam.clone()))
            }
        }
    }

    pub fn to_file(&self, note: Option<String>) -> Result<ProblemFile, CliError> {
        let problem = match self {
            Problem::Localization(d) => ProblemDoc::Localization(normal_to_doc(d)?),
            Problem::Contribution(m) => ProblemDoc::Contribution(component_to_doc(m)?),
            Problem::Verification { global, components } => ProblemDoc::Verification(VerificationDoc {
                global: global_to_doc(global),
                components: components.iter().map(component_to_doc).collect::<Result<_, _>>()?,
            }),
            Problem::CharCycle { complex, function, test } => ProblemDoc::Charcycle(CharCycleDoc {
                embedded: embedded_to_doc(complex),
                function: function.values().iter().cloned().map(Cx).collect(),
                test_function: test.as_ref().map(test_to_doc),
            }),
            Problem::Family(f) => ProblemDoc::Family(f.clone()),
        };
        Ok(ProblemFile { version: SCHEMA_VERSION, note, problem })
    }
}

fn schema(at: &str, reason: impl Into<String>) -> CliError {
    CliError::Schema { at: at.to_string(), reason: reason.into() }
}

fn rats(v: &[Q]) -> Vector {
    v.iter().cloned().map(Rat).collect()
}

fn unrats(v: &[Rat]) -> Vec<Q> {
    v.iter().map(|r| r.0.clone()).collect()
}

fn matrix_from_rows<T: hyperloc::field::Field>(at: &str, rows: Vec<Vec<T>>) -> Result<Matrix<T>, CliError> {
    if rows.is_empty() || rows[0].is_empty() {
        return Err(schema(at, "matrix is empty"));
    }
    Matrix::from_rows(rows).ok_or_else(|| schema(at, "matrix rows have different lengths"))
}

fn qmatrix(at: &str, m: &MatrixDoc) -> Result<QMatrix, CliError> {
    matrix_from_rows(at, m.iter().map(|r| unrats(r)).collect())
}

fn gmatrix(at: &str, m: &CMatrixDoc) -> Result<GMatrix, CliError> {
    matrix_from_rows(at, m.iter().map(|r| r.iter().map(|c| c.0.clone()).collect()).collect())
}

fn qmatrix_doc(m: &QMatrix) -> MatrixDoc {
    m.to_rows().iter().map(|r| rats(r)).collect()
}

fn gmatrix_doc(m: &GMatrix) -> CMatrixDoc {
    m.to_rows().into_iter().map(|r| r.into_iter().map(Cx).collect()).collect()
}

fn fan_from_doc(at: &str, d: &FanDoc) -> Result<Fan, CliError> {
    let rays = d.rays.iter().map(|r| unrats(r)).collect();
    Fan::from_top_cones(d.ambient, rays, &d.cones).map_err(|e| CliError::engine(at, e))
}

/// Maximal cones only.
fn fan_to_doc(fan: &Fan) -> FanDoc {
    let n = fan.num_cones();
    let cones = (0..n)
        .filter(|&c| !(0..n).any(|c2| c2 != c && fan.is_face(c, c2)))
        .map(|c| fan.cone(c).to_vec())
        .collect();
    FanDoc { ambient: fan.ambient_dim(), rays: fan.rays().iter().map(|r| rats(r)).collect(), cones }
}

fn cone_of(fan: &Fan, at: &str, rays: &[usize]) -> Result<usize, CliError> {
    let mut r = rays.to_vec();
    r.sort_unstable();
    fan.cone_id(&r).ok_or_else(|| schema(at, format!("{rays:?} is not a cone of the fan")))
}

fn sheaf_from_doc(at: &str, fan: Fan, d: &SheafDoc) -> Result<ConicSheaf, CliError> {
    let mut stalks = vec![Grading::new(); fan.num_cones()];
    for (i, s) in d.stalks.iter().enumerate() {
        let here = format!("{at}.stalks[{i}]");
        let c = cone_of(&fan, &here, &s.cone)?;
        if stalks[c].insert(s.degree, s.dim).is_some() {
            return Err(schema(&here, format!("duplicate stalk for cone {:?} in degree {}", s.cone, s.degree)));
        }
    }
    let mut maps = BTreeMap::new();
    for (i, g) in d.generization.iter().enumerate() {
        let here = format!("{at}.generization[{i}]");
        let a = cone_of(&fan, &here, &g.face)?;
        let b = cone_of(&fan, &here, &g.coface)?;
        if maps.insert((a, b, g.degree), gmatrix(&here, &g.matrix)?).is_some() {
            return Err(schema(&here, "duplicate generization map"));
        }
    }
    ConicSheaf::new(fan, stalks, maps).map_err(|e| CliError::engine(at, e))
}

fn sheaf_to_doc(g: &ConicSheaf) -> SheafDoc {
    let fan = g.fan();
    let stalks = g
        .stalks()
        .iter()
        .enumerate()
        .flat_map(|(c, gr)| gr.iter().map(move |(&degree, &dim)| StalkDoc { cone: fan.cone(c).to_vec(), degree, dim }))
        .collect();
    let generization = g
        .generization_maps()
        .iter()
        .map(|(&(a, b, degree), m)| GenerizationDoc {
            face: fan.cone(a).to_vec(),
            coface: fan.cone(b).to_vec(),
            degree,
            matrix: gmatrix_doc(m),
        })
        .collect();
    SheafDoc { stalks, generization }
}

fn equivariant_from_doc(at: &str, g: &ConicSheaf, d: &EquivariantDoc) -> Result<Equivariant, CliError> {
    let map = qmatrix(&format!("{at}.map"), &d.map)?;
    let mut eta = BTreeMap::new();
    for (i, e) in d.eta.iter().enumerate() {
        let here = format!("{at}.eta[{i}]");
        let c = cone_of(g.fan(), &here, &e.cone)?;
        if eta.insert((c, e.degree), gmatrix(&here, &e.matrix)?).is_some() {
            return Err(schema(&here, "duplicate equivariant map"));
        }
    }
    Equivariant::new(g, map, eta).map_err(|e| CliError::engine(at, e))
}

fn equivariant_to_doc(g: &ConicSheaf, e: &Equivariant) -> EquivariantDoc {
    let eta = e
        .eta_maps()
        .iter()
        .map(|(&(c, degree), m)| EtaDoc { cone: g.fan().cone(c).to_vec(), degree, matrix: gmatrix_doc(m) })
        .collect();
    EquivariantDoc { map: qmatrix_doc(e.map()), eta }
}

fn subspace_from_doc(at: &str, ambient: usize, v: &[Vector]) -> Result<Subspace, CliError> {
    let vs: Vec<Vec<Q>> = v.iter().map(|r| unrats(r)).collect();
    if vs.iter().any(|r| r.len() != ambient) {
        return Err(schema(at, format!("spanning vectors must have length {ambient}")));
    }
    Ok(Subspace::span(ambient, &vs))
}

fn subspace_to_doc(s: &Subspace) -> Result<Vec<Vector>, CliError> {
    let b = s.exact_basis().ok_or_else(|| schema("subspace", "numerical subspaces have no exact serialization"))?;
    Ok(b.iter().map(|r| rats(r)).collect())
}

pub fn normal_from_doc(at: &str, d: &NormalDoc) -> Result<CellNormalData, CliError> {
    let fan = fan_from_doc(&format!("{at}.fan"), &d.fan)?;
    let r = fan.ambient_dim();
    let sheaf = sheaf_from_doc(&format!("{at}.sheaf"), fan, &d.sheaf)?;
    let eta = equivariant_from_doc(&format!("{at}.equivariant"), &sheaf, &d.equivariant)?;
    let mut n = CellNormalData::new(sheaf, eta);
    if let Some(e) = &d.expanding {
        n.expanding = Some(subspace_from_doc(&format!("{at}.expanding"), r, e)?);
    }
    if let Some(s) = &d.shrinking {
        n.shrinking = Some(subspace_from_doc(&format!("{at}.shrinking"), r, s)?);
    }
    Ok(n)
}

pub fn normal_to_doc(n: &CellNormalData) -> Result<NormalDoc, CliError> {
    Ok(NormalDoc {
        fan: fan_to_doc(n.sheaf.fan()),
        sheaf: sheaf_to_doc(&n.sheaf),
        equivariant: equivariant_to_doc(&n.sheaf, &n.eta),
        expanding: n.expanding.as_ref().map(subspace_to_doc).transpose()?,
        shrinking: n.shrinking.as_ref().map(subspace_to_doc).transpose()?,
    })
}

fn complex_from_doc(at: &str, d: &ComplexDoc) -> Result<CellComplex, CliError> {
    let cells = d.cells.iter().map(|c| Cell { dim: c.dim, faces: c.faces.clone() }).collect();
    CellComplex::new(cells, d.compact).map_err(|e| CliError::engine(at, e))
}

fn complex_to_doc(c: &CellComplex) -> ComplexDoc {
    ComplexDoc {
        compact: c.is_compact(),
        cells: c.cells().iter().map(|c| CellDoc { dim: c.dim, faces: c.faces.clone() }).collect(),
    }
}

fn embedded_from_doc(at: &str, d: &EmbeddedDoc) -> Result<EmbeddedComplex, CliError> {
    let complex = complex_from_doc(&format!("{at}.complex"), &d.complex)?;
    let mut cells = Vec::with_capacity(d.cells.len());
    for (i, c) in d.cells.iter().enumerate() {
        let points = c
            .vertices
            .iter()
            .map(|&v| {
                d.vertices
                    .get(v)
                    .map(|p| unrats(p))
                    .ok_or_else(|| schema(&format!("{at}.cells[{i}]"), format!("vertex {v} does not exist")))
            })
            .collect::<Result<_, _>>()?;
        cells.push(EmbeddedCell { points, rays: c.rays.iter().map(|r| unrats(r)).collect() });
    }
    EmbeddedComplex::new(complex, d.ambient, cells).map_err(|e| CliError::engine(at, e))
}

/// Vertices are numbered in order of first appearance.
fn embedded_to_doc(x: &EmbeddedComplex) -> EmbeddedDoc {
    let mut vertices: Vec<Vec<Q>> = Vec::new();
    let mut cells = Vec::new();
    for c in 0..x.complex().len() {
        let cell = x.cell(c);
        let idx = cell
            .points
            .iter()
            .map(|p| match vertices.iter().position(|v| v == p) {
                Some(i) => i,
                None => {
                    vertices.push(p.clone());
                    vertices.len() - 1
                }
            })
            .collect();
        cells.push(EmbeddedCellDoc { vertices: idx, rays: cell.rays.iter().map(|r| rats(r)).collect() });
    }
    EmbeddedDoc {
        complex: complex_to_doc(x.complex()),
        ambient: x.ambient_dim(),
        vertices: vertices.iter().map(|v| rats(v)).collect(),
        cells,
    }
}

pub fn component_from_doc(at: &str, d: &ComponentDoc) -> Result<FixedComponentModel, CliError> {
    let complex = complex_from_doc(&format!("{at}.complex"), &d.complex)?;
    let cells = d
        .cells
        .iter()
        .enumerate()
        .map(|(i, c)| normal_from_doc(&format!("{at}.cells[{i}]"), c))
        .collect::<Result<_, _>>()?;
    let embedding = match &d.embedding {
        Some(e) => Some(Embedding {
            complex: embedded_from_doc(&format!("{at}.embedding.refinement"), &e.refinement)?,
            parent: e.parent.clone(),
        }),
        None => None,
    };
    FixedComponentModel::new(d.name.clone(), complex, cells, embedding).map_err(|e| CliError::engine(at, e))
}

pub fn component_to_doc(m: &FixedComponentModel) -> Result<ComponentDoc, CliError> {
    Ok(ComponentDoc {
        name: m.name().to_string(),
        complex: complex_to_doc(m.complex()),
        cells: m.cells().iter().map(normal_to_doc).collect::<Result<_, _>>()?,
        embedding: m
            .embedding()
            .map(|e| EmbeddingDoc { refinement: embedded_to_doc(&e.complex), parent: e.parent.clone() }),
    })
}

fn global_from_doc(at: &str, d: &GlobalDoc) -> Result<CellularSheafModel, CliError> {
    let complex = complex_from_doc(&format!("{at}.complex"), &d.complex)?;
    let map = match &d.map {
        MapDoc::Identity => SelfMap::Identity,
        MapDoc::Cellular { fixed } => SelfMap::Cellular { fixed: fixed.iter().copied().collect() },
    };
    let mut data = BTreeMap::new();
    for (i, f) in d.fixed.iter().enumerate() {
        let traces = f.traces.iter().map(|(&k, v)| (k, v.0.clone())).collect();
        if data.insert(f.cell, FixedCellData { sign: f.sign, traces }).is_some() {
            return Err(schema(&format!("{at}.fixed[{i}]"), format!("duplicate data for cell {}", f.cell)));
        }
    }
    CellularSheafModel::new(complex, d.stalks.clone(), map, data).map_err(|e| CliError::engine(at, e))
}

fn global_to_doc(g: &CellularSheafModel) -> GlobalDoc {
    let map = match g.self_map() {
        SelfMap::Identity => MapDoc::Identity,
        SelfMap::Cellular { fixed } => MapDoc::Cellular { fixed: fixed.iter().copied().collect() },
    };
    let fixed = g
        .fixed_data()
        .iter()
        .map(|(&cell, d)| FixedDataDoc {
            cell,
            sign: d.sign,
            traces: d.traces.iter().map(|(&k, v)| (k, Cx(v.clone()))).collect(),
        })
        .collect();
    GlobalDoc { complex: complex_to_doc(g.complex()), stalks: g.stalks().to_vec(), map, fixed }
}

fn test_from_doc(d: &TestFunctionDoc) -> TestFunction {
    match d {
        TestFunctionDoc::Height(l) => TestFunction::Height(unrats(l)),
        TestFunctionDoc::Critical(cs) => {
            TestFunction::Critical(cs.iter().map(|c| Covector { cell: c.cell, xi: unrats(&c.xi) }).collect())
        }
    }
}

fn test_to_doc(f: &TestFunction) -> TestFunctionDoc {
    match f {
        TestFunction::Height(l) => TestFunctionDoc::Height(rats(l)),
        TestFunction::Critical(cs) => {
            TestFunctionDoc::Critical(cs.iter().map(|c| CovectorDoc { cell: c.cell, xi: rats(&c.xi) }).collect())
        }
    }
}
