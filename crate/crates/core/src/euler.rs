//! Finite cell complexes, constructible functions and Euler integration,
//! plus the cellular Hopf trace of a sheaf endomorphism.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::Zero;

use crate::arith::{Gq, Q};
use crate::conic::Grading;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EulerError {
    #[error("cell {cell} lists missing face {face}")]
    UnknownFace { cell: usize, face: usize },
    #[error("cell {cell} of dimension {dim} lists face {face} of dimension {face_dim}")]
    FaceDimension { cell: usize, dim: usize, face: usize, face_dim: usize },
    #[error("compact complex has a cell {cell} of positive dimension without faces")]
    OpenCell { cell: usize },
    #[error("complex is not compact")]
    NotCompact,
    #[error("expected {expected} values, got {got}")]
    Length { expected: usize, got: usize },
    #[error("fixed cell {cell} has no trace data")]
    MissingFixedCellData { cell: usize },
    #[error("fixed cell {cell} has sign {sign}, expected ±1")]
    InvalidSign { cell: usize, sign: i8 },
    #[error("the designated self-map is not the identity")]
    NonIdentityMap,
    #[error("functions live on different complexes")]
    ComplexMismatch,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cell {
    pub dim: usize,
    /// Codimension-one faces.
    pub faces: Vec<usize>,
}

/// A finite cell complex given by its cover relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellComplex {
    cells: Vec<Cell>,
    compact: bool,
}

impl CellComplex {
    pub fn new(cells: Vec<Cell>, compact: bool) -> Result<CellComplex, EulerError> {
        for (i, c) in cells.iter().enumerate() {
            for &f in &c.faces {
                let Some(fc) = cells.get(f) else {
                    return Err(EulerError::UnknownFace { cell: i, face: f });
                };
                if fc.dim + 1 != c.dim {
                    return Err(EulerError::FaceDimension { cell: i, dim: c.dim, face: f, face_dim: fc.dim });
                }
            }
            if compact && c.dim > 0 && c.faces.is_empty() {
                return Err(EulerError::OpenCell { cell: i });
            }
        }
        Ok(CellComplex { cells, compact })
    }

    /// Builds from `(dim, faces)` pairs.
    pub fn from_faces(cells: &[(usize, Vec<usize>)], compact: bool) -> Result<CellComplex, EulerError> {
        CellComplex::new(cells.iter().map(|(d, f)| Cell { dim: *d, faces: f.clone() }).collect(), compact)
    }

    pub fn point() -> CellComplex {
        CellComplex::from_faces(&[(0, vec![])], true).unwrap()
    }

    /// Closed interval: two vertices and an edge.
    pub fn interval() -> CellComplex {
        CellComplex::from_faces(&[(0, vec![]), (0, vec![]), (1, vec![0, 1])], true).unwrap()
    }

    /// Circle with `n ≥ 1` vertices and `n` arcs; vertices come first.
    pub fn circle(n: usize) -> CellComplex {
        assert!(n >= 1);
        let mut cells: Vec<(usize, Vec<usize>)> = (0..n).map(|_| (0, vec![])).collect();
        for j in 0..n {
            let mut f = vec![j, (j + 1) % n];
            f.dedup();
            cells.push((1, f));
        }
        CellComplex::from_faces(&cells, true).unwrap()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn dim(&self, c: usize) -> usize {
        self.cells[c].dim
    }

    pub fn faces(&self, c: usize) -> &[usize] {
        &self.cells[c].faces
    }

    pub fn is_compact(&self) -> bool {
        self.compact
    }

    pub fn max_dim(&self) -> usize {
        self.cells.iter().map(|c| c.dim).max().unwrap_or(0)
    }

    /// The cell and every cell in its closure.
    pub fn closure(&self, c: usize) -> BTreeSet<usize> {
        let mut out = BTreeSet::from([c]);
        let mut stack = vec![c];
        while let Some(x) = stack.pop() {
            for &f in &self.cells[x].faces {
                if out.insert(f) {
                    stack.push(f);
                }
            }
        }
        out
    }

    /// `a ≤ b`: `a` lies in the closure of `b`.
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.closure(b).contains(&a)
    }

    /// Cells of lowest-to-highest dimension.
    pub fn cells_by_dim(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.len()).collect();
        v.sort_by_key(|&c| self.cells[c].dim);
        v
    }

    /// `χ` of a union of cells, `Σ (−1)^dim`.
    pub fn euler_characteristic(&self, cells: &BTreeSet<usize>) -> i64 {
        cells.iter().map(|&c| sign(self.cells[c].dim)).sum()
    }

    /// Product complex; cell `(a, b)` has index `a·|other| + b`.
    pub fn product(&self, other: &CellComplex) -> CellComplex {
        let n = other.len();
        let mut cells = Vec::with_capacity(self.len() * n);
        for (a, ca) in self.cells.iter().enumerate() {
            for (b, cb) in other.cells.iter().enumerate() {
                let mut faces: Vec<usize> = ca.faces.iter().map(|&fa| fa * n + b).collect();
                faces.extend(cb.faces.iter().map(|&fb| a * n + fb));
                cells.push(Cell { dim: ca.dim + cb.dim, faces });
            }
        }
        CellComplex { cells, compact: self.compact && other.compact }
    }

    /// Barycentric subdivision of a regular complex: one cell per chain of
    /// the face poset. The second component maps each new cell to the top
    /// of its chain, the old cell containing it.
    pub fn barycentric_subdivision(&self) -> (CellComplex, Vec<usize>) {
        let closures: Vec<BTreeSet<usize>> = (0..self.len()).map(|c| self.closure(c)).collect();
        let mut chains: Vec<Vec<usize>> = (0..self.len()).map(|c| vec![c]).collect();
        let mut frontier = chains.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for ch in &frontier {
                let top = *ch.last().unwrap();
                for (b, cl) in closures.iter().enumerate() {
                    if b != top && cl.contains(&top) {
                        let mut c = ch.clone();
                        c.push(b);
                        next.push(c);
                    }
                }
            }
            chains.extend(next.iter().cloned());
            frontier = next;
        }
        let index: HashMap<Vec<usize>, usize> = chains.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        let cells = chains
            .iter()
            .map(|ch| {
                let faces = if ch.len() == 1 {
                    Vec::new()
                } else {
                    (0..ch.len())
                        .map(|k| {
                            let mut f = ch.clone();
                            f.remove(k);
                            index[&f]
                        })
                        .collect()
                };
                Cell { dim: ch.len() - 1, faces }
            })
            .collect();
        let parent = chains.iter().map(|ch| *ch.last().unwrap()).collect();
        (CellComplex { cells, compact: self.compact }, parent)
    }
}

fn sign(dim: usize) -> i64 {
    if dim.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn signed(z: Gq, s: i64) -> Gq {
    if s >= 0 {
        z
    } else {
        -z
    }
}

/// A cell-constant complex-valued function.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstructibleFn {
    complex: CellComplex,
    values: Vec<Gq>,
}

impl ConstructibleFn {
    pub fn new(complex: CellComplex, values: Vec<Gq>) -> Result<ConstructibleFn, EulerError> {
        if values.len() != complex.len() {
            return Err(EulerError::Length { expected: complex.len(), got: values.len() });
        }
        Ok(ConstructibleFn { complex, values })
    }

    pub fn constant(complex: CellComplex, v: Gq) -> ConstructibleFn {
        let values = vec![v; complex.len()];
        ConstructibleFn { complex, values }
    }

    pub fn indicator(complex: CellComplex, cells: &BTreeSet<usize>) -> ConstructibleFn {
        let values = (0..complex.len()).map(|c| Gq::int(cells.contains(&c) as i64)).collect();
        ConstructibleFn { complex, values }
    }

    pub fn complex(&self) -> &CellComplex {
        &self.complex
    }

    pub fn values(&self) -> &[Gq] {
        &self.values
    }

    pub fn value(&self, c: usize) -> &Gq {
        &self.values[c]
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: &Gq, other: &ConstructibleFn, b: &Gq) -> Result<ConstructibleFn, EulerError> {
        if self.complex != other.complex {
            return Err(EulerError::ComplexMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(x, y)| &(a * x) + &(b * y)).collect();
        Ok(ConstructibleFn { complex: self.complex.clone(), values })
    }

    /// Pulls back along a cell map `parent: new cell → old cell` onto
    /// `complex`, for refinements where each new cell lies in its parent.
    pub fn pull_back(&self, complex: CellComplex, parent: &[usize]) -> Result<ConstructibleFn, EulerError> {
        if parent.len() != complex.len() {
            return Err(EulerError::Length { expected: complex.len(), got: parent.len() });
        }
        let values = parent.iter().map(|&p| self.values[p].clone()).collect();
        Ok(ConstructibleFn { complex, values })
    }
}

/// `Σ_c φ(c)·(−1)^{dim c}` on a compact complex.
pub fn euler_integral(phi: &ConstructibleFn) -> Result<Gq, EulerError> {
    if !phi.complex.compact {
        return Err(EulerError::NotCompact);
    }
    Ok(phi
        .values
        .iter()
        .zip(&phi.complex.cells)
        .fold(Gq::zero(), |acc, (v, c)| acc + signed(v.clone(), sign(c.dim))))
}

/// Orientation sign and per-degree endomorphism traces on a fixed cell.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedCellData {
    pub sign: i8,
    pub traces: BTreeMap<i32, Gq>,
}

impl FixedCellData {
    pub fn identity(stalk: &Grading) -> FixedCellData {
        FixedCellData { sign: 1, traces: stalk.iter().map(|(&d, &n)| (d, Gq::int(n as i64))).collect() }
    }

    pub fn alternating_trace(&self) -> Gq {
        self.traces.iter().fold(Gq::zero(), |acc, (&d, t)| acc + signed(t.clone(), sign(d.rem_euclid(2) as usize)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SelfMap {
    Identity,
    /// Cells fixed isomorphically; every other cell is moved or collapsed.
    Cellular { fixed: BTreeSet<usize> },
}

/// Stalk data of a cellular sheaf with a designated self-map.
#[derive(Clone, Debug, PartialEq)]
pub struct CellularSheafModel {
    complex: CellComplex,
    stalks: Vec<Grading>,
    map: SelfMap,
    data: BTreeMap<usize, FixedCellData>,
}

impl CellularSheafModel {
    pub fn new(
        complex: CellComplex,
        stalks: Vec<Grading>,
        map: SelfMap,
        data: BTreeMap<usize, FixedCellData>,
    ) -> Result<CellularSheafModel, EulerError> {
        if stalks.len() != complex.len() {
            return Err(EulerError::Length { expected: complex.len(), got: stalks.len() });
        }
        let m = CellularSheafModel { complex, stalks, map, data };
        for c in m.fixed_cells() {
            match m.data.get(&c) {
                Some(d) if d.sign != 1 && d.sign != -1 => {
                    return Err(EulerError::InvalidSign { cell: c, sign: d.sign });
                }
                Some(d) if m.map == SelfMap::Identity && d.sign != 1 => {
                    return Err(EulerError::InvalidSign { cell: c, sign: d.sign });
                }
                Some(_) => {}
                None if m.stalks[c].values().all(|&n| n == 0) => {}
                None => return Err(EulerError::MissingFixedCellData { cell: c }),
            }
        }
        Ok(m)
    }

    /// Identity map acting by the identity on every stalk.
    pub fn identity(complex: CellComplex, stalks: Vec<Grading>) -> Result<CellularSheafModel, EulerError> {
        let data = stalks.iter().enumerate().map(|(c, g)| (c, FixedCellData::identity(g))).collect();
        CellularSheafModel::new(complex, stalks, SelfMap::Identity, data)
    }

    pub fn complex(&self) -> &CellComplex {
        &self.complex
    }

    pub fn stalks(&self) -> &[Grading] {
        &self.stalks
    }

    pub fn self_map(&self) -> &SelfMap {
        &self.map
    }

    pub fn fixed_data(&self) -> &BTreeMap<usize, FixedCellData> {
        &self.data
    }

    pub fn fixed_cells(&self) -> Vec<usize> {
        match &self.map {
            SelfMap::Identity => (0..self.complex.len()).collect(),
            SelfMap::Cellular { fixed } => fixed.iter().copied().collect(),
        }
    }

    fn trace_at(&self, c: usize) -> Gq {
        self.data.get(&c).map(FixedCellData::alternating_trace).unwrap_or_else(Gq::zero)
    }
}

/// Alternating stalk trace per cell, for the identity map.
pub fn pointwise_trace_function(model: &CellularSheafModel) -> Result<ConstructibleFn, EulerError> {
    if model.map != SelfMap::Identity {
        return Err(EulerError::NonIdentityMap);
    }
    let values = (0..model.complex.len()).map(|c| model.trace_at(c)).collect();
    ConstructibleFn::new(model.complex.clone(), values)
}

/// `Σ` over fixed cells of `(−1)^dim · sign · trace`.
pub fn hopf_global_trace(model: &CellularSheafModel) -> Result<Gq, EulerError> {
    if !model.complex.compact {
        return Err(EulerError::NotCompact);
    }
    let mut total = Gq::zero();
    for c in model.fixed_cells() {
        let s = sign(model.complex.dim(c)) * model.data.get(&c).map_or(1, |d| d.sign as i64);
        total += signed(model.trace_at(c), s);
    }
    Ok(total)
}

/// `χ_c` of a union of cells, as a rational.
pub fn chi(complex: &CellComplex, cells: &BTreeSet<usize>) -> Q {
    Q::from_integer(complex.euler_characteristic(cells).into())
}
