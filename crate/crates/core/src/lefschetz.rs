//! Fixed-component models, local trace functions, local contributions and
//! the global fixed-point identity.
//!
//! A component `M` is a compact cell complex whose cells carry locally
//! constant normal data: the linearised map on the normal fibre and a conic
//! sheaf with equivariant structure over it. The local trace function takes
//! on each cell the hyperbolic localization trace of that data, and the local
//! contribution is its Euler integral.

use num_traits::Zero;

use crate::arith::{Gq, Q};
use crate::charcycle::{microlocal_index, CharCycleError, EmbeddedComplex, TestFunction};
use crate::conic::{localization_trace_with, ConicError, ConicSheaf, Equivariant, LocalizationOptions, LocalizationReport};
use crate::euler::{euler_integral, hopf_global_trace, CellComplex, CellularSheafModel, ConstructibleFn, EulerError};
use crate::par::Exec;
use crate::spectral::{check_nondegenerate, SpectralConfig, Subspace};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LefschetzError {
    #[error(transparent)]
    Euler(#[from] EulerError),
    #[error(transparent)]
    CharCycle(#[from] CharCycleError),
    #[error("cell {cell}: {source}")]
    Conic { cell: usize, source: ConicError },
    #[error("component is not compact")]
    NotCompact,
    #[error("cell {cell}: normal fibre dimension {got}, expected {expected}")]
    AmbientMismatch { cell: usize, expected: usize, got: usize },
    #[error("cell {cell}: normal map has eigenvalue 1")]
    Degenerate { cell: usize },
    #[error("invalid embedding: {0}")]
    Embedding(String),
    #[error("component {0} has no embedding")]
    NoEmbedding(String),
    #[error("models are not compatible for a direct sum")]
    Incompatible,
}

/// Normal data on one cell of a fixed component. The optional subspaces
/// override the automatically chosen expanding and shrinking subspaces.
#[derive(Clone, Debug, PartialEq)]
pub struct CellNormalData {
    pub sheaf: ConicSheaf,
    pub eta: Equivariant,
    pub expanding: Option<Subspace>,
    pub shrinking: Option<Subspace>,
}

impl CellNormalData {
    pub fn new(sheaf: ConicSheaf, eta: Equivariant) -> CellNormalData {
        CellNormalData { sheaf, eta, expanding: None, shrinking: None }
    }

    pub fn ambient_dim(&self) -> usize {
        self.sheaf.fan().ambient_dim()
    }
}

/// An affine refinement of a component together with the map sending each
/// refined cell to the cell of the component containing it.
#[derive(Clone, Debug, PartialEq)]
pub struct Embedding {
    pub complex: EmbeddedComplex,
    pub parent: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FixedComponentModel {
    name: String,
    complex: CellComplex,
    cells: Vec<CellNormalData>,
    embedding: Option<Embedding>,
}

impl FixedComponentModel {
    pub fn new(
        name: impl Into<String>,
        complex: CellComplex,
        cells: Vec<CellNormalData>,
        embedding: Option<Embedding>,
    ) -> Result<FixedComponentModel, LefschetzError> {
        if !complex.is_compact() {
            return Err(LefschetzError::NotCompact);
        }
        if cells.len() != complex.len() {
            return Err(EulerError::Length { expected: complex.len(), got: cells.len() }.into());
        }
        let expected = cells.first().map_or(0, CellNormalData::ambient_dim);
        for (i, c) in cells.iter().enumerate() {
            let got = c.ambient_dim();
            if got != expected || c.eta.map().rows() != got {
                return Err(LefschetzError::AmbientMismatch { cell: i, expected, got: c.eta.map().rows() });
            }
            if !check_nondegenerate(c.eta.map()) {
                return Err(LefschetzError::Degenerate { cell: i });
            }
        }
        if let Some(e) = &embedding {
            check_embedding(&complex, e)?;
        }
        Ok(FixedComponentModel { name: name.into(), complex, cells, embedding })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn complex(&self) -> &CellComplex {
        &self.complex
    }

    pub fn cells(&self) -> &[CellNormalData] {
        &self.cells
    }

    pub fn embedding(&self) -> Option<&Embedding> {
        self.embedding.as_ref()
    }

    pub fn ambient_dim(&self) -> usize {
        self.cells.first().map_or(0, CellNormalData::ambient_dim)
    }

    /// Same model with designated subspaces on one cell.
    pub fn with_subspaces(&self, cell: usize, expanding: Option<Subspace>, shrinking: Option<Subspace>) -> FixedComponentModel {
        let mut m = self.clone();
        m.cells[cell].expanding = expanding;
        m.cells[cell].shrinking = shrinking;
        m
    }

    /// Replaces every normal map `A` by `t·A`.
    pub fn rescaled(&self, t: &Q) -> Result<FixedComponentModel, LefschetzError> {
        let cells = self
            .cells
            .iter()
            .map(|c| CellNormalData { eta: c.eta.rescaled(t), ..c.clone() })
            .collect();
        FixedComponentModel::new(self.name.clone(), self.complex.clone(), cells, self.embedding.clone())
    }

    /// Cellwise direct sum of the conic data of two models over the same
    /// component and the same normal maps and fans.
    pub fn direct_sum(&self, o: &FixedComponentModel) -> Result<FixedComponentModel, LefschetzError> {
        if self.complex != o.complex {
            return Err(LefschetzError::Incompatible);
        }
        let mut cells = Vec::with_capacity(self.cells.len());
        for (a, b) in self.cells.iter().zip(&o.cells) {
            if a.sheaf.fan() != b.sheaf.fan() || a.eta.map() != b.eta.map() {
                return Err(LefschetzError::Incompatible);
            }
            let sheaf = a.sheaf.direct_sum(&b.sheaf);
            let eta = a.eta.direct_sum(&a.sheaf, &b.eta, &b.sheaf);
            let pick = |x: &Option<Subspace>, y: &Option<Subspace>| if x == y { x.clone() } else { None };
            cells.push(CellNormalData {
                sheaf,
                eta,
                expanding: pick(&a.expanding, &b.expanding),
                shrinking: pick(&a.shrinking, &b.shrinking),
            });
        }
        let name = format!("{}+{}", self.name, o.name);
        FixedComponentModel::new(name, self.complex.clone(), cells, self.embedding.clone())
    }
}

/// Every refined cell lies in a parent of at least its dimension, faces map
/// into the closure of the parent, and each parent cell is subdivided with
/// the compactly supported Euler characteristic of an open cell.
fn check_embedding(complex: &CellComplex, e: &Embedding) -> Result<(), LefschetzError> {
    let fine = e.complex.complex();
    if e.parent.len() != fine.len() {
        return Err(LefschetzError::Embedding(format!("parent map has {} entries for {} cells", e.parent.len(), fine.len())));
    }
    if !fine.is_compact() {
        return Err(LefschetzError::Embedding("refinement is not compact".into()));
    }
    let mut chi = vec![0i64; complex.len()];
    for (i, &p) in e.parent.iter().enumerate() {
        if p >= complex.len() || complex.dim(p) < fine.dim(i) {
            return Err(LefschetzError::Embedding(format!("cell {i} has invalid parent {p}")));
        }
        if fine.faces(i).iter().any(|&f| !complex.le(e.parent[f], p)) {
            return Err(LefschetzError::Embedding(format!("a face of cell {i} leaves the closure of its parent")));
        }
        chi[p] += if fine.dim(i).is_multiple_of(2) { 1 } else { -1 };
    }
    for (c, &x) in chi.iter().enumerate() {
        let want = if complex.dim(c).is_multiple_of(2) { 1 } else { -1 };
        if x != want {
            return Err(LefschetzError::Embedding(format!("cell {c} is not subdivided into an open cell")));
        }
    }
    Ok(())
}

/// Per-cell localization settings.
#[derive(Clone, Copy, Debug, Default)]
pub struct TraceOptions {
    pub spectral: SpectralConfig,
    pub exec: Exec,
}

/// Localization report on every cell, in cell order.
pub fn local_trace_reports(model: &FixedComponentModel, opts: TraceOptions) -> Result<Vec<LocalizationReport>, LefschetzError> {
    let idx: Vec<usize> = (0..model.cells.len()).collect();
    opts.exec.try_map(&idx, |&i| {
        let c = &model.cells[i];
        let lo = LocalizationOptions {
            expanding: c.expanding.clone(),
            shrinking: c.shrinking.clone(),
            spectral: opts.spectral,
            exec: Exec::Sequential,
        };
        localization_trace_with(&c.sheaf, &c.eta, &lo).map_err(|source| LefschetzError::Conic { cell: i, source })
    })
}

pub fn local_trace_function(model: &FixedComponentModel) -> Result<ConstructibleFn, LefschetzError> {
    local_trace_function_with(model, TraceOptions::default())
}

pub fn local_trace_function_with(model: &FixedComponentModel, opts: TraceOptions) -> Result<ConstructibleFn, LefschetzError> {
    let values = local_trace_reports(model, opts)?.into_iter().map(|r| r.value).collect();
    Ok(ConstructibleFn::new(model.complex.clone(), values)?)
}

pub fn local_contribution(model: &FixedComponentModel) -> Result<Gq, LefschetzError> {
    local_contribution_with(model, TraceOptions::default())
}

pub fn local_contribution_with(model: &FixedComponentModel, opts: TraceOptions) -> Result<Gq, LefschetzError> {
    Ok(euler_integral(&local_trace_function_with(model, opts)?)?)
}

/// Microlocal index of the local trace function, pulled back to the
/// embedded refinement of the component.
pub fn embedded_index(model: &FixedComponentModel, f: &TestFunction) -> Result<Gq, LefschetzError> {
    let e = model.embedding.as_ref().ok_or_else(|| LefschetzError::NoEmbedding(model.name.clone()))?;
    let theta = local_trace_function(model)?;
    let pulled = theta.pull_back(e.complex.complex().clone(), &e.parent)?;
    Ok(microlocal_index(&e.complex, &pulled, f)?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContributionReport {
    pub locals: Vec<(String, Gq)>,
    pub global: Gq,
    pub residual: Gq,
    pub pass: bool,
}

impl ContributionReport {
    pub fn local_sum(&self) -> Gq {
        self.locals.iter().map(|(_, v)| v.clone()).sum()
    }
}

pub fn verify_fixed_point_formula(
    global: &CellularSheafModel,
    components: &[FixedComponentModel],
) -> Result<ContributionReport, LefschetzError> {
    verify_fixed_point_formula_with(global, components, TraceOptions::default())
}

pub fn verify_fixed_point_formula_with(
    global: &CellularSheafModel,
    components: &[FixedComponentModel],
    opts: TraceOptions,
) -> Result<ContributionReport, LefschetzError> {
    if !global.complex().is_compact() {
        return Err(LefschetzError::NotCompact);
    }
    let g = hopf_global_trace(global)?;
    let mut locals = Vec::with_capacity(components.len());
    for m in components {
        locals.push((m.name.clone(), local_contribution_with(m, opts)?));
    }
    let residual = locals.iter().fold(g.clone(), |acc, (_, v)| acc - v.clone());
    let pass = residual.is_zero();
    Ok(ContributionReport { locals, global: g, residual, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qf};
    use crate::fan::Fan;
    use crate::matrix::QMatrix;

    fn point_model(sheaf: ConicSheaf, a: QMatrix) -> FixedComponentModel {
        let eta = Equivariant::scalar(&sheaf, a, Gq::int(1)).unwrap();
        FixedComponentModel::new("p", CellComplex::point(), vec![CellNormalData::new(sheaf, eta)], None).unwrap()
    }

    fn diag(d: &[Q]) -> QMatrix {
        let n = d.len();
        let mut m = QMatrix::zeros(n, n);
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    #[test]
    fn point_contributions() {
        let m = point_model(ConicSheaf::constant(Fan::line(), 0), diag(&[q(2)]));
        assert_eq!(local_contribution(&m).unwrap(), Gq::int(-1));
        let m = point_model(ConicSheaf::constant(Fan::line(), 0), diag(&[qf(1, 2)]));
        assert_eq!(local_contribution(&m).unwrap(), Gq::int(1));
        let m = point_model(ConicSheaf::zero(Fan::cross()), diag(&[q(3), qf(1, 3)]));
        assert_eq!(local_contribution(&m).unwrap(), Gq::int(0));
    }

    #[test]
    fn rejects_degenerate_and_mismatched() {
        let sheaf = ConicSheaf::constant(Fan::line(), 0);
        let eta = Equivariant::scalar(&sheaf, diag(&[q(2)]), Gq::int(1)).unwrap();
        let cell = CellNormalData::new(sheaf, eta);
        let open = CellComplex::from_faces(&[(1, vec![])], false).unwrap();
        assert_eq!(
            FixedComponentModel::new("x", open, vec![cell.clone()], None),
            Err(LefschetzError::NotCompact)
        );
        let sheaf2 = ConicSheaf::constant(Fan::cross(), 0);
        let eta2 = Equivariant::scalar(&sheaf2, diag(&[q(2), q(2)]), Gq::int(1)).unwrap();
        let cells = vec![cell.clone(), cell, CellNormalData::new(sheaf2, eta2)];
        assert!(matches!(
            FixedComponentModel::new("x", CellComplex::interval(), cells, None),
            Err(LefschetzError::AmbientMismatch { cell: 2, .. })
        ));
    }

    #[test]
    fn rescaling_and_sums() {
        let m = point_model(ConicSheaf::constant(Fan::cross(), 0), diag(&[q(3), qf(1, 3)]));
        let base = local_contribution(&m).unwrap();
        assert_eq!(base, Gq::int(-1));
        for t in [qf(1, 2), qf(3, 2)] {
            assert_eq!(local_contribution(&m.rescaled(&t).unwrap()).unwrap(), base);
        }
        let doubled = m.direct_sum(&m).unwrap();
        assert_eq!(local_contribution(&doubled).unwrap(), Gq::int(-2));
    }

    #[test]
    fn report_residual() {
        let global = CellularSheafModel::identity(CellComplex::point(), vec![[(0, 1)].into()]).unwrap();
        let m = point_model(ConicSheaf::constant(Fan::line(), 0), diag(&[qf(1, 2)]));
        let r = verify_fixed_point_formula(&global, std::slice::from_ref(&m)).unwrap();
        assert!(r.pass);
        assert_eq!(r.local_sum(), Gq::int(1));
        let r = verify_fixed_point_formula(&global, &[m.clone(), m]).unwrap();
        assert!(!r.pass);
        assert_eq!(r.residual, Gq::int(-1));
    }
}
