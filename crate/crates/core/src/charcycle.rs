//! Characteristic cycles of constructible functions on affinely embedded
//! complexes, and the microlocal index.
//!
//! A cell is the relative interior of `conv(points) + cone(rays)`. At a
//! stratum `σ` with base point `x₀ ∈ σ̄`, the tangent cone of a cell `τ > σ`
//! is generated modulo `Tσ` by `p − x₀` for the points `p` of `τ` and by the
//! rays of `τ`. For a generic covector `ξ` vanishing on `Tσ`, the compact
//! sublevel set `K = B̄_ε ∩ {f ≤ −δ}` meets `τ` iff some generator pairs
//! negatively with `ξ` (directions along `σ` count as positive), and then
//! `χ_c(τ ∩ K) = 1 − Σ χ_c(τ′ ∩ K)` over the cells `σ < τ′ < τ`.

use num_traits::{Signed, Zero};

use crate::arith::{Gq, Q};
use crate::euler::{CellComplex, ConstructibleFn, EulerError};
use crate::fm::{strict_feasible, Strict};
use crate::matrix::{dot, rank_of, Matrix};
use crate::par::Exec;
use crate::spectral::Subspace;

/// Largest ambient dimension for chamber enumeration.
pub const MAX_CHAMBER_DIM: usize = 3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CharCycleError {
    #[error(transparent)]
    Euler(#[from] EulerError),
    #[error("cell {cell}: {reason}")]
    Geometry { cell: usize, reason: String },
    #[error("covector does not vanish along cell {cell}")]
    NotConormal { cell: usize },
    #[error("covector pairs to zero with generator {generator:?} of cell {cell}")]
    NonGenericCovector { cell: usize, generator: Vec<Q> },
    #[error("test function is not generic at cell {cell}")]
    NonGenericSection { cell: usize },
    #[error("ambient dimension {0} exceeds the chamber enumeration bound")]
    AmbientDimTooLarge(usize),
    #[error("complex is not compact")]
    NotCompact,
    #[error("function lives on a different complex")]
    ComplexMismatch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddedCell {
    pub points: Vec<Vec<Q>>,
    pub rays: Vec<Vec<Q>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddedComplex {
    complex: CellComplex,
    ambient: usize,
    cells: Vec<EmbeddedCell>,
}

fn contains_all(big: &[Vec<Q>], small: &[Vec<Q>]) -> bool {
    small.iter().all(|v| big.contains(v))
}

impl EmbeddedComplex {
    pub fn new(complex: CellComplex, ambient: usize, cells: Vec<EmbeddedCell>) -> Result<EmbeddedComplex, CharCycleError> {
        if cells.len() != complex.len() {
            return Err(EulerError::Length { expected: complex.len(), got: cells.len() }.into());
        }
        let x = EmbeddedComplex { complex, ambient, cells };
        for (i, c) in x.cells.iter().enumerate() {
            let geo = |reason: &str| CharCycleError::Geometry { cell: i, reason: reason.to_string() };
            if c.points.is_empty() {
                return Err(geo("no points"));
            }
            if c.points.iter().chain(&c.rays).any(|v| v.len() != ambient) {
                return Err(geo("coordinate length differs from the ambient dimension"));
            }
            if rank_of(ambient, &x.directions(i)) != x.complex.dim(i) {
                return Err(geo("affine dimension differs from the cell dimension"));
            }
            for &f in x.complex.faces(i) {
                let fc = &x.cells[f];
                if !contains_all(&c.points, &fc.points) || !contains_all(&c.rays, &fc.rays) {
                    return Err(geo("a face is not spanned by the cell's points and rays"));
                }
            }
        }
        Ok(x)
    }

    /// Polytopal cells spanned by the vertices in their closure.
    pub fn from_vertices(complex: CellComplex, ambient: usize, coords: &[Vec<Q>]) -> Result<EmbeddedComplex, CharCycleError> {
        let vertices: Vec<usize> = (0..complex.len()).filter(|&c| complex.dim(c) == 0).collect();
        if vertices.len() != coords.len() {
            return Err(EulerError::Length { expected: vertices.len(), got: coords.len() }.into());
        }
        let cells = (0..complex.len())
            .map(|c| {
                let points = complex
                    .closure(c)
                    .into_iter()
                    .filter(|v| complex.dim(*v) == 0)
                    .map(|v| coords[vertices.iter().position(|&u| u == v).unwrap()].clone())
                    .collect();
                EmbeddedCell { points, rays: Vec::new() }
            })
            .collect();
        EmbeddedComplex::new(complex, ambient, cells)
    }

    pub fn complex(&self) -> &CellComplex {
        &self.complex
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn cell(&self, c: usize) -> &EmbeddedCell {
        &self.cells[c]
    }

    /// Spanning directions of the cell's affine hull.
    fn directions(&self, c: usize) -> Vec<Vec<Q>> {
        let cell = &self.cells[c];
        let p0 = &cell.points[0];
        cell.points[1..]
            .iter()
            .map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect())
            .chain(cell.rays.iter().cloned())
            .collect()
    }

    pub fn tangent_space(&self, c: usize) -> Subspace {
        Subspace::span(self.ambient, &self.directions(c))
    }

    /// Cells having `s` in their closure, excluding `s`, by dimension.
    pub fn cells_above(&self, s: usize) -> Vec<usize> {
        self.complex.cells_by_dim().into_iter().filter(|&t| t != s && self.complex.le(s, t)).collect()
    }

    /// Tangent-cone generators of `t` at the base point of `s`.
    pub fn generators(&self, s: usize, t: usize) -> Vec<Vec<Q>> {
        let x0 = &self.cells[s].points[0];
        let cell = &self.cells[t];
        cell.points
            .iter()
            .map(|p| p.iter().zip(x0).map(|(a, b)| a - b).collect::<Vec<Q>>())
            .chain(cell.rays.iter().cloned())
            .collect()
    }
}

/// A covector at a base stratum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Covector {
    pub cell: usize,
    pub xi: Vec<Q>,
}

/// One covector chamber at a stratum. `signs[i]` is the sign of the sample
/// on the stratum's `i`-th wall generator.
#[derive(Clone, Debug, PartialEq)]
pub struct Chamber {
    pub sample: Vec<Q>,
    pub signs: Vec<i8>,
    pub multiplicity: Gq,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StratumCycle {
    pub cell: usize,
    /// Generators whose orthogonal hyperplanes cut out the chambers.
    pub walls: Vec<Vec<Q>>,
    pub chambers: Vec<Chamber>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LagrangianCycle {
    pub strata: Vec<StratumCycle>,
}

fn check_function(x: &EmbeddedComplex, phi: &ConstructibleFn) -> Result<(), CharCycleError> {
    if phi.complex() != &x.complex {
        return Err(CharCycleError::ComplexMismatch);
    }
    Ok(())
}

/// `φ(σ) − Σ_{τ > σ} φ(τ)·χ_c(τ ∩ K)` at a generic covector.
pub fn morse_multiplicity(x: &EmbeddedComplex, phi: &ConstructibleFn, cov: &Covector) -> Result<Gq, CharCycleError> {
    check_function(x, phi)?;
    let s = cov.cell;
    let tangent = x.tangent_space(s);
    if tangent.exact_basis().unwrap().iter().any(|v| !dot(v, &cov.xi).is_zero()) {
        return Err(CharCycleError::NotConormal { cell: s });
    }
    let above = x.cells_above(s);
    let mut chi: Vec<(usize, i64)> = Vec::with_capacity(above.len());
    let mut m = phi.value(s).clone();
    for &t in &above {
        let mut meets = false;
        for g in x.generators(s, t) {
            if tangent.contains_vector(&g, 0.0) {
                continue;
            }
            let v = dot(&cov.xi, &g);
            if v.is_zero() {
                return Err(CharCycleError::NonGenericCovector { cell: t, generator: g });
            }
            meets |= v.is_negative();
        }
        let value = if meets {
            1 - chi.iter().filter(|(u, _)| x.complex.le(*u, t)).map(|(_, c)| c).sum::<i64>()
        } else {
            0
        };
        chi.push((t, value));
        if value != 0 {
            m -= &phi.value(t).scale(&Q::from_integer(value.into()));
        }
    }
    Ok(m)
}

/// Hyperplane generators at `s`: non-tangent generators of the cells above,
/// deduplicated up to scaling.
fn walls(x: &EmbeddedComplex, s: usize, tangent: &Subspace) -> Vec<Vec<Q>> {
    let mut out: Vec<Vec<Q>> = Vec::new();
    for t in x.cells_above(s) {
        for g in x.generators(s, t) {
            if tangent.contains_vector(&g, 0.0) {
                continue;
            }
            if !out.iter().any(|h| rank_of(x.ambient, &[h.clone(), g.clone()]) == 1) {
                out.push(g);
            }
        }
    }
    out
}

/// Connected components of the complement of the hyperplanes `{ξ·g = 0}`
/// inside the annihilator of `Tσ`; one sample covector each.
fn chambers(x: &EmbeddedComplex, tangent: &Subspace, walls: &[Vec<Q>]) -> Vec<(Vec<Q>, Vec<i8>)> {
    let m = x.ambient;
    let tb = tangent.exact_basis().unwrap();
    let w: Vec<Vec<Q>> = if tb.is_empty() {
        Matrix::<Q>::identity(m).to_rows()
    } else {
        Matrix::from_shape(tb.len(), m, tb.concat()).nullspace()
    };
    let d = w.len();
    if d == 0 {
        return vec![(vec![Q::zero(); m], Vec::new())];
    }
    // Each wall restricted to the parameter space μ ↦ Σ μᵢ wᵢ.
    let funcs: Vec<Vec<Q>> = walls.iter().map(|g| w.iter().map(|wi| dot(wi, g)).collect()).collect();
    let mut regions: Vec<Vec<(usize, i8)>> = vec![Vec::new()];
    for (k, h) in funcs.iter().enumerate() {
        let mut next = Vec::new();
        for r in &regions {
            for s in [1i8, -1] {
                let mut cand = r.clone();
                cand.push((k, s));
                if feasible(d, &funcs, &cand).is_some() {
                    next.push(cand);
                }
            }
        }
        debug_assert!(h.iter().any(|c| !c.is_zero()));
        regions = next;
    }
    regions
        .into_iter()
        .map(|r| {
            let mu = feasible(d, &funcs, &r).expect("feasible region");
            let mut xi: Vec<Q> = (0..m).map(|j| (0..d).fold(Q::zero(), |acc, i| acc + &mu[i] * &w[i][j])).collect();
            if xi.iter().all(Zero::is_zero) {
                xi = w[0].clone();
            }
            let signs = r.iter().map(|&(_, s)| s).collect();
            (xi, signs)
        })
        .collect()
}

fn feasible(d: usize, funcs: &[Vec<Q>], signs: &[(usize, i8)]) -> Option<Vec<Q>> {
    let cons: Vec<Strict> = signs
        .iter()
        .map(|&(k, s)| Strict::homogeneous(funcs[k].iter().map(|c| if s > 0 { c.clone() } else { -c.clone() }).collect()))
        .collect();
    strict_feasible(d, &cons)
}

/// Multiplicity per covector chamber at every stratum.
pub fn characteristic_cycle(x: &EmbeddedComplex, phi: &ConstructibleFn) -> Result<LagrangianCycle, CharCycleError> {
    characteristic_cycle_with(x, phi, Exec::default())
}

pub fn characteristic_cycle_with(
    x: &EmbeddedComplex,
    phi: &ConstructibleFn,
    exec: Exec,
) -> Result<LagrangianCycle, CharCycleError> {
    check_function(x, phi)?;
    if x.ambient > MAX_CHAMBER_DIM {
        return Err(CharCycleError::AmbientDimTooLarge(x.ambient));
    }
    let cells: Vec<usize> = (0..x.complex.len()).collect();
    let strata = exec.try_map(&cells, |&s| {
        let tangent = x.tangent_space(s);
        let walls = walls(x, s, &tangent);
        let mut out = Vec::new();
        for (sample, signs) in chambers(x, &tangent, &walls) {
            let multiplicity = morse_multiplicity(x, phi, &Covector { cell: s, xi: sample.clone() })?;
            out.push(Chamber { sample, signs, multiplicity });
        }
        Ok::<_, CharCycleError>(StratumCycle { cell: s, walls, chambers: out })
    })?;
    Ok(LagrangianCycle { strata })
}

/// Test-function data for the microlocal index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TestFunction {
    /// A linear height function; its stratified critical points are the
    /// vertices, with covector the height itself.
    Height(Vec<Q>),
    /// Explicit stratified critical points with their differentials.
    Critical(Vec<Covector>),
}

/// `Σ` of Morse multiplicities over the critical points of the test function.
pub fn microlocal_index(x: &EmbeddedComplex, phi: &ConstructibleFn, f: &TestFunction) -> Result<Gq, CharCycleError> {
    check_function(x, phi)?;
    if !x.complex.is_compact() {
        return Err(CharCycleError::NotCompact);
    }
    let points: Vec<Covector> = match f {
        TestFunction::Critical(list) => list.clone(),
        TestFunction::Height(l) => {
            for c in 0..x.complex.len() {
                let t = x.tangent_space(c);
                if x.complex.dim(c) > 0 && t.exact_basis().unwrap().iter().all(|v| dot(v, l).is_zero()) {
                    return Err(CharCycleError::NonGenericSection { cell: c });
                }
            }
            (0..x.complex.len())
                .filter(|&c| x.complex.dim(c) == 0)
                .map(|c| Covector { cell: c, xi: l.clone() })
                .collect()
        }
    };
    let mut total = Gq::zero();
    for p in &points {
        total += morse_multiplicity(x, phi, p).map_err(|e| match e {
            CharCycleError::NonGenericCovector { cell, .. } | CharCycleError::NotConormal { cell } => {
                CharCycleError::NonGenericSection { cell }
            }
            other => other,
        })?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    fn v(c: &[i64]) -> Vec<Q> {
        c.iter().map(|&x| q(x)).collect()
    }

    /// ℝ with strata {0}, ℝ₊, ℝ₋ (non-compact).
    fn real_line() -> EmbeddedComplex {
        let cx = CellComplex::from_faces(&[(0, vec![]), (1, vec![0]), (1, vec![0])], false).unwrap();
        let cells = vec![
            EmbeddedCell { points: vec![v(&[0])], rays: vec![] },
            EmbeddedCell { points: vec![v(&[0])], rays: vec![v(&[1])] },
            EmbeddedCell { points: vec![v(&[0])], rays: vec![v(&[-1])] },
        ];
        EmbeddedComplex::new(cx, 1, cells).unwrap()
    }

    fn values(x: &EmbeddedComplex, vals: &[i64]) -> ConstructibleFn {
        ConstructibleFn::new(x.complex().clone(), vals.iter().map(|&k| Gq::int(k)).collect()).unwrap()
    }

    #[test]
    fn line_multiplicities() {
        let x = real_line();
        let m = morse_multiplicity(&x, &values(&x, &[1, 0, 0]), &Covector { cell: 0, xi: v(&[1]) }).unwrap();
        assert_eq!(m, Gq::int(1));
        let m = morse_multiplicity(&x, &values(&x, &[1, 1, 0]), &Covector { cell: 0, xi: v(&[-1]) }).unwrap();
        assert_eq!(m, Gq::int(0));
        let err = morse_multiplicity(&x, &values(&x, &[1, 1, 0]), &Covector { cell: 0, xi: v(&[0]) });
        assert!(matches!(err, Err(CharCycleError::NonGenericCovector { .. })));
    }

    #[test]
    fn half_plane_multiplicity() {
        let cx = CellComplex::from_faces(&[(1, vec![]), (2, vec![0]), (2, vec![0])], false).unwrap();
        let axis = vec![v(&[1, 0]), v(&[-1, 0])];
        let cells = vec![
            EmbeddedCell { points: vec![v(&[0, 0])], rays: axis.clone() },
            EmbeddedCell { points: vec![v(&[0, 0])], rays: [axis.clone(), vec![v(&[0, 1])]].concat() },
            EmbeddedCell { points: vec![v(&[0, 0])], rays: [axis, vec![v(&[0, -1])]].concat() },
        ];
        let x = EmbeddedComplex::new(cx, 2, cells).unwrap();
        let m = morse_multiplicity(&x, &values(&x, &[0, 1, 0]), &Covector { cell: 0, xi: v(&[0, -1]) }).unwrap();
        assert_eq!(m, Gq::int(-1));
        let err = morse_multiplicity(&x, &values(&x, &[0, 1, 0]), &Covector { cell: 0, xi: v(&[1, -1]) });
        assert_eq!(err, Err(CharCycleError::NotConormal { cell: 0 }));
    }

    #[test]
    fn line_cycles() {
        let x = real_line();
        let cc = characteristic_cycle(&x, &values(&x, &[1, 1, 1])).unwrap();
        assert_eq!(cc.strata[0].chambers.len(), 2);
        assert!(cc.strata[0].chambers.iter().all(|c| c.multiplicity.is_zero()));
        for s in &cc.strata[1..] {
            assert_eq!(s.chambers.len(), 1);
            assert_eq!(s.chambers[0].multiplicity, Gq::int(1));
        }
        let cc = characteristic_cycle(&x, &values(&x, &[1, 0, 0])).unwrap();
        assert!(cc.strata[0].chambers.iter().all(|c| c.multiplicity == Gq::int(1)));
        let cc = characteristic_cycle(&x, &values(&x, &[0, 0, 0])).unwrap();
        assert!(cc.strata.iter().flat_map(|s| &s.chambers).all(|c| c.multiplicity.is_zero()));
    }

    #[test]
    fn index_examples() {
        let interval = EmbeddedComplex::from_vertices(CellComplex::interval(), 1, &[v(&[0]), v(&[1])]).unwrap();
        let one = values(&interval, &[1, 1, 1]);
        assert_eq!(microlocal_index(&interval, &one, &TestFunction::Height(v(&[1]))).unwrap(), Gq::int(1));
        let sq = [v(&[0, 0]), v(&[1, 0]), v(&[1, 1]), v(&[0, 1])];
        let circle = EmbeddedComplex::from_vertices(CellComplex::circle(4), 2, &sq).unwrap();
        let one = values(&circle, &[1; 8]);
        assert_eq!(microlocal_index(&circle, &one, &TestFunction::Height(v(&[1, 2]))).unwrap(), Gq::int(0));
        let zero = values(&circle, &[0; 8]);
        assert_eq!(microlocal_index(&circle, &zero, &TestFunction::Height(v(&[1, 2]))).unwrap(), Gq::int(0));
        let err = microlocal_index(&circle, &one, &TestFunction::Height(v(&[1, 0])));
        assert!(matches!(err, Err(CharCycleError::NonGenericSection { .. })));
    }

    #[test]
    fn rejects_bad_geometry_and_dimension() {
        let err = EmbeddedComplex::from_vertices(CellComplex::interval(), 1, &[v(&[0]), v(&[0])]);
        assert!(matches!(err, Err(CharCycleError::Geometry { .. })));
        let pt = EmbeddedComplex::from_vertices(CellComplex::point(), 4, &[v(&[0, 0, 0, 0])]).unwrap();
        let f = values(&pt, &[1]);
        assert_eq!(characteristic_cycle(&pt, &f), Err(CharCycleError::AmbientDimTooLarge(4)));
    }
}
