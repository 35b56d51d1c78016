//! Worked models used as regression fixtures.
//!
//! The projective-plane family: `X = ℝP²`, `F = ℂ_Z` for the coordinate
//! triangle `Z = {xyz = 0}`, and the self-map scaling `y` by 2 or by 1/2.
//! The fixed set is the line `{y = 0}` and the point `[0:1:0]`.
//!
//! The twisted-sector family: `X = S¹ × S²` with the map induced by
//! `2·Rot(θ) ⊕ 1`, `F = ℂ_{Y∖Z}` where `Y` is a polar cap and `Z` is the
//! slice `θ = 0` of `k` meridians. Only the component through the north pole
//! meets the support of `F`. Its normal data is constant along the open arc
//! `θ ≠ 0`, which is modeled at the representative `θ = π/2`.

use std::collections::BTreeSet;

use crate::arith::{q, qf, Gq, Q};
use crate::charcycle::{EmbeddedComplex, TestFunction};
use crate::conic::{ConicSheaf, Equivariant, Grading};
use crate::euler::{chi, CellComplex, CellularSheafModel, FixedCellData, SelfMap};
use crate::fan::Fan;
use crate::lefschetz::{CellNormalData, Embedding, FixedComponentModel};
use crate::matrix::QMatrix;

fn diag(d: &[Q]) -> QMatrix {
    let n = d.len();
    let mut m = QMatrix::zeros(n, n);
    for (i, x) in d.iter().enumerate() {
        m[(i, i)] = x.clone();
    }
    m
}

fn vecq(c: &[i64]) -> Vec<Q> {
    c.iter().map(|&x| q(x)).collect()
}

fn unit_data(sheaf: ConicSheaf, map: QMatrix) -> CellNormalData {
    let eta = Equivariant::scalar(&sheaf, map, Gq::int(1)).expect("invariant fixture sheaf");
    CellNormalData::new(sheaf, eta)
}

fn rank_one(dim: usize) -> Grading {
    if dim == 0 {
        Grading::new()
    } else {
        Grading::from([(0, dim)])
    }
}

/// Self-map of `ℝP²` fixing `{y = 0}` and `[0:1:0]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProjectiveMap {
    /// `[x:y:z] ↦ [x:2y:z]`.
    Stretch,
    /// `[x:y:z] ↦ [x:y/2:z]`.
    Shrink,
}

impl ProjectiveMap {
    pub fn all() -> [ProjectiveMap; 2] {
        [ProjectiveMap::Stretch, ProjectiveMap::Shrink]
    }

    /// Normal eigenvalue along the fixed line.
    fn line_factor(self) -> Q {
        match self {
            ProjectiveMap::Stretch => q(2),
            ProjectiveMap::Shrink => qf(1, 2),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ProjectiveFixture {
    pub line: FixedComponentModel,
    pub point: FixedComponentModel,
    pub global: CellularSheafModel,
}

impl ProjectiveFixture {
    pub fn components(&self) -> Vec<FixedComponentModel> {
        vec![self.line.clone(), self.point.clone()]
    }
}

/// `{y = 0} ≃ ℝP¹` as two vertices `[1:0:0]`, `[0:0:1]` and two arcs.
/// At the vertices `Z` also contains the transverse line, so the normal
/// data is the constant sheaf on the line fan; along the arcs it is the
/// skyscraper at the origin.
pub fn projective_line(map: ProjectiveMap) -> FixedComponentModel {
    let complex = CellComplex::from_faces(&[(0, vec![]), (0, vec![]), (1, vec![0, 1]), (1, vec![0, 1])], true).unwrap();
    let a = diag(&[map.line_factor()]);
    let vertex = unit_data(ConicSheaf::constant(Fan::line(), 0), a.clone());
    let arc = unit_data(ConicSheaf::skyscraper(Fan::line(), 0), a);
    let cells = vec![vertex.clone(), vertex, arc.clone(), arc];
    FixedComponentModel::new("line", complex, cells, Some(projective_line_embedding())).unwrap()
}

/// A square with vertices `(±1, 0)`, `(0, ±1)`; `(1,0)` and `(-1,0)` are the
/// two vertices of the line, the upper half refines the first arc.
fn projective_line_embedding() -> Embedding {
    let coords = [vecq(&[1, 0]), vecq(&[0, 1]), vecq(&[-1, 0]), vecq(&[0, -1])];
    let complex = EmbeddedComplex::from_vertices(CellComplex::circle(4), 2, &coords).unwrap();
    Embedding { complex, parent: vec![0, 2, 1, 3, 2, 2, 3, 3] }
}

/// The isolated fixed point `[0:1:0]`: near it `Z` is the union of the two
/// coordinate axes, and the normal map is `diag(1/2, 1/2)` or `2·I`.
pub fn projective_point(map: ProjectiveMap) -> FixedComponentModel {
    let fan = Fan::cross();
    let axes: BTreeSet<usize> = (0..fan.num_cones()).filter(|&c| fan.dim(c) <= 1).collect();
    let sheaf = ConicSheaf::indicator(fan, &axes, 0).unwrap();
    let f = Q::from_integer(1.into()) / map.line_factor();
    let cells = vec![unit_data(sheaf, diag(&[f.clone(), f]))];
    let complex = CellComplex::point();
    let embedded = EmbeddedComplex::from_vertices(complex.clone(), 1, &[vecq(&[0])]).unwrap();
    FixedComponentModel::new("point", complex, cells, Some(Embedding { complex: embedded, parent: vec![0] })).unwrap()
}

/// `ℝP²` with the coordinate triangle as subcomplex: vertices
/// `[1:0:0], [0:1:0], [0:0:1]`, two arcs on each coordinate line, and four
/// triangles. Cells of `Z` carry `ℂ`; the map fixes every cell
/// orientation-preservingly and acts by the identity on stalks.
pub fn projective_plane_global() -> CellularSheafModel {
    // Arcs: y = 0 through 0, 2 (3, 4); x = 0 through 1, 2 (5, 6); z = 0 through 0, 1 (7, 8).
    let cells: Vec<(usize, Vec<usize>)> = vec![
        (0, vec![]),
        (0, vec![]),
        (0, vec![]),
        (1, vec![0, 2]),
        (1, vec![0, 2]),
        (1, vec![1, 2]),
        (1, vec![1, 2]),
        (1, vec![0, 1]),
        (1, vec![0, 1]),
        (2, vec![3, 5, 7]),
        (2, vec![4, 6, 7]),
        (2, vec![3, 6, 8]),
        (2, vec![4, 5, 8]),
    ];
    let complex = CellComplex::from_faces(&cells, true).unwrap();
    let stalks: Vec<Grading> = (0..complex.len()).map(|c| rank_one(usize::from(c < 9))).collect();
    let data = stalks.iter().enumerate().map(|(c, g)| (c, FixedCellData::identity(g))).collect();
    let fixed = (0..complex.len()).collect();
    CellularSheafModel::new(complex, stalks, SelfMap::Cellular { fixed }, data).unwrap()
}

pub fn projective(map: ProjectiveMap) -> ProjectiveFixture {
    ProjectiveFixture { line: projective_line(map), point: projective_point(map), global: projective_plane_global() }
}

/// Fan with `k` rays cutting the plane into sectors, and the open sheaf on
/// the complement of those rays. For `k < 3` the cross fan is used with the
/// remaining rays kept in the support.
pub fn sector_complement(k: usize) -> ConicSheaf {
    assert!(k >= 1);
    let (fan, removed): (Fan, Vec<usize>) = match k {
        1 => (Fan::cross(), vec![0]),
        2 => (Fan::cross(), vec![0, 2]),
        _ => (Fan::sectors(k), (0..k).collect()),
    };
    let z: BTreeSet<usize> = (0..fan.num_cones())
        .filter(|&c| fan.dim(c) == 2 || (fan.dim(c) == 1 && !removed.contains(&fan.cone(c)[0])))
        .collect();
    ConicSheaf::indicator(fan, &z, 0).unwrap()
}

/// `2·Rot(π/2)`.
pub fn twisted_arc_map() -> QMatrix {
    QMatrix::from_rows(vec![vecq(&[0, -2]), vecq(&[2, 0])]).unwrap()
}

/// Component through the north pole: one vertex `θ = 0` and one arc.
pub fn twisted_component(k: usize) -> FixedComponentModel {
    let vertex = unit_data(sector_complement(k), diag(&[q(2), q(2)]));
    let arc = unit_data(ConicSheaf::constant(Fan::cross(), 0), twisted_arc_map());
    FixedComponentModel::new("north", CellComplex::circle(1), vec![vertex, arc], Some(twisted_embedding())).unwrap()
}

/// A triangle whose vertex at the origin is `θ = 0`.
fn twisted_embedding() -> Embedding {
    let coords = [vecq(&[0, 0]), vecq(&[1, 0]), vecq(&[0, 1])];
    let complex = EmbeddedComplex::from_vertices(CellComplex::circle(3), 2, &coords).unwrap();
    Embedding { complex, parent: vec![0, 1, 1, 1, 1, 1] }
}

/// Closed disk: centre, `k` boundary vertices, `k` radii, `k` boundary arcs
/// and `k` sectors.
pub fn disk(k: usize) -> CellComplex {
    assert!(k >= 1);
    let mut cells: Vec<(usize, Vec<usize>)> = vec![(0, vec![])];
    cells.extend((0..k).map(|_| (0, vec![])));
    cells.extend((0..k).map(|j| (1, vec![0, 1 + j])));
    for j in 0..k {
        let mut f = vec![1 + j, 1 + (j + 1) % k];
        f.dedup();
        cells.push((1, f));
    }
    for j in 0..k {
        let mut f = vec![1 + k + j, 1 + k + (j + 1) % k, 1 + 2 * k + j];
        f.dedup();
        cells.push((2, f));
    }
    CellComplex::from_faces(&cells, true).unwrap()
}

#[derive(Clone, Debug)]
pub struct TwistedFixture {
    pub k: usize,
    pub component: FixedComponentModel,
    /// `S¹ × D²`, with cell `(a, b)` at index `a·|D²| + b`.
    pub complex: CellComplex,
    pub y: BTreeSet<usize>,
    pub z: BTreeSet<usize>,
    /// Identity model of `ℂ_{Y∖Z}` on `S¹ × D²`.
    pub global: CellularSheafModel,
}

impl TwistedFixture {
    /// `χ_c(Y) − χ_c(Z)`.
    pub fn chi_difference(&self) -> Q {
        chi(&self.complex, &self.y) - chi(&self.complex, &self.z)
    }
}

pub fn twisted(k: usize) -> TwistedFixture {
    let circle = CellComplex::circle(1);
    let d = disk(k);
    let n = d.len();
    let complex = circle.product(&d);
    // Open cap: centre, radii, sectors. Z: the slice over the vertex of S¹ of centre and radii.
    let open: Vec<usize> = (0..n).filter(|&b| b == 0 || (1 + k..1 + 2 * k).contains(&b) || b > 3 * k).collect();
    let y: BTreeSet<usize> = (0..circle.len()).flat_map(|a| open.iter().map(move |&b| a * n + b)).collect();
    let z: BTreeSet<usize> = (0..n).filter(|&b| b == 0 || (1 + k..1 + 2 * k).contains(&b)).collect();
    let stalks = (0..complex.len()).map(|c| rank_one(usize::from(y.contains(&c) && !z.contains(&c)))).collect();
    let global = CellularSheafModel::identity(complex.clone(), stalks).unwrap();
    TwistedFixture { k, component: twisted_component(k), complex, y, z, global }
}

/// Height functions generic for the embedded refinements above.
pub fn admissible_heights() -> Vec<TestFunction> {
    [[1, 2], [2, -1], [-3, 1], [1, 3], [-2, -5]].iter().map(|h| TestFunction::Height(vecq(h))).collect()
}

/// Expected values per cell, in the form stated for the worked examples.
pub fn expected_line_trace(map: ProjectiveMap) -> Vec<Gq> {
    match map {
        ProjectiveMap::Stretch => [-1, -1, 1, 1].iter().map(|&x| Gq::int(x)).collect(),
        ProjectiveMap::Shrink => vec![Gq::int(1); 4],
    }
}

/// `(line, point)` contributions and the global trace.
pub fn expected_projective(map: ProjectiveMap) -> ([Gq; 2], Gq) {
    match map {
        ProjectiveMap::Stretch => ([Gq::int(-4), Gq::int(1)], Gq::int(-3)),
        ProjectiveMap::Shrink => ([Gq::int(0), Gq::int(-3)], Gq::int(-3)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charcycle::microlocal_index;
    use crate::euler::hopf_global_trace;
    use crate::lefschetz::{embedded_index, local_contribution, local_trace_function, verify_fixed_point_formula};

    #[test]
    fn projective_values() {
        for map in ProjectiveMap::all() {
            let f = projective(map);
            let theta = local_trace_function(&f.line).unwrap();
            assert_eq!(theta.values(), expected_line_trace(map).as_slice());
            let ([l, p], g) = expected_projective(map);
            assert_eq!(local_contribution(&f.line).unwrap(), l);
            assert_eq!(local_contribution(&f.point).unwrap(), p);
            assert_eq!(hopf_global_trace(&f.global).unwrap(), g);
            let r = verify_fixed_point_formula(&f.global, &f.components()).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn twisted_values() {
        for k in 1..=6 {
            let f = twisted(k);
            let theta = local_trace_function(&f.component).unwrap();
            assert_eq!(theta.values(), &[Gq::int(k as i64), Gq::int(1)]);
            let c = local_contribution(&f.component).unwrap();
            assert_eq!(c, Gq::int(k as i64 - 1));
            assert_eq!(f.chi_difference(), Q::from_integer((k as i64 - 1).into()));
            let r = verify_fixed_point_formula(&f.global, std::slice::from_ref(&f.component)).unwrap();
            assert!(r.pass, "k = {k}: {r:?}");
        }
    }

    #[test]
    fn embedded_indices() {
        for map in ProjectiveMap::all() {
            let f = projective(map);
            for m in f.components() {
                let want = local_contribution(&m).unwrap();
                for h in admissible_heights() {
                    assert_eq!(embedded_index(&m, &h).unwrap(), want);
                }
            }
        }
        let m = twisted(4).component;
        for h in admissible_heights() {
            assert_eq!(embedded_index(&m, &h).unwrap(), Gq::int(3));
        }
        let e = projective_line_embedding();
        let one = crate::euler::ConstructibleFn::constant(e.complex.complex().clone(), Gq::int(1));
        assert_eq!(microlocal_index(&e.complex, &one, &admissible_heights()[0]).unwrap(), Gq::int(0));
    }
}
