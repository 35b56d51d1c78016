//! Complete simplicial fans and cone-compatible linear maps.

use std::collections::{BTreeSet, HashMap};

use num_traits::{Signed, Zero};

use crate::arith::{q, qf, round_dyadic, Q};
use crate::fm::{strict_feasible, Strict};
use crate::matrix::{dot, rank_of, Matrix, QMatrix};
use crate::spectral::Subspace;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FanError {
    #[error("ray {ray} is zero or has the wrong length")]
    InvalidRay { ray: usize },
    #[error("cone {cone:?} refers to a missing ray")]
    UnknownRay { cone: Vec<usize> },
    #[error("cone {cone:?} has linearly dependent rays")]
    NotSimplicial { cone: Vec<usize> },
    #[error("cone {cone:?} is missing its face {missing:?}")]
    NotFaceClosed { cone: Vec<usize>, missing: Vec<usize> },
    #[error("cones overlap: {0}")]
    Overlapping(String),
    #[error("fan is not complete: {0}")]
    NotComplete(String),
    #[error("map is singular")]
    SingularMap,
    #[error("map has size {got}, fan has ambient dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("image of ray {ray} is not a positive multiple of a fan ray")]
    NotConeCompatible { ray: usize },
    #[error("image of cone {cone:?} is not a cone of the fan")]
    ConeImageNotCone { cone: Vec<usize> },
    #[error("fan is not adapted to the subspace: cone {cone:?} meets it only in its interior")]
    FanNotAdapted { cone: Vec<usize> },
}

/// A validated complete simplicial fan. Cone 0 is the origin; cones are
/// sorted by dimension, then by ray set.
#[derive(Clone, Debug, PartialEq)]
pub struct Fan {
    ambient: usize,
    rays: Vec<Vec<Q>>,
    cones: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

fn positive_multiple(a: &[Q], b: &[Q]) -> Option<Q> {
    let k = a.iter().position(|x| !x.is_zero())?;
    if b[k].is_zero() {
        return None;
    }
    let s = &b[k] / &a[k];
    (s.is_positive() && a.iter().zip(b).all(|(x, y)| &(x * &s) == y)).then_some(s)
}

/// Normal vector to the span of `r - 1` independent vectors in `ℚ^r`.
fn normal(r: usize, vectors: &[Vec<Q>]) -> Vec<Q> {
    let m = Matrix::from_shape(vectors.len(), r, vectors.concat());
    m.nullspace().pop().expect("codimension one")
}

impl Fan {
    /// Validates raw rays and cones. The cone list must contain every face,
    /// including the empty origin cone.
    pub fn new(ambient: usize, rays: Vec<Vec<Q>>, cones: Vec<Vec<usize>>) -> Result<Fan, FanError> {
        for (i, v) in rays.iter().enumerate() {
            if v.len() != ambient || v.iter().all(Zero::is_zero) {
                return Err(FanError::InvalidRay { ray: i });
            }
            for (j, w) in rays.iter().enumerate().take(i) {
                if w.len() == v.len() && positive_multiple(w, v).is_some() {
                    return Err(FanError::Overlapping(format!("rays {j} and {i} coincide")));
                }
            }
        }
        let set: BTreeSet<Vec<usize>> = cones
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c.dedup();
                c
            })
            .collect();
        let mut cones: Vec<Vec<usize>> = set.into_iter().collect();
        cones.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let index: HashMap<Vec<usize>, usize> =
            cones.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        for c in &cones {
            if c.iter().any(|&i| i >= rays.len()) {
                return Err(FanError::UnknownRay { cone: c.clone() });
            }
            let vs: Vec<Vec<Q>> = c.iter().map(|&i| rays[i].clone()).collect();
            if rank_of(ambient, &vs) != c.len() {
                return Err(FanError::NotSimplicial { cone: c.clone() });
            }
            for k in 0..c.len() {
                let mut f = c.clone();
                f.remove(k);
                if !index.contains_key(&f) {
                    return Err(FanError::NotFaceClosed { cone: c.clone(), missing: f });
                }
            }
        }
        if !index.contains_key(&Vec::new()) {
            return Err(FanError::NotFaceClosed { cone: Vec::new(), missing: Vec::new() });
        }
        for i in 0..rays.len() {
            if !index.contains_key(&vec![i]) {
                return Err(FanError::NotFaceClosed { cone: vec![i], missing: vec![i] });
            }
        }
        let fan = Fan { ambient, rays, cones, index };
        fan.check_complete()?;
        Ok(fan)
    }

    /// Closes a list of top cones under faces and validates.
    pub fn from_top_cones(
        ambient: usize,
        rays: Vec<Vec<Q>>,
        tops: &[Vec<usize>],
    ) -> Result<Fan, FanError> {
        let mut all = BTreeSet::new();
        for t in tops {
            let n = t.len();
            for mask in 0u32..(1 << n) {
                all.insert((0..n).filter(|k| mask >> k & 1 == 1).map(|k| t[k]).collect::<Vec<_>>());
            }
        }
        Fan::new(ambient, rays, all.into_iter().collect())
    }

    fn check_complete(&self) -> Result<(), FanError> {
        let r = self.ambient;
        for (id, c) in self.cones.iter().enumerate() {
            if c.len() < r && self.cofaces(id).is_empty() {
                return Err(FanError::NotComplete(format!("maximal cone {c:?} has dimension {}", c.len())));
            }
        }
        if r == 1 {
            return match self.rays.as_slice() {
                [a, b] if a[0].is_positive() != b[0].is_positive() => Ok(()),
                _ => Err(FanError::NotComplete("a line fan needs two opposite rays".into())),
            };
        }
        let tops: Vec<usize> = (0..self.cones.len()).filter(|&i| self.cones[i].len() == r).collect();
        if tops.is_empty() {
            return Err(FanError::NotComplete("no full-dimensional cones".into()));
        }
        // Walls separate exactly two top cones lying on opposite sides.
        for (w, wall) in self.cones.iter().enumerate() {
            if wall.len() + 1 != r {
                continue;
            }
            let sides = self.cofaces(w);
            match sides.len() {
                0 | 1 => return Err(FanError::NotComplete(format!("wall {wall:?} bounds {} cone(s)", sides.len()))),
                2 => {}
                _ => return Err(FanError::Overlapping(format!("wall {wall:?} bounds {} cones", sides.len()))),
            }
            let n = normal(r, &wall.iter().map(|&i| self.rays[i].clone()).collect::<Vec<_>>());
            let apex = |c: usize| {
                let extra = self.cones[c].iter().find(|i| !wall.contains(i)).copied().unwrap();
                dot(&n, &self.rays[extra]).is_positive()
            };
            if apex(sides[0]) == apex(sides[1]) {
                return Err(FanError::Overlapping(format!("both cones at wall {wall:?} lie on one side")));
            }
        }
        // Top cones are connected through walls.
        let mut seen = vec![false; self.cones.len()];
        let mut stack = vec![tops[0]];
        seen[tops[0]] = true;
        while let Some(t) = stack.pop() {
            for w in self.facets(t) {
                for n in self.cofaces(w) {
                    if !seen[n] {
                        seen[n] = true;
                        stack.push(n);
                    }
                }
            }
        }
        if let Some(&t) = tops.iter().find(|&&t| !seen[t]) {
            return Err(FanError::NotComplete(format!("cone {:?} is not connected to the rest", self.cones[t])));
        }
        // Covering degree at a generic point is one.
        let hits = self.generic_point_hits(&tops);
        match hits {
            1 => Ok(()),
            0 => Err(FanError::NotComplete("a generic point lies in no cone".into())),
            n => Err(FanError::Overlapping(format!("a generic point lies in {n} cones"))),
        }
    }

    fn generic_point_hits(&self, tops: &[usize]) -> usize {
        let r = self.ambient;
        'candidate: for k in 0i64.. {
            // Points on the moment curve avoid any finite set of hyperplanes.
            let t = qf(1, k + 7);
            let p: Vec<Q> = (0..r).map(|i| (0..i).fold(q(1), |acc, _| acc * &t)).collect();
            let mut hits = 0;
            for &c in tops {
                let m = Matrix::from_columns(r, &self.cone_rays(c));
                let lam = m.solve(&p).expect("top cone spans");
                if lam.iter().any(Zero::is_zero) {
                    continue 'candidate;
                }
                if lam.iter().all(Signed::is_positive) {
                    hits += 1;
                }
            }
            return hits;
        }
        unreachable!()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rays(&self) -> &[Vec<Q>] {
        &self.rays
    }

    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn num_cones(&self) -> usize {
        self.cones.len()
    }

    pub fn cone(&self, id: usize) -> &[usize] {
        &self.cones[id]
    }

    pub fn dim(&self, id: usize) -> usize {
        self.cones[id].len()
    }

    pub fn cone_id(&self, rays: &[usize]) -> Option<usize> {
        let mut k = rays.to_vec();
        k.sort_unstable();
        self.index.get(&k).copied()
    }

    pub fn cone_rays(&self, id: usize) -> Vec<Vec<Q>> {
        self.cones[id].iter().map(|&i| self.rays[i].clone()).collect()
    }

    /// Codimension-one faces.
    pub fn facets(&self, id: usize) -> Vec<usize> {
        let c = &self.cones[id];
        (0..c.len())
            .map(|k| {
                let mut f = c.clone();
                f.remove(k);
                self.index[&f]
            })
            .collect()
    }

    /// Cones having `id` as a codimension-one face.
    pub fn cofaces(&self, id: usize) -> Vec<usize> {
        let c = &self.cones[id];
        (0..self.cones.len())
            .filter(|&j| self.cones[j].len() == c.len() + 1 && c.iter().all(|i| self.cones[j].contains(i)))
            .collect()
    }

    /// `a ≤ b` in the face order.
    pub fn is_face(&self, a: usize, b: usize) -> bool {
        self.cones[a].iter().all(|i| self.cones[b].contains(i))
    }

    pub fn line() -> Fan {
        Fan::new(1, vec![vec![q(1)], vec![q(-1)]], vec![vec![], vec![0], vec![1]]).unwrap()
    }

    /// Rays `e₁, e₂, -e₁, -e₂` with the four quadrants.
    pub fn cross() -> Fan {
        let rays = vec![vec![q(1), q(0)], vec![q(0), q(1)], vec![q(-1), q(0)], vec![q(0), q(-1)]];
        Fan::from_top_cones(2, rays, &[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]]).unwrap()
    }

    /// `k ≥ 3` rays on the unit circle at angles `2πj/k`, rounded to dyadic
    /// rationals, with the `k` sectors between consecutive rays.
    pub fn sectors(k: usize) -> Fan {
        assert!(k >= 3, "a sector fan needs at least three rays");
        let rays: Vec<Vec<Q>> = (0..k)
            .map(|j| {
                let a = 2.0 * std::f64::consts::PI * j as f64 / k as f64;
                let c = |x: f64| round_dyadic(&Q::from_float(x).unwrap(), 20);
                vec![c(a.cos()), c(a.sin())]
            })
            .collect();
        let tops: Vec<Vec<usize>> = (0..k).map(|j| vec![j, (j + 1) % k]).collect();
        Fan::from_top_cones(2, rays, &tops).unwrap()
    }

    /// Rays `e₁, e₂, -e₁-e₂`, permuted cyclically by `[[0,-1],[1,-1]]`.
    pub fn triangle() -> Fan {
        let rays = vec![vec![q(1), q(0)], vec![q(0), q(1)], vec![q(-1), q(-1)]];
        Fan::from_top_cones(2, rays, &[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()
    }

    /// Six rays `±e₁, ±e₂, ±(e₁+e₂)`, permuted cyclically by `[[1,-1],[1,0]]`.
    pub fn hexagon() -> Fan {
        let rays = vec![
            vec![q(1), q(0)],
            vec![q(1), q(1)],
            vec![q(0), q(1)],
            vec![q(-1), q(0)],
            vec![q(-1), q(-1)],
            vec![q(0), q(-1)],
        ];
        let tops: Vec<Vec<usize>> = (0..6).map(|j| vec![j, (j + 1) % 6]).collect();
        Fan::from_top_cones(2, rays, &tops).unwrap()
    }

    /// The coordinate orthants of `ℚ^r`.
    pub fn orthants(r: usize) -> Fan {
        let mut rays = Vec::new();
        for i in 0..r {
            for s in [1, -1] {
                rays.push((0..r).map(|j| if i == j { q(s) } else { q(0) }).collect());
            }
        }
        let tops: Vec<Vec<usize>> =
            (0..1u32 << r).map(|m| (0..r).map(|i| 2 * i + (m >> i & 1) as usize).collect()).collect();
        Fan::from_top_cones(r, rays, &tops).unwrap()
    }
}

/// How a cone-compatible map acts on a fan.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeMapAnalysis {
    pub ray_perm: Vec<usize>,
    pub ray_scalings: Vec<Q>,
    pub cone_perm: Vec<usize>,
    /// Orientation sign on fixed cones, `None` elsewhere.
    pub signs: Vec<Option<i8>>,
}

impl ConeMapAnalysis {
    pub fn is_fixed(&self, c: usize) -> bool {
        self.cone_perm[c] == c
    }

    pub fn sign(&self, c: usize) -> Option<i8> {
        self.signs[c]
    }

    pub fn fixed_cones(&self) -> Vec<usize> {
        (0..self.cone_perm.len()).filter(|&c| self.is_fixed(c)).collect()
    }
}

fn permutation_sign(p: &[usize]) -> i8 {
    let mut seen = vec![false; p.len()];
    let mut sign = 1;
    for i in 0..p.len() {
        if seen[i] {
            continue;
        }
        let mut len = 0;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            j = p[j];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Checks that `a` permutes rays up to positive scaling and cones, and
/// records the permutation with orientation signs on fixed cones.
pub fn cone_map_analysis(fan: &Fan, a: &QMatrix) -> Result<ConeMapAnalysis, FanError> {
    let r = fan.ambient;
    if a.rows() != r || a.cols() != r {
        return Err(FanError::DimensionMismatch { expected: r, got: a.rows() });
    }
    if a.determinant().is_zero() {
        return Err(FanError::SingularMap);
    }
    let mut ray_perm = Vec::with_capacity(fan.rays.len());
    let mut ray_scalings = Vec::with_capacity(fan.rays.len());
    for (i, v) in fan.rays.iter().enumerate() {
        let img = a.apply(v);
        let hit = fan.rays.iter().enumerate().find_map(|(j, w)| positive_multiple(w, &img).map(|s| (j, s)));
        let Some((j, s)) = hit else {
            return Err(FanError::NotConeCompatible { ray: i });
        };
        ray_perm.push(j);
        ray_scalings.push(s);
    }
    let mut cone_perm = Vec::with_capacity(fan.cones.len());
    let mut signs = Vec::with_capacity(fan.cones.len());
    for c in &fan.cones {
        let img: Vec<usize> = c.iter().map(|&i| ray_perm[i]).collect();
        let Some(id) = fan.cone_id(&img) else {
            return Err(FanError::ConeImageNotCone { cone: c.clone() });
        };
        cone_perm.push(id);
        if fan.cones[id] == *c {
            let local: Vec<usize> =
                img.iter().map(|j| c.iter().position(|i| i == j).unwrap()).collect();
            signs.push(Some(permutation_sign(&local)));
        } else {
            signs.push(None);
        }
    }
    Ok(ConeMapAnalysis { ray_perm, ray_scalings, cone_perm, signs })
}

/// Exact subspace spanned by the rays that lie in `s` (within tolerance for
/// numerical subspaces), if it has the same dimension as `s`.
pub fn rationalize(fan: &Fan, s: &Subspace, tol: f64) -> Option<Subspace> {
    if s.is_exact() {
        return Some(s.clone());
    }
    let inside: Vec<Vec<Q>> = fan.rays.iter().filter(|v| s.contains_vector(v, tol)).cloned().collect();
    let span = Subspace::span(fan.ambient, &inside);
    (span.dim() == s.dim()).then_some(span)
}

/// Whether the relative interior of cone `c` meets the exact subspace with
/// annihilator rows `ann`.
fn relint_meets(fan: &Fan, c: usize, ann: &[Vec<Q>]) -> bool {
    let rays = fan.cone_rays(c);
    let k = rays.len();
    if k == 0 {
        return true;
    }
    if ann.is_empty() {
        return true;
    }
    // λ > 0 with ann·R·λ = 0; parametrize λ over the kernel.
    let nr: Vec<Q> = ann
        .iter()
        .flat_map(|row| rays.iter().map(move |v| dot(row, v)))
        .collect();
    let kernel = Matrix::from_shape(ann.len(), k, nr).nullspace();
    if kernel.is_empty() {
        return false;
    }
    let cons: Vec<Strict> =
        (0..k).map(|i| Strict::homogeneous(kernel.iter().map(|b| b[i].clone()).collect())).collect();
    strict_feasible(kernel.len(), &cons).is_some()
}

fn annihilator(ambient: usize, basis: &[Vec<Q>]) -> Vec<Vec<Q>> {
    if basis.is_empty() {
        return Matrix::<Q>::identity(ambient).to_rows();
    }
    Matrix::from_shape(basis.len(), ambient, basis.concat()).nullspace()
}

/// Cones whose closed cone lies in `s`; fails unless these cones cover `s`.
pub fn subfan_of_subspace(fan: &Fan, s: &Subspace) -> Result<Vec<usize>, FanError> {
    let exact = rationalize(fan, s, 1e-9);
    let Some(basis) = exact.as_ref().and_then(|e| e.exact_basis().map(<[Vec<Q>]>::to_vec)) else {
        return Err(FanError::FanNotAdapted { cone: Vec::new() });
    };
    let sub = Subspace::Exact { ambient: fan.ambient, basis: basis.clone() };
    let ann = annihilator(fan.ambient, &basis);
    let mut inside = Vec::new();
    for (id, c) in fan.cones.iter().enumerate() {
        if c.iter().all(|&i| sub.contains_vector(&fan.rays[i], 0.0)) {
            inside.push(id);
        } else if relint_meets(fan, id, &ann) {
            return Err(FanError::FanNotAdapted { cone: c.clone() });
        }
    }
    Ok(inside)
}

/// Every subspace that is a union of cones, ordered by dimension.
pub fn adapted_subspaces(fan: &Fan) -> Vec<Subspace> {
    // An adapted subspace is spanned by the rays it contains, so ray subsets
    // of size at most the ambient dimension reach every candidate.
    let mut spans: Vec<Subspace> = Vec::new();
    let n = fan.rays.len();
    let mut subsets: Vec<Vec<usize>> = vec![vec![]];
    for i in 0..n {
        let m = subsets.len();
        for s in 0..m {
            if subsets[s].len() < fan.ambient {
                let mut t = subsets[s].clone();
                t.push(i);
                subsets.push(t);
            }
        }
    }
    for s in subsets {
        let vs: Vec<Vec<Q>> = s.iter().map(|&i| fan.rays[i].clone()).collect();
        let sp = Subspace::span(fan.ambient, &vs);
        if !spans.contains(&sp) && subfan_of_subspace(fan, &sp).is_ok() {
            spans.push(sp);
        }
    }
    spans.sort_by_key(Subspace::dim);
    spans
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> QMatrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn builtin_fans_validate() {
        assert_eq!(Fan::line().num_cones(), 3);
        assert_eq!(Fan::cross().num_cones(), 9);
        for k in 3..8 {
            assert_eq!(Fan::sectors(k).num_cones(), 2 * k + 1);
        }
        assert_eq!(Fan::triangle().num_cones(), 7);
        assert_eq!(Fan::hexagon().num_cones(), 13);
        assert_eq!(Fan::orthants(3).num_cones(), 27);
    }

    #[test]
    fn open_cone_euler_sum() {
        for fan in [Fan::line(), Fan::cross(), Fan::sectors(5), Fan::orthants(3)] {
            let s: i64 = (0..fan.num_cones()).map(|c| if fan.dim(c) % 2 == 0 { 1 } else { -1 }).sum();
            assert_eq!(s, if fan.ambient_dim() % 2 == 0 { 1 } else { -1 });
        }
    }

    #[test]
    fn validation_errors() {
        let e1 = vec![q(1), q(0)];
        let e2 = vec![q(0), q(1)];
        let r = |v: &[Vec<Q>]| v.to_vec();
        // Half plane only.
        let err = Fan::from_top_cones(2, r(&[e1.clone(), e2.clone(), vec![q(-1), q(0)]]), &[vec![0, 1], vec![1, 2]]);
        assert!(matches!(err, Err(FanError::NotComplete(_))));
        // Dependent rays.
        let err = Fan::new(2, r(&[e1.clone(), vec![q(-1), q(0)]]), vec![vec![], vec![0], vec![1], vec![0, 1]]);
        assert!(matches!(err, Err(FanError::NotSimplicial { .. })));
        // Missing face.
        let err = Fan::new(1, r(&[vec![q(1)], vec![q(-1)]]), vec![vec![], vec![0]]);
        assert!(matches!(err, Err(FanError::NotFaceClosed { .. })));
        // Duplicate ray.
        let err = Fan::new(1, r(&[vec![q(1)], vec![q(2)]]), vec![vec![], vec![0], vec![1]]);
        assert!(matches!(err, Err(FanError::Overlapping(_))));
        // Double cover: quadrants plus an extra overlapping sector.
        let rays = r(&[e1.clone(), e2.clone(), vec![q(-1), q(0)], vec![q(0), q(-1)], vec![q(1), q(1)]]);
        let err = Fan::from_top_cones(2, rays, &[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3], vec![0, 4]]);
        assert!(matches!(err, Err(FanError::Overlapping(_)) | Err(FanError::NotComplete(_))));
        // Winding twice around the origin.
        let rays: Vec<Vec<Q>> = (0..6)
            .map(|j| {
                let v = [(1, 0), (-1, 1), (-1, -1), (1, 0), (-1, 1), (-1, -1)][j];
                vec![q(v.0) + qf(j as i64, 100), q(v.1)]
            })
            .collect();
        let tops: Vec<Vec<usize>> = (0..6).map(|j| vec![j, (j + 1) % 6]).collect();
        assert!(Fan::from_top_cones(2, rays, &tops).is_err());
    }

    #[test]
    fn line_maps() {
        let fan = Fan::line();
        let a = cone_map_analysis(&fan, &mat(&[&[2]])).unwrap();
        assert!(a.fixed_cones().len() == 3 && a.signs.iter().all(|s| *s == Some(1)));
        assert_eq!(a.ray_scalings, vec![q(2), q(2)]);
        let b = cone_map_analysis(&fan, &mat(&[&[-2]])).unwrap();
        assert_eq!(b.ray_perm, vec![1, 0]);
        assert_eq!(b.fixed_cones(), vec![0]);
    }

    #[test]
    fn rotation_on_sector_fans() {
        let t = cone_map_analysis(&Fan::triangle(), &mat(&[&[0, -2], &[2, -2]])).unwrap();
        assert_eq!(t.fixed_cones(), vec![0]);
        let h = cone_map_analysis(&Fan::hexagon(), &mat(&[&[1, -1], &[1, 0]])).unwrap();
        assert_eq!(h.ray_perm, vec![1, 2, 3, 4, 5, 0]);
        // Swap on the cross fan fixes the first quadrant with sign -1.
        let s = cone_map_analysis(&Fan::cross(), &mat(&[&[0, 1], &[1, 0]])).unwrap();
        let q1 = Fan::cross().cone_id(&[0, 1]).unwrap();
        assert_eq!(s.sign(q1), Some(-1));
        let err = cone_map_analysis(&Fan::cross(), &mat(&[&[1, 1], &[0, 1]])).unwrap_err();
        assert_eq!(err, FanError::NotConeCompatible { ray: 1 });
    }

    #[test]
    fn subfans() {
        let line = Fan::line();
        assert_eq!(subfan_of_subspace(&line, &Subspace::zero(1)).unwrap(), vec![0]);
        let cross = Fan::cross();
        let axis = Subspace::span(2, &[vec![q(1), q(0)]]);
        let got = subfan_of_subspace(&cross, &axis).unwrap();
        let want: Vec<usize> = vec![0, cross.cone_id(&[0]).unwrap(), cross.cone_id(&[2]).unwrap()];
        assert_eq!(
            got.iter().collect::<BTreeSet<_>>(),
            want.iter().collect::<BTreeSet<_>>()
        );
        let diag = Subspace::span(2, &[vec![q(1), q(1)]]);
        assert!(matches!(subfan_of_subspace(&cross, &diag), Err(FanError::FanNotAdapted { .. })));
        assert_eq!(adapted_subspaces(&cross).len(), 4);
        assert_eq!(adapted_subspaces(&Fan::sectors(5)).len(), 2);
        assert_eq!(adapted_subspaces(&Fan::orthants(3)).len(), 8);
    }
}
