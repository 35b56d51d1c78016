//! Fan-constructible conic sheaves with an equivariant structure, and the
//! two hyperbolic-localization traces.
//!
//! A sheaf assigns to every cone a graded stalk and to every facet relation
//! `c ⋖ c′` a generization map `stalk(c) → stalk(c′)` per degree; missing maps
//! are zero. The equivariant structure over a cone-compatible map `A` is a
//! family `eta_c : stalk(c) → stalk(π c)` commuting with generization.
//!
//! The expanding trace is the Hopf trace of the open-cone cochain model of
//! compactly supported sections on `E`. The shrinking trace evaluates the
//! support triangle: the stalk at the origin minus the order-complex model of
//! sections over the fiber minus `S`, where each chain of fixed cones carries
//! the coefficient of its maximal cone.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::arith::{Gq, Q};
use crate::fan::{adapted_subspaces, cone_map_analysis, rationalize, subfan_of_subspace, ConeMapAnalysis, Fan, FanError};
use crate::matrix::{GMatrix, QMatrix};
use crate::par::Exec;
use crate::spectral::{
    check_nondegenerate, minimal_expanding_with, minimal_shrinking_with, validate_expanding_with,
    validate_shrinking_with, SpectralConfig, SpectralError, Subspace,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConicError {
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("cone {0} does not exist")]
    UnknownCone(usize),
    #[error("cone {face} is not a facet of cone {coface}")]
    NotFacet { face: usize, coface: usize },
    #[error("map {what} in degree {degree} has shape {got:?}, expected {expected:?}")]
    Shape { what: String, degree: i32, expected: (usize, usize), got: (usize, usize) },
    #[error("generization maps do not commute around cones {bottom} < {top} in degree {degree}")]
    Functoriality { bottom: usize, top: usize, degree: i32 },
    #[error("equivariant structure does not commute with generization {face} -> {coface} in degree {degree}")]
    Equivariance { face: usize, coface: usize, degree: i32 },
    #[error("1 is an eigenvalue of the normal map")]
    Degenerate,
    #[error("expanding trace {expanding} differs from shrinking trace {shrinking}")]
    LocalizationMismatch { expanding: Box<Gq>, shrinking: Box<Gq> },
    #[error("the designated {side} subspace is not valid for the map")]
    InvalidSubspace { side: &'static str },
    #[error("no valid {side} subspace is adapted to the fan")]
    NoAdaptedSubspace { side: &'static str },
}

/// Graded dimensions of one stalk: degree → dimension, zeros omitted.
pub type Grading = BTreeMap<i32, usize>;

#[derive(Clone, Debug, PartialEq)]
pub struct ConicSheaf {
    fan: Fan,
    stalks: Vec<Grading>,
    generization: BTreeMap<(usize, usize, i32), GMatrix>,
}

fn shape(m: &GMatrix) -> (usize, usize) {
    (m.rows(), m.cols())
}

fn identity_like(n: usize) -> GMatrix {
    GMatrix::identity(n)
}

impl ConicSheaf {
    /// Validates shapes and functoriality around every codimension-two
    /// diamond.
    pub fn new(
        fan: Fan,
        stalks: Vec<Grading>,
        generization: BTreeMap<(usize, usize, i32), GMatrix>,
    ) -> Result<ConicSheaf, ConicError> {
        if stalks.len() != fan.num_cones() {
            return Err(ConicError::UnknownCone(stalks.len().min(fan.num_cones())));
        }
        let stalks: Vec<Grading> =
            stalks.into_iter().map(|g| g.into_iter().filter(|&(_, d)| d > 0).collect()).collect();
        let mut generization = generization;
        generization.retain(|_, m| !m.is_zero());
        let sheaf = ConicSheaf { fan, stalks, generization };
        for (&(c, c2, d), m) in &sheaf.generization {
            if c >= sheaf.fan.num_cones() || c2 >= sheaf.fan.num_cones() {
                return Err(ConicError::UnknownCone(c.max(c2)));
            }
            if !sheaf.fan.facets(c2).contains(&c) {
                return Err(ConicError::NotFacet { face: c, coface: c2 });
            }
            let expected = (sheaf.stalk_dim(c2, d), sheaf.stalk_dim(c, d));
            if shape(m) != expected {
                return Err(ConicError::Shape {
                    what: format!("generization {c}->{c2}"),
                    degree: d,
                    expected,
                    got: shape(m),
                });
            }
        }
        sheaf.check_diamonds()?;
        Ok(sheaf)
    }

    fn check_diamonds(&self) -> Result<(), ConicError> {
        let fan = &self.fan;
        for top in 0..fan.num_cones() {
            if fan.dim(top) < 2 {
                continue;
            }
            let mids = fan.facets(top);
            for (i, &m1) in mids.iter().enumerate() {
                for &m2 in &mids[i + 1..] {
                    let common: Vec<usize> =
                        fan.cone(m1).iter().filter(|r| fan.cone(m2).contains(r)).copied().collect();
                    let bottom = fan.cone_id(&common).expect("face-closed");
                    for d in self.degrees() {
                        let a = self.gen(m1, top, d).mul(&self.gen(bottom, m1, d));
                        let b = self.gen(m2, top, d).mul(&self.gen(bottom, m2, d));
                        if a != b {
                            return Err(ConicError::Functoriality { bottom, top, degree: d });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn stalks(&self) -> &[Grading] {
        &self.stalks
    }

    pub fn generization_maps(&self) -> &BTreeMap<(usize, usize, i32), GMatrix> {
        &self.generization
    }

    pub fn stalk_dim(&self, c: usize, d: i32) -> usize {
        self.stalks[c].get(&d).copied().unwrap_or(0)
    }

    /// All degrees with a nonzero stalk somewhere.
    pub fn degrees(&self) -> Vec<i32> {
        let s: BTreeSet<i32> = self.stalks.iter().flat_map(|g| g.keys().copied()).collect();
        s.into_iter().collect()
    }

    /// Generization `stalk(c) → stalk(c2)` in degree `d`; zero if absent.
    pub fn gen(&self, c: usize, c2: usize, d: i32) -> GMatrix {
        self.generization
            .get(&(c, c2, d))
            .cloned()
            .unwrap_or_else(|| GMatrix::zeros(self.stalk_dim(c2, d), self.stalk_dim(c, d)))
    }

    pub fn zero(fan: Fan) -> ConicSheaf {
        let n = fan.num_cones();
        ConicSheaf { fan, stalks: vec![Grading::new(); n], generization: BTreeMap::new() }
    }

    /// Rank-one sheaf on a locally closed union `z` of cones, in `degree`.
    pub fn indicator(fan: Fan, z: &BTreeSet<usize>, degree: i32) -> Result<ConicSheaf, ConicError> {
        let n = fan.num_cones();
        let stalks = (0..n)
            .map(|c| if z.contains(&c) { Grading::from([(degree, 1)]) } else { Grading::new() })
            .collect();
        let mut generization = BTreeMap::new();
        for c2 in 0..n {
            for c in fan.facets(c2) {
                if z.contains(&c) && z.contains(&c2) {
                    generization.insert((c, c2, degree), identity_like(1));
                }
            }
        }
        ConicSheaf::new(fan, stalks, generization)
    }

    pub fn constant(fan: Fan, degree: i32) -> ConicSheaf {
        let all = (0..fan.num_cones()).collect();
        ConicSheaf::indicator(fan, &all, degree).expect("constant sheaf is valid")
    }

    pub fn skyscraper(fan: Fan, degree: i32) -> ConicSheaf {
        ConicSheaf::indicator(fan, &BTreeSet::from([0]), degree).expect("origin is closed")
    }

    /// Shifts every stalk from degree `d` to `d + k`.
    pub fn shifted(&self, k: i32) -> ConicSheaf {
        ConicSheaf {
            fan: self.fan.clone(),
            stalks: self.stalks.iter().map(|g| g.iter().map(|(&d, &n)| (d + k, n)).collect()).collect(),
            generization: self.generization.iter().map(|(&(a, b, d), m)| ((a, b, d + k), m.clone())).collect(),
        }
    }

    /// Direct sum; both sheaves must live on the same fan.
    pub fn direct_sum(&self, o: &ConicSheaf) -> ConicSheaf {
        assert_eq!(self.fan, o.fan, "direct sum over different fans");
        let n = self.fan.num_cones();
        let stalks = (0..n)
            .map(|c| {
                let mut g = self.stalks[c].clone();
                for (&d, &k) in &o.stalks[c] {
                    *g.entry(d).or_insert(0) += k;
                }
                g
            })
            .collect();
        let mut generization = BTreeMap::new();
        let keys: BTreeSet<(usize, usize, i32)> =
            self.generization.keys().chain(o.generization.keys()).copied().collect();
        for (a, b, d) in keys {
            generization.insert((a, b, d), block_diag(&self.gen(a, b, d), &o.gen(a, b, d)));
        }
        ConicSheaf { fan: self.fan.clone(), stalks, generization }
    }
}

pub fn block_diag(a: &GMatrix, b: &GMatrix) -> GMatrix {
    let mut m = GMatrix::zeros(a.rows() + b.rows(), a.cols() + b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            m[(i, j)] = a[(i, j)].clone();
        }
    }
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            m[(a.rows() + i, a.cols() + j)] = b[(i, j)].clone();
        }
    }
    m
}

/// Equivariant structure over a cone-compatible rational map.
#[derive(Clone, Debug, PartialEq)]
pub struct Equivariant {
    map: QMatrix,
    analysis: ConeMapAnalysis,
    eta: BTreeMap<(usize, i32), GMatrix>,
}

impl Equivariant {
    /// Validates shapes and the intertwining identity
    /// `eta_{c′} ∘ ρ_{c→c′} = ρ_{πc→πc′} ∘ eta_c` on every facet relation.
    pub fn new(
        sheaf: &ConicSheaf,
        map: QMatrix,
        eta: BTreeMap<(usize, i32), GMatrix>,
    ) -> Result<Equivariant, ConicError> {
        let analysis = cone_map_analysis(&sheaf.fan, &map)?;
        let mut eta = eta;
        eta.retain(|_, m| !m.is_zero());
        let e = Equivariant { map, analysis, eta };
        for (&(c, d), m) in &e.eta {
            if c >= sheaf.fan.num_cones() {
                return Err(ConicError::UnknownCone(c));
            }
            let expected = (sheaf.stalk_dim(e.analysis.cone_perm[c], d), sheaf.stalk_dim(c, d));
            if shape(m) != expected {
                return Err(ConicError::Shape { what: format!("eta on cone {c}"), degree: d, expected, got: shape(m) });
            }
        }
        let pi = &e.analysis.cone_perm;
        for c2 in 0..sheaf.fan.num_cones() {
            for c in sheaf.fan.facets(c2) {
                for d in sheaf.degrees() {
                    let lhs = e.eta_at(sheaf, c2, d).mul(&sheaf.gen(c, c2, d));
                    let rhs = sheaf.gen(pi[c], pi[c2], d).mul(&e.eta_at(sheaf, c, d));
                    if lhs != rhs {
                        return Err(ConicError::Equivariance { face: c, coface: c2, degree: d });
                    }
                }
            }
        }
        Ok(e)
    }

    /// `eta_c = λ·id` on every stalk; requires a π-invariant sheaf.
    pub fn scalar(sheaf: &ConicSheaf, map: QMatrix, lambda: Gq) -> Result<Equivariant, ConicError> {
        let analysis = cone_map_analysis(&sheaf.fan, &map)?;
        let mut eta = BTreeMap::new();
        for c in 0..sheaf.fan.num_cones() {
            for (&d, &n) in &sheaf.stalks[c] {
                let img = sheaf.stalk_dim(analysis.cone_perm[c], d);
                if img != n {
                    return Err(ConicError::Shape {
                        what: format!("eta on cone {c}"),
                        degree: d,
                        expected: (img, n),
                        got: (n, n),
                    });
                }
                eta.insert((c, d), GMatrix::scalar(n, lambda.clone()));
            }
        }
        Equivariant::new(sheaf, map, eta)
    }

    pub fn map(&self) -> &QMatrix {
        &self.map
    }

    pub fn analysis(&self) -> &ConeMapAnalysis {
        &self.analysis
    }

    pub fn eta_maps(&self) -> &BTreeMap<(usize, i32), GMatrix> {
        &self.eta
    }

    pub fn eta_at(&self, sheaf: &ConicSheaf, c: usize, d: i32) -> GMatrix {
        self.eta.get(&(c, d)).cloned().unwrap_or_else(|| {
            GMatrix::zeros(sheaf.stalk_dim(self.analysis.cone_perm[c], d), sheaf.stalk_dim(c, d))
        })
    }

    /// `Σ_d (−1)^d tr(eta_c)` for a fixed cone.
    pub fn alternating_trace(&self, sheaf: &ConicSheaf, c: usize) -> Gq {
        debug_assert!(self.analysis.is_fixed(c));
        let mut t = Gq::zero();
        for d in sheaf.stalks[c].keys() {
            let tr = self.eta_at(sheaf, c, *d).trace();
            if d.rem_euclid(2) == 0 {
                t += tr;
            } else {
                t -= &tr;
            }
        }
        t
    }

    /// Same structure over `t·A`; the cone permutation is unchanged for
    /// `t > 0`.
    pub fn rescaled(&self, t: &Q) -> Equivariant {
        let map = self.map.scale(t);
        let mut analysis = self.analysis.clone();
        for s in &mut analysis.ray_scalings {
            *s *= t;
        }
        Equivariant { map, analysis, eta: self.eta.clone() }
    }

    /// Block-diagonal structure on a direct sum.
    pub fn direct_sum(&self, sa: &ConicSheaf, o: &Equivariant, sb: &ConicSheaf) -> Equivariant {
        assert_eq!(self.map, o.map, "direct sum over different maps");
        let keys: BTreeSet<(usize, i32)> = self.eta.keys().chain(o.eta.keys()).copied().collect();
        let eta = keys
            .into_iter()
            .map(|(c, d)| ((c, d), block_diag(&self.eta_at(sa, c, d), &o.eta_at(sb, c, d))))
            .collect();
        Equivariant { map: self.map.clone(), analysis: self.analysis.clone(), eta }
    }

    pub fn shifted(&self, k: i32) -> Equivariant {
        Equivariant {
            map: self.map.clone(),
            analysis: self.analysis.clone(),
            eta: self.eta.iter().map(|(&(c, d), m)| ((c, d + k), m.clone())).collect(),
        }
    }
}

fn sum(values: Vec<Gq>) -> Gq {
    values.into_iter().fold(Gq::zero(), |a, b| a + b)
}

fn sign_scale(z: Gq, s: i64) -> Gq {
    if s >= 0 {
        z
    } else {
        -z
    }
}

/// Hopf trace over the fixed cones of the subfan on `E`.
pub fn trace_expanding(g: &ConicSheaf, eta: &Equivariant, e: &Subspace) -> Result<Gq, ConicError> {
    trace_expanding_with(g, eta, e, Exec::default())
}

pub fn trace_expanding_with(
    g: &ConicSheaf,
    eta: &Equivariant,
    e: &Subspace,
    exec: Exec,
) -> Result<Gq, ConicError> {
    let cones = subfan_of_subspace(&g.fan, e)?;
    let a = &eta.analysis;
    let fixed: Vec<usize> = cones.into_iter().filter(|&c| a.is_fixed(c)).collect();
    let terms = exec.map(&fixed, |&c| {
        let s = a.sign(c).expect("fixed cone") as i64 * if g.fan.dim(c).is_multiple_of(2) { 1 } else { -1 };
        sign_scale(eta.alternating_trace(g, c), s)
    });
    Ok(sum(terms))
}

/// Order-complex trace over the fixed cones of `q`: each fixed chain
/// `c₀ < … < c_k` contributes `(−1)^k` times the trace at `c_k`.
pub fn poset_holim_trace(g: &ConicSheaf, eta: &Equivariant, q: &BTreeSet<usize>) -> Gq {
    poset_holim_trace_with(g, eta, q, Exec::default())
}

pub fn poset_holim_trace_with(g: &ConicSheaf, eta: &Equivariant, q: &BTreeSet<usize>, exec: Exec) -> Gq {
    let fan = &g.fan;
    let mut fixed: Vec<usize> = q.iter().copied().filter(|&c| eta.analysis.is_fixed(c)).collect();
    fixed.sort_by_key(|&c| fan.dim(c));
    // w(c) = Σ over fixed chains ending at c of (−1)^length.
    let mut w: BTreeMap<usize, i64> = BTreeMap::new();
    for &c in &fixed {
        let below: i64 = fixed
            .iter()
            .filter(|&&b| b != c && fan.dim(b) < fan.dim(c) && fan.is_face(b, c))
            .map(|b| w[b])
            .sum();
        w.insert(c, 1 - below);
    }
    let terms = exec.map(&fixed, |&c| eta.alternating_trace(g, c).scale(&Q::from_integer(w[&c].into())));
    sum(terms)
}

/// Stalk trace at the origin minus the trace over the complement of `S`.
pub fn trace_shrinking(g: &ConicSheaf, eta: &Equivariant, s: &Subspace) -> Result<Gq, ConicError> {
    trace_shrinking_with(g, eta, s, Exec::default())
}

pub fn trace_shrinking_with(
    g: &ConicSheaf,
    eta: &Equivariant,
    s: &Subspace,
    exec: Exec,
) -> Result<Gq, ConicError> {
    let inside: BTreeSet<usize> = subfan_of_subspace(&g.fan, s)?.into_iter().collect();
    let q: BTreeSet<usize> = (0..g.fan.num_cones()).filter(|c| !inside.contains(c)).collect();
    let origin = eta.alternating_trace(g, 0);
    Ok(origin - poset_holim_trace_with(g, eta, &q, exec))
}

/// Choices for `localization_trace`.
#[derive(Clone, Debug, Default)]
pub struct LocalizationOptions {
    pub expanding: Option<Subspace>,
    pub shrinking: Option<Subspace>,
    pub spectral: SpectralConfig,
    pub exec: Exec,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalizationReport {
    pub value: Gq,
    pub expanding: Subspace,
    pub shrinking: Subspace,
    /// Scale `t` with `tA` used on the expanding side when `A` has an
    /// eigenvalue on the unit circle.
    pub expanding_scale: Option<Q>,
}

/// First subspace among `candidates` that is a valid subspace for the
/// validator and adapted to the fan.
fn first_adapted<F>(
    fan: &Fan,
    preferred: Subspace,
    validate: F,
    side: &'static str,
    tol: f64,
) -> Result<Subspace, ConicError>
where
    F: Fn(&Subspace) -> Result<bool, SpectralError>,
{
    if let Some(p) = rationalize(fan, &preferred, tol) {
        if subfan_of_subspace(fan, &p).is_ok() && validate(&p)? {
            return Ok(p);
        }
    }
    for cand in adapted_subspaces(fan) {
        if cand.contains(&preferred, tol) && validate(&cand)? {
            return Ok(cand);
        }
    }
    Err(ConicError::NoAdaptedSubspace { side })
}

/// Multipliers `t` tried, in order, when the expanding side needs `tA`.
pub fn perturbation_scales() -> Vec<Q> {
    let mut v = Vec::new();
    for j in 1..=24u32 {
        let e = Q::new(1.into(), num_bigint::BigInt::from(1u64 << j));
        v.push(Q::from_integer(1.into()) + &e);
        v.push(Q::from_integer(1.into()) - e);
    }
    v
}

/// Expanding subspace and the scale it was computed for.
fn default_expanding(
    g: &ConicSheaf,
    a: &QMatrix,
    cfg: &SpectralConfig,
) -> Result<(Subspace, Option<Q>), ConicError> {
    let tol = cfg.tolerance;
    match minimal_expanding_with(a, cfg) {
        Ok(gp) => {
            let e = first_adapted(&g.fan, gp, |s| validate_expanding_with(a, s, cfg), "expanding", tol)?;
            Ok((e, None))
        }
        Err(SpectralError::UnitCircleRequired) => {
            let base = minimal_shrinking_with(a, cfg)?;
            for t in perturbation_scales() {
                let ta = a.scale(&t);
                if !check_nondegenerate(&ta) {
                    continue;
                }
                let Ok(gp) = minimal_expanding_with(&ta, cfg) else { continue };
                match minimal_shrinking_with(&ta, cfg) {
                    Ok(s) if s.same_span(&base, tol) => {}
                    _ => continue,
                }
                let e = first_adapted(&g.fan, gp, |s| validate_expanding_with(&ta, s, cfg), "expanding", tol)?;
                return Ok((e, Some(t)));
            }
            Err(ConicError::Spectral(SpectralError::UnitCircleRequired))
        }
        Err(e) => Err(e.into()),
    }
}

/// Computes both traces with valid subspaces and returns the common value.
pub fn localization_trace(g: &ConicSheaf, eta: &Equivariant) -> Result<Gq, ConicError> {
    localization_trace_with(g, eta, &LocalizationOptions::default()).map(|r| r.value)
}

pub fn localization_trace_with(
    g: &ConicSheaf,
    eta: &Equivariant,
    opts: &LocalizationOptions,
) -> Result<LocalizationReport, ConicError> {
    let a = &eta.map;
    let cfg = &opts.spectral;
    if !check_nondegenerate(a) {
        return Err(ConicError::Degenerate);
    }
    let (expanding, expanding_scale) = match &opts.expanding {
        Some(e) => {
            let e = rationalize(&g.fan, e, cfg.tolerance).unwrap_or_else(|| e.clone());
            if !validate_expanding_with(a, &e, cfg)? {
                return Err(ConicError::InvalidSubspace { side: "expanding" });
            }
            (e, None)
        }
        None => default_expanding(g, a, cfg)?,
    };
    let shrinking = match &opts.shrinking {
        Some(s) => {
            let s = rationalize(&g.fan, s, cfg.tolerance).unwrap_or_else(|| s.clone());
            if !validate_shrinking_with(a, &s, cfg)? {
                return Err(ConicError::InvalidSubspace { side: "shrinking" });
            }
            s
        }
        None => {
            let m = minimal_shrinking_with(a, cfg)?;
            first_adapted(&g.fan, m, |s| validate_shrinking_with(a, s, cfg), "shrinking", cfg.tolerance)?
        }
    };
    let e_val = trace_expanding_with(g, eta, &expanding, opts.exec)?;
    let s_val = trace_shrinking_with(g, eta, &shrinking, opts.exec)?;
    if e_val != s_val {
        return Err(ConicError::LocalizationMismatch { expanding: Box::new(e_val), shrinking: Box::new(s_val) });
    }
    Ok(LocalizationReport { value: e_val, expanding, shrinking, expanding_scale })
}

/// Traces over every valid adapted subspace on each side.
#[derive(Clone, Debug, PartialEq)]
pub struct AllPairsReport {
    pub expanding: Vec<(Subspace, Gq)>,
    pub shrinking: Vec<(Subspace, Gq)>,
    /// Scale used for the expanding side, as in [`LocalizationReport`].
    pub expanding_scale: Option<Q>,
}

impl AllPairsReport {
    /// The common value if every trace agrees.
    pub fn common_value(&self) -> Option<Gq> {
        let mut it = self.expanding.iter().chain(&self.shrinking).map(|(_, v)| v);
        let first = it.next()?.clone();
        it.all(|v| *v == first).then_some(first)
    }
}

/// Evaluates both traces on every adapted subspace valid for its side.
pub fn all_valid_pairs(g: &ConicSheaf, eta: &Equivariant, opts: &LocalizationOptions) -> Result<AllPairsReport, ConicError> {
    let a = &eta.map;
    let cfg = &opts.spectral;
    if !check_nondegenerate(a) {
        return Err(ConicError::Degenerate);
    }
    let (_, scale) = default_expanding(g, a, cfg)?;
    let ea = match &scale {
        Some(t) => a.scale(t),
        None => a.clone(),
    };
    let mut expanding = Vec::new();
    let mut shrinking = Vec::new();
    for cand in adapted_subspaces(&g.fan) {
        if validate_expanding_with(&ea, &cand, cfg)? {
            let v = trace_expanding_with(g, eta, &cand, opts.exec)?;
            expanding.push((cand.clone(), v));
        }
        if validate_shrinking_with(a, &cand, cfg)? {
            let v = trace_shrinking_with(g, eta, &cand, opts.exec)?;
            shrinking.push((cand, v));
        }
    }
    if expanding.is_empty() {
        return Err(ConicError::NoAdaptedSubspace { side: "expanding" });
    }
    if shrinking.is_empty() {
        return Err(ConicError::NoAdaptedSubspace { side: "shrinking" });
    }
    Ok(AllPairsReport { expanding, shrinking, expanding_scale: scale })
}
