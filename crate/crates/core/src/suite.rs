//! Seeded random instances and the property checks run over them.
//!
//! Conic instances are built from direct sums of shifted, scaled indicator
//! sheaves on invariant locally closed unions of cones, followed by a random
//! change of basis on every stalk. This keeps generization and equivariance
//! maps non-diagonal while guaranteeing that both validate.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::{q, qf, Gq, Q};
use crate::conic::{all_valid_pairs, ConicError, ConicSheaf, Equivariant, LocalizationOptions};
use crate::euler::{euler_integral, CellComplex, ConstructibleFn};
use crate::fan::{cone_map_analysis, Fan};
use crate::lefschetz::{local_contribution, local_trace_function, FixedComponentModel, LefschetzError};
use crate::matrix::{GMatrix, QMatrix};
use crate::par::Exec;
use crate::spectral::{check_nondegenerate, spectrum, CirclePosition, Region};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn m2(rows: [[i64; 2]; 2]) -> QMatrix {
    QMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()).unwrap()
}

/// Fan families used by the random suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FanKind {
    Line,
    Cross,
    Triangle,
    Hexagon,
    Sectors(usize),
}

impl FanKind {
    pub fn all() -> Vec<FanKind> {
        vec![FanKind::Line, FanKind::Cross, FanKind::Triangle, FanKind::Hexagon, FanKind::Sectors(5), FanKind::Sectors(8)]
    }

    pub fn fan(self) -> Fan {
        match self {
            FanKind::Line => Fan::line(),
            FanKind::Cross => Fan::cross(),
            FanKind::Triangle => Fan::triangle(),
            FanKind::Hexagon => Fan::hexagon(),
            FanKind::Sectors(k) => Fan::sectors(k),
        }
    }

    /// Cone-compatible linear symmetries generating the map words. The first
    /// entry, when present, is the cyclic rotation-like generator.
    pub fn symmetries(self) -> Vec<QMatrix> {
        match self {
            FanKind::Line => vec![QMatrix::scalar(1, q(-1))],
            FanKind::Cross => vec![m2([[0, -1], [1, 0]]), m2([[-1, 0], [0, 1]]), m2([[0, 1], [1, 0]])],
            FanKind::Triangle => vec![m2([[0, -1], [1, -1]]), m2([[0, 1], [1, 0]])],
            FanKind::Hexagon => vec![m2([[1, -1], [1, 0]]), m2([[0, 1], [1, 0]]), m2([[-1, 0], [0, -1]])],
            FanKind::Sectors(k) if k % 2 == 0 => vec![QMatrix::scalar(2, q(-1))],
            FanKind::Sectors(_) => Vec::new(),
        }
    }

    pub fn dim(self) -> usize {
        if self == FanKind::Line {
            1
        } else {
            2
        }
    }
}

fn scale_choices() -> [Q; 3] {
    [q(2), qf(1, 2), q(1)]
}

/// A random nondegenerate cone-compatible map: a word in the fan's
/// symmetries times a diagonal of entries in `{2, 1/2, 1}` (a scalar unless
/// the fan is the cross).
pub fn random_map<R: Rng>(rng: &mut R, kind: FanKind, hyperbolic_only: bool) -> QMatrix {
    let fan = kind.fan();
    let n = kind.dim();
    let syms = kind.symmetries();
    loop {
        let mut a = QMatrix::identity(n);
        if !syms.is_empty() {
            for _ in 0..rng.gen_range(0..=3) {
                a = syms.choose(rng).unwrap().mul(&a);
            }
        }
        let choices = if hyperbolic_only { &scale_choices()[..2] } else { &scale_choices()[..] };
        let mut d = QMatrix::scalar(n, choices.choose(rng).unwrap().clone());
        if kind == FanKind::Cross {
            d[(1, 1)] = choices.choose(rng).unwrap().clone();
        }
        let a = d.mul(&a);
        if !check_nondegenerate(&a) || cone_map_analysis(&fan, &a).is_err() {
            continue;
        }
        if hyperbolic_only && spectrum(&a).eigenvalues.iter().any(|e| e.circle != CirclePosition::Inside && e.circle != CirclePosition::Outside) {
            continue;
        }
        return a;
    }
}

fn orbits(perm: &[usize]) -> Vec<BTreeSet<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut orbit = BTreeSet::new();
        let mut c = s;
        while !seen[c] {
            seen[c] = true;
            orbit.insert(c);
            c = perm[c];
        }
        out.push(orbit);
    }
    out
}

/// A nonempty locally closed union of cones invariant under `perm`.
fn random_invariant_set<R: Rng>(rng: &mut R, fan: &Fan, perm: &[usize]) -> BTreeSet<usize> {
    let orbs = orbits(perm);
    loop {
        let mut up = BTreeSet::new();
        let mut down = BTreeSet::new();
        for o in &orbs {
            if rng.gen_bool(0.4) {
                up.extend(o.iter().copied());
            }
            if rng.gen_bool(0.5) {
                down.extend(o.iter().copied());
            }
        }
        let open: BTreeSet<usize> = (0..fan.num_cones()).filter(|&c| up.iter().any(|&u| fan.is_face(u, c))).collect();
        let closed: BTreeSet<usize> = (0..fan.num_cones()).filter(|&c| down.iter().any(|&u| fan.is_face(c, u))).collect();
        let z: BTreeSet<usize> = open.intersection(&closed).copied().collect();
        if !z.is_empty() {
            return z;
        }
    }
}

fn random_invertible<R: Rng>(rng: &mut R, n: usize) -> QMatrix {
    loop {
        let m = QMatrix::from_shape(n, n, (0..n * n).map(|_| q(rng.gen_range(-2..=2))).collect());
        if !m.determinant().is_zero() {
            return m;
        }
    }
}

/// Conjugates every stalk of `(g, eta)` by an invertible matrix.
pub fn base_change(
    g: &ConicSheaf,
    eta: &Equivariant,
    p: &BTreeMap<(usize, i32), QMatrix>,
) -> Result<(ConicSheaf, Equivariant), ConicError> {
    let get = |c: usize, d: i32| -> (GMatrix, GMatrix) {
        let m = p.get(&(c, d)).cloned().unwrap_or_else(|| QMatrix::identity(g.stalk_dim(c, d)));
        let inv = m.inverse().expect("invertible base change");
        (m.to_gaussian(), inv.to_gaussian())
    };
    let generization = g
        .generization_maps()
        .iter()
        .map(|(&(a, b, d), m)| ((a, b, d), get(b, d).0.mul(m).mul(&get(a, d).1)))
        .collect();
    let g2 = ConicSheaf::new(g.fan().clone(), g.stalks().to_vec(), generization)?;
    let pi = &eta.analysis().cone_perm;
    let maps = eta
        .eta_maps()
        .iter()
        .map(|(&(c, d), m)| ((c, d), get(pi[c], d).0.mul(m).mul(&get(c, d).1)))
        .collect();
    let e2 = Equivariant::new(&g2, eta.map().clone(), maps)?;
    Ok((g2, e2))
}

#[derive(Clone, Debug)]
pub struct ConicInstance {
    pub kind: FanKind,
    pub sheaf: ConicSheaf,
    pub eta: Equivariant,
}

fn lambda_choices() -> Vec<Gq> {
    vec![Gq::int(1), Gq::int(-1), Gq::int(2), Gq::real(qf(1, 2)), Gq::new(q(1), q(1))]
}

/// One random instance; at most three summands, so every stalk has
/// dimension at most three in each degree.
pub fn random_conic_instance<R: Rng>(rng: &mut R, hyperbolic_only: bool) -> ConicInstance {
    let kinds = FanKind::all();
    let kind = *kinds.choose(rng).unwrap();
    let fan = kind.fan();
    let a = random_map(rng, kind, hyperbolic_only);
    let perm = cone_map_analysis(&fan, &a).unwrap().cone_perm;
    let lambdas = lambda_choices();
    let mut acc: Option<(ConicSheaf, Equivariant)> = None;
    for _ in 0..rng.gen_range(1..=3) {
        let z = random_invariant_set(rng, &fan, &perm);
        let g = ConicSheaf::indicator(fan.clone(), &z, 0).unwrap().shifted(rng.gen_range(-1..=1));
        let e = Equivariant::scalar(&g, a.clone(), lambdas.choose(rng).unwrap().clone()).unwrap();
        acc = Some(match acc {
            None => (g, e),
            Some((g0, e0)) => {
                let e1 = e0.direct_sum(&g0, &e, &g);
                (g0.direct_sum(&g), e1)
            }
        });
    }
    let (g, e) = acc.unwrap();
    let mut p = BTreeMap::new();
    for c in 0..fan.num_cones() {
        for (&d, &n) in &g.stalks()[c] {
            p.insert((c, d), random_invertible(rng, n));
        }
    }
    let (sheaf, eta) = base_change(&g, &e, &p).expect("base change preserves validity");
    ConicInstance { kind, sheaf, eta }
}

pub fn conic_instances(seed: u64, n: usize, hyperbolic_only: bool) -> Vec<ConicInstance> {
    let mut r = rng(seed);
    (0..n).map(|_| random_conic_instance(&mut r, hyperbolic_only)).collect()
}

/// Outcome of evaluating both traces on every valid subspace.
#[derive(Clone, Debug, PartialEq)]
pub struct PairCheck {
    pub value: Option<Gq>,
    pub expanding: usize,
    pub shrinking: usize,
    pub failure: Option<String>,
}

pub fn check_pairs(inst: &ConicInstance, opts: &LocalizationOptions) -> PairCheck {
    match all_valid_pairs(&inst.sheaf, &inst.eta, opts) {
        Err(e) => PairCheck { value: None, expanding: 0, shrinking: 0, failure: Some(e.to_string()) },
        Ok(r) => {
            let (ne, ns) = (r.expanding.len(), r.shrinking.len());
            let value = r.common_value();
            let failure = if ne == 0 || ns == 0 {
                Some("no valid subspace on one side".to_string())
            } else if value.is_none() {
                Some(format!("traces differ: {:?} vs {:?}", r.expanding, r.shrinking))
            } else {
                None
            };
            PairCheck { value, expanding: ne, shrinking: ns, failure }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteSummary {
    pub instances: usize,
    pub pairs: usize,
    pub failures: Vec<String>,
}

impl SuiteSummary {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Expanding and shrinking traces agree on every valid subspace of every
/// instance.
pub fn localization_suite(seed: u64, n: usize, exec: Exec) -> SuiteSummary {
    let insts = conic_instances(seed, n, false);
    let opts = LocalizationOptions { exec: Exec::Sequential, ..Default::default() };
    let checks = exec.map(&insts, |i| check_pairs(i, &opts));
    let pairs = checks.iter().map(|c| c.expanding * c.shrinking).sum();
    let failures = checks
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.failure.as_ref().map(|f| format!("instance {i}: {f}")))
        .collect();
    SuiteSummary { instances: n, pairs, failures }
}

fn region_code(r: Region) -> u8 {
    match r {
        Region::InUnitInterval => 0,
        Region::InsideDiskOffInterval => 1,
        Region::OutsideDisk => 2,
        Region::OnBoundaryAmbiguous => 3,
    }
}

fn circle_code(c: CirclePosition) -> u8 {
    match c {
        CirclePosition::Inside => 0,
        CirclePosition::On => 1,
        CirclePosition::Outside => 2,
        CirclePosition::Unresolved => 3,
    }
}

/// Eigenvalue classes with multiplicity, in a canonical order.
pub fn classification(a: &QMatrix) -> Vec<(u8, u8, usize)> {
    let mut v: Vec<(u8, u8, usize)> =
        spectrum(a).eigenvalues.iter().map(|e| (region_code(e.region()), circle_code(e.circle), e.multiplicity)).collect();
    v.sort_unstable();
    v
}

/// Whether `t·A` has the same eigenvalue classes as `A` on every cell.
pub fn preserves_classification(model: &FixedComponentModel, t: &Q) -> bool {
    model.cells().iter().all(|c| {
        let a = c.eta.map();
        let ta = a.scale(t);
        check_nondegenerate(&ta) && classification(a) == classification(&ta)
    })
}

pub fn perturbation_scales() -> [Q; 4] {
    [qf(1, 2), qf(2, 3), qf(3, 2), q(2)]
}

/// Local trace functions and contributions agree for every scale in
/// [`perturbation_scales`] that preserves the classification. Returns the
/// number of scales compared.
pub fn check_perturbation(model: &FixedComponentModel) -> Result<usize, String> {
    let base = local_trace_function(model).map_err(|e| e.to_string())?;
    let contribution = local_contribution(model).map_err(|e| e.to_string())?;
    let mut compared = 0;
    for t in perturbation_scales() {
        if !preserves_classification(model, &t) {
            continue;
        }
        let m = model.rescaled(&t).map_err(|e: LefschetzError| e.to_string())?;
        let theta = local_trace_function(&m).map_err(|e| e.to_string())?;
        if theta != base {
            return Err(format!("t = {t}: local trace changed"));
        }
        if local_contribution(&m).map_err(|e| e.to_string())? != contribution {
            return Err(format!("t = {t}: contribution changed"));
        }
        compared += 1;
    }
    Ok(compared)
}

/// A compact 2-complex: the closure of random triangles, edges and
/// vertices on up to seven vertices.
pub fn random_complex<R: Rng>(rng: &mut R) -> CellComplex {
    let n = rng.gen_range(3..=7);
    let mut simplices: BTreeSet<Vec<usize>> = BTreeSet::new();
    let add = |s: &mut BTreeSet<Vec<usize>>, v: Vec<usize>| {
        for mask in 1u32..(1 << v.len()) {
            let f: Vec<usize> = v.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x).collect();
            s.insert(f);
        }
    };
    for _ in 0..rng.gen_range(1..=5) {
        let mut t: Vec<usize> = (0..n).collect();
        t.shuffle(rng);
        let mut t = t[..3].to_vec();
        t.sort_unstable();
        add(&mut simplices, t);
    }
    for _ in 0..rng.gen_range(0..=3) {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        let mut e = vec![a, b];
        e.sort_unstable();
        e.dedup();
        add(&mut simplices, e);
    }
    let mut ordered: Vec<Vec<usize>> = simplices.into_iter().collect();
    ordered.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let index: BTreeMap<Vec<usize>, usize> = ordered.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let cells: Vec<(usize, Vec<usize>)> = ordered
        .iter()
        .map(|s| {
            let faces = if s.len() == 1 {
                Vec::new()
            } else {
                (0..s.len())
                    .map(|i| {
                        let mut f = s.clone();
                        f.remove(i);
                        index[&f]
                    })
                    .collect()
            };
            (s.len() - 1, faces)
        })
        .collect();
    CellComplex::from_faces(&cells, true).unwrap()
}

pub fn random_function<R: Rng>(rng: &mut R, complex: &CellComplex) -> ConstructibleFn {
    let values = (0..complex.len())
        .map(|_| Gq::new(Q::new(rng.gen_range(-4..=4).into(), rng.gen_range(1..=3).into()), q(rng.gen_range(-1..=1))))
        .collect();
    ConstructibleFn::new(complex.clone(), values).unwrap()
}

/// Linearity and subdivision invariance of the Euler integral on random
/// functions over random 2-complexes.
pub fn euler_suite(seed: u64, n: usize, exec: Exec) -> SuiteSummary {
    let mut r = rng(seed);
    let cases: Vec<(CellComplex, ConstructibleFn, ConstructibleFn, Gq, Gq)> = (0..n)
        .map(|_| {
            let cx = random_complex(&mut r);
            let f = random_function(&mut r, &cx);
            let g = random_function(&mut r, &cx);
            let a = Gq::int(r.gen_range(-3..=3));
            let b = Gq::real(qf(r.gen_range(-3..=3), 2));
            (cx, f, g, a, b)
        })
        .collect();
    let outcomes = exec.map(&cases, |(cx, f, g, a, b)| -> Result<(), String> {
        let lin = f.combine(a, g, b).map_err(|e| e.to_string())?;
        let lhs = euler_integral(&lin).map_err(|e| e.to_string())?;
        let (fi, gi) = (euler_integral(f).unwrap(), euler_integral(g).unwrap());
        if lhs != a * &fi + b * &gi {
            return Err("linearity".into());
        }
        let (sd, parent) = cx.barycentric_subdivision();
        let pulled = f.pull_back(sd, &parent).map_err(|e| e.to_string())?;
        if euler_integral(&pulled).map_err(|e| e.to_string())? != fi {
            return Err("subdivision".into());
        }
        Ok(())
    });
    let failures =
        outcomes.iter().enumerate().filter_map(|(i, o)| o.as_ref().err().map(|e| format!("case {i}: {e}"))).collect();
    SuiteSummary { instances: n, pairs: n, failures }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances_are_deterministic_and_valid() {
        let a = conic_instances(7, 10, false);
        let b = conic_instances(7, 10, false);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.sheaf, y.sheaf);
            assert_eq!(x.eta, y.eta);
            assert!(x.sheaf.stalks().iter().all(|g| g.values().all(|&n| n <= 3)));
        }
    }

    #[test]
    fn small_suites_pass() {
        let s = localization_suite(1, 20, Exec::Parallel);
        assert!(s.pass(), "{:?}", s.failures);
        let e = euler_suite(1, 20, Exec::Sequential);
        assert!(e.pass(), "{:?}", e.failures);
    }

    #[test]
    fn orbit_decomposition() {
        let o = orbits(&[1, 2, 0, 3]);
        assert_eq!(o.len(), 2);
        assert_eq!(o[0], BTreeSet::from([0, 1, 2]));
    }
}
