//! Exact and certified spectral analysis of rational matrices.
//!
//! The characteristic polynomial is computed exactly and split by Yun's
//! square-free decomposition; rational roots are peeled off exactly. Real
//! irrational roots are located by Sturm sequences, so their position against
//! `-1`, `0` and `1` is always decided. Non-real roots are enclosed in
//! Gerschgorin discs built from Weierstrass corrections and refined by
//! rational Durand–Kerner steps; the number of non-real roots on the unit
//! circle is counted exactly beforehand, so a disc that cannot be separated
//! from the circle is only labelled unresolved when the count demands it.
//!
//! Invariant subspaces for a spectral region are exact kernels `ker q(A)`
//! whenever every factor of the characteristic polynomial lies wholly inside
//! or wholly outside the region; otherwise they are computed numerically and
//! carry their invariance residual.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::arith::{q, q_to_f64, Gq, Q};
use crate::matrix::{Matrix, QMatrix};
use crate::poly::{charpoly, Bound, Poly, Sturm};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralConfig {
    /// Relative invariance residual accepted for numerical subspaces.
    pub tolerance: f64,
    /// Refinement rounds before a disc is reported unresolved.
    pub max_refinements: u32,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig { tolerance: 1e-9, max_refinements: 64 }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectralError {
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("1 is an eigenvalue: det(I - A) = 0")]
    Degenerate,
    #[error("an eigenvalue enclosure could not be separated from the unit circle or [0,1]")]
    BoundaryAmbiguous,
    #[error("an eigenvalue lies on the unit circle; the minimal expanding subspace is undefined")]
    UnitCircleRequired,
    #[error("subspace has ambient dimension {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("numerical invariant subspace residual {residual:e} exceeds tolerance {tolerance:e}")]
    Residual { residual: f64, tolerance: f64 },
}

/// Classification against `[0,1]` and the unit circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Region {
    InUnitInterval,
    InsideDiskOffInterval,
    OutsideDisk,
    OnBoundaryAmbiguous,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CirclePosition {
    Inside,
    On,
    Outside,
    Unresolved,
}

/// Position of a real eigenvalue relative to `-1`, `0`, `1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RealPosition {
    BelowMinusOne,
    MinusOne,
    MinusOneToZero,
    Zero,
    ZeroToOne,
    One,
    AboveOne,
}

impl RealPosition {
    fn circle(self) -> CirclePosition {
        match self {
            RealPosition::BelowMinusOne | RealPosition::AboveOne => CirclePosition::Outside,
            RealPosition::MinusOne | RealPosition::One => CirclePosition::On,
            _ => CirclePosition::Inside,
        }
    }

    fn of(x: &Q) -> RealPosition {
        let one = Q::one();
        if *x < -one.clone() {
            RealPosition::BelowMinusOne
        } else if *x == -one.clone() {
            RealPosition::MinusOne
        } else if x.is_negative() {
            RealPosition::MinusOneToZero
        } else if x.is_zero() {
            RealPosition::Zero
        } else if *x < one {
            RealPosition::ZeroToOne
        } else if *x == one {
            RealPosition::One
        } else {
            RealPosition::AboveOne
        }
    }
}

/// One distinct eigenvalue: a disc `|z - center| ≤ radius` containing it.
#[derive(Clone, Debug, PartialEq)]
pub struct Eigenvalue {
    pub center: Gq,
    pub radius: Q,
    pub multiplicity: usize,
    /// `None` for certified non-real eigenvalues, and for enclosures that
    /// could not be certified at all.
    pub real: Option<RealPosition>,
    pub circle: CirclePosition,
    /// Set when the eigenvalue is rational.
    pub exact: Option<Q>,
}

impl Eigenvalue {
    pub fn region(&self) -> Region {
        match (self.real, self.circle) {
            (Some(p), _) => match p {
                RealPosition::Zero | RealPosition::ZeroToOne | RealPosition::One => {
                    Region::InUnitInterval
                }
                RealPosition::MinusOneToZero => Region::InsideDiskOffInterval,
                RealPosition::BelowMinusOne | RealPosition::AboveOne => Region::OutsideDisk,
                RealPosition::MinusOne => Region::OnBoundaryAmbiguous,
            },
            (None, CirclePosition::Inside) => Region::InsideDiskOffInterval,
            (None, CirclePosition::Outside) => Region::OutsideDisk,
            (None, _) => Region::OnBoundaryAmbiguous,
        }
    }

    pub fn in_unit_interval(&self) -> bool {
        matches!(
            self.real,
            Some(RealPosition::Zero | RealPosition::ZeroToOne | RealPosition::One)
        )
    }

    /// Whether the eigenvalue lies in `[1, ∞)`.
    pub fn at_least_one(&self) -> bool {
        matches!(self.real, Some(RealPosition::One | RealPosition::AboveOne))
    }

    /// `|λ| > 1`; `Err` when the enclosure is unresolved.
    pub fn outside_disk(&self) -> Result<bool, SpectralError> {
        match self.circle {
            CirclePosition::Outside => Ok(true),
            CirclePosition::Inside | CirclePosition::On => Ok(false),
            CirclePosition::Unresolved => Err(SpectralError::BoundaryAmbiguous),
        }
    }

    /// `|λ| < 1`; `Err` when the enclosure is unresolved.
    pub fn inside_disk(&self) -> Result<bool, SpectralError> {
        match self.circle {
            CirclePosition::Inside => Ok(true),
            CirclePosition::Outside | CirclePosition::On => Ok(false),
            CirclePosition::Unresolved => Err(SpectralError::BoundaryAmbiguous),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumReport {
    pub dim: usize,
    pub eigenvalues: Vec<Eigenvalue>,
}

impl SpectrumReport {
    pub fn total_multiplicity(&self) -> usize {
        self.eigenvalues.iter().map(|e| e.multiplicity).sum()
    }

    pub fn has_unit_circle_eigenvalue(&self) -> bool {
        self.eigenvalues.iter().any(|e| e.circle == CirclePosition::On)
    }

    pub fn is_ambiguous(&self) -> bool {
        self.eigenvalues.iter().any(|e| e.circle == CirclePosition::Unresolved)
    }

    /// Total multiplicity of eigenvalues satisfying `pred`.
    pub fn count<F>(&self, pred: F) -> Result<usize, SpectralError>
    where
        F: Fn(&Eigenvalue) -> Result<bool, SpectralError>,
    {
        let mut n = 0;
        for e in &self.eigenvalues {
            if pred(e)? {
                n += e.multiplicity;
            }
        }
        Ok(n)
    }
}

/// A linear subspace of `ℚ^r` (exact) or `ℝ^r` (numerical).
#[derive(Clone, Debug, PartialEq)]
pub enum Subspace {
    /// Basis in reduced row echelon form, so equal spans compare equal.
    Exact { ambient: usize, basis: Vec<Vec<Q>> },
    /// Orthonormal basis with the relative invariance residual it was
    /// certified against.
    Float { ambient: usize, basis: Vec<Vec<f64>>, residual: f64 },
}

impl Subspace {
    pub fn span(ambient: usize, vectors: &[Vec<Q>]) -> Subspace {
        assert!(vectors.iter().all(|v| v.len() == ambient));
        if vectors.is_empty() {
            return Subspace::zero(ambient);
        }
        let m = Matrix::from_rows(vectors.to_vec()).expect("rectangular");
        let (r, piv) = m.rref();
        let basis = (0..piv.len()).map(|i| r.row(i).to_vec()).collect();
        Subspace::Exact { ambient, basis }
    }

    pub fn zero(ambient: usize) -> Subspace {
        Subspace::Exact { ambient, basis: Vec::new() }
    }

    pub fn whole(ambient: usize) -> Subspace {
        Subspace::Exact { ambient, basis: Matrix::<Q>::identity(ambient).to_rows() }
    }

    pub fn ambient(&self) -> usize {
        match self {
            Subspace::Exact { ambient, .. } | Subspace::Float { ambient, .. } => *ambient,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Subspace::Exact { basis, .. } => basis.len(),
            Subspace::Float { basis, .. } => basis.len(),
        }
    }

    pub fn exact_basis(&self) -> Option<&[Vec<Q>]> {
        match self {
            Subspace::Exact { basis, .. } => Some(basis),
            Subspace::Float { .. } => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Subspace::Exact { .. })
    }

    /// Orthonormal floating-point basis.
    pub fn float_basis(&self) -> Vec<Vec<f64>> {
        match self {
            Subspace::Float { basis, .. } => basis.clone(),
            Subspace::Exact { ambient, basis } => {
                if basis.is_empty() {
                    return Vec::new();
                }
                let m = DMatrix::from_fn(*ambient, basis.len(), |i, j| q_to_f64(&basis[j][i]));
                let qr = m.qr().q();
                (0..basis.len()).map(|j| qr.column(j).iter().copied().collect()).collect()
            }
        }
    }

    /// Exact membership for exact subspaces; relative distance `≤ tol` for
    /// numerical ones.
    pub fn contains_vector(&self, v: &[Q], tol: f64) -> bool {
        match self {
            Subspace::Exact { basis, .. } => {
                let mut rows = basis.clone();
                rows.push(v.to_vec());
                Matrix::from_rows(rows).unwrap().rank() == basis.len()
            }
            Subspace::Float { .. } => {
                let vf: Vec<f64> = v.iter().map(q_to_f64).collect();
                float_distance(&self.float_basis(), &vf) <= tol * norm(&vf).max(1e-300)
            }
        }
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Subspace, tol: f64) -> bool {
        match other {
            Subspace::Exact { basis, .. } => basis.iter().all(|v| self.contains_vector(v, tol)),
            Subspace::Float { basis, .. } => {
                let mine = self.float_basis();
                basis.iter().all(|v| float_distance(&mine, v) <= tol.sqrt())
            }
        }
    }

    pub fn same_span(&self, other: &Subspace, tol: f64) -> bool {
        self.dim() == other.dim() && self.contains(other, tol)
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Distance from `v` to the span of an orthonormal basis.
fn float_distance(onb: &[Vec<f64>], v: &[f64]) -> f64 {
    let mut r = v.to_vec();
    for b in onb {
        let c: f64 = b.iter().zip(v).map(|(x, y)| x * y).sum();
        for (ri, bi) in r.iter_mut().zip(b) {
            *ri -= c * bi;
        }
    }
    norm(&r)
}

/// `det(I - A) ≠ 0`, exactly.
pub fn check_nondegenerate(a: &QMatrix) -> bool {
    assert!(a.is_square());
    !Matrix::identity(a.rows()).sub(a).determinant().is_zero()
}

/// A factor of the characteristic polynomial with its roots.
#[derive(Clone, Debug)]
struct Factor {
    poly: Poly,
    roots: Vec<Eigenvalue>,
}

/// Full spectral analysis of a polynomial.
fn analyze(p: &Poly, cfg: &SpectralConfig) -> Vec<Factor> {
    let mut out = Vec::new();
    for (s, m) in p.squarefree_factors() {
        let (rational, rest) = split_rational_roots(&s);
        for r in rational {
            let pos = RealPosition::of(&r);
            out.push(Factor {
                poly: Poly::linear(r.clone()),
                roots: vec![Eigenvalue {
                    center: Gq::real(r.clone()),
                    radius: Q::zero(),
                    multiplicity: m,
                    real: Some(pos),
                    circle: pos.circle(),
                    exact: Some(r),
                }],
            });
        }
        if rest.degree() > 0 {
            let roots = irrational_roots(&rest, m, cfg);
            out.push(Factor { poly: rest, roots });
        }
    }
    out
}

/// Simplest rational (least denominator) in the closed interval `[a, b]`.
fn simplest_rational(a: &Q, b: &Q) -> Q {
    debug_assert!(a <= b);
    if !a.is_positive() && !b.is_negative() {
        return Q::zero();
    }
    if b.is_negative() {
        return -simplest_rational(&-b.clone(), &-a.clone());
    }
    let fl = a.floor();
    if fl == *a {
        return a.clone();
    }
    if &fl + Q::one() <= *b {
        return fl + Q::one();
    }
    let lo = (b - &fl).recip();
    let hi = (a - &fl).recip();
    fl + simplest_rational(&lo, &hi).recip()
}

/// Splits off the rational roots of a monic square-free polynomial.
fn split_rational_roots(s: &Poly) -> (Vec<Q>, Poly) {
    // Denominators of rational roots divide the leading coefficient of the
    // primitive integer multiple; isolate to width below 1/lc² so the
    // simplest rational in an interval is the only candidate.
    let lcm = s
        .coeffs()
        .iter()
        .fold(num_bigint::BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
    let ints: Vec<num_bigint::BigInt> =
        s.coeffs().iter().map(|c| (c * Q::from_integer(lcm.clone())).to_integer()).collect();
    let content = ints.iter().fold(num_bigint::BigInt::zero(), |acc, c| num_integer::Integer::gcd(&acc, c));
    let lc = Q::from_integer(ints.last().unwrap() / content).abs();
    let width = (&lc * &lc * q(2)).recip();
    let sturm = Sturm::new(s);
    let bound = s.root_bound();
    let mut roots = Vec::new();
    for (lo, hi) in sturm.isolate(&-bound.clone(), &bound, &width) {
        let cand = if lo == hi { lo } else { simplest_rational(&lo, &hi) };
        if s.eval(&cand).is_zero() {
            roots.push(cand);
        }
    }
    let mut rest = s.clone();
    for r in &roots {
        rest = rest.div_rem(&Poly::linear(r.clone())).0;
    }
    (roots, rest)
}

/// Number of non-real roots on the unit circle of a square-free polynomial
/// with no rational roots.
fn nonreal_on_circle(s: &Poly) -> usize {
    let g = s.gcd(&s.reversed());
    if g.degree() == 0 {
        return 0;
    }
    // Roots of g are closed under z ↦ 1/z, exclude ±1, and so g is
    // palindromic of even degree 2m: g(z) = z^m · h(z + 1/z).
    let m = g.degree() / 2;
    let c = g.coeffs();
    let w = Poly::new(vec![Q::zero(), Q::one()]);
    let mut t_prev = Poly::new(vec![q(2)]);
    let mut t_cur = w.clone();
    let mut h = Poly::new(vec![c[m].clone()]);
    for k in 1..=m {
        if k > 1 {
            let next = w.mul(&t_cur).sub(&t_prev);
            t_prev = std::mem::replace(&mut t_cur, next);
        }
        h = h.add(&t_cur.mul(&Poly::new(vec![c[m + k].clone()])));
    }
    // z on the circle and non-real ⇔ w = 2cos θ ∈ (-2, 2).
    let mut pairs = 0;
    for (f, _) in h.squarefree_factors() {
        pairs += Sturm::new(&f).count(&Bound::At(q(-2)), &Bound::At(q(2)));
        if f.eval(&q(2)).is_zero() {
            pairs -= 1;
        }
    }
    2 * pairs
}

fn irrational_roots(s: &Poly, mult: usize, cfg: &SpectralConfig) -> Vec<Eigenvalue> {
    let sturm = Sturm::new(s);
    let bound = s.root_bound();
    let width = Q::new(1.into(), num_bigint::BigInt::one() << 40u32);
    let segments = [
        (-bound.clone(), q(-1), RealPosition::BelowMinusOne),
        (q(-1), q(0), RealPosition::MinusOneToZero),
        (q(0), q(1), RealPosition::ZeroToOne),
        (q(1), bound.clone(), RealPosition::AboveOne),
    ];
    let mut roots = Vec::new();
    for (a, b, pos) in segments {
        for (lo, hi) in sturm.isolate(&a, &b, &width) {
            roots.push(Eigenvalue {
                center: Gq::real((&lo + &hi) / q(2)),
                radius: (&hi - &lo) / q(2),
                multiplicity: mult,
                real: Some(pos),
                circle: pos.circle(),
                exact: None,
            });
        }
    }
    let n_real = roots.len();
    if n_real < s.degree() {
        let n_circle = nonreal_on_circle(s);
        roots.extend(certify_nonreal(s, n_real, n_circle, mult, cfg));
    }
    roots
}

/// Rational upper bound on `sqrt(x)`.
fn sqrt_upper(x: &Q) -> Q {
    if x.is_zero() {
        return Q::zero();
    }
    let f = q_to_f64(x).sqrt();
    let mut r = if f > 0.0 && f.is_finite() {
        Q::from_float(f * (1.0 + 1e-12)).unwrap()
    } else {
        Q::new(1.into(), num_bigint::BigInt::one() << 600u32)
    };
    while &r * &r < *x {
        r *= q(2);
    }
    r
}

struct Disc {
    center: Gq,
    radius: Q,
}

fn gerschgorin_discs(s: &Poly, z: &[Gq]) -> Option<Vec<Disc>> {
    let d = z.len();
    let lc = Gq::real(s.leading());
    let mut out = Vec::with_capacity(d);
    for i in 0..d {
        let mut den = lc.clone();
        for j in 0..d {
            if i != j {
                den = &den * &(&z[i] - &z[j]);
            }
        }
        let w = &s.eval_gq(&z[i]) * &den.inv()?;
        let radius = sqrt_upper(&w.norm_sqr()) * q(d as i64 - 1);
        out.push(Disc { center: &z[i] - &w, radius });
    }
    Some(out)
}

fn disc_circle(d: &Disc) -> CirclePosition {
    let n = d.center.norm_sqr();
    let one = Q::one();
    if d.radius < one && n < (&one - &d.radius) * (&one - &d.radius) {
        CirclePosition::Inside
    } else if n > (&one + &d.radius) * (&one + &d.radius) {
        CirclePosition::Outside
    } else {
        CirclePosition::Unresolved
    }
}

fn certify_nonreal(
    s: &Poly,
    n_real: usize,
    n_circle: usize,
    mult: usize,
    cfg: &SpectralConfig,
) -> Vec<Eigenvalue> {
    let d = s.degree();
    let want = d - n_real;
    let mut bits = 64u32;
    let mut z: Vec<Gq> = initial_roots(s)
        .into_iter()
        .map(|c| Gq::from_c64_dyadic(c, bits).unwrap_or_else(|| Gq::int(0)))
        .collect();
    let mut last: Vec<Eigenvalue> = Vec::new();
    for round in 0..=cfg.max_refinements {
        separate(&mut z, bits);
        let Some(discs) = gerschgorin_discs(s, &z) else {
            continue;
        };
        let disjoint = (0..d).all(|i| {
            (i + 1..d).all(|j| {
                let gap = (&discs[i].center - &discs[j].center).norm_sqr();
                let r = &discs[i].radius + &discs[j].radius;
                gap > &r * &r
            })
        });
        let offaxis: Vec<&Disc> = discs
            .iter()
            .filter(|c| c.center.im.clone() * c.center.im.clone() > &c.radius * &c.radius)
            .collect();
        if disjoint && offaxis.len() == want {
            let pos: Vec<CirclePosition> = offaxis.iter().map(|c| disc_circle(c)).collect();
            let unresolved = pos.iter().filter(|&&p| p == CirclePosition::Unresolved).count();
            let settled = unresolved == n_circle;
            last = offaxis
                .iter()
                .zip(&pos)
                .map(|(c, &p)| Eigenvalue {
                    center: c.center.clone(),
                    radius: c.radius.clone(),
                    multiplicity: mult,
                    real: None,
                    circle: if settled && p == CirclePosition::Unresolved {
                        CirclePosition::On
                    } else {
                        p
                    },
                    exact: None,
                })
                .collect();
            if settled {
                return last;
            }
        }
        if round == cfg.max_refinements {
            break;
        }
        z = discs.iter().map(|c| c.center.round_dyadic(bits)).collect();
        bits = (bits * 2).min(4096);
    }
    if last.len() == want {
        return last;
    }
    // No certified separation: report the approximations as unresolved.
    z.iter()
        .filter(|c| !c.im.is_zero())
        .take(want)
        .map(|c| Eigenvalue {
            center: c.clone(),
            radius: Q::one(),
            multiplicity: mult,
            real: None,
            circle: CirclePosition::Unresolved,
            exact: None,
        })
        .collect()
}

/// Nudges coinciding approximations apart so Weierstrass corrections exist.
fn separate(z: &mut [Gq], bits: u32) {
    let eps = Q::new(1.into(), num_bigint::BigInt::one() << bits);
    for i in 0..z.len() {
        while (0..i).any(|j| z[j] == z[i]) {
            z[i] = &z[i] + &Gq::new(eps.clone(), eps.clone() * q(i as i64 + 1));
        }
    }
}

/// Floating-point roots via companion-matrix eigenvalues.
fn initial_roots(s: &Poly) -> Vec<Complex64> {
    let d = s.degree();
    let m = s.monic();
    let c = m.coeffs();
    let comp = DMatrix::from_fn(d, d, |i, j| {
        if j == d - 1 {
            -q_to_f64(&c[i])
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let mut z: Vec<Complex64> = comp.complex_eigenvalues().iter().copied().collect();
    // Nudge real approximations off the axis so conjugate pairs can split.
    for (k, v) in z.iter_mut().enumerate() {
        if v.im == 0.0 {
            v.im = 1e-3 * (k as f64 + 1.0);
        }
    }
    z
}

/// Certified eigenvalue enclosures with multiplicities.
pub fn spectrum(a: &QMatrix) -> SpectrumReport {
    spectrum_with(a, &SpectralConfig::default())
}

pub fn spectrum_with(a: &QMatrix, cfg: &SpectralConfig) -> SpectrumReport {
    assert!(a.is_square());
    let eigenvalues = analyze(&charpoly(a), cfg).into_iter().flat_map(|f| f.roots).collect();
    SpectrumReport { dim: a.rows(), eigenvalues }
}

fn square(a: &QMatrix) -> Result<(), SpectralError> {
    if a.is_square() {
        Ok(())
    } else {
        Err(SpectralError::NotSquare(a.rows(), a.cols()))
    }
}

/// Sum of generalized eigenspaces of eigenvalues selected by `pred`.
/// `pred` must be invariant under complex conjugation.
pub fn invariant_subspace<F>(
    a: &QMatrix,
    cfg: &SpectralConfig,
    pred: F,
) -> Result<Subspace, SpectralError>
where
    F: Fn(&Eigenvalue) -> Result<bool, SpectralError>,
{
    square(a)?;
    let n = a.rows();
    let factors = analyze(&charpoly(a), cfg);
    let mut exact_q = Poly::one();
    let mut mixed = false;
    for f in &factors {
        let sel: Vec<bool> = f.roots.iter().map(&pred).collect::<Result<_, _>>()?;
        let mult = f.roots[0].multiplicity;
        if sel.iter().all(|&b| b) {
            exact_q = exact_q.mul(&f.poly.pow(mult));
        } else if sel.iter().any(|&b| b) {
            mixed = true;
        }
    }
    if !mixed {
        let k = exact_q.eval_matrix(a);
        return Ok(Subspace::span(n, &k.nullspace()));
    }
    let chosen: Vec<&Eigenvalue> = factors
        .iter()
        .flat_map(|f| f.roots.iter())
        .filter(|e| pred(e).unwrap_or(false))
        .collect();
    float_invariant(a, &chosen, cfg)
}

fn float_invariant(
    a: &QMatrix,
    chosen: &[&Eigenvalue],
    cfg: &SpectralConfig,
) -> Result<Subspace, SpectralError> {
    let n = a.rows();
    let af = a.to_f64();
    let id = DMatrix::<f64>::identity(n, n);
    let mut p = id.clone();
    let mut k = 0;
    for e in chosen {
        let c = e.center.to_c64();
        let factor = if e.real.is_some() {
            k += e.multiplicity;
            &af - &id * c.re
        } else if c.im > 0.0 {
            k += 2 * e.multiplicity;
            &af * &af - &af * (2.0 * c.re) + &id * c.norm_sqr()
        } else {
            continue;
        };
        for _ in 0..e.multiplicity {
            p = &p * &factor;
        }
    }
    let basis = smallest_right_singular(&p, k);
    let residual = invariance_residual(&af, &basis);
    if residual > cfg.tolerance {
        return Err(SpectralError::Residual { residual, tolerance: cfg.tolerance });
    }
    Ok(Subspace::Float { ambient: n, basis, residual })
}

fn smallest_right_singular(p: &DMatrix<f64>, k: usize) -> Vec<Vec<f64>> {
    let n = p.ncols();
    if k == 0 {
        return Vec::new();
    }
    let svd = p.clone().svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    let mut basis: Vec<Vec<f64>> =
        idx.iter().take(k).map(|&i| vt.row(i).iter().copied().collect()).collect();
    // Square inputs always have n singular values; pad defensively.
    basis.truncate(n);
    basis
}

/// `max ‖A v − Π(A v)‖ / (‖A‖ ‖v‖)` over an orthonormal basis.
fn invariance_residual(a: &DMatrix<f64>, basis: &[Vec<f64>]) -> f64 {
    let an = a.norm().max(1e-300);
    basis
        .iter()
        .map(|v| {
            let av: Vec<f64> = (0..a.nrows())
                .map(|i| (0..a.ncols()).map(|j| a[(i, j)] * v[j]).sum())
                .collect();
            float_distance(basis, &av) / an
        })
        .fold(0.0, f64::max)
}

/// `(gplus, gminus)`: generalized eigenspaces for `|λ| > 1` and `|λ| < 1`.
pub fn split_unit_circle(a: &QMatrix) -> Result<(Subspace, Subspace), SpectralError> {
    split_unit_circle_with(a, &SpectralConfig::default())
}

pub fn split_unit_circle_with(
    a: &QMatrix,
    cfg: &SpectralConfig,
) -> Result<(Subspace, Subspace), SpectralError> {
    square(a)?;
    let rep = spectrum_with(a, cfg);
    if rep.is_ambiguous() || rep.has_unit_circle_eigenvalue() {
        return Err(SpectralError::BoundaryAmbiguous);
    }
    let plus = invariant_subspace(a, cfg, |e| e.outside_disk())?;
    let minus = invariant_subspace(a, cfg, |e| e.inside_disk())?;
    Ok((plus, minus))
}

/// Generalized eigenspace for eigenvalues in `[0,1]`.
pub fn minimal_shrinking(a: &QMatrix) -> Result<Subspace, SpectralError> {
    minimal_shrinking_with(a, &SpectralConfig::default())
}

pub fn minimal_shrinking_with(a: &QMatrix, cfg: &SpectralConfig) -> Result<Subspace, SpectralError> {
    square(a)?;
    if !check_nondegenerate(a) {
        return Err(SpectralError::Degenerate);
    }
    invariant_subspace(a, cfg, |e| Ok(e.in_unit_interval()))
}

/// Generalized eigenspace for `|λ| > 1`; requires no unit-circle eigenvalue.
pub fn minimal_expanding(a: &QMatrix) -> Result<Subspace, SpectralError> {
    minimal_expanding_with(a, &SpectralConfig::default())
}

pub fn minimal_expanding_with(a: &QMatrix, cfg: &SpectralConfig) -> Result<Subspace, SpectralError> {
    square(a)?;
    if !check_nondegenerate(a) {
        return Err(SpectralError::Degenerate);
    }
    let rep = spectrum_with(a, cfg);
    if rep.has_unit_circle_eigenvalue() {
        return Err(SpectralError::UnitCircleRequired);
    }
    if rep.is_ambiguous() {
        return Err(SpectralError::BoundaryAmbiguous);
    }
    invariant_subspace(a, cfg, |e| e.outside_disk())
}

/// Exact restriction of `A` to an invariant exact subspace, in the given
/// basis; `None` if the subspace is not invariant.
pub fn restrict(a: &QMatrix, basis: &[Vec<Q>]) -> Option<QMatrix> {
    let n = a.rows();
    let k = basis.len();
    if k == 0 {
        return Some(QMatrix::zeros(0, 0));
    }
    let b = Matrix::from_columns(n, basis);
    let mut cols = Vec::with_capacity(k);
    for v in basis {
        cols.push(b.solve(&a.apply(v))?);
    }
    Some(Matrix::from_columns(k, &cols))
}

/// Spectrum of `A` restricted to an invariant subspace, or `None` if not
/// invariant.
fn restricted_spectrum(
    a: &QMatrix,
    s: &Subspace,
    cfg: &SpectralConfig,
) -> Result<Option<SpectrumReport>, SpectralError> {
    if s.ambient() != a.rows() {
        return Err(SpectralError::DimensionMismatch { expected: a.rows(), got: s.ambient() });
    }
    match s {
        Subspace::Exact { basis, .. } => Ok(restrict(a, basis).map(|c| spectrum_with(&c, cfg))),
        Subspace::Float { basis, .. } => {
            let af = a.to_f64();
            if invariance_residual(&af, basis) > cfg.tolerance {
                return Ok(None);
            }
            Ok(Some(float_restricted_spectrum(&af, basis)))
        }
    }
}

/// Numerical spectrum of `Vᵀ A V`; eigenvalues within `1e-6` of the
/// decision boundaries are unresolved.
fn float_restricted_spectrum(a: &DMatrix<f64>, basis: &[Vec<f64>]) -> SpectrumReport {
    let n = a.nrows();
    let k = basis.len();
    let v = DMatrix::from_fn(n, k, |i, j| basis[j][i]);
    let c = v.transpose() * a * &v;
    let margin = 1e-6;
    let eigenvalues = c
        .complex_eigenvalues()
        .iter()
        .map(|z| {
            let r = z.norm();
            let circle = if (r - 1.0).abs() <= margin {
                CirclePosition::Unresolved
            } else if r < 1.0 {
                CirclePosition::Inside
            } else {
                CirclePosition::Outside
            };
            let real = if z.im.abs() > margin {
                None
            } else {
                let x = z.re;
                let near = |t: f64| (x - t).abs() <= margin;
                if near(-1.0) || near(0.0) || near(1.0) {
                    // Unresolved positions near split points.
                    return Eigenvalue {
                        center: Gq::from_c64_dyadic(*z, 40).unwrap_or_default(),
                        radius: Q::from_float(margin).unwrap(),
                        multiplicity: 1,
                        real: None,
                        circle: CirclePosition::Unresolved,
                        exact: None,
                    };
                }
                Some(RealPosition::of(&Q::from_float(x).unwrap()))
            };
            Eigenvalue {
                center: Gq::from_c64_dyadic(*z, 40).unwrap_or_default(),
                radius: Q::from_float(margin).unwrap(),
                multiplicity: 1,
                real,
                circle,
                exact: None,
            }
        })
        .collect();
    SpectrumReport { dim: k, eigenvalues }
}

fn unresolved_real(e: &Eigenvalue) -> bool {
    e.real.is_none() && e.circle == CirclePosition::Unresolved
}

/// Shrinking-subspace conditions: invariance, containing the minimal
/// shrinking subspace, and no eigenvalue in `[1, ∞)`.
pub fn validate_shrinking(a: &QMatrix, s: &Subspace) -> Result<bool, SpectralError> {
    validate_shrinking_with(a, s, &SpectralConfig::default())
}

pub fn validate_shrinking_with(
    a: &QMatrix,
    s: &Subspace,
    cfg: &SpectralConfig,
) -> Result<bool, SpectralError> {
    square(a)?;
    if !check_nondegenerate(a) {
        return Err(SpectralError::Degenerate);
    }
    let Some(sub) = restricted_spectrum(a, s, cfg)? else {
        return Ok(false);
    };
    if sub.eigenvalues.iter().any(unresolved_real) {
        return Err(SpectralError::BoundaryAmbiguous);
    }
    if sub.eigenvalues.iter().any(Eigenvalue::at_least_one) {
        return Ok(false);
    }
    let full = spectrum_with(a, cfg);
    let need = full.count(|e| Ok(e.in_unit_interval()))?;
    let have = sub.count(|e| Ok(e.in_unit_interval()))?;
    Ok(have == need)
}

/// Expanding-subspace conditions: invariance, containing `gplus`, and no
/// eigenvalue in `[0, 1]`.
pub fn validate_expanding(a: &QMatrix, e: &Subspace) -> Result<bool, SpectralError> {
    validate_expanding_with(a, e, &SpectralConfig::default())
}

pub fn validate_expanding_with(
    a: &QMatrix,
    e: &Subspace,
    cfg: &SpectralConfig,
) -> Result<bool, SpectralError> {
    square(a)?;
    if !check_nondegenerate(a) {
        return Err(SpectralError::Degenerate);
    }
    let full = spectrum_with(a, cfg);
    if full.has_unit_circle_eigenvalue() {
        return Err(SpectralError::UnitCircleRequired);
    }
    let Some(sub) = restricted_spectrum(a, e, cfg)? else {
        return Ok(false);
    };
    if sub.eigenvalues.iter().any(unresolved_real) {
        return Err(SpectralError::BoundaryAmbiguous);
    }
    if sub.eigenvalues.iter().any(Eigenvalue::in_unit_interval) {
        return Ok(false);
    }
    let need = full.count(Eigenvalue::outside_disk)?;
    let have = sub.count(Eigenvalue::outside_disk)?;
    Ok(have == need)
}
