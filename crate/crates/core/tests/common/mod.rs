//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use hyperloc::arith::{q, Gq, Q};
use hyperloc::charcycle::{EmbeddedCell, EmbeddedComplex};
use hyperloc::euler::{CellComplex, ConstructibleFn};
use hyperloc::matrix::QMatrix;
use num_traits::{One, Signed, Zero};
use rand::Rng;

pub fn v(c: &[i64]) -> Vec<Q> {
    c.iter().map(|&x| q(x)).collect()
}

/// `sign det(I − A)` by cofactor expansion, for `A` of size at most 3.
pub fn det_sign_oracle(a: &QMatrix) -> i64 {
    let n = a.rows();
    let m = |i: usize, j: usize| -> Q {
        let d = if i == j { Q::one() } else { Q::zero() };
        d - &a[(i, j)]
    };
    let det = match n {
        0 => Q::one(),
        1 => m(0, 0),
        2 => m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0),
        3 => {
            m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
        }
        _ => panic!("oracle supports n ≤ 3"),
    };
    if det.is_positive() {
        1
    } else if det.is_negative() {
        -1
    } else {
        0
    }
}

type P2 = [Q; 2];

fn lift(p: &[Q]) -> P2 {
    [p.first().cloned().unwrap_or_else(Q::zero), p.get(1).cloned().unwrap_or_else(Q::zero)]
}

fn cross(o: &P2, a: &P2, b: &P2) -> Q {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

/// Convex hull vertices in counter-clockwise order (monotone chain).
fn hull(mut pts: Vec<P2>) -> Vec<P2> {
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<P2> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<P2> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Sutherland–Hodgman clip of a (possibly degenerate) convex polygon by
/// the closed half-plane `n·y ≤ c`.
fn clip(poly: &[P2], n: &P2, c: &Q) -> Vec<P2> {
    let val = |p: &P2| &n[0] * &p[0] + &n[1] * &p[1];
    let mut out = Vec::new();
    for i in 0..poly.len() {
        let a = &poly[i];
        let b = &poly[(i + 1) % poly.len()];
        let (va, vb) = (val(a), val(b));
        let ina = va <= *c;
        let inb = vb <= *c;
        if ina {
            out.push(a.clone());
        }
        if ina != inb {
            let t = (c - &va) / (&vb - &va);
            out.push([&a[0] + &t * (&b[0] - &a[0]), &a[1] + &t * (&b[1] - &a[1])]);
        }
    }
    out
}

/// Möbius function `μ(f, t)` of the closure poset of `t`.
fn mobius(cx: &CellComplex, f: usize, t: usize) -> i64 {
    if f == t {
        return 1;
    }
    let between: Vec<usize> = cx.closure(t).into_iter().filter(|&g| g != f && cx.le(f, g)).collect();
    -between.iter().map(|&g| mobius(cx, g, t)).sum::<i64>()
}

/// Multiplicity `φ(x) − Σ_τ φ(τ)·χ_c(τ ∩ K)` with `x` the barycentre of
/// the stratum and `K = {‖y − x‖∞ ≤ ε, ξ·(y − x) ≤ −δ}` instantiated at
/// `ε = 2⁻¹⁶`, `δ = 2⁻³²`. Rays are truncated far outside `K`. Each
/// `χ_c(τ ∩ K)` is obtained by Möbius inversion from the emptiness of the
/// convex sets `F̄ ∩ K` over the faces `F` of `τ`, decided by exact
/// polygon clipping. Ambient dimension at most 2.
pub fn brute_force_morse(x: &EmbeddedComplex, phi: &ConstructibleFn, s: usize, xi: &[Q]) -> Gq {
    assert!(x.ambient_dim() <= 2);
    let cx = x.complex();
    let cell = x.cell(s);
    let k = Q::from_integer((cell.points.len() as i64).into());
    let mut base: P2 = [Q::zero(), Q::zero()];
    for p in &cell.points {
        let p = lift(p);
        base[0] += &p[0] / &k;
        base[1] += &p[1] / &k;
    }
    for r in &cell.rays {
        let r = lift(r);
        base[0] += &r[0];
        base[1] += &r[1];
    }
    let eps = Q::new(1.into(), (1u64 << 16).into());
    let delta = Q::new(1.into(), (1u64 << 32).into());
    let far = q(1 << 12);
    let xi = lift(xi);
    let nonempty = |f: usize| -> bool {
        let c = x.cell(f);
        let mut pts: Vec<P2> = c.points.iter().map(|p| lift(p)).collect();
        for p in &c.points {
            let p = lift(p);
            for r in &c.rays {
                let r = lift(r);
                pts.push([&p[0] + &far * &r[0], &p[1] + &far * &r[1]]);
            }
        }
        let mut poly = hull(pts);
        let planes: Vec<(P2, Q)> = vec![
            ([q(1), q(0)], &base[0] + &eps),
            ([q(-1), q(0)], -(&base[0] - &eps)),
            ([q(0), q(1)], &base[1] + &eps),
            ([q(0), q(-1)], -(&base[1] - &eps)),
            (xi.clone(), &xi[0] * &base[0] + &xi[1] * &base[1] - &delta),
        ];
        for (n, c) in &planes {
            poly = clip(&poly, n, c);
            if poly.is_empty() {
                return false;
            }
        }
        true
    };
    let meets: Vec<bool> = (0..cx.len()).map(nonempty).collect();
    let mut m = phi.value(s).clone();
    for t in 0..cx.len() {
        let chi: i64 = cx.closure(t).into_iter().filter(|&f| meets[f]).map(|f| mobius(cx, f, t)).sum();
        if chi != 0 {
            m = m - phi.value(t).scale(&Q::from_integer(chi.into()));
        }
    }
    m
}

/// Embedded complexes of dimension at most 2 used by the oracle suites.
pub fn oracle_complexes() -> Vec<(&'static str, EmbeddedComplex)> {
    let mut out = Vec::new();
    let line = CellComplex::from_faces(&[(0, vec![]), (1, vec![0]), (1, vec![0])], false).unwrap();
    let cells = vec![
        EmbeddedCell { points: vec![v(&[0])], rays: vec![] },
        EmbeddedCell { points: vec![v(&[0])], rays: vec![v(&[1])] },
        EmbeddedCell { points: vec![v(&[0])], rays: vec![v(&[-1])] },
    ];
    out.push(("real line", EmbeddedComplex::new(line, 1, cells).unwrap()));
    out.push(("interval", EmbeddedComplex::from_vertices(CellComplex::interval(), 1, &[v(&[0]), v(&[3])]).unwrap()));
    let tri = CellComplex::from_faces(
        &[(0, vec![]), (0, vec![]), (0, vec![]), (1, vec![0, 1]), (1, vec![1, 2]), (1, vec![0, 2]), (2, vec![3, 4, 5])],
        true,
    )
    .unwrap();
    out.push(("triangle", EmbeddedComplex::from_vertices(tri, 2, &[v(&[0, 0]), v(&[3, 0]), v(&[1, 2])]).unwrap()));
    for ring in [
        vec![v(&[2, 0]), v(&[0, 2]), v(&[-2, 0]), v(&[0, -2])],
        vec![v(&[2, 0]), v(&[1, 2]), v(&[-2, 1]), v(&[-2, -1]), v(&[1, -2])],
        vec![v(&[2, 0]), v(&[1, 2]), v(&[-1, 2]), v(&[-2, 0]), v(&[-1, -2]), v(&[1, -2])],
    ] {
        out.push(("fan polygon", fan_polygon(&ring, true)));
        out.push(("polygon ring", fan_polygon(&ring, false)));
    }
    out.push(("square grid", grid()));
    out.push(("plane fan", plane_fan()));
    out
}

/// Boundary ring of a polygon, optionally coned off at the origin.
fn fan_polygon(ring: &[Vec<Q>], filled: bool) -> EmbeddedComplex {
    let n = ring.len();
    let mut coords = ring.to_vec();
    let mut cells: Vec<(usize, Vec<usize>)> = (0..n).map(|_| (0, vec![])).collect();
    cells.extend((0..n).map(|j| (1, vec![j, (j + 1) % n])));
    if filled {
        coords.push(v(&[0, 0]));
        cells.push((0, vec![]));
        let c = 2 * n;
        cells.extend((0..n).map(|j| (1, vec![j, c])));
        cells.extend((0..n).map(|j| (2, vec![n + j, c + 1 + j, c + 1 + (j + 1) % n])));
    }
    let cx = CellComplex::from_faces(&cells, true).unwrap();
    let order: Vec<usize> = (0..cx.len()).filter(|&c| cx.dim(c) == 0).collect();
    let coords: Vec<Vec<Q>> = order.iter().map(|&c| if c < n { coords[c].clone() } else { coords[n].clone() }).collect();
    EmbeddedComplex::from_vertices(cx, 2, &coords).unwrap()
}

/// Unit square split into two triangles along the diagonal.
fn grid() -> EmbeddedComplex {
    let cells: Vec<(usize, Vec<usize>)> = vec![
        (0, vec![]),
        (0, vec![]),
        (0, vec![]),
        (0, vec![]),
        (1, vec![0, 1]),
        (1, vec![1, 2]),
        (1, vec![2, 3]),
        (1, vec![0, 3]),
        (1, vec![0, 2]),
        (2, vec![4, 5, 8]),
        (2, vec![6, 7, 8]),
    ];
    let cx = CellComplex::from_faces(&cells, true).unwrap();
    EmbeddedComplex::from_vertices(cx, 2, &[v(&[0, 0]), v(&[2, 0]), v(&[2, 2]), v(&[0, 2])]).unwrap()
}

/// The coordinate quadrants of the plane as unbounded cells.
fn plane_fan() -> EmbeddedComplex {
    let o = v(&[0, 0]);
    let rays = [v(&[1, 0]), v(&[0, 1]), v(&[-1, 0]), v(&[0, -1])];
    let mut cells = vec![(0, vec![])];
    let mut geo = vec![EmbeddedCell { points: vec![o.clone()], rays: vec![] }];
    for r in &rays {
        cells.push((1, vec![0]));
        geo.push(EmbeddedCell { points: vec![o.clone()], rays: vec![r.clone()] });
    }
    for j in 0..4 {
        cells.push((2, vec![1 + j, 1 + (j + 1) % 4]));
        geo.push(EmbeddedCell { points: vec![o.clone()], rays: vec![rays[j].clone(), rays[(j + 1) % 4].clone()] });
    }
    let cx = CellComplex::from_faces(&cells, false).unwrap();
    EmbeddedComplex::new(cx, 2, geo).unwrap()
}

pub fn random_int_function<R: Rng>(rng: &mut R, cx: &CellComplex) -> ConstructibleFn {
    ConstructibleFn::new(cx.clone(), (0..cx.len()).map(|_| Gq::int(rng.gen_range(-2..=2))).collect()).unwrap()
}

/// Random integer covector in the annihilator of the stratum's tangent space.
pub fn random_conormal<R: Rng>(rng: &mut R, x: &EmbeddedComplex, s: usize) -> Vec<Q> {
    let t = x.tangent_space(s);
    let basis = t.exact_basis().unwrap().to_vec();
    let m = x.ambient_dim();
    let ann: Vec<Vec<Q>> = if basis.is_empty() {
        QMatrix::identity(m).to_rows()
    } else {
        QMatrix::from_rows(basis).unwrap().nullspace()
    };
    let mut xi = vec![Q::zero(); m];
    for w in &ann {
        let c = q(rng.gen_range(-3..=3));
        for (a, b) in xi.iter_mut().zip(w) {
            *a += &c * b;
        }
    }
    xi
}

pub fn cells_of_dim(cx: &CellComplex, d: usize) -> BTreeSet<usize> {
    (0..cx.len()).filter(|&c| cx.dim(c) == d).collect()
}
