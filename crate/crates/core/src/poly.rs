//! Univariate polynomials over ℚ: arithmetic, square-free decomposition and
//! Sturm sequences for exact real-root counting.

use num_traits::{One, Signed, Zero};

use crate::arith::{Gq, Q};
use crate::matrix::QMatrix;

/// Coefficients from the constant term upward; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Poly(Vec<Q>);

/// A real endpoint for root counting.
#[derive(Clone, Debug, PartialEq)]
pub enum Bound {
    NegInf,
    At(Q),
    PosInf,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn one() -> Self {
        Poly(vec![Q::one()])
    }

    /// `x - r`
    pub fn linear(r: Q) -> Self {
        Poly::new(vec![-r, Q::one()])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Q {
        self.0.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        Poly::new(self.0.iter().map(|c| c / &lc).collect())
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.0.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_gq(&self, z: &Gq) -> Gq {
        self.0
            .iter()
            .rev()
            .fold(Gq::real(Q::zero()), |acc, c| &(&acc * z) + &Gq::real(c.clone()))
    }

    pub fn eval_c64(&self, z: num_complex::Complex64) -> num_complex::Complex64 {
        self.0.iter().rev().fold(num_complex::Complex64::new(0.0, 0.0), |acc, c| {
            acc * z + crate::arith::q_to_f64(c)
        })
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, a: &QMatrix) -> QMatrix {
        let n = a.rows();
        let mut acc = QMatrix::zeros(n, n);
        for c in self.0.iter().rev() {
            acc = acc.mul(a).add(&QMatrix::scalar(n, c.clone()));
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Q::from_integer((k as i64).into()))
                .collect(),
        )
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        Poly::new(
            (0..n)
                .map(|k| {
                    self.0.get(k).cloned().unwrap_or_else(Q::zero)
                        + o.0.get(k).cloned().unwrap_or_else(Q::zero)
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Poly(self.0.iter().map(|c| -c.clone()).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Q::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut rem = self.0.clone();
        let dd = d.degree();
        let lc = d.leading();
        if self.is_zero() || self.degree() < dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Q::zero(); self.degree() - dd + 1];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lc;
            if !c.is_zero() {
                for (j, dc) in d.0.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Yun's square-free factorization: `(s, m)` pairs with `self = lc · ∏ s^m`,
    /// each `s` monic, square-free, non-constant and pairwise coprime.
    pub fn squarefree_factors(&self) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        if self.degree() == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let mut a = f.gcd(&df);
        let mut b = f.div_rem(&a).0;
        let mut c = df.div_rem(&a).0;
        let mut d = c.sub(&b.derivative());
        let mut m = 1;
        while b.degree() > 0 {
            let g = b.gcd(&d);
            if g.degree() > 0 {
                out.push((g.clone(), m));
            }
            b = b.div_rem(&g).0;
            c = d.div_rem(&g).0;
            d = c.sub(&b.derivative());
            m += 1;
            a = a.div_rem(&g).0;
        }
        let _ = a;
        out
    }

    /// `x^deg · p(1/x)`.
    pub fn reversed(&self) -> Self {
        Poly::new(self.0.iter().rev().cloned().collect())
    }

    /// Cauchy bound: every root has modulus below the returned value.
    pub fn root_bound(&self) -> Q {
        let lc = self.leading().abs();
        let m = self.0[..self.0.len().saturating_sub(1)]
            .iter()
            .map(|c| c.abs() / &lc)
            .max()
            .unwrap_or_else(Q::zero);
        m + Q::one()
    }
}

fn sign_at(p: &Poly, b: &Bound) -> i8 {
    let s = match b {
        Bound::At(x) => {
            let v = p.eval(x);
            if v.is_zero() {
                return 0;
            }
            if v.is_positive() {
                1
            } else {
                -1
            }
        }
        Bound::PosInf => {
            if p.leading().is_positive() {
                1
            } else {
                -1
            }
        }
        Bound::NegInf => {
            let s = if p.leading().is_positive() { 1 } else { -1 };
            if p.degree().is_multiple_of(2) {
                s
            } else {
                -s
            }
        }
    };
    if p.is_zero() {
        0
    } else {
        s
    }
}

/// Sturm chain of a square-free polynomial.
#[derive(Clone, Debug)]
pub struct Sturm {
    chain: Vec<Poly>,
}

impl Sturm {
    pub fn new(p: &Poly) -> Self {
        let mut chain = vec![p.clone(), p.derivative()];
        while !chain.last().unwrap().is_zero() {
            let n = chain.len();
            let r = chain[n - 2].div_rem(&chain[n - 1]).1.neg();
            if r.is_zero() {
                break;
            }
            chain.push(r);
        }
        chain.retain(|q| !q.is_zero());
        Sturm { chain }
    }

    fn variations(&self, b: &Bound) -> usize {
        let signs: Vec<i8> = self
            .chain
            .iter()
            .map(|q| sign_at(q, b))
            .filter(|&s| s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count(&self, a: &Bound, b: &Bound) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }

    pub fn poly(&self) -> &Poly {
        &self.chain[0]
    }

    /// Isolating intervals `(lo, hi]` for all distinct real roots inside
    /// `(a, b]`, each of width at most `width` (or an exact point `lo == hi`).
    pub fn isolate(&self, a: &Q, b: &Q, width: &Q) -> Vec<(Q, Q)> {
        let mut out = Vec::new();
        let mut stack = vec![(a.clone(), b.clone())];
        let p = self.poly();
        while let Some((lo, hi)) = stack.pop() {
            let n = self.count(&Bound::At(lo.clone()), &Bound::At(hi.clone()));
            if n == 0 {
                continue;
            }
            if n == 1 && (&hi - &lo) <= *width {
                out.push((lo, hi));
                continue;
            }
            let mid = (&lo + &hi) / Q::from_integer(2.into());
            if p.eval(&mid).is_zero() && n == 1 {
                out.push((mid.clone(), mid));
                continue;
            }
            stack.push((lo, mid.clone()));
            stack.push((mid, hi));
        }
        out.sort_by(|x, y| x.0.cmp(&y.0));
        // Exact roots found at a midpoint sit at the right edge of the left
        // half too; merge duplicates.
        out.dedup_by(|x, y| x.0 == x.1 && y.0 == y.1 && x.0 == y.0);
        out
    }
}

/// Characteristic polynomial `det(xI - A)` via Faddeev–LeVerrier.
pub fn charpoly(a: &QMatrix) -> Poly {
    assert!(a.is_square());
    let n = a.rows();
    let mut coeffs = vec![Q::zero(); n + 1];
    coeffs[n] = Q::one();
    let mut m = QMatrix::zeros(n, n);
    for k in 1..=n {
        m = a.mul(&m).add(&QMatrix::scalar(n, coeffs[n - k + 1].clone()));
        let am = a.mul(&m);
        coeffs[n - k] = -am.trace() / Q::from_integer((k as i64).into());
    }
    Poly::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qf};
    use crate::matrix::Matrix;

    fn p(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn division_and_gcd() {
        let a = p(&[-1, 0, 1]); // x² - 1
        let b = p(&[1, 1]); // x + 1
        let (quot, r) = a.div_rem(&b);
        assert_eq!(quot, p(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&p(&[-1, 1]).mul(&p(&[5, 1]))), p(&[-1, 1]));
    }

    #[test]
    fn yun_recovers_multiplicities() {
        // (x-1)^3 (x+2) (x^2+1)^2
        let f = p(&[-1, 1]).pow(3).mul(&p(&[2, 1])).mul(&p(&[1, 0, 1]).pow(2));
        let mut fs = f.squarefree_factors();
        fs.sort_by_key(|(_, m)| *m);
        assert_eq!(fs.len(), 3);
        assert_eq!(fs[0], (p(&[2, 1]), 1));
        assert_eq!(fs[1], (p(&[1, 0, 1]), 2));
        assert_eq!(fs[2], (p(&[-1, 1]), 3));
    }

    #[test]
    fn sturm_counts() {
        // (x-1/2)(x+3)(x-2)
        let f = Poly::linear(qf(1, 2)).mul(&p(&[3, 1])).mul(&p(&[-2, 1]));
        let s = Sturm::new(&f);
        assert_eq!(s.count(&Bound::NegInf, &Bound::PosInf), 3);
        assert_eq!(s.count(&Bound::At(q(0)), &Bound::At(q(1))), 1);
        assert_eq!(s.count(&Bound::At(q(0)), &Bound::At(q(2))), 2);
        let iso = s.isolate(&q(-10), &q(10), &qf(1, 1000));
        assert_eq!(iso.len(), 3);
        for (lo, hi) in iso {
            assert!(f.eval(&lo).is_zero() || f.eval(&lo) * f.eval(&hi) <= q(0));
        }
        // No real roots.
        assert_eq!(Sturm::new(&p(&[1, 0, 1])).count(&Bound::NegInf, &Bound::PosInf), 0);
    }

    #[test]
    fn charpoly_of_rotation() {
        let r = Matrix::from_rows(vec![vec![q(0), q(-2)], vec![q(2), q(0)]]).unwrap();
        assert_eq!(charpoly(&r), p(&[4, 0, 1]));
        assert!(charpoly(&r).eval_matrix(&r).is_zero());
    }
}
