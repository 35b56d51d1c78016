//! Strict Fourier–Motzkin elimination: find a rational point satisfying a
//! finite system `a·x + b > 0`, or prove there is none.

use num_traits::{One, Signed, Zero};

use crate::arith::Q;
use crate::matrix::dot;

/// One strict constraint `a·x + b > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Strict {
    pub a: Vec<Q>,
    pub b: Q,
}

impl Strict {
    pub fn homogeneous(a: Vec<Q>) -> Self {
        Strict { a, b: Q::zero() }
    }

    fn value(&self, x: &[Q]) -> Q {
        dot(&self.a, x) + &self.b
    }

    /// Scaled by a positive factor so the first nonzero entry has modulus 1.
    fn normalized(mut self) -> Self {
        let pivot = self
            .a
            .iter()
            .chain(std::iter::once(&self.b))
            .find(|c| !c.is_zero())
            .map(|c| c.abs());
        if let Some(p) = pivot {
            for c in &mut self.a {
                *c /= &p;
            }
            self.b /= &p;
        }
        self
    }
}

/// A point `x ∈ ℚⁿ` with every constraint strictly positive, if one exists.
pub fn strict_feasible(n: usize, constraints: &[Strict]) -> Option<Vec<Q>> {
    let rows: Vec<Strict> = constraints.iter().map(|c| c.clone().normalized()).collect();
    let x = solve(n, dedup(rows))?;
    debug_assert!(constraints.iter().all(|c| c.value(&x).is_positive()));
    Some(x)
}

fn dedup(mut rows: Vec<Strict>) -> Vec<Strict> {
    let mut seen = std::collections::HashSet::new();
    rows.retain(|r| seen.insert(r.clone()));
    rows
}

fn solve(n: usize, rows: Vec<Strict>) -> Option<Vec<Q>> {
    if n == 0 {
        return rows.iter().all(|r| r.b.is_positive()).then(Vec::new);
    }
    let k = n - 1;
    let (mut lower, mut upper, mut rest) = (Vec::new(), Vec::new(), Vec::new());
    for r in rows {
        let c = r.a[k].clone();
        let mut head = Strict { a: r.a[..k].to_vec(), b: r.b };
        if c.is_zero() {
            rest.push(head);
            continue;
        }
        // c·x_k + head > 0  ⇔  x_k > -head/c (c > 0)  or  x_k < -head/c (c < 0).
        let s = -Q::one() / &c;
        for v in &mut head.a {
            *v *= &s;
        }
        head.b *= &s;
        if c.is_positive() {
            lower.push(head);
        } else {
            upper.push(head);
        }
    }
    let mut reduced = rest;
    for u in &upper {
        for l in &lower {
            let a = u.a.iter().zip(&l.a).map(|(x, y)| x - y).collect();
            reduced.push(Strict { a, b: &u.b - &l.b }.normalized());
        }
    }
    let mut x = solve(k, dedup(reduced))?;
    let lo = lower.iter().map(|l| l.value(&x)).max();
    let hi = upper.iter().map(|u| u.value(&x)).min();
    let xk = match (lo, hi) {
        (Some(l), Some(h)) => (l + h) / Q::from_integer(2.into()),
        (Some(l), None) => l + Q::one(),
        (None, Some(h)) => h - Q::one(),
        (None, None) => Q::zero(),
    };
    x.push(xk);
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    fn h(a: &[i64]) -> Strict {
        Strict::homogeneous(a.iter().map(|&v| q(v)).collect())
    }

    #[test]
    fn open_quadrant_is_feasible() {
        let x = strict_feasible(2, &[h(&[1, 0]), h(&[0, 1]), h(&[-1, 1])]).unwrap();
        assert!(x[0].is_positive() && x[1] > x[0]);
    }

    #[test]
    fn opposite_halfspaces_are_infeasible() {
        assert!(strict_feasible(2, &[h(&[1, 1]), h(&[-1, -1])]).is_none());
        assert!(strict_feasible(3, &[h(&[1, 0, 0]), h(&[0, 1, 0]), h(&[-1, -1, 0])]).is_none());
    }

    #[test]
    fn affine_bounds() {
        // 0 < x < 1/2 is feasible; x > 1, x < 1 is not.
        let c = |a: i64, b: Q| Strict { a: vec![q(a)], b };
        assert!(strict_feasible(1, &[c(1, q(0)), c(-1, crate::arith::qf(1, 2))]).is_some());
        assert!(strict_feasible(1, &[c(1, q(-1)), c(-1, q(1))]).is_none());
    }

    #[test]
    fn zero_variable_system() {
        assert!(strict_feasible(0, &[]).is_some());
        assert!(strict_feasible(2, &[h(&[0, 0])]).is_none());
    }
}
