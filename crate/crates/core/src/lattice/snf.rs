//! Smith normal form over `Z` and over localizations `Z_S`.
//!
//! The integer kernel uses a minimal-absolute-value pivot with full row and
//! column reduction and tracks both transforms together with their
//! inverses. Over `Z_S` the matrix is first scaled to an integer matrix by an
//! `S`-unit; the `S`-parts of the integer invariant factors are then units
//! and are absorbed into the left transform.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{BaseRing, IntMatrix};

/// `U * M * V = D` with `U`, `V` invertible over the base ring.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    /// Nonzero diagonal entries `d_1 | d_2 | ... | d_r`, positive and coprime to `S`.
    pub invariant_factors: Vec<BigInt>,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn diagonal_matrix(&self) -> IntMatrix {
        let d: Vec<BigRational> = self
            .invariant_factors
            .iter()
            .map(|x| BigRational::from_integer(x.clone()))
            .collect();
        IntMatrix::diagonal(self.u.rows(), self.v.rows(), &d)
    }

    /// Solves `M x = b` column by column over the base ring.
    pub fn solve(&self, b: &IntMatrix, ring: &BaseRing) -> Option<IntMatrix> {
        let m_rows = self.u.rows();
        let m_cols = self.v.rows();
        assert_eq!(b.rows(), m_rows, "right-hand side has wrong height");
        let c = &self.u * b;
        let r = self.rank();
        let mut y = IntMatrix::zeros(m_cols, b.cols());
        for col in 0..b.cols() {
            for j in 0..r {
                let q = c.get(j, col) / BigRational::from_integer(self.invariant_factors[j].clone());
                if !ring.contains(&q) {
                    return None;
                }
                y.set(j, col, q);
            }
            if (r..m_rows).any(|j| !c.get(j, col).is_zero()) {
                return None;
            }
        }
        Some(&self.v * &y)
    }

    /// Columns spanning the kernel of `M` over the base ring.
    pub fn kernel_basis(&self) -> IntMatrix {
        let idx: Vec<usize> = (self.rank()..self.v.cols()).collect();
        self.v.select_cols(&idx)
    }
}

struct Work {
    a: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    u_inv: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
    v_inv: Vec<Vec<BigInt>>,
    m: usize,
    n: usize,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

impl Work {
    // row_t += q * row_s
    fn add_row(&mut self, t: usize, s: usize, q: &BigInt) {
        for j in 0..self.n {
            let x = &self.a[s][j] * q;
            self.a[t][j] += x;
        }
        for j in 0..self.m {
            let x = &self.u[s][j] * q;
            self.u[t][j] += x;
        }
        for i in 0..self.m {
            let x = &self.u_inv[i][t] * q;
            self.u_inv[i][s] -= x;
        }
    }

    fn swap_rows(&mut self, s: usize, t: usize) {
        if s == t {
            return;
        }
        self.a.swap(s, t);
        self.u.swap(s, t);
        for row in self.u_inv.iter_mut() {
            row.swap(s, t);
        }
    }

    fn negate_row(&mut self, t: usize) {
        for x in self.a[t].iter_mut() {
            *x = -&*x;
        }
        for x in self.u[t].iter_mut() {
            *x = -&*x;
        }
        for row in self.u_inv.iter_mut() {
            row[t] = -&row[t];
        }
    }

    // col_t += q * col_s
    fn add_col(&mut self, t: usize, s: usize, q: &BigInt) {
        for i in 0..self.m {
            let x = &self.a[i][s] * q;
            self.a[i][t] += x;
        }
        for i in 0..self.n {
            let x = &self.v[i][s] * q;
            self.v[i][t] += x;
        }
        for j in 0..self.n {
            let x = &self.v_inv[t][j] * q;
            self.v_inv[s][j] -= x;
        }
    }

    fn swap_cols(&mut self, s: usize, t: usize) {
        if s == t {
            return;
        }
        for row in self.a.iter_mut() {
            row.swap(s, t);
        }
        for row in self.v.iter_mut() {
            row.swap(s, t);
        }
        self.v_inv.swap(s, t);
    }

    fn min_abs_from(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.m {
            for j in t..self.n {
                if self.a[i][j].is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if self.a[bi][bj].abs() <= self.a[i][j].abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }

    fn reduce_pivot(&mut self, t: usize) {
        loop {
            let mut clean = true;
            for i in t + 1..self.m {
                if !self.a[i][t].is_zero() {
                    let q = -self.a[i][t].div_floor(&self.a[t][t]);
                    self.add_row(i, t, &q);
                    if !self.a[i][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..self.n {
                if !self.a[t][j].is_zero() {
                    let q = -self.a[t][j].div_floor(&self.a[t][t]);
                    self.add_col(j, t, &q);
                    if !self.a[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                // a remainder smaller than the pivot survived; move it to the pivot
                let mut best = (t, t);
                for i in t + 1..self.m {
                    if !self.a[i][t].is_zero() && self.a[i][t].abs() < self.a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..self.n {
                    if !self.a[t][j].is_zero() && self.a[t][j].abs() < self.a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                self.swap_rows(t, best.0);
                self.swap_cols(t, best.1);
                continue;
            }
            let p = self.a[t][t].clone();
            let bad = (t + 1..self.m).find(|&i| {
                (t + 1..self.n).any(|j| !self.a[i][j].mod_floor(&p).is_zero())
            });
            match bad {
                Some(i) => self.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if self.a[t][t].is_negative() {
            self.negate_row(t);
        }
    }
}

/// Integer Smith normal form: returns `(U, U^-1, V, V^-1, d)` with
/// `U A V = diag(d)` and `d` positive with the divisibility chain.
#[allow(clippy::type_complexity)]
pub(crate) fn integer_snf(
    a: Vec<Vec<BigInt>>,
    m: usize,
    n: usize,
) -> (
    Vec<Vec<BigInt>>,
    Vec<Vec<BigInt>>,
    Vec<Vec<BigInt>>,
    Vec<Vec<BigInt>>,
    Vec<BigInt>,
) {
    let mut w = Work {
        a,
        u: identity(m),
        u_inv: identity(m),
        v: identity(n),
        v_inv: identity(n),
        m,
        n,
    };
    let mut t = 0;
    let mut diag = Vec::new();
    while t < m.min(n) {
        let Some((pi, pj)) = w.min_abs_from(t) else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        w.reduce_pivot(t);
        diag.push(w.a[t][t].clone());
        t += 1;
    }
    (w.u, w.u_inv, w.v, w.v_inv, diag)
}

/// Smith normal form of `m` over `ring`. Entries of `m` must lie in `ring`.
pub fn smith_normal_form(m: &IntMatrix, ring: &BaseRing) -> SnfResult {
    debug_assert!(m.entries_in(ring), "matrix entries outside {ring}");
    let (rows, cols) = (m.rows(), m.cols());
    let (c, a) = m.clear_denominators();
    let (u, u_inv, v, v_inv, diag) = integer_snf(a, rows, cols);

    let c = BigRational::from_integer(c);
    let mut row_scale = vec![BigRational::one(); rows];
    let mut invariant_factors = Vec::with_capacity(diag.len());
    for (j, d) in diag.iter().enumerate() {
        let (unit, canon) = ring.split_unit(d);
        row_scale[j] = &c / BigRational::from_integer(unit);
        invariant_factors.push(canon);
    }
    let u = IntMatrix::from_fn(rows, rows, |i, j| {
        BigRational::from_integer(u[i][j].clone()) * &row_scale[i]
    });
    let u_inv = IntMatrix::from_fn(rows, rows, |i, j| {
        BigRational::from_integer(u_inv[i][j].clone()) / &row_scale[j]
    });
    SnfResult {
        u,
        u_inv,
        v: IntMatrix::from_bigint_rows(cols, cols, &v),
        v_inv: IntMatrix::from_bigint_rows(cols, cols, &v_inv),
        invariant_factors,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_certificate(m: &IntMatrix, ring: &BaseRing) -> SnfResult {
        let s = smith_normal_form(m, ring);
        assert_eq!(&(&s.u * m) * &s.v, s.diagonal_matrix());
        assert_eq!(&s.u * &s.u_inv, IntMatrix::identity(m.rows()));
        assert_eq!(&s.v * &s.v_inv, IntMatrix::identity(m.cols()));
        assert!(s.u.entries_in(ring) && s.u_inv.entries_in(ring));
        s
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn two_by_two_over_z() {
        // gcd of entries is 2, the 2x2 minor is -8
        let s = check_certificate(&IntMatrix::from_rows(&[&[2, 4], &[6, 8]]), &BaseRing::integers());
        assert_eq!(s.invariant_factors, ints(&[2, 4]));
    }

    #[test]
    fn identity_is_fixed() {
        let s = check_certificate(&IntMatrix::identity(3), &BaseRing::integers());
        assert_eq!(s.invariant_factors, ints(&[1, 1, 1]));
    }

    #[test]
    fn inverted_prime_is_stripped() {
        let ring = BaseRing::new([2]).unwrap();
        let s = check_certificate(&IntMatrix::from_rows(&[&[6]]), &ring);
        assert_eq!(s.invariant_factors, ints(&[3]));
    }

    #[test]
    fn rectangular_and_zero() {
        let s = check_certificate(&IntMatrix::zeros(2, 3), &BaseRing::integers());
        assert!(s.invariant_factors.is_empty());
        let s = check_certificate(
            &IntMatrix::from_rows(&[&[0, 3, 0], &[4, 0, 0]]),
            &BaseRing::integers(),
        );
        assert_eq!(s.invariant_factors, ints(&[1, 12]));
        let s = check_certificate(&IntMatrix::zeros(0, 2), &BaseRing::integers());
        assert_eq!(s.kernel_basis().cols(), 2);
    }

    #[test]
    fn solving_over_localization() {
        let m = IntMatrix::from_rows(&[&[2]]);
        let b = IntMatrix::from_rows(&[&[1]]);
        let s = smith_normal_form(&m, &BaseRing::integers());
        assert!(s.solve(&b, &BaseRing::integers()).is_none());
        let r = BaseRing::new([2]).unwrap();
        let s = smith_normal_form(&m, &r);
        let x = s.solve(&b, &r).unwrap();
        assert_eq!(&m * &x, b);
    }
}
