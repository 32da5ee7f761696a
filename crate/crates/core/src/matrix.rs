//! Exact integer linear algebra: fraction-free elimination, rational
//! inverses and Smith normal form with retained transforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Q;

/// Dense square integer matrix, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix {
            n,
            data: vec![BigInt::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> i64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = BigInt::from(f(i, j));
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.n + j] = v;
    }

    pub fn neg(&self) -> Self {
        IntMatrix {
            n: self.n,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Leading principal minors `m_1, ..., m_n` via Bareiss elimination
    /// without pivoting. Elimination stops at the first vanishing minor;
    /// the returned vector is then shorter than `n` and ends with that zero.
    pub fn leading_minors(&self) -> Vec<BigInt> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut minors = Vec::with_capacity(n);
        let mut prev = BigInt::one();
        for k in 0..n {
            let pivot = a[k * n + k].clone();
            minors.push(pivot.clone());
            if pivot.is_zero() {
                break;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &pivot * &a[i * n + j] - &a[i * n + k] * &a[k * n + j];
                    a[i * n + j] = v / &prev;
                }
            }
            prev = pivot;
        }
        minors
    }

    /// Determinant by Bareiss elimination with row pivoting.
    pub fn det(&self) -> BigInt {
        let n = self.n;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.data.clone();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k * n + k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i * n + k].is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            let pivot = a[k * n + k].clone();
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &pivot * &a[i * n + j] - &a[i * n + k] * &a[k * n + j];
                    a[i * n + j] = v / &prev;
                }
            }
            prev = pivot;
        }
        let d = a[n * n - 1].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    /// Exact inverse over Q by Gauss-Jordan; `None` when singular.
    pub fn inverse(&self) -> Option<Vec<Vec<Q>>> {
        let n = self.n;
        let mut a: Vec<Vec<Q>> = (0..n)
            .map(|i| (0..n).map(|j| Q::from_integer(self.get(i, j).clone())).collect())
            .collect();
        let mut inv: Vec<Vec<Q>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Q::one() } else { Q::zero() })
                    .collect()
            })
            .collect();
        for k in 0..n {
            let p = (k..n).find(|&i| !a[i][k].is_zero())?;
            a.swap(k, p);
            inv.swap(k, p);
            let piv = a[k][k].recip();
            for j in 0..n {
                a[k][j] = &a[k][j] * &piv;
                inv[k][j] = &inv[k][j] * &piv;
            }
            for i in 0..n {
                if i == k || a[i][k].is_zero() {
                    continue;
                }
                let f = a[i][k].clone();
                for j in 0..n {
                    let t = &f * &a[k][j];
                    a[i][j] -= t;
                    let t = &f * &inv[k][j];
                    inv[i][j] -= t;
                }
            }
        }
        Some(inv)
    }
}

/// Smith normal form `U * A * V = D` with `D` diagonal, `d_1 | d_2 | ...`,
/// nonnegative, and `U`, `V` unimodular.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let n = a.dim();
    let mut m = a.clone();
    let mut u = IntMatrix::identity(n);
    let mut v = IntMatrix::identity(n);

    let row_op = |m: &mut IntMatrix, dst: usize, src: usize, f: &BigInt| {
        // row[dst] -= f * row[src]
        for j in 0..n {
            let t = f * m.get(src, j);
            let x = m.get(dst, j) - t;
            m.set(dst, j, x);
        }
    };
    let col_op = |m: &mut IntMatrix, dst: usize, src: usize, f: &BigInt| {
        for i in 0..n {
            let t = f * m.get(i, src);
            let x = m.get(i, dst) - t;
            m.set(i, dst, x);
        }
    };
    let swap_rows = |m: &mut IntMatrix, a: usize, b: usize| {
        for j in 0..n {
            let x = m.get(a, j).clone();
            let y = m.get(b, j).clone();
            m.set(a, j, y);
            m.set(b, j, x);
        }
    };
    let swap_cols = |m: &mut IntMatrix, a: usize, b: usize| {
        for i in 0..n {
            let x = m.get(i, a).clone();
            let y = m.get(i, b).clone();
            m.set(i, a, y);
            m.set(i, b, x);
        }
    };

    for t in 0..n {
        loop {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    let x = m.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < m.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                break;
            };
            if bi != t {
                swap_rows(&mut m, t, bi);
                swap_rows(&mut u, t, bi);
            }
            if bj != t {
                swap_cols(&mut m, t, bj);
                swap_cols(&mut v, t, bj);
            }
            let mut clean = true;
            for i in t + 1..n {
                if m.get(i, t).is_zero() {
                    continue;
                }
                let f = m.get(i, t).div_floor(m.get(t, t));
                row_op(&mut m, i, t, &f);
                row_op(&mut u, i, t, &f);
                if !m.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if m.get(t, j).is_zero() {
                    continue;
                }
                let f = m.get(t, j).div_floor(m.get(t, t));
                col_op(&mut m, j, t, &f);
                col_op(&mut v, j, t, &f);
                if !m.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // the pivot must divide the whole trailing block
            let piv = m.get(t, t).clone();
            let bad = (t + 1..n)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !m.get(i, j).is_multiple_of(&piv));
            match bad {
                Some((i, _)) => {
                    // row[t] += row[i]
                    let minus_one = -BigInt::one();
                    row_op(&mut m, t, i, &minus_one);
                    row_op(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if m.get(t, t).is_negative() {
            for j in 0..n {
                let x = -m.get(t, j);
                m.set(t, j, x);
                let y = -u.get(t, j);
                u.set(t, j, y);
            }
        }
    }
    SmithForm {
        diagonal: (0..n).map(|i| m.get(i, i).clone()).collect(),
        u,
        v,
    }
}
