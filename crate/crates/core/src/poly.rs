//! Dense univariate polynomials over an exact coefficient field.

use std::fmt;

use num_traits::{One, Zero};

use crate::rational::{format_q, Q};

/// Exact field arithmetic. Elements carry enough context (e.g. the
/// conductor of a cyclotomic field) to build zero and one of their field.
pub trait Scalar: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    /// Multiplicative inverse; panics on zero.
    fn inverse(&self) -> Self;
    fn embed(&self, q: &Q) -> Self;
    fn show(&self) -> String;

    fn is_one_elem(&self) -> bool {
        self.minus(&self.one_like()).is_zero_elem()
    }
}

impl Scalar for Q {
    fn zero_like(&self) -> Self {
        Q::zero()
    }
    fn one_like(&self) -> Self {
        Q::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        self.recip()
    }
    fn embed(&self, q: &Q) -> Self {
        q.clone()
    }
    fn show(&self) -> String {
        format_q(self)
    }
    fn is_one_elem(&self) -> bool {
        self.is_one()
    }
}

/// Coefficients are stored lowest degree first with no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<F: Scalar> {
    coeffs: Vec<F>,
    zero: F,
}

impl<F: Scalar> Poly<F> {
    /// `zero` is any element of the coefficient field (only its field is used).
    pub fn new(coeffs: Vec<F>, like: &F) -> Self {
        let mut p = Poly {
            coeffs,
            zero: like.zero_like(),
        };
        p.trim();
        p
    }

    pub fn zero(like: &F) -> Self {
        Self::new(Vec::new(), like)
    }

    pub fn one(like: &F) -> Self {
        Self::new(vec![like.one_like()], like)
    }

    pub fn constant(c: F) -> Self {
        let like = c.clone();
        Self::new(vec![c], &like)
    }

    /// `c t^k`.
    pub fn monomial(c: F, k: usize) -> Self {
        let mut coeffs = vec![c.zero_like(); k + 1];
        let like = c.clone();
        coeffs[k] = c;
        Self::new(coeffs, &like)
    }

    /// `1 - c t^k`.
    pub fn one_minus(c: &F, k: usize) -> Self {
        Self::one(c).sub(&Self::monomial(c.clone(), k))
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero_elem()) {
            self.coeffs.pop();
        }
    }

    pub fn like(&self) -> &F {
        &self.zero
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&F> {
        self.coeffs.last()
    }

    /// Index of the lowest nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero_elem())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).plus(&o.coeff(i))).collect();
        Self::new(coeffs, &self.zero)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).minus(&o.coeff(i))).collect();
        Self::new(coeffs, &self.zero)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(F::negated).collect(), &self.zero)
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.times(c)).collect(), &self.zero)
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.zero);
        }
        let mut out = vec![self.zero.clone(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero_elem() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero_elem() {
                    out[i + j] = out[i + j].plus(&a.times(b));
                }
            }
        }
        Self::new(out, &self.zero)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(&self.zero), |acc, _| acc.mul(self))
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.zero.clone(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(coeffs, &self.zero)
    }

    /// Euclidean division; panics if `d` is zero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let inv_lead = d.lead().unwrap().inverse();
        let mut r = self.coeffs.clone();
        let Some(n) = self.degree() else {
            return (Self::zero(&self.zero), Self::zero(&self.zero));
        };
        if n < dd {
            return (Self::zero(&self.zero), self.clone());
        }
        let mut q = vec![self.zero.clone(); n - dd + 1];
        for k in (0..=n - dd).rev() {
            let c = r[k + dd].times(&inv_lead);
            if c.is_zero_elem() {
                continue;
            }
            for (j, b) in d.coeffs.iter().enumerate() {
                if !b.is_zero_elem() {
                    r[k + j] = r[k + j].minus(&c.times(b));
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Self::new(q, &self.zero), Self::new(r, &self.zero))
    }

    /// Scales to a monic polynomial (zero stays zero).
    pub fn monic(&self) -> Self {
        match self.lead() {
            Some(l) => self.scale(&l.inverse()),
            None => self.clone(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.monic();
        let mut b = o.monic();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(self.zero.clone(), |acc, c| acc.times(x).plus(c))
    }

    /// `p(t + c)` as a polynomial in `t`.
    pub fn taylor_shift(&self, c: &F) -> Self {
        let mut a = self.coeffs.clone();
        let n = a.len();
        // repeated synthetic division
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = a[j + 1].times(c);
                a[j] = a[j].plus(&t);
            }
        }
        Self::new(a, &self.zero)
    }

    /// Truncated power series `self / d` modulo `t^n`; `d(0)` must be nonzero.
    pub fn series_div(&self, d: &Self, n: usize) -> Vec<F> {
        let d0 = d.coeff(0);
        assert!(!d0.is_zero_elem(), "series division by a series without constant term");
        let inv = d0.inverse();
        let mut out: Vec<F> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = self.coeff(k);
            for (j, dj) in d.coeffs.iter().enumerate().skip(1).take(k) {
                if !dj.is_zero_elem() {
                    acc = acc.minus(&dj.times(&out[k - j]));
                }
            }
            out.push(acc.times(&inv));
        }
        out
    }

    pub fn map<G: Scalar>(&self, like: &G, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::new(self.coeffs.iter().map(f).collect(), like)
    }
}

impl Poly<Q> {
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| Q::from_integer(c.into())).collect(), &Q::zero())
    }

    pub fn from_q(coeffs: Vec<Q>) -> Self {
        Poly::new(coeffs, &Q::zero())
    }
}

impl<F: Scalar> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero_elem() {
                continue;
            }
            let cs = c.show();
            let cs = if cs.contains(['+', ' ']) || (cs[1..].contains('-')) {
                format!("({cs})")
            } else {
                cs
            };
            parts.push(match i {
                0 => cs,
                1 if c.is_one_elem() => "t".to_string(),
                1 => format!("{cs}*t"),
                _ if c.is_one_elem() => format!("t^{i}"),
                _ => format!("{cs}*t^{i}"),
            });
        }
        f.write_str(&parts.join(" + "))
    }
}
