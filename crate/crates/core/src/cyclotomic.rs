//! Exact arithmetic in `Q(ζ_m)` and the characters of the discriminant group.
//!
//! An element is stored in the power basis `1, ζ, ..., ζ^{φ(m)-1}` as an
//! integer vector over a positive common denominator. Operands of different
//! conductors are lifted to the lcm.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{DiscriminantGroup, GroupElement, LatticeVector};
use crate::poly::{Poly, Scalar};
use crate::rational::{format_q, Q};

fn cache() -> &'static Mutex<HashMap<u64, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `Φ_m`, lowest degree first, by exact division of `x^m - 1` by `Φ_d` for
/// the proper divisors `d` of `m`.
pub fn cyclotomic_poly(m: u64) -> Arc<Vec<i64>> {
    assert!(m >= 1);
    if let Some(p) = cache().lock().unwrap().get(&m) {
        return Arc::clone(p);
    }
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in (1..m).filter(|d| m.is_multiple_of(*d)) {
        num = div_exact_monic(&num, &cyclotomic_poly(d));
    }
    let p = Arc::new(num);
    cache().lock().unwrap().insert(m, Arc::clone(&p));
    p
}

fn div_exact_monic(a: &[i64], d: &[i64]) -> Vec<i64> {
    let dd = d.len() - 1;
    debug_assert_eq!(d[dd], 1);
    let mut r = a.to_vec();
    let n = a.len() - 1;
    let mut q = vec![0i64; n - dd + 1];
    for k in (0..=n - dd).rev() {
        let c = r[k + dd];
        q[k] = c;
        for (j, &b) in d.iter().enumerate() {
            r[k + j] -= c * b;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

/// Euler's totient.
pub fn phi(m: u64) -> usize {
    cyclotomic_poly(m).len() - 1
}

/// Reduces `Σ v_k x^k` modulo `Φ_m` in place (any length), returning the
/// `φ(m)` power-basis coefficients.
fn reduce_big(m: u64, mut v: Vec<BigInt>) -> Vec<BigInt> {
    let p = cyclotomic_poly(m);
    let f = p.len() - 1;
    for k in (f..v.len()).rev() {
        if v[k].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut v[k]);
        for (j, &b) in p.iter().enumerate().take(f) {
            if b != 0 {
                v[k - f + j] -= &c * b;
            }
        }
    }
    v.resize(f, BigInt::zero());
    v
}

/// Reduces an element of `Z[x]/(x^m - 1)`, given by `m` integer coefficients,
/// to the power basis of `Q(ζ_m)`.
pub fn reduce_group_ring(m: u64, v: &[i64]) -> Vec<i64> {
    let p = cyclotomic_poly(m);
    let f = p.len() - 1;
    let mut v = v.to_vec();
    for k in (f..v.len()).rev() {
        let c = v[k];
        if c == 0 {
            continue;
        }
        v[k] = 0;
        for (j, &b) in p.iter().enumerate().take(f) {
            if b != 0 {
                v[k - f + j] -= c * b;
            }
        }
    }
    v.truncate(f);
    v
}

#[derive(Clone, Debug)]
pub struct CyclotomicNumber {
    m: u64,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CyclotomicNumber {
    fn normalized(m: u64, num: Vec<BigInt>, den: BigInt) -> Self {
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        let sign = if den.is_negative() { -BigInt::one() } else { BigInt::one() };
        let g = g * sign;
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.into_iter().map(|c| c / &g).collect(), den / &g)
        };
        CyclotomicNumber { m, num, den }
    }

    /// From `Σ v_k ζ^k` with integer `v` of any length, over `den`.
    pub fn from_int_poly(m: u64, v: Vec<BigInt>, den: BigInt) -> Self {
        let num = reduce_big(m, v);
        Self::normalized(m, num, den)
    }

    pub fn from_rational(m: u64, q: &Q) -> Self {
        let mut num = vec![BigInt::zero(); phi(m)];
        num[0] = q.numer().clone();
        Self::normalized(m, num, q.denom().clone())
    }

    pub fn zero(m: u64) -> Self {
        Self::from_rational(m, &Q::zero())
    }

    pub fn one(m: u64) -> Self {
        Self::from_rational(m, &Q::one())
    }

    /// `ζ_m^k`.
    pub fn root(m: u64, k: i64) -> Self {
        let k = k.rem_euclid(m as i64) as usize;
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = BigInt::one();
        Self::from_int_poly(m, v, BigInt::one())
    }

    /// `1/(1 - ζ)` for `ζ = ζ_m^k ≠ 1`, via `-(1/e) Σ_{j<e} j ζ^j` with `e`
    /// the order of `ζ`.
    pub fn inv_one_minus_root(m: u64, k: i64) -> Self {
        let k = k.rem_euclid(m as i64) as u64;
        assert!(k != 0, "1 - ζ vanishes for ζ = 1");
        let e = m / k.gcd(&m);
        let mut v = vec![BigInt::zero(); m as usize];
        for j in 1..e {
            v[((j * k) % m) as usize] += BigInt::from(j);
        }
        Self::from_int_poly(m, v, -BigInt::from(e))
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    /// Power-basis coefficients as rationals.
    pub fn coeffs(&self) -> Vec<Q> {
        self.num
            .iter()
            .map(|c| Q::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    /// The value as an element of `Q(ζ_{m'})` for a multiple `m'` of `m`.
    pub fn lift(&self, m2: u64) -> Self {
        assert!(m2.is_multiple_of(self.m), "conductor {} does not divide {}", self.m, m2);
        if m2 == self.m {
            return self.clone();
        }
        let step = (m2 / self.m) as usize;
        let mut v = vec![BigInt::zero(); (self.num.len().max(1) - 1) * step + 1];
        for (i, c) in self.num.iter().enumerate() {
            v[i * step] = c.clone();
        }
        Self::from_int_poly(m2, v, self.den.clone())
    }

    fn common(&self, o: &Self) -> (Self, Self) {
        if self.m == o.m {
            (self.clone(), o.clone())
        } else {
            let m = self.m.lcm(&o.m);
            (self.lift(m), o.lift(m))
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.m != o.m {
            let (a, b) = self.common(o);
            return a.add(&b);
        }
        let num = self
            .num
            .iter()
            .zip(&o.num)
            .map(|(a, b)| a * &o.den + b * &self.den)
            .collect();
        Self::normalized(self.m, num, &self.den * &o.den)
    }

    pub fn neg(&self) -> Self {
        CyclotomicNumber {
            m: self.m,
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.m != o.m {
            let (a, b) = self.common(o);
            return a.mul(&b);
        }
        let f = self.num.len();
        let mut v = vec![BigInt::zero(); 2 * f.max(1) - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.num.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += a * b;
                }
            }
        }
        Self::from_int_poly(self.m, v, &self.den * &o.den)
    }

    pub fn scale(&self, q: &Q) -> Self {
        Self::normalized(
            self.m,
            self.num.iter().map(|c| c * q.numer()).collect(),
            &self.den * q.denom(),
        )
    }

    /// Multiplication by `ζ_m^k`.
    pub fn mul_root(&self, k: i64) -> Self {
        let k = k.rem_euclid(self.m as i64) as usize;
        let mut v = vec![BigInt::zero(); k];
        v.extend(self.num.iter().cloned());
        Self::from_int_poly(self.m, v, self.den.clone())
    }

    /// Inverse by the extended Euclidean algorithm against `Φ_m`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroArgument);
        }
        let zero = Q::zero();
        let a = Poly::new(self.coeffs(), &zero);
        let modulus = Poly::from_ints(&cyclotomic_poly(self.m));
        // s a + t Φ = g, with g a nonzero constant since Φ is irreducible
        let (mut r0, mut r1) = (modulus, a);
        let (mut s0, mut s1) = (Poly::zero(&zero), Poly::one(&zero));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        debug_assert_eq!(r0.degree(), Some(0));
        let inv_g = r0.coeff(0).recip();
        let s = s0.scale(&inv_g);
        Ok(Self::from_q_poly(self.m, s.coeffs()))
    }

    fn from_q_poly(m: u64, coeffs: &[Q]) -> Self {
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let v = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Self::from_int_poly(m, v, den)
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut out = Self::one(self.m);
        let mut b = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        Ok(out)
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rational(&self) -> Result<Q> {
        if self.num.iter().skip(1).all(Zero::is_zero) {
            let c = self.num.first().cloned().unwrap_or_default();
            Ok(Q::new(c, self.den.clone()))
        } else {
            Err(Error::NotRational(self.coeffs().iter().map(format_q).collect()))
        }
    }

    /// The Galois conjugate `ζ ↦ ζ^j`, `gcd(j, m) = 1`.
    pub fn conjugate(&self, j: u64) -> Self {
        assert_eq!(j.gcd(&self.m), 1, "not a Galois automorphism");
        let m = self.m as usize;
        let mut v = vec![BigInt::zero(); m];
        for (k, c) in self.num.iter().enumerate() {
            v[(k * j as usize) % m] += c;
        }
        Self::from_int_poly(self.m, v, self.den.clone())
    }

    /// `Tr_{Q(ζ_m)/Q}(ζ^{-shift} x)`, with `sums` from [`ramanujan_sums`].
    pub fn trace_shifted(&self, sums: &[i64], shift: u64) -> Q {
        let m = self.m as usize;
        debug_assert_eq!(sums.len(), m);
        let shift = shift as usize % m;
        let total: BigInt = self
            .num
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| c * sums[(k + m - shift) % m])
            .sum();
        Q::new(total, self.den.clone())
    }
}

/// `c_m(k) = Tr(ζ_m^k) = Σ_{d | gcd(k, m)} μ(m/d) d` for `k = 0, ..., m - 1`.
pub fn ramanujan_sums(m: u64) -> Vec<i64> {
    let mut out = vec![0i64; m as usize];
    for d in (1..=m).filter(|d| m.is_multiple_of(*d)) {
        let mu = moebius(m / d);
        if mu != 0 {
            for k in (0..m as usize).step_by(d as usize) {
                out[k] += mu * d as i64;
            }
        }
    }
    out
}

fn moebius(mut n: u64) -> i64 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        -sign
    } else {
        sign
    }
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.common(other);
        a.num == b.num && a.den == b.den
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = format!("z{}", self.m);
        let mut parts = Vec::new();
        for (i, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(match i {
                0 => format_q(c),
                1 => format!("{}*{z}", format_q(c)),
                _ => format!("{}*{z}^{i}", format_q(c)),
            });
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

impl Scalar for CyclotomicNumber {
    fn zero_like(&self) -> Self {
        Self::zero(self.m)
    }
    fn one_like(&self) -> Self {
        Self::one(self.m)
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn inverse(&self) -> Self {
        self.inv().expect("inverse of zero")
    }
    fn embed(&self, q: &Q) -> Self {
        Self::from_rational(self.m, q)
    }
    fn show(&self) -> String {
        self.to_string()
    }
}

/// A character `ρ(h) = ζ_m^{Σ_j c_j h_j m/d_j}` of `H = ⊕ Z/d_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    group: Arc<DiscriminantGroup>,
    exps: Vec<u64>,
}

impl Character {
    pub fn exponents(&self) -> &[u64] {
        &self.exps
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&c| c == 0)
    }

    /// The `k` with `ρ(h) = ζ_m^k`, `m` the exponent of `H`.
    pub fn exponent_of(&self, h: &GroupElement) -> u64 {
        let m = self.group.exponent() as u128;
        self.exps
            .iter()
            .zip(&h.0)
            .zip(self.group.orders())
            .map(|((&c, &x), &d)| (c as u128 * x as u128 % d as u128) * (m / d as u128))
            .sum::<u128>()
            .rem_euclid(m) as u64
    }

    pub fn eval(&self, h: &GroupElement) -> CyclotomicNumber {
        CyclotomicNumber::root(self.group.exponent(), self.exponent_of(h) as i64)
    }

    /// `ρ([x])` for an integral dual vector `x`.
    pub fn eval_on_dual_class(&self, x: &LatticeVector) -> Result<CyclotomicNumber> {
        Ok(self.eval(&x.class()?))
    }

    /// Order of `ρ` in the dual group.
    pub fn order(&self) -> u64 {
        self.group.element_order(&GroupElement(self.exps.clone()))
    }

    pub fn pow(&self, j: i64) -> Character {
        Character {
            group: Arc::clone(&self.group),
            exps: self.group.scale(&GroupElement(self.exps.clone()), j).0,
        }
    }
}

/// All `|H|` characters in mixed radix order of their exponent tuples; the
/// trivial character comes first.
pub fn characters(group: &Arc<DiscriminantGroup>) -> Vec<Character> {
    group
        .elements()
        .map(|e| Character {
            group: Arc::clone(group),
            exps: e.0,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::PlumbingGraph;
    use crate::lattice::Lattice;
    use crate::rational::{q, qf};

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_poly(2), vec![1, 1]);
        assert_eq!(*cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(phi(12), 4);
        assert_eq!(phi(105), 48);
        // Φ_105 is the first with a coefficient -2
        assert!(cyclotomic_poly(105).contains(&-2));
    }

    #[test]
    fn roots_have_exact_order() {
        for m in 1..=30u64 {
            let z = CyclotomicNumber::root(m, 1);
            assert_eq!(z.pow(m as i64).unwrap(), CyclotomicNumber::one(m));
            for k in 1..m {
                assert_ne!(z.pow(k as i64).unwrap(), CyclotomicNumber::one(m));
            }
        }
    }

    #[test]
    fn rationality() {
        let z3 = CyclotomicNumber::root(3, 1);
        assert_eq!(z3.add(&z3.mul(&z3)).as_rational().unwrap(), q(-1));
        assert!(matches!(CyclotomicNumber::root(4, 1).as_rational(), Err(Error::NotRational(_))));
        for d in 1..=9u64 {
            for k in 0..2 * d as i64 {
                let s = (0..d as i64)
                    .map(|j| CyclotomicNumber::root(d, j * k))
                    .fold(CyclotomicNumber::zero(d), |a, b| a.add(&b))
                    .scale(&qf(1, d as i64));
                let want = if k % d as i64 == 0 { q(1) } else { q(0) };
                assert_eq!(s.as_rational().unwrap(), want);
            }
        }
    }

    #[test]
    fn traces_sum_conjugates() {
        for m in [1u64, 2, 6, 9, 12, 20] {
            let sums = ramanujan_sums(m);
            let x = CyclotomicNumber::root(m, 1)
                .add(&CyclotomicNumber::from_rational(m, &qf(3, 7)))
                .mul(&CyclotomicNumber::root(m, 2).sub(&CyclotomicNumber::one(m)));
            for shift in 0..m {
                let y = x.mul_root(-(shift as i64));
                let explicit = (1..=m)
                    .filter(|j| j.gcd(&m) == 1)
                    .fold(CyclotomicNumber::zero(m), |acc, j| acc.add(&y.conjugate(j)));
                assert_eq!(explicit.as_rational().unwrap(), x.trace_shifted(&sums, shift));
            }
        }
        assert_eq!(ramanujan_sums(12), vec![4, 0, 2, 0, -2, 0, -4, 0, -2, 0, 2, 0]);
    }

    #[test]
    fn inverses() {
        for m in [5u64, 8, 12, 15] {
            for k in 1..m as i64 {
                let x = CyclotomicNumber::one(m).sub(&CyclotomicNumber::root(m, k));
                let a = x.inv().unwrap();
                assert_eq!(a, CyclotomicNumber::inv_one_minus_root(m, k));
                assert_eq!(a.mul(&x), CyclotomicNumber::one(m));
            }
        }
        assert!(CyclotomicNumber::zero(7).inv().is_err());
    }

    #[test]
    fn lifting_preserves_values() {
        let x = CyclotomicNumber::root(6, 1).add(&CyclotomicNumber::from_rational(6, &qf(2, 3)));
        let y = x.lift(12);
        assert_eq!(x, y);
        assert_eq!(y.mul(&y.inv().unwrap()).as_rational().unwrap(), q(1));
        // ζ_3 + ζ_3^2 computed in Q(ζ_6) and Q(ζ_12)
        for m in [3u64, 6, 12] {
            let z = CyclotomicNumber::root(m, (m / 3) as i64);
            assert_eq!(z.add(&z.mul(&z)).as_rational().unwrap(), q(-1));
        }
    }

    #[test]
    fn group_ring_reduction() {
        // 1 + x + x^2 ↦ 0 in Q(ζ_3)
        assert_eq!(reduce_group_ring(3, &[1, 1, 1]), vec![0, 0]);
        assert_eq!(reduce_group_ring(4, &[0, 0, 5, 0]), vec![-5, 0]);
    }

    #[test]
    fn characters_of_small_groups() {
        let l = Lattice::new(PlumbingGraph::parse("v: -3").unwrap()).unwrap();
        let chars = characters(l.group());
        assert_eq!(chars.len(), 3);
        assert!(chars[0].is_trivial());
        let g = l.e_star(0).class().unwrap();
        assert_eq!(chars[1].eval_on_dual_class(&l.e_star(0)).unwrap(), CyclotomicNumber::root(3, 1));
        assert_eq!(chars[1].eval_on_dual_class(&l.e(0)).unwrap(), CyclotomicNumber::one(3));
        for h in l.group().elements() {
            let s = chars
                .iter()
                .map(|c| c.eval(&h))
                .fold(CyclotomicNumber::zero(3), |a, b| a.add(&b));
            let want = if h.is_zero() { q(3) } else { q(0) };
            assert_eq!(s.as_rational().unwrap(), want);
        }
        assert_eq!(chars[2].order(), 3);
        assert_eq!(chars[1].pow(2), chars[2]);
        assert!(!g.is_zero());
        let two = Lattice::new(PlumbingGraph::parse("v: -2").unwrap()).unwrap();
        let c2 = characters(two.group());
        assert_eq!(c2[1].eval(&two.e_star(0).class().unwrap()).as_rational().unwrap(), q(-1));
        let trivial = Lattice::new(PlumbingGraph::parse("v: -1").unwrap()).unwrap();
        assert_eq!(characters(trivial.group()).len(), 1);
    }
}
