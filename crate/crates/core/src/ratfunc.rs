//! Univariate rational functions: normal form, polynomial part, Laurent
//! parts at roots of unity, constant term at `t = 1`, Taylor prefixes and
//! periodic constants.
//!
//! [`RationalFunction`] is the general gcd-reduced form over any exact
//! field. [`BinomialFraction`] keeps an integer numerator over a
//! denominator `Π (1 - t^a)^k` in factored form; the twisted zeta functions
//! are produced in this shape and can be very long.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::cyclotomic::{cyclotomic_poly, phi};
use crate::error::{Error, Result};
use crate::poly::{Poly, Scalar};
use crate::rational::{format_q, Q};

#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunction<F: Scalar> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: Scalar> RationalFunction<F> {
    /// Reduces by the gcd and makes the denominator monic.
    pub fn new(num: Poly<F>, den: Poly<F>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroArgument);
        }
        if num.is_zero() {
            return Ok(Self::zero(den.like()));
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        Ok(Self::from_coprime(num, den))
    }

    /// Trusts that `num` and `den` are coprime; only normalizes the leading
    /// coefficient of `den`.
    pub fn from_coprime(num: Poly<F>, den: Poly<F>) -> Self {
        let lead = den.lead().expect("nonzero denominator").inverse();
        RationalFunction {
            num: num.scale(&lead),
            den: den.scale(&lead),
        }
    }

    pub fn zero(like: &F) -> Self {
        RationalFunction {
            num: Poly::zero(like),
            den: Poly::one(like),
        }
    }

    pub fn from_poly(p: Poly<F>) -> Self {
        let den = Poly::one(p.like());
        RationalFunction { num: p, den }
    }

    /// `c / (1 - α t)^k`.
    pub fn simple_pole(c: &F, alpha: &F, k: u32) -> Self {
        let den = Poly::one_minus(alpha, 1).pow(k);
        Self::new(Poly::constant(c.clone()), den).expect("nonzero denominator")
    }

    pub fn num(&self) -> &Poly<F> {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    pub fn like(&self) -> &F {
        self.num.like()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        let num = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        Self::new(num, self.den.mul(&o.den)).expect("nonzero denominator")
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero denominator")
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::ZeroArgument);
        }
        Self::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero_elem() {
            return Self::zero(c);
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Sum over the product of all denominators, reduced once at the end.
    pub fn sum<'a>(like: &F, terms: impl IntoIterator<Item = &'a Self>) -> Self
    where
        F: 'a,
    {
        let mut num = Poly::zero(like);
        let mut den = Poly::one(like);
        for t in terms {
            num = num.mul(&t.den).add(&t.num.mul(&den));
            den = den.mul(&t.den);
        }
        Self::new(num, den).expect("nonzero denominator")
    }

    /// Value at `x`, if `x` is not a pole.
    pub fn eval(&self, x: &F) -> Option<F> {
        let d = self.den.eval(x);
        if d.is_zero_elem() {
            None
        } else {
            Some(self.num.eval(x).times(&d.inverse()))
        }
    }

    /// `R = P + R_neg` with `P` a polynomial and `deg R_neg < 0`.
    pub fn polynomial_part(&self) -> (Poly<F>, RationalFunction<F>) {
        let (q, r) = self.num.div_rem(&self.den);
        (
            q,
            RationalFunction {
                num: r,
                den: self.den.clone(),
            },
        )
    }

    /// The principal part `Σ_k c_k / (1 - α t)^k` at the pole `t = 1/α`.
    pub fn laurent_part_at(&self, alpha: &F) -> Result<RationalFunction<F>> {
        if alpha.is_zero_elem() {
            return Err(Error::ZeroArgument);
        }
        let like = self.like().clone();
        let root = alpha.inverse();
        let linear = Poly::new(vec![root.negated(), like.one_like()], &like);
        let mut rest = self.den.clone();
        let mut k = 0u32;
        loop {
            let (q, r) = rest.div_rem(&linear);
            if !r.is_zero() {
                break;
            }
            rest = q;
            k += 1;
        }
        if k == 0 {
            return Ok(Self::zero(&like));
        }
        // R = (-α)^k N / E / (1 - α t)^k; expand the cofactor at t = 1/α
        let minus_alpha = alpha.negated();
        let mut factor = like.one_like();
        for _ in 0..k {
            factor = factor.times(&minus_alpha);
        }
        let n = self.num.taylor_shift(&root).scale(&factor);
        let e = rest.taylor_shift(&root);
        let g = n.series_div(&e, k as usize);
        // s = t - 1/α = -(1 - α t)/α
        let one_minus = Poly::one_minus(alpha, 1);
        let minus_inv = root.negated();
        let mut num = Poly::zero(&like);
        let mut s_pow = like.one_like();
        let mut lin_pow = Poly::one(&like);
        for gj in g.iter() {
            num = num.add(&lin_pow.scale(&gj.times(&s_pow)));
            s_pow = s_pow.times(&minus_inv);
            lin_pow = lin_pow.mul(&one_minus);
        }
        Self::new(num, one_minus.pow(k))
    }

    /// The Laurent expansion at `t = 1`: returns `(v, c)` with
    /// `R = Σ_{i ≥ 0} c_i (t - 1)^{v + i}`, `c` truncated to `len` terms.
    pub fn laurent_at_one(&self, len: usize) -> (i64, Vec<F>) {
        let like = self.like();
        let one = like.one_like();
        let n = self.num.taylor_shift(&one);
        let d = self.den.taylor_shift(&one);
        let Some(j) = n.valuation() else {
            return (0, vec![like.zero_like(); len]);
        };
        let k = d.valuation().expect("nonzero denominator");
        let n = Poly::new(n.coeffs()[j..].to_vec(), like);
        let d = Poly::new(d.coeffs()[k..].to_vec(), like);
        (j as i64 - k as i64, n.series_div(&d, len))
    }

    /// The coefficient `a_0` of `Σ a_k (t - 1)^k`.
    pub fn constant_term_at_one(&self) -> F {
        let like = self.like();
        let (v, _) = self.laurent_at_one(0);
        if v > 0 || self.is_zero() {
            return like.zero_like();
        }
        let (_, c) = self.laurent_at_one((-v) as usize + 1);
        c[(-v) as usize].clone()
    }

    /// The first `n` Taylor coefficients at `t = 0`.
    pub fn series_prefix(&self, n: usize) -> Result<Vec<F>> {
        if self.den.coeff(0).is_zero_elem() {
            return Err(Error::PoleAtZero);
        }
        Ok(self.num.series_div(&self.den, n))
    }
}

impl RationalFunction<Q> {
    pub fn from_ints(num: &[i64], den: &[i64]) -> Result<Self> {
        Self::new(Poly::from_ints(num), Poly::from_ints(den))
    }

    /// Multiplicities of the cyclotomic factors of the denominator, or an
    /// error if some pole is not a root of unity.
    pub fn cyclotomic_poles(&self) -> Result<Vec<(u64, u32)>> {
        let mut rest = self.den.clone();
        let mut out = Vec::new();
        let mut e = 1u64;
        while rest.degree().unwrap_or(0) > 0 {
            let deg = rest.degree().unwrap();
            // φ(e) ≥ sqrt(e/2), so larger e cannot divide
            if e > 2 * (deg as u64) * (deg as u64) + 2 {
                return Err(Error::PeriodicFit(format!(
                    "denominator factor {} has a pole off the roots of unity",
                    rest
                )));
            }
            if phi(e) <= deg {
                let ph = Poly::from_ints(&cyclotomic_poly(e));
                let mut k = 0;
                loop {
                    let (q, r) = rest.div_rem(&ph);
                    if !r.is_zero() {
                        break;
                    }
                    rest = q;
                    k += 1;
                }
                if k > 0 {
                    out.push((e, k));
                }
            }
            e += 1;
        }
        Ok(out)
    }

    /// Constant term of the polynomial `n ↦ Σ_{i < pn} a_i`, computed from
    /// Taylor coefficients and an exact polynomial fit.
    pub fn periodic_constant(&self) -> Result<Q> {
        if self.den.coeff(0).is_zero() {
            return Err(Error::PoleAtZero);
        }
        let poles = self.cyclotomic_poles()?;
        let p = poles.iter().fold(1u64, |acc, &(e, _)| acc.lcm(&e));
        let k = poles.iter().map(|&(_, k)| k as usize).max().unwrap_or(0);
        let excess = self.num.degree().unwrap_or(0).saturating_sub(self.den.degree().unwrap_or(0));
        let n0 = excess as u64 / p + 1;
        let len = (p * (n0 + k as u64 + 1)) as usize;
        let series = self.series_prefix(len)?;
        let mut partial = Vec::with_capacity(k + 2);
        let mut acc = Q::zero();
        let mut it = series.iter();
        for n in 1..=(n0 + k as u64 + 1) {
            for _ in 0..p {
                acc += it.next().expect("series long enough");
            }
            if n >= n0 {
                partial.push((Q::from_integer(n.into()), acc.clone()));
            }
        }
        fit_constant_term(&partial)
    }
}

/// Interpolates the first `len - 1` points, checks the last one and returns
/// the value at 0.
fn fit_constant_term(points: &[(Q, Q)]) -> Result<Q> {
    let (check, fit) = points.split_last().expect("at least one point");
    let predicted = lagrange(fit, &check.0);
    if predicted != check.1 {
        return Err(Error::PeriodicFit(format!(
            "partial sums are not polynomial: expected {} at n = {}, got {}",
            format_q(&predicted),
            format_q(&check.0),
            format_q(&check.1)
        )));
    }
    Ok(lagrange(fit, &Q::zero()))
}

fn lagrange(points: &[(Q, Q)], x: &Q) -> Q {
    let mut total = Q::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        let mut term = yi.clone();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i != j {
                term = term * (x - xj) / (xi - xj);
            }
        }
        total += term;
    }
    total
}

impl<F: Scalar> fmt::Display for RationalFunction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

/// `numer(t) / (scale · Π (1 - t^a)^k)` with integer numerator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomialFraction {
    numer: Vec<i64>,
    scale: i64,
    factors: Vec<(usize, u32)>,
}

impl BinomialFraction {
    pub fn new(mut numer: Vec<i64>, scale: i64, factors: &[(usize, u32)]) -> Self {
        assert!(scale > 0);
        while numer.last() == Some(&0) {
            numer.pop();
        }
        let g = numer.iter().fold(scale, |acc, &c| acc.gcd(&c));
        if g > 1 {
            numer.iter_mut().for_each(|c| *c /= g);
        }
        let mut fs: Vec<(usize, u32)> = Vec::new();
        let mut sorted: Vec<_> = factors.iter().copied().filter(|&(_, k)| k > 0).collect();
        sorted.sort_unstable();
        for (a, k) in sorted {
            assert!(a > 0, "factor 1 - t^0 vanishes");
            match fs.last_mut() {
                Some(last) if last.0 == a => last.1 += k,
                _ => fs.push((a, k)),
            }
        }
        BinomialFraction {
            numer,
            scale: scale / g.max(1),
            factors: fs,
        }
    }

    pub fn numer(&self) -> &[i64] {
        &self.numer
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn factors(&self) -> &[(usize, u32)] {
        &self.factors
    }

    pub fn is_zero(&self) -> bool {
        self.numer.is_empty()
    }

    pub fn numer_degree(&self) -> Option<usize> {
        self.numer.len().checked_sub(1)
    }

    pub fn denom_degree(&self) -> usize {
        self.factors.iter().map(|&(a, k)| a * k as usize).sum()
    }

    /// Pole order at `t = 1` of the denominator.
    pub fn pole_bound(&self) -> usize {
        self.factors.iter().map(|&(_, k)| k as usize).sum()
    }

    /// `lcm` of the exponents `a`, a period of the Taylor coefficients'
    /// quasi-polynomial.
    pub fn period(&self) -> u64 {
        self.factors.iter().fold(1u64, |acc, &(a, _)| acc.lcm(&(a as u64)))
    }

    /// Expanded denominator (without `scale`) as sparse `(degree, coeff)`.
    pub fn denominator_terms(&self) -> Result<Vec<(usize, i64)>> {
        let mut d: Vec<i64> = vec![1];
        for &(a, k) in &self.factors {
            for _ in 0..k {
                let mut next = vec![0i64; d.len() + a];
                for (i, &c) in d.iter().enumerate() {
                    next[i] = next[i].checked_add(c).ok_or(Error::Overflow("denominator"))?;
                    next[i + a] = next[i + a].checked_sub(c).ok_or(Error::Overflow("denominator"))?;
                }
                d = next;
            }
        }
        Ok(d.into_iter().enumerate().filter(|&(_, c)| c != 0).collect())
    }

    /// The polynomial part by long division from the top.
    pub fn polynomial_part(&self) -> Result<Vec<Q>> {
        let dd = self.denom_degree();
        let Some(n) = self.numer_degree() else {
            return Ok(Vec::new());
        };
        if n < dd {
            return Ok(Vec::new());
        }
        let terms = self.denominator_terms()?;
        let lead = terms.last().expect("nonempty").1;
        debug_assert!(lead == 1 || lead == -1);
        let mut r: Vec<i128> = self.numer.iter().map(|&c| c as i128).collect();
        let mut q = vec![0i128; n - dd + 1];
        for k in (0..=n - dd).rev() {
            let c = r[k + dd] * lead as i128;
            if c == 0 {
                continue;
            }
            q[k] = c;
            for &(j, b) in &terms {
                r[k + j] = r[k + j]
                    .checked_sub(c.checked_mul(b as i128).ok_or(Error::Overflow("polynomial part"))?)
                    .ok_or(Error::Overflow("polynomial part"))?;
            }
        }
        let s = BigInt::from(self.scale);
        Ok(q.into_iter().map(|c| Q::new(BigInt::from(c), s.clone())).collect())
    }

    /// `R^pol(1)`.
    pub fn pol_at_one(&self) -> Result<Q> {
        Ok(self.polynomial_part()?.into_iter().sum())
    }

    /// Taylor coefficients `a_0, ..., a_{n-1}`.
    pub fn series_prefix(&self, n: usize) -> Result<Vec<Q>> {
        let terms = self.denominator_terms()?;
        let mut out: Vec<i128> = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = self.numer.get(i).copied().unwrap_or(0) as i128;
            for &(j, b) in terms.iter().skip(1) {
                if j > i {
                    break;
                }
                acc = acc
                    .checked_sub(out[i - j].checked_mul(b as i128).ok_or(Error::Overflow("series"))?)
                    .ok_or(Error::Overflow("series"))?;
            }
            out.push(acc);
        }
        let s = BigInt::from(self.scale);
        Ok(out.into_iter().map(|c| Q::new(BigInt::from(c), s.clone())).collect())
    }

    /// Periodic constant via partial sums of Taylor coefficients.
    pub fn periodic_constant(&self) -> Result<Q> {
        let table = PartialSumTable::new(&self.factors, self.numer_degree().unwrap_or(0))?;
        self.periodic_constant_with(&table)
    }

    /// As [`Self::periodic_constant`], reusing a table built for the same
    /// denominator and a numerator degree at least this one's.
    pub fn periodic_constant_with(&self, table: &PartialSumTable) -> Result<Q> {
        assert_eq!(table.factors, self.factors, "table built for another denominator");
        assert!(self.numer.len() <= table.max_numer_len, "table too short");
        let points: Vec<(Q, Q)> = (table.n0..=table.n0 + table.order as u64 + 1)
            .map(|n| {
                let s = table.partial_sum(&self.numer, (n * table.period) as usize);
                (Q::from_integer(n.into()), Q::new(s, BigInt::from(self.scale)))
            })
            .collect();
        fit_constant_term(&points)
    }

    /// The reduced [`RationalFunction`]: cyclotomic factors of the
    /// denominator are cancelled against the numerator one at a time.
    pub fn to_rational_function(&self) -> RationalFunction<Q> {
        let mut mult: std::collections::BTreeMap<u64, u32> = Default::default();
        let mut sign = 1i64;
        for &(a, k) in &self.factors {
            // 1 - t^a = -Π_{e | a} Φ_e
            if k % 2 == 1 {
                sign = -sign;
            }
            for e in (1..=a as u64).filter(|e| (a as u64).is_multiple_of(*e)) {
                *mult.entry(e).or_default() += k;
            }
        }
        let mut num: Vec<BigInt> = self.numer.iter().map(|&c| BigInt::from(c)).collect();
        for (&e, m) in mult.iter_mut() {
            let ph = cyclotomic_poly(e);
            while *m > 0 {
                match div_exact_int(&num, &ph) {
                    Some(q) => {
                        num = q;
                        *m -= 1;
                    }
                    None => break,
                }
            }
        }
        let mut den = Poly::from_ints(&[sign]);
        for (&e, &m) in &mult {
            den = den.mul(&Poly::from_ints(&cyclotomic_poly(e)).pow(m));
        }
        let s = BigInt::from(self.scale);
        let num = Poly::from_q(num.into_iter().map(|c| Q::new(c, s.clone())).collect());
        if num.is_zero() {
            return RationalFunction::zero(&Q::zero());
        }
        RationalFunction::from_coprime(num, den)
    }
}

/// Periodic constants of fractions sharing one denominator, with a single
/// partial-sum table.
pub fn periodic_constants(fracs: &[BinomialFraction]) -> Result<Vec<Q>> {
    let mut out = Vec::with_capacity(fracs.len());
    let mut tables: Vec<PartialSumTable> = Vec::new();
    let max_deg = fracs.iter().filter_map(BinomialFraction::numer_degree).max().unwrap_or(0);
    for f in fracs {
        let t = match tables.iter().position(|t| t.factors == f.factors) {
            Some(i) => &tables[i],
            None => {
                tables.push(PartialSumTable::new(&f.factors, max_deg)?);
                tables.last().unwrap()
            }
        };
        out.push(f.periodic_constant_with(t)?);
    }
    Ok(out)
}

/// Exact division by a monic integer polynomial, `None` if not divisible.
fn div_exact_int(a: &[BigInt], d: &[i64]) -> Option<Vec<BigInt>> {
    let dd = d.len() - 1;
    if a.is_empty() {
        return Some(Vec::new());
    }
    if a.len() <= dd {
        return None;
    }
    let n = a.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); n - dd + 1];
    for k in (0..=n - dd).rev() {
        let c = std::mem::take(&mut r[k + dd]);
        if c.is_zero() {
            continue;
        }
        for (j, &b) in d.iter().enumerate().take(dd) {
            if b != 0 {
                r[k + j] -= &c * b;
            }
        }
        q[k] = c;
    }
    if r.iter().all(Zero::is_zero) {
        while q.last().is_some_and(Zero::is_zero) {
            q.pop();
        }
        Some(q)
    } else {
        None
    }
}

/// Taylor coefficients of `1 / ((1 - t) Π (1 - t^a)^k)`, shared by every
/// numerator over the same denominator. With them, `Σ_{i<N} a_i` for
/// `numer / D` is a single dot product.
#[derive(Clone, Debug)]
pub struct PartialSumTable {
    factors: Vec<(usize, u32)>,
    period: u64,
    order: usize,
    n0: u64,
    max_numer_len: usize,
    values: Vec<i128>,
}

impl PartialSumTable {
    pub fn new(factors: &[(usize, u32)], max_numer_degree: usize) -> Result<Self> {
        let probe = BinomialFraction::new(vec![1], 1, factors);
        let period = probe.period();
        let order = probe.pole_bound();
        let excess = max_numer_degree.saturating_sub(probe.denom_degree());
        let n0 = excess as u64 / period + 1;
        let len = (period * (n0 + order as u64 + 1)) as usize;
        let mut values = vec![1i128; len];
        for &(a, k) in &probe.factors {
            for _ in 0..k {
                for i in a..len {
                    values[i] = values[i]
                        .checked_add(values[i - a])
                        .ok_or(Error::Overflow("partial sums"))?;
                }
            }
        }
        Ok(PartialSumTable {
            factors: probe.factors,
            period,
            order,
            n0,
            max_numer_len: max_numer_degree + 1,
            values,
        })
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    fn partial_sum(&self, numer: &[i64], upto: usize) -> BigInt {
        let mut acc: i128 = 0;
        let mut big: Option<BigInt> = None;
        for (j, &c) in numer.iter().enumerate().take(upto) {
            if c == 0 {
                continue;
            }
            let v = self.values[upto - 1 - j];
            match (c as i128).checked_mul(v).and_then(|x| acc.checked_add(x)) {
                Some(x) if big.is_none() => acc = x,
                _ => {
                    let b = big.get_or_insert_with(|| BigInt::from(acc));
                    *b += BigInt::from(c) * BigInt::from(v);
                }
            }
        }
        big.unwrap_or_else(|| BigInt::from(acc))
    }
}

impl fmt::Display for BinomialFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = Q::new(BigInt::one(), BigInt::from(self.scale));
        let num = Poly::from_q(self.numer.iter().map(|&c| Q::from_integer(c.into()) * &s).collect());
        let den: Vec<String> = self
            .factors
            .iter()
            .map(|&(a, k)| {
                let base = if a == 1 { "(1 - t)".to_string() } else { format!("(1 - t^{a})") };
                if k == 1 {
                    base
                } else {
                    format!("{base}^{k}")
                }
            })
            .collect();
        if den.is_empty() {
            write!(f, "{num}")
        } else {
            write!(f, "({num}) / {}", den.join(" "))
        }
    }
}

/// Whether `x` fits `i64`; helper for callers converting exact values.
pub fn q_to_i64(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}
