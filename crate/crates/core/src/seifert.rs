//! Star-shaped graphs and Seifert invariants, the Seifert Hilbert series
//! and geometric genus, Brieskorn spheres, and the surgery formula for
//! knots given by their Alexander polynomial.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::PlumbingGraph;
use crate::poly::Poly;
use crate::rational::{serde_q, Q};

/// One leg of a star: `α/ω` is the negative continued fraction of the
/// negated weights read from the center outward.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Leg {
    pub alpha: i64,
    pub omega: i64,
    /// Vertex indices from the center outward.
    pub vertices: Vec<usize>,
}

impl Leg {
    /// The far end `w_i` of the leg.
    pub fn end(&self) -> usize {
        *self.vertices.last().expect("legs are nonempty")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeifertInvariants {
    pub center: usize,
    /// Central weight `b_v`.
    pub b: i64,
    pub legs: Vec<Leg>,
}

impl SeifertInvariants {
    /// `e = b_v + Σ ω_i/α_i`, negative for a negative definite star.
    pub fn euler(&self) -> Q {
        self.legs
            .iter()
            .fold(Q::from_integer(self.b.into()), |acc, l| acc + Q::new(l.omega.into(), l.alpha.into()))
    }

    pub fn alpha_product(&self) -> BigInt {
        self.legs.iter().map(|l| BigInt::from(l.alpha)).product()
    }

    /// `α = lcm(α_i)`.
    pub fn alpha_lcm(&self) -> i64 {
        self.legs.iter().fold(1i64, |acc, l| acc.lcm(&l.alpha))
    }

    /// `|H| = Π α_i · |e|`.
    pub fn h_order(&self) -> BigInt {
        (Q::from_integer(self.alpha_product()) * self.euler().abs()).to_integer()
    }

    /// `o = α |H| / Π α_i`.
    pub fn o(&self) -> i64 {
        let o = BigInt::from(self.alpha_lcm()) * self.h_order() / self.alpha_product();
        o.to_i64().expect("small")
    }

    /// `Π α_i / α`: the series below is in `T = t^s` with `s` this value,
    /// `t` the variable of `H_{σ,v}`.
    pub fn variable_scale(&self) -> i64 {
        (self.alpha_product() / BigInt::from(self.alpha_lcm())).to_i64().expect("small")
    }
}

/// `[k_1, ..., k_s] = k_1 - 1/(k_2 - 1/(... - 1/k_s))`.
pub fn negative_continued_fraction(ks: &[i64]) -> Q {
    let mut x = Q::from_integer(ks[ks.len() - 1].into());
    for &k in ks[..ks.len() - 1].iter().rev() {
        x = Q::from_integer(k.into()) - x.recip();
    }
    x
}

/// The expansion `α/ω = [k_1, ..., k_s]` with all `k_j ≥ 2`, for
/// `0 < ω < α` coprime.
pub fn expand_negative_continued_fraction(alpha: i64, omega: i64) -> Vec<i64> {
    assert!(0 < omega && omega < alpha && alpha.gcd(&omega) == 1);
    let (mut p, mut q) = (alpha, omega);
    let mut out = Vec::new();
    loop {
        let k = Integer::div_ceil(&p, &q);
        out.push(k);
        // p/q = k - q/(kq - p)
        let r = k * q - p;
        if r == 0 {
            return out;
        }
        (p, q) = (q, r);
    }
}

/// Reads the Seifert invariants of a graph that is star-shaped at `v`.
pub fn seifert_from_star(g: &PlumbingGraph, v: usize) -> Result<SeifertInvariants> {
    let not_star = || Error::NotStarShaped(g.id(v).to_string());
    let mut legs = Vec::new();
    for &start in g.neighbors(v) {
        let mut vertices = vec![start];
        let (mut prev, mut cur) = (v, start);
        loop {
            let next: Vec<usize> = g.neighbors(cur).iter().copied().filter(|&w| w != prev).collect();
            match next.as_slice() {
                [] => break,
                [w] => {
                    vertices.push(*w);
                    (prev, cur) = (cur, *w);
                }
                _ => return Err(not_star()),
            }
        }
        let ks: Vec<i64> = vertices.iter().map(|&w| -g.weight(w)).collect();
        if let Some(&w) = vertices.iter().find(|&&w| g.weight(w) > -2) {
            return Err(Error::UnnormalizedLeg(g.id(w).to_string()));
        }
        let x = negative_continued_fraction(&ks);
        legs.push(Leg {
            alpha: x.numer().to_i64().ok_or(Error::Overflow("Seifert α"))?,
            omega: x.denom().to_i64().ok_or(Error::Overflow("Seifert ω"))?,
            vertices,
        });
    }
    Ok(SeifertInvariants {
        center: v,
        b: g.weight(v),
        legs,
    })
}

/// The negative definite star with Seifert invariants `(b, (α_i, ω_i))`.
pub fn star_graph(b: i64, legs: &[(i64, i64)]) -> PlumbingGraph {
    let mut ids = vec!["v".to_string()];
    let mut weights = vec![b];
    let mut edges = Vec::new();
    for (i, &(alpha, omega)) in legs.iter().enumerate() {
        let tag = leg_tag(i);
        let mut prev = 0;
        for (j, k) in expand_negative_continued_fraction(alpha, omega).into_iter().enumerate() {
            ids.push(format!("{tag}{}", j + 1));
            weights.push(-k);
            edges.push((prev, weights.len() - 1));
            prev = weights.len() - 1;
        }
    }
    PlumbingGraph::new(ids, weights, &edges).expect("a star is a tree")
}

fn leg_tag(i: usize) -> String {
    let letters = b"abcdefghijklmnopqrstuwxyz";
    if i < letters.len() {
        (letters[i] as char).to_string()
    } else {
        format!("l{i}_")
    }
}

/// The plumbing graph of `Σ(a, b, c)` and its center: solves
/// `b_v + Σ ω_i/α_i = -1/(abc)` with `0 < ω_i < α_i`.
pub fn brieskorn_graph(a: i64, b: i64, c: i64) -> Result<(PlumbingGraph, usize)> {
    let abc = [a, b, c];
    if abc.iter().any(|&x| x < 2) {
        return Err(Error::OutOfRange(format!("Brieskorn exponents must be at least 2, got {abc:?}")));
    }
    if a.gcd(&b) != 1 || a.gcd(&c) != 1 || b.gcd(&c) != 1 {
        return Err(Error::NotCoprime(abc.to_vec()));
    }
    let n = a * b * c;
    let mut legs = Vec::new();
    let mut sum = 0i64;
    for &alpha in &abc {
        let rest = n / alpha;
        // ω · rest ≡ -1 (mod α)
        let inv = mod_inverse(rest.rem_euclid(alpha), alpha);
        let omega = (-inv).rem_euclid(alpha);
        sum += omega * rest;
        legs.push((alpha, omega));
    }
    let bv = (-1 - sum) / n;
    debug_assert_eq!(bv * n, -1 - sum);
    Ok((star_graph(bv, &legs), 0))
}

fn mod_inverse(x: i64, m: i64) -> i64 {
    let e = x.extended_gcd(&m);
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m)
}

/// The first `n` coefficients (in `T = t^s`, see
/// [`SeifertInvariants::variable_scale`]) of
/// `Σ_{l ≥ -ã/o} max(0, 1 + a - l b_v + Σ ⌊(-l ω_i + a_i)/α_i⌋) T^{ol + ã}`
/// with `ã = α (a + Σ a_i/α_i)`, for `l' = a E*_v + Σ a_i E*_{w_i}`.
pub fn hilbert_series_seifert(s: &SeifertInvariants, a: i64, a_legs: &[i64], n: usize) -> Result<Vec<i64>> {
    if n == 0 {
        return Err(Error::OutOfRange("series length must be positive".into()));
    }
    if a_legs.len() != s.legs.len() {
        return Err(Error::BadSpinC(format!(
            "{} leg coefficients for {} legs",
            a_legs.len(),
            s.legs.len()
        )));
    }
    if a < 0 || s.legs.iter().zip(a_legs).any(|(l, &ai)| ai < 0 || ai >= l.alpha) {
        return Err(Error::BadSpinC(
            "need a ≥ 0 and 0 ≤ a_i < α_i for the Seifert representative".into(),
        ));
    }
    let alpha = s.alpha_lcm();
    let a_tilde = alpha * a + s.legs.iter().zip(a_legs).map(|(l, &ai)| ai * (alpha / l.alpha)).sum::<i64>();
    let o = s.o();
    let mut out = vec![0i64; n];
    let mut l = Integer::div_ceil(&-a_tilde, &o);
    loop {
        let exp = o * l + a_tilde;
        if exp >= n as i64 {
            break;
        }
        let mut c = 1 + a - l * s.b;
        for (leg, &ai) in s.legs.iter().zip(a_legs) {
            c += Integer::div_floor(&(-l * leg.omega + ai), &leg.alpha);
        }
        out[exp as usize] += c.max(0);
        l += 1;
    }
    Ok(out)
}

/// `p_g = Σ_{l ≥ 0} max(0, -1 + l b_v - Σ ⌊-l ω_i/α_i⌋)`.
///
/// The summand is at most `-1 + r + l e` with `r` the number of legs, so
/// only `l ≤ (r - 1)/|e|` can contribute.
pub fn pg_seifert(s: &SeifertInvariants) -> Result<i64> {
    let e = s.euler();
    if !e.is_negative() {
        return Err(Error::NotNegativeDefinite);
    }
    let r = s.legs.len() as i64;
    let cutoff = (Q::from_integer((r - 1).max(0).into()) / e.abs()).floor().to_integer();
    let cutoff = cutoff.to_i64().ok_or(Error::Overflow("p_g cutoff"))?;
    let mut total = 0i64;
    for l in 0..=cutoff {
        let mut c = -1 + l * s.b;
        for leg in &s.legs {
            c -= Integer::div_floor(&(-l * leg.omega), &leg.alpha);
        }
        total += c.max(0);
    }
    Ok(total)
}

/// `#{(x, y, z) ∈ Z³_{≥1} : x/a + y/b + z/c < 1}`.
pub fn lattice_point_count(a: i64, b: i64, c: i64) -> u64 {
    assert!(a >= 1 && b >= 1 && c >= 1);
    let n = a * b * c;
    let mut count = 0;
    for x in 1..a {
        for y in 1..b {
            for z in 1..c {
                if x * b * c + y * a * c + z * a * b < n {
                    count += 1;
                }
            }
        }
    }
    count
}

/// `Δ(t) = 1 + (t - 1) μ/2 + (t - 1)² Σ_l a_l t^l`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlexanderData {
    pub delta: Vec<i64>,
    pub mu: i64,
    pub a: Vec<i64>,
}

impl AlexanderData {
    /// From the coefficients of `Δ`, lowest degree first; requires `Δ(1) = 1`.
    pub fn new(delta: Vec<i64>) -> Result<Self> {
        if delta.iter().sum::<i64>() != 1 {
            return Err(Error::OutOfRange("Alexander polynomial must satisfy Δ(1) = 1".into()));
        }
        let mu = 2 * delta.iter().enumerate().map(|(i, &c)| i as i64 * c).sum::<i64>();
        let d = Poly::from_ints(&delta);
        let rest = d.sub(&Poly::from_ints(&[1 - mu / 2, mu / 2]));
        let (quot, rem) = rest.div_rem(&Poly::from_ints(&[1, -2, 1]));
        debug_assert!(rem.is_zero());
        let a = quot
            .coeffs()
            .iter()
            .map(|c| c.to_integer().to_i64().ok_or(Error::Overflow("Alexander coefficients")))
            .collect::<Result<Vec<_>>>()?;
        Ok(AlexanderData { delta, mu, a })
    }
}

/// `Δ = (t^{pq} - 1)(t - 1) / ((t^p - 1)(t^q - 1))` for the `(p, q)` torus knot.
pub fn alexander_torus_knot(p: i64, q: i64) -> Result<AlexanderData> {
    if p < 2 || q < 2 {
        return Err(Error::OutOfRange(format!("torus knot parameters must be at least 2, got ({p}, {q})")));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::NotCoprime(vec![p, q]));
    }
    let binom = |k: i64| {
        let mut v = vec![0i64; k as usize + 1];
        v[0] = -1;
        v[k as usize] = 1;
        Poly::from_ints(&v)
    };
    let num = binom(p * q).mul(&binom(1));
    let (quot, rem) = num.div_rem(&binom(p).mul(&binom(q)));
    debug_assert!(rem.is_zero());
    let delta = quot
        .coeffs()
        .iter()
        .map(|c| c.to_integer().to_i64().expect("small"))
        .collect();
    AlexanderData::new(delta)
}

/// `sw = -Σ_{l ≥ 0} a_{q + ld} + (μ - 2 + d - 2q)²/(8d) - 1/8` for the
/// structure `[q E*_v] * σ_can` on `S³_{-d}(K)`.
pub fn sw_knot_surgery(k: &AlexanderData, d: i64, q: i64) -> Result<Q> {
    if d < 1 {
        return Err(Error::OutOfRange(format!("surgery coefficient must be positive, got {d}")));
    }
    if !(0..d).contains(&q) {
        return Err(Error::OutOfRange(format!("need 0 ≤ q < d, got q = {q}, d = {d}")));
    }
    let tail: i64 = k.a.iter().skip(q as usize).step_by(d as usize).sum();
    let s = k.mu - 2 + d - 2 * q;
    Ok(Q::from_integer((-tail).into()) + Q::new((s * s).into(), (8 * d).into()) - Q::new(1.into(), 8.into()))
}

/// Summary printed by the `seifert` command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeifertSummary {
    pub b: i64,
    pub legs: Vec<(i64, i64)>,
    #[serde(with = "serde_q")]
    pub euler: Q,
    pub h_order: String,
    pub alpha: i64,
    pub o: i64,
    pub variable_scale: i64,
    pub pg: i64,
}

impl SeifertSummary {
    pub fn new(s: &SeifertInvariants) -> Result<Self> {
        Ok(SeifertSummary {
            b: s.b,
            legs: s.legs.iter().map(|l| (l.alpha, l.omega)).collect(),
            euler: s.euler(),
            h_order: s.h_order().to_string(),
            alpha: s.alpha_lcm(),
            o: s.o(),
            variable_scale: s.variable_scale(),
            pg: pg_seifert(s)?,
        })
    }
}

/// Whether the leg data reproduce the weights `-k_j` of the graph.
pub fn legs_consistent(g: &PlumbingGraph, s: &SeifertInvariants) -> bool {
    s.legs.iter().all(|l| {
        let ks = expand_negative_continued_fraction(l.alpha, l.omega);
        ks.len() == l.vertices.len() && ks.iter().zip(&l.vertices).all(|(k, &w)| g.weight(w) == -k)
    }) && !s.h_order().is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn continued_fractions() {
        assert_eq!(negative_continued_fraction(&[2]), Q::from_integer(2.into()));
        assert_eq!(negative_continued_fraction(&[2, 2]), Q::new(3.into(), 2.into()));
        assert_eq!(expand_negative_continued_fraction(3, 2), vec![2, 2]);
        assert_eq!(expand_negative_continued_fraction(7, 3), vec![3, 2, 2]);
    }

    #[test]
    fn brieskorn_round_trip() {
        for (a, b, c) in [(2, 3, 5), (2, 3, 7), (2, 5, 7), (3, 4, 5)] {
            let (g, v) = brieskorn_graph(a, b, c).unwrap();
            assert_eq!(g.determinant(), BigInt::from(1));
            let s = seifert_from_star(&g, v).unwrap();
            let mut alphas: Vec<i64> = s.legs.iter().map(|l| l.alpha).collect();
            alphas.sort();
            assert_eq!(alphas, vec![a, b, c]);
            assert!(legs_consistent(&g, &s));
        }
        let (g, _) = brieskorn_graph(2, 3, 7).unwrap();
        assert_eq!(g.weights(), &[-1, -2, -3, -7]);
        assert_eq!(brieskorn_graph(2, 3, 4).unwrap_err(), Error::NotCoprime(vec![2, 3, 4]));
    }

    #[test]
    fn pg_and_lattice_points() {
        assert_eq!(lattice_point_count(2, 3, 5), 0);
        assert_eq!(lattice_point_count(2, 3, 7), 1);
        assert_eq!(lattice_point_count(1, 5, 7), 0);
        for (a, b, c) in [(2, 3, 5), (2, 3, 7), (2, 3, 11), (3, 4, 5), (2, 5, 7)] {
            let (g, v) = brieskorn_graph(a, b, c).unwrap();
            let s = seifert_from_star(&g, v).unwrap();
            assert_eq!(pg_seifert(&s).unwrap() as u64, lattice_point_count(a, b, c));
        }
    }

    #[test]
    fn poincare_sphere_series() {
        let (g, v) = brieskorn_graph(2, 3, 5).unwrap();
        let s = seifert_from_star(&g, v).unwrap();
        let c = hilbert_series_seifert(&s, 0, &[0, 0, 0], 31).unwrap();
        // (1 - t^30)/((1 - t^15)(1 - t^10)(1 - t^6))
        let nonzero: Vec<usize> = (0..31).filter(|&i| c[i] != 0).collect();
        assert_eq!(nonzero, vec![0, 6, 10, 12, 15, 16, 18, 20, 21, 22, 24, 25, 26, 27, 28, 30]);
        // x², y³, z⁵ span degree 30 modulo one relation
        assert_eq!(c[30], 2);
    }

    #[test]
    fn alexander() {
        let t = alexander_torus_knot(2, 3).unwrap();
        assert_eq!(t.delta, vec![1, -1, 1]);
        assert_eq!(t.mu, 2);
        assert_eq!(t.a, vec![1]);
        assert_eq!(sw_knot_surgery(&t, 1, 0).unwrap(), Q::from_integer((-1).into()));
        assert!(sw_knot_surgery(&t, 3, 3).is_err());
        for p in 2..=7 {
            for q in 2..=7 {
                if p.gcd(&q) == 1 {
                    let k = alexander_torus_knot(p, q).unwrap();
                    assert_eq!(k.delta.iter().sum::<i64>(), 1);
                    assert_eq!(k.mu, (p - 1) * (q - 1));
                }
            }
        }
    }
}
