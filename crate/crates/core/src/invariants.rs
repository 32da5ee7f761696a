//! Spin^c structures and the invariants of the plumbed manifold: canonical
//! class, Casson–Walker invariant, P-functions and their limits at `t = 1`,
//! Reidemeister–Turaev torsion, Seiberg–Witten invariant and the twisted
//! zeta functions `H_{σ,u}`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::cyclotomic::{characters, cyclotomic_poly, phi, ramanujan_sums, Character, CyclotomicNumber};
use crate::error::{Error, Result};
use crate::lattice::{GroupElement, Lattice, LatticeVector};
use crate::poly::Poly;
use crate::ratfunc::{BinomialFraction, RationalFunction};
use crate::rational::{qi, Q};

/// A Spin^c structure `σ = h * σ_can` on the boundary, stored as `h`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinC {
    lattice: Arc<Lattice>,
    h: GroupElement,
}

impl SpinC {
    pub fn new(lattice: &Arc<Lattice>, h: GroupElement) -> Result<Self> {
        let orders = lattice.group().orders();
        if h.0.len() != orders.len() || h.0.iter().zip(orders).any(|(x, d)| x >= d) {
            return Err(Error::BadSpinC(format!("{h} is not a reduced element of H")));
        }
        Ok(SpinC {
            lattice: Arc::clone(lattice),
            h,
        })
    }

    pub fn canonical(lattice: &Arc<Lattice>) -> Self {
        SpinC {
            lattice: Arc::clone(lattice),
            h: lattice.group().zero(),
        }
    }

    /// The structure with the given index in the enumeration of `H`.
    pub fn from_index(lattice: &Arc<Lattice>, index: u64) -> Result<Self> {
        let n = lattice.group().order();
        if index >= n {
            return Err(Error::IndexOutOfRange {
                index: index as usize,
                len: n as usize,
            });
        }
        Ok(SpinC {
            lattice: Arc::clone(lattice),
            h: lattice.group().element(index),
        })
    }

    /// All `|H|` structures, canonical first.
    pub fn all(lattice: &Arc<Lattice>) -> Vec<SpinC> {
        lattice
            .group()
            .elements()
            .map(|h| SpinC {
                lattice: Arc::clone(lattice),
                h,
            })
            .collect()
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn h(&self) -> &GroupElement {
        &self.h
    }

    pub fn index(&self) -> u64 {
        self.lattice.group().index_of(&self.h)
    }

    pub fn is_canonical(&self) -> bool {
        self.h.is_zero()
    }

    /// The extension `l' = rep_in_R(h)`, all E-coordinates in `(-1, 0]`.
    pub fn extension(&self) -> SpinCExtension {
        SpinCExtension {
            l: self.lattice.rep_in_r(&self.h),
        }
    }
}

/// A Spin^c structure `σ̃ = l' * σ̃_can` on the plumbed 4-manifold.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinCExtension {
    l: LatticeVector,
}

impl SpinCExtension {
    pub fn new(l: LatticeVector) -> Result<Self> {
        if !l.is_dual_integral() {
            return Err(Error::BadSpinC(format!("{} is not in L'", l.format_dual())));
        }
        Ok(SpinCExtension { l })
    }

    pub fn canonical(lattice: &Arc<Lattice>) -> Self {
        SpinCExtension { l: lattice.zero() }
    }

    pub fn l_prime(&self) -> &LatticeVector {
        &self.l
    }

    /// `c₁(σ̃) = K + 2l'`.
    pub fn chern(&self) -> LatticeVector {
        let k = canonical_chern(self.l.lattice());
        k.add(&self.l.scale(&Q::from_integer(2.into()))).expect("same lattice")
    }

    /// The boundary structure `[l'] * σ_can`.
    pub fn restriction(&self) -> SpinC {
        SpinC {
            lattice: Arc::clone(self.l.lattice()),
            h: self.l.class().expect("integral by construction"),
        }
    }

    /// `(l', E*_v)`.
    pub fn r(&self, v: usize) -> Q {
        self.l.e_coords()[v].clone()
    }
}

/// `K = Σ_w E_w - Σ_w (δ_w - 2) E*_w`.
pub fn canonical_chern(lat: &Arc<Lattice>) -> LatticeVector {
    let n = lat.len();
    let mut k = lat.zero();
    for w in 0..n {
        k = k.add(&lat.e(w)).expect("same lattice");
    }
    for w in 0..n {
        let c = Q::from_integer((lat.degree(w) as i64 - 2).into());
        k = k.sub(&lat.e_star(w).scale(&c)).expect("same lattice");
    }
    k
}

/// `(c₁(σ̃)² + |V|) / 8`.
pub fn k_term(ext: &SpinCExtension) -> Q {
    let c = ext.chern();
    (c.square() + Q::from_integer((c.lattice().len() as i64).into())) / Q::from_integer(8.into())
}

/// `λ` from `-24λ/|H| = Σ b_w + 3|V| + (1/|H|) Σ (δ_w - 2) a_ww`.
pub fn casson_walker(lat: &Lattice) -> Q {
    let d = qi(lat.det());
    let n = lat.len();
    let sum_b: i64 = lat.graph().weights().iter().sum();
    let corr: BigInt = (0..n)
        .map(|w| BigInt::from(lat.degree(w) as i64 - 2) * lat.a(w, w))
        .sum();
    let rhs = Q::from_integer((sum_b + 3 * n as i64).into()) + qi(&corr) / &d;
    -rhs * d / Q::from_integer(24.into())
}

fn a_u64(lat: &Lattice, u: usize, w: usize) -> Result<u64> {
    lat.a(u, w).to_u64().ok_or(Error::Overflow("a_uw"))
}

/// `P_{ρ,u}(t) = Π_w (1 - ρ([E*_w]) t^{a_wu})^{δ_w - 2}` in factored form.
#[derive(Clone, Debug)]
pub struct PFunction {
    conductor: u64,
    /// `(k, a, e)` for the factor `(1 - ζ^k t^a)^e`, `ζ = ζ_conductor`.
    factors: Vec<(u64, u64, i64)>,
}

impl PFunction {
    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn factors(&self) -> &[(u64, u64, i64)] {
        &self.factors
    }

    /// Order of vanishing at `t = 1`; negative for a pole.
    pub fn order_at_one(&self) -> i64 {
        self.factors.iter().filter(|f| f.0 == 0).map(|f| f.2).sum()
    }

    pub fn to_rational_function(&self) -> RationalFunction<CyclotomicNumber> {
        let m = self.conductor;
        let one = CyclotomicNumber::one(m);
        let mut num = Poly::one(&one);
        let mut den = Poly::one(&one);
        for &(k, a, e) in &self.factors {
            let f = Poly::one_minus(&CyclotomicNumber::root(m, k as i64), a as usize);
            if e > 0 {
                num = num.mul(&f.pow(e as u32));
            } else {
                den = den.mul(&f.pow((-e) as u32));
            }
        }
        RationalFunction::new(num, den).expect("nonzero denominator")
    }
}

pub fn p_function(lat: &Lattice, rho: &Character, u: usize) -> Result<PFunction> {
    let group = lat.group();
    let mut factors = Vec::new();
    for w in 0..lat.len() {
        let e = lat.degree(w) as i64 - 2;
        if e != 0 {
            let k = rho.exponent_of(&group.class_of_e_star(w));
            factors.push((k, a_u64(lat, u, w)?, e));
        }
    }
    Ok(PFunction {
        conductor: group.exponent(),
        factors,
    })
}

/// `n(ρ) = Σ_{ρ([E*_w]) = 1} (δ_w - 2)`, the order of `P_{ρ,u}` at `t = 1`.
pub fn vanishing_order(lat: &Lattice, rho: &Character) -> i64 {
    let group = lat.group();
    (0..lat.len())
        .filter(|&w| rho.exponent_of(&group.class_of_e_star(w)) == 0)
        .map(|w| lat.degree(w) as i64 - 2)
        .sum()
}

/// `P_{ρ,u}(1)`: zero when `n > 0`, otherwise the product
/// `Π_{ρ_w ≠ 1} (1 - ρ_w)^{δ_w - 2} · Π_{ρ_w = 1} a_uw^{δ_w - 2}`.
pub fn p_limit_at_one(lat: &Lattice, rho: &Character, u: usize) -> Result<CyclotomicNumber> {
    let m = lat.group().exponent();
    let n = vanishing_order(lat, rho);
    if n < 0 {
        return Err(Error::PoleAtOne(n));
    }
    if n > 0 {
        return Ok(CyclotomicNumber::zero(m));
    }
    let group = lat.group();
    let mut out = CyclotomicNumber::one(m);
    let mut trivial_part = Q::from_integer(1.into());
    for w in 0..lat.len() {
        let e = lat.degree(w) as i64 - 2;
        if e == 0 {
            continue;
        }
        let k = rho.exponent_of(&group.class_of_e_star(w)) as i64;
        if k == 0 {
            let a = qi(lat.a(u, w));
            trivial_part *= crate::rational::qpow(&a, e);
        } else {
            let base = if e > 0 {
                CyclotomicNumber::one(m).sub(&CyclotomicNumber::root(m, k))
            } else {
                CyclotomicNumber::inv_one_minus_root(m, k)
            };
            for _ in 0..e.abs() {
                out = out.mul(&base);
            }
        }
    }
    Ok(out.scale(&trivial_part))
}

/// Vertices `u` with `ρ([E*_u]) ≠ 1` or with a neighbor `w` where
/// `ρ([E*_w]) ≠ 1`.
pub fn admissible_vertices(lat: &Lattice, rho: &Character) -> Vec<usize> {
    let group = lat.group();
    let nontrivial: Vec<bool> = (0..lat.len())
        .map(|w| rho.exponent_of(&group.class_of_e_star(w)) != 0)
        .collect();
    (0..lat.len())
        .filter(|&u| nontrivial[u] || lat.graph().neighbors(u).iter().any(|&w| nontrivial[w]))
        .collect()
}

/// The first admissible vertex in file order.
pub fn u_rho(lat: &Lattice, rho: &Character) -> usize {
    *admissible_vertices(lat, rho)
        .first()
        .expect("a nontrivial character is nontrivial on some E*_w")
}

/// Nontrivial characters grouped into Galois orbits `{ρ^j}` that share one
/// vertex `u`, with the limit `P_{ρ,u}(1)` of the first member. The other
/// limits are its conjugates, since `u` only enters through `a_uw` and the
/// set where `ρ_w = 1` is the same along an orbit.
pub struct OrbitLimits {
    pub members: Vec<(Character, u64)>,
    pub u: usize,
    pub limit: CyclotomicNumber,
    /// Whether `members` is the whole orbit.
    pub complete: bool,
}

impl OrbitLimits {
    /// `P_{ρ^j,u}(1)` for the `i`-th member.
    pub fn member_limit(&self, i: usize) -> CyclotomicNumber {
        let (_, j) = &self.members[i];
        let m = self.limit.conductor();
        // a unit mod m congruent to j mod the order of ρ
        let e = self.members[0].0.order();
        let lift = (0..).map(|t| j + t * e).find(|x| x.gcd(&m) == 1).expect("a unit exists");
        self.limit.conjugate(lift % m.max(1))
    }
}

/// Characters of one Galois orbit with the exponents `j` of `ρ^j`.
type Orbit = Vec<(Character, u64)>;

/// The limits `P_{ρ,u_ρ}(1)` for every nontrivial character, with `u_ρ`
/// chosen by `choose`, one computation per Galois orbit. An orbit on which
/// `choose` is not constant is split into singletons.
pub fn torsion_limits(
    lat: &Lattice,
    choose: &(dyn Fn(&Character) -> usize + Sync),
) -> Result<Vec<OrbitLimits>> {
    let chars = characters(lat.group());
    // (members, u, complete)
    let mut work: Vec<(Orbit, usize, bool)> = Vec::new();
    for (rep, members) in galois_orbits(&chars) {
        if chars[rep].is_trivial() {
            continue;
        }
        let us: Vec<usize> = members.iter().map(|&(i, _)| choose(&chars[i])).collect();
        if us.iter().all(|&u| u == us[0]) {
            work.push((members.iter().map(|&(i, j)| (chars[i].clone(), j)).collect(), us[0], true));
        } else {
            for (&(i, _), &u) in members.iter().zip(&us) {
                work.push((vec![(chars[i].clone(), 1)], u, false));
            }
        }
    }
    work.into_par_iter()
        .map(|(members, u, complete)| {
            let limit = p_limit_at_one(lat, &members[0].0, u)?;
            Ok(OrbitLimits {
                members,
                u,
                limit,
                complete,
            })
        })
        .collect()
}

/// `T_σ = (1/|H|) Σ_{ρ≠1} ρ(h)^{-1} P_{ρ,u_ρ}(1)` for every `σ`, indexed
/// like [`SpinC::all`].
///
/// For small groups each aggregate is assembled in `Z[x]/(x^m - 1)`,
/// reduced modulo `Φ_m` and must come out rational. Beyond
/// [`GROUP_RING_BUDGET`] an orbit contributes the trace of
/// `ρ(h)^{-1} P_{ρ,u}(1)` instead, which is rational by construction.
pub fn torsion_all(lat: &Lattice) -> Result<Vec<Q>> {
    torsion_all_with(lat, &|rho| u_rho(lat, rho))
}

/// Work bound `|H| · #characters · m` for the group-ring route.
pub const GROUP_RING_BUDGET: u64 = 20_000_000;

pub fn torsion_all_with(
    lat: &Lattice,
    choose: &(dyn Fn(&Character) -> usize + Sync),
) -> Result<Vec<Q>> {
    let orbits = torsion_limits(lat, choose)?;
    let group = lat.group();
    let order = group.order();
    let m = group.exponent();
    let whole = orbits.iter().all(|o| o.complete);
    if whole && order.saturating_mul(order).saturating_mul(m) > GROUP_RING_BUDGET {
        let sums = ramanujan_sums(m);
        let elements: Vec<GroupElement> = group.elements().collect();
        return Ok(elements
            .into_par_iter()
            .map(|h| {
                let total: Q = orbits
                    .iter()
                    .map(|o| {
                        let rho = &o.members[0].0;
                        let k = rho.exponent_of(&h);
                        // Tr_{Q(ζ_e)} = Tr_{Q(ζ_m)} / [Q(ζ_m) : Q(ζ_e)]
                        o.limit.trace_shifted(&sums, k) * Q::new(phi(rho.order()).into(), phi(m).into())
                    })
                    .sum();
                total / Q::from_integer(order.into())
            })
            .collect());
    }
    torsion_group_ring(lat, &orbits)
}

fn torsion_group_ring(lat: &Lattice, orbits: &[OrbitLimits]) -> Result<Vec<Q>> {
    let group = lat.group();
    let m = group.exponent();
    let order = BigInt::from(group.order());
    let limits: Vec<(Character, CyclotomicNumber)> = orbits
        .par_iter()
        .flat_map_iter(|o| (0..o.members.len()).map(move |i| (o.members[i].0.clone(), o.member_limit(i))))
        .collect();
    // common denominator of all limits
    let den = limits
        .iter()
        .flat_map(|(_, l)| l.coeffs())
        .fold(BigInt::from(1), |acc, c| acc.lcm(c.denom()));
    let scaled: Vec<(Character, Vec<BigInt>)> = limits
        .into_iter()
        .map(|(rho, l)| {
            let v = l.coeffs().iter().map(|c| (c * qi(&den)).to_integer()).collect();
            (rho, v)
        })
        .collect();
    group
        .elements()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|h| {
            let mut acc = vec![BigInt::zero(); m as usize];
            for (rho, v) in &scaled {
                let shift = (m - rho.exponent_of(&h)) % m;
                for (i, c) in v.iter().enumerate() {
                    if !c.is_zero() {
                        acc[(i as u64 + shift) as usize % m as usize] += c;
                    }
                }
            }
            let total = CyclotomicNumber::from_int_poly(m, acc, &den * &order);
            total.as_rational()
        })
        .collect()
}

/// `T_σ` for one structure, summing traces over Galois orbits.
pub fn torsion(sigma: &SpinC) -> Result<Q> {
    let lat = sigma.lattice();
    let group = lat.group();
    let m = group.exponent();
    let sums = ramanujan_sums(m);
    let orbits = torsion_limits(lat, &|rho| u_rho(lat, rho))?;
    let total: Q = orbits
        .iter()
        .map(|o| {
            let rho = &o.members[0].0;
            o.limit.trace_shifted(&sums, rho.exponent_of(sigma.h())) * Q::new(phi(rho.order()).into(), phi(m).into())
        })
        .sum();
    Ok(total / Q::from_integer(group.order().into()))
}

/// `sw_σ = λ/|H| - T_σ`.
pub fn sw(sigma: &SpinC) -> Result<Q> {
    let lat = sigma.lattice();
    Ok(casson_walker(lat) / qi(lat.det()) - torsion(sigma)?)
}

/// Per vertex data entering the twisted zeta function at a fixed `u`.
struct ZetaFactor {
    class: GroupElement,
    a: u64,
    exponent: i64,
    order: u64,
}

fn zeta_factors(lat: &Lattice, u: usize) -> Result<Vec<ZetaFactor>> {
    let group = lat.group();
    (0..lat.len())
        .filter(|&w| lat.degree(w) != 2)
        .map(|w| {
            let class = group.class_of_e_star(w);
            let order = group.element_order(&class);
            Ok(ZetaFactor {
                class,
                a: a_u64(lat, u, w)?,
                exponent: lat.degree(w) as i64 - 2,
                order,
            })
        })
        .collect()
}

/// The common denominator `Π_{δ_w < 2} (1 - t^{a_wu o_w})^{2 - δ_w}`, `o_w`
/// the order of `[E*_w]`.
pub fn zeta_denominator(lat: &Lattice, u: usize) -> Result<Vec<(usize, u32)>> {
    Ok(zeta_factors(lat, u)?
        .iter()
        .filter(|f| f.exponent < 0)
        .map(|f| ((f.a * f.order) as usize, (-f.exponent) as u32))
        .collect())
}

/// Numerator of `P_{ρ,u}` over the common denominator, with coefficients
/// in the group ring `Z[x]/(x^m - 1)` (`x ↦ ζ_m`). Flat: `t^j x^k` at
/// `j * m + k`.
fn zeta_numerator(factors: &[ZetaFactor], rho: &Character, m: usize, deg: usize) -> Vec<i64> {
    let mut n = vec![0i64; (deg + 1) * m];
    n[0] = 1;
    let mut cur = 0usize;
    let mut scratch = vec![0i64; (deg + 1) * m];
    for f in factors {
        let k = rho.exponent_of(&f.class) as usize;
        let a = f.a as usize;
        if f.exponent > 0 {
            for _ in 0..f.exponent {
                // multiply by 1 - x^k t^a
                for j in (a..=cur + a).rev() {
                    let (lo, hi) = n.split_at_mut(j * m);
                    let src = &lo[(j - a) * m..(j - a + 1) * m];
                    for (i, &c) in src.iter().enumerate() {
                        if c != 0 {
                            hi[(i + k) % m] -= c;
                        }
                    }
                }
                cur += a;
            }
        } else {
            let o = f.order as usize;
            for _ in 0..(-f.exponent) {
                // multiply by Σ_{i<o} x^{ik} t^{ia}:
                // M[j] = N[j] - N[j - a o] + x^k M[j - a]
                let top = cur + a * (o - 1);
                scratch[..(top + 1) * m].fill(0);
                for j in 0..=top {
                    let row = j * m;
                    if j <= cur {
                        scratch[row..row + m].copy_from_slice(&n[row..row + m]);
                    }
                    if j >= a * o && j - a * o <= cur {
                        let src = (j - a * o) * m;
                        for i in 0..m {
                            scratch[row + i] -= n[src + i];
                        }
                    }
                    if j >= a {
                        let (lo, hi) = scratch.split_at_mut(row);
                        let src = &lo[(j - a) * m..(j - a + 1) * m];
                        for (i, &c) in src.iter().enumerate() {
                            if c != 0 {
                                hi[(i + k) % m] += c;
                            }
                        }
                    }
                }
                cur = top;
                std::mem::swap(&mut n, &mut scratch);
            }
        }
    }
    debug_assert_eq!(cur, deg);
    n
}

/// Splits the characters into Galois orbits `{ρ^j : gcd(j, ord ρ) = 1}`;
/// returns `(representative, [(member index, j)])`.
fn galois_orbits(chars: &[Character]) -> Vec<(usize, Vec<(usize, u64)>)> {
    let index: HashMap<&[u64], usize> = chars
        .iter()
        .enumerate()
        .map(|(i, c)| (c.exponents(), i))
        .collect();
    let mut seen = vec![false; chars.len()];
    let mut out = Vec::new();
    for (i, rho) in chars.iter().enumerate() {
        if seen[i] {
            continue;
        }
        let e = rho.order();
        let mut members = Vec::new();
        for j in (1..=e.max(1)).filter(|j| j.gcd(&e.max(1)) == 1) {
            let c = rho.pow(j as i64);
            let idx = index[c.exponents()];
            if !seen[idx] {
                seen[idx] = true;
                members.push((idx, j));
            }
        }
        out.push((i, members));
    }
    out
}

/// `H_{σ,u}(t) = (1/|H|) Σ_ρ ρ(h_σ)^{-1} P_{ρ,u}(t)` for every `σ`,
/// indexed like [`SpinC::all`].
///
/// Each `P_{ρ,u}` is expanded over the common denominator with
/// group-ring coefficients; conjugate characters share one expansion via
/// `x ↦ x^j`. Every coefficient of the average is reduced modulo `Φ_m`
/// and must be rational, otherwise [`Error::NotRational`] is returned.
/// Past [`HILBERT_CHARACTER_BUDGET`] the numerators come from
/// [`hilbert_all_direct`] instead.
pub fn hilbert_all(lat: &Lattice, u: usize) -> Result<Vec<BinomialFraction>> {
    let elements: Vec<GroupElement> = lat.group().elements().collect();
    hilbert_for(lat, u, &elements)
}

pub fn hilbert_h(sigma: &SpinC, u: usize) -> Result<BinomialFraction> {
    let mut v = hilbert_for(sigma.lattice(), u, std::slice::from_ref(sigma.h()))?;
    Ok(v.pop().expect("one element"))
}

fn hilbert_for(lat: &Lattice, u: usize, targets: &[GroupElement]) -> Result<Vec<BinomialFraction>> {
    if u >= lat.len() {
        return Err(Error::IndexOutOfRange {
            index: u,
            len: lat.len(),
        });
    }
    let group = lat.group();
    let m = group.exponent() as usize;
    let order = group.order();
    let factors = zeta_factors(lat, u)?;
    let denominator = zeta_denominator(lat, u)?;
    let deg = numerator_degree(&factors);
    let mut bound: u128 = order as u128;
    for f in &factors {
        let e = f.exponent.unsigned_abs() as u32;
        if f.exponent > 0 {
            bound = bound.saturating_mul(1u128 << e.min(100));
        } else {
            bound = bound.saturating_mul((f.order as u128).saturating_pow(e));
        }
    }
    if bound > i64::MAX as u128 || (deg + 1).saturating_mul(m.max(order as usize)) > 1 << 28 {
        return Err(Error::Overflow("twisted zeta numerator"));
    }
    if character_work(targets.len(), order, deg, m) > HILBERT_CHARACTER_BUDGET as u128 {
        return Ok(direct_numerators(lat, &factors, deg, targets)
            .into_iter()
            .map(|n| BinomialFraction::new(n, 1, &denominator))
            .collect());
    }
    let chars = characters(group);
    let orbits = galois_orbits(&chars);
    let reps: Vec<Vec<i64>> = orbits
        .par_iter()
        .map(|(rep, _)| zeta_numerator(&factors, &chars[*rep], m, deg))
        .collect();
    let phi_m = cyclotomic_poly(m as u64);
    targets
        .par_iter()
        .map(|h| {
            let mut acc = vec![0i64; (deg + 1) * m];
            for ((_, members), numer) in orbits.iter().zip(&reps) {
                for &(idx, j) in members {
                    let shift = (m as u64 - chars[idx].exponent_of(h)) % m as u64;
                    // x^k ↦ x^{jk + shift}
                    let map: Vec<usize> = (0..m as u64).map(|k| ((j * k + shift) % m as u64) as usize).collect();
                    for (row_in, row_out) in numer.chunks_exact(m).zip(acc.chunks_exact_mut(m)) {
                        for (k, &c) in row_in.iter().enumerate() {
                            if c != 0 {
                                row_out[map[k]] += c;
                            }
                        }
                    }
                }
            }
            let mut coeffs = Vec::with_capacity(deg + 1);
            for (j, row) in acc.chunks_exact(m).enumerate() {
                coeffs.push(descend(row, &phi_m).map_err(|e| match e {
                    Error::NotRational(mut c) => {
                        c.insert(0, format!("t^{j}"));
                        Error::NotRational(c)
                    }
                    e => e,
                })?);
            }
            Ok(BinomialFraction::new(coeffs, order as i64, &denominator))
        })
        .collect()
}

/// Work bound `#targets · |H| · (deg + 1) · m` for the character route of
/// [`hilbert_all`].
pub const HILBERT_CHARACTER_BUDGET: u64 = 2_000_000_000;

fn character_work(targets: usize, order: u64, deg: usize, m: usize) -> u128 {
    targets as u128 * order as u128 * (deg as u128 + 1) * m as u128
}

fn numerator_degree(factors: &[ZetaFactor]) -> usize {
    factors
        .iter()
        .map(|f| {
            let e = f.exponent.unsigned_abs() as usize;
            if f.exponent > 0 {
                f.a as usize * e
            } else {
                (f.a * (f.order - 1)) as usize * e
            }
        })
        .sum()
}

/// Whether [`hilbert_all`] at `u` averages over characters (and so passes
/// every coefficient through the rationality check) rather than expanding
/// in `Z[H][t]`.
pub fn hilbert_uses_characters(lat: &Lattice, u: usize) -> Result<bool> {
    let group = lat.group();
    let deg = numerator_degree(&zeta_factors(lat, u)?);
    let work = character_work(group.order() as usize, group.order(), deg, group.exponent() as usize);
    Ok(work <= HILBERT_CHARACTER_BUDGET as u128)
}

/// The numerators of `H_{σ,u}` over the common denominator, read off as
/// the coefficients of `h_σ` in
/// `Π_{δ_w > 2} (1 - [E*_w] t^a)^{δ_w - 2} · Π_{δ_w < 2} (Σ_{i < o_w} [E*_w]^i t^{a i})^{2 - δ_w}`
/// in `Z[H][t]`, `a = a_wu`.
fn direct_numerators(lat: &Lattice, factors: &[ZetaFactor], deg: usize, targets: &[GroupElement]) -> Vec<Vec<i64>> {
    let group = lat.group();
    let n = group.order() as usize;
    let elements: Vec<GroupElement> = group.elements().collect();
    // row j holds the coefficient of t^j, indexed by group element
    let mut cur_rows = vec![0i64; (deg + 1) * n];
    cur_rows[0] = 1;
    let mut scratch = vec![0i64; (deg + 1) * n];
    let mut cur = 0usize;
    for f in factors {
        // source index of h - g for every h
        let minus: Vec<usize> = elements
            .iter()
            .map(|h| group.index_of(&group.add(h, &group.neg(&f.class))) as usize)
            .collect();
        let a = f.a as usize;
        if f.exponent > 0 {
            for _ in 0..f.exponent {
                for j in (a..=cur + a).rev() {
                    let (lo, hi) = cur_rows.split_at_mut(j * n);
                    let src = &lo[(j - a) * n..(j - a + 1) * n];
                    for (h, &from) in minus.iter().enumerate() {
                        hi[h] -= src[from];
                    }
                }
                cur += a;
            }
        } else {
            let o = f.order as usize;
            for _ in 0..(-f.exponent) {
                // M[j] = N[j] - N[j - a o] + g M[j - a]
                let top = cur + a * (o - 1);
                scratch[..(top + 1) * n].fill(0);
                for j in 0..=top {
                    let row = j * n;
                    if j <= cur {
                        scratch[row..row + n].copy_from_slice(&cur_rows[row..row + n]);
                    }
                    if j >= a * o && j - a * o <= cur {
                        let src = (j - a * o) * n;
                        for h in 0..n {
                            scratch[row + h] -= cur_rows[src + h];
                        }
                    }
                    if j >= a {
                        let (lo, hi) = scratch.split_at_mut(row);
                        let src = &lo[(j - a) * n..(j - a + 1) * n];
                        for (h, &from) in minus.iter().enumerate() {
                            hi[h] += src[from];
                        }
                    }
                }
                cur = top;
                std::mem::swap(&mut cur_rows, &mut scratch);
            }
        }
    }
    targets
        .iter()
        .map(|h| {
            let idx = group.index_of(h) as usize;
            cur_rows.chunks_exact(n).map(|row| row[idx]).collect()
        })
        .collect()
}

/// [`hilbert_all`] through the group ring `Z[H][t]` only, without
/// characters.
pub fn hilbert_all_direct(lat: &Lattice, u: usize) -> Result<Vec<BinomialFraction>> {
    if u >= lat.len() {
        return Err(Error::IndexOutOfRange {
            index: u,
            len: lat.len(),
        });
    }
    let factors = zeta_factors(lat, u)?;
    let denominator = zeta_denominator(lat, u)?;
    let deg = numerator_degree(&factors);
    let elements: Vec<GroupElement> = lat.group().elements().collect();
    Ok(direct_numerators(lat, &factors, deg, &elements)
        .into_iter()
        .map(|n| BinomialFraction::new(n, 1, &denominator))
        .collect())
}

/// Reduces a group-ring element modulo `Φ_m` and returns its constant
/// term, failing unless all other power-basis coefficients vanish.
fn descend(row: &[i64], phi_m: &[i64]) -> Result<i64> {
    let f = phi_m.len() - 1;
    let mut v: Vec<i128> = row.iter().map(|&c| c as i128).collect();
    for k in (f..v.len()).rev() {
        let c = v[k];
        if c == 0 {
            continue;
        }
        v[k] = 0;
        for (j, &b) in phi_m.iter().enumerate().take(f) {
            if b != 0 {
                v[k - f + j] -= c * b as i128;
            }
        }
    }
    if v[1..f].iter().any(|&c| c != 0) {
        return Err(Error::NotRational(v[..f].iter().map(|c| c.to_string()).collect()));
    }
    i64::try_from(v[0]).map_err(|_| Error::Overflow("twisted zeta coefficient"))
}

/// `H^pol_{σ,u}(1)`.
pub fn hilbert_pol_at_one(sigma: &SpinC, u: usize) -> Result<Q> {
    hilbert_h(sigma, u)?.pol_at_one()
}

/// Invariants of one lattice, computed once and shared: `λ`, the torsion
/// and sw of every Spin^c structure, and `H_{σ,u}` per vertex on demand.
pub struct InvariantTable {
    lattice: Arc<Lattice>,
    lambda: Q,
    torsion: Vec<Q>,
    hilbert: Mutex<HashMap<usize, Arc<Vec<BinomialFraction>>>>,
}

impl InvariantTable {
    pub fn new(lattice: &Arc<Lattice>) -> Result<Self> {
        Ok(InvariantTable {
            lattice: Arc::clone(lattice),
            lambda: casson_walker(lattice),
            torsion: torsion_all(lattice)?,
            hilbert: Mutex::new(HashMap::new()),
        })
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn casson_walker(&self) -> &Q {
        &self.lambda
    }

    pub fn torsion(&self, sigma: &SpinC) -> &Q {
        &self.torsion[sigma.index() as usize]
    }

    pub fn sw(&self, sigma: &SpinC) -> Q {
        &self.lambda / qi(self.lattice.det()) - self.torsion(sigma)
    }

    pub fn hilbert(&self, u: usize) -> Result<Arc<Vec<BinomialFraction>>> {
        if let Some(h) = self.hilbert.lock().unwrap().get(&u) {
            return Ok(Arc::clone(h));
        }
        let h = Arc::new(hilbert_all(&self.lattice, u)?);
        self.hilbert.lock().unwrap().insert(u, Arc::clone(&h));
        Ok(h)
    }

    pub fn hilbert_h(&self, sigma: &SpinC, u: usize) -> Result<BinomialFraction> {
        Ok(self.hilbert(u)?[sigma.index() as usize].clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests_support::E8;
    use crate::graph::PlumbingGraph;
    use crate::rational::{q, qf};

    fn lat(text: &str) -> Arc<Lattice> {
        Lattice::new(PlumbingGraph::parse(text).unwrap()).unwrap()
    }

    fn single(b: i64) -> Arc<Lattice> {
        Lattice::new(PlumbingGraph::string(&[b])).unwrap()
    }

    #[test]
    fn canonical_class_characterization() {
        let l = lat(E8);
        let k = canonical_chern(&l);
        assert!(k.dual().iter().all(Zero::is_zero));
        assert_eq!(k_term(&SpinCExtension::canonical(&l)), q(1));
        let l = single(-2);
        assert_eq!(k_term(&SpinCExtension::canonical(&l)), qf(1, 8));
        let l = Lattice::new(PlumbingGraph::string(&[-1, -1])).unwrap_err();
        assert_eq!(l, Error::NotNegativeDefinite);
    }

    #[test]
    fn casson_walker_small() {
        assert_eq!(casson_walker(&single(-1)), q(0));
        // string (-2,-2): Σb = -4, 3|V| = 6, Σ(δ-2)a_ww = -(2 + 2), |H| = 3
        let l = Lattice::new(PlumbingGraph::string(&[-2, -2])).unwrap();
        assert_eq!(casson_walker(&l), -(q(2) - qf(4, 3)) * q(3) / q(24));
        // E8 is the Poincaré sphere Σ(2,3,5)
        assert_eq!(casson_walker(&lat(E8)), q(-1));
    }

    #[test]
    fn trivial_group_torsion_vanishes() {
        let l = lat(E8);
        let s = SpinC::canonical(&l);
        assert_eq!(torsion(&s).unwrap(), q(0));
        assert_eq!(sw(&s).unwrap(), q(-1));
        assert_eq!(torsion_all(&l).unwrap(), vec![q(0)]);
    }

    #[test]
    fn single_vertex_hilbert_matches_closed_form() {
        for d in 1..=7i64 {
            let l = single(-d);
            let all = hilbert_all(&l, 0).unwrap();
            for s in SpinC::all(&l) {
                // the structure [q E*_v] * σ_can
                let qv = (0..d)
                    .find(|&qq| l.group().scale(&l.group().class_of_e_star(0), qq) == *s.h())
                    .unwrap();
                let got = all[s.index() as usize].to_rational_function();
                let du = d as usize;
                let mut n1 = vec![0i64; qv as usize + 1];
                n1[qv as usize] = d;
                let mut den1 = vec![0i64; 2 * du + 1];
                den1[0] = 1;
                den1[du] = -2;
                den1[2 * du] = 1;
                let mut n2 = vec![0i64; qv as usize + 1];
                n2[qv as usize] = -(d - qv - 1);
                let mut den2 = vec![0i64; du + 1];
                den2[0] = 1;
                den2[du] = -1;
                let want = RationalFunction::from_ints(&n1, &den1)
                    .unwrap()
                    .add(&RationalFunction::from_ints(&n2, &den2).unwrap());
                assert_eq!(got, want, "d = {d}, q = {qv}");
                assert_eq!(hilbert_h(&s, 0).unwrap(), all[s.index() as usize]);
            }
        }
    }

    #[test]
    fn limit_matches_laurent_leading_term() {
        let l = lat("v0: -2\nv1: -2\nv2: -3\nv3: -2\nv0 -- v1 -- v2\nv1 -- v3\n");
        for rho in characters(l.group()).iter().filter(|r| !r.is_trivial()) {
            for u in admissible_vertices(&l, rho) {
                let p = p_function(&l, rho, u).unwrap();
                let lim = p_limit_at_one(&l, rho, u).unwrap();
                let (v, c) = p.to_rational_function().laurent_at_one(1);
                if p.order_at_one() == 0 {
                    assert_eq!(v, 0);
                    assert_eq!(c[0], lim);
                } else {
                    assert!(v > 0 && lim.is_zero());
                }
            }
        }
    }

    #[test]
    fn hilbert_routes_agree() {
        let l = lat("a: -2\nb: -3\nc: -2\nd: -5\ne: -2\na -- b -- c\nb -- d -- e\n");
        for u in 0..l.len() {
            assert_eq!(hilbert_all(&l, u).unwrap(), hilbert_all_direct(&l, u).unwrap());
        }
    }

    #[test]
    fn torsion_paths_agree() {
        let l = lat("a: -2\nb: -3\nc: -2\nd: -5\na -- b -- c\nb -- d\n");
        let all = torsion_all(&l).unwrap();
        for s in SpinC::all(&l) {
            assert_eq!(torsion(&s).unwrap(), all[s.index() as usize]);
        }
    }
}
