//! The lattice `L` spanned by the vertex classes `E_w`, its dual `L'`
//! spanned by `E*_w`, and the discriminant group `H = L'/L`.
//!
//! Vectors are stored by their dual coordinates `s_w` (so that
//! `x = Σ s_w E*_w`); the E-coordinates `r = I⁻¹ s` are derived.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::{PlumbingGraph, SplitResult};
use crate::matrix::{smith_normal_form, IntMatrix};
use crate::rational::{ceil_q, format_q, is_integral, parse_q, qi, Q};

#[derive(Debug)]
pub struct Lattice {
    graph: PlumbingGraph,
    matrix: IntMatrix,
    inverse: Vec<Vec<Q>>,
    det: BigInt,
    a: Vec<Vec<BigInt>>,
    group: Arc<DiscriminantGroup>,
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.graph == other.graph
    }
}

impl Lattice {
    pub fn new(graph: PlumbingGraph) -> Result<Arc<Lattice>> {
        if !graph.is_negative_definite() {
            return Err(Error::NotNegativeDefinite);
        }
        let matrix = graph.intersection_matrix();
        let inverse = matrix.inverse().ok_or(Error::NotNegativeDefinite)?;
        let det = graph.determinant();
        let a = graph.a_matrix()?;
        let group = Arc::new(DiscriminantGroup::new(&matrix)?);
        Ok(Arc::new(Lattice {
            graph,
            matrix,
            inverse,
            det,
            a,
            group,
        }))
    }

    pub fn graph(&self) -> &PlumbingGraph {
        &self.graph
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// `(I⁻¹)_{uw}`.
    pub fn inverse_entry(&self, u: usize, w: usize) -> &Q {
        &self.inverse[u][w]
    }

    /// `d = det(-I) = |H|`.
    pub fn det(&self) -> &BigInt {
        &self.det
    }

    pub fn a(&self, u: usize, w: usize) -> &BigInt {
        &self.a[u][w]
    }

    pub fn a_row(&self, u: usize) -> &[BigInt] {
        &self.a[u]
    }

    pub fn degree(&self, w: usize) -> usize {
        self.graph.degree(w)
    }

    /// `α_u = Σ_w (δ_w - 2) a_{uw}`.
    pub fn alpha(&self, u: usize) -> BigInt {
        (0..self.len())
            .map(|w| BigInt::from(self.degree(w) as i64 - 2) * &self.a[u][w])
            .sum()
    }

    /// `β_u = Σ_w (δ_w - 2) a_{uw}²`.
    pub fn beta(&self, u: usize) -> BigInt {
        (0..self.len())
            .map(|w| BigInt::from(self.degree(w) as i64 - 2) * &self.a[u][w] * &self.a[u][w])
            .sum()
    }

    pub fn group(&self) -> &Arc<DiscriminantGroup> {
        &self.group
    }

    pub fn zero(self: &Arc<Self>) -> LatticeVector {
        LatticeVector {
            lattice: Arc::clone(self),
            dual: vec![Q::zero(); self.len()],
        }
    }

    /// `E*_w`.
    pub fn e_star(self: &Arc<Self>, w: usize) -> LatticeVector {
        let mut v = self.zero();
        v.dual[w] = Q::one();
        v
    }

    /// `E_w`, whose dual coordinates are the column `I e_w`.
    pub fn e(self: &Arc<Self>, w: usize) -> LatticeVector {
        let dual = (0..self.len()).map(|u| qi(self.matrix.get(u, w))).collect();
        LatticeVector {
            lattice: Arc::clone(self),
            dual,
        }
    }

    pub fn from_dual(self: &Arc<Self>, dual: Vec<Q>) -> LatticeVector {
        assert_eq!(dual.len(), self.len());
        LatticeVector {
            lattice: Arc::clone(self),
            dual,
        }
    }

    pub fn from_e_coords(self: &Arc<Self>, r: &[Q]) -> LatticeVector {
        assert_eq!(r.len(), self.len());
        let n = self.len();
        let dual = (0..n)
            .map(|u| (0..n).map(|w| qi(self.matrix.get(u, w)) * &r[w]).sum())
            .collect();
        LatticeVector {
            lattice: Arc::clone(self),
            dual,
        }
    }

    /// The unique `l'` in the class `h` with every E-coordinate in `(-1, 0]`.
    pub fn rep_in_r(self: &Arc<Self>, h: &GroupElement) -> LatticeVector {
        let s = self.group.representative(h);
        let x = self.from_dual(s.into_iter().map(Q::from_integer).collect());
        let r: Vec<Q> = x.e_coords().iter().map(|r| r - Q::from_integer(ceil_q(r))).collect();
        self.from_e_coords(&r)
    }

    /// Splits at `v` and builds the lattices of the components.
    pub fn split(self: &Arc<Self>, v: usize) -> Result<LatticeSplit> {
        let split = self.graph.split_at(v)?;
        let components = split
            .components
            .iter()
            .map(|c| Lattice::new(c.graph.clone()))
            .collect::<Result<Vec<_>>>()?;
        Ok(LatticeSplit {
            parent: Arc::clone(self),
            split,
            components,
        })
    }

    /// Parses `E*: {w: s, ...}` or `E: {w: r, ...}`; omitted vertices are 0.
    pub fn parse_vector(self: &Arc<Self>, text: &str) -> Result<LatticeVector> {
        let text = text.trim();
        let bad = |m: &str| Error::Syntax {
            line: 0,
            message: format!("lattice vector `{text}`: {m}"),
        };
        let (kind, body) = text.split_once(':').ok_or_else(|| bad("missing `E:` or `E*:` prefix"))?;
        let body = body.trim();
        let inner = body
            .strip_prefix('{')
            .and_then(|b| b.strip_suffix('}'))
            .ok_or_else(|| bad("expected `{...}`"))?;
        let mut coords = vec![Q::zero(); self.len()];
        for item in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (id, val) = item.split_once(':').ok_or_else(|| bad("expected `id: value`"))?;
            let w = self.graph.index_of(id.trim())?;
            coords[w] = parse_q(val)?;
        }
        match kind.trim() {
            "E*" => Ok(self.from_dual(coords)),
            "E" => Ok(self.from_e_coords(&coords)),
            other => Err(bad(&format!("unknown basis `{other}`"))),
        }
    }
}

/// An element of `L' ⊗ Q` over a fixed lattice, in dual coordinates.
#[derive(Clone, Debug)]
pub struct LatticeVector {
    lattice: Arc<Lattice>,
    dual: Vec<Q>,
}

impl PartialEq for LatticeVector {
    fn eq(&self, other: &Self) -> bool {
        self.lattice == other.lattice && self.dual == other.dual
    }
}

impl LatticeVector {
    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    /// Coordinates `s_w` with `x = Σ s_w E*_w`.
    pub fn dual(&self) -> &[Q] {
        &self.dual
    }

    /// Coordinates `r_w` with `x = Σ r_w E_w`, i.e. `r = I⁻¹ s`.
    pub fn e_coords(&self) -> Vec<Q> {
        let n = self.dual.len();
        (0..n)
            .map(|u| {
                (0..n)
                    .filter(|&w| !self.dual[w].is_zero())
                    .map(|w| self.lattice.inverse_entry(u, w) * &self.dual[w])
                    .sum()
            })
            .collect()
    }

    pub fn is_dual_integral(&self) -> bool {
        self.dual.iter().all(is_integral)
    }

    /// Whether the vector lies in `L`.
    pub fn is_in_l(&self) -> bool {
        self.e_coords().iter().all(is_integral)
    }

    fn check_same(&self, other: &LatticeVector) -> Result<()> {
        if Arc::ptr_eq(&self.lattice, &other.lattice) || self.lattice == other.lattice {
            Ok(())
        } else {
            Err(Error::GraphMismatch)
        }
    }

    pub fn add(&self, other: &LatticeVector) -> Result<LatticeVector> {
        self.check_same(other)?;
        Ok(self.with_dual(self.dual.iter().zip(&other.dual).map(|(a, b)| a + b).collect()))
    }

    pub fn sub(&self, other: &LatticeVector) -> Result<LatticeVector> {
        self.check_same(other)?;
        Ok(self.with_dual(self.dual.iter().zip(&other.dual).map(|(a, b)| a - b).collect()))
    }

    pub fn scale(&self, c: &Q) -> LatticeVector {
        self.with_dual(self.dual.iter().map(|a| a * c).collect())
    }

    pub fn neg(&self) -> LatticeVector {
        self.with_dual(self.dual.iter().map(|a| -a).collect())
    }

    fn with_dual(&self, dual: Vec<Q>) -> LatticeVector {
        LatticeVector {
            lattice: Arc::clone(&self.lattice),
            dual,
        }
    }

    /// The extended intersection form `(x, y) = Σ s_w(x) r_w(y)`.
    pub fn pairing(&self, other: &LatticeVector) -> Result<Q> {
        self.check_same(other)?;
        let r = other.e_coords();
        Ok(self.dual.iter().zip(&r).map(|(s, r)| s * r).sum())
    }

    pub fn square(&self) -> Q {
        self.pairing(self).expect("same lattice")
    }

    /// The class of `x` in `H = L'/L`.
    pub fn class(&self) -> Result<GroupElement> {
        if !self.is_dual_integral() {
            return Err(Error::NonIntegral);
        }
        let s: Vec<BigInt> = self.dual.iter().map(|q| q.to_integer()).collect();
        Ok(self.lattice.group.class_of_dual(&s))
    }

    pub fn format_dual(&self) -> String {
        self.format_with("E*", &self.dual)
    }

    pub fn format_e(&self) -> String {
        self.format_with("E", &self.e_coords())
    }

    fn format_with(&self, kind: &str, coords: &[Q]) -> String {
        let items: Vec<String> = coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(w, c)| format!("{}: {}", self.lattice.graph.id(w), format_q(c)))
            .collect();
        format!("{kind}: {{{}}}", items.join(", "))
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_dual())
    }
}

/// A lattice split at a vertex together with the component lattices.
#[derive(Debug, Clone)]
pub struct LatticeSplit {
    pub parent: Arc<Lattice>,
    pub split: SplitResult,
    pub components: Vec<Arc<Lattice>>,
}

impl LatticeSplit {
    pub fn vertex(&self) -> usize {
        self.split.vertex
    }

    /// `R_i(x) = Σ_{w ∈ Γ_i} s_w E*_{w,i}`.
    pub fn restrict(&self, x: &LatticeVector, i: usize) -> Result<LatticeVector> {
        if !(Arc::ptr_eq(&x.lattice, &self.parent) || *x.lattice == *self.parent) {
            return Err(Error::GraphMismatch);
        }
        let comp = self.split.components.get(i).ok_or(Error::IndexOutOfRange {
            index: i,
            len: self.split.components.len(),
        })?;
        let dual = comp.embedding.iter().map(|&w| x.dual[w].clone()).collect();
        Ok(self.components[i].from_dual(dual))
    }
}

/// `H = L'/L ≅ ⊕ Z/d_j` from the Smith normal form `U (-I) V = D`.
///
/// The class of a dual vector `s` is `(U s)_j mod d_j`, keeping only the
/// factors with `d_j > 1`. Representatives come from the columns of `U⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscriminantGroup {
    orders: Vec<u64>,
    class_rows: Vec<Vec<BigInt>>,
    rep_cols: Vec<Vec<BigInt>>,
    exponent: u64,
    rank: usize,
}

/// An element of `⊕ Z/d_j`, reduced componentwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(pub Vec<u64>);

impl GroupElement {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl DiscriminantGroup {
    pub fn new(matrix: &IntMatrix) -> Result<Self> {
        let n = matrix.dim();
        let snf = smith_normal_form(&matrix.neg());
        let u_inv = snf
            .u
            .inverse()
            .expect("unimodular transform is invertible");
        let mut orders = Vec::new();
        let mut class_rows = Vec::new();
        let mut rep_cols = Vec::new();
        for (j, d) in snf.diagonal.iter().enumerate() {
            if d.is_zero() {
                return Err(Error::NotNegativeDefinite);
            }
            if d.is_one() {
                continue;
            }
            let dj = d.to_u64().ok_or(Error::Overflow("discriminant group order"))?;
            orders.push(dj);
            class_rows.push((0..n).map(|w| snf.u.get(j, w).clone()).collect());
            rep_cols.push((0..n).map(|w| u_inv[w][j].to_integer()).collect());
        }
        let exponent = orders.last().copied().unwrap_or(1);
        Ok(DiscriminantGroup {
            orders,
            class_rows,
            rep_cols,
            exponent,
            rank: n,
        })
    }

    /// Invariant factors `d_1 | d_2 | ...`, all greater than 1.
    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    /// `m = d_k`, the exponent of `H`.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.orders.len()])
    }

    pub fn class_of_dual(&self, s: &[BigInt]) -> GroupElement {
        GroupElement(
            self.class_rows
                .iter()
                .zip(&self.orders)
                .map(|(row, &d)| {
                    let x: BigInt = row.iter().zip(s).map(|(a, b)| a * b).sum();
                    x.mod_floor(&BigInt::from(d)).to_u64().expect("reduced")
                })
                .collect(),
        )
    }

    /// The class of `E*_w`.
    pub fn class_of_e_star(&self, w: usize) -> GroupElement {
        GroupElement(
            self.class_rows
                .iter()
                .zip(&self.orders)
                .map(|(row, &d)| row[w].mod_floor(&BigInt::from(d)).to_u64().expect("reduced"))
                .collect(),
        )
    }

    /// Some integral dual vector in the class `h`.
    pub fn representative(&self, h: &GroupElement) -> Vec<BigInt> {
        let mut s = vec![BigInt::zero(); self.rank];
        for (col, &c) in self.rep_cols.iter().zip(&h.0) {
            for (x, y) in s.iter_mut().zip(col) {
                *x += y * BigInt::from(c);
            }
        }
        s
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.orders)
                .map(|((x, y), d)| (x + y) % d)
                .collect(),
        )
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        GroupElement(a.0.iter().zip(&self.orders).map(|(x, d)| (d - x) % d).collect())
    }

    pub fn scale(&self, a: &GroupElement, k: i64) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&self.orders)
                .map(|(&x, &d)| ((x as i128 * k as i128).rem_euclid(d as i128)) as u64)
                .collect(),
        )
    }

    /// Order of an element.
    pub fn element_order(&self, a: &GroupElement) -> u64 {
        a.0.iter()
            .zip(&self.orders)
            .map(|(&x, &d)| d / x.gcd(&d))
            .fold(1, |acc, o| acc.lcm(&o))
    }

    /// The element with the given index in mixed radix order (first
    /// coordinate fastest).
    pub fn element(&self, mut index: u64) -> GroupElement {
        GroupElement(
            self.orders
                .iter()
                .map(|&d| {
                    let c = index % d;
                    index /= d;
                    c
                })
                .collect(),
        )
    }

    pub fn index_of(&self, h: &GroupElement) -> u64 {
        h.0.iter()
            .zip(&self.orders)
            .rev()
            .fold(0, |acc, (&c, &d)| acc * d + c)
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order()).map(|i| self.element(i))
    }
}

/// `true` when every entry of `r` lies in `(-1, 0]`.
pub fn in_box(r: &[Q]) -> bool {
    r.iter().all(|x| x <= &Q::zero() && x > &-Q::one())
}
