//! Plumbing trees and their determinant combinatorics.
//!
//! Vertices are addressed by their position in file order (`usize`); the
//! string ids from the input are kept for reporting. Subgraphs produced by
//! splitting or path deletion carry an embedding back into the parent.

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::rational::{q, qi, qpow, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlumbingGraph {
    ids: Vec<String>,
    weights: Vec<i64>,
    adj: Vec<Vec<usize>>,
}

/// A connected piece of a larger graph together with its vertex embedding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgraph {
    pub graph: PlumbingGraph,
    /// `embedding[i]` is the parent index of vertex `i` of `graph`.
    pub embedding: Vec<usize>,
}

/// One component of `Γ \ v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitComponent {
    pub graph: PlumbingGraph,
    /// Index (inside `graph`) of the unique vertex adjacent to `v`.
    pub attach: usize,
    pub embedding: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitResult {
    pub vertex: usize,
    pub components: Vec<SplitComponent>,
}

impl SplitResult {
    /// Component index containing parent vertex `w`, if any.
    pub fn component_of(&self, w: usize) -> Option<usize> {
        self.components
            .iter()
            .position(|c| c.embedding.contains(&w))
    }
}

/// `Γ = G' – v – G – u – G''` along the path from `v` to `u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathDecomposition {
    pub v: usize,
    pub u: usize,
    pub g_prime: Vec<usize>,
    pub g_mid: Vec<usize>,
    pub g_second: Vec<usize>,
    /// Interior vertices of the `v`–`u` path (all inside `g_mid`).
    pub interior: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct JsonVertex {
    id: String,
    weight: i64,
}

#[derive(Serialize, Deserialize)]
struct JsonGraph {
    vertices: Vec<JsonVertex>,
    edges: Vec<[String; 2]>,
}

impl PlumbingGraph {
    pub fn empty() -> Self {
        PlumbingGraph {
            ids: Vec::new(),
            weights: Vec::new(),
            adj: Vec::new(),
        }
    }

    /// Builds and validates a tree. Vertex order is preserved.
    pub fn new(ids: Vec<String>, weights: Vec<i64>, edges: &[(usize, usize)]) -> Result<Self> {
        assert_eq!(ids.len(), weights.len());
        let mut seen = HashMap::new();
        for (i, id) in ids.iter().enumerate() {
            if seen.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(id.clone()));
            }
        }
        let n = ids.len();
        let mut adj = vec![Vec::new(); n];
        let mut edge_set = BTreeSet::new();
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::IndexOutOfRange {
                    index: a.max(b),
                    len: n,
                });
            }
            if a == b {
                return Err(Error::NotATree(format!("loop at `{}`", ids[a])));
            }
            if !edge_set.insert((a.min(b), a.max(b))) {
                return Err(Error::NotATree(format!(
                    "repeated edge `{}` -- `{}`",
                    ids[a], ids[b]
                )));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        for nb in &mut adj {
            nb.sort_unstable();
        }
        let g = PlumbingGraph { ids, weights, adj };
        if n > 0 {
            if edges.len() != n - 1 {
                return Err(Error::NotATree(format!(
                    "{} vertices but {} edges",
                    n,
                    edges.len()
                )));
            }
            if g.reachable_from(0, &vec![true; n]).len() != n {
                return Err(Error::NotATree("graph is disconnected".into()));
            }
        }
        Ok(g)
    }

    /// Convenience constructor with ids `v0, v1, ...`.
    pub fn from_weights(weights: &[i64], edges: &[(usize, usize)]) -> Result<Self> {
        let ids = (0..weights.len()).map(|i| format!("v{i}")).collect();
        Self::new(ids, weights.to_vec(), edges)
    }

    /// A path `w_0 – w_1 – ...` with the given weights.
    pub fn string(weights: &[i64]) -> Self {
        let edges: Vec<_> = (1..weights.len()).map(|i| (i - 1, i)).collect();
        Self::from_weights(weights, &edges).expect("a path is a tree")
    }

    /// Parses either the text format or the JSON format (detected by a
    /// leading `{`).
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::parse_json(text)
        } else {
            Self::parse_text(text)
        }
    }

    /// Text format: `id: weight` declares a vertex, `a -- b` (or a chain
    /// `a -- b -- c`) declares edges, `#` starts a comment.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut ids = Vec::new();
        let mut weights = Vec::new();
        let mut index = HashMap::new();
        let mut raw_edges: Vec<(usize, String, String)> = Vec::new();

        for (lineno, line) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |message: String| Error::Syntax {
                line: line_no,
                message,
            };
            if line.contains("--") {
                let parts: Vec<&str> = line.split("--").map(str::trim).collect();
                for p in &parts {
                    check_id(p).map_err(&syntax)?;
                }
                for w in parts.windows(2) {
                    raw_edges.push((line_no, w[0].to_string(), w[1].to_string()));
                }
            } else if let Some((id, weight)) = line.split_once(':') {
                let id = id.trim();
                check_id(id).map_err(&syntax)?;
                let weight: i64 = weight
                    .trim()
                    .parse()
                    .map_err(|_| syntax(format!("bad weight `{}`", weight.trim())))?;
                if index.insert(id.to_string(), ids.len()).is_some() {
                    return Err(Error::DuplicateVertex(id.to_string()));
                }
                ids.push(id.to_string());
                weights.push(weight);
            } else {
                return Err(syntax(format!("expected `id: weight` or `a -- b`, got `{line}`")));
            }
        }
        let mut edges = Vec::with_capacity(raw_edges.len());
        for (_, a, b) in raw_edges {
            let ia = *index.get(&a).ok_or(Error::UnknownVertex(a))?;
            let ib = *index.get(&b).ok_or(Error::UnknownVertex(b))?;
            edges.push((ia, ib));
        }
        Self::new(ids, weights, &edges)
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let jg: JsonGraph = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
        let mut index = HashMap::new();
        let mut ids = Vec::new();
        let mut weights = Vec::new();
        for v in jg.vertices {
            if index.insert(v.id.clone(), ids.len()).is_some() {
                return Err(Error::DuplicateVertex(v.id));
            }
            ids.push(v.id);
            weights.push(v.weight);
        }
        let mut edges = Vec::new();
        for [a, b] in jg.edges {
            let ia = *index.get(&a).ok_or(Error::UnknownVertex(a))?;
            let ib = *index.get(&b).ok_or(Error::UnknownVertex(b))?;
            edges.push((ia, ib));
        }
        Self::new(ids, weights, &edges)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (id, w) in self.ids.iter().zip(&self.weights) {
            s.push_str(&format!("{id}: {w}\n"));
        }
        for (a, b) in self.edges() {
            s.push_str(&format!("{} -- {}\n", self.ids[a], self.ids[b]));
        }
        s
    }

    pub fn to_json(&self) -> String {
        let jg = JsonGraph {
            vertices: self
                .ids
                .iter()
                .zip(&self.weights)
                .map(|(id, &weight)| JsonVertex {
                    id: id.clone(),
                    weight,
                })
                .collect(),
            edges: self
                .edges()
                .into_iter()
                .map(|(a, b)| [self.ids[a].clone(), self.ids[b].clone()])
                .collect(),
        };
        serde_json::to_string_pretty(&jg).expect("graph serializes")
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.ids
            .iter()
            .position(|x| x == id)
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn weight(&self, v: usize) -> i64 {
        self.weights[v]
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// Edges `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<_> = (0..self.len())
            .flat_map(|a| self.adj[a].iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
            .collect();
        e.sort_unstable();
        e
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: v,
                len: self.len(),
            })
        }
    }

    /// The intersection matrix `I`: weights on the diagonal, 1 on edges.
    pub fn intersection_matrix(&self) -> IntMatrix {
        IntMatrix::from_fn(self.len(), |i, j| {
            if i == j {
                self.weights[i]
            } else if self.adj[i].binary_search(&j).is_ok() {
                1
            } else {
                0
            }
        })
    }

    pub fn is_negative_definite(&self) -> bool {
        let minors = self.intersection_matrix().neg().leading_minors();
        minors.len() == self.len() && minors.iter().all(|m| m.is_positive())
    }

    /// `det(-I)`, with `det(∅) = 1`.
    pub fn determinant(&self) -> BigInt {
        self.intersection_matrix().neg().det()
    }

    /// Determinant of the subgraph induced on `subset` (a forest in
    /// general); multiplicative over its components.
    pub fn det_of(&self, subset: &[usize]) -> BigInt {
        let m = subset.len();
        IntMatrix::from_fn(m, |i, j| {
            let (a, b) = (subset[i], subset[j]);
            if a == b {
                -self.weights[a]
            } else if self.adj[a].binary_search(&b).is_ok() {
                -1
            } else {
                0
            }
        })
        .det()
    }

    fn reachable_from(&self, start: usize, allowed: &[bool]) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        let mut out = vec![start];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(x) = queue.pop_front() {
            for &y in &self.adj[x] {
                if allowed[y] && !seen[y] {
                    seen[y] = true;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Connected components of the subgraph induced on `subset`, each in
    /// parent order.
    pub fn induced_components(&self, subset: &[usize]) -> Vec<Subgraph> {
        let mut allowed = vec![false; self.len()];
        for &v in subset {
            allowed[v] = true;
        }
        let mut done = vec![false; self.len()];
        let mut out = Vec::new();
        let mut order: Vec<usize> = subset.to_vec();
        order.sort_unstable();
        for &s in &order {
            if done[s] {
                continue;
            }
            let comp = self.reachable_from(s, &allowed);
            for &c in &comp {
                done[c] = true;
            }
            out.push(self.induced_tree(&comp));
        }
        out
    }

    /// The subgraph on a connected vertex set (caller guarantees
    /// connectivity).
    fn induced_tree(&self, vertices: &[usize]) -> Subgraph {
        let local: HashMap<usize, usize> =
            vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut adj = vec![Vec::new(); vertices.len()];
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                if let Some(&j) = local.get(&w) {
                    adj[i].push(j);
                }
            }
            adj[i].sort_unstable();
        }
        Subgraph {
            graph: PlumbingGraph {
                ids: vertices.iter().map(|&v| self.ids[v].clone()).collect(),
                weights: vertices.iter().map(|&v| self.weights[v]).collect(),
                adj,
            },
            embedding: vertices.to_vec(),
        }
    }

    /// Components of `Γ \ v` with their attaching vertices.
    pub fn split_at(&self, v: usize) -> Result<SplitResult> {
        self.check_vertex(v)?;
        let rest: Vec<usize> = (0..self.len()).filter(|&w| w != v).collect();
        let mut components: Vec<SplitComponent> = self
            .induced_components(&rest)
            .into_iter()
            .map(|sub| {
                let attach = sub
                    .embedding
                    .iter()
                    .position(|w| self.adj[v].binary_search(w).is_ok())
                    .expect("each component of a tree minus v touches v");
                SplitComponent {
                    graph: sub.graph,
                    attach,
                    embedding: sub.embedding,
                }
            })
            .collect();
        // order components by their attaching vertex in file order
        components.sort_by_key(|c| c.embedding[c.attach]);
        Ok(SplitResult {
            vertex: v,
            components,
        })
    }

    /// Vertices on the unique path from `u` to `w`, both included.
    pub fn path(&self, u: usize, w: usize) -> Result<Vec<usize>> {
        self.check_vertex(u)?;
        self.check_vertex(w)?;
        let mut parent = vec![usize::MAX; self.len()];
        let mut queue = VecDeque::from([u]);
        parent[u] = u;
        while let Some(x) = queue.pop_front() {
            if x == w {
                break;
            }
            for &y in &self.adj[x] {
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    queue.push_back(y);
                }
            }
        }
        let mut path = vec![w];
        let mut x = w;
        while x != u {
            x = parent[x];
            path.push(x);
        }
        path.reverse();
        Ok(path)
    }

    /// `Γ \ \overline{uw}`: the forest left after deleting the `u`–`w` path.
    pub fn delete_path(&self, u: usize, w: usize) -> Result<Vec<Subgraph>> {
        let path = self.path(u, w)?;
        let rest: Vec<usize> = (0..self.len()).filter(|x| !path.contains(x)).collect();
        Ok(self.induced_components(&rest))
    }

    /// The matrix `a_{uw} = -|H| (I^{-1})_{uw}`, i.e. the adjugate of `-I`.
    pub fn a_matrix(&self) -> Result<Vec<Vec<BigInt>>> {
        if !self.is_negative_definite() {
            return Err(Error::NotNegativeDefinite);
        }
        let n = self.len();
        let det = self.determinant();
        let inv = self
            .intersection_matrix()
            .inverse()
            .ok_or(Error::NotNegativeDefinite)?;
        let mut a = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let x = -(&inv[i][j] * qi(&det));
                debug_assert!(x.is_integer());
                a[i][j] = x.to_integer();
            }
        }
        Ok(a)
    }

    pub fn a_coeff(&self, u: usize, w: usize) -> Result<BigInt> {
        self.check_vertex(u)?;
        self.check_vertex(w)?;
        Ok(self.a_matrix()?[u][w].clone())
    }

    /// `α_u = Σ_w (δ_w - 2) a_{uw}`.
    pub fn alpha(&self, u: usize) -> Result<BigInt> {
        self.check_vertex(u)?;
        let a = self.a_matrix()?;
        Ok(self.weighted_sum(&a[u], 1))
    }

    /// `β_u = Σ_w (δ_w - 2) a_{uw}^2`.
    pub fn beta(&self, u: usize) -> Result<BigInt> {
        self.check_vertex(u)?;
        let a = self.a_matrix()?;
        Ok(self.weighted_sum(&a[u], 2))
    }

    fn weighted_sum(&self, row: &[BigInt], power: u32) -> BigInt {
        (0..self.len())
            .map(|w| BigInt::from(self.degree(w) as i64 - 2) * num_traits::pow(row[w].clone(), power as usize))
            .sum()
    }

    /// `Π_w a_{uw}^{δ_w - 2}` as an exact rational, over the given vertices.
    pub fn a_product(&self, a_row: &[BigInt], over: impl IntoIterator<Item = usize>) -> Q {
        over.into_iter()
            .map(|w| qpow(&qi(&a_row[w]), self.degree(w) as i64 - 2))
            .fold(q(1), |acc, x| acc * x)
    }

    /// Canonical decomposition along the `v`–`u` path: pieces of `Γ \ {v,u}`
    /// touching only `v` go to `G'`, only `u` to `G''`, the rest to `G`.
    pub fn decompose_along(&self, v: usize, u: usize) -> Result<PathDecomposition> {
        if v == u {
            return Err(Error::OutOfRange("decomposition needs v != u".into()));
        }
        let path = self.path(v, u)?;
        let interior = path[1..path.len() - 1].to_vec();
        let rest: Vec<usize> = (0..self.len()).filter(|&x| x != v && x != u).collect();
        let mut g_prime = Vec::new();
        let mut g_mid = Vec::new();
        let mut g_second = Vec::new();
        for comp in self.induced_components(&rest) {
            let touches = |x: usize| comp.embedding.iter().any(|w| self.adj[x].binary_search(w).is_ok());
            let contains_interior = comp.embedding.iter().any(|w| interior.contains(w));
            let target = if contains_interior {
                &mut g_mid
            } else if touches(v) {
                &mut g_prime
            } else {
                debug_assert!(touches(u));
                &mut g_second
            };
            target.extend(comp.embedding);
        }
        for s in [&mut g_prime, &mut g_mid, &mut g_second] {
            s.sort_unstable();
        }
        Ok(PathDecomposition {
            v,
            u,
            g_prime,
            g_mid,
            g_second,
            interior,
        })
    }
}

fn check_id(id: &str) -> std::result::Result<(), String> {
    if id.is_empty() {
        return Err("empty vertex id".into());
    }
    if id.chars().any(|c| c.is_whitespace() || c == ':' || c == ',' ) {
        return Err(format!("invalid vertex id `{id}`"));
    }
    Ok(())
}

/// Product of determinants over a forest.
pub fn forest_det(forest: &[Subgraph]) -> BigInt {
    forest
        .iter()
        .map(|s| s.graph.determinant())
        .fold(BigInt::one(), |acc, d| acc * d)
}

#[cfg(test)]
pub(crate) mod tests_support {
    pub const E8: &str = "\
# E8: node n with legs of length 1, 2 and 4
n: -2
a1: -2
b1: -2
b2: -2
c1: -2
c2: -2
c3: -2
c4: -2
n -- a1
n -- b1 -- b2
n -- c1 -- c2 -- c3 -- c4
";
}

#[cfg(test)]
mod tests {
    use super::*;

    use super::tests_support::E8;

    #[test]
    fn single_vertex() {
        let g = PlumbingGraph::parse("v1: -2").unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.weight(0), -2);
        assert!(g.is_negative_definite());
        assert!(!PlumbingGraph::parse("v1: 0").unwrap().is_negative_definite());
        assert_eq!(PlumbingGraph::parse("v: -7").unwrap().determinant(), BigInt::from(7));
    }

    #[test]
    fn e8_shape_and_determinant() {
        let g = PlumbingGraph::parse(E8).unwrap();
        assert_eq!(g.len(), 8);
        assert_eq!(g.edges().len(), 7);
        assert!(g.is_negative_definite());
        assert_eq!(g.determinant(), BigInt::one());
        let split = g.split_at(0).unwrap();
        let mut sizes: Vec<usize> = split.components.iter().map(|c| c.graph.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 4]);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            PlumbingGraph::parse("a: -2\nb: -2\nc: -2\na -- b\nb -- c\nc -- a"),
            Err(Error::NotATree(_))
        ));
        assert!(matches!(
            PlumbingGraph::parse("a: -2\nb: -2"),
            Err(Error::NotATree(_))
        ));
        assert!(matches!(
            PlumbingGraph::parse("a: -2\na: -3"),
            Err(Error::DuplicateVertex(_))
        ));
        assert!(matches!(
            PlumbingGraph::parse("a: -2\na -- z"),
            Err(Error::UnknownVertex(_))
        ));
        assert!(matches!(
            PlumbingGraph::parse("a: minus two"),
            Err(Error::Syntax { line: 1, .. })
        ));
    }

    #[test]
    fn json_and_text_agree() {
        let g = PlumbingGraph::parse(E8).unwrap();
        let j = PlumbingGraph::parse(&g.to_json()).unwrap();
        assert_eq!(g, j);
        assert_eq!(PlumbingGraph::parse(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn empty_graph_determinant() {
        assert_eq!(PlumbingGraph::empty().determinant(), BigInt::one());
    }

    #[test]
    fn split_single_and_star() {
        let g = PlumbingGraph::parse("v: -1").unwrap();
        assert!(g.split_at(0).unwrap().components.is_empty());
        let star = PlumbingGraph::from_weights(&[-4, -2, -2, -3, -5], &[(0, 1), (1, 2), (0, 3), (0, 4)]).unwrap();
        let s = star.split_at(0).unwrap();
        assert_eq!(s.components.len(), 3);
        for c in &s.components {
            assert!(star.neighbors(0).contains(&c.embedding[c.attach]));
        }
        assert!(g.split_at(3).is_err());
    }

    #[test]
    fn delete_path_cases() {
        let g = PlumbingGraph::string(&[-2, -2, -2]);
        assert!(g.delete_path(0, 2).unwrap().is_empty());
        let f = g.delete_path(0, 0).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].embedding, vec![1, 2]);
        let e8 = PlumbingGraph::parse(E8).unwrap();
        // from the end of the 1-leg to the end of the 4-leg: only the 2-leg is left
        let f = e8.delete_path(1, 7).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].graph.len(), 2);
    }

    #[test]
    fn a_coefficients_small() {
        let g = PlumbingGraph::parse("v: -5").unwrap();
        assert_eq!(g.a_coeff(0, 0).unwrap(), BigInt::one());
        assert_eq!(g.alpha(0).unwrap(), BigInt::from(-2));
        assert_eq!(g.beta(0).unwrap(), BigInt::from(-2));
        // string (-2,-2): -I^{-1} = (1/3) [[2,1],[1,2]], so a = [[2,1],[1,2]]
        let s = PlumbingGraph::string(&[-2, -2]);
        let a = s.a_matrix().unwrap();
        assert_eq!(a, vec![vec![BigInt::from(2), BigInt::from(1)], vec![BigInt::from(1), BigInt::from(2)]]);
        // δ = (1,1): α_0 = -(2 + 1), β_0 = -(4 + 1)
        assert_eq!(s.alpha(0).unwrap(), BigInt::from(-3));
        assert_eq!(s.beta(0).unwrap(), BigInt::from(-5));
        assert_eq!(PlumbingGraph::parse("v: 1").unwrap().a_matrix(), Err(Error::NotNegativeDefinite));
    }

    #[test]
    fn e8_node_a_is_product_of_leg_dets() {
        let e8 = PlumbingGraph::parse(E8).unwrap();
        // legs A1, A2, A4 have determinants 2, 3, 5
        assert_eq!(e8.a_coeff(0, 0).unwrap(), BigInt::from(30));
    }

    #[test]
    fn decomposition_adjacent_pair() {
        let g = PlumbingGraph::string(&[-3, -2]);
        let d = g.decompose_along(0, 1).unwrap();
        assert!(d.g_prime.is_empty() && d.g_mid.is_empty() && d.g_second.is_empty());
        assert!(g.decompose_along(0, 0).is_err());
    }
}
