//! Both sides of the surgery formula at a vertex, the component additivity
//! identities, restriction of Spin^c structures across the split, and
//! seeded generators of negative definite trees.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::PlumbingGraph;
use crate::invariants::{k_term, InvariantTable, SpinC, SpinCExtension};
use crate::lattice::{Lattice, LatticeSplit};
use crate::rational::{qi, serde_q, Q};

/// One component `Γ_i` of `Γ \ v` with the restricted structures.
#[derive(Clone, Debug)]
pub struct RestrictedComponent {
    pub lattice: Arc<Lattice>,
    /// Vertex indices of `Γ_i` inside `Γ`.
    pub embedding: Vec<usize>,
    pub extension: SpinCExtension,
    pub spinc: SpinC,
}

#[derive(Clone, Debug)]
pub struct Restriction {
    pub r_v: Q,
    pub components: Vec<RestrictedComponent>,
}

/// Restricts an extension `l'` of `σ` to every component of `Γ \ v`.
pub fn restrict_extension(split: &LatticeSplit, ext: &SpinCExtension) -> Result<Restriction> {
    let v = split.vertex();
    let components = (0..split.components.len())
        .map(|i| {
            let l = split.restrict(ext.l_prime(), i)?;
            let extension = SpinCExtension::new(l)?;
            Ok(RestrictedComponent {
                lattice: Arc::clone(&split.components[i]),
                embedding: split.split.components[i].embedding.clone(),
                spinc: extension.restriction(),
                extension,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Restriction {
        r_v: ext.r(v),
        components,
    })
}

/// `σ_i = [R_i(l')] * σ_can,i` for `l' = rep_in_R(h_σ)`.
pub fn restrict_spinc(lat: &Arc<Lattice>, v: usize, sigma: &SpinC) -> Result<Restriction> {
    let split = lat.split(v)?;
    restrict_extension(&split, &sigma.extension())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub vertices: Vec<String>,
    pub spinc: u64,
    #[serde(with = "serde_q")]
    pub sw: Q,
    #[serde(with = "serde_q")]
    pub k_term: Q,
}

/// Both sides of the surgery formula and the residuals (lhs - rhs) of the
/// four component identities for one `(Γ, v, σ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurgeryReport {
    pub graph: String,
    pub vertex: String,
    pub spinc: u64,
    pub h: Vec<u64>,
    #[serde(with = "serde_q")]
    pub r_v: Q,
    #[serde(with = "serde_q")]
    pub sw: Q,
    #[serde(with = "serde_q")]
    pub k_term: Q,
    #[serde(with = "serde_q")]
    pub hilbert_pol_at_one: Q,
    #[serde(with = "serde_q")]
    pub lhs: Q,
    #[serde(with = "serde_q")]
    pub rhs: Q,
    #[serde(with = "serde_q")]
    pub residual_surgery: Q,
    #[serde(with = "serde_q")]
    pub residual_k: Q,
    #[serde(with = "serde_q")]
    pub residual_lambda: Q,
    #[serde(with = "serde_q")]
    pub residual_torsion: Q,
    #[serde(with = "serde_q")]
    pub residual_sw: Q,
    pub components: Vec<ComponentReport>,
    pub verified: bool,
}

impl SurgeryReport {
    pub fn residuals(&self) -> [(&'static str, &Q); 5] {
        [
            ("surgery", &self.residual_surgery),
            ("k", &self.residual_k),
            ("lambda", &self.residual_lambda),
            ("torsion", &self.residual_torsion),
            ("sw", &self.residual_sw),
        ]
    }
}

/// Split data at one vertex, with invariant tables of the components.
pub struct VertexSplit {
    pub split: LatticeSplit,
    pub tables: Vec<InvariantTable>,
}

impl VertexSplit {
    pub fn new(lat: &Arc<Lattice>, v: usize) -> Result<Self> {
        let split = lat.split(v)?;
        let tables = split
            .components
            .iter()
            .map(InvariantTable::new)
            .collect::<Result<Vec<_>>>()?;
        Ok(VertexSplit { split, tables })
    }
}

pub fn verify_surgery(lat: &Arc<Lattice>, v: usize, sigma: &SpinC) -> Result<SurgeryReport> {
    let table = InvariantTable::new(lat)?;
    let split = VertexSplit::new(lat, v)?;
    verify_with(&table, &split, sigma, "")
}

pub fn verify_with(
    table: &InvariantTable,
    vs: &VertexSplit,
    sigma: &SpinC,
    label: &str,
) -> Result<SurgeryReport> {
    let lat = table.lattice();
    let v = vs.split.vertex();
    let ext = sigma.extension();
    let res = restrict_extension(&vs.split, &ext)?;

    let d = qi(lat.det());
    let a_vv = qi(lat.a(v, v));
    let alpha = qi(&lat.alpha(v));
    let beta = qi(&lat.beta(v));
    let int = |n: i64| Q::from_integer(n.into());

    let sw = table.sw(sigma);
    let k = k_term(&ext);
    let hpol = table.hilbert_h(sigma, v)?.pol_at_one()?;
    let lambda_term = int(24) * table.casson_walker() / &d;
    let torsion = table.torsion(sigma).clone();

    let mut components = Vec::new();
    let (mut sum_sw, mut sum_k, mut sum_lambda, mut sum_t) = (int(0), int(0), int(0), int(0));
    for (c, t) in res.components.iter().zip(&vs.tables) {
        let sw_i = t.sw(&c.spinc);
        let k_i = k_term(&c.extension);
        sum_sw += &sw_i;
        sum_k += &k_i;
        sum_lambda += int(24) * t.casson_walker() / qi(c.lattice.det());
        sum_t += t.torsion(&c.spinc);
        components.push(ComponentReport {
            vertices: c.embedding.iter().map(|&w| lat.graph().id(w).to_string()).collect(),
            spinc: c.spinc.index(),
            sw: sw_i,
            k_term: k_i,
        });
    }

    let lhs = &sw + &k;
    let rhs = -&hpol + &sum_sw + &sum_k;
    // X = (α_v + d + 2d r_v)² / (d a_vv), Y = (d² - β_v) / (d a_vv)
    let x = {
        let s = &alpha + &d + int(2) * &d * &res.r_v;
        &s * &s / (&d * &a_vv)
    };
    let y = (&d * &d - &beta) / (&d * &a_vv);
    let residual_k = int(8) * (&k - &sum_k) - (int(1) - &x);
    let residual_sw = (&sw - &sum_sw) - (-&hpol - Q::new(1.into(), 8.into()) + &x / int(8));
    let residual_lambda = (&lambda_term - &sum_lambda) - (int(-3) + &y);
    let residual_torsion = (&torsion - &sum_t) - (&hpol + &y / int(24) - &x / int(8));
    let residual_surgery = &lhs - &rhs;
    let verified = [&residual_surgery, &residual_k, &residual_lambda, &residual_torsion, &residual_sw]
        .iter()
        .all(|r| r == &&int(0));
    Ok(SurgeryReport {
        graph: label.to_string(),
        vertex: lat.graph().id(v).to_string(),
        spinc: sigma.index(),
        h: sigma.h().0.clone(),
        r_v: res.r_v,
        sw,
        k_term: k,
        hilbert_pol_at_one: hpol,
        lhs,
        rhs,
        residual_surgery,
        residual_k,
        residual_lambda,
        residual_torsion,
        residual_sw,
        components,
        verified,
    })
}

/// Reports for every vertex in `vertices` and every Spin^c structure.
pub fn verify_graph(lat: &Arc<Lattice>, vertices: &[usize], label: &str) -> Result<Vec<SurgeryReport>> {
    let table = InvariantTable::new(lat)?;
    let per_vertex: Vec<Vec<SurgeryReport>> = vertices
        .par_iter()
        .map(|&v| {
            let vs = VertexSplit::new(lat, v)?;
            SpinC::all(lat)
                .iter()
                .map(|s| verify_with(&table, &vs, s, label))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_vertex.into_iter().flatten().collect())
}

/// Random labelled tree on `n` vertices from a uniform Prüfer sequence,
/// weights `b_w ∈ [-(δ_w + bias), -δ_w]`.
///
/// Weights are redrawn until some `|b_w| > δ_w`; a weakly diagonally
/// dominant tree matrix with one strict row is nonsingular, hence negative
/// definite. Without the redraw `b_w = -δ_w` everywhere gives a singular form.
pub fn random_negdef_tree(seed: u64, n: usize, bias: i64) -> PlumbingGraph {
    assert!(n >= 1 && bias >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = random_tree_edges(&mut rng, n);
    weights_for(&mut rng, n, &edges, bias)
}

fn random_tree_edges(rng: &mut ChaCha8Rng, n: usize) -> Vec<(usize, usize)> {
    if n <= 1 {
        return Vec::new();
    }
    let prufer: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &p in &prufer {
        degree[p] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &p in &prufer {
        let leaf = (0..n).find(|&i| degree[i] == 1).expect("a leaf exists");
        edges.push((leaf, p));
        degree[leaf] -= 1;
        degree[p] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&i| degree[i] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

fn weights_for(rng: &mut ChaCha8Rng, n: usize, edges: &[(usize, usize)], bias: i64) -> PlumbingGraph {
    let mut deg = vec![0i64; n];
    for &(a, b) in edges {
        deg[a] += 1;
        deg[b] += 1;
    }
    loop {
        let weights: Vec<i64> = deg.iter().map(|&d| -rng.gen_range(d..=d + bias)).collect();
        if weights.iter().zip(&deg).any(|(w, d)| -w > *d) {
            let g = PlumbingGraph::from_weights(&weights, edges).expect("a tree");
            debug_assert!(g.is_negative_definite());
            return g;
        }
    }
}

/// A random negative definite string with weights `≤ -2`.
pub fn random_negdef_string(seed: u64, n: usize, bias: i64) -> PlumbingGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<i64> = (0..n).map(|_| -rng.gen_range(2..=2 + bias)).collect();
    PlumbingGraph::string(&weights)
}

/// A random negative definite star: center weight in `[-(legs + bias), -1]`
/// and legs of length `1..=max_leg` with weights in `[-(2 + bias), -2]`,
/// redrawn until negative definite.
pub fn random_star(seed: u64, legs: usize, max_leg: usize, bias: i64) -> PlumbingGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut weights = vec![-rng.gen_range(1..=legs as i64 + bias)];
        let mut edges = Vec::new();
        for _ in 0..legs {
            let len = rng.gen_range(1..=max_leg);
            let mut prev = 0;
            for _ in 0..len {
                weights.push(-rng.gen_range(2..=2 + bias));
                let cur = weights.len() - 1;
                edges.push((prev, cur));
                prev = cur;
            }
        }
        let g = PlumbingGraph::from_weights(&weights, &edges).expect("a tree");
        if g.is_negative_definite() {
            return g;
        }
    }
}

/// Parameters of the seeded random corpus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub seed: u64,
    pub count: usize,
    pub min_vertices: usize,
    pub max_vertices: usize,
    pub bias: i64,
    pub max_h: u64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            seed: 7,
            count: 50,
            min_vertices: 1,
            max_vertices: 10,
            bias: 2,
            max_h: 64,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub label: String,
    pub graph: PlumbingGraph,
}

/// Draws trees until `count` of them have `|H| ≤ max_h`; rejected draws are
/// returned as `(label, |H|)`.
pub fn corpus(spec: &CorpusSpec) -> (Vec<CorpusEntry>, Vec<(String, String)>) {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Vec::with_capacity(spec.count);
    let mut skipped = Vec::new();
    let mut k = 0u64;
    while out.len() < spec.count {
        let n = rng.gen_range(spec.min_vertices..=spec.max_vertices);
        let sub_seed: u64 = rng.gen();
        let label = format!("random-{}-{}", spec.seed, k);
        k += 1;
        let graph = random_negdef_tree(sub_seed, n, spec.bias);
        let det = graph.determinant();
        if det > spec.max_h.into() {
            skipped.push((label, format!("|H| = {det} exceeds cap {}", spec.max_h)));
            continue;
        }
        out.push(CorpusEntry { label, graph });
    }
    (out, skipped)
}

/// Looks up a vertex by id, for callers that accept `all` or an id.
pub fn select_vertices(g: &PlumbingGraph, which: &str) -> Result<Vec<usize>> {
    if which == "all" {
        Ok((0..g.len()).collect())
    } else {
        g.index_of(which).map(|v| vec![v]).map_err(|_| Error::UnknownVertex(which.to_string()))
    }
}
