use std::io::Read;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use num_bigint::BigInt;
use plumbing::invariants::{k_term, InvariantTable, SpinC};
use plumbing::ratfunc::BinomialFraction;
use plumbing::rational::{format_q, serde_q, Q};
use plumbing::seifert::{
    alexander_torus_knot, brieskorn_graph, lattice_point_count, seifert_from_star, sw_knot_surgery,
    AlexanderData, SeifertSummary,
};
use plumbing::surgery::{corpus, select_vertices, verify_graph, CorpusSpec, SurgeryReport};
use plumbing::{Lattice, PlumbingGraph};
use serde::{Deserialize, Serialize};

use crate::config::{Config, Format};
use crate::table;

/// What a command printed and how many identity checks failed.
pub struct Output {
    pub text: String,
    pub violations: usize,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, violations: 0 }
    }
}

/// Settings after merging the config file with command-line flags.
pub struct Settings {
    pub config: Config,
}

impl Settings {
    fn log(&self, msg: impl FnOnce() -> String) {
        if self.config.verbosity > 0 {
            eprintln!("{}", msg());
        }
    }

    fn json(&self) -> bool {
        self.config.format == Format::Json
    }
}

fn to_json<T: Serialize>(x: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(x)? + "\n")
}

/// Reads a graph in text or JSON form; `-` reads standard input.
pub fn read_graph(path: &Path) -> anyhow::Result<PlumbingGraph> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    PlumbingGraph::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn lattice_within_cap(g: PlumbingGraph, s: &Settings) -> anyhow::Result<Arc<Lattice>> {
    let det = g.determinant();
    if det > BigInt::from(s.config.max_h) {
        bail!("|H| = {det} exceeds the cap {}; pass --max-h {det} to override", s.config.max_h);
    }
    Ok(Lattice::new(g)?)
}

/// A structure given by its index in the enumeration of `H`, or by any
/// representative `E*: {...}` / `E: {...}` of its class.
pub fn parse_spinc(lat: &Arc<Lattice>, text: &str) -> anyhow::Result<SpinC> {
    if let Ok(i) = text.trim().parse::<u64>() {
        return Ok(SpinC::from_index(lat, i)?);
    }
    let x = lat.parse_vector(text)?;
    Ok(SpinC::new(lat, x.class()?)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureRow {
    pub index: u64,
    pub h: Vec<u64>,
    /// `rep_in_R(h)` in dual coordinates.
    pub representative: String,
    #[serde(with = "serde_q")]
    pub torsion: Q,
    #[serde(with = "serde_q")]
    pub sw: Q,
    #[serde(with = "serde_q")]
    pub k_term: Q,
    /// `sw + k_term`.
    #[serde(with = "serde_q")]
    pub normalized: Q,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantsReport {
    pub vertices: usize,
    pub order: String,
    pub group: Vec<u64>,
    #[serde(with = "serde_q")]
    pub casson_walker: Q,
    pub structures: Vec<StructureRow>,
}

pub fn invariants(path: &Path, s: &Settings) -> anyhow::Result<Output> {
    let lat = lattice_within_cap(read_graph(path)?, s)?;
    let start = Instant::now();
    let table = InvariantTable::new(&lat)?;
    let structures = SpinC::all(&lat)
        .into_iter()
        .map(|sigma| {
            let sw = table.sw(&sigma);
            let ext = sigma.extension();
            let k = k_term(&ext);
            StructureRow {
                index: sigma.index(),
                h: sigma.h().0.clone(),
                representative: ext.l_prime().format_dual(),
                torsion: table.torsion(&sigma).clone(),
                normalized: &sw + &k,
                sw,
                k_term: k,
            }
        })
        .collect();
    s.log(|| format!("invariants computed in {:.2?}", start.elapsed()));
    let report = InvariantsReport {
        vertices: lat.len(),
        order: lat.det().to_string(),
        group: lat.group().orders().to_vec(),
        casson_walker: table.casson_walker().clone(),
        structures,
    };
    if s.json() {
        return Ok(Output::ok(to_json(&report)?));
    }
    let mut text = format!(
        "vertices: {}\n|H| = {}, H = {}\nlambda = {}\n\n",
        report.vertices,
        report.order,
        group_name(&report.group),
        format_q(&report.casson_walker)
    );
    let rows: Vec<Vec<String>> = report
        .structures
        .iter()
        .map(|r| {
            vec![
                r.index.to_string(),
                fmt_h(&r.h),
                r.representative.clone(),
                format_q(&r.torsion),
                format_q(&r.sw),
                format_q(&r.k_term),
                format_q(&r.normalized),
            ]
        })
        .collect();
    text.push_str(&table::render(&["#", "h", "rep_in_R", "torsion", "sw", "k_term", "sw+k_term"], &rows));
    Ok(Output::ok(text))
}

fn group_name(orders: &[u64]) -> String {
    if orders.is_empty() {
        return "0".into();
    }
    orders.iter().map(|o| format!("Z/{o}")).collect::<Vec<_>>().join(" + ")
}

fn fmt_h(h: &[u64]) -> String {
    format!("({})", h.iter().map(u64::to_string).collect::<Vec<_>>().join(","))
}

pub enum VerifySource<'a> {
    File(&'a Path),
    Random { seed: u64, n: usize, count: usize },
}

pub fn verify(source: VerifySource, vertex: &str, s: &Settings) -> anyhow::Result<Output> {
    let graphs: Vec<(String, PlumbingGraph)> = match source {
        VerifySource::File(path) => vec![(path.display().to_string(), read_graph(path)?)],
        VerifySource::Random { seed, n, count } => {
            if n == 0 {
                bail!("--n must be positive");
            }
            let spec = CorpusSpec {
                seed,
                count,
                min_vertices: 1,
                max_vertices: n,
                bias: 2,
                max_h: s.config.max_h,
            };
            let (entries, skipped) = corpus(&spec);
            s.log(|| format!("{} draws over the |H| cap were redrawn", skipped.len()));
            entries.into_iter().map(|e| (e.label, e.graph)).collect()
        }
    };
    let start = Instant::now();
    let mut reports: Vec<SurgeryReport> = Vec::new();
    for (label, g) in graphs {
        let vertices = select_vertices(&g, vertex)?;
        let lat = lattice_within_cap(g, s).with_context(|| label.clone())?;
        reports.extend(verify_graph(&lat, &vertices, &label)?);
    }
    s.log(|| format!("{} reports in {:.2?}", reports.len(), start.elapsed()));
    let violations = reports.iter().filter(|r| !r.verified).count();
    let text = if s.json() {
        to_json(&reports)?
    } else {
        let rows: Vec<Vec<String>> = reports
            .iter()
            .map(|r| {
                vec![
                    r.graph.clone(),
                    r.vertex.clone(),
                    r.spinc.to_string(),
                    format_q(&r.sw),
                    format_q(&r.k_term),
                    format_q(&r.hilbert_pol_at_one),
                    format_q(&r.lhs),
                    format_q(&r.rhs),
                    if r.verified { "ok" } else { "FAIL" }.to_string(),
                ]
            })
            .collect();
        let mut t = table::render(&["graph", "v", "σ", "sw", "k_term", "H^pol(1)", "lhs", "rhs", ""], &rows);
        t.push_str(&format!("\n{} cases, {} violations\n", reports.len(), violations));
        t
    };
    Ok(Output { text, violations })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HilbertReport {
    pub vertex: String,
    pub spinc: u64,
    pub h: Vec<u64>,
    /// `numerator / (scale · Π (1 - t^a)^k)` with `(a, k)` in `denominator`.
    pub numerator: Vec<i64>,
    pub scale: i64,
    pub denominator: Vec<(usize, u32)>,
    /// The same function in lowest terms.
    pub reduced: String,
    #[serde(with = "serde_q::vec")]
    pub polynomial_part: Vec<Q>,
    #[serde(with = "serde_q")]
    pub pol_at_one: Q,
    #[serde(with = "serde_q")]
    pub periodic_constant: Q,
    #[serde(with = "serde_q::vec")]
    pub series: Vec<Q>,
}

pub fn hilbert(path: &Path, vertex: Option<&str>, spinc: &str, terms: usize, s: &Settings) -> anyhow::Result<Output> {
    let lat = lattice_within_cap(read_graph(path)?, s)?;
    let u = match vertex {
        Some(id) => lat.graph().index_of(id)?,
        None => 0,
    };
    let sigma = parse_spinc(&lat, spinc)?;
    let start = Instant::now();
    let h: BinomialFraction = plumbing::invariants::hilbert_h(&sigma, u)?;
    let report = HilbertReport {
        vertex: lat.graph().id(u).to_string(),
        spinc: sigma.index(),
        h: sigma.h().0.clone(),
        numerator: h.numer().to_vec(),
        scale: h.scale(),
        denominator: h.factors().to_vec(),
        reduced: h.to_rational_function().to_string(),
        polynomial_part: h.polynomial_part()?,
        pol_at_one: h.pol_at_one()?,
        periodic_constant: h.periodic_constant()?,
        series: h.series_prefix(terms.max(1))?.into_iter().take(terms).collect(),
    };
    s.log(|| format!("H computed in {:.2?}", start.elapsed()));
    if s.json() {
        return Ok(Output::ok(to_json(&report)?));
    }
    let den: Vec<String> = report
        .denominator
        .iter()
        .map(|&(a, k)| if k == 1 { format!("(1 - t^{a})") } else { format!("(1 - t^{a})^{k}") })
        .collect();
    let scale = if report.scale == 1 { String::new() } else { format!("{} ", report.scale) };
    let text = format!(
        "vertex: {}\nσ: #{} h = {}\nH = ({}) / ({}{})\n  = {}\npolynomial part: {}\nH^pol(1) = {}\nperiodic constant = {}\nseries: {}\n",
        report.vertex,
        report.spinc,
        fmt_h(&report.h),
        poly_text(&report.numerator),
        scale,
        if den.is_empty() { "1".to_string() } else { den.join(" ") },
        report.reduced,
        coeff_list(&report.polynomial_part),
        format_q(&report.pol_at_one),
        format_q(&report.periodic_constant),
        coeff_list(&report.series),
    );
    Ok(Output::ok(text))
}

fn coeff_list(xs: &[Q]) -> String {
    format!("[{}]", xs.iter().map(format_q).collect::<Vec<_>>().join(", "))
}

fn poly_text(c: &[i64]) -> String {
    let terms: Vec<String> = c
        .iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(i, &x)| {
            let c = match x {
                1 if i > 0 => String::new(),
                -1 if i > 0 => "-".into(),
                _ => x.to_string(),
            };
            match i {
                0 => c,
                1 => format!("{c}t"),
                _ => format!("{c}t^{i}"),
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ").replace("+ -", "- ")
    }
}

pub fn seifert(path: &Path, vertex: Option<&str>, s: &Settings) -> anyhow::Result<Output> {
    let g = read_graph(path)?;
    let v = match vertex {
        Some(id) => g.index_of(id)?,
        // the first vertex of maximal degree
        None => (0..g.len()).rev().max_by_key(|&w| g.degree(w)).ok_or_else(|| anyhow!("empty graph"))?,
    };
    let inv = seifert_from_star(&g, v)?;
    let summary = SeifertSummary::new(&inv)?;
    if s.json() {
        return Ok(Output::ok(to_json(&summary)?));
    }
    let legs: Vec<String> = summary.legs.iter().map(|(a, w)| format!("({a}, {w})")).collect();
    Ok(Output::ok(format!(
        "center: {}\nb = {}\nlegs (α, ω): {}\ne = {}\n|H| = {}\nα = {}\no = {}\nT = t^{}\np_g = {}\n",
        g.id(v),
        summary.b,
        legs.join(" "),
        format_q(&summary.euler),
        summary.h_order,
        summary.alpha,
        summary.o,
        summary.variable_scale,
        summary.pg,
    )))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BrieskornReport {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub graph: String,
    pub pg: i64,
    pub lattice_points: u64,
    #[serde(with = "serde_q")]
    pub sw_can: Q,
    #[serde(with = "serde_q")]
    pub k_term: Q,
}

pub fn brieskorn(a: i64, b: i64, c: i64, s: &Settings) -> anyhow::Result<Output> {
    if a < 2 || b < 2 || c < 2 {
        bail!("Brieskorn exponents must be at least 2");
    }
    let (g, v) = brieskorn_graph(a, b, c)?;
    let inv = seifert_from_star(&g, v)?;
    let lat = Lattice::new(g.clone())?;
    let can = SpinC::canonical(&lat);
    let report = BrieskornReport {
        a,
        b,
        c,
        graph: g.to_text(),
        pg: plumbing::seifert::pg_seifert(&inv)?,
        lattice_points: lattice_point_count(a, b, c),
        sw_can: plumbing::invariants::sw(&can)?,
        k_term: k_term(&can.extension()),
    };
    let violations = usize::from(
        report.pg as u64 != report.lattice_points || &report.sw_can + &report.k_term != Q::from_integer((-report.pg).into()),
    );
    if s.json() {
        return Ok(Output {
            text: to_json(&report)?,
            violations,
        });
    }
    Ok(Output {
        text: format!(
            "Σ({a},{b},{c})\n{}\np_g = {}\nlattice points = {}\nsw_can = {}\nk_term = {}\nsw_can + k_term = {}\n",
            report.graph.trim_end(),
            report.pg,
            report.lattice_points,
            format_q(&report.sw_can),
            format_q(&report.k_term),
            format_q(&(&report.sw_can + &report.k_term)),
        ),
        violations,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnotRow {
    pub q: i64,
    #[serde(with = "serde_q")]
    pub sw: Q,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnotReport {
    pub knot: String,
    pub delta: Vec<i64>,
    pub mu: i64,
    pub d: i64,
    pub rows: Vec<KnotRow>,
}

pub enum Knot {
    Torus(i64, i64),
    Alexander(Vec<i64>),
}

pub fn knot_surgery(knot: Knot, d: i64, s: &Settings) -> anyhow::Result<Output> {
    let (name, k) = match knot {
        Knot::Torus(p, q) => (format!("T({p},{q})"), alexander_torus_knot(p, q)?),
        Knot::Alexander(delta) => ("Δ".to_string(), AlexanderData::new(delta)?),
    };
    let rows = (0..d.max(0))
        .map(|q| Ok(KnotRow { q, sw: sw_knot_surgery(&k, d, q)? }))
        .collect::<anyhow::Result<Vec<_>>>()?;
    if rows.is_empty() {
        bail!("surgery coefficient must be positive, got {d}");
    }
    let report = KnotReport {
        knot: name,
        delta: k.delta.clone(),
        mu: k.mu,
        d,
        rows,
    };
    if s.json() {
        return Ok(Output::ok(to_json(&report)?));
    }
    let mut text = format!(
        "S³_-{}({}), Δ = {}, μ = {}\n\n",
        report.d,
        report.knot,
        poly_text(&report.delta),
        report.mu
    );
    let rows: Vec<Vec<String>> = report.rows.iter().map(|r| vec![r.q.to_string(), format_q(&r.sw)]).collect();
    text.push_str(&table::render(&["q", "sw"], &rows));
    Ok(Output::ok(text))
}
