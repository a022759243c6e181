use std::fmt::Write as _;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use crcodes::autgroup::{
    ct_necessary_bound, gl_lift_generators, group_order_by_closure, is_completely_transitive, maut_search,
    orbits_on_cosets, AutGroupResult, CtMethod, CtVerdict, Orbit, OrbitPartition, SearchOptions, SearchOutcome,
    StabilizerElement,
};
use crcodes::codes::MinDistance;
use crcodes::constructions::hamming_length;
use crcodes::linalg::MatrixFq;
use crcodes::{Construction, ConstructionSpec, Error, Family, LinearCode};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;
/// Closure enumerates the group element by element, so re-verification
/// stops re-deriving orders above this.
pub const CLOSURE_LIMIT: u64 = 2_000_000;

/// A consistency failure found by the CLI itself.
#[derive(Debug)]
pub struct Inconsistent(pub String);

impl std::fmt::Display for Inconsistent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "internal consistency failure: {}", self.0)
    }
}

impl std::error::Error for Inconsistent {}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecEcho {
    pub q: u32,
    pub m: Option<u32>,
    pub family: Option<Family>,
    pub r: Option<i64>,
    pub n: Option<u64>,
    pub primitive_polynomial: String,
    pub extension_polynomial: Option<String>,
    pub cyclic: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parameters {
    pub length: usize,
    pub dimension: usize,
    pub redundancy: usize,
    pub min_distance: MinDistance,
    pub covering_radius: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrayReport {
    pub b: Vec<u64>,
    pub c: Vec<u64>,
    pub text: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Complete,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitsReport {
    pub count: usize,
    pub orbits: Vec<Orbit>,
    pub weight_profile: Vec<u64>,
}

impl OrbitsReport {
    fn from_partition(p: &OrbitPartition) -> Self {
        OrbitsReport { count: p.count(), orbits: p.orbits().to_vec(), weight_profile: p.weight_profile() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MautReport {
    pub status: Status,
    pub order: Option<u64>,
    /// Witness text of each generator: map line, then the syndrome lift.
    pub generators: Vec<String>,
    pub basic_orbit_lengths: Vec<u64>,
    pub basis: Vec<usize>,
    pub orbits: Option<OrbitsReport>,
    pub nodes: u64,
    pub budget: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CtReport {
    pub verdict: CtVerdict,
    pub method: CtMethod,
    pub rho: usize,
    pub orbits: Option<OrbitsReport>,
    /// Generators whose orbits settle the verdict when it comes from the
    /// structured subgroup.
    pub generators: Vec<String>,
    pub nodes: u64,
    pub budget: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    /// `n(q-1)`.
    pub unit: u64,
    pub multiplier: Option<u64>,
    pub necessary_threshold: u64,
    pub necessary_bound_holds: bool,
    /// `8n(q-1)`.
    pub cap: u64,
    pub exceeds_cap: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub construct_s: f64,
    pub analyze_s: f64,
    pub maut_s: Option<f64>,
    pub ct_s: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub spec: SpecEcho,
    /// The parity-check matrix in the shared text format.
    pub parity_check: String,
    pub parameters: Parameters,
    pub completely_regular: bool,
    pub intersection_array: Option<ArrayReport>,
    pub maut: Option<MautReport>,
    pub ct: Option<CtReport>,
    pub audit: Option<AuditReport>,
    pub timings: Timings,
}

impl Report {
    /// Every requested stage ran to completion.
    pub fn is_complete(&self) -> bool {
        self.maut.as_ref().is_none_or(|m| m.status == Status::Complete)
            && self.ct.as_ref().is_none_or(|c| c.verdict != CtVerdict::Unknown)
    }
}

/// A code together with the construction it came from, when known.
pub struct Loaded {
    pub construction: Option<Construction>,
    pub code: LinearCode,
    pub matrix: MatrixFq,
    pub construct_s: f64,
}

impl Loaded {
    pub fn from_spec(spec: ConstructionSpec) -> Result<Self> {
        let start = Instant::now();
        let c = Construction::build(spec)?;
        let code = c.code()?;
        let matrix = c.matrix().clone();
        Ok(Loaded { construction: Some(c), code, matrix, construct_s: start.elapsed().as_secs_f64() })
    }

    /// Reads the shared matrix format. A `family=.. q=.. m=.. r=..` comment
    /// line ties the file to a construction, which must then reproduce it.
    pub fn from_text(text: &str) -> Result<Self> {
        let start = Instant::now();
        let (matrix, comments) = MatrixFq::from_text(text)?;
        let spec = comments.iter().find_map(|c| parse_spec_comment(c).transpose()).transpose()?;
        if let Some(spec) = spec {
            let c = Construction::build(spec)?;
            if c.matrix() != &matrix {
                bail!(Error::Parse(format!("matrix does not match its header `{}`", c.spec())));
            }
            let code = c.code()?;
            return Ok(Loaded { construction: Some(c), code, matrix, construct_s: start.elapsed().as_secs_f64() });
        }
        let code = LinearCode::from_parity_check(matrix.clone())?;
        Ok(Loaded { construction: None, code, matrix, construct_s: start.elapsed().as_secs_f64() })
    }

    fn echo(&self) -> SpecEcho {
        match &self.construction {
            Some(c) => {
                let ctx = c.setup().ctx();
                SpecEcho {
                    q: c.spec().q,
                    m: Some(c.spec().m),
                    family: Some(c.spec().family),
                    r: Some(c.spec().r),
                    n: Some(c.spec().n()),
                    primitive_polynomial: ctx.base().modulus_string(),
                    extension_polynomial: Some(ctx.ext().modulus_string()),
                    cyclic: Some(c.setup().is_cyclic()),
                }
            }
            None => SpecEcho {
                q: self.matrix.field().order(),
                m: None,
                family: None,
                r: None,
                n: None,
                primitive_polynomial: self.matrix.field().modulus_string(),
                extension_polynomial: None,
                cyclic: None,
            },
        }
    }

    fn header(&self) -> Vec<String> {
        self.construction.as_ref().map(|c| c.header_comments()).unwrap_or_default()
    }
}

/// `Some(spec)` for a `family=.. q=.. m=.. r=..` comment line.
fn parse_spec_comment(line: &str) -> Result<Option<ConstructionSpec>> {
    if !line.starts_with("family=") {
        return Ok(None);
    }
    let (mut family, mut q, mut m, mut r) = (None, None, None, None);
    for tok in line.split_whitespace() {
        let Some((k, v)) = tok.split_once('=') else { continue };
        let bad = || Error::Parse(format!("bad value in `{tok}`"));
        match k {
            "family" => family = Some(v.parse::<Family>().map_err(|_| bad())?),
            "q" => q = Some(v.parse::<u32>().map_err(|_| bad())?),
            "m" => m = Some(v.parse::<u32>().map_err(|_| bad())?),
            "r" => r = Some(v.parse::<i64>().map_err(|_| bad())?),
            _ => {}
        }
    }
    match (family, q, m, r) {
        (Some(family), Some(q), Some(m), Some(r)) => Ok(Some(ConstructionSpec::new(q, m, family, r))),
        _ => bail!(Error::Parse(format!("incomplete construction header `{line}`"))),
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Stages {
    pub maut: bool,
    pub ct: bool,
}

pub fn run(command: &str, loaded: &Loaded, stages: Stages, budget: u64, d_limit: usize) -> Result<Report> {
    let start = Instant::now();
    let code = &loaded.code;
    let table = code.coset_table()?;
    let (regular, data) = code.is_completely_regular()?;
    let parameters = Parameters {
        length: code.length(),
        dimension: code.dimension(),
        redundancy: code.redundancy(),
        min_distance: code.min_distance(d_limit),
        covering_radius: table.rho(),
    };
    let intersection_array =
        data.array().map(|a| ArrayReport { b: a.b.clone(), c: a.c.clone(), text: a.to_string() });
    let mut timings = Timings { construct_s: loaded.construct_s, analyze_s: start.elapsed().as_secs_f64(), ..Timings::default() };
    let options = SearchOptions::with_node_limit(budget);

    let mut group: Option<AutGroupResult> = None;
    let mut maut_unknown: Option<(u64, u64)> = None;
    let mut ct = None;
    if stages.ct {
        let start = Instant::now();
        let hint = structured_hint(loaded)?;
        let out = is_completely_transitive(code, &hint, &options)?;
        let generators = if out.method == CtMethod::StructuredGenerators {
            hint.iter().map(StabilizerElement::to_text).collect()
        } else {
            Vec::new()
        };
        ct = Some(CtReport {
            verdict: out.verdict,
            method: out.method,
            rho: out.rho,
            orbits: out.orbits.as_ref().map(OrbitsReport::from_partition),
            generators,
            nodes: out.nodes,
            budget: out.budget,
        });
        if out.verdict == CtVerdict::Unknown {
            maut_unknown = Some((out.nodes, out.budget));
        }
        group = out.group;
        timings.ct_s = Some(start.elapsed().as_secs_f64());
    }
    let mut maut = None;
    if stages.maut || group.is_some() {
        let start = Instant::now();
        if group.is_none() && maut_unknown.is_none() {
            match maut_search(code, &options)? {
                SearchOutcome::Complete(g) => group = Some(g),
                SearchOutcome::Incomplete { nodes, limit } => maut_unknown = Some((nodes, limit)),
            }
        }
        maut = Some(match (&group, maut_unknown) {
            (Some(g), _) => MautReport {
                status: Status::Complete,
                order: Some(g.order),
                generators: g.generators.iter().map(StabilizerElement::to_text).collect(),
                basic_orbit_lengths: g.basic_orbit_lengths.clone(),
                basis: g.basis.clone(),
                orbits: Some(OrbitsReport::from_partition(&g.orbits)),
                nodes: g.nodes,
                budget,
            },
            (None, Some((nodes, limit))) => MautReport {
                status: Status::Unknown,
                order: None,
                generators: Vec::new(),
                basic_orbit_lengths: Vec::new(),
                basis: Vec::new(),
                orbits: None,
                nodes,
                budget: limit,
            },
            (None, None) => unreachable!("search either completes or runs out of budget"),
        });
        timings.maut_s = Some(start.elapsed().as_secs_f64());
    }
    let audit = match (&loaded.construction, &group) {
        (Some(c), Some(g)) if c.spec().family == Family::B => {
            let s = c.spec();
            let bound = ct_necessary_bound(s.q, s.m, s.r, g.order);
            let cap = 8 * hamming_length(s.q, s.m) * (s.q as u64 - 1);
            Some(AuditReport {
                unit: bound.unit,
                multiplier: bound.multiplier,
                necessary_threshold: bound.threshold,
                necessary_bound_holds: bound.holds,
                cap,
                exceeds_cap: g.order > cap,
            })
        }
        _ => None,
    };
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        command: command.to_string(),
        spec: loaded.echo(),
        parity_check: loaded.matrix.to_text(&loaded.header()),
        parameters,
        completely_regular: regular,
        intersection_array,
        maut,
        ct,
        audit,
        timings,
    })
}

fn structured_hint(loaded: &Loaded) -> Result<Vec<StabilizerElement>> {
    match &loaded.construction {
        Some(c) => match gl_lift_generators(c, &loaded.code) {
            Ok(gens) => Ok(gens),
            Err(Error::SchemaMismatch(_)) => Ok(Vec::new()),
            Err(e) => Err(e.into()),
        },
        None => Ok(Vec::new()),
    }
}

pub fn render(report: &Report) -> String {
    let mut out = String::new();
    let s = &report.spec;
    match (s.family, s.m, s.r) {
        (Some(family), Some(m), Some(r)) => {
            let _ = writeln!(out, "{}", ConstructionSpec::new(s.q, m, family, r));
        }
        _ => {
            let _ = writeln!(out, "matrix code over F_{}", s.q);
        }
    }
    let mut line = format!("primitive polynomial {}", s.primitive_polynomial);
    if let Some(e) = &s.extension_polynomial {
        let _ = write!(line, ", extension polynomial {e}");
    }
    if let Some(c) = s.cyclic {
        let _ = write!(line, ", cyclic {c}");
    }
    let _ = writeln!(out, "{line}");
    let p = &report.parameters;
    let _ = writeln!(out, "[N, k, d; rho] = [{}, {}, {}; {}]", p.length, p.dimension, p.min_distance, p.covering_radius);
    match &report.intersection_array {
        Some(a) => {
            let _ = writeln!(out, "completely regular: yes, IA {}", a.text);
        }
        None => {
            let _ = writeln!(out, "completely regular: no");
        }
    }
    if let Some(m) = &report.maut {
        match m.status {
            Status::Complete => {
                let _ = writeln!(
                    out,
                    "|MAut| = {} ({} generators, {} search nodes)",
                    m.order.unwrap_or(0),
                    m.generators.len(),
                    m.nodes
                );
                if let Some(o) = &m.orbits {
                    let _ = writeln!(out, "orbits on cosets: {} (per weight {:?})", o.count, o.weight_profile);
                }
            }
            Status::Unknown => {
                let _ = writeln!(out, "|MAut| unknown: budget of {} nodes exhausted", m.budget);
            }
        }
    }
    if let Some(c) = &report.ct {
        let how = match c.method {
            CtMethod::StructuredGenerators => "structured generators".to_string(),
            CtMethod::FullSearch => format!("full search, {} nodes", c.nodes),
        };
        let orbits = c.orbits.as_ref().map_or("?".to_string(), |o| o.count.to_string());
        let _ = writeln!(out, "completely transitive: {} ({how}; {orbits} orbits, rho + 1 = {})", c.verdict, c.rho + 1);
        if c.verdict == CtVerdict::Unknown {
            let _ = writeln!(out, "budget exhausted: {} nodes", c.budget);
        }
    }
    if let Some(a) = &report.audit {
        let mult = a.multiplier.map_or("not a multiple of n(q-1)".into(), |c| format!("{c} n(q-1)"));
        let _ = writeln!(
            out,
            "|MAut| = {mult}; 8n(q-1) = {} {}; necessary CT bound c >= {} {}",
            a.cap,
            if a.exceeds_cap { "exceeded" } else { "respected" },
            a.necessary_threshold,
            if a.necessary_bound_holds { "holds" } else { "fails" }
        );
    }
    let t = &report.timings;
    let mut line = format!("time: construct {:.3}s, analyze {:.3}s", t.construct_s, t.analyze_s);
    if let Some(x) = t.ct_s {
        let _ = write!(line, ", ct {x:.3}s");
    }
    if let Some(x) = t.maut_s {
        let _ = write!(line, ", maut {x:.3}s");
    }
    let _ = writeln!(out, "{line}");
    out
}

/// Re-reads the matrix and generators of a report and reproduces its
/// group order and orbit counts. Returns human-readable check lines.
pub fn verify(report: &Report) -> Result<Vec<String>> {
    if report.schema_version != SCHEMA_VERSION {
        bail!(Error::SchemaMismatch(format!(
            "report schema {} but this build reads {SCHEMA_VERSION}",
            report.schema_version
        )));
    }
    let loaded = Loaded::from_text(&report.parity_check).context("report matrix")?;
    let code = &loaded.code;
    let table = code.coset_table()?;
    let mut lines = Vec::new();
    let mismatch = |what: String| anyhow::Error::new(Inconsistent(what));
    if table.rho() != report.parameters.covering_radius {
        return Err(mismatch(format!("covering radius {} recomputed as {}", report.parameters.covering_radius, table.rho())));
    }
    let parse = |texts: &[String]| -> Result<Vec<StabilizerElement>> {
        texts.iter().map(|t| StabilizerElement::from_text(code, t).map_err(|e| mismatch(format!("generator: {e}")))).collect()
    };
    if let Some(m) = &report.maut {
        if m.status == Status::Complete {
            let gens = parse(&m.generators)?;
            lines.push(format!("{} generators re-verified as automorphisms", gens.len()));
            let order = m.order.ok_or_else(|| mismatch("complete group without an order".into()))?;
            let product: u64 = m.basic_orbit_lengths.iter().product();
            if product != order {
                return Err(mismatch(format!("basic orbit lengths multiply to {product}, order is {order}")));
            }
            match group_order_by_closure(&gens, CLOSURE_LIMIT)? {
                Some(n) if n == order => lines.push(format!("closure of the generators has order {n}")),
                Some(n) => return Err(mismatch(format!("generators close to order {n}, report says {order}"))),
                None => lines.push(format!("order {order} above the closure limit {CLOSURE_LIMIT}; not re-derived")),
            }
            let orbits = orbits_on_cosets(&table, &gens)?;
            let stated = m.orbits.as_ref().map(|o| o.count);
            if stated != Some(orbits.count()) {
                return Err(mismatch(format!("orbit count {stated:?} recomputed as {}", orbits.count())));
            }
            lines.push(format!("{} orbits on cosets reproduced", orbits.count()));
        }
    }
    if let Some(c) = &report.ct {
        if c.method == CtMethod::StructuredGenerators {
            let gens = parse(&c.generators)?;
            let orbits = orbits_on_cosets(&table, &gens)?;
            if orbits.count() != c.rho + 1 || c.verdict != CtVerdict::True {
                return Err(mismatch(format!("structured generators give {} orbits, rho = {}", orbits.count(), c.rho)));
            }
            lines.push(format!("structured generators give {} = rho + 1 orbits", orbits.count()));
        } else if c.verdict != CtVerdict::Unknown {
            let count = c.orbits.as_ref().map(|o| o.count);
            let from_group = report.maut.as_ref().and_then(|m| m.orbits.as_ref()).map(|o| o.count);
            if from_group.is_some() && from_group != count {
                return Err(mismatch("CT orbit count differs from the group's".into()));
            }
            let ct = count == Some(c.rho + 1);
            if ct != (c.verdict == CtVerdict::True) {
                return Err(mismatch(format!("verdict {} with {count:?} orbits and rho = {}", c.verdict, c.rho)));
            }
            lines.push(format!("verdict {} agrees with {} orbits", c.verdict, count.unwrap_or(0)));
        }
    }
    Ok(lines)
}
