use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use crcodes::autgroup::{CtVerdict, DEFAULT_NODE_LIMIT};
use crcodes::{ConstructionSpec, Error, Family};
use rayon::prelude::*;

use crate::report::{run, Loaded, Report, Stages};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridConfig {
    pub q: u32,
    pub m: u32,
    pub family: Family,
    pub r_min: i64,
    pub r_max: i64,
    pub budget: u64,
}

/// `None` for a file with no settings at all, which is the empty grid.
pub fn parse_config(text: &str) -> Result<Option<GridConfig>> {
    let mut kv: BTreeMap<&str, &str> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("config line {}: expected key=value, got `{line}`", i + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if !matches!(k, "q" | "m" | "family" | "r_min" | "r_max" | "budget") {
            bail!(Error::Parse(format!("config line {}: unknown key `{k}`", i + 1)));
        }
        if kv.insert(k, v).is_some() {
            bail!(Error::Parse(format!("config line {}: duplicate key `{k}`", i + 1)));
        }
    }
    if kv.is_empty() {
        return Ok(None);
    }
    fn get<T: std::str::FromStr>(kv: &BTreeMap<&str, &str>, key: &str) -> Result<T> {
        let v = kv.get(key).ok_or_else(|| Error::Parse(format!("config is missing `{key}`")))?;
        v.parse().map_err(|_| Error::Parse(format!("config value `{key}={v}` does not parse")).into())
    }
    let budget = if kv.contains_key("budget") { get(&kv, "budget")? } else { DEFAULT_NODE_LIMIT };
    Ok(Some(GridConfig {
        q: get(&kv, "q")?,
        m: get(&kv, "m")?,
        family: get(&kv, "family")?,
        r_min: get(&kv, "r_min")?,
        r_max: get(&kv, "r_max")?,
        budget,
    }))
}

impl GridConfig {
    pub fn cells(&self) -> Result<Vec<ConstructionSpec>> {
        (self.r_min..=self.r_max)
            .map(|r| {
                let spec = ConstructionSpec::new(self.q, self.m, self.family, r);
                spec.validate()?;
                Ok(spec)
            })
            .collect()
    }
}

fn cell_path(dir: &Path, spec: &ConstructionSpec) -> PathBuf {
    dir.join(format!("q{}_m{}_{}_r{}.json", spec.q, spec.m, spec.family, spec.r))
}

/// Writes through a temporary file so an interrupted run never leaves a
/// truncated report behind.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    fs::write(&tmp, contents).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming to {}", path.display()))?;
    Ok(())
}

pub struct CellResult {
    pub spec: ConstructionSpec,
    pub report: Report,
    pub reused: bool,
}

fn existing(path: &Path) -> Option<Report> {
    let text = fs::read_to_string(path).ok()?;
    let report: Report = serde_json::from_str(&text).ok()?;
    (report.schema_version == crate::report::SCHEMA_VERSION && report.is_complete()).then_some(report)
}

pub fn run_grid(config: Option<&GridConfig>, out: &Path, jobs: Option<usize>, d_limit: usize) -> Result<Vec<CellResult>> {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let Some(config) = config else { return Ok(Vec::new()) };
    let cells = config.cells()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        builder = builder.num_threads(j.max(1));
    }
    let pool = builder.build().context("starting worker threads")?;
    let mut results: Vec<CellResult> = pool.install(|| {
        cells
            .par_iter()
            .map(|spec| -> Result<CellResult> {
                let path = cell_path(out, spec);
                if let Some(report) = existing(&path) {
                    return Ok(CellResult { spec: *spec, report, reused: true });
                }
                let loaded = Loaded::from_spec(*spec)?;
                let report = run("grid", &loaded, Stages { maut: true, ct: true }, config.budget, d_limit)?;
                write_atomic(&path, &serde_json::to_string_pretty(&report)?)?;
                Ok(CellResult { spec: *spec, report, reused: false })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    results.sort_by_key(|c| c.spec.r);
    Ok(results)
}

/// One row per cell and a closing line grouping `r` by CT verdict.
pub fn summary(config: Option<&GridConfig>, cells: &[CellResult]) -> String {
    let mut out = String::new();
    let Some(config) = config else {
        let _ = writeln!(out, "empty grid: no cells");
        return out;
    };
    let _ = writeln!(
        out,
        "grid q={} m={} family={} r={}..{} budget={}",
        config.q, config.m, config.family, config.r_min, config.r_max, config.budget
    );
    let _ = writeln!(
        out,
        "{:>4} {:>6} {:>6} {:>4} {:>3} {:<24} {:>14} {:>7} {:>8} {:>6}",
        "r", "N", "k", "d", "rho", "IA", "|MAut|", "orbits", "CT", "8n(q-1)"
    );
    let mut by_verdict: BTreeMap<String, Vec<i64>> = BTreeMap::new();
    for cell in cells {
        let rep = &cell.report;
        let p = &rep.parameters;
        let ia = rep.intersection_array.as_ref().map_or("not CR".to_string(), |a| a.text.clone());
        let order = rep.maut.as_ref().and_then(|m| m.order).map_or("unknown".to_string(), |o| o.to_string());
        let orbits = rep
            .maut
            .as_ref()
            .and_then(|m| m.orbits.as_ref())
            .or(rep.ct.as_ref().and_then(|c| c.orbits.as_ref()))
            .map_or("?".to_string(), |o| o.count.to_string());
        let verdict = rep.ct.as_ref().map_or(CtVerdict::Unknown, |c| c.verdict);
        let cap = rep.audit.as_ref().map_or("-", |a| if a.exceeds_cap { "above" } else { "within" });
        let _ = writeln!(
            out,
            "{:>4} {:>6} {:>6} {:>4} {:>3} {:<24} {:>14} {:>7} {:>8} {:>6}",
            cell.spec.r,
            p.length,
            p.dimension,
            p.min_distance.to_string(),
            p.covering_radius,
            ia,
            order,
            orbits,
            verdict.to_string(),
            cap
        );
        by_verdict.entry(verdict.to_string()).or_default().push(cell.spec.r);
    }
    for (verdict, rs) in &by_verdict {
        let list: Vec<String> = rs.iter().map(i64::to_string).collect();
        let _ = writeln!(out, "CT {verdict} for r in {{{}}}", list.join(", "));
    }
    out
}
