use std::fmt;

use serde::{Deserialize, Serialize};

use super::monomial::StabilizerElement;
use super::orbits::{orbits_on_cosets, OrbitPartition};
use super::search::{maut_search, AutGroupResult, SearchOptions, SearchOutcome};
use crate::codes::LinearCode;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CtVerdict {
    True,
    False,
    Unknown,
}

impl fmt::Display for CtVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CtVerdict::True => "true",
            CtVerdict::False => "false",
            CtVerdict::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CtMethod {
    /// Orbits of a known subgroup already number `rho + 1`.
    StructuredGenerators,
    FullSearch,
}

#[derive(Debug, Clone)]
pub struct CtOutcome {
    pub verdict: CtVerdict,
    pub method: CtMethod,
    pub rho: usize,
    /// Orbits of the group the verdict rests on; `None` when unknown.
    pub orbits: Option<OrbitPartition>,
    /// The full group, when the search ran to completion.
    pub group: Option<AutGroupResult>,
    /// Nodes spent and the budget, for the full search.
    pub nodes: u64,
    pub budget: u64,
}

impl CtOutcome {
    pub fn orbit_count(&self) -> Option<usize> {
        self.orbits.as_ref().map(|o| o.count())
    }
}

/// Decides complete transitivity. Orbits of `hint` (verified automorphisms)
/// can only prove the verdict true; a false verdict needs the full group.
pub fn is_completely_transitive(
    code: &LinearCode,
    hint: &[StabilizerElement],
    options: &SearchOptions,
) -> Result<CtOutcome> {
    let table = code.coset_table()?;
    let rho = table.rho();
    if !hint.is_empty() {
        let orbits = orbits_on_cosets(&table, hint)?;
        if orbits.count() == rho + 1 {
            return Ok(CtOutcome {
                verdict: CtVerdict::True,
                method: CtMethod::StructuredGenerators,
                rho,
                orbits: Some(orbits),
                group: None,
                nodes: 0,
                budget: options.node_limit,
            });
        }
    }
    Ok(match maut_search(code, options)? {
        SearchOutcome::Complete(group) => CtOutcome {
            verdict: if group.completely_transitive { CtVerdict::True } else { CtVerdict::False },
            method: CtMethod::FullSearch,
            rho,
            orbits: Some(group.orbits.clone()),
            nodes: group.nodes,
            group: Some(group),
            budget: options.node_limit,
        },
        SearchOutcome::Incomplete { nodes, limit } => CtOutcome {
            verdict: CtVerdict::Unknown,
            method: CtMethod::FullSearch,
            rho,
            orbits: None,
            group: None,
            nodes,
            budget: limit,
        },
    })
}

/// Transitivity on weight-one cosets forces `|MAut| = c n(q-1)` with
/// `c >= max{r, n(q-1) + 2 - r}`. The second term counts weight-two
/// cosets and needs `2 <= r <= n`; the Hamming code over `F_3` with
/// `m = 2` is completely transitive with `c = 6 < 9`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NecessaryBound {
    /// `n(q-1)`.
    pub unit: u64,
    /// `|MAut| / (n(q-1))` when it divides.
    pub multiplier: Option<u64>,
    pub threshold: u64,
    pub holds: bool,
}

pub fn ct_necessary_bound(q: u32, m: u32, r: i64, order: u64) -> NecessaryBound {
    let n = ((q as u64).pow(m) - 1) / (q as u64 - 1);
    let unit = n * (q as u64 - 1);
    let threshold = r.max(unit as i64 + 2 - r).max(0) as u64;
    let multiplier = order.is_multiple_of(unit).then(|| order / unit);
    NecessaryBound { unit, multiplier, threshold, holds: multiplier.is_some_and(|c| c >= threshold) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_arithmetic() {
        let b = ct_necessary_bound(2, 3, 4, 56);
        assert_eq!((b.unit, b.multiplier, b.threshold, b.holds), (7, Some(8), 5, true));
        let b = ct_necessary_bound(2, 3, 2, 56448);
        assert_eq!((b.multiplier, b.threshold, b.holds), (Some(8064), 7, true));
        assert!(!ct_necessary_bound(2, 3, 1, 7).holds);
        assert!(!ct_necessary_bound(2, 3, 2, 50).holds);
    }
}
