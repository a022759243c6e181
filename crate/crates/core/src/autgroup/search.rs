//! Exact backtracking over syndrome-space lifts.
//!
//! A monomial automorphism of a code with projectively distinct columns is
//! the same thing as an invertible `S` on `F_q^R` that permutes the column
//! points (with scalars). `S` is fixed by the images of a basis
//! `b_0, .., b_{R-1}` chosen among the columns, so the search picks those
//! images one at a time. Choosing the image of `b_k` fixes the image of
//! every point `Q + b_k` with `Q` in the span of the earlier basis vectors,
//! and each such image must be nonzero and carry the same invariant color
//! as its preimage. Colors start from coset weight and are refined along
//! the lines of the projective space until stable.

use std::collections::{BTreeMap, HashSet};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;

use super::monomial::{is_automorphism, is_equivalence, MonomialMap, StabilizerElement};
use super::orbits::{orbits_on_cosets, OrbitPartition};
use crate::codes::{CosetTable, LinearCode};
use crate::error::{Error, Result};
use crate::linalg::{MatrixFq, PackedSpace};

pub const DEFAULT_NODE_LIMIT: u64 = 50_000_000;
/// Largest syndrome space the search will index.
pub const MAX_SEARCH_SPACE: u64 = 1 << 20;
const LINE_REFINEMENT_POINTS: usize = 4096;
const FLUSH_EVERY: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOptions {
    /// Candidate images tried before the search gives up.
    pub node_limit: u64,
    /// Column order used to pick the basis; `None` means `0..N`.
    pub column_order: Option<Vec<usize>>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { node_limit: DEFAULT_NODE_LIMIT, column_order: None }
    }
}

impl SearchOptions {
    pub fn with_node_limit(node_limit: u64) -> Self {
        SearchOptions { node_limit, column_order: None }
    }
}

#[derive(Debug, Clone)]
pub enum SearchOutcome<T> {
    Complete(T),
    /// The node budget ran out; nothing is inferred from the partial search.
    Incomplete { nodes: u64, limit: u64 },
}

impl<T> SearchOutcome<T> {
    pub fn complete(self) -> Option<T> {
        match self {
            SearchOutcome::Complete(t) => Some(t),
            SearchOutcome::Incomplete { .. } => None,
        }
    }

    pub fn as_complete(&self) -> Option<&T> {
        match self {
            SearchOutcome::Complete(t) => Some(t),
            SearchOutcome::Incomplete { .. } => None,
        }
    }
}

/// The full monomial automorphism group with its action on cosets.
#[derive(Debug, Clone)]
pub struct AutGroupResult {
    pub order: u64,
    /// Strong generators: one element per nontrivial coset of each
    /// stabilizer in the chain fixing the basis columns one by one.
    pub generators: Vec<StabilizerElement>,
    /// Orbit length of each basis column under the stabilizer of the earlier ones.
    pub basic_orbit_lengths: Vec<u64>,
    /// Column indices used as the search basis.
    pub basis: Vec<usize>,
    pub orbits: OrbitPartition,
    pub rho: usize,
    pub completely_transitive: bool,
    pub nodes: u64,
}

/// Outcome of a monomial equivalence search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalence {
    /// A map carrying the first code onto the second.
    Equivalent(MonomialMap),
    NotEquivalent,
    Unknown { nodes: u64, limit: u64 },
}

/// Points of `PG(R-1, q)` and, when small enough, its lines.
struct Projective {
    space: PackedSpace,
    /// Canonical code of each point, ascending.
    points: Vec<u32>,
    /// Point index of each nonzero vector.
    index: Vec<u32>,
    /// `v = scale[v] * points[index[v]]`.
    scale: Vec<u32>,
    lines: Vec<Vec<u32>>,
    lines_of: Vec<Vec<u32>>,
}

impl Projective {
    fn new(space: &PackedSpace) -> Result<Self> {
        let size = space.size() as u64;
        if size > MAX_SEARCH_SPACE {
            return Err(Error::SizeGuard { space: "automorphism search space", size, limit: MAX_SEARCH_SPACE });
        }
        let f = space.field().clone();
        let size = size as usize;
        let mut index = vec![u32::MAX; size];
        let mut scale = vec![0u32; size];
        let mut points = Vec::new();
        // the smallest code in a class has leading entry 1
        for a in 1..size as u32 {
            if index[a as usize] != u32::MAX {
                continue;
            }
            let id = points.len() as u32;
            points.push(a);
            for l in f.nonzero() {
                let v = space.scale(l, a) as usize;
                index[v] = id;
                scale[v] = l;
            }
        }
        let mut proj = Projective { space: space.clone(), points, index, scale, lines: Vec::new(), lines_of: Vec::new() };
        if proj.points.len() <= LINE_REFINEMENT_POINTS {
            proj.build_lines();
        }
        Ok(proj)
    }

    fn build_lines(&mut self) {
        let f = self.space.field().clone();
        let np = self.points.len();
        let mut lines = Vec::new();
        for i in 0..np {
            for j in i + 1..np {
                let (p, q) = (self.points[i], self.points[j]);
                let mut line = vec![i as u32, j as u32];
                let mut minimal = true;
                for l in f.nonzero() {
                    let k = self.index[self.space.add(self.space.scale(l, p), q) as usize];
                    if (k as usize) < j {
                        minimal = false;
                        break;
                    }
                    line.push(k);
                }
                if minimal {
                    lines.push(line);
                }
            }
        }
        let mut lines_of = vec![Vec::new(); np];
        for (id, line) in lines.iter().enumerate() {
            for &p in line {
                lines_of[p as usize].push(id as u32);
            }
        }
        self.lines = lines;
        self.lines_of = lines_of;
    }

    fn point_of(&self, v: u32) -> usize {
        self.index[v as usize] as usize
    }
}

fn distinct(colors: &[Vec<u32>]) -> usize {
    colors.iter().flatten().collect::<HashSet<_>>().len()
}

/// Refines several colorings of the same geometry jointly, so that equal
/// colors mean equal invariants across codes.
fn refine(proj: &Projective, colorings: &mut [Vec<u32>]) {
    if proj.lines.is_empty() {
        return;
    }
    let mut classes = distinct(colorings);
    loop {
        let signatures: Vec<Vec<(u32, Vec<Vec<u32>>)>> = colorings
            .iter()
            .map(|color| {
                (0..proj.points.len())
                    .map(|p| {
                        let mut around: Vec<Vec<u32>> = proj.lines_of[p]
                            .iter()
                            .map(|&l| {
                                let mut c: Vec<u32> = proj.lines[l as usize]
                                    .iter()
                                    .filter(|&&x| x as usize != p)
                                    .map(|&x| color[x as usize])
                                    .collect();
                                c.sort_unstable();
                                c
                            })
                            .collect();
                        around.sort_unstable();
                        (color[p], around)
                    })
                    .collect()
            })
            .collect();
        let ids: BTreeMap<&(u32, Vec<Vec<u32>>), u32> =
            signatures.iter().flatten().collect::<std::collections::BTreeSet<_>>().into_iter().zip(0..).collect();
        for (color, sigs) in colorings.iter_mut().zip(&signatures) {
            for (c, s) in color.iter_mut().zip(sigs) {
                *c = ids[s];
            }
        }
        let now = distinct(colorings);
        if now == classes {
            return;
        }
        classes = now;
    }
}

/// Per-code data on a shared geometry.
struct Side {
    /// `column_of[p] = (i, s)` with `h_i = s * point p`.
    column_of: Vec<Option<(usize, u32)>>,
    columns: Vec<u32>,
}

impl Side {
    fn new(code: &LinearCode, proj: &Projective) -> Result<Self> {
        let columns = code.column_syndromes()?.to_vec();
        let mut column_of: Vec<Option<(usize, u32)>> = vec![None; proj.points.len()];
        for (i, &v) in columns.iter().enumerate() {
            let p = proj.point_of(v);
            if let Some((prev, _)) = column_of[p] {
                return Err(Error::RepeatedColumn(prev, i));
            }
            column_of[p] = Some((i, proj.scale[v as usize]));
        }
        Ok(Side { column_of, columns })
    }

    fn initial_colors(proj: &Projective, table: &CosetTable) -> Vec<u32> {
        proj.points.iter().map(|&p| table.weight(p)).collect()
    }
}

struct Engine<'a> {
    proj: &'a Projective,
    dst_color: &'a [u32],
    basis: Vec<u32>,
    /// Colors of `span[k][idx] + b_k`, the points newly fixed at level `k`.
    new_colors: Vec<Vec<u32>>,
    candidates: Vec<Vec<u32>>,
    limit: u64,
    nodes: AtomicU64,
    abort: AtomicBool,
}

impl<'a> Engine<'a> {
    fn new(
        proj: &'a Projective,
        src_color: &'a [u32],
        dst_color: &'a [u32],
        basis: Vec<u32>,
        limit: u64,
    ) -> Self {
        let space = &proj.space;
        let q = space.field().order();
        let mut span = vec![0u32];
        let mut new_colors = Vec::new();
        let mut candidates = Vec::new();
        for &b in &basis {
            new_colors.push(span.iter().map(|&x| src_color[proj.point_of(space.add(x, b))]).collect());
            let want = src_color[proj.point_of(b)];
            candidates.push((1..space.size()).filter(|&v| dst_color[proj.point_of(v)] == want).collect());
            span = (0..q).flat_map(|l| span.iter().map(move |&x| (l, x))).map(|(l, x)| space.add(x, space.scale(l, b))).collect();
        }
        Engine { proj, dst_color, basis, new_colors, candidates, limit, nodes: AtomicU64::new(0), abort: AtomicBool::new(false) }
    }

    fn depth(&self) -> usize {
        self.basis.len()
    }

    /// Explores the subtree below image `c0` of `b_0`; `visit` sees the
    /// basis images at every leaf and returns `false` to stop. Returns
    /// `false` if the budget ran out.
    fn run_branch(&self, c0: u32, visit: &mut dyn FnMut(&[u32]) -> bool) -> bool {
        let q = self.proj.space.field().order() as usize;
        let mut walker = Walker {
            engine: self,
            buffers: (0..=self.depth()).map(|k| vec![0u32; q.pow(k as u32)]).collect(),
            chosen: vec![0; self.depth()],
            local: 1,
            aborted: false,
        };
        if walker.extend(0, c0) {
            walker.chosen[0] = c0;
            walker.descend(1, visit);
        }
        walker.flush();
        !walker.aborted
    }

    fn total_nodes(&self) -> u64 {
        self.nodes.load(Ordering::SeqCst)
    }
}

struct Walker<'e, 'a> {
    engine: &'e Engine<'a>,
    buffers: Vec<Vec<u32>>,
    chosen: Vec<u32>,
    local: u64,
    aborted: bool,
}

impl Walker<'_, '_> {
    fn flush(&mut self) {
        let total = self.engine.nodes.fetch_add(self.local, Ordering::SeqCst) + self.local;
        self.local = 0;
        if total > self.engine.limit {
            self.engine.abort.store(true, Ordering::SeqCst);
        }
        if self.engine.abort.load(Ordering::Relaxed) {
            self.aborted = true;
        }
    }

    /// Fills the images of `span[k+1]` given image `c` of `b_k`; `false`
    /// if some new point loses its color or maps to zero.
    fn extend(&mut self, k: usize, c: u32) -> bool {
        let e = self.engine;
        let space = &e.proj.space;
        let (lo, hi) = self.buffers.split_at_mut(k + 1);
        let cur = &lo[k];
        let next = &mut hi[0];
        let m = cur.len();
        next[..m].copy_from_slice(cur);
        for (idx, &x) in cur.iter().enumerate() {
            let w = space.add(x, c);
            if w == 0 || e.dst_color[e.proj.point_of(w)] != e.new_colors[k][idx] {
                return false;
            }
            next[m + idx] = w;
        }
        for l in 2..space.field().order() {
            let cl = space.scale(l, c);
            let off = l as usize * m;
            for (idx, &x) in cur.iter().enumerate() {
                next[off + idx] = space.add(x, cl);
            }
        }
        true
    }

    fn descend(&mut self, k: usize, visit: &mut dyn FnMut(&[u32]) -> bool) -> bool {
        if k == self.engine.depth() {
            return visit(&self.chosen);
        }
        for i in 0..self.engine.candidates[k].len() {
            let c = self.engine.candidates[k][i];
            self.local += 1;
            if self.local >= FLUSH_EVERY {
                self.flush();
                if self.aborted {
                    return false;
                }
            }
            if !self.extend(k, c) {
                continue;
            }
            self.chosen[k] = c;
            if !self.descend(k + 1, visit) {
                return false;
            }
        }
        true
    }
}

/// Columns (by index) forming the basis: greedy over `order`.
fn choose_basis(side: &Side, space: &PackedSpace, order: &[usize]) -> Result<(Vec<usize>, Vec<u32>)> {
    let q = space.field().order();
    let mut in_span = vec![false; space.size() as usize];
    in_span[0] = true;
    let mut span = vec![0u32];
    let (mut idx, mut vecs) = (Vec::new(), Vec::new());
    for &i in order {
        let v = side.columns[i];
        if in_span[v as usize] {
            continue;
        }
        let next: Vec<u32> =
            (0..q).flat_map(|l| span.iter().map(move |&x| (l, x))).map(|(l, x)| space.add(x, space.scale(l, v))).collect();
        for &x in &next {
            in_span[x as usize] = true;
        }
        span = next;
        idx.push(i);
        vecs.push(v);
        if vecs.len() == space.dim() {
            break;
        }
    }
    if vecs.len() != space.dim() {
        return Err(Error::Internal("columns do not span the syndrome space".into()));
    }
    Ok((idx, vecs))
}

fn column_order(options: &SearchOptions, n: usize) -> Result<Vec<usize>> {
    match &options.column_order {
        None => Ok((0..n).collect()),
        Some(order) => {
            let mut sorted = order.clone();
            sorted.sort_unstable();
            if sorted != (0..n).collect::<Vec<_>>() {
                return Err(Error::DimensionMismatch(format!("column order is not a permutation of 0..{n}")));
            }
            Ok(order.clone())
        }
    }
}

/// `S` with `S b_k = images[k]`.
fn lift_from_images(space: &PackedSpace, basis_inv: &MatrixFq, images: &[u32]) -> Result<MatrixFq> {
    let cols: Vec<Vec<u32>> = images.iter().map(|&v| space.unpack(v)).collect();
    MatrixFq::from_columns(space.field(), space.dim(), &cols)?.mul(basis_inv)
}

fn map_from_lift(proj: &Projective, src: &Side, dst: &Side, lift: &MatrixFq) -> Result<MonomialMap> {
    let f = proj.space.field();
    let mut perm = Vec::with_capacity(src.columns.len());
    let mut scales = Vec::with_capacity(src.columns.len());
    for &h in &src.columns {
        let v = proj.space.apply(lift, h);
        if v == 0 {
            return Err(Error::Internal("lift kills a column".into()));
        }
        let (j, s) = dst.column_of[proj.point_of(v)]
            .ok_or_else(|| Error::Internal("lift sends a column off the column set".into()))?;
        perm.push(j);
        scales.push(f.div(proj.scale[v as usize], s));
    }
    MonomialMap::new(perm, scales).map_err(|e| Error::Internal(format!("lift does not give a monomial map: {e}")))
}

fn basis_inverse(space: &PackedSpace, basis: &[u32]) -> Result<MatrixFq> {
    let cols: Vec<Vec<u32>> = basis.iter().map(|&v| space.unpack(v)).collect();
    MatrixFq::from_columns(space.field(), space.dim(), &cols)?
        .inverse()
        .ok_or_else(|| Error::Internal("basis columns are dependent".into()))
}

#[derive(Default)]
struct Branch {
    leaves: u64,
    first: Option<Vec<u32>>,
    transversal: Vec<BTreeMap<u32, Vec<u32>>>,
}

/// Computes `MAut(C)` exactly, or reports that the node budget ran out.
pub fn maut_search(code: &LinearCode, options: &SearchOptions) -> Result<SearchOutcome<AutGroupResult>> {
    let table = code.coset_table()?;
    let space = code.syndrome_space()?;
    let proj = Projective::new(space)?;
    let side = Side::new(code, &proj)?;
    let mut colors = vec![Side::initial_colors(&proj, &table)];
    refine(&proj, &mut colors);
    let order = column_order(options, code.length())?;
    let (basis_idx, basis) = choose_basis(&side, space, &order)?;
    let depth = basis.len();
    let engine = Engine::new(&proj, &colors[0], &colors[0], basis.clone(), options.node_limit);

    let branches: Vec<(bool, Branch)> = engine.candidates[0]
        .par_iter()
        .map(|&c0| {
            let mut br = Branch { transversal: vec![BTreeMap::new(); depth], ..Default::default() };
            let on_identity = c0 == basis[0];
            let ok = engine.run_branch(c0, &mut |chosen| {
                br.leaves += 1;
                if br.first.is_none() {
                    br.first = Some(chosen.to_vec());
                }
                if on_identity {
                    if let Some(k) = (0..depth).find(|&k| chosen[k] != basis[k]) {
                        br.transversal[k].entry(chosen[k]).or_insert_with(|| chosen.to_vec());
                    }
                }
                true
            });
            (ok, br)
        })
        .collect();

    let nodes = engine.total_nodes();
    if nodes > options.node_limit || branches.iter().any(|(ok, _)| !ok) {
        return Ok(SearchOutcome::Incomplete { nodes, limit: options.node_limit });
    }

    let group_order: u64 = branches.iter().map(|(_, b)| b.leaves).sum();
    let mut transversal: Vec<Vec<Vec<u32>>> = vec![Vec::new(); depth];
    for (c0, (_, br)) in engine.candidates[0].iter().zip(&branches) {
        if *c0 == basis[0] {
            for (k, t) in br.transversal.iter().enumerate() {
                transversal[k].extend(t.values().cloned());
            }
        } else if let Some(first) = &br.first {
            transversal[0].push(first.clone());
        }
    }
    let basic_orbit_lengths: Vec<u64> = transversal.iter().map(|t| t.len() as u64 + 1).collect();
    if basic_orbit_lengths.iter().product::<u64>() != group_order {
        return Err(Error::Internal(format!(
            "leaf count {group_order} differs from the product of basic orbit lengths {basic_orbit_lengths:?}"
        )));
    }

    let inv = basis_inverse(space, &basis)?;
    let mut generators = Vec::new();
    for images in transversal.iter().flatten() {
        let lift = lift_from_images(space, &inv, images)?;
        let map = map_from_lift(&proj, &side, &side, &lift)?;
        let elem = is_automorphism(code, &map)?
            .ok_or_else(|| Error::Internal("search produced a non-automorphism".into()))?;
        if *elem.lift() != lift {
            return Err(Error::Internal("search lift disagrees with the recomputed lift".into()));
        }
        generators.push(elem);
    }
    let orbits = orbits_on_cosets(&table, &generators)?;
    let rho = table.rho();
    Ok(SearchOutcome::Complete(AutGroupResult {
        order: group_order,
        completely_transitive: orbits.count() == rho + 1,
        generators,
        basic_orbit_lengths,
        basis: basis_idx,
        orbits,
        rho,
        nodes,
    }))
}

/// Searches for a monomial map carrying `c1` onto `c2`.
pub fn code_equivalence(c1: &LinearCode, c2: &LinearCode, options: &SearchOptions) -> Result<Equivalence> {
    if c1.length() != c2.length() {
        return Err(Error::DimensionMismatch(format!("lengths {} and {} differ", c1.length(), c2.length())));
    }
    if c1.field() != c2.field() {
        return Err(Error::FieldMismatch);
    }
    if c1.dimension() != c2.dimension() {
        return Err(Error::DimensionMismatch(format!("dimensions {} and {} differ", c1.dimension(), c2.dimension())));
    }
    let identity = MonomialMap::identity(c1.length());
    if is_equivalence(c1, c2, &identity)? {
        return Ok(Equivalence::Equivalent(identity));
    }
    let (t1, t2) = (c1.coset_table()?, c2.coset_table()?);
    if t1.level_sizes() != t2.level_sizes() {
        return Ok(Equivalence::NotEquivalent);
    }
    let space = c1.syndrome_space()?;
    let proj = Projective::new(space)?;
    let (s1, s2) = (Side::new(c1, &proj)?, Side::new(c2, &proj)?);
    let mut colors = vec![Side::initial_colors(&proj, &t1), Side::initial_colors(&proj, &t2)];
    refine(&proj, &mut colors);
    let histogram = |c: &[u32]| {
        let mut v = c.to_vec();
        v.sort_unstable();
        v
    };
    if histogram(&colors[0]) != histogram(&colors[1]) {
        return Ok(Equivalence::NotEquivalent);
    }
    let order = column_order(options, c1.length())?;
    let (_, basis) = choose_basis(&s1, space, &order)?;
    let engine = Engine::new(&proj, &colors[0], &colors[1], basis.clone(), options.node_limit);

    let branches: Vec<(bool, Option<Vec<u32>>)> = engine.candidates[0]
        .par_iter()
        .map(|&c0| {
            let mut found = None;
            let ok = engine.run_branch(c0, &mut |chosen| {
                found = Some(chosen.to_vec());
                false
            });
            (ok || found.is_some(), found)
        })
        .collect();
    let nodes = engine.total_nodes();
    for (ok, found) in &branches {
        if let Some(images) = found {
            let lift = lift_from_images(space, &basis_inverse(space, &basis)?, images)?;
            let map = map_from_lift(&proj, &s1, &s2, &lift)?;
            if !is_equivalence(c1, c2, &map)? {
                return Err(Error::Internal("equivalence witness fails the row-space check".into()));
            }
            return Ok(Equivalence::Equivalent(map));
        }
        if !ok {
            return Ok(Equivalence::Unknown { nodes, limit: options.node_limit });
        }
    }
    if nodes > options.node_limit {
        return Ok(Equivalence::Unknown { nodes, limit: options.node_limit });
    }
    Ok(Equivalence::NotEquivalent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldTable;
    use std::sync::Arc;

    fn hamming(q: u32, m: usize) -> LinearCode {
        let f = Arc::new(FieldTable::new(q, 1).unwrap());
        let cols = crate::linalg::projective_points(&f, m);
        LinearCode::from_parity_check(MatrixFq::from_columns(&f, m, &cols).unwrap()).unwrap()
    }

    #[test]
    fn projective_indexing() {
        let f = Arc::new(FieldTable::new(3, 1).unwrap());
        let space = PackedSpace::new(&f, 2).unwrap();
        let proj = Projective::new(&space).unwrap();
        assert_eq!(proj.points.len(), 4);
        assert_eq!(proj.lines.len(), 1);
        let space3 = PackedSpace::new(&f, 3).unwrap();
        let proj3 = Projective::new(&space3).unwrap();
        assert_eq!(proj3.points.len(), 13);
        assert_eq!(proj3.lines.len(), 13);
        assert!(proj3.lines_of.iter().all(|l| l.len() == 4));
    }

    #[test]
    fn hamming_orders() {
        let g = maut_search(&hamming(2, 3), &SearchOptions::default()).unwrap().complete().unwrap();
        assert_eq!(g.order, 168);
        assert_eq!(g.orbits.count(), 2);
        assert!(g.completely_transitive);
        let g = maut_search(&hamming(3, 2), &SearchOptions::default()).unwrap().complete().unwrap();
        assert_eq!(g.order, 48);
    }

    #[test]
    fn tiny_budget_is_incomplete() {
        let out = maut_search(&hamming(2, 3), &SearchOptions::with_node_limit(3)).unwrap();
        assert!(matches!(out, SearchOutcome::Incomplete { .. }));
    }

    #[test]
    fn self_equivalence() {
        let c = hamming(2, 3);
        match code_equivalence(&c, &c, &SearchOptions::default()).unwrap() {
            Equivalence::Equivalent(m) => assert!(m.is_identity()),
            other => panic!("{other:?}"),
        }
    }
}
