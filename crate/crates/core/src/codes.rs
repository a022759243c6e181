//! Linear codes given by a parity-check matrix: parameters, coset weights,
//! covering radius and intersection numbers.
//!
//! All coset-level analysis works on syndromes. Two vectors share a coset
//! exactly when they share a syndrome, the distance from `x` to the code is
//! the minimum weight of its coset, and the neighbour `x + a e_i` has
//! syndrome `s + a h_i`. Neighbour counts are therefore constant on cosets,
//! and complete regularity can be decided over the `q^R` syndromes.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::FieldTable;
use crate::linalg::{proj_normalize, MatrixFq, PackedSpace};

/// A linear code `{x : H x^T = 0}`.
#[derive(Debug, Clone)]
pub struct LinearCode {
    original: MatrixFq,
    parity: MatrixFq,
    space: Option<PackedSpace>,
    columns: Vec<u32>,
    blocks: Option<Vec<Range<usize>>>,
}

/// Result of a bounded minimum-distance search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MinDistance {
    Exact(usize),
    /// No `w <= limit` columns are dependent, so `d > limit`.
    ExceedsLimit(usize),
}

impl fmt::Display for MinDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinDistance::Exact(d) => write!(f, "{d}"),
            MinDistance::ExceedsLimit(l) => write!(f, ">{l}"),
        }
    }
}

impl LinearCode {
    /// Stores `h` and a full-rank basis of its row space.
    pub fn from_parity_check(h: MatrixFq) -> Result<Self> {
        if h.is_zero() {
            return Err(Error::ZeroMatrix);
        }
        if let Some(c) = (0..h.cols()).find(|&c| (0..h.rows()).all(|r| h.get(r, c) == 0)) {
            return Err(Error::ZeroColumn(c));
        }
        let parity = h.row_basis();
        let space = PackedSpace::new(h.field(), parity.rows()).ok();
        let columns = match &space {
            Some(sp) => (0..parity.cols()).map(|c| sp.pack(&parity.column(c))).collect(),
            None => Vec::new(),
        };
        Ok(LinearCode { original: h, parity, space, columns, blocks: None })
    }

    /// Attaches the partition of coordinates into consecutive blocks of `len`.
    pub fn with_blocks(mut self, len: usize) -> Result<Self> {
        if len == 0 || !self.length().is_multiple_of(len) {
            return Err(Error::DimensionMismatch(format!("length {} is not a multiple of block size {len}", self.length())));
        }
        self.blocks = Some((0..self.length() / len).map(|j| j * len..(j + 1) * len).collect());
        Ok(self)
    }

    pub fn field(&self) -> &Arc<FieldTable> {
        self.parity.field()
    }

    /// The parity-check matrix as supplied.
    pub fn original(&self) -> &MatrixFq {
        &self.original
    }

    /// Full-rank parity-check matrix in reduced row-echelon form.
    pub fn parity_check(&self) -> &MatrixFq {
        &self.parity
    }

    pub fn length(&self) -> usize {
        self.parity.cols()
    }

    /// Rank of the parity-check matrix; syndromes live in `F_q^redundancy`.
    pub fn redundancy(&self) -> usize {
        self.parity.rows()
    }

    pub fn dimension(&self) -> usize {
        self.length() - self.redundancy()
    }

    pub fn blocks(&self) -> Option<&[Range<usize>]> {
        self.blocks.as_deref()
    }

    pub fn syndrome_space(&self) -> Result<&PackedSpace> {
        self.space.as_ref().ok_or_else(|| {
            let size = (self.field().order() as f64).powi(self.redundancy() as i32) as u64;
            Error::SizeGuard { space: "syndrome space", size, limit: crate::linalg::MAX_PACKED_SIZE }
        })
    }

    /// Packed syndromes of the unit vectors, i.e. the columns of `H`.
    pub fn column_syndromes(&self) -> Result<&[u32]> {
        self.syndrome_space()?;
        Ok(&self.columns)
    }

    pub fn syndrome(&self, x: &[u32]) -> Result<u32> {
        let space = self.syndrome_space()?;
        Ok(space.pack(&self.parity.mul_vec(x)?))
    }

    pub fn contains(&self, x: &[u32]) -> Result<bool> {
        Ok(self.parity.mul_vec(x)?.iter().all(|&v| v == 0))
    }

    /// Generator matrix: a basis of the code, one codeword per row.
    pub fn generator(&self) -> MatrixFq {
        self.parity.nullspace_basis()
    }

    /// Smallest `w <= limit` such that some `w` columns are dependent.
    pub fn min_distance(&self, limit: usize) -> MinDistance {
        let f = &**self.field();
        let cols = self.parity.columns();
        // zero columns are rejected at construction
        let mut classes: HashMap<Vec<u32>, usize> = HashMap::new();
        let mut reps = Vec::new();
        let mut repeated = false;
        for (i, c) in cols.iter().enumerate() {
            let (w, _) = proj_normalize(f, c).expect("nonzero column");
            if classes.insert(w.clone(), i).is_some() {
                repeated = true;
            } else {
                reps.push(w);
            }
        }
        if limit >= 2 && repeated {
            return MinDistance::Exact(2);
        }
        if limit < 3 {
            return MinDistance::ExceedsLimit(limit);
        }
        for a in 0..reps.len() {
            for b in a + 1..reps.len() {
                for lam in f.nonzero() {
                    let v: Vec<u32> = reps[a].iter().zip(&reps[b]).map(|(&x, &y)| f.add(x, f.mul(lam, y))).collect();
                    let (w, _) = proj_normalize(f, &v).expect("independent pair");
                    if classes.contains_key(&w) {
                        return MinDistance::Exact(3);
                    }
                }
            }
        }
        let field = self.field();
        for w in 4..=limit.min(reps.len()) {
            for combo in (0..reps.len()).combinations(w) {
                let chosen: Vec<Vec<u32>> = combo.iter().map(|&i| reps[i].clone()).collect();
                let m = MatrixFq::from_columns(field, self.redundancy(), &chosen).expect("consistent columns");
                if m.rank() < w {
                    return MinDistance::Exact(w);
                }
            }
        }
        MinDistance::ExceedsLimit(limit)
    }

    /// Coset minimum weights by breadth-first search on the syndrome graph.
    pub fn coset_table(&self) -> Result<CosetTable> {
        let space = self.syndrome_space()?.clone();
        let f = self.field();
        let moves: Vec<u32> = self
            .columns
            .iter()
            .flat_map(|&h| f.nonzero().map(move |a| (a, h)))
            .map(|(a, h)| space.scale(a, h))
            .collect::<HashSet<_>>()
            .into_iter()
            .sorted()
            .collect();
        let size = space.size() as usize;
        let mut weights = vec![u32::MAX; size];
        weights[0] = 0;
        let mut queue = VecDeque::from([0u32]);
        while let Some(s) = queue.pop_front() {
            let w = weights[s as usize];
            for &mv in &moves {
                let t = space.add(s, mv) as usize;
                if weights[t] == u32::MAX {
                    weights[t] = w + 1;
                    queue.push_back(t as u32);
                }
            }
        }
        if weights.contains(&u32::MAX) {
            return Err(Error::Internal("syndrome graph is disconnected".into()));
        }
        let rho = *weights.iter().max().unwrap() as usize;
        let mut level_sizes = vec![0u64; rho + 1];
        for &w in &weights {
            level_sizes[w as usize] += 1;
        }
        Ok(CosetTable { space, weights, level_sizes, dimension: self.dimension() })
    }

    /// Per-syndrome neighbour counts `(b, c)`: moves that raise or lower the
    /// coset weight by one.
    pub fn neighbor_counts(&self, table: &CosetTable) -> Vec<(u64, u64)> {
        let f = self.field();
        let space = &table.space;
        let moves: Vec<u32> =
            self.columns.iter().flat_map(|&h| f.nonzero().map(move |a| space.scale(a, h))).collect();
        (0..space.size())
            .into_par_iter()
            .map(|s| {
                let w = table.weights[s as usize];
                let mut b = 0;
                let mut c = 0;
                for &mv in &moves {
                    let wt = table.weights[space.add(s, mv) as usize];
                    if wt == w + 1 {
                        b += 1;
                    } else if wt + 1 == w {
                        c += 1;
                    }
                }
                (b, c)
            })
            .collect()
    }

    pub fn intersection_data(&self, table: &CosetTable) -> IntersectionData {
        let total = self.length() as u64 * (self.field().order() as u64 - 1);
        let counts = self.neighbor_counts(table);
        let rho = table.rho();
        let mut first: Vec<Option<(u32, LevelCounts)>> = vec![None; rho + 1];
        for (s, &(b, c)) in counts.iter().enumerate() {
            let level = table.weights[s] as usize;
            let lc = LevelCounts { a: total - b - c, b, c };
            match first[level] {
                None => first[level] = Some((s as u32, lc)),
                Some((s0, lc0)) if lc0 != lc => {
                    return IntersectionData {
                        rho,
                        regularity: Regularity::Irregular(IrregularityWitness {
                            level,
                            first: s0,
                            first_counts: lc0,
                            second: s as u32,
                            second_counts: lc,
                        }),
                    };
                }
                _ => {}
            }
        }
        let levels: Vec<LevelCounts> = first.into_iter().map(|x| x.expect("every level is nonempty").1).collect();
        let array = IntersectionArray {
            b: levels[..rho].iter().map(|l| l.b).collect(),
            c: levels[1..].iter().map(|l| l.c).collect(),
        };
        IntersectionData { rho, regularity: Regularity::Regular { levels, array } }
    }

    pub fn is_completely_regular(&self) -> Result<(bool, IntersectionData)> {
        let table = self.coset_table()?;
        let data = self.intersection_data(&table);
        Ok((data.is_regular(), data))
    }

    /// The set `{a e_i^1 + e_j^2 : (i, a) != (j, 1)}` on the first two blocks,
    /// checked to consist of coset-weight-2 vectors in pairwise distinct cosets.
    pub fn weight2_witnesses(&self) -> Result<Vec<Vec<u32>>> {
        let blocks = self.blocks().ok_or(Error::MissingBlocks)?;
        if blocks.len() < 2 {
            return Err(Error::SchemaMismatch(format!("need two blocks, code has {}", blocks.len())));
        }
        let table = self.coset_table()?;
        let space = &table.space;
        let f = self.field();
        let (t1, t2) = (blocks[0].clone(), blocks[1].clone());
        let mut out = Vec::new();
        let mut seen = HashMap::new();
        for i in 0..t1.len() {
            for a in f.nonzero() {
                for j in 0..t2.len() {
                    if i == j && a == 1 {
                        continue;
                    }
                    let mut x = vec![0u32; self.length()];
                    x[t1.start + i] = a;
                    x[t2.start + j] = 1;
                    let s = space.add(space.scale(a, self.columns[t1.start + i]), self.columns[t2.start + j]);
                    let w = table.weight(s);
                    if w != 2 {
                        return Err(Error::SchemaMismatch(format!(
                            "{a} e_{} + e_{} lies in a coset of weight {w}",
                            t1.start + i + 1,
                            t2.start + j + 1
                        )));
                    }
                    if let Some(prev) = seen.insert(s, out.len()) {
                        return Err(Error::SchemaMismatch(format!("witnesses {prev} and {} share a coset", out.len())));
                    }
                    out.push(x);
                }
            }
        }
        Ok(out)
    }
}

/// Coset minimum weight for every syndrome.
#[derive(Debug, Clone)]
pub struct CosetTable {
    space: PackedSpace,
    weights: Vec<u32>,
    level_sizes: Vec<u64>,
    dimension: usize,
}

impl CosetTable {
    pub fn space(&self) -> &PackedSpace {
        &self.space
    }

    pub fn weight(&self, syndrome: u32) -> u32 {
        self.weights[syndrome as usize]
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    /// Covering radius.
    pub fn rho(&self) -> usize {
        self.level_sizes.len() - 1
    }

    /// Number of cosets of each weight `0..=rho`.
    pub fn level_sizes(&self) -> &[u64] {
        &self.level_sizes
    }

    pub fn coset_count(&self) -> u64 {
        self.space.size() as u64
    }

    /// `|C(l)|`: coset count times `q^k`, when it fits in 128 bits.
    pub fn subconstituent_size(&self, level: usize) -> Option<u128> {
        let q = self.space.field().order() as u128;
        let per_coset = q.checked_pow(self.dimension as u32)?;
        (*self.level_sizes.get(level)? as u128).checked_mul(per_coset)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelCounts {
    pub a: u64,
    pub b: u64,
    pub c: u64,
}

/// `{b_0, ..., b_{rho-1}; c_1, ..., c_rho}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionArray {
    pub b: Vec<u64>,
    pub c: Vec<u64>,
}

impl IntersectionArray {
    pub fn new(b: Vec<u64>, c: Vec<u64>) -> Self {
        IntersectionArray { b, c }
    }

    /// Cuts the array at the first `b_l = 0`, which forces `rho = l`.
    pub fn truncate_degenerate(&self) -> Self {
        match self.b.iter().position(|&b| b == 0) {
            Some(l) => IntersectionArray { b: self.b[..l].to_vec(), c: self.c[..l].to_vec() },
            None => self.clone(),
        }
    }
}

impl fmt::Display for IntersectionArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(", ");
        write!(f, "{{{}; {}}}", join(&self.b), join(&self.c))
    }
}

/// Two cosets at the same level whose neighbour counts differ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrregularityWitness {
    pub level: usize,
    pub first: u32,
    pub first_counts: LevelCounts,
    pub second: u32,
    pub second_counts: LevelCounts,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Regularity {
    Regular { levels: Vec<LevelCounts>, array: IntersectionArray },
    Irregular(IrregularityWitness),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionData {
    pub rho: usize,
    pub regularity: Regularity,
}

impl IntersectionData {
    pub fn is_regular(&self) -> bool {
        matches!(self.regularity, Regularity::Regular { .. })
    }

    pub fn array(&self) -> Option<&IntersectionArray> {
        match &self.regularity {
            Regularity::Regular { array, .. } => Some(array),
            Regularity::Irregular(_) => None,
        }
    }

    pub fn levels(&self) -> Option<&[LevelCounts]> {
        match &self.regularity {
            Regularity::Regular { levels, .. } => Some(levels),
            Regularity::Irregular(_) => None,
        }
    }
}
