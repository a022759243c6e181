//! Parity-check matrices for the Hamming code, the concatenated families
//! `B^(r)` and `A^(r)`, and the supplementary family `C^(r)`.
//!
//! Every matrix is built from a Hamming matrix `H` whose column `i`
//! carries a field label `beta_i` in `F_{q^m}`, and the blocks
//! `H_j = [coords(xi^j beta_i)]_i`. In the cyclic case (`gcd(n, q-1) = 1`)
//! the labels are `beta_i = xi^i`. Otherwise no cyclic Hamming code exists
//! and the labels are the canonical projective representatives of
//! `F_q^m` in lexicographic order, read back as field elements.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::autgroup::{code_equivalence, Equivalence, MonomialMap, SearchOptions};
use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::gf::{ext_context, is_prime, ExtFieldContext, FieldTable};
use crate::linalg::{proj_normalize, projective_points, MatrixFq};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Hamming,
    B,
    A,
    C,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Hamming => "hamming",
            Family::B => "b",
            Family::A => "a",
            Family::C => "c",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hamming" | "h" => Ok(Family::Hamming),
            "b" => Ok(Family::B),
            "a" => Ok(Family::A),
            "c" => Ok(Family::C),
            other => Err(Error::Parse(format!("unknown family `{other}` (expected hamming, b, a or c)"))),
        }
    }
}

/// Which member of which family to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConstructionSpec {
    pub q: u32,
    pub m: u32,
    pub family: Family,
    pub r: i64,
}

impl ConstructionSpec {
    pub fn new(q: u32, m: u32, family: Family, r: i64) -> Self {
        ConstructionSpec { q, m, family, r }
    }

    /// Hamming length `(q^m - 1)/(q - 1)`.
    pub fn n(&self) -> u64 {
        hamming_length(self.q, self.m)
    }

    pub fn validate(&self) -> Result<()> {
        prime_power(self.q)?;
        if self.m < 2 {
            return Err(Error::OutOfRange { param: "m", value: self.m as i64, constraint: "m >= 2".into() });
        }
        let n = self.n() as i64;
        let r = self.r;
        let bad = |constraint: String| Err(Error::OutOfRange { param: "r", value: r, constraint });
        match self.family {
            Family::Hamming => Ok(()),
            Family::B if !(1..=n).contains(&r) => bad(format!("family B requires 1 <= r <= n = {n}")),
            Family::C if !(1..=n).contains(&r) => bad(format!(
                "family C is built for 1 <= r <= n = {n}; larger r is not a Construction I split"
            )),
            Family::A if r == n => bad(format!(
                "family A requires -2 <= r <= n - 1 = {}; r = n repeats the columns of the [H; H] block",
                n - 1
            )),
            Family::A if !(-2..n).contains(&r) => bad(format!("family A requires -2 <= r <= n - 1 = {}", n - 1)),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for ConstructionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Hamming => write!(f, "Hamming(q={}, m={})", self.q, self.m),
            fam => write!(f, "{}^({})(q={}, m={})", fam.to_string().to_uppercase(), self.r, self.q, self.m),
        }
    }
}

pub fn hamming_length(q: u32, m: u32) -> u64 {
    ((q as u64).pow(m) - 1) / (q as u64 - 1)
}

/// `(p, s)` with `q = p^s`.
pub fn prime_power(q: u32) -> Result<(u32, u32)> {
    let bad = || Error::OutOfRange { param: "q", value: q as i64, constraint: "q must be a prime power".into() };
    if q < 2 {
        return Err(bad());
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).unwrap();
    if !is_prime(p) {
        return Err(bad());
    }
    let (mut rest, mut s) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        s += 1;
    }
    if rest != 1 {
        return Err(bad());
    }
    Ok((p, s))
}

pub fn field_for_order(q: u32) -> Result<Arc<FieldTable>> {
    let (p, s) = prime_power(q)?;
    Ok(Arc::new(FieldTable::new(p, s)?))
}

/// The Hamming matrix with its column labels and the field context.
#[derive(Debug, Clone)]
pub struct HammingSetup {
    ctx: ExtFieldContext,
    labels: Vec<u32>,
    matrix: MatrixFq,
    cyclic: bool,
}

/// `H` for `F_q^m`: `m x n`, columns labelled by field elements.
pub fn hamming_h(q: u32, m: u32) -> Result<HammingSetup> {
    if m < 2 {
        return Err(Error::OutOfRange { param: "m", value: m as i64, constraint: "m >= 2".into() });
    }
    let base = field_for_order(q)?;
    let ctx = ext_context(&base, m)?;
    let cyclic = ctx.is_cyclic();
    let labels: Vec<u32> = if cyclic {
        (0..ctx.n() as i64).map(|i| ctx.xi_pow(i)).collect()
    } else {
        projective_points(&base, m as usize).iter().map(|v| ctx.vec_to_elem(v)).collect()
    };
    let cols: Vec<Vec<u32>> = labels.iter().map(|&b| ctx.elem_to_vec(b)).collect();
    let matrix = MatrixFq::from_columns(&base, m as usize, &cols)?;
    Ok(HammingSetup { ctx, labels, matrix, cyclic })
}

impl HammingSetup {
    pub fn ctx(&self) -> &ExtFieldContext {
        &self.ctx
    }

    pub fn field(&self) -> &Arc<FieldTable> {
        self.ctx.base()
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn matrix(&self) -> &MatrixFq {
        &self.matrix
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn m(&self) -> usize {
        self.matrix.rows()
    }

    /// `H_j`: column `i` holds the coordinates of `xi^j beta_i`.
    pub fn block(&self, j: i64) -> MatrixFq {
        self.scaled_block(self.ctx.xi_pow(j))
    }

    /// Columns `coords(c * beta_i)` for an arbitrary multiplier `c`.
    pub fn scaled_block(&self, c: u32) -> MatrixFq {
        let ext = self.ctx.ext();
        let cols: Vec<Vec<u32>> = self.labels.iter().map(|&b| self.ctx.elem_to_vec(ext.mul(c, b))).collect();
        MatrixFq::from_columns(self.field(), self.m(), &cols).expect("label columns have length m")
    }

    pub fn zero_block(&self) -> MatrixFq {
        MatrixFq::zeros(self.field(), self.m(), self.n())
    }

    /// `m x m` matrix of multiplication by `c` on coordinate vectors.
    pub fn mul_matrix(&self, c: u32) -> MatrixFq {
        let ext = self.ctx.ext();
        let q = self.field().order();
        let cols: Vec<Vec<u32>> =
            (0..self.m() as u32).map(|k| self.ctx.elem_to_vec(ext.mul(c, q.pow(k)))).collect();
        MatrixFq::from_columns(self.field(), self.m(), &cols).expect("square")
    }

    /// Two-row block matrix `[top_1 .. top_k; bottom_1 .. bottom_k]`.
    fn stack(&self, pairs: &[(MatrixFq, MatrixFq)]) -> MatrixFq {
        let mut top = MatrixFq::zeros(self.field(), self.m(), 0);
        let mut bottom = top.clone();
        for (t, b) in pairs {
            top = top.hconcat(t).expect("same row count");
            bottom = bottom.hconcat(b).expect("same row count");
        }
        top.vconcat(&bottom).expect("same column count")
    }

    /// Blocks `[H; H_j]` for the given exponents.
    pub fn concatenation(&self, exponents: impl IntoIterator<Item = i64>) -> MatrixFq {
        let pairs: Vec<_> = exponents.into_iter().map(|j| (self.matrix.clone(), self.block(j))).collect();
        self.stack(&pairs)
    }
}

fn check_projectively_distinct(m: &MatrixFq) -> Result<()> {
    let f = m.field();
    let mut seen: HashMap<Vec<u32>, usize> = HashMap::new();
    for c in 0..m.cols() {
        let (w, _) = proj_normalize(f, &m.column(c)).map_err(|_| Error::ZeroColumn(c))?;
        if let Some(prev) = seen.insert(w, c) {
            return Err(Error::RepeatedColumn(prev, c));
        }
    }
    Ok(())
}

fn range_error(family: Family, q: u32, m: u32, r: i64) -> Result<()> {
    ConstructionSpec::new(q, m, family, r).validate()
}

/// Construction I: `[H ... H; H_1 ... H_r]`, `2m x rn`.
pub fn hb_matrix(q: u32, m: u32, r: i64) -> Result<MatrixFq> {
    range_error(Family::B, q, m, r)?;
    let setup = hamming_h(q, m)?;
    hb_from_setup(&setup, r)
}

fn hb_from_setup(setup: &HammingSetup, r: i64) -> Result<MatrixFq> {
    let h = setup.concatenation(1..=r);
    check_projectively_distinct(&h).map_err(|e| Error::Internal(format!("H_b({r}): {e}")))?;
    Ok(h)
}

/// Construction II: `[H O H H ... H; O H H H_1 ... H_r]`, with the
/// degenerate shapes `[H O H; O H H]`, `[H O; O H]` and `[H; O]` for
/// `r = 0, -1, -2`.
pub fn ha_matrix(q: u32, m: u32, r: i64) -> Result<MatrixFq> {
    range_error(Family::A, q, m, r)?;
    let setup = hamming_h(q, m)?;
    ha_from_setup(&setup, r)
}

fn ha_from_setup(setup: &HammingSetup, r: i64) -> Result<MatrixFq> {
    let h = setup.matrix().clone();
    let o = setup.zero_block();
    let mut pairs = vec![(h.clone(), o.clone())];
    if r >= -1 {
        pairs.push((o, h.clone()));
    }
    if r >= 0 {
        pairs.push((h.clone(), h.clone()));
    }
    for j in 1..=r {
        pairs.push((h.clone(), setup.block(j)));
    }
    let out = setup.stack(&pairs);
    check_projectively_distinct(&out).map_err(|e| Error::Internal(format!("H_a({r}): {e}")))?;
    Ok(out)
}

/// Splits the parity-check matrix of the Hamming code of `F_q^{2m}` into
/// `H_b(r)` and the remaining projective points `H_c(r)` in canonical order.
pub fn h2m_split(q: u32, m: u32, r: i64) -> Result<(MatrixFq, MatrixFq)> {
    range_error(Family::C, q, m, r)?;
    let setup = hamming_h(q, m)?;
    h2m_from_setup(&setup, r)
}

fn h2m_from_setup(setup: &HammingSetup, r: i64) -> Result<(MatrixFq, MatrixFq)> {
    let hb = hb_from_setup(setup, r)?;
    let f = setup.field();
    let dim = 2 * setup.m();
    let used: std::collections::HashSet<Vec<u32>> =
        hb.columns().iter().map(|c| proj_normalize(f, c).expect("nonzero").0).collect();
    let rest: Vec<Vec<u32>> = projective_points(f, dim).into_iter().filter(|p| !used.contains(p)).collect();
    let total = hamming_length(f.order(), dim as u32) as usize;
    if used.len() + rest.len() != total {
        return Err(Error::Internal("supplementary split does not cover every point once".into()));
    }
    let hc = MatrixFq::from_columns(f, dim, &rest)?;
    Ok((hb, hc))
}

/// A built family member.
#[derive(Debug, Clone)]
pub struct Construction {
    spec: ConstructionSpec,
    setup: HammingSetup,
    matrix: MatrixFq,
    block_len: Option<usize>,
}

impl Construction {
    pub fn build(spec: ConstructionSpec) -> Result<Self> {
        spec.validate()?;
        let setup = hamming_h(spec.q, spec.m)?;
        let n = setup.n();
        let (matrix, block_len) = match spec.family {
            Family::Hamming => (setup.matrix().clone(), None),
            Family::B => (hb_from_setup(&setup, spec.r)?, Some(n)),
            Family::A => (ha_from_setup(&setup, spec.r)?, Some(n)),
            Family::C => (h2m_from_setup(&setup, spec.r)?.1, None),
        };
        Ok(Construction { spec, setup, matrix, block_len })
    }

    pub fn spec(&self) -> &ConstructionSpec {
        &self.spec
    }

    pub fn setup(&self) -> &HammingSetup {
        &self.setup
    }

    pub fn matrix(&self) -> &MatrixFq {
        &self.matrix
    }

    pub fn code(&self) -> Result<LinearCode> {
        let code = LinearCode::from_parity_check(self.matrix.clone())?;
        match self.block_len {
            Some(len) => code.with_blocks(len),
            None => Ok(code),
        }
    }

    /// Provenance lines for matrix files and reports.
    pub fn header_comments(&self) -> Vec<String> {
        let ctx = self.setup.ctx();
        let mut lines = vec![
            format!(
                "family={} q={} m={} r={} n={}",
                self.spec.family,
                self.spec.q,
                self.spec.m,
                self.spec.r,
                self.setup.n()
            ),
            format!(
                "primitive_polynomial={} extension_polynomial={} cyclic={}",
                ctx.base().modulus_string(),
                ctx.ext().modulus_string(),
                self.setup.is_cyclic()
            ),
        ];
        if !self.setup.is_cyclic() {
            lines.push(
                "non-cyclic: gcd(n, q-1) > 1, columns of H are canonical projective points and H_j multiplies labels by xi^j"
                    .into(),
            );
        }
        lines
    }

    pub fn to_text(&self) -> String {
        self.matrix.to_text(&self.header_comments())
    }
}

/// Monomial map `M` with `L h_i = scale_i h'_{perm(i)}` for every column,
/// so that `M` carries `ker(src)` onto `ker(dst)`. `None` if some
/// transformed column is not a column of `dst` or two collide.
pub fn monomial_from_row_transform(src: &MatrixFq, l: &MatrixFq, dst: &MatrixFq) -> Option<MonomialMap> {
    if src.cols() != dst.cols() || l.cols() != src.rows() || l.rows() != dst.rows() {
        return None;
    }
    let f = src.field();
    let mut classes: HashMap<Vec<u32>, (usize, u32)> = HashMap::new();
    for c in 0..dst.cols() {
        let (w, s) = proj_normalize(f, &dst.column(c)).ok()?;
        classes.insert(w, (c, s));
    }
    let transformed = l.mul(src).ok()?;
    let mut perm = Vec::with_capacity(src.cols());
    let mut scales = Vec::with_capacity(src.cols());
    let mut hit = vec![false; dst.cols()];
    for c in 0..src.cols() {
        let (w, s) = proj_normalize(f, &transformed.column(c)).ok()?;
        let &(target, ts) = classes.get(&w)?;
        if std::mem::replace(&mut hit[target], true) {
            return None;
        }
        perm.push(target);
        scales.push(f.div(s, ts));
    }
    MonomialMap::new(perm, scales).ok()
}

/// Matrix whose column `i` is `scale_i * dst_{perm(i)}`.
pub fn pull_back_columns(dst: &MatrixFq, map: &MonomialMap) -> MatrixFq {
    let f = dst.field();
    let cols: Vec<Vec<u32>> = (0..map.len())
        .map(|i| dst.column(map.perm()[i]).iter().map(|&x| f.mul(map.scales()[i], x)).collect())
        .collect();
    MatrixFq::from_columns(f, dst.rows(), &cols).expect("consistent shape")
}

/// Outcome of the multiplier transform relating shifted blocks to `B^(j)`.
#[derive(Debug, Clone)]
pub struct ScaleTransform {
    pub source: MatrixFq,
    pub target: MatrixFq,
    pub row_transform: MatrixFq,
    pub map: MonomialMap,
}

/// Relates `[H ... H; H_i ... H_{i+j-1}]` to `H_b(j)` by multiplying the
/// bottom row block by `xi^{-(i-1)}`, and checks that the column
/// correspondence yields equal row spaces.
pub fn equiv_scale_transform(q: u32, m: u32, i: i64, j: i64) -> Result<ScaleTransform> {
    let setup = hamming_h(q, m)?;
    let n = setup.n() as i64;
    if i < 1 || j < 1 || i + j > n {
        return Err(Error::OutOfRange {
            param: "i + j",
            value: i + j,
            constraint: format!("need i >= 1, j >= 1 and i + j <= n = {n}"),
        });
    }
    let source = setup.concatenation(i..i + j);
    let target = hb_from_setup(&setup, j)?;
    let f = setup.field();
    let mm = setup.m();
    let mut l = MatrixFq::identity(f, 2 * mm);
    let mult = setup.mul_matrix(setup.ctx().xi_pow(-(i - 1)));
    for a in 0..mm {
        for b in 0..mm {
            l.set(mm + a, mm + b, mult.get(a, b));
        }
    }
    let map = monomial_from_row_transform(&source, &l, &target)
        .ok_or_else(|| Error::Internal("multiplier transform does not match columns".into()))?;
    if !source.row_space_eq(&pull_back_columns(&target, &map)) {
        return Err(Error::Internal("transformed row spaces differ".into()));
    }
    Ok(ScaleTransform { source, target, row_transform: l, map })
}

/// Row transform `L` (`2m x 2m`) taking `H_b(r)` to a block normal form,
/// for `r = 2` (target `[H O; O H]`) and `r = 3` (target `[H O H; O H H]`).
#[derive(Debug, Clone)]
pub struct NormalForm {
    pub transform: MatrixFq,
    pub target: MatrixFq,
    pub map: MonomialMap,
}

pub fn block_normal_form(setup: &HammingSetup, r: i64) -> Result<NormalForm> {
    let f = setup.field().clone();
    let ext = setup.ctx().ext().clone();
    let mm = setup.m();
    let xi = setup.ctx().xi();
    let xi2 = ext.mul(xi, xi);
    let xi3 = ext.mul(xi2, xi);
    // (x, y) -> (xi^2 x - y, y - xi x) kills the second coordinate of block 1
    // and the first of block 2
    let ident = MatrixFq::identity(&f, mm);
    let neg_ident = setup.mul_matrix(ext.neg(1));
    let top = setup.mul_matrix(xi2).hconcat(&neg_ident)?;
    let bottom = setup.mul_matrix(ext.neg(xi)).hconcat(&ident)?;
    let mut l = top.vconcat(&bottom)?;
    let (source, target) = match r {
        2 => (hb_from_setup(setup, 2)?, ha_from_setup(setup, -1)?),
        3 => {
            // block 3 lands on (a beta, b beta); rescale both halves to (beta, beta)
            let a = ext.sub(xi2, xi3);
            let b = ext.sub(xi3, xi);
            let mut d = MatrixFq::zeros(&f, 2 * mm, 2 * mm);
            let (ia, ib) = (setup.mul_matrix(ext.inv(a)), setup.mul_matrix(ext.inv(b)));
            for x in 0..mm {
                for y in 0..mm {
                    d.set(x, y, ia.get(x, y));
                    d.set(mm + x, mm + y, ib.get(x, y));
                }
            }
            l = d.mul(&l)?;
            (hb_from_setup(setup, 3)?, ha_from_setup(setup, 0)?)
        }
        _ => return Err(Error::SchemaMismatch(format!("no block normal form for r = {r}"))),
    };
    let map = monomial_from_row_transform(&source, &l, &target)
        .ok_or_else(|| Error::Internal(format!("normal form transform fails for r = {r}")))?;
    Ok(NormalForm { transform: l, target, map })
}

/// The weight-2 witness set for `B^(3)`, built on the normal form
/// `[H O H; O H H]` and carried back to the coordinates of `B^(3)`.
#[derive(Debug, Clone)]
pub struct B3Witnesses {
    /// Witnesses in normal-form coordinates.
    pub normal: Vec<Vec<u32>>,
    /// The same vectors in `B^(3)` coordinates.
    pub original: Vec<Vec<u32>>,
}

pub fn b3_witnesses(q: u32, m: u32) -> Result<B3Witnesses> {
    let setup = hamming_h(q, m)?;
    if setup.n() < 3 {
        return Err(Error::OutOfRange { param: "n", value: setup.n() as i64, constraint: "B^(3) needs n >= 3".into() });
    }
    let nf = block_normal_form(&setup, 3)?;
    let n = setup.n();
    let normal_code = LinearCode::from_parity_check(nf.target.clone())?.with_blocks(n)?;
    let normal = normal_code.weight2_witnesses()?;
    let b3 = LinearCode::from_parity_check(hb_from_setup(&setup, 3)?)?.with_blocks(n)?;
    let f = setup.field();
    let inverse = nf.map.inverse(f);
    let original: Vec<Vec<u32>> = normal.iter().map(|x| inverse.apply(f, x)).collect();
    let table = b3.coset_table()?;
    let mut seen = std::collections::HashSet::new();
    for x in &original {
        let s = b3.syndrome(x)?;
        if table.weight(s) != 2 || !seen.insert(s) {
            return Err(Error::Internal("transported witness is not a distinct weight-2 coset of B^(3)".into()));
        }
    }
    Ok(B3Witnesses { normal, original })
}

/// Parameters and equivalence of `C^(r)` and `A^(n-r-1)` over `F_2`.
#[derive(Debug, Clone)]
pub struct RemarkCheck {
    pub c_code: LinearCode,
    pub a_code: LinearCode,
    pub parameters_match: bool,
    pub outcome: Equivalence,
}

impl RemarkCheck {
    pub fn holds(&self) -> bool {
        self.parameters_match && matches!(self.outcome, Equivalence::Equivalent(_))
    }
}

pub fn binary_remark_check(m: u32, r: i64, options: &SearchOptions) -> Result<RemarkCheck> {
    let n = hamming_length(2, m) as i64;
    if !(1..n).contains(&r) {
        return Err(Error::OutOfRange { param: "r", value: r, constraint: format!("need 1 <= r <= n - 1 = {}", n - 1) });
    }
    let c_code = Construction::build(ConstructionSpec::new(2, m, Family::C, r))?.code()?;
    let a_code = Construction::build(ConstructionSpec::new(2, m, Family::A, n - r - 1))?.code()?;
    let summary = |c: &LinearCode| -> Result<_> {
        let (_, data) = c.is_completely_regular()?;
        Ok((c.length(), c.dimension(), c.min_distance(3), data.rho, data.array().cloned()))
    };
    let parameters_match = summary(&c_code)? == summary(&a_code)?;
    let outcome = if parameters_match {
        code_equivalence(&c_code, &a_code, options)?
    } else {
        Equivalence::NotEquivalent
    };
    Ok(RemarkCheck { c_code, a_code, parameters_match, outcome })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(8).unwrap(), (2, 3));
        assert_eq!(prime_power(9).unwrap(), (3, 2));
        assert_eq!(prime_power(7).unwrap(), (7, 1));
        assert!(prime_power(6).is_err());
        assert!(prime_power(1).is_err());
    }

    #[test]
    fn cyclic_hamming_2_3() {
        let s = hamming_h(2, 3).unwrap();
        assert!(s.is_cyclic());
        let h = s.matrix();
        assert_eq!((h.rows(), h.cols()), (3, 7));
        let ext = s.ctx().ext();
        for i in 0..7 {
            assert_eq!(h.column(i), ext.elem_to_vec(ext.exp(i as u64)));
        }
        let mut cols: Vec<Vec<u32>> = h.columns();
        cols.sort();
        cols.dedup();
        assert_eq!(cols.len(), 7);
    }

    #[test]
    fn fallback_hamming_3_2() {
        let s = hamming_h(3, 2).unwrap();
        assert!(!s.is_cyclic());
        assert_eq!(s.matrix().columns(), vec![vec![0, 1], vec![1, 0], vec![1, 1], vec![1, 2]]);
    }

    #[test]
    fn cyclic_hamming_4_2() {
        let s = hamming_h(4, 2).unwrap();
        assert!(s.is_cyclic());
        assert_eq!(s.n(), 5);
        assert!(check_projectively_distinct(s.matrix()).is_ok());
    }

    #[test]
    fn block_n_is_h() {
        for (q, m) in [(2, 3), (3, 2), (4, 2)] {
            let s = hamming_h(q, m).unwrap();
            assert_eq!(s.block(s.n() as i64), *s.matrix());
        }
    }

    #[test]
    fn family_shapes() {
        assert_eq!(hb_matrix(2, 3, 7).unwrap().cols(), 49);
        assert_eq!(hb_matrix(2, 3, 7).unwrap().rank(), 6);
        assert_eq!(ha_matrix(2, 3, -1).unwrap().cols(), 14);
        assert_eq!(ha_matrix(2, 3, 0).unwrap().cols(), 21);
        let a2 = ha_matrix(2, 3, -2).unwrap();
        assert_eq!((a2.rows(), a2.cols()), (6, 7));
        assert_eq!(a2.rank(), 3);
        assert!(hb_matrix(2, 3, 8).is_err());
        assert!(hb_matrix(2, 3, 0).is_err());
        assert!(ha_matrix(2, 3, -3).is_err());
    }

    #[test]
    fn family_a_rejects_r_equal_n() {
        match ha_matrix(2, 3, 7) {
            Err(Error::OutOfRange { constraint, .. }) => assert!(constraint.contains("repeats")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn split_sizes() {
        for r in 1..=7 {
            let (hb, hc) = h2m_split(2, 3, r).unwrap();
            assert_eq!(hb.cols(), 7 * r as usize);
            assert_eq!(hc.cols(), (9 - r as usize) * 7);
        }
        let (_, hc) = h2m_split(3, 2, 2).unwrap();
        assert_eq!(hc.cols(), (9 + 1 - 2) * 4);
    }

    #[test]
    fn scale_transform_identity_for_i_one() {
        let t = equiv_scale_transform(2, 3, 1, 3).unwrap();
        assert!(t.map.is_identity());
    }

    #[test]
    fn normal_forms_exist() {
        for (q, m) in [(2, 3), (3, 2), (4, 2)] {
            let s = hamming_h(q, m).unwrap();
            for r in [2, 3] {
                let nf = block_normal_form(&s, r).unwrap();
                let src = hb_from_setup(&s, r).unwrap();
                assert!(src.row_space_eq(&pull_back_columns(&nf.target, &nf.map)));
            }
        }
    }

    #[test]
    fn literal_b3_set_contains_weight_one_vectors() {
        // on the unnormalized B^(3) the set S is not a witness set
        let s = hamming_h(2, 3).unwrap();
        let code = LinearCode::from_parity_check(hb_from_setup(&s, 3).unwrap()).unwrap().with_blocks(7).unwrap();
        assert!(code.weight2_witnesses().is_err());
    }

    #[test]
    fn header_records_provenance() {
        let c = Construction::build(ConstructionSpec::new(3, 2, Family::B, 2)).unwrap();
        let h = c.header_comments();
        assert!(h[0].contains("family=b q=3 m=2 r=2"));
        assert!(h[1].contains("cyclic=false"));
        assert!(h[1].contains("primitive_polynomial=11"));
        let (parsed, comments) = MatrixFq::from_text(&c.to_text()).unwrap();
        assert_eq!(&parsed, c.matrix());
        assert_eq!(comments, h);
    }
}
