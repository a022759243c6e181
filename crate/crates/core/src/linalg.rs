//! Dense exact linear algebra over a finite field.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{parse_poly, FieldTable};

/// Dense row-major matrix over `F_q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixFq {
    field: Arc<FieldTable>,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Reduced row-echelon form of a matrix.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: MatrixFq,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl MatrixFq {
    pub fn zeros(field: &Arc<FieldTable>, rows: usize, cols: usize) -> Self {
        MatrixFq { field: field.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: &Arc<FieldTable>, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(field: &Arc<FieldTable>, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!("row {i} has {} entries, expected {cols}", row.len())));
            }
            data.extend_from_slice(row);
        }
        Self::from_data(field, rows.len(), cols, data)
    }

    /// Builds an `rows x columns.len()` matrix from column vectors.
    pub fn from_columns(field: &Arc<FieldTable>, rows: usize, columns: &[Vec<u32>]) -> Result<Self> {
        let cols = columns.len();
        let mut data = vec![0; rows * cols];
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::DimensionMismatch(format!("column {j} has {} entries, expected {rows}", col.len())));
            }
            for (i, &x) in col.iter().enumerate() {
                data[i * cols + j] = x;
            }
        }
        Self::from_data(field, rows, cols, data)
    }

    pub fn from_data(field: &Arc<FieldTable>, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        if let Some(bad) = data.iter().find(|&&x| !field.is_valid(x)) {
            return Err(Error::Parse(format!("entry {bad} is not an element of F_{}", field.order())));
        }
        Ok(MatrixFq { field: field.clone(), rows, cols, data })
    }

    pub fn field(&self) -> &Arc<FieldTable> {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        debug_assert!(self.field.is_valid(v));
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u32>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    fn check_field(&self, other: &MatrixFq) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn rref(&self) -> Rref {
        let f = &*self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv(m.get(r, c));
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                let factor = m.get(i, c);
                if i == r || factor == 0 {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, rank: r, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Nonzero rows of the reduced row-echelon form.
    pub fn row_basis(&self) -> MatrixFq {
        let rref = self.rref();
        let rows: Vec<usize> = (0..rref.rank).collect();
        rref.matrix.select_rows(&rows)
    }

    pub fn row_space_eq(&self, other: &MatrixFq) -> bool {
        self.cols == other.cols && self.row_basis() == other.row_basis()
    }

    /// Basis of `{v : M v^T = 0}`, one vector per row.
    pub fn nullspace_basis(&self) -> MatrixFq {
        let f = &*self.field;
        let Rref { matrix, pivots, .. } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u32; self.cols];
            v[free] = 1;
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(matrix.get(i, free));
            }
            basis.push(v);
        }
        let mut out = MatrixFq::zeros(&self.field, basis.len(), self.cols);
        for (i, v) in basis.iter().enumerate() {
            out.data[i * self.cols..(i + 1) * self.cols].copy_from_slice(v);
        }
        out
    }

    pub fn mul(&self, other: &MatrixFq) -> Result<MatrixFq> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &*self.field;
        let mut out = MatrixFq::zeros(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!("{}x{} times vector of length {}", self.rows, self.cols, v.len())));
        }
        let f = &*self.field;
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect())
    }

    pub fn select_columns(&self, idx: &[usize]) -> Result<MatrixFq> {
        if let Some(&bad) = idx.iter().find(|&&c| c >= self.cols) {
            return Err(Error::DimensionMismatch(format!("column {bad} of {}", self.cols)));
        }
        let mut out = MatrixFq::zeros(&self.field, self.rows, idx.len());
        for i in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                out.data[i * idx.len() + j] = self.get(i, c);
            }
        }
        Ok(out)
    }

    pub fn select_rows(&self, idx: &[usize]) -> MatrixFq {
        let mut out = MatrixFq::zeros(&self.field, idx.len(), self.cols);
        for (i, &r) in idx.iter().enumerate() {
            out.data[i * self.cols..(i + 1) * self.cols].copy_from_slice(self.row(r));
        }
        out
    }

    pub fn hconcat(&self, other: &MatrixFq) -> Result<MatrixFq> {
        self.check_field(other)?;
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!("hconcat of {} and {} rows", self.rows, other.rows)));
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Ok(MatrixFq { field: self.field.clone(), rows: self.rows, cols, data })
    }

    pub fn vconcat(&self, other: &MatrixFq) -> Result<MatrixFq> {
        self.check_field(other)?;
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!("vconcat of {} and {} columns", self.cols, other.cols)));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(MatrixFq { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn transpose(&self) -> MatrixFq {
        let mut out = MatrixFq::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j);
            }
        }
        out
    }

    pub fn inverse(&self) -> Option<MatrixFq> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = self.hconcat(&MatrixFq::identity(&self.field, n)).ok()?;
        let rref = aug.rref();
        if rref.pivots.iter().take(n).copied().ne(0..n) || rref.rank < n {
            return None;
        }
        let idx: Vec<usize> = (n..2 * n).collect();
        rref.matrix.select_columns(&idx).ok()
    }

    /// Writes the shared matrix text format, preceded by `# ` comment lines.
    pub fn to_text(&self, comments: &[String]) -> String {
        let f = &self.field;
        let mut out = String::new();
        for c in comments {
            let _ = writeln!(out, "# {c}");
        }
        let _ = writeln!(
            out,
            "q={} p={} s={} modulus={} rows={} cols={}",
            f.order(),
            f.characteristic(),
            f.degree(),
            f.modulus_string(),
            self.rows,
            self.cols
        );
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(u32::to_string).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    /// Parses the shared matrix text format. Returns the matrix and the
    /// comment lines (without the leading `#`).
    pub fn from_text(text: &str) -> Result<(MatrixFq, Vec<String>)> {
        let mut comments = Vec::new();
        let mut lines = text.lines().filter(|l| !l.trim().is_empty()).peekable();
        while let Some(l) = lines.peek() {
            match l.trim_start().strip_prefix('#') {
                Some(c) => {
                    comments.push(c.trim().to_string());
                    lines.next();
                }
                None => break,
            }
        }
        let header = lines.next().ok_or_else(|| Error::Parse("missing header line".into()))?;
        let mut q = None;
        let mut p = None;
        let mut s = None;
        let mut modulus = None;
        let mut rows = None;
        let mut cols = None;
        for tok in header.split_whitespace() {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("malformed header token `{tok}`")))?;
            let num = || v.parse::<u64>().map_err(|_| Error::Parse(format!("bad value in `{tok}`")));
            match k {
                "q" => q = Some(num()?),
                "p" => p = Some(num()? as u32),
                "s" => s = Some(num()? as u32),
                "modulus" => modulus = Some(parse_poly(v)?),
                "rows" => rows = Some(num()? as usize),
                "cols" => cols = Some(num()? as usize),
                _ => return Err(Error::Parse(format!("unknown header key `{k}`"))),
            }
        }
        let missing = |k: &str| Error::Parse(format!("header missing `{k}`"));
        let (q, p, s) = (q.ok_or_else(|| missing("q"))?, p.ok_or_else(|| missing("p"))?, s.ok_or_else(|| missing("s"))?);
        let modulus = modulus.ok_or_else(|| missing("modulus"))?;
        let (rows, cols) = (rows.ok_or_else(|| missing("rows"))?, cols.ok_or_else(|| missing("cols"))?);
        let field = FieldTable::with_modulus(p, s, &modulus)?;
        if field.order() as u64 != q {
            return Err(Error::Parse(format!("q={q} does not equal p^s={}", field.order())));
        }
        let field = Arc::new(field);
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            let line = lines.next().ok_or_else(|| Error::Parse(format!("missing row {i}")))?;
            let before = data.len();
            for tok in line.split_whitespace() {
                data.push(tok.parse::<u32>().map_err(|_| Error::Parse(format!("bad entry `{tok}` in row {i}")))?);
            }
            if data.len() - before != cols {
                return Err(Error::Parse(format!("row {i} has {} entries, expected {cols}", data.len() - before)));
            }
        }
        if let Some(extra) = lines.find(|l| !l.trim_start().starts_with('#')) {
            return Err(Error::Parse(format!("unexpected trailing line `{extra}`")));
        }
        Ok((MatrixFq::from_data(&field, rows, cols, data)?, comments))
    }
}

/// Canonical projective representative: `v = scale * w` with the first
/// nonzero entry of `w` equal to 1.
pub fn proj_normalize(field: &FieldTable, v: &[u32]) -> Result<(Vec<u32>, u32)> {
    let lead = *v.iter().find(|&&x| x != 0).ok_or(Error::ZeroVector)?;
    let inv = field.inv(lead);
    Ok((v.iter().map(|&x| field.mul(inv, x)).collect(), lead))
}

/// Canonical representatives of all projective points of `F_q^dim`,
/// in lexicographic order (first entry most significant).
pub fn projective_points(field: &FieldTable, dim: usize) -> Vec<Vec<u32>> {
    let q = field.order();
    let mut out = Vec::new();
    for lead in (0..dim).rev() {
        let tail = dim - lead - 1;
        let count = (q as u64).pow(tail as u32);
        for code in 0..count {
            let mut v = vec![0u32; dim];
            v[lead] = 1;
            let mut c = code;
            for j in (lead + 1..dim).rev() {
                v[j] = (c % q as u64) as u32;
                c /= q as u64;
            }
            out.push(v);
        }
    }
    out
}

/// `F_q^dim` with vectors packed into integers, entry 0 most significant.
/// Lexicographic order on normalized vectors is integer order on codes.
#[derive(Debug, Clone)]
pub struct PackedSpace {
    field: Arc<FieldTable>,
    dim: usize,
    size: u32,
    add: Option<Vec<u32>>,
}

/// Largest ambient space the syndrome machinery will allocate tables for.
pub const MAX_PACKED_SIZE: u64 = 1 << 24;
const PACKED_ADD_TABLE_LIMIT: u32 = 1024;

impl PackedSpace {
    pub fn new(field: &Arc<FieldTable>, dim: usize) -> Result<Self> {
        let size = (field.order() as u64).checked_pow(dim as u32).unwrap_or(u64::MAX);
        if size > MAX_PACKED_SIZE {
            return Err(Error::SizeGuard { space: "syndrome space", size, limit: MAX_PACKED_SIZE });
        }
        let mut space = PackedSpace { field: field.clone(), dim, size: size as u32, add: None };
        if field.order() > 2 && space.size <= PACKED_ADD_TABLE_LIMIT {
            let n = space.size;
            let mut table = vec![0u32; (n * n) as usize];
            for a in 0..n {
                for b in 0..n {
                    table[(a * n + b) as usize] = space.add_digits(a, b);
                }
            }
            space.add = Some(table);
        }
        Ok(space)
    }

    pub fn field(&self) -> &Arc<FieldTable> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of vectors, `q^dim`.
    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn pack(&self, v: &[u32]) -> u32 {
        let q = self.field.order();
        v.iter().fold(0, |acc, &x| acc * q + x)
    }

    pub fn unpack(&self, mut code: u32) -> Vec<u32> {
        let q = self.field.order();
        let mut v = vec![0u32; self.dim];
        for x in v.iter_mut().rev() {
            *x = code % q;
            code /= q;
        }
        v
    }

    fn add_digits(&self, a: u32, b: u32) -> u32 {
        let q = self.field.order();
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.dim {
            out += self.field.add(a % q, b % q) * place;
            place *= q;
            a /= q;
            b /= q;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.field.order() == 2 {
            a ^ b
        } else if let Some(t) = &self.add {
            t[(a * self.size + b) as usize]
        } else {
            self.add_digits(a, b)
        }
    }

    #[inline]
    pub fn scale(&self, c: u32, a: u32) -> u32 {
        match c {
            0 => 0,
            1 => a,
            _ => {
                let q = self.field.order();
                let mut a = a;
                let mut out = 0;
                let mut place = 1;
                for _ in 0..self.dim {
                    out += self.field.mul(c, a % q) * place;
                    place *= q;
                    a /= q;
                }
                out
            }
        }
    }

    /// `(canonical code, scale)` with `a = scale * canonical`; `None` for zero.
    pub fn normalize(&self, a: u32) -> Option<(u32, u32)> {
        if a == 0 {
            return None;
        }
        let q = self.field.order();
        let mut lead = 0;
        let mut x = a;
        while x > 0 {
            lead = x % q;
            x /= q;
        }
        Some((self.scale(self.field.inv(lead), a), lead))
    }

    /// Image of a packed vector under a `dim x dim` matrix.
    pub fn apply(&self, m: &MatrixFq, a: u32) -> u32 {
        let v = self.unpack(a);
        self.pack(&m.mul_vec(&v).expect("square matrix of space dimension"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u32, s: u32) -> Arc<FieldTable> {
        Arc::new(FieldTable::new(p, s).unwrap())
    }

    #[test]
    fn rref_identity_and_zero() {
        let f2 = f(2, 1);
        let i3 = MatrixFq::identity(&f2, 3);
        let r = i3.rref();
        assert_eq!(r.matrix, i3);
        assert_eq!(r.rank, 3);
        assert_eq!(r.pivots, vec![0, 1, 2]);
        let z = MatrixFq::zeros(&f2, 2, 4);
        let r = z.rref();
        assert_eq!(r.rank, 0);
        assert!(r.matrix.is_zero());
    }

    #[test]
    fn nullspace_examples() {
        let f2 = f(2, 1);
        assert_eq!(MatrixFq::identity(&f2, 3).nullspace_basis().rows(), 0);
        let m = MatrixFq::from_rows(&f2, &[vec![1, 1]]).unwrap();
        let ns = m.nullspace_basis();
        assert_eq!(ns.rows(), 1);
        assert_eq!(ns.row(0), &[1, 1]);
    }

    #[test]
    fn normalize_examples() {
        let f3 = f(3, 1);
        assert_eq!(proj_normalize(&f3, &[0, 1, 0]).unwrap(), (vec![0, 1, 0], 1));
        assert_eq!(proj_normalize(&f3, &[0, 2, 1]).unwrap(), (vec![0, 1, 2], 2));
        assert_eq!(proj_normalize(&f(2, 1), &[1, 1]).unwrap(), (vec![1, 1], 1));
        assert!(matches!(proj_normalize(&f3, &[0, 0]), Err(Error::ZeroVector)));
    }

    #[test]
    fn normalize_scaling_exhaustive() {
        for (p, s) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)] {
            let fld = f(p, s);
            let space = PackedSpace::new(&fld, 2).unwrap();
            for code in 1..space.size() {
                let v = space.unpack(code);
                let (w, sc) = proj_normalize(&fld, &v).unwrap();
                assert_eq!(space.normalize(code), Some((space.pack(&w), sc)));
                for lam in fld.nonzero() {
                    let lv: Vec<u32> = v.iter().map(|&x| fld.mul(lam, x)).collect();
                    let (w2, sc2) = proj_normalize(&fld, &lv).unwrap();
                    assert_eq!(w2, w);
                    assert_eq!(sc2, fld.mul(sc, lam));
                }
            }
        }
    }

    #[test]
    fn compositions() {
        let f3 = f(3, 1);
        let a = MatrixFq::from_rows(&f3, &[vec![1, 2, 0], vec![0, 1, 1]]).unwrap();
        assert_eq!(a.mul(&MatrixFq::identity(&f3, 3)).unwrap(), a);
        assert_eq!(a.hconcat(&a).unwrap().cols(), 6);
        assert_eq!(a.vconcat(&a).unwrap().rows(), 4);
        assert!(a.mul(&a).is_err());
        assert_eq!(a.select_columns(&[2, 0]).unwrap().row(0), &[0, 1]);
        assert_eq!(a.transpose().transpose(), a);
        assert!(matches!(a.hconcat(&MatrixFq::identity(&f3, 3)), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn inverse_round_trip() {
        let f3 = f(3, 1);
        let a = MatrixFq::from_rows(&f3, &[vec![1, 2], vec![1, 1]]).unwrap();
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), MatrixFq::identity(&f3, 2));
        let singular = MatrixFq::from_rows(&f3, &[vec![1, 2], vec![2, 1]]).unwrap();
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn projective_point_enumeration() {
        let f2 = f(2, 1);
        let pts = projective_points(&f2, 3);
        assert_eq!(pts.len(), 7);
        assert_eq!(pts[0], vec![0, 0, 1]);
        assert_eq!(pts[6], vec![1, 1, 1]);
        let f3 = f(3, 1);
        let pts = projective_points(&f3, 2);
        assert_eq!(pts, vec![vec![0, 1], vec![1, 0], vec![1, 1], vec![1, 2]]);
        let space = PackedSpace::new(&f3, 2).unwrap();
        let codes: Vec<u32> = pts.iter().map(|p| space.pack(p)).collect();
        assert!(codes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn text_round_trip() {
        let f4 = f(2, 2);
        let a = MatrixFq::from_rows(&f4, &[vec![1, 2, 3], vec![0, 3, 1]]).unwrap();
        let text = a.to_text(&["family=b".to_string()]);
        assert!(text.contains("q=4 p=2 s=2 modulus=111 rows=2 cols=3"));
        let (b, comments) = MatrixFq::from_text(&text).unwrap();
        assert_eq!(a, b);
        assert_eq!(comments, vec!["family=b".to_string()]);
        assert!(MatrixFq::from_text("q=2 p=2 s=1 modulus=11 rows=1 cols=2\n1\n").is_err());
        assert!(MatrixFq::from_text("q=2 p=2 s=1 modulus=11 rows=1 cols=2\n1 2\n").is_err());
    }

    fn matrix_strategy() -> impl Strategy<Value = (u32, usize, usize, Vec<u32>)> {
        (prop_oneof![Just(2u32), Just(3), Just(4), Just(5)], 1usize..6, 1usize..8).prop_flat_map(|(q, r, c)| {
            (Just(q), Just(r), Just(c), proptest::collection::vec(0..q, r * c))
        })
    }

    fn field_of(q: u32) -> Arc<FieldTable> {
        match q {
            4 => f(2, 2),
            p => f(p, 1),
        }
    }

    proptest! {
        #[test]
        fn rref_idempotent_and_nullspace((q, r, c, data) in matrix_strategy()) {
            let fld = field_of(q);
            let m = MatrixFq::from_data(&fld, r, c, data).unwrap();
            let once = m.rref();
            let twice = once.matrix.rref();
            prop_assert_eq!(&once.matrix, &twice.matrix);
            prop_assert!(m.row_space_eq(&once.matrix));
            let ns = m.nullspace_basis();
            prop_assert_eq!(once.rank + ns.rows(), c);
            let prod = m.mul(&ns.transpose()).unwrap();
            prop_assert!(prod.is_zero());
            prop_assert_eq!(ns.rank(), ns.rows());
        }

        #[test]
        fn packed_add_matches_digits((q, dim) in (prop_oneof![Just(2u32), Just(3), Just(4)], 1usize..5), a in 0u32..10_000, b in 0u32..10_000) {
            let fld = field_of(q);
            let space = PackedSpace::new(&fld, dim).unwrap();
            let (a, b) = (a % space.size(), b % space.size());
            let va = space.unpack(a);
            let vb = space.unpack(b);
            let sum: Vec<u32> = va.iter().zip(&vb).map(|(x, y)| fld.add(*x, *y)).collect();
            prop_assert_eq!(space.add(a, b), space.pack(&sum));
        }
    }
}
