use std::fmt;

use serde::{Deserialize, Serialize};

use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::gf::FieldTable;
use crate::linalg::MatrixFq;

/// `e_i -> scales[i] * e_{perm[i]}` on `F_q^N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialMap {
    perm: Vec<usize>,
    scales: Vec<u32>,
}

impl MonomialMap {
    pub fn new(perm: Vec<usize>, scales: Vec<u32>) -> Result<Self> {
        if perm.len() != scales.len() {
            return Err(Error::DimensionMismatch(format!(
                "permutation of length {} with {} scales",
                perm.len(),
                scales.len()
            )));
        }
        let mut hit = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || std::mem::replace(&mut hit[p], true) {
                return Err(Error::Parse(format!("{perm:?} is not a permutation")));
            }
        }
        if let Some(i) = scales.iter().position(|&s| s == 0) {
            return Err(Error::Parse(format!("scale {i} is zero")));
        }
        Ok(MonomialMap { perm, scales })
    }

    pub fn identity(n: usize) -> Self {
        MonomialMap { perm: (0..n).collect(), scales: vec![1; n] }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn scales(&self) -> &[u32] {
        &self.scales
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p) && self.scales.iter().all(|&s| s == 1)
    }

    /// Scales lie in the field.
    pub fn is_valid_for(&self, field: &FieldTable) -> bool {
        self.scales.iter().all(|&s| s != 0 && field.is_valid(s))
    }

    /// `other ∘ self`: apply `self` first.
    pub fn then(&self, other: &MonomialMap, field: &FieldTable) -> MonomialMap {
        assert_eq!(self.len(), other.len(), "composing maps of different lengths");
        let perm = self.perm.iter().map(|&p| other.perm[p]).collect();
        let scales = self.perm.iter().zip(&self.scales).map(|(&p, &s)| field.mul(s, other.scales[p])).collect();
        MonomialMap { perm, scales }
    }

    pub fn inverse(&self, field: &FieldTable) -> MonomialMap {
        let mut perm = vec![0; self.len()];
        let mut scales = vec![0; self.len()];
        for (i, (&p, &s)) in self.perm.iter().zip(&self.scales).enumerate() {
            perm[p] = i;
            scales[p] = field.inv(s);
        }
        MonomialMap { perm, scales }
    }

    /// Image of a vector: `y[perm[i]] = scales[i] * x[i]`.
    pub fn apply(&self, field: &FieldTable, x: &[u32]) -> Vec<u32> {
        assert_eq!(x.len(), self.len(), "vector length differs from map length");
        let mut y = vec![0; x.len()];
        for (i, &v) in x.iter().enumerate() {
            y[self.perm[i]] = field.mul(self.scales[i], v);
        }
        y
    }

    /// `perm=<1-based images> scales=<codes>`, entries separated by spaces.
    pub fn to_line(&self) -> String {
        let perm: Vec<String> = self.perm.iter().map(|p| (p + 1).to_string()).collect();
        let scales: Vec<String> = self.scales.iter().map(|s| s.to_string()).collect();
        format!("perm={} scales={}", perm.join(" "), scales.join(" "))
    }

    pub fn parse_line(line: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected `perm=... scales=...`, got `{line}`"));
        let rest = line.trim().strip_prefix("perm=").ok_or_else(bad)?;
        let (perm, scales) = rest.split_once("scales=").ok_or_else(bad)?;
        let nums = |s: &str| -> Result<Vec<u64>> {
            s.split_whitespace()
                .map(|x| x.parse::<u64>().map_err(|_| Error::Parse(format!("bad number `{x}`"))))
                .collect()
        };
        let perm = nums(perm)?;
        if perm.contains(&0) {
            return Err(Error::Parse("permutation images are 1-based".into()));
        }
        let scales = nums(scales)?.into_iter().map(|x| u32::try_from(x).map_err(|_| bad())).collect::<Result<_>>()?;
        MonomialMap::new(perm.into_iter().map(|x| x as usize - 1).collect(), scales)
    }
}

impl fmt::Display for MonomialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_line())
    }
}

/// A monomial automorphism together with the matrix `S` that it induces on
/// syndromes of the reduced parity-check matrix: `S h_i = scales[i] h_{perm(i)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerElement {
    map: MonomialMap,
    lift: MatrixFq,
}

impl StabilizerElement {
    pub fn map(&self) -> &MonomialMap {
        &self.map
    }

    pub fn lift(&self) -> &MatrixFq {
        &self.lift
    }

    pub fn into_parts(self) -> (MonomialMap, MatrixFq) {
        (self.map, self.lift)
    }

    /// Witness text: the map line followed by the lift in matrix format.
    pub fn to_text(&self) -> String {
        format!("{}\n{}", self.map.to_line(), self.lift.to_text(&[]))
    }

    /// Parses witness text and re-checks it against `code`.
    pub fn from_text(code: &LinearCode, text: &str) -> Result<Self> {
        let (first, rest) = text.trim_start().split_once('\n').unwrap_or((text, ""));
        let map = MonomialMap::parse_line(first)?;
        let (lift, _) = MatrixFq::from_text(rest)?;
        let elem = is_automorphism(code, &map)?
            .ok_or_else(|| Error::Parse("map is not an automorphism of the code".into()))?;
        if elem.lift != lift {
            return Err(Error::Parse("stored lift disagrees with the recomputed lift".into()));
        }
        Ok(elem)
    }
}

/// Matrix whose column `i` is `scales[i] * h_{perm(i)}`.
fn permuted_columns(h: &MatrixFq, map: &MonomialMap) -> MatrixFq {
    let f = h.field();
    let mut out = MatrixFq::zeros(f, h.rows(), h.cols());
    for i in 0..h.cols() {
        let (p, s) = (map.perm[i], map.scales[i]);
        for r in 0..h.rows() {
            out.set(r, i, f.mul(s, h.get(r, p)));
        }
    }
    out
}

/// `Some` with the syndrome lift when the code is fixed by `map`.
///
/// The reduced parity-check matrix `H` is in RREF, so its pivot columns
/// form the identity and the only candidate for `S` is the submatrix of
/// `H'` on those columns. The map is an automorphism iff `S H = H'`.
pub fn is_automorphism(code: &LinearCode, map: &MonomialMap) -> Result<Option<StabilizerElement>> {
    if map.len() != code.length() {
        return Err(Error::DimensionMismatch(format!("map of length {} on a code of length {}", map.len(), code.length())));
    }
    if !map.is_valid_for(code.field()) {
        return Err(Error::Parse("scale outside the field".into()));
    }
    let h = code.parity_check();
    let image = permuted_columns(h, map);
    let pivots = h.rref().pivots;
    let s = image.select_columns(&pivots)?;
    if s.mul(h)? == image {
        Ok(Some(StabilizerElement { map: map.clone(), lift: s }))
    } else {
        Ok(None)
    }
}

/// Checks `ker(H_1) M = ker(H_2)` for a candidate equivalence, via row spaces.
pub fn is_equivalence(c1: &LinearCode, c2: &LinearCode, map: &MonomialMap) -> Result<bool> {
    if map.len() != c1.length() || c1.length() != c2.length() {
        return Err(Error::DimensionMismatch("codes and map have different lengths".into()));
    }
    Ok(c1.parity_check().row_space_eq(&permuted_columns(c2.parity_check(), map)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldTable;
    use std::sync::Arc;

    fn hamming_2_3() -> LinearCode {
        let f = Arc::new(FieldTable::new(2, 1).unwrap());
        let cols: Vec<Vec<u32>> = (1..8u32).map(|i| vec![(i >> 2) & 1, (i >> 1) & 1, i & 1]).collect();
        LinearCode::from_parity_check(MatrixFq::from_columns(&f, 3, &cols).unwrap()).unwrap()
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(MonomialMap::new(vec![0, 0], vec![1, 1]).is_err());
        assert!(MonomialMap::new(vec![0, 2], vec![1, 1]).is_err());
        assert!(MonomialMap::new(vec![1, 0], vec![1, 0]).is_err());
    }

    #[test]
    fn composition_acts_on_vectors() {
        let f = FieldTable::new(3, 1).unwrap();
        let a = MonomialMap::new(vec![1, 2, 0], vec![2, 1, 2]).unwrap();
        let b = MonomialMap::new(vec![2, 0, 1], vec![1, 2, 2]).unwrap();
        let x = vec![1, 2, 0];
        assert_eq!(a.then(&b, &f).apply(&f, &x), b.apply(&f, &a.apply(&f, &x)));
        assert!(a.then(&a.inverse(&f), &f).is_identity());
    }

    #[test]
    fn line_round_trip() {
        let m = MonomialMap::new(vec![2, 0, 1], vec![1, 2, 2]).unwrap();
        assert_eq!(m.to_line(), "perm=3 1 2 scales=1 2 2");
        assert_eq!(MonomialMap::parse_line(&m.to_line()).unwrap(), m);
        assert!(MonomialMap::parse_line("perm=0 1 scales=1 1").is_err());
    }

    #[test]
    fn hamming_column_swap() {
        let code = hamming_2_3();
        // columns are 1..7 in binary; swapping bits 0 and 1 permutes them
        let swap = |i: usize| {
            let v = i + 1;
            let w = (v & 4) | ((v & 1) << 1) | ((v >> 1) & 1);
            w - 1
        };
        let map = MonomialMap::new((0..7).map(swap).collect(), vec![1; 7]).unwrap();
        let elem = is_automorphism(&code, &map).unwrap().unwrap();
        let back = StabilizerElement::from_text(&code, &elem.to_text()).unwrap();
        assert_eq!(back, elem);
        let bad = MonomialMap::new(vec![1, 0, 2, 3, 4, 5, 6], vec![1; 7]).unwrap();
        assert!(is_automorphism(&code, &bad).unwrap().is_none());
    }
}
