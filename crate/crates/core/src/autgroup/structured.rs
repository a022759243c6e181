//! Known automorphisms of the Hamming code and of `B^(1)`, `B^(2)`, `B^(3)`,
//! built from generators of `GL(m, q)` acting on column labels.

use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use super::monomial::{is_automorphism, StabilizerElement};
use crate::codes::LinearCode;
use crate::constructions::{block_normal_form, monomial_from_row_transform, Construction, Family};
use crate::error::{Error, Result};
use crate::gf::FieldTable;
use crate::linalg::MatrixFq;

/// `|GL(m, q)| = prod_{k<m} (q^m - q^k)`, if it fits.
pub fn gl_order(m: u32, q: u32) -> Option<u128> {
    let qm = (q as u128).checked_pow(m)?;
    (0..m).try_fold(1u128, |acc, k| acc.checked_mul(qm - (q as u128).pow(k)))
}

/// Transvections `I + c E_ij` with `c` running over a basis of `F_q` over
/// its prime field, plus `diag(w, 1, .., 1)` for a primitive `w` when `q > 2`.
pub fn gl_generators(field: &Arc<FieldTable>, m: usize) -> Vec<MatrixFq> {
    let w = field.primitive();
    let mut out = Vec::new();
    for i in 0..m {
        for j in 0..m {
            if i == j {
                continue;
            }
            for k in 0..field.degree() {
                let mut g = MatrixFq::identity(field, m);
                g.set(i, j, field.pow(w, k as u64));
                out.push(g);
            }
        }
    }
    if field.order() > 2 {
        let mut d = MatrixFq::identity(field, m);
        d.set(0, 0, w);
        out.push(d);
    }
    out
}

fn block_diag(a: &MatrixFq, b: &MatrixFq) -> MatrixFq {
    let (m, k) = (a.rows(), b.rows());
    let mut out = MatrixFq::zeros(a.field(), m + k, m + k);
    for x in 0..m {
        for y in 0..m {
            out.set(x, y, a.get(x, y));
        }
    }
    for x in 0..k {
        for y in 0..k {
            out.set(m + x, m + y, b.get(x, y));
        }
    }
    out
}

fn blocks2(tl: &MatrixFq, tr: &MatrixFq, bl: &MatrixFq, br: &MatrixFq) -> Result<MatrixFq> {
    tl.hconcat(tr)?.vconcat(&bl.hconcat(br)?)
}

/// Row transforms of the construction's own matrix that induce monomial
/// automorphisms, before conversion.
fn structured_row_transforms(c: &Construction) -> Result<Vec<MatrixFq>> {
    let setup = c.setup();
    let f = setup.field();
    let m = setup.m();
    let gens = gl_generators(f, m);
    let id = MatrixFq::identity(f, m);
    let zero = MatrixFq::zeros(f, m, m);
    let spec = c.spec();
    let conj = |l: &MatrixFq, mats: Vec<MatrixFq>| -> Result<Vec<MatrixFq>> {
        let inv = l.inverse().ok_or_else(|| Error::Internal("normal form transform is singular".into()))?;
        mats.iter().map(|x| inv.mul(x)?.mul(l)).collect()
    };
    match (spec.family, spec.r) {
        (Family::Hamming, _) => Ok(gens),
        (Family::B, 1) => {
            let mx = setup.mul_matrix(setup.ctx().xi());
            let mx_inv = mx.inverse().ok_or_else(|| Error::Internal("xi is not invertible".into()))?;
            gens.iter().map(|g| Ok(block_diag(g, &mx.mul(g)?.mul(&mx_inv)?))).collect()
        }
        (Family::B, 2) => {
            let nf = block_normal_form(setup, 2)?;
            let mut mats: Vec<MatrixFq> = gens.iter().map(|g| block_diag(g, &id)).collect();
            mats.extend(gens.iter().map(|g| block_diag(&id, g)));
            mats.push(blocks2(&zero, &id, &id, &zero)?);
            conj(&nf.transform, mats)
        }
        (Family::B, 3) => {
            let nf = block_normal_form(setup, 3)?;
            let mut mats: Vec<MatrixFq> = gens.iter().map(|g| block_diag(g, g)).collect();
            mats.push(blocks2(&zero, &id, &id, &zero)?);
            let minus = setup.mul_matrix(f.neg(1));
            mats.push(blocks2(&id, &zero, &id, &minus)?);
            conj(&nf.transform, mats)
        }
        _ => Err(Error::SchemaMismatch(format!(
            "structured generators exist for the Hamming code and B^(1..3), not {}",
            spec
        ))),
    }
}

/// Automorphisms induced by `GL(m, q)` on column labels and by block
/// permutations, each verified on the code.
pub fn gl_lift_generators(c: &Construction, code: &LinearCode) -> Result<Vec<StabilizerElement>> {
    let h = c.matrix();
    let mut out = Vec::new();
    for s in structured_row_transforms(c)? {
        let map = monomial_from_row_transform(h, &s, h)
            .ok_or_else(|| Error::Internal("structured transform does not permute the columns".into()))?;
        let elem = is_automorphism(code, &map)?
            .ok_or_else(|| Error::Internal("structured generator is not an automorphism".into()))?;
        out.push(elem);
    }
    Ok(out)
}

/// Order of the group generated by the lifts, by closure; `None` past `limit`.
pub fn group_order_by_closure(gens: &[StabilizerElement], limit: u64) -> Result<Option<u64>> {
    let Some(first) = gens.first() else {
        return Ok(Some(1));
    };
    let key = |m: &MatrixFq| -> Vec<u32> { (0..m.rows()).flat_map(|r| m.row(r).to_vec()).collect() };
    let start = MatrixFq::identity(first.lift().field(), first.lift().rows());
    let mut seen = HashSet::from([key(&start)]);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.mul(g.lift())?;
            if seen.insert(key(&y)) {
                if seen.len() as u64 > limit {
                    return Ok(None);
                }
                queue.push_back(y);
            }
        }
    }
    Ok(Some(seen.len() as u64))
}
