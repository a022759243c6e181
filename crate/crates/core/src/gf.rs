//! Finite field arithmetic over exp/log tables.
//!
//! A [`FieldTable`] describes a field of `b^t` elements built as
//! `K[x]/(f)` over a base field `K` of order `b`, where `f` is the
//! lexicographically smallest primitive monic polynomial of degree `t`.
//! When no base is given the base is the prime field `F_p`.
//!
//! Elements are encoded as integers `0..order`. The base-`b` digits of the
//! code are the polynomial-basis coordinates, lowest degree first, so the
//! code of `c_0 + c_1 x + ... ` is `c_0 + c_1 b + ...`.

use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest field order accepted by [`FieldTable::new`].
pub const MAX_FIELD_ORDER: u64 = 1 << 16;
/// Largest extension field order accepted by [`ext_context`].
pub const MAX_EXT_ORDER: u64 = 1 << 24;

const ADD_TABLE_LIMIT: u32 = 256;

/// Arithmetic tables for a finite field.
#[derive(Debug, Clone)]
pub struct FieldTable {
    p: u32,
    degree: u32,
    order: u32,
    base: Option<Arc<FieldTable>>,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Option<Vec<u32>>,
}

impl PartialEq for FieldTable {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.degree == other.degree
            && self.modulus == other.modulus
            && self.base == other.base
    }
}

impl Eq for FieldTable {}

/// Arithmetic of the coefficient field used while building tables.
enum Coeffs<'a> {
    Prime(u32),
    Field(&'a FieldTable),
}

impl Coeffs<'_> {
    fn order(&self) -> u32 {
        match self {
            Coeffs::Prime(p) => *p,
            Coeffs::Field(f) => f.order,
        }
    }

    fn sub(&self, a: u32, b: u32) -> u32 {
        match self {
            Coeffs::Prime(p) => (a + p - b) % p,
            Coeffs::Field(f) => f.sub(a, b),
        }
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        match self {
            Coeffs::Prime(p) => ((a as u64 * b as u64) % *p as u64) as u32,
            Coeffs::Field(f) => f.mul(a, b),
        }
    }
}

fn to_digits(mut code: u32, base: u32, len: usize, out: &mut [u32]) {
    for d in out.iter_mut().take(len) {
        *d = code % base;
        code /= base;
    }
}

fn from_digits(digits: &[u32], base: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * base + d)
}

/// Powers of `x` modulo `modulus`; `None` unless `x` has order `b^t - 1`.
fn power_table(coeffs: &Coeffs<'_>, modulus: &[u32]) -> Option<Vec<u32>> {
    let b = coeffs.order();
    let t = modulus.len() - 1;
    if modulus[0] == 0 {
        return None;
    }
    let order = (b as u64).pow(t as u32);
    let units = (order - 1) as usize;
    let mut exp = Vec::with_capacity(units);
    let mut cur = vec![0u32; t];
    cur[0] = 1;
    exp.push(1);
    let mut next = vec![0u32; t];
    for i in 1..=units {
        // multiply by x and reduce with x^t = -(f_0 + ... + f_{t-1} x^{t-1})
        let top = cur[t - 1];
        for j in 0..t {
            let shifted = if j == 0 { 0 } else { cur[j - 1] };
            next[j] = coeffs.sub(shifted, coeffs.mul(top, modulus[j]));
        }
        std::mem::swap(&mut cur, &mut next);
        let code = from_digits(&cur, b);
        if code == 1 {
            return (i == units).then_some(exp);
        }
        if i == units {
            return None;
        }
        exp.push(code);
    }
    None
}

fn smallest_primitive(coeffs: &Coeffs<'_>, degree: u32) -> Option<(Vec<u32>, Vec<u32>)> {
    let b = coeffs.order();
    let count = b.checked_pow(degree)?;
    let mut modulus = vec![0u32; degree as usize + 1];
    modulus[degree as usize] = 1;
    for cand in 0..count {
        to_digits(cand, b, degree as usize, &mut modulus);
        if let Some(exp) = power_table(coeffs, &modulus) {
            return Some((modulus, exp));
        }
    }
    None
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Writes polynomial coefficients lowest degree first: concatenated digits
/// when every coefficient is a single decimal digit, comma-separated otherwise.
pub fn format_poly(coeffs: &[u32], base: u32) -> String {
    if base <= 10 {
        coeffs.iter().map(|c| char::from_digit(*c, 10).unwrap()).collect()
    } else {
        coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
    }
}

/// Inverse of [`format_poly`].
pub fn parse_poly(text: &str) -> Result<Vec<u32>> {
    let bad = || Error::Parse(format!("malformed polynomial `{text}`"));
    if text.contains(',') {
        text.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect()
    } else {
        text.chars().map(|c| c.to_digit(10).ok_or_else(bad)).collect()
    }
}

impl FieldTable {
    /// Tables for `F_{p^s}` over the lexicographically smallest primitive
    /// polynomial of degree `s`.
    pub fn new(p: u32, s: u32) -> Result<Self> {
        Self::check_params(p, s)?;
        let coeffs = Coeffs::Prime(p);
        let (modulus, exp) = smallest_primitive(&coeffs, s)
            .ok_or_else(|| Error::Internal(format!("no primitive polynomial of degree {s} over F_{p}")))?;
        Ok(Self::assemble(p, s, None, modulus, exp))
    }

    /// Tables for `F_{p^s}` over an explicit modulus (monic, lowest degree first).
    pub fn with_modulus(p: u32, s: u32, modulus: &[u32]) -> Result<Self> {
        Self::check_params(p, s)?;
        if modulus.len() != s as usize + 1
            || modulus[s as usize] != 1
            || modulus.iter().any(|&c| c >= p)
        {
            return Err(Error::InvalidModulus(format_poly(modulus, p)));
        }
        let exp = power_table(&Coeffs::Prime(p), modulus)
            .ok_or_else(|| Error::InvalidModulus(format_poly(modulus, p)))?;
        Ok(Self::assemble(p, s, None, modulus.to_vec(), exp))
    }

    /// Degree-`t` extension of `base` over its smallest primitive polynomial.
    pub fn extension(base: &Arc<FieldTable>, t: u32) -> Result<Self> {
        if t == 0 {
            return Err(Error::ZeroExponent);
        }
        let order = (base.order as u64).checked_pow(t).unwrap_or(u64::MAX);
        if order > MAX_EXT_ORDER {
            return Err(Error::FieldTooLarge { order, limit: MAX_EXT_ORDER });
        }
        let (modulus, exp) = smallest_primitive(&Coeffs::Field(base), t)
            .ok_or_else(|| Error::Internal(format!("no primitive polynomial of degree {t} over F_{}", base.order)))?;
        Ok(Self::assemble(base.p, t, Some(base.clone()), modulus, exp))
    }

    fn check_params(p: u32, s: u32) -> Result<()> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if s == 0 {
            return Err(Error::ZeroExponent);
        }
        let order = (p as u64).checked_pow(s).unwrap_or(u64::MAX);
        if order > MAX_FIELD_ORDER {
            return Err(Error::FieldTooLarge { order, limit: MAX_FIELD_ORDER });
        }
        Ok(())
    }

    fn assemble(p: u32, degree: u32, base: Option<Arc<FieldTable>>, modulus: Vec<u32>, exp: Vec<u32>) -> Self {
        let order = exp.len() as u32 + 1;
        let mut log = vec![0u32; order as usize];
        for (i, &e) in exp.iter().enumerate() {
            log[e as usize] = i as u32;
        }
        // doubled so that exp[log a + log b] needs no reduction
        let mut doubled = exp.clone();
        doubled.extend_from_slice(&exp);
        let mut table = FieldTable { p, degree, order, base, modulus, exp: doubled, log, add: None };
        if order <= ADD_TABLE_LIMIT && p != 2 && order != p {
            let mut add = vec![0u32; (order * order) as usize];
            for a in 0..order {
                for b in 0..order {
                    add[(a * order + b) as usize] = table.add_digits(a, b);
                }
            }
            table.add = Some(add);
        }
        table
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Degree over the base field (over `F_p` for prime-based tables).
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn base(&self) -> Option<&Arc<FieldTable>> {
        self.base.as_ref()
    }

    /// Order of the coefficient field the polynomial basis is taken over.
    pub fn base_order(&self) -> u32 {
        self.base.as_ref().map_or(self.p, |b| b.order)
    }

    /// Monic modulus, coefficients lowest degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn modulus_string(&self) -> String {
        format_poly(&self.modulus, self.base_order())
    }

    /// The class of `x`, a generator of the multiplicative group.
    pub fn primitive(&self) -> u32 {
        self.exp[1 % self.exp.len()]
    }

    pub fn is_valid(&self, a: u32) -> bool {
        a < self.order
    }

    fn add_digits(&self, a: u32, b: u32) -> u32 {
        let base = self.base_order();
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.degree {
            let (da, db) = (a % base, b % base);
            let d = match &self.base {
                None => (da + db) % base,
                Some(f) => f.add(da, db),
            };
            out += d * place;
            place = place.wrapping_mul(base);
            a /= base;
            b /= base;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            // every layer of a characteristic-2 tower is bitwise
            a ^ b
        } else if self.base.is_none() && self.degree == 1 {
            (a + b) % self.p
        } else if let Some(add) = &self.add {
            add[(a * self.order + b) as usize]
        } else {
            self.add_digits(a, b)
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 || a == 0 {
            a
        } else {
            // -1 = alpha^((order - 1) / 2) in odd characteristic
            self.mul(a, self.exp[((self.order - 1) / 2) as usize])
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }

    pub fn checked_inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            None
        } else {
            let units = self.order - 1;
            Some(self.exp[((units - self.log[a as usize]) % units) as usize])
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: u32) -> u32 {
        self.checked_inv(a).expect("inverse of zero")
    }

    pub fn div(&self, a: u32, b: u32) -> u32 {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let units = (self.order - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (e % units)) % units) as usize]
    }

    /// `alpha^i` for the primitive element `alpha`.
    pub fn exp(&self, i: u64) -> u32 {
        self.exp[(i % (self.order as u64 - 1)) as usize]
    }

    /// Discrete logarithm to base `alpha`; `None` for zero.
    pub fn log(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn mul_order(&self, a: u32) -> Option<u64> {
        let l = self.log(a)? as u64;
        let units = self.order as u64 - 1;
        Some(units / gcd(units, l))
    }

    /// Coordinates of `a` in the polynomial basis over the base field.
    pub fn elem_to_vec(&self, a: u32) -> Vec<u32> {
        let mut v = vec![0u32; self.degree as usize];
        to_digits(a, self.base_order(), self.degree as usize, &mut v);
        v
    }

    pub fn vec_to_elem(&self, v: &[u32]) -> u32 {
        debug_assert_eq!(v.len(), self.degree as usize);
        from_digits(v, self.base_order())
    }

    /// Nonzero elements in order of increasing code.
    pub fn nonzero(&self) -> impl Iterator<Item = u32> {
        1..self.order
    }
}

/// An extension `F_{q^t}` of a working field `F_q` together with the
/// root of unity `xi = alpha^(q-1)` of order `n = (q^t - 1)/(q - 1)`.
#[derive(Debug, Clone)]
pub struct ExtFieldContext {
    base: Arc<FieldTable>,
    ext: Arc<FieldTable>,
    n: u64,
    xi: u32,
}

/// Builds the extension of degree `t` over `base` and its root `xi`.
pub fn ext_context(base: &Arc<FieldTable>, t: u32) -> Result<ExtFieldContext> {
    let ext = Arc::new(FieldTable::extension(base, t)?);
    let q = base.order() as u64;
    let n = (ext.order() as u64 - 1) / (q - 1);
    let xi = ext.exp(q - 1);
    Ok(ExtFieldContext { base: base.clone(), ext, n, xi })
}

impl ExtFieldContext {
    pub fn base(&self) -> &Arc<FieldTable> {
        &self.base
    }

    pub fn ext(&self) -> &Arc<FieldTable> {
        &self.ext
    }

    pub fn degree(&self) -> u32 {
        self.ext.degree()
    }

    /// `(q^t - 1)/(q - 1)`, the order of `xi`.
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn xi(&self) -> u32 {
        self.xi
    }

    pub fn xi_pow(&self, i: i64) -> u32 {
        let e = i.rem_euclid(self.n as i64) as u64;
        self.ext.pow(self.xi, e)
    }

    /// True when `gcd(n, q - 1) = 1`, i.e. a cyclic Hamming code exists.
    pub fn is_cyclic(&self) -> bool {
        gcd(self.n, self.base.order() as u64 - 1) == 1
    }

    pub fn elem_to_vec(&self, a: u32) -> Vec<u32> {
        self.ext.elem_to_vec(a)
    }

    pub fn vec_to_elem(&self, v: &[u32]) -> u32 {
        self.ext.vec_to_elem(v)
    }

    /// Embeds a base-field element into the extension.
    pub fn embed(&self, c: u32) -> u32 {
        // constants are the degree-0 coordinate
        c
    }

    /// Returns `Some(c)` when the extension element lies in the base field.
    pub fn as_base(&self, a: u32) -> Option<u32> {
        (a < self.base.order()).then_some(a)
    }
}
