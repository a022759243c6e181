//! Brute-force oracles shared by the integration tests. None of them use
//! syndromes, coset tables or the lift search.
#![allow(dead_code, clippy::too_many_arguments, clippy::type_complexity, clippy::needless_range_loop)]

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use crcodes::gf::FieldTable;
use crcodes::linalg::MatrixFq;

pub fn field(p: u32, s: u32) -> Arc<FieldTable> {
    Arc::new(FieldTable::new(p, s).unwrap())
}

fn digits(mut x: u64, q: u64, len: usize) -> Vec<u32> {
    let mut v = vec![0u32; len];
    for d in v.iter_mut() {
        *d = (x % q) as u32;
        x /= q;
    }
    v
}

/// `H x` by direct arithmetic.
pub fn product(h: &MatrixFq, x: &[u32]) -> Vec<u32> {
    let f = h.field();
    (0..h.rows())
        .map(|r| (0..h.cols()).fold(0, |acc, c| f.add(acc, f.mul(h.get(r, c), x[c]))))
        .collect()
}

pub fn codewords(h: &MatrixFq) -> Vec<Vec<u32>> {
    let q = h.field().order() as u64;
    let n = h.cols();
    (0..q.pow(n as u32))
        .map(|i| digits(i, q, n))
        .filter(|x| product(h, x).iter().all(|&v| v == 0))
        .collect()
}

/// Distance of every vector of `F_q^N` to the code, by breadth-first
/// search from all codewords, then neighbour counts per vector. Returns
/// `None` when counts are not constant on some distance level, otherwise
/// `(b_0..b_{rho-1}, c_1..c_rho)`.
pub fn full_space_array(h: &MatrixFq) -> Option<(Vec<u64>, Vec<u64>)> {
    let f = h.field();
    let q = f.order() as u64;
    let n = h.cols();
    let size = q.pow(n as u32) as usize;
    let place: Vec<u64> = (0..n).map(|i| q.pow(i as u32)).collect();
    let neighbours = |x: usize| -> Vec<usize> {
        let mut out = Vec::with_capacity(n * (q as usize - 1));
        for &p in &place {
            let d = (x as u64 / p) % q;
            for v in 0..q {
                if v != d {
                    out.push((x as u64 - d * p + v * p) as usize);
                }
            }
        }
        out
    };
    let mut dist = vec![u32::MAX; size];
    let mut queue = VecDeque::new();
    for x in 0..size {
        let v = digits(x as u64, q, n);
        if product(h, &v).iter().all(|&e| e == 0) {
            dist[x] = 0;
            queue.push_back(x);
        }
    }
    while let Some(x) = queue.pop_front() {
        for y in neighbours(x) {
            if dist[y] == u32::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    let rho = *dist.iter().max().unwrap() as usize;
    let mut counts: Vec<Option<(u64, u64)>> = vec![None; rho + 1];
    for x in 0..size {
        let d = dist[x];
        let (mut b, mut c) = (0, 0);
        for y in neighbours(x) {
            if dist[y] == d + 1 {
                b += 1;
            } else if dist[y] + 1 == d {
                c += 1;
            }
        }
        match counts[d as usize] {
            None => counts[d as usize] = Some((b, c)),
            Some(prev) if prev != (b, c) => return None,
            _ => {}
        }
    }
    let counts: Vec<(u64, u64)> = counts.into_iter().map(Option::unwrap).collect();
    Some((counts[..rho].iter().map(|x| x.0).collect(), counts[1..].iter().map(|x| x.1).collect()))
}

/// A monomial map as `(perm, scales)`: `e_i -> scales[i] e_{perm[i]}`.
pub type Monomial = (Vec<usize>, Vec<u32>);

pub fn apply(f: &FieldTable, m: &Monomial, x: &[u32]) -> Vec<u32> {
    let mut y = vec![0; x.len()];
    for i in 0..x.len() {
        y[m.0[i]] = f.mul(m.1[i], x[i]);
    }
    y
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut v = p.clone();
            v.insert(pos, n - 1);
            out.push(v);
        }
    }
    out
}

/// Every monomial map of length `N`, tested against every codeword.
pub fn brute_force_automorphisms(h: &MatrixFq) -> Vec<Monomial> {
    let f = h.field();
    let q = f.order() as u64;
    let n = h.cols();
    let words = codewords(h);
    let mut out = Vec::new();
    for perm in permutations(n) {
        for s in 0..(q - 1).pow(n as u32) {
            let scales: Vec<u32> = digits(s, q - 1, n).into_iter().map(|d| d + 1).collect();
            let m = (perm.clone(), scales);
            if words.iter().all(|w| product(h, &apply(f, &m, w)).iter().all(|&v| v == 0)) {
                out.push(m);
            }
        }
    }
    out
}

/// All monomial automorphisms by backtracking on coordinate images.
/// Weight-3 codewords prune partial maps; complete maps are checked on a
/// basis of the code.
pub fn backtrack_automorphisms(h: &MatrixFq) -> Vec<Monomial> {
    let f = h.field().clone();
    let n = h.cols();
    let q = f.order();
    let cols = h.columns();
    let is_zero = |terms: &[(usize, u32)]| -> bool {
        (0..h.rows()).all(|r| terms.iter().fold(0, |acc, &(i, a)| f.add(acc, f.mul(a, cols[i][r]))) == 0)
    };
    let mut triples = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for a in 1..q {
                    for b in 1..q {
                        let t = [(i, 1), (j, a), (k, b)];
                        if is_zero(&t) {
                            triples.push(t);
                        }
                    }
                }
            }
        }
    }
    // visit coordinates so that triples close as early as possible
    let mut order: Vec<usize> = Vec::new();
    let mut placed = vec![false; n];
    while order.len() < n {
        let next = (0..n)
            .filter(|&k| !placed[k])
            .find(|&k| {
                triples.iter().any(|t| {
                    t.iter().any(|&(x, _)| x == k) && t.iter().all(|&(x, _)| x == k || placed[x])
                })
            })
            .unwrap_or_else(|| (0..n).find(|&k| !placed[k]).unwrap());
        placed[next] = true;
        order.push(next);
    }
    let mut rank = vec![0; n];
    for (pos, &k) in order.iter().enumerate() {
        rank[k] = pos;
    }
    let mut closing: Vec<Vec<[(usize, u32); 3]>> = vec![Vec::new(); n];
    for t in &triples {
        let last = t.iter().map(|&(x, _)| rank[x]).max().unwrap();
        closing[last].push(*t);
    }
    let basis = h.nullspace_basis();
    let basis_rows: Vec<Vec<u32>> = (0..basis.rows()).map(|r| basis.row(r).to_vec()).collect();

    struct State {
        perm: Vec<usize>,
        scale: Vec<u32>,
        used: Vec<bool>,
        out: Vec<Monomial>,
    }
    fn rec(
        pos: usize,
        st: &mut State,
        order: &[usize],
        closing: &[Vec<[(usize, u32); 3]>],
        q: u32,
        f: &FieldTable,
        is_zero: &dyn Fn(&[(usize, u32)]) -> bool,
        leaf: &dyn Fn(&Monomial) -> bool,
    ) {
        let n = order.len();
        if pos == n {
            let m = (st.perm.clone(), st.scale.clone());
            if leaf(&m) {
                st.out.push(m);
            }
            return;
        }
        let k = order[pos];
        for t in 0..n {
            if st.used[t] {
                continue;
            }
            for s in 1..q {
                st.perm[k] = t;
                st.scale[k] = s;
                let ok = closing[pos].iter().all(|cw| {
                    let img = [
                        (st.perm[cw[0].0], f.mul(cw[0].1, st.scale[cw[0].0])),
                        (st.perm[cw[1].0], f.mul(cw[1].1, st.scale[cw[1].0])),
                        (st.perm[cw[2].0], f.mul(cw[2].1, st.scale[cw[2].0])),
                    ];
                    is_zero(&img)
                });
                if ok {
                    st.used[t] = true;
                    rec(pos + 1, st, order, closing, q, f, is_zero, leaf);
                    st.used[t] = false;
                }
            }
        }
    }
    let leaf = |m: &Monomial| basis_rows.iter().all(|x| product(h, &apply(&f, m, x)).iter().all(|&v| v == 0));
    let mut st = State { perm: vec![0; n], scale: vec![0; n], used: vec![false; n], out: Vec::new() };
    rec(0, &mut st, &order, &closing, q, &f, &is_zero, &leaf);
    st.out
}

/// Number of orbits of `auts` on the cosets of the code, using vectors of
/// weight at most `max_weight` as coset representatives (enough when
/// `max_weight` is the covering radius).
pub fn coset_orbits_by_vectors(h: &MatrixFq, auts: &[Monomial], max_weight: usize) -> usize {
    let f = h.field();
    let q = f.order();
    let n = h.cols();
    let mut reps: Vec<Vec<u32>> = vec![vec![0; n]];
    let mut frontier = reps.clone();
    for _ in 0..max_weight {
        let mut next = Vec::new();
        for x in &frontier {
            let start = x.iter().rposition(|&v| v != 0).map_or(0, |p| p + 1);
            for i in start..n {
                for a in 1..q {
                    let mut y = x.clone();
                    y[i] = a;
                    next.push(y);
                }
            }
        }
        reps.extend(next.iter().cloned());
        frontier = next;
    }
    let mut id: HashMap<Vec<u32>, usize> = HashMap::new();
    for x in &reps {
        let s = product(h, x);
        let len = id.len();
        id.entry(s).or_insert(len);
    }
    let mut parent: Vec<usize> = (0..id.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for x in &reps {
        let a = id[&product(h, x)];
        for m in auts {
            let b = *id.get(&product(h, &apply(f, m, x))).expect("images of leaders are leaders of the same weight");
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
        }
    }
    (0..parent.len()).filter(|&x| find(&mut parent, x) == x).count()
}

/// Smallest monic primitive polynomial of degree `s` over `F_p`, lowest
/// coefficient first, by testing the multiplicative order of `x`.
pub fn smallest_primitive(p: u32, s: u32) -> Vec<u32> {
    let order = (p as u64).pow(s) - 1;
    let reduce_mul = |a: &[u32], b: &[u32], f: &[u32]| -> Vec<u32> {
        let mut prod = vec![0u32; 2 * s as usize];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        for d in (s as usize..prod.len()).rev() {
            let c = prod[d];
            if c != 0 {
                for k in 0..=s as usize {
                    prod[d - s as usize + k] = (prod[d - s as usize + k] + p * p - c * f[k] % p) % p;
                }
            }
        }
        prod.truncate(s as usize);
        prod
    };
    for code in 0..(p as u64).pow(s) {
        let mut f: Vec<u32> = digits(code, p as u64, s as usize);
        f.push(1);
        if f[0] == 0 {
            continue;
        }
        let mut one = vec![0u32; s as usize];
        one[0] = 1;
        let mut x = vec![0u32; s as usize];
        if s == 1 {
            x[0] = (p - f[0]) % p;
        } else {
            x[1] = 1;
        }
        let mut acc = one.clone();
        let mut first_return = None;
        for k in 1..=order {
            acc = reduce_mul(&acc, &x, &f);
            if acc == one {
                first_return = Some(k);
                break;
            }
        }
        if first_return == Some(order) {
            return f;
        }
    }
    unreachable!("a primitive polynomial exists for every degree")
}
