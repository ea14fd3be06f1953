//! Test-side oracles. These recompute matroid data from first principles
//! (column vectors, basis lists, permutations) without going through the
//! library's rank tables or search code.

#![allow(dead_code)]

use std::collections::BTreeSet;

use matroid_kit::{Label, Matroid};
use rand::Rng;

pub type Family = BTreeSet<Vec<Label>>;

/// A Type I gadget instance over GF(7): `M` is GF(5)-representable, `N`
/// is a minor of `M\1,3`, and `M\1,3` is not `N`-fragile.
pub const PLANTED: &str = r#"{
  "matroid": {"matrix": {"field": "gf5", "rows": [1,2,3,4], "cols": [5,6,7,8,9,10],
    "entries": [[3,2,3,0,3,0],[2,1,1,4,3,1],[4,3,0,3,0,2],[4,1,0,4,3,4]]}},
  "N": {"matrix": {"field": "gf5", "rows": [4,6,7], "cols": [8,9,10],
    "entries": [[1,1,0],[1,0,1],[1,1,1]]}},
  "a": 3, "b": 1, "B": [2,7,8,9], "x": 2, "y": 7,
  "A": {"field": "gf7", "rows": [2,7,8,9], "cols": [4,5,6,10,1,3],
    "entries": [[1,1,0,1,1,1],[1,3,0,1,6,5],[0,1,1,1,0,1],[1,2,1,1,0,5]]}
}"#;

/// All `k`-subsets of `items`, each in the order of `items`.
pub fn subsets_of_size(items: &[Label], k: usize) -> Vec<Vec<Label>> {
    fn go(items: &[Label], k: usize, start: usize, cur: &mut Vec<Label>, out: &mut Vec<Vec<Label>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, k, 0, &mut Vec::new(), &mut out);
    out
}

pub fn all_subsets(items: &[Label]) -> Vec<Vec<Label>> {
    (0..=items.len()).flat_map(|k| subsets_of_size(items, k)).collect()
}

pub fn sorted(mut v: Vec<Label>) -> Vec<Label> {
    v.sort_unstable();
    v
}

pub fn family(m: &Matroid) -> Family {
    m.bases().into_iter().map(sorted).collect()
}

/// Rank of a set of vectors over GF(p), p prime.
pub fn gf_rank(vectors: &[Vec<u64>], p: u64) -> usize {
    let mut rows: Vec<Vec<u64>> = vectors.iter().map(|v| v.iter().map(|x| x % p).collect()).collect();
    let width = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..width {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else { continue };
        rows.swap(rank, piv);
        let inv = pow_mod(rows[rank][col], p - 2, p);
        for c in 0..width {
            rows[rank][c] = rows[rank][c] * inv % p;
        }
        for i in 0..rows.len() {
            if i != rank && rows[i][col] != 0 {
                let f = rows[i][col];
                for c in 0..width {
                    rows[i][c] = (rows[i][c] + p * p - f * rows[rank][c] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Bases of the column matroid of `[I | A]` over GF(p), with row labels
/// `rows` on the identity columns and `cols` on the columns of `A`.
pub fn vector_matroid_bases(rows: &[Label], cols: &[Label], a: &[Vec<u64>], p: u64) -> Family {
    let r = rows.len();
    let mut columns: Vec<(Label, Vec<u64>)> = Vec::new();
    for (i, &l) in rows.iter().enumerate() {
        columns.push((l, (0..r).map(|k| u64::from(k == i)).collect()));
    }
    for (j, &l) in cols.iter().enumerate() {
        columns.push((l, (0..r).map(|k| a[k][j] % p).collect()));
    }
    let labels: Vec<Label> = columns.iter().map(|c| c.0).collect();
    let mut out = Family::new();
    for s in subsets_of_size(&labels, r) {
        let vs: Vec<Vec<u64>> = s.iter().map(|l| columns.iter().find(|c| c.0 == *l).unwrap().1.clone()).collect();
        if gf_rank(&vs, p) == r {
            out.insert(sorted(s));
        }
    }
    out
}

/// Rank as the largest intersection with a basis.
pub fn rank(bases: &Family, x: &[Label]) -> usize {
    bases.iter().map(|b| b.iter().filter(|e| x.contains(e)).count()).max().unwrap_or(0)
}

pub fn closure(bases: &Family, ground: &[Label], x: &[Label]) -> Vec<Label> {
    let r = rank(bases, x);
    ground
        .iter()
        .copied()
        .filter(|e| {
            let mut y = x.to_vec();
            y.push(*e);
            rank(bases, &y) == r
        })
        .collect()
}

pub fn dual_family(bases: &Family, ground: &[Label]) -> Family {
    bases.iter().map(|b| ground.iter().copied().filter(|e| !b.contains(e)).collect()).collect()
}

pub fn circuits(bases: &Family, ground: &[Label]) -> Family {
    let mut out = Family::new();
    for s in all_subsets(ground) {
        if s.is_empty() || rank(bases, &s) == s.len() {
            continue;
        }
        let minimal = s.iter().all(|e| {
            let t: Vec<Label> = s.iter().copied().filter(|f| f != e).collect();
            rank(bases, &t) == t.len()
        });
        if minimal {
            out.insert(sorted(s));
        }
    }
    out
}

pub fn lambda(bases: &Family, ground: &[Label], x: &[Label]) -> usize {
    let y: Vec<Label> = ground.iter().copied().filter(|e| !x.contains(e)).collect();
    rank(bases, x) + rank(bases, &y) - rank(bases, ground)
}

/// Exchange axiom, checked directly on the family.
pub fn exchange_holds(bases: &Family) -> bool {
    for b1 in bases {
        for b2 in bases {
            for e in b1.iter().filter(|e| !b2.contains(e)) {
                let ok = b2.iter().filter(|f| !b1.contains(f)).any(|f| {
                    let mut c: Vec<Label> = b1.iter().copied().filter(|g| g != e).collect();
                    c.push(*f);
                    bases.contains(&sorted(c))
                });
                if !ok {
                    return false;
                }
            }
        }
    }
    true
}

/// Bases of `M / c \ d` from the rank function `r(X ∪ C) - r(C)`.
pub fn minor_family(bases: &Family, ground: &[Label], c: &[Label], d: &[Label]) -> (Vec<Label>, Family) {
    let rest: Vec<Label> = ground.iter().copied().filter(|e| !c.contains(e) && !d.contains(e)).collect();
    let rc = rank(bases, c);
    let r_of = |x: &[Label]| {
        let mut y = x.to_vec();
        y.extend_from_slice(c);
        rank(bases, &y) - rc
    };
    let r = r_of(&rest);
    let fam = subsets_of_size(&rest, r).into_iter().filter(|s| r_of(s) == r).map(sorted).collect();
    (rest, fam)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Isomorphism by trying every bijection.
pub fn brute_isomorphic(g1: &[Label], f1: &Family, g2: &[Label], f2: &Family) -> bool {
    if g1.len() != g2.len() || f1.len() != f2.len() {
        return false;
    }
    permutations(g1.len()).into_iter().any(|p| {
        let map = |e: &Label| g2[p[g1.iter().position(|x| x == e).unwrap()]];
        f1.iter().all(|b| f2.contains(&sorted(b.iter().map(map).collect())))
    })
}

/// Whether some `M / C \ D` is isomorphic to `N`, by trying every pair.
pub fn brute_has_minor(m: &Matroid, n: &Matroid) -> bool {
    let (g, f) = (m.ground().to_vec(), family(m));
    let (gn, fnn) = (n.ground().to_vec(), family(n));
    if n.rank() > m.rank() || n.corank() > m.corank() {
        return false;
    }
    let k = m.rank() - n.rank();
    for c in subsets_of_size(&g, k) {
        if rank(&f, &c) != k {
            continue;
        }
        let rest: Vec<Label> = g.iter().copied().filter(|e| !c.contains(e)).collect();
        for d in subsets_of_size(&rest, m.len() - n.len() - k) {
            let (gm, fm) = minor_family(&f, &g, &c, &d);
            if brute_isomorphic(&gm, &fm, &gn, &fnn) {
                return true;
            }
        }
    }
    false
}

/// Determinant over GF(p) by permutation expansion.
pub fn det_mod(a: &[Vec<u64>], p: u64) -> u64 {
    let n = a.len();
    let mut total = 0u64;
    for perm in permutations(n) {
        let mut inversions = 0;
        for i in 0..n {
            for j in i + 1..n {
                if perm[i] > perm[j] {
                    inversions += 1;
                }
            }
        }
        let prod = (0..n).fold(1u64, |acc, i| acc * (a[i][perm[i]] % p) % p);
        total = if inversions % 2 == 0 { (total + prod) % p } else { (total + p - prod) % p };
    }
    total
}

/// Determinant over the integers by permutation expansion.
pub fn det_int(a: &[Vec<i64>]) -> i64 {
    let n = a.len();
    let mut total = 0i64;
    for perm in permutations(n) {
        let mut inversions = 0;
        for i in 0..n {
            for j in i + 1..n {
                if perm[i] > perm[j] {
                    inversions += 1;
                }
            }
        }
        let prod: i64 = (0..n).map(|i| a[i][perm[i]]).product();
        total += if inversions % 2 == 0 { prod } else { -prod };
    }
    total
}

pub fn random_entries(rng: &mut impl Rng, r: usize, c: usize, values: &[i64]) -> Vec<Vec<i64>> {
    (0..r).map(|_| (0..c).map(|_| values[rng.gen_range(0..values.len())]).collect()).collect()
}

/// The fan conditions: the first triple is a triangle or a triad, and a
/// triangle at position `i` forces a triad at `i + 1` and vice versa.
pub fn is_fan(tri: &Family, triads: &Family, order: &[Label]) -> bool {
    if order.len() < 3 {
        return false;
    }
    let at = |i: usize| sorted(order[i..i + 3].to_vec());
    if !tri.contains(&at(0)) && !triads.contains(&at(0)) {
        return false;
    }
    (0..order.len() - 3).all(|i| {
        (!tri.contains(&at(i)) || triads.contains(&at(i + 1))) && (!triads.contains(&at(i)) || tri.contains(&at(i + 1)))
    })
}

/// No 1- or 2-separations, by the connectivity function.
pub fn three_connected(m: &Matroid) -> bool {
    let (g, f) = (m.ground().to_vec(), family(m));
    all_subsets(&g).iter().all(|x| {
        let other = g.len() - x.len();
        let l = lambda(&f, &g, x);
        !(x.len() >= 1 && other >= 1 && l < 1) && !(x.len() >= 2 && other >= 2 && l < 2)
    })
}

pub fn triangles_of(m: &Matroid) -> Family {
    circuits(&family(m), m.ground()).into_iter().filter(|c| c.len() == 3).collect()
}

pub fn triads_of(m: &Matroid) -> Family {
    let g = m.ground().to_vec();
    circuits(&dual_family(&family(m), &g), &g).into_iter().filter(|c| c.len() == 3).collect()
}

pub fn is_cocircuit(m: &Matroid, s: &[Label]) -> bool {
    let g = m.ground().to_vec();
    circuits(&dual_family(&family(m), &g), &g).contains(&sorted(s.to_vec()))
}

pub fn in_closure(m: &Matroid, x: &[Label], e: Label) -> bool {
    closure(&family(m), m.ground(), x).contains(&e)
}

pub fn in_coclosure(m: &Matroid, x: &[Label], e: Label) -> bool {
    let g = m.ground().to_vec();
    closure(&dual_family(&family(m), &g), &g, x).contains(&e)
}

/// Simplification: drop loops, keep the least label of each parallel class.
pub fn simplification(m: &Matroid) -> Matroid {
    let (g, f) = (m.ground().to_vec(), family(m));
    let keep: Vec<Label> = g
        .iter()
        .copied()
        .filter(|&e| rank(&f, &[e]) == 1 && !g.iter().any(|&d| d < e && rank(&f, &[d]) == 1 && rank(&f, &[d, e]) == 1))
        .collect();
    let drop: Vec<Label> = g.iter().copied().filter(|e| !keep.contains(e)).collect();
    let (rest, fam) = minor_family(&f, &g, &[], &drop);
    Matroid::from_bases(&rest, &fam.into_iter().collect::<Vec<_>>()).unwrap()
}

pub fn cosimplification(m: &Matroid) -> Matroid {
    simplification(&m.dual()).dual()
}

/// Deletable and contractible flags for every element, by brute force.
pub fn flexible_elements(m: &Matroid, n: &Matroid) -> Vec<Label> {
    m.ground()
        .iter()
        .copied()
        .filter(|&e| brute_has_minor(&m.delete_labels(&[e]).unwrap(), n) && brute_has_minor(&m.contract_labels(&[e]).unwrap(), n))
        .collect()
}

pub fn essential_elements(m: &Matroid, n: &Matroid) -> Vec<Label> {
    m.ground()
        .iter()
        .copied()
        .filter(|&e| !brute_has_minor(&m.delete_labels(&[e]).unwrap(), n) && !brute_has_minor(&m.contract_labels(&[e]).unwrap(), n))
        .collect()
}

/// `(N, B)`-strong elements: `si(M/e)` for `e ∈ B`, `co(M\e)` otherwise,
/// 3-connected with an `N`-minor.
pub fn strong_elements(m: &Matroid, n: &Matroid, basis: &[Label]) -> Vec<Label> {
    m.ground()
        .iter()
        .copied()
        .filter(|&e| {
            let r = if basis.contains(&e) {
                simplification(&m.contract_labels(&[e]).unwrap())
            } else {
                cosimplification(&m.delete_labels(&[e]).unwrap())
            };
            three_connected(&r) && brute_has_minor(&r, n)
        })
        .collect()
}
