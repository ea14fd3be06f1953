//! Canonical forms and isomorphism by individualization-refinement.
//!
//! Elements are first split into cells by label-independent invariants
//! computed from the circuits; the search then individualizes elements of
//! the first non-singleton cell and re-refines until the partition is
//! discrete. The canonical form is the least basis encoding over the leaves
//! of that search tree. Leaves reachable from one another by an automorphism
//! are skipped, which keeps highly symmetric matroids (uniform ones) cheap.

use serde::{Deserialize, Serialize};

use super::Matroid;
use crate::bits::{bit, bits, size};
use crate::Label;

/// Label-free encoding: basis masks over canonical positions, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub elements: usize,
    pub rank: usize,
    pub bases: Vec<u32>,
}

pub fn canonical_form(m: &Matroid) -> CanonicalForm {
    canonical_labeling(m).0
}

/// Returns the canonical form and, for each element index, its canonical
/// position.
pub fn canonical_labeling(m: &Matroid) -> (CanonicalForm, Vec<usize>) {
    let n = m.len();
    let circuits = m.circuit_masks();
    let mut search = Search {
        m,
        circuits: &circuits,
        best: None,
        autos: Vec::new(),
    };
    let root = search.refine(initial_partition(m, &circuits));
    search.explore(root, &mut Vec::new());
    let (enc, perm, _) = search.best.expect("search reaches at least one leaf");
    (CanonicalForm { elements: n, rank: m.rank(), bases: enc }, perm)
}

/// A bijection from `a`'s labels to `b`'s labels carrying bases to bases.
pub fn is_isomorphic(a: &Matroid, b: &Matroid) -> Option<Vec<(Label, Label)>> {
    if a.len() != b.len() || a.rank() != b.rank() || a.basis_masks().len() != b.basis_masks().len() {
        return None;
    }
    let (ca, pa) = canonical_labeling(a);
    let (cb, pb) = canonical_labeling(b);
    if ca != cb {
        return None;
    }
    let mut inv_b = vec![0usize; b.len()];
    for (i, &p) in pb.iter().enumerate() {
        inv_b[p] = i;
    }
    Some((0..a.len()).map(|i| (a.label(i), b.label(inv_b[pa[i]]))).collect())
}

type Partition = Vec<Vec<usize>>;

/// FNV-1a over a circuit's size and its per-cell counts.
fn circuit_key(len: usize, counts: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in std::iter::once(&(len as u8)).chain(counts) {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

fn initial_partition(m: &Matroid, circuits: &[u32]) -> Partition {
    let n = m.len();
    let mut inv: Vec<(Vec<usize>, usize)> = (0..n)
        .map(|e| {
            let degree = m.basis_masks().iter().filter(|&&b| b & bit(e) != 0).count();
            let mut by_size = vec![0usize; n + 2];
            for &c in circuits {
                if c & bit(e) != 0 {
                    by_size[size(c)] += 1;
                }
            }
            by_size.push(degree);
            (by_size, e)
        })
        .collect();
    inv.sort();
    split_sorted(&inv)
}

fn split_sorted<K: PartialEq>(keyed: &[(K, usize)]) -> Partition {
    let mut cells: Partition = Vec::new();
    for (i, (k, e)) in keyed.iter().enumerate() {
        if i > 0 && keyed[i - 1].0 == *k {
            cells.last_mut().unwrap().push(*e);
        } else {
            cells.push(vec![*e]);
        }
    }
    cells
}

struct Search<'a> {
    m: &'a Matroid,
    circuits: &'a [u32],
    /// (encoding, element -> position, individualized path)
    best: Option<(Vec<u32>, Vec<usize>, Vec<usize>)>,
    autos: Vec<Vec<usize>>,
}

impl Search<'_> {
    /// Splits cells by how each element's circuits meet the current cells,
    /// until no cell splits further.
    fn refine(&self, mut p: Partition) -> Partition {
        let n = self.m.len();
        loop {
            let mut cell_of = vec![0usize; n];
            for (ci, cell) in p.iter().enumerate() {
                for &e in cell {
                    cell_of[e] = ci;
                }
            }
            let mut sigs: Vec<Vec<u64>> = vec![Vec::new(); n];
            let mut counts = vec![0u8; p.len()];
            for &c in self.circuits {
                counts.iter_mut().for_each(|x| *x = 0);
                for e in bits(c) {
                    counts[cell_of[e]] += 1;
                }
                let key = circuit_key(size(c), &counts);
                for e in bits(c) {
                    sigs[e].push(key);
                }
            }
            let mut next: Partition = Vec::with_capacity(p.len());
            for cell in &p {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut keyed: Vec<(Vec<u64>, usize)> = cell
                    .iter()
                    .map(|&e| {
                        let mut s = std::mem::take(&mut sigs[e]);
                        s.sort_unstable();
                        (s, e)
                    })
                    .collect();
                keyed.sort();
                next.extend(split_sorted(&keyed));
            }
            if next.len() == p.len() {
                return next;
            }
            p = next;
        }
    }

    fn encode(&self, p: &Partition) -> (Vec<u32>, Vec<usize>) {
        let mut pos = vec![0usize; self.m.len()];
        for (i, cell) in p.iter().enumerate() {
            pos[cell[0]] = i;
        }
        let mut enc: Vec<u32> = self
            .m
            .basis_masks()
            .iter()
            .map(|&b| bits(b).fold(0u32, |acc, e| acc | bit(pos[e])))
            .collect();
        enc.sort_unstable();
        (enc, pos)
    }

    /// Depth-first search. Returns `Some(level)` when the caller should
    /// abandon every node deeper than `level`.
    fn explore(&mut self, p: Partition, path: &mut Vec<usize>) -> Option<usize> {
        let Some(target) = p.iter().position(|c| c.len() > 1) else {
            return self.leaf(&p, path);
        };
        let cell = p[target].clone();
        let mut tried: Vec<usize> = Vec::new();
        for &v in &cell {
            if self.same_orbit(path, &tried, v) {
                continue;
            }
            tried.push(v);
            let mut child = p.clone();
            let rest: Vec<usize> = cell.iter().copied().filter(|&e| e != v).collect();
            child.splice(target..=target, [vec![v], rest]);
            let child = self.refine(child);
            path.push(v);
            let jump = self.explore(child, path);
            path.pop();
            if let Some(level) = jump {
                if level < path.len() {
                    return Some(level);
                }
            }
        }
        None
    }

    fn leaf(&mut self, p: &Partition, path: &[usize]) -> Option<usize> {
        let (enc, pos) = self.encode(p);
        match &self.best {
            None => {
                self.best = Some((enc, pos, path.to_vec()));
                None
            }
            Some((best, best_pos, best_path)) => {
                if enc < *best {
                    self.best = Some((enc, pos, path.to_vec()));
                    None
                } else if enc == *best {
                    // element e and the element at the same canonical
                    // position in the best leaf are swapped by an automorphism
                    let mut at = vec![0usize; pos.len()];
                    for (e, &q) in best_pos.iter().enumerate() {
                        at[q] = e;
                    }
                    let auto: Vec<usize> = (0..pos.len()).map(|e| pos_lookup(&at, &pos, e)).collect();
                    let common = best_path.iter().zip(path).take_while(|(a, b)| a == b).count();
                    self.autos.push(auto);
                    Some(common)
                } else {
                    None
                }
            }
        }
    }

    fn same_orbit(&self, path: &[usize], tried: &[usize], v: usize) -> bool {
        if tried.is_empty() {
            return false;
        }
        let n = self.m.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for g in &self.autos {
            if path.iter().any(|&e| g[e] != e) {
                continue;
            }
            for e in 0..n {
                let (a, b) = (find(&mut parent, e), find(&mut parent, g[e]));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        let rv = find(&mut parent, v);
        tried.iter().any(|&t| find(&mut parent, t) == rv)
    }
}

/// The automorphism maps element `e` (positioned by `pos` in this leaf) to
/// the element holding the same position in the best leaf.
fn pos_lookup(best_at: &[usize], pos: &[usize], e: usize) -> usize {
    best_at[pos[e]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{fano, mk4, uniform, wheel, whirl};

    fn shuffled(m: &Matroid, seed: u64) -> Matroid {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut targets: Vec<Label> = (100..100 + m.len() as Label).collect();
        targets.shuffle(&mut rng);
        let g = m.ground().to_vec();
        m.relabel(|l| targets[g.iter().position(|&x| x == l).unwrap()]).unwrap()
    }

    fn check_witness(a: &Matroid, b: &Matroid, w: &[(Label, Label)]) {
        let mapped = a.relabel(|l| w.iter().find(|p| p.0 == l).unwrap().1).unwrap();
        assert_eq!(&mapped, b);
    }

    #[test]
    fn relabeled_copies_are_isomorphic() {
        for m in [uniform(2, 4).unwrap(), mk4(), fano(), wheel(4).unwrap(), whirl(4).unwrap(), uniform(4, 9).unwrap()] {
            for seed in 0..3 {
                let s = shuffled(&m, seed);
                assert_eq!(canonical_form(&m), canonical_form(&s));
                let w = is_isomorphic(&m, &s).expect("isomorphic");
                check_witness(&m, &s, &w);
            }
        }
    }

    #[test]
    fn u24_and_deletions_of_u25() {
        let u24 = uniform(2, 4).unwrap();
        let u25 = uniform(2, 5).unwrap();
        for e in 1..=5 {
            assert!(is_isomorphic(&u24, &u25.delete_labels(&[e]).unwrap()).is_some());
        }
    }

    #[test]
    fn fano_is_not_its_dual() {
        assert!(is_isomorphic(&fano(), &fano().dual()).is_none());
        assert_ne!(canonical_form(&fano()), canonical_form(&fano().dual()));
        assert!(is_isomorphic(&wheel(3).unwrap(), &whirl(3).unwrap()).is_none());
    }

    #[test]
    fn symmetric_matroids_finish_quickly() {
        let m = uniform(8, 16).unwrap();
        let c = canonical_form(&m);
        assert_eq!(c.bases.len(), 12870);
    }
}
