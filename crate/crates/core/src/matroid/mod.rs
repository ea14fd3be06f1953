//! Matroids as explicit basis families over at most 16 labeled elements.
//!
//! The ground set is kept sorted by label; element `i` of the ground set is
//! bit `i` of every subset mask. A rank table over all `2^n` subsets is built
//! lazily on first use.

mod canonical;
mod catalog;
mod minor;

pub use canonical::{canonical_form, canonical_labeling, is_isomorphic, CanonicalForm};
pub use catalog::{fano, mk4, nonfano, uniform, wheel, whirl, sparse_paving};
pub use minor::{has_minor, has_minor_of_any, minor_supports, ElementClassification, MinorWitness};

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use crate::bits::{self, bit, bits, full, size};
use crate::error::{Error, Result};
use crate::Label;

pub const MAX_ELEMENTS: usize = 16;

pub struct Matroid {
    ground: Vec<Label>,
    bases: Vec<u32>,
    rank: usize,
    ranks: OnceLock<Vec<u8>>,
}

impl Clone for Matroid {
    fn clone(&self) -> Self {
        let ranks = OnceLock::new();
        if let Some(t) = self.ranks.get() {
            let _ = ranks.set(t.clone());
        }
        Matroid { ground: self.ground.clone(), bases: self.bases.clone(), rank: self.rank, ranks }
    }
}

impl PartialEq for Matroid {
    fn eq(&self, other: &Self) -> bool {
        self.ground == other.ground && self.bases == other.bases
    }
}

impl Eq for Matroid {}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Matroid")
            .field("ground", &self.ground)
            .field("rank", &self.rank)
            .field("bases", &self.bases.len())
            .finish()
    }
}

impl Matroid {
    /// Builds a matroid from an explicit basis family, validating the basis
    /// axioms.
    pub fn from_bases(ground: &[Label], bases: &[Vec<Label>]) -> Result<Matroid> {
        let ground = sorted_ground(ground)?;
        let mut masks = Vec::with_capacity(bases.len());
        for b in bases {
            let mut m = 0u32;
            for &l in b {
                let i = ground.binary_search(&l).map_err(|_| Error::UnknownLabel(l))?;
                m |= bit(i);
            }
            masks.push(m);
        }
        Matroid::from_masks(ground, masks)
    }

    pub(crate) fn from_masks(ground: Vec<Label>, mut masks: Vec<u32>) -> Result<Matroid> {
        if ground.len() > MAX_ELEMENTS {
            return Err(Error::GroundTooLarge(ground.len()));
        }
        masks.sort_unstable();
        masks.dedup();
        let Some(&first) = masks.first() else {
            return Err(Error::NoBases);
        };
        let r = size(first);
        if let Some(&b) = masks.iter().find(|&&b| size(b) != r) {
            return Err(Error::UnequalBases(r, size(b)));
        }
        let m = Matroid::from_masks_unchecked(ground, masks);
        m.check_exchange()?;
        Ok(m)
    }

    /// Trusted constructor for families already known to be matroids.
    pub(crate) fn from_masks_unchecked(ground: Vec<Label>, mut masks: Vec<u32>) -> Matroid {
        debug_assert!(ground.len() <= MAX_ELEMENTS);
        masks.sort_unstable();
        masks.dedup();
        let rank = masks.first().map(|&b| size(b)).unwrap_or(0);
        Matroid { ground, bases: masks, rank, ranks: OnceLock::new() }
    }

    /// The rank function induced by the family is a matroid rank function iff
    /// the family satisfies basis exchange. The local submodularity check is
    /// cheap; an explicit exchange witness is searched only on failure.
    fn check_exchange(&self) -> Result<()> {
        let n = self.len();
        let t = self.rank_table();
        let mut ok = true;
        'outer: for x in 0..=full(n) {
            let rx = t[x as usize];
            let outside = full(n) & !x;
            for e in bits(outside) {
                if t[(x | bit(e)) as usize] != rx {
                    continue;
                }
                for f in bits(outside & !full(e + 1)) {
                    if t[(x | bit(f)) as usize] == rx && t[(x | bit(e) | bit(f)) as usize] != rx {
                        ok = false;
                        break 'outer;
                    }
                }
            }
        }
        if ok {
            return Ok(());
        }
        for &b1 in &self.bases {
            for &b2 in &self.bases {
                for e in bits(b1 & !b2) {
                    let found = bits(b2 & !b1).any(|f| self.is_basis((b1 & !bit(e)) | bit(f)));
                    if !found {
                        return Err(Error::ExchangeViolation {
                            b1: self.labels_of(b1),
                            b2: self.labels_of(b2),
                            e: self.ground[e],
                        });
                    }
                }
            }
        }
        unreachable!("rank function fails submodularity but exchange holds")
    }

    pub fn ground(&self) -> &[Label] {
        &self.ground
    }

    pub fn len(&self) -> usize {
        self.ground.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ground.is_empty()
    }

    pub fn full_mask(&self) -> u32 {
        full(self.len())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn corank(&self) -> usize {
        self.len() - self.rank
    }

    pub fn basis_masks(&self) -> &[u32] {
        &self.bases
    }

    pub fn bases(&self) -> Vec<Vec<Label>> {
        self.bases.iter().map(|&b| self.labels_of(b)).collect()
    }

    pub fn index_of(&self, l: Label) -> Result<usize> {
        self.ground.binary_search(&l).map_err(|_| Error::UnknownLabel(l))
    }

    pub fn mask_of(&self, labels: &[Label]) -> Result<u32> {
        labels.iter().try_fold(0u32, |m, &l| Ok(m | bit(self.index_of(l)?)))
    }

    pub fn mask_of_set(&self, labels: &BTreeSet<Label>) -> Result<u32> {
        labels.iter().try_fold(0u32, |m, &l| Ok(m | bit(self.index_of(l)?)))
    }

    pub fn labels_of(&self, mask: u32) -> Vec<Label> {
        bits(mask).map(|i| self.ground[i]).collect()
    }

    pub fn label(&self, i: usize) -> Label {
        self.ground[i]
    }

    fn rank_table(&self) -> &[u8] {
        self.ranks.get_or_init(|| {
            let n = self.len();
            let total = 1usize << n;
            let mut indep = vec![false; total];
            for &b in &self.bases {
                indep[b as usize] = true;
            }
            for s in (0..total).rev() {
                if indep[s] {
                    let mut rest = s as u32;
                    while rest != 0 {
                        let low = rest & rest.wrapping_neg();
                        indep[s & !(low as usize)] = true;
                        rest &= rest - 1;
                    }
                }
            }
            let mut rank = vec![0u8; total];
            for s in 1..total {
                if indep[s] {
                    rank[s] = (s as u32).count_ones() as u8;
                } else {
                    let mut best = 0u8;
                    let mut rest = s as u32;
                    while rest != 0 {
                        let low = rest & rest.wrapping_neg();
                        best = best.max(rank[s & !(low as usize)]);
                        rest &= rest - 1;
                    }
                    rank[s] = best;
                }
            }
            rank
        })
    }

    #[inline]
    pub fn rank_of(&self, mask: u32) -> usize {
        self.rank_table()[mask as usize] as usize
    }

    /// Rank in the dual matroid.
    #[inline]
    pub fn corank_of(&self, mask: u32) -> usize {
        size(mask) + self.rank_of(self.full_mask() & !mask) - self.rank
    }

    pub fn rank_labels(&self, labels: &[Label]) -> Result<usize> {
        Ok(self.rank_of(self.mask_of(labels)?))
    }

    pub fn is_basis(&self, mask: u32) -> bool {
        self.bases.binary_search(&mask).is_ok()
    }

    pub fn is_independent(&self, mask: u32) -> bool {
        self.rank_of(mask) == size(mask)
    }

    pub fn is_coindependent(&self, mask: u32) -> bool {
        self.corank_of(mask) == size(mask)
    }

    pub fn is_circuit(&self, mask: u32) -> bool {
        let k = size(mask);
        k > 0 && self.rank_of(mask) == k - 1 && bits(mask).all(|e| self.rank_of(mask & !bit(e)) == k - 1)
    }

    pub fn is_cocircuit(&self, mask: u32) -> bool {
        let k = size(mask);
        k > 0 && self.corank_of(mask) == k - 1 && bits(mask).all(|e| self.corank_of(mask & !bit(e)) == k - 1)
    }

    pub fn closure(&self, mask: u32) -> u32 {
        let r = self.rank_of(mask);
        let mut cl = mask;
        for e in bits(self.full_mask() & !mask) {
            if self.rank_of(mask | bit(e)) == r {
                cl |= bit(e);
            }
        }
        cl
    }

    pub fn coclosure(&self, mask: u32) -> u32 {
        let r = self.corank_of(mask);
        let mut cl = mask;
        for e in bits(self.full_mask() & !mask) {
            if self.corank_of(mask | bit(e)) == r {
                cl |= bit(e);
            }
        }
        cl
    }

    pub fn closure_labels(&self, labels: &[Label]) -> Result<Vec<Label>> {
        Ok(self.labels_of(self.closure(self.mask_of(labels)?)))
    }

    pub fn coclosure_labels(&self, labels: &[Label]) -> Result<Vec<Label>> {
        Ok(self.labels_of(self.coclosure(self.mask_of(labels)?)))
    }

    pub fn is_flat(&self, mask: u32) -> bool {
        self.closure(mask) == mask
    }

    pub fn dual(&self) -> Matroid {
        let f = self.full_mask();
        Matroid::from_masks_unchecked(self.ground.clone(), self.bases.iter().map(|&b| f & !b).collect())
    }

    /// Restriction to the elements of `keep`, relabeled onto the kept labels.
    pub fn restrict(&self, keep: u32) -> Matroid {
        let r = self.rank_of(keep);
        let ground: Vec<Label> = self.labels_of(keep);
        let mut masks: Vec<u32> = self
            .bases
            .iter()
            .filter(|&&b| size(b & keep) == r)
            .map(|&b| bits::compress(b & keep, keep))
            .collect();
        masks.sort_unstable();
        masks.dedup();
        Matroid::from_masks_unchecked(ground, masks)
    }

    pub fn delete(&self, del: u32) -> Matroid {
        self.restrict(self.full_mask() & !del)
    }

    pub fn contract(&self, con: u32) -> Matroid {
        let r = self.rank_of(con);
        let keep = self.full_mask() & !con;
        let ground: Vec<Label> = self.labels_of(keep);
        let mut masks: Vec<u32> = self
            .bases
            .iter()
            .filter(|&&b| size(b & con) == r)
            .map(|&b| bits::compress(b & keep, keep))
            .collect();
        masks.sort_unstable();
        masks.dedup();
        Matroid::from_masks_unchecked(ground, masks)
    }

    /// `M / con \ del` for disjoint sets.
    pub fn minor(&self, con: u32, del: u32) -> Matroid {
        debug_assert_eq!(con & del, 0);
        self.contract(con).delete(self.compress_after(con, del))
    }

    fn compress_after(&self, removed: u32, mask: u32) -> u32 {
        bits::compress(mask, self.full_mask() & !removed)
    }

    pub fn delete_labels(&self, labels: &[Label]) -> Result<Matroid> {
        Ok(self.delete(self.mask_of(labels)?))
    }

    pub fn contract_labels(&self, labels: &[Label]) -> Result<Matroid> {
        Ok(self.contract(self.mask_of(labels)?))
    }

    fn circuits_by(&self, rank: impl Fn(u32) -> usize) -> Vec<u32> {
        let mut out = Vec::new();
        for s in 1..=self.full_mask() {
            let k = size(s);
            if rank(s) == k - 1 && bits(s).all(|e| rank(s & !bit(e)) == k - 1) {
                out.push(s);
            }
        }
        out
    }

    pub fn circuit_masks(&self) -> Vec<u32> {
        self.circuits_by(|s| self.rank_of(s))
    }

    pub fn cocircuit_masks(&self) -> Vec<u32> {
        self.circuits_by(|s| self.corank_of(s))
    }

    pub fn circuits(&self) -> Vec<Vec<Label>> {
        sorted_families(self, self.circuit_masks())
    }

    pub fn cocircuits(&self) -> Vec<Vec<Label>> {
        sorted_families(self, self.cocircuit_masks())
    }

    pub fn triangle_masks(&self) -> Vec<u32> {
        bits::combinations(self.full_mask(), 3).into_iter().filter(|&t| self.is_circuit(t)).collect()
    }

    pub fn triad_masks(&self) -> Vec<u32> {
        bits::combinations(self.full_mask(), 3).into_iter().filter(|&t| self.is_cocircuit(t)).collect()
    }

    pub fn triangles(&self) -> Vec<Vec<Label>> {
        sorted_families(self, self.triangle_masks())
    }

    pub fn triads(&self) -> Vec<Vec<Label>> {
        sorted_families(self, self.triad_masks())
    }

    pub fn loops(&self) -> u32 {
        bits(self.full_mask()).filter(|&e| self.rank_of(bit(e)) == 0).fold(0, |m, e| m | bit(e))
    }

    pub fn coloops(&self) -> u32 {
        bits(self.full_mask()).filter(|&e| self.corank_of(bit(e)) == 0).fold(0, |m, e| m | bit(e))
    }

    /// Parallel classes of non-loop elements (including singletons).
    pub fn parallel_classes(&self) -> Vec<u32> {
        let loops = self.loops();
        let mut seen = loops;
        let mut classes = Vec::new();
        for e in bits(self.full_mask()) {
            if seen & bit(e) != 0 {
                continue;
            }
            let class = self.closure(bit(e)) & !loops;
            seen |= class;
            classes.push(class);
        }
        classes
    }

    /// Series classes: parallel classes of the dual.
    pub fn series_classes(&self) -> Vec<u32> {
        let coloops = self.coloops();
        let mut seen = coloops;
        let mut classes = Vec::new();
        for e in bits(self.full_mask()) {
            if seen & bit(e) != 0 {
                continue;
            }
            let class = self.coclosure(bit(e)) & !coloops;
            seen |= class;
            classes.push(class);
        }
        classes
    }

    pub fn is_simple(&self) -> bool {
        self.loops() == 0 && self.parallel_classes().iter().all(|&c| size(c) == 1)
    }

    pub fn is_cosimple(&self) -> bool {
        self.coloops() == 0 && self.series_classes().iter().all(|&c| size(c) == 1)
    }

    /// Deletes loops and all but the least-labeled element of each parallel
    /// class.
    pub fn simplify(&self) -> Matroid {
        let keep = self.parallel_classes().iter().fold(0u32, |m, &c| m | (c & c.wrapping_neg()));
        self.restrict(keep)
    }

    /// Contracts coloops and all but the least-labeled element of each
    /// series class.
    pub fn cosimplify(&self) -> Matroid {
        let keep = self.series_classes().iter().fold(0u32, |m, &c| m | (c & c.wrapping_neg()));
        self.contract(self.full_mask() & !keep)
    }

    /// Renames elements; `map` must be injective on the ground set.
    pub fn relabel(&self, map: impl Fn(Label) -> Label) -> Result<Matroid> {
        let new: Vec<Label> = self.ground.iter().map(|&l| map(l)).collect();
        let mut order: Vec<usize> = (0..new.len()).collect();
        order.sort_by_key(|&i| new[i]);
        let sorted: Vec<Label> = order.iter().map(|&i| new[i]).collect();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::LabelClash(format!("{sorted:?}")));
        }
        // old index i goes to position pos[i]
        let mut pos = vec![0usize; new.len()];
        for (p, &i) in order.iter().enumerate() {
            pos[i] = p;
        }
        let masks = self.bases.iter().map(|&b| bits(b).fold(0u32, |m, i| m | bit(pos[i]))).collect();
        Ok(Matroid::from_masks_unchecked(sorted, masks))
    }

    /// Relabels through an explicit list of (old, new) pairs; unmapped labels
    /// are kept.
    pub fn relabel_pairs(&self, pairs: &[(Label, Label)]) -> Result<Matroid> {
        self.relabel(|l| pairs.iter().find(|(o, _)| *o == l).map(|&(_, n)| n).unwrap_or(l))
    }

    /// Element-wise direct sum; label sets must be disjoint.
    pub fn direct_sum(&self, other: &Matroid) -> Result<Matroid> {
        let mut ground: Vec<Label> = self.ground.iter().chain(&other.ground).copied().collect();
        ground.sort_unstable();
        if ground.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::LabelClash("direct sum of overlapping ground sets".into()));
        }
        if ground.len() > MAX_ELEMENTS {
            return Err(Error::GroundTooLarge(ground.len()));
        }
        let lift = |m: &Matroid, b: u32| -> u32 {
            bits(b).fold(0u32, |acc, i| acc | bit(ground.binary_search(&m.ground[i]).unwrap()))
        };
        let mut masks = Vec::new();
        for &b1 in &self.bases {
            for &b2 in &other.bases {
                masks.push(lift(self, b1) | lift(other, b2));
            }
        }
        Ok(Matroid::from_masks_unchecked(ground, masks))
    }
}

fn sorted_families(m: &Matroid, masks: Vec<u32>) -> Vec<Vec<Label>> {
    let mut out: Vec<Vec<Label>> = masks.into_iter().map(|c| m.labels_of(c)).collect();
    out.sort();
    out
}

fn sorted_ground(ground: &[Label]) -> Result<Vec<Label>> {
    let mut g = ground.to_vec();
    g.sort_unstable();
    if g.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::LabelClash(format!("{ground:?}")));
    }
    if g.len() > MAX_ELEMENTS {
        return Err(Error::GroundTooLarge(g.len()));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(r: usize, n: usize) -> Matroid {
        uniform(r, n).unwrap()
    }

    fn brute_rank(m: &Matroid, x: u32) -> usize {
        m.basis_masks().iter().map(|&b| size(b & x)).max().unwrap()
    }

    #[test]
    fn from_bases_examples() {
        let all2: Vec<Vec<Label>> = bits::combinations(0b1111, 2)
            .into_iter()
            .map(|m| bits(m).map(|i| i as Label + 1).collect())
            .collect();
        let m = Matroid::from_bases(&[1, 2, 3, 4], &all2).unwrap();
        assert_eq!(m, u(2, 4));
        let m = Matroid::from_bases(&[1, 2], &[vec![1], vec![2]]).unwrap();
        assert_eq!(m.rank(), 1);
        assert_eq!(m.bases().len(), 2);
        let err = Matroid::from_bases(&[1, 2, 3, 4], &[vec![1, 2], vec![3, 4]]).unwrap_err();
        match err {
            Error::ExchangeViolation { e, .. } => assert!([1, 2, 3, 4].contains(&e)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(Matroid::from_bases(&[1, 2], &[vec![1], vec![1, 2]]), Err(Error::UnequalBases(..))));
        assert!(matches!(Matroid::from_bases(&[1, 2], &[]), Err(Error::NoBases)));
        assert!(matches!(Matroid::from_bases(&[1, 2], &[vec![3]]), Err(Error::UnknownLabel(3))));
    }

    #[test]
    fn rank_and_closure_examples() {
        let m = u(2, 4);
        assert_eq!(m.rank_labels(&[1, 2, 3]).unwrap(), 2);
        assert_eq!(m.closure_labels(&[1, 2]).unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(m.rank_of(0), 0);
        assert_eq!(m.closure(m.full_mask()), m.full_mask());
        let k4 = mk4();
        for t in k4.triangle_masks() {
            assert_eq!(k4.closure(t), t);
        }
    }

    #[test]
    fn rank_table_matches_basis_intersection() {
        for m in [u(2, 4), u(3, 6), mk4(), fano(), nonfano(), wheel(4).unwrap(), whirl(3).unwrap()] {
            for x in 0..=m.full_mask() {
                assert_eq!(m.rank_of(x), brute_rank(&m, x));
            }
        }
    }

    #[test]
    fn duality_and_minors() {
        assert_eq!(u(2, 4).dual(), u(2, 4));
        let m = u(2, 5);
        let five = m.mask_of(&[5]).unwrap();
        assert_eq!(m.delete(five), u(2, 4));
        assert_eq!(m.contract(five), u(1, 4));
        for m in [fano(), mk4(), u(3, 7)] {
            assert_eq!(m.dual().dual(), m);
        }
    }

    #[test]
    fn minors_commute_on_disjoint_sets() {
        let m = wheel(4).unwrap();
        let f = m.full_mask();
        for c in 0..=f {
            let d = (f & !c) & 0b1010_0101 & !(c << 1);
            if d & c != 0 {
                continue;
            }
            let a = m.contract(c).delete(bits::compress(d, f & !c));
            let b = m.delete(d).contract(bits::compress(c, f & !d));
            assert_eq!(a, b);
            assert_eq!(a, m.minor(c, d));
        }
    }

    #[test]
    fn circuit_families() {
        let m = u(2, 4);
        assert_eq!(m.circuits().len(), 4);
        assert!(m.circuits().iter().all(|c| c.len() == 3));
        assert_eq!(m.cocircuits(), m.circuits());
        assert!(u(3, 3).circuits().is_empty());
        let k4 = mk4();
        assert_eq!(k4.triangles().len(), 4);
        assert_eq!(k4.triads().len(), 4);
    }

    #[test]
    fn simplification() {
        let m = fano();
        assert_eq!(m.simplify(), m);
        let m = u(2, 5).contract_labels(&[5]).unwrap();
        let si = m.simplify();
        assert_eq!(si.len(), 1);
        assert_eq!(si.rank(), 1);
        assert_eq!(si.ground(), &[1]);
        for m in [u(2, 5).contract_labels(&[5]).unwrap(), mk4().contract_labels(&[1]).unwrap(), wheel(3).unwrap()] {
            assert_eq!(m.dual().cosimplify(), m.simplify().dual());
        }
    }

    #[test]
    fn relabel_keeps_structure() {
        let m = mk4();
        let r = m.relabel(|l| 20 - l).unwrap();
        assert_eq!(r.ground(), &[14, 15, 16, 17, 18, 19]);
        assert_eq!(r.bases().len(), 16);
        assert!(r.triangles().contains(&vec![16, 18, 19]));
        assert!(m.relabel(|_| 1).is_err());
    }
}
