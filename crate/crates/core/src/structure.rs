//! Segments, fans, and delta-wye exchange.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use crate::bits::{bit, bits, full, size};
use crate::connectivity::triangle_triad_masks;
use crate::error::{Error, Result};
use crate::matroid::{canonical_form, mk4, CanonicalForm, Matroid, MAX_ELEMENTS};
use crate::Label;

/// Maximal sets of at least three elements whose 3-subsets are all
/// triangles.
pub fn segments(m: &Matroid) -> Vec<Vec<Label>> {
    let mut found: Vec<u32> = Vec::new();
    let loops = m.loops();
    for t in m.triangle_masks() {
        let flat = m.closure(t) & !loops;
        let classes: Vec<Vec<usize>> = m
            .parallel_classes()
            .into_iter()
            .filter(|&c| c & flat == c)
            .map(|c| bits(c).collect())
            .collect();
        // one representative from each parallel class of the rank-2 flat
        let mut choice = vec![0usize; classes.len()];
        loop {
            let s = classes.iter().zip(&choice).fold(0u32, |acc, (c, &k)| acc | bit(c[k]));
            if !found.contains(&s) {
                found.push(s);
            }
            let mut i = 0;
            while i < choice.len() {
                choice[i] += 1;
                if choice[i] < classes[i].len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == choice.len() {
                break;
            }
        }
    }
    let mut out: Vec<Vec<Label>> = found.into_iter().map(|s| m.labels_of(s)).collect();
    out.sort();
    out
}

pub fn cosegments(m: &Matroid) -> Vec<Vec<Label>> {
    segments(&m.dual())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TripleKind {
    Triangle,
    Triad,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FanOrdering {
    pub elements: Vec<Label>,
    pub start: TripleKind,
    pub maximal: bool,
}

impl FanOrdering {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// First and last elements, for fans of size at least 4.
    pub fn ends(&self) -> Option<(Label, Label)> {
        (self.len() >= 4).then(|| (self.elements[0], *self.elements.last().unwrap()))
    }

    pub fn internal(&self) -> Option<&[Label]> {
        (self.len() >= 4).then(|| &self.elements[1..self.len() - 1])
    }
}

struct FanSearch {
    triangles: HashSet<u32>,
    triads: HashSet<u32>,
    /// fan set -> least ordering (as element indices)
    best: BTreeMap<u32, Vec<usize>>,
}

impl FanSearch {
    fn new(m: &Matroid) -> Self {
        FanSearch {
            triangles: m.triangle_masks().into_iter().collect(),
            triads: m.triad_masks().into_iter().collect(),
            best: BTreeMap::new(),
        }
    }

    fn triple(o: &[usize], i: usize) -> u32 {
        bit(o[i]) | bit(o[i + 1]) | bit(o[i + 2])
    }

    fn record(&mut self, order: &[usize]) {
        let set = order.iter().fold(0u32, |acc, &e| acc | bit(e));
        match self.best.get(&set) {
            Some(cur) if cur.as_slice() <= order => {}
            _ => {
                self.best.insert(set, order.to_vec());
            }
        }
    }

    fn extend(&mut self, n: usize, order: &mut Vec<usize>) {
        self.record(order);
        let k = order.len();
        let last = Self::triple(order, k - 3);
        let (was_triangle, was_triad) = (self.triangles.contains(&last), self.triads.contains(&last));
        for e in 0..n {
            if order.contains(&e) {
                continue;
            }
            let next = bit(order[k - 2]) | bit(order[k - 1]) | bit(e);
            let ok = (!was_triangle || self.triads.contains(&next)) && (!was_triad || self.triangles.contains(&next));
            if ok {
                order.push(e);
                self.extend(n, order);
                order.pop();
            }
        }
    }
}

/// Checks conditions (a) and (b) of a fan ordering against the triangles
/// and triads of `m`.
pub fn is_fan_ordering(m: &Matroid, order: &[Label]) -> Result<bool> {
    if order.len() < 3 {
        return Ok(false);
    }
    let idx = order.iter().map(|&l| m.index_of(l)).collect::<Result<Vec<_>>>()?;
    let mut seen = 0u32;
    for &i in &idx {
        if seen & bit(i) != 0 {
            return Ok(false);
        }
        seen |= bit(i);
    }
    let tri = |i: usize| m.is_circuit(FanSearch::triple(&idx, i));
    let triad = |i: usize| m.is_cocircuit(FanSearch::triple(&idx, i));
    if !tri(0) && !triad(0) {
        return Ok(false);
    }
    for i in 0..idx.len() - 3 {
        if tri(i) && !triad(i + 1) {
            return Ok(false);
        }
        if triad(i) && !tri(i + 1) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn all_fan_sets(m: &Matroid) -> BTreeMap<u32, Vec<usize>> {
    let mut search = FanSearch::new(m);
    let mut starts: Vec<u32> = search.triangles.iter().chain(search.triads.iter()).copied().collect();
    starts.sort_unstable();
    starts.dedup();
    for t in starts {
        let e: Vec<usize> = bits(t).collect();
        for p in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            let mut order = vec![e[p[0]], e[p[1]], e[p[2]]];
            search.extend(m.len(), &mut order);
        }
    }
    search.best
}

/// Every maximal fan, each given by its lexicographically least ordering.
pub fn fans(m: &Matroid) -> Vec<FanOrdering> {
    let sets = all_fan_sets(m);
    let keys: Vec<u32> = sets.keys().copied().collect();
    let triangles: HashSet<u32> = m.triangle_masks().into_iter().collect();
    let mut out: Vec<FanOrdering> = sets
        .iter()
        .filter(|(&s, _)| !keys.iter().any(|&t| t != s && t & s == s))
        .map(|(_, order)| FanOrdering {
            elements: order.iter().map(|&i| m.label(i)).collect(),
            start: if triangles.contains(&FanSearch::triple(order, 0)) { TripleKind::Triangle } else { TripleKind::Triad },
            maximal: true,
        })
        .collect();
    out.sort_by(|a, b| a.elements.cmp(&b.elements));
    out
}

/// Whether `m` has a fan with at least `len` elements.
pub fn has_fan_of_size(m: &Matroid, len: usize) -> bool {
    all_fan_sets(m).keys().any(|&s| size(s) >= len)
}

/// Sets that are both triangles and triads.
pub fn triangle_triads(m: &Matroid) -> Vec<Vec<Label>> {
    let mut out: Vec<Vec<Label>> = triangle_triad_masks(m).into_iter().map(|t| m.labels_of(t)).collect();
    out.sort();
    out
}

/// The generalized parallel connection of `m` with a copy of `M(K4)` along
/// the triangle `t = {a, b, c}`. `primes = [a', b', c']` label the
/// complementary triad of the copy, with triangles `{a, b', c'}`,
/// `{a', b, c'}` and `{a', b', c}`.
///
/// Ranks come from the flats of the connection: `F` is a flat iff `F ∩ E(M)`
/// and `F ∩ E(K4)` are flats meeting `T` in the same set `S`, and then
/// `r(F) = r_M(F ∩ E(M)) + r_K4(F ∩ E(K4)) - r(S)`.
pub fn gen_parallel_connection_mk4(m: &Matroid, t: [Label; 3], primes: [Label; 3]) -> Result<Matroid> {
    let tm = m.mask_of(&t)?;
    if size(tm) != 3 || !m.is_circuit(tm) {
        return Err(Error::Precondition(format!("{t:?} is not a triangle")));
    }
    for p in primes {
        if m.index_of(p).is_ok() {
            return Err(Error::LabelClash(p.to_string()));
        }
    }
    let mut pr = primes.to_vec();
    pr.sort_unstable();
    pr.dedup();
    if pr.len() != 3 {
        return Err(Error::LabelClash(format!("{primes:?}")));
    }
    let n = m.len() + 3;
    if n > MAX_ELEMENTS {
        return Err(Error::GroundTooLarge(n));
    }
    let [a, b, c] = t;
    let [a2, b2, c2] = primes;
    // edges of K4 on p,q,r,s: pq=1 pr=2 ps=3 qr=4 qs=5 rs=6
    let k4 = mk4().relabel_pairs(&[(4, a), (2, b), (1, c), (3, a2), (5, b2), (6, c2)])?;
    let mut ground: Vec<Label> = m.ground().iter().copied().chain(primes).collect();
    ground.sort_unstable();
    let pos = |l: Label| ground.binary_search(&l).unwrap();
    // bit maps from the new ground set into m and into k4
    let to_m: Vec<Option<usize>> = ground.iter().map(|&l| m.index_of(l).ok()).collect();
    let to_k: Vec<Option<usize>> = ground.iter().map(|&l| k4.index_of(l).ok()).collect();
    let t_new: u32 = t.iter().fold(0, |acc, &l| acc | bit(pos(l)));
    let t_in_k = k4.mask_of(&t)?;
    let project = |x: u32, map: &[Option<usize>]| bits(x).filter_map(|i| map[i]).fold(0u32, |acc, j| acc | bit(j));
    let lift_t = |s_m: u32| bits(s_m).fold(0u32, |acc, i| acc | bit(pos(m.label(i))));
    let t_subsets: Vec<u32> = (0..8u32)
        .map(|k| bits(k).fold(0u32, |acc, i| acc | bit(pos(t[i]))))
        .collect();
    let rank_of = |x: u32| -> usize {
        let mut best = usize::MAX;
        for &s in &t_subsets {
            if s & x != x & t_new {
                continue;
            }
            let x1 = project(x | s, &to_m);
            let x2 = project(x | s, &to_k);
            let s_m = project(s, &to_m);
            if lift_t(m.closure(x1) & tm) != s {
                continue;
            }
            if project(s, &to_k) != k4.closure(x2) & t_in_k {
                continue;
            }
            let r = m.rank_of(x1) + k4.rank_of(x2) - m.rank_of(s_m);
            best = best.min(r);
        }
        best
    };
    let rank = m.rank() + 1;
    let bases: Vec<u32> = crate::bits::combinations(full(n), rank).into_iter().filter(|&x| rank_of(x) == rank).collect();
    Matroid::from_bases(&ground, &bases.iter().map(|&x| bits(x).map(|i| ground[i]).collect()).collect::<Vec<_>>())
}

fn fresh_labels(m: &Matroid) -> [Label; 3] {
    let top = m.ground().iter().copied().max().unwrap_or(0);
    [top + 1, top + 2, top + 3]
}

/// `Δ_T(M)`: the parallel connection with `M(K4)` along the coindependent
/// triangle `T`, with `T` deleted and the triad elements renamed after the
/// triangle elements opposite them.
pub fn delta_y(m: &Matroid, t: [Label; 3]) -> Result<Matroid> {
    let tm = m.mask_of(&t)?;
    if size(tm) != 3 || !m.is_circuit(tm) || !m.is_coindependent(tm) {
        return Err(Error::Precondition(format!("{t:?} is not a coindependent triangle")));
    }
    let primes = fresh_labels(m);
    let p = gen_parallel_connection_mk4(m, t, primes)?;
    let del = p.delete_labels(&t)?;
    del.relabel_pairs(&[(primes[0], t[0]), (primes[1], t[1]), (primes[2], t[2])])
}

/// `∇_{T*}(M)`: the dual of `Δ_{T*}(M*)` for an independent triad `T*`.
pub fn wye_delta(m: &Matroid, t: [Label; 3]) -> Result<Matroid> {
    let tm = m.mask_of(&t)?;
    if size(tm) != 3 || !m.is_cocircuit(tm) || !m.is_independent(tm) {
        return Err(Error::Precondition(format!("{t:?} is not an independent triad")));
    }
    Ok(delta_y(&m.dual(), t)?.dual())
}

fn as_triple(m: &Matroid, mask: u32) -> [Label; 3] {
    let l = m.labels_of(mask);
    [l[0], l[1], l[2]]
}

/// Single delta-wye and wye-delta moves available in `m`, in order.
pub fn exchange_moves(m: &Matroid) -> Vec<(TripleKind, [Label; 3], Matroid)> {
    let mut out = Vec::new();
    for t in m.triangle_masks() {
        if m.is_coindependent(t) {
            let tl = as_triple(m, t);
            if let Ok(r) = delta_y(m, tl) {
                out.push((TripleKind::Triangle, tl, r));
            }
        }
    }
    for t in m.triad_masks() {
        if m.is_independent(t) {
            let tl = as_triple(m, t);
            if let Ok(r) = wye_delta(m, tl) {
                out.push((TripleKind::Triad, tl, r));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Orbit {
    /// One representative per isomorphism class, in discovery order.
    pub members: Vec<CanonicalForm>,
    /// Reached a level with nothing new before the step bound.
    pub fixpoint: bool,
    pub steps: usize,
}

impl Orbit {
    pub fn contains(&self, m: &Matroid) -> bool {
        self.members.contains(&canonical_form(m))
    }
}

/// Breadth-first closure of `{M, M*}` under exchanges on coindependent
/// triangles and independent triads, up to isomorphism.
pub fn delta_star_orbit(m: &Matroid, max_steps: usize) -> Orbit {
    let mut members: Vec<CanonicalForm> = Vec::new();
    let mut frontier: Vec<Matroid> = Vec::new();
    for start in [m.clone(), m.dual()] {
        let f = canonical_form(&start);
        if !members.contains(&f) {
            members.push(f);
            frontier.push(start);
        }
    }
    let mut steps = 0;
    while !frontier.is_empty() {
        if steps == max_steps {
            return Orbit { members, fixpoint: false, steps };
        }
        steps += 1;
        let mut next = Vec::new();
        for x in &frontier {
            for (_, _, y) in exchange_moves(x) {
                let f = canonical_form(&y);
                if !members.contains(&f) {
                    members.push(f);
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    Orbit { members, fixpoint: true, steps }
}
