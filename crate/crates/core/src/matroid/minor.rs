//! Minor containment up to isomorphism.

use std::collections::HashMap;

use serde::Serialize;

use super::{canonical_form, CanonicalForm, Matroid};
use crate::bits::{self, bits, size};
use crate::Label;

/// `M / contract \ delete` is isomorphic to the target.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinorWitness {
    pub contract: Vec<Label>,
    pub delete: Vec<Label>,
}

struct Target {
    elements: usize,
    rank: usize,
    bases: usize,
    degrees: Vec<usize>,
    form: CanonicalForm,
}

impl Target {
    fn new(n: &Matroid) -> Self {
        Target {
            elements: n.len(),
            rank: n.rank(),
            bases: n.basis_masks().len(),
            degrees: degree_sequence(n.len(), n.basis_masks()),
            form: canonical_form(n),
        }
    }
}

fn degree_sequence(n: usize, bases: &[u32]) -> Vec<usize> {
    let mut d: Vec<usize> = (0..n).map(|e| bases.iter().filter(|&&b| b & (1 << e) != 0).count()).collect();
    d.sort_unstable();
    d
}

/// Scans candidate minors of `m` shaped like `targets`, calling `found` on
/// every `(contract, delete)` pair whose minor is isomorphic to one of them.
/// `found` returns `false` to stop the scan.
fn scan(m: &Matroid, targets: &[Matroid], mut found: impl FnMut(u32, u32) -> bool) {
    let prepared: Vec<Target> = targets.iter().map(Target::new).collect();
    let mut cache: HashMap<(usize, Vec<u32>), bool> = HashMap::new();
    let full = m.full_mask();
    let mut shapes: Vec<(usize, usize)> = prepared
        .iter()
        .filter(|t| t.elements <= m.len() && t.rank <= m.rank() && m.len() - t.elements >= m.rank() - t.rank)
        .map(|t| (m.rank() - t.rank, m.len() - t.elements - (m.rank() - t.rank)))
        .collect();
    shapes.sort_unstable();
    shapes.dedup();
    for (k, d) in shapes {
        for c in bits::combinations(full, k) {
            if !m.is_independent(c) {
                continue;
            }
            for del in bits::combinations(full & !c, d) {
                if m.rank_of(full & !del) != m.rank() {
                    continue;
                }
                let keep = full & !c & !del;
                let mut minor_bases: Vec<u32> = m
                    .basis_masks()
                    .iter()
                    .filter(|&&b| b & c == c && b & del == 0)
                    .map(|&b| bits::compress(b & keep, keep))
                    .collect();
                minor_bases.sort_unstable();
                let n_keep = size(keep);
                let key = (n_keep, minor_bases);
                let hit = if let Some(&h) = cache.get(&key) {
                    h
                } else {
                    let h = matches_any(&prepared, n_keep, &key.1);
                    cache.insert(key, h);
                    h
                };
                if hit && !found(c, del) {
                    return;
                }
            }
        }
    }
}

fn matches_any(targets: &[Target], n: usize, bases: &[u32]) -> bool {
    let candidates: Vec<&Target> = targets.iter().filter(|t| t.elements == n && t.bases == bases.len()).collect();
    if candidates.is_empty() {
        return false;
    }
    let degrees = degree_sequence(n, bases);
    let candidates: Vec<&Target> = candidates.into_iter().filter(|t| t.degrees == degrees).collect();
    if candidates.is_empty() {
        return false;
    }
    let ground: Vec<Label> = (0..n as Label).collect();
    let minor = Matroid::from_masks_unchecked(ground, bases.to_vec());
    let form = canonical_form(&minor);
    candidates.iter().any(|t| t.form == form)
}

/// The lexicographically least `(C, D)` with `C` independent, `D`
/// coindependent and `M / C \ D ≅ N`.
pub fn has_minor(m: &Matroid, n: &Matroid) -> Option<MinorWitness> {
    let mut out = None;
    scan(m, std::slice::from_ref(n), |c, d| {
        out = Some(MinorWitness { contract: m.labels_of(c), delete: m.labels_of(d) });
        false
    });
    out
}

/// Whether `m` has a minor isomorphic to some member of `targets`.
pub fn has_minor_of_any(m: &Matroid, targets: &[Matroid]) -> bool {
    let mut hit = false;
    scan(m, targets, |_, _| {
        hit = true;
        false
    });
    hit
}

/// Every subset `S` of `E(M)` that is the ground set of some minor of `m`
/// isomorphic to `n`.
pub fn minor_supports(m: &Matroid, n: &Matroid) -> Vec<u32> {
    let full = m.full_mask();
    let mut out = Vec::new();
    scan(m, std::slice::from_ref(n), |c, d| {
        out.push(full & !c & !d);
        true
    });
    out.sort_unstable();
    out.dedup();
    out
}

/// Per-element deletability and contractibility with respect to a set of
/// target minors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElementClassification {
    pub elements: Vec<ElementStatus>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ElementStatus {
    pub label: Label,
    pub deletable: bool,
    pub contractible: bool,
}

impl ElementStatus {
    pub fn essential(&self) -> bool {
        !self.deletable && !self.contractible
    }

    pub fn flexible(&self) -> bool {
        self.deletable && self.contractible
    }
}

impl ElementClassification {
    pub fn compute(m: &Matroid, targets: &[Matroid]) -> Self {
        let elements = bits(m.full_mask())
            .map(|e| ElementStatus {
                label: m.label(e),
                deletable: has_minor_of_any(&m.delete(1 << e), targets),
                contractible: has_minor_of_any(&m.contract(1 << e), targets),
            })
            .collect();
        ElementClassification { elements }
    }

    pub fn get(&self, label: Label) -> Option<&ElementStatus> {
        self.elements.iter().find(|s| s.label == label)
    }

    pub fn essential(&self) -> Vec<Label> {
        self.elements.iter().filter(|s| s.essential()).map(|s| s.label).collect()
    }

    pub fn flexible(&self) -> Vec<Label> {
        self.elements.iter().filter(|s| s.flexible()).map(|s| s.label).collect()
    }

    pub fn deletable(&self) -> Vec<Label> {
        self.elements.iter().filter(|s| s.deletable).map(|s| s.label).collect()
    }

    pub fn contractible(&self) -> Vec<Label> {
        self.elements.iter().filter(|s| s.contractible).map(|s| s.label).collect()
    }

    pub fn has_no_flexible(&self) -> bool {
        self.elements.iter().all(|s| !s.flexible())
    }
}
