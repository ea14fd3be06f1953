//! The connectivity function and the separations built from it.

use serde::Serialize;

use crate::bits::{bit, size, GraySubsets};
use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::Label;

/// `λ(X) = r(X) + r(E - X) - r(M)`.
pub fn lambda(m: &Matroid, x: u32) -> usize {
    m.rank_of(x) + m.rank_of(m.full_mask() & !x) - m.rank()
}

pub fn lambda_labels(m: &Matroid, x: &[Label]) -> Result<usize> {
    Ok(lambda(m, m.mask_of(x)?))
}

pub fn is_k_separating(m: &Matroid, x: u32, k: usize) -> bool {
    lambda(m, x) < k
}

pub fn is_exactly_k_separating(m: &Matroid, x: u32, k: usize) -> bool {
    k >= 1 && lambda(m, x) == k - 1
}

/// `k`-separating with both sides of size at least `k`.
pub fn is_k_separation(m: &Matroid, x: u32, k: usize) -> bool {
    let y = m.full_mask() & !x;
    size(x) >= k && size(y) >= k && is_k_separating(m, x, k)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Separation {
    /// The side containing the least label.
    pub side: Vec<Label>,
    pub other: Vec<Label>,
    pub order: usize,
    pub lambda: usize,
    pub exact: bool,
    /// Both sides have rank at least 3.
    pub vertical: bool,
    /// Both sides have corank at least 3.
    pub cyclic: bool,
}

/// Side masks of every `k`-separation, one per complementary pair (the side
/// holding element 0), ordered by size and then by labels.
pub fn separation_masks(m: &Matroid, k: usize, exact_only: bool) -> Vec<u32> {
    let n = m.len();
    if n == 0 {
        return Vec::new();
    }
    let full = m.full_mask();
    let mut out: Vec<u32> = GraySubsets::new(full & !1)
        .map(|s| s | 1)
        .filter(|&x| {
            x != full
                && is_k_separation(m, x, k)
                && (!exact_only || is_exactly_k_separating(m, x, k))
        })
        .collect();
    out.sort_by_key(|&x| (size(x), m.labels_of(x)));
    out
}

fn describe(m: &Matroid, x: u32, k: usize) -> Separation {
    let y = m.full_mask() & !x;
    let l = lambda(m, x);
    Separation {
        side: m.labels_of(x),
        other: m.labels_of(y),
        order: k,
        lambda: l,
        exact: l + 1 == k,
        vertical: m.rank_of(x).min(m.rank_of(y)) >= 3,
        cyclic: m.corank_of(x).min(m.corank_of(y)) >= 3,
    }
}

/// All `k`-separations up to complementation.
pub fn separations(m: &Matroid, k: usize) -> Vec<Separation> {
    separation_masks(m, k, false).into_iter().map(|x| describe(m, x, k)).collect()
}

pub fn exact_separations(m: &Matroid, k: usize) -> Vec<Separation> {
    separation_masks(m, k, true).into_iter().map(|x| describe(m, x, k)).collect()
}

/// No `j`-separation for `j < k`.
pub fn is_k_connected(m: &Matroid, k: usize) -> bool {
    (1..k).all(|j| separation_masks(m, j, false).is_empty())
}

pub fn is_connected(m: &Matroid) -> bool {
    is_k_connected(m, 2)
}

pub fn is_3connected(m: &Matroid) -> bool {
    is_k_connected(m, 3)
}

fn is_series_pair(m: &Matroid, x: u32) -> bool {
    size(x) == 2 && m.is_cocircuit(x)
}

fn is_parallel_pair(m: &Matroid, x: u32) -> bool {
    size(x) == 2 && m.is_circuit(x)
}

fn up_to(m: &Matroid, shape: impl Fn(u32) -> bool) -> bool {
    if !is_connected(m) {
        return false;
    }
    let full = m.full_mask();
    separation_masks(m, 2, false).into_iter().all(|x| shape(x) || shape(full & !x))
}

/// Connected, and every 2-separation has a series pair as a side.
pub fn is_3connected_up_to_series_pairs(m: &Matroid) -> bool {
    up_to(m, |x| is_series_pair(m, x))
}

pub fn is_3connected_up_to_parallel_pairs(m: &Matroid) -> bool {
    up_to(m, |x| is_parallel_pair(m, x))
}

/// Connected, and every 2-separation has a series class as a side.
pub fn is_3connected_up_to_series_classes(m: &Matroid) -> bool {
    let classes = m.series_classes();
    up_to(m, |x| size(x) >= 2 && classes.contains(&x))
}

pub fn is_3connected_up_to_parallel_classes(m: &Matroid) -> bool {
    let classes = m.parallel_classes();
    up_to(m, |x| size(x) >= 2 && classes.contains(&x))
}

/// Connected, and every 2-separation has a series class or a parallel
/// class as a side.
pub fn is_3connected_up_to_series_and_parallel_classes(m: &Matroid) -> bool {
    let series = m.series_classes();
    let parallel = m.parallel_classes();
    up_to(m, |x| size(x) >= 2 && (series.contains(&x) || parallel.contains(&x)))
}

fn partition_masks(m: &Matroid, x: &[Label], y: &[Label], z: &[Label]) -> Result<(u32, u32, u32)> {
    let (xm, ym, zm) = (m.mask_of(x)?, m.mask_of(y)?, m.mask_of(z)?);
    let covers = xm | ym == m.full_mask() || xm | ym | zm == m.full_mask();
    if xm & ym != 0 || !covers || zm & !m.full_mask() != 0 {
        return Err(Error::Precondition("X and Y must partition E or E - Z".into()));
    }
    Ok((xm, ym, zm))
}

/// `Z ⊆ cl(X - Z) ∩ cl(Y - Z)`.
pub fn guts_contains(m: &Matroid, x: &[Label], y: &[Label], z: &[Label]) -> Result<bool> {
    let (xm, ym, zm) = partition_masks(m, x, y, z)?;
    Ok(in_guts(m, xm, ym, zm))
}

pub(crate) fn in_guts(m: &Matroid, x: u32, y: u32, z: u32) -> bool {
    z & !m.closure(x & !z) == 0 && z & !m.closure(y & !z) == 0
}

/// Guts in the dual.
pub fn coguts_contains(m: &Matroid, x: &[Label], y: &[Label], z: &[Label]) -> Result<bool> {
    let (xm, ym, zm) = partition_masks(m, x, y, z)?;
    Ok(in_coguts(m, xm, ym, zm))
}

pub(crate) fn in_coguts(m: &Matroid, x: u32, y: u32, z: u32) -> bool {
    z & !m.coclosure(x & !z) == 0 && z & !m.coclosure(y & !z) == 0
}

/// A partition `(X, z, Y)` with `(X ∪ z, Y)` and `(X, Y ∪ z)` vertical
/// 3-separations and `z` in the guts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerticalSeparation {
    pub x: Vec<Label>,
    pub z: Label,
    pub y: Vec<Label>,
}

fn is_vertical_3sep(m: &Matroid, x: u32) -> bool {
    let y = m.full_mask() & !x;
    is_k_separation(m, x, 3) && m.rank_of(x).min(m.rank_of(y)) >= 3
}

pub(crate) fn vertical_triple(m: &Matroid, x: u32, z: usize) -> bool {
    let y = m.full_mask() & !x & !bit(z);
    x & bit(z) == 0
        && x != 0
        && y != 0
        && is_vertical_3sep(m, x | bit(z))
        && is_vertical_3sep(m, x)
        && in_guts(m, x | bit(z), y, bit(z))
}

/// Every vertical 3-separation `(X, z, Y)`, listed once with the least
/// label of `X ∪ Y` in `X`, ordered by `z` and then by `X`.
pub fn vertical_3seps(m: &Matroid) -> Vec<VerticalSeparation> {
    let mut out = Vec::new();
    if m.rank() < 3 {
        return out;
    }
    for z in 0..m.len() {
        let rest = m.full_mask() & !bit(z);
        let least = rest & rest.wrapping_neg();
        let mut found: Vec<u32> = GraySubsets::new(rest & !least)
            .map(|s| s | least)
            .filter(|&x| vertical_triple(m, x, z))
            .collect();
        found.sort_by_key(|&x| (size(x), m.labels_of(x)));
        for x in found {
            out.push(VerticalSeparation { x: m.labels_of(x), z: m.label(z), y: m.labels_of(rest & !x) });
        }
    }
    out
}

/// Vertical 3-separations of the dual.
pub fn cyclic_3seps(m: &Matroid) -> Vec<VerticalSeparation> {
    vertical_3seps(&m.dual())
}

fn blocking_setup(m: &Matroid, e: Label, x: &[Label], y: &[Label]) -> Result<(usize, u32, u32)> {
    let ei = m.index_of(e)?;
    let (xm, ym) = (m.mask_of(x)?, m.mask_of(y)?);
    if (xm | ym) & bit(ei) != 0 {
        return Err(Error::Precondition(format!("{e} must lie outside X and Y")));
    }
    if xm & ym != 0 || xm | ym | bit(ei) != m.full_mask() {
        return Err(Error::Precondition("X and Y must partition E(M) - e".into()));
    }
    Ok((ei, xm, ym))
}

/// `λ_M(X) > λ_{M\e}(X)`.
pub fn blocks(m: &Matroid, e: Label, x: &[Label], y: &[Label]) -> Result<bool> {
    let (ei, xm, _) = blocking_setup(m, e, x, y)?;
    let k = lambda(&m.delete(bit(ei)), compress_without(xm, ei));
    Ok(lambda(m, xm) > k)
}

fn compress_without(mask: u32, e: usize) -> u32 {
    let low = mask & (bit(e) - 1);
    let high = (mask >> 1) & !(bit(e) - 1);
    low | high
}

/// `e ∉ cl(X) ∪ cl(Y)`. When `e` is not a coloop this is checked against
/// the definition (`e` blocks both `X` and `X ∪ e`) and the two must agree.
/// For a coloop the λ values do not move, so only the closure criterion
/// applies.
pub fn fully_blocks(m: &Matroid, e: Label, x: &[Label], y: &[Label]) -> Result<bool> {
    let (ei, xm, ym) = blocking_setup(m, e, x, y)?;
    let by_closure = m.closure(xm) & bit(ei) == 0 && m.closure(ym) & bit(ei) == 0;
    if m.coloops() & bit(ei) != 0 {
        return Ok(by_closure);
    }
    let k = lambda(&m.delete(bit(ei)), compress_without(xm, ei));
    let by_lambda = lambda(m, xm) > k && lambda(m, xm | bit(ei)) > k;
    if by_lambda != by_closure {
        return Err(Error::Precondition(format!("blocking criteria disagree for {e}")));
    }
    Ok(by_closure)
}

/// Each prefix union is exactly `k`-separating, and the end cells have at
/// least two elements.
pub fn is_path_of_kseps(m: &Matroid, cells: &[Vec<Label>], k: usize) -> Result<bool> {
    let mut masks = Vec::with_capacity(cells.len());
    let mut seen = 0u32;
    for c in cells {
        if c.is_empty() {
            return Err(Error::Precondition("path cells must be non-empty".into()));
        }
        let cm = m.mask_of(c)?;
        if cm & seen != 0 {
            return Err(Error::Precondition("path cells must be disjoint".into()));
        }
        seen |= cm;
        masks.push(cm);
    }
    if seen != m.full_mask() {
        return Err(Error::Precondition("path cells must cover E(M)".into()));
    }
    if masks.len() < 2 || size(masks[0]) < 2 || size(*masks.last().unwrap()) < 2 {
        return Ok(false);
    }
    let mut prefix = 0u32;
    for cm in &masks[..masks.len() - 1] {
        prefix |= cm;
        if !is_exactly_k_separating(m, prefix, k) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sets that are both triangles and triads.
pub fn triangle_triad_masks(m: &Matroid) -> Vec<u32> {
    let triads = m.triad_masks();
    m.triangle_masks().into_iter().filter(|t| triads.contains(t)).collect()
}
