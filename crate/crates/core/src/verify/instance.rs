//! Checkers whose instances are a matroid plus a little data: separations,
//! triangles, target minors or a field.

use serde_json::json;

use super::{exact, need, settle, Outcome, Step};
use crate::bits::{bit, bits, size};
use crate::connectivity::{
    is_3connected, is_3connected_up_to_series_and_parallel_classes, is_3connected_up_to_series_pairs, is_k_separation,
    separation_masks, vertical_3seps, vertical_triple,
};
use crate::fragility::classify_elements;
use crate::matroid::{has_minor_of_any, minor_supports, Matroid};
use crate::pfield::PartialField;
use crate::pmatrix::is_excluded_minor;
use crate::structure::{delta_y, exchange_moves, fans, has_fan_of_size};
use crate::Label;

/// For a 2-separation `(X, Y)` of `M` and a 3-connected minor `N`: every
/// copy of `N` meets some side `U` in at most one element, elements of
/// `U - cl(V)` are `N`-contractible and elements of `U - cl*(V)` are
/// `N`-deletable.
pub fn two_separation_minor_side(m: &Matroid, n: &Matroid, x: &[Label]) -> Outcome {
    settle(two_separation_inner(m, n, x))
}

fn two_separation_inner(m: &Matroid, n: &Matroid, x: &[Label]) -> Step<Outcome> {
    let xm = exact(m.mask_of(x))?;
    let ym = m.full_mask() & !xm;
    need(is_k_separation(m, xm, 2), "two_separation")?;
    need(is_3connected(n), "minor_3_connected")?;
    let supports = minor_supports(m, n);
    need(!supports.is_empty(), "has_minor")?;
    let targets = std::slice::from_ref(n);
    let mut contractible: Vec<Option<bool>> = vec![None; m.len()];
    let mut deletable: Vec<Option<bool>> = vec![None; m.len()];
    for s in supports {
        let sides: Vec<(u32, u32)> = [(xm, ym), (ym, xm)].into_iter().filter(|&(u, _)| size(u & s) <= 1).collect();
        if sides.is_empty() {
            return Ok(Outcome::fail(json!({ "support": m.labels_of(s) })));
        }
        for (u, v) in sides {
            for e in bits(u & !m.closure(v)) {
                if !*contractible[e].get_or_insert_with(|| has_minor_of_any(&m.contract(bit(e)), targets)) {
                    return Ok(Outcome::fail(json!({ "element": m.label(e), "side": m.labels_of(u), "expected": "contractible" })));
                }
            }
            for e in bits(u & !m.coclosure(v)) {
                if !*deletable[e].get_or_insert_with(|| has_minor_of_any(&m.delete(bit(e)), targets)) {
                    return Ok(Outcome::fail(json!({ "element": m.label(e), "side": m.labels_of(u), "expected": "deletable" })));
                }
            }
        }
    }
    Ok(Outcome::Pass)
}

/// For every 3-separation `(X, Y)` of a 3-connected matroid: if `X` meets
/// both `cl(Y)` and `cl*(Y)`, it meets each in exactly one element.
pub fn guts_coguts(m: &Matroid) -> Outcome {
    if !is_3connected(m) {
        return Outcome::unmet("three_connected");
    }
    let full = m.full_mask();
    for s in separation_masks(m, 3, true) {
        for x in [s, full & !s] {
            let y = full & !x;
            let (g, c) = (x & m.closure(y), x & m.coclosure(y));
            if g != 0 && c != 0 && (size(g) != 1 || size(c) != 1) {
                return Outcome::fail(json!({ "x": m.labels_of(x), "guts": m.labels_of(g), "coguts": m.labels_of(c) }));
            }
        }
    }
    Outcome::Pass
}

/// For a vertical 3-separation `(X, z, Y)` of a 3-connected matroid and a
/// 3-connected minor `N` of `M/z`: every copy of `N` in `M/z` admits a
/// vertical 3-separation `(X', z, Y')` with `|X' ∩ E(N)| ≤ 1` and `Y' ∪ z`
/// closed.
pub fn vertical_separation_cleanup(m: &Matroid, n: &Matroid, x: &[Label], z: Label) -> Outcome {
    settle(vertical_inner(m, n, x, z))
}

fn vertical_inner(m: &Matroid, n: &Matroid, x: &[Label], z: Label) -> Step<Outcome> {
    let xm = exact(m.mask_of(x))?;
    let zi = exact(m.index_of(z))?;
    need(is_3connected(m), "three_connected")?;
    need(vertical_triple(m, xm, zi), "vertical_separation")?;
    need(is_3connected(n), "minor_3_connected")?;
    let mz = m.contract(bit(zi));
    let supports = minor_supports(&mz, n);
    need(!supports.is_empty(), "contraction_has_minor")?;
    let rest = m.full_mask() & !bit(zi);
    let mut sides = Vec::new();
    for v in vertical_3seps(m).into_iter().filter(|v| v.z == z) {
        let a = exact(m.mask_of(&v.x))?;
        sides.push(a);
        sides.push(rest & !a);
    }
    for s in supports {
        let s = exact(m.mask_of(&mz.labels_of(s)))?;
        let found = sides.iter().any(|&a| size(a & s) <= 1 && m.is_flat((rest & !a) | bit(zi)));
        if !found {
            return Ok(Outcome::fail(json!({ "support": m.labels_of(s) })));
        }
    }
    Ok(Outcome::Pass)
}

/// A matroid that is fragile with respect to a non-empty set of 3-connected
/// targets on at least four elements is 3-connected up to series and
/// parallel classes.
pub fn fragile_connectivity(m: &Matroid, targets: &[Matroid]) -> Outcome {
    if targets.is_empty() {
        return Outcome::unmet("targets_nonempty");
    }
    if !targets.iter().all(|t| t.len() >= 4 && is_3connected(t)) {
        return Outcome::unmet("targets_3_connected");
    }
    let Ok(cls) = classify_elements(m, targets) else {
        return Outcome::unmet("has_minor");
    };
    if !cls.has_no_flexible() {
        return Outcome::unmet("fragile");
    }
    if is_3connected_up_to_series_and_parallel_classes(m) {
        return Outcome::Pass;
    }
    let series = m.series_classes();
    let parallel = m.parallel_classes();
    let full = m.full_mask();
    let is_class = |s: u32| size(s) >= 2 && (series.contains(&s) || parallel.contains(&s));
    let bad = separation_masks(m, 2, false).into_iter().find(|&s| !is_class(s) && !is_class(full & !s));
    Outcome::fail(json!({ "separation": bad.map(|s| m.labels_of(s)) }))
}

/// The delta-wye exchange of a 3-connected matroid on a coindependent
/// triangle is 3-connected up to series pairs, and 3-connected unless the
/// matroid has a 4-element fan.
pub fn delta_wye_connectivity(m: &Matroid, t: [Label; 3]) -> Outcome {
    settle(delta_wye_inner(m, t))
}

fn delta_wye_inner(m: &Matroid, t: [Label; 3]) -> Step<Outcome> {
    let tm = exact(m.mask_of(&t))?;
    need(is_3connected(m), "three_connected")?;
    need(size(tm) == 3 && m.is_circuit(tm), "triangle")?;
    need(m.is_coindependent(tm), "coindependent")?;
    let after = exact(delta_y(m, t))?;
    if !is_3connected_up_to_series_pairs(&after) {
        return Ok(Outcome::fail(json!({ "triangle": t, "violation": "not_3_connected_up_to_series_pairs" })));
    }
    if !is_3connected(&after) && !has_fan_of_size(m, 4) {
        return Ok(Outcome::fail(json!({ "triangle": t, "violation": "not_3_connected_without_4_fan" })));
    }
    Ok(Outcome::Pass)
}

fn certify_excluded(m: &Matroid, field: &PartialField) -> Step<()> {
    need(exact(is_excluded_minor(m, field))?, "excluded_minor")
}

/// An excluded minor for representability over `field` on more than four
/// elements has no 4-element fan. `U_{2,4}` over GF(2) is itself a 4-element
/// fan, so the size clause is required.
pub fn excluded_minor_no_four_fans(m: &Matroid, field: &PartialField) -> Outcome {
    settle((|| {
        certify_excluded(m, field)?;
        need(m.len() > 4, "more_than_four_elements")?;
        Ok(match fans(m).into_iter().find(|f| f.len() >= 4) {
            Some(f) => Outcome::fail(json!({ "fan": f.elements })),
            None => Outcome::Pass,
        })
    })())
}

/// The dual of an excluded minor, and every single delta-wye or wye-delta
/// exchange of it or of its dual, is again an excluded minor.
pub fn exchange_preserves_excluded(m: &Matroid, field: &PartialField) -> Outcome {
    settle((|| {
        certify_excluded(m, field)?;
        let dual = m.dual();
        if !exact(is_excluded_minor(&dual, field))? {
            return Ok(Outcome::fail(json!({ "move": "dual" })));
        }
        for (from, start) in [("M", m), ("M*", &dual)] {
            for (kind, t, after) in exchange_moves(start) {
                if !exact(is_excluded_minor(&after, field))? {
                    return Ok(Outcome::fail(json!({ "from": from, "kind": kind, "triple": t })));
                }
            }
        }
        Ok(Outcome::Pass)
    })())
}
