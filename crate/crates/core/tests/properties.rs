//! Property-based invariants over random matrices and matroids.

mod common;

use std::sync::OnceLock;

use common::{family, sorted, Family};
use matroid_kit::connectivity::lambda;
use matroid_kit::fragility::{classify_elements, incriminating_alternatives, robust_elements, Alternative};
use matroid_kit::matroid::{canonical_form, fano, uniform};
use matroid_kit::pmatrix::{allowable_pivot, incriminates, incrimination_status, IncriminationStatus, Quad};
use matroid_kit::verify::random_instances;
use matroid_kit::{Label, Matroid, PMatrix, PartialField, RingValue};
use proptest::prelude::*;

fn matrix(q: u8, r: usize, c: usize, entries: &[i64]) -> PMatrix {
    let rows: Vec<Label> = (1..=r as Label).collect();
    let cols: Vec<Label> = (r as Label + 1..=(r + c) as Label).collect();
    let a: Vec<Vec<i64>> = entries.chunks(c).take(r).map(|ch| ch.to_vec()).collect();
    PMatrix::from_ints(PartialField::gf(q).unwrap(), rows, cols, &a).unwrap()
}

fn gf_matrix() -> impl Strategy<Value = PMatrix> {
    (prop_oneof![Just(2u8), Just(3u8), Just(4u8), Just(5u8)], 1usize..=4, 1usize..=4)
        .prop_flat_map(|(q, r, c)| (Just(q), Just(r), Just(c), prop::collection::vec(0..q as i64, r * c)))
        .prop_map(|(q, r, c, e)| matrix(q, r, c, &e))
}

fn random_matroid() -> impl Strategy<Value = Matroid> {
    any::<u64>().prop_map(|seed| random_instances(seed, 1, 8).pop().unwrap().1)
}

fn mask_pair(n: usize) -> impl Strategy<Value = (u32, u32)> {
    (0u32..1 << n, 0u32..1 << n)
}

fn nonzero_positions(a: &PMatrix) -> Vec<(Label, Label)> {
    let mut out = Vec::new();
    for &x in a.rows() {
        for &y in a.cols() {
            if !a.is_zero_at(x, y).unwrap() {
                out.push((x, y));
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn pivoting_preserves_the_matroid(a in gf_matrix(), pick in any::<prop::sample::Index>()) {
        let spots = nonzero_positions(&a);
        prop_assume!(!spots.is_empty());
        let (x, y) = spots[pick.index(spots.len())];
        let p = a.pivot(x, y).unwrap();
        prop_assert_eq!(family(&a.matroid().unwrap()), family(&p.matroid().unwrap()));
        let back = p.pivot(y, x).unwrap();
        prop_assert!(back.scaling_equivalent(&a).unwrap());
    }

    #[test]
    fn determinant_is_multiplicative(q in prop_oneof![Just(3u8), Just(4u8), Just(7u8), Just(8u8)],
                                     e1 in prop::collection::vec(0i64..9, 9), e2 in prop::collection::vec(0i64..9, 9)) {
        let f = PartialField::gf(q).unwrap();
        let to = |e: &[i64]| -> Vec<Vec<RingValue>> {
            e.chunks(3).map(|ch| ch.iter().map(|&v| f.from_int(v % q as i64)).collect()).collect()
        };
        let (a, b) = (to(&e1), to(&e2));
        let mut ab = vec![vec![f.zero(); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    ab[i][j] = f.add(&ab[i][j], &f.mul(&a[i][k], &b[k][j]));
                }
            }
        }
        let prod = f.mul(&f.det(&a).unwrap(), &f.det(&b).unwrap());
        prop_assert_eq!(f.det(&ab).unwrap(), prod);
    }

    #[test]
    fn duality_is_an_involution(m in random_matroid()) {
        prop_assert_eq!(family(&m.dual().dual()), family(&m));
        prop_assert_eq!(m.dual().rank(), m.len() - m.rank());
    }

    #[test]
    fn connectivity_function_laws(m in random_matroid(), (x, y) in mask_pair(8)) {
        let full = m.full_mask();
        let (x, y) = (x & full, y & full);
        let d = m.dual();
        prop_assert_eq!(lambda(&m, x), lambda(&m, full & !x));
        prop_assert_eq!(lambda(&m, x), lambda(&d, x));
        prop_assert!(lambda(&m, x) + lambda(&m, y) >= lambda(&m, x & y) + lambda(&m, x | y));
    }

    #[test]
    fn deletion_and_contraction_commute(m in random_matroid(), (c, d) in mask_pair(8)) {
        let full = m.full_mask();
        let c = c & full;
        let d = d & full & !c;
        let a = m.contract_labels(&m.labels_of(c)).unwrap().delete_labels(&m.labels_of(d)).unwrap();
        let b = m.delete_labels(&m.labels_of(d)).unwrap().contract_labels(&m.labels_of(c)).unwrap();
        prop_assert_eq!(family(&a), family(&b));
        prop_assert_eq!(family(&m.delete(d).dual()), family(&m.dual().contract(d)));
    }

    #[test]
    fn canonical_form_ignores_labels(m in random_matroid(), shift in 1u32..50) {
        let moved = m.relabel(|l| 100 - l * 3 + shift).unwrap();
        prop_assert_eq!(canonical_form(&m), canonical_form(&moved));
    }

    #[test]
    fn incrimination_is_either_or(seed in any::<u64>(), entries in prop::collection::vec(0i64..3, 64)) {
        let m = random_instances(seed, 1, 8).pop().unwrap().1;
        let relabelled: Vec<(Label, Label)> = m.ground().iter().copied().zip(1..).collect();
        let m = m.relabel_pairs(&relabelled).unwrap();
        let (r, c) = (m.rank(), m.len() - m.rank());
        let a = matrix(3, r, c, &entries);
        match incrimination_status(&m, &a).unwrap() {
            IncriminationStatus::Represents => {
                prop_assert!(a.is_p_matrix().unwrap());
                prop_assert_eq!(family(&a.matroid().unwrap()), family(&m));
            }
            IncriminationStatus::Incriminated(w) => {
                prop_assert_ne!(family(&a.matroid().unwrap()), family(&m));
                if m.is_basis(m.mask_of(a.rows()).unwrap()) {
                    prop_assert_eq!(incriminates(&m, &a, &w.z).unwrap().map(|v| v.condition), Some(w.condition));
                }
            }
        }
    }

    #[test]
    fn flexible_elements_are_robust(seed in any::<u64>()) {
        let m = random_instances(seed, 1, 7).pop().unwrap().1;
        let n = uniform(2, 4).unwrap();
        let Ok(cls) = classify_elements(&m, std::slice::from_ref(&n)) else { return Ok(()) };
        for b in m.bases() {
            let robust = robust_elements(&m, &n, &b).unwrap();
            for e in cls.flexible() {
                prop_assert!(robust.contains(&e));
            }
        }
        prop_assert!(cls.essential().len() <= n.len());
    }

    #[test]
    fn pivot_lemmas_hold_on_excluded_minor_contexts(pick in any::<prop::sample::Index>(), spot in any::<prop::sample::Index>()) {
        let contexts = excluded_contexts();
        let (m, alt) = &contexts[pick.index(contexts.len())];
        let quad = Quad { x: alt.x, y: alt.y, a: alt.a, b: alt.b };
        let a = &alt.alt.matrix;
        let spots: Vec<(Label, Label)> = nonzero_positions(a).into_iter().filter(|&(p, q)| {
            let zero = |r: Label, c: Label| a.is_zero_at(r, c).unwrap();
            let off_ab = q != quad.a && q != quad.b;
            let on_xy = p == quad.x || p == quad.y;
            off_ab && (on_xy || (zero(p, quad.a) && zero(p, quad.b)) || (zero(quad.x, q) && zero(quad.y, q)))
        }).collect();
        prop_assume!(!spots.is_empty());
        let (p, q) = spots[spot.index(spots.len())];
        prop_assert!(allowable_pivot(m, a, &quad, p, q).unwrap());
    }
}

struct Placed {
    alt: Alternative,
    x: Label,
    y: Label,
    a: Label,
    b: Label,
}

fn excluded_contexts() -> &'static Vec<(Matroid, Placed)> {
    static CELL: OnceLock<Vec<(Matroid, Placed)>> = OnceLock::new();
    CELL.get_or_init(|| {
        let gf3 = PartialField::gf(3).unwrap();
        let mut out = Vec::new();
        for m in [uniform(2, 5).unwrap(), uniform(3, 5).unwrap(), fano()] {
            let g = m.ground().to_vec();
            for (i, &a) in g.iter().enumerate() {
                for &b in &g[i + 1..] {
                    for alt in incriminating_alternatives(&m, &gf3, a, b, 1_000_000).unwrap() {
                        let (x, y) = (alt.x, alt.y);
                        out.push((m.clone(), Placed { alt, x, y, a, b }));
                    }
                }
            }
        }
        assert!(!out.is_empty());
        out
    })
}

#[test]
fn contexts_cover_both_lemmas() {
    let contexts = excluded_contexts();
    let with_outside_rows = contexts.iter().filter(|(m, _)| m.rank() >= 3).count();
    assert!(with_outside_rows > 0);
    let bases: Family = contexts.iter().map(|(_, p)| sorted(p.alt.basis.clone())).collect();
    assert!(bases.len() > 1);
}
