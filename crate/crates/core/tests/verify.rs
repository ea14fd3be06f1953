//! Statement checkers on hand-built instances, with conclusions re-checked
//! through the oracles in `common`.

mod common;

use common::*;
use matroid_kit::connectivity::{is_path_of_kseps, vertical_3seps};
use matroid_kit::fragility::{
    companion_matrices, gadget_classify, mega_gadget_check, Context, GadgetOutcome, GadgetType, DEFAULT_QUANTIFIER_BUDGET,
};
use matroid_kit::io::parse_context;
use matroid_kit::matroid::{fano, mk4, uniform};
use matroid_kit::structure::gen_parallel_connection_mk4;
use matroid_kit::verify::*;
use matroid_kit::{Label, Matroid, PartialField};

/// Two copies of M(K4) glued along a triangle: M(K5 minus an edge).
fn k5_minus_edge() -> Matroid {
    gen_parallel_connection_mk4(&mk4(), [1, 2, 4], [7, 8, 9]).unwrap()
}

fn gf(q: u8) -> PartialField {
    PartialField::gf(q).unwrap()
}

#[test]
fn guts_and_coguts() {
    assert!(guts_coguts(&uniform(2, 4).unwrap()).is_pass());
    assert!(guts_coguts(&mk4()).is_pass());
    assert!(guts_coguts(&k5_minus_edge()).is_pass());
    let two = uniform(1, 2).unwrap().direct_sum(&uniform(1, 2).unwrap().relabel(|l| l + 2).unwrap()).unwrap();
    assert_eq!(guts_coguts(&two).clause(), Some("three_connected"));
}

#[test]
fn two_separation_side() {
    let u24 = uniform(2, 4).unwrap();
    let m = u24.direct_sum(&uniform(1, 2).unwrap().relabel(|l| l + 4).unwrap()).unwrap();
    assert!(two_separation_minor_side(&m, &u24, &[5, 6]).is_pass());
    assert!(two_separation_minor_side(&m, &u24, &[1, 2, 3, 4]).is_pass());
    assert_eq!(two_separation_minor_side(&uniform(2, 5).unwrap(), &u24, &[1, 2]).clause(), Some("two_separation"));
    assert_eq!(two_separation_minor_side(&m, &mk4(), &[5, 6]).clause(), Some("has_minor"));
    let not3 = uniform(1, 2).unwrap().direct_sum(&uniform(1, 2).unwrap().relabel(|l| l + 2).unwrap()).unwrap();
    assert_eq!(two_separation_minor_side(&m, &not3, &[5, 6]).clause(), Some("minor_3_connected"));
}

#[test]
fn recorded_vertical_separation() {
    let m = k5_minus_edge();
    assert_eq!((m.len(), m.rank()), (9, 4));
    assert!(three_connected(&m));
    let (g, f) = (m.ground().to_vec(), family(&m));
    let vertical = |x: &[Label]| {
        let y: Vec<Label> = g.iter().copied().filter(|e| !x.contains(e)).collect();
        x.len() >= 3 && y.len() >= 3 && lambda(&f, &g, x) < 3 && rank(&f, x) >= 3 && rank(&f, &y) >= 3
    };
    let mut want = Vec::new();
    for &z in &g {
        let rest: Vec<Label> = g.iter().copied().filter(|&e| e != z).collect();
        for x in all_subsets(&rest) {
            let y: Vec<Label> = rest.iter().copied().filter(|e| !x.contains(e)).collect();
            if x.is_empty() || y.is_empty() || !x.contains(&rest[0]) {
                continue;
            }
            let mut xz = x.clone();
            xz.push(z);
            let guts = in_closure(&m, &x, z) && in_closure(&m, &y, z);
            if vertical(&xz) && vertical(&x) && guts {
                want.push((sorted(x), z));
            }
        }
    }
    want.sort();
    let mut got: Vec<(Vec<Label>, Label)> = vertical_3seps(&m).into_iter().map(|v| (v.x, v.z)).collect();
    got.sort();
    let mut normalized: Vec<(Vec<Label>, Label)> = got
        .iter()
        .map(|(x, z)| {
            let rest: Vec<Label> = g.iter().copied().filter(|e| e != z).collect();
            if x.contains(&rest[0]) {
                (x.clone(), *z)
            } else {
                (rest.iter().copied().filter(|e| !x.contains(e)).collect(), *z)
            }
        })
        .collect();
    normalized.sort();
    normalized.dedup();
    assert_eq!(normalized, want);
    assert_eq!(want.len(), 12);

    let v = &vertical_3seps(&m)[0];
    let cells = vec![v.x.clone(), vec![v.z], v.y.clone()];
    assert!(is_path_of_kseps(&m, &cells, 3).unwrap());
    // si(M/z) is M(K4) minus an edge here, so a triangle is the largest
    // 3-connected target available
    let mz = m.contract_labels(&[v.z]).unwrap();
    assert!(!brute_has_minor(&mz, &mk4()));
    assert_eq!(vertical_separation_cleanup(&m, &mk4(), &v.x, v.z).clause(), Some("contraction_has_minor"));
    let triangle = uniform(2, 3).unwrap();
    assert!(vertical_separation_cleanup(&m, &triangle, &v.x, v.z).is_pass());
    for t in triangles_of(&mz) {
        let placed = want.iter().filter(|(_, z)| *z == v.z).any(|(x, _)| {
            let y: Vec<Label> = g.iter().copied().filter(|e| !x.contains(e) && *e != v.z).collect();
            [x.clone(), y].iter().any(|side| {
                let other: Vec<Label> = g.iter().copied().filter(|e| !side.contains(e)).collect();
                side.iter().filter(|e| t.contains(e)).count() <= 1 && sorted(closure(&f, &g, &other)) == sorted(other.clone())
            })
        });
        assert!(placed, "{t:?}");
    }
    assert_eq!(vertical_separation_cleanup(&uniform(2, 5).unwrap(), &uniform(2, 4).unwrap(), &[1, 2], 3).clause(), Some("vertical_separation"));
    assert_eq!(vertical_separation_cleanup(&m, &fano(), &v.x, v.z).clause(), Some("contraction_has_minor"));
}

#[test]
fn fragile_matroids_are_nearly_3_connected() {
    let u24 = uniform(2, 4).unwrap();
    assert!(fragile_connectivity(&uniform(2, 5).unwrap(), std::slice::from_ref(&u24)).is_pass());
    assert_eq!(fragile_connectivity(&uniform(3, 6).unwrap(), std::slice::from_ref(&u24)).clause(), Some("fragile"));
    assert_eq!(fragile_connectivity(&uniform(2, 5).unwrap(), &[]).clause(), Some("targets_nonempty"));
    assert_eq!(fragile_connectivity(&mk4(), std::slice::from_ref(&u24)).clause(), Some("has_minor"));
    // U_{2,4} with 4 replaced by a series pair {4, 5}
    let parallel: Vec<Vec<Label>> = subsets_of_size(&[1, 2, 3, 4, 5], 2).into_iter().filter(|b| b != &vec![4, 5]).collect();
    let series = Matroid::from_bases(&[1, 2, 3, 4, 5], &parallel).unwrap().dual();
    assert!(!three_connected(&series));
    assert_eq!(essential_elements(&series, &u24), vec![1, 2, 3]);
    assert!(flexible_elements(&series, &u24).is_empty());
    assert!(fragile_connectivity(&series, std::slice::from_ref(&u24)).is_pass());
}

#[test]
fn delta_wye_connectivity_on_k4() {
    let m = mk4();
    for t in m.triangles() {
        let t: [Label; 3] = t.try_into().unwrap();
        assert!(delta_wye_connectivity(&m, t).is_pass(), "{t:?}");
    }
    assert_eq!(delta_wye_connectivity(&m, [1, 2, 3]).clause(), Some("triangle"));
    let u36 = uniform(3, 6).unwrap();
    assert_eq!(delta_wye_connectivity(&u36, [1, 2, 3]).clause(), Some("triangle"));
}

#[test]
fn excluded_minors_and_fans() {
    let u24 = uniform(2, 4).unwrap();
    assert_eq!(excluded_minor_no_four_fans(&u24, &gf(2)).clause(), Some("more_than_four_elements"));
    assert!(excluded_minor_no_four_fans(&uniform(2, 5).unwrap(), &gf(3)).is_pass());
    assert!(excluded_minor_no_four_fans(&fano(), &gf(3)).is_pass());
    assert_eq!(excluded_minor_no_four_fans(&fano(), &gf(2)).clause(), Some("excluded_minor"));
    assert!(exchange_preserves_excluded(&fano(), &gf(3)).is_pass());
    assert!(exchange_preserves_excluded(&uniform(2, 5).unwrap(), &gf(3)).is_pass());
    assert_eq!(exchange_preserves_excluded(&mk4(), &gf(3)).clause(), Some("excluded_minor"));
}

#[test]
fn equivalence_class_statement() {
    let u24 = uniform(2, 4).unwrap();
    let u25 = uniform(2, 5).unwrap();
    let out = triad_free_equivalent(&u25, &u24, &gf(3), Mode::Normative);
    assert_eq!(out.clause(), Some("size_at_least_n_plus_10"));
    assert_eq!(triad_free_equivalent(&u25, &u24, &gf(5), Mode::Normative).clause(), Some("excluded_minor"));
    assert_eq!(triad_free_equivalent(&fano(), &u24, &gf(3), Mode::Normative).clause(), Some("has_minor"));
}

#[test]
fn planted_context_in_every_mode() {
    let ctx = parse_context(PLANTED).unwrap();
    let normative = ContextChecker::new(&ctx, Mode::Normative, DEFAULT_QUANTIFIER_BUDGET);
    assert_eq!(normative.triangle_closed().clause(), Some("excluded_minor"));

    let relaxed = ContextChecker::new(&ctx, Mode::StructureRelaxed, DEFAULT_QUANTIFIER_BUDGET);
    let m = &ctx.matroid;
    let n = &ctx.n;
    let md = ctx.deleted();

    // standing hypotheses, by oracle
    assert!(three_connected(&md));
    assert!(brute_has_minor(&md, n));
    assert!(!flexible_elements(&md, n).is_empty());

    assert!(relaxed.triangle_closed().is_pass());
    let (a, b) = (3, 1);
    assert_eq!(sorted(closure(&family(m), m.ground(), &[b, 2, 7])), vec![1, 2, 7]);

    assert!(relaxed.switched_pair_connected().is_pass());
    for e in [2, 7] {
        let me = m.delete_labels(&[a, e]).unwrap();
        assert!(three_connected(&me) && brute_has_minor(&me, n));
    }

    assert!(relaxed.switch_to_type_one().is_pass());

    assert!(m.triad_masks().is_empty() && triads_of(m).is_empty());
    assert!(relaxed.essential_after_gadget().is_pass());
    let del = md.delete_labels(&[5]).unwrap();
    let con = md.contract_labels(&[5]).unwrap();
    let (ed, ec) = (essential_elements(&del, n), essential_elements(&con, n));
    for e in [8, 9] {
        assert!(ed.contains(&e) || ec.contains(&e), "{e}");
    }

    let strong = strong_elements(&md, n, &ctx.basis);
    assert_eq!(strong, vec![2, 5, 7]);
    for v in [5] {
        assert!(relaxed.strong_element_triad(v).is_pass());
    }
    assert_eq!(relaxed.strong_element_triad(6).clause(), Some("v_strong"));
    assert_eq!(relaxed.strong_element_triad(8).clause(), Some("v_outside_basis"));

    assert!(relaxed.three_essential_minor().is_pass());
    assert_eq!(relaxed.pair_in_closure_bound().clause(), Some("pair_in_closure"));
    assert!(!in_closure(m, &[2, 7], a));

    let size_relaxed = ContextChecker::new(&ctx, Mode::SizeRelaxed, DEFAULT_QUANTIFIER_BUDGET);
    assert_eq!(size_relaxed.triangle_closed().clause(), Some("excluded_minor"));
}

#[test]
fn planted_gadget_invariants_by_oracle() {
    let ctx = parse_context(PLANTED).unwrap();
    let GadgetOutcome::Gadget(g) = gadget_classify(&ctx).unwrap() else { panic!("no gadget") };
    assert_eq!(g.kind, GadgetType::I);
    assert_eq!((g.x, g.y, g.u, g.blocker, g.fully_blocks), (2, 7, 5, 3, true));
    let m = &ctx.matroid;
    let md = ctx.deleted();
    let through_u: Vec<Vec<Label>> = triads_of(&md).into_iter().filter(|t| t.contains(&5)).collect();
    assert_eq!(through_u, vec![vec![2, 5, 7]]);
    assert!(is_cocircuit(m, &[1, 2, 3, 5, 7]));
    assert!(triangles_of(m).contains(&vec![1, 2, 7]));
    assert!(in_closure(m, &[2, 7], 1));
    assert!(in_coclosure(m, &[2, 7, 5, 1], 3));
    assert!(!in_closure(m, &[2, 7, 5], 3));
    let flexible = flexible_elements(&md, &ctx.n);
    assert!(flexible.iter().all(|e| [2, 5, 7].contains(e)), "{flexible:?}");
    assert!(flexible.contains(&5));
}

#[test]
fn mega_gadget_clauses_on_planted_pairs() {
    let ab = parse_context(PLANTED).unwrap();
    let m = ab.matroid.clone();
    let bb = second_context(&ab).expect("an incriminating context for {3, 6}");
    let (a, b, b2) = (1, 3, 6);
    let u2 = m.ground().iter().copied().find(|e| ![2, 7, 5, a, b, b2].contains(e)).unwrap();
    let report = mega_gadget_check(&ab, &bb, [2, 7, 5, u2, a, b, b2]).unwrap();
    let clause = |name: &str| report.clauses.iter().find(|c| c.name == name).unwrap().holds;
    assert!(clause("distinct_elements"));
    assert!(clause("first_gadget_type_one"));
    assert_eq!(clause("b_in_closure_xy"), in_closure(&m, &[2, 7], b));
    // the planted gadget is blocked by 3, so with a = 1 this clause fails
    assert!(!clause("a_fully_blocks_first"));
    assert_eq!(clause("b2_in_closure_uy"), in_closure(&m, &[5, 7], b2));
    assert_eq!(report.holds, report.clauses.iter().all(|c| c.holds));
    assert_eq!(report.failing().is_none(), report.holds);

    let repeated = mega_gadget_check(&ab, &bb, [2, 7, 5, 5, a, b, b2]).unwrap();
    assert_eq!(repeated.failing(), Some("distinct_elements"));
    assert!(mega_gadget_check(&bb, &ab, [2, 7, 5, u2, a, b, b2]).is_err());
    let other_n = Context::new(m.clone(), fano(), bb.a, bb.b, bb.basis.clone(), bb.matrix.clone(), bb.x, bb.y).unwrap();
    assert!(mega_gadget_check(&ab, &other_n, [2, 7, 5, u2, a, b, b2]).is_err());
}

/// An incriminating context for the pair `{3, 6}`: `M\3,6` is 3-connected
/// and 6 lies outside the planted gadget.
fn second_context(ab: &Context) -> Option<Context> {
    let m = &ab.matroid;
    assert!(three_connected(&m.delete_labels(&[3, 6]).unwrap()));
    for basis in m.delete_labels(&[3, 6]).unwrap().bases() {
        let Ok(mats) = companion_matrices(m, &gf(7), &basis, 3, 6, DEFAULT_QUANTIFIER_BUDGET) else { continue };
        for mat in mats {
            for xy in subsets_of_size(&basis, 2) {
                let c = Context::new(m.clone(), ab.n.clone(), 3, 6, basis.clone(), mat.clone(), xy[0], xy[1]).unwrap();
                if c.quad_incriminates().unwrap() {
                    return Some(c);
                }
            }
        }
    }
    None
}

#[test]
fn suites() {
    let empty = run_suite(&SuiteConfig::new("lemmas", 4, 0)).unwrap();
    assert!(empty.reports.is_empty());
    let mut cfg = SuiteConfig::new("core", 7, 9);
    cfg.random = 30;
    let r1 = run_suite(&cfg).unwrap();
    let r2 = run_suite(&cfg).unwrap();
    assert_eq!(r1.to_json_lines(), r2.to_json_lines());
    assert!(!r1.has_fail());
    assert_eq!(r1.to_json_lines().lines().count(), r1.reports.len() + 2);
    let first_pass = r1.reports.iter().position(|r| r.outcome.is_pass()).unwrap_or(r1.reports.len());
    assert!(r1.reports[first_pass..].iter().all(|r| r.outcome.is_pass()));
    cfg.seed = 10;
    assert_ne!(run_suite(&cfg).unwrap().to_json_lines(), r1.to_json_lines());
}
