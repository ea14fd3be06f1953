//! Checkers stated relative to a delete pair `{a, b}` with a companion
//! matrix, and the hypothesis chain they share.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use serde_json::json;

use super::{exact, need, settle, Mode, Outcome, Step};
use crate::bits::{combinations, size};
use crate::connectivity::{is_3connected, is_3connected_up_to_parallel_classes};
use crate::fragility::{
    gadget_classify, incriminating_alternatives, is_bolstered_basis, Context, Decision, Gadget, GadgetOutcome, GadgetType,
};
use crate::matroid::{canonical_form, has_minor_of_any, is_isomorphic, uniform, ElementClassification, Matroid};
use crate::pfield::PartialField;
use crate::pmatrix::is_excluded_minor;
use crate::structure::exchange_moves;
use crate::Label;

/// Members of the exchange class explored before giving up.
const CLASS_CAP: usize = 64;

/// Minors examined when searching for a fragile minor with three essential
/// elements.
const MINOR_SEARCH_CAP: usize = 200_000;

/// Known non-binary 3-connected strong stabilizers: `U_{2,4}` for GF(3)
/// and GF(4).
pub fn strong_stabilizer_known(field: &PartialField, n: &Matroid) -> bool {
    matches!(field.name().as_str(), "gf3" | "gf4") && is_isomorphic(n, &uniform(2, 4).expect("valid")).is_some()
}

fn is_triangle_triad(m: &Matroid, s: u32) -> bool {
    size(s) == 3 && m.is_circuit(s) && m.is_cocircuit(s)
}

fn fragile_or_absent(m: &Matroid, targets: &[Matroid]) -> (bool, ElementClassification) {
    let has = has_minor_of_any(m, targets);
    let cls = ElementClassification::compute(m, targets);
    (has, cls)
}

/// Evaluates the context statements. Hypotheses shared between statements
/// are computed once.
pub struct ContextChecker<'a> {
    ctx: &'a Context,
    mode: Mode,
    budget: u64,
    standing: OnceLock<Step<()>>,
    classification: OnceLock<ElementClassification>,
    bolstered: OnceLock<Step<()>>,
    gadget: OnceLock<Step<Gadget>>,
}

impl<'a> ContextChecker<'a> {
    pub fn new(ctx: &'a Context, mode: Mode, budget: u64) -> Self {
        ContextChecker {
            ctx,
            mode,
            budget,
            standing: OnceLock::new(),
            classification: OnceLock::new(),
            bolstered: OnceLock::new(),
            gadget: OnceLock::new(),
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    fn targets(&self) -> &[Matroid] {
        std::slice::from_ref(&self.ctx.n)
    }

    /// Excluded minor, stabilizer, companion incrimination, and `M\a,b`
    /// 3-connected with an `N`-minor.
    fn standing(&self) -> Step<()> {
        self.standing
            .get_or_init(|| {
                let ctx = self.ctx;
                if self.mode != Mode::StructureRelaxed {
                    need(exact(is_excluded_minor(&ctx.matroid, ctx.field()))?, "excluded_minor")?;
                    need(strong_stabilizer_known(ctx.field(), &ctx.n), "strong_stabilizer")?;
                }
                need(exact(ctx.is_companion())?, "companion_matrix")?;
                need(exact(ctx.quad_incriminates())?, "quad_incriminates")?;
                let md = ctx.deleted();
                need(is_3connected(&md), "deletion_3_connected")?;
                need(has_minor_of_any(&md, self.targets()), "deletion_has_minor")
            })
            .clone()
    }

    fn size_bound(&self, extra: usize) -> Step<()> {
        if self.mode != Mode::Normative {
            return Ok(());
        }
        need(self.ctx.matroid.len() >= self.ctx.n.len() + extra, &format!("size_at_least_n_plus_{extra}"))
    }

    fn triad_free(&self) -> Step<()> {
        need(self.ctx.matroid.triad_masks().is_empty(), "no_triads")
    }

    fn classification(&self) -> &ElementClassification {
        self.classification.get_or_init(|| ElementClassification::compute(&self.ctx.deleted(), self.targets()))
    }

    fn not_fragile(&self) -> Step<()> {
        need(!self.classification().has_no_flexible(), "not_fragile")
    }

    fn bolstered(&self) -> Step<()> {
        self.bolstered
            .get_or_init(|| match exact(is_bolstered_basis(self.ctx, self.budget))? {
                Decision::True => Ok(()),
                Decision::False { witness } => {
                    Err(Outcome::HypothesesUnmet { clause: "bolstered_basis".into(), detail: Some(witness) })
                }
                Decision::Undecided { reason } => Err(Outcome::Undecided { reason }),
            })
            .clone()
    }

    /// Not fragile, bolstered basis, and the gadget conditions: strong `u`,
    /// unique triad, cocircuit, triangle and flexible-set shape.
    fn gadget(&self) -> Step<Gadget> {
        self.not_fragile()?;
        self.bolstered()?;
        self.gadget
            .get_or_init(|| match exact(gadget_classify(self.ctx))? {
                GadgetOutcome::Gadget(g) => Ok(g),
                GadgetOutcome::Fragile => Err(Outcome::unmet("not_fragile")),
                GadgetOutcome::HypothesesUnmet { clause, detail } => {
                    Err(Outcome::HypothesesUnmet { clause, detail: Some(detail) })
                }
            })
            .clone()
    }

    /// The delete pair as `(blocker, other)`.
    fn blocking_pair(&self, g: &Gadget) -> (Label, Label) {
        let ctx = self.ctx;
        if g.blocker == ctx.a {
            (ctx.a, ctx.b)
        } else {
            (ctx.b, ctx.a)
        }
    }

    fn size_at_most(&self, extra: usize) -> Outcome {
        let (e, n) = (self.ctx.matroid.len(), self.ctx.n.len());
        if e <= n + extra {
            Outcome::Pass
        } else {
            Outcome::fail(json!({ "size": e, "minor_size": n }))
        }
    }

    /// A strong `v ∈ B* - {a, b}` of `M\a,b` lies in a triad `T*` of
    /// `M\a,b` with `∅ ≠ T* ∩ B ⊆ {x, y}`, and `(T* - v) ∪ e` is a
    /// triangle-triad of `M\f,v` for some `{e, f} = {a, b}`.
    pub fn strong_element_triad(&self, v: Label) -> Outcome {
        settle((|| {
            let ctx = self.ctx;
            self.standing()?;
            self.size_bound(10)?;
            need(!ctx.basis.contains(&v) && v != ctx.a && v != ctx.b && ctx.matroid.index_of(v).is_ok(), "v_outside_basis")?;
            need(exact(ctx.strong())?.contains(&v), "v_strong")?;
            let m = &ctx.matroid;
            let md = ctx.deleted();
            let bm = exact(md.mask_of(&ctx.basis))?;
            let xy = exact(md.mask_of(&[ctx.x, ctx.y]))?;
            let vm = exact(md.mask_of(&[v]))?;
            for t in md.triad_masks().into_iter().filter(|t| t & vm != 0) {
                let tb = t & bm;
                if tb == 0 || tb & !xy != 0 {
                    continue;
                }
                let rest = md.labels_of(t & !vm);
                for (e, f) in [(ctx.a, ctx.b), (ctx.b, ctx.a)] {
                    let mf = exact(m.delete_labels(&[f, v]))?;
                    let s = exact(mf.mask_of(&[rest[0], rest[1], e]))?;
                    if is_triangle_triad(&mf, s) {
                        return Ok(Outcome::Pass);
                    }
                }
            }
            Ok(Outcome::fail(json!({ "v": v })))
        })())
    }

    /// If `{a, b} ⊆ cl({x, y})` then `|E(M)| ≤ |E(N)| + 8`.
    pub fn pair_in_closure_bound(&self) -> Outcome {
        settle((|| {
            let ctx = self.ctx;
            self.standing()?;
            self.gadget()?;
            let m = &ctx.matroid;
            let cl = m.closure(exact(m.mask_of(&[ctx.x, ctx.y]))?);
            need(cl & exact(m.mask_of(&[ctx.a, ctx.b]))? == exact(m.mask_of(&[ctx.a, ctx.b]))?, "pair_in_closure")?;
            Ok(self.size_at_most(8))
        })())
    }

    /// If `p ∈ (B - {x, y}) ∩ cl({u, x, y})` and `{a, b} ⊆ cl({p, x, y})`
    /// then `|E(M)| ≤ |E(N)| + 8`.
    pub fn pair_in_extended_closure_bound(&self, p: Label) -> Outcome {
        settle((|| {
            let ctx = self.ctx;
            self.standing()?;
            let g = self.gadget()?;
            let m = &ctx.matroid;
            need(ctx.basis.contains(&p) && p != ctx.x && p != ctx.y, "p_in_basis")?;
            let pm = exact(m.mask_of(&[p]))?;
            need(m.closure(exact(m.mask_of(&[g.u, ctx.x, ctx.y]))?) & pm != 0, "p_in_closure")?;
            let ab = exact(m.mask_of(&[ctx.a, ctx.b]))?;
            need(m.closure(exact(m.mask_of(&[p, ctx.x, ctx.y]))?) & ab == ab, "pair_in_closure")?;
            Ok(self.size_at_most(8))
        })())
    }

    /// With `a` the blocker, `{b, x, y}` is a closed set of `M`.
    pub fn triangle_closed(&self) -> Outcome {
        settle((|| {
            let ctx = self.ctx;
            self.standing()?;
            self.size_bound(10)?;
            let g = self.gadget()?;
            let (_, b) = self.blocking_pair(&g);
            let m = &ctx.matroid;
            let s = exact(m.mask_of(&[b, g.x, g.y]))?;
            let cl = m.closure(s);
            Ok(if cl == s {
                Outcome::Pass
            } else {
                Outcome::fail(json!({ "set": m.labels_of(s), "closure": m.labels_of(cl) }))
            })
        })())
    }

    /// With `a` the blocker, `M\a,e` is 3-connected with an `N`-minor for
    /// each `e ∈ {x, y}`.
    pub fn switched_pair_connected(&self) -> Outcome {
        settle((|| {
            let ctx = self.ctx;
            self.standing()?;
            self.size_bound(10)?;
            let g = self.gadget()?;
            let (a, _) = self.blocking_pair(&g);
            for e in [g.x, g.y] {
                let me = exact(ctx.matroid.delete_labels(&[a, e]))?;
                if !is_3connected(&me) || !has_minor_of_any(&me, self.targets()) {
                    return Ok(Outcome::fail(json!({ "pair": [a, e] })));
                }
            }
            Ok(Outcome::Pass)
        })())
    }

    /// With `a` the blocker: the gadget is Type I, or `M\a,x` is
    /// 3-connected with an `N`-minor, not `N`-fragile, and has a Type I
    /// gadget for the pair `{a, x}`.
    pub fn switch_to_type_one(&self) -> Outcome {
        settle((|| {
            let ctx = self.ctx;
            self.standing()?;
            self.size_bound(10)?;
            let g = self.gadget()?;
            if g.kind == GadgetType::I {
                return Ok(Outcome::Pass);
            }
            let (a, _) = self.blocking_pair(&g);
            let m = &ctx.matroid;
            let mx = exact(m.delete_labels(&[a, g.x]))?;
            let (has, cls) = fragile_or_absent(&mx, self.targets());
            if !is_3connected(&mx) || !has || cls.has_no_flexible() {
                return Ok(Outcome::fail(json!({ "pair": [a, g.x], "violation": "deletion_shape" })));
            }
            let alts = exact(incriminating_alternatives(m, ctx.field(), a, g.x, self.budget))?;
            let mut undecided = None;
            for alt in alts {
                let c2 = exact(Context::new(m.clone(), ctx.n.clone(), a, g.x, alt.basis, alt.matrix, alt.x, alt.y))?;
                let Ok(GadgetOutcome::Gadget(g2)) = gadget_classify(&c2) else { continue };
                if g2.kind != GadgetType::I {
                    continue;
                }
                match exact(is_bolstered_basis(&c2, self.budget))? {
                    Decision::True => return Ok(Outcome::Pass),
                    Decision::Undecided { reason } => undecided = Some(reason),
                    Decision::False { .. } => {}
                }
            }
            Ok(match undecided {
                Some(reason) => Outcome::Undecided { reason },
                None => Outcome::fail(json!({ "pair": [a, g.x], "violation": "no_type_one_gadget" })),
            })
        })())
    }

    /// For a Type I gadget `({x, y}, u)` on a triad-free `M`: every
    /// `b' ∈ B - {x, y}` is `N`-essential in `M\a,b\u` or in `M\a,b/u`.
    pub fn essential_after_gadget(&self) -> Outcome {
        settle((|| {
            let ctx = self.ctx;
            self.standing()?;
            self.triad_free()?;
            self.size_bound(11)?;
            let g = self.gadget()?;
            need(g.kind == GadgetType::I, "type_one")?;
            let md = ctx.deleted();
            let del = ElementClassification::compute(&exact(md.delete_labels(&[g.u]))?, self.targets());
            let con = ElementClassification::compute(&exact(md.contract_labels(&[g.u]))?, self.targets());
            for &e in ctx.basis.iter().filter(|&&e| e != g.x && e != g.y) {
                let essential = |c: &ElementClassification| c.get(e).is_some_and(|s| s.essential());
                if !essential(&del) && !essential(&con) {
                    return Ok(Outcome::fail(json!({ "element": e, "u": g.u })));
                }
            }
            Ok(Outcome::Pass)
        })())
    }

    /// For a Type I gadget with `M\a,b\u/x` having an `N`-minor but not
    /// `N`-fragile: `M\a,b\u/x/y` or `M\a,b\u/x\y` is 3-connected and
    /// `N`-fragile. Both orientations of `{x, y}` are evaluated.
    pub fn fragile_connected_minor(&self) -> Outcome {
        settle((|| {
            let ctx = self.ctx;
            self.standing()?;
            self.size_bound(10)?;
            let g = self.gadget()?;
            need(g.kind == GadgetType::I, "type_one")?;
            let base = exact(ctx.deleted().delete_labels(&[g.u]))?;
            let mut checked = false;
            for (p, q) in [(g.x, g.y), (g.y, g.x)] {
                let m0 = exact(base.contract_labels(&[p]))?;
                let (has, cls) = fragile_or_absent(&m0, self.targets());
                if !has || cls.has_no_flexible() {
                    continue;
                }
                checked = true;
                let ok = [exact(m0.contract_labels(&[q]))?, exact(m0.delete_labels(&[q]))?].iter().any(|m1| {
                    is_3connected(m1) && has_minor_of_any(m1, self.targets()) && ElementClassification::compute(m1, self.targets()).has_no_flexible()
                });
                if !ok {
                    return Ok(Outcome::fail(json!({ "contracted": p, "other": q, "u": g.u })));
                }
            }
            need(checked, "minor_not_fragile")?;
            Ok(Outcome::Pass)
        })())
    }

    /// On a triad-free `M` of rank at least 7: some minor `M/C\D` with
    /// `|C| + |D| ≤ 5` is `N`-fragile, has at least three `N`-essential
    /// elements and is 3-connected up to parallel classes.
    pub fn three_essential_minor(&self) -> Outcome {
        settle((|| {
            let ctx = self.ctx;
            self.standing()?;
            self.triad_free()?;
            self.size_bound(11)?;
            self.not_fragile()?;
            let m = &ctx.matroid;
            if m.rank() <= 6 {
                return Ok(Outcome::Pass);
            }
            let mut seen = 0usize;
            for k in 0..=5 {
                for removed in combinations(m.full_mask(), k) {
                    for con in subsets(removed) {
                        seen += 1;
                        if seen > MINOR_SEARCH_CAP {
                            return Ok(Outcome::Undecided { reason: format!("examined {MINOR_SEARCH_CAP} minors") });
                        }
                        let m1 = m.minor(con, removed & !con);
                        if !has_minor_of_any(&m1, self.targets()) {
                            continue;
                        }
                        let cls = ElementClassification::compute(&m1, self.targets());
                        if cls.has_no_flexible() && cls.essential().len() >= 3 && is_3connected_up_to_parallel_classes(&m1) {
                            return Ok(Outcome::Pass);
                        }
                    }
                }
            }
            Ok(Outcome::fail(json!({ "rank": m.rank() })))
        })())
    }
}

fn subsets(mask: u32) -> impl Iterator<Item = u32> {
    let mut next = Some(0u32);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == mask { None } else { Some(((cur | !mask).wrapping_add(1)) & mask) };
        Some(cur)
    })
}

/// Closure of `{m, m*}` under single exchanges, up to isomorphism. The flag
/// is false when the cap was reached first.
fn exchange_class(m: &Matroid) -> (Vec<Matroid>, bool) {
    let mut forms = BTreeSet::new();
    let mut out = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    for start in [m.clone(), m.dual()] {
        if forms.insert(canonical_form(&start)) {
            queue.push_back(start.clone());
            out.push(start);
        }
    }
    while let Some(cur) = queue.pop_front() {
        for (_, _, next) in exchange_moves(&cur) {
            if forms.insert(canonical_form(&next)) {
                if out.len() == CLASS_CAP {
                    return (out, false);
                }
                queue.push_back(next.clone());
                out.push(next);
            }
        }
    }
    (out, true)
}

/// For an excluded minor `M` with `|E(M)| ≥ |E(N)| + 10`: some member of
/// the exchange class of `M` has no triads and a pair `{a, b}` with
/// `M_1\a,b` 3-connected with a minor in the exchange class of `N`.
pub fn triad_free_equivalent(m: &Matroid, n: &Matroid, field: &PartialField, mode: Mode) -> Outcome {
    settle((|| {
        if mode != Mode::StructureRelaxed {
            need(exact(is_excluded_minor(m, field))?, "excluded_minor")?;
            need(strong_stabilizer_known(field, n), "strong_stabilizer")?;
        }
        need(has_minor_of_any(m, std::slice::from_ref(n)), "has_minor")?;
        if mode == Mode::Normative {
            need(m.len() >= n.len() + 10, "size_at_least_n_plus_10")?;
        }
        let (targets, _) = exchange_class(n);
        let (class, complete) = exchange_class(m);
        for m1 in class.iter().filter(|c| c.triad_masks().is_empty()) {
            for pair in combinations(m1.full_mask(), 2) {
                let md = m1.delete(pair);
                if is_3connected(&md) && has_minor_of_any(&md, &targets) {
                    return Ok(Outcome::Pass);
                }
            }
        }
        Ok(if complete {
            Outcome::fail(json!({ "class_size": class.len(), "triad_free": class.iter().filter(|c| c.triad_masks().is_empty()).count() }))
        } else {
            Outcome::Undecided { reason: format!("exchange class exceeds {CLASS_CAP} members") }
        })
    })())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_enumerates_all() {
        let v: Vec<u32> = subsets(0b1010).collect();
        assert_eq!(v, vec![0, 0b10, 0b1000, 0b1010]);
        assert_eq!(subsets(0).count(), 1);
    }
}
