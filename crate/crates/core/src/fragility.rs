//! Fragility, robust and strong elements, confining sets, strengthened and
//! bolstered bases, and gadgets.
//!
//! Most predicates here work on a [`Context`]: an excluded-minor candidate
//! `M`, a target minor `N`, a delete pair `{a, b}`, a basis `B` of `M\a,b`,
//! a `B × B*` matrix `A` and a pair `{x, y} ⊆ B` such that `{x, y, a, b}`
//! incriminates `(M, A)`.

use serde::Serialize;

use crate::bits::{self, bit, bits, size};
use crate::connectivity::is_3connected;
use crate::error::{Error, Result};
use crate::matroid::{has_minor_of_any, ElementClassification, Matroid};
use crate::pfield::{PartialField, RingValue};
use crate::pmatrix::{incriminates, representations_on_basis, PMatrix, Quad};
use crate::structure::{fans, is_fan_ordering};
use crate::Label;

/// Largest ground set for which quantifiers over bases and companion
/// matrices are evaluated.
pub const QUANTIFIER_LIMIT: usize = 10;

/// Default cap on companion matrices examined by a quantifier search.
pub const DEFAULT_QUANTIFIER_BUDGET: u64 = 200_000;

/// Deletable/contractible flags for every element. Fails when `m` has no
/// minor in `targets`.
pub fn classify_elements(m: &Matroid, targets: &[Matroid]) -> Result<ElementClassification> {
    if !has_minor_of_any(m, targets) {
        return Err(Error::Precondition("matroid has no minor isomorphic to a target".into()));
    }
    Ok(ElementClassification::compute(m, targets))
}

/// Has a target minor and no flexible element.
pub fn is_fragile(m: &Matroid, targets: &[Matroid]) -> Result<bool> {
    Ok(classify_elements(m, targets)?.has_no_flexible())
}

fn basis_mask(m: &Matroid, basis: &[Label]) -> Result<u32> {
    let mask = m.mask_of(basis)?;
    if size(mask) != basis.len() || !m.is_basis(mask) {
        return Err(Error::NotABasis(format!("{basis:?}")));
    }
    Ok(mask)
}

/// Elements `e` of the basis with `M/e` having an `N`-minor, and elements
/// outside it with `M\e` having an `N`-minor.
pub fn robust_elements(m: &Matroid, n: &Matroid, basis: &[Label]) -> Result<Vec<Label>> {
    let bm = basis_mask(m, basis)?;
    Ok(m.labels_of(robust_mask(m, n, bm)))
}

fn robust_mask(m: &Matroid, n: &Matroid, bm: u32) -> u32 {
    let targets = std::slice::from_ref(n);
    let mut out = 0;
    for e in bits(m.full_mask()) {
        let minor = if bm & bit(e) != 0 { m.contract(bit(e)) } else { m.delete(bit(e)) };
        if has_minor_of_any(&minor, targets) {
            out |= bit(e);
        }
    }
    out
}

/// Elements `e` of the basis with `si(M/e)` 3-connected with an `N`-minor,
/// and elements outside it with `co(M\e)` 3-connected with an `N`-minor.
pub fn strong_elements(m: &Matroid, n: &Matroid, basis: &[Label]) -> Result<Vec<Label>> {
    let bm = basis_mask(m, basis)?;
    Ok(m.labels_of(strong_mask(m, n, bm)))
}

fn strong_mask(m: &Matroid, n: &Matroid, bm: u32) -> u32 {
    let targets = std::slice::from_ref(n);
    let mut out = 0;
    for e in bits(m.full_mask()) {
        let reduced = if bm & bit(e) != 0 { m.contract(bit(e)).simplify() } else { m.delete(bit(e)).cosimplify() };
        if is_3connected(&reduced) && has_minor_of_any(&reduced, targets) {
            out |= bit(e);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConfiningKind {
    Cosegment,
    TwoTriads,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfiningSet {
    pub elements: Vec<Label>,
    pub kind: ConfiningKind,
    /// `G ∩ B1`.
    pub pair: [Label; 2],
    /// Whether the pair was supplied by the caller as part of an
    /// incriminating quad, rather than accepted unchecked.
    pub pair_verified: bool,
}

/// Looks for a confining set of `m` (playing the role of `M\a,b`) relative
/// to the basis `b1`: a 4-cosegment meeting `b1` in two elements, or a union
/// of two triads sharing one element that meets `b1` in two elements and
/// contains an `(N, B1)`-strong element outside `b1`.
///
/// When `pair` is given, `G ∩ B1` must equal it; otherwise any pair is
/// accepted and the result is flagged as unverified.
pub fn confining_set_find(m: &Matroid, n: &Matroid, b1: &[Label], pair: Option<(Label, Label)>) -> Result<Option<ConfiningSet>> {
    let bm = basis_mask(m, b1)?;
    let want = match pair {
        Some((p, q)) => {
            let w = m.mask_of(&[p, q])?;
            if size(w) != 2 || w & !bm != 0 {
                return Err(Error::Precondition("pair must be two distinct basis elements".into()));
            }
            Some(w)
        }
        None => None,
    };
    let meets = |g: u32| match want {
        Some(w) => g & bm == w,
        None => size(g & bm) == 2,
    };
    let make = |g: u32, kind| {
        let p = m.labels_of(g & bm);
        ConfiningSet { elements: m.labels_of(g), kind, pair: [p[0], p[1]], pair_verified: want.is_some() }
    };
    let triads = m.triad_masks();
    let is_triad = |t: u32| triads.contains(&t);
    for g in bits::combinations(m.full_mask(), 4) {
        if meets(g) && bits(g).all(|e| is_triad(g & !bit(e))) {
            return Ok(Some(make(g, ConfiningKind::Cosegment)));
        }
    }
    let mut unions: Vec<u32> = Vec::new();
    for (i, &t) in triads.iter().enumerate() {
        for &s in &triads[i + 1..] {
            if size(t & s) == 1 {
                unions.push(t | s);
            }
        }
    }
    unions.sort_by_key(|&g| m.labels_of(g));
    unions.dedup();
    let mut strong = None;
    for g in unions {
        if !meets(g) {
            continue;
        }
        let st = *strong.get_or_insert_with(|| strong_mask(m, n, bm));
        if g & !bm & st != 0 {
            return Ok(Some(make(g, ConfiningKind::TwoTriads)));
        }
    }
    Ok(None)
}

/// The data the gadget and basis predicates are stated relative to.
#[derive(Debug, Clone)]
pub struct Context {
    pub matroid: Matroid,
    pub n: Matroid,
    pub a: Label,
    pub b: Label,
    pub basis: Vec<Label>,
    pub matrix: PMatrix,
    pub x: Label,
    pub y: Label,
}

impl Context {
    /// Checks shapes only: `B` is a basis of `M` avoiding `a, b`, the matrix
    /// is `B × (E - B)`, and `x, y ∈ B` are distinct.
    pub fn new(matroid: Matroid, n: Matroid, a: Label, b: Label, basis: Vec<Label>, matrix: PMatrix, x: Label, y: Label) -> Result<Self> {
        let mut basis = basis;
        basis.sort_unstable();
        let bm = basis_mask(&matroid, &basis)?;
        let ab = matroid.mask_of(&[a, b])?;
        if size(ab) != 2 || ab & bm != 0 {
            return Err(Error::Precondition("a and b must be distinct elements outside B".into()));
        }
        let xy = matroid.mask_of(&[x, y])?;
        if size(xy) != 2 || xy & !bm != 0 {
            return Err(Error::Precondition("x and y must be distinct elements of B".into()));
        }
        let mut rows = matrix.rows().to_vec();
        rows.sort_unstable();
        if rows != basis || matrix.labels() != matroid.ground() {
            return Err(Error::Shape("matrix must be indexed by B and E(M) - B".into()));
        }
        Ok(Context { matroid, n, a, b, basis, matrix, x, y })
    }

    pub fn quad(&self) -> Quad {
        Quad { x: self.x, y: self.y, a: self.a, b: self.b }
    }

    /// `M \ a, b`.
    pub fn deleted(&self) -> Matroid {
        self.matroid.delete_labels(&[self.a, self.b]).expect("labels validated")
    }

    pub fn field(&self) -> &PartialField {
        self.matrix.field()
    }

    /// `A - a` and `A - b` represent `M\a` and `M\b`.
    pub fn is_companion(&self) -> Result<bool> {
        crate::pmatrix::companion_check(&self.matroid, &self.matrix, self.a, self.b)
    }

    /// `{x, y, a, b}` incriminates `(M, A)`.
    pub fn quad_incriminates(&self) -> Result<bool> {
        Ok(incriminates(&self.matroid, &self.matrix, &[self.x, self.y, self.a, self.b])?.is_some())
    }

    /// Fails unless the matrix is a companion matrix and the quad
    /// incriminates.
    pub fn require_incrimination(&self) -> Result<()> {
        if !self.is_companion()? {
            return Err(Error::Precondition("A is not a companion matrix for M with respect to a, b".into()));
        }
        if !self.quad_incriminates()? {
            return Err(Error::NotIncriminating(self.quad().labels().to_vec()));
        }
        Ok(())
    }

    pub fn robust(&self) -> Result<Vec<Label>> {
        robust_elements(&self.deleted(), &self.n, &self.basis)
    }

    pub fn strong(&self) -> Result<Vec<Label>> {
        strong_elements(&self.deleted(), &self.n, &self.basis)
    }

    /// `(N, B)`-strong elements of `M\a,b` outside `{x, y}`.
    pub fn strong_outside_pair(&self) -> Result<Vec<Label>> {
        Ok(self.strong()?.into_iter().filter(|&e| e != self.x && e != self.y).collect())
    }
}

/// Companion matrices of `m` for the pair `{a, b}` on the basis `basis`,
/// one per scaling class, over a finite field.
///
/// Each representation class of `M\a,b` on the basis is extended by every
/// normalized column for `a` that yields `M\b` and every normalized column
/// for `b` that yields `M\a`.
pub fn companion_matrices(m: &Matroid, field: &PartialField, basis: &[Label], a: Label, b: Label, budget: u64) -> Result<Vec<PMatrix>> {
    let Some(values) = field.elements() else {
        return Err(Error::Precondition(format!("companion search needs a finite field, got {field}")));
    };
    let md = m.delete_labels(&[a, b])?;
    let bmd = basis_mask(&md, basis)?;
    let reps = representations_on_basis(&md, field, bmd, usize::MAX, budget)?;
    let r = basis.len();
    let one = field.one();
    let mut columns: Vec<Vec<RingValue>> = vec![vec![field.zero(); r]];
    let mut cur = vec![field.zero(); r];
    fn fill(i: usize, cur: &mut Vec<RingValue>, values: &[RingValue], one: &RingValue, lead: bool, out: &mut Vec<Vec<RingValue>>) {
        if i == cur.len() {
            if lead {
                out.push(cur.clone());
            }
            return;
        }
        for v in values {
            let zero = matches!(v, RingValue::Gf(0));
            if !lead && !zero && v != one {
                continue;
            }
            cur[i] = v.clone();
            fill(i + 1, cur, values, one, lead || !zero, out);
        }
    }
    fill(0, &mut cur, &values, &one, false, &mut columns);
    let m_without_a = m.delete_labels(&[a])?;
    let m_without_b = m.delete_labels(&[b])?;
    let mut spent = 0u64;
    let mut out = Vec::new();
    for rep in reps {
        let extend = |col: &[RingValue], e: Label| -> Result<PMatrix> {
            let mut cols = rep.cols().to_vec();
            cols.push(e);
            let entries = rep.entries().iter().zip(col).map(|(row, v)| {
                let mut row = row.clone();
                row.push(v.clone());
                row
            });
            PMatrix::new(field.clone(), rep.rows().to_vec(), cols, entries.collect())
        };
        let mut with_a = Vec::new();
        let mut with_b = Vec::new();
        for col in &columns {
            spent += 2;
            if spent > budget {
                return Err(Error::Budget(budget));
            }
            let ea = extend(col, a)?;
            if ea.is_p_matrix()? && ea.matroid()? == m_without_b {
                with_a.push(col.clone());
            }
            let eb = extend(col, b)?;
            if eb.is_p_matrix()? && eb.matroid()? == m_without_a {
                with_b.push(col.clone());
            }
        }
        for ca in &with_a {
            for cb in &with_b {
                let mut cols = rep.cols().to_vec();
                cols.push(a);
                cols.push(b);
                let entries = rep.entries().iter().enumerate().map(|(i, row)| {
                    let mut row = row.clone();
                    row.push(ca[i].clone());
                    row.push(cb[i].clone());
                    row
                });
                out.push(PMatrix::new(field.clone(), rep.rows().to_vec(), cols, entries.collect())?);
            }
        }
    }
    Ok(out)
}

/// A basis `B'` of `M\a,b`, a companion matrix on it, and a pair
/// `{x', y'} ⊆ B'` with `{x', y', a, b}` incriminating.
#[derive(Debug, Clone)]
pub struct Alternative {
    pub basis: Vec<Label>,
    pub matrix: PMatrix,
    pub x: Label,
    pub y: Label,
}

/// Every incriminating alternative for the pair `{a, b}`, bases in
/// lexicographic order.
pub fn incriminating_alternatives(m: &Matroid, field: &PartialField, a: Label, b: Label, budget: u64) -> Result<Vec<Alternative>> {
    if m.len() > QUANTIFIER_LIMIT {
        return Err(Error::SizeLimit { size: m.len(), limit: QUANTIFIER_LIMIT });
    }
    let ab = m.mask_of(&[a, b])?;
    let mut bases: Vec<u32> = m.basis_masks().iter().copied().filter(|&bm| bm & ab == 0).collect();
    bases.sort_by_key(|&bm| m.labels_of(bm));
    let mut out = Vec::new();
    let mut spent = 0u64;
    for bm in bases {
        let basis = m.labels_of(bm);
        let left = budget.saturating_sub(spent);
        let matrices = companion_matrices(m, field, &basis, a, b, left)?;
        spent += 1 + matrices.len() as u64;
        if spent > budget {
            return Err(Error::Budget(budget));
        }
        for matrix in matrices {
            for i in 0..basis.len() {
                for j in i + 1..basis.len() {
                    let (x, y) = (basis[i], basis[j]);
                    if incriminates(m, &matrix, &[x, y, a, b])?.is_some() {
                        out.push(Alternative { basis: basis.clone(), matrix: matrix.clone(), x, y });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Outcome of a predicate whose definition quantifies over bases and
/// matrices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Decision {
    True,
    False { witness: String },
    Undecided { reason: String },
}

impl Decision {
    pub fn is_true(&self) -> bool {
        matches!(self, Decision::True)
    }

    fn from_search(e: Error) -> Result<Decision> {
        match e {
            Error::Budget(_) | Error::SizeLimit { .. } => Ok(Decision::Undecided { reason: e.to_string() }),
            other => Err(other),
        }
    }
}

fn outside(labels: &[Label], x: Label, y: Label) -> Vec<Label> {
    labels.iter().copied().filter(|&e| e != x && e != y).collect()
}

/// Either exactly one strong element `u` outside `{x, y}` with `{u, x, y}`
/// a triad of `M\a,b`, or no strong element outside the pair for this
/// context and for every incriminating alternative.
pub fn is_strengthened_basis(ctx: &Context, budget: u64) -> Result<Decision> {
    ctx.require_incrimination()?;
    let md = ctx.deleted();
    let strong = ctx.strong_outside_pair()?;
    if let [u] = strong[..] {
        let t = md.mask_of(&[u, ctx.x, ctx.y])?;
        if md.is_cocircuit(t) {
            return Ok(Decision::True);
        }
    }
    if !strong.is_empty() {
        return Ok(Decision::False { witness: format!("strong elements {strong:?} outside {{{}, {}}}", ctx.x, ctx.y) });
    }
    let alts = match incriminating_alternatives(&ctx.matroid, ctx.field(), ctx.a, ctx.b, budget) {
        Ok(v) => v,
        Err(e) => return Decision::from_search(e),
    };
    for alt in alts {
        let s = outside(&strong_elements(&md, &ctx.n, &alt.basis)?, alt.x, alt.y);
        if !s.is_empty() {
            return Ok(Decision::False {
                witness: format!("basis {:?} with pair {{{}, {}}} has strong elements {s:?}", alt.basis, alt.x, alt.y),
            });
        }
    }
    Ok(Decision::True)
}

/// Strengthened, and no incriminating alternative (of the kind the
/// definition ranges over) has more robust elements.
pub fn is_bolstered_basis(ctx: &Context, budget: u64) -> Result<Decision> {
    let strengthened = is_strengthened_basis(ctx, budget)?;
    if !strengthened.is_true() {
        return Ok(strengthened);
    }
    let md = ctx.deleted();
    let strong = ctx.strong_outside_pair()?;
    let robust = ctx.robust()?;
    let alts = match incriminating_alternatives(&ctx.matroid, ctx.field(), ctx.a, ctx.b, budget) {
        Ok(v) => v,
        Err(e) => return Decision::from_search(e),
    };
    if strong.is_empty() {
        let ours = outside(&robust, ctx.x, ctx.y).len();
        for alt in alts {
            let theirs = outside(&robust_elements(&md, &ctx.n, &alt.basis)?, alt.x, alt.y).len();
            if theirs > ours {
                return Ok(Decision::False {
                    witness: format!("basis {:?} with pair {{{}, {}}} has {theirs} robust elements outside the pair, against {ours}", alt.basis, alt.x, alt.y),
                });
            }
        }
        return Ok(Decision::True);
    }
    let u = strong[0];
    let ours = robust.len();
    for alt in alts {
        if (alt.x, alt.y) != (ctx.x, ctx.y) && (alt.y, alt.x) != (ctx.x, ctx.y) {
            continue;
        }
        if alt.basis.contains(&u) || strong_elements(&md, &ctx.n, &alt.basis)? != [u] {
            continue;
        }
        let theirs = robust_elements(&md, &ctx.n, &alt.basis)?.len();
        if theirs > ours {
            return Ok(Decision::False {
                witness: format!("basis {:?} has {theirs} robust elements, against {ours}", alt.basis),
            });
        }
    }
    Ok(Decision::True)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum GadgetType {
    I,
    II,
    III,
}

/// A gadget for `{a, b}`: `({x, y}, u)`, `(x, y, u, z)` or
/// `(x, y, u, z, w)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Gadget {
    #[serde(rename = "type")]
    pub kind: GadgetType,
    pub x: Label,
    pub y: Label,
    pub u: Label,
    pub z: Option<Label>,
    pub w: Option<Label>,
    pub blocker: Label,
    pub fully_blocks: bool,
    /// Every strong element of `B* - {a, b}` outside `{x, y}`; `u` is the
    /// least.
    pub candidates: Vec<Label>,
}

impl Gadget {
    /// The elements in the gadget.
    pub fn support(&self) -> Vec<Label> {
        let mut s = vec![self.x, self.y, self.u];
        s.extend(self.z);
        s.extend(self.w);
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GadgetOutcome {
    /// `M\a,b` is `N`-fragile, so there is no gadget.
    Fragile,
    Gadget(Gadget),
    HypothesesUnmet { clause: String, detail: String },
}

fn unmet(clause: &str, detail: String) -> GadgetOutcome {
    GadgetOutcome::HypothesesUnmet { clause: clause.into(), detail }
}

fn is_maximal_fan(m: &Matroid, order: &[Label]) -> Result<bool> {
    if !is_fan_ordering(m, order)? {
        return Ok(false);
    }
    let mut set = order.to_vec();
    set.sort_unstable();
    Ok(fans(m).iter().any(|f| {
        let mut s = f.elements.clone();
        s.sort_unstable();
        s == set
    }))
}

/// Locates `u` and the gadget type for a context whose deletion `M\a,b` is
/// not `N`-fragile, checking each structural condition in turn.
pub fn gadget_classify(ctx: &Context) -> Result<GadgetOutcome> {
    ctx.require_incrimination()?;
    let m = &ctx.matroid;
    let md = ctx.deleted();
    let targets = std::slice::from_ref(&ctx.n);
    if !is_3connected(&md) {
        return Ok(unmet("deletion_3_connected", format!("M \\ {}, {} is not 3-connected", ctx.a, ctx.b)));
    }
    let Ok(cls) = classify_elements(&md, targets) else {
        return Ok(unmet("deletion_has_minor", format!("M \\ {}, {} has no N-minor", ctx.a, ctx.b)));
    };
    if cls.has_no_flexible() {
        return Ok(GadgetOutcome::Fragile);
    }
    let (x, y) = (ctx.x, ctx.y);
    let candidates = ctx.strong_outside_pair()?.into_iter().filter(|e| !ctx.basis.contains(e)).collect::<Vec<_>>();
    let Some(&u) = candidates.first() else {
        return Ok(unmet("strong_element", "no (N,B)-strong element in B* - {a, b} outside {x, y}".into()));
    };
    let xyu = md.mask_of(&[x, y, u])?;
    let um = md.mask_of(&[u])?;
    let through_u: Vec<Vec<Label>> = md.triad_masks().into_iter().filter(|&t| t & um != 0).map(|t| md.labels_of(t)).collect();
    if through_u.len() != 1 || !md.is_cocircuit(xyu) {
        return Ok(unmet("unique_triad", format!("triads of M \\ a, b through {u}: {through_u:?}")));
    }
    if !m.is_cocircuit(m.mask_of(&[x, y, u, ctx.a, ctx.b])?) {
        return Ok(unmet("cocircuit", format!("{{{x}, {y}, {u}, {}, {}}} is not a cocircuit of M", ctx.a, ctx.b)));
    }
    let has_triangle = |d: Label| -> Result<bool> { Ok(m.is_circuit(m.mask_of(&[d, x, y])?)) };
    if !has_triangle(ctx.a)? && !has_triangle(ctx.b)? {
        return Ok(unmet("triangle", format!("neither {{{}, {x}, {y}}} nor {{{}, {x}, {y}}} is a triangle", ctx.a, ctx.b)));
    }
    let robust = ctx.robust()?;
    let mut marked: Vec<Label> = cls.flexible().into_iter().chain(robust.iter().copied()).collect();
    marked.sort_unstable();
    marked.dedup();
    let within = |allowed: &[Label]| marked.iter().all(|e| allowed.contains(e));
    let in_basis: Vec<Label> = ctx.basis.iter().copied().filter(|&e| e != x && e != y).collect();
    let off_basis: Vec<Label> = md.ground().iter().copied().filter(|e| !ctx.basis.contains(e) && *e != u).collect();
    // the fan may run through x or through y
    let mut shape3 = None;
    let mut shape2 = None;
    for (p, q) in [(x, y), (y, x)] {
        for &z in &in_basis {
            for &w in &off_basis {
                if shape3.is_none() && within(&[u, x, y, z, w]) && is_maximal_fan(&md, &[w, z, p, u, q])? {
                    shape3 = Some((p, q, z, w));
                }
            }
            if shape2.is_none() && within(&[u, x, y, z]) && is_maximal_fan(&md, &[z, u, p, q])? {
                shape2 = Some((p, q, z));
            }
        }
    }
    let shape1 = within(&[u, x, y]);
    let is_robust = |e: Label| robust.contains(&e);
    let (kind, x, y, z, w) = match (shape3, shape2) {
        (Some((p, q, z, w)), _) if is_robust(w) => (GadgetType::III, p, q, Some(z), Some(w)),
        (Some((p, q, z, _)), _) if is_robust(z) => (GadgetType::II, p, q, Some(z), None),
        (_, Some((p, q, z))) if is_robust(z) => (GadgetType::II, p, q, Some(z), None),
        _ if shape1 || shape2.is_some() || shape3.is_some() => (GadgetType::I, x, y, None, None),
        _ => {
            return Ok(unmet("flexible_shape", format!("flexible or robust elements {marked:?} do not fit any gadget shape around {{{x}, {y}, {u}}}")));
        }
    };
    let mut gadget = Gadget { kind, x, y, u, z, w, blocker: ctx.a, fully_blocks: false, candidates };
    match gadget_blocking(m, &gadget, ctx.a, ctx.b) {
        Ok(bl) => {
            gadget.blocker = bl.blocker;
            gadget.fully_blocks = bl.fully_blocks;
        }
        Err(Error::Precondition(detail)) => return Ok(unmet("blocking", detail)),
        Err(e) => return Err(e),
    }
    Ok(GadgetOutcome::Gadget(gadget))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Blocking {
    pub blocker: Label,
    pub fully_blocks: bool,
}

/// Which of `a, b` blocks in the gadget, and whether it fully blocks.
///
/// `a` blocks when `b ∈ cl({x, y})` and `a ∈ cl*(S ∪ b)`, `S` the gadget
/// support; symmetrically for `b`. A blocker `e` fully blocks when
/// `e ∉ cl(S)`. If both qualify, `a` is reported.
pub fn gadget_blocking(m: &Matroid, g: &Gadget, a: Label, b: Label) -> Result<Blocking> {
    let xy = m.mask_of(&[g.x, g.y])?;
    let s = m.mask_of(&g.support())?;
    let (am, bm) = (bit(m.index_of(a)?), bit(m.index_of(b)?));
    if (am | bm) & s != 0 || am == bm {
        return Err(Error::Precondition("a and b must be distinct and outside the gadget".into()));
    }
    let cl_xy = m.closure(xy);
    let blocker = if cl_xy & bm != 0 && m.coclosure(s | bm) & am != 0 {
        a
    } else if cl_xy & am != 0 && m.coclosure(s | am) & bm != 0 {
        b
    } else {
        return Err(Error::Precondition(format!("neither {a} nor {b} blocks in the gadget")));
    };
    let e = if blocker == a { am } else { bm };
    Ok(Blocking { blocker, fully_blocks: m.closure(s) & e == 0 })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Clause {
    pub name: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MegaGadgetReport {
    pub holds: bool,
    pub clauses: Vec<Clause>,
}

impl MegaGadgetReport {
    pub fn failing(&self) -> Option<&str> {
        self.clauses.iter().find(|c| !c.holds).map(|c| c.name.as_str())
    }
}

/// Checks whether `(x, y, u, u', a, b, b')` is a mega-gadget, given
/// contexts for the delete pairs `{a, b}` and `{b, b'}`.
pub fn mega_gadget_check(ab: &Context, bb: &Context, args: [Label; 7]) -> Result<MegaGadgetReport> {
    let [x, y, u, u2, a, b, b2] = args;
    let same = |c: &Context, p: Label, q: Label| (c.a, c.b) == (p, q) || (c.a, c.b) == (q, p);
    if !same(ab, a, b) || !same(bb, b, b2) {
        return Err(Error::Precondition("contexts must be for the pairs {a, b} and {b, b'}".into()));
    }
    if ab.matroid != bb.matroid || ab.n != bb.n {
        return Err(Error::Precondition("contexts must share M and N".into()));
    }
    for c in [ab, bb] {
        if !is_3connected(&c.deleted()) {
            return Err(Error::Precondition(format!("M \\ {}, {} is not 3-connected", c.a, c.b)));
        }
    }
    let m = &ab.matroid;
    let mut clauses = Vec::new();
    let mut push = |name: &str, holds: bool| clauses.push(Clause { name: name.into(), holds });
    let all = [x, y, u, u2, a, b, b2];
    let distinct = (0..7).all(|i| (i + 1..7).all(|j| all[i] != all[j])) && m.mask_of(&all).is_ok();
    push("distinct_elements", distinct);
    if !distinct {
        return Ok(MegaGadgetReport { holds: false, clauses });
    }
    let first = match gadget_classify(ab)? {
        GadgetOutcome::Gadget(g) => Some(g),
        _ => None,
    };
    let first_ok = first.as_ref().is_some_and(|g| g.kind == GadgetType::I && g.u == u && ((g.x, g.y) == (x, y) || (g.x, g.y) == (y, x)));
    push("first_gadget_type_one", first_ok);
    push("b_in_closure_xy", m.closure(m.mask_of(&[x, y])?) & m.mask_of(&[b])? != 0);
    let fb = match &first {
        Some(g) if first_ok => gadget_blocking(m, g, a, b).ok(),
        _ => None,
    };
    push("a_fully_blocks_first", fb.is_some_and(|bl| bl.blocker == a && bl.fully_blocks));
    let second = match gadget_classify(bb)? {
        GadgetOutcome::Gadget(g) => Some(g),
        _ => None,
    };
    let second_ok = second.as_ref().is_some_and(|g| match g.kind {
        GadgetType::I => g.u == u2 && ((g.x, g.y) == (u, y) || (g.x, g.y) == (y, u)),
        GadgetType::II => g.u == u2 && g.z == Some(a) && ((g.x, g.y) == (u, y) || (g.x, g.y) == (y, u)),
        GadgetType::III => false,
    });
    push("second_gadget_shape", second_ok);
    push("b2_in_closure_uy", m.closure(m.mask_of(&[u, y])?) & m.mask_of(&[b2])? != 0);
    let sb = match &second {
        Some(g) if second_ok => gadget_blocking(m, g, b, b2).ok(),
        _ => None,
    };
    push("b_fully_blocks_second", sb.is_some_and(|bl| bl.blocker == b && bl.fully_blocks));
    let holds = clauses.iter().all(|c| c.holds);
    Ok(MegaGadgetReport { holds, clauses })
}
