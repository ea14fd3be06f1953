//! Instance catalogs and suite runners.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::context::{triad_free_equivalent, ContextChecker};
use super::instance::*;
use super::{Mode, VerifyReport};
use crate::bits::{bit, size};
use crate::connectivity::{is_3connected, separation_masks, vertical_3seps};
use crate::error::{Error, Result};
use crate::fragility::{incriminating_alternatives, Context, DEFAULT_QUANTIFIER_BUDGET};
use crate::io::parse_context;
use crate::matroid::{fano, mk4, nonfano, sparse_paving, uniform, wheel, whirl, Matroid};
use crate::pfield::PartialField;
use crate::Label;

pub const SUITES: [&str; 3] = ["core", "lemmas", "representation"];

/// A Type I instance over GF(7): `M` is GF(5)-representable but not
/// GF(7)-representable, `N = M\1,3,5/2`, and `M\1,3` is not `N`-fragile.
pub(crate) const PLANTED_TYPE_ONE: &str = r#"{
  "matroid": {"matrix": {"field": "GF(5)", "rows": [1,2,3,4], "cols": [5,6,7,8,9,10],
    "entries": [[3,2,3,0,3,0],[2,1,1,4,3,1],[4,3,0,3,0,2],[4,1,0,4,3,4]]}},
  "N": {"matrix": {"field": "GF(5)", "rows": [4,6,7], "cols": [8,9,10],
    "entries": [[1,1,0],[1,0,1],[1,1,1]]}},
  "a": 3, "b": 1, "B": [2,7,8,9], "x": 2, "y": 7,
  "A": {"field": "GF(7)", "rows": [2,7,8,9], "cols": [4,5,6,10,1,3],
    "entries": [[1,1,0,1,1,1],[1,3,0,1,6,5],[0,1,1,1,0,1],[1,2,1,1,0,5]]}
}"#;

#[derive(Debug, Clone, Serialize)]
pub struct SuiteConfig {
    pub suite: String,
    /// Largest ground set included.
    pub max_n: usize,
    pub seed: u64,
    /// Random instances added to the catalog.
    pub random: usize,
    pub budget: u64,
}

impl SuiteConfig {
    pub fn new(suite: &str, max_n: usize, seed: u64) -> Self {
        SuiteConfig { suite: suite.into(), max_n, seed, random: 200, budget: DEFAULT_QUANTIFIER_BUDGET }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Counts {
    pub pass: usize,
    pub fail: usize,
    pub hypotheses_unmet: usize,
    pub undecided: usize,
    /// Failures in relaxed modes; these do not count against a statement.
    pub relaxed_fail: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub reports: Vec<VerifyReport>,
}

impl SuiteReport {
    pub fn counts(&self) -> Counts {
        let mut c = Counts { pass: 0, fail: 0, hypotheses_unmet: 0, undecided: 0, relaxed_fail: 0 };
        for r in &self.reports {
            match &r.outcome {
                super::Outcome::Pass => c.pass += 1,
                super::Outcome::Fail { .. } if r.mode.is_normative() => c.fail += 1,
                super::Outcome::Fail { .. } => c.relaxed_fail += 1,
                super::Outcome::HypothesesUnmet { .. } => c.hypotheses_unmet += 1,
                super::Outcome::Undecided { .. } => c.undecided += 1,
            }
        }
        c
    }

    pub fn has_fail(&self) -> bool {
        self.reports.iter().any(|r| r.is_counted_fail())
    }

    /// A header line with the configuration, one line per report, and a
    /// summary line.
    pub fn to_json_lines(&self) -> String {
        let mut out = serde_json::to_string(&serde_json::json!({ "config": self.config })).expect("serializable");
        out.push('\n');
        for r in &self.reports {
            out.push_str(&r.to_json_line());
            out.push('\n');
        }
        out.push_str(&serde_json::to_string(&serde_json::json!({ "summary": self.counts() })).expect("serializable"));
        out.push('\n');
        out
    }
}

/// Named catalog members on at most `max_n` elements.
pub fn catalog(max_n: usize) -> Vec<(String, Matroid)> {
    let mut out: Vec<(String, Matroid)> = Vec::new();
    for n in 2..=max_n.min(9) {
        for r in 1..n {
            out.push((format!("U{r},{n}"), uniform(r, n).expect("valid")));
        }
    }
    out.push(("M(K4)".into(), mk4()));
    out.push(("W3".into(), whirl(3).expect("valid")));
    out.push(("M(W4)".into(), wheel(4).expect("valid")));
    out.push(("W4".into(), whirl(4).expect("valid")));
    out.push(("F7".into(), fano()));
    out.push(("F7*".into(), fano().dual()));
    out.push(("F7-".into(), nonfano()));
    out.push(("(F7-)*".into(), nonfano().dual()));
    out.push(("P6".into(), sparse_paving(3, 6, &[vec![1, 2, 3]]).expect("valid")));
    out.push(("Q6".into(), sparse_paving(3, 6, &[vec![1, 2, 3], vec![3, 4, 5]]).expect("valid")));
    out.push(("R6".into(), sparse_paving(3, 6, &[vec![1, 2, 3], vec![4, 5, 6]]).expect("valid")));
    out.push(("P7".into(), sparse_paving(3, 7, &[vec![1, 2, 3], vec![1, 4, 5], vec![2, 4, 6]]).expect("valid")));
    out.push(("M(W5)".into(), wheel(5).expect("valid")));
    out.retain(|(_, m)| m.len() <= max_n);
    out
}

/// Seeded sparse paving matroids with random circuit-hyperplane families.
pub fn random_instances(seed: u64, count: usize, max_n: usize) -> Vec<(String, Matroid)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    if max_n < 5 {
        return out;
    }
    while out.len() < count {
        let n = rng.gen_range(5..=max_n.min(10));
        let r = rng.gen_range(2..=(n - 3).min(4));
        let ground: Vec<Label> = (1..=n as Label).collect();
        let mut family: Vec<Vec<Label>> = Vec::new();
        for _ in 0..rng.gen_range(0..=n) {
            let mut h: Vec<Label> = ground.choose_multiple(&mut rng, r).copied().collect();
            h.sort_unstable();
            let fits = family.iter().all(|g| g != &h && h.iter().filter(|e| g.contains(e)).count() + 2 <= r);
            if fits {
                family.push(h);
            }
        }
        if let Ok(m) = sparse_paving(r, n, &family) {
            out.push((format!("random#{}:sparse_paving({r},{n},{family:?})", out.len()), m));
        }
    }
    out
}

type Job = Box<dyn Fn() -> Vec<VerifyReport> + Send + Sync>;

fn targets() -> Vec<(&'static str, Matroid)> {
    vec![("U2,4", uniform(2, 4).expect("valid")), ("M(K4)", mk4()), ("W3", whirl(3).expect("valid"))]
}

fn gf(q: u8) -> PartialField {
    PartialField::gf(q).expect("supported")
}

/// Certified excluded minors used by the representation statements.
fn excluded_minors(max_n: usize) -> Vec<(String, Matroid, PartialField)> {
    let mut out = vec![
        ("U2,4".to_string(), uniform(2, 4).expect("valid"), gf(2)),
        ("U2,5".into(), uniform(2, 5).expect("valid"), gf(3)),
        ("U3,5".into(), uniform(3, 5).expect("valid"), gf(3)),
        ("U2,6".into(), uniform(2, 6).expect("valid"), gf(4)),
        ("F7".into(), fano(), gf(3)),
        ("F7*".into(), fano().dual(), gf(3)),
    ];
    out.retain(|(_, m, _)| m.len() <= max_n);
    out
}

/// Contexts the pair statements are evaluated on: every incriminating
/// alternative of `U2,6` over GF(4) for the pair `{5, 6}` (first few), and
/// the planted Type I instance.
fn contexts(max_n: usize, budget: u64) -> Vec<(String, Context)> {
    let mut out = Vec::new();
    if max_n >= 6 {
        let m = uniform(2, 6).expect("valid");
        if let Ok(alts) = incriminating_alternatives(&m, &gf(4), 5, 6, budget) {
            for (i, alt) in alts.into_iter().take(2).enumerate() {
                let name = format!("U2,6/GF(4) a=5 b=6 B={:?} x={} y={} matrix#{i}", alt.basis, alt.x, alt.y);
                let ctx = Context::new(m.clone(), uniform(2, 4).expect("valid"), 5, 6, alt.basis, alt.matrix, alt.x, alt.y);
                out.push((name, ctx.expect("alternatives are well formed")));
            }
        }
    }
    if max_n >= 10 {
        out.push(("planted Type I over GF(7)".into(), parse_context(PLANTED_TYPE_ONE).expect("valid instance")));
    }
    out
}

fn context_reports(name: &str, ctx: &Context, mode: Mode, budget: u64) -> Vec<VerifyReport> {
    let c = ContextChecker::new(ctx, mode, budget);
    let mut out = Vec::new();
    let mut push = |statement: &str, instance: String, f: &dyn Fn() -> super::Outcome| {
        out.push(VerifyReport::run(statement, instance, mode, f));
    };
    let strong: Vec<Label> = ctx.strong().unwrap_or_default().into_iter().filter(|e| !ctx.basis.contains(e) && *e != ctx.a && *e != ctx.b).collect();
    for v in strong {
        push("strong_element_triad", format!("{name} v={v}"), &|| c.strong_element_triad(v));
    }
    push("pair_in_closure_bound", name.into(), &|| c.pair_in_closure_bound());
    for &p in ctx.basis.iter().filter(|&&p| p != ctx.x && p != ctx.y) {
        push("pair_in_extended_closure_bound", format!("{name} p={p}"), &|| c.pair_in_extended_closure_bound(p));
    }
    push("triangle_closed", name.into(), &|| c.triangle_closed());
    push("switched_pair_connected", name.into(), &|| c.switched_pair_connected());
    push("switch_to_type_one", name.into(), &|| c.switch_to_type_one());
    push("essential_after_gadget", name.into(), &|| c.essential_after_gadget());
    push("fragile_connected_minor", name.into(), &|| c.fragile_connected_minor());
    push("three_essential_minor", name.into(), &|| c.three_essential_minor());
    out
}

fn matroid_jobs(name: String, m: Matroid) -> Vec<Job> {
    let mut jobs: Vec<Job> = Vec::new();
    let m = std::sync::Arc::new(m);
    if is_3connected(&m) {
        let (mm, nm) = (m.clone(), name.clone());
        jobs.push(Box::new(move || vec![VerifyReport::run("guts_coguts", nm.clone(), Mode::Normative, || guts_coguts(&mm))]));
        for t in m.triangle_masks().into_iter().filter(|&t| m.is_coindependent(t)) {
            let l = m.labels_of(t);
            let tri = [l[0], l[1], l[2]];
            let (mm, nm) = (m.clone(), format!("{name} T={tri:?}"));
            jobs.push(Box::new(move || vec![VerifyReport::run("delta_wye_connectivity", nm.clone(), Mode::Normative, || delta_wye_connectivity(&mm, tri))]));
        }
        for v in vertical_3seps(&m).into_iter().take(2) {
            let (mm, nm) = (m.clone(), name.clone());
            jobs.push(Box::new(move || {
                targets()
                    .iter()
                    .map(|(tn, t)| {
                        let inst = format!("{nm} X={:?} z={} N={tn}", v.x, v.z);
                        VerifyReport::run("vertical_separation_cleanup", inst, Mode::Normative, || vertical_separation_cleanup(&mm, t, &v.x, v.z))
                    })
                    .collect()
            }));
        }
    }
    let (mm, nm) = (m.clone(), name.clone());
    jobs.push(Box::new(move || {
        targets()
            .iter()
            .map(|(tn, t)| {
                VerifyReport::run("fragile_connectivity", format!("{nm} N={tn}"), Mode::Normative, || {
                    fragile_connectivity(&mm, std::slice::from_ref(t))
                })
            })
            .collect()
    }));
    let mut two_sep: Vec<(String, Matroid)> = Vec::new();
    if !is_3connected(&m) {
        two_sep.push((name.clone(), (*m).clone()));
    }
    let (mut got_del, mut got_con) = (false, false);
    for e in 0..m.len() {
        let label = m.label(e);
        if !got_del && m.len() > 4 {
            let d = m.delete(bit(e));
            if !is_3connected(&d) {
                two_sep.push((format!("{name} \\ {label}"), d));
                got_del = true;
            }
        }
        if !got_con && m.len() > 4 {
            let c = m.contract(bit(e));
            if !is_3connected(&c) {
                two_sep.push((format!("{name} / {label}"), c));
                got_con = true;
            }
        }
    }
    for (inst, d) in two_sep {
        let full = d.full_mask();
        let Some(x) = separation_masks(&d, 2, false).into_iter().find(|&x| size(x) >= 2 && size(full & !x) >= 2) else {
            continue;
        };
        jobs.push(Box::new(move || {
            let xl = d.labels_of(x);
            targets()
                .iter()
                .take(2)
                .map(|(tn, t)| {
                    VerifyReport::run("two_separation_minor_side", format!("{inst} X={xl:?} N={tn}"), Mode::Normative, || {
                        two_separation_minor_side(&d, t, &xl)
                    })
                })
                .collect()
        }));
    }
    jobs
}

fn representation_jobs(max_n: usize) -> Vec<Job> {
    let mut jobs: Vec<Job> = Vec::new();
    for (name, m, field) in excluded_minors(max_n) {
        let inst = format!("{name} over {field}");
        let (m2, f2, i2) = (m.clone(), field.clone(), inst.clone());
        jobs.push(Box::new(move || vec![VerifyReport::run("excluded_minor_no_four_fans", i2.clone(), Mode::Normative, || excluded_minor_no_four_fans(&m2, &f2))]));
        let (m2, f2, i2) = (m.clone(), field.clone(), inst.clone());
        jobs.push(Box::new(move || vec![VerifyReport::run("exchange_preserves_excluded", i2.clone(), Mode::Normative, || exchange_preserves_excluded(&m2, &f2))]));
        jobs.push(Box::new(move || {
            [Mode::Normative, Mode::StructureRelaxed]
                .into_iter()
                .map(|mode| {
                    VerifyReport::run("triad_free_equivalent", format!("{inst} N=U2,4"), mode, || {
                        triad_free_equivalent(&m, &uniform(2, 4).expect("valid"), &field, mode)
                    })
                })
                .collect()
        }));
    }
    if max_n >= 7 {
        jobs.push(Box::new(|| {
            let t = fano().triangle_masks()[0];
            let l = fano().labels_of(t);
            let after = crate::structure::delta_y(&fano(), [l[0], l[1], l[2]]).expect("fano triangles are coindependent");
            vec![VerifyReport::run("exchange_preserves_excluded", format!("Delta_{l:?}(F7) over gf3"), Mode::Normative, || {
                exchange_preserves_excluded(&after, &gf(3))
            })]
        }));
    }
    jobs
}

fn context_jobs(max_n: usize, budget: u64, modes: &[Mode]) -> Vec<Job> {
    let mut jobs: Vec<Job> = Vec::new();
    for (name, ctx) in contexts(max_n, budget) {
        for &mode in modes {
            let (name, ctx) = (name.clone(), ctx.clone());
            jobs.push(Box::new(move || context_reports(&name, &ctx, mode, budget)));
        }
    }
    jobs
}

/// Runs a suite. Reports are deterministic in `(config)`: jobs run in
/// parallel but results keep their generation order, then non-passing
/// reports are moved to the front.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    let max_n = config.max_n.min(16);
    let mut jobs: Vec<Job> = Vec::new();
    match config.suite.as_str() {
        "core" => {
            let mut instances = catalog(max_n.min(8));
            instances.extend(random_instances(config.seed, config.random, max_n.min(8)));
            for (name, m) in instances {
                jobs.extend(matroid_jobs(name, m));
            }
            jobs.extend(representation_jobs(max_n.min(7)));
            jobs.extend(context_jobs(max_n, config.budget, &[Mode::Normative]));
        }
        "lemmas" => {
            jobs.extend(context_jobs(max_n, config.budget, &[Mode::Normative, Mode::SizeRelaxed, Mode::StructureRelaxed]));
        }
        "representation" => jobs.extend(representation_jobs(max_n)),
        other => return Err(Error::UnknownSuite(other.into())),
    }
    let mut reports: Vec<VerifyReport> = jobs.par_iter().map(|j| j()).collect::<Vec<_>>().into_iter().flatten().collect();
    reports.sort_by_key(|r| r.outcome.is_pass());
    Ok(SuiteReport { config: config.clone(), reports })
}
