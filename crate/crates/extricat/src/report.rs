//! Session configuration, report types with fixed JSON schemas, the
//! verification suites behind `extricat verify`, and the DOT emitter.
//!
//! Reports are byte-identical across runs with identical configuration:
//! every collection is sorted before serialization and the only randomness
//! (the sampled axiom diagnostics) is driven by the seeded generator from
//! the configuration.

use crate::catalog::{build_catalog_with_caps, Catalog, ObjClass};
use crate::cotorsion::{
    approx_left, approx_right, is_right_approximation, is_sms, is_torsion_pair_tri, perp,
    perp_within, verify_correspondence, PerpKind, TorsionShape,
};
use crate::derived::{DConflation, DerivedBackend, DMor, DEFAULT_WINDOW};
use crate::error::{Error, Result};
use crate::exact::{ExactBackend, ExtClass};
use crate::extri::{
    filt_closure, filt_closure_left, is_semibrick, is_simple_semibrick, peel_membership,
    sim_unchecked, verify_main_bijection, ExtriCategory, Subcat, PEEL_DEPTH_CAP,
};
use crate::linalg::{Fp, Mat};
use crate::quiver::Quiver;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;

/// Which backend a session runs on.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BackendKind {
    Module,
    Derived,
}

/// Everything a session needs to run a command reproducibly.
#[derive(Clone, Debug)]
pub struct SessionConfig {
    pub p_override: Option<u32>,
    pub backend: BackendKind,
    pub window: (i32, i32),
    pub catalog_cap: usize,
    pub e_enum_cap: u64,
    pub sum_bound: usize,
    pub seed: u64,
    pub json: bool,
}

impl Default for SessionConfig {
    fn default() -> Self {
        SessionConfig {
            p_override: None,
            backend: BackendKind::Module,
            window: DEFAULT_WINDOW,
            catalog_cap: crate::catalog::DEFAULT_CATALOG_CAP,
            e_enum_cap: crate::catalog::DEFAULT_E_ENUM_CAP,
            sum_bound: 4,
            seed: 0,
            json: false,
        }
    }
}

pub fn load_backend(spec_text: &str, config: &SessionConfig) -> Result<ExactBackend> {
    let quiver = Quiver::from_json(spec_text, config.p_override)?;
    let catalog = build_catalog_with_caps(quiver, config.catalog_cap, config.e_enum_cap)?;
    let mut backend = ExactBackend::new(catalog);
    backend.e_enum_cap = config.e_enum_cap;
    Ok(backend)
}

pub fn load_derived(spec_text: &str, config: &SessionConfig) -> Result<DerivedBackend> {
    let exact = load_backend(spec_text, config)?;
    DerivedBackend::new(exact, config.window.0, config.window.1)
}

/// JSON form of an iso-class: a list of [label, shift] pairs; the zero
/// object is the empty list.
pub fn class_json(cat: &Catalog, class: &ObjClass) -> Vec<(String, i32)> {
    class
        .parts()
        .iter()
        .map(|&(id, s)| (cat.labels[id].clone(), s))
        .collect()
}

#[derive(Serialize)]
pub struct ConflationJson {
    #[serde(rename = "A")]
    pub a: Vec<(String, i32)>,
    #[serde(rename = "B")]
    pub b: Vec<(String, i32)>,
    #[serde(rename = "C")]
    pub c: Vec<(String, i32)>,
    pub class_coords: Vec<u32>,
}

// -- catalog ------------------------------------------------------------------

#[derive(Serialize)]
pub struct CatalogReport {
    pub p: u32,
    pub vertices: Vec<String>,
    pub members: Vec<CatalogRow>,
    pub hom_table: Vec<Vec<usize>>,
    pub ext_table: Vec<Vec<usize>>,
    pub dot: String,
}

#[derive(Serialize)]
pub struct CatalogRow {
    pub label: String,
    pub dim_vector: Vec<usize>,
    pub projective: bool,
    pub injective: bool,
}

pub fn cmd_catalog(backend: &ExactBackend) -> CatalogReport {
    let cat = &backend.catalog;
    let members = (0..cat.len())
        .map(|i| CatalogRow {
            label: cat.labels[i].clone(),
            dim_vector: cat.members[i].dims.clone(),
            projective: cat.projective_at.contains(&i),
            injective: cat.injective_at.contains(&i),
        })
        .collect();
    CatalogReport {
        p: cat.quiver.p,
        vertices: cat.quiver.vertices.clone(),
        members,
        hom_table: cat.hom.clone(),
        ext_table: cat.ext.clone(),
        dot: hom_irreducible_dot(backend),
    }
}

/// DOT of the Hom-irreducible graph: an edge M → N when some morphism
/// M → N does not factor through a third indecomposable. Cosmetic and
/// schema-stable; no layout coordinates.
pub fn hom_irreducible_dot(backend: &ExactBackend) -> String {
    let cat = &backend.catalog;
    let n = cat.len();
    let mut edges = Vec::new();
    for m in 0..n {
        for t in 0..n {
            if m == t || cat.hom[m][t] == 0 {
                continue;
            }
            let basis = crate::quiver::hom_space(&cat.members[m], &cat.members[t]);
            // span of composites through any third member
            let p = cat.quiver.p;
            let flat = |f: &crate::quiver::RepMap| -> Vec<Fp> {
                f.blocks
                    .iter()
                    .flat_map(|b| b.entries().iter().map(|&e| Fp::new(e as i64, p)))
                    .collect()
            };
            let total_len = flat(&basis[0]).len();
            let mut cols = Vec::new();
            for l in 0..n {
                if l == m || l == t {
                    continue;
                }
                let first = crate::quiver::hom_space(&cat.members[m], &cat.members[l]);
                let second = crate::quiver::hom_space(&cat.members[l], &cat.members[t]);
                for f in &first {
                    for g in &second {
                        cols.push(flat(&g.compose(f)));
                    }
                }
            }
            let through_rank = if cols.is_empty() {
                0
            } else {
                Mat::from_columns(&cols, total_len, p).rank()
            };
            if through_rank < basis.len() {
                edges.push((cat.labels[m].clone(), cat.labels[t].clone()));
            }
        }
    }
    edges.sort();
    let mut out = String::from("digraph hom_irreducible {\n");
    let mut labels = cat.labels.clone();
    labels.sort();
    for l in &labels {
        out.push_str(&format!("  \"{l}\";\n"));
    }
    for (a, b) in &edges {
        out.push_str(&format!("  \"{a}\" -> \"{b}\";\n"));
    }
    out.push_str("}\n");
    out
}

// -- filt ----------------------------------------------------------------------

#[derive(Serialize)]
pub struct FiltReport {
    pub x: Vec<String>,
    pub support: Vec<Vec<(String, i32)>>,
    pub lengths: BTreeMap<String, usize>,
    pub skipped_window: Vec<String>,
}

pub fn cmd_filt(backend: &ExactBackend, labels: &[String], sum_bound: usize) -> Result<FiltReport> {
    let cat = backend.catalog.clone();
    let x: Vec<ObjClass> = labels
        .iter()
        .map(|l| Ok(ObjClass::from_parts(vec![cat.parse_part(l)?])))
        .collect::<Result<_>>()?;
    let res = filt_closure(backend, &x, sum_bound)?;
    let mut support: Vec<ObjClass> = res.closure.members().collect();
    support.sort();
    let lengths = support
        .iter()
        .map(|m| (cat.class_label(m), res.lengths[m]))
        .collect();
    Ok(FiltReport {
        x: labels.to_vec(),
        support: support.iter().map(|m| class_json(&cat, m)).collect(),
        lengths,
        skipped_window: res.skipped,
    })
}

pub fn cmd_filt_derived(
    backend: &DerivedBackend,
    labels: &[String],
) -> Result<FiltReport> {
    let cat = backend.exact.catalog.clone();
    let x: Vec<ObjClass> = labels
        .iter()
        .map(|l| Ok(ObjClass::from_parts(vec![cat.parse_part(l)?])))
        .collect::<Result<_>>()?;
    for m in &x {
        backend.check_window(m)?;
    }
    let targets = backend.window_universe(backend.lo, backend.hi);
    let (members, mut skipped) = peel_membership(backend, &x, &targets, PEEL_DEPTH_CAP)?;
    let mut support = members;
    support.sort();
    // minimal lengths per support member via bounded level iteration
    let res = filt_closure(backend, &x, 3)?;
    skipped.extend(res.skipped.iter().cloned());
    skipped.sort();
    skipped.dedup();
    let lengths = support
        .iter()
        .filter_map(|m| res.lengths.get(m).map(|&l| (cat.class_label(m), l)))
        .collect();
    Ok(FiltReport {
        x: labels.to_vec(),
        support: support.iter().map(|m| class_json(&cat, m)).collect(),
        lengths,
        skipped_window: skipped,
    })
}

// -- semibricks ------------------------------------------------------------------

#[derive(Serialize)]
pub struct SemibricksReport {
    pub semibricks: Vec<SemibrickRow>,
    pub count: usize,
    pub simple_count: usize,
}

#[derive(Serialize)]
pub struct SemibrickRow {
    pub members: Vec<String>,
    pub simple: bool,
}

pub fn cmd_semibricks(backend: &ExactBackend, sum_bound: usize) -> Result<SemibricksReport> {
    let universe = backend.universe();
    if universe.len() > crate::extri::SUBSET_GUARD {
        return Err(Error::CapExceeded {
            what: "semibrick subset enumeration",
            needed: universe.len() as u128,
            cap: crate::extri::SUBSET_GUARD as u64,
        });
    }
    let n = universe.len();
    let mut rows = Vec::new();
    for mask in 0..(1u64 << n) {
        let subset: Vec<ObjClass> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| universe[i].clone())
            .collect();
        if is_semibrick(backend, &subset)? {
            let simple = is_simple_semibrick(backend, &subset, sum_bound)?;
            let mut members: Vec<String> = subset
                .iter()
                .map(|m| backend.catalog.class_label(m))
                .collect();
            members.sort();
            rows.push(SemibrickRow { members, simple });
        }
    }
    rows.sort_by(|a, b| (a.members.len(), &a.members).cmp(&(b.members.len(), &b.members)));
    let count = rows.len();
    let simple_count = rows.iter().filter(|r| r.simple).count();
    Ok(SemibricksReport {
        semibricks: rows,
        count,
        simple_count,
    })
}

// -- verify: outcome plumbing -----------------------------------------------------

/// A suite outcome: named checks, violations, and window skips.
#[derive(Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckRow>,
    pub violations: Vec<String>,
    pub skipped_window: Vec<String>,
    pub pass: bool,
}

#[derive(Serialize)]
pub struct CheckRow {
    pub name: String,
    pub detail: String,
    pub pass: bool,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            checks: Vec::new(),
            violations: Vec::new(),
            skipped_window: Vec::new(),
            pass: true,
        }
    }

    fn check(&mut self, name: &str, pass: bool, detail: String) {
        if !pass {
            self.pass = false;
            self.violations.push(format!("{name}: {detail}"));
        }
        self.checks.push(CheckRow {
            name: name.to_string(),
            detail,
            pass,
        });
    }

    /// 0 pass, 1 violation, 3 pass-with-window-skips.
    pub fn exit_code(&self) -> i32 {
        if !self.pass {
            1
        } else if self.skipped_window.is_empty() {
            0
        } else {
            3
        }
    }
}

// -- verify: bijection -------------------------------------------------------------

#[derive(Serialize)]
pub struct BijectionReport {
    pub simple_semibricks: Vec<Vec<String>>,
    pub length_wide: Vec<Vec<String>>,
    pub bijection_ok: bool,
    pub violations: Vec<String>,
}

pub fn verify_bijection(backend: &ExactBackend, sum_bound: usize) -> Result<BijectionReport> {
    let outcome = verify_main_bijection(backend, sum_bound)?;
    let cat = &backend.catalog;
    let mut ssb: Vec<Vec<String>> = outcome
        .simple_semibricks
        .iter()
        .map(|x| {
            let mut v: Vec<String> = x.iter().map(|m| cat.class_label(m)).collect();
            v.sort();
            v
        })
        .collect();
    ssb.sort();
    let mut lw: Vec<Vec<String>> = outcome
        .length_wide
        .iter()
        .map(|d| {
            let mut v: Vec<String> = d.members().map(|m| cat.class_label(&m)).collect();
            v.sort();
            v
        })
        .collect();
    lw.sort();
    Ok(BijectionReport {
        bijection_ok: outcome.ok(),
        simple_semibricks: ssb,
        length_wide: lw,
        violations: outcome.violations,
    })
}

// -- verify: cotorsion ---------------------------------------------------------------

#[derive(Serialize)]
pub struct CotorsionReport {
    #[serde(rename = "S_P")]
    pub s_p: Vec<String>,
    pub valid_subsets: usize,
    pub cotorsion_pairs: Vec<CotorsionPairRow>,
    pub skipped_window: Vec<String>,
    pub approximation_checks: usize,
    pub violations: Vec<String>,
    pub pass: bool,
}

#[derive(Serialize)]
pub struct CotorsionPairRow {
    pub s: Vec<String>,
    pub u_support: Vec<String>,
    pub v_support: Vec<String>,
}

/// Approximation soundness plus the full correspondence on T = Filt(X):
/// every approximation satisfies its postconditions and the factorization
/// test, and (Filt(S), S^⊥1) is a cotorsion pair exactly when S_P ⊆ S.
/// X defaults to the simples (then T = mod kQ); `--s` overrides it.
pub fn verify_cotorsion_with(
    backend: &ExactBackend,
    sum_bound: usize,
    x_labels: &[String],
) -> Result<CotorsionReport> {
    let cat = backend.catalog.clone();
    let x: Vec<ObjClass> = if x_labels.is_empty() {
        (0..cat.len())
            .filter(|&i| cat.members[i].total_dim() == 1)
            .map(ObjClass::module)
            .collect()
    } else {
        x_labels
            .iter()
            .map(|l| Ok(ObjClass::from_parts(vec![cat.parse_part(l)?])))
            .collect::<Result<_>>()?
    };
    if !is_semibrick(backend, &x)? {
        return Err(Error::Precondition(
            "the base set for the cotorsion suite must be a semibrick".into(),
        ));
    }
    let closure_x = filt_closure(backend, &x, sum_bound)?;
    let mut violations = Vec::new();
    let mut approximation_checks = 0;
    let n = x.len();
    for mask in 0..(1u64 << n) {
        let s: Vec<ObjClass> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| x[i].clone())
            .collect();
        let filt_s = filt_closure(backend, &s, sum_bound)?;
        for m in closure_x.closure.members() {
            match approx_right(backend, &m, &s, &filt_s) {
                Ok(conf) => {
                    approximation_checks += 1;
                    let w = conf.witness.as_ref().unwrap();
                    if !is_right_approximation(backend, &w.x, &filt_s.closure)? {
                        violations.push(format!(
                            "right approximation of {} by {} fails factorization",
                            cat.class_label(&m),
                            backend.set_label(&s)
                        ));
                    }
                }
                Err(e) => violations.push(format!(
                    "approx_right({}, {}) failed: {e}",
                    cat.class_label(&m),
                    backend.set_label(&s)
                )),
            }
            if let Err(e) = approx_left(backend, &m, &s, &filt_s) {
                violations.push(format!(
                    "approx_left({}, {}) failed: {e}",
                    cat.class_label(&m),
                    backend.set_label(&s)
                ));
            } else {
                approximation_checks += 1;
            }
        }
    }
    let correspondence = verify_correspondence(backend, &x, sum_bound)?;
    let _ = &x;
    violations.extend(correspondence.violations.clone());
    if !correspondence.precondition_ok {
        violations.push("T lacks enough projectives or injectives".into());
    }
    let t_scope = closure_x.closure.clone();
    let mut pairs = Vec::new();
    for s in &correspondence.valid_subsets {
        let u = filt_closure(backend, s, sum_bound)?.closure;
        let v = perp_within(backend, s, &t_scope)?;
        let mut s_labels: Vec<String> = s.iter().map(|m| cat.class_label(m)).collect();
        s_labels.sort();
        let mut u_l: Vec<String> = u.members().map(|m| cat.class_label(&m)).collect();
        u_l.sort();
        let mut v_l: Vec<String> = v.members().map(|m| cat.class_label(&m)).collect();
        v_l.sort();
        pairs.push(CotorsionPairRow {
            s: s_labels,
            u_support: u_l,
            v_support: v_l,
        });
    }
    pairs.sort_by(|a, b| a.s.cmp(&b.s));
    let mut s_p: Vec<String> = correspondence
        .s_p
        .iter()
        .map(|m| cat.class_label(m))
        .collect();
    s_p.sort();
    let pass = violations.is_empty();
    Ok(CotorsionReport {
        s_p,
        valid_subsets: correspondence.valid_subsets.len(),
        cotorsion_pairs: pairs,
        skipped_window: Vec::new(),
        approximation_checks,
        violations,
        pass,
    })
}

pub fn verify_cotorsion(backend: &ExactBackend, sum_bound: usize) -> Result<CotorsionReport> {
    verify_cotorsion_with(backend, sum_bound, &[])
}

// -- verify: lemma suites ---------------------------------------------------------------

/// The lemma property suites over the module-category universe: filtration
/// subadditivity, the brick-source property and its dual, summand length
/// additivity, left/right filtration equality, and perpendicular stability.
pub fn verify_lemmas(backend: &ExactBackend, sum_bound: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("lemmas");
    let cat = backend.catalog.clone();
    let universe = backend.universe();
    let scope = Subcat::from_classes(&universe);
    // enumerate all semibricks of the universe
    let n = universe.len();
    let mut semibricks = Vec::new();
    for mask in 0..(1u64 << n) {
        let subset: Vec<ObjClass> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| universe[i].clone())
            .collect();
        if is_semibrick(backend, &subset)? {
            semibricks.push(subset);
        }
    }

    // subadditivity of lengths over enumerated conflations: ends range over
    // closure members with up to 3 summands, so middles have up to 6 and the
    // closure is iterated deep enough that every middle has a length; a
    // middle missing from the closure falsifies the membership half of the
    // statement and counts as a violation
    let deep_bound = sum_bound.max(6);
    let mut subadd_cases = 0;
    let mut subadd_bad = 0;
    for x in &semibricks {
        let res = filt_closure(backend, x, deep_bound)?;
        let mut members: Vec<ObjClass> =
            res.lengths.keys().filter(|m| m.summand_count() <= 3).cloned().collect();
        members.sort();
        for a in &members {
            for c in &members {
                for middle in backend.e_middles(c, a)?.iter() {
                    subadd_cases += 1;
                    match res.lengths.get(&middle.middle) {
                        Some(&lb) => {
                            if lb > res.lengths[a] + res.lengths[c] {
                                subadd_bad += 1;
                            }
                        }
                        None => subadd_bad += 1,
                    }
                }
            }
        }
    }
    report.check(
        "length subadditivity over conflations",
        subadd_bad == 0,
        format!("{subadd_cases} conflations checked, {subadd_bad} violations"),
    );

    // the brick-source property and its dual across all semibricks
    let mut source_cases = 0;
    let mut source_bad = 0;
    for x in &semibricks {
        let res = filt_closure(backend, x, deep_bound)?;
        let mut members: Vec<ObjClass> =
            res.lengths.keys().filter(|m| m.summand_count() <= 3 && !m.is_zero()).cloned().collect();
        members.sort();
        for xm in x {
            let x_rep = cat.rep_of(xm);
            for m in &members {
                let m_rep = cat.rep_of(m);
                let basis = crate::quiver::hom_space(&x_rep, &m_rep);
                let p = cat.quiver.p;
                for coeffs in crate::quiver::CoeffIter::new(p, basis.len()) {
                    if coeffs.iter().all(|&c| c == 0) {
                        continue;
                    }
                    let f = crate::quiver::combine(
                        &basis,
                        &coeffs.iter().map(|&c| Fp::new(c as i64, p)).collect::<Vec<_>>(),
                        &x_rep,
                        &m_rep,
                    );
                    source_cases += 1;
                    // f must be an inflation with cone length l(M) − 1
                    if !f.is_injective() {
                        source_bad += 1;
                        continue;
                    }
                    let cone = cat.decompose(&crate::quiver::cokernel(&f).rep)?;
                    let lм = res.lengths[m];
                    match res.lengths.get(&cone) {
                        Some(&lc) if lc + 1 == lм => {}
                        _ => source_bad += 1,
                    }
                }
                // dual: morphisms M → X are deflations with cocone one shorter
                let dual_basis = crate::quiver::hom_space(&m_rep, &x_rep);
                for coeffs in crate::quiver::CoeffIter::new(p, dual_basis.len()) {
                    if coeffs.iter().all(|&c| c == 0) {
                        continue;
                    }
                    let f = crate::quiver::combine(
                        &dual_basis,
                        &coeffs.iter().map(|&c| Fp::new(c as i64, p)).collect::<Vec<_>>(),
                        &m_rep,
                        &x_rep,
                    );
                    source_cases += 1;
                    if !f.is_surjective() {
                        source_bad += 1;
                        continue;
                    }
                    let cocone = cat.decompose(&crate::quiver::kernel_sub(&f).rep)?;
                    let lм = res.lengths[m];
                    match res.lengths.get(&cocone) {
                        Some(&lc) if lc + 1 == lм => {}
                        _ => source_bad += 1,
                    }
                }
            }
        }
    }
    report.check(
        "brick-source property and dual",
        source_bad == 0,
        format!("{source_cases} morphisms checked, {source_bad} violations"),
    );

    // summand length additivity
    let mut summand_cases = 0;
    let mut summand_bad = 0;
    for x in &semibricks {
        let res = filt_closure(backend, x, deep_bound)?;
        for (m, &len) in &res.lengths {
            if m.summand_count() < 2 {
                continue;
            }
            summand_cases += 1;
            let total: usize = m
                .parts()
                .iter()
                .map(|&pt| res.lengths[&ObjClass::from_parts(vec![pt])])
                .sum();
            if len != total {
                summand_bad += 1;
            }
        }
    }
    report.check(
        "summand length additivity",
        summand_bad == 0,
        format!("{summand_cases} decomposable members checked, {summand_bad} violations"),
    );

    // left/right filtration equality
    let mut lr_bad = 0;
    for x in &semibricks {
        let r = filt_closure(backend, x, sum_bound)?;
        let l = filt_closure_left(backend, x, sum_bound)?;
        if r.lengths != l.lengths || r.closure != l.closure {
            lr_bad += 1;
        }
    }
    report.check(
        "left/right filtration equality",
        lr_bad == 0,
        format!("{} collections checked, {lr_bad} violations", semibricks.len()),
    );

    // perpendicular stability under filtration closure
    let mut perp_bad = 0;
    for x in &semibricks {
        let closure = filt_closure(backend, x, sum_bound)?;
        let filt_members: Vec<ObjClass> = closure.closure.members().collect();
        for kind in [
            PerpKind::HomLeft,
            PerpKind::HomRight,
            PerpKind::ExtLeft,
            PerpKind::ExtRight,
        ] {
            let lhs = perp(backend, x, kind, &scope)?;
            let rhs = perp(backend, &filt_members, kind, &scope)?;
            if lhs != rhs {
                perp_bad += 1;
            }
        }
    }
    report.check(
        "perpendicular stability",
        perp_bad == 0,
        format!(
            "{} collections × 4 kinds checked, {perp_bad} violations",
            semibricks.len()
        ),
    );
    Ok(report)
}

// -- verify: axioms (sampled diagnostics) ----------------------------------------------

/// Sampled structural diagnostics: biadditivity of E, split realization,
/// and dimension-count exactness of the Hom/E sequences induced by sampled
/// conflations, across both backends.
pub fn verify_axioms(
    backend: &ExactBackend,
    derived: &DerivedBackend,
    seed: u64,
    samples: usize,
) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("axioms");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cat = backend.catalog.clone();
    let n = cat.len();

    // biadditivity spot checks
    let mut biadd_bad = 0;
    for _ in 0..16 {
        let c1 = ObjClass::module(rng.gen_range(0..n));
        let c2 = ObjClass::module(rng.gen_range(0..n));
        let a = ObjClass::module(rng.gen_range(0..n));
        if backend.ext_space(&c1.sum(&c2), &a).dim()
            != backend.ext_space(&c1, &a).dim() + backend.ext_space(&c2, &a).dim()
        {
            biadd_bad += 1;
        }
        if backend.ext_space(&a, &c1.sum(&c2)).dim()
            != backend.ext_space(&a, &c1).dim() + backend.ext_space(&a, &c2).dim()
        {
            biadd_bad += 1;
        }
    }
    report.check("E biadditivity", biadd_bad == 0, format!("{biadd_bad} violations"));

    // split realization
    let mut split_bad = 0;
    for c in 0..n {
        for a in 0..n {
            let cc = ObjClass::module(c);
            let aa = ObjClass::module(a);
            let d = cat.ext[c][a];
            let conf = backend.realize(&cc, &aa, &vec![0; d])?;
            if conf.b != cc.sum(&aa) {
                split_bad += 1;
            }
        }
    }
    report.check("split realization", split_bad == 0, format!("{split_bad} violations"));

    // exactness of the induced sequences, module backend
    let exact_samples = samples.div_ceil(2);
    let mut checked = 0;
    let mut bad = 0;
    let mut attempts = 0;
    while checked < exact_samples && attempts < exact_samples * 20 {
        attempts += 1;
        let c = ObjClass::module(rng.gen_range(0..n));
        let a = ObjClass::module(rng.gen_range(0..n));
        let x = ObjClass::module(rng.gen_range(0..n));
        let space = backend.ext_space(&c, &a);
        let coords: Vec<u32> = (0..space.dim()).map(|_| rng.gen_range(0..backend.p())).collect();
        let conf = backend.realize(&c, &a, &coords)?;
        if !exactness_check_exact(backend, &conf, &x)? {
            bad += 1;
        }
        checked += 1;
    }
    report.check(
        "induced-sequence exactness (module backend)",
        bad == 0,
        format!("{checked} sampled pairs, {bad} violations"),
    );

    // exactness of the induced sequences, derived backend
    let derived_samples = samples - exact_samples;
    let mut dchecked = 0;
    let mut dbad = 0;
    let mut dskip = 0;
    let mut dattempts = 0;
    while dchecked < derived_samples && dattempts < derived_samples * 40 {
        dattempts += 1;
        let c = ObjClass::indec(rng.gen_range(0..n), rng.gen_range(-1..=0));
        let a = ObjClass::indec(rng.gen_range(0..n), rng.gen_range(-1..=0));
        let x = ObjClass::indec(rng.gen_range(0..n), rng.gen_range(-1..=0));
        let outcome = (|| -> Result<bool> {
            let space = derived.e_space_d(&c, &a)?;
            let coords: Vec<u32> =
                (0..space.dim()).map(|_| rng.gen_range(0..derived.p())).collect();
            let conf = derived.realize_d(&c, &a, &coords)?;
            exactness_check_derived(derived, &conf, &x)
        })();
        match outcome {
            Ok(ok) => {
                dchecked += 1;
                if !ok {
                    dbad += 1;
                }
            }
            Err(Error::Window { .. }) => dskip += 1,
            Err(e) => return Err(e),
        }
    }
    if dskip > 0 {
        report
            .skipped_window
            .push(format!("{dskip} derived samples outside the window"));
    }
    report.check(
        "induced-sequence exactness (derived backend)",
        dbad == 0,
        format!("{dchecked} sampled pairs, {dbad} violations"),
    );
    report.check(
        "sample count",
        checked + dchecked >= samples,
        format!("{} samples total", checked + dchecked),
    );
    Ok(report)
}

/// Dimension-count exactness at the three middle slots of both induced
/// sequences of a module-backend conflation against one test object.
pub fn exactness_check_exact(
    backend: &ExactBackend,
    conf: &crate::exact::Conflation,
    x: &ObjClass,
) -> Result<bool> {
    let cat = backend.catalog.clone();
    let w = conf.witness.as_ref().expect("witnessed conflation");
    let x_rep = cat.rep_of(x);
    let a_rep = cat.rep_of(&conf.a);
    let b_rep = cat.rep_of(&conf.b);
    let c_rep = cat.rep_of(&conf.c);
    let delta = ExtClass {
        c: conf.c.clone(),
        a: conf.a.clone(),
        coords: conf.coords.clone(),
    };
    let p = backend.p();

    // contravariant: C(C,X) → C(B,X) → C(A,X) → E(C,X) → E(B,X)
    let hom_cx = crate::quiver::hom_space(&c_rep, &x_rep);
    let hom_bx = crate::quiver::hom_space(&b_rep, &x_rep);
    let hom_ax = crate::quiver::hom_space(&a_rep, &x_rep);
    let e_cx_dim = backend.ext_space(&conf.c, x).dim();
    let e_bx_dim = backend.ext_space(&conf.b, x).dim();
    let m1 = hom_map_matrix(&hom_cx, &hom_bx, |f| f.compose(&w.y), p);
    let m2 = hom_map_matrix(&hom_bx, &hom_ax, |f| f.compose(&w.x), p);
    let m3 = to_ext_matrix(&hom_ax, e_cx_dim, p, |g| {
        backend.act_left(&delta, g).map(|cl| cl.coords)
    })?;
    let m4 = ext_to_ext_matrix(backend, &delta.c, x, &conf.b, e_bx_dim, p, |cl| {
        backend.act_right(cl, &w.y).map(|c2| c2.coords)
    })?;
    if !exact_at(&m1, &m2) || !exact_at(&m2, &m3) || !exact_at(&m3, &m4) {
        return Ok(false);
    }

    // covariant: C(X,A) → C(X,B) → C(X,C) → E(X,A) → E(X,B)
    let hom_xa = crate::quiver::hom_space(&x_rep, &a_rep);
    let hom_xb = crate::quiver::hom_space(&x_rep, &b_rep);
    let hom_xc = crate::quiver::hom_space(&x_rep, &c_rep);
    let e_xa_dim = backend.ext_space(x, &conf.a).dim();
    let e_xb_dim = backend.ext_space(x, &conf.b).dim();
    let n1 = hom_map_matrix(&hom_xa, &hom_xb, |f| w.x.compose(f), p);
    let n2 = hom_map_matrix(&hom_xb, &hom_xc, |f| w.y.compose(f), p);
    let n3 = to_ext_matrix(&hom_xc, e_xa_dim, p, |f| {
        backend.act_right(&delta, f).map(|cl| cl.coords)
    })?;
    let n4 = ext_to_ext_matrix(backend, x, &delta.a, &conf.b, e_xb_dim, p, |cl| {
        backend.act_left(cl, &w.x).map(|c2| c2.coords)
    })?;
    Ok(exact_at(&n1, &n2) && exact_at(&n2, &n3) && exact_at(&n3, &n4))
}

fn hom_map_matrix(
    src: &[crate::quiver::RepMap],
    tgt_basis: &[crate::quiver::RepMap],
    apply: impl Fn(&crate::quiver::RepMap) -> crate::quiver::RepMap,
    p: u32,
) -> Mat {
    let cols: Vec<Vec<Fp>> = src
        .iter()
        .map(|f| {
            crate::quiver::coords_in_basis(tgt_basis, &apply(f)).expect("image in hom space")
        })
        .collect();
    Mat::from_columns(&cols, tgt_basis.len(), p)
}

fn to_ext_matrix(
    src: &[crate::quiver::RepMap],
    tgt_dim: usize,
    p: u32,
    apply: impl Fn(&crate::quiver::RepMap) -> Result<Vec<u32>>,
) -> Result<Mat> {
    let mut cols = Vec::new();
    for f in src {
        let coords = apply(f)?;
        cols.push(coords.iter().map(|&c| Fp::new(c as i64, p)).collect());
    }
    Ok(Mat::from_columns(&cols, tgt_dim, p))
}

fn ext_to_ext_matrix(
    backend: &ExactBackend,
    c_end: &ObjClass,
    a_end: &ObjClass,
    _via: &ObjClass,
    tgt_dim: usize,
    p: u32,
    apply: impl Fn(&ExtClass) -> Result<Vec<u32>>,
) -> Result<Mat> {
    let src_dim = backend.ext_space(c_end, a_end).dim();
    let mut cols = Vec::new();
    for k in 0..src_dim {
        let mut coords = vec![0; src_dim];
        coords[k] = 1;
        let cl = ExtClass {
            c: c_end.clone(),
            a: a_end.clone(),
            coords,
        };
        let out = apply(&cl)?;
        cols.push(out.iter().map(|&c| Fp::new(c as i64, p)).collect());
    }
    Ok(Mat::from_columns(&cols, tgt_dim, p))
}

/// im(incoming) = ker(outgoing): the composite vanishes and the ranks add
/// up to the middle dimension.
fn exact_at(incoming: &Mat, outgoing: &Mat) -> bool {
    outgoing.mul(incoming).is_zero() && incoming.rank() + outgoing.rank() == incoming.rows()
}

/// As `exactness_check_exact`, on the derived backend via formal morphisms.
pub fn exactness_check_derived(
    bk: &DerivedBackend,
    conf: &DConflation,
    x: &ObjClass,
) -> Result<bool> {
    let delta = DMor {
        source: conf.c.clone(),
        target: conf.a.shifted(1),
        coords: conf.coords.clone(),
    };
    let p = bk.p();
    // contravariant: C(C,X) → C(B,X) → C(A,X) → E(C,X) → E(B,X)
    let spaces = [
        bk.formal_space(&conf.c, x)?,
        bk.formal_space(&conf.b, x)?,
        bk.formal_space(&conf.a, x)?,
        bk.formal_space(&conf.c, &x.shifted(1))?,
        bk.formal_space(&conf.b, &x.shifted(1))?,
    ];
    let precompose = |arrow: &DMor, src_dim: usize, src: &ObjClass, tgt: &ObjClass,
                      tgt_dim: usize| -> Result<Mat> {
        let mut cols = Vec::new();
        for k in 0..src_dim {
            let mut coords = vec![0; src_dim];
            coords[k] = 1;
            let f = DMor {
                source: src.clone(),
                target: tgt.clone(),
                coords,
            };
            let img = bk.compose(&f, arrow)?;
            cols.push(img.coords.iter().map(|&c| Fp::new(c as i64, p)).collect());
        }
        Ok(Mat::from_columns(&cols, tgt_dim, p))
    };
    let postcompose = |arrow: &DMor, src_dim: usize, src: &ObjClass, tgt: &ObjClass,
                       tgt_dim: usize| -> Result<Mat> {
        let mut cols = Vec::new();
        for k in 0..src_dim {
            let mut coords = vec![0; src_dim];
            coords[k] = 1;
            let f = DMor {
                source: src.clone(),
                target: tgt.clone(),
                coords,
            };
            let img = bk.compose(arrow, &f)?;
            cols.push(img.coords.iter().map(|&c| Fp::new(c as i64, p)).collect());
        }
        Ok(Mat::from_columns(&cols, tgt_dim, p))
    };
    // maps: −∘y, −∘x, then g ↦ g[1]∘δ, then −∘y on E-level
    let m1 = precompose(&conf.y, spaces[0].dim(), &conf.c, x, spaces[1].dim())?;
    let m2 = precompose(&conf.x, spaces[1].dim(), &conf.b, x, spaces[2].dim())?;
    let m3 = {
        let mut cols = Vec::new();
        for k in 0..spaces[2].dim() {
            let mut coords = vec![0; spaces[2].dim()];
            coords[k] = 1;
            let g = DMor {
                source: conf.a.clone(),
                target: x.clone(),
                coords,
            };
            let img = bk.compose(&g.shifted(1), &delta)?;
            cols.push(img.coords.iter().map(|&c| Fp::new(c as i64, p)).collect());
        }
        Mat::from_columns(&cols, spaces[3].dim(), p)
    };
    let m4 = precompose(&conf.y, spaces[3].dim(), &conf.c, &x.shifted(1), spaces[4].dim())?;
    if !exact_at(&m1, &m2) || !exact_at(&m2, &m3) || !exact_at(&m3, &m4) {
        return Ok(false);
    }
    // covariant: C(X,A) → C(X,B) → C(X,C) → E(X,A) → E(X,B)
    let spaces2 = [
        bk.formal_space(x, &conf.a)?,
        bk.formal_space(x, &conf.b)?,
        bk.formal_space(x, &conf.c)?,
        bk.formal_space(x, &conf.a.shifted(1))?,
        bk.formal_space(x, &conf.b.shifted(1))?,
    ];
    let n1 = postcompose(&conf.x, spaces2[0].dim(), x, &conf.a, spaces2[1].dim())?;
    let n2 = postcompose(&conf.y, spaces2[1].dim(), x, &conf.b, spaces2[2].dim())?;
    let n3 = postcompose(&delta, spaces2[2].dim(), x, &conf.c, spaces2[3].dim())?;
    let n4 = postcompose(&conf.x.shifted(1), spaces2[3].dim(), x, &conf.a.shifted(1), spaces2[4].dim())?;
    Ok(exact_at(&n1, &n2) && exact_at(&n2, &n3) && exact_at(&n3, &n4))
}

// -- verify: example fixtures ------------------------------------------------------------

/// The module-category fixture on the quiver 1←2←3.
pub fn verify_example_46(backend: &ExactBackend, sum_bound: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("example-4.6");
    let cat = backend.catalog.clone();
    report.check(
        "catalog has exactly 6 indecomposables",
        cat.len() == 6,
        format!("found {}", cat.len()),
    );
    let s2 = ObjClass::module(cat.id_of_label("S2")?);
    let s3 = ObjClass::module(cat.id_of_label("S3")?);
    let i2 = ObjClass::module(cat.id_of_label("I2")?);
    let x = vec![s2.clone(), s3.clone()];
    report.check(
        "X = {S2, S3} is a simple semibrick",
        is_simple_semibrick(backend, &x, sum_bound)?,
        String::new(),
    );
    let closure = filt_closure(backend, &x, sum_bound)?;
    let expect = Subcat::from_classes(&[s2.clone(), i2.clone(), s3.clone()]);
    report.check(
        "Filt(X) has support {S2, I2, S3}",
        closure.closure == expect,
        format!(
            "support: {:?}",
            closure
                .closure
                .members()
                .map(|m| cat.class_label(&m))
                .collect::<Vec<_>>()
        ),
    );
    let simples = sim_unchecked(backend, &closure.closure)?;
    let mut simple_labels: Vec<String> = simples.iter().map(|m| cat.class_label(m)).collect();
    simple_labels.sort();
    report.check(
        "sim(Filt(X)) = X",
        simple_labels == vec!["S2", "S3"],
        format!("{simple_labels:?}"),
    );
    report.check(
        "Filt(X) is length wide",
        crate::extri::is_length_wide(
            backend,
            &closure.closure,
            crate::extri::AdmissibleMode::Scoped,
            sum_bound,
        )?,
        String::new(),
    );
    // Y = {S2, S3, I2}: l_Y(I2) = 1 and the conflation S2 → I2 → S3 is
    // strictly subadditive
    let y = vec![s2.clone(), s3.clone(), i2.clone()];
    let closure_y = filt_closure(backend, &y, sum_bound)?;
    let l_i2 = closure_y.lengths.get(&i2).copied();
    report.check("l_Y(I2) = 1", l_i2 == Some(1), format!("{l_i2:?}"));
    let nonsplit = backend.realize(&s3, &s2, &[1])?;
    report.check(
        "the conflation S2 → I2 → S3 exists",
        nonsplit.b == i2,
        format!("middle {}", cat.class_label(&nonsplit.b)),
    );
    let l_s2 = closure_y.lengths[&s2];
    let l_s3 = closure_y.lengths[&s3];
    report.check(
        "strict subadditivity 1 < 2",
        l_i2 == Some(1) && l_i2.unwrap() < l_s2 + l_s3,
        format!("{} < {}", l_i2.unwrap_or(99), l_s2 + l_s3),
    );
    Ok(report)
}

/// The derived-window fixture on the quiver 1→2→3.
pub fn verify_example_59(bk: &DerivedBackend) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("example-5.9");
    let cat = bk.exact.catalog.clone();
    let p1 = cat.id_of_label("P1")?;
    // the window top row: the AR-quiver row through P1
    let top_row: Vec<ObjClass> = bk
        .tau_orbit_in_window((p1, 0))
        .into_iter()
        .map(|part| ObjClass::from_parts(vec![part]))
        .collect();
    report.check(
        "window top row found",
        top_row.len() == 12,
        format!("{} members", top_row.len()),
    );
    let (ilo, ihi) = bk.inner_window();
    let inner = bk.window_universe(ilo, ihi);
    let (sms_ok, sms_skips) = is_sms(bk, &top_row, &inner)?;
    report.skipped_window.extend(sms_skips);
    report.check("top row is a simple-minded system on the inner window", sms_ok, String::new());
    report.check(
        "top row is a semibrick",
        is_semibrick(bk, &top_row)?,
        String::new(),
    );

    // S = {P1, S1[-1], S2[-1], S3[-1]}
    let s: Vec<ObjClass> = [
        (p1, 0),
        (cat.id_of_label("S1")?, -1),
        (cat.id_of_label("S2")?, -1),
        (cat.id_of_label("S3")?, -1),
    ]
    .iter()
    .map(|&part| ObjClass::from_parts(vec![part]))
    .collect();
    let full = bk.window_universe(bk.lo, bk.hi);
    let (members, skips) = peel_membership(bk, &s, &full, PEEL_DEPTH_CAP)?;
    report.skipped_window.extend(skips);
    let filt_support = Subcat::from_classes(&members);
    let mut labels: Vec<String> = members.iter().map(|m| cat.class_label(m)).collect();
    labels.sort();
    let mut expected = vec![
        "S3[-1]", "S2[-1]", "S1[-1]", "P1", "P2[-1]", "I2[-1]", "P2", "P1[-1]", "S3",
    ];
    expected.sort();
    report.check(
        "Filt(S) equals the trapezoid membership list",
        labels == expected,
        format!("{labels:?}"),
    );

    // torsion pairs on the inner window
    let out1 = is_torsion_pair_tri(bk, &s, &filt_support, TorsionShape::FiltPerp, &inner)?;
    report.skipped_window.extend(out1.skipped.clone());
    report.check(
        "(Filt(S), S-perp) is a torsion pair on the inner window",
        out1.holds,
        format!("{} witnesses, failures {:?}", out1.witnesses.len(), out1.failures),
    );
    let out2 = is_torsion_pair_tri(bk, &s, &filt_support, TorsionShape::PerpFilt, &inner)?;
    report.skipped_window.extend(out2.skipped.clone());
    report.check(
        "(perp-S, Filt(S)) is a torsion pair on the inner window",
        out2.holds,
        format!("{} witnesses, failures {:?}", out2.witnesses.len(), out2.failures),
    );

    // S^⊥1[1] = S^⊥ on the inner window
    let mut reduction_bad = 0;
    for m in &inner {
        let in_hom_perp = s.iter().all(|sm| {
            bk.hom_dim(sm, m).map(|d| d == 0).unwrap_or(false)
        });
        let m_down = m.shifted(-1);
        let in_ext_perp = s.iter().all(|sm| {
            bk.e_dim(sm, &m_down).map(|d| d == 0).unwrap_or(false)
        });
        if in_hom_perp != in_ext_perp {
            reduction_bad += 1;
        }
    }
    report.check(
        "S-perp1 shifted equals S-perp on the inner window",
        reduction_bad == 0,
        format!("{reduction_bad} mismatches"),
    );
    Ok(report)
}

// -- cross-backend agreement -------------------------------------------------------------

pub fn verify_cross_backend(bk: &DerivedBackend) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("cross-backend");
    let cat = bk.exact.catalog.clone();
    let n = cat.len();
    let mut dim_bad = 0;
    let mut mid_bad = 0;
    let mut classes = 0;
    for c in 0..n {
        for a in 0..n {
            let cc = ObjClass::module(c);
            let aa = ObjClass::module(a);
            let derived_dim = bk.e_space_d(&cc, &aa)?.dim();
            if derived_dim != cat.ext[c][a] {
                dim_bad += 1;
                continue;
            }
            for coords in crate::quiver::CoeffIter::new(bk.p(), derived_dim) {
                classes += 1;
                let d_mid = bk.realize_d(&cc, &aa, &coords)?.b;
                let e_mid = bk.exact.realize(&cc, &aa, &coords)?.b;
                if d_mid != e_mid {
                    mid_bad += 1;
                }
            }
        }
    }
    report.check(
        "E-dimensions agree on all shift-0 pairs",
        dim_bad == 0,
        format!("{} pairs, {dim_bad} mismatches", n * n),
    );
    report.check(
        "realized middles agree class by class",
        mid_bad == 0,
        format!("{classes} classes, {mid_bad} mismatches"),
    );
    Ok(report)
}
